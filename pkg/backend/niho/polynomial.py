"""
The quadrinomial f(x) = x + a1 x^d1 + a2 x^d2 + a3 x^d3 with Niho exponents d_i = s_i (q - 1) + 1,
(s1, s2, s3) = (1/4, 1, 3/4) mod q + 1, and its reduction p(x) to the subgroup mu_(q+1).
"""
import functools
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from core.exceptions import DivisionByZero, FieldTooLarge, IdentityViolation, NotInMu
from fields.encoding import format_ext, parse_ext
from fields.tower import ExtElem, mu_elements, mu_mask

logger = logging.getLogger(__name__)

POLE = None


@dataclass(frozen=True)
class CoefficientTriple:
    a1: ExtElem
    a2: ExtElem
    a3: ExtElem

    @property
    def spec(self):
        return self.a1.spec

    @classmethod
    def from_text(cls, spec, a1, a2, a3):
        return cls(parse_ext(spec, a1), parse_ext(spec, a2), parse_ext(spec, a3))

    @classmethod
    def from_keys(cls, spec, k1, k2, k3):
        return cls(*(ExtElem.from_keys(spec, key) for key in (k1, k2, k3)))

    @classmethod
    def random(cls, spec, rng):
        keys = rng.integers(0, spec.order, size=3, dtype=np.int64)
        return cls.from_keys(spec, *keys)

    @classmethod
    def zero(cls, spec):
        return cls(*(ExtElem.zero(spec) for _ in range(3)))

    def is_degenerate(self) -> bool:
        return self.a1.is_zero() and self.a2.is_zero() and self.a3.is_zero()

    def as_text(self):
        return {"a1": format_ext(self.a1), "a2": format_ext(self.a2), "a3": format_ext(self.a3)}

    def __str__(self):
        text = self.as_text()
        return f"(a1={text['a1']}, a2={text['a2']}, a3={text['a3']})"


@dataclass(frozen=True)
class NihoExponents:
    s1: int
    s2: int
    s3: int
    d1: int
    d2: int
    d3: int


def exponents(spec) -> NihoExponents:
    n = spec.q + 1
    s1 = pow(4, -1, n)
    s2 = 1
    s3 = (3 * s1) % n
    modulus = spec.order - 1
    d1, d2, d3 = ((s * (spec.q - 1) + 1) % modulus for s in (s1, s2, s3))
    return NihoExponents(s1=s1, s2=s2, s3=s3, d1=d1, d2=d2, d3=d3)


def eval_f(t: CoefficientTriple, x: ExtElem) -> ExtElem:
    e = exponents(t.spec)
    return x + t.a1 * x**e.d1 + t.a2 * x**e.d2 + t.a3 * x**e.d3


@functools.lru_cache(maxsize=2)
def _power_table(spec):
    """x^d1, x^d2, x^d3 over the whole of GF(q^2); independent of the coefficients."""
    xs = ExtElem.all_elements(spec)
    e = exponents(spec)
    return xs, xs**e.d1, xs**e.d2, xs**e.d3


def is_pp_exhaustive(t: CoefficientTriple) -> bool:
    spec = t.spec
    limit = settings.NIHO_EXHAUSTIVE_LIMIT
    if spec.order > limit:
        raise FieldTooLarge(f"q^2 = {spec.order} exceeds the exhaustive limit {limit}.")
    xs, p1, p2, p3 = _power_table(spec)
    values = xs + t.a1 * p1 + t.a2 * p2 + t.a3 * p3
    hit = np.zeros(spec.order, dtype=bool)
    hit[values.keys()] = True
    return bool(hit.all())


def p_parts(t: CoefficientTriple, x: ExtElem):
    """Numerator and denominator of p at x."""
    a1q, a2q, a3q = t.a1.frobenius(), t.a2.frobenius(), t.a3.frobenius()
    x2 = x * x
    x3 = x2 * x
    x4 = x2 * x2
    numerator = x4 + a1q * x3 + a3q * x + a2q
    denominator = t.a2 * x4 + t.a3 * x3 + t.a1 * x + 1
    return numerator, denominator


def p_values(t: CoefficientTriple, x: ExtElem):
    """Vectorized p over a vector of mu elements; returns (values, pole_mask)."""
    numerator, denominator = p_parts(t, x)
    poles = denominator.zero_mask()
    values = numerator * denominator.inverse_or_zero()
    if settings.DEBUG and not np.all(mu_mask(values) | poles):
        raise IdentityViolation(f"p maps mu_(q+1) outside mu_(q+1) for {t}.")
    return values, poles


def eval_p(t: CoefficientTriple, x: ExtElem):
    """p(x) for x in mu_(q+1), or POLE when the denominator vanishes."""
    if not np.all(mu_mask(x)):
        raise NotInMu(f"{x!r} is not in mu_(q+1).")
    values, poles = p_values(t, x)
    if x.is_scalar:
        return POLE if bool(poles) else values
    return values, poles


def is_pp_via_mu(t: CoefficientTriple) -> bool:
    mu = mu_elements(t.spec)
    values, poles = p_values(t, mu)
    if poles.any():
        return False
    return len(np.unique(values.keys())) == t.spec.mu_order


def excluded_value(t: CoefficientTriple):
    """
    (a1 + a2 + a3 + 1)^(q-1), the value p takes at 1 = phi(infinity).

    None when a1 + a2 + a3 + 1 = 0, where the value is not defined.
    """
    s = t.a1 + t.a2 + t.a3 + 1
    if s.is_zero():
        return None
    return s.frobenius() / s


# --- The change of coordinates between GF(q) and mu_(q+1) ---


def phi(spec, x) -> ExtElem:
    """(x + i) / (x + i + 1) for x in GF(q); x = None stands for infinity, which maps to 1."""
    if x is None:
        return ExtElem.one(spec)
    if isinstance(x, int):
        x = spec.GF(x)
    z = ExtElem.from_base(spec, x) + ExtElem.gen_i(spec)
    return z / (z + 1)


def psi_component(x: ExtElem) -> ExtElem:
    """Inverse of phi: (x (i + 1) + i) / (x + 1)."""
    if np.any(x.equal_mask(1)):
        raise DivisionByZero("psi is undefined at 1 (the image of infinity).")
    i = ExtElem.gen_i(x.spec)
    return (x * (i + 1) + i) / (x + 1)


def phi_all(spec) -> ExtElem:
    """phi over the whole of GF(q), in integer order."""
    return phi(spec, spec.GF.elements)


def poles_on_mu(t: CoefficientTriple):
    """The elements of mu_(q+1) where the denominator of p vanishes."""
    mu = mu_elements(t.spec)
    _, poles = p_values(t, mu)
    return mu[poles]


def collision_pairs(t: CoefficientTriple):
    """Pairs (x, y), x != y in mu_(q+1) with p(x) = p(y), both non-poles; sorted by key."""
    mu = mu_elements(t.spec)
    values, poles = p_values(t, mu)
    keys = np.where(poles, -1, values.keys())
    order = np.argsort(keys, kind="stable")
    pairs = []
    for left, right in zip(order[:-1], order[1:]):
        if keys[left] >= 0 and keys[left] == keys[right]:
            pairs.append((mu[left], mu[right]))
    return pairs
