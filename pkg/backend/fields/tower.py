"""
Exact arithmetic in GF(2^m) and in its quadratic extension GF(q^2) = GF(q)[i] / (i^2 + i + k).

Base-field values are galois `FieldArray`s (scalars are 0-d arrays). Extension values are
`ExtElem`s: a pair of base arrays (a, b) standing for a + b*i, so the same code evaluates one
element or a whole vector of them.
"""
import functools
import logging
from dataclasses import dataclass

import galois
import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from sympy import factorint

from core import constants
from core.exceptions import InversionOfZero, NotInMu, PreconditionViolation
from core.validators import parse_tower_line, validate_degree

logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=None)
def _galois_field(m, modulus):
    if m == 1:
        return galois.GF(2)
    return galois.GF(2**m, irreducible_poly=modulus)


def as_ints(values):
    """Integer (bit-vector) representation of a base-field array."""
    return np.asarray(values.view(np.ndarray), dtype=np.int64)


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^m) with an explicit modulus, plus the tower constant k of the quadratic extension."""

    m: int
    modulus: int
    k: int

    def __post_init__(self):
        validate_degree(self.m)
        if self.modulus.bit_length() != self.m + 1:
            raise ValidationError(f"Modulus {self.modulus:#x} does not have degree {self.m}.")
        if not galois.Poly.Int(self.modulus, field=galois.GF2).is_irreducible():
            raise ValidationError(f"Modulus {self.modulus:#x} is reducible over GF(2).")
        if self.k >> self.m:
            raise ValidationError(f"Tower constant {self.k:#x} does not fit in GF(2^{self.m}).")
        if int(base_trace(self, self.GF(self.k))) != 1:
            raise ValidationError(
                f"Tower constant {self.k:#x} has trace 0; i^2 + i + k would be reducible."
            )

    @property
    def GF(self):
        return _galois_field(self.m, self.modulus)

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def order(self) -> int:
        """Size of the extension field, q^2."""
        return 1 << (2 * self.m)

    @property
    def mu_order(self) -> int:
        return self.q + 1

    @property
    def k_elem(self):
        return self.GF(self.k)

    def base(self, value):
        return self.GF(value)

    def __str__(self) -> str:
        return f"GF(2^{self.m}) mod {self.modulus:#x}, k={self.k:#x}"


# --- Tower selection ---


def smallest_trace_one(m, modulus):
    """Smallest element (as an integer) of absolute trace 1; 1 itself when m is odd."""
    GF = _galois_field(m, modulus)
    elements = GF.elements
    traces = _trace(elements, m)
    return int(np.flatnonzero(as_ints(traces) == 1)[0])


def load_tower_overrides(path):
    """Read a tower override file into {m: (modulus, k)}."""
    overrides = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            m, modulus, k = parse_tower_line(line)
            overrides[m] = (modulus, k)
    return overrides


def get_field_spec(m, modulus=None, k=None) -> FieldSpec:
    """
    Build the FieldSpec for degree m.

    Explicit arguments win over the override file named by NIHO_TOWER_FILE, which wins over the
    default modulus table (k defaults to the smallest trace-1 element).
    """
    validate_degree(m)
    tower_file = getattr(settings, "NIHO_TOWER_FILE", None)
    if tower_file and (modulus is None or k is None):
        file_modulus, file_k = load_tower_overrides(tower_file).get(m, (None, None))
        modulus = file_modulus if modulus is None else modulus
        if k is None and modulus == file_modulus:
            k = file_k
    if modulus is None:
        modulus = constants.DEFAULT_MODULI[m]
    if k is None:
        k = smallest_trace_one(m, modulus)
    spec = FieldSpec(m=m, modulus=modulus, k=k)
    logger.debug("Using tower %s", spec)
    return spec


# --- Base field operations ---


def _trace(values, m):
    acc = values.copy()
    power = values
    for _ in range(m - 1):
        power = power * power
        acc = acc + power
    return acc


def base_trace(spec, x):
    """Absolute trace of x over GF(2), as a base-field value (0 or 1)."""
    return _trace(x, spec.m)


def base_inv(spec, x):
    if np.any(as_ints(x) == 0):
        raise InversionOfZero("Cannot invert 0 in the base field.")
    return spec.GF(1) / x


def base_pow(spec, x, exponent):
    if not 0 <= exponent < 2**constants.MAX_EXPONENT_BITS:
        raise PreconditionViolation(f"Exponent {exponent} out of range.")
    if exponent == 0:
        return spec.GF(np.ones_like(as_ints(x)))
    reduced = exponent % (spec.q - 1) or (spec.q - 1)
    return x**reduced


def base_sqrt(spec, x):
    """The unique square root; squaring is a bijection in characteristic 2."""
    return x ** (spec.q // 2)


def base_arith(spec, op, x, y=None):
    """Dispatch one base-field operation by name (add, mul, inv, pow, sqrt)."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return base_inv(spec, x)
    if op == "pow":
        return base_pow(spec, x, y)
    if op == "sqrt":
        return base_sqrt(spec, x)
    raise ValueError(f"Unknown base operation {op!r}")


# --- Extension field ---


class ExtElem:
    """Element (or array of elements) a + b*i of GF(q^2), with i^2 = i + k."""

    __slots__ = ("spec", "a", "b")

    def __init__(self, spec, a, b):
        self.spec = spec
        self.a = a
        self.b = b

    # Constructors

    @classmethod
    def from_ints(cls, spec, a, b=0):
        GF = spec.GF
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        a_arr, b_arr = np.broadcast_arrays(a_arr, b_arr)
        return cls(spec, GF(a_arr.copy()), GF(b_arr.copy()))

    @classmethod
    def from_base(cls, spec, value):
        return cls(spec, value, spec.GF(np.zeros_like(as_ints(value))))

    @classmethod
    def zero(cls, spec, shape=()):
        return cls.from_ints(spec, np.zeros(shape, dtype=np.int64))

    @classmethod
    def one(cls, spec, shape=()):
        return cls.from_ints(spec, np.ones(shape, dtype=np.int64))

    @classmethod
    def gen_i(cls, spec):
        return cls.from_ints(spec, 0, 1)

    @classmethod
    def from_keys(cls, spec, keys):
        keys = np.asarray(keys, dtype=np.int64)
        return cls.from_ints(spec, keys & (spec.q - 1), keys >> spec.m)

    @classmethod
    def all_elements(cls, spec):
        return cls.from_keys(spec, np.arange(spec.order, dtype=np.int64))

    @classmethod
    def random(cls, spec, rng, size=None):
        keys = rng.integers(0, spec.order, size=size, dtype=np.int64)
        return cls.from_keys(spec, keys)

    @classmethod
    def concat(cls, parts):
        spec = parts[0].spec
        a = np.concatenate([as_ints(p.a).reshape(-1) for p in parts])
        b = np.concatenate([as_ints(p.b).reshape(-1) for p in parts])
        return cls(spec, spec.GF(a), spec.GF(b))

    # Shape helpers

    @property
    def shape(self):
        return np.broadcast(self.a, self.b).shape

    @property
    def is_scalar(self) -> bool:
        return self.shape == ()

    def __len__(self):
        return self.shape[0]

    def __getitem__(self, index):
        return ExtElem(self.spec, self.a[index], self.b[index])

    def __iter__(self):
        for index in range(len(self)):
            yield self[index]

    def reshape(self, *shape):
        return ExtElem(self.spec, self.a.reshape(*shape), self.b.reshape(*shape))

    def keys(self):
        """Integer encoding a | b << m, used for ordering and hashing."""
        return as_ints(self.a) | (as_ints(self.b) << self.spec.m)

    def key(self) -> int:
        return int(self.keys())

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, ExtElem):
            return other
        if isinstance(other, int):
            return ExtElem.from_ints(self.spec, other)
        return ExtElem.from_base(self.spec, other)

    def __add__(self, other):
        other = self._coerce(other)
        return ExtElem(self.spec, self.a + other.a, self.b + other.b)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, ExtElem):
            if isinstance(other, int):
                other = self.spec.GF(other)
            return ExtElem(self.spec, self.a * other, self.b * other)
        bd = self.b * other.b
        real = self.a * other.a + bd * self.spec.k_elem
        imag = self.a * other.b + self.b * other.a + bd
        return ExtElem(self.spec, real, imag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return ExtElem.one(self.spec, self.shape)
        reduced = exponent % (self.spec.order - 1) or (self.spec.order - 1)
        result = None
        base = self
        while reduced:
            if reduced & 1:
                result = base if result is None else result * base
            reduced >>= 1
            if reduced:
                base = base * base
        return result

    def frobenius(self):
        """x^q = (a + b) + b*i, since i^q = i + 1."""
        return ExtElem(self.spec, self.a + self.b, self.b)

    def norm(self):
        """x^(q+1) = a^2 + ab + b^2 k, an element of GF(q)."""
        return self.a * self.a + self.a * self.b + self.b * self.b * self.spec.k_elem

    def zero_mask(self):
        return (as_ints(self.a) == 0) & (as_ints(self.b) == 0)

    def is_zero(self) -> bool:
        return bool(np.all(self.zero_mask()))

    def inverse(self):
        norm = self.norm()
        if np.any(as_ints(norm) == 0):
            raise InversionOfZero("Cannot invert 0 in GF(q^2).")
        return self.frobenius() * (self.spec.GF(1) / norm)

    def inverse_or_zero(self):
        """Elementwise inverse, mapping 0 to 0."""
        norm_ints = as_ints(self.norm())
        safe = self.spec.GF(np.where(norm_ints == 0, 1, norm_ints))
        inv = self.frobenius() * (self.spec.GF(1) / safe)
        return where(norm_ints != 0, inv, ExtElem.zero(self.spec, norm_ints.shape))

    def in_base_mask(self):
        return as_ints(self.b) == 0

    def equal_mask(self, other):
        other = self._coerce(other)
        return (as_ints(self.a) == as_ints(other.a)) & (as_ints(self.b) == as_ints(other.b))

    def __eq__(self, other):
        if not isinstance(other, (ExtElem, int)):
            return NotImplemented
        other = self._coerce(other)
        if self.shape != other.shape and not (self.is_scalar or other.is_scalar):
            return False
        return bool(np.all(self.equal_mask(other)))

    def __hash__(self):
        return hash((self.spec, tuple(np.ravel(self.keys()).tolist())))

    def __repr__(self):
        from fields.encoding import format_ext

        if self.is_scalar:
            return f"ExtElem({format_ext(self)})"
        return f"ExtElem(shape={self.shape})"


def frobenius(x):
    return x.frobenius()


def norm(x):
    return x.norm()


def ext_mul(x, y):
    return x * y


def where(mask, x, y):
    """Elementwise select between two extension arrays."""
    GF = x.spec.GF
    a = np.where(mask, as_ints(x.a), as_ints(y.a))
    b = np.where(mask, as_ints(x.b), as_ints(y.b))
    return ExtElem(x.spec, GF(a), GF(b))


def sort_elements(x):
    """Sort a vector of extension elements by their integer key."""
    order = np.argsort(x.keys(), kind="stable")
    return x[order]


# --- The subgroup mu_{q+1} ---


def in_mu(x) -> bool:
    return bool(np.all(as_ints(x.norm()) == 1))


def mu_mask(x):
    return as_ints(x.norm()) == 1


def multiplicative_order_divides(x, n) -> bool:
    return (x**n) == 1


@functools.lru_cache(maxsize=None)
def mu_generator(spec) -> ExtElem:
    """w^(q-1) for the first primitive element w of GF(q^2) in key order."""
    group_order = spec.order - 1
    cofactors = [group_order // p for p in factorint(group_order)]
    for key in range(2, spec.order):
        w = ExtElem.from_keys(spec, key)
        if all(w**c != 1 for c in cofactors):
            g = w ** (spec.q - 1)
            logger.debug("Primitive element %r gives mu generator %r", w, g)
            return g
    raise PreconditionViolation(f"No primitive element found in GF(2^{2 * spec.m}).")


@functools.lru_cache(maxsize=None)
def mu_elements(spec) -> ExtElem:
    """The q+1 powers g^0, ..., g^q of the mu generator, as a vector."""
    g = mu_generator(spec)
    powers = ExtElem.one(spec, (1,))
    step = g
    while len(powers) < spec.mu_order:
        powers = ExtElem.concat([powers, powers * step])
        step = step * step
    return powers[: spec.mu_order]


def is_cube_in_mu(a) -> bool:
    if not in_mu(a):
        raise NotInMu(f"{a!r} is not in mu_(q+1).")
    spec = a.spec
    if spec.mu_order % 3:
        return True
    return (a ** (spec.mu_order // 3)) == 1


def _base_cube_roots_of_unity(spec):
    xs = spec.GF.elements
    return xs[as_ints(xs * xs * xs) == 1]


def cube_roots_in_mu(a):
    """
    Every x in GF(q^2) with x^3 = a, for a in mu_(q+1), sorted by key.

    For m odd all roots lie in mu_(q+1). For m even exactly one root lies in mu_(q+1); the other
    two are its multiples by the nontrivial cube roots of unity of GF(q).
    """
    if not in_mu(a):
        raise NotInMu(f"{a!r} is not in mu_(q+1).")
    spec = a.spec
    mu = mu_elements(spec)
    roots = mu[(mu * mu * mu).equal_mask(a)]
    if spec.m % 2 == 0 and len(roots):
        units = _base_cube_roots_of_unity(spec)
        roots = ExtElem.concat([roots * unit for unit in units])
    return list(sort_elements(roots)) if len(roots) else []


def solve_cubic_trinomial(spec, c):
    """All roots of x^3 + x + c in GF(q), by exhaustive evaluation, in integer order."""
    xs = spec.GF.elements
    values = xs * xs * xs + xs + c
    return [xs[j] for j in np.flatnonzero(as_ints(values) == 0)]


def has_trinomial_root(spec, c) -> bool:
    xs = spec.GF.elements
    return bool(np.any(as_ints(xs * xs * xs + xs + c) == 0))
