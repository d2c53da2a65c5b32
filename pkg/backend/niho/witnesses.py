"""
Constructions of coefficient triples in each regime of the theta invariants.

The theta4 = 0 searches run vectorized over every pair (a1, a3) for one fixed a2, so they are
meant for small fields (q^4 bounded by NIHO_EXHAUSTIVE_LIMIT).
"""
import logging

import numpy as np
from django.conf import settings

from core.exceptions import FieldTooLarge, PreconditionViolation
from fields.tower import ExtElem, as_ints, is_cube_in_mu, mu_elements
from niho.conditions import CONDITION2, classify, theta2_power, thetas
from niho.polynomial import CoefficientTriple

logger = logging.getLogger(__name__)

ROOTFREE = "rootfree"
CONIC = "conic"
THETA1_ZERO = "theta1_zero"
SINGULAR = "singular"
REGIMES = (ROOTFREE, CONIC, THETA1_ZERO, SINGULAR)


def noncube_mu_elements(spec):
    return [a for a in mu_elements(spec) if not is_cube_in_mu(a)]


def condition1_triples(spec):
    """
    Every triple satisfying Condition 1: a3 a non-cube of mu_(q+1), a2 outside mu_(q+1), and
    a1 = a3^q a2 (which is exactly theta2 = 0).

    Empty when 3 does not divide q + 1.
    """
    a3_values = noncube_mu_elements(spec)
    if not a3_values:
        return []
    everything = ExtElem.all_elements(spec)
    a2_values = everything[as_ints(everything.norm()) != 1]
    triples = []
    for a3 in a3_values:
        a1_values = a3.frobenius() * a2_values
        triples.extend(
            CoefficientTriple(a1_values[j], a2_values[j], a3) for j in range(len(a2_values))
        )
    return triples


def theta2_zero_triple(spec, a2, a3):
    """The unique a1 making theta2 = 0 for the given a2, a3."""
    return CoefficientTriple(a3.frobenius() * a2, a2, a3)


def a2_zero_family(spec):
    """
    Triples (a1, 0, a1^(2-q)) for a1 != 0.

    Here theta2 = a1^q, theta3 = theta2^(2q-1), theta4 = 0 and theta1 = 1, so Condition 2 comes
    down to x^3 + x + 1/a1^(q+1) having no root in GF(q).
    """
    exponent = (2 - spec.q) % (spec.order - 1)
    a1_values = ExtElem.all_elements(spec)[1:]
    a3_values = a1_values**exponent
    zero = ExtElem.zero(spec)
    return [CoefficientTriple(a1_values[j], zero, a3_values[j]) for j in range(len(a1_values))]


def _trinomial_image(spec):
    xs = spec.GF.elements
    return np.unique(as_ints(xs * xs * xs + xs))


def theta4_zero_triples(spec, a2, regime, limit=None):
    """
    Triples (a1, a2, a3) with theta2 != 0 and theta4 = 0, filtered by regime:

    - rootfree: theta1 != 0, theta3 = theta2^(2q-1), x^3 + x + c has no root (Condition 2)
    - conic: theta1 != 0, theta3 = theta2^(2q-1), x^3 + x + c has a root
    - theta1_zero: theta1 = 0, theta3 = theta2^(2q-1)
    - singular: theta1 != 0, theta3 != theta2^(2q-1)
    """
    if regime not in REGIMES:
        raise PreconditionViolation(f"Unknown regime {regime!r}.")
    if spec.order**2 > settings.NIHO_EXHAUSTIVE_LIMIT:
        raise FieldTooLarge(f"Searching q^4 = {spec.order ** 2} pairs exceeds the limit.")
    keys = np.arange(spec.order, dtype=np.int64)
    a1 = ExtElem.from_keys(spec, np.repeat(keys, spec.order))
    a3 = ExtElem.from_keys(spec, np.tile(keys, spec.order))
    tv = thetas(CoefficientTriple(a1, a2, a3))

    mask = (as_ints(tv.theta4) == 0) & ~tv.theta2.zero_mask()
    on_power = tv.theta3.equal_mask(theta2_power(tv.theta2))
    theta1_zero = as_ints(tv.theta1) == 0
    if regime == THETA1_ZERO:
        mask &= on_power & theta1_zero
    elif regime == SINGULAR:
        mask &= ~on_power & ~theta1_zero
    else:
        mask &= on_power & ~theta1_zero
        norm = as_ints(tv.theta2.norm())
        safe = spec.GF(np.where(norm == 0, 1, norm))
        c = as_ints(tv.theta1 * tv.theta1 / safe)
        solvable = np.isin(c, _trinomial_image(spec))
        mask &= ~solvable if regime == ROOTFREE else solvable

    hits = np.flatnonzero(mask)
    if limit is not None:
        hits = hits[:limit]
    logger.debug("Found %d %s triples for a2=%r", len(hits), regime, a2)
    return [CoefficientTriple(a1[j], a2, a3[j]) for j in hits]


def condition2_triples(spec, count, rng):
    """
    At least `count` Condition 2 triples when the field has that many: the a2 = 0 family first,
    then constrained searches for random nonzero a2.
    """
    triples = [t for t in a2_zero_family(spec) if classify(t).branch == CONDITION2]
    attempts = 0
    while len(triples) < count and attempts < 16:
        a2 = ExtElem.from_keys(spec, int(rng.integers(1, spec.order)))
        triples.extend(theta4_zero_triples(spec, a2, ROOTFREE, limit=count - len(triples)))
        attempts += 1
    return triples[:count]


def regime_instance(spec, regime, rng=None):
    """One triple of the given regime, trying a2 over mu_(q+1) first for theta1 = 0."""
    if regime == THETA1_ZERO:
        candidates = list(mu_elements(spec))
    else:
        candidates = [ExtElem.zero(spec)] + list(ExtElem.all_elements(spec)[1:])
    if rng is not None:
        rng.shuffle(candidates)
    for a2 in candidates:
        found = theta4_zero_triples(spec, a2, regime, limit=1)
        if found:
            return found[0]
    raise PreconditionViolation(f"No {regime} instance over {spec}.")


def cube_mu_a3_values(spec):
    """The cubes of mu_(q+1) (all of it when 3 does not divide q+1)."""
    return [a for a in mu_elements(spec) if is_cube_in_mu(a)]
