"""
Computer-algebra primitives over GF(2)[23 variables]: powers, rewriting by a monomial rule,
coefficient extraction, Sylvester resultants, exact divisibility and evaluation at a fraction.
"""
import logging
from dataclasses import dataclass

import galois
import numpy as np
from sympy.polys.polyerrors import ExactQuotientFailed

from core.constants import MAX_SYMBOLIC_POWER, SPECIALIZATION_FIELD_DEGREE
from core.exceptions import (
    BothConstantInVar,
    DivisorZero,
    NonTerminatingRule,
    NotDivisible,
    PreconditionViolation,
)
from symbolic.ring import (
    RING,
    VARIABLES,
    canonical_key,
    coefficients_in,
    degree_in,
    format_monomial,
    from_monomials,
    monomial_divides,
    monomial_product,
    monomial_quotient,
    var_index,
)

logger = logging.getLogger(__name__)


def _pow(p, exponent: int):
    """p**exponent with p**0 = 1 for every p, the zero polynomial included."""
    return RING.one if exponent == 0 else p**exponent


def power(p, exponent: int):
    if exponent < 0 or exponent > MAX_SYMBOLIC_POWER:
        raise PreconditionViolation(f"Exponent {exponent} is outside 0..{MAX_SYMBOLIC_POWER}.")
    return _pow(p, exponent)


def poly_set(polys):
    """MAGMA-style set: zero dropped, duplicates collapsed, canonical order."""
    unique = {}
    for p in polys:
        if p:
            unique.setdefault(canonical_key(p), p)
    return tuple(unique[key] for key in sorted(unique, key=lambda key: (len(key), key)))


# --- Substitution ---


def check_rule(monom, replacement):
    """The rule monom -> replacement must lower the degree of some variable of monom."""
    for position, exponent in enumerate(monom):
        if not exponent:
            continue
        highest = max((term[position] for term in replacement.keys()), default=-1)
        if highest < exponent:
            return
    raise NonTerminatingRule(
        f"{format_monomial(monom)} -> ... does not lower the degree of any variable."
    )


def substitution(p, monom, replacement):
    """
    Rewrite every term divisible by monom as (term / monom) * replacement, pass after pass,
    until no term is divisible.
    """
    check_rule(monom, replacement)
    current = p
    while True:
        support = set()
        rewritten = False
        for term in current.keys():
            if monomial_divides(monom, term):
                rewritten = True
                quotient = monomial_quotient(term, monom)
                for piece in replacement.keys():
                    support ^= {monomial_product(quotient, piece)}
            else:
                support ^= {term}
        if not rewritten:
            return current
        current = from_monomials(support)


# --- Coefficients ---


def find_coefficients2(p, var1: str, var2: str):
    """Distinct nonzero coefficients of p as a polynomial in var1, var2 over the other variables."""
    first, second = var_index(var1), var_index(var2)
    cells = {}
    for monom in p.keys():
        cell = (monom[first], monom[second])
        rest = list(monom)
        rest[first] = rest[second] = 0
        cells.setdefault(cell, set()).symmetric_difference_update({tuple(rest)})
    return poly_set(from_monomials(support) for support in cells.values())


# --- Resultants ---


def sylvester_matrix(p, q, name: str):
    p_coeffs = coefficients_in(p, name)[::-1]
    q_coeffs = coefficients_in(q, name)[::-1]
    n, m = len(p_coeffs) - 1, len(q_coeffs) - 1
    size = n + m
    rows = []
    for shift in range(m):
        row = [RING.zero] * size
        row[shift : shift + n + 1] = p_coeffs
        rows.append(row)
    for shift in range(n):
        row = [RING.zero] * size
        row[shift : shift + m + 1] = q_coeffs
        rows.append(row)
    return rows


def bareiss_determinant(matrix):
    """Fraction-free elimination; every division is exact. Row swaps cost no sign in char 2."""
    rows = [list(row) for row in matrix]
    size = len(rows)
    if size == 0:
        return RING.one
    previous = RING.one
    for k in range(size - 1):
        if not rows[k][k]:
            pivot = next((r for r in range(k + 1, size) if rows[r][k]), None)
            if pivot is None:
                return RING.zero
            rows[k], rows[pivot] = rows[pivot], rows[k]
        for r in range(k + 1, size):
            for c in range(k + 1, size):
                rows[r][c] = (rows[r][c] * rows[k][k] + rows[r][k] * rows[k][c]).exquo(previous)
        previous = rows[k][k]
    return rows[size - 1][size - 1]


def _linear_resultant(p, q, name):
    """Res(p, q0 + q1 v) = sum p_e q0^e q1^(n-e) for q linear in v."""
    p_coeffs = coefficients_in(p, name)
    q0, q1 = coefficients_in(q, name)
    n = len(p_coeffs) - 1
    if not q0:
        return p_coeffs[0] * _pow(q1, n)
    result = RING.zero
    for exponent, coeff in enumerate(p_coeffs):
        if coeff:
            result += coeff * _pow(q0, exponent) * _pow(q1, n - exponent)
    return result


def resultant(p, q, name: str):
    """
    Determinant of the Sylvester matrix of p and q in the variable `name`.

    If only one side involves the variable, Res(p, q) = q^deg(p) (or p^deg(q)).
    """
    n, m = degree_in(p, name), degree_in(q, name)
    if n <= 0 and m <= 0:
        raise BothConstantInVar(f"Neither polynomial involves {name}.")
    if n < 0 or m < 0:
        return RING.zero
    if m == 0:
        return q**n
    if n == 0:
        return p**m
    if m == 1:
        return _linear_resultant(p, q, name)
    if n == 1:
        return _linear_resultant(q, p, name)
    return bareiss_determinant(sylvester_matrix(p, q, name))


# --- Division ---


def divides(f, g) -> bool:
    """Whether g = f * h for some polynomial h: the remainder of g under lex division by f is 0."""
    if not f:
        raise DivisorZero("Divisibility by the zero polynomial.")
    return not g.rem(f)


def exact_quotient(g, f):
    if not f:
        raise DivisorZero("Division by the zero polynomial.")
    try:
        return g.exquo(f)
    except ExactQuotientFailed:
        raise NotDivisible("The division is not exact.") from None


def evaluate_fraction(p, name: str, numerator, denominator, multiplier=None):
    """
    multiplier * p(name = numerator / denominator), which must be a polynomial.

    Without a multiplier the result is denominator^d * p(numerator / denominator), d = deg_name p.
    """
    coeffs = coefficients_in(p, name)
    degree = len(coeffs) - 1
    cleared = RING.zero
    for exponent, coeff in enumerate(coeffs):
        if coeff:
            cleared += coeff * _pow(numerator, exponent) * _pow(denominator, degree - exponent)
    if multiplier is None:
        return cleared
    if degree <= 0:
        return multiplier * cleared
    return exact_quotient(multiplier * cleared, _pow(denominator, degree))


# --- Random specialization of resultants ---


@dataclass
class ResultantCall:
    p: object
    q: object
    name: str
    result: object


@dataclass
class SpecializationSummary:
    performed: int = 0
    skipped: int = 0
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0


def specialization_field():
    return galois.GF(2**SPECIALIZATION_FIELD_DEGREE)


def _specialize(p, values, name, field):
    """p with every variable but `name` replaced by values, as a galois.Poly in `name`."""
    position = var_index(name)
    if not p:
        return galois.Poly.Zero(field)
    exponents = np.array(list(p.keys()), dtype=np.int64)
    powers = np.delete(exponents, position, axis=1)
    others = field(np.delete(values.view(np.ndarray), position))
    terms = np.multiply.reduce(others**powers, axis=1)
    degrees = exponents[:, position]
    coeffs = field.Zeros(int(degrees.max()) + 1)
    for degree in np.unique(degrees):
        coeffs[degree] = np.add.reduce(terms[degrees == degree])
    return galois.Poly(coeffs[::-1], field=field)


def _degree_drops(specialized, p, name) -> bool:
    return specialized.degree != degree_in(p, name) or specialized.coeffs[0] == 0


def _univariate_resultant(p, q, field):
    n, m = p.degree, q.degree
    if m == 0:
        return q.coeffs[0] ** n
    if n == 0:
        return p.coeffs[0] ** m
    size = n + m
    matrix = field.Zeros((size, size))
    for shift in range(m):
        matrix[shift, shift : shift + n + 1] = p.coeffs
    for shift in range(n):
        matrix[m + shift, shift : shift + m + 1] = q.coeffs
    return np.linalg.det(matrix)


def check_specializations(calls, checks: int, rng) -> SpecializationSummary:
    """
    Evaluate recorded resultant calls at random points of GF(2^8) and compare with the resultant
    of the evaluated inputs. Points where a leading coefficient vanishes are skipped.
    """
    summary = SpecializationSummary()
    if not calls or checks <= 0:
        return summary
    field = specialization_field()
    for index in rng.integers(len(calls), size=checks):
        call = calls[int(index)]
        values = field.Random(len(VARIABLES), seed=rng)
        p = _specialize(call.p, values, call.name, field)
        q = _specialize(call.q, values, call.name, field)
        if _degree_drops(p, call.p, call.name) or _degree_drops(q, call.q, call.name):
            summary.skipped += 1
            continue
        expected = _specialize(call.result, values, call.name, field).coeffs[0]
        summary.performed += 1
        if _univariate_resultant(p, q, field) != expected:
            summary.failures += 1
            logger.warning("Resultant in %s failed a specialization check", call.name)
    return summary
