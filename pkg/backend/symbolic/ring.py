"""
The polynomial ring GF(2)[x, y, C, D, E, F, i, j, ma, k, a, b, c, d, e, f, g, t4, t1, aq, bq,
aq2, bq2].

Elements are sympy PolyElements in lex order with the variables ranked as listed, so the leading
monomial of a polynomial is simply the largest exponent tuple.
"""
from sympy.polys.domains import GF
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

from core.exceptions import ScriptSyntaxError, UndefinedName

VARIABLES = (
    "x", "y", "C", "D", "E", "F", "i", "j", "ma", "k", "a", "b",
    "c", "d", "e", "f", "g", "t4", "t1", "aq", "bq", "aq2", "bq2",
)  # fmt: skip

RING, *GENERATORS = ring(",".join(VARIABLES), GF(2), lex)
INDEX = {name: position for position, name in enumerate(VARIABLES)}


def var_index(name: str) -> int:
    try:
        return INDEX[name]
    except KeyError:
        raise UndefinedName(f"{name!r} is not a variable of the ring.") from None


def var(name: str):
    return GENERATORS[var_index(name)]


def one():
    return RING.one


def zero():
    return RING.zero


def from_monomials(monomials):
    """The sum of the given exponent tuples; repeated monomials cancel in pairs."""
    support = set()
    for monom in monomials:
        support ^= {monom}
    return RING.from_dict({monom: 1 for monom in support})


def monomial_of(p):
    """The exponent tuple of a single-term polynomial."""
    terms = list(p.keys())
    if len(terms) != 1:
        raise ScriptSyntaxError(f"{format_poly(p)} is not a monomial.")
    return terms[0]


def monomial_divides(m, t) -> bool:
    return all(a <= b for a, b in zip(m, t))


def monomial_quotient(t, m):
    return tuple(b - a for a, b in zip(m, t))


def monomial_product(m, t):
    return tuple(a + b for a, b in zip(m, t))


def degree_in(p, name: str) -> int:
    """Degree of p in one variable; -1 for the zero polynomial."""
    position = var_index(name)
    return max((monom[position] for monom in p.keys()), default=-1)


def coefficients_in(p, name: str):
    """[c_0, ..., c_n] with p = sum c_e * name^e and every c_e free of the variable."""
    position = var_index(name)
    buckets = [set() for _ in range(degree_in(p, name) + 1)]
    for monom in p.keys():
        power = monom[position]
        rest = monom[:position] + (0,) + monom[position + 1 :]
        buckets[power] ^= {rest}
    return [from_monomials(bucket) for bucket in buckets]


def variables_of(p):
    used = set()
    for monom in p.keys():
        used.update(VARIABLES[n] for n, power in enumerate(monom) if power)
    return used


def leading_monomial(p):
    """Largest monomial in lex order, or None for the zero polynomial."""
    return max(p.keys(), default=None)


def canonical_key(p):
    """Monomials in graded lex order, highest first; equal polynomials get equal keys."""
    return tuple(sorted(p.keys(), key=lambda monom: (sum(monom), monom), reverse=True))


def format_monomial(monom) -> str:
    factors = [
        f"{VARIABLES[n]}^{power}" if power > 1 else VARIABLES[n]
        for n, power in enumerate(monom)
        if power
    ]
    return "*".join(factors) if factors else "1"


def format_poly(p) -> str:
    """Text in graded lex order, readable back by the script parser."""
    if not p:
        return "0"
    return " + ".join(format_monomial(monom) for monom in canonical_key(p))
