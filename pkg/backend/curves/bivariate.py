"""
Dense bivariate polynomials over GF(q^2).

Coefficients are kept as two integer grids (the GF(q) parts a and b of a + b*i), so addition is a
plain XOR of the grids and only multiplication goes through the field.
"""
import logging

import numpy as np

from core.constants import BIVARIATE_MAX_DEGREE
from core.exceptions import NotDivisible, PolynomialOverflow
from fields.encoding import format_ext
from fields.tower import ExtElem, as_ints

logger = logging.getLogger(__name__)

SIZE = BIVARIATE_MAX_DEGREE + 1


def _ext(spec, value) -> ExtElem:
    if isinstance(value, ExtElem):
        return value
    if isinstance(value, (int, np.integer)):
        return ExtElem.from_ints(spec, int(value))
    return ExtElem.from_base(spec, value)


def _fit(a, b):
    """Trim a padded grid back to SIZE x SIZE, refusing to drop nonzero terms."""
    if np.any(a[SIZE:, :]) or np.any(a[:, SIZE:]) or np.any(b[SIZE:, :]) or np.any(b[:, SIZE:]):
        raise PolynomialOverflow(f"Degree exceeds {BIVARIATE_MAX_DEGREE} in X or Y.")
    return a[:SIZE, :SIZE].copy(), b[:SIZE, :SIZE].copy()


class BivarPoly:
    """Sum of c[i, j] X^i Y^j for 0 <= i, j <= BIVARIATE_MAX_DEGREE. Immutable."""

    __slots__ = ("spec", "a", "b")

    def __init__(self, spec, a, b):
        self.spec = spec
        self.a = np.asarray(a, dtype=np.int64)
        self.b = np.asarray(b, dtype=np.int64)
        self.a.setflags(write=False)
        self.b.setflags(write=False)

    @classmethod
    def zero(cls, spec):
        return cls(spec, np.zeros((SIZE, SIZE)), np.zeros((SIZE, SIZE)))

    @classmethod
    def from_coeffs(cls, spec, coeffs: ExtElem):
        a = np.zeros((SIZE, SIZE), dtype=np.int64)
        b = np.zeros((SIZE, SIZE), dtype=np.int64)
        rows, cols = coeffs.shape
        if rows > SIZE or cols > SIZE:
            raise PolynomialOverflow(f"A {rows}x{cols} grid does not fit.")
        a[:rows, :cols] = as_ints(coeffs.a)
        b[:rows, :cols] = as_ints(coeffs.b)
        return cls(spec, a, b)

    @classmethod
    def from_terms(cls, spec, terms):
        """Build from {(i, j): coefficient}; repeated monomials are summed."""
        a = np.zeros((SIZE, SIZE), dtype=np.int64)
        b = np.zeros((SIZE, SIZE), dtype=np.int64)
        for (i, j), value in terms.items():
            if i > BIVARIATE_MAX_DEGREE or j > BIVARIATE_MAX_DEGREE:
                raise PolynomialOverflow(f"Monomial X^{i} Y^{j} does not fit.")
            c = _ext(spec, value)
            a[i, j] ^= int(as_ints(c.a))
            b[i, j] ^= int(as_ints(c.b))
        return cls(spec, a, b)

    @classmethod
    def constant(cls, spec, value):
        return cls.from_terms(spec, {(0, 0): value})

    @classmethod
    def var_x(cls, spec):
        return cls.from_terms(spec, {(1, 0): 1})

    @classmethod
    def var_y(cls, spec):
        return cls.from_terms(spec, {(0, 1): 1})

    @classmethod
    def linear(cls, spec, cx, cy, c0):
        """cx X + cy Y + c0."""
        return cls.from_terms(spec, {(1, 0): cx, (0, 1): cy, (0, 0): c0})

    # Inspection

    @property
    def coeffs(self) -> ExtElem:
        return ExtElem(self.spec, self.spec.GF(self.a), self.spec.GF(self.b))

    def coefficient(self, i, j) -> ExtElem:
        if i > BIVARIATE_MAX_DEGREE or j > BIVARIATE_MAX_DEGREE:
            return ExtElem.zero(self.spec)
        return ExtElem.from_ints(self.spec, self.a[i, j], self.b[i, j])

    def support(self):
        """Nonzero monomials (i, j), in lexicographic order."""
        rows, cols = np.nonzero(self.a | self.b)
        return list(zip(rows.tolist(), cols.tolist()))

    def terms(self):
        return {(i, j): self.coefficient(i, j) for i, j in self.support()}

    def is_zero(self) -> bool:
        return not np.any(self.a | self.b)

    @property
    def degree_x(self) -> int:
        rows = np.nonzero(np.any(self.a | self.b, axis=1))[0]
        return int(rows[-1]) if len(rows) else -1

    @property
    def degree_y(self) -> int:
        cols = np.nonzero(np.any(self.a | self.b, axis=0))[0]
        return int(cols[-1]) if len(cols) else -1

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.support()), default=-1)

    # Arithmetic

    def _coerce(self, other):
        if isinstance(other, BivarPoly):
            return other
        return BivarPoly.constant(self.spec, other)

    def __add__(self, other):
        other = self._coerce(other)
        return BivarPoly(self.spec, self.a ^ other.a, self.b ^ other.b)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def scale(self, value):
        c = _ext(self.spec, value)
        product = self.coeffs * c
        return BivarPoly(self.spec, as_ints(product.a), as_ints(product.b))

    def __mul__(self, other):
        if not isinstance(other, BivarPoly):
            return self.scale(other)
        a = np.zeros((2 * SIZE, 2 * SIZE), dtype=np.int64)
        b = np.zeros((2 * SIZE, 2 * SIZE), dtype=np.int64)
        grid = other.coeffs
        for i, j in self.support():
            product = grid * self.coefficient(i, j)
            a[i : i + SIZE, j : j + SIZE] ^= as_ints(product.a)
            b[i : i + SIZE, j : j + SIZE] ^= as_ints(product.b)
        return BivarPoly(self.spec, *_fit(a, b))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        result = BivarPoly.constant(self.spec, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return bool(np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b))

    def __hash__(self):
        return hash((self.spec, self.a.tobytes(), self.b.tobytes()))

    # Transformations

    def swap(self):
        """P(Y, X)."""
        return BivarPoly(self.spec, self.a.T, self.b.T)

    def is_symmetric(self) -> bool:
        return self == self.swap()

    def frobenius(self):
        """Raise every coefficient to the q-th power."""
        conjugate = self.coeffs.frobenius()
        return BivarPoly(self.spec, as_ints(conjugate.a), as_ints(conjugate.b))

    def partial_x(self):
        """Formal derivative in X; in characteristic 2 only odd powers of X survive."""
        a = np.zeros_like(self.a)
        b = np.zeros_like(self.b)
        a[:-1:2, :] = self.a[1::2, :]
        b[:-1:2, :] = self.b[1::2, :]
        return BivarPoly(self.spec, a, b)

    def partial_y(self):
        return self.swap().partial_x().swap()

    def substitute(self, x_poly, y_poly):
        """P(A(X, Y), B(X, Y)) by nested Horner evaluation."""
        result = BivarPoly.zero(self.spec)
        for i in reversed(range(self.degree_x + 1)):
            row = BivarPoly.zero(self.spec)
            for j in reversed(range(self.degree_y + 1)):
                row = row * y_poly + self.coefficient(i, j)
            result = result * x_poly + row
        return result

    def translate(self, x0, y0):
        """P(X + x0, Y + y0)."""
        return self.substitute(
            BivarPoly.linear(self.spec, 1, 0, x0), BivarPoly.linear(self.spec, 0, 1, y0)
        )

    def symmetrize(self):
        """Read self as G(u, v) and return G(X + Y, XY)."""
        u = BivarPoly.linear(self.spec, 1, 1, 0)
        v = BivarPoly.from_terms(self.spec, {(1, 1): 1})
        return self.substitute(u, v)

    def divide_by_x_plus_y(self):
        """
        Exact quotient by X + Y.

        Division in X over GF(q^2)[Y]: with P = sum p_k X^k, the quotient rows satisfy
        q_(k-1) = p_k + Y q_k and the remainder p_0 + Y q_0 must vanish.
        """
        if self.is_zero():
            return self
        width = 2 * SIZE
        a = np.zeros((SIZE, width), dtype=np.int64)
        b = np.zeros((SIZE, width), dtype=np.int64)
        a[:, :SIZE] = self.a
        b[:, :SIZE] = self.b
        qa = np.zeros_like(a)
        qb = np.zeros_like(b)
        row_a = np.zeros(width, dtype=np.int64)
        row_b = np.zeros(width, dtype=np.int64)
        for k in reversed(range(1, self.degree_x + 1)):
            row_a = a[k] ^ np.concatenate(([0], row_a[:-1]))
            row_b = b[k] ^ np.concatenate(([0], row_b[:-1]))
            qa[k - 1], qb[k - 1] = row_a, row_b
        rem_a = a[0] ^ np.concatenate(([0], row_a[:-1]))
        rem_b = b[0] ^ np.concatenate(([0], row_b[:-1]))
        if np.any(rem_a) or np.any(rem_b):
            raise NotDivisible("X + Y does not divide the polynomial.")
        padded_a = np.zeros((width, width), dtype=np.int64)
        padded_b = np.zeros((width, width), dtype=np.int64)
        padded_a[:SIZE] = qa
        padded_b[:SIZE] = qb
        return BivarPoly(self.spec, *_fit(padded_a, padded_b))

    def homogeneous_part(self, degree: int):
        a = np.zeros_like(self.a)
        b = np.zeros_like(self.b)
        for i, j in self.support():
            if i + j == degree:
                a[i, j], b[i, j] = self.a[i, j], self.b[i, j]
        return BivarPoly(self.spec, a, b)

    def lowest_form(self):
        """(d, P_d) for the lowest total degree d with a nonzero homogeneous part."""
        if self.is_zero():
            return -1, self
        degree = min(i + j for i, j in self.support())
        return degree, self.homogeneous_part(degree)

    def normalized(self):
        """Scaled so that the lexicographically first nonzero coefficient is 1."""
        support = self.support()
        if not support:
            return self
        return self.scale(self.coefficient(*support[0]).inverse())

    def equal_up_to_unit(self, other) -> bool:
        return self.normalized() == other.normalized()

    # Evaluation

    def evaluate(self, x, y) -> ExtElem:
        """P(x, y) elementwise over broadcastable ExtElem arrays."""
        x = _ext(self.spec, x)
        y = _ext(self.spec, y)
        shape = np.broadcast(x.a, y.a).shape
        result = ExtElem.zero(self.spec, shape)
        for i in reversed(range(self.degree_x + 1)):
            row = ExtElem.zero(self.spec, shape)
            for j in reversed(range(self.degree_y + 1)):
                row = row * y + self.coefficient(i, j)
            result = result * x + row
        return result

    def diagonal(self) -> ExtElem:
        """Coefficients of P(X, X), lowest degree first."""
        a = np.zeros(2 * SIZE - 1, dtype=np.int64)
        b = np.zeros(2 * SIZE - 1, dtype=np.int64)
        for i, j in self.support():
            a[i + j] ^= self.a[i, j]
            b[i + j] ^= self.b[i, j]
        return ExtElem(self.spec, self.spec.GF(a), self.spec.GF(b))

    def as_text(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms().items(), key=lambda t: (-(t[0][0] + t[0][1]), t[0])):
            monomial = "*".join(
                f"{name}^{power}" if power > 1 else name
                for name, power in (("X", i), ("Y", j))
                if power
            )
            parts.append(f"({format_ext(c)})*{monomial}" if monomial else f"({format_ext(c)})")
        return " + ".join(parts)

    def __repr__(self):
        return f"BivarPoly({self.as_text()})"
