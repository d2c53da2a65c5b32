"""
The plane curves attached to a coefficient triple.

C: F(X, Y) = (p(X) - p(Y)) / (X - Y), whose off-diagonal points in mu_(q+1)^2 are collisions of p.
D: G(u, v) with G(X + Y, XY) = F(X, Y), the quotient of C by the swap (X, Y) -> (Y, X).
H: L(X, Y) = (X + i + 1)^3 (Y + i + 1)^3 F(phi(X), phi(Y)), the pullback of C to GF(q) coordinates.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from core.exceptions import (
    FieldTooLarge,
    IdentityViolation,
    ParameterInconsistency,
    PreconditionViolation,
)
from curves.bivariate import BivarPoly
from fields.encoding import format_base
from fields.tower import ExtElem, as_ints, mu_elements, sort_elements
from niho.conditions import ThetaVector, theta_vector, thetas
from niho.polynomial import CoefficientTriple

logger = logging.getLogger(__name__)

_CHUNK_CELLS = 1 << 16


def build_curve_C(tv: ThetaVector) -> BivarPoly:
    theta2q = tv.theta2.frobenius()
    mixed = tv.theta4 + tv.theta4p
    return BivarPoly.from_terms(
        tv.spec,
        {
            (0, 0): tv.theta3.frobenius(),
            (3, 3): tv.theta3,
            (2, 1): mixed,
            (1, 2): mixed,
            (3, 0): tv.theta4p,
            (0, 3): tv.theta4p,
            (1, 1): tv.theta2,
            (2, 0): tv.theta2,
            (0, 2): tv.theta2,
            (2, 2): theta2q,
            (3, 1): theta2q,
            (1, 3): theta2q,
        },
    )


def build_curve_D(tv: ThetaVector) -> BivarPoly:
    """G(u, v), with u in the X slot and v in the Y slot."""
    theta2q = tv.theta2.frobenius()
    return BivarPoly.from_terms(
        tv.spec,
        {
            (0, 0): tv.theta3.frobenius(),
            (3, 0): tv.theta4p,
            (1, 1): tv.theta4,
            (0, 3): tv.theta3,
            (2, 0): tv.theta2,
            (0, 1): tv.theta2,
            (2, 1): theta2q,
            (0, 2): theta2q,
        },
    )


def _univariate_x(spec, coefficients):
    return BivarPoly.from_terms(spec, {(power, 0): c for power, c in coefficients.items()})


def numerator_sum(t: CoefficientTriple) -> BivarPoly:
    """N(X) M(Y) + N(Y) M(X), where p = N / M; it vanishes on X = Y."""
    spec = t.spec
    top = _univariate_x(
        spec, {4: 1, 3: t.a1.frobenius(), 1: t.a3.frobenius(), 0: t.a2.frobenius()}
    )
    bottom = _univariate_x(spec, {4: t.a2, 3: t.a3, 1: t.a1, 0: 1})
    return top * bottom.swap() + top.swap() * bottom


def verify_numerator_identity(t: CoefficientTriple) -> bool:
    quotient = numerator_sum(t).divide_by_x_plus_y()
    return quotient == build_curve_C(thetas(t))


def quotient_consistent(tv: ThetaVector) -> bool:
    """G(X + Y, XY) = F(X, Y)."""
    return build_curve_D(tv).symmetrize() == build_curve_C(tv)


# --- Point searches ---


def _check_point_search(spec):
    limit = settings.NIHO_POINT_SEARCH_LIMIT
    if spec.q > limit:
        raise FieldTooLarge(f"q = {spec.q} exceeds the point search limit {limit}.")


def _zero_pairs(P: BivarPoly, xs: ExtElem, ys: ExtElem):
    """Off-diagonal (x, y) in xs x ys with P(x, y) = 0, in key order."""
    xs = sort_elements(xs)
    ys = sort_elements(ys)
    rows = max(1, _CHUNK_CELLS // len(ys))
    y_grid = ys.reshape(1, len(ys))
    pairs = []
    for start in range(0, len(xs), rows):
        block = xs[start : start + rows]
        x_grid = block.reshape(len(block), 1)
        values = P.evaluate(x_grid, y_grid)
        hits = values.zero_mask() & (block.keys()[:, None] != ys.keys()[None, :])
        for r, c in zip(*np.nonzero(hits)):
            pairs.append((block[int(r)], ys[int(c)]))
    return pairs


def mu_square_points(P: BivarPoly):
    """Zeros of P in mu_(q+1)^2 off the diagonal."""
    _check_point_search(P.spec)
    mu = mu_elements(P.spec)
    return _zero_pairs(P, mu, mu)


def fq_points(L: BivarPoly):
    """Zeros of L in GF(q)^2 off the diagonal, as extension elements with zero i-part."""
    _check_point_search(L.spec)
    line = ExtElem.from_base(L.spec, L.spec.GF.elements)
    return _zero_pairs(L, line, line)


def fq_points_off_diagonal(L: BivarPoly) -> int:
    return len(fq_points(L))


# --- The change of coordinates between C and H ---


def phi_transform(F: BivarPoly) -> BivarPoly:
    """
    (X + i + 1)^3 (Y + i + 1)^3 F(phi(X), phi(Y)) with phi(x) = (x + i) / (x + i + 1).

    Expanded term by term: each X^r Y^s of F becomes
    (X + i)^r (X + i + 1)^(3 - r) (Y + i)^s (Y + i + 1)^(3 - s).
    """
    spec = F.spec
    if F.degree_x > 3 or F.degree_y > 3:
        raise PreconditionViolation("phi_transform expects degree at most 3 in each variable.")
    i = ExtElem.gen_i(spec)
    return _homogenized_pullback(
        F,
        numerator=BivarPoly.linear(spec, 1, 0, i),
        denominator=BivarPoly.linear(spec, 1, 0, i + 1),
    )


def psi_transform(L: BivarPoly) -> BivarPoly:
    """(X + 1)^3 (Y + 1)^3 L(psi(X), psi(Y)) with psi(x) = (x (i + 1) + i) / (x + 1); returns F."""
    spec = L.spec
    i = ExtElem.gen_i(spec)
    return _homogenized_pullback(
        L,
        numerator=BivarPoly.linear(spec, i + 1, 0, i),
        denominator=BivarPoly.linear(spec, 1, 0, 1),
    )


def _homogenized_pullback(P, numerator, denominator):
    num_x, den_x = numerator, denominator
    num_y, den_y = numerator.swap(), denominator.swap()
    x_parts = [num_x**r * den_x ** (3 - r) for r in range(4)]
    y_parts = [num_y**s * den_y ** (3 - s) for s in range(4)]
    result = BivarPoly.zero(P.spec)
    for (r, s), c in P.terms().items():
        result = result + (x_parts[r] * y_parts[s]) * c
    return result


@dataclass(frozen=True, eq=False)
class GammaTable:
    """The coefficients gamma[i, j] of L(X, Y), as GF(q) elements."""

    spec: object
    C: object
    D: object
    E: object
    F: object
    theta4: object
    theta1: object

    @property
    def entries(self):
        C, D, E, F, t4, t1 = self.C, self.D, self.E, self.F, self.theta4, self.theta1
        k = self.spec.k_elem
        k2 = k * k
        g32 = C + D + E + F + t4
        g31 = C + D * k + D + E + F * k + F + t4
        g30 = C * k + C + E * k + E + F + k * t4 + t4 + t1
        g21 = C * k + C + E * k + E + F + k * t4 + t1
        g20 = C + D * k2 + D * k + E + F * k2 + F * k + F + k * t4
        return {
            (3, 3): D + F,
            (3, 2): g32,
            (2, 3): g32,
            (3, 1): g31,
            (1, 3): g31,
            (3, 0): g30,
            (0, 3): g30,
            (2, 2): C + D * k + D + E + F * k + F,
            (2, 1): g21,
            (1, 2): g21,
            (2, 0): g20,
            (0, 2): g20,
            (1, 1): C + D * k2 + D * k + E + F * k2 + F * k + F,
            (1, 0): C * k2 + C * k + D * k2 + E * k2 + E * k + E + F * k2 + F + k2 * t4,
            (0, 1): C * k2 + C * k + D * k2 + F * k2 + F + k2 * t4 + E * k2 + E * k + E,
            (0, 0): C * k2 + D * k * k2 + F * k * k2 + F * k + F + E * k2 + E,
        }

    def is_symmetric(self) -> bool:
        entries = self.entries
        return all(int(entries[i, j]) == int(entries[j, i]) for i, j in entries)

    def as_poly(self) -> BivarPoly:
        return BivarPoly.from_terms(self.spec, self.entries)

    def thetas(self) -> ThetaVector:
        i = ExtElem.gen_i(self.spec)
        theta2 = ExtElem.from_base(self.spec, self.C) + i * self.D
        theta3 = ExtElem.from_base(self.spec, self.E) + i * self.F
        return theta_vector(self.spec, self.theta1, theta2, theta3, self.theta4)

    def as_text(self):
        return {f"gamma_{i}{j}": format_base(value) for (i, j), value in self.entries.items()}


def build_curve_H(spec, C, D, E, F, theta4, theta1, triple=None):
    """
    The gamma table and L(X, Y) for theta2 = C + iD, theta3 = E + iF.

    L is built both from the table and by pulling F(X, Y) back through phi; the two must agree.
    When a triple is given, the parameters must be its invariants.
    """
    table = GammaTable(spec, C, D, E, F, theta4, theta1)
    tv = table.thetas()
    if triple is not None:
        actual = thetas(triple)
        consistent = (
            actual.theta2 == tv.theta2
            and actual.theta3 == tv.theta3
            and int(actual.theta4) == int(theta4)
            and int(actual.theta1) == int(theta1)
        )
        if not consistent:
            raise ParameterInconsistency(f"Parameters are not the invariants of {triple}.")
    L = table.as_poly()
    transformed = phi_transform(build_curve_C(tv))
    if transformed != L:
        raise IdentityViolation(f"Gamma table disagrees with the phi pullback: {table.as_text()}")
    return table, L


def curve_H_for_triple(t: CoefficientTriple):
    tv = thetas(t)
    return build_curve_H(
        t.spec, tv.theta2.a, tv.theta2.b, tv.theta3.a, tv.theta3.b, tv.theta4, tv.theta1, triple=t
    )


def hasse_weil_ok(q: int) -> bool:
    """q + 1 - 20 sqrt(q) - 12 >= 0, in integers: q > 11 and (q - 11)^2 >= 400 q."""
    return q > 11 and (q - 11) ** 2 >= 400 * q


def diagonal_is_component(L: BivarPoly) -> bool:
    """X = Y lies on the curve exactly when L(X, X) vanishes identically."""
    return not np.any(as_ints(L.diagonal().a) | as_ints(L.diagonal().b))


def diagonal_forces_theta2_zero(table: GammaTable) -> bool:
    """If L(X, X) = 0 identically then C = D = 0, i.e. theta2 = 0."""
    if not diagonal_is_component(table.as_poly()):
        return True
    return int(table.C) == 0 and int(table.D) == 0
