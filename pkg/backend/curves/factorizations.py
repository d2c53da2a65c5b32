"""
Exact checks of the ways C and D split into components, with a witness point of C in
mu_(q+1)^2 off the diagonal whenever the splitting produces one.
"""
import logging
from dataclasses import dataclass, field

from core.exceptions import IdentityViolation, NoRationalRoot, PreconditionViolation
from curves.bivariate import BivarPoly
from curves.plane import build_curve_C, build_curve_D, mu_square_points
from fields.tower import (
    ExtElem,
    cube_roots_in_mu,
    in_mu,
    is_cube_in_mu,
    mu_elements,
    sort_elements,
)
from niho.conditions import ThetaVector, theta2_power, theta_vector

logger = logging.getLogger(__name__)


@dataclass
class FactorizationCheck:
    name: str
    holds: bool
    factors: list = field(default_factory=list)
    witness: tuple = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def theta2_zero_thetas(spec, a3: ExtElem, theta4p=1) -> ThetaVector:
    """Invariants of a triple with theta2 = 0: theta3 = a3 theta4', theta4 = a3^(q+1) theta4'."""
    theta4p = spec.GF(theta4p) if isinstance(theta4p, int) else theta4p
    theta3 = a3 * theta4p
    theta4 = a3.norm() * theta4p
    return theta_vector(spec, theta4 + theta4p, ExtElem.zero(spec), theta3, theta4)


def _cube_roots(a3):
    if not in_mu(a3) or not is_cube_in_mu(a3):
        raise PreconditionViolation(f"{a3!r} is not a cube in mu_(q+1).")
    roots = cube_roots_in_mu(a3)
    if len(roots) != 3:
        raise PreconditionViolation(f"{a3!r} has {len(roots)} cube roots in GF(q^2), not 3.")
    return roots


def _product(polys):
    result = polys[0]
    for poly in polys[1:]:
        result = result * poly
    return result


def verify_split_decD(a3: ExtElem) -> FactorizationCheck:
    """D = (u + a1 v + 1/a1)(u + a2 v + 1/a2)(u + a3' v + 1/a3') over the cube roots of a3."""
    spec = a3.spec
    roots = _cube_roots(a3)
    lines = [BivarPoly.linear(spec, 1, alpha, alpha.inverse()) for alpha in roots]
    holds = _product(lines).equal_up_to_unit(build_curve_D(theta2_zero_thetas(spec, a3)))
    return FactorizationCheck("decD", holds, factors=lines)


def verify_split_Cfact(a3: ExtElem) -> FactorizationCheck:
    """C = prod (X + 1/alpha)(Y + 1/alpha); its off-diagonal points sit on those lines."""
    spec = a3.spec
    roots = _cube_roots(a3)
    inverses = [alpha.inverse() for alpha in roots]
    lines = []
    for beta in inverses:
        lines.append(BivarPoly.linear(spec, 1, 0, beta))
        lines.append(BivarPoly.linear(spec, 0, 1, beta))
    C = build_curve_C(theta2_zero_thetas(spec, a3))
    holds = _product(lines).equal_up_to_unit(C)
    points = mu_square_points(C)
    notes = []
    if not points:
        holds = False
        notes.append("no off-diagonal point in mu_(q+1)^2")
    elif not all(x in inverses or y in inverses for x, y in points):
        holds = False
        notes.append("a point of C misses every line X = 1/alpha, Y = 1/alpha")
    return FactorizationCheck(
        "Cfact", holds, factors=lines, witness=points[0] if points else None, notes=notes
    )


def verify_cubic_pair_form(a3: ExtElem) -> FactorizationCheck:
    """
    With theta2 = 0 and theta4' = 1, F is
    a3^q + X^3 + (a3^(q+1) + 1)(X^2 Y + X Y^2) + Y^3 + a3 X^3 Y^3,
    and the X^2 Y coefficient vanishes exactly when a3 lies in mu_(q+1).
    """
    spec = a3.spec
    mixed = a3.norm() + spec.GF(1)
    expected = BivarPoly.from_terms(
        spec,
        {(0, 0): a3.frobenius(), (3, 0): 1, (2, 1): mixed, (1, 2): mixed, (0, 3): 1, (3, 3): a3},
    )
    C = build_curve_C(theta2_zero_thetas(spec, a3))
    vanishes = C.coefficient(2, 1).is_zero()
    holds = C == expected and vanishes == (not a3.is_zero() and in_mu(a3))
    return FactorizationCheck("cubic_pair_form", holds, factors=[expected])


def _check_theta4_zero_regime(tv: ThetaVector, theta1_zero: bool):
    if tv.theta2.is_zero():
        raise PreconditionViolation("theta2 must be nonzero.")
    if int(tv.theta4) != 0:
        raise PreconditionViolation("theta4 must be zero.")
    if (int(tv.theta1) == 0) != theta1_zero:
        raise PreconditionViolation(f"theta1 must be {'zero' if theta1_zero else 'nonzero'}.")
    if tv.theta3 != theta2_power(tv.theta2):
        raise PreconditionViolation("theta3 must equal theta2^(2q-1).")


def _theta2_exponents(theta2: ExtElem):
    """(theta2^(1-q), theta2^(q-1))."""
    conjugate = theta2.frobenius()
    return theta2 * theta2 / theta2.norm(), conjugate / theta2


def _off_diagonal_witness(C, spec, candidate):
    """First alpha in mu_(q+1), by key, for which candidate(alpha) gives a point of C off X = Y."""
    for alpha in sort_elements(mu_elements(spec)):
        x = candidate(alpha)
        if x is None or x == alpha:
            continue
        if in_mu(x) and C.evaluate(x, alpha).is_zero():
            return x, alpha
    return None


def verify_split_t1zero(tv: ThetaVector) -> FactorizationCheck:
    """
    theta1 = theta4 = 0, theta3 = theta2^(2q-1):
    G = (theta2 + theta2^q v)(theta2^(1-q) + u^2 + theta2^(q-1) v^2),
    and the second factor is theta2^(-q) dG/dv.
    """
    _check_theta4_zero_regime(tv, theta1_zero=True)
    spec = tv.spec
    theta2q = tv.theta2.frobenius()
    low, high = _theta2_exponents(tv.theta2)
    line = BivarPoly.linear(spec, 0, theta2q, tv.theta2)
    conic = BivarPoly.from_terms(spec, {(0, 0): low, (2, 0): 1, (0, 2): high})
    D = build_curve_D(tv)
    notes = []
    holds = line * conic == D
    if conic != D.partial_y().scale(theta2q.inverse()):
        holds = False
        notes.append("second factor is not theta2^(-q) dG/dv")

    def on_line(alpha):
        return (alpha * high).inverse()

    witness = _off_diagonal_witness(build_curve_C(tv), spec, on_line)
    if witness is None:
        holds = False
        notes.append("no witness point found")
    return FactorizationCheck("t1zero", holds, factors=[line, conic], witness=witness, notes=notes)


def conic_parameters(tv: ThetaVector, z1) -> list:
    """
    [z1, z2, z3]: z1 in GF(q) solves theta1 + z + z^3 / theta2^(q+1) = 0 and z2, z3 in GF(q^2)
    are the roots of z^2 + z1 z + z1^2 + theta2^(q+1).
    """
    spec = tv.spec
    norm = tv.theta2.norm()
    z1 = spec.GF(z1) if isinstance(z1, int) else z1
    if int(tv.theta1 + z1 + z1 * z1 * z1 / norm) != 0:
        raise NoRationalRoot(f"z1 = {int(z1)} does not solve the z-equation.")
    zs = ExtElem.all_elements(spec)
    values = zs * zs + zs * z1 + (z1 * z1 + norm)
    others = zs[values.zero_mask()]
    if len(others) != 2:
        raise IdentityViolation(f"The residual quadratic has {len(others)} roots in GF(q^2).")
    return [ExtElem.from_base(spec, z1), others[0], others[1]]


def verify_split_conics(tv: ThetaVector, z1) -> FactorizationCheck:
    """
    theta4 = 0, theta1 != 0, theta3 = theta2^(2q-1) and a rational root z1:
    C = prod (z_j (X + Y) + theta2^q XY + theta2) over the three roots z_j.
    """
    _check_theta4_zero_regime(tv, theta1_zero=False)
    spec = tv.spec
    zs = conic_parameters(tv, z1)
    theta2q = tv.theta2.frobenius()
    conics = [
        BivarPoly.from_terms(spec, {(1, 0): z, (0, 1): z, (1, 1): theta2q, (0, 0): tv.theta2})
        for z in zs
    ]
    product = _product(conics)
    C = build_curve_C(tv)
    notes = []
    pullback = build_curve_D(tv).symmetrize()
    holds = product.equal_up_to_unit(pullback) and product.equal_up_to_unit(C)
    z1_ext = zs[0]
    if z1_ext * z1_ext == ExtElem.from_base(spec, tv.theta2.norm()):
        holds = False
        notes.append("the z1 conic is singular")

    def on_conic(alpha):
        denominator = theta2q * alpha + z1_ext
        if denominator.is_zero():
            return None
        return (tv.theta2 + z1_ext * alpha) / denominator

    witness = _off_diagonal_witness(C, spec, on_conic)
    if witness is None:
        holds = False
        notes.append("no witness point found")
    return FactorizationCheck("conics", holds, factors=conics, witness=witness, notes=notes)


def verify_conic_degenerate(spec, C) -> FactorizationCheck:
    """theta2 = theta4 = C in GF(q)*, theta1 = theta3 = 0: F = C (X + 1)(Y + 1)(X^2 + XY + Y^2)."""
    C = spec.GF(C) if isinstance(C, int) else C
    if int(C) == 0:
        raise PreconditionViolation("C must be nonzero.")
    tv = theta_vector(spec, spec.GF(0), ExtElem.from_base(spec, C), ExtElem.zero(spec), C)
    factors = [
        BivarPoly.linear(spec, 1, 0, 1),
        BivarPoly.linear(spec, 0, 1, 1),
        BivarPoly.from_terms(spec, {(2, 0): 1, (1, 1): 1, (0, 2): 1}),
    ]
    curve = build_curve_C(tv)
    holds = _product(factors).scale(C) == curve
    points = mu_square_points(curve)
    if not points:
        holds = False
    return FactorizationCheck(
        "conic_degenerate", holds, factors=factors, witness=points[0] if points else None
    )
