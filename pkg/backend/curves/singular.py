"""
Singular points of D: common zeros of G, dG/du and dG/dv over GF(q^2)^2.

Only GF(q^2)-rational points are reported. The closed forms cover theta2 = 0 and the
theta2 != 0, theta4 = 0 regimes; anything else needs the brute-force search.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core.exceptions import FieldTooLarge, IdentityViolation, UnsupportedRegime
from curves.bivariate import BivarPoly
from curves.plane import build_curve_D
from fields.encoding import format_ext
from fields.tower import ExtElem, cube_roots_in_mu, in_mu
from niho.conditions import ThetaVector, theta2_power

logger = logging.getLogger(__name__)

CLOSED_FORM = "closed_form"
BRUTE_FORCE = "brute_force"
BOTH = "both"

_KINDS = {2: "double", 3: "triple"}
_CHUNK_CELLS = 1 << 16


@dataclass(frozen=True)
class SingularPoint:
    u: ExtElem
    v: ExtElem
    multiplicity: int

    @property
    def kind(self) -> str:
        return _KINDS.get(self.multiplicity, f"order-{self.multiplicity}")

    def sort_key(self):
        return self.u.key(), self.v.key()

    def as_text(self):
        return {"u": format_ext(self.u), "v": format_ext(self.v), "kind": self.kind}


@dataclass
class SingularPointReport:
    points: list
    derivation: str
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def keys(self):
        return [(p.sort_key(), p.multiplicity) for p in self.points]

    def as_dict(self):
        return {
            "derivation": self.derivation,
            "points": [p.as_text() for p in self.points],
            "notes": list(self.notes),
        }


def lowest_form_at(P: BivarPoly, point):
    """(multiplicity, lowest homogeneous part) of P after moving the point to the origin."""
    u, v = point
    return P.translate(u, v).lowest_form()


def _singular(G: BivarPoly, points):
    """Attach multiplicities, dropping nothing: a closed-form point must be singular."""
    result = []
    for u, v in points:
        multiplicity, _ = lowest_form_at(G, (u, v))
        if multiplicity < 2:
            raise IdentityViolation(f"({u!r}, {v!r}) is not a singular point of D.")
        result.append(SingularPoint(u, v, multiplicity))
    return sorted(result, key=SingularPoint.sort_key)


def _brute_force(G: BivarPoly):
    spec = G.spec
    limit = settings.NIHO_SINGULAR_LIMIT
    if spec.order > limit:
        raise FieldTooLarge(f"q^2 = {spec.order} exceeds the singular search limit {limit}.")
    polys = (G, G.partial_x(), G.partial_y())
    xs = ExtElem.all_elements(spec)
    y_grid = xs.reshape(1, spec.order)
    rows = max(1, _CHUNK_CELLS // spec.order)
    points = []
    for start in range(0, spec.order, rows):
        block = xs[start : start + rows]
        x_grid = block.reshape(len(block), 1)
        mask = np.ones((len(block), spec.order), dtype=bool)
        for poly in polys:
            mask &= poly.evaluate(x_grid, y_grid).zero_mask()
        points.extend((block[int(r)], xs[int(c)]) for r, c in zip(*np.nonzero(mask)))
    return points


def _sqrt(x: ExtElem) -> ExtElem:
    return x ** (x.spec.order // 2)


def _closed_form(tv: ThetaVector):
    """Predicted singular points as (u, v, multiplicity)."""
    spec = tv.spec
    if tv.theta2.is_zero():
        if int(tv.theta4p) == 0:
            raise UnsupportedRegime("theta2 = theta4' = 0 leaves no closed form.")
        a3 = tv.theta3 / ExtElem.from_base(spec, tv.theta4p)
        if a3.is_zero():
            # G = theta4' u^3: the whole line u = 0
            return [(ExtElem.zero(spec), v, 3) for v in ExtElem.all_elements(spec)]
        if not in_mu(a3):
            return []
        a3q = a3.frobenius()
        return [(a3q * alpha * alpha, a3q * alpha, 2) for alpha in cube_roots_in_mu(a3)]

    if int(tv.theta4) != 0:
        raise UnsupportedRegime("theta2 != 0 and theta4 != 0 has no closed form.")
    on_power = tv.theta3 == theta2_power(tv.theta2)
    if int(tv.theta1) == 0 and on_power:
        # G = (theta2 + theta2^q v)(u + s + t v)^2: every point of the doubled line
        theta2q = tv.theta2.frobenius()
        s = _sqrt(tv.theta2 * tv.theta2 / tv.theta2.norm())
        t = _sqrt(theta2q / tv.theta2)
        crossing = tv.theta2 / theta2q
        return [(s + t * v, v, 3 if v == crossing else 2) for v in ExtElem.all_elements(spec)]
    alpha = _sqrt(tv.theta2 / tv.theta3)
    return [(ExtElem.zero(spec), alpha, 3 if on_power else 2)]


def singular_points_D(tv: ThetaVector, mode=BOTH) -> SingularPointReport:
    G = build_curve_D(tv)
    if mode == BRUTE_FORCE:
        return SingularPointReport(_singular(G, _brute_force(G)), BRUTE_FORCE)

    try:
        predicted = _closed_form(tv)
    except UnsupportedRegime as error:
        if mode != BOTH:
            raise
        report = SingularPointReport(_singular(G, _brute_force(G)), BRUTE_FORCE)
        report.notes.append(f"closed form does not apply: {error}")
        return report
    points = _singular(G, [(u, v) for u, v, _ in predicted])
    expected = sorted(((u.key(), v.key()), m) for u, v, m in predicted)
    if sorted((p.sort_key(), p.multiplicity) for p in points) != expected:
        raise IdentityViolation("Closed-form multiplicities disagree with the lowest forms.")
    report = SingularPointReport(points, CLOSED_FORM)
    if mode == BOTH and tv.spec.order <= settings.NIHO_SINGULAR_LIMIT:
        brute = _singular(G, _brute_force(G))
        if [p.sort_key() for p in brute] != [p.sort_key() for p in points]:
            raise IdentityViolation(
                f"Closed form found {len(points)} singular points, the search {len(brute)}."
            )
        report.notes.append("confirmed by exhaustive search")
    logger.debug("D has %d rational singular points", len(points))
    return report


def d_is_singular(a3: ExtElem) -> bool:
    """
    With theta2 = 0 and theta4' != 0, D is singular exactly when a3^(q+1) = 1
    (or a3 = 0, where D degenerates to a triple line).
    """
    return a3.is_zero() or in_mu(a3)


def has_rational_singular_point(tv: ThetaVector) -> bool:
    return bool(singular_points_D(tv, mode=BRUTE_FORCE).points)