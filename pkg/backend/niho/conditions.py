import logging
from dataclasses import dataclass, field

import numpy as np

from core.constants import CONDITION1_CLAUSES
from core.exceptions import IdentityViolation, Theta2Zero
from fields.encoding import format_base, format_ext
from fields.tower import ExtElem, as_ints, has_trinomial_root, in_mu, is_cube_in_mu
from niho.polynomial import CoefficientTriple, excluded_value

logger = logging.getLogger(__name__)

CONDITION1 = "condition1"
CONDITION2 = "condition2"
DEGENERATE = "degenerate"
NONE = "none"


@dataclass(frozen=True, eq=False)
class ThetaVector:
    """
    The invariants of a coefficient triple.

    theta1, theta4 and theta4p are base-field arrays; theta2 and theta3 are extension elements.
    Every field may be a vector when the triple was built from vectors.
    """

    spec: object
    theta1: object
    theta2: ExtElem
    theta3: ExtElem
    theta4: object
    theta4p: object

    def as_text(self):
        return {
            "theta1": format_base(self.theta1),
            "theta2": format_ext(self.theta2),
            "theta3": format_ext(self.theta3),
            "theta4": format_base(self.theta4),
            "theta4p": format_base(self.theta4p),
        }

    def __getitem__(self, index):
        return ThetaVector(
            self.spec,
            self.theta1[index],
            self.theta2[index],
            self.theta3[index],
            self.theta4[index],
            self.theta4[index] + self.theta1[index],
        )


def theta_vector(spec, theta1, theta2, theta3, theta4) -> ThetaVector:
    """Assemble a ThetaVector from free parameters (theta4p = theta1 + theta4)."""
    return ThetaVector(spec, theta1, theta2, theta3, theta4, theta1 + theta4)


def thetas(t: CoefficientTriple) -> ThetaVector:
    a1q = t.a1.frobenius()
    n1, n2, n3 = t.a1.norm(), t.a2.norm(), t.a3.norm()
    theta1 = n1 + n2 + n3 + t.spec.GF(1)
    theta2 = a1q + t.a3 * t.a2.frobenius()
    theta3 = t.a3 + t.a2 * a1q
    theta4 = n1 + n3
    theta4p = theta1 + theta4
    if not np.all(as_ints(theta4p) == as_ints(n2 + t.spec.GF(1))):
        raise IdentityViolation(f"theta4' != 1 + a2^(q+1) for {t}")
    if not np.all(as_ints(theta2.norm() + theta3.norm()) == as_ints(theta4 * theta4p)):
        raise IdentityViolation(f"theta2^(q+1) + theta3^(q+1) != theta4 theta4' for {t}")
    return ThetaVector(t.spec, theta1, theta2, theta3, theta4, theta4p)


def theta2_power(theta2: ExtElem) -> ExtElem:
    """theta2^(2q-1) as frobenius(theta2)^2 / theta2 (0 maps to 0)."""
    conjugate = theta2.frobenius()
    return conjugate * conjugate * theta2.inverse_or_zero()


def trinomial_constant(tv: ThetaVector):
    """c = theta1^2 / theta2^(q+1), the constant of x^3 + x + c."""
    norm = tv.theta2.norm()
    if np.any(as_ints(norm) == 0):
        raise Theta2Zero("The trinomial constant needs theta2 != 0.")
    return tv.theta1 * tv.theta1 / norm


def check_condition_1(t: CoefficientTriple, tv: ThetaVector = None):
    tv = tv or thetas(t)
    a3_in_mu = in_mu(t.a3)
    return {
        "theta4_nonzero": int(tv.theta4) != 0,
        "theta2_zero": tv.theta2.is_zero(),
        "a3_in_mu": a3_in_mu,
        "a3_noncube": a3_in_mu and not is_cube_in_mu(t.a3),
    }


def check_condition_2(t: CoefficientTriple, tv: ThetaVector = None):
    tv = tv or thetas(t)
    theta2_zero = tv.theta2.is_zero()
    flags = {
        "theta1_nonzero": int(tv.theta1) != 0,
        "theta2_zero": theta2_zero,
        "theta4_nonzero": int(tv.theta4) != 0,
        "theta3_eq_theta2_pow": False,
        "trinomial_rootfree": False,
    }
    if theta2_zero:
        return flags
    flags["theta3_eq_theta2_pow"] = tv.theta3 == theta2_power(tv.theta2)
    flags["trinomial_rootfree"] = not has_trinomial_root(t.spec, trinomial_constant(tv))
    return flags


def condition_1_holds(flags) -> bool:
    return all(flags[name] for name in CONDITION1_CLAUSES)


def condition_2_holds(flags) -> bool:
    return (
        flags["theta1_nonzero"]
        and not flags["theta2_zero"]
        and not flags["theta4_nonzero"]
        and flags["theta3_eq_theta2_pow"]
        and flags["trinomial_rootfree"]
    )


@dataclass
class ConditionReport:
    branch: str
    clauses: dict
    thetas: ThetaVector
    c_value: object = None
    notes: list = field(default_factory=list)

    @property
    def predicts_pp(self) -> bool:
        return self.branch in (CONDITION1, CONDITION2, DEGENERATE)

    def as_dict(self):
        return {
            "branch": self.branch,
            "clauses": dict(self.clauses),
            "c_value": None if self.c_value is None else format_base(self.c_value),
            "notes": list(self.notes),
        }


def classify(t: CoefficientTriple) -> ConditionReport:
    tv = thetas(t)
    condition1 = check_condition_1(t, tv)
    condition2 = check_condition_2(t, tv)
    clauses = {**condition1, **condition2}
    notes = []
    if t.spec.mu_order % 3:
        notes.append("vacuous: 3 does not divide q+1")
    if excluded_value(t) is None:
        notes.append("a1 + a2 + a3 + 1 = 0: the value excluded from the image of H is undefined")
    c_value = None if condition2["theta2_zero"] else trinomial_constant(tv)

    if t.is_degenerate():
        branch = DEGENERATE
    elif condition_1_holds(condition1):
        branch = CONDITION1
    elif condition_2_holds(condition2):
        branch = CONDITION2
    else:
        branch = NONE
    logger.debug("Triple %s classified as %s", t, branch)
    return ConditionReport(branch=branch, clauses=clauses, thetas=tv, c_value=c_value, notes=notes)


def zroots_equivalence(tv: ThetaVector) -> bool:
    """
    theta1 + z + z^3 / theta2^(q+1) = 0 has a root in GF(q) exactly when
    x^3 + x + theta1^2 / theta2^(q+1) = 0 does.
    """
    z_solvable = bool(z_equation_roots(tv))
    return z_solvable == has_trinomial_root(tv.spec, trinomial_constant(tv))


def z_equation_roots(tv: ThetaVector):
    """The roots in GF(q) of theta1 + z + z^3 / theta2^(q+1) = 0, in integer order."""
    norm = tv.theta2.norm()
    if int(norm) == 0:
        raise Theta2Zero("The z-equation needs theta2 != 0.")
    zs = tv.spec.GF.elements
    z_values = tv.theta1 + zs + zs * zs * zs / norm
    return [zs[j] for j in np.flatnonzero(as_ints(z_values) == 0)]
