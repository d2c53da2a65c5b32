BRANCH_CHOICES = [
    ("condition1", "Condition 1"),
    ("condition2", "Condition 2"),
    ("degenerate", "Degenerate"),
    ("none", "None"),
]
CONDITION1_CLAUSES = ("theta4_nonzero", "theta2_zero", "a3_in_mu", "a3_noncube")
CONDITION2_CLAUSES = (
    "theta1_nonzero",
    "theta2_zero",
    "theta4_nonzero",
    "theta3_eq_theta2_pow",
    "trinomial_rootfree",
)
CSV_POINT_COLUMNS = ("x_a", "x_b", "y_a", "y_b")
CSV_SWEEP_COLUMNS = (
    "index",
    "a1",
    "a2",
    "a3",
    "branch",
    "pp_mu",
    "pp_exhaustive",
    "consistent",
)
# Standard low-weight irreducible polynomials over GF(2), bit j = coefficient of X^j.
DEFAULT_MODULI = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
}
EXHAUSTIVE_SUBFIELD_MAX_M = 3
FORMAT_CHOICES = [
    ("json_lines", "JSON lines"),
    ("csv", "CSV"),
]
MAX_EXPONENT_BITS = 64
MAX_M = 16
MAX_SYMBOLIC_POWER = 8
MIN_M = 1
NECESSITY_MIN_M = 9
ORACLE_CHOICES = [
    ("mu", "mu_{q+1} criterion"),
    ("exhaustive", "Exhaustive"),
    ("both", "Both"),
]
SPECIALIZATION_FIELD_DEGREE = 8
SWEEP_MODE_CHOICES = [
    ("exhaustive_subfield", "Exhaustive over a subfield"),
    ("random", "Random"),
]
BIVARIATE_MAX_DEGREE = 8
