class NihoError(Exception):
    """Base class for every domain error raised by the toolkit."""


class InversionOfZero(NihoError, ZeroDivisionError):
    pass


class DivisionByZero(NihoError, ZeroDivisionError):
    pass


class NotInMu(NihoError):
    """An element expected in the subgroup of (q+1)-th roots of unity has norm != 1."""


class FieldTooLarge(NihoError):
    pass


class Theta2Zero(NihoError):
    pass


class ParameterInconsistency(NihoError):
    pass


class PreconditionViolation(NihoError):
    pass


class NoRationalRoot(NihoError):
    pass


class UnsupportedRegime(NihoError):
    pass


class IdentityViolation(NihoError):
    """An exact polynomial identity that must hold did not."""


# --- Bivariate polynomials ---


class PolynomialOverflow(NihoError):
    pass


class NotDivisible(NihoError):
    pass


# --- Symbolic engine ---


class NonTerminatingRule(NihoError):
    pass


class BothConstantInVar(NihoError):
    pass


class DivisorZero(NihoError, ZeroDivisionError):
    pass


class ScriptError(NihoError):
    pass


class UndefinedName(ScriptError):
    pass


class ScriptSyntaxError(ScriptError):
    pass


class UnknownScript(ScriptError):
    pass
