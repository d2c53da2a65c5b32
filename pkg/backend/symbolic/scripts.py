"""
Proof scripts: line-oriented replays of resultant elimination chains.

    include NAME                                  splice in another script
    def NAME = EXPR
    subst NAME = SOURCE : MONOMIAL -> EXPR
    coeffs NAME = EXPR in VAR VAR
    res NAME = SOURCE by EXPR in VAR
    evaluate NAME = SOURCE at VAR = EXPR / EXPR [times EXPR]
    assert_divides EXPR | TARGET
    assert_zero TARGET
    assert_member EXPR in TARGET
    assert_free TARGET of VAR
    assert_pair_sum_divides EXPR in TARGET [lead MONOMIAL]

SOURCE is an expression or the name of a polynomial set (a `coeffs` result); a set is mapped
member by member and the images form a new set. Lines starting with # are comments.
"""
import json
import logging
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
from django.conf import settings

from core.exceptions import NihoError, ScriptSyntaxError, UndefinedName, UnknownScript
from symbolic.engine import (
    ResultantCall,
    SpecializationSummary,
    check_specializations,
    divides,
    evaluate_fraction,
    find_coefficients2,
    poly_set,
    power,
    resultant,
    substitution,
)
from symbolic.ring import (
    INDEX,
    RING,
    format_poly,
    leading_monomial,
    monomial_of,
    var,
    variables_of,
)

logger = logging.getLogger(__name__)

SCRIPTS_DIR = Path(__file__).resolve().parent / "scripts"
MANIFEST = SCRIPTS_DIR / "manifest.json"

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TOKEN = re.compile(r"\s*(?:(\d+)|(" + _NAME + r")|(.))")

_PATTERNS = {
    "include": re.compile(rf"include\s+({_NAME})$"),
    "def": re.compile(rf"def\s+({_NAME})\s*=\s*(.+)$"),
    "subst": re.compile(rf"subst\s+({_NAME})\s*=\s*(.+?)\s*:\s*(.+?)\s*->\s*(.+)$"),
    "coeffs": re.compile(rf"coeffs\s+({_NAME})\s*=\s*(.+?)\s+in\s+({_NAME})\s+({_NAME})$"),
    "res": re.compile(rf"res\s+({_NAME})\s*=\s*(.+?)\s+by\s+(.+?)\s+in\s+({_NAME})$"),
    "evaluate": re.compile(
        rf"evaluate\s+({_NAME})\s*=\s*(.+?)\s+at\s+({_NAME})\s*=\s*(.+?)\s+/\s+(.+?)"
        r"(?:\s+times\s+(.+))?$"
    ),
    "assert_divides": re.compile(rf"assert_divides\s+(.+?)\s*\|\s*({_NAME})$"),
    "assert_zero": re.compile(rf"assert_zero\s+({_NAME})$"),
    "assert_member": re.compile(rf"assert_member\s+(.+?)\s+in\s+({_NAME})$"),
    "assert_free": re.compile(rf"assert_free\s+({_NAME})\s+of\s+({_NAME})$"),
    "assert_pair_sum_divides": re.compile(
        rf"assert_pair_sum_divides\s+(.+?)\s+in\s+({_NAME})(?:\s+lead\s+(.+))?$"
    ),
}
_DEFINING = {"def", "subst", "coeffs", "res", "evaluate"}


# --- Expressions ---


class _Parser:
    """Recursive descent over + * ^ and parentheses; 0 and 1 are the only constants."""

    def __init__(self, text, lookup):
        self.text = text
        self.lookup = lookup
        self.tokens = self._tokenize(text)
        self.position = 0

    def _tokenize(self, text):
        tokens = []
        for number, name, symbol in _TOKEN.findall(text.strip()):
            if symbol and symbol not in "+-*^()":
                raise ScriptSyntaxError(f"Unexpected {symbol!r} in {text!r}.")
            tokens.append(number or name or symbol)
        return tokens

    def _peek(self):
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _take(self):
        token = self._peek()
        if token is None:
            raise ScriptSyntaxError(f"Unexpected end of {self.text!r}.")
        self.position += 1
        return token

    def parse(self):
        result = self._sum()
        if self._peek() is not None:
            raise ScriptSyntaxError(f"Trailing {self._peek()!r} in {self.text!r}.")
        return result

    def _sum(self):
        result = self._product()
        while self._peek() in ("+", "-"):
            self._take()
            result = result + self._product()
        return result

    def _product(self):
        result = self._power()
        while self._peek() == "*":
            self._take()
            result = result * self._power()
        return result

    def _power(self):
        base = self._atom()
        if self._peek() == "^":
            self._take()
            exponent = self._take()
            if not exponent.isdigit():
                raise ScriptSyntaxError(f"Exponent {exponent!r} in {self.text!r} is not a number.")
            base = power(base, int(exponent))
        return base

    def _atom(self):
        token = self._take()
        if token == "(":
            inner = self._sum()
            if self._take() != ")":
                raise ScriptSyntaxError(f"Unbalanced parentheses in {self.text!r}.")
            return inner
        if token.isdigit():
            return RING.one if int(token) % 2 else RING.zero
        if token in "+-*^)":
            raise ScriptSyntaxError(f"Unexpected {token!r} in {self.text!r}.")
        return self.lookup(token)


def expression_names(text):
    return {name for _, name, _ in _TOKEN.findall(text) if name}


def parse_expression(text, names=None):
    """Parse text into a ring element; identifiers are defined names first, then variables."""
    names = names or {}

    def lookup(token):
        if token in names:
            value = names[token]
            if isinstance(value, tuple):
                raise ScriptSyntaxError(f"{token} is a polynomial set, not a polynomial.")
            return value
        if token in INDEX:
            return var(token)
        raise UndefinedName(f"{token!r} is neither defined nor a variable.")

    return _Parser(text, lookup).parse()


# --- Scripts ---


@dataclass(frozen=True)
class Step:
    kind: str
    args: tuple
    line: int
    text: str
    source: str

    @property
    def target(self):
        return self.args[0] if self.kind in _DEFINING else None

    @property
    def is_assertion(self) -> bool:
        return self.kind.startswith("assert_")

    def referenced_names(self):
        """Defined names or variables read by the expressions of this step."""
        kind, args = self.kind, self.args
        if kind in ("def", "coeffs"):
            texts = [args[1]]
        elif kind in ("subst", "res"):
            texts = [args[1], args[2]] + ([args[3]] if kind == "subst" else [])
        elif kind == "evaluate":
            texts = [args[1], args[3], args[4], args[5] or ""]
        elif kind in ("assert_divides", "assert_member", "assert_pair_sum_divides"):
            texts = [text for text in args if text]
        else:
            texts = [args[0]]
        return set().union(*(expression_names(text) for text in texts))

    def variable_args(self):
        """Arguments that must be ring variables."""
        positions = {"coeffs": (2, 3), "res": (3,), "evaluate": (2,), "assert_free": (1,)}
        return [self.args[n] for n in positions.get(self.kind, ())]


@dataclass
class ProofScript:
    script_id: str
    steps: list
    description: str = ""


@dataclass
class StepReport:
    line: int
    source: str
    kind: str
    text: str
    passed: bool
    detail: str = ""
    offending: str = ""

    def as_dict(self):
        return {
            "line": self.line,
            "source": self.source,
            "kind": self.kind,
            "text": self.text,
            "passed": self.passed,
            "detail": self.detail,
            "offending": self.offending,
        }


@dataclass
class ScriptReport:
    script_id: str
    steps: list = field(default_factory=list)
    specialization: SpecializationSummary = field(default_factory=SpecializationSummary)

    @property
    def assertions(self):
        return [step for step in self.steps if step.kind.startswith("assert_")]

    @property
    def failures(self):
        return [step for step in self.steps if not step.passed]

    @property
    def passed(self) -> bool:
        return not self.failures and self.specialization.passed


def parse_script(text: str, script_id: str = "<inline>", loader=None, _seen=()):
    """Turn script text into steps, splicing `include`d scripts in place."""
    steps = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword = line.split(None, 1)[0]
        pattern = _PATTERNS.get(keyword)
        match = pattern.match(line) if pattern else None
        if match is None:
            raise ScriptSyntaxError(f"{script_id}:{number}: cannot read {line!r}.")
        if keyword == "include":
            included = match.group(1)
            if included in _seen or included == script_id:
                raise ScriptSyntaxError(f"{script_id}:{number}: {included} includes itself.")
            if loader is None:
                raise ScriptSyntaxError(f"{script_id}:{number}: include needs a script loader.")
            steps.extend(
                parse_script(loader(included), included, loader, _seen + (script_id,)).steps
            )
            continue
        args = tuple(group.strip() if group else group for group in match.groups())
        step = Step(keyword, args, number, line, script_id)
        if step.target is not None and step.target in INDEX:
            raise ScriptSyntaxError(f"{script_id}:{number}: {step.target} is a ring variable.")
        steps.append(step)
    return ProofScript(script_id, steps)


def check_names(script: ProofScript):
    """Every name a step reads must be a variable or defined by an earlier step."""
    defined = set()
    for step in script.steps:
        for name in step.referenced_names():
            if name not in defined and name not in INDEX:
                raise UndefinedName(f"{step.source}:{step.line}: {name} is not defined yet.")
        for name in step.variable_args():
            if name not in INDEX:
                raise UndefinedName(f"{step.source}:{step.line}: {name} is not a ring variable.")
        if step.target is not None:
            defined.add(step.target)


# --- Execution ---


class _Blocked(Exception):
    """A step read a name whose defining step failed."""


_FAILED = object()


class ScriptRunner:
    def __init__(self, script: ProofScript, checks=None, seed=None):
        self.script = script
        self.checks = settings.NIHO_RESULTANT_CHECKS if checks is None else checks
        self.seed = settings.NIHO_DEFAULT_SEED if seed is None else seed
        self.names = {}
        self.calls = []

    def run(self) -> ScriptReport:
        check_names(self.script)
        report = ScriptReport(self.script.script_id)
        for step in self.script.steps:
            report.steps.append(self._run_step(step))
        rng = np.random.default_rng(self.seed)
        report.specialization = check_specializations(self.calls, self.checks, rng)
        logger.info(
            "%s: %d steps, %d failed, %d specialization checks",
            self.script.script_id,
            len(report.steps),
            len(report.failures),
            report.specialization.performed,
        )
        return report

    def _run_step(self, step: Step) -> StepReport:
        handler = getattr(self, f"_do_{step.kind}")
        try:
            passed, detail, offending = handler(*step.args)
        except _Blocked as blocked:
            passed, detail, offending = False, f"depends on failed step {blocked}", ""
        except NihoError as error:
            passed, detail, offending = False, f"{type(error).__name__}: {error}", ""
        except Exception as error:
            logger.exception("%s:%d raised", step.source, step.line)
            passed, detail, offending = False, f"error: {type(error).__name__}: {error}", ""
        if not passed:
            if step.target is not None:
                self.names[step.target] = _FAILED
            logger.warning("%s:%d failed: %s %s", step.source, step.line, step.text, detail)
        return StepReport(step.line, step.source, step.kind, step.text, passed, detail, offending)

    # Name resolution

    def _value(self, name):
        value = self.names[name]
        if value is _FAILED:
            raise _Blocked(name)
        return value

    def _expr(self, text):
        for name in expression_names(text):
            if self.names.get(name) is _FAILED:
                raise _Blocked(name)
        return parse_expression(text, self.names)

    def _source(self, text):
        """A polynomial set when text names one, otherwise the expression's value."""
        if text in self.names and isinstance(self._value(text), tuple):
            return self._value(text)
        return self._expr(text)

    def _map(self, source, function):
        if isinstance(source, tuple):
            return poly_set(function(p) for p in source)
        return function(source)

    def _bind(self, name, value):
        self.names[name] = value
        size = f"{len(value)} polynomials" if isinstance(value, tuple) else f"{len(value)} terms"
        return True, size, ""

    # Defining steps

    def _do_def(self, name, text):
        return self._bind(name, self._expr(text))

    def _do_subst(self, name, source, monomial, replacement):
        monom = monomial_of(self._expr(monomial))
        rule = self._expr(replacement)
        rewritten = self._map(self._source(source), lambda p: substitution(p, monom, rule))
        return self._bind(name, rewritten)

    def _do_coeffs(self, name, text, var1, var2):
        return self._bind(name, find_coefficients2(self._expr(text), var1, var2))

    def _do_res(self, name, source, other, variable):
        q = self._expr(other)

        def eliminate(p):
            result = resultant(p, q, variable)
            self.calls.append(ResultantCall(p, q, variable, result))
            return result

        return self._bind(name, self._map(self._source(source), eliminate))

    def _do_evaluate(self, name, source, variable, numerator, denominator, multiplier):
        num, den = self._expr(numerator), self._expr(denominator)
        mult = self._expr(multiplier) if multiplier else None
        values = self._map(
            self._source(source), lambda p: evaluate_fraction(p, variable, num, den, mult)
        )
        return self._bind(name, values)

    # Assertions

    def _members(self, name):
        value = self._value(name)
        return value if isinstance(value, tuple) else (value,)

    def _do_assert_divides(self, factor, target):
        f = self._expr(factor)
        members = self._members(target)
        for position, p in enumerate(members):
            if p and divides(f, p):
                return True, f"divides member {position}", ""
        return False, f"{factor} divides no member of {target}", _summary(members)

    def _do_assert_zero(self, target):
        members = [p for p in self._members(target) if p]
        if not members:
            return True, "", ""
        return False, f"{target} is not zero", _summary(members)

    def _do_assert_member(self, expected, target):
        p = self._expr(expected)
        members = self._members(target)
        if any(p == member for member in members):
            return True, "", ""
        return False, f"{expected} is not in {target}", _summary(members)

    def _do_assert_free(self, target, variable):
        var(variable)
        involved = [p for p in self._members(target) if variable in variables_of(p)]
        if not involved:
            return True, "", ""
        return False, f"{target} involves {variable}", _summary(involved)

    def _do_assert_pair_sum_divides(self, factor, target, lead):
        f = self._expr(factor)
        members = self._members(target)
        if lead:
            pinned = leading_monomial(self._expr(lead))
            members = tuple(p for p in members if leading_monomial(p) == pinned)
            if len(members) != 2:
                return (
                    False,
                    f"{len(members)} members of {target} lead with {lead}, expected 2",
                    _summary(members),
                )
        for (i, p), (j, q) in combinations(enumerate(members), 2):
            total = p + q
            if total and divides(f, total):
                return True, f"members {i} and {j} sum to {format_poly(total)[:120]}", ""
        return False, f"no two members of {target} sum to a multiple of {factor}", _summary(members)


def _summary(members, limit=3):
    shown = "; ".join(format_poly(p)[:200] for p in members[:limit])
    return shown + ("; ..." if len(members) > limit else "")


# --- Corpus ---


def load_manifest():
    with open(MANIFEST, encoding="utf-8") as handle:
        return json.load(handle)


def _entry(script_id):
    manifest = load_manifest()
    for entry in manifest["scripts"] + manifest.get("shared", []):
        if entry["id"] == script_id:
            return entry
    raise UnknownScript(f"No proof script named {script_id!r}.")


def script_text(script_id: str) -> str:
    return (SCRIPTS_DIR / _entry(script_id)["file"]).read_text(encoding="utf-8")


def script_ids():
    """Runnable scripts in manifest order (shared preludes excluded)."""
    return [entry["id"] for entry in load_manifest()["scripts"]]


def load_script(script_id: str) -> ProofScript:
    entry = _entry(script_id)
    script = parse_script(script_text(script_id), script_id, loader=script_text)
    script.description = entry.get("description", "")
    return script


def run_script(script, checks=None, seed=None) -> ScriptReport:
    """Run every step in order; failures are reported, never raised."""
    if isinstance(script, str):
        script = load_script(script)
    return ScriptRunner(script, checks=checks, seed=seed).run()


def run_all(checks=None, seed=None):
    return [run_script(script_id, checks=checks, seed=seed) for script_id in script_ids()]
