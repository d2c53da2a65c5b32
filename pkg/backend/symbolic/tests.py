import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import (
    BothConstantInVar,
    DivisorZero,
    NonTerminatingRule,
    NotDivisible,
    PreconditionViolation,
    ScriptSyntaxError,
    UndefinedName,
    UnknownScript,
)
from symbolic.engine import (
    ResultantCall,
    bareiss_determinant,
    check_specializations,
    divides,
    evaluate_fraction,
    exact_quotient,
    find_coefficients2,
    poly_set,
    power,
    resultant,
    substitution,
    sylvester_matrix,
)
from symbolic.ring import (
    VARIABLES,
    coefficients_in,
    degree_in,
    format_poly,
    leading_monomial,
    monomial_of,
)
from symbolic.scripts import (
    ScriptRunner,
    check_names,
    load_script,
    parse_expression,
    parse_script,
    run_script,
    script_ids,
    script_text,
)


def P(text):
    return parse_expression(text)


class RingTests(SimpleTestCase):
    def test_variable_order(self):
        self.assertEqual(len(VARIABLES), 23)
        self.assertEqual(VARIABLES[:2], ("x", "y"))
        self.assertIn("ma", VARIABLES)

    def test_leading_monomial_is_lex(self):
        p = P("y^5 + x*t1 + C^3")
        self.assertEqual(leading_monomial(p), monomial_of(P("x*t1")))
        self.assertIsNone(leading_monomial(P("0")))

    def test_degree_and_coefficients(self):
        p = P("a*x^2 + b*x + c")
        self.assertEqual(degree_in(p, "x"), 2)
        self.assertEqual(degree_in(P("0"), "x"), -1)
        self.assertEqual(coefficients_in(p, "x"), [P("c"), P("b"), P("a")])

    def test_format_reads_back(self):
        p = P("(C + D*k)^2 + t4*t1 + 1")
        self.assertEqual(P(format_poly(p)), p)
        self.assertEqual(format_poly(P("0")), "0")


class EngineTests(SimpleTestCase):
    def test_frobenius_in_characteristic_two(self):
        self.assertEqual(P("(x+y)^2"), P("x^2 + y^2"))
        self.assertEqual(P("(x+a)*(y+a)"), P("x*y + a*x + a*y + a^2"))

    def test_power_limit(self):
        self.assertEqual(power(P("x+1"), 8), P("x^8 + 1"))
        with self.assertRaises(PreconditionViolation):
            power(P("x"), 9)
        with self.assertRaises(PreconditionViolation):
            P("x^9")

    def test_poly_set_drops_zero_and_duplicates(self):
        members = poly_set([P("a"), P("0"), P("b + a"), P("a")])
        self.assertEqual(len(members), 2)
        self.assertEqual(set(map(format_poly, members)), {"a", "a + b"})
        self.assertEqual(poly_set([P("b"), P("a")]), poly_set([P("a"), P("b")]))

    def test_substitution(self):
        rule = P("i + k")
        i2 = monomial_of(P("i^2"))
        self.assertEqual(substitution(P("i^2 + i"), i2, rule), P("k"))
        self.assertEqual(substitution(P("i^3"), i2, rule), P("i*k + i + k"))
        self.assertEqual(substitution(P("a*b"), i2, rule), P("a*b"))

    def test_substitution_must_terminate(self):
        with self.assertRaises(NonTerminatingRule):
            substitution(P("x^2"), monomial_of(P("x")), P("x + 1"))

    def test_find_coefficients2(self):
        self.assertEqual(
            set(find_coefficients2(P("C*x + D*y + C*x*y"), "x", "y")), {P("C"), P("D")}
        )
        self.assertEqual(find_coefficients2(P("x^2"), "x", "y"), (P("1"),))
        self.assertEqual(find_coefficients2(P("a*b + c"), "x", "y"), (P("a*b + c"),))
        self.assertEqual(find_coefficients2(P("a*x + b*x + a*y"), "x", "y"), (P("a"), P("a + b")))

    def test_resultant_small_cases(self):
        self.assertEqual(resultant(P("x + a"), P("x + b"), "x"), P("a + b"))
        self.assertEqual(resultant(P("x^2 + a"), P("x + b"), "x"), P("b^2 + a"))
        self.assertEqual(resultant(P("x^2 + a"), P("x^2 + a"), "x"), P("0"))
        self.assertEqual(resultant(P("x^2 + x"), P("a"), "x"), P("a^2"))
        self.assertEqual(resultant(P("0"), P("x + 1"), "x"), P("0"))

    def test_resultant_against_the_variable_itself(self):
        self.assertEqual(resultant(P("x + D + 1"), P("D"), "D"), P("x + 1"))
        self.assertEqual(resultant(P("D"), P("D^2 + a*D + b"), "D"), P("b"))
        self.assertEqual(resultant(P("D^2 + a"), P("D"), "D"), P("a"))
        self.assertEqual(power(P("0"), 0), P("1"))

    def test_resultant_needs_the_variable(self):
        with self.assertRaises(BothConstantInVar):
            resultant(P("a"), P("b"), "x")

    def test_bareiss_agrees_with_linear_formula(self):
        p = P("x^3 + a*x^2 + b*x + c")
        q = P("d*x + e")
        self.assertEqual(bareiss_determinant(sylvester_matrix(p, q, "x")), resultant(p, q, "x"))
        self.assertEqual(resultant(p, q, "x"), resultant(q, p, "x"))

    def test_resultant_of_quadratics(self):
        p = P("x^2 + a*x + b")
        q = P("x^2 + c*x + d")
        expected = P("(b + d)^2 + (a + c)*(a*d + b*c)")
        self.assertEqual(resultant(p, q, "x"), expected)

    def test_divides(self):
        self.assertTrue(divides(P("x + a"), P("x^2 + a^2")))
        self.assertFalse(divides(P("x + a"), P("x^2 + a")))
        self.assertTrue(divides(P("1"), P("x")))
        with self.assertRaises(DivisorZero):
            divides(P("0"), P("x"))

    def test_exact_quotient(self):
        self.assertEqual(exact_quotient(P("x^2 + a^2"), P("x + a")), P("x + a"))
        with self.assertRaises(NotDivisible):
            exact_quotient(P("x^2 + a"), P("x + a"))

    def test_evaluate_fraction(self):
        # x = a / b in x^2 + x: b^2 * (a^2/b^2 + a/b) = a^2 + a*b
        self.assertEqual(evaluate_fraction(P("x^2 + x"), "x", P("a"), P("b")), P("a^2 + a*b"))
        self.assertEqual(
            evaluate_fraction(P("x^2 + x"), "x", P("a"), P("b"), P("b^3")), P("a^2*b + a*b^2")
        )
        with self.assertRaises(NotDivisible):
            evaluate_fraction(P("x^2 + x"), "x", P("a"), P("b"), P("b"))
        # x = 0 / b
        self.assertEqual(evaluate_fraction(P("x^2 + a"), "x", P("0"), P("b")), P("a*b^2"))

    def test_specialization_checks(self):
        p, q = P("x^2 + a*x + b"), P("x^2 + c*x + d")
        good = ResultantCall(p, q, "x", resultant(p, q, "x"))
        summary = check_specializations([good], 20, np.random.default_rng(3))
        self.assertTrue(summary.passed)
        self.assertEqual(summary.performed + summary.skipped, 20)
        bad = ResultantCall(p, q, "x", resultant(p, q, "x") + P("1"))
        summary = check_specializations([bad], 20, np.random.default_rng(3))
        self.assertEqual(summary.failures, summary.performed)
        self.assertGreater(summary.performed, 0)


class ParserTests(SimpleTestCase):
    def test_expression_with_names(self):
        names = {"t2": P("C + i*D")}
        self.assertEqual(parse_expression("t2*x + 1", names), P("C*x + D*i*x + 1"))

    def test_constants_reduce_mod_two(self):
        self.assertEqual(P("2*x + 3"), P("1"))
        self.assertEqual(P("x - y"), P("x + y"))

    def test_errors(self):
        for text in ("x +", "(x + y", "x ^ y", "x / y", "x y"):
            with self.subTest(text=text), self.assertRaises(ScriptSyntaxError):
                P(text)
        with self.assertRaises(UndefinedName):
            P("zeta + x")

    def test_parse_script(self):
        script = parse_script("# comment\n\ndef p = x + a\nres q = p by x + b in x\n")
        self.assertEqual([step.kind for step in script.steps], ["def", "res"])
        self.assertEqual(script.steps[1].line, 4)
        self.assertEqual(script.steps[1].args, ("q", "p", "x + b", "x"))

    def test_unreadable_line(self):
        with self.assertRaises(ScriptSyntaxError):
            parse_script("frobnicate p")
        with self.assertRaises(ScriptSyntaxError):
            parse_script("def x = a + b")

    def test_include(self):
        texts = {"base": "def p = x + a\n", "loop": "include loop\n"}
        script = parse_script("include base\nassert_zero p\n", "main", loader=texts.get)
        self.assertEqual([step.source for step in script.steps], ["base", "main"])
        with self.assertRaises(ScriptSyntaxError):
            parse_script(texts["loop"], "loop", loader=texts.get)

    def test_names_must_be_defined_first(self):
        with self.assertRaises(UndefinedName):
            check_names(parse_script("def p = q + 1\ndef q = x\n"))
        with self.assertRaises(UndefinedName):
            check_names(parse_script("def p = x\nres q = p by x in p\n"))


@override_settings(NIHO_RESULTANT_CHECKS=10, NIHO_DEFAULT_SEED=1)
class ScriptRunnerTests(SimpleTestCase):
    def run_text(self, text):
        return ScriptRunner(parse_script(text)).run()

    def test_elimination_chain(self):
        report = self.run_text(
            "coeffs CC = (a + b)*x + (a + c)*y in x y\n"
            "res CC2 = CC by a + b in a\n"
            "assert_member b + c in CC2\n"
            "assert_divides b + c | CC2\n"
            "assert_free CC2 of a\n"
        )
        self.assertTrue(report.passed, [step.as_dict() for step in report.failures])
        self.assertEqual(len(report.assertions), 3)

    def test_failures_are_reported(self):
        report = self.run_text("def p = x + a\nassert_zero p\nassert_member a in p\n")
        self.assertFalse(report.passed)
        self.assertEqual([step.line for step in report.failures], [2, 3])
        self.assertIn("x", report.failures[0].offending)

    def test_failed_step_blocks_its_readers(self):
        report = self.run_text(
            "subst p = x : x -> x + 1\ndef q = p + 1\nassert_zero q\ndef r = a\n"
        )
        self.assertEqual([step.passed for step in report.steps], [False, False, False, True])
        self.assertIn("NonTerminatingRule", report.steps[0].detail)
        self.assertIn("depends on failed step p", report.steps[1].detail)

    def test_step_errors_do_not_stop_the_script(self):
        class BrokenResultant(ScriptRunner):
            def _do_res(self, *args):
                raise ValueError("0**0")

        script = parse_script(
            "def p = x + a\nres q = p by x in x\nassert_zero q\nassert_member a in p\n"
        )
        report = BrokenResultant(script).run()
        self.assertEqual([step.passed for step in report.steps], [True, False, False, True])
        self.assertIn("ValueError: 0**0", report.steps[1].detail)
        self.assertIn("depends on failed step q", report.steps[2].detail)
        self.assertEqual(len(report.assertions), 2)

    def test_pair_sum(self):
        text = "coeffs CC = (C^2 + a)*x + (C^2 + a + t4*b)*y + C*x*y in x y\n"
        report = self.run_text(text + "assert_pair_sum_divides t4 in CC lead C^2\n")
        self.assertTrue(report.passed)
        report = self.run_text(text + "assert_pair_sum_divides t4 in CC lead C\n")
        self.assertFalse(report.passed)

    def test_evaluate_step(self):
        report = self.run_text(
            "def p = x^2 + x\n"
            "evaluate q = p at x = a / b times b^2\n"
            "assert_member a^2 + a*b in q\n"
        )
        self.assertTrue(report.passed)

    def test_specializations_are_recorded(self):
        report = self.run_text("def p = x^2 + a\nres q = p by x^2 + b*x + c in x\n")
        self.assertEqual(report.specialization.performed + report.specialization.skipped, 10)
        self.assertTrue(report.specialization.passed)


@override_settings(NIHO_RESULTANT_CHECKS=20, NIHO_DEFAULT_SEED=0)
class CorpusTests(SimpleTestCase):
    def test_manifest(self):
        ids = script_ids()
        self.assertEqual(len(ids), 9)
        self.assertNotIn("prelude", ids)
        self.assertIn("include prelude", script_text("four-lines"))
        with self.assertRaises(UnknownScript):
            load_script("five-lines")

    def test_prelude(self):
        report = run_script(load_script("prelude"))
        self.assertTrue(report.passed, [step.as_dict() for step in report.failures])

    def test_every_script_passes(self):
        for script_id in script_ids():
            with self.subTest(script=script_id):
                report = run_script(script_id)
                self.assertTrue(report.passed, [step.as_dict() for step in report.failures])
                self.assertTrue(report.assertions)
