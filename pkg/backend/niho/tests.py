from collections import Counter

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DivisionByZero, NotInMu, Theta2Zero
from fields.tower import ExtElem, as_ints, get_field_spec, mu_elements, mu_mask
from niho.conditions import (
    CONDITION1,
    CONDITION2,
    DEGENERATE,
    NONE,
    check_condition_2,
    classify,
    theta2_power,
    theta_vector,
    thetas,
    z_equation_roots,
    zroots_equivalence,
)
from niho.polynomial import (
    POLE,
    CoefficientTriple,
    collision_pairs,
    eval_f,
    eval_p,
    excluded_value,
    exponents,
    is_pp_exhaustive,
    is_pp_via_mu,
    phi,
    phi_all,
    poles_on_mu,
    psi_component,
)
from niho.witnesses import (
    CONIC,
    ROOTFREE,
    SINGULAR,
    THETA1_ZERO,
    a2_zero_family,
    condition1_triples,
    condition2_triples,
    regime_instance,
    theta4_zero_triples,
)


def random_triple_with_theta2_theta4(spec, rng):
    while True:
        t = CoefficientTriple.random(spec, rng)
        tv = thetas(t)
        if not tv.theta2.is_zero() and int(tv.theta4) != 0:
            return t


class ExponentTests(SimpleTestCase):
    def test_m3(self):
        e = exponents(get_field_spec(3))
        self.assertEqual((e.s1, e.s2, e.s3), (7, 1, 3))
        self.assertEqual((e.d1, e.d2, e.d3), (50, 8, 22))

    def test_m2(self):
        e = exponents(get_field_spec(2))
        self.assertEqual((e.s1, e.s3), (4, 2))
        self.assertEqual((e.d1, e.d2, e.d3), (13, 4, 7))

    def test_s1_is_a_quarter(self):
        for m in range(2, 12):
            spec = get_field_spec(m)
            self.assertEqual(4 * exponents(spec).s1 % (spec.q + 1), 1)


class QuadrinomialTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)
        self.rng = np.random.default_rng(3)

    def test_zero_triple_is_identity(self):
        t = CoefficientTriple.zero(self.spec)
        xs = ExtElem.all_elements(self.spec)
        self.assertTrue(np.all(eval_f(t, xs).equal_mask(xs)))
        self.assertTrue(is_pp_exhaustive(t))
        self.assertTrue(is_pp_via_mu(t))

    def test_f_vanishes_at_zero(self):
        for _ in range(20):
            t = CoefficientTriple.random(self.spec, self.rng)
            self.assertTrue(eval_f(t, ExtElem.zero(self.spec)).is_zero())

    def test_all_ones_at_one(self):
        spec = get_field_spec(2)
        one = ExtElem.one(spec)
        t = CoefficientTriple(one, one, one)
        self.assertTrue(eval_f(t, one).is_zero())

    def test_single_coefficient_oracles_agree(self):
        spec = get_field_spec(2)
        t = CoefficientTriple(ExtElem.one(spec), ExtElem.zero(spec), ExtElem.zero(spec))
        self.assertEqual(is_pp_exhaustive(t), is_pp_via_mu(t))

    def test_p_of_zero_triple(self):
        t = CoefficientTriple.zero(self.spec)
        for x in mu_elements(self.spec):
            self.assertEqual(eval_p(t, x), x**4)

    def test_p_at_one(self):
        for _ in range(50):
            t = CoefficientTriple.random(self.spec, self.rng)
            s = t.a1 + t.a2 + t.a3 + 1
            value = eval_p(t, ExtElem.one(self.spec))
            if s.is_zero():
                self.assertIs(value, POLE)
                self.assertIsNone(excluded_value(t))
            else:
                self.assertEqual(value, s.frobenius() / s)
                self.assertEqual(value, excluded_value(t))

    def test_p_requires_mu(self):
        t = CoefficientTriple.zero(self.spec)
        with self.assertRaises(NotInMu):
            eval_p(t, ExtElem.zero(self.spec))

    def test_pole_witness_m2(self):
        spec = get_field_spec(2)
        found = None
        for key in range(1, spec.order):
            t = CoefficientTriple.from_keys(spec, key, 0, 0)
            if len(poles_on_mu(t)):
                found = t
                break
        self.assertIsNotNone(found)
        self.assertIs(eval_p(found, poles_on_mu(found)[0]), POLE)
        self.assertFalse(is_pp_via_mu(found))
        self.assertFalse(is_pp_exhaustive(found))

    def test_p_maps_mu_into_mu(self):
        for m in (2, 3):
            spec = get_field_spec(m)
            mu = mu_elements(spec)
            for _ in range(200):
                t = CoefficientTriple.random(spec, self.rng)
                values, poles = eval_p(t, mu)
                self.assertTrue(np.all(mu_mask(values)[~poles]))

    def test_oracles_agree_on_every_triple_m2(self):
        spec = get_field_spec(2)
        for k1 in range(spec.order):
            for k2 in range(spec.order):
                for k3 in range(spec.order):
                    t = CoefficientTriple.from_keys(spec, k1, k2, k3)
                    self.assertEqual(is_pp_exhaustive(t), is_pp_via_mu(t), str(t))

    def test_oracles_agree_random(self):
        for m in (3, 4):
            spec = get_field_spec(m)
            for _ in range(500):
                t = CoefficientTriple.random(spec, self.rng)
                self.assertEqual(is_pp_exhaustive(t), is_pp_via_mu(t), str(t))

    def test_collisions_explain_non_permutation(self):
        for _ in range(50):
            t = CoefficientTriple.random(self.spec, self.rng)
            if is_pp_via_mu(t):
                self.assertEqual(collision_pairs(t), [])
            elif not len(poles_on_mu(t)):
                self.assertNotEqual(collision_pairs(t), [])

    def test_theta2_and_theta4_nonzero_never_pp_m9(self):
        spec = get_field_spec(9)
        for _ in range(5):
            t = random_triple_with_theta2_theta4(spec, self.rng)
            self.assertFalse(is_pp_via_mu(t))
            self.assertEqual(classify(t).branch, NONE)


class PhiTests(SimpleTestCase):
    def test_phi_lands_in_mu_minus_one(self):
        spec = get_field_spec(3)
        images = phi_all(spec)
        self.assertTrue(np.all(mu_mask(images)))
        self.assertFalse(np.any(images.equal_mask(1)))
        self.assertEqual(len(np.unique(images.keys())), spec.q)
        self.assertEqual(phi(spec, None), ExtElem.one(spec))

    def test_psi_inverts_phi(self):
        for m in (2, 3, 4):
            spec = get_field_spec(m)
            back = psi_component(phi_all(spec))
            self.assertTrue(np.all(back.in_base_mask()))
            np.testing.assert_array_equal(as_ints(back.a), np.arange(spec.q))

    def test_psi_undefined_at_one(self):
        with self.assertRaises(DivisionByZero):
            psi_component(ExtElem.one(get_field_spec(3)))


class ThetaTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_zero_triple(self):
        tv = thetas(CoefficientTriple.zero(self.spec))
        self.assertEqual(int(tv.theta1), 1)
        self.assertTrue(tv.theta2.is_zero())
        self.assertTrue(tv.theta3.is_zero())
        self.assertEqual(int(tv.theta4), 0)
        self.assertEqual(int(tv.theta4p), 1)

    def test_a2_one(self):
        zero, one = ExtElem.zero(self.spec), ExtElem.one(self.spec)
        tv = thetas(CoefficientTriple(zero, one, zero))
        self.assertEqual(
            [int(tv.theta1), int(tv.theta4), int(tv.theta4p)], [0, 0, 0]
        )
        self.assertTrue(tv.theta2.is_zero())
        self.assertTrue(tv.theta3.is_zero())

    def test_identity_on_vectors(self):
        spec = get_field_spec(4)
        rng = np.random.default_rng(4)
        a1, a2, a3 = (ExtElem.random(spec, rng, 1000) for _ in range(3))
        tv = thetas(CoefficientTriple(a1, a2, a3))
        np.testing.assert_array_equal(
            as_ints(tv.theta2.norm() + tv.theta3.norm()), as_ints(tv.theta4 * tv.theta4p)
        )

    def test_theta2_power(self):
        rng = np.random.default_rng(5)
        x = ExtElem.random(self.spec, rng, 100)
        expected = x ** (2 * self.spec.q - 1)
        self.assertTrue(np.all(theta2_power(x).equal_mask(expected)))


class ConditionTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)
        self.rng = np.random.default_rng(6)

    def test_degenerate(self):
        report = classify(CoefficientTriple.zero(self.spec))
        self.assertEqual(report.branch, DEGENERATE)
        self.assertTrue(report.predicts_pp)
        self.assertIsNone(report.c_value)

    def test_theta2_zero_never_condition2(self):
        t = condition1_triples(self.spec)[0]
        flags = check_condition_2(t)
        self.assertTrue(flags["theta2_zero"])
        self.assertFalse(flags["trinomial_rootfree"])

    def test_condition1_witness(self):
        report = classify(condition1_triples(self.spec)[0])
        self.assertEqual(report.branch, CONDITION1)
        self.assertTrue(all(report.clauses[name] for name in ("a3_in_mu", "a3_noncube")))

    def test_c_value_definition(self):
        for _ in range(100):
            t = CoefficientTriple.random(self.spec, self.rng)
            report = classify(t)
            if report.c_value is None:
                continue
            tv = report.thetas
            self.assertEqual(report.c_value * tv.theta2.norm(), tv.theta1 * tv.theta1)

    def test_even_m_note(self):
        spec = get_field_spec(4)
        report = classify(CoefficientTriple.random(spec, self.rng))
        self.assertIn("vacuous: 3 does not divide q+1", report.notes)
        self.assertNotEqual(report.branch, CONDITION1)

    def test_report_dict(self):
        report = classify(a2_zero_family(self.spec)[0])
        data = report.as_dict()
        self.assertEqual(set(data), {"branch", "clauses", "c_value", "notes"})
        self.assertTrue(data["c_value"].startswith("0x"))

    def test_zroots_equivalence_random(self):
        for m in (3, 4, 5):
            spec = get_field_spec(m)
            for _ in range(100):
                theta1 = spec.GF(int(self.rng.integers(0, spec.q)))
                theta2 = ExtElem.from_keys(spec, int(self.rng.integers(1, spec.order)))
                tv = theta_vector(spec, theta1, theta2, ExtElem.zero(spec), spec.GF(0))
                self.assertTrue(zroots_equivalence(tv))

    def test_zroots_theta1_zero(self):
        theta2 = ExtElem.gen_i(self.spec)
        tv = theta_vector(self.spec, self.spec.GF(0), theta2, theta2, self.spec.GF(0))
        self.assertIn(0, [int(z) for z in z_equation_roots(tv)])
        self.assertTrue(zroots_equivalence(tv))

    def test_zroots_needs_theta2(self):
        tv = thetas(CoefficientTriple.zero(self.spec))
        with self.assertRaises(Theta2Zero):
            zroots_equivalence(tv)


class SufficiencyTests(SimpleTestCase):
    def test_every_condition1_triple_is_pp_m3(self):
        triples = condition1_triples(get_field_spec(3))
        self.assertEqual(len(triples), 6 * 55)
        for t in triples:
            self.assertEqual(classify(t).branch, CONDITION1)
            self.assertTrue(is_pp_exhaustive(t), str(t))

    def test_condition1_empty_for_even_m(self):
        self.assertEqual(condition1_triples(get_field_spec(4)), [])

    def test_condition2_triples_are_pp(self):
        rng = np.random.default_rng(7)
        total = 0
        for m in (3, 4, 5):
            spec = get_field_spec(m)
            triples = condition2_triples(spec, 40, rng)
            self.assertEqual(len(triples), 40)
            for t in triples:
                self.assertEqual(classify(t).branch, CONDITION2)
                self.assertTrue(is_pp_exhaustive(t), str(t))
            total += len(triples)
        self.assertGreaterEqual(total, 100)

    def test_a2_zero_family_invariants(self):
        spec = get_field_spec(3)
        for t in a2_zero_family(spec):
            tv = thetas(t)
            self.assertEqual(int(tv.theta1), 1)
            self.assertEqual(int(tv.theta4), 0)
            self.assertEqual(tv.theta3, theta2_power(tv.theta2))
            self.assertEqual(classify(t).branch == CONDITION2, is_pp_exhaustive(t))


class RegimeTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_conic_regime_is_not_pp(self):
        t = regime_instance(self.spec, CONIC)
        self.assertEqual(classify(t).branch, NONE)
        self.assertTrue(z_equation_roots(thetas(t)))
        self.assertFalse(is_pp_exhaustive(t))

    def test_theta1_zero_regime_is_not_pp(self):
        t = regime_instance(self.spec, THETA1_ZERO)
        tv = thetas(t)
        self.assertEqual(int(tv.theta1), 0)
        self.assertFalse(is_pp_via_mu(t))

    def test_singular_regime(self):
        tv = thetas(regime_instance(self.spec, SINGULAR))
        self.assertNotEqual(tv.theta3, theta2_power(tv.theta2))
        self.assertNotEqual(int(tv.theta1), 0)

    def test_rootfree_search_matches_classify(self):
        a2 = ExtElem.from_ints(self.spec, 2, 3)
        for t in theta4_zero_triples(self.spec, a2, ROOTFREE, limit=20):
            self.assertEqual(classify(t).branch, CONDITION2)


class TowerInvarianceTests(SimpleTestCase):
    """Isomorphic towers must give the same counts; triples themselves are not comparable."""

    def setUp(self):
        self.towers = [get_field_spec(3), get_field_spec(3, modulus=0xD, k=1)]

    def outcomes(self, spec):
        zero = ExtElem.zero(spec)
        counts = Counter()
        for x in ExtElem.all_elements(spec):
            for t in (CoefficientTriple(zero, zero, x), CoefficientTriple(x, zero, zero)):
                counts[classify(t).branch, is_pp_via_mu(t), is_pp_exhaustive(t)] += 1
        return counts

    def test_single_coefficient_families(self):
        first, second = (self.outcomes(spec) for spec in self.towers)
        self.assertEqual(first, second)
        self.assertEqual(sum(first.values()), 128)

    def test_condition1_triples(self):
        counts = [len(condition1_triples(spec)) for spec in self.towers]
        self.assertEqual(counts, [330, 330])
        for t in condition1_triples(self.towers[1])[::11]:
            self.assertEqual(classify(t).branch, CONDITION1)
            self.assertTrue(is_pp_exhaustive(t), str(t))

    def test_theta_identities(self):
        rng = np.random.default_rng(9)
        for spec in self.towers:
            a1, a2, a3 = (ExtElem.random(spec, rng, 500) for _ in range(3))
            tv = thetas(CoefficientTriple(a1, a2, a3))
            np.testing.assert_array_equal(
                as_ints(tv.theta2.norm() + tv.theta3.norm()), as_ints(tv.theta4 * tv.theta4p)
            )

    def test_a2_zero_family(self):
        spec = self.towers[1]
        for t in a2_zero_family(spec)[::3]:
            tv = thetas(t)
            self.assertEqual(int(tv.theta1), 1)
            self.assertEqual(int(tv.theta4), 0)
            self.assertEqual(tv.theta3, theta2_power(tv.theta2))
            self.assertEqual(classify(t).branch == CONDITION2, is_pp_exhaustive(t))

    def test_oracles_agree(self):
        rng = np.random.default_rng(10)
        for _ in range(300):
            t = CoefficientTriple.random(self.towers[1], rng)
            self.assertEqual(is_pp_exhaustive(t), is_pp_via_mu(t), str(t))
