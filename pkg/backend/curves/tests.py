import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import (
    FieldTooLarge,
    NoRationalRoot,
    NotDivisible,
    ParameterInconsistency,
    PolynomialOverflow,
    PreconditionViolation,
    UnsupportedRegime,
)
from curves.bivariate import BivarPoly
from curves.factorizations import (
    theta2_zero_thetas,
    verify_conic_degenerate,
    verify_cubic_pair_form,
    verify_split_Cfact,
    verify_split_conics,
    verify_split_decD,
    verify_split_t1zero,
)
from curves.plane import (
    GammaTable,
    build_curve_C,
    build_curve_D,
    build_curve_H,
    curve_H_for_triple,
    diagonal_forces_theta2_zero,
    diagonal_is_component,
    fq_points,
    fq_points_off_diagonal,
    hasse_weil_ok,
    mu_square_points,
    numerator_sum,
    phi_transform,
    psi_transform,
    quotient_consistent,
    verify_numerator_identity,
)
from curves.singular import (
    BRUTE_FORCE,
    CLOSED_FORM,
    d_is_singular,
    has_rational_singular_point,
    lowest_form_at,
    singular_points_D,
)
from fields.tower import ExtElem, get_field_spec, in_mu, mu_elements
from niho.conditions import theta2_power, theta_vector, thetas, z_equation_roots
from niho.polynomial import CoefficientTriple, phi
from niho.witnesses import (
    CONIC,
    SINGULAR,
    THETA1_ZERO,
    condition1_triples,
    condition2_triples,
    cube_mu_a3_values,
    noncube_mu_elements,
    regime_instance,
)


def random_triples(spec, count, seed):
    rng = np.random.default_rng(seed)
    return [CoefficientTriple.random(spec, rng) for _ in range(count)]


def random_base(spec, rng):
    return spec.GF(int(rng.integers(0, spec.q)))


class BivariateTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)
        self.X = BivarPoly.var_x(self.spec)
        self.Y = BivarPoly.var_y(self.spec)
        self.one = BivarPoly.constant(self.spec, 1)

    def test_square_is_additive(self):
        self.assertEqual((self.X + self.Y) ** 2, self.X**2 + self.Y**2)

    def test_product_of_binomials(self):
        expected = self.X * self.Y + self.X + self.Y + self.one
        self.assertEqual((self.X + 1) * (self.Y + 1), expected)

    def test_overflow(self):
        with self.assertRaises(PolynomialOverflow):
            self.X**9
        with self.assertRaises(PolynomialOverflow):
            BivarPoly.from_terms(self.spec, {(9, 0): 1})

    def test_partials_drop_even_powers(self):
        P = self.X**3 * self.Y**2 + self.X**2 * self.Y + self.X
        self.assertEqual(P.partial_x(), self.X**2 * self.Y**2 + self.one)
        self.assertEqual(P.partial_y(), self.X**2)

    def test_exact_division_by_x_plus_y(self):
        Q = self.X**2 + self.Y + 1
        self.assertEqual(((self.X + self.Y) * Q).divide_by_x_plus_y(), Q)
        self.assertEqual((self.X**4 + self.Y**4).divide_by_x_plus_y(), (self.X + self.Y) ** 3)
        with self.assertRaises(NotDivisible):
            (self.X + 1).divide_by_x_plus_y()

    def test_evaluate_is_multiplicative(self):
        rng = np.random.default_rng(3)
        i = ExtElem.gen_i(self.spec)
        P = BivarPoly.from_terms(self.spec, {(2, 1): 5, (0, 3): i, (0, 0): 1})
        Q = self.X * self.Y + self.X + 3
        x = ExtElem.random(self.spec, rng, 50)
        y = ExtElem.random(self.spec, rng, 50)
        lhs = (P * Q).evaluate(x, y)
        self.assertTrue(np.all(lhs.equal_mask(P.evaluate(x, y) * Q.evaluate(x, y))))

    def test_translate_moves_point_to_origin(self):
        P = self.X**3 * self.Y + self.Y**2 + self.X + 1
        x0 = ExtElem.from_ints(self.spec, 3, 2)
        y0 = ExtElem.from_ints(self.spec, 6, 1)
        moved = P.translate(x0, y0)
        self.assertEqual(moved.coefficient(0, 0), P.evaluate(x0, y0))

    def test_lowest_form(self):
        P = self.X**3 + self.X**2 + self.X * self.Y
        degree, form = P.lowest_form()
        self.assertEqual(degree, 2)
        self.assertEqual(form, self.X**2 + self.X * self.Y)

    def test_equal_up_to_unit(self):
        P = self.X * self.Y + self.X + 3
        scaled = P.scale(ExtElem.from_ints(self.spec, 5, 6))
        self.assertNotEqual(P, scaled)
        self.assertTrue(P.equal_up_to_unit(scaled))
        self.assertFalse(P.equal_up_to_unit(P + self.Y))

    def test_symmetrize_substitutes_elementary_polynomials(self):
        self.assertEqual(self.X.symmetrize(), self.X + self.Y)
        self.assertEqual(self.Y.symmetrize(), self.X * self.Y)

    def test_diagonal(self):
        P = self.X**2 * self.Y + self.X * self.Y**2 + self.X**2
        diagonal = P.diagonal()
        self.assertTrue(diagonal[3].is_zero())
        self.assertEqual(diagonal[2], ExtElem.one(self.spec))


class PlaneCurveTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_curve_C_for_theta2_zero(self):
        a3 = ExtElem.from_ints(self.spec, 3, 5)
        X = BivarPoly.var_x(self.spec)
        Y = BivarPoly.var_y(self.spec)
        expected = (
            BivarPoly.constant(self.spec, a3.frobenius())
            + (X * Y) ** 3 * a3
            + X * Y * (X + Y) * a3.norm()
            + (X + Y) ** 3
        )
        self.assertEqual(build_curve_C(theta2_zero_thetas(self.spec, a3)), expected)

    def test_curve_C_with_only_theta3(self):
        GF = self.spec.GF
        tv = theta_vector(self.spec, GF(0), ExtElem.zero(self.spec), ExtElem.one(self.spec), GF(0))
        expected = BivarPoly.from_terms(self.spec, {(0, 0): 1, (3, 3): 1})
        self.assertEqual(build_curve_C(tv), expected)

    def test_curve_C_is_symmetric(self):
        for t in random_triples(self.spec, 100, seed=11):
            self.assertTrue(build_curve_C(thetas(t)).is_symmetric())

    def test_numerator_identity(self):
        for t in random_triples(self.spec, 100, seed=12):
            self.assertTrue(verify_numerator_identity(t))
            self.assertTrue(numerator_sum(t).diagonal().is_zero())

    def test_numerator_identity_for_zero_triple(self):
        t = CoefficientTriple.zero(self.spec)
        X = BivarPoly.var_x(self.spec)
        Y = BivarPoly.var_y(self.spec)
        self.assertEqual(numerator_sum(t).divide_by_x_plus_y(), (X + Y) ** 3)
        self.assertTrue(verify_numerator_identity(t))

    def test_quotient_curve(self):
        for m in (3, 4):
            spec = get_field_spec(m)
            for t in random_triples(spec, 50, seed=13):
                self.assertTrue(quotient_consistent(thetas(t)))

    def test_curve_D_for_theta2_zero(self):
        a3 = ExtElem.from_ints(self.spec, 6, 1)
        expected = BivarPoly.from_terms(
            self.spec, {(0, 0): a3.frobenius(), (3, 0): 1, (1, 1): a3.norm(), (0, 3): a3}
        )
        self.assertEqual(build_curve_D(theta2_zero_thetas(self.spec, a3)), expected)

    def test_curve_D_of_zero_vector(self):
        GF = self.spec.GF
        zero = ExtElem.zero(self.spec)
        self.assertTrue(build_curve_D(theta_vector(self.spec, GF(0), zero, zero, GF(0))).is_zero())

    def test_diagonal_is_not_a_mu_point(self):
        P = BivarPoly.linear(self.spec, 1, 1, 0)
        self.assertEqual(mu_square_points(P), [])

    def test_condition1_curve_has_no_mu_points(self):
        t = condition1_triples(self.spec)[0]
        self.assertEqual(mu_square_points(build_curve_C(thetas(t))), [])

    @override_settings(NIHO_POINT_SEARCH_LIMIT=4)
    def test_point_search_limit(self):
        with self.assertRaises(FieldTooLarge):
            mu_square_points(BivarPoly.constant(self.spec, 1))

    def test_unit_curve_has_no_points(self):
        self.assertEqual(fq_points_off_diagonal(BivarPoly.constant(self.spec, 1)), 0)

    def test_condition2_curve_H_has_no_points(self):
        t = condition2_triples(self.spec, 1, np.random.default_rng(0))[0]
        _, L = curve_H_for_triple(t)
        self.assertEqual(fq_points_off_diagonal(L), 0)

    def test_point_correspondence(self):
        for t in random_triples(self.spec, 30, seed=14):
            tv = thetas(t)
            _, L = curve_H_for_triple(t)
            images = {
                (phi(self.spec, x.a).key(), phi(self.spec, y.a).key()) for x, y in fq_points(L)
            }
            expected = {
                (x.key(), y.key())
                for x, y in mu_square_points(build_curve_C(tv))
                if x != 1 and y != 1
            }
            self.assertEqual(images, expected)

    def test_phi_and_psi_are_inverse(self):
        for t in random_triples(self.spec, 20, seed=15):
            F = build_curve_C(thetas(t))
            self.assertEqual(psi_transform(phi_transform(F)), F)


class GammaTableTests(SimpleTestCase):
    def test_top_coefficient_and_symmetry(self):
        spec = get_field_spec(4)
        rng = np.random.default_rng(21)
        for _ in range(100):
            params = [random_base(spec, rng) for _ in range(6)]
            table = GammaTable(spec, *params)
            self.assertEqual(int(table.entries[3, 3]), int(params[1] + params[3]))
            self.assertTrue(table.is_symmetric())
            self.assertEqual(int(table.entries[2, 1]), int(table.entries[1, 2]))

    def test_table_matches_pullback_for_free_parameters(self):
        for m in (3, 4):
            spec = get_field_spec(m)
            rng = np.random.default_rng(22)
            for _ in range(50):
                table, L = build_curve_H(spec, *(random_base(spec, rng) for _ in range(6)))
                self.assertEqual(L, table.as_poly())

    def test_table_matches_pullback_for_triples(self):
        for m in (3, 4):
            spec = get_field_spec(m)
            for t in random_triples(spec, 100, seed=23):
                table, L = curve_H_for_triple(t)
                self.assertTrue(np.all(L.coeffs.in_base_mask()))

    def test_inconsistent_parameters(self):
        spec = get_field_spec(3)
        t = random_triples(spec, 1, seed=24)[0]
        tv = thetas(t)
        with self.assertRaises(ParameterInconsistency):
            build_curve_H(
                spec,
                tv.theta2.a,
                tv.theta2.b,
                tv.theta3.a,
                tv.theta3.b,
                tv.theta4,
                tv.theta1 + spec.GF(1),
                triple=t,
            )

    def test_diagonal_component_forces_theta2_zero(self):
        spec = get_field_spec(3)
        GF = spec.GF
        zero_table = GammaTable(spec, *(GF(0) for _ in range(6)))
        self.assertTrue(diagonal_is_component(zero_table.as_poly()))
        self.assertTrue(diagonal_forces_theta2_zero(zero_table))
        rng = np.random.default_rng(25)
        for _ in range(100):
            params = [random_base(spec, rng) for _ in range(6)]
            table = GammaTable(spec, *params)
            self.assertTrue(diagonal_forces_theta2_zero(table))
            if int(params[0]) or int(params[1]):
                self.assertFalse(diagonal_is_component(table.as_poly()))


class HasseWeilTests(SimpleTestCase):
    def test_threshold(self):
        self.assertTrue(hasse_weil_ok(512))
        self.assertFalse(hasse_weil_ok(256))
        self.assertTrue(hasse_weil_ok(422))
        self.assertFalse(hasse_weil_ok(421))
        self.assertFalse(hasse_weil_ok(2))


class FactorizationTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_decD_for_every_cube(self):
        cubes = cube_mu_a3_values(self.spec)
        self.assertEqual(len(cubes), 3)
        for a3 in cubes:
            self.assertTrue(verify_split_decD(a3))

    def test_decD_at_m5(self):
        spec = get_field_spec(5)
        for a3 in cube_mu_a3_values(spec)[:4]:
            self.assertTrue(verify_split_decD(a3))

    def test_decD_refuses_noncube(self):
        with self.assertRaises(PreconditionViolation):
            verify_split_decD(noncube_mu_elements(self.spec)[0])

    def test_Cfact_gives_mu_points(self):
        for a3 in cube_mu_a3_values(self.spec):
            check = verify_split_Cfact(a3)
            self.assertTrue(check, check.notes)
            x, y = check.witness
            self.assertTrue(in_mu(x) and in_mu(y))
            self.assertNotEqual(x, y)

    def test_Cfact_at_m5(self):
        self.assertTrue(verify_split_Cfact(ExtElem.one(get_field_spec(5))))

    def test_cubic_pair_form(self):
        candidates = list(ExtElem.all_elements(self.spec))
        for a3 in candidates:
            self.assertTrue(verify_cubic_pair_form(a3))

    def test_t1zero_split_constructed(self):
        theta2 = ExtElem.from_ints(self.spec, 5, 3)
        tv = theta_vector(
            self.spec, self.spec.GF(0), theta2, theta2_power(theta2), self.spec.GF(0)
        )
        check = verify_split_t1zero(tv)
        self.assertTrue(check, check.notes)
        x, y = check.witness
        self.assertTrue(in_mu(x) and in_mu(y))
        self.assertNotEqual(x, y)

    def test_t1zero_split_for_triple(self):
        t = regime_instance(self.spec, THETA1_ZERO)
        self.assertTrue(verify_split_t1zero(thetas(t)))

    def test_t1zero_refuses_theta2_zero(self):
        with self.assertRaises(PreconditionViolation):
            verify_split_t1zero(theta2_zero_thetas(self.spec, ExtElem.one(self.spec)))

    def test_conics_by_reverse_construction(self):
        theta2 = ExtElem.from_ints(self.spec, 5, 3)
        norm = theta2.norm()
        checked = 0
        for z1 in self.spec.GF.elements[1:]:
            theta1 = z1 + z1 * z1 * z1 / norm
            if int(theta1) == 0:
                continue
            tv = theta_vector(self.spec, theta1, theta2, theta2_power(theta2), self.spec.GF(0))
            check = verify_split_conics(tv, z1)
            self.assertTrue(check, check.notes)
            self.assertNotEqual(int(z1 * z1), int(norm))
            x, y = check.witness
            self.assertTrue(in_mu(x) and in_mu(y))
            checked += 1
        self.assertGreater(checked, 0)

    def test_conics_for_triple(self):
        t = regime_instance(self.spec, CONIC)
        tv = thetas(t)
        self.assertTrue(verify_split_conics(tv, z_equation_roots(tv)[0]))

    def test_conics_reject_non_root(self):
        t = regime_instance(self.spec, CONIC)
        tv = thetas(t)
        roots = {int(z) for z in z_equation_roots(tv)}
        z = next(z for z in range(self.spec.q) if z not in roots)
        with self.assertRaises(NoRationalRoot):
            verify_split_conics(tv, z)

    def test_degenerate_conic(self):
        for C in (1, 5):
            check = verify_conic_degenerate(self.spec, C)
            self.assertTrue(check)
            x, y = check.witness
            self.assertNotEqual(x, y)


class SingularPointTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_three_double_points_for_cube_a3(self):
        report = singular_points_D(theta2_zero_thetas(self.spec, ExtElem.one(self.spec)))
        self.assertEqual(len(report), 3)
        self.assertTrue(all(p.kind == "double" for p in report.points))
        self.assertIn("confirmed by exhaustive search", report.notes)

    def test_counts_over_mu(self):
        for a3 in mu_elements(self.spec):
            report = singular_points_D(theta2_zero_thetas(self.spec, a3))
            self.assertEqual(len(report), 3 if a3 in cube_mu_a3_values(self.spec) else 0)

    def test_a3_outside_mu_is_nonsingular(self):
        a3 = ExtElem.from_ints(self.spec, 1, 2)
        self.assertFalse(in_mu(a3))
        self.assertEqual(len(singular_points_D(theta2_zero_thetas(self.spec, a3))), 0)

    def test_a3_zero_gives_a_triple_line(self):
        report = singular_points_D(theta2_zero_thetas(self.spec, ExtElem.zero(self.spec)))
        self.assertEqual(len(report), self.spec.order)
        self.assertTrue(all(p.u.is_zero() and p.kind == "triple" for p in report.points))

    def test_single_double_point_off_power(self):
        tv = thetas(regime_instance(self.spec, SINGULAR))
        report = singular_points_D(tv)
        self.assertEqual(len(report), 1)
        point = report.points[0]
        self.assertTrue(point.u.is_zero())
        self.assertEqual(point.v * point.v, tv.theta2 / tv.theta3)
        self.assertEqual(point.kind, "double")

    def test_single_point_with_theta1_zero_off_power(self):
        theta2 = ExtElem.from_ints(self.spec, 5, 3)
        twist = [b for b in mu_elements(self.spec) if b != 1][0]
        theta3 = theta2_power(theta2) * twist
        tv = theta_vector(self.spec, self.spec.GF(0), theta2, theta3, self.spec.GF(0))
        report = singular_points_D(tv)
        self.assertEqual(len(report), 1)
        self.assertEqual(report.points[0].v ** 2, theta2 / theta3)

    def test_triple_point_on_power(self):
        theta2 = ExtElem.from_ints(self.spec, 5, 3)
        theta3 = theta2_power(theta2)
        theta1 = self.spec.GF(6)
        tv = theta_vector(self.spec, theta1, theta2, theta3, self.spec.GF(0))
        report = singular_points_D(tv)
        self.assertEqual(len(report), 1)
        point = report.points[0]
        self.assertEqual(point.kind, "triple")
        degree, form = lowest_form_at(build_curve_D(tv), (point.u, point.v))
        expected = BivarPoly.from_terms(
            self.spec, {(3, 0): theta1, (2, 1): theta2.frobenius(), (0, 3): theta3}
        )
        self.assertEqual(degree, 3)
        self.assertEqual(form, expected)

    def test_doubled_line_with_theta1_zero(self):
        theta2 = ExtElem.from_ints(self.spec, 5, 3)
        tv = theta_vector(
            self.spec, self.spec.GF(0), theta2, theta2_power(theta2), self.spec.GF(0)
        )
        report = singular_points_D(tv)
        self.assertEqual(len(report), self.spec.order)
        self.assertEqual(sum(p.kind == "triple" for p in report.points), 1)

    def test_no_closed_form_when_theta2_and_theta4_nonzero(self):
        for t in random_triples(self.spec, 20, seed=31):
            tv = thetas(t)
            if not tv.theta2.is_zero() and int(tv.theta4) != 0:
                break
        with self.assertRaises(UnsupportedRegime):
            singular_points_D(tv, mode=CLOSED_FORM)
        self.assertEqual(singular_points_D(tv, mode=BRUTE_FORCE).derivation, BRUTE_FORCE)
        report = singular_points_D(tv)
        self.assertEqual(report.derivation, BRUTE_FORCE)
        self.assertIn("closed form does not apply", report.notes[0])
        self.assertEqual(report.keys(), singular_points_D(tv, mode=BRUTE_FORCE).keys())

    @override_settings(NIHO_SINGULAR_LIMIT=16)
    def test_brute_force_limit(self):
        with self.assertRaises(FieldTooLarge):
            singular_points_D(theta2_zero_thetas(self.spec, ExtElem.one(self.spec)), BRUTE_FORCE)

    def test_singularity_criterion_matches_search(self):
        spec = get_field_spec(4)
        samples = list(mu_elements(spec)[:5]) + [ExtElem.from_ints(spec, 3, 7)]
        for a3 in samples:
            tv = theta2_zero_thetas(spec, a3)
            self.assertEqual(has_rational_singular_point(tv), d_is_singular(a3))


class AlternateTowerTests(SimpleTestCase):
    """The curve identities and factorizations do not depend on the chosen tower."""

    def setUp(self):
        self.spec = get_field_spec(3, modulus=0xD, k=1)

    def test_numerator_and_quotient_identities(self):
        for t in random_triples(self.spec, 30, seed=41):
            self.assertTrue(verify_numerator_identity(t), str(t))
            self.assertTrue(quotient_consistent(thetas(t)), str(t))

    def test_decD_and_Cfact(self):
        cubes = cube_mu_a3_values(self.spec)
        self.assertEqual(len(cubes), 3)
        for a3 in cubes:
            self.assertTrue(verify_split_decD(a3))
            check = verify_split_Cfact(a3)
            self.assertTrue(check, check.notes)

    def test_t1zero_and_conics(self):
        check = verify_split_t1zero(thetas(regime_instance(self.spec, THETA1_ZERO)))
        self.assertTrue(check, check.notes)
        tv = thetas(regime_instance(self.spec, CONIC))
        check = verify_split_conics(tv, z_equation_roots(tv)[0])
        self.assertTrue(check, check.notes)

    def test_singular_points(self):
        cubes = cube_mu_a3_values(self.spec)
        for a3 in mu_elements(self.spec):
            report = singular_points_D(theta2_zero_thetas(self.spec, a3))
            self.assertEqual(len(report), 3 if a3 in cubes else 0)
        report = singular_points_D(thetas(regime_instance(self.spec, SINGULAR)))
        self.assertEqual([p.kind for p in report.points], ["double"])
        self.assertIn("confirmed by exhaustive search", report.notes)
