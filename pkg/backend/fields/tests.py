import os
import tempfile

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings

from core.exceptions import InversionOfZero, NotInMu
from fields.encoding import format_base, format_ext, parse_base, parse_ext
from fields.tower import (
    ExtElem,
    FieldSpec,
    as_ints,
    base_arith,
    cube_roots_in_mu,
    get_field_spec,
    in_mu,
    is_cube_in_mu,
    mu_elements,
    mu_generator,
    mu_mask,
    solve_cubic_trinomial,
)


def multiplicative_order(x):
    n, power = 1, x
    while power != 1:
        power = power * x
        n += 1
    return n


class BaseFieldTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_default_tower_for_m3(self):
        self.assertEqual(self.spec.modulus, 0xB)
        self.assertEqual(self.spec.k, 1)
        self.assertEqual(self.spec.q, 8)

    def test_mul_reduces_by_modulus(self):
        GF = self.spec.GF
        self.assertEqual(int(base_arith(self.spec, "mul", GF(0b10), GF(0b100))), 0b11)

    def test_inverse_of_one(self):
        self.assertEqual(int(base_arith(self.spec, "inv", self.spec.GF(1))), 1)

    def test_inverse_of_zero(self):
        with self.assertRaises(InversionOfZero):
            base_arith(self.spec, "inv", self.spec.GF(0))

    def test_sqrt_squares_back(self):
        xs = self.spec.GF.elements
        roots = base_arith(self.spec, "sqrt", xs)
        np.testing.assert_array_equal(as_ints(roots * roots), as_ints(xs))

    def test_pow_reduces_exponent(self):
        x = self.spec.GF(5)
        self.assertEqual(base_arith(self.spec, "pow", x, 7), 1)
        self.assertEqual(base_arith(self.spec, "pow", x, 8), x)
        self.assertEqual(base_arith(self.spec, "pow", self.spec.GF(0), 0), 1)

    def test_even_degree_picks_trace_one_k(self):
        spec = get_field_spec(4)
        self.assertNotEqual(spec.k, 1)
        xs = spec.GF.elements
        i = ExtElem.gen_i(spec)
        # i^2 + i + k has no root in GF(q)
        values = xs * xs + xs + spec.k_elem
        self.assertTrue(np.all(as_ints(values) != 0))
        self.assertEqual(i * i, i + ExtElem.from_ints(spec, spec.k))

    def test_rejects_reducible_modulus(self):
        with self.assertRaises(ValidationError):
            FieldSpec(m=3, modulus=0b1111, k=1)

    def test_rejects_trace_zero_k(self):
        with self.assertRaises(ValidationError):
            FieldSpec(m=4, modulus=0x13, k=1)

    def test_tower_file_override(self):
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as handle:
            handle.write("# alternative towers\nm=3 modulus=0xD k=0x1\n")
        self.addCleanup(os.unlink, handle.name)
        with override_settings(NIHO_TOWER_FILE=handle.name):
            spec = get_field_spec(3)
            self.assertEqual(spec.modulus, 0xD)
            self.assertEqual(get_field_spec(4).modulus, 0x13)

    def test_tower_file_rejects_malformed_line(self):
        with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as handle:
            handle.write("m=3 poly=0xD\n")
        self.addCleanup(os.unlink, handle.name)
        with override_settings(NIHO_TOWER_FILE=handle.name):
            with self.assertRaises(ValidationError):
                get_field_spec(3)


class ExtensionFieldTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)
        self.i = ExtElem.gen_i(self.spec)
        self.one = ExtElem.one(self.spec)

    def test_i_squared(self):
        self.assertEqual(self.i * self.i, self.i + ExtElem.from_ints(self.spec, self.spec.k))

    def test_one_plus_i_squared(self):
        x = self.one + self.i
        self.assertEqual(x * x, self.i)
        self.assertEqual(x * self.one, x)

    def test_frobenius_of_i(self):
        self.assertEqual(self.i.frobenius(), self.one + self.i)
        base = ExtElem.from_ints(self.spec, 5)
        self.assertEqual(base.frobenius(), base)

    def test_frobenius_matches_power_q(self):
        xs = ExtElem.all_elements(self.spec)
        self.assertTrue(np.all(xs.frobenius().equal_mask(xs**self.spec.q)))

    def test_norm_values(self):
        self.assertEqual(int(self.i.norm()), self.spec.k)
        self.assertEqual(int(self.one.norm()), 1)

    def test_norm_is_x_times_frobenius(self):
        xs = ExtElem.all_elements(self.spec)
        product = xs * xs.frobenius()
        self.assertTrue(np.all(as_ints(product.b) == 0))
        np.testing.assert_array_equal(as_ints(product.a), as_ints(xs.norm()))

    def test_norm_is_multiplicative(self):
        keys = np.arange(self.spec.order)
        xs = ExtElem.from_keys(self.spec, keys[:, None] + 0 * keys[None, :])
        ys = ExtElem.from_keys(self.spec, keys[None, :] + 0 * keys[:, None])
        np.testing.assert_array_equal(
            as_ints((xs * ys).norm()), as_ints(xs.norm() * ys.norm())
        )

    def test_inverse(self):
        xs = ExtElem.all_elements(self.spec)[1:]
        self.assertTrue(np.all((xs * xs.inverse()).equal_mask(1)))
        with self.assertRaises(InversionOfZero):
            ExtElem.zero(self.spec).inverse()

    def test_inverse_or_zero_maps_zero_to_zero(self):
        xs = ExtElem.all_elements(self.spec)
        inv = xs.inverse_or_zero()
        self.assertTrue(inv[0].is_zero())
        self.assertEqual(inv[3], xs[3].inverse())

    def test_field_axioms_random(self):
        rng = np.random.default_rng(1)
        for m in range(2, 9):
            spec = get_field_spec(m)
            x, y, z = (ExtElem.random(spec, rng, 1000) for _ in range(3))
            self.assertTrue(np.all(((x * y) * z).equal_mask(x * (y * z))))
            self.assertTrue(np.all((x * (y + z)).equal_mask(x * y + x * z)))
            self.assertTrue(np.all((x * y).frobenius().equal_mask(x.frobenius() * y.frobenius())))
            self.assertTrue(np.all((x + y).frobenius().equal_mask(x.frobenius() + y.frobenius())))
            self.assertTrue(np.all(x.frobenius().frobenius().equal_mask(x)))

    def test_pow_matches_repeated_multiplication(self):
        x = ExtElem.from_ints(self.spec, 3, 5)
        self.assertEqual(x**3, x * x * x)
        self.assertEqual(x**0, self.one)
        self.assertEqual(x**self.spec.order, x)
        self.assertEqual(x**-1, x.inverse())


class MuSubgroupTests(SimpleTestCase):
    def test_mu_membership(self):
        spec = get_field_spec(3)
        self.assertTrue(in_mu(ExtElem.one(spec)))
        self.assertFalse(in_mu(ExtElem.zero(spec)))
        self.assertEqual(int(np.sum(mu_mask(ExtElem.all_elements(spec)))), 9)

    def test_generator_has_order_q_plus_one(self):
        for m in (2, 3, 4):
            spec = get_field_spec(m)
            g = mu_generator(spec)
            self.assertEqual(multiplicative_order(g), spec.q + 1)
            self.assertEqual(g ** (spec.q + 1), ExtElem.one(spec))

    def test_mu_elements_enumerate_mu(self):
        spec = get_field_spec(3)
        xs = ExtElem.all_elements(spec)
        expected = sorted(xs.keys()[mu_mask(xs)].tolist())
        self.assertEqual(sorted(mu_elements(spec).keys().tolist()), expected)

    def test_cube_test_for_odd_m(self):
        spec = get_field_spec(3)
        self.assertTrue(is_cube_in_mu(ExtElem.one(spec)))
        self.assertFalse(is_cube_in_mu(mu_generator(spec)))
        self.assertEqual(sum(is_cube_in_mu(x) for x in mu_elements(spec)), 3)

    def test_every_mu_element_is_a_cube_for_even_m(self):
        spec = get_field_spec(4)
        self.assertTrue(all(is_cube_in_mu(x) for x in mu_elements(spec)))

    def test_cube_test_requires_mu(self):
        spec = get_field_spec(3)
        # X in GF(q) has norm X^2
        outside = ExtElem.from_ints(spec, 2)
        self.assertFalse(in_mu(outside))
        with self.assertRaises(NotInMu):
            is_cube_in_mu(outside)
        with self.assertRaises(NotInMu):
            cube_roots_in_mu(ExtElem.zero(spec))

    def test_cube_roots_odd_m(self):
        spec = get_field_spec(3)
        roots = cube_roots_in_mu(ExtElem.one(spec))
        self.assertEqual(len(roots), 3)
        self.assertTrue(all(in_mu(r) and r**3 == ExtElem.one(spec) for r in roots))
        self.assertEqual(cube_roots_in_mu(mu_generator(spec)), [])

    def test_cube_roots_even_m(self):
        spec = get_field_spec(4)
        a = mu_generator(spec)
        roots = cube_roots_in_mu(a)
        self.assertEqual(len(roots), 3)
        self.assertTrue(all(r**3 == a for r in roots))
        self.assertEqual(sum(in_mu(r) for r in roots), 1)

    def test_cube_roots_are_sorted(self):
        spec = get_field_spec(5)
        for a in mu_elements(spec)[:11]:
            keys = [r.key() for r in cube_roots_in_mu(a)]
            self.assertEqual(keys, sorted(keys))


class CubicTrinomialTests(SimpleTestCase):
    def test_zero_constant(self):
        # x^3 + x = x (x + 1)^2
        for m in (1, 3, 4, 5):
            with self.subTest(m=m):
                spec = get_field_spec(m)
                self.assertEqual(len(solve_cubic_trinomial(spec, spec.GF(0))), 2)

    def test_no_root_over_gf2(self):
        spec = get_field_spec(1)
        self.assertEqual(solve_cubic_trinomial(spec, spec.GF(1)), [])

    def test_root_counts_m3(self):
        spec = get_field_spec(3)
        counts = [len(solve_cubic_trinomial(spec, spec.GF(c))) for c in range(spec.q)]
        self.assertTrue(all(n in (0, 1, 3) for n in counts[1:]))
        self.assertEqual(sum(counts), spec.q)

    def test_trichotomy_odd_m(self):
        for m in (3, 5):
            spec = get_field_spec(m)
            for c in range(1, spec.q):
                self.assertIn(len(solve_cubic_trinomial(spec, spec.GF(c))), (0, 1, 3))

    def test_squaring_invariance(self):
        for m in (3, 4, 5):
            spec = get_field_spec(m)
            for c in map(spec.GF, range(spec.q)):
                self.assertEqual(
                    len(solve_cubic_trinomial(spec, c)), len(solve_cubic_trinomial(spec, c * c))
                )

    def test_roots_are_roots(self):
        spec = get_field_spec(5)
        c = spec.GF(7)
        for x in solve_cubic_trinomial(spec, c):
            self.assertEqual(x**3 + x + c, 0)


class EncodingTests(SimpleTestCase):
    def setUp(self):
        self.spec = get_field_spec(3)

    def test_format_base(self):
        self.assertEqual(format_base(self.spec.GF(5)), "0x5")

    def test_format_and_parse_ext(self):
        x = ExtElem.from_ints(self.spec, 0x3, 0x6)
        self.assertEqual(format_ext(x), "0x3+0x6*i")
        self.assertEqual(parse_ext(self.spec, "0x3+0x6*i"), x)
        self.assertEqual(parse_ext(self.spec, "i"), ExtElem.gen_i(self.spec))
        self.assertEqual(parse_ext(self.spec, "5"), ExtElem.from_ints(self.spec, 5))

    def test_parse_rejects_out_of_range(self):
        with self.assertRaises(ValidationError):
            parse_base(self.spec, "0x8")
        with self.assertRaises(ValidationError):
            parse_ext(self.spec, "0x1+zz*i")
