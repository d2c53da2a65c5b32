from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.utils import counter_rng, default_output_path, index_chunks
from core.validators import parse_ext_text, parse_hex, parse_tower_line, validate_degree


class ValidatorTests(SimpleTestCase):
    def test_degree(self):
        validate_degree(9)
        for bad in (0, 17, "3", True):
            with self.subTest(m=bad), self.assertRaises(ValidationError):
                validate_degree(bad)

    def test_hex(self):
        self.assertEqual(parse_hex("0x5"), 5)
        self.assertEqual(parse_hex(" B "), 11)
        with self.assertRaises(ValidationError):
            parse_hex("0x8", m=3)
        with self.assertRaises(ValidationError):
            parse_hex("x5")

    def test_extension_text(self):
        self.assertEqual(parse_ext_text("0x3+0x5*i"), (3, 5))
        self.assertEqual(parse_ext_text("i"), (0, 1))
        self.assertEqual(parse_ext_text("2*i + 1"), (1, 2))
        with self.assertRaises(ValidationError):
            parse_ext_text("i+i")
        with self.assertRaises(ValidationError):
            parse_ext_text("")

    def test_tower_line(self):
        self.assertEqual(parse_tower_line("m=3 modulus=0xb k=0x1"), (3, 0xB, 1))
        with self.assertRaises(ValidationError):
            parse_tower_line("m=3 modulus=0x13 k=0x1")
        with self.assertRaises(ValidationError):
            parse_tower_line("modulus=0xb")


class UtilsTests(SimpleTestCase):
    def test_counter_rng_is_reproducible(self):
        first = counter_rng(5, 3).integers(0, 1 << 30, size=4).tolist()
        self.assertEqual(first, counter_rng(5, 3).integers(0, 1 << 30, size=4).tolist())
        self.assertNotEqual(first, counter_rng(5, 4).integers(0, 1 << 30, size=4).tolist())

    def test_index_chunks(self):
        self.assertEqual(index_chunks(5, 2), [(0, 2), (2, 4), (4, 5)])
        self.assertEqual(index_chunks(0, 2), [])

    def test_default_output_path(self):
        self.assertEqual(default_output_path(3, "random", 7, "csv"), "sweep-m3-random-seed7.csv")
        self.assertTrue(default_output_path(3, "random", 7, "json_lines").endswith(".jsonl"))
