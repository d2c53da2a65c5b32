from core.validators import parse_ext_text, parse_hex
from fields.tower import ExtElem, as_ints


def format_base(value) -> str:
    """Hex of the bit-vector, bit j = coefficient of X^j (e.g. 0x5 = X^2 + 1)."""
    return f"{int(as_ints(value)):#x}"


def format_ext(value: ExtElem) -> str:
    return f"{int(as_ints(value.a)):#x}+{int(as_ints(value.b)):#x}*i"


def parse_base(spec, text):
    return spec.GF(parse_hex(text, spec.m))


def parse_ext(spec, text) -> ExtElem:
    a, b = parse_ext_text(text, spec.m)
    return ExtElem.from_ints(spec, a, b)
