import re

from django.core.exceptions import ValidationError

from core.constants import MAX_M, MIN_M

HEX_RE = re.compile(r"^(0x)?[0-9a-f]+$", re.IGNORECASE)
TOWER_LINE_RE = re.compile(
    r"^m=(?P<m>\d+)\s+modulus=(?P<modulus>(0x)?[0-9a-f]+)\s+k=(?P<k>(0x)?[0-9a-f]+)$",
    re.IGNORECASE,
)


def validate_degree(m):
    """Validate the extension degree of the base field over GF(2)."""
    if not isinstance(m, int) or isinstance(m, bool):
        raise ValidationError(f"Field degree must be an integer, got {m!r}.")
    if not MIN_M <= m <= MAX_M:
        raise ValidationError(f"Field degree must be between {MIN_M} and {MAX_M}, got {m}.")


def parse_hex(text, m=None):
    """Parse a base-field element written as hexadecimal bits (bit j = coefficient of X^j)."""
    text = text.strip()
    if not HEX_RE.match(text):
        raise ValidationError(f"Invalid hexadecimal field element: {text!r}")
    value = int(text, 16)
    if m is not None and value >> m:
        raise ValidationError(f"Element {text} does not fit in GF(2^{m}).")
    return value


def parse_ext_text(text, m=None):
    """
    Parse an extension element written as `A+B*i` (A, B in hex).

    A bare `A` or `B*i` is accepted too. Returns the pair of integers (A, B).
    """
    compact = text.replace(" ", "")
    if not compact:
        raise ValidationError("Empty extension field element.")
    a = b = 0
    seen_a = seen_b = False
    for part in compact.split("+"):
        if part.lower().endswith("*i"):
            if seen_b:
                raise ValidationError(f"Repeated i-component in {text!r}.")
            b = parse_hex(part[:-2], m)
            seen_b = True
        elif part.lower() == "i":
            if seen_b:
                raise ValidationError(f"Repeated i-component in {text!r}.")
            b = 1
            seen_b = True
        else:
            if seen_a:
                raise ValidationError(f"Repeated constant component in {text!r}.")
            a = parse_hex(part, m)
            seen_a = True
    return a, b


def parse_tower_line(line):
    """Parse one `m=<int> modulus=<hex> k=<hex>` line of a tower override file."""
    match = TOWER_LINE_RE.match(line.strip())
    if not match:
        raise ValidationError(f"Malformed tower line: {line.strip()!r}")
    m = int(match["m"])
    validate_degree(m)
    modulus = int(match["modulus"], 16)
    if modulus.bit_length() != m + 1:
        raise ValidationError(f"Modulus {match['modulus']} does not have degree {m}.")
    k = parse_hex(match["k"], m)
    return m, modulus, k
