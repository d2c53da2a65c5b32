import json

import pydantic
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import NihoError
from core.validators import parse_hex
from fields.tower import get_field_spec


class NihoCommand(BaseCommand):
    """
    Base for the toolkit's commands: subclasses implement `run`, and input or domain errors
    leave through CommandError with a non-zero exit status.
    """

    def handle(self, *args, **options):
        try:
            return self.run(*args, **options)
        except ValidationError as error:
            raise CommandError("; ".join(error.messages)) from error
        except pydantic.ValidationError as error:
            messages = [f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in error.errors()]
            raise CommandError("; ".join(messages)) from error
        except NihoError as error:
            raise CommandError(f"{type(error).__name__}: {error}") from error

    def run(self, *args, **options):
        raise NotImplementedError

    def add_field_arguments(self, parser):
        parser.add_argument("--m", type=int, required=True, help="Degree of GF(q) over GF(2).")
        parser.add_argument("--modulus", help="Irreducible modulus in hex (default: table).")
        parser.add_argument("--k", help="Tower constant in hex, of trace 1.")

    def field_spec(self, options):
        m = options["m"]
        modulus = options.get("modulus")
        k = options.get("k")
        return get_field_spec(
            m,
            modulus=None if modulus is None else parse_hex(modulus),
            k=None if k is None else parse_hex(k, m),
        )

    def add_triple_arguments(self, parser):
        for name in ("a1", "a2", "a3"):
            parser.add_argument(f"--{name}", default="0", help=f"{name} as A+B*i in hex.")

    def emit_json(self, data):
        self.stdout.write(json.dumps(data, indent=2, sort_keys=True))
