"""
Shared plumbing of the euler subcommands: the --spec/--seed/--threads
arguments, JSON on stdout, a one-line summary on stderr and the mapping
of the domain errors to exit codes.
"""

import json
import logging
import sys

import numpy as np
import sympy
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from eulerlab.exceptions import EulerError, NumericalError, SpecParseError
from eulerlab.settings_utils import get_default_seed
from laurent.exceptions import SpecError
from laurent.helpers import as_number

from .exceptions import SpecFileError
from .specfile import load_spec, read_json

logger = logging.getLogger(__name__)


def parse_numbers(text):
    """Parse "10,100,1/100" into a list of numbers."""
    try:
        return [as_number(piece) for piece in text.split(",") if piece.strip()]
    except SpecError as e:
        raise SpecFileError(f"delta list: {e.message}")


def as_euler_error(e):
    """
    The domain error behind an exception raised by a subcommand, or None
    for errors that are bugs. Singular linear algebra is a numerical
    failure; sympy polynomial errors and bad values are input errors.
    """
    if isinstance(e, EulerError):
        return e
    if isinstance(e, (np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError)):
        return NumericalError(f"{type(e).__name__}: {e}")
    if isinstance(e, (sympy.PolynomialError, ValueError)):
        return SpecParseError(f"{type(e).__name__}: {e}")
    return None


class EulerCommand(BaseCommand):
    requires_system_checks = []
    stealth_options = ("stdin",)
    # subcommands without a problem file switch this off
    uses_spec = True

    def add_arguments(self, parser):
        if self.uses_spec:
            parser.add_argument("--spec", required=True, help="problem file (JSON), - for stdin")
        parser.add_argument("--seed", type=int, help="random seed (default: EULER_SEED or 0)")
        parser.add_argument("--threads", type=int, help="worker count (default: EULER_THREADS or all cores)")

    def handle(self, *args, **options):
        self.verbosity = options.get("verbosity", 1)
        self.stdin = options.get("stdin") or sys.stdin
        if self.verbosity >= 2:
            settings.EULER_PROGRESS = True
        if options.get("seed") is None:
            options["seed"] = get_default_seed()
        try:
            result = self.run(**options)
        except Exception as e:
            error = as_euler_error(e)
            if error is None:
                raise
            logger.debug(f"{type(e).__name__}: {e}")
            raise CommandError(str(error), returncode=error.exit_code)
        if isinstance(result, str):
            self.stdout.write(result, ending="" if result.endswith("\n") else "\n")
        else:
            self.stdout.write(json.dumps(result, indent=2, default=str))

    def run(self, **options):
        raise NotImplementedError("subcommands implement run()")

    def load_spec(self, options):
        return load_spec(options["spec"], self.stdin)

    def load_data(self, options):
        return read_json(options["spec"], self.stdin)

    def summary(self, text):
        if self.verbosity >= 1:
            self.stderr.write(text)
