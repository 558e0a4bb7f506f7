"""
The JSON problem file shared by every subcommand:

    {
        "vars": ["x1", "x2"],
        "f": ["1 + x1", "1 + x1 + x2", "x1 + x2"],
        "s": [[1, 1], [1, 1], [1, 1]],
        "nu": [[1, 1], [1, 1]],
        "positive": true,
        "symbols": {"t1": -1}
    }

Numbers are [num, den] pairs, "p/q" strings, floats or {"re", "im"}
mappings. "symbols" assigns the kinematic names used inside "f".
Commands ignore the fields they do not need; `-` reads the file from stdin.
"""

import json
import logging
import sys

from laurent.exceptions import SpecError
from laurent.helpers import as_number
from laurent.integrals import spec_from_texts
from laurent.parsing import parse, parse_support

from .exceptions import SpecFileError

logger = logging.getLogger(__name__)


def read_json(path, stdin=None):
    try:
        if path == "-":
            return json.load(stdin or sys.stdin)
        with open(path) as fp:
            return json.load(fp)
    except OSError as e:
        raise SpecFileError(f"cannot read the file ({e.strerror})", path=path)
    except json.JSONDecodeError as e:
        raise SpecFileError(f"invalid JSON at line {e.lineno}, column {e.colno}", path=path)


def _require(data, key, path):
    if key not in data:
        raise SpecFileError(f'missing field "{key}"', path=path)
    return data[key]


def _variables(data, path):
    variables = _require(data, "vars", path)
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise SpecFileError('"vars" must be a list of names', path=path)
    return variables


def _texts(data, path):
    texts = _require(data, "f", path)
    if isinstance(texts, str):
        texts = [texts]
    if not isinstance(texts, list) or not texts:
        raise SpecFileError('"f" must be a nonempty list of expressions', path=path)
    return texts


def _numbers(values, key, path):
    if not isinstance(values, list):
        raise SpecFileError(f'"{key}" must be a list of numbers', path=path)
    try:
        return [as_number(v) for v in values]
    except SpecError as e:
        raise SpecFileError(f'"{key}": {e.message}', path=path)


def _symbols(data, path):
    symbols = data.get("symbols") or {}
    if not isinstance(symbols, dict):
        raise SpecFileError('"symbols" must map names to numbers', path=path)
    try:
        return {name: as_number(v) for name, v in symbols.items()}
    except SpecError as e:
        raise SpecFileError(f'"symbols": {e.message}', path=path)


def spec_from_data(data, path=None):
    """IntegralSpec of a parsed problem file."""
    variables = _variables(data, path)
    texts = _texts(data, path)
    s = _numbers(_require(data, "s", path), "s", path)
    nu = _numbers(_require(data, "nu", path), "nu", path)
    spec = spec_from_texts(
        texts, variables, s, nu,
        positive=bool(data.get("positive", True)),
        symbols=_symbols(data, path),
    )
    logger.debug(f"spec_from_data: {len(texts)} factors in {len(variables)} variables")
    return spec


def polys_from_data(data, path=None):
    """(factors, variable names) without requiring exponents."""
    variables = _variables(data, path)
    symbols = _symbols(data, path)
    polys = []
    for text in _texts(data, path):
        f = parse(text, variables, symbols=list(symbols))
        polys.append(f.substitute(symbols) if symbols else f)
    return polys, variables


def supports_from_data(data, path=None):
    """Supports in the order the monomials are written, for GKZ columns."""
    variables = _variables(data, path)
    symbols = _symbols(data, path)
    return [parse_support(text, variables, list(symbols)) for text in _texts(data, path)]


def optional_numbers(data, key, path=None):
    """The numbers under `key`, or None when the file leaves them out."""
    if key not in data:
        return None
    return _numbers(data[key], key, path)


def load_spec(path, stdin=None):
    return spec_from_data(read_json(path, stdin), path)
