# cli/inputs.py

"""Parsing of vectors and value lists given on the command line or in files."""

from pathlib import Path
from typing import List, Optional

import numpy as np

from ..errors import ParameterError, VectorValidationError
from ..engine.simplex import PositiveVector, ProbVector


def _parse_float(token: str, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParameterError(f"{what}: cannot parse '{token}' as a number") from None


def parse_vector(text: str, name: str = "p") -> np.ndarray:
    """Comma-separated coordinates, e.g. ``0.5,0.25,0.25``."""
    tokens = [tok.strip() for tok in text.split(",")]
    if not tokens or any(tok == "" for tok in tokens):
        raise VectorValidationError("malformed vector", f"'{text}'", name)
    return np.array([_parse_float(tok, name) for tok in tokens])


def read_vector_file(path: str, name: str = "p") -> List[np.ndarray]:
    """
    One vector per line, coordinates separated by whitespace.

    Blank lines and lines starting with ``#`` are skipped.
    """
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise ParameterError(f"{name}: cannot read {path}: {e}") from None
    vectors = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        vectors.append(np.array([_parse_float(tok, f"{name} line {lineno}") for tok in line.split()]))
    if not vectors:
        raise ParameterError(f"{name}: no vectors in {path}")
    return vectors


def load_vectors(inline: Optional[str], path: Optional[str], name: str) -> List[np.ndarray]:
    if (inline is None) == (path is None):
        raise ParameterError(f"give exactly one of --{name} and --{name}-file")
    if inline is not None:
        return [parse_vector(inline, name)]
    return read_vector_file(path, name)


def validate_simplex(coords: np.ndarray, name: str, relint: bool = False) -> ProbVector:
    """Checked as given; inputs are never renormalized."""
    return ProbVector(coords, relint=relint, name=name)


def validate_orthant(coords: np.ndarray, name: str) -> PositiveVector:
    return PositiveVector(coords, name=name)


def pair_up(ps: List[np.ndarray], qs: List[np.ndarray]) -> List[tuple]:
    """Match vectors line by line; a single vector on one side is reused for every line."""
    if len(ps) == len(qs):
        return list(zip(ps, qs))
    if len(ps) == 1:
        return [(ps[0], q) for q in qs]
    if len(qs) == 1:
        return [(p, qs[0]) for p in ps]
    raise ParameterError(f"p has {len(ps)} vectors but q has {len(qs)}")


def parse_float_list(text: str) -> List[float]:
    """``-1,0,0.5`` → [-1.0, 0.0, 0.5]; used as an argparse type."""
    values = [tok.strip() for tok in str(text).split(",") if tok.strip()]
    if not values:
        raise ParameterError(f"empty list '{text}'")
    return [_parse_float(tok, "list") for tok in values]


def parse_int_list(text: str) -> List[int]:
    out = []
    for value in parse_float_list(text):
        if not value.is_integer():
            raise ParameterError(f"expected integers, got {value:g}")
        out.append(int(value))
    return out
