"""
Utility functions for spec files, point encodings and random streams.
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Tuple, Union

import numpy as np

from .exceptions import DimensionError, SpecError


def load_json_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON document, reporting syntax errors with line and column.

    Args:
        path: Path to the JSON file

    Returns:
        Parsed JSON object
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SpecError(f"cannot read spec file {path}: {e.strerror}") from e

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(
            f"malformed JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}",
            {"line": e.lineno, "column": e.colno},
        ) from e

    if not isinstance(data, dict):
        raise SpecError(f"top-level JSON value in {path} must be an object")
    return data


def parse_point(text: str) -> Tuple[complex, ...]:
    """
    Parse a comma-separated interleaved "re,im,re,im,..." point.

    Args:
        text: Point as given on the command line

    Returns:
        Tuple of complex coordinates
    """
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts or len(parts) % 2:
        raise SpecError(f"point {text!r} must contain an even, non-zero number of floats")
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise SpecError(f"point {text!r} contains a non-numeric entry") from e
    return tuple(complex(values[i], values[i + 1]) for i in range(0, len(values), 2))


def parse_float_list(text: str) -> List[float]:
    """Parse a comma-separated list of floats such as an epsilon grid."""
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise SpecError(f"cannot parse float list {text!r}") from e


def interleave(point: Iterable[complex]) -> List[float]:
    """Encode complex coordinates as [re, im, re, im, ...]."""
    out = []
    for value in np.asarray(list(point), dtype=complex).ravel():
        out.extend([float(value.real), float(value.imag)])
    return out


def as_point(z: Any, n: int) -> np.ndarray:
    """
    Coerce input to a complex array whose last axis has length n.

    Args:
        z: Point or stack of points
        n: Expected ambient dimension

    Returns:
        Complex numpy array
    """
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0 or arr.shape[-1] != n:
        raise DimensionError(n, arr.shape[-1] if arr.ndim else 0)
    return arr


def to_real(z: np.ndarray) -> np.ndarray:
    """Complex vector in C^n to its real representation in R^2n."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def to_complex(x: np.ndarray) -> np.ndarray:
    """Inverse of to_real."""
    x = np.asarray(x, dtype=float)
    half = x.shape[-1] // 2
    return x[..., :half] + 1j * x[..., half:]


def make_rng(seed: Union[int, np.random.SeedSequence, None]) -> np.random.Generator:
    """Deterministic generator from an integer seed or seed sequence."""
    return np.random.default_rng(seed)


def spawn_seeds(seed: Union[int, np.random.SeedSequence], count: int) -> List[np.random.SeedSequence]:
    """Independent child streams, one per task, for order-independent parallel runs."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return seed.spawn(count)


def seed_record(seed: Union[int, np.random.SeedSequence]) -> Any:
    """JSON form of a seed: the integer itself or entropy plus spawn key."""
    if isinstance(seed, np.random.SeedSequence):
        return {"entropy": seed.entropy, "spawn_key": list(seed.spawn_key)}
    return seed


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian samples."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_phase(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform points on the unit circle."""
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, shape))
