# engine/simplex.py

"""Vector types on the probability simplex, norms and samplers."""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import ParameterError, VectorValidationError
from ..utils.seeding import SeedLike, make_generator

logger = logging.getLogger(__name__)

SUM_TOL = 1e-12
DEFAULT_MARGIN = 1e-9
BRUTEFORCE_MAX_K = 20


def _coerce_coords(coords, name: str) -> np.ndarray:
    arr = np.array(coords, dtype=float)
    if arr.ndim != 1:
        raise VectorValidationError("not a vector", f"shape {arr.shape}", name)
    if arr.size < 2:
        raise VectorValidationError("K < 2", f"got K={arr.size}", name)
    if not np.all(np.isfinite(arr)):
        raise VectorValidationError("non-finite coordinate", "", name)
    # -0.0 -> +0.0
    return arr + 0.0


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Point of the closed simplex; ``relint=True`` additionally demands p_k > 0."""

    coords: np.ndarray
    relint: bool = False
    name: str = "p"

    def __post_init__(self):
        arr = _coerce_coords(self.coords, self.name)
        if np.any(arr < 0):
            raise VectorValidationError("negative coordinate", f"min {arr.min():.17g}", self.name)
        if self.relint and np.any(arr <= 0):
            raise VectorValidationError("nonpositive coordinate", "relative interior required", self.name)
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise VectorValidationError("sum ≠ 1", f"coordinates sum to {total:.17g}", self.name)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def K(self) -> int:
        return int(self.coords.size)

    @property
    def is_interior(self) -> bool:
        """True when every coordinate is strictly positive."""
        return bool(np.all(self.coords > 0))


@dataclass(frozen=True, eq=False)
class PositiveVector:
    """Point of the open positive orthant."""

    coords: np.ndarray
    name: str = "x"

    def __post_init__(self):
        arr = _coerce_coords(self.coords, self.name)
        if np.any(arr <= 0):
            raise VectorValidationError("nonpositive coordinate", f"min {arr.min():.17g}", self.name)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def K(self) -> int:
        return int(self.coords.size)


@dataclass(frozen=True, eq=False)
class TangentUnitVector:
    """Sum-zero vector with unit ℓ₁ norm (a direction inside the simplex)."""

    coords: np.ndarray
    name: str = "v"

    def __post_init__(self):
        arr = _coerce_coords(self.coords, self.name)
        total = float(arr.sum())
        if abs(total) > SUM_TOL:
            raise VectorValidationError("sum ≠ 0", f"coordinates sum to {total:.17g}", self.name)
        l1 = float(np.abs(arr).sum())
        if abs(l1 - 1.0) > SUM_TOL:
            raise VectorValidationError("ℓ₁ ≠ 1", f"ℓ₁ norm is {l1:.17g}", self.name)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def K(self) -> int:
        return int(self.coords.size)


VectorLike = Union[ProbVector, PositiveVector, TangentUnitVector, np.ndarray, list, tuple]


def as_array(x: VectorLike) -> np.ndarray:
    """Coordinates of a vector type, or ``x`` itself as a float array."""
    if isinstance(x, (ProbVector, PositiveVector, TangentUnitVector)):
        return x.coords
    return np.asarray(x, dtype=float)


def pair_arrays(p: VectorLike, q: VectorLike) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of two vectors that must share the dimension K."""
    a, b = as_array(p), as_array(q)
    if a.shape[-1] != b.shape[-1]:
        raise ParameterError(f"dimension mismatch: K={a.shape[-1]} vs K={b.shape[-1]}")
    return a, b


def lp_norm(x: VectorLike, beta: float) -> Union[float, np.ndarray]:
    """
    (Σ|x_k|^β)^{1/β} over the last axis; a quasi-norm when β < 1.

    Args:
        x: Vector or batch of vectors (rows)
        beta: Exponent, must be positive

    Returns:
        Float for a single vector, array for a batch
    """
    if not beta > 0:
        raise ParameterError(f"lp_norm needs beta > 0, got {beta}")
    arr = np.abs(as_array(x))
    if beta == 1:
        out = arr.sum(axis=-1)
    elif beta == 2:
        out = np.sqrt((arr * arr).sum(axis=-1))
    else:
        out = (arr ** beta).sum(axis=-1) ** (1.0 / beta)
    return float(out) if np.ndim(out) == 0 else out


def l1_distance(p: VectorLike, q: VectorLike) -> Union[float, np.ndarray]:
    a, b = pair_arrays(p, q)
    out = np.abs(a - b).sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def tv_distance(p: VectorLike, q: VectorLike) -> Union[float, np.ndarray]:
    """Total variation ½‖p−q‖₁."""
    return 0.5 * l1_distance(p, q)


def tv_distance_bruteforce(p: VectorLike, q: VectorLike) -> Union[float, np.ndarray]:
    """
    Total variation as sup over events A ⊆ {1..K} of |p(A) − q(A)|.

    Enumerates all 2^K events, so K is capped at 20.
    """
    a, b = pair_arrays(p, q)
    K = a.shape[-1]
    if K > BRUTEFORCE_MAX_K:
        raise ParameterError(f"brute-force total variation limited to K ≤ {BRUTEFORCE_MAX_K}, got {K}")
    masks = ((np.arange(2 ** K)[:, None] >> np.arange(K)) & 1).astype(float)
    out = np.abs((a - b) @ masks.T).max(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def sample_relint_batch(K: int, n: int, rng: SeedLike = None, margin: float = DEFAULT_MARGIN) -> np.ndarray:
    """
    Draw ``n`` interior points with every coordinate ≥ margin.

    A flat Dirichlet draw is shrunk toward the margin floor:
    x = margin + (1 − K·margin)·d.

    Args:
        K: Dimension, at least 2
        n: Number of rows
        rng: Seed or Generator
        margin: Coordinate floor in (0, 1/K)

    Returns:
        Array of shape (n, K)
    """
    if K < 2:
        raise ParameterError(f"K must be at least 2, got {K}")
    if not 0 < margin < 1.0 / K:
        raise ParameterError(f"margin must lie in (0, 1/K) = (0, {1.0 / K:.6g}), got {margin}")
    gen = make_generator(rng)
    d = gen.dirichlet(np.ones(K), size=n)
    return margin + (1.0 - K * margin) * d


def sample_relint(K: int, rng_seed: SeedLike = None, margin: float = DEFAULT_MARGIN) -> ProbVector:
    """Single interior draw, deterministic in ``rng_seed``."""
    return ProbVector(sample_relint_batch(K, 1, rng_seed, margin)[0], relint=True)


def sample_tangent_batch(K: int, n: int, rng: SeedLike = None) -> np.ndarray:
    """
    Draw ``n`` sum-zero rows with unit ℓ₁ norm.

    Gaussian draws are centered and rescaled. For K = 2 the only such vectors
    are ±(½, −½), returned exactly.

    Returns:
        Array of shape (n, K)
    """
    if K < 2:
        raise ParameterError(f"K must be at least 2, got {K}")
    gen = make_generator(rng)
    if K == 2:
        signs = gen.choice(np.array([-1.0, 1.0]), size=n)
        return signs[:, None] * np.array([0.5, -0.5]) + 0.0

    z = gen.standard_normal((n, K))
    z -= z.mean(axis=1, keepdims=True)
    l1 = np.abs(z).sum(axis=1)
    while np.any(l1 == 0):
        bad = l1 == 0
        redraw = gen.standard_normal((int(bad.sum()), K))
        z[bad] = redraw - redraw.mean(axis=1, keepdims=True)
        l1 = np.abs(z).sum(axis=1)
    return z / l1[:, None] + 0.0


def sample_tangent_unit(K: int, rng_seed: SeedLike = None) -> TangentUnitVector:
    """Single tangent direction, deterministic in ``rng_seed``."""
    return TangentUnitVector(sample_tangent_batch(K, 1, rng_seed)[0])


def project_onto_simplex(y: VectorLike, floor: float = 0.0) -> np.ndarray:
    """
    Euclidean projection of ``y`` onto {x : x_k ≥ floor, Σx = 1}.

    Sort-based: shift by the floor, project onto the scaled simplex of mass
    1 − K·floor, shift back.
    """
    c = as_array(y).astype(float)
    K = c.size
    if not 0 <= floor < 1.0 / K:
        raise ParameterError(f"floor must lie in [0, 1/K), got {floor}")
    mass = 1.0 - K * floor
    shifted = c - floor
    a = -np.sort(-shifted)
    thresholds = (np.cumsum(a) - mass) / np.arange(1, K + 1)
    k = int(np.nonzero(a > thresholds)[0][-1])
    return np.maximum(shifted - thresholds[k], 0.0) + floor
