# engine/extremal.py

"""
Extremal structure behind the sharp constants.

Along a segment through ζ with direction v, 2·D_α(p‖q)/‖p−q‖₁² tends to the
quadratic form Σ v_k² ζ_k^{α−2}. Minimizing first over ζ (closed form in the
weights v²) and then over unit tangent directions gives C_{α,K}; the
minimizers assemble into pairs (p, q) whose ratio converges to the constant.
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Iterable, Union

import numpy as np

from ..errors import DomainError, ParameterError
from .divergences import bregman_batch
from .pinsker import sharp_constant
from .simplex import PositiveVector, ProbVector, TangentUnitVector, VectorLike, as_array, pair_arrays, project_onto_simplex
from .tsallis import AlphaLike, coerce_alpha, power

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 1e-6
PGD_FLOOR = 1e-12
WITNESS_GRID = 2.0 ** -52


class WitnessKind(IntEnum):
    SHARPNESS = 1
    NO_PINSKER = 2          # α > 2, K ≥ 3 family with vanishing ratio
    ORTHANT_ALPHA2 = 3      # equality case q = p + c·1 at α = 2
    ORTHANT_GENERAL = 4     # ratio → 0 on the orthant for α ≠ 2


def dual_exponent(alpha: AlphaLike) -> float:
    """β = 2/(3−α) for α < 3."""
    return coerce_alpha(alpha).dual_exponent


# ----------------------------------------------------------------------------
# Quadratic form and its inner minimization
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadraticFormPoint:
    alpha: float
    gamma: np.ndarray
    v: np.ndarray
    value: float

    def recompute(self) -> float:
        return float(quadratic_form_batch(self.alpha, self.gamma, self.v))


def quadratic_form_batch(alpha: AlphaLike, G: np.ndarray, V: np.ndarray) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    return (V * V * power(np.asarray(G, dtype=float), coerce_alpha(alpha).value - 2.0)).sum(axis=-1)


def quadratic_form(alpha: AlphaLike, gamma: VectorLike, v: VectorLike) -> QuadraticFormPoint:
    """Σ v_k² γ_k^{α−2} at an interior point γ and tangent direction v."""
    a = coerce_alpha(alpha)
    g = gamma if isinstance(gamma, ProbVector) else ProbVector(as_array(gamma), relint=True, name="gamma")
    if not g.is_interior:
        raise ParameterError("gamma must lie in the relative interior")
    u = v if isinstance(v, TangentUnitVector) else TangentUnitVector(as_array(v))
    if g.K != u.K:
        raise ParameterError(f"dimension mismatch: K={g.K} vs K={u.K}")
    value = float(quadratic_form_batch(a, g.coords, u.coords))
    return QuadraticFormPoint(alpha=a.value, gamma=g.coords, v=u.coords, value=value)


@dataclass(frozen=True, eq=False)
class GammaOptimum:
    gamma: ProbVector
    value: float
    boundary: bool


def _check_weights(nu: float, lam: VectorLike) -> np.ndarray:
    if not nu >= 0:
        raise ParameterError(f"nu must be nonnegative, got {nu}")
    weights = as_array(lam).astype(float)
    if weights.ndim != 1 or weights.size < 2:
        raise ParameterError("weights must be a vector with at least two entries")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ParameterError("weights must be finite and nonnegative")
    if not np.any(weights > 0):
        raise ParameterError("at least one weight must be positive")
    return weights


def optimal_gamma_for_weights(nu: float, lam: VectorLike) -> GammaOptimum:
    """
    inf over interior γ of Σ λ_k γ_k^{−ν}.

    The optimizer is γ̂_k ∝ λ_k^{1/(ν+1)} and the infimum equals
    (Σ λ_k^{1/(ν+1)})^{ν+1}. With zero weights γ̂ lands on the boundary: the
    infimum is then approached but not attained, and ``boundary`` is True.

    Args:
        nu: Exponent ν ≥ 0
        lam: Nonnegative weights, not all zero

    Returns:
        GammaOptimum
    """
    weights = _check_weights(nu, lam)
    root = power(weights, 1.0 / (nu + 1.0))
    total = float(root.sum())
    boundary = bool(np.any(weights == 0))
    gamma = ProbVector(root / total, relint=not boundary, name="gamma")
    return GammaOptimum(gamma=gamma, value=total ** (nu + 1.0), boundary=boundary)


def projected_gradient_gamma(nu: float, lam: VectorLike, iterations: int = 10_000,
                              floor: float = PGD_FLOOR) -> GammaOptimum:
    """
    Projected-gradient minimization of Σ λ_k γ_k^{−ν} over {γ ≥ floor, Σγ = 1}.

    Independent numerical counterpart of ``optimal_gamma_for_weights``. The
    step starts from the inverse of the largest local curvature and is halved
    until the sufficient-decrease test holds.
    """
    weights = _check_weights(nu, lam)
    K = weights.size

    def objective(g: np.ndarray) -> float:
        return float((weights * power(g, -nu)).sum())

    gamma = np.full(K, 1.0 / K)
    value = objective(gamma)
    if nu == 0:
        return GammaOptimum(gamma=ProbVector(gamma, relint=True, name="gamma"), value=value, boundary=False)

    for _ in range(iterations):
        grad = -nu * weights * power(gamma, -nu - 1.0)
        curvature = float((nu * (nu + 1.0) * weights * power(gamma, -nu - 2.0)).max())
        step = 1.0 / curvature
        while True:
            candidate = project_onto_simplex(gamma - step * grad, floor)
            move = candidate - gamma
            candidate_value = objective(candidate)
            if candidate_value <= value + float(grad @ move) + float(move @ move) / (2.0 * step):
                break
            step *= 0.5
            if step < 1e-300:
                break
        if candidate_value >= value:
            break
        gamma, value = candidate, candidate_value

    return GammaOptimum(gamma=ProbVector(gamma, relint=True, name="gamma"), value=value, boundary=False)


# ----------------------------------------------------------------------------
# Outer minimization over tangent directions
# ----------------------------------------------------------------------------

def min_tangent_norm(beta: float, K: int) -> tuple[TangentUnitVector, float]:
    """
    Minimum of ‖v‖_β over sum-zero v with ‖v‖₁ = 1.

    β < 1: attained at (½, −½, 0, …, 0) with value 2^{1/β − 1}.
    β > 1: attained at the equalized vector with 1/(2⌊K/2⌋) on the first
    ⌊K/2⌋ coordinates and −1/(2⌈K/2⌉) on the rest, value
    ½(⌊K/2⌋^{1−β} + ⌈K/2⌉^{1−β})^{1/β}.
    """
    if isinstance(K, bool) or K < 2:
        raise ParameterError(f"K must be an integer ≥ 2, got {K!r}")
    if not beta > 0 or beta == 1:
        raise ParameterError(f"beta must be positive and different from 1, got {beta}")
    v = np.zeros(K)
    if beta < 1:
        v[0], v[1] = 0.5, -0.5
        value = 2.0 ** (1.0 / beta - 1.0)
    else:
        lo = K // 2
        hi = K - lo
        v[:lo] = 1.0 / (2 * lo)
        v[lo:] = -1.0 / (2 * hi)
        value = 0.5 * (lo ** (1.0 - beta) + hi ** (1.0 - beta)) ** (1.0 / beta)
    return TangentUnitVector(v), value


# ----------------------------------------------------------------------------
# Witness pairs
# ----------------------------------------------------------------------------

def witness_ratio(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> float:
    """2·D_α(p‖q)/‖p−q‖₁², the quantity bounded below by C_{α,K}."""
    P, Q = pair_arrays(p, q)
    l1 = float(np.abs(P - Q).sum())
    if l1 == 0:
        raise DomainError("ratio undefined for p = q")
    return 2.0 * float(bregman_batch(alpha, P, Q)) / (l1 * l1)


def sharpness_geometry(alpha: AlphaLike, K: int, delta: float = DEFAULT_DELTA) -> tuple[np.ndarray, np.ndarray]:
    """
    Center ζ and direction u of the sharpness segment.

    α ≤ 1: u = (½, −½, 0, …); the optimal ζ sits on a face, so for K ≥ 3 the
    interior surrogate puts (1−δ)/2 on the two support coordinates and
    δ/(K−2) elsewhere.
    1 < α ≤ 2: u is the equalized minimizer and ζ the interior optimizer of
    Σ u_k² ζ_k^{α−2}.
    α > 2, K = 2: ζ = (1−δ, δ) on the segment toward the vertex for α < 3,
    ζ = (½, ½) for α ≥ 3.
    """
    a = coerce_alpha(alpha)
    if isinstance(K, bool) or K < 2:
        raise ParameterError(f"K must be an integer ≥ 2, got {K!r}")
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")

    if a.value <= 1:
        u = np.zeros(K)
        u[0], u[1] = 0.5, -0.5
        if K == 2:
            zeta = np.array([0.5, 0.5])
        else:
            zeta = np.full(K, delta / (K - 2))
            zeta[:2] = (1.0 - delta) / 2.0
    elif a.value <= 2:
        u = min_tangent_norm(a.dual_exponent, K)[0].coords.copy()
        zeta = optimal_gamma_for_weights(2.0 - a.value, u * u).gamma.coords.copy()
    elif K == 2:
        u = np.array([0.5, -0.5])
        zeta = np.array([1.0 - delta, delta]) if a.value < 3 else np.array([0.5, 0.5])
    else:
        raise ParameterError(f"no sharpness witness for alpha={a.value:g} > 2 and K={K} ≥ 3; "
                             "the constant is 0 (use no_pinsker_witness)")
    return zeta, u


def sharpness_t_max(alpha: AlphaLike, K: int, delta: float = DEFAULT_DELTA) -> float:
    """Largest t keeping ζ ± (t/2)u in the interior."""
    zeta, u = sharpness_geometry(alpha, K, delta)
    support = u != 0
    return float((2.0 * zeta[support] / np.abs(u[support])).min())


def sharpness_witness(alpha: AlphaLike, K: int, t: float,
                      delta: float = DEFAULT_DELTA) -> tuple[ProbVector, ProbVector]:
    """
    Pair p = ζ + (t/2)u, q = ζ − (t/2)u with 2D_α(p‖q)/‖p−q‖₁² → C_{α,K} as t → 0.

    Args:
        alpha: Index ≤ 2, or any α > 2 with K = 2
        K: Dimension
        t: Segment length ‖p−q‖₁, in (0, t_max)
        delta: Boundary offset of the interior surrogate

    Returns:
        (p, q) interior points
    """
    zeta, u = sharpness_geometry(alpha, K, delta)
    support = u != 0
    t_max = float((2.0 * zeta[support] / np.abs(u[support])).min())
    if not 0 < t < t_max:
        raise ParameterError(f"t must lie in (0, {t_max:.6g}) for this witness, got {t}")

    # on the 2^-52 grid both sums are exact: p − q = 2·half and Σ(p − q) = 0
    zeta = np.round(zeta / WITNESS_GRID) * WITNESS_GRID
    zeta[-1] = 1.0 - zeta[:-1].sum()
    half = np.round(0.5 * t * u / WITNESS_GRID) * WITNESS_GRID
    half[-1] = -half[:-1].sum()
    if np.any(half[support] == 0):
        raise ParameterError(f"t={t} is below the resolution of the witness grid")
    logger.debug("sharpness witness alpha=%g K=%d t=%g", coerce_alpha(alpha).value, K, t)
    return (ProbVector(zeta + half, relint=True, name="p"),
            ProbVector(zeta - half, relint=True, name="q"))


def no_pinsker_predicted(alpha: AlphaLike, t: float) -> float:
    """t^{α−2}·(5^{α−1} − 3^{α−1})/(2(α−1)·4^{α−1})."""
    alpha_v = coerce_alpha(alpha).value
    return t ** (alpha_v - 2.0) * (5.0 ** (alpha_v - 1.0) - 3.0 ** (alpha_v - 1.0)) / (
        2.0 * (alpha_v - 1.0) * 4.0 ** (alpha_v - 1.0))


def no_pinsker_ratio(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> float:
    """D_α(p‖q)/‖p−q‖₁² (no factor 2)."""
    return 0.5 * witness_ratio(alpha, p, q)


def no_pinsker_witness(alpha: AlphaLike, K: int, t: float) -> tuple[ProbVector, ProbVector, float]:
    """
    Pair near a vertex whose ratio D_α/‖p−q‖₁² vanishes like t^{α−2}.

    p = (1 − (K−1)t, 3t/4, 5t/4, t, …, t) and q swaps the second and third
    coordinates; ‖p−q‖₁ = t.

    Args:
        alpha: Index > 2
        K: Dimension ≥ 3
        t: In (0, 1/(K−1))

    Returns:
        (p, q, predicted ratio)
    """
    a = coerce_alpha(alpha)
    if a.value <= 2:
        raise ParameterError(f"no-Pinsker witness requires alpha > 2, got {a.value:g}")
    if isinstance(K, bool) or K < 3:
        raise ParameterError(f"no-Pinsker witness requires K ≥ 3, got {K!r}")
    if not 0 < t < 1.0 / (K - 1):
        raise ParameterError(f"t must lie in (0, 1/(K−1)) = (0, {1.0 / (K - 1):.6g}), got {t}")
    p = np.full(K, float(t))
    p[0] = 1.0 - (K - 1) * t
    q = p.copy()
    p[1], p[2] = 0.75 * t, 1.25 * t
    q[1], q[2] = 1.25 * t, 0.75 * t
    return (ProbVector(p, relint=True, name="p"), ProbVector(q, relint=True, name="q"),
            no_pinsker_predicted(a, t))


def orthant_witness(alpha: AlphaLike, K: int, t: float) -> tuple[PositiveVector, PositiveVector, float]:
    """
    Orthant pair q = t·1, p = q + ε·e₁ showing the orthant constant is 0 for α ≠ 2.

    ε = 1/t for α < 2 (drive t → ∞) and ε = t for α > 2 (drive t → 0).
    The ratio behaves like t^{α−2} only up to a constant factor: for α > 2 it
    equals 2·g_α(2)·t^{α−2} with g_α(x) = (x^α − 1 − α(x − 1))/(α(α − 1)),
    i.e. (4/3)·t at α = 3.

    Returns:
        (p, q, 2·D_α(p‖q)/ε²)
    """
    a = coerce_alpha(alpha)
    if a.value == 2:
        raise ParameterError("orthant witness is for alpha ≠ 2; use orthant_alpha2_witness")
    if isinstance(K, bool) or K < 2:
        raise ParameterError(f"K must be an integer ≥ 2, got {K!r}")
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    eps = 1.0 / t if a.value < 2 else float(t)
    q = np.full(K, float(t))
    p = q.copy()
    p[0] += eps
    gap = float(p[0] - q[0])
    ratio = 2.0 * float(bregman_batch(a, p, q)) / (gap * gap)
    return PositiveVector(p, name="p"), PositiveVector(q, name="q"), ratio


def orthant_alpha2_witness(K: int, t: float, base: VectorLike = None) -> tuple[PositiveVector, PositiveVector]:
    """Equality case of the α = 2 orthant bound: q = base + t·1 (base defaults to 1/K·1)."""
    if isinstance(K, bool) or K < 2:
        raise ParameterError(f"K must be an integer ≥ 2, got {K!r}")
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    p = np.full(K, 1.0 / K) if base is None else as_array(base).astype(float)
    if p.size != K:
        raise ParameterError(f"base has dimension {p.size}, expected {K}")
    return PositiveVector(p, name="p"), PositiveVector(p + t, name="q")


def _orthant_general_leading(alpha_v: float, t: float) -> float:
    if alpha_v < 2:
        return t ** (alpha_v - 2.0)
    # ε = t: 2·g_α(2)·t^{α−2} with g_α(x) = (x^α − 1 − α(x−1))/(α(α−1))
    g2 = (2.0 ** alpha_v - 1.0 - alpha_v) / (alpha_v * (alpha_v - 1.0))
    return 2.0 * g2 * t ** (alpha_v - 2.0)


# ----------------------------------------------------------------------------
# Families
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessPoint:
    t: float
    p: np.ndarray
    q: np.ndarray
    ratio: float
    predicted: float


@dataclass(frozen=True)
class WitnessFamily:
    """
    One-parameter witness family t ↦ (p(t), q(t)).

    ``ratio`` follows the family's own convention: 2D/‖p−q‖₁² for sharpness
    and orthant families, D/‖p−q‖₁² for the no-Pinsker family.
    """
    kind: WitnessKind
    alpha: float
    K: int
    t_range: tuple[float, float]
    build: Callable[[float], tuple]
    ratio_of: Callable[[np.ndarray, np.ndarray], float]
    predicted_of: Callable[[float], float]

    def _check_t(self, t: float) -> None:
        lo, hi = self.t_range
        if not lo < t < hi:
            raise ParameterError(f"t must lie in ({lo:g}, {hi:g}) for {self.kind.name}, got {t}")

    def evaluate(self, t: float) -> tuple:
        self._check_t(t)
        return self.build(t)

    def ratio(self, t: float) -> float:
        p, q = self.evaluate(t)[:2]
        return self.ratio_of(as_array(p), as_array(q))

    def predicted(self, t: float) -> float:
        self._check_t(t)
        return self.predicted_of(t)

    def trajectory(self, ts: Iterable[float]) -> list[WitnessPoint]:
        points = []
        for t in ts:
            p, q = (as_array(x) for x in self.evaluate(t)[:2])
            points.append(WitnessPoint(t=float(t), p=p, q=q, ratio=self.ratio_of(p, q),
                                       predicted=self.predicted_of(t)))
        return points


def sharpness_family(alpha: AlphaLike, K: int, delta: float = DEFAULT_DELTA) -> WitnessFamily:
    a = coerce_alpha(alpha)
    constant = sharp_constant(a, K).value
    return WitnessFamily(
        kind=WitnessKind.SHARPNESS, alpha=a.value, K=K,
        t_range=(0.0, sharpness_t_max(a, K, delta)),
        build=lambda t: sharpness_witness(a, K, t, delta),
        ratio_of=lambda p, q: witness_ratio(a, p, q),
        predicted_of=lambda t: constant,
    )


def no_pinsker_family(alpha: AlphaLike, K: int) -> WitnessFamily:
    a = coerce_alpha(alpha)
    if a.value <= 2 or isinstance(K, bool) or K < 3:
        raise ParameterError(f"no-Pinsker family requires alpha > 2 and K ≥ 3, got alpha={a.value:g}, K={K}")
    return WitnessFamily(
        kind=WitnessKind.NO_PINSKER, alpha=a.value, K=K,
        t_range=(0.0, 1.0 / (K - 1)),
        build=lambda t: no_pinsker_witness(a, K, t),
        ratio_of=lambda p, q: no_pinsker_ratio(a, p, q),
        predicted_of=lambda t: no_pinsker_predicted(a, t),
    )


def orthant_family(alpha: AlphaLike, K: int) -> WitnessFamily:
    a = coerce_alpha(alpha)
    if a.value == 2:
        raise ParameterError("orthant family is for alpha ≠ 2; use orthant_alpha2_family")

    def ratio_of(p: np.ndarray, q: np.ndarray) -> float:
        eps = float(p[0] - q[0])
        return 2.0 * float(bregman_batch(a, p, q)) / (eps * eps)

    return WitnessFamily(
        kind=WitnessKind.ORTHANT_GENERAL, alpha=a.value, K=K,
        t_range=(0.0, float("inf")),
        build=lambda t: orthant_witness(a, K, t),
        ratio_of=ratio_of,
        predicted_of=lambda t: _orthant_general_leading(a.value, t),
    )


def orthant_alpha2_family(K: int, base: Union[VectorLike, None] = None) -> WitnessFamily:
    return WitnessFamily(
        kind=WitnessKind.ORTHANT_ALPHA2, alpha=2.0, K=K,
        t_range=(0.0, float("inf")),
        build=lambda t: orthant_alpha2_witness(K, t, base),
        ratio_of=lambda p, q: witness_ratio(2.0, p, q),
        predicted_of=lambda t: 1.0 / K,
    )
