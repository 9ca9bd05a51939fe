# engine/pinsker.py

"""
Sharp strong-convexity constants C_{α,K} of −S_α with respect to ‖·‖₁.

For p, q in the simplex interior, D_α(p‖q) ≥ (C_{α,K}/2)·‖p−q‖₁², and no
larger constant works. The value depends on which of five regimes (α, K)
falls in.
"""

import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Union

import numpy as np

from ..errors import ParameterError
from .simplex import VectorLike, pair_arrays
from .tsallis import AlphaLike, coerce_alpha

logger = logging.getLogger(__name__)


class PinskerRegime(IntEnum):
    ALPHA_LE1 = 1           # 2^{1−α}
    ALPHA_1_2_EVEN = 2      # K^{1−α}
    ALPHA_1_2_ODD = 3       # K^{1−α}·σ
    ALPHA_GT2_K2 = 4        # 2^{1−max(α,3)}
    ALPHA_GT2_KGE3 = 5      # 0


class ClipMode(IntEnum):
    """Which side of the pair is kept away from the boundary."""
    BOTH = 1
    P_ONLY = 2
    Q_ONLY = 3

    @classmethod
    def parse(cls, mode: Union["ClipMode", str]) -> "ClipMode":
        if isinstance(mode, ClipMode):
            return mode
        key = str(mode).strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            raise ParameterError(f"unknown clip mode '{mode}' (expected both, p-only or q-only)") from None


@dataclass(frozen=True)
class PinskerConstant:
    value: float
    regime: PinskerRegime
    sigma: Optional[float] = None
    alpha: float = math.nan
    K: int = 0

    def __float__(self) -> float:
        return self.value


def _check_K(K: int) -> int:
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or K < 2:
        raise ParameterError(f"K must be an integer ≥ 2, got {K!r}")
    return int(K)


def sigma_factor(alpha: AlphaLike, K: int) -> float:
    """
    Odd-K correction σ_{α,K} for 1 < α ≤ 2.

    σ = (((1 − 1/K)^e + (1 + 1/K)^e) / 2)^{3−α} with e = (1−α)/(3−α).
    At α = 2 the exponent e = −1 gives σ = K²/(K² − 1) in closed form.

    Args:
        alpha: Index in (1, 2]
        K: Odd dimension, at least 3

    Returns:
        σ > 1
    """
    a = coerce_alpha(alpha)
    K = _check_K(K)
    if not 1 < a.value <= 2:
        raise ParameterError(f"sigma is defined for 1 < alpha ≤ 2, got {a.value:g}")
    if K % 2 == 0:
        raise ParameterError(f"sigma is defined for odd K, got K={K}")
    if a.value == 2:
        return float(K * K) / float(K * K - 1)
    e = (1.0 - a.value) / (3.0 - a.value)
    inv = 1.0 / K
    mean = 0.5 * (math.exp(e * math.log1p(-inv)) + math.exp(e * math.log1p(inv)))
    return math.exp((3.0 - a.value) * math.log(mean))


def sigma_bounds(alpha: AlphaLike, K: int) -> tuple[float, float]:
    """Bracket 1 + (α−1)/((3−α)K²) ≤ σ_{α,K} ≤ 1 + 7(α−1)/(6(3−α)K²)."""
    a = coerce_alpha(alpha)
    K = _check_K(K)
    if not 1 < a.value <= 2:
        raise ParameterError(f"sigma is defined for 1 < alpha ≤ 2, got {a.value:g}")
    base = (a.value - 1.0) / ((3.0 - a.value) * K * K)
    return 1.0 + base, 1.0 + 7.0 * base / 6.0


def sharp_constant(alpha: AlphaLike, K: int) -> PinskerConstant:
    """
    Largest C with D_α(p‖q) ≥ (C/2)·‖p−q‖₁² on the simplex interior.

    Args:
        alpha: Entropy index (any real)
        K: Number of outcomes, at least 2

    Returns:
        PinskerConstant with the regime tag and, for odd K in (1, 2], σ
    """
    a = coerce_alpha(alpha)
    K = _check_K(K)
    alpha_v = a.value
    sigma = None

    if alpha_v <= 1:
        regime = PinskerRegime.ALPHA_LE1
        value = 2.0 ** (1.0 - alpha_v)
    elif alpha_v <= 2:
        if K % 2 == 0:
            regime = PinskerRegime.ALPHA_1_2_EVEN
            value = float(K) ** (1.0 - alpha_v)
        else:
            regime = PinskerRegime.ALPHA_1_2_ODD
            sigma = sigma_factor(a, K)
            value = K / float(K * K - 1) if alpha_v == 2 else float(K) ** (1.0 - alpha_v) * sigma
    elif K == 2:
        regime = PinskerRegime.ALPHA_GT2_K2
        value = 2.0 ** (1.0 - max(alpha_v, 3.0))
    else:
        regime = PinskerRegime.ALPHA_GT2_KGE3
        value = 0.0

    logger.debug("C(alpha=%g, K=%d) = %.17g [%s]", alpha_v, K, value, regime.name)
    return PinskerConstant(value=value, regime=regime, sigma=sigma, alpha=alpha_v, K=K)


def strong_convexity_param(alpha: AlphaLike, K: int) -> float:
    """Strong-convexity modulus of −S_α w.r.t. ‖·‖₁ on the simplex interior."""
    return sharp_constant(alpha, K).value


def orthant_constant_alpha2(K: int) -> float:
    """
    Constant C with D₂(p‖q) ≥ (C/2)‖p−q‖₁² on the positive orthant.

    Stored as 1/K, i.e. the bound is ‖p−q‖₁²/(2K); equality for q = p + c·1.
    """
    return 1.0 / _check_K(K)


def orthant_constant(alpha: AlphaLike, K: int) -> float:
    """Orthant counterpart of C_{α,K}: 1/K at α = 2 and 0 for every other α."""
    a = coerce_alpha(alpha)
    K = _check_K(K)
    if a.value == 2:
        return orthant_constant_alpha2(K)
    return 0.0


_CLIP_FACTORS = {
    ClipMode.BOTH: lambda alpha: 1.0,
    ClipMode.P_ONLY: lambda alpha: 2.0 / (alpha * (alpha - 1.0)),
    ClipMode.Q_ONLY: lambda alpha: 2.0 / alpha,
}


def _clip_prefactor(alpha: AlphaLike, K: int, mode: Union[ClipMode, str]) -> tuple[float, float]:
    a = coerce_alpha(alpha)
    K = _check_K(K)
    if a.value <= 2 or K < 3:
        raise ParameterError(f"clipped constants apply to alpha > 2 and K ≥ 3, got alpha={a.value:g}, K={K}")
    mode = ClipMode.parse(mode)
    return a.value, sharp_constant(2.0, K).value * _CLIP_FACTORS[mode](a.value)


def clipped_constant(alpha: AlphaLike, K: int, mode: Union[ClipMode, str], eps: float) -> float:
    """
    Pinsker constant when coordinates are kept ≥ ε (α > 2, K ≥ 3).

    BOTH: C_{2,K}·ε^{α−2}; P_ONLY: C_{2,K}·2/(α(α−1))·ε^{α−2};
    Q_ONLY: C_{2,K}·2/α·ε^{α−2}.
    """
    alpha_v, prefactor = _clip_prefactor(alpha, K, mode)
    if not 0 < eps < 1.0 / K:
        raise ParameterError(f"eps must lie in (0, 1/K) = (0, {1.0 / K:.6g}), got {eps}")
    return prefactor * eps ** (alpha_v - 2.0)


def pair_clipped_constant(alpha: AlphaLike, p: VectorLike, q: VectorLike,
                          mode: Union[ClipMode, str] = ClipMode.BOTH) -> float:
    """Clipped constant with ε replaced by the smallest relevant coordinate of the pair."""
    P, Q = pair_arrays(p, q)
    mode = ClipMode.parse(mode)
    alpha_v, prefactor = _clip_prefactor(alpha, P.size, mode)
    if mode is ClipMode.BOTH:
        floor = min(P.min(), Q.min())
    elif mode is ClipMode.P_ONLY:
        floor = P.min()
    else:
        floor = Q.min()
    if not floor > 0:
        raise ParameterError("pair-dependent constant needs interior points")
    return prefactor * float(floor) ** (alpha_v - 2.0)


def pinsker_lower_bound(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> float:
    """(C_{α,K}/2)·‖p−q‖₁²."""
    P, Q = pair_arrays(p, q)
    l1 = float(np.abs(P - Q).sum())
    return 0.5 * sharp_constant(alpha, P.size).value * l1 * l1


def zero_one_regret_bound(p: VectorLike, q: VectorLike) -> float:
    """
    0–1 regret p_{k*(p)} − p_{k*(q)} of predicting argmax q when p is true.

    Ties break toward the lowest index. The value never exceeds ‖p−q‖₁.
    """
    P, Q = pair_arrays(p, q)
    return float(P[int(np.argmax(P))] - P[int(np.argmax(Q))])


def constant_table(alphas: Iterable[float], Ks: Iterable[int]) -> list[PinskerConstant]:
    """Sharp constants for every (α, K) pair, α-major."""
    Ks = [_check_K(K) for K in Ks]
    return [sharp_constant(alpha, K) for alpha in alphas for K in Ks]
