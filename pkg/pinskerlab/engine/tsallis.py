# engine/tsallis.py

"""
Tsallis entropies, the matching proper losses and their derivatives.

Every function dispatches on the exact anchor values α ∈ {0, 1}; nothing is
obtained as a limit. The ``*_batch`` forms work on the last axis of arrays that
the caller has already validated.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional, Union

import numpy as np
from scipy.special import xlogy

from ..errors import ParameterError, VectorValidationError
from .simplex import PositiveVector, ProbVector, VectorLike, as_array

logger = logging.getLogger(__name__)


class AlphaRegime(IntEnum):
    """Which branch of the sharp-constant formula an α falls in."""
    AT_MOST_ONE = 1     # α ≤ 1
    ONE_TO_TWO = 2      # 1 < α ≤ 2
    ABOVE_TWO = 3       # α > 2


class Anchor(IntEnum):
    """Exact α values with their own formulas or fast paths."""
    ZERO = 0
    ONE = 1
    TWO = 2
    THREE = 3


@dataclass(frozen=True)
class AlphaParam:
    value: float
    regime: AlphaRegime = field(init=False)
    anchor: Optional[Anchor] = field(init=False)

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value):
            raise ParameterError(f"alpha must be finite, got {self.value}")
        object.__setattr__(self, "value", value)
        if value <= 1:
            regime = AlphaRegime.AT_MOST_ONE
        elif value <= 2:
            regime = AlphaRegime.ONE_TO_TWO
        else:
            regime = AlphaRegime.ABOVE_TWO
        object.__setattr__(self, "regime", regime)
        anchor = Anchor(int(value)) if value in (0.0, 1.0, 2.0, 3.0) else None
        object.__setattr__(self, "anchor", anchor)

    @classmethod
    def of(cls, value: Union[float, "AlphaParam"]) -> "AlphaParam":
        return value if isinstance(value, AlphaParam) else cls(value)

    @property
    def dual_exponent(self) -> float:
        """β = 2/(3−α), the norm exponent matched to the quadratic form."""
        if self.value >= 3:
            raise ParameterError(f"dual exponent needs alpha < 3, got {self.value}")
        return 2.0 / (3.0 - self.value)


AlphaLike = Union[float, int, AlphaParam]


def coerce_alpha(alpha: AlphaLike) -> AlphaParam:
    return AlphaParam.of(alpha)


@dataclass(frozen=True)
class EntropyValue:
    """Entropy with an explicit finiteness flag (boundary points may give ±inf)."""
    value: float
    finite: bool

    def __float__(self) -> float:
        return self.value


def power(x: np.ndarray, a: float) -> np.ndarray:
    """x^a as exp(a·ln x), with direct products for a ∈ {0, 1, 2, 3}; 0^a = +inf for a < 0."""
    if a == 0:
        return np.ones_like(x)
    if a == 1:
        return x
    if a == 2:
        return x * x
    if a == 3:
        return x * x * x
    with np.errstate(divide="ignore", over="ignore"):
        return np.exp(a * np.log(x))


def _nonnegative(p: VectorLike, name: str) -> np.ndarray:
    arr = as_array(p)
    if np.any(arr < 0):
        raise VectorValidationError("negative coordinate", "", name)
    return arr


def _interior(q: VectorLike, name: str) -> np.ndarray:
    """Coordinates of a relative-interior simplex point."""
    if isinstance(q, ProbVector):
        if not q.is_interior:
            raise VectorValidationError("nonpositive coordinate", "relative interior required", name)
        return q.coords
    return ProbVector(as_array(q), relint=True, name=name).coords


def _positive(x: VectorLike, name: str) -> np.ndarray:
    if isinstance(x, (PositiveVector, ProbVector)):
        arr = x.coords
        if np.any(arr <= 0):
            raise VectorValidationError("nonpositive coordinate", "", name)
        return arr
    return PositiveVector(as_array(x), name=name).coords


# ----------------------------------------------------------------------------
# Batch kernels
# ----------------------------------------------------------------------------

def entropy_batch(alpha: AlphaLike, P: np.ndarray) -> np.ndarray:
    a = coerce_alpha(alpha)
    P = np.asarray(P, dtype=float)
    with np.errstate(divide="ignore"):
        if a.anchor is Anchor.ZERO:
            return np.log(P).sum(axis=-1)
        if a.anchor is Anchor.ONE:
            return -xlogy(P, P).sum(axis=-1)
    alpha_v = a.value
    return power(P, alpha_v).sum(axis=-1) / (alpha_v * (1.0 - alpha_v))


def loss_batch(alpha: AlphaLike, Q: np.ndarray) -> np.ndarray:
    """Losses of every outcome; output has the shape of ``Q``."""
    a = coerce_alpha(alpha)
    Q = np.asarray(Q, dtype=float)
    if a.anchor is Anchor.ZERO:
        K = Q.shape[-1]
        return 1.0 / Q - K + np.log(Q).sum(axis=-1, keepdims=True)
    if a.anchor is Anchor.ONE:
        return -np.log(Q)
    alpha_v = a.value
    return power(Q, alpha_v - 1.0) / (1.0 - alpha_v) + power(Q, alpha_v).sum(axis=-1, keepdims=True) / alpha_v


def gradient_batch(alpha: AlphaLike, P: np.ndarray) -> np.ndarray:
    a = coerce_alpha(alpha)
    P = np.asarray(P, dtype=float)
    if a.anchor is Anchor.ZERO:
        return 1.0 / P
    if a.anchor is Anchor.ONE:
        return -(1.0 + np.log(P))
    return -power(P, a.value - 1.0) / (a.value - 1.0)


def hessian_diag_batch(alpha: AlphaLike, P: np.ndarray) -> np.ndarray:
    a = coerce_alpha(alpha)
    return -power(np.asarray(P, dtype=float), a.value - 2.0)


# ----------------------------------------------------------------------------
# Public operations
# ----------------------------------------------------------------------------

def entropy_value(alpha: AlphaLike, p: VectorLike) -> EntropyValue:
    """
    Tsallis entropy S_α(p) with a finiteness flag.

    Zero coordinates are allowed: S_α(p) is −inf for α ≤ 0 with some p_k = 0.

    Args:
        alpha: Entropy index
        p: Nonnegative vector (simplex or orthant point)

    Returns:
        EntropyValue
    """
    value = float(entropy_batch(alpha, _nonnegative(p, "p")))
    return EntropyValue(value=value, finite=math.isfinite(value))


def entropy(alpha: AlphaLike, p: VectorLike) -> float:
    """S_α(p) as a float; boundary points may give −inf."""
    return entropy_value(alpha, p).value


def loss_vector(alpha: AlphaLike, q: VectorLike) -> np.ndarray:
    """Losses ℓ_α(q, k) for k = 1..K, stored 0-based."""
    return loss_batch(alpha, _interior(q, "q"))


def loss(alpha: AlphaLike, q: VectorLike, k: int) -> float:
    """
    Tsallis loss ℓ_α(q, k) of forecast ``q`` when outcome ``k`` occurs.

    Args:
        alpha: Entropy index
        q: Interior simplex point
        k: Outcome label, 1-based (1 ≤ k ≤ K)

    Returns:
        The loss value
    """
    losses = loss_vector(alpha, q)
    if not 1 <= k <= losses.size:
        raise ParameterError(f"outcome index must lie in 1..{losses.size}, got {k}")
    return float(losses[k - 1])


def bayes_risk(alpha: AlphaLike, p: VectorLike) -> float:
    """Expected loss Σ p_k ℓ_α(p, k) of the truthful forecast."""
    arr = _interior(p, "p")
    return float((arr * loss_batch(alpha, arr)).sum())


def entropy_gradient(alpha: AlphaLike, p: VectorLike) -> np.ndarray:
    """∇S_α(p) on the positive orthant."""
    return gradient_batch(alpha, _positive(p, "p"))


def entropy_hessian_diag(alpha: AlphaLike, p: VectorLike) -> np.ndarray:
    """Diagonal of ∇²S_α(p), i.e. −p_k^{α−2}; the Hessian is diagonal."""
    return hessian_diag_batch(alpha, _positive(p, "p"))
