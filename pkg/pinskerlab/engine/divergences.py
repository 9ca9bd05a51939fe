# engine/divergences.py

"""
Bregman divergences of negative Tsallis entropies (β-divergences), their named
special cases and the Tsallis relative entropy.

The closed form is evaluated coordinate-wise in the ratio form

    q_k^α · (x_k^α − 1 − α(x_k − 1)) / (α(α−1)),   x_k = p_k / q_k,

which equals the β-divergence term and vanishes exactly where p_k = q_k.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import rel_entr

from ..errors import ParameterError, VectorValidationError
from .simplex import ProbVector, VectorLike, pair_arrays
from .tsallis import AlphaLike, Anchor, coerce_alpha, entropy_batch, gradient_batch, loss_batch, power

logger = logging.getLogger(__name__)

EXTENDED_RANGE = "extended-range"


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    finite: bool
    note: Optional[str] = None

    def __float__(self) -> float:
        return self.value


def _wrap(value: float, note: Optional[str] = None) -> DivergenceValue:
    return DivergenceValue(value=value, finite=math.isfinite(value), note=note)


def _orthant_pair(p: VectorLike, q: VectorLike) -> tuple[np.ndarray, np.ndarray]:
    """p may touch the boundary, q must be strictly positive."""
    a, b = pair_arrays(p, q)
    if np.any(a < 0):
        raise VectorValidationError("negative coordinate", "", "p")
    if np.any(b <= 0):
        raise VectorValidationError("nonpositive coordinate", "", "q")
    return a, b


def _interior_pair(p: VectorLike, q: VectorLike) -> tuple[np.ndarray, np.ndarray]:
    a, b = pair_arrays(p, q)
    a = ProbVector(a, relint=True, name="p").coords if not isinstance(p, ProbVector) else a
    b = ProbVector(b, relint=True, name="q").coords if not isinstance(q, ProbVector) else b
    if np.any(a <= 0):
        raise VectorValidationError("nonpositive coordinate", "relative interior required", "p")
    if np.any(b <= 0):
        raise VectorValidationError("nonpositive coordinate", "relative interior required", "q")
    return a, b


# ----------------------------------------------------------------------------
# Batch kernels
# ----------------------------------------------------------------------------

def bregman_batch(alpha: AlphaLike, P: np.ndarray, Q: np.ndarray, clamp: bool = True) -> np.ndarray:
    """
    Closed-form D_α(P‖Q) over the last axis; zeros in P give +inf where appropriate.

    With ``clamp=False`` the raw term sum is returned, ulp-level negatives included.
    """
    a = coerce_alpha(alpha)
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    diff = P - Q

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if a.anchor is Anchor.TWO:
            terms = 0.5 * diff * diff
        elif a.anchor is Anchor.THREE:
            terms = diff * diff * (P + 2.0 * Q) / 6.0
        else:
            d = diff / Q
            if a.anchor is Anchor.ZERO:
                terms = d - np.log1p(d)
            elif a.anchor is Anchor.ONE:
                terms = np.where(P > 0, P * np.log1p(d) - diff, Q)
            else:
                alpha_v = a.value
                g = (np.expm1(alpha_v * np.log1p(d)) - alpha_v * d) / (alpha_v * (alpha_v - 1.0))
                terms = power(Q, alpha_v) * g

    total = terms.sum(axis=-1)
    if not clamp:
        return total
    # rounding can leave a few ulps below zero
    return np.maximum(total, 0.0)


def bregman_from_definition_batch(alpha: AlphaLike, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """f(p) − f(q) − ⟨∇f(q), p − q⟩ with f = −S_α, built from entropy and gradient."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    return (-entropy_batch(alpha, P) + entropy_batch(alpha, Q)
            + (gradient_batch(alpha, Q) * (P - Q)).sum(axis=-1))


def excess_risk_batch(alpha: AlphaLike, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    return (P * (loss_batch(alpha, Q) - loss_batch(alpha, P))).sum(axis=-1)


def tre_batch(alpha: AlphaLike, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Σ q_k f_α(p_k/q_k) with f_α(x) = (x^α − 1)/(α(α−1)); α ∉ {0, 1}."""
    a = coerce_alpha(alpha)
    if a.anchor in (Anchor.ZERO, Anchor.ONE):
        raise ParameterError(f"Tsallis relative entropy is undefined at alpha={a.value:g}; "
                             "use reverse_kl / kl_divergence")
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    alpha_v = a.value
    with np.errstate(divide="ignore", over="ignore"):
        x_pow_minus_one = np.expm1(alpha_v * np.log1p((P - Q) / Q))
    return (Q * x_pow_minus_one).sum(axis=-1) / (alpha_v * (alpha_v - 1.0))


def kl_batch(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    return rel_entr(np.asarray(P, dtype=float), np.asarray(Q, dtype=float)).sum(axis=-1)


# ----------------------------------------------------------------------------
# Public operations
# ----------------------------------------------------------------------------

def bregman(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> DivergenceValue:
    """
    Bregman divergence D_α(p‖q) of −S_α on the positive orthant.

    Equals the β-divergence with β = α: Itakura-Saito at α = 0, the generalized
    KL (I-divergence) at α = 1, ½‖p−q‖² at α = 2.

    Args:
        alpha: Entropy index
        p: Nonnegative vector; zero coordinates may give an infinite value
        q: Strictly positive vector of the same dimension

    Returns:
        DivergenceValue (value ≥ 0, ``finite`` False on boundary blow-up)
    """
    a, b = _orthant_pair(p, q)
    return _wrap(float(bregman_batch(alpha, a, b)))


def bregman_from_definition(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> DivergenceValue:
    """Independent evaluation of D_α from the entropy and its gradient (cross-check path)."""
    a, b = pair_arrays(p, q)
    if np.any(a <= 0) or np.any(b <= 0):
        raise VectorValidationError("nonpositive coordinate", "orthant interior required")
    return _wrap(float(bregman_from_definition_batch(alpha, a, b)))


def excess_risk(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> float:
    """Regret Σ_k p_k (ℓ_α(q,k) − ℓ_α(p,k)) of forecasting q when p is true."""
    a, b = _interior_pair(p, q)
    return float(excess_risk_batch(alpha, a, b))


def kl_divergence(p: VectorLike, q: VectorLike) -> DivergenceValue:
    """KL(p‖q) = Σ p_k ln(p_k/q_k) with 0·ln 0 = 0."""
    a, b = _orthant_pair(p, q)
    return _wrap(float(kl_batch(a, b)))


def reverse_kl(p: VectorLike, q: VectorLike) -> DivergenceValue:
    """KL(q‖p), the partner of D₀ in the α = 0 comparison."""
    return kl_divergence(q, p)


def itakura_saito(p: VectorLike, q: VectorLike) -> DivergenceValue:
    return bregman(0.0, p, q)


def half_squared_euclidean(p: VectorLike, q: VectorLike) -> DivergenceValue:
    return bregman(2.0, p, q)


def tsallis_relative_entropy(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> DivergenceValue:
    """
    Tsallis relative entropy D^TRE_α(p‖q) = Σ q_k f_α(p_k/q_k).

    Defined for α ∉ {0, 1}. Values at α < 0 are an extension beyond the
    range the ordering results are stated for and carry ``note="extended-range"``.
    """
    a = coerce_alpha(alpha)
    P, Q = _orthant_pair(p, q)
    note = None
    if a.value < 0:
        note = EXTENDED_RANGE
        logger.warning("Tsallis relative entropy at alpha=%g < 0 lies in the extended range", a.value)
    return _wrap(float(tre_batch(a, P, Q)), note)


def tre_pinsker_gap(alpha: AlphaLike, p: VectorLike, q: VectorLike) -> float:
    """
    D^TRE_α(p‖q) − ½‖p−q‖₁², nonnegative for α ∈ (0,1) ∪ (1,2].

    Beyond α = 2 the bound fails: at α = 3, q uniform on three outcomes and
    p = (1/30, 29/60, 29/60) the gap is −0.007875.
    """
    a = coerce_alpha(alpha)
    if a.value <= 0 or a.value == 1 or a.value > 2:
        raise ParameterError(f"TRE Pinsker bound needs alpha in (0,1) or (1,2], got {a.value:g}")
    P, Q = _orthant_pair(p, q)
    l1 = float(np.abs(P - Q).sum())
    return float(tre_batch(a, P, Q)) - 0.5 * l1 * l1


def alpha_continuity_probe(alpha: AlphaLike, p: VectorLike, q: VectorLike, delta: float = 1e-6) -> float:
    """
    max(|D_{α+δ} − D_α|, |D_{α−δ} − D_α|) at an anchor α ∈ {0, 1}.

    Shows that the anchor formulas are the continuous extension of the
    generic closed form.
    """
    a = coerce_alpha(alpha)
    if a.anchor not in (Anchor.ZERO, Anchor.ONE):
        raise ParameterError(f"continuity probe is defined at alpha in {{0, 1}}, got {a.value:g}")
    if not delta > 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    P, Q = _orthant_pair(p, q)
    center = float(bregman_batch(a, P, Q))
    upper = float(bregman_batch(a.value + delta, P, Q))
    lower = float(bregman_batch(a.value - delta, P, Q))
    return max(abs(upper - center), abs(lower - center))
