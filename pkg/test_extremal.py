#!/usr/bin/env python3
"""
Tests for the quadratic form, its inner and outer minimizers, and the
witness families (sharpness, no-Pinsker, orthant).
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from pinskerlab.errors import DomainError, ParameterError
from pinskerlab.engine.extremal import (WitnessKind, min_tangent_norm, no_pinsker_family, no_pinsker_predicted,
                                        no_pinsker_ratio, no_pinsker_witness, optimal_gamma_for_weights,
                                        orthant_alpha2_family, orthant_alpha2_witness, orthant_family,
                                        orthant_witness, projected_gradient_gamma, quadratic_form,
                                        sharpness_family, sharpness_t_max, sharpness_witness, witness_ratio)
from pinskerlab.engine.pinsker import sharp_constant
from pinskerlab.engine.simplex import lp_norm, sample_tangent_batch


def test_quadratic_form_examples():
    v = [0.5, -0.5, 0.0]
    assert quadratic_form(2, [0.2, 0.3, 0.5], v).value == pytest.approx(0.5, rel=1e-15)
    K = 4
    point = quadratic_form(1, np.full(K, 1 / K), [0.5, -0.5, 0.0, 0.0])
    assert point.value == pytest.approx(K / 2, rel=1e-14)
    assert point.recompute() == point.value
    assert quadratic_form(4, [0.5, 0.5], [0.5, -0.5]).value == pytest.approx(0.125, rel=1e-15)


def test_quadratic_form_validation():
    with pytest.raises(ParameterError):
        quadratic_form(1, [1.0, 0.0], [0.5, -0.5])
    with pytest.raises(ParameterError):
        quadratic_form(1, [0.5, 0.5], [0.5, -0.25, -0.25])


def test_optimal_gamma_examples():
    opt = optimal_gamma_for_weights(1, [1, 1])
    np.testing.assert_allclose(opt.gamma.coords, [0.5, 0.5])
    assert opt.value == pytest.approx(4.0, rel=1e-15)
    assert not opt.boundary
    assert optimal_gamma_for_weights(0, [0.3, 0.2, 0.9]).value == pytest.approx(1.4, rel=1e-15)
    flagged = optimal_gamma_for_weights(1, [1, 0, 1])
    assert flagged.value == pytest.approx(4.0, rel=1e-15)
    assert flagged.boundary
    with pytest.raises(ParameterError):
        optimal_gamma_for_weights(1, [0, 0])


def test_projected_gradient_matches_closed_form():
    rng = np.random.default_rng(17)
    for nu in (0.5, 1.0, 2.0):
        lam = rng.uniform(0.1, 1.0, size=4)
        closed = optimal_gamma_for_weights(nu, lam)
        oracle = projected_gradient_gamma(nu, lam)
        assert oracle.value == pytest.approx(closed.value, rel=1e-6), f"nu={nu}"
        assert oracle.value >= closed.value * (1 - 1e-10)


def test_min_tangent_norm_examples():
    v, value = min_tangent_norm(0.5, 5)
    assert value == pytest.approx(2.0, rel=1e-15)
    np.testing.assert_array_equal(v.coords, [0.5, -0.5, 0, 0, 0])
    v, value = min_tangent_norm(2, 3)
    assert value == pytest.approx(math.sqrt(3 / 8), rel=1e-15)
    np.testing.assert_allclose(v.coords, [0.5, -0.25, -0.25])
    v, value = min_tangent_norm(2, 4)
    assert value == pytest.approx(0.5, rel=1e-15)
    with pytest.raises(ParameterError):
        min_tangent_norm(1, 3)
    with pytest.raises(ParameterError):
        min_tangent_norm(-1, 3)


def test_min_tangent_norm_is_never_undercut():
    rng = np.random.default_rng(23)
    for beta in (0.5, 2 / 3, 1.5, 2.0, 3.0):
        for K in (2, 3, 4, 5, 6):
            v, value = min_tangent_norm(beta, K)
            assert lp_norm(v, beta) == pytest.approx(value, abs=1e-12)
            norms = lp_norm(sample_tangent_batch(K, 10_000, rng), beta)
            assert norms.min() >= value - 1e-12, f"beta={beta} K={K}"


def test_squared_min_norm_is_the_constant():
    for alpha in (-1.0, 0.0, 0.5, 1.5, 2.0):
        beta = 2 / (3 - alpha)
        for K in (2, 3, 4, 5, 10):
            _, value = min_tangent_norm(beta, K)
            C = sharp_constant(alpha, K).value
            assert value ** 2 == pytest.approx(C, rel=1e-12), f"alpha={alpha} K={K}"


def test_sharpness_witness_converges():
    p, q = sharpness_witness(1, 2, 1e-4)
    assert witness_ratio(1, p, q) == pytest.approx(1.0, abs=1e-6)
    p, q = sharpness_witness(1.5, 3, 1e-4)
    assert witness_ratio(1.5, p, q) == pytest.approx(sharp_constant(1.5, 3).value, abs=1e-5)
    for alpha in (-1.0, 0.0, 0.5, 1.0, 1.5, 2.0):
        for K in (2, 3, 4, 5):
            p, q = sharpness_witness(alpha, K, 1e-5)
            C = sharp_constant(alpha, K).value
            assert witness_ratio(alpha, p, q) == pytest.approx(C, rel=1e-3), f"alpha={alpha} K={K}"


def test_sharpness_witness_is_exact_at_alpha_two():
    for K in (2, 3, 4, 5, 7):
        C = sharp_constant(2, K).value
        for t in (1e-1, 1e-2, 1e-3, 1e-4):
            p, q = sharpness_witness(2, K, t)
            assert witness_ratio(2, p, q) == pytest.approx(C, rel=1e-12), f"K={K} t={t}"
            assert np.abs(p.coords - q.coords).sum() == pytest.approx(t, rel=1e-9)


def test_sharpness_witness_above_two_binary():
    p, q = sharpness_witness(4, 2, 1e-3)
    assert witness_ratio(4, p, q) == pytest.approx(0.125, rel=1e-3)
    t_max = sharpness_t_max(2.5, 2)
    assert t_max == pytest.approx(4e-6, rel=1e-9)
    p, q = sharpness_witness(2.5, 2, 0.5 * t_max)
    assert witness_ratio(2.5, p, q) == pytest.approx(0.25, rel=1e-2)


def test_sharpness_witness_errors():
    with pytest.raises(ParameterError):
        sharpness_witness(1, 2, 5.0)
    with pytest.raises(ParameterError):
        sharpness_witness(3, 3, 1e-3)


def test_witness_ratio_undefined_on_diagonal():
    with pytest.raises(DomainError):
        witness_ratio(1, [0.5, 0.5], [0.5, 0.5])


def test_no_pinsker_example():
    p, q, predicted = no_pinsker_witness(3, 3, 0.1)
    assert predicted == pytest.approx(0.025, rel=1e-14)
    assert no_pinsker_ratio(3, p, q) == pytest.approx(0.025, abs=1e-12)
    assert np.abs(p.coords - q.coords).sum() == pytest.approx(0.1, rel=1e-14)


def test_no_pinsker_matches_closed_form_and_decreases():
    for alpha in (2.5, 3.0, 4.0):
        for K in (3, 5):
            ratios = []
            for t in (1e-2, 1e-3, 1e-4):
                p, q, predicted = no_pinsker_witness(alpha, K, t)
                ratio = no_pinsker_ratio(alpha, p, q)
                assert ratio == pytest.approx(predicted, rel=1e-9), f"alpha={alpha} K={K} t={t}"
                ratios.append(ratio)
            assert ratios[0] > ratios[1] > ratios[2]


def test_no_pinsker_scaling_in_t():
    alpha = 3.5
    assert no_pinsker_predicted(alpha, 0.005) / no_pinsker_predicted(alpha, 0.01) == \
        pytest.approx(2 ** -(alpha - 2), rel=1e-14)


def test_no_pinsker_errors():
    with pytest.raises(ParameterError):
        no_pinsker_witness(1.5, 3, 0.1)
    with pytest.raises(ParameterError):
        no_pinsker_witness(3, 2, 0.1)
    with pytest.raises(ParameterError):
        no_pinsker_witness(3, 3, 0.6)
    with pytest.raises(ParameterError) as info:
        no_pinsker_family(1.5, 3)
    assert "requires alpha > 2 and K ≥ 3" in str(info.value)


def test_orthant_witnesses():
    # 2·D/ε² = (4/3)·t at α = 3
    _, _, ratio = orthant_witness(3, 2, 0.01)
    assert ratio == pytest.approx(4 / 3 * 0.01, rel=1e-10)
    _, _, ratio = orthant_witness(1, 2, 100)
    assert ratio == pytest.approx(0.01, rel=0.1)
    _, _, ratio = orthant_witness(1, 2, 1e3)
    assert ratio < 1e-2
    _, _, ratio = orthant_witness(3, 2, 1e-3)
    assert ratio < 1e-2
    with pytest.raises(ParameterError):
        orthant_witness(2, 3, 1.0)


def test_orthant_alpha2_equality():
    for K in (2, 3, 5):
        p, q = orthant_alpha2_witness(K, 0.7)
        assert witness_ratio(2, p, q) == pytest.approx(1 / K, rel=1e-12)
    p, q = orthant_alpha2_witness(3, 2.0, base=[0.5, 1.5, 3.0])
    assert witness_ratio(2, p, q) == pytest.approx(1 / 3, rel=1e-12)


def test_families():
    family = sharpness_family(1, 2)
    assert family.kind is WitnessKind.SHARPNESS
    points = family.trajectory([1e-2, 1e-3])
    assert [pt.t for pt in points] == [1e-2, 1e-3]
    assert points[-1].predicted == 1.0
    assert points[-1].ratio == pytest.approx(1.0, abs=1e-5)

    family = no_pinsker_family(3, 3)
    assert family.ratio(0.1) == pytest.approx(family.predicted(0.1), rel=1e-12)
    with pytest.raises(ParameterError):
        family.ratio(0.9)

    family = orthant_family(3, 4)
    assert family.kind is WitnessKind.ORTHANT_GENERAL
    assert family.ratio(1e-3) == pytest.approx(family.predicted(1e-3), rel=1e-2)

    family = orthant_alpha2_family(4)
    assert family.ratio(5.0) == pytest.approx(0.25, rel=1e-12)


def main():
    """Run every test in this module and print a summary."""
    tests = [(name, fn) for name, fn in globals().items() if name.startswith("test_") and callable(fn)]
    print("🧪 Extremal structure and witness tests")
    print("=" * 40)
    failed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e}")
    print(f"\n📊 {len(tests) - failed}/{len(tests)} passed")
    return failed == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
