#!/usr/bin/env python3
"""
Performance and full-scale runs for the pinskerlab harness.
Runs the acceptance-size grids and checks they stay within their time limits.
"""

import os
import sys
import time
from pathlib import Path

import numpy as np

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from pinskerlab.engine.extremal import min_tangent_norm
from pinskerlab.engine.pinsker import constant_table, sharp_constant, zero_one_regret_bound
from pinskerlab.engine.simplex import lp_norm, sample_relint_batch, sample_tangent_batch
from pinskerlab.engine.verify import DEFAULT_ALPHAS, DEFAULT_KS, run_grid, verify_identities

TABLE_ALPHAS = (-1.0, -0.5, 0.0, 0.5, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0)
TABLE_KS = (2, 3, 4, 5, 10)


class PerformanceTester:
    """Time the full-size verification runs."""

    def __init__(self, seed: int = 42):
        self.seed = seed
        self.workers = max(1, min(8, os.cpu_count() or 1))
        self.test_results = []

    def run_test(self, name, test_func):
        """Run a single test and record results."""
        try:
            print(f"\n🧪 {name}")
            print("-" * 50)
            start_time = time.time()
            test_func()
            duration = time.time() - start_time
            result = f"✅ PASS: {name} ({duration:.2f}s)"
            self.test_results.append(('PASS', name, duration))
        except Exception as e:
            duration = time.time() - start_time if 'start_time' in locals() else 0
            result = f"❌ FAIL: {name} - {str(e)} ({duration:.2f}s)"
            self.test_results.append(('FAIL', name, str(e)))

        print(result)
        return result

    def test_constant_table(self):
        start_time = time.time()
        table = constant_table(TABLE_ALPHAS, TABLE_KS)
        build_time = time.time() - start_time
        print(f"Built {len(table)} constants in {build_time * 1000:.1f}ms")
        assert build_time < 1.0, f"Constant table too slow: {build_time:.3f}s"

    def test_constant_grid(self):
        print(f"Verifying {len(TABLE_ALPHAS)}x{len(TABLE_KS)} cells with 10^4 samples on {self.workers} worker(s)...")
        start_time = time.time()
        reports = run_grid(TABLE_ALPHAS, TABLE_KS, ("constant",), n_samples=10_000,
                           seed=self.seed, workers=self.workers)
        grid_time = time.time() - start_time
        bad = [r.grid_cell for r in reports if not r.passed]
        print(f"{len(reports)} cells in {grid_time:.2f}s")
        assert not bad, f"Cells with violations: {bad}"
        assert grid_time < 60.0, f"Grid too slow: {grid_time:.2f}s"

        for report in reports:
            alpha, K = report.grid_cell
            if alpha <= 2:
                C = report.closed_form
                assert abs(report.witness_ratio_at_tmin - C) <= 1e-3 * C, \
                    f"Witness at alpha={alpha} K={K}: {report.witness_ratio_at_tmin} vs {C}"

    def test_default_verify_run(self):
        start_time = time.time()
        reports = run_grid(DEFAULT_ALPHAS, DEFAULT_KS, ("constant", "quadratic", "identities"),
                           n_samples=10_000, seed=self.seed, workers=self.workers)
        run_time = time.time() - start_time
        bad = [(r.suite, r.grid_cell) for r in reports if not r.passed]
        print(f"{len(reports)} reports in {run_time:.2f}s")
        assert len(reports) == 2 * len(DEFAULT_ALPHAS) * len(DEFAULT_KS) + 1
        assert not bad, f"Reports with violations: {bad}"

    def test_identity_suite(self):
        start_time = time.time()
        report = verify_identities(1000, rng_seed=self.seed)
        suite_time = time.time() - start_time
        print(f"{len(report.details)} checks in {suite_time:.2f}s")
        failing = [name for name, r in report.details.items() if r.violations]
        assert not failing, f"Failing checks: {failing}"
        assert suite_time < 30.0, f"Identity suite too slow: {suite_time:.2f}s"

    def test_tangent_norm_minima_at_scale(self):
        rng = np.random.default_rng(self.seed)
        for beta in (0.5, 2 / 3, 1.5, 2.0):
            for K in (2, 3, 4, 5, 6):
                _, closed = min_tangent_norm(beta, K)
                norms = lp_norm(sample_tangent_batch(K, 100_000, rng), beta)
                assert norms.min() >= closed - 1e-12, f"beta={beta} K={K}: {norms.min()} < {closed}"
        print("10^5 tangent vectors per (beta, K), closed-form minima never undercut")

    def test_zero_one_regret_at_scale(self):
        rng = np.random.default_rng(self.seed)
        violations = 0
        per_K = 100_000 // 9 + 1
        for K in range(2, 11):
            P = sample_relint_batch(K, per_K, rng)
            Q = sample_relint_batch(K, per_K, rng)
            rows = np.arange(per_K)
            regret = P[rows, P.argmax(axis=1)] - P[rows, Q.argmax(axis=1)]
            violations += int((regret > np.abs(P - Q).sum(axis=1) + 1e-15).sum())
            p, q = P[0], Q[0]
            assert zero_one_regret_bound(p, q) == regret[0]
        assert violations == 0, f"{violations} regret violations"

    def test_extreme_dimensions(self):
        start_time = time.time()
        for alpha in (-5.0, 0.5, 1.5, 1.999, 2.0):
            for K in (10**3 + 1, 10**6, 10**6 + 1):
                value = sharp_constant(alpha, K).value
                assert np.isfinite(value) and value > 0, f"C({alpha}, {K}) = {value}"
        print(f"Large-K constants in {time.time() - start_time:.3f}s")

    def run_all_tests(self):
        """Run all performance tests."""
        print("🧪 Running Performance Tests")
        print("=" * 60)

        self.run_test("Constant table", self.test_constant_table)
        self.run_test("Constant grid at 10^4 samples", self.test_constant_grid)
        self.run_test("Default verify run at 10^4 samples", self.test_default_verify_run)
        self.run_test("Identity suite at 10^3 samples", self.test_identity_suite)
        self.run_test("Tangent norm minima at 10^5 samples", self.test_tangent_norm_minima_at_scale)
        self.run_test("0-1 regret at 10^5 samples", self.test_zero_one_regret_at_scale)
        self.run_test("Extreme dimensions", self.test_extreme_dimensions)

        print("\n" + "=" * 60)

        passed = sum(1 for result in self.test_results if result[0] == 'PASS')
        failed = sum(1 for result in self.test_results if result[0] == 'FAIL')
        total_time = sum(result[2] for result in self.test_results if result[0] == 'PASS')

        print(f"📊 Performance Test Summary: {passed} passed, {failed} failed")
        print(f"⏱️  Total time: {total_time:.2f}s")

        if failed > 0:
            print("\n❌ Failed Tests:")
            for status, name, error in self.test_results:
                if status == 'FAIL':
                    print(f"  - {name}: {error}")

        return passed, failed, self.test_results


def main():
    """Run the performance test suite."""
    tester = PerformanceTester()
    passed, failed, results = tester.run_all_tests()
    return failed == 0


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
