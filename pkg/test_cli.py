#!/usr/bin/env python3
"""
End-to-end tests of the pinskerlab command line: records, formats and exit codes.
"""

import io
import json
import math
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent))

from pinskerlab.cli.main import join_negative_values, main
from pinskerlab.cli.records import read_csv, write_csv
from pinskerlab.utils.config import ConfigManager


def run_cli(*args, settings=None):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    with tempfile.TemporaryDirectory() as tmp:
        settings = settings or ConfigManager(Path(tmp))
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(args), settings=settings)
    return code, out.getvalue(), err.getvalue()


def quantity(records, name, pair=0):
    rows = [r for r in records if r["quantity"] == name and r["pair"] == pair]
    assert len(rows) == 1, f"{name}: {len(rows)} rows"
    return rows[0]


def test_eval_kl_example():
    code, out, _ = run_cli("eval", "--alpha", "1", "--p", "0.5,0.5", "--q", "0.25,0.75")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert quantity(records, "bregman")["value"] == pytest.approx(0.1438410362, abs=1e-10)
    assert quantity(records, "kl")["value"] == pytest.approx(0.5 * math.log(4 / 3), rel=1e-14)
    assert quantity(records, "pinsker_constant")["note"] == "ALPHA_LE1"
    losses = [r for r in records if r["quantity"] == "loss_q"]
    assert [r["k"] for r in losses] == [1, 2]
    assert not any(r["quantity"] == "tsallis_relative_entropy" for r in records)


def test_eval_euclidean_example():
    code, out, _ = run_cli("eval", "--alpha", "2", "--p", "0.5,0.5", "--q", "0.25,0.75")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert quantity(records, "bregman")["value"] == pytest.approx(0.0625, rel=1e-15)
    assert quantity(records, "tsallis_relative_entropy")["value"] == pytest.approx(1 / 6, rel=1e-14)
    assert quantity(records, "tv")["value"] == pytest.approx(0.25, abs=1e-15)


def test_eval_rejects_bad_sum():
    code, out, err = run_cli("eval", "--alpha", "1", "--p", "0.5,0.6", "--q", "0.25,0.75")
    assert code == 2
    assert out == ""
    assert "sum ≠ 1" in err


def test_eval_boundary_p_is_flagged():
    code, out, _ = run_cli("eval", "--alpha", "0", "--p", "1,0", "--q", "0.5,0.5")
    assert code == 0
    row = quantity(read_csv(io.StringIO(out)), "bregman")
    assert row["value"] == math.inf
    assert row["note"] == "infinite"


def test_eval_reads_vector_files():
    with tempfile.TemporaryDirectory() as tmp:
        p_file = Path(tmp) / "p.txt"
        p_file.write_text("# two forecasts\n0.5 0.5\n\n0.9 0.1\n")
        code, out, _ = run_cli("eval", "--alpha", "2", "--p-file", str(p_file), "--q", "0.25,0.75")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert quantity(records, "bregman", pair=0)["value"] == pytest.approx(0.0625, rel=1e-15)
    assert quantity(records, "bregman", pair=1)["value"] == pytest.approx(0.4225, rel=1e-14)


def test_eval_orthant_mode():
    code, out, _ = run_cli("eval", "--alpha", "2", "--orthant", "--p", "1,2", "--q", "2,3")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert quantity(records, "bregman")["value"] == pytest.approx(1.0, rel=1e-15)
    assert quantity(records, "orthant_constant")["value"] == pytest.approx(0.5)


def test_eval_json_lines():
    code, out, _ = run_cli("eval", "--alpha", "1", "--p", "0.5,0.5", "--q", "0.25,0.75", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert {"pair", "alpha", "quantity", "k", "value", "note"} <= set(rows[0])
    bregman = next(r for r in rows if r["quantity"] == "bregman")
    assert bregman["value"] == pytest.approx(0.1438410362, abs=1e-10)


def test_constant_examples():
    code, out, _ = run_cli("constant", "--alpha", "1,2", "--K", "7,3")
    assert code == 0
    records = {(r["alpha"], r["K"]): r for r in read_csv(io.StringIO(out))}
    assert records[(1, 7)]["C"] == 1
    assert records[(1, 7)]["regime"] == "ALPHA_LE1"
    assert records[(2, 3)]["C"] == pytest.approx(0.375, rel=1e-15)
    assert records[(2, 3)]["sigma"] == pytest.approx(1.125, rel=1e-15)
    assert records[(2, 3)]["regime"] == "ALPHA_1_2_ODD"


def test_constant_with_clipping():
    code, out, _ = run_cli("constant", "--alpha", "3", "--K", "3", "--eps", "0.1", "--mode", "both")
    assert code == 0
    [record] = read_csv(io.StringIO(out))
    assert record["C"] == 0
    assert record["mode"] == "both"
    assert record["clipped"] == pytest.approx(0.375 * 0.1, rel=1e-14)


def test_constant_rejects_invalid_K():
    code, out, err = run_cli("constant", "--alpha", "1", "--K", "1")
    assert code == 2
    assert out == ""
    assert "K" in err
    code, _, _ = run_cli("constant", "--alpha", "1", "--K", "2.5")
    assert code == 2


def test_negative_list_values_follow_their_flag():
    code, out, err = run_cli("constant", "--alpha", "-1,0.5,1", "--K", "2,3")
    assert code == 0, err
    records = read_csv(io.StringIO(out))
    assert len(records) == 6
    assert {r["alpha"] for r in records} == {-1, 0.5, 1}
    code, glued, _ = run_cli("constant", "--alpha=-1,0.5,1", "--K", "2,3")
    assert code == 0
    assert glued == out
    code, _, err = run_cli("witness", "--kind", "orthant", "--alpha", "-0.5", "--K", "2")
    assert code == 0, err
    assert join_negative_values(["figure", "--alpha-min", "-0.5", "--K", "2", "--", "-1"]) == \
        ["figure", "--alpha-min=-0.5", "--K", "2", "--", "-1"]


def test_csv_reemits_byte_for_byte():
    code, out, _ = run_cli("constant", "--alpha", "-1,0.5,1,1.5,2,2.5,3", "--K", "2,3,5")
    assert code == 0
    buffer = io.StringIO()
    write_csv(read_csv(io.StringIO(out)), buffer)
    assert buffer.getvalue() == out


def test_figure_grid():
    code, out, _ = run_cli("figure", "--K", "2", "--alpha-min", "0", "--alpha-max", "1", "--step", "0.5")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert [r["alpha"] for r in records] == [0, 0.5, 1]
    assert [r["C"] for r in records] == pytest.approx([2.0, math.sqrt(2.0), 1.0], rel=1e-15)


def test_witness_examples():
    code, out, _ = run_cli("witness", "--kind", "no-pinsker", "--alpha", "3", "--K", "3", "--t", "0.1")
    assert code == 0
    [record] = read_csv(io.StringIO(out))
    assert record["ratio"] == pytest.approx(0.025, abs=1e-12)
    assert record["predicted"] == pytest.approx(0.025, rel=1e-14)
    assert len(record["p"].split()) == 3

    code, out, _ = run_cli("witness", "--kind", "sharpness", "--alpha", "1", "--K", "2", "--t", "1e-4")
    assert code == 0
    [record] = read_csv(io.StringIO(out))
    assert record["ratio"] == pytest.approx(1.0, abs=1e-6)


def test_witness_default_trajectory():
    code, out, _ = run_cli("witness", "--kind", "orthant-alpha2", "--K", "4")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert len(records) == 5
    assert all(r["ratio"] == pytest.approx(0.25, rel=1e-12) for r in records)


def test_witness_regime_errors():
    code, _, err = run_cli("witness", "--kind", "no-pinsker", "--alpha", "1.5", "--K", "3")
    assert code == 2
    assert "requires alpha > 2 and K ≥ 3" in err
    code, _, err = run_cli("witness", "--kind", "sharpness", "--alpha", "3", "--K", "4")
    assert code == 2
    assert "no-pinsker" in err


def test_verify_small_grid_passes():
    code, out, err = run_cli("verify", "--suite", "constant", "--alpha", "0.5,2", "--K", "2,3",
                             "--samples", "300", "--seed", "5")
    assert code == 0
    assert "✅" in err
    records = read_csv(io.StringIO(out))
    assert len(records) == 4
    assert all(r["violations"] == 0 for r in records)


def test_verify_identities_passes():
    code, out, _ = run_cli("verify", "--suite", "identities", "--samples", "200")
    assert code == 0
    records = read_csv(io.StringIO(out))
    assert all(r["suite"] == "identities" for r in records)
    assert "beta_vs_definition" in {r["check"] for r in records}


def test_verify_corrupted_constant_exits_one():
    code, _, err = run_cli("verify", "--suite", "constant", "--alpha", "1", "--K", "2,3",
                           "--samples", "500", "--perturb-constant", "1.5")
    assert code == 1
    assert "❌ constant alpha=1 K=2" in err


def test_output_file_and_table_format():
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / "constants.txt"
        code, out, _ = run_cli("constant", "--alpha", "1", "--K", "2", "--format", "table", "--output", str(target))
        text = target.read_text()
    assert code == 0
    assert out == ""
    assert text.splitlines()[0].split() == ["alpha", "K", "C", "regime", "sigma"]


def test_config_supplies_defaults():
    with tempfile.TemporaryDirectory() as tmp:
        settings = ConfigManager(Path(tmp))
        settings.set("output_format", "json")
        code, out, _ = run_cli("constant", "--alpha", "1", "--K", "2", settings=settings)
    assert code == 0
    assert json.loads(out.splitlines()[0])["C"] == 1.0


def main_runner():
    """Run every test in this module and print a summary."""
    tests = [(name, fn) for name, fn in globals().items() if name.startswith("test_") and callable(fn)]
    print("🧪 Command-line tests")
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
    success = main_runner()
    sys.exit(0 if success else 1)
