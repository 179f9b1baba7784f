"""Preset scenario catalog: determinism, self-checks, override plumbing."""

import numpy as np
import pytest

from oscint.scenarios import SCENARIO_NAMES, run_scenario


def _assert_checks_pass(result):
    ran = [c for c in result.assertions if not c.skipped]
    assert ran, "every check was skipped"
    failed = [c for c in ran if not c.passed]
    assert not failed, "; ".join(f"{c.name}: {c.detail}" for c in failed)


def test_catalog_lists_every_preset():
    assert SCENARIO_NAMES == (
        "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
    )


def test_unknown_scenario_raises():
    with pytest.raises(ValueError, match="unknown scenario"):
        run_scenario("nope")


def test_unknown_override_raises():
    with pytest.raises(TypeError):
        run_scenario("fig2", bogus=1)


def test_fig2_passes_and_is_deterministic():
    first = run_scenario("fig2")
    second = run_scenario("fig2")
    _assert_checks_pass(first)
    assert first.kind == "rate"
    assert first.description
    assert np.array_equal(first.trajectory.y, second.trajectory.y)
    assert np.array_equal(first.trajectory.readout, second.trajectory.readout)


def test_fig4_remapping_passes():
    result = run_scenario("fig4")
    _assert_checks_pass(result)
    assert result.extras["kappa"] > 0


def test_fig5_oscillatory_memory_passes_at_coarser_step():
    result = run_scenario("fig5", dt=0.03, duration=3000.0)
    _assert_checks_pass(result)
    assert result.extras["expected_hz"] == pytest.approx(1.0)


def test_fig6_random_spectrum_memory_passes():
    result = run_scenario("fig6")
    _assert_checks_pass(result)
    assert result.extras["request"].n == 100


def test_fig7_damped_pair_passes():
    result = run_scenario("fig7")
    _assert_checks_pass(result)
    assert result.extras["report"].stability == "stable-oscillation"


def test_fig7_tau_scale_rescales_frequency():
    result = run_scenario("fig7", tau_scale=2.0)
    _assert_checks_pass(result)
    freqs = result.extras["report"].frequencies_hz
    assert freqs.max() == pytest.approx(6.16404444, abs=1e-6)


def test_fig8_superposition_passes():
    result = run_scenario("fig8")
    _assert_checks_pass(result)


def test_fig9_circuit_passes_at_coarser_step():
    result = run_scenario("fig9", dt=0.05, duration=1360.0)
    _assert_checks_pass(result)
    assert 3.3 < result.extras["encode_scale"] < 3.9


def test_fig10_continuation_passes():
    result = run_scenario("fig10")
    _assert_checks_pass(result)
    assert result.kind == "prediction"
