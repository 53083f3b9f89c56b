import math

import pytest

ooblab = pytest.importorskip("ooblab")


def test_alias_and_drift():
    assert ooblab.alias_decompose(20000.5, 200.0) == (100, 0.5)
    n, eps = ooblab.alias_decompose(19.6, 19.9)
    assert n == 1 and abs(eps + 0.3) < 1e-9
    assert ooblab.drift_deviation(100, 0.01) == pytest.approx(-1.0)


def test_digitize_matches_direct_evaluation():
    fs, f, phi = 200.0, 20000.5, 0.3
    times, values = ooblab.digitize(f, 1.0, fs, (400 - 0.5) / fs, initial_phase=phi)
    assert len(values) == 400
    for i in (0, 17, 399):
        cycles = math.fmod(f * i / fs, 1.0)
        assert values[i] == pytest.approx(math.sin(2 * math.pi * cycles + phi), abs=1e-9)


def test_cycle_laws():
    assert ooblab.predict_switching(1.0, 0.5)[0] == pytest.approx(2 * ooblab.predict_sideswing(1.0, 0.0, 0.5)[0])
    assert ooblab.predict_sideswing(1.0, 0.0, 0.5)[1] == pytest.approx(1 / math.pi)
    assert ooblab.auto_adapt(0.0, 1.0, 1.0, 3.0)["delta_f"] == pytest.approx(0.25)
    assert ooblab.auto_adapt(0.0, 1.0, 2.0, 2.0)["delta_f"] == 0.0


def test_channel_laws():
    assert ooblab.combine_coherent_sources([90.0] * 8) - 90.0 == pytest.approx(18.06, abs=0.01)
    near = ooblab.spl_at_distance(120.0, 0.1, 0.5)
    assert ooblab.spl_at_distance(120.0, 0.1, 1.0) - near == pytest.approx(-6.02, abs=0.01)


def test_run_bundled_scenario(scenario_dir, tmp_path):
    scenarios = ooblab.load_scenarios(scenario_dir / "iphone7_switching.json")
    report = ooblab.run(scenarios["base"])
    assert report["ratio"] == pytest.approx(0.58, abs=0.08)
    ooblab.run_to_dir(scenarios["base"], tmp_path)
    assert (tmp_path / "report.json").exists()


def test_errors_are_typed():
    with pytest.raises(ooblab.ConfigError):
        ooblab.run({"schema": "oob-lab/1", "duration_s": -1.0})
    with pytest.raises(ValueError):
        ooblab.alias_decompose(1.0, 0.0)
