import math

import pytest

import covertsim


def test_budget_frozen_values():
    p = covertsim.ScenarioParams(gamma=2.0, m=100.0, n=1_000_000)
    b1 = covertsim.covert_budget(1, 0.1, p)
    assert b1["c"] == pytest.approx(0.222144146907918, rel=1e-13)
    assert b1["conditioning_radius"] is None
    b2 = covertsim.covert_budget(2, 0.1, p)
    assert b2["conditioning_radius"] == pytest.approx(0.252313252202016, rel=1e-13)
    published = covertsim.covert_budget(1, 0.1, p, moment_constant="published")
    assert published["c"] / b1["c"] == pytest.approx(2 * math.pi)


def test_closed_forms():
    assert covertsim.nearest_distance_cdf(1 / math.pi, 1.0) == pytest.approx(1 - math.exp(-1))
    assert covertsim.nearest_distance_moment(5.0, 2.0) == pytest.approx(1 / (5 * math.pi))
    assert covertsim.scalar_gaussian_kl(1.0, 1.0, 1.0, 2.0) == pytest.approx(0.0965735902799727)


def test_invalid_arguments_raise_value_error():
    with pytest.raises(ValueError):
        covertsim.ScenarioParams(gamma=1.5)
    with pytest.raises(ValueError, match="unknown key"):
        covertsim.run_sweep("theorem = 1\nbogus = 1\n")


def test_sweep_records_and_determinism():
    text = "theorem = 1\nn = 1e4, 1e6, 1e8\nm = 10\ngamma = 2\nsimulate = false\n"
    records = covertsim.sweep_records(text, workers=1)
    assert records[0]["schema"] == covertsim.REPORT_SCHEMA
    points = [r for r in records if r.get("record") == "point"]
    fits = [r for r in records if r.get("record") == "fit"]
    assert len(points) == 3
    assert len(fits) == 1
    assert fits[0]["slope"] == pytest.approx(0.5, abs=1e-3)
    assert covertsim.run_sweep(text, workers=1) == covertsim.run_sweep(text, workers=2)
    rows = covertsim.sweep_rows(text)
    assert rows[0]["schema"] == covertsim.REPORT_SCHEMA
