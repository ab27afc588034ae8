import math

import pytest

import condgof


def test_fixtures():
    assert condgof.fixture_names() == ["betageo_n100", "dweibull_n50", "inspection"]
    values = condgof.fixture("inspection")
    assert len(values) == 28
    assert sum(values) == 175


def test_p_values_match_reference_run():
    res = condgof.p_values(condgof.fixture("betageo_n100"), K=10000)
    assert set(res) == set(condgof.ALL_STATISTICS)
    assert abs(res["w2"]["p_value"] - 0.034) <= 0.02
    assert abs(res["swu"]["p_value"] - 0.996) <= 0.02
    again = condgof.p_values(condgof.fixture("betageo_n100"), K=10000)
    assert again == res


def test_statistics_identities():
    x = condgof.fixture("dweibull_n50")
    assert condgof.statistic("swl", x) == -condgof.statistic("swu", x)
    assert condgof.statistic("sb0", x) == max(0.0, condgof.statistic("sb", x))


def test_compositions_sum_to_total():
    rows = condgof.sample_compositions(4, 8, count=20, seed=3)
    assert len(rows) == 20
    assert all(len(r) == 4 and sum(r) == 8 for r in rows)
    assert rows == condgof.sample_compositions(4, 8, count=20, seed=3)


def test_fits():
    bg = condgof.fit(condgof.fixture("betageo_n100"), "betageometric")
    assert abs(bg["pi"] - 0.4274) < 0.005
    assert abs(bg["theta"] - 0.1166) < 0.005
    dw = condgof.fit(condgof.fixture("dweibull_n50"), "dweibull")
    assert abs(dw["q"] - 0.7239) < 0.01
    assert math.isclose(condgof.fit([0, 1, 2, 5], "geometric")["p"], 1 / 3)


def test_studies():
    r = condgof.power_study("pois:1", 10, M=30, K=50, seed=1, statistics=["w2", "swu"])
    assert r["alternative"] == "Pois(1)"
    assert set(r["rates"]) == {"w2", "swu"}
    t = condgof.type1_study(0.5, 10, M=30, K=50, seed=1)
    assert all(0.0 <= v <= 1.0 for v in t["rates"].values())


def test_errors():
    with pytest.raises(condgof.ParseError):
        condgof.parse_dataset("")
    with pytest.raises(ValueError):
        condgof.statistic("nope", [1, 2])
    with pytest.raises(condgof.EstimationError):
        condgof.fit([1, 1, 1, 1, 1, 1], "dweibull")
