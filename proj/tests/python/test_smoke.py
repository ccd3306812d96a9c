import math

import numpy as np
import pytest

import nesterov_rates as nr


def test_known_rates():
    assert nr.theoretical_rate(1, 1.5).exponent == pytest.approx(6 / 7)
    assert nr.theoretical_rate(4, 3).branch == nr.Branch.flat_intermediate
    assert not nr.theoretical_rate(4, 3).upper_bound_proven
    assert nr.theoretical_rate(8, 3).exponent == pytest.approx(6)


def test_prox_closed_forms():
    assert nr.prox_power(1, 0.1, 0.5) == pytest.approx(0.4)
    assert nr.prox_power(2, 0.5, 3) == pytest.approx(1.5)
    assert nr.prox_power(3, 1 / 3, 2) == pytest.approx(1.0)


def test_objective_oracle():
    f = nr.Objective("power:gamma=3")
    assert f.value(np.array([-2.0])) == pytest.approx(8)
    assert f.gradient(np.array([-2.0]))[0] == pytest.approx(-12)
    g = nr.Objective("plateau:gamma=2,a=1")
    assert g.distance_to_minset(np.array([3.0])) == pytest.approx(2)
    with pytest.raises(ValueError):
        nr.Objective("cosine:gamma=2")


def test_probes():
    f = nr.Objective("power:gamma=2")
    assert nr.probe_H1(f, 2, np.zeros(1), 1, 200).holds
    bad = nr.probe_H1(f, 3, np.zeros(1), 1, 200)
    assert not bad.holds and bad.witness is not None


def test_lyapunov_params():
    p = nr.LyapunovParams.sharp(5, 2)
    assert (p.lambda_, p.xi, p.K1) == pytest.approx((2.5, -3.75, 7.5))


def test_simulate_hand_recurrence():
    out = nr.simulate({"objective": "power:gamma=2", "alpha": 3, "h": 0.01, "x0": [1],
                       "steps": 2, "stride": 1})
    assert out["x"][:, 0] == pytest.approx([1.0, 0.98, 0.9555])
    assert out["t"] == pytest.approx([0, 0.1, 0.2])
    assert out["error"] is None


def test_fit_exponent_synthetic():
    t = np.geomspace(1, 1e4, 5000)
    fit = nr.fit_exponent(t, t ** -2.0)
    assert fit["exponent"] == pytest.approx(2, abs=1e-6)


def test_config_error():
    with pytest.raises(nr.ConfigError):
        nr.simulate({"objective": "power:gamma=2", "unknown": 1})


def test_run_experiment(tmp_path):
    res = nr.run_experiment({"objective": "power:gamma=3", "alpha": 6, "h": 1e-4,
                             "steps": 200000, "output_dir": str(tmp_path)})
    assert res["passed"]
    assert res["verdict"]["theoretical"] == pytest.approx(6)
    assert math.isfinite(res["verdict"]["fitted"])
    assert (tmp_path / res["label"] / "verdict.json").exists()
