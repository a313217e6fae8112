import math

import pytest

import synbandit


CONFIG = """{
  "env": {"kind": "linear", "d": 3, "K": 10},
  "algo": "LinUCB",
  "tuner": "Syndicated",
  "T": 300,
  "repeats": 3,
  "seed": 4
}"""


def test_theoretical_alpha():
    a = synbandit.theoretical_alpha(0.5, 1.0, 0.01, 5, 1.0, 10000)
    assert a == pytest.approx(5.155660379675625)


def test_exp3_round():
    e = synbandit.Exp3(5, 10000)
    assert e.beta == pytest.approx(0.021640880021258854)
    assert e.probs() == pytest.approx([0.2] * 5)
    assert e.sample(0.7) == 3
    e.update(3, 1.0)
    assert e.weights[3] > 1.0
    assert sum(e.probs()) == pytest.approx(1.0)
    with pytest.raises(synbandit.Error):
        e.update(0, 2.0)


def test_ridge_update():
    r = synbandit.Ridge(1, 1.0)
    r.update([1.0], 1.0)
    assert r.vinv[0][0] == pytest.approx(0.5)
    assert r.theta_hat[0] == pytest.approx(0.5)
    assert synbandit.mahalanobis([1.0, 1.0], [[2.0, 1.0], [1.0, 2.0]]) == pytest.approx(math.sqrt(6.0))


def test_config_errors_name_the_key():
    with pytest.raises(synbandit.ConfigError, match="'T'"):
        synbandit.parse_config('{"env": {"kind": "linear"}, "algo": "LinUCB", "tuner": "TL", "T": 0}')


def test_runs_are_deterministic_and_aggregate():
    cfg = synbandit.parse_config(CONFIG)
    assert cfg.tuner == "Syndicated"
    a = synbandit.run_experiment(cfg, 1)
    b = synbandit.run_experiment(cfg, 1)
    assert a.to_csv() == b.to_csv()
    assert len(a) == 300
    cum = a.cum_regret
    assert all(y >= x for x, y in zip(cum, cum[1:]))

    traces = synbandit.run_repeats(cfg, threads=2)
    assert [t.run_id for t in traces] == [0, 1, 2]
    assert traces[1].to_csv() == a.to_csv()
    s = synbandit.aggregate(traces)
    assert s.runs == 3
    assert s.final_mean == pytest.approx(sum(t.cum_regret[-1] for t in traces) / 3)
