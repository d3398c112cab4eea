from fractions import Fraction as F

import numpy as np
import pytest
from scipy.stats import chisquare

from juggle import chains as ch
from juggle import sim
from juggle.errors import DomainError
from juggle.models import make_spec

MJMC = make_spec("mjmc", h=4, k=2, xs="1/2,1/4,1/4")


def test_replica_streams_are_spawned_substreams():
    a = sim.replica_rng(7, 3).random(5)
    b = np.random.Generator(np.random.PCG64(np.random.SeedSequence(7).spawn(4)[3])).random(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(sim.replica_rng(7, 0).random(5), a)


def test_runs_are_deterministic():
    cfg = sim.SimConfig(MJMC, seed=11, steps=50, replicas=20)
    assert sim.run(cfg).empirical.counts == sim.run(cfg).empirical.counts
    other = sim.SimConfig(MJMC, seed=12, steps=50, replicas=20)
    assert sim.run(cfg).final_states != sim.run(other).final_states


def test_zero_steps_is_point_mass():
    cfg = sim.SimConfig(MJMC, steps=0, burn_in=0, replicas=30, initial="obob")
    res = sim.run(cfg)
    assert res.empirical.as_dict()["obob"] == 30 and res.empirical.total == 30


def test_config_validation_and_defaults():
    with pytest.raises(DomainError):
        sim.SimConfig(MJMC, steps=-1)
    with pytest.raises(DomainError):
        sim.SimConfig(MJMC, record="every")
    assert sim.SimConfig(MJMC).effective_burn_in() == 40
    ann = make_spec("annihilation", h=3, family="uniform")
    assert sim.SimConfig(ann).effective_burn_in() == 3
    assert sim.SimConfig(MJMC, seed=5).to_json()["prng"] == sim.PRNG_NAME


def test_tv_distance():
    pi = MJMC.exact()
    assert sim.tv_distance(pi, pi) == 0
    a = ch.Distribution(("x", "y"), (1, 0))
    b = ch.Distribution(("x", "y"), (0, 1))
    assert sim.tv_distance(a, b) == 1
    with pytest.raises(DomainError):
        sim.tv_distance(a, ch.Distribution(("x", "z"), (1, 0)))


def test_sampler_rows_chi_square():
    P = MJMC.build()
    sampler = sim.KernelSampler(P)
    rng = sim.replica_rng(2024, 0)
    n = 100_000
    for i in range(P.n):
        row = P.rows[i]
        if len(row) == 1:
            assert all(sampler.step(i, u) == row[0][0] for u in rng.random(10))
            continue
        draws = [sampler.step(i, u) for u in rng.random(n)]
        obs = [draws.count(j) for j, _ in row]
        exp = [n * float(p) for _, p in row]
        assert chisquare(obs, exp).pvalue > 0.001


def test_mjmc_path_tv_small():
    cfg = sim.SimConfig(MJMC, seed=1, steps=200_000, record="path")
    rep = sim.report(cfg)
    assert rep["tv"] < rep["stderr_bound"]


def test_annihilation_replicas_at_step_h():
    spec = make_spec("annihilation", h=3, a="1/4", zs="1/4,1/4,1/4")
    cfg = sim.SimConfig(spec, seed=3, steps=0, burn_in=3, replicas=20_000)
    rep = sim.report(cfg)
    assert rep["tv"] < rep["stderr_bound"]


def test_infinite_simulation_geometric():
    spec = make_spec("imjmc", family="geometric", q="1/2")
    cfg = sim.SimConfig(spec, seed=4, steps=0, burn_in=60, replicas=4000)
    res = sim.run(cfg)
    z = 1.0
    for m in range(1, 60):
        z /= 1 - 0.5**m
    tv = sim.tv_to_measure(res.empirical, lambda lam: 0.5 ** sum(lam) / z)
    assert tv < 0.1


def test_sample_insertion():
    from juggle.infinite import TailParams
    geo = TailParams.geometric(F(1, 2))
    assert sim.sample_insertion(geo, 0.0) == 0
    assert sim.sample_insertion(geo, 0.74) == 1
    fin = TailParams.finite([F(1, 2), F(1, 2)])
    assert [sim.sample_insertion(fin, u) for u in (0.1, 0.6, 0.999)] == [0, 1, 1]


@pytest.mark.parametrize(
    "spec",
    [
        make_spec("doubly-enriched", h=2, zs="1/5,3/10,1/2"),
        make_spec("annihilation", h=3, a="1/2", zs="1/8,1/4,1/8"),
        make_spec("enriched-annihilation", H=3, a="1/2", zs="1/5,3/10"),
    ],
    ids=["doubly", "annihilation", "enriched-annihilation"],
)
def test_strong_stationarity(spec):
    out = sim.strong_stationary_check(spec, trials=3000, seed=9)
    assert out["rows_all_equal"] and out["rows_equal_stationary"] and out["P_h_plus_1_equals_P_h"]
    assert out["passed"]


def test_strong_stationarity_fails_for_mjmc():
    out = sim.strong_stationary_check(MJMC, trials=500)
    assert not out["rows_equal_stationary"]
    assert not out["passed"]


def test_strong_stationarity_h0():
    spec = make_spec("annihilation", h=0, a="1", zs="")
    assert sim.strong_stationary_check(spec, trials=10)["passed"]


def test_empirical_exports():
    res = sim.run(sim.SimConfig(MJMC, steps=10, replicas=5))
    js = res.empirical.to_json()
    assert sum(js["counts"]) == 5 and len(js["states"]) == 6
    assert res.empirical.to_csv().startswith("state,count,freq\n")
