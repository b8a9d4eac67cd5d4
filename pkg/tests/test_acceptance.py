"""Acceptance suite: one or more tests per numbered criterion.

Each test carries ``@pytest.mark.criterion(n)``; the terminal summary prints
one PASS/FAIL line per criterion (see conftest.py).
"""
import itertools
import math
import time
from decimal import Decimal, getcontext

import numpy as np
import pytest

from secbeam import config, sdp, simulation, synthesis
from secbeam.cli import main
from secbeam.files import read_json
from secbeam.numerics import real_embed, real_unembed
from secbeam.sdp import Constraint, SdpProblem, solve
from secbeam.wiretap import _all_words, build_code, conditional_entropy, joint_counts

from conftest import small_env

PI = np.pi
LOG7 = math.log2(7)
# first seed is the shipped default; all five are documented in the README
DOCUMENTED_SEEDS = [8, 1, 2, 3, 4]


@pytest.fixture(scope="module")
def periodic_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("periodic")
    t0 = time.perf_counter()
    code = main(["synthesize", "--mode", "periodic", "--out", str(out)])
    return out, code, time.perf_counter() - t0


# -- 1 ------------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_stationary_infeasible(tmp_path):
    t0 = time.perf_counter()
    assert main(["synthesize", "--mode", "stationary", "--out", str(tmp_path)]) == 2
    rep = read_json(tmp_path / "synthesis_report.json")
    assert rep["stationary_status"] == "Infeasible" and rep["seed"] == DOCUMENTED_SEEDS[0]
    infeasible = 1
    for seed in DOCUMENTED_SEEDS[1:]:
        d = tmp_path / f"s{seed}"
        infeasible += main(["synthesize", "--mode", "stationary", "--seed", str(seed), "--out", str(d)]) == 2
    assert infeasible >= 3, f"only {infeasible}/5 documented seeds infeasible"
    assert time.perf_counter() - t0 < 120


# -- 2 ------------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_periodic_phases_solve(periodic_run):
    out, code, elapsed = periodic_run
    assert code == 0
    rep = read_json(out / "synthesis_report.json")
    assert [p["status"] for p in rep["phases"]] == ["Optimal"] * 3
    assert all(p["rank_ratio"] <= 1e-5 for p in rep["phases"])
    assert elapsed < 300


@pytest.mark.criterion(2)
def test_periodic_client_sinr(periodic_run, default_env):
    out, _, _ = periodic_run
    from secbeam.files import strategy_from_dict
    strat = strategy_from_dict(read_json(out / "strategy.json"))
    for t in range(1, strat.horizon + 1):
        val = simulation.sinr_over(default_env, strat.step_at(t), [default_env.client_direction])[0]
        assert val >= 10 * (1 - 1e-6)


@pytest.mark.criterion(2)
def test_periodic_violation_fraction(periodic_run):
    out, _, _ = periodic_run
    rep = read_json(out / "synthesis_report.json")
    assert rep["audit_points"] == 10_000
    fractions = [p["violation_fraction"] for p in rep["phases"]]
    assert all(f <= 0.01 for f in fractions), f"violation fractions {fractions}"


# -- 3 ------------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_round_trip_50_messages(default_env, default_synthesis):
    strat, _ = default_synthesis
    code = build_code(6, 2, 7)
    rng = np.random.default_rng(2024)
    for _ in range(50):
        msg = rng.integers(0, 7, size=2).tolist()
        rep = simulation.run(default_env, strat, code, msg, rng, grid_points=2000)
        assert rep.delivered and rep.decoded == msg


@pytest.mark.criterion(3)
def test_security_verdict(default_env, default_synthesis):
    strat, _ = default_synthesis
    code = build_code(6, 2, 7)
    rep = simulation.run(default_env, strat, code, [3, 5], np.random.default_rng(0))
    assert rep.decoded == [3, 5]
    assert all(mu <= 4 for mu in rep.mu), f"mu = {rep.mu}"
    assert rep.security_verdict


# -- 4 ------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_equivocation_oracle():
    t0 = time.perf_counter()
    code = build_code(6, 2, 7)
    words = _all_words(code)
    assert len(words[1]) == 7 ** 6
    for mu in range(5):
        for obs in itertools.combinations(range(1, 7), mu):
            table = joint_counts(code, obs, words)
            rows = table[table.sum(axis=1) > 0]
            assert rows.shape[1] == 49 and np.all(rows == rows[:, :1])
            assert conditional_entropy(code, obs, words) == pytest.approx(2 * LOG7, abs=1e-9)
    by_size = {mu: min(conditional_entropy(code, obs, words)
                       for obs in itertools.combinations(range(1, 7), mu)) for mu in (4, 5, 6)}
    assert by_size[4] > by_size[5] > by_size[6]
    assert by_size[6] == pytest.approx(0.0, abs=1e-12)
    assert time.perf_counter() - t0 < 120


# -- 5 ------------------------------------------------------------------------

def _bound_oracle(b1, b2, m):
    getcontext().prec = 50
    val = (2 * (1 / Decimal(str(b2))).ln() + 16 * Decimal(m) ** 2) / Decimal(str(b1))
    return int(val.to_integral_value(rounding="ROUND_CEILING")), val


@pytest.mark.criterion(5)
def test_bound_headline(capsys):
    assert main(["bound", "0.01", "0.01", "10"]) == 0
    printed = int(capsys.readouterr().out.strip())
    expected, exact = _bound_oracle(0.01, 0.01, 10)
    # the formula evaluates to 160921.034; its ceiling is 160922
    assert printed == expected, f"printed {printed}, formula {exact}"
    assert printed >= 10 ** 5


@pytest.mark.criterion(5)
def test_bound_monotone():
    grid = [0.001, 0.01, 0.1, 0.5, 0.9]
    for b1, b2, m in itertools.product(grid, grid, [1, 2, 6, 10]):
        B = synthesis.sample_bound(b1, b2, m)
        assert B == _bound_oracle(b1, b2, m)[0]
        assert synthesis.sample_bound(b1, b2, m + 1) >= B
    for b2, m in itertools.product(grid, [1, 6, 10]):
        vals = [synthesis.sample_bound(b1, b2, m) for b1 in grid]
        assert vals == sorted(vals, reverse=True)
    for b1, m in itertools.product(grid, [1, 6, 10]):
        vals = [synthesis.sample_bound(b1, b2, m) for b2 in grid]
        assert vals == sorted(vals, reverse=True)


# -- 6 ------------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_rank_condition_default(tmp_path):
    assert main(["verify-rank", "--out", str(tmp_path)]) == 0
    rep = read_json(tmp_path / "rank_report.json")
    assert len(rep["phases"]) == 3 and all(p["v_star"] > 0 for p in rep["phases"])


@pytest.mark.criterion(6)
def test_rank_condition_unverifiable(default_env):
    import dataclasses
    env = dataclasses.replace(default_env, power_cap=1e-4)
    sample = synthesis.draw_scenario(env.adversary_intervals[0], 1000, 0)
    chk = synthesis.verify_rank_condition(env, sample)
    assert not chk.verifiable and chk.status == sdp.INFEASIBLE


# -- 7 ------------------------------------------------------------------------

def _gap(sol):
    return abs(sol.objective - sol.dual_objective) / max(1.0, abs(sol.objective))


@pytest.mark.criterion(7)
def test_analytic_suite():
    a = solve(SdpProblem([1], [np.eye(1)], [Constraint({0: np.eye(1)}, ">=", 1.0)]))
    assert a.status == sdp.OPTIMAL and abs(a.objective - 1) <= 1e-7 and _gap(a) <= 1e-7
    b = solve(SdpProblem([1], [np.eye(1)], [Constraint({0: np.eye(1)}, "<=", -1.0)]))
    assert b.status == sdp.INFEASIBLE
    assert b.certificate["tau_over_kappa"] <= 1e-8 and b.certificate["residual"] <= 1e-7
    c = solve(SdpProblem([2], [np.diag([1.0, 3.0])], [Constraint({0: np.eye(2)}, "=", 1.0)]))
    assert c.status == sdp.OPTIMAL and abs(c.objective - 1) <= 1e-7 and _gap(c) <= 1e-7
    np.testing.assert_allclose(c.blocks[0], np.diag([1.0, 0.0]), atol=1e-6)


def _random_feasible(rng):
    dims = list(rng.integers(1, 4, size=rng.integers(1, 3)))
    x0 = [(lambda a: a @ a.T + 0.1 * np.eye(d))(rng.normal(size=(d, d))) for d in dims]
    obj = [(lambda a: a @ a.T + 0.05 * np.eye(d))(rng.normal(size=(d, d))) for d in dims]
    cons = []
    for _ in range(rng.integers(1, 6)):
        blocks = {k: (lambda a: (a + a.T) / 2)(rng.normal(size=(d, d))) for k, d in enumerate(dims)}
        val = sum(float(np.sum(blocks[k] * x0[k])) for k in blocks)
        sense = str(rng.choice(["<=", ">=", "="]))
        cons.append(Constraint(blocks, sense, val + {"<=": 0.5, ">=": -0.5, "=": 0.0}[sense]))
    return SdpProblem(dims, obj, cons)


@pytest.mark.criterion(7)
def test_random_duality_invariants():
    rng = np.random.default_rng(77)
    for _ in range(100):
        sol = solve(_random_feasible(rng))
        assert sol.status == sdp.OPTIMAL
        assert sol.dual_objective <= sol.objective + 1e-7 * max(1.0, abs(sol.objective))
        comp = sum(float(np.sum(x * s)) for x, s in zip(sol.blocks, sol.dual_blocks))
        assert abs(comp) <= 1e-6 * (1 + abs(sol.objective))


@pytest.mark.criterion(7)
def test_embedding_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = int(rng.integers(1, 9))
        a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        A = (a + a.conj().T) / 2
        assert np.max(np.abs(real_unembed(real_embed(A)) - A)) <= 1e-9


# -- 8 ------------------------------------------------------------------------

def _random_environment(rng):
    positions = synthesis_positions(rng)
    c1 = rng.uniform(0.8, 2.4)
    c2 = rng.uniform(-2.4, -0.8)
    w1, w2 = rng.uniform(0.1, 0.5, size=2)
    return small_env(positions, [(c1 - w1 / 2, c1 + w1 / 2), (c2 - w2 / 2, c2 + w2 / 2)],
                     gamma_c=float(rng.uniform(3, 10)))


def synthesis_positions(rng):
    from secbeam.channel import random_disk_positions
    return random_disk_positions(int(rng.integers(3, 7)), 80.0, rng)


@pytest.mark.criterion(8)
def test_relaxation_ordering_random_environments():
    rng = np.random.default_rng(1234)
    checked = tries = 0
    while checked < 20 and tries < 200:
        tries += 1
        env = _random_environment(rng)
        seeds = synthesis.phase_seeds(int(rng.integers(2 ** 31)), env.L)
        samples = [synthesis.draw_scenario(iv, 200, s) for iv, s in zip(env.adversary_intervals, seeds)]
        phase = [solve(synthesis.build_p4(env, s)) for s in samples]
        stat = solve(synthesis.build_p1_finite(env, samples))
        if stat.status != sdp.OPTIMAL or any(p.status != sdp.OPTIMAL for p in phase):
            continue
        worst = max(p.objective for p in phase)
        assert stat.objective >= worst - 1e-7 * max(1.0, abs(worst))
        checked += 1
    assert checked == 20, f"only {checked} environments solved in {tries} tries"


@pytest.mark.criterion(8)
def test_sample_enlargement_monotone():
    rng = np.random.default_rng(99)
    checked = 0
    for _ in range(40):
        env = _random_environment(rng)
        iv = env.adversary_intervals[0]
        big = synthesis.draw_scenario(iv, 400, int(rng.integers(2 ** 31)))
        prev = None
        for n in (50, 100, 200, 400):
            sol = solve(synthesis.build_p4(env, synthesis.ScenarioSample(iv, big.directions[:n], 0)))
            if sol.status != sdp.OPTIMAL:
                assert sol.status == sdp.INFEASIBLE
                break
            if prev is not None:
                assert sol.objective >= prev - 1e-7 * max(1.0, abs(prev))
                checked += 1
            prev = sol.objective
    assert checked >= 20
