"""Transmission strategy synthesis from sampled SDP relaxations.

Each phase of a periodic strategy nulls one adversary interval: its SDP keeps
the client SINR at or above ``gamma_c`` while holding the SINR at sampled
directions of that interval at or below ``gamma_a``. The stationary variant
nulls every interval at once.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import sdp
from .channel import TransmitStep, channel_matrix, sinr_over
from .errors import InvalidInput, PhaseInfeasible, RelaxationNotExact
from .numerics import hermitian_eig

RANK_TOL = 1e-5
RANK_CONDITION_TOL = 1e-7


@dataclass
class ScenarioSample:
    interval: tuple
    directions: np.ndarray
    seed: int


@dataclass
class PeriodicStrategy:
    steps: list
    K: int = 1

    @property
    def period(self):
        return len(self.steps)

    @property
    def horizon(self):
        return self.period * self.K

    @staticmethod
    def phase(t, period):
        """Phase in 1..period of the 1-based time step ``t``."""
        return (t - 1) % period + 1

    def step_at(self, t):
        if not 1 <= t <= self.horizon:
            raise InvalidInput(f"time step {t} outside 1..{self.horizon}")
        return self.steps[self.phase(t, self.period) - 1]


@dataclass
class RankCheck:
    status: str
    v_star: float

    @property
    def holds(self):
        return self.status == sdp.OPTIMAL and self.v_star > RANK_CONDITION_TOL

    @property
    def verifiable(self):
        return self.status == sdp.OPTIMAL


@dataclass
class PhaseReport:
    phase: int
    interval: tuple
    seed: int
    n_samples: int
    status: str
    objective: float
    iterations: int
    rank_ratio: float
    v_star: float
    rank_condition: bool
    max_violation: float
    violation_fraction: float
    client_sinr: float


@dataclass
class SynthesisReport:
    mode: str
    master_seed: int
    phase_seeds: list
    n_samples: int
    beta1: float
    beta2: float
    sample_bound: int
    audit_points: int
    phases: list = field(default_factory=list)
    stationary_status: Optional[str] = None
    stationary_objective: Optional[float] = None
    ordering_holds: Optional[bool] = None

    def to_dict(self):
        out = {k: v for k, v in self.__dict__.items() if k != "phases"}
        out["phases"] = [dict(p.__dict__) for p in self.phases]
        for p in out["phases"]:
            p["interval"] = list(p["interval"])
        return _plain(out)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def sample_bound(beta1, beta2, m):
    """Scenario count B = ceil((2 ln(1/beta2) + 16 m^2) / beta1)."""
    if not (0 < beta1 < 1 and 0 < beta2 < 1):
        raise InvalidInput("beta1 and beta2 must lie in (0, 1)")
    if int(m) != m or m < 1:
        raise InvalidInput("m must be a positive integer")
    val = (2.0 * math.log(1.0 / beta2) + 16.0 * m * m) / beta1
    # guard against round-off pushing an exact integer over the ceiling
    return int(math.ceil(val - 1e-9 * val))


def phase_seeds(master_seed, count):
    """Per-phase sub-seeds derived deterministically from the master seed."""
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def draw_scenario(interval, B, seed):
    """``B`` i.i.d. uniform directions on ``interval`` from a seeded generator."""
    if B < 1:
        raise InvalidInput("need at least one sample")
    lo, hi = float(interval[0]), float(interval[1])
    if hi < lo:
        raise InvalidInput("empty interval")
    if hi == lo:
        return ScenarioSample((lo, hi), np.full(B, lo), seed)
    rng = np.random.default_rng(seed)
    return ScenarioSample((lo, hi), rng.uniform(lo, hi, size=B), seed)


def _outer_rows(hs):
    # H(theta) = h h^H for each row h
    return hs[:, :, None] * hs[:, None, :].conj()


def _p4_constraints(env, directions, shift=None):
    """Constraints of the sampled problem over blocks (W, Sigma).

    With ``shift`` set, the blocks hold W - t I and Sigma - t I and the
    nonnegative scalar t (linear variable 0) enters every constraint.
    """
    m = env.m
    gc, ga, noise = env.gamma_c, env.gamma_a, env.noise_power
    hc = channel_matrix(env, [env.client_direction])
    Hc = _outer_rows(hc)[0]
    cons = []
    tr_h = float(m)  # Tr(H(theta)) = ||h||^2 = m for unit-modulus gains

    def lin(coef):
        return {0: coef} if shift else {}

    cons.append(sdp.Constraint({0: Hc, 1: -gc * Hc}, ">=", gc * noise, lin(tr_h * (1.0 - gc))))
    if len(directions):
        for H in _outer_rows(channel_matrix(env, directions)):
            cons.append(sdp.Constraint({0: H, 1: -ga * H}, "<=", ga * noise, lin(tr_h * (1.0 - ga))))
    for i in range(m):
        E = np.zeros((m, m))
        E[i, i] = 1.0
        cons.append(sdp.Constraint({0: E, 1: E}, "<=", env.power_cap, lin(2.0)))
    return cons


def build_p4(env, sample):
    """Sampled relaxation for one phase: min Tr W + Tr Sigma."""
    if sample is None or len(sample.directions) == 0:
        raise InvalidInput("the scenario sample is empty")
    eye = np.eye(env.m)
    return sdp.assemble_complex([env.m, env.m], [eye, eye], _p4_constraints(env, sample.directions))


def build_p1_finite(env, samples):
    """Stationary relaxation nulling the union of all sampled directions."""
    if len(samples) != env.L:
        raise InvalidInput(f"need one sample per adversary interval ({env.L})")
    dirs = np.concatenate([s.directions for s in samples]) if samples else np.zeros(0)
    eye = np.eye(env.m)
    return sdp.assemble_complex([env.m, env.m], [eye, eye], _p4_constraints(env, dirs))


def _solve_phase(prob, options):
    sol = sdp.solve(prob, options)
    W, S = sdp.hermitian_blocks(sol.blocks)
    return sol, W, S


def verify_rank_condition(env, sample, options=None):
    """Largest t with W >= t I, Sigma >= t I over the sampled feasible set.

    The full-rank condition holds iff the optimum is positive. Writing
    W = W' + t I and Sigma = Sigma' + t I with W', Sigma' PSD and t >= 0 is
    equivalent to the three-variable form max v, v <= min(v1, v2),
    W >= v1 I, Sigma >= v2 I, because t = 0 is feasible whenever the sampled
    problem is.
    """
    dirs = np.zeros(0) if sample is None else sample.directions
    prob = sdp.assemble_complex([env.m, env.m], [None, None],
                                _p4_constraints(env, dirs, shift=True),
                                n_linear=1, linear_objective=np.array([-1.0]))
    sol = sdp.solve(prob, options)
    if sol.status != sdp.OPTIMAL:
        return RankCheck(sol.status, float("nan"))
    return RankCheck(sol.status, float(sol.linear[0]))


def extract_rank_one(W, tol=RANK_TOL):
    """Beamformer w with w w^H ~ W; raises RelaxationNotExact unless lambda2/lambda1 <= tol."""
    lam, V = hermitian_eig(W)
    w, ratio = _rank_one(lam, V)
    if ratio > tol:
        raise RelaxationNotExact(ratio)
    return w


def _rank_one(lam, V):
    m = lam.size
    if lam[0] <= 0:
        return np.zeros(m, dtype=complex), 0.0
    ratio = max(lam[1], 0.0) / lam[0] if m > 1 else 0.0
    w = np.sqrt(lam[0]) * V[:, 0]
    mags = np.abs(w)
    first = np.flatnonzero(mags > 1e-9 * mags.max())[0]
    w = w * np.exp(-1j * np.angle(w[first]))
    w[first] = w[first].real
    return w, ratio


def violation_audit(env, step, interval, grid=None, n_points=10_000):
    """Max of f(theta) = |h^H w|^2 - gamma_a (h^H Sigma h + noise) and fraction of points with f > 0."""
    if grid is None:
        grid = np.linspace(interval[0], interval[1], n_points)
    hs = channel_matrix(env, grid)
    sig = np.abs(hs.conj() @ step.w) ** 2
    interf = np.real(np.einsum("ri,ij,rj->r", hs.conj(), step.sigma, hs))
    f = sig - env.gamma_a * (interf + env.noise_power)
    return float(np.max(f)), float(np.mean(f > 0))


def _phase(env, idx, interval, seed, B, options, audit_points, rank_tol, check_rank):
    sample = draw_scenario(interval, B, seed)
    rank = verify_rank_condition(env, sample, options) if check_rank else RankCheck("skipped", float("nan"))
    sol, W, S = _solve_phase(build_p4(env, sample), options)
    if sol.status != sdp.OPTIMAL:
        raise PhaseInfeasible(idx, sol.status)
    lam, V = hermitian_eig(W)
    w, ratio = _rank_one(lam, V)
    if ratio > rank_tol:
        raise RelaxationNotExact(ratio, idx)
    step = TransmitStep(w, S)
    max_f, frac = violation_audit(env, step, interval, n_points=audit_points)
    client = float(sinr_over(env, step, [env.client_direction])[0])
    report = PhaseReport(idx, tuple(interval), seed, B, sol.status, sol.objective, sol.iterations,
                         ratio, rank.v_star, rank.holds, max_f, frac, client)
    return step, report, sample


def synthesize(env, seed=0, B=1000, beta1=0.01, beta2=0.01, options=None,
               audit_points=10_000, rank_tol=RANK_TOL, check_rank=True, check_ordering=True):
    """Periodic strategy with one phase per adversary interval.

    Returns ``(PeriodicStrategy, SynthesisReport)``. With ``check_ordering``
    the stationary problem over the union of the phase samples is solved as
    well and the report records whether its optimum dominates every phase.
    """
    seeds = phase_seeds(seed, env.L)
    report = SynthesisReport("periodic", seed, seeds, B, beta1, beta2,
                             sample_bound(beta1, beta2, env.m), audit_points)
    if env.L == 0:
        # no interval to null: a single unconstrained phase
        sol, W, S = _solve_phase(sdp.assemble_complex(
            [env.m, env.m], [np.eye(env.m)] * 2, _p4_constraints(env, np.zeros(0))), options)
        if sol.status != sdp.OPTIMAL:
            raise PhaseInfeasible(1, sol.status)
        lam, V = hermitian_eig(W)
        w, ratio = _rank_one(lam, V)
        if ratio > rank_tol:
            raise RelaxationNotExact(ratio, 1)
        step = TransmitStep(w, S)
        client = float(sinr_over(env, step, [env.client_direction])[0])
        rank = verify_rank_condition(env, None, options) if check_rank else RankCheck("skipped", float("nan"))
        report.phases.append(PhaseReport(1, (), 0, 0, sol.status, sol.objective, sol.iterations, ratio,
                                         rank.v_star, rank.holds, float("nan"), 0.0, client))
        return PeriodicStrategy([step], env.K), report

    steps, samples = [], []
    for idx, (interval, s) in enumerate(zip(env.adversary_intervals, seeds), start=1):
        try:
            step, rep, sample = _phase(env, idx, interval, s, B, options, audit_points, rank_tol, check_rank)
        except (PhaseInfeasible, RelaxationNotExact) as err:
            err.report = report
            raise
        steps.append(step)
        samples.append(sample)
        report.phases.append(rep)

    if check_ordering:
        sol = sdp.solve(build_p1_finite(env, samples), options)
        report.stationary_status = sol.status
        if sol.status == sdp.OPTIMAL:
            report.stationary_objective = sol.objective
            worst = max(p.objective for p in report.phases)
            report.ordering_holds = bool(sol.objective >= worst - 1e-6 * max(1.0, abs(worst)))
    return PeriodicStrategy(steps, env.K), report


def synthesize_stationary(env, seed=0, B=1000, options=None, audit_points=10_000, rank_tol=RANK_TOL):
    """Single step nulling every adversary interval, B samples per interval.

    Returns ``(PeriodicStrategy, SynthesisReport)`` with a one-step strategy;
    raises PhaseInfeasible when the sampled stationary problem has no solution.
    """
    seeds = phase_seeds(seed, env.L)
    samples = [draw_scenario(iv, B, s) for iv, s in zip(env.adversary_intervals, seeds)]
    report = SynthesisReport("stationary", seed, seeds, B, float("nan"), float("nan"), 0, audit_points)
    sol, W, S = _solve_phase(build_p1_finite(env, samples), options)
    report.stationary_status = sol.status
    if sol.status != sdp.OPTIMAL:
        err = PhaseInfeasible(0, sol.status)
        err.report = report
        raise err
    report.stationary_objective = sol.objective
    lam, V = hermitian_eig(W)
    w, ratio = _rank_one(lam, V)
    if ratio > rank_tol:
        err = RelaxationNotExact(ratio, 0)
        err.report = report
        raise err
    step = TransmitStep(w, S)
    worst_f, worst_frac = -np.inf, 0.0
    for iv in env.adversary_intervals:
        f, frac = violation_audit(env, step, iv, n_points=audit_points)
        worst_f, worst_frac = max(worst_f, f), max(worst_frac, frac)
    client = float(sinr_over(env, step, [env.client_direction])[0])
    report.phases.append(PhaseReport(0, (), seed, B * env.L, sol.status, sol.objective, sol.iterations,
                                     ratio, float("nan"), False, worst_f, worst_frac, client))
    return PeriodicStrategy([step], env.N), report


def validate_strategy(env, strategy, tol=1e-7):
    """Re-check PSD-ness and per-agent power for every step."""
    return all(s.check(env.power_cap, tol) for s in strategy.steps)

