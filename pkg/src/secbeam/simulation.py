"""Discrete-time transmission of a coset-encoded block under the SINR threshold model."""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import _sinr_rows, channel_matrix, sinr_over
from .errors import InvalidInput, OracleInfeasible
from .wiretap import ERASED, conditional_entropy, decode, encode

# Solver-accuracy slack on the client threshold; adversary checks stay exact.
CLIENT_REL_TOL = 1e-6


@dataclass
class TransmissionReport:
    N: int
    K: int
    L: int
    grid_points: int
    message: list
    codeword: list
    client_received: list
    client_sinr: list
    observed_steps: list
    mu: list
    decoded: Optional[list]
    delivered: bool
    security_verdict: bool
    equivocation_bits: Optional[list] = None
    oracle: str = "skipped"
    notes: list = field(default_factory=list)

    def to_dict(self):
        return dict(self.__dict__)


def observed_steps(env, strategy, interval, grid=None, grid_points=10_000):
    """Time steps t in 1..N at which SINR_t exceeds gamma_a somewhere on the interval grid."""
    if grid is None:
        grid = np.linspace(interval[0], interval[1], grid_points)
    hs = channel_matrix(env, grid)
    peak = [float(np.max(_sinr_rows(s.w, s.sigma, hs, env.noise_power))) for s in strategy.steps]
    return [t for t in range(1, strategy.horizon + 1)
            if peak[strategy.phase(t, strategy.period) - 1] > env.gamma_a]


def run(env, strategy, code, message, rng, grid_points=10_000, client_rel_tol=CLIENT_REL_TOL,
        oracle_budget=10 ** 7):
    """Encode ``message``, transmit it with ``strategy`` and report who received what."""
    if code.N != strategy.horizon:
        raise InvalidInput(f"code length {code.N} does not match strategy horizon {strategy.horizon}")
    if code.N != env.N or code.K != env.K:
        raise InvalidInput("code parameters do not match the environment (N = L K)")
    if any(s.w.size != env.m for s in strategy.steps):
        raise InvalidInput("strategy dimension does not match the number of agents")
    message = np.asarray(message, dtype=np.int64).ravel()
    x = encode(code, message, rng)

    client_sinr = [float(sinr_over(env, strategy.step_at(t), [env.client_direction])[0])
                   for t in range(1, code.N + 1)]
    received = [s >= env.gamma_c * (1.0 - client_rel_tol) for s in client_sinr]
    rx = [int(x[t - 1]) if ok else ERASED for t, ok in zip(range(1, code.N + 1), received)]
    delivered = all(received)
    notes = []
    decoded = None
    if delivered:
        decoded = [int(v) for v in decode(code, rx)]
    else:
        notes.append("DecodeSkipped: client missed at least one symbol")

    obs = [observed_steps(env, strategy, iv, grid_points=grid_points) for iv in env.adversary_intervals]
    mu = [len(o) for o in obs]
    secure = delivered and all(m <= code.N - code.K for m in mu)

    equiv, oracle = None, "skipped"
    if code.q ** code.N <= oracle_budget:
        try:
            equiv = [conditional_entropy(code, o) for o in obs]
            oracle = "exhaustive"
        except OracleInfeasible:
            pass
    if oracle == "skipped":
        notes.append(f"equivocation oracle skipped (q^N > {oracle_budget}); "
                     "secrecy follows from mu <= N - K for an MDS coset code")
    return TransmissionReport(code.N, code.K, env.L, grid_points, message.tolist(), x.tolist(),
                              received, client_sinr, obs, mu, decoded, delivered, secure,
                              equiv, oracle, notes)
