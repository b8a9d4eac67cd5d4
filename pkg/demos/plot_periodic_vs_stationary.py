"""
Periodic beamforming where a stationary beam cannot exist
=========================================================

Six agents scattered in an 80 m disk try to reach a client at bearing 0
while three eavesdropper arcs surround the array. A single beamformer
that keeps every arc below the adversary threshold turns out to be
infeasible for this layout. Rotating through three beamformers, each of
which only nulls one arc, works.
"""
# %%
# Environment
# -----------
# The shipped defaults describe the scenario; seed 8 fixes the layout.
import numpy as np

from secbeam import config, synthesis
from secbeam.errors import PhaseInfeasible

cfg = config.normalize({})
env = config.build_environment(cfg)
print("agents (m):", env.m)
for k, (lo, hi) in enumerate(env.adversary_intervals, start=1):
    print(f"arc {k}: [{lo:+.3f}, {hi:+.3f}] rad")

# %%
# One beam for all arcs
# ---------------------
try:
    synthesis.synthesize_stationary(env, seed=cfg["seed"], B=cfg["sampling"]["B"])
except PhaseInfeasible as err:
    print("stationary:", err.report.stationary_status)

# %%
# One beam per arc, cycled
# ------------------------
strategy, report = synthesis.synthesize(env, seed=cfg["seed"], B=cfg["sampling"]["B"])
for p in report.phases:
    print(f"phase {p.phase}: power {p.objective:.4f}  rank gap {p.rank_ratio:.1e}  "
          f"client SINR {p.client_sinr:.6f}")

# %%
# Beampattern of phase 1
# ----------------------
# Coarse text rendering: SINR at a handful of bearings. The phase-1 arc
# starts at pi/6.
from secbeam.channel import sinr_over

thetas = np.linspace(-np.pi, np.pi, 24, endpoint=False)
for th, val in zip(thetas, sinr_over(env, strategy.steps[0], thetas)):
    print(f"{th:+.3f}  {val:9.4f}  {'#' * int(min(val, 12) * 4)}")

# %%
# Sending a message
# -----------------
# N = K L = 6 symbols carry K = 2 message symbols through a coset code
# over GF(7). The run reports which steps each arc saw above threshold.
# With B = 1000 samples each arc still leaks in narrow slivers next to
# binding samples and at the arc edge facing the client, so every arc
# sees every step; plot_violation_vs_samples.py shows the trend with B.
from secbeam import simulation
from secbeam.wiretap import build_code

code = build_code(env.N, env.K)
rng = np.random.default_rng(0)
tx = simulation.run(env, strategy, code, [3, 5], rng)
print("decoded:", tx.decoded)
print("steps seen per arc:", tx.observed_steps)
print("secure:", tx.security_verdict)
