"""YAML run configuration: parsing, defaults, validation and canonical form.

Angles are radians in [-pi, pi). An interval ``[lo, hi]`` is the arc swept
counterclockwise from ``lo`` to ``hi``, so ``hi < lo`` wraps through pi.
"""
import copy
import math

import numpy as np
import yaml

from . import sdp
from .channel import EnvironmentSpec, random_disk_positions
from .errors import InvalidInput

PI = math.pi

DEFAULTS = {
    "seed": 8,
    "mode": "periodic",
    "environment": {
        "agents": {"count": 6, "disk_radius": 80.0, "positions": None},
        "client_direction": 0.0,
        "adversary_free_interval": [-PI / 6, PI / 6],
        "adversary_intervals": [[PI / 6, 4 * PI / 6], [4 * PI / 6, -5 * PI / 6], [-5 * PI / 6, -PI / 6]],
        "carrier_frequency": 40e6,
        "receiver_radius": 300.0,
        "power_cap": 1.0,
        "gamma_c": 10.0,
        "gamma_a": 1.0,
        "noise_power": 1.0,
        "K": 2,
        "propagation_speed": 3e8,
    },
    "solver": {
        "max_iters": 500,
        "feastol": 1e-8,
        "dual_feastol": 1e-7,
        "reltol": 1e-7,
        "infeas_tol": 1e-7,
        "rank_tol": 1e-5,
    },
    "sampling": {"B": 1000, "beta1": 0.01, "beta2": 0.01},
    "grids": {"audit_points": 10000, "beampattern_points": 3600},
    "code": {"q": None},
    "output": {
        "dir": "secbeam-out",
        "strategy": "strategy.json",
        "synthesis_report": "synthesis_report.json",
        "transmission_report": "transmission_report.json",
        "rank_report": "rank_report.json",
        "beampattern": "beampattern.csv",
    },
}

MODES = ("periodic", "stationary")


class ConfigError(InvalidInput):
    pass


def _merge(base, override, path=""):
    if not isinstance(override, dict):
        raise ConfigError(f"{path or 'config'} must be a mapping")
    out = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}.{key}" if path else str(key)
        if key not in base:
            raise ConfigError(f"unknown key '{where}'")
        if isinstance(base[key], dict):
            out[key] = _merge(base[key], val if val is not None else {}, where)
        else:
            out[key] = val
    return out


def _num(v, where, kind=float):
    if isinstance(v, str):
        # YAML 1.1 reads exponent forms such as 1e-8 as strings
        try:
            v = float(v)
        except ValueError:
            raise ConfigError(f"{where} must be a number") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where} must be a number")
    if kind is int:
        if int(v) != v:
            raise ConfigError(f"{where} must be an integer")
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{where} must be finite")
    return v


def _angle(v, where):
    v = _num(v, where)
    if not -PI <= v < PI:
        raise ConfigError(f"{where} must lie in [-pi, pi)")
    return v


def _arc(iv, where):
    if not isinstance(iv, (list, tuple)) or len(iv) != 2:
        raise ConfigError(f"{where} must be a [lo, hi] pair")
    return [_angle(iv[0], f"{where}[0]"), _angle(iv[1], f"{where}[1]")]


def unwrap_arc(iv):
    """Internal form with lo <= hi; a wrapping arc gets hi + 2 pi."""
    lo, hi = iv
    return (lo, hi + 2 * PI) if hi < lo else (lo, hi)


def wrap_angle(x):
    return (x + PI) % (2 * PI) - PI


def normalize(raw):
    """Merge ``raw`` over the defaults and type-check every field."""
    cfg = _merge(DEFAULTS, raw or {})
    cfg["seed"] = _num(cfg["seed"], "seed", int)
    if cfg["seed"] < 0:
        raise ConfigError("seed must be nonnegative")
    if cfg["mode"] not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    env = cfg["environment"]
    ag = env["agents"]
    ag["count"] = _num(ag["count"], "environment.agents.count", int)
    ag["disk_radius"] = _num(ag["disk_radius"], "environment.agents.disk_radius")
    if ag["positions"] is not None:
        try:
            pos = np.asarray(ag["positions"], dtype=float)
        except (TypeError, ValueError):
            raise ConfigError("environment.agents.positions must be a list of [x, y] pairs")
        if pos.ndim != 2 or pos.shape[1] != 2 or not np.all(np.isfinite(pos)):
            raise ConfigError("environment.agents.positions must be a list of finite [x, y] pairs")
        ag["positions"] = pos.tolist()
        ag["count"] = len(ag["positions"])
    if ag["count"] < 1 or ag["disk_radius"] <= 0:
        raise ConfigError("need at least one agent and a positive disk radius")
    env["client_direction"] = _angle(env["client_direction"], "environment.client_direction")
    env["adversary_free_interval"] = _arc(env["adversary_free_interval"], "environment.adversary_free_interval")
    if not isinstance(env["adversary_intervals"], list):
        raise ConfigError("environment.adversary_intervals must be a list")
    env["adversary_intervals"] = [_arc(iv, f"environment.adversary_intervals[{i}]")
                                  for i, iv in enumerate(env["adversary_intervals"])]
    for key in ("carrier_frequency", "receiver_radius", "power_cap", "gamma_c", "gamma_a",
                "noise_power", "propagation_speed"):
        env[key] = _num(env[key], f"environment.{key}")
    env["K"] = _num(env["K"], "environment.K", int)

    sol = cfg["solver"]
    sol["max_iters"] = _num(sol["max_iters"], "solver.max_iters", int)
    for key in ("feastol", "dual_feastol", "reltol", "infeas_tol", "rank_tol"):
        sol[key] = _num(sol[key], f"solver.{key}")
        if sol[key] <= 0:
            raise ConfigError(f"solver.{key} must be positive")
    smp = cfg["sampling"]
    smp["B"] = _num(smp["B"], "sampling.B", int)
    smp["beta1"] = _num(smp["beta1"], "sampling.beta1")
    smp["beta2"] = _num(smp["beta2"], "sampling.beta2")
    if smp["B"] < 1:
        raise ConfigError("sampling.B must be at least 1")
    if not (0 < smp["beta1"] < 1 and 0 < smp["beta2"] < 1):
        raise ConfigError("sampling.beta1 and sampling.beta2 must lie in (0, 1)")
    for key in ("audit_points", "beampattern_points"):
        cfg["grids"][key] = _num(cfg["grids"][key], f"grids.{key}", int)
        if cfg["grids"][key] < 1:
            raise ConfigError(f"grids.{key} must be at least 1")
    if cfg["code"]["q"] is not None:
        cfg["code"]["q"] = _num(cfg["code"]["q"], "code.q", int)
    for key, val in cfg["output"].items():
        if not isinstance(val, str) or not val:
            raise ConfigError(f"output.{key} must be a nonempty string")
    # surfaces invariant violations (gamma ordering, geometry) as config errors
    build_environment(cfg)
    return cfg


def parse(text):
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as err:
        raise ConfigError(f"malformed YAML: {err}") from None
    return normalize(raw)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(cfg):
    """Canonical YAML text: fixed key order, every default spelled out."""
    return yaml.safe_dump(_ordered(cfg, DEFAULTS), sort_keys=False, default_flow_style=None)


def _ordered(cfg, template):
    out = {}
    for key, sub in template.items():
        out[key] = _ordered(cfg[key], sub) if isinstance(sub, dict) else cfg[key]
    return out


def agent_positions(cfg):
    ag = cfg["environment"]["agents"]
    if ag["positions"] is not None:
        return np.asarray(ag["positions"], dtype=float)
    # the layout stream is the master generator itself; phase sub-seeds are spawned separately
    return random_disk_positions(ag["count"], ag["disk_radius"], np.random.default_rng(cfg["seed"]))


def build_environment(cfg):
    env = cfg["environment"]
    try:
        return EnvironmentSpec(
            agent_positions=agent_positions(cfg),
            client_direction=env["client_direction"],
            adversary_intervals=tuple(unwrap_arc(iv) for iv in env["adversary_intervals"]),
            adversary_free_interval=unwrap_arc(env["adversary_free_interval"]),
            carrier_frequency=env["carrier_frequency"],
            receiver_radius=env["receiver_radius"],
            power_cap=env["power_cap"],
            gamma_c=env["gamma_c"],
            gamma_a=env["gamma_a"],
            noise_power=env["noise_power"],
            K=env["K"],
            propagation_speed=env["propagation_speed"],
        )
    except InvalidInput as err:
        raise ConfigError(str(err)) from None


def solver_options(cfg):
    s = cfg["solver"]
    return sdp.SolverOptions(max_iters=s["max_iters"], feastol=s["feastol"],
                             dual_feastol=s["dual_feastol"], reltol=s["reltol"],
                             infeas_tol=s["infeas_tol"])
