"""On-disk formats: strategy JSON, reports and beampattern CSV."""
import csv
import json
import math

import numpy as np

from .channel import TransmitStep
from .errors import InvalidInput
from .synthesis import PeriodicStrategy

STRATEGY_FORMAT = "secbeam-strategy"
STRATEGY_VERSION = 1


def _pair(z):
    # Python's float repr is the shortest string that round-trips exactly (at most 17 digits)
    return [float(z.real), float(z.imag)]


def strategy_to_dict(strategy, mode="periodic", meta=None):
    m = strategy.steps[0].w.size if strategy.steps else 0
    iu = np.triu_indices(m)
    steps = []
    for k, step in enumerate(strategy.steps, start=1):
        steps.append({
            "phase": k,
            "w": [_pair(z) for z in step.w],
            "sigma_upper": [_pair(z) for z in step.sigma[iu]],
        })
    out = {"format": STRATEGY_FORMAT, "version": STRATEGY_VERSION, "mode": mode, "m": m,
           "K": strategy.K, "period": strategy.period, "horizon": strategy.horizon, "steps": steps}
    if meta:
        out["meta"] = meta
    return out


def strategy_from_dict(d):
    try:
        if d.get("format") != STRATEGY_FORMAT:
            raise InvalidInput("not a strategy file")
        m, K = int(d["m"]), int(d["K"])
        iu = np.triu_indices(m)
        steps = []
        for s in d["steps"]:
            w = np.array([complex(re, im) for re, im in s["w"]])
            up = np.array([complex(re, im) for re, im in s["sigma_upper"]])
            if w.size != m or up.size != iu[0].size:
                raise InvalidInput("step dimensions do not match m")
            sig = np.zeros((m, m), dtype=complex)
            sig[iu] = up
            sig = sig + np.triu(sig, 1).conj().T
            steps.append(TransmitStep(w, sig))
    except (KeyError, TypeError, ValueError) as err:
        if isinstance(err, InvalidInput):
            raise
        raise InvalidInput(f"malformed strategy file: {err}") from None
    if not steps:
        raise InvalidInput("strategy has no steps")
    strategy = PeriodicStrategy(steps, K)
    if "horizon" in d and int(d["horizon"]) != strategy.horizon:
        raise InvalidInput("horizon field disagrees with period * K")
    return strategy


def zero_strategy(m, period, K):
    return PeriodicStrategy([TransmitStep.zero(m) for _ in range(period)], K)


def _finite(obj):
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, np.ndarray):
        return _finite(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_finite(obj), fh, indent=2, allow_nan=False)
        fh.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_beampattern(path, rows):
    """CSV with header ``theta_rad,sinr`` sorted by angle."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["theta_rad", "sinr"])
        for theta, val in sorted(rows):
            out.writerow([repr(float(theta)), repr(float(val))])


def read_beampattern(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["theta_rad", "sinr"]:
        raise InvalidInput("missing theta_rad,sinr header")
    return np.array([[float(a), float(b)] for a, b in rows[1:]]).reshape(-1, 2)
