"""Command-line entry point: ``secbeam <command> [options]``.

Exit codes: 0 success or secure, 1 usage/config error, 2 infeasible,
3 relaxation not exact (or rank condition not certified), 4 insecure or
undelivered.
"""
import argparse
import os
import sys

import numpy as np

from . import config as config_mod
from . import files, simulation, synthesis
from .channel import beampattern, in_interval
from .errors import InvalidInput, PhaseInfeasible, RelaxationNotExact, SecbeamError
from .wiretap import build_code

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_NOT_EXACT = 3
EXIT_INSECURE = 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which collides with "infeasible"
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _load(args):
    cfg = config_mod.load(args.config) if args.config else config_mod.normalize({})
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "mode", None) is not None:
        overrides["mode"] = args.mode
    if getattr(args, "grid_points", None) is not None:
        overrides.setdefault("grids", {})["audit_points"] = args.grid_points
        overrides["grids"]["beampattern_points"] = args.grid_points
    if overrides:
        merged = config_mod._merge(cfg, overrides)
        cfg = config_mod.normalize(merged)
    return cfg


def _out_path(cfg, args, key):
    d = args.out if getattr(args, "out", None) else cfg["output"]["dir"]
    os.makedirs(d, exist_ok=True)
    return os.path.join(d, cfg["output"][key])


def cmd_synthesize(args):
    cfg = _load(args)
    env = config_mod.build_environment(cfg)
    opts = config_mod.solver_options(cfg)
    smp = cfg["sampling"]
    report_path = _out_path(cfg, args, "synthesis_report")
    meta = {"seed": cfg["seed"], "agent_positions": env.agent_positions.tolist()}
    try:
        if cfg["mode"] == "stationary":
            strategy, report = synthesis.synthesize_stationary(
                env, seed=cfg["seed"], B=smp["B"], options=opts,
                audit_points=cfg["grids"]["audit_points"], rank_tol=cfg["solver"]["rank_tol"])
        else:
            strategy, report = synthesis.synthesize(
                env, seed=cfg["seed"], B=smp["B"], beta1=smp["beta1"], beta2=smp["beta2"],
                options=opts, audit_points=cfg["grids"]["audit_points"],
                rank_tol=cfg["solver"]["rank_tol"])
    except (PhaseInfeasible, RelaxationNotExact) as err:
        infeasible = isinstance(err, PhaseInfeasible)
        out = err.report.to_dict() if getattr(err, "report", None) is not None else {"mode": cfg["mode"]}
        out.update(meta)
        out["outcome"] = "infeasible" if infeasible else "not_exact"
        out["failed_phase"] = err.phase
        if infeasible:
            out["failed_status"] = err.status
        else:
            out["rank_ratio"] = err.ratio
        files.write_json(report_path, out)
        print(f"{cfg['mode']}: {err}")
        return EXIT_INFEASIBLE if infeasible else EXIT_NOT_EXACT
    out = report.to_dict()
    out.update(meta)
    out["outcome"] = "ok"
    files.write_json(report_path, out)
    files.write_json(_out_path(cfg, args, "strategy"),
                     files.strategy_to_dict(strategy, cfg["mode"], {"seed": cfg["seed"]}))
    for p in report.phases:
        print(f"phase {p.phase}: {p.status} objective={p.objective:.6g} "
              f"rank_ratio={p.rank_ratio:.2e} client_sinr={p.client_sinr:.8g} "
              f"max_f={p.max_violation:.3g} violation_fraction={p.violation_fraction:.4f}")
    return EXIT_OK


def _parse_message(text, K):
    try:
        vals = [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise InvalidInput(f"message must be comma-separated integers, got {text!r}") from None
    if len(vals) != K:
        raise InvalidInput(f"message needs {K} symbols")
    return vals


def cmd_simulate(args):
    cfg = _load(args)
    env = config_mod.build_environment(cfg)
    strategy = files.strategy_from_dict(files.read_json(args.strategy))
    code = build_code(env.N, env.K, cfg["code"]["q"])
    seeds = synthesis.phase_seeds(cfg["seed"], env.L + 2)
    encoder_seed, message_seed = seeds[-2], seeds[-1]
    if args.message is not None:
        message = _parse_message(args.message, code.K)
    else:
        message = np.random.default_rng(message_seed).integers(0, code.q, size=code.K).tolist()
    report = simulation.run(env, strategy, code, message, np.random.default_rng(encoder_seed),
                            grid_points=cfg["grids"]["audit_points"])
    out = report.to_dict()
    out.update({"seed": cfg["seed"], "encoder_seed": encoder_seed,
                "message_seed": None if args.message is not None else message_seed,
                "code": code.to_dict()})
    files.write_json(_out_path(cfg, args, "transmission_report"), out)
    print(f"delivered={report.delivered} decoded={report.decoded} mu={report.mu} "
          f"verdict={'secure' if report.security_verdict else 'insecure'}")
    return EXIT_OK if report.security_verdict else EXIT_INSECURE


def cmd_bound(args):
    print(synthesis.sample_bound(args.beta1, args.beta2, args.m))
    return EXIT_OK


def cmd_beampattern(args):
    cfg = _load(args)
    env = config_mod.build_environment(cfg)
    strategy = files.strategy_from_dict(files.read_json(args.strategy))
    if not 1 <= args.step <= strategy.horizon:
        raise InvalidInput(f"step must lie in 1..{strategy.horizon}")
    if strategy.steps[0].w.size != env.m:
        raise InvalidInput("strategy dimension does not match the number of agents")
    step = strategy.step_at(args.step)
    if args.theta:
        grid = np.array(sorted(args.theta), dtype=float)
        if np.any((grid < -np.pi) | (grid >= np.pi)):
            raise InvalidInput("angles must lie in [-pi, pi)")
    else:
        n = cfg["grids"]["beampattern_points"]
        grid = np.linspace(-np.pi, np.pi, n, endpoint=False)
    rows = beampattern(env, step, grid)
    path = _out_path(cfg, args, "beampattern")
    files.write_beampattern(path, rows)
    vals = np.array([v for _, v in rows])
    markers = {"step": args.step, "phase": strategy.phase(args.step, strategy.period),
               "gamma_c": env.gamma_c, "gamma_a": env.gamma_a,
               "client_direction": env.client_direction, "intervals": []}
    for i, iv in enumerate(cfg["environment"]["adversary_intervals"], start=1):
        mask = np.array([in_interval(t, config_mod.unwrap_arc(iv)) for t in grid])
        markers["intervals"].append({"index": i, "interval": iv, "points": int(mask.sum()),
                                     "max_sinr": float(vals[mask].max()) if mask.any() else None})
    files.write_json(os.path.splitext(path)[0] + "_markers.json", markers)
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_verify_rank(args):
    cfg = _load(args)
    env = config_mod.build_environment(cfg)
    opts = config_mod.solver_options(cfg)
    seeds = synthesis.phase_seeds(cfg["seed"], env.L)
    phases = []
    for idx, (iv, s) in enumerate(zip(env.adversary_intervals, seeds), start=1):
        sample = synthesis.draw_scenario(iv, cfg["sampling"]["B"], s)
        chk = synthesis.verify_rank_condition(env, sample, opts)
        phases.append({"phase": idx, "seed": s, "status": chk.status, "v_star": chk.v_star,
                       "verifiable": chk.verifiable, "holds": chk.holds})
        print(f"phase {idx}: {chk.status} v*={chk.v_star:.6g} "
              f"{'holds' if chk.holds else ('fails' if chk.verifiable else 'unverifiable')}")
    files.write_json(_out_path(cfg, args, "rank_report"),
                     {"seed": cfg["seed"], "phase_seeds": seeds, "phases": phases})
    if not all(p["verifiable"] for p in phases):
        return EXIT_INFEASIBLE
    return EXIT_OK if all(p["holds"] for p in phases) else EXIT_NOT_EXACT


def _probability(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return v


def build_parser():
    p = _Parser(prog="secbeam", description="Secure periodic beamforming: synthesis and certification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, mode=False, grid=False):
        sp.add_argument("--config", help="YAML run configuration (defaults if omitted)")
        sp.add_argument("--seed", type=int, help="override the master seed")
        sp.add_argument("--out", help="output directory (overrides output.dir)")
        if mode:
            sp.add_argument("--mode", choices=config_mod.MODES)
        if grid:
            sp.add_argument("--grid-points", type=_positive_int, dest="grid_points")

    sp = sub.add_parser("synthesize", help="solve the sampled SDPs and write a strategy")
    common(sp, mode=True, grid=True)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("simulate", help="transmit one coset-coded block with a strategy")
    common(sp, grid=True)
    sp.add_argument("--strategy", required=True)
    sp.add_argument("--message", help="comma-separated field symbols, e.g. 3,5")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bound", help="scenario count for violation/confidence levels")
    sp.add_argument("beta1", type=_probability)
    sp.add_argument("beta2", type=_probability)
    sp.add_argument("m", type=_positive_int)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("beampattern", help="SINR over direction for one time step, as CSV")
    common(sp, grid=True)
    sp.add_argument("--strategy", required=True)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--theta", type=float, action="append", help="explicit direction (repeatable)")
    sp.set_defaults(func=cmd_beampattern)

    sp = sub.add_parser("verify-rank", help="check the full-rank sufficient condition per phase")
    common(sp)
    sp.set_defaults(func=cmd_verify_rank)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"secbeam: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (SecbeamError, OSError, ValueError) as err:
        print(f"secbeam: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
