"""Command-line front end: run a model, write solution + band + references.

Each subcommand executes one model pipeline and serializes a RunOutput to
JSON (primary) or CSV.  Numbers are printed with 17 significant digits so
re-reading a file reproduces the arrays bit-exactly; with --no-timestamp
the output of a fixed-seed run is byte-identical across invocations.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import adaptive, bayes, models
from .randgen import RngState

__all__ = ["RunOutput", "main", "run_cli", "load_run"]

SEED_ENV_VAR = "FDCI_SEED"

# canonical array order; optional arrays are simply absent
ARRAY_KEYS = [
    "x",
    "fd_solution",
    "posterior_mean",
    "ci_lower",
    "ci_upper",
    "width",
    "scaled_width",
    "exact",
    "abs_error",
    "rel_error",
    "truncation_leading",
    "reference",
]

CSV_NAMES = {
    "x": "x",
    "fd_solution": "fd",
    "posterior_mean": "mean",
    "ci_lower": "lower",
    "ci_upper": "upper",
    "width": "width",
    "scaled_width": "scaled_width",
    "exact": "exact",
    "abs_error": "abs_error",
    "rel_error": "rel_error",
    "truncation_leading": "truncation_leading",
    "reference": "reference",
}


@dataclass
class RunOutput:
    """One run's results: metadata plus same-length per-node arrays."""

    metadata: dict
    arrays: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {k: len(v) for k, v in self.arrays.items()}
        if len(set(lengths.values())) > 1:
            raise ValueError(f"RunOutput: arrays must share one length, got {lengths}")

    def to_json(self) -> str:
        return _json_text({"metadata": self.metadata, "arrays": self.arrays}) + "\n"

    def to_csv(self) -> str:
        keys = [k for k in ARRAY_KEYS if k in self.arrays]
        lines = [",".join(CSV_NAMES[k] for k in keys)]
        n = len(next(iter(self.arrays.values()))) if keys else 0
        cols = [np.asarray(self.arrays[k], dtype=float) for k in keys]
        for i in range(n):
            lines.append(",".join(_fmt(c[i]) for c in cols))
        return "\n".join(lines) + "\n"

    def write(self, path: str, fmt: str = "json") -> None:
        text = self.to_json() if fmt == "json" else self.to_csv()
        if path == "-":
            sys.stdout.write(text)
        else:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)


def _fmt(x: float) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return "nan"
    return format(float(x), ".17g")


def _json_text(obj, indent: int = 0) -> str:
    """JSON emitter with 17-significant-digit floats (json.dumps cannot
    control float formatting); non-finite floats become null."""
    pad = "  " * indent
    pad1 = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _fmt(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        import json as _json

        return _json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad1}{_json_text(str(k))}: {_json_text(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            return "[" + ", ".join(_json_text(v) for v in seq) + "]"
        items = [f"{pad1}{_json_text(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def load_run(path: str) -> RunOutput:
    """Read back a JSON RunOutput (arrays as float64, bit-exact)."""
    import json

    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return RunOutput(doc["metadata"], {k: np.asarray(v, dtype=float) for k, v in doc["arrays"].items()})


# --- argument plumbing ---------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = common.add_argument_group("sampling and output")
    g.add_argument("--draws", type=int, default=50_500, help="posterior draws (default 50500)")
    g.add_argument("--burn-in", type=int, default=500, help="initial draws to discard (default 500)")
    g.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default: config file, then ${SEED_ENV_VAR}, then 0)")
    g.add_argument("--a", type=float, default=None, help="variance prior shape (default m/2)")
    g.add_argument("--b", type=float, default=None, help="variance prior scale (default a+1)")
    g.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--single-thread", action="store_true",
                   help="force single-threaded sampling (the reference mode; sampling is single-threaded either way)")
    g.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-identical reruns")
    g.add_argument("--config", default=None, help="key=value config file; explicit flags override it")

    p = argparse.ArgumentParser(
        prog="fdci",
        description="Finite difference solvers with Bayesian credible bands",
        allow_abbrev=False,
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("linear-bvp", parents=[common], allow_abbrev=False,
                        help="linear two-point BVP u'' = sin(x)")
    sp.add_argument("--m", type=int, default=99, help="interior point count (default 99)")

    sp = sub.add_parser("pendulum", parents=[common], allow_abbrev=False,
                        help="nonlinear pendulum BVP")
    sp.add_argument("--m", type=int, default=124, help="interior points for the uniform grid (default 124)")
    sp.add_argument("--grid", choices=("uniform", "piecewise"), default="uniform")

    sp = sub.add_parser("interior-layer", parents=[common], allow_abbrev=False,
                        help="singularly perturbed BVP with an interior layer")
    sp.add_argument("--m", type=int, default=200, help="base uniform interior points (default 200)")
    sp.add_argument("--delta", type=float, default=0.01, help="perturbation parameter (default 0.01)")
    sp.add_argument("--grid", choices=("uniform", "clustered"), default="uniform")
    sp.add_argument("--extra-points", type=int, default=200,
                    help="normal-distributed extra nodes for --grid clustered (default 200)")

    sp = sub.add_parser("black-scholes", parents=[common], allow_abbrev=False,
                        help="implicit scheme for the European call")
    sp.add_argument("--step", type=int, default=10, help="time step to report (default 10)")

    sp = sub.add_parser("fixation", parents=[common], allow_abbrev=False,
                        help="Crank-Nicolson allele fixation probabilities")
    sp.add_argument("--generations", type=int, default=1000, help="generations to march (default 1000)")
    sp.add_argument("--p0", type=float, default=0.1, help="initial frequency to report (default 0.1)")

    sp = sub.add_parser("refine", parents=[common], allow_abbrev=False,
                        help="band-width-driven adaptive refinement loop")
    sp.add_argument("--model", choices=("pendulum", "interior-layer"), required=True)
    sp.add_argument("--m", type=int, default=None, help="base interior points (model default if omitted)")
    sp.add_argument("--delta", type=float, default=0.01, help="perturbation parameter (interior-layer)")
    sp.add_argument("--flag-ratio", type=float, default=2.0)
    sp.add_argument("--points-per-interval", type=int, default=1)
    sp.add_argument("--max-rounds", type=int, default=5)
    sp.add_argument("--stop-ratio", type=float, default=1.5)
    return p


def _explicit_dests(parser: argparse.ArgumentParser, argv: list) -> set:
    """Dests of options literally present on the command line."""
    tokens = set()
    for tok in argv:
        if tok.startswith("--"):
            tokens.add(tok.split("=", 1)[0])
    dests = set()
    for action in parser._actions:
        if any(opt in tokens for opt in action.option_strings):
            dests.add(action.dest)
    return dests


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


_CONFIG_PARSERS = {
    "draws": int, "burn_in": int, "seed": int, "a": float, "b": float,
    "m": int, "delta": float, "extra_points": int, "step": int,
    "generations": int, "p0": float, "grid": str, "model": str,
    "flag_ratio": float, "points_per_interval": int, "max_rounds": int,
    "stop_ratio": float, "out": str, "format": str,
    "single_thread": lambda s: s.lower() in ("1", "true", "yes"),
    "no_timestamp": lambda s: s.lower() in ("1", "true", "yes"),
}


def _apply_config(args: argparse.Namespace, explicit: set) -> None:
    if args.config is None:
        return
    for key, raw in _parse_config_file(args.config).items():
        if key not in _CONFIG_PARSERS:
            raise ValueError(f"config: unknown key {key!r}")
        if key in explicit or not hasattr(args, key):
            continue  # flags override the file; ignore keys foreign to this subcommand
        setattr(args, key, _CONFIG_PARSERS[key](raw))


def _resolve_seed(args: argparse.Namespace, explicit: set) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    return 0


# --- pipelines ------------------------------------------------------------


def _posterior_config(args, seed: int) -> bayes.PosteriorConfig:
    return bayes.PosteriorConfig(draws=args.draws, burn_in=args.burn_in, a=args.a, b=args.b, seed=seed)


def _band_arrays(band: bayes.PosteriorBand) -> dict:
    return {
        "posterior_mean": band.mean,
        "ci_lower": band.lower,
        "ci_upper": band.upper,
        "width": band.width,
        "scaled_width": band.scaled_width,
    }


def _base_metadata(model: str, args, seed: int, cfg: bayes.PosteriorConfig, m: int) -> dict:
    return {
        "model": model,
        "m": m,
        "seed": seed,
        "draws": cfg.draws,
        "burn_in": cfg.burn_in,
        "a": cfg.a,
        "b": cfg.b,
        "q_low": cfg.q_low,
        "q_high": cfg.q_high,
        "single_thread": bool(args.single_thread),
    }


def _finish(out: RunOutput, args) -> RunOutput:
    if not args.no_timestamp:
        out.metadata["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    out.write(args.out, args.format)
    return out


def _run_linear_bvp(args, seed: int) -> RunOutput:
    mdl = models.LinearBvpModel.canonical(args.m)
    cfg = _posterior_config(args, seed).resolved(args.m)
    fd = models.linear_bvp_solve(mdl)
    band = bayes.credible_band(models.linear_bvp_regression(mdl), cfg, RngState(seed))
    x = mdl.grid.interior
    exact = models.linear_bvp_exact(x)
    abs_err = np.abs(fd - exact)
    meta = _base_metadata("linear-bvp", args, seed, cfg, args.m)
    meta["h"] = mdl.h
    meta["max_abs_error"] = float(np.max(abs_err))
    arrays = {"x": x, "fd_solution": fd, **_band_arrays(band),
              "exact": exact, "abs_error": abs_err, "rel_error": abs_err / np.abs(exact),
              "truncation_leading": models.linear_bvp_truncation_leading(x, mdl.h)}
    return RunOutput(meta, arrays)


def _run_pendulum(args, seed: int) -> RunOutput:
    if args.grid == "piecewise":
        mdl = models.PendulumModel.canonical_piecewise()
    else:
        mdl = models.PendulumModel.canonical(args.m)
    m = mdl.grid.m
    cfg = _posterior_config(args, seed).resolved(m)
    report = models.pendulum_solve(mdl)
    band = bayes.credible_band(models.pendulum_regression(mdl, report.solution), cfg, RngState(seed))
    x = mdl.grid.interior
    exact = mdl.reference_values(x)
    abs_err = np.abs(report.solution - exact)
    meta = _base_metadata("pendulum", args, seed, cfg, m)
    meta.update(grid=args.grid, alpha=mdl.alpha, beta=mdl.beta,
                newton_iterations=report.iterations, newton_converged=report.converged,
                newton_residual=report.residual_norms[-1] if report.residual_norms else report.initial_residual,
                max_abs_error=float(np.max(abs_err)))
    harmonic = models.pendulum_initial_guess(mdl.grid, mdl.alpha, mdl.beta)
    arrays = {"x": x, "fd_solution": report.solution, **_band_arrays(band),
              "exact": exact, "abs_error": abs_err, "reference": harmonic}
    return RunOutput(meta, arrays)


def _run_interior_layer(args, seed: int) -> RunOutput:
    mdl = models.InteriorLayerModel.canonical(args.m, args.delta)
    rng = RngState(seed)
    if args.grid == "clustered":
        mdl = mdl.with_grid(models.clustered_grid(mdl.grid, args.extra_points, rng))
    m = mdl.grid.m
    cfg = _posterior_config(args, seed).resolved(m)
    report = models.interior_solve(mdl)
    band = bayes.credible_band(models.interior_regression(mdl, report.solution), cfg, rng)
    x = mdl.grid.interior
    reference = models.interior_perturbation_approx(mdl, x)
    meta = _base_metadata("interior-layer", args, seed, cfg, m)
    meta.update(grid=args.grid, delta=mdl.delta, gamma1=mdl.gamma1, gamma2=mdl.gamma2,
                extra_points=args.extra_points if args.grid == "clustered" else 0,
                newton_iterations=report.iterations, newton_converged=report.converged,
                newton_residual=report.residual_norms[-1] if report.residual_norms else report.initial_residual,
                sup_distance_to_reference=float(np.max(np.abs(report.solution - reference))))
    arrays = {"x": x, "fd_solution": report.solution, **_band_arrays(band), "reference": reference}
    return RunOutput(meta, arrays)


def _run_black_scholes(args, seed: int) -> RunOutput:
    mdl = models.BlackScholesModel()
    m = mdl.n_space - 1
    cfg = _posterior_config(args, seed).resolved(m)
    v = models.bs_run(mdl, args.step)
    band = models.bs_band_at_step(mdl, args.step, cfg, RngState(seed))
    exact = models.bs_exact_at_step(mdl, args.step)
    abs_err = np.abs(v - exact)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel_err = np.where(exact > 0.0, abs_err / np.where(exact > 0.0, exact, 1.0), np.nan)
    meta = _base_metadata("black-scholes", args, seed, cfg, m)
    meta.update(step=args.step, T=mdl.T, E=mdl.E, r=mdl.r, sigma=mdl.sigma,
                s_max=mdl.s_max, n_space=mdl.n_space, m_time=mdl.m_time,
                max_abs_error=float(np.max(abs_err)))
    arrays = {"x": mdl.s_interior, "fd_solution": v, **_band_arrays(band),
              "exact": exact, "abs_error": abs_err, "rel_error": rel_err}
    return RunOutput(meta, arrays)


def _run_fixation(args, seed: int) -> RunOutput:
    mdl = models.FixationModel()
    if args.generations < 1:
        raise ValueError("fixation: --generations must be >= 1")
    m = mdl.n_space - 1
    cfg = _posterior_config(args, seed).resolved(m)
    u_prev = models.fixation_run(mdl, args.generations - 1)
    A, B, b = models.fixation_assemble(mdl)
    from . import linalg

    u = linalg.thomas_solve(A, linalg.band_matvec(B, u_prev) + b)
    band = models.fixation_band(mdl, u_prev, RngState(seed), cfg)
    n0 = round(args.p0 / mdl.dx)
    prob = models.fixation_value_at(mdl, u, args.p0)
    meta = _base_metadata("fixation", args, seed, cfg, m)
    meta.update(generations=args.generations, p0=args.p0, dx=mdl.dx,
                n_space=mdl.n_space, s_pop=mdl.s_pop, selection=mdl.selection,
                fixation_probability=prob,
                ci_lower_at_p0=float(band.lower[n0 - 1]),
                ci_upper_at_p0=float(band.upper[n0 - 1]))
    arrays = {"x": mdl.x_interior, "fd_solution": u, **_band_arrays(band)}
    return RunOutput(meta, arrays)


def _run_refine(args, seed: int) -> RunOutput:
    policy = adaptive.RefinePolicy(
        flag_ratio=args.flag_ratio,
        points_per_flagged_interval=args.points_per_interval,
        max_rounds=args.max_rounds,
        stop_ratio=args.stop_ratio,
    )
    if args.model == "pendulum":
        mdl = models.PendulumModel.canonical(args.m if args.m else 124)
    else:
        mdl = models.InteriorLayerModel.canonical(args.m if args.m else 200, args.delta)
    cfg = _posterior_config(args, seed)
    history = adaptive.adapt_loop(mdl, policy, cfg, RngState(seed))
    band = history.final_band
    grid = history.final_grid
    x = grid.interior
    meta = _base_metadata("refine", args, seed, cfg.resolved(grid.m), grid.m)
    meta.update(refined_model=args.model, flag_ratio=policy.flag_ratio,
                points_per_interval=policy.points_per_flagged_interval,
                max_rounds=policy.max_rounds, stop_ratio=policy.stop_ratio,
                rounds=[
                    {"grid_size": r.grid_size, "max_width": r.max_width,
                     "median_width": r.median_width, "sup_error": r.sup_error,
                     "flagged": r.flagged}
                    for r in history.rounds
                ])
    final_model = mdl.with_grid(grid)
    arrays = {"x": x, "fd_solution": history.final_solution, **_band_arrays(band),
              "reference": final_model.reference_values(x)}
    return RunOutput(meta, arrays)


_RUNNERS = {
    "linear-bvp": _run_linear_bvp,
    "pendulum": _run_pendulum,
    "interior-layer": _run_interior_layer,
    "black-scholes": _run_black_scholes,
    "fixation": _run_fixation,
    "refine": _run_refine,
}


def run_cli(argv: list) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    explicit = _explicit_dests(parser, argv)
    try:
        _apply_config(args, explicit)
        seed = _resolve_seed(args, explicit)
        out = _RUNNERS[args.command](args, seed)
        _finish(out, args)
    except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError, OSError) as exc:
        origin = exc.__class__.__module__
        print(f"fdci: error [{origin}]: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
