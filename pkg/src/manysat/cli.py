"""Command-line front end for the experiment harness.

One subcommand per experiment; shared flags control the noise model,
trial counts, seeding, parallelism, and output. Exit codes: 0 on
success, 2 for an invalid configuration, 3 when geometry resampling was
exhausted.
"""

from __future__ import annotations

import argparse
import sys

from .estimators import SolverConfig
from .geometry import SingularGeometry
from .harness import (ErrorMetric, Experiment, ExperimentConfig, GridSpec,
                      InvalidConfig, run_experiment, write_result)
from .measurement import NoiseModel

_EXPERIMENT_HELP = {
    Experiment.DOP: "scaled dilution-of-precision sweep over constellation sizes",
    Experiment.NOISE_PDF: "combined carrier-noise density over a residual grid",
    Experiment.H_CURVE: "carrier-information fraction h over wavelength/noise ratios",
    Experiment.CONTOUR: "log-likelihood surface over (w1, w2) for one instance",
    Experiment.ERROR_CDF: "error CDFs for pseudo-range, resolve-then-fix, Bayesian",
    Experiment.PCORR: "probability of resolving all ambiguities correctly",
    Experiment.FISHER_CHECK: "empirical score/curvature Fisher factors",
    Experiment.COVARIANCE_CHECK: "empirical vs predicted scaled covariance",
}

# Per-subcommand defaults that differ from the global NoiseModel/harness ones.
_DEFAULTS = {
    Experiment.DOP: {"sats": "10,20,50,100,500,1000,10000"},
    Experiment.NOISE_PDF: {"big_m": 3, "ratios": "2,4,8"},
    Experiment.H_CURVE: {},
    Experiment.CONTOUR: {"sats": "50"},
    Experiment.ERROR_CDF: {"sats": "50", "trials": 2000},
    Experiment.PCORR: {"sats": "10,20,50,100,200"},
    Experiment.FISHER_CHECK: {},
    Experiment.COVARIANCE_CHECK: {"sats": "1000", "trials": 2000, "starts": 8},
}


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _float_pair(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="manysat",
                                     description="Large-constellation positioning experiments")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for exp in Experiment:
        d = _DEFAULTS[exp]
        p = sub.add_parser(exp.value, help=_EXPERIMENT_HELP[exp])
        p.add_argument("--sats", type=_int_list, default=_int_list(d.get("sats", "50")),
                       help="comma-separated constellation sizes")
        p.add_argument("--sigma", type=float, default=1.0, help="pseudo-range noise std (m)")
        p.add_argument("--lambda", dest="wavelength", type=float, default=0.19,
                       help="carrier wavelength (m)")
        noise = p.add_mutually_exclusive_group()
        noise.add_argument("--ratio", type=float, default=None,
                           help="wavelength/sigma-cp ratio (excludes --sigma-cp)")
        noise.add_argument("--sigma-cp", type=float, default=None,
                           help="carrier noise std (m)")
        p.add_argument("--big-m", type=int, default=d.get("big_m", 20),
                       help="integer-ambiguity prior bound M")
        p.add_argument("--trials", type=int, default=d.get("trials"),
                       help="Monte-Carlo trials (default depends on experiment)")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", default=f"{exp.value}.csv", help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--threads", type=int, default=1, help="worker processes")
        p.add_argument("--starts", type=int, default=d.get("starts", 200),
                       help="multi-start count for the Bayesian solver")
        p.add_argument("--error-metric", choices=[m.value for m in ErrorMetric],
                       default=ErrorMetric.POS_3D.value)
        if exp in (Experiment.H_CURVE, Experiment.PCORR, Experiment.NOISE_PDF):
            p.add_argument("--ratios", type=_float_list, default=_float_list(d["ratios"]) if "ratios" in d else None,
                           help="comma-separated wavelength/sigma-cp ratios")
        if exp in (Experiment.H_CURVE, Experiment.FISHER_CHECK, Experiment.COVARIANCE_CHECK):
            p.add_argument("--samples", type=int, default=1_000_000,
                           help="Monte-Carlo samples per point")
        if exp in (Experiment.CONTOUR, Experiment.NOISE_PDF):
            p.add_argument("--center", type=_float_pair, default=(0.0, 0.0),
                           help="grid center (two comma-separated values)")
            p.add_argument("--half-width", type=float, default=None,
                           help="half-width of the evaluation grid")
            p.add_argument("--points", type=int, default=None,
                           help="grid points per axis")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    exp = Experiment(args.experiment)
    if args.sigma_cp is not None:
        sigma_cp = args.sigma_cp
    elif args.ratio is not None:
        if args.ratio <= 0:
            raise InvalidConfig("--ratio must be > 0")
        if args.wavelength <= 0:
            raise InvalidConfig("--ratio needs --lambda > 0")
        sigma_cp = args.wavelength / args.ratio
    else:
        sigma_cp = args.wavelength / 4.0 if args.wavelength > 0 else 0.0475
    try:
        nm = NoiseModel(sigma=args.sigma, sigma_cp=sigma_cp,
                        wavelength=args.wavelength, ambiguity_bound=args.big_m)
        solver = SolverConfig(n_starts=args.starts)
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc
    grid = None
    if exp in (Experiment.CONTOUR, Experiment.NOISE_PDF):
        if args.half_width is not None or args.points is not None or args.center != (0.0, 0.0):
            half_width = args.half_width if args.half_width is not None \
                else 2.0 * args.wavelength
            points = args.points if args.points is not None else 81
            grid = GridSpec(center=args.center, half_width=half_width, points=points)
    return ExperimentConfig(
        experiment=exp,
        nm=nm,
        sat_counts=args.sats,
        trials=args.trials,
        seed=args.seed,
        solver=solver,
        error_metric=ErrorMetric(args.error_metric),
        output_path=args.out,
        grid=grid,
        ratios=getattr(args, "ratios", None),
        mc_samples=getattr(args, "samples", 1_000_000),
        threads=args.threads,
    )


def _summarize(cfg: ExperimentConfig, result) -> list[str]:
    lines = [f"experiment={cfg.experiment.value} seed={cfg.seed} out={cfg.output_path}"]
    if cfg.experiment == Experiment.DOP:
        for s, trials, resampled, mean, std in result.rows:
            lines.append(f"S={s}: sqrt(S)*DOP mean={mean:.4f} std={std:.4f} "
                         f"trials={trials} resampled={resampled}")
    elif cfg.experiment == Experiment.ERROR_CDF:
        lines.append(f"fraction standard-resolution worse than pseudo-range: "
                     f"{result.fraction_standard_worse:.4f}")
        for method, median in result.medians.items():
            lines.append(f"median error [{method.value}]: {median:.4f} m")
    elif cfg.experiment == Experiment.CONTOUR:
        lines.append(f"strict grid-local maxima: {result.n_local_maxima}")
        lines.append(f"polished gradient norm: {result.polish_gradient_norm:.3e}, "
                     f"distance from grid max: {result.polish_distance:.4f} m")
    elif cfg.experiment == Experiment.COVARIANCE_CHECK:
        lines.append(f"h={result.h_value:.6f} flagged={result.flagged}")
        for method, frob in result.frobenius_rel.items():
            lines.append(f"frobenius rel dev [{method.value}]: {frob:.4f} "
                         f"(nonconverged {result.nonconverged[method]})")
    elif cfg.experiment == Experiment.FISHER_CHECK:
        lines.append(f"I={result.i_factor:.6f}+-{result.i_std_err:.2e} "
                     f"J={result.j_factor:.6f}+-{result.j_std_err:.2e}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        result = run_experiment(cfg)
        write_result(result, cfg.output_path, args.format)
    except InvalidConfig as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except SingularGeometry as exc:
        print(f"singular geometry: {exc}", file=sys.stderr)
        return 3
    for line in _summarize(cfg, result):
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
