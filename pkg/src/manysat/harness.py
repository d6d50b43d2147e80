"""Seeded Monte-Carlo experiment harness with CSV/JSON emission.

Reproduces the toolkit's reference experiments: the scaled-DOP
convergence sweep, the combined-noise density, the h curve, the
log-likelihood contour, the per-method error CDF comparison, the
resolution failure probability, and the Fisher-information and
limit-covariance checks.

Reproducibility contract: every trial draws from its own substream
derived from (seed, group, trial_id), aggregation is performed in trial
order, and emitted tables contain no timing data, so identical configs
and seeds produce byte-identical files at any worker count.
"""

from __future__ import annotations

import functools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import asymptotics, estimators
from .ambiguity import bracket_moments
from .asymptotics import HCurvePoint, h_function, pcorr
from .estimators import (EstimateReport, Method, SolverConfig, bayes_multistart,
                         genie_cp, pr_ls, standard_resolution)
from .geometry import Geometry, SingularGeometry, dop, sample_hemisphere
from .measurement import MeasurementSet, NoiseModel, ParameterVector, combined_noise_pdf, synthesize

RESAMPLE_LIMIT = 100


class InvalidConfig(Exception):
    """Experiment configuration violates a precondition."""


class Experiment(str, Enum):
    DOP = "dop"
    NOISE_PDF = "noise-pdf"
    H_CURVE = "hcurve"
    CONTOUR = "contour"
    ERROR_CDF = "error-cdf"
    PCORR = "pcorr"
    FISHER_CHECK = "fisher-check"
    COVARIANCE_CHECK = "cov-check"


class ErrorMetric(str, Enum):
    POS_3D = "pos3d"
    POS_CLOCK_4D = "posclock"


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid for the contour and noise-pdf experiments."""

    center: tuple[float, float] = (0.0, 0.0)
    half_width: float = 0.38
    points: int = 81

    def __post_init__(self):
        if self.half_width <= 0 or self.points < 3:
            raise InvalidConfig("grid needs half_width > 0 and points >= 3")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: Experiment
    nm: NoiseModel = NoiseModel()
    sat_counts: tuple[int, ...] = (50,)
    trials: int | None = None
    seed: int = 0
    solver: SolverConfig = SolverConfig()
    error_metric: ErrorMetric = ErrorMetric.POS_3D
    output_path: str | None = None
    grid: GridSpec | None = None
    ratios: tuple[float, ...] | None = None
    mc_samples: int = 1_000_000
    threads: int = 1
    zero_noise: bool = False  # test hook, not reachable from the CLI

    def __post_init__(self):
        if not self.sat_counts or any(s < 1 for s in self.sat_counts):
            raise InvalidConfig("sat_counts must be nonempty positive integers")
        if self.trials is not None and self.trials < 1:
            raise InvalidConfig("trials must be >= 1")
        if self.threads < 1:
            raise InvalidConfig("threads must be >= 1")
        if self.mc_samples < 1000:
            raise InvalidConfig("mc_samples must be >= 1000")
        if self.ratios is not None and any(r < 0 for r in self.ratios):
            raise InvalidConfig("ratios must be nonnegative")


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    sat_count: int
    method: Method
    error_norm: float
    log_likelihood: float
    converged: bool
    wall_time_ms: float

    def __post_init__(self):
        if self.error_norm < 0:
            raise ValueError("error_norm must be >= 0")


def _trial_rng(seed: int, group: int, trial_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, 0, group, trial_id]))


def _aux_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, 1, k]))


def _map_trials(fn, args_list, threads: int):
    """Apply ``fn`` over trials, preserving order; process pool if asked."""
    if threads <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    chunk = max(1, len(args_list) // (threads * 8))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, args_list, chunksize=chunk))


def _sample_nonsingular(rng: np.random.Generator, sat_count: int) -> tuple[Geometry, float, int]:
    """Sample until the constellation supports estimation; returns the
    geometry, its DOP, and how many resamples were needed."""
    for attempt in range(RESAMPLE_LIMIT):
        g = sample_hemisphere(rng, sat_count)
        try:
            return g, dop(g), attempt
        except SingularGeometry:
            continue
    raise SingularGeometry(
        f"no usable geometry with S={sat_count} after {RESAMPLE_LIMIT} attempts")


def _error_norm(est: ParameterVector, truth: ParameterVector, metric: ErrorMetric) -> float:
    diff = est.as_array() - truth.as_array()
    if metric == ErrorMetric.POS_3D:
        diff = diff[:3]
    return float(np.linalg.norm(diff))


# ---------------------------------------------------------------------------
# Scaled-DOP convergence sweep
# ---------------------------------------------------------------------------

@dataclass
class DopResult:
    rows: list[tuple]  # (sat_count, trials, resampled, mean, std)

    header = ["sat_count", "trials", "resampled", "mean_scaled_dop", "std_scaled_dop"]

    def table(self):
        return self.header, self.rows


def _dop_trial(seed: int, sat_count: int, trial_id: int) -> tuple[float, int]:
    rng = _trial_rng(seed, sat_count, trial_id)
    _, value, resampled = _sample_nonsingular(rng, sat_count)
    return math.sqrt(sat_count) * value, resampled


def _dop_trial_args(args):
    return _dop_trial(*args)


def run_dop_experiment(cfg: ExperimentConfig) -> DopResult:
    """Mean and standard deviation of sqrt(S) * DOP per constellation size.

    Default trial counts: 10^4 for S <= 100, 100 for larger S (the large-S
    distribution is tightly concentrated).
    """
    rows = []
    for s in cfg.sat_counts:
        trials = cfg.trials if cfg.trials is not None else (10_000 if s <= 100 else 100)
        results = _map_trials(_dop_trial_args,
                              [(cfg.seed, s, t) for t in range(trials)], cfg.threads)
        values = np.array([v for v, _ in results])
        resampled = sum(r for _, r in results)
        std = float(values.std(ddof=1)) if trials > 1 else 0.0
        rows.append((s, trials, resampled, float(values.mean()), std))
    return DopResult(rows=rows)


# ---------------------------------------------------------------------------
# Combined carrier-noise density
# ---------------------------------------------------------------------------

@dataclass
class NoisePdfResult:
    rows: list[tuple]  # (ratio, v, pdf)

    header = ["ratio", "v", "pdf"]

    def table(self):
        return self.header, self.rows


def run_noise_pdf(cfg: ExperimentConfig) -> NoisePdfResult:
    """Tabulate the mixture density of the combined carrier noise for each
    requested wavelength/sigma_cp ratio at the configured prior bound."""
    ratios = cfg.ratios if cfg.ratios is not None else (2.0, 4.0, 8.0)
    if any(r <= 0 for r in ratios):
        raise InvalidConfig("noise-pdf ratios must be positive")
    lam = cfg.nm.wavelength
    if lam <= 0:
        raise InvalidConfig("noise-pdf needs wavelength > 0")
    m_bound = cfg.nm.ambiguity_bound
    if cfg.grid is not None:
        center, half_width, points = cfg.grid.center[0], cfg.grid.half_width, cfg.grid.points
    else:
        center = 0.0
        half_width = lam * m_bound + 8.0 * lam / min(ratios)
        points = 1201
    grid = np.linspace(center - half_width, center + half_width, points)
    rows = []
    for ratio in ratios:
        nm_r = NoiseModel(sigma=cfg.nm.sigma, sigma_cp=lam / ratio,
                          wavelength=lam, ambiguity_bound=m_bound)
        pdf = combined_noise_pdf(grid, nm_r)
        rows.extend((ratio, float(v), float(p)) for v, p in zip(grid, pdf))
    return NoisePdfResult(rows=rows)


# ---------------------------------------------------------------------------
# h curve and resolution failure probability
# ---------------------------------------------------------------------------

@dataclass
class HCurveResult:
    points: list[HCurvePoint]

    header = ["ratio", "big_m", "h", "std_err", "n_samples"]

    def table(self):
        return self.header, [(p.ratio, p.big_m, p.h_value, p.std_err, p.n_samples)
                             for p in self.points]


def run_hcurve(cfg: ExperimentConfig) -> HCurveResult:
    """Sweep the carrier-information fraction h over ratios (default
    0 to 10 in steps of 0.25) at the configured prior bound."""
    if cfg.ratios is not None:
        ratios = list(cfg.ratios)
    else:
        ratios = [0.25 * k for k in range(41)]
    points = [h_function(r, cfg.nm.ambiguity_bound, cfg.mc_samples, _aux_rng(cfg.seed, i))
              for i, r in enumerate(ratios)]
    return HCurveResult(points=points)


@dataclass
class PcorrResult:
    rows: list[tuple]  # (ratio, sat_count, p_all_correct)

    header = ["ratio", "sat_count", "p_all_correct"]

    def table(self):
        return self.header, self.rows


def run_pcorr(cfg: ExperimentConfig) -> PcorrResult:
    """Tabulate the all-ambiguities-correct probability over ratio x S."""
    ratios = cfg.ratios if cfg.ratios is not None else (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0)
    rows = [(float(r), s, pcorr(r, s)) for r in ratios for s in cfg.sat_counts]
    return PcorrResult(rows=rows)


# ---------------------------------------------------------------------------
# Error CDF comparison
# ---------------------------------------------------------------------------

CDF_METHODS = (Method.PSEUDO_RANGE, Method.STANDARD_RESOLUTION, Method.BAYES_MULTI_START)


@dataclass
class ErrorCdfResult:
    errors: dict  # Method -> sorted ndarray of error norms
    records: list[TrialRecord]
    fraction_standard_worse: float
    medians: dict  # Method -> float
    nonconverged: dict  # Method -> int

    header = ["method", "error_norm", "cdf"]

    def table(self):
        rows = []
        for method in CDF_METHODS:
            errs = self.errors[method]
            n = len(errs)
            rows.extend((method.value, float(e), (i + 1) / n)
                        for i, e in enumerate(errs))
        return self.header, rows


def _error_cdf_trial(cfg: ExperimentConfig, trial_id: int):
    rng = _trial_rng(cfg.seed, 0, trial_id)
    s = cfg.sat_counts[0]
    g, _, _ = _sample_nonsingular(rng, s)
    truth = ParameterVector()
    ms = synthesize(rng, g, truth, cfg.nm, zero_noise=cfg.zero_noise)
    out = []
    for method in CDF_METHODS:
        t0 = time.perf_counter()
        if method == Method.PSEUDO_RANGE:
            rep = pr_ls(g, ms.pseudo)
        elif method == Method.STANDARD_RESOLUTION:
            rep = standard_resolution(g, ms.pseudo, ms.carrier, cfg.nm)
        else:
            rep = bayes_multistart(g, ms.pseudo, ms.carrier, cfg.nm, cfg.solver, rng=rng)
        ms_elapsed = (time.perf_counter() - t0) * 1e3
        err = _error_norm(rep.estimate, truth, cfg.error_metric)
        out.append(TrialRecord(trial_id=trial_id, sat_count=s, method=method,
                               error_norm=err, log_likelihood=rep.log_likelihood,
                               converged=rep.converged, wall_time_ms=ms_elapsed))
    return out


def run_error_cdf(cfg: ExperimentConfig) -> ErrorCdfResult:
    """Empirical error CDFs of pseudo-range, resolve-then-fix, and Bayesian
    positioning on fresh geometry and measurements each trial
    (default 2000 trials)."""
    trials = cfg.trials if cfg.trials is not None else 2000
    fn = functools.partial(_error_cdf_trial, cfg)
    per_trial = _map_trials(fn, list(range(trials)), cfg.threads)
    records = [rec for group in per_trial for rec in group]
    by_method = {m: np.array([r.error_norm for r in records if r.method == m])
                 for m in CDF_METHODS}
    pr = by_method[Method.PSEUDO_RANGE]
    st = by_method[Method.STANDARD_RESOLUTION]
    return ErrorCdfResult(
        errors={m: np.sort(v) for m, v in by_method.items()},
        records=records,
        fraction_standard_worse=float(np.mean(st > pr)),
        medians={m: float(np.median(v)) for m, v in by_method.items()},
        nonconverged={m: sum(1 for r in records if r.method == m and not r.converged)
                      for m in CDF_METHODS},
    )


# ---------------------------------------------------------------------------
# Log-likelihood contour
# ---------------------------------------------------------------------------

@dataclass
class ContourResult:
    w1: np.ndarray
    w2: np.ndarray
    loglik: np.ndarray  # loglik[i, j] at (w1[i], w2[j])
    n_local_maxima: int
    polished_point: np.ndarray
    polish_gradient_norm: float
    polish_distance: float

    def table(self):
        header = ["w1\\w2"] + [f"{v:.17g}" for v in self.w2]
        rows = [(float(a), *map(float, row)) for a, row in zip(self.w1, self.loglik)]
        return header, rows


def count_grid_local_maxima(mat: np.ndarray) -> int:
    """Strict interior local maxima over the 8-neighborhood."""
    m = np.asarray(mat)
    c = m[1:-1, 1:-1]
    mask = np.ones_like(c, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= c > m[1 + di:m.shape[0] - 1 + di, 1 + dj:m.shape[1] - 1 + dj]
    return int(mask.sum())


def _polish_2d(g: Geometry, ms: MeasurementSet, nm: NoiseModel,
               start: np.ndarray, pinned: np.ndarray) -> tuple[np.ndarray, float]:
    """Newton-polish (w1, w2) from a grid maximum, w3/w4 pinned."""
    w = np.array([start[0], start[1], pinned[2], pinned[3]])
    for _ in range(50):
        grad = estimators.analytic_gradient(g, ms.pseudo, ms.carrier, w, nm)[:2]
        hess = estimators.analytic_hessian(g, ms.pseudo, ms.carrier, w, nm)[:2, :2]
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            break
        w[:2] += step
        if np.linalg.norm(step) < 1e-13:
            break
    grad = estimators.analytic_gradient(g, ms.pseudo, ms.carrier, w, nm)[:2]
    return w, float(np.linalg.norm(grad))


def run_contour(cfg: ExperimentConfig) -> ContourResult:
    """Log-likelihood surface over (w1, w2) for a single synthesized
    instance, with w3 and w4 pinned to the truth."""
    rng = _aux_rng(cfg.seed, 0)
    g, _, _ = _sample_nonsingular(rng, cfg.sat_counts[0])
    truth = ParameterVector()
    ms = synthesize(rng, g, truth, cfg.nm, zero_noise=cfg.zero_noise)
    grid = cfg.grid if cfg.grid is not None else GridSpec(
        center=(0.0, 0.0), half_width=2.0 * cfg.nm.wavelength, points=81)
    w1 = grid.center[0] + np.linspace(-grid.half_width, grid.half_width, grid.points)
    w2 = grid.center[1] + np.linspace(-grid.half_width, grid.half_width, grid.points)
    pinned = truth.as_array()
    loglik = np.empty((grid.points, grid.points))
    batch = np.empty((grid.points, 4))
    batch[:, 2] = pinned[2]
    batch[:, 3] = pinned[3]
    for i, a in enumerate(w1):
        batch[:, 0] = a
        batch[:, 1] = w2
        loglik[i] = estimators.log_likelihood_many(g, ms.pseudo, ms.carrier, batch, cfg.nm)
    n_max = count_grid_local_maxima(loglik)
    imax, jmax = np.unravel_index(np.argmax(loglik), loglik.shape)
    start = np.array([w1[imax], w2[jmax]])
    polished, grad_norm = _polish_2d(g, ms, cfg.nm, start, pinned)
    return ContourResult(w1=w1, w2=w2, loglik=loglik, n_local_maxima=n_max,
                         polished_point=polished, polish_gradient_norm=grad_norm,
                         polish_distance=float(np.linalg.norm(polished[:2] - start)))


# ---------------------------------------------------------------------------
# Limit covariance check
# ---------------------------------------------------------------------------

COV_METHODS = (Method.PSEUDO_RANGE, Method.GENIE_CP, Method.BAYES_MULTI_START)


@dataclass
class CovCheckResult:
    empirical: dict  # Method -> 4x4 ndarray
    predicted: dict  # Method -> 4x4 ndarray
    frobenius_rel: dict  # Method -> float
    nonconverged: dict  # Method -> int
    trials_used: dict  # Method -> int
    h_value: float
    flagged: bool
    records: list[TrialRecord]

    header = ["method", "i", "j", "empirical", "predicted", "rel_dev",
              "frobenius_rel", "nonconverged", "trials_used"]

    def table(self):
        rows = []
        for method in COV_METHODS:
            emp, pred = self.empirical[method], self.predicted[method]
            for i in range(4):
                for j in range(4):
                    denom = max(abs(pred[i, j]), 1e-30)
                    rows.append((method.value, i, j, float(emp[i, j]), float(pred[i, j]),
                                 float(abs(emp[i, j] - pred[i, j]) / denom),
                                 self.frobenius_rel[method], self.nonconverged[method],
                                 self.trials_used[method]))
        return self.header, rows


def _cov_trial(cfg: ExperimentConfig, trial_id: int):
    rng = _trial_rng(cfg.seed, 0, trial_id)
    s = cfg.sat_counts[0]
    g, _, _ = _sample_nonsingular(rng, s)
    truth = ParameterVector()
    ms = synthesize(rng, g, truth, cfg.nm, zero_noise=cfg.zero_noise)
    out = []
    for method in COV_METHODS:
        t0 = time.perf_counter()
        if method == Method.PSEUDO_RANGE:
            rep = pr_ls(g, ms.pseudo)
        elif method == Method.GENIE_CP:
            rep = genie_cp(g, ms, cfg.nm)
        else:
            rep = bayes_multistart(g, ms.pseudo, ms.carrier, cfg.nm, cfg.solver, rng=rng)
        elapsed = (time.perf_counter() - t0) * 1e3
        scaled = math.sqrt(s) * (rep.estimate.as_array() - truth.as_array())
        err = _error_norm(rep.estimate, truth, cfg.error_metric)
        rec = TrialRecord(trial_id=trial_id, sat_count=s, method=method,
                          error_norm=err, log_likelihood=rep.log_likelihood,
                          converged=rep.converged, wall_time_ms=elapsed)
        out.append((scaled, rec))
    return out


def run_covariance_check(cfg: ExperimentConfig) -> CovCheckResult:
    """Sample covariance of sqrt(S) (w_hat - w) per estimator against its
    predicted limit (default S from sat_counts, 2000 trials).

    The Bayesian prediction uses the Monte-Carlo h value at the matching
    ratio and prior bound. Non-converged trials are excluded from the
    covariance and counted; an exclusion rate of 1% or more flags the run.
    Note: at the large S used here the likelihood is effectively unimodal
    near the pseudo-range estimate, so a handful of multi-start draws
    (plus the deterministic anchors) suffices; pass a SolverConfig with a
    small n_starts to keep runtime within budget.
    """
    trials = cfg.trials if cfg.trials is not None else 2000
    h_point = h_function(cfg.nm.ratio, cfg.nm.ambiguity_bound, cfg.mc_samples,
                         _aux_rng(cfg.seed, 1))
    fn = functools.partial(_cov_trial, cfg)
    per_trial = _map_trials(fn, list(range(trials)), cfg.threads)
    records = [rec for group in per_trial for _, rec in group]
    empirical, predicted, frob, noncon, used = {}, {}, {}, {}, {}
    flagged = False
    for k, method in enumerate(COV_METHODS):
        scaled = np.array([group[k][0] for group in per_trial
                           if group[k][1].converged])
        noncon[method] = trials - scaled.shape[0]
        used[method] = scaled.shape[0]
        if noncon[method] >= 0.01 * trials:
            flagged = True
        emp = np.cov(scaled, rowvar=False)
        h_arg = h_point.h_value if method == Method.BAYES_MULTI_START else None
        pred = asymptotics.predicted_covariance(method, cfg.nm, h_arg)
        empirical[method] = emp
        predicted[method] = pred
        frob[method] = float(np.linalg.norm(emp - pred) / np.linalg.norm(pred))
    return CovCheckResult(empirical=empirical, predicted=predicted, frobenius_rel=frob,
                          nonconverged=noncon, trials_used=used,
                          h_value=h_point.h_value, flagged=flagged, records=records)


# ---------------------------------------------------------------------------
# Fisher-information factor check
# ---------------------------------------------------------------------------

@dataclass
class FisherResult:
    i_factor: float
    i_std_err: float
    j_factor: float
    j_std_err: float
    n_samples: int

    header = ["i_factor", "i_std_err", "j_factor", "j_std_err", "n_samples"]

    def table(self):
        return self.header, [(self.i_factor, self.i_std_err,
                              self.j_factor, self.j_std_err, self.n_samples)]


def run_fisher_check(cfg: ExperimentConfig) -> FisherResult:
    """Monte-Carlo scalar factors of the squared-score expectation (I) and
    the negated-curvature expectation (J) over single-satellite draws.

    The two expectations are equal for this model; with M = 0 or
    wavelength = 0 both collapse analytically to sigma^-2 + sigma_cp^-2.
    """
    nm = cfg.nm
    exact = nm.sigma**-2 + nm.sigma_cp**-2
    if nm.ambiguity_bound == 0 or nm.wavelength == 0:
        return FisherResult(i_factor=exact, i_std_err=0.0,
                            j_factor=exact, j_std_err=0.0, n_samples=cfg.mc_samples)
    rng = _aux_rng(cfg.seed, 2)
    n = cfg.mc_samples
    sums = np.zeros(2)
    sums_sq = np.zeros(2)
    chunk = 1 << 16
    left = n
    m_bound = nm.ambiguity_bound
    while left > 0:
        k = min(left, chunk)
        m = rng.integers(-m_bound, m_bound + 1, size=k)
        z = rng.standard_normal(k)
        z_cp = rng.standard_normal(k)
        v = nm.wavelength * m + nm.sigma_cp * z_cp
        m1, m2 = bracket_moments(v, nm, kmax=2)
        score = z / nm.sigma + z_cp / nm.sigma_cp \
            + (nm.wavelength / nm.sigma_cp**2) * (m - m1)
        i_samples = score * score
        j_samples = 1.0 / nm.sigma**2 + 1.0 / nm.sigma_cp**2 \
            - (nm.wavelength**2 / nm.sigma_cp**4) * (m2 - m1 * m1)
        sums += [i_samples.sum(), j_samples.sum()]
        sums_sq += [(i_samples * i_samples).sum(), (j_samples * j_samples).sum()]
        left -= k
    means = sums / n
    variances = np.maximum(sums_sq - n * means * means, 0.0) / (n - 1)
    ses = np.sqrt(variances / n)
    return FisherResult(i_factor=float(means[0]), i_std_err=float(ses[0]),
                        j_factor=float(means[1]), j_std_err=float(ses[1]), n_samples=n)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def _fmt_cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    """UTF-8 CSV, header row, '.' decimal separator, 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_cell(x) for x in row) + "\n")


def write_json(path: str, header: list[str], rows: list[tuple]) -> None:
    """JSON mirror of the CSV records: a list of header-keyed objects."""
    def clean(x):
        if isinstance(x, (bool, np.bool_)):
            return bool(x)
        if isinstance(x, (int, np.integer)):
            return int(x)
        if isinstance(x, (float, np.floating)):
            return float(x)
        return x
    records = [{k: clean(v) for k, v in zip(header, row)} for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(records, fh)
        fh.write("\n")


def write_result(result, path: str, fmt: str = "csv") -> None:
    header, rows = result.table()
    if fmt == "csv":
        write_csv(path, header, rows)
    elif fmt == "json":
        write_json(path, header, rows)
    else:
        raise InvalidConfig(f"unknown output format {fmt!r}")


RUNNERS = {
    Experiment.DOP: run_dop_experiment,
    Experiment.NOISE_PDF: run_noise_pdf,
    Experiment.H_CURVE: run_hcurve,
    Experiment.CONTOUR: run_contour,
    Experiment.ERROR_CDF: run_error_cdf,
    Experiment.PCORR: run_pcorr,
    Experiment.FISHER_CHECK: run_fisher_check,
    Experiment.COVARIANCE_CHECK: run_covariance_check,
}


def run_experiment(cfg: ExperimentConfig):
    return RUNNERS[cfg.experiment](cfg)
