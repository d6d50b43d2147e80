"""Position/clock estimators and the mixture log-likelihood machinery.

Four estimators of the parameter vector w = (position, clock bias):

* pseudo-range least squares (ignores the carrier),
* a genie carrier-phase estimator given the true integer ambiguities,
* the Bayesian maximum-likelihood estimator that treats the ambiguities
  as noise (fixed-point iteration and multi-start likelihood ascent),
* the standard resolve-then-fix baseline (float ambiguities from the
  pseudo-range solution, rounded componentwise).

The Bayesian log-likelihood of one satellite is

    l = -(g.w - y)^2 / (2 sigma^2)
        + log sum_m exp(-(g.w + wavelength*m - yc)^2 / (2 sigma_cp^2))

summed over satellites. The additive normalization constant is omitted
throughout: it does not depend on w, so stationary points, curvature, and
likelihood differences are unaffected (absolute values are shifted).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .ambiguity import bracket_moments, mmse_ambiguities
from .geometry import Geometry, SingularGeometry, _design_of, normal_inverse
from .measurement import MeasurementSet, NoiseModel, ParameterVector


class WavelengthZero(Exception):
    """Ambiguity resolution requested with wavelength = 0."""


class Method(str, Enum):
    """Estimator identifiers; values are the exact strings used in CSV/JSON."""

    PSEUDO_RANGE = "PseudoRange"
    GENIE_CP = "GenieCP"
    BAYES_FIXED_POINT = "BayesFixedPoint"
    BAYES_MULTI_START = "BayesMultiStart"
    STANDARD_RESOLUTION = "StandardResolution"


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs for the fixed-point and multi-start solvers.

    fp_* control the fixed-point iteration: step tolerance (meters),
    iteration cap, and initial damping (halved whenever successive
    residuals flip sign in any component, which breaks Picard cycles).
    n_starts random starts are drawn around the pseudo-range estimate
    with start_radius_scale times its covariance; local ascent is damped
    Newton with step tolerance local_ascent_tol.
    """

    fp_tol: float = 1e-9
    fp_max_iter: int = 500
    fp_damping: float = 1.0
    n_starts: int = 200
    start_radius_scale: float = 3.0
    local_ascent_tol: float = 1e-10
    local_max_iter: int = 100

    def __post_init__(self):
        if not (self.fp_tol > 0 and self.local_ascent_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 < self.fp_damping <= 1):
            raise ValueError("fp_damping must be in (0, 1]")
        if min(self.fp_max_iter, self.n_starts, self.local_max_iter,
               self.start_radius_scale) <= 0:
            raise ValueError("iteration counts, start count, and radius must be positive")


@dataclass(frozen=True)
class EstimateReport:
    """An estimator's output plus solver diagnostics.

    ``log_likelihood`` uses the summed per-satellite convention without
    the normalization constant; for the pseudo-range estimator (which has
    no noise model in scope) it is the plain least-squares objective
    -0.5 * ||y - G w||^2.
    """

    estimate: ParameterVector
    method: Method
    log_likelihood: float
    iterations: int = 0
    converged: bool = True
    starts_evaluated: int = 0
    resolved_ambiguities: np.ndarray | None = None

    def __post_init__(self):
        if not np.isfinite(self.log_likelihood):
            raise ValueError("log_likelihood must be finite")

    def to_dict(self) -> dict:
        d = {
            "estimate": self.estimate.as_array().tolist(),
            "method": self.method.value,
            "log_likelihood": self.log_likelihood,
            "iterations": self.iterations,
            "converged": self.converged,
            "starts_evaluated": self.starts_evaluated,
        }
        if self.resolved_ambiguities is not None:
            d["resolved_ambiguities"] = np.asarray(self.resolved_ambiguities).tolist()
        return d


def _w_array(w) -> np.ndarray:
    if isinstance(w, ParameterVector):
        return w.as_array()
    return np.asarray(w, dtype=float)


def noise_weights(nm: NoiseModel) -> tuple[float, float]:
    """Convex-combination weights (alpha, beta) of pseudo-range vs carrier."""
    wp = nm.sigma**-2
    wc = nm.sigma_cp**-2
    return wp / (wp + wc), wc / (wp + wc)


def pr_ls(g, pseudo: np.ndarray) -> EstimateReport:
    """Pseudo-range least squares (G^T G)^-1 G^T y.

    Raises SingularGeometry for degenerate constellations.
    """
    design = _design_of(g)
    pseudo = np.asarray(pseudo, dtype=float)
    ninv = normal_inverse(g)
    est = ninv @ (design.T @ pseudo)
    resid = pseudo - design @ est
    return EstimateReport(estimate=ParameterVector.from_array(est),
                          method=Method.PSEUDO_RANGE,
                          log_likelihood=-0.5 * float(resid @ resid))


def genie_cp(g, ms: MeasurementSet, nm: NoiseModel) -> EstimateReport:
    """Carrier-phase estimator given the true ambiguities (genie access).

    Weighted blend of the pseudo-ranges and the ambiguity-corrected
    carrier phases; the performance upper bound for any ambiguity
    treatment.
    """
    design = _design_of(g)
    ninv = normal_inverse(g)
    alpha, beta = noise_weights(nm)
    combined = alpha * ms.pseudo + beta * (ms.carrier - nm.wavelength * ms.truth_ambiguities)
    est = ninv @ (design.T @ combined)
    ll = log_likelihood(g, ms.pseudo, ms.carrier, est, nm)
    return EstimateReport(estimate=ParameterVector.from_array(est),
                          method=Method.GENIE_CP, log_likelihood=ll)


def log_likelihood_many(g, pseudo: np.ndarray, carrier: np.ndarray, w_batch,
                        nm: NoiseModel) -> np.ndarray:
    """Log-likelihood at a batch of hypotheses, shape (..., 4) -> (...,)."""
    design = _design_of(g)
    pseudo = np.asarray(pseudo, dtype=float)
    carrier = np.asarray(carrier, dtype=float)
    w_batch = np.asarray(w_batch, dtype=float)
    gw = w_batch @ design.T
    pr_part = -((pseudo - gw) ** 2).sum(axis=-1) / (2.0 * nm.sigma**2)
    support = np.arange(-nm.ambiguity_bound, nm.ambiguity_bound + 1, dtype=float)
    e = -((gw[..., None] + nm.wavelength * support - carrier[..., :, None]) ** 2) \
        / (2.0 * nm.sigma_cp**2)
    cp_part = logsumexp(e, axis=-1).sum(axis=-1)
    return pr_part + cp_part


def log_likelihood(g, pseudo, carrier, w_hyp, nm: NoiseModel) -> float:
    """Mixture log-likelihood of w_hyp (normalization constant omitted)."""
    return float(log_likelihood_many(g, pseudo, carrier, _w_array(w_hyp), nm))


def _grad_many(design, pseudo, carrier, w_batch, nm):
    gw = w_batch @ design.T
    v = carrier - gw
    m1 = bracket_moments(v, nm, kmax=1)[0]
    resid = (pseudo - gw) / nm.sigma**2 + v / nm.sigma_cp**2 \
        - (nm.wavelength / nm.sigma_cp**2) * m1
    return resid @ design


def analytic_gradient(g, pseudo, carrier, w_hyp, nm: NoiseModel) -> np.ndarray:
    """Gradient of the log-likelihood with respect to w (4-vector).

    Component i is sum_s g_si [ (y_s - g_s.w)/sigma^2 + v_s/sigma_cp^2
    - (wavelength/sigma_cp^2) <m>_{v_s} ] with v_s the carrier residual.
    """
    design = _design_of(g)
    return _grad_many(design, np.asarray(pseudo, float), np.asarray(carrier, float),
                      _w_array(w_hyp), nm)


def _hess_many(design, carrier, w_batch, nm):
    gw = w_batch @ design.T
    v = carrier - gw
    m1, m2 = bracket_moments(v, nm, kmax=2)
    c = -1.0 / nm.sigma**2 - 1.0 / nm.sigma_cp**2 \
        + (nm.wavelength**2 / nm.sigma_cp**4) * (m2 - m1 * m1)
    return np.einsum("...s,si,sj->...ij", c, design, design)


def analytic_hessian(g, pseudo, carrier, w_hyp, nm: NoiseModel) -> np.ndarray:
    """Hessian of the log-likelihood: G^T diag(c) G with per-satellite
    curvature c_s = -1/sigma^2 - 1/sigma_cp^2 + (wavelength^2/sigma_cp^4)
    * posterior variance of m_s."""
    design = _design_of(g)
    return _hess_many(design, np.asarray(carrier, float), _w_array(w_hyp), nm)


def third_derivative_bound_check(nm: NoiseModel) -> float:
    """Uniform bound 6 M^3 wavelength^3 / sigma_cp^6 on every third partial
    derivative of the per-satellite log-likelihood: each |g_i| <= 1, and the
    third posterior cumulant of m is bounded by 6 M^3."""
    m = nm.ambiguity_bound
    return 6.0 * m**3 * nm.wavelength**3 / nm.sigma_cp**6


def third_derivative_tensor(g_row: np.ndarray, v: float, nm: NoiseModel) -> np.ndarray:
    """All third partials of one satellite's log-likelihood summand at
    carrier residual v: -(g_i g_j g_k) (wavelength^3/sigma_cp^6)
    (<m^3> - 3<m^2><m> + 2<m>^3)."""
    g_row = np.asarray(g_row, dtype=float).reshape(4)
    m1, m2, m3 = bracket_moments(np.asarray(v, dtype=float), nm, kmax=3)
    cum = m3 - 3.0 * m2 * m1 + 2.0 * m1**3
    scale = nm.wavelength**3 / nm.sigma_cp**6
    return -scale * float(cum) * np.einsum("i,j,k->ijk", g_row, g_row, g_row)


def bayes_fixed_point(g, pseudo, carrier, nm: NoiseModel,
                      cfg: SolverConfig = SolverConfig()) -> EstimateReport:
    """Damped Picard iteration for the self-consistent ML equation.

    Iterates w <- (G^T G)^-1 G^T [alpha y + beta (yc - wavelength <m>(w))]
    from the pseudo-range estimate, blending each update with damping d
    (halved whenever successive residuals reverse sign in a component).
    Convergence means the undamped residual norm fell below fp_tol; a
    non-converged run returns a report with converged=False rather than
    raising.
    """
    design = _design_of(g)
    pseudo = np.asarray(pseudo, dtype=float)
    carrier = np.asarray(carrier, dtype=float)
    ninv = normal_inverse(g)
    proj = ninv @ design.T
    alpha, beta = noise_weights(nm)
    base = proj @ (alpha * pseudo + beta * carrier)
    w = proj @ pseudo
    damping = cfg.fp_damping
    prev_resid = None
    calm_streak = 0
    converged = False
    iterations = 0
    for iterations in range(1, cfg.fp_max_iter + 1):
        m1 = bracket_moments(carrier - design @ w, nm, kmax=1)[0]
        resid = base - beta * nm.wavelength * (proj @ m1) - w
        if np.linalg.norm(resid) < cfg.fp_tol:
            w = w + resid
            converged = True
            break
        if prev_resid is not None and np.any(resid * prev_resid < 0):
            damping = max(damping / 2.0, 1.0 / 64.0)
            calm_streak = 0
        else:
            # Recover damping after a calm stretch so oscillation episodes
            # do not permanently stall the iteration.
            calm_streak += 1
            if calm_streak >= 5:
                damping = min(2.0 * damping, cfg.fp_damping)
                calm_streak = 0
        w = w + damping * resid
        prev_resid = resid
    ll = log_likelihood(g, pseudo, carrier, w, nm)
    return EstimateReport(estimate=ParameterVector.from_array(w),
                          method=Method.BAYES_FIXED_POINT, log_likelihood=ll,
                          iterations=iterations, converged=converged)


_ARMIJO = 1e-4
_MAX_HALVINGS = 60


def _ascend(design, pseudo, carrier, nm, starts, cfg):
    """Batched local log-likelihood ascent from each row of ``starts``.

    Damped Newton where the Hessian is negative definite, gradient ascent
    otherwise, with Armijo backtracking (halving). Returns terminal
    points, their log-likelihoods, per-start iteration counts, and
    convergence flags (step below tolerance or stationary).
    """
    w_all = np.array(starts, dtype=float)
    k = w_all.shape[0]
    ll_all = log_likelihood_many(design, pseudo, carrier, w_all, nm)
    iters = np.zeros(k, dtype=int)
    converged = np.zeros(k, dtype=bool)
    active = np.ones(k, dtype=bool)
    for _ in range(cfg.local_max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        wa = w_all[idx]
        grad = _grad_many(design, pseudo, carrier, wa, nm)
        hess = _hess_many(design, carrier, wa, nm)
        newton_ok = np.linalg.eigvalsh(hess)[:, -1] < 0.0
        dirs = grad.copy()
        if newton_ok.any():
            dirs[newton_ok] = np.linalg.solve(
                hess[newton_ok], -grad[newton_ok][..., None])[..., 0]
        slope = np.einsum("ij,ij->i", grad, dirs)
        bad = slope <= 0.0
        if bad.any():
            dirs[bad] = grad[bad]
            slope[bad] = (grad[bad] ** 2).sum(axis=1)
        # A vanishing ascent slope means the point is already stationary.
        stationary = slope <= 1e-18 * (1.0 + np.abs(ll_all[idx]))
        new_w = wa.copy()
        new_ll = ll_all[idx].copy()
        accepted = np.zeros(idx.size, dtype=bool)
        t = np.ones(idx.size)
        pending = ~stationary
        for _ls in range(_MAX_HALVINGS):
            p = np.flatnonzero(pending)
            if p.size == 0:
                break
            cand = wa[p] + t[p, None] * dirs[p]
            ll_cand = log_likelihood_many(design, pseudo, carrier, cand, nm)
            ok = ll_cand >= ll_all[idx][p] + _ARMIJO * t[p] * slope[p]
            hit = p[ok]
            new_w[hit] = cand[ok]
            new_ll[hit] = ll_cand[ok]
            accepted[hit] = True
            pending[hit] = False
            t[p[~ok]] /= 2.0
        step = np.linalg.norm(new_w - wa, axis=1)
        w_all[idx] = new_w
        ll_all[idx] = new_ll
        iters[idx] += 1
        done = (~accepted) | (step < cfg.local_ascent_tol)
        converged[idx[done]] = True
        active[idx[done]] = False
    return w_all, ll_all, iters, converged


def bayes_multistart(g, pseudo, carrier, nm: NoiseModel,
                     cfg: SolverConfig = SolverConfig(), rng=None) -> EstimateReport:
    """Global likelihood maximization by multi-start local ascent.

    Starting points: the pseudo-range estimate, the fixed-point solution,
    and cfg.n_starts Gaussian draws around the pseudo-range estimate with
    start_radius_scale^2 times its covariance sigma^2 (G^T G)^-1. The two
    deterministic starts make the returned likelihood at least that of
    either anchor. Deterministic given ``rng``.
    """
    rng = np.random.default_rng(rng)
    design = _design_of(g)
    pseudo = np.asarray(pseudo, dtype=float)
    carrier = np.asarray(carrier, dtype=float)
    ninv = normal_inverse(g)
    pr_est = ninv @ (design.T @ pseudo)
    fp_est = bayes_fixed_point(g, pseudo, carrier, nm, cfg).estimate.as_array()
    chol = np.linalg.cholesky(cfg.start_radius_scale**2 * nm.sigma**2 * ninv)
    draws = pr_est + rng.standard_normal((cfg.n_starts, 4)) @ chol.T
    starts = np.vstack([pr_est, fp_est, draws])
    w_all, ll_all, iters, conv = _ascend(design, pseudo, carrier, nm, starts, cfg)
    best = int(np.argmax(ll_all))
    return EstimateReport(estimate=ParameterVector.from_array(w_all[best]),
                          method=Method.BAYES_MULTI_START,
                          log_likelihood=float(ll_all[best]),
                          iterations=int(iters[best]), converged=bool(conv[best]),
                          starts_evaluated=starts.shape[0])


def standard_resolution(g, pseudo, carrier, nm: NoiseModel) -> EstimateReport:
    """Resolve-then-fix baseline: float, fix, (no validation), position.

    The joint float solution of (w, m) without integer constraints is
    exactly the pseudo-range estimate together with
    m_float = (yc - G w_pr)/wavelength, since the carrier equations can be
    satisfied exactly for any w. Fixing rounds componentwise and clamps to
    the prior support [-M, M]; validation always accepts, so failed fixes
    flow through to the position output, as in the reference comparison.
    """
    if nm.wavelength == 0:
        raise WavelengthZero("cannot resolve ambiguities with wavelength 0")
    design = _design_of(g)
    pseudo = np.asarray(pseudo, dtype=float)
    carrier = np.asarray(carrier, dtype=float)
    ninv = normal_inverse(g)
    w_pr = ninv @ (design.T @ pseudo)
    float_amb = (carrier - design @ w_pr) / nm.wavelength
    m_bound = nm.ambiguity_bound
    fixed = np.clip(np.rint(float_amb), -m_bound, m_bound).astype(int)
    alpha, beta = noise_weights(nm)
    combined = alpha * pseudo + beta * (carrier - nm.wavelength * fixed)
    est = ninv @ (design.T @ combined)
    ll = log_likelihood(g, pseudo, carrier, est, nm)
    return EstimateReport(estimate=ParameterVector.from_array(est),
                          method=Method.STANDARD_RESOLUTION, log_likelihood=ll,
                          resolved_ambiguities=fixed)
