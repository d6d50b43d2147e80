"""Large-constellation limits: Q matrix, failure probability, h curve.

As the constellation grows, (1/S) G^T G converges to a fixed matrix whose
inverse Q = diag(3, 3) + [[12, 6], [6, 4]] (vertical/clock block) shapes
every scaled estimator covariance:

* pseudo-range only:        sigma^2 Q
* carrier, known integers:  Q / (sigma^-2 + sigma_cp^-2)
* carrier, integers as noise: Q / (sigma^-2 + h * sigma_cp^-2)

where h in [0, 1] is the fraction of carrier Fisher information that
survives marginalizing the integer ambiguities. h depends on wavelength
and sigma_cp only through their ratio, so all Monte-Carlo evaluation here
works in the rescaled parameterization (wavelength = ratio, sigma_cp = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ambiguity import bracket_moments
from .estimators import Method
from .measurement import NoiseModel

Q_MATRIX = np.array([
    [3.0, 0.0, 0.0, 0.0],
    [0.0, 3.0, 0.0, 0.0],
    [0.0, 0.0, 12.0, 6.0],
    [0.0, 0.0, 6.0, 4.0],
])

# Limit of (1/S) G^T G under the uniform-hemisphere model; inverse of Q.
Q_INVERSE = np.array([
    [1.0 / 3.0, 0.0, 0.0, 0.0],
    [0.0, 1.0 / 3.0, 0.0, 0.0],
    [0.0, 0.0, 1.0 / 3.0, -0.5],
    [0.0, 0.0, -0.5, 1.0],
])

DOP_LIMIT = math.sqrt(22.0)

# Monte-Carlo draws are consumed in fixed-size chunks so results are
# deterministic for a given stream independent of total sample count
# batching by callers.
_CHUNK = 1 << 16


class MissingH(Exception):
    """Bayesian covariance prediction requested without an h value."""


@dataclass(frozen=True)
class HCurvePoint:
    """One Monte-Carlo evaluation of the carrier-information fraction h."""

    ratio: float
    big_m: int
    h_value: float
    std_err: float
    n_samples: int

    def __post_init__(self):
        if self.std_err < 0 or self.n_samples < 1:
            raise ValueError("std_err must be >= 0 and n_samples >= 1")


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def pcorr(ratio: float, sat_count: int) -> float:
    """Probability that rounding resolves every ambiguity correctly,
    given perfect knowledge of position and clock:
    (1 - 2 Phi(-ratio/2))^S. Tends to 0 as S grows for any finite ratio.
    """
    if ratio < 0:
        raise ValueError("ratio must be >= 0")
    if sat_count < 1:
        raise ValueError("sat_count must be >= 1")
    per_sat = 1.0 - 2.0 * std_normal_cdf(-ratio / 2.0)
    return per_sat**sat_count


def _mc_posterior_variance(ratio: float, big_m: int, n_samples: int,
                           rng: np.random.Generator) -> tuple[float, float]:
    """Mean and standard error of the posterior ambiguity variance
    Var(m | ratio*m + z) over m ~ Uniform{-M..M}, z ~ N(0,1).

    Works in the rescaled parameterization (wavelength = ratio,
    sigma_cp = 1); the posterior variance is invariant under that
    rescaling. Chunked draws: m then z per chunk.
    """
    nm = NoiseModel(sigma=1.0, sigma_cp=1.0, wavelength=ratio, ambiguity_bound=big_m)
    total = 0.0
    total_sq = 0.0
    left = n_samples
    while left > 0:
        n = min(left, _CHUNK)
        m = rng.integers(-big_m, big_m + 1, size=n)
        z = rng.standard_normal(n)
        m1, m2 = bracket_moments(ratio * m + z, nm, kmax=2)
        var = m2 - m1 * m1
        total += float(var.sum())
        total_sq += float((var * var).sum())
        left -= n
    mean = total / n_samples
    if n_samples > 1:
        sample_var = max(total_sq - n_samples * mean * mean, 0.0) / (n_samples - 1)
        std_err = math.sqrt(sample_var / n_samples)
    else:
        std_err = 0.0
    return mean, std_err


def h_function(ratio: float, big_m: int, n_samples: int = 1_000_000,
               rng=None) -> HCurvePoint:
    """Monte-Carlo estimate of the carrier-information fraction
    h_M(ratio) = 1 - ratio^2 * E[Var(m | ratio*m + z)].

    Exact endpoints: ratio = 0 or M = 0 give h = 1 with zero error (the
    ratio^2 factor or the degenerate prior kills the correction term).
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be >= 1000")
    if ratio < 0:
        raise ValueError("ratio must be >= 0")
    rng = np.random.default_rng(rng)
    mean_var, se_var = _mc_posterior_variance(ratio, big_m, n_samples, rng)
    return HCurvePoint(ratio=ratio, big_m=big_m,
                       h_value=1.0 - ratio**2 * mean_var,
                       std_err=ratio**2 * se_var, n_samples=n_samples)


def fisher_factor(nm: NoiseModel, n_samples: int = 1_000_000, rng=None) -> float:
    """Scalar Fisher-information factor sigma^-2 + sigma_cp^-2
    - (wavelength^2/sigma_cp^4) E[Var(m | wavelength*m + sigma_cp*z)].

    Shares the sampler with :func:`h_function`, so with the same stream
    the two are the same Monte-Carlo estimate written two algebraically
    identical ways (the posterior variance is ratio-invariant).
    """
    rng = np.random.default_rng(rng)
    ratio = nm.wavelength / nm.sigma_cp
    mean_var, _ = _mc_posterior_variance(ratio, nm.ambiguity_bound, n_samples, rng)
    return nm.sigma**-2 + nm.sigma_cp**-2 \
        - (nm.wavelength**2 / nm.sigma_cp**4) * mean_var


def predicted_covariance(method: Method, nm: NoiseModel,
                         h_value: float | None = None) -> np.ndarray:
    """Predicted limit of the scaled estimator covariance S * Cov(w_hat).

    The Bayesian methods need the carrier-information fraction ``h_value``
    (raises MissingH otherwise); the resolve-then-fix baseline has no
    limit theorem and is rejected.
    """
    if method == Method.PSEUDO_RANGE:
        return nm.sigma**2 * Q_MATRIX
    if method == Method.GENIE_CP:
        return Q_MATRIX / (nm.sigma**-2 + nm.sigma_cp**-2)
    if method in (Method.BAYES_FIXED_POINT, Method.BAYES_MULTI_START):
        if h_value is None:
            raise MissingH("Bayesian covariance prediction needs an h value")
        return Q_MATRIX / (nm.sigma**-2 + h_value * nm.sigma_cp**-2)
    raise ValueError(f"no covariance prediction for method {method!r}")
