"""Posterior moments of the integer ambiguity given a carrier residual.

For a residual v (meters) the unnormalized posterior weight of ambiguity
value m under the uniform prior on {-M, ..., M} is

    f_v(m) = exp(-(wavelength*m - v)^2 / (2*sigma_cp^2))

and the k-th posterior moment is <m^k>_v = sum m^k f_v(m) / sum f_v(m).
All sums subtract the maximum exponent before exponentiating, so they are
finite for every v, including |v| far outside the prior support where the
raw weights underflow. The ratio is invariant under that shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Geometry
from .measurement import NoiseModel, ParameterVector

MAX_ORDER = 3  # highest moment any curvature formula needs


@dataclass(frozen=True)
class BracketQuery:
    """A single posterior-moment evaluation: order k at residual v."""

    residual: float
    order: int
    nm: NoiseModel

    def __post_init__(self):
        if not 0 <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be in [0, {MAX_ORDER}]")


def bracket_moments(v, nm: NoiseModel, kmax: int = 2) -> list[np.ndarray]:
    """Posterior moments [<m>_v, ..., <m^kmax>_v], vectorized over ``v``.

    Returns a list of ``kmax`` arrays shaped like ``v``. This is the shared
    kernel behind the scalar bracket operation, the MMSE ambiguity
    estimate, and all likelihood derivatives.
    """
    if not 1 <= kmax <= MAX_ORDER:
        raise ValueError(f"kmax must be in [1, {MAX_ORDER}]")
    v = np.asarray(v, dtype=float)
    m_bound = nm.ambiguity_bound
    support = np.arange(-m_bound, m_bound + 1, dtype=float)
    e = -((nm.wavelength * support - v[..., None]) ** 2) / (2.0 * nm.sigma_cp**2)
    e -= e.max(axis=-1, keepdims=True)
    f = np.exp(e)
    den = f.sum(axis=-1)
    out = []
    weighted = f
    for _ in range(kmax):
        weighted = weighted * support
        out.append(weighted.sum(axis=-1) / den)
    return out


def bracket(q: BracketQuery) -> float:
    """Posterior moment <m^k>_v for a single residual.

    For M = 0 the posterior is a point mass at 0: the result is 1 for
    k = 0 and 0 for k >= 1.
    """
    if q.order == 0:
        return 1.0
    return float(bracket_moments(np.asarray(q.residual), q.nm, kmax=q.order)[q.order - 1])


def bracket_derivative_check(v: float, k: int, nm: NoiseModel) -> tuple[float, float]:
    """Analytic vs finite-difference derivative of v -> <m^k>_v.

    The analytic value is (wavelength/sigma_cp^2) *
    (<m^(k+1)>_v - <m^k>_v <m>_v); the numeric value is a central
    difference with step 1e-6 * max(sigma_cp, 1e-3), since the moments
    vary on the sigma_cp length scale. Exposed as a pair so the identity
    is directly testable.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    moments = bracket_moments(np.asarray(v), nm, kmax=k + 1)
    m1, mk, mk1 = moments[0], moments[k - 1], moments[k]
    analytic = nm.wavelength / nm.sigma_cp**2 * (mk1 - mk * m1)
    h = 1e-6 * max(nm.sigma_cp, 1e-3)
    lo, hi = bracket_moments(np.array([v - h, v + h]), nm, kmax=k)[k - 1]
    numeric = (hi - lo) / (2.0 * h)
    return float(analytic), float(numeric)


def mmse_ambiguities(g: Geometry, carrier: np.ndarray, w_hyp: ParameterVector,
                     nm: NoiseModel) -> np.ndarray:
    """MMSE ambiguity estimates <m>_v at residuals v = carrier - G w_hyp.

    Component s is the conditional mean of m_s given the carrier
    measurements under the hypothesis that the parameter vector equals
    ``w_hyp``. Real-valued: the integer prior shapes the posterior but the
    conditional mean need not be an integer.
    """
    v = np.asarray(carrier, dtype=float) - g.design @ w_hyp.as_array()
    if nm.ambiguity_bound == 0:
        return np.zeros_like(v)
    return bracket_moments(v, nm, kmax=1)[0]
