"""Constellation geometry: hemisphere sampling, design matrix, DOP.

Satellites are modeled as i.i.d. unit direction vectors drawn uniformly
from the upper hemisphere. A constellation of S satellites yields an S x 4
design matrix whose row s is (-u_s, 1), mapping the unknown
(position error, clock bias) 4-vector to range measurements. The dilution
of precision sqrt(tr((G^T G)^-1)) summarizes how the geometry amplifies
measurement noise into position error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Condition number of G^T G above which a constellation is treated as
# degenerate. Well-posed hemisphere draws with S >= 4 sit far below this.
CONDITION_LIMIT = 1e12

UNIT_NORM_TOL = 1e-12


class SingularGeometry(Exception):
    """Constellation too degenerate for position estimation (S < 4 or
    ill-conditioned normal matrix). Callers should resample or abort."""


@dataclass(frozen=True)
class Geometry:
    """A sampled constellation.

    Attributes
    ----------
    units : ndarray, shape (S, 3)
        Unit direction vectors from receiver to each satellite. Each row
        has Euclidean norm 1 (within 1e-12) and nonnegative third
        component (satellite above the horizon).
    design : ndarray, shape (S, 4)
        Design matrix with row s equal to (-units[s], 1).
    """

    units: np.ndarray
    design: np.ndarray

    def __post_init__(self):
        units = np.atleast_2d(np.asarray(self.units, dtype=float))
        design = np.atleast_2d(np.asarray(self.design, dtype=float))
        if units.ndim != 2 or units.shape[1] != 3:
            raise ValueError(f"units must have shape (S, 3), got {units.shape}")
        if design.shape != (units.shape[0], 4):
            raise ValueError(f"design must have shape (S, 4), got {design.shape}")
        if units.shape[0] < 1:
            raise ValueError("need at least one satellite")
        norms = np.linalg.norm(units, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValueError("direction vectors must have unit norm")
        if np.any(units[:, 2] < 0.0) or np.any(units[:, 2] > 1.0):
            raise ValueError("third direction component must lie in [0, 1]")
        if np.any(design[:, 3] != 1.0):
            raise ValueError("last design column must be exactly 1")
        if np.any(design[:, :3] != -units):
            raise ValueError("design rows must equal (-u, 1)")
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "design", design)

    @property
    def sat_count(self) -> int:
        return self.units.shape[0]

    @classmethod
    def from_units(cls, units: np.ndarray) -> "Geometry":
        """Build the design matrix from an (S, 3) array of unit vectors."""
        units = np.atleast_2d(np.asarray(units, dtype=float))
        design = np.hstack([-units, np.ones((units.shape[0], 1))])
        return cls(units=units, design=design)


def _design_of(g) -> np.ndarray:
    """Accept a Geometry or a raw (S, 4) design matrix."""
    if isinstance(g, Geometry):
        return g.design
    return np.atleast_2d(np.asarray(g, dtype=float))


def sample_hemisphere(rng: np.random.Generator, sat_count: int) -> Geometry:
    """Draw a constellation of i.i.d. uniform upper-hemisphere directions.

    Uses the exact marginals: the vertical component u3 is uniform on
    [0, 1] (spherical-cap area argument) and the azimuth is uniform on
    [0, 2*pi), so (u1, u2) = sqrt(1 - u3^2) * (cos az, sin az).

    Parameters
    ----------
    rng : numpy Generator
        Source of randomness; the draw is deterministic given its state.
    sat_count : int
        Number of satellites S >= 1.
    """
    if sat_count < 1:
        raise ValueError("sat_count must be >= 1")
    u3 = rng.uniform(0.0, 1.0, size=sat_count)
    az = rng.uniform(0.0, 2.0 * np.pi, size=sat_count)
    r = np.sqrt(np.clip(1.0 - u3 * u3, 0.0, None))
    units = np.column_stack([r * np.cos(az), r * np.sin(az), u3])
    return Geometry.from_units(units)


def normal_matrix(g) -> np.ndarray:
    """Return G^T G, the symmetric positive-semidefinite 4x4 normal matrix."""
    design = _design_of(g)
    return design.T @ design


def _checked_normal(g) -> np.ndarray:
    design = _design_of(g)
    n = design.T @ design
    if design.shape[0] < 4:
        raise SingularGeometry(f"need at least 4 satellites, got {design.shape[0]}")
    cond = np.linalg.cond(n)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularGeometry(f"normal matrix condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e}")
    return n


def normal_inverse(g) -> np.ndarray:
    """Return (G^T G)^-1 via a pivoted 4x4 solve, guarding degeneracy.

    Raises
    ------
    SingularGeometry
        If S < 4 or cond(G^T G) exceeds CONDITION_LIMIT.
    """
    n = _checked_normal(g)
    return np.linalg.solve(n, np.eye(4))


def dop(g) -> float:
    """Dilution of precision sqrt(tr((G^T G)^-1)) of a constellation.

    Raises
    ------
    SingularGeometry
        If S < 4 or cond(G^T G) exceeds CONDITION_LIMIT.
    """
    return float(np.sqrt(np.trace(normal_inverse(g))))
