"""Measurement synthesis: pseudo-ranges, carrier phases, combined noise.

Pseudo-range:   y_s = g_s . w + sigma * z_s
Carrier phase:  yc_s = g_s . w + wavelength * m_s + sigma_cp * zc_s

with z, zc i.i.d. standard normal, m_s an unknown integer ambiguity drawn
uniformly from {-M, ..., M}, and g_s the design-matrix row of satellite s.
The combined carrier noise wavelength*m + sigma_cp*zc has a mixture
Gaussian density with 2M+1 equally weighted components.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import Geometry


@dataclass(frozen=True)
class NoiseModel:
    """Stochastic-model parameters shared by all operations.

    Attributes
    ----------
    sigma : float
        Pseudo-range noise standard deviation in meters (> 0).
    sigma_cp : float
        Carrier-phase noise standard deviation in meters (> 0),
        typically two orders of magnitude below sigma.
    wavelength : float
        Carrier wavelength in meters (>= 0); 0.19 m for the GPS L1 band.
    ambiguity_bound : int
        Half-width M >= 0 of the uniform integer-ambiguity prior
        {-M, ..., M}.

    Defaults mirror the reference experiment: sigma = 1 m,
    wavelength = 0.19 m, wavelength/sigma_cp = 4, M = 20.
    """

    sigma: float = 1.0
    sigma_cp: float = 0.0475
    wavelength: float = 0.19
    ambiguity_bound: int = 20

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if not self.sigma_cp > 0:
            raise ValueError("sigma_cp must be > 0")
        if self.wavelength < 0:
            raise ValueError("wavelength must be >= 0")
        if self.ambiguity_bound < 0 or self.ambiguity_bound != int(self.ambiguity_bound):
            raise ValueError("ambiguity_bound must be a nonnegative integer")

    @property
    def ratio(self) -> float:
        """Carrier signal-to-noise ratio wavelength / sigma_cp."""
        return self.wavelength / self.sigma_cp

    @classmethod
    def from_ratio(cls, ratio: float, sigma: float = 1.0, wavelength: float = 0.19,
                   ambiguity_bound: int = 20) -> "NoiseModel":
        """Build a model with sigma_cp chosen so wavelength/sigma_cp = ratio."""
        if not ratio > 0:
            raise ValueError("ratio must be > 0")
        return cls(sigma=sigma, sigma_cp=wavelength / ratio,
                   wavelength=wavelength, ambiguity_bound=ambiguity_bound)


@dataclass(frozen=True)
class ParameterVector:
    """The estimand: position error (3-vector, meters) plus clock bias (meters)."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    clock_bias: float = 0.0

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float).reshape(3)
        if not (np.all(np.isfinite(pos)) and np.isfinite(self.clock_bias)):
            raise ValueError("parameter entries must be finite")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "clock_bias", float(self.clock_bias))

    def as_array(self) -> np.ndarray:
        return np.append(self.position, self.clock_bias)

    @classmethod
    def from_array(cls, w: np.ndarray) -> "ParameterVector":
        w = np.asarray(w, dtype=float).reshape(4)
        return cls(position=w[:3], clock_bias=w[3])


@dataclass(frozen=True)
class MeasurementSet:
    """One epoch of synthesized measurements plus the simulation truth.

    The truth fields (ambiguities, parameters, noise draws) exist for
    oracle checks and genie estimators only; regular estimators must not
    read them.
    """

    pseudo: np.ndarray
    carrier: np.ndarray
    truth_ambiguities: np.ndarray
    truth_params: ParameterVector
    z: np.ndarray
    z_cp: np.ndarray

    def __post_init__(self):
        for name in ("pseudo", "carrier", "z", "z_cp"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).ravel())
        object.__setattr__(self, "truth_ambiguities",
                           np.asarray(self.truth_ambiguities, dtype=int).ravel())
        s = self.pseudo.shape[0]
        for name in ("carrier", "truth_ambiguities", "z", "z_cp"):
            if getattr(self, name).shape[0] != s:
                raise ValueError("all measurement vectors must share one length")

    @property
    def sat_count(self) -> int:
        return self.pseudo.shape[0]

    def to_dict(self) -> dict:
        return {
            "pseudo": self.pseudo.tolist(),
            "carrier": self.carrier.tolist(),
            "ambiguities": self.truth_ambiguities.tolist(),
            "truth": self.truth_params.as_array().tolist(),
            "z": self.z.tolist(),
            "z_cp": self.z_cp.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MeasurementSet":
        return cls(
            pseudo=np.array(d["pseudo"], dtype=float),
            carrier=np.array(d["carrier"], dtype=float),
            truth_ambiguities=np.array(d["ambiguities"], dtype=int),
            truth_params=ParameterVector.from_array(np.array(d["truth"], dtype=float)),
            z=np.array(d["z"], dtype=float),
            z_cp=np.array(d["z_cp"], dtype=float),
        )

    @classmethod
    def from_json(cls, s: str) -> "MeasurementSet":
        return cls.from_dict(json.loads(s))


def synthesize(rng: np.random.Generator, g: Geometry, w: ParameterVector,
               nm: NoiseModel, zero_noise: bool = False) -> MeasurementSet:
    """Draw one epoch of measurements for constellation ``g`` at truth ``w``.

    Draw order (fixed for reproducibility): ambiguities m, then z, then
    z_cp. With ``zero_noise`` both noise vectors are forced to zero after
    drawing, giving deterministic measurements for tests; this hook is
    test-only and not exposed on the command line.
    """
    s = g.sat_count
    m_bound = nm.ambiguity_bound
    m = rng.integers(-m_bound, m_bound + 1, size=s)
    z = rng.standard_normal(s)
    z_cp = rng.standard_normal(s)
    if zero_noise:
        z = np.zeros(s)
        z_cp = np.zeros(s)
    gw = g.design @ w.as_array()
    pseudo = gw + nm.sigma * z
    carrier = gw + nm.wavelength * m + nm.sigma_cp * z_cp
    return MeasurementSet(pseudo=pseudo, carrier=carrier, truth_ambiguities=m,
                          truth_params=w, z=z, z_cp=z_cp)


def combined_noise_pdf(v, nm: NoiseModel):
    """Density of the combined carrier noise wavelength*m + sigma_cp*zc.

    Equal-weight mixture of 2M+1 normal densities with std sigma_cp
    centered at wavelength*m for m in {-M, ..., M}. Vectorized over ``v``.
    """
    v = np.asarray(v, dtype=float)
    support = np.arange(-nm.ambiguity_bound, nm.ambiguity_bound + 1)
    centers = nm.wavelength * support
    x = (v[..., None] - centers) / nm.sigma_cp
    comp = np.exp(-0.5 * x * x) / (nm.sigma_cp * np.sqrt(2.0 * np.pi))
    out = comp.mean(axis=-1)
    return out if out.ndim else float(out)
