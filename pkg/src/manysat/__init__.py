"""Simulation and estimation toolkit for satellite positioning with
large constellations: stochastic constellation geometry, pseudo-range and
carrier-phase measurement synthesis, Bayesian ambiguity-as-noise maximum
likelihood, asymptotic covariance limits, and a reproducible experiment
harness."""

from .ambiguity import BracketQuery, bracket, bracket_derivative_check, mmse_ambiguities
from .asymptotics import (DOP_LIMIT, HCurvePoint, MissingH, Q_INVERSE, Q_MATRIX,
                          fisher_factor, h_function, pcorr, predicted_covariance)
from .estimators import (EstimateReport, Method, SolverConfig, WavelengthZero,
                         analytic_gradient, analytic_hessian, bayes_fixed_point,
                         bayes_multistart, genie_cp, log_likelihood, pr_ls,
                         standard_resolution, third_derivative_bound_check)
from .geometry import Geometry, SingularGeometry, dop, normal_matrix, sample_hemisphere
from .harness import (ErrorMetric, Experiment, ExperimentConfig, GridSpec,
                      InvalidConfig, TrialRecord, run_experiment)
from .measurement import (MeasurementSet, NoiseModel, ParameterVector,
                          combined_noise_pdf, synthesize)

__version__ = "0.1.0"
