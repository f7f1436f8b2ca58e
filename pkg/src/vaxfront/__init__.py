"""Vaccination frontiers: R_e as a spectral radius, Pareto and anti-Pareto strategies."""

from .spectral import NoConvergenceError, SpectralResult, power_iteration, spectral_radius
from .models import Population, cost
from .analytic import ANTI, PARETO, FrontierFormula, analytic_frontiers
from .frontier import FrontierPoint, ScanConfig, scan

__version__ = "0.1.0"
