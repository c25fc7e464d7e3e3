"""Langevin dynamics of a single spin in a static field coupled to a heat bath.

Closed forms for Ohmic and Drude baths, an RK4 oracle for the mean equations,
noise-driven trajectory ensembles, and spectral checks of the
fluctuation-dissipation and Kramers-Kronig relations.
"""
__version__ = "0.1.0"

from .core import (BathKind, BathSpec, FrequencyGrid, MomentConvention, Series, SpinState,
                   SpinSystem, ThermalEnv, TimeGrid, Trajectory, total_moment, transverse_moment)
from .drude import DrudeCoefficients, derive_drude, drude_autocorrelation, drude_mean_moments
from .equilibrium import EquilibriumResult, SignConvention, brillouin, equilibrium_mz, langevin
from .errors import *  # noqa: F401,F403
from .ohmic import (OhmicDerived, autocorrelation, classical_autocorrelation, derive_ohmic,
                    mean_moments, response_family, response_imag_omega, response_real_omega)
