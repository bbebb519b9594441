"""Coulomb- and dipole-gauge light-matter Hamiltonians, their two-level reductions and polariton dispersions."""

from .dipole import (DipoleEigensystem, curvature, harmonic_eigensystem, nonlinearity, oscillator_strength,
                     renormalize_potential, solve_dipole, trk_sum)
from .errors import (BoundaryLeak, ConfigError, ConvergenceError, CurvatureUndefined, GaugeQEDError, GridTooCoarse,
                     PerturbativeRegimeViolated, RootBracketFailure, TruncationTooSmall, UnstableBranch)
from .potentials import Grid, PotentialSpec, default_grid

__version__ = "0.1.0"
