"""Spectral stability analysis of a weakly coupled thermoelastic wave system.

The displacement obeys a wave equation, the temperature a heat equation,
and the two exchange energy through zero-order coupling terms.  On an
interval all Laplacian eigenpairs are closed-form, so the evolution
generator truncates to small dense blocks whose spectra, resolvent norms
and energy traces can be computed essentially exactly.  The package
quantifies three facts about this family under all four combinations of
Dirichlet and Neumann boundary conditions: trajectories decay to zero, yet
no uniform exponential rate exists, and the sharp behaviour is polynomial
with resolvent growth exponent 2 (energy-norm decay like ``1/sqrt(t)`` for
smooth data).
"""

from .basis import BoundaryKind, GramMatrix, ModalBasis, evaluate, gram, make_basis
from .generator import (CoupledGenerator, CouplingSpec, SingularShiftError, StateVector,
                        apply, assemble, coefficient_matrix, energy_norm_sq,
                        energy_pairing, solve_shifted, thermal_dissipation, to_euclidean)
from .evolution import (EnergyTrace, evolve, modal_propagator, propagate,
                        strong_stability_report)
from .resolvent import (NearEigenvalueError, ResolventScan, WitnessSolution,
                        growth_exponent, resolvent_norm, scan, witness, worker_count)
from .stability import (AbscissaSample, DecayFit, SpectrumReport, abscissa_asymptotics,
                        fit_polynomial_decay, modal_cubic, spectrum, valid_fit_horizon)

__version__ = "0.1.0"

__all__ = [
    "BoundaryKind", "ModalBasis", "GramMatrix", "make_basis", "gram", "evaluate",
    "CouplingSpec", "CoupledGenerator", "StateVector", "SingularShiftError",
    "assemble", "apply", "energy_norm_sq", "energy_pairing", "solve_shifted",
    "coefficient_matrix", "to_euclidean", "thermal_dissipation",
    "EnergyTrace", "modal_propagator", "evolve", "propagate", "strong_stability_report",
    "ResolventScan", "WitnessSolution", "NearEigenvalueError",
    "resolvent_norm", "scan", "witness", "growth_exponent", "worker_count",
    "SpectrumReport", "DecayFit", "AbscissaSample",
    "spectrum", "modal_cubic", "abscissa_asymptotics", "fit_polynomial_decay",
    "valid_fit_horizon",
    "__version__",
]
