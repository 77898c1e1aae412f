"""Truncated block generator of the coupled wave-heat system.

In coefficient space the state is ``U = (u_hat, v_hat, theta_hat)`` where
``u`` is the displacement, ``v = u_t`` the velocity and ``theta`` the
temperature deviation.  The dynamics is ``dU/dt = A U`` with block operator

    A = [[ 0,        I,        0      ],
         [-Lam_u,    0,       -alpha G],
         [ 0,       -beta G^T, -Lam_th]]

where ``Lam_u`` and ``Lam_th`` are the diagonal Laplacian eigenvalue blocks
of the displacement and temperature bases and ``G`` the Gram matrix between
them (identity when both fields share one basis).  The symmetric coupling
``alpha = gamma, beta = -gamma`` gives off-diagonal blocks ``-gamma G`` and
``+gamma G^T``, which cancel exactly in the energy pairing and leave the
thermal block as the only source of dissipation.

The energy inner product weighs the displacement block by ``Lam_u``:

    <U1, U2> = (Lam_u u1) . conj(u2) + v1 . conj(v2) + th1 . conj(th2)

so the squared energy norm coincides with the physical energy
``int |du/dx|^2 + |u_t|^2 + |theta|^2 dx`` of the expanded fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .basis import BoundaryKind, ModalBasis, gram, make_basis

#: Relative residual accepted by :func:`solve_shifted` before it gives up.
SOLVE_RESIDUAL_TOL = 1e-10

#: Smallest singular values below this floor (relative to the largest one
#: for matrices of norm above one) mark a shift as an eigenvalue hit; an
#: exact hit computes to sigma_min ~ eps * sigma_max, not zero.
SINGULAR_SIGMA_FLOOR = 1e-14


class SingularShiftError(RuntimeError):
    """Shifted solve hit a (numerically) singular matrix."""

    def __init__(self, shift: complex, condition_estimate: float):
        self.shift = shift
        self.condition_estimate = condition_estimate
        super().__init__(
            f"shift {shift} is numerically an eigenvalue of the truncated generator "
            f"(condition estimate {condition_estimate:.3e})")


@dataclass(frozen=True)
class CouplingSpec:
    """Coupling constants of the two zero-order exchange terms.

    The displacement equation carries ``-alpha * theta`` and the temperature
    equation ``-beta * u_t``.  The physically standard symmetric coupling is
    ``alpha = gamma, beta = -gamma``; arbitrary real pairs are accepted for
    the generalized dissipativity bound, which only controls ``alpha + beta``.
    """

    alpha: float
    beta: float

    @classmethod
    def symmetric(cls, gamma: float) -> "CouplingSpec":
        return cls(alpha=float(gamma), beta=-float(gamma))

    @property
    def is_symmetric(self) -> bool:
        return self.beta == -self.alpha

    @property
    def gamma(self) -> float:
        """Symmetric coupling strength; only defined when ``beta == -alpha``."""
        if not self.is_symmetric:
            raise ValueError(f"coupling {self} is not of symmetric form (beta != -alpha)")
        return self.alpha


@dataclass(frozen=True)
class StateVector:
    """Coefficient triple for states and right-hand sides."""

    u_hat: np.ndarray
    v_hat: np.ndarray
    theta_hat: np.ndarray

    def __post_init__(self):
        for name in ("u_hat", "v_hat", "theta_hat"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex))
        if not (self.u_hat.shape == self.v_hat.shape == self.theta_hat.shape):
            raise ValueError(
                f"state blocks must share one length, got {self.u_hat.shape}, "
                f"{self.v_hat.shape}, {self.theta_hat.shape}")

    @classmethod
    def zeros(cls, mode_count: int) -> "StateVector":
        z = np.zeros(mode_count, dtype=complex)
        return cls(z, z.copy(), z.copy())

    @classmethod
    def from_array(cls, flat: np.ndarray) -> "StateVector":
        n = flat.size // 3
        return cls(flat[:n], flat[n:2 * n], flat[2 * n:])

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.u_hat, self.v_hat, self.theta_hat])

    @property
    def mode_count(self) -> int:
        return self.u_hat.size


@dataclass(frozen=True)
class CoupledGenerator:
    """Assembled truncated generator for one boundary-condition pair."""

    bc_u: BoundaryKind
    bc_theta: BoundaryKind
    basis_u: ModalBasis
    basis_theta: ModalBasis
    coupling: CouplingSpec
    lambda_u: np.ndarray
    lambda_theta: np.ndarray
    gram: np.ndarray

    @property
    def mode_count(self) -> int:
        return self.lambda_u.size

    @property
    def dimension(self) -> int:
        return 3 * self.mode_count

    @property
    def same_basis(self) -> bool:
        return self.bc_u is self.bc_theta

    @property
    def gamma(self) -> float:
        return self.coupling.gamma

    @property
    def bc_label(self) -> str:
        return self.bc_u.value + self.bc_theta.value


def assemble(bc_u: BoundaryKind, bc_theta: BoundaryKind,
             coupling: CouplingSpec | float, mode_count: int,
             length: float = math.pi) -> CoupledGenerator:
    """Assemble the truncated generator for a boundary-condition pair.

    ``coupling`` may be a bare float, shorthand for the symmetric pair
    ``CouplingSpec.symmetric(coupling)``.
    """
    if not isinstance(coupling, CouplingSpec):
        coupling = CouplingSpec.symmetric(float(coupling))
    basis_u = make_basis(bc_u, length, mode_count)
    basis_theta = make_basis(bc_theta, length, mode_count)
    g = gram(basis_u, basis_theta).entries
    return CoupledGenerator(
        bc_u=bc_u, bc_theta=bc_theta, basis_u=basis_u, basis_theta=basis_theta,
        coupling=coupling, lambda_u=basis_u.eigenvalues,
        lambda_theta=basis_theta.eigenvalues, gram=g)


def coefficient_matrix(gen: CoupledGenerator) -> np.ndarray:
    """Dense coefficient-space operator (real, ``3N x 3N``)."""
    n = gen.mode_count
    a = np.zeros((3 * n, 3 * n))
    a[:n, n:2 * n] = np.eye(n)
    a[n:2 * n, :n] = -np.diag(gen.lambda_u)
    a[n:2 * n, 2 * n:] = -gen.coupling.alpha * gen.gram
    a[2 * n:, n:2 * n] = -gen.coupling.beta * gen.gram.T
    a[2 * n:, 2 * n:] = -np.diag(gen.lambda_theta)
    return a


def to_euclidean(gen: CoupledGenerator) -> np.ndarray:
    """Similarity transform of the generator to the Euclidean frame.

    With ``W = diag(Lam_u^{1/2}, I, I)`` the returned ``B = W A W^{-1}``
    satisfies ``|W x|_2 = energy norm of x`` for every coefficient vector,
    so operator and resolvent norms of ``B`` in the plain 2-norm equal the
    energy-norm quantities of the generator; the spectrum is unchanged.
    """
    w = _energy_weights(gen)
    a = coefficient_matrix(gen)
    return (w[:, None] * a) / w[None, :]


def _energy_weights(gen: CoupledGenerator) -> np.ndarray:
    n = gen.mode_count
    return np.concatenate([np.sqrt(gen.lambda_u), np.ones(2 * n)])


def modal_blocks(gen: CoupledGenerator) -> np.ndarray:
    """Per-mode ``3 x 3`` blocks, shape ``(N, 3, 3)``; same-basis pairs only.

    Mode ``m`` evolves independently through

        [[0, 1, 0], [-lam_m, 0, -alpha], [0, -beta, -lam_m]].
    """
    if not gen.same_basis:
        raise ValueError("per-mode decomposition requires matching boundary conditions")
    n = gen.mode_count
    blocks = np.zeros((n, 3, 3))
    blocks[:, 0, 1] = 1.0
    blocks[:, 1, 0] = -gen.lambda_u
    blocks[:, 1, 2] = -gen.coupling.alpha
    blocks[:, 2, 1] = -gen.coupling.beta
    blocks[:, 2, 2] = -gen.lambda_theta
    return blocks


def shift_singular_range(gen: CoupledGenerator, shift: complex) -> tuple[float, float]:
    """Smallest and largest singular value of ``shift * I - A``.

    Computed in the Euclidean frame, so the reciprocal of the smallest value
    is the energy-norm resolvent norm at the shift.  Same-basis pairs reduce
    to stacked ``3 x 3`` decompositions.
    """
    mu = complex(shift)
    if gen.same_basis:
        weights = np.sqrt(gen.lambda_u)
        blocks = modal_blocks(gen).astype(complex)
        blocks[:, 0, 1] = weights
        blocks[:, 1, 0] = -weights
        shifted = mu * np.eye(3)[None, :, :] - blocks
        sigmas = np.linalg.svd(shifted, compute_uv=False)
        return float(sigmas[:, -1].min()), float(sigmas[:, 0].max())
    shifted = mu * np.eye(gen.dimension) - to_euclidean(gen).astype(complex)
    sigmas = scipy.linalg.svdvals(shifted)
    return float(sigmas[-1]), float(sigmas[0])


def _check_dimension(gen: CoupledGenerator, state: StateVector) -> None:
    if state.mode_count != gen.mode_count:
        raise ValueError(
            f"state has {state.mode_count} modes, generator expects {gen.mode_count}")


def energy_norm_sq(gen: CoupledGenerator, state: StateVector) -> float:
    """Squared energy norm; equals the physical energy of the expanded fields."""
    _check_dimension(gen, state)
    return float(
        np.sum(gen.lambda_u * np.abs(state.u_hat) ** 2)
        + np.sum(np.abs(state.v_hat) ** 2)
        + np.sum(np.abs(state.theta_hat) ** 2))


def apply(gen: CoupledGenerator, state: StateVector) -> StateVector:
    """Apply the generator to a coefficient state."""
    _check_dimension(gen, state)
    c = gen.coupling
    return StateVector(
        u_hat=state.v_hat,
        v_hat=-gen.lambda_u * state.u_hat - c.alpha * (gen.gram @ state.theta_hat),
        theta_hat=-gen.lambda_theta * state.theta_hat - c.beta * (gen.gram.T @ state.v_hat))


def solve_shifted(gen: CoupledGenerator, shift: complex, rhs: StateVector) -> StateVector:
    """Solve ``(shift * I - A) U = F`` for a complex shift.

    Uses independent ``3 x 3`` solves per mode when both fields share a
    basis, a dense solve otherwise.  The result is accepted only if the
    energy-norm residual is below ``SOLVE_RESIDUAL_TOL`` relative to the
    problem scale ``|F| + |shift| |U| + |A U|`` (the plain ``|F|`` would be
    unattainable in double precision near resonant shifts, where ``|U|``
    exceeds ``|F|`` by the resolvent norm and rounding the exact solution
    already violates it).  One refinement step is attempted before failing.

    Raises
    ------
    SingularShiftError
        If the shifted matrix is numerically singular (smallest singular
        value at its round-off floor), with a condition estimate.
    """
    _check_dimension(gen, rhs)
    mu = complex(shift)
    sigma_min, sigma_max = shift_singular_range(gen, mu)
    if sigma_min < SINGULAR_SIGMA_FLOOR * max(1.0, sigma_max):
        raise SingularShiftError(mu, math.inf if sigma_min == 0 else sigma_max / sigma_min)
    rhs_norm = math.sqrt(energy_norm_sq(gen, rhs))

    def scaled_residual(u: StateVector) -> float:
        au = apply(gen, u)
        r = StateVector(mu * u.u_hat - au.u_hat - rhs.u_hat,
                        mu * u.v_hat - au.v_hat - rhs.v_hat,
                        mu * u.theta_hat - au.theta_hat - rhs.theta_hat)
        scale = (rhs_norm + abs(mu) * math.sqrt(energy_norm_sq(gen, u))
                 + math.sqrt(energy_norm_sq(gen, au)))
        return math.sqrt(energy_norm_sq(gen, r)) / scale

    try:
        solution = _shift_solve_once(gen, mu, rhs)
        if rhs_norm > 0 and scaled_residual(solution) > SOLVE_RESIDUAL_TOL:
            correction = _shift_solve_once(gen, mu, _residual_state(gen, mu, solution, rhs))
            solution = StateVector(solution.u_hat - correction.u_hat,
                                   solution.v_hat - correction.v_hat,
                                   solution.theta_hat - correction.theta_hat)
    except np.linalg.LinAlgError:
        raise SingularShiftError(mu, sigma_max / max(sigma_min, 1e-300)) from None

    if rhs_norm > 0 and scaled_residual(solution) > SOLVE_RESIDUAL_TOL:
        raise SingularShiftError(mu, sigma_max / max(sigma_min, 1e-300))
    return solution


def _residual_state(gen: CoupledGenerator, mu: complex, u: StateVector,
                    rhs: StateVector) -> StateVector:
    au = apply(gen, u)
    return StateVector(mu * u.u_hat - au.u_hat - rhs.u_hat,
                       mu * u.v_hat - au.v_hat - rhs.v_hat,
                       mu * u.theta_hat - au.theta_hat - rhs.theta_hat)


def _shift_solve_once(gen: CoupledGenerator, mu: complex, rhs: StateVector) -> StateVector:
    if gen.same_basis:
        systems = mu * np.eye(3)[None, :, :] - modal_blocks(gen).astype(complex)
        stacked = np.stack([rhs.u_hat, rhs.v_hat, rhs.theta_hat], axis=1)
        solved = np.linalg.solve(systems, stacked[:, :, None])[:, :, 0]
        return StateVector(solved[:, 0], solved[:, 1], solved[:, 2])
    matrix = mu * np.eye(gen.dimension) - coefficient_matrix(gen).astype(complex)
    return StateVector.from_array(np.linalg.solve(matrix, rhs.to_array()))


def thermal_dissipation(gen: CoupledGenerator, state: StateVector) -> float:
    """Squared thermal seminorm ``|Lam_theta^{1/2} theta_hat|^2``.

    For the symmetric coupling this equals ``-Re <A U, U>`` exactly, which is
    the full instantaneous energy dissipation rate up to the factor 2.
    """
    _check_dimension(gen, state)
    return float(np.sum(gen.lambda_theta * np.abs(state.theta_hat) ** 2))


def energy_pairing(gen: CoupledGenerator, first: StateVector, second: StateVector) -> complex:
    """Energy inner product ``<first, second>`` of two coefficient states."""
    _check_dimension(gen, first)
    _check_dimension(gen, second)
    return complex(
        np.sum(gen.lambda_u * first.u_hat * np.conj(second.u_hat))
        + np.sum(first.v_hat * np.conj(second.v_hat))
        + np.sum(first.theta_hat * np.conj(second.theta_hat)))
