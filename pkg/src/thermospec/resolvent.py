"""Resolvent norms along the imaginary axis and their growth rate.

The resolvent norm ``r(s) = |(i s I - A)^{-1}|`` in the energy norm is
computed as the reciprocal smallest singular value of the shifted operator
in the Euclidean frame, the standard pseudospectra recipe.  Unbounded
growth of ``r`` along the axis rules out exponential decay of the
semigroup; the growth exponent (2 for this system) fixes the polynomial
decay order through the frequency-domain correspondence
``r = O(|s|^alpha)  <=>  decay like t^(-1/alpha)`` for smooth data.

Explicit witness right-hand sides achieve the growth: forcing the velocity
block with the ``m``-th eigenfunction at frequency ``sqrt(lambda_m)`` yields
a closed-form solution whose displacement component alone has energy norm
``sqrt(lambda_m + lambda_m^2) / gamma^2``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import BoundaryKind
from .generator import SINGULAR_SIGMA_FLOOR, CoupledGenerator, shift_singular_range

_ENV_THREADS = "THERMOSPEC_THREADS"


class NearEigenvalueError(RuntimeError):
    """The sampled shift coincides with an eigenvalue of the truncation."""

    def __init__(self, lam: float, sigma_min: float):
        self.lam = lam
        self.sigma_min = sigma_min
        super().__init__(
            f"i*{lam} is numerically an eigenvalue (sigma_min = {sigma_min:.3e})")


@dataclass(frozen=True)
class ResolventScan:
    """Resolvent norms over a grid of imaginary-axis frequencies.

    Entries flagged ``True`` hit an eigenvalue; their norm is ``inf``.
    """

    lambdas: np.ndarray
    norms: np.ndarray
    flagged: np.ndarray
    bc_pair: tuple[BoundaryKind, BoundaryKind]
    gamma: float
    mode_count: int


@dataclass(frozen=True)
class WitnessSolution:
    """Closed-form resolvent solution for a velocity-block forcing.

    ``exact`` is True for matching boundary conditions, where the ansatz
    solves the truncated resolvent equation identically.  For mixed pairs
    the two fields live in different eigenbases and the single-mode ansatz
    cannot satisfy the coupled system; the recorded coefficients are then a
    heuristic prediction of the growth scale only.
    """

    mode_index: int
    lam: float
    a: complex
    b: complex
    energy_norm_sq_u: float
    exact: bool


def resolvent_norm(gen: CoupledGenerator, lam: float) -> float:
    """Energy-norm resolvent norm at the imaginary-axis point ``i * lam``.

    Raises
    ------
    NearEigenvalueError
        If the smallest singular value of the shifted operator falls below
        its round-off floor ``SINGULAR_SIGMA_FLOOR * max(1, sigma_max)``.
    """
    sigma_min, sigma_max = shift_singular_range(gen, 1j * float(lam))
    if sigma_min < SINGULAR_SIGMA_FLOOR * max(1.0, sigma_max):
        raise NearEigenvalueError(float(lam), sigma_min)
    return 1.0 / sigma_min


def worker_count() -> int:
    """Parallel width for scans; capped by the THERMOSPEC_THREADS variable."""
    raw = os.environ.get(_ENV_THREADS)
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_THREADS} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{_ENV_THREADS} must be at least 1, got {value}")
    return value


def scan(gen: CoupledGenerator, lambdas) -> ResolventScan:
    """Resolvent norms over a frequency grid; eigenvalue hits are flagged.

    Grid points are independent and evaluated in parallel (LAPACK releases
    the interpreter lock); the output ordering follows the input grid.
    """
    grid = np.asarray(lambdas, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("lambdas must be a non-empty 1-D sequence")

    def one(lam: float) -> tuple[float, bool]:
        try:
            return resolvent_norm(gen, lam), False
        except NearEigenvalueError:
            return math.inf, True

    workers = min(worker_count(), grid.size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, grid))
    else:
        results = [one(lam) for lam in grid]
    norms = np.array([r[0] for r in results])
    flagged = np.array([r[1] for r in results])
    return ResolventScan(lambdas=grid, norms=norms, flagged=flagged,
                         bc_pair=(gen.bc_u, gen.bc_theta),
                         gamma=gen.coupling.alpha, mode_count=gen.mode_count)


def witness(bc_pair: tuple[BoundaryKind, BoundaryKind], m: int, gamma: float,
            length: float = math.pi) -> WitnessSolution:
    """Closed-form witness coefficients for mode ``m`` (one-based).

    The forcing is the ``m``-th displacement-basis eigenfunction placed in
    the velocity block, at frequency ``sqrt(lambda_m)``.  For DD and NN the
    solution is ``u = a phi_m, v = i sqrt(lambda_m) a phi_m, theta = b
    phi_m`` with ``b = 1/gamma`` and ``a = (1 - i sqrt(lambda_m))/gamma^2``.
    """
    if gamma == 0:
        raise ValueError("witness solutions require a nonzero coupling")
    if m < 1:
        raise ValueError(f"mode index must be at least 1, got {m}")
    bc_u, bc_theta = bc_pair
    lam_m = (m * math.pi / length) ** 2
    mu_m = lam_m  # Dirichlet and mean-zero Neumann spectra coincide on an interval
    root = math.sqrt(lam_m)
    b = 1.0 / gamma
    if bc_u is bc_theta:
        a = (1.0 - 1j * root) / gamma**2
        exact = True
    elif bc_u is BoundaryKind.DIRICHLET:
        a = complex(math.sqrt(1.0 + lam_m**2 / mu_m) / gamma**2)
        exact = False
    else:
        a = complex(math.sqrt(1.0 + mu_m**2 / lam_m) / gamma**2)
        exact = False
    return WitnessSolution(mode_index=m, lam=root, a=a, b=complex(b),
                           energy_norm_sq_u=lam_m * abs(a) ** 2, exact=exact)


def growth_exponent(scan_result: ResolventScan, fit_range: tuple[int, int] | None = None) -> dict:
    """Least-squares power-law fit of the scan, ``log r`` against ``log lam``.

    ``fit_range`` is an index window ``(start, stop)`` with Python slice
    semantics; ``None`` fits the whole grid.  Requires at least five points,
    finite norms and positive frequencies in the window.
    """
    start, stop = fit_range if fit_range is not None else (0, scan_result.lambdas.size)
    lams = scan_result.lambdas[start:stop]
    norms = scan_result.norms[start:stop]
    if lams.size < 5:
        raise ValueError(f"fit window holds {lams.size} points, need at least 5")
    if np.any(lams <= 0):
        raise ValueError("fit window contains non-positive frequencies")
    if not np.all(np.isfinite(norms)):
        raise ValueError("fit window contains flagged (infinite) resolvent norms")
    return _power_fit(lams, norms)


def _power_fit(x: np.ndarray, y: np.ndarray) -> dict:
    lx, ly = np.log(x), np.log(y)
    design = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    fitted = design @ np.array([slope, intercept])
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "intercept": float(intercept), "r_squared": r_squared}
