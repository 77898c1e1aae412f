"""Spectrum reports, modal eigenvalue asymptotics and decay-rate fits.

For matching boundary conditions every mode contributes an independent
cubic pencil: the eigenvalues of the mode block solve

    s^3 + lam s^2 + (lam + gamma^2) s + lam^2 = 0.

Its complex pair (the wave branch) approaches the imaginary axis like
``Re s ~ -gamma^2 / (2 lam)`` as ``lam`` grows, which is the
finite-dimensional signature of quadratic resolvent growth: the truncated
spectral abscissa vanishes, no uniform spectral gap exists, and energy
decays polynomially rather than exponentially on the pre-asymptotic window
where the truncation mimics the full system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BoundaryKind
from .generator import CoupledGenerator, to_euclidean
from .evolution import EnergyTrace

#: A decay-slope window is trusted only up to this fraction of the
#: truncation's exponential time scale 1/|spectral abscissa|.
FIT_HORIZON_FRACTION = 0.1

#: Minimal width of a decay-fit window, in decades.
MIN_FIT_DECADES = 1.5


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of the truncated generator, sorted by imaginary part."""

    eigenvalues: np.ndarray
    spectral_abscissa: float
    min_distance_to_imaginary_axis: float
    mode_count: int
    bc_pair: tuple[BoundaryKind, BoundaryKind]
    gamma: float


@dataclass(frozen=True)
class DecayFit:
    """Power-law versus exponential model comparison on one trace window.

    ``slope`` refers to ``log sqrt(E)`` against ``log t``; the implied decay
    order ``decay_order_alpha = -1/slope`` uses the resolvent-exponent
    convention in which order ``alpha`` means decay like ``t^(-1/alpha)``.
    Residuals are sums of squares in log space, comparable between the two
    models since both fit ``log sqrt(E)``.
    """

    window: tuple[float, float]
    slope: float
    intercept: float
    r_squared: float
    exp_fit_residual: float
    power_fit_residual: float
    decay_order_alpha: float


def spectrum(gen: CoupledGenerator) -> SpectrumReport:
    """Dense eigendecomposition of the generator in the Euclidean frame.

    The coefficient-space operator is real, so eigenvalues arrive in exact
    conjugate pairs; they are reported sorted by imaginary part, ties broken
    by real part.
    """
    operator = to_euclidean(gen)
    try:
        values = np.linalg.eigvals(operator)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            "eigendecomposition failed; matrix condition "
            f"~ {np.linalg.cond(operator):.2e}") from exc
    order = np.lexsort((values.real, values.imag))
    values = values[order]
    return SpectrumReport(
        eigenvalues=values,
        spectral_abscissa=float(values.real.max()),
        min_distance_to_imaginary_axis=float(np.abs(values.real).min()),
        mode_count=gen.mode_count,
        bc_pair=(gen.bc_u, gen.bc_theta),
        gamma=gen.coupling.alpha)


def modal_cubic(lambda_m: float, gamma: float) -> np.ndarray:
    """The three mode-block eigenvalues, sorted by imaginary part.

    Roots of ``s^3 + lam s^2 + (lam + gamma^2) s + lam^2``; Vieta gives
    root sum ``-lam``, pairwise sum ``lam + gamma^2`` and product ``-lam^2``.
    """
    if lambda_m <= 0:
        raise ValueError(f"lambda_m must be positive, got {lambda_m}")
    roots = np.roots([1.0, lambda_m, lambda_m + gamma**2, lambda_m**2])
    return roots[np.lexsort((roots.real, roots.imag))]


@dataclass(frozen=True)
class AbscissaSample:
    """Spectral abscissa of one truncation size, with its scaled limit."""

    mode_count: int
    lambda_top: float
    spectral_abscissa: float
    scaled_product: float


def abscissa_asymptotics(bc_pair: tuple[BoundaryKind, BoundaryKind], gamma: float,
                         mode_counts, length: float = math.pi) -> list[AbscissaSample]:
    """Spectral abscissa over a family of truncation sizes.

    Only matching boundary-condition pairs qualify (the abscissa then comes
    from the mode cubics directly).  ``scaled_product`` is
    ``abscissa * 2 lambda_N / gamma^2``, which tends to -1 as the top
    retained eigenvalue grows; for the decoupled control ``gamma = 0`` the
    abscissa is 0 (wave branch on the axis) and the product is undefined
    (reported as nan).
    """
    bc_u, bc_theta = bc_pair
    if bc_u is not bc_theta:
        raise ValueError("abscissa asymptotics require matching boundary conditions")
    samples = []
    for n in mode_counts:
        if n < 1:
            raise ValueError(f"mode counts must be positive, got {n}")
        lams = (np.arange(1, n + 1) * math.pi / length) ** 2
        abscissa = max(float(modal_cubic(lam, gamma).real.max()) for lam in lams)
        product = abscissa * 2.0 * float(lams[-1]) / gamma**2 if gamma != 0 else math.nan
        samples.append(AbscissaSample(
            mode_count=int(n), lambda_top=float(lams[-1]), spectral_abscissa=abscissa,
            scaled_product=product))
    return samples


def valid_fit_horizon(gen: CoupledGenerator) -> float:
    """Largest time up to which decay-slope fits are trusted.

    A finite truncation eventually decays exponentially at its spectral
    abscissa; polynomial behaviour is only visible before that tail, here
    delimited as ``FIT_HORIZON_FRACTION / |abscissa|``.
    """
    report = spectrum(gen)
    if report.spectral_abscissa >= 0:
        return math.inf
    return FIT_HORIZON_FRACTION / abs(report.spectral_abscissa)


def fit_polynomial_decay(trace: EnergyTrace, window: tuple[float, float],
                         max_valid_time: float | None = None) -> DecayFit:
    """Fit power-law and exponential models to ``sqrt(E)`` on a time window.

    Both models are least-squares fits of ``log sqrt(E)``, against ``log t``
    and against ``t`` respectively.  The window must contain at least five
    samples with strictly positive energy and times, and must not extend
    beyond ``max_valid_time`` when one is supplied.
    """
    t_lo, t_hi = window
    if t_lo >= t_hi:
        raise ValueError(f"empty window ({t_lo}, {t_hi})")
    if max_valid_time is not None and t_hi > max_valid_time:
        raise ValueError(
            f"window end {t_hi} exceeds the trusted fit horizon {max_valid_time:.4g}; "
            "the truncation's exponential tail would contaminate the fit")
    mask = (trace.times >= t_lo) & (trace.times <= t_hi)
    times = trace.times[mask]
    norms = trace.state_norms[mask]
    if times.size < 5:
        raise ValueError(f"window contains {times.size} samples, need at least 5")
    if np.any(times <= 0):
        raise ValueError("window contains non-positive times")
    if np.any(norms <= 0):
        raise ValueError("trace is not strictly positive on the window")

    log_norm = np.log(norms)
    slope, intercept, power_res = _least_squares_line(np.log(times), log_norm)
    _, _, exp_res = _least_squares_line(times, log_norm)
    centered = log_norm - log_norm.mean()
    ss_tot = float(centered @ centered)
    r_squared = 1.0 - power_res / ss_tot if ss_tot > 0 else 1.0
    alpha = -1.0 / slope if slope < 0 else math.inf
    return DecayFit(window=(float(t_lo), float(t_hi)), slope=slope, intercept=intercept,
                    r_squared=r_squared, exp_fit_residual=exp_res,
                    power_fit_residual=power_res, decay_order_alpha=alpha)


def _least_squares_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ np.array([slope, intercept])
    return float(slope), float(intercept), float(residual @ residual)
