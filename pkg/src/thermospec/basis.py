"""Closed-form modal bases of the 1-D Laplacian on an interval.

Two families are supported on ``(0, L)``:

* Dirichlet: ``sqrt(2/L) * sin(m pi x / L)``, eigenvalues ``(m pi / L)**2``,
  ``m = 1, 2, ...``
* Neumann (mean-zero): ``sqrt(2/L) * cos(m pi x / L)``, same eigenvalues.
  The constant mode is excluded so the operator is strictly positive
  definite on the mean-zero subspace.

Both families are orthonormal in ``L2(0, L)``.  Mixed-family Gram matrices
carry the coupling between displacement and temperature when the two
variables satisfy different boundary conditions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class BoundaryKind(enum.Enum):
    """Boundary condition selector for one field."""

    DIRICHLET = "D"
    NEUMANN = "N"

    @classmethod
    def parse(cls, letter: str) -> "BoundaryKind":
        try:
            return cls(letter.upper())
        except ValueError:
            raise ValueError(f"unknown boundary kind {letter!r}, expected 'D' or 'N'") from None


@dataclass(frozen=True)
class ModalBasis:
    """Truncated eigenbasis of the interval Laplacian.

    Attributes
    ----------
    kind : BoundaryKind
        Dirichlet or (mean-zero) Neumann family.
    length : float
        Interval length ``L``.
    mode_count : int
        Number of retained modes ``N``.
    eigenvalues : np.ndarray
        ``(m pi / L)**2`` for one-based ``m = 1 .. N``, strictly increasing.
    """

    kind: BoundaryKind
    length: float
    mode_count: int
    eigenvalues: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        """Mode wavenumbers ``m pi / L`` (square roots of the eigenvalues)."""
        return np.sqrt(self.eigenvalues)


@dataclass(frozen=True)
class GramMatrix:
    """Dense matrix of L2 inner products between two modal bases.

    ``entries[m, k]`` is the inner product of column-basis function ``k``
    with row-basis function ``m`` (zero-based indices).
    """

    rows: int
    cols: int
    entries: np.ndarray


def make_basis(kind: BoundaryKind, length: float = math.pi, mode_count: int = 1) -> ModalBasis:
    """Build a truncated modal basis on ``(0, length)``.

    Raises
    ------
    ValueError
        If ``length`` is not positive or ``mode_count`` is less than one.
    """
    if not length > 0:
        raise ValueError(f"interval length must be positive, got {length}")
    if mode_count < 1:
        raise ValueError(f"mode_count must be at least 1, got {mode_count}")
    m = np.arange(1, mode_count + 1, dtype=float)
    eigenvalues = (m * math.pi / length) ** 2
    return ModalBasis(kind=kind, length=float(length), mode_count=int(mode_count),
                      eigenvalues=eigenvalues)


def sample_modes(basis: ModalBasis, points: np.ndarray) -> np.ndarray:
    """Evaluate every basis function at ``points``; shape ``(len(points), N)``."""
    x = np.asarray(points, dtype=float)
    m = np.arange(1, basis.mode_count + 1, dtype=float)
    scale = math.sqrt(2.0 / basis.length)
    phase = np.outer(x, m) * (math.pi / basis.length)
    if basis.kind is BoundaryKind.DIRICHLET:
        return scale * np.sin(phase)
    return scale * np.cos(phase)


def evaluate(basis: ModalBasis, coefficients, points) -> np.ndarray:
    """Synthesize a truncated expansion at physical-space points.

    Parameters
    ----------
    coefficients : array_like
        At most ``basis.mode_count`` expansion coefficients (real or complex).
    points : array_like
        Locations inside ``[0, L]``.
    """
    c = np.asarray(coefficients)
    if c.ndim != 1 or c.size > basis.mode_count:
        raise ValueError(
            f"expected at most {basis.mode_count} coefficients, got shape {c.shape}")
    x = np.atleast_1d(np.asarray(points, dtype=float))
    if np.any(x < 0) or np.any(x > basis.length):
        raise ValueError(f"evaluation points must lie in [0, {basis.length}]")
    design = sample_modes(basis, x)[:, : c.size]
    return design @ c


def gram(row_basis: ModalBasis, col_basis: ModalBasis) -> GramMatrix:
    """L2 Gram matrix between two bases on the same interval.

    Same-kind bases are orthonormal, so the result is the identity.  For a
    Dirichlet row basis against a Neumann column basis the entries have the
    closed form (independent of the interval length)

        entry(m, k) = 0                        if m + k even,
        entry(m, k) = (4/pi) * m / (m^2 - k^2) if m + k odd,

    with one-based indices; the Neumann-row case is the transpose.

    Raises
    ------
    ValueError
        If the two bases live on intervals of different length.
    """
    if not math.isclose(row_basis.length, col_basis.length, rel_tol=0.0, abs_tol=0.0):
        raise ValueError(
            f"bases live on different intervals: {row_basis.length} vs {col_basis.length}")
    rows, cols = row_basis.mode_count, col_basis.mode_count
    if row_basis.kind is col_basis.kind:
        entries = np.eye(rows, cols)
    elif row_basis.kind is BoundaryKind.DIRICHLET:
        entries = _sine_cosine_gram(rows, cols)
    else:
        entries = _sine_cosine_gram(cols, rows).T
    return GramMatrix(rows=rows, cols=cols, entries=entries)


def _sine_cosine_gram(rows: int, cols: int) -> np.ndarray:
    # (2/L) * integral sin(m pi x/L) cos(k pi x/L) dx over (0, L); the
    # substitution x -> L x / pi removes the length dependence.
    m = np.arange(1, rows + 1, dtype=float)[:, None]
    k = np.arange(1, cols + 1, dtype=float)[None, :]
    odd = (m + k) % 2 == 1
    with np.errstate(divide="ignore", invalid="ignore"):
        values = (4.0 / math.pi) * m / (m * m - k * k)
    return np.where(odd, values, 0.0)
