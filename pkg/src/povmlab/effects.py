"""Effect operators on a finite-dimensional complex Hilbert space.

An effect is a Hermitian operator A with O <= A <= I. This module provides
validated construction, spectral calculus (square roots, complements,
functions of the spectrum), the positive-semidefinite partial order,
regularity (spectrum on both sides of 1/2), reduced operators, and the
infimum of an effect with its complement. Everything is a pure function of
immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotInvertible,
    SpectrumOutOfRange,
    TrivialEffect,
)

Array = NDArray[np.complex128]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances for effect validation and order tests.

    hermiticity_tol bounds max |a_ij - conj(a_ji)| on input matrices,
    psd_tol is the slack allowed in positivity / ordering tests, and
    spectral_rtol scales the threshold for treating an eigenvalue as an
    exact 0 or 1 (threshold = spectral_rtol * dim).
    """

    hermiticity_tol: float = 1e-8
    psd_tol: float = 1e-9
    spectral_rtol: float = 1e-9


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: Array

    def apply(self, fn: Callable[[NDArray[np.float64]], NDArray[np.float64]]) -> Array:
        """Return sum_k fn(lambda_k) |v_k><v_k| as a dense matrix."""
        vals = np.asarray(fn(self.eigenvalues), dtype=float)
        return (self.eigenvectors * vals) @ self.eigenvectors.conj().T

    def reconstruct(self) -> Array:
        return self.apply(lambda x: x)


@dataclass(frozen=True, eq=False)
class Effect:
    """Validated effect: Hermitian matrix with spectrum clamped into [0, 1].

    The spectral decomposition is computed once at validation time and
    reused by all spectral-calculus operations.
    """

    matrix: Array
    spectral: SpectralDecomposition
    tol: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return self.spectral.eigenvalues


def _from_eigensystem(vals: NDArray[np.float64], vecs: Array, tol: float) -> Effect:
    """Assemble an Effect from a known eigensystem, sorting and clamping."""
    order = np.argsort(vals, kind="stable")
    vals = np.clip(vals[order], 0.0, 1.0)
    vecs = vecs[:, order]
    spec = SpectralDecomposition(vals, vecs)
    return Effect(spec.reconstruct(), spec, tol)


def validate_effect(matrix, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    """Validate a square matrix as an effect.

    The input must be Hermitian within cfg.hermiticity_tol and have
    eigenvalues in [-psd_tol, 1 + psd_tol]. The matrix is symmetrized and
    its spectrum clamped into [0, 1] before the Effect is built, so that
    downstream spectral calculus (square roots, min(lambda, 1-lambda))
    stays well-defined under floating-point noise.

    Raises NotHermitian or SpectrumOutOfRange.
    """
    M = np.asarray(matrix, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M.view(float))):
        raise ValueError("matrix entries must be finite")
    herm_defect = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if herm_defect > cfg.hermiticity_tol:
        raise NotHermitian(
            f"max |a_ij - conj(a_ji)| = {herm_defect:.3e} exceeds {cfg.hermiticity_tol:.3e}"
        )
    H = (M + M.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(H)
    if vals[0] < -cfg.psd_tol or vals[-1] > 1.0 + cfg.psd_tol:
        raise SpectrumOutOfRange(
            f"spectrum [{vals[0]:.12g}, {vals[-1]:.12g}] not within [-tol, 1+tol]"
        )
    return _from_eigensystem(vals, vecs, cfg.psd_tol)


def identity_effect(dim: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    spec = SpectralDecomposition(np.ones(dim), np.eye(dim, dtype=complex))
    return Effect(np.eye(dim, dtype=complex), spec, cfg.psd_tol)


def zero_effect(dim: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    spec = SpectralDecomposition(np.zeros(dim), np.eye(dim, dtype=complex))
    return Effect(np.zeros((dim, dim), dtype=complex), spec, cfg.psd_tol)


def diagonal_effect(values, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    return validate_effect(np.diag(np.asarray(values, dtype=complex)), cfg)


def projection_effect(vector, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    """Rank-1 projection |phi><phi| onto the span of a unit vector."""
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return validate_effect(np.outer(v, v.conj()), cfg)


def operator_norm(A: Effect) -> float:
    """Operator norm of an effect: its largest eigenvalue (spectral radius)."""
    return float(A.eigenvalues[-1])


def complement(A: Effect) -> Effect:
    """The complement effect I - A."""
    vals = 1.0 - A.eigenvalues[::-1]
    vecs = A.spectral.eigenvectors[:, ::-1]
    spec = SpectralDecomposition(vals, vecs)
    return Effect(np.eye(A.dim, dtype=complex) - A.matrix, spec, A.tol)


def sqrt_effect(A: Effect) -> Effect:
    """Positive square root; A <= A^{1/2} <= I and ||A^{1/2}||^2 = ||A||."""
    vals = np.sqrt(A.eigenvalues)
    spec = SpectralDecomposition(vals, A.spectral.eigenvectors)
    return Effect(spec.reconstruct(), spec, A.tol)


def psd_leq(A: Effect, B: Effect, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Order of effects as positive operators: A <= B iff B - A is PSD."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dims {A.dim} != {B.dim}")
    gap = np.linalg.eigvalsh(B.matrix - A.matrix)[0]
    return bool(gap >= -cfg.psd_tol)


def _is_zero(A: Effect, cfg: ToleranceConfig) -> bool:
    return A.eigenvalues[-1] <= cfg.psd_tol


def _is_identity(A: Effect, cfg: ToleranceConfig) -> bool:
    return A.eigenvalues[0] >= 1.0 - cfg.psd_tol


def is_regular(A: Effect, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the spectrum extends both strictly below and above 1/2.

    Equivalently, neither A <= I - A nor I - A <= A. Raises TrivialEffect
    for A numerically equal to O or I, where regularity is undefined.
    """
    if _is_zero(A, cfg) or _is_identity(A, cfg):
        raise TrivialEffect("regularity is defined for O != A != I only")
    vals = A.eigenvalues
    return bool(vals[0] < 0.5 - cfg.psd_tol and vals[-1] > 0.5 + cfg.psd_tol)


def reduced_operators(A: Effect, cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[Effect, Effect]:
    """Zero out the eigenspaces of 0 and 1 in A and in I - A.

    Returns the pair (A restricted away from its 0/1 eigenspaces, the same
    restriction of I - A). An eigenvalue counts as 0 or 1 when it lies
    within spectral_rtol * dim of it.
    """
    thresh = cfg.spectral_rtol * A.dim
    vals = A.eigenvalues
    interior = (vals > thresh) & (vals < 1.0 - thresh)
    vecs = A.spectral.eigenvectors
    reduced = _from_eigensystem(np.where(interior, vals, 0.0), vecs, A.tol)
    reduced_comp = _from_eigensystem(np.where(interior, 1.0 - vals, 0.0), vecs, A.tol)
    return reduced, reduced_comp


def infimum_with_complement(A: Effect, cfg: ToleranceConfig = DEFAULT_TOL) -> Optional[Effect]:
    """Greatest lower bound of A and I - A in the effect order, if it exists.

    The infimum exists iff the reduced operators are comparable; it then
    equals the spectral integral of min(lambda, 1 - lambda), i.e. the
    smaller of the two reduced operators plus the zeroed 0/1 eigenspaces.
    Returns None when the reduced operators are incomparable.
    """
    reduced, reduced_comp = reduced_operators(A, cfg)
    if not (psd_leq(reduced, reduced_comp, cfg) or psd_leq(reduced_comp, reduced, cfg)):
        return None
    vals = np.minimum(A.eigenvalues, 1.0 - A.eigenvalues)
    return _from_eigensystem(vals, A.spectral.eigenvectors, A.tol)


def glb_with_rank1(
    A: Effect, phi, cfg: ToleranceConfig = DEFAULT_TOL
) -> tuple[float, Effect]:
    """Greatest lower bound of an invertible effect A and a rank-1 projection.

    For P = |phi><phi| the g.l.b. is lambda * P with
    lambda = <phi, A^{-1} phi>^{-1}, which is the largest t such that
    A - t P is still positive. Requires min eig(A) > psd_tol.
    """
    v = np.asarray(phi, dtype=complex).reshape(-1)
    if v.shape[0] != A.dim:
        raise DimensionMismatch(f"vector dim {v.shape[0]} != effect dim {A.dim}")
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"phi must be a unit vector, got norm {nrm:.12g}")
    v = v / nrm
    if A.eigenvalues[0] <= cfg.psd_tol:
        raise NotInvertible(f"min eigenvalue {A.eigenvalues[0]:.3e} <= psd_tol")
    coeffs = A.spectral.eigenvectors.conj().T @ v
    quad = float(np.sum(np.abs(coeffs) ** 2 / A.eigenvalues))
    lam = 1.0 / quad
    bound = validate_effect(lam * np.outer(v, v.conj()), cfg)
    return lam, bound


def is_lower_bound(
    C: Effect, A: Effect, B: Effect, cfg: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """True iff C <= A and C <= B in the PSD order."""
    return psd_leq(C, A, cfg) and psd_leq(C, B, cfg)
