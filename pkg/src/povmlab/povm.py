"""Finite-partition POVMs and their norm-1 / regularity diagnostics.

A PartitionPOVM is a finite family of effects summing to the identity over
a labelled outcome partition. The predicates here exhaust the finite
Boolean algebra generated by the partition: a POVM has the norm-1 property
when every nonzero effect in that algebra has operator norm 1, and it is
regular when every nontrivial effect in the algebra has spectrum on both
sides of 1/2. Norm-1 is equivalent to epsilon-decidability: for every
nonzero effect some state attains outcome probability >= 1 - epsilon.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from .effects import (
    DEFAULT_TOL,
    Effect,
    ToleranceConfig,
    operator_norm,
    sqrt_effect,
    validate_effect,
)
from .errors import (
    DimensionMismatch,
    NotDecidable,
    SequenceNotConcentrating,
    TooManyOutcomes,
    TrivialEffect,
)

StateVector = NDArray[np.complex128]

MAX_OUTCOMES = 20  # 2^20 subsets is the enumeration cap


@dataclass(frozen=True, eq=False)
class PartitionPOVM:
    """Finite family of effects summing to the identity.

    labels name the outcomes; values optionally attach a real number to
    each outcome (needed by the variance functional).
    """

    effects: tuple[Effect, ...]
    labels: tuple[str, ...]
    values: Optional[tuple[float, ...]] = None
    sum_tol: float = 1e-8

    def __post_init__(self):
        if not self.effects:
            raise ValueError("a partition needs at least one effect")
        dim = self.effects[0].dim
        for e in self.effects:
            if e.dim != dim:
                raise DimensionMismatch("partition effects must share one dimension")
        if len(self.labels) != len(self.effects):
            raise ValueError("one label per effect required")
        if self.values is not None and len(self.values) != len(self.effects):
            raise ValueError("one value per effect required")
        total = sum(e.matrix for e in self.effects)
        defect = np.max(np.abs(total - np.eye(dim)))
        if defect > self.sum_tol:
            raise ValueError(f"effects sum to identity only within {defect:.3e}")

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)


def partition_povm(
    effects: Sequence[Effect],
    labels: Optional[Sequence[str]] = None,
    values: Optional[Sequence[float]] = None,
    sum_tol: float = 1e-8,
) -> PartitionPOVM:
    """Convenience constructor with default labels '0', '1', ..."""
    if labels is None:
        labels = [str(i) for i in range(len(effects))]
    vals = None if values is None else tuple(float(v) for v in values)
    return PartitionPOVM(tuple(effects), tuple(labels), vals, sum_tol)


def as_state(vec, tol: float = 1e-12) -> StateVector:
    """Validate a unit vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"state norm {nrm:.15g} deviates from 1 beyond {tol:g}")
    return v


def algebra_effect(P: PartitionPOVM, subset: Iterable[int], cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    """Sum of the selected outcome effects (additivity of the measure)."""
    idx = sorted(set(int(i) for i in subset))
    if any(i < 0 or i >= P.n_outcomes for i in idx):
        raise IndexError(f"subset indices must lie in 0..{P.n_outcomes - 1}")
    M = np.zeros((P.dim, P.dim), dtype=complex)
    for i in idx:
        M += P.effects[i].matrix
    return validate_effect(M, cfg)


def _iter_subset_spectra(P: PartitionPOVM):
    """Yield (mask, eigenvalues) for every nonempty subset of outcomes."""
    n = P.n_outcomes
    if n > MAX_OUTCOMES:
        raise TooManyOutcomes(f"{n} outcomes would need 2^{n} subsets")
    mats = [e.matrix for e in P.effects]
    for mask in range(1, 1 << n):
        M = np.zeros((P.dim, P.dim), dtype=complex)
        for i in range(n):
            if mask >> i & 1:
                M += mats[i]
        yield mask, np.linalg.eigvalsh(M)


def has_norm1_property(P: PartitionPOVM, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff every nonzero effect in the generated algebra has norm 1.

    Exact-mode predicate: the norm-1 threshold is 1 - psd_tol. For
    truncations of infinite-dimensional observables, use norm scans
    instead; truncation makes norms strictly less than one.
    """
    for _, vals in _iter_subset_spectra(P):
        norm = vals[-1]
        if norm <= cfg.psd_tol:
            continue  # zero effect
        if norm < 1.0 - cfg.psd_tol:
            return False
    return True


def epsilon_decider(A: Effect, epsilon: float, cfg: ToleranceConfig = DEFAULT_TOL) -> StateVector:
    """State whose outcome probability on A is at least 1 - epsilon.

    Returns the top eigenvector, which attains <phi, A phi> = ||A|| in
    finite dimension. Raises NotDecidable (carrying the norm) when
    ||A|| < 1 - epsilon, i.e. when no state can decide the outcome.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    norm = operator_norm(A)
    if norm <= cfg.psd_tol:
        raise TrivialEffect("epsilon-decidability is asked of nonzero effects")
    if norm < 1.0 - epsilon:
        raise NotDecidable(norm, epsilon)
    return A.spectral.eigenvectors[:, -1].copy()


def is_regular_povm(P: PartitionPOVM, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff every nontrivial effect in the generated algebra is regular."""
    for _, vals in _iter_subset_spectra(P):
        if vals[-1] <= cfg.psd_tol or vals[0] >= 1.0 - cfg.psd_tol:
            continue  # trivial: O or I
        if not (vals[0] < 0.5 - cfg.psd_tol and vals[-1] > 0.5 + cfg.psd_tol):
            return False
    return True


def norm1_implies_regular_check(P: PartitionPOVM, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """The implication norm-1 => regular, evaluated on this partition.

    Always true for valid POVMs; exposed as a property test hook.
    """
    return (not has_norm1_property(P, cfg)) or is_regular_povm(P, cfg)


def spectrum_endpoints_check(
    A: Effect, cfg: ToleranceConfig = DEFAULT_TOL, tol_endpoint: float = 1e-9
) -> bool:
    """Check that the spectrum reaches down to 0 and up to 1.

    For a nontrivial effect of a norm-1 POVM whose complement also has
    norm 1, both endpoints belong to the spectrum. tol_endpoint defaults
    to the exact-mode 1e-9; pass 0.05 for truncations of
    infinite-dimensional observables.
    """
    vals = A.eigenvalues
    if vals[-1] <= cfg.psd_tol or vals[0] >= 1.0 - cfg.psd_tol:
        raise TrivialEffect("endpoint check is defined for O != A != I only")
    return bool(vals[0] <= tol_endpoint and vals[-1] >= 1.0 - tol_endpoint)


def variance_from_probabilities(values, probs) -> float:
    """Variance sum x_i^2 p_i - (sum x_i p_i)^2 of a discrete distribution."""
    x = np.asarray(values, dtype=float)
    p = np.asarray(probs, dtype=float)
    if x.shape != p.shape:
        raise ValueError("values and probabilities must have equal length")
    mean = float(np.dot(x, p))
    var = float(np.dot(x * x, p)) - mean * mean
    if -1e-12 < var < 0.0:  # roundoff on point masses
        var = 0.0
    return var


def outcome_probabilities(P: PartitionPOVM, phi: StateVector) -> NDArray[np.float64]:
    v = as_state(phi)
    p = np.array([np.real(np.vdot(v, e.matrix @ v)) for e in P.effects])
    return np.clip(p, 0.0, None)


def variance(P: PartitionPOVM, phi: StateVector) -> float:
    """Variance of the real-valued POVM in the given state."""
    if P.values is None:
        raise ValueError("variance needs real outcome values on the partition")
    return variance_from_probabilities(P.values, outcome_probabilities(P, phi))


@dataclass(frozen=True, eq=False)
class VarianceProbe:
    """Result of the small-variance state construction."""

    eta: float
    center: float
    support_radius: float
    state: StateVector
    variance: float

    @property
    def bound(self) -> float:
        return 15.0 * self.eta * self.support_radius**3


def variance_probe(
    P: PartitionPOVM, eta: float, center: Optional[float] = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> VarianceProbe:
    """Construct a state with probability >= 1 - eta on a window of width 2*eta.

    Mirrors the small-variance argument for norm-1 real POVMs supported in
    [-alpha, alpha]: pick the midpoint x of the support, take the window
    effect E((x-eta, x+eta)), and build the worst admissible state that
    still carries mass eta on the farthest outcome. Its variance obeys
    Var <= 15 * eta * alpha^3.
    """
    if P.values is None:
        raise ValueError("variance probe needs real outcome values")
    vals = np.asarray(P.values, dtype=float)
    support = [i for i, e in enumerate(P.effects) if operator_norm(e) > cfg.psd_tol]
    if not support:
        raise ValueError("POVM has empty support")
    xs = vals[support]
    alpha = float(np.max(np.abs(xs)))
    x0 = float((xs.min() + xs.max()) / 2.0) if center is None else float(center)
    window = [i for i in support if abs(vals[i] - x0) < eta]
    if not window:
        raise ValueError(f"no outcome value within {eta:g} of the window center {x0:g}")
    E_win = algebra_effect(P, window, cfg)
    phi_top = epsilon_decider(E_win, eta, cfg)
    far = max(support, key=lambda i: abs(vals[i] - x0))
    psi_far = P.effects[far].spectral.eigenvectors[:, -1]
    # component of the far state orthogonal to the deciding state
    resid = psi_far - np.vdot(phi_top, psi_far) * phi_top
    nrm = np.linalg.norm(resid)
    if nrm > 1e-8:
        state = np.sqrt(1.0 - eta) * phi_top + np.sqrt(eta) * resid / nrm
    else:
        state = phi_top
    state = state / np.linalg.norm(state)
    return VarianceProbe(eta, x0, alpha, state, variance(P, state))


def lueders_coarse_graining(C: PartitionPOVM, B: Effect, cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
    """The channel B -> sum_i A_i^{1/2} B A_i^{1/2} over the partition."""
    if B.dim != C.dim:
        raise DimensionMismatch(f"dims {B.dim} != {C.dim}")
    out = np.zeros((C.dim, C.dim), dtype=complex)
    for e in C.effects:
        S = sqrt_effect(e).matrix
        out += S @ B.matrix @ S
    return validate_effect(out, cfg)


def coarse_graining_limit_check(
    C: PartitionPOVM,
    B: Effect,
    states: Sequence[StateVector],
    i: int,
    slack: float = 1e-10,
) -> NDArray[np.float64]:
    """Gaps |<psi_k, u_C(B) psi_k> - <psi_k, A_i^{1/2} B A_i^{1/2} psi_k>|.

    The state sequence must concentrate on cell i: <psi_k, A_i psi_k>
    nondecreasing toward 1 (SequenceNotConcentrating otherwise). The gaps
    then tend to zero, because every other cell's contribution
    <psi, A_j^{1/2} B A_j^{1/2} psi> is bounded by ||B|| ||A_j^{1/2} psi||.
    """
    vecs = [as_state(s) for s in states]
    probs = [float(np.real(np.vdot(v, C.effects[i].matrix @ v))) for v in vecs]
    for a, b in zip(probs, probs[1:]):
        if b < a - slack:
            raise SequenceNotConcentrating(
                f"<psi,A_i psi> fell from {a:.12g} to {b:.12g}"
            )
    if probs and probs[-1] > 1.0 + 1e-9:
        raise SequenceNotConcentrating("cell probabilities exceed 1")
    U = lueders_coarse_graining(C, B).matrix
    Si = sqrt_effect(C.effects[i]).matrix
    target = Si @ B.matrix @ Si
    gaps = [
        abs(np.vdot(v, U @ v) - np.vdot(v, target @ v))
        for v in vecs
    ]
    return np.asarray(gaps, dtype=float)
