"""Seeded random generators for effects, states, arcs, and partitions.

Property sweeps and CLI demos draw from here so a single seed reproduces
an entire run.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .effects import DEFAULT_TOL, Effect, ToleranceConfig, validate_effect
from .phase import ArcSet
from .povm import PartitionPOVM, partition_povm


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(A)
    diag = np.diag(R)
    phases = np.where(np.abs(diag) > 1e-15, diag / np.abs(diag), 1.0)
    return Q * phases.conj()


def random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_effect(
    rng: np.random.Generator,
    d: int,
    lo: float = 0.0,
    hi: float = 1.0,
    n_zero: int = 0,
    n_one: int = 0,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> Effect:
    """Random effect with eigenvalues uniform in [lo, hi] in a Haar basis.

    n_zero / n_one eigenvalues are pinned exactly to 0 / 1 to exercise the
    reduced-operator paths.
    """
    if n_zero + n_one > d:
        raise ValueError("too many pinned eigenvalues")
    vals = rng.uniform(lo, hi, size=d)
    vals[:n_zero] = 0.0
    vals[d - n_one:] = 1.0 if n_one else vals[d - n_one:]
    U = random_unitary(rng, d)
    return validate_effect((U * vals) @ U.conj().T, cfg)


def random_arcset(
    rng: np.random.Generator, max_arcs: int = 3, min_len: float = 0.05
) -> ArcSet:
    """Random arc set with positive measure and positive-measure complement."""
    n = int(rng.integers(1, max_arcs + 1))
    pairs = []
    for _ in range(n):
        a = rng.uniform(0.0, 2.0 * np.pi)
        length = rng.uniform(min_len, 2.0 * np.pi / (n + 1))
        pairs.append((a, a + length))
    X = ArcSet.from_pairs(pairs)
    if X.length >= 2.0 * np.pi - 1e-6:
        return ArcSet.interval(0.0, np.pi)
    return X


def random_projective_povm(
    rng: np.random.Generator, d: int, n_outcomes: int
) -> PartitionPOVM:
    """Projective partition: a Haar basis split into n_outcomes groups."""
    if not 1 <= n_outcomes <= d:
        raise ValueError("need 1 <= n_outcomes <= d")
    U = random_unitary(rng, d)
    assignment = np.concatenate(
        [np.arange(n_outcomes), rng.integers(0, n_outcomes, size=d - n_outcomes)]
    )
    rng.shuffle(assignment)
    effects = []
    for i in range(n_outcomes):
        cols = U[:, assignment == i]
        effects.append(validate_effect(cols @ cols.conj().T))
    return partition_povm(effects)


def random_smeared_povm(
    rng: np.random.Generator, d: int, n_outcomes: int
) -> PartitionPOVM:
    """Generic POVM: random positive matrices normalized by symmetry.

    G_i -> S^(-1/2) G_i S^(-1/2) with S the sum, which forces the
    partition to sum to the identity while keeping generic spectra.
    """
    raws = []
    for _ in range(n_outcomes):
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        raws.append(A @ A.conj().T)
    S = sum(raws)
    vals, vecs = np.linalg.eigh(S)
    S_isqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    effects = [validate_effect(S_isqrt @ G @ S_isqrt) for G in raws]
    return partition_povm(effects)


def random_partition_povm(
    rng: np.random.Generator, d: int, n_outcomes: int, kind: Optional[str] = None
) -> PartitionPOVM:
    kind = kind or ("projective" if rng.random() < 0.5 else "smeared")
    if kind == "projective":
        return random_projective_povm(rng, d, n_outcomes)
    return random_smeared_povm(rng, d, n_outcomes)
