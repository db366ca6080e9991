"""Desk-scale measure-theoretic models: fat Cantor sets, finite-group averaging.

Three small models that separate norm-1 behaviour on open sets from the
full Borel property and tie nullity of effects to Haar-null outcome sets:

* a fat (positive-measure) Cantor set C with lambda(C) = 1/2, driving a
  multiplication-operator measure whose norm is 1 on every open set but
  1/2 on C itself; intersection measures are computed exactly in rational
  arithmetic with a tail bracket for the depth-k approximation,
* the averaging identity mu(X) = (1/alpha(G)) sum_g alpha(g - X) on the
  cyclic group Z_N with counting measure, checked exactly,
* a covariant POVM on Z_N built by conjugating a seed effect with the
  diagonal phase representation, for which E(X) = O iff X is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .effects import DEFAULT_TOL, Effect, ToleranceConfig, operator_norm, validate_effect
from .errors import DepthInsufficient, ZeroTotalMeasure

FractionPair = tuple[Fraction, Fraction]


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x))  # exact binary value of the float


def _normalize_intervals(pairs: Sequence[tuple]) -> tuple[FractionPair, ...]:
    """Clip to [0, 1], sort, and merge overlapping intervals (exact)."""
    cleaned: list[list[Fraction]] = []
    for a, b in pairs:
        fa, fb = _to_fraction(a), _to_fraction(b)
        fa, fb = max(fa, Fraction(0)), min(fb, Fraction(1))
        if fb > fa:
            cleaned.append([fa, fb])
    cleaned.sort()
    merged: list[list[Fraction]] = []
    for a, b in cleaned:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


@dataclass(frozen=True)
class FatCantorModel:
    """Fat Cantor set on [0, 1]: step j removes the middle 4^-(j+1) piece.

    After k steps 2^k closed pieces of equal length remain with total
    measure lambda(C_k) = 1/2 + 2^-(k+1); the limit set keeps measure 1/2.
    Piece lengths are exact rationals, so intersection measures with
    interval unions are exact at depth k and bracket the limit through
    lambda(X & C_k) - (lambda(C_k) - 1/2) <= lambda(X & C) <= lambda(X & C_k).
    """

    depth: int
    piece_lengths: tuple[Fraction, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if not 1 <= self.depth <= 40:
            raise ValueError("depth must lie in 1..40")
        lengths = [Fraction(1)]
        for j in range(self.depth):
            nxt = (lengths[j] - Fraction(1, 4 ** (j + 1))) / 2
            lengths.append(nxt)
        object.__setattr__(self, "piece_lengths", tuple(lengths))

    @property
    def measure_ck(self) -> Fraction:
        """Exact measure of the depth-k approximation C_k."""
        return (2**self.depth) * self.piece_lengths[self.depth]

    @property
    def measure_limit(self) -> Fraction:
        return Fraction(1, 2)

    @property
    def tail_slack(self) -> Fraction:
        return self.measure_ck - self.measure_limit

    def iter_removed(self):
        """Yield the removed open middle intervals, level by level."""
        starts = [Fraction(0)]
        for j in range(self.depth):
            child = self.piece_lengths[j + 1]
            new_starts = []
            for s in starts:
                yield (s + child, s + child + Fraction(1, 4 ** (j + 1)))
                new_starts.append(s)
                new_starts.append(s + self.piece_lengths[j] - child)
            starts = new_starts

    def intersection_measure(self, intervals: Sequence[tuple]) -> Fraction:
        """Exact lambda(X & C_k) for an interval union X."""
        X = _normalize_intervals(intervals)
        if not X:
            return Fraction(0)
        k = self.depth
        lengths = self.piece_lengths

        def recurse(j: int, start: Fraction, clipped: tuple[FractionPair, ...]) -> Fraction:
            end = start + lengths[j]
            local = tuple(
                (max(a, start), min(b, end)) for a, b in clipped
                if min(b, end) > max(a, start)
            )
            if not local:
                return Fraction(0)
            if any(a <= start and b >= end for a, b in local):
                # piece fully covered: remaining mass of the subtree
                return (2 ** (k - j)) * lengths[k]
            if j == k:
                return sum((b - a for a, b in local), Fraction(0))
            child = lengths[j + 1]
            left = recurse(j + 1, start, local)
            right = recurse(j + 1, end - child, local)
            return left + right

        return recurse(0, Fraction(0), X)


@dataclass(frozen=True)
class BorelDescriptor:
    """Description of a Borel subset of [0, 1] for the Cantor model.

    kind is 'intervals' (a finite union), 'cantor' (the limit set C
    itself), or 'intervals-minus-cantor' (a union with C removed).
    """

    kind: str
    intervals: tuple[FractionPair, ...] = ()

    @staticmethod
    def interval_union(pairs: Sequence[tuple]) -> "BorelDescriptor":
        return BorelDescriptor("intervals", _normalize_intervals(pairs))

    @staticmethod
    def cantor_set() -> "BorelDescriptor":
        return BorelDescriptor("cantor")

    @staticmethod
    def minus_cantor(pairs: Sequence[tuple]) -> "BorelDescriptor":
        return BorelDescriptor("intervals-minus-cantor", _normalize_intervals(pairs))

    @property
    def measure_of_union(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))


def cantor_effect_norm(M: FatCantorModel, X: BorelDescriptor) -> Fraction:
    """Norm of the multiplication effect f * chi_X with f = 1/2 on C, 1 off C.

    The norm is the essential supremum: 1 when X meets the complement of C
    in positive measure, 1/2 when X is (up to null sets) inside C but
    meets it, 0 when X is null. Decisions are certified from the exact
    depth-k bracket; DepthInsufficient (carrying the bracket) is raised
    when the bracket straddles the decision boundary.
    """
    slack = M.tail_slack
    if X.kind == "cantor":
        return Fraction(1, 2)
    if X.kind == "intervals":
        lam_x = X.measure_of_union
        if lam_x == 0:
            return Fraction(0)
        lam_xck = M.intersection_measure(X.intervals)
        if lam_x - lam_xck > 0:
            return Fraction(1)  # certified positive mass off C_k, hence off C
        lo = max(Fraction(0), lam_xck - slack)
        raise DepthInsufficient(
            "cannot separate X from the Cantor set at this depth",
            (lo, lam_xck),
        )
    if X.kind == "intervals-minus-cantor":
        lam_u = X.measure_of_union
        if lam_u == 0:
            return Fraction(0)
        lam_uck = M.intersection_measure(X.intervals)
        lower = lam_u - lam_uck
        if lower > 0:
            return Fraction(1)
        raise DepthInsufficient(
            "cannot certify positive measure for U minus C at this depth",
            (Fraction(0), slack),
        )
    raise ValueError(f"unknown descriptor kind {X.kind!r}")


def cantor_norm1_on_opens_check(
    M: FatCantorModel,
    n_samples: int = 100,
    rng: Optional[np.random.Generator] = None,
    min_len: float = 0.01,
) -> bool:
    """Sampled witness that the measure has norm 1 on opens but not on C.

    Random open interval unions must all certify norm 1; the Cantor
    descriptor must give exactly 1/2 and the whole interval exactly 1.
    """
    rng = rng or np.random.default_rng(0)
    for _ in range(n_samples):
        n_parts = int(rng.integers(1, 4))
        pairs = []
        for _ in range(n_parts):
            a = float(rng.uniform(0.0, 1.0 - min_len))
            b = float(rng.uniform(a + min_len, min(1.0, a + 0.5)))
            pairs.append((a, b))
        if cantor_effect_norm(M, BorelDescriptor.interval_union(pairs)) != 1:
            return False
    if cantor_effect_norm(M, BorelDescriptor.cantor_set()) != Fraction(1, 2):
        return False
    if cantor_effect_norm(M, BorelDescriptor.interval_union([(0, 1)])) != 1:
        return False
    return True


def haar_identity_check(N: int, alpha: Sequence, X: Iterable[int]):
    """Averaging identity on Z_N with counting measure.

    Returns (lhs, rhs) where lhs = |X| and
    rhs = (1/alpha(Z_N)) * sum_w alpha({w - x : x in X}). Exact in
    rational arithmetic for integer or Fraction weights; the two sides
    coincide for every finite measure alpha and subset X.
    """
    if N < 1:
        raise ValueError("group order must be positive")
    weights = list(alpha)
    if len(weights) != N:
        raise ValueError(f"need {N} weights, got {len(weights)}")
    exact = all(isinstance(w, (int, Fraction)) for w in weights)
    if not exact:
        weights = [float(w) for w in weights]
    total = sum(weights)
    if total == 0:
        raise ZeroTotalMeasure("alpha(Z_N) = 0")
    xs = sorted({int(x) % N for x in X})
    lhs = len(xs)
    acc = 0
    for w in range(N):
        for x in xs:
            acc += weights[(w - x) % N]
    rhs = Fraction(acc) / Fraction(total) if exact else acc / total
    return lhs, rhs


@dataclass(frozen=True, eq=False)
class CyclicCovarianceModel:
    """Covariant POVM on Z_N from a seed effect and diagonal phase rotations.

    U(k) = diag(exp(2 pi i n k / N)) on a d-dimensional space (d <= N);
    outcome k carries U(k) E0 U(k)^*. The default seed has every entry
    1/N, which normalizes exactly and makes every singleton effect
    nonzero, so E(X) = O holds exactly for X = {} (counting measure has
    no other null sets).
    """

    N: int
    d: int
    seed_matrix: np.ndarray

    def __post_init__(self):
        if not 1 <= self.d <= self.N:
            raise ValueError("need 1 <= d <= N")
        total = np.zeros((self.d, self.d), dtype=complex)
        for k in range(self.N):
            total += self._conjugated(k)
        if np.max(np.abs(total - np.eye(self.d))) > 1e-10:
            raise ValueError("seed effect does not normalize over the group orbit")

    @staticmethod
    def discrete_phase(N: int, d: Optional[int] = None) -> "CyclicCovarianceModel":
        d = N if d is None else d
        seed = np.full((d, d), 1.0 / N, dtype=complex)
        return CyclicCovarianceModel(N, d, seed)

    def unitary(self, k: int) -> np.ndarray:
        n = np.arange(self.d)
        return np.diag(np.exp(2j * np.pi * n * (k % self.N) / self.N))

    def _conjugated(self, k: int) -> np.ndarray:
        U = self.unitary(k)
        return U @ self.seed_matrix @ U.conj().T

    def effect(self, X: Iterable[int], cfg: ToleranceConfig = DEFAULT_TOL) -> Effect:
        """E(X) = sum_{k in X} U(k) E0 U(k)^*."""
        idx = sorted({int(k) % self.N for k in X})
        M = np.zeros((self.d, self.d), dtype=complex)
        for k in idx:
            M += self._conjugated(k)
        return validate_effect(M, cfg)

    def covariance_defect(self, j: int) -> float:
        """max_k || U(j) E({k}) U(j)^* - E({k + j}) || (max-abs entries)."""
        U = self.unitary(j)
        worst = 0.0
        for k in range(self.N):
            lhs = U @ self._conjugated(k) @ U.conj().T
            rhs = self._conjugated((k + j) % self.N)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst


def covariant_null_check(
    M: CyclicCovarianceModel, X: Iterable[int], cfg: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """E(X) = O if and only if X is empty (counting-measure nullity)."""
    idx = sorted({int(k) % M.N for k in X})
    norm = operator_norm(M.effect(idx, cfg))
    if not idx:
        return norm <= cfg.psd_tol
    return norm > cfg.psd_tol


def compact_exhaustion_norm(
    make_effect: Callable[[object], Effect],
    region,
    inner_regions: Sequence,
) -> tuple[list[float], float]:
    """Norms over an increasing family of inner regions, plus the outer norm.

    For a region-monotone effect constructor the inner norms are
    nondecreasing and bounded by the outer norm; their convergence to it
    realizes the compact-exhaustion test of the norm-1 property.
    """
    inner = [operator_norm(make_effect(K)) for K in inner_regions]
    outer = operator_norm(make_effect(region))
    return inner, outer
