from fractions import Fraction

import numpy as np
import pytest

from povmlab.effects import operator_norm
from povmlab.errors import DepthInsufficient, ZeroTotalMeasure
from povmlab.measures import (
    BorelDescriptor,
    CyclicCovarianceModel,
    FatCantorModel,
    cantor_effect_norm,
    cantor_norm1_on_opens_check,
    compact_exhaustion_norm,
    covariant_null_check,
    haar_identity_check,
)
from povmlab.phase import ArcSet, canonical_kernel, phase_effect
from povmlab.phase_space import angle_margin

RNG = np.random.default_rng(4242)


# ------------------------------------------------------------- fat Cantor


def test_cantor_bookkeeping_exact():
    for k in (1, 5, 12, 24):
        M = FatCantorModel(k)
        removed = sum(Fraction(2**j, 4 ** (j + 1)) for j in range(k))
        assert M.measure_ck == 1 - removed
        assert M.measure_ck == Fraction(1, 2) + Fraction(1, 2 ** (k + 1))
    assert FatCantorModel(8).measure_limit == Fraction(1, 2)


def test_cantor_removed_intervals_account_for_measure():
    M = FatCantorModel(6)
    removed = list(M.iter_removed())
    assert len(removed) == 2**6 - 1
    total = sum((b - a for a, b in removed), Fraction(0))
    assert total == 1 - M.measure_ck


def test_cantor_intersection_full_interval():
    M = FatCantorModel(10)
    assert M.intersection_measure([(0, 1)]) == M.measure_ck


def test_cantor_intersection_against_removed_interval_bruteforce():
    # lambda(X & C_k) = lambda(X) - lambda(X & removed); the right side is
    # computed directly from the materialized removed middles
    M = FatCantorModel(8)
    removed = list(M.iter_removed())
    rng = np.random.default_rng(21)
    for _ in range(20):
        a = Fraction(float(rng.uniform(0.0, 0.9)))
        b = a + Fraction(float(rng.uniform(0.01, 0.5)))
        b = min(b, Fraction(1))
        overlap = sum(
            (min(b, hi) - max(a, lo) for lo, hi in removed if min(b, hi) > max(a, lo)),
            Fraction(0),
        )
        assert M.intersection_measure([(a, b)]) == (b - a) - overlap


def test_cantor_norms():
    M = FatCantorModel(12)
    assert cantor_effect_norm(M, BorelDescriptor.interval_union([(0.2, 0.3)])) == 1
    assert cantor_effect_norm(M, BorelDescriptor.cantor_set()) == Fraction(1, 2)
    assert cantor_effect_norm(M, BorelDescriptor.interval_union([])) == 0
    assert cantor_effect_norm(M, BorelDescriptor.interval_union([(0, 1)])) == 1
    assert cantor_effect_norm(M, BorelDescriptor.minus_cantor([(0, 1)])) == 1
    assert cantor_effect_norm(M, BorelDescriptor.minus_cantor([])) == 0


def test_cantor_norm_monotone_under_inclusion():
    M = FatCantorModel(12)
    small = cantor_effect_norm(M, BorelDescriptor.interval_union([(0.4, 0.45)]))
    large = cantor_effect_norm(M, BorelDescriptor.interval_union([(0.3, 0.6)]))
    assert Fraction(0) <= small <= large
    assert M.intersection_measure([(0.4, 0.45)]) <= M.intersection_measure([(0.3, 0.6)])


def test_cantor_depth_insufficient_then_resolves():
    # a sliver inside the first surviving depth-4 piece stays undecided at
    # depth 4 but resolves once the recursion passes through it
    sliver = [(0.001, 0.002)]
    with pytest.raises(DepthInsufficient) as info:
        cantor_effect_norm(FatCantorModel(4), BorelDescriptor.interval_union(sliver))
    lo, hi = info.value.bracket
    assert lo <= hi
    assert cantor_effect_norm(FatCantorModel(24), BorelDescriptor.interval_union(sliver)) == 1


def test_cantor_opens_check():
    M = FatCantorModel(24)
    assert cantor_norm1_on_opens_check(M, n_samples=25, rng=np.random.default_rng(3))


# ------------------------------------------------------------------ Haar


def test_haar_point_mass():
    for X in ([], [1], [0, 3], [0, 1, 2, 3, 4]):
        lhs, rhs = haar_identity_check(5, [1, 0, 0, 0, 0], X)
        assert lhs == rhs


def test_haar_known_example():
    lhs, rhs = haar_identity_check(4, [1, 2, 3, 4], [0, 2])
    assert lhs == 2 and rhs == 2


def test_haar_empty_set():
    lhs, rhs = haar_identity_check(6, [2, 1, 1, 1, 0, 3], [])
    assert lhs == 0 and rhs == 0


def test_haar_exact_random():
    for _ in range(30):
        N = int(RNG.integers(1, 65))
        alpha = [int(a) for a in RNG.integers(0, 10, size=N)]
        if sum(alpha) == 0:
            alpha[0] = 1
        X = [int(x) for x in RNG.integers(0, N, size=RNG.integers(0, N + 1))]
        lhs, rhs = haar_identity_check(N, alpha, X)
        assert rhs == lhs  # exact rational identity


def test_haar_zero_measure_rejected():
    with pytest.raises(ZeroTotalMeasure):
        haar_identity_check(3, [0, 0, 0], [1])


def test_haar_float_weights_close():
    N = 8
    alpha = list(RNG.uniform(0.0, 1.0, size=N))
    X = [0, 3, 5]
    lhs, rhs = haar_identity_check(N, alpha, X)
    assert rhs == pytest.approx(lhs, abs=1e-12)


# ------------------------------------------------------ cyclic covariance


def test_cyclic_model_normalizes():
    model = CyclicCovarianceModel.discrete_phase(8)
    total = sum(model.effect([k]).matrix for k in range(8))
    assert np.max(np.abs(total - np.eye(8))) < 1e-12


def test_cyclic_model_rejects_bad_seed():
    with pytest.raises(ValueError):
        CyclicCovarianceModel(4, 4, np.eye(4, dtype=complex))


def test_cyclic_covariance_identity():
    model = CyclicCovarianceModel.discrete_phase(6, 4)
    for j in range(6):
        assert model.covariance_defect(j) <= 1e-12


def test_covariant_null_check_examples():
    model = CyclicCovarianceModel.discrete_phase(8)
    assert covariant_null_check(model, [])
    assert covariant_null_check(model, [3])
    assert covariant_null_check(model, range(8))
    assert np.max(np.abs(model.effect(range(8)).matrix - np.eye(8))) < 1e-10


def test_singleton_effects_nonzero():
    model = CyclicCovarianceModel.discrete_phase(8)
    for k in range(8):
        assert operator_norm(model.effect([k])) > 1e-6


# ----------------------------------------------------- compact exhaustion


def test_compact_exhaustion_canonical_phase():
    d = 64
    kern = canonical_kernel()
    make = lambda X: phase_effect(kern, X, d)
    outer_region = ArcSet.interval(0.0, np.pi)
    inners = [ArcSet.interval(delta, np.pi - delta)
              for delta in (0.1, 0.01, 1e-3, 1e-4, 1e-6, 1e-8)]
    inner_norms, outer = compact_exhaustion_norm(make, outer_region, inners)
    assert all(b >= a - 1e-14 for a, b in zip(inner_norms, inner_norms[1:]))
    assert all(n <= outer + 1e-12 for n in inner_norms)
    assert outer - inner_norms[-1] <= 1e-6


def test_compact_exhaustion_angle_margin():
    d = 32
    make = lambda X: angle_margin(X, d)
    outer_region = ArcSet.interval(0.0, np.pi)
    inners = [ArcSet.interval(delta, np.pi - delta) for delta in (0.1, 1e-3, 1e-8)]
    inner_norms, outer = compact_exhaustion_norm(make, outer_region, inners)
    assert all(b >= a - 1e-14 for a, b in zip(inner_norms, inner_norms[1:]))
    assert outer - inner_norms[-1] <= 1e-6


def test_compact_exhaustion_full_circle_constant():
    d = 16
    make = lambda X: phase_effect(canonical_kernel(), X, d)
    full = ArcSet.full_circle()
    inner_norms, outer = compact_exhaustion_norm(make, full, [full, full])
    assert inner_norms == [1.0, 1.0] and outer == 1.0
