import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from povmlab.effects import (
    complement,
    diagonal_effect,
    identity_effect,
    operator_norm,
    projection_effect,
    psd_leq,
    validate_effect,
    zero_effect,
)
from povmlab.errors import (
    NotDecidable,
    SequenceNotConcentrating,
    TooManyOutcomes,
    TrivialEffect,
)
from povmlab.phase import ArcSet, canonical_kernel, elementary_kernel, phase_effect
from povmlab.phase_space import truncated_coherent_state
from povmlab.povm import (
    algebra_effect,
    coarse_graining_limit_check,
    epsilon_decider,
    has_norm1_property,
    is_regular_povm,
    lueders_coarse_graining,
    norm1_implies_regular_check,
    outcome_probabilities,
    partition_povm,
    spectrum_endpoints_check,
    variance,
    variance_from_probabilities,
    variance_probe,
)
from povmlab.rand import random_effect, random_partition_povm, random_state

RNG = np.random.default_rng(77)

HALF = ArcSet.interval(0.0, np.pi)


def projective_pair(d=4, k=2):
    P = np.zeros((d, d), dtype=complex)
    for i in range(k):
        P[i, i] = 1.0
    A = validate_effect(P)
    return partition_povm([A, complement(A)])


def elementary_pair(d=8, z=0.5):
    E = phase_effect(elementary_kernel(0, 1, z), HALF, d)
    return partition_povm([E, complement(E)])


def canonical_pair(d=64):
    E = phase_effect(canonical_kernel(), HALF, d)
    return partition_povm([E, complement(E)])


# ------------------------------------------------------- partition basics


def test_partition_must_sum_to_identity():
    with pytest.raises(ValueError):
        partition_povm([diagonal_effect([0.5, 0.5])] * 3)


def test_algebra_effect_extremes():
    P = projective_pair()
    assert np.allclose(algebra_effect(P, []).matrix, 0.0)
    assert np.allclose(algebra_effect(P, [0, 1]).matrix, np.eye(4))


def test_algebra_effect_additive_complement():
    P = random_partition_povm(RNG, 5, 3)
    got = algebra_effect(P, [0, 2]).matrix + algebra_effect(P, [1]).matrix
    assert np.max(np.abs(got - np.eye(5))) < 1e-10


def test_too_many_outcomes():
    n = 21
    effects = [diagonal_effect([1.0 if i == j else 0.0 for i in range(n)]) for j in range(n)]
    P = partition_povm(effects)
    with pytest.raises(TooManyOutcomes):
        has_norm1_property(P)


# ------------------------------------------------------------ norm-1


def test_norm1_projective_true():
    assert has_norm1_property(projective_pair())


def test_norm1_elementary_false():
    assert not has_norm1_property(elementary_pair())


def test_norm1_half_identity_false():
    P = partition_povm([diagonal_effect([0.5, 0.5])] * 2)
    assert not has_norm1_property(P)


def test_norm1_equivalent_to_epsilon_decidability():
    # norm-1 holds iff every nonzero algebra effect admits a deciding
    # state at every epsilon (top eigenvector attains the norm)
    for P in (projective_pair(), elementary_pair(), canonical_pair(d=16)):
        n = P.n_outcomes
        decidable = True
        for mask in range(1, 1 << n):
            E = algebra_effect(P, [i for i in range(n) if mask >> i & 1])
            if operator_norm(E) <= 1e-9:
                continue
            for eps in (0.1, 0.01):
                try:
                    phi = epsilon_decider(E, eps)
                except NotDecidable:
                    decidable = False
                    continue
                assert np.real(np.vdot(phi, E.matrix @ phi)) >= 1.0 - eps
        assert has_norm1_property(P) == decidable


# ----------------------------------------------------- epsilon decider


def test_epsilon_decider_projection():
    v = random_state(RNG, 4)
    phi = epsilon_decider(projection_effect(v), 0.01)
    assert abs(np.vdot(phi, np.outer(v, v.conj()) @ phi)) == pytest.approx(1.0, abs=1e-12)


def test_epsilon_decider_elementary_not_decidable():
    E = phase_effect(elementary_kernel(0, 1, 0.5), HALF, 8)
    e_plus = 0.5 + 0.5 / np.pi
    eps = (1.0 - e_plus) / 2.0
    with pytest.raises(NotDecidable) as info:
        epsilon_decider(E, eps)
    assert info.value.norm == pytest.approx(e_plus, abs=1e-12)


def test_epsilon_decider_canonical_truncation_succeeds():
    E = phase_effect(canonical_kernel(), HALF, 128)
    phi = epsilon_decider(E, 0.1)
    assert np.real(np.vdot(phi, E.matrix @ phi)) >= 0.9


def test_epsilon_decider_guards():
    with pytest.raises(ValueError):
        epsilon_decider(diagonal_effect([0.5, 0.5]), 0.0)
    with pytest.raises(TrivialEffect):
        epsilon_decider(zero_effect(2), 0.1)


# ---------------------------------------------------------- regularity


def test_regular_projective():
    assert is_regular_povm(projective_pair())


def test_regular_but_not_norm1_counterexample():
    # two-outcome POVM built from orthogonal rank-1 pieces with weight 0.3:
    # every nontrivial effect is regular yet the norm stays at 0.7 < 1
    lam = 0.3
    A = diagonal_effect([lam, 1.0 - lam])
    P = partition_povm([A, complement(A)])
    assert is_regular_povm(P)
    assert not has_norm1_property(P)
    assert operator_norm(A) == pytest.approx(max(lam, 1 - lam))
    assert norm1_implies_regular_check(P)


def test_not_regular_scaled_identity():
    P = partition_povm([diagonal_effect([0.25, 0.25]), diagonal_effect([0.75, 0.75])])
    assert not is_regular_povm(P)


def test_norm1_implies_regular_samples():
    assert norm1_implies_regular_check(projective_pair())
    assert norm1_implies_regular_check(elementary_pair())
    for _ in range(20):
        P = random_partition_povm(RNG, 5, 3)
        assert norm1_implies_regular_check(P)


# ----------------------------------------------------------- endpoints


def test_spectrum_endpoints_projection():
    P = validate_effect(np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex))
    assert spectrum_endpoints_check(P)


def test_spectrum_endpoints_diag():
    assert spectrum_endpoints_check(diagonal_effect([0.0, 1.0, 0.5]))


def test_spectrum_endpoints_canonical_asymptotic():
    E = phase_effect(canonical_kernel(), HALF, 256)
    assert spectrum_endpoints_check(E, tol_endpoint=0.05)


def test_spectrum_endpoints_trivial_raises():
    with pytest.raises(TrivialEffect):
        spectrum_endpoints_check(zero_effect(3))


def test_spectrum_endpoints_on_norm1_algebra():
    # nontrivial effects of a norm-1 POVM whose complements also have
    # norm 1 carry both 0 and 1 in their spectrum
    from povmlab.rand import random_projective_povm

    for _ in range(5):
        P = random_projective_povm(RNG, 6, 3)
        assert has_norm1_property(P)
        n = P.n_outcomes
        for mask in range(1, (1 << n) - 1):
            E = algebra_effect(P, [i for i in range(n) if mask >> i & 1])
            if operator_norm(E) <= 1e-9 or operator_norm(complement(E)) < 1 - 1e-9:
                continue
            assert spectrum_endpoints_check(E)


# ------------------------------------------------------------ variance


def test_variance_point_mass_zero():
    A = diagonal_effect([1.0, 0.0])
    P = partition_povm([A, complement(A)], values=[0.0, 1.0])
    phi = np.array([1.0, 0.0], dtype=complex)
    assert variance(P, phi) == 0.0


def test_variance_uniform_three_values():
    assert variance_from_probabilities([-1.0, 0.0, 1.0], [1 / 3] * 3) == pytest.approx(2 / 3)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-5.0, 5.0), min_size=1, max_size=6),
    st.lists(st.floats(0.0, 1.0), min_size=1, max_size=6),
)
def test_variance_nonnegative_hypothesis(values, weights):
    k = min(len(values), len(weights))
    values, weights = values[:k], weights[:k]
    total = sum(weights)
    if total == 0:
        weights = [1.0] * k
        total = float(k)
    probs = [w / total for w in weights]
    assert variance_from_probabilities(values, probs) >= 0.0


def test_variance_nonnegative_random():
    for _ in range(20):
        P = random_partition_povm(RNG, 4, 3)
        P = partition_povm(P.effects, values=sorted(RNG.uniform(-2, 2, 3)))
        phi = random_state(RNG, 4)
        assert variance(P, phi) >= 0.0
        probs = outcome_probabilities(P, phi)
        assert probs.sum() == pytest.approx(1.0, abs=1e-9)


def test_variance_probe_bound_and_decrease():
    values = [-2.0, -1.0, 0.0, 1.0, 2.0]
    effects = [diagonal_effect([1.0 if i == j else 0.0 for i in range(5)]) for j in range(5)]
    P = partition_povm(effects, values=values)
    results = [variance_probe(P, eta) for eta in (0.1, 0.01)]
    for probe in results:
        assert probe.support_radius == 2.0
        assert probe.variance <= probe.bound
        window_prob = float(
            np.real(np.vdot(probe.state,
                            algebra_effect(P, [2]).matrix @ probe.state))
        )
        assert window_prob >= 1.0 - probe.eta - 1e-12
    assert results[1].variance < results[0].variance


# ------------------------------------------------------- coarse-graining


def test_lueders_unital():
    P = random_partition_povm(RNG, 5, 3)
    out = lueders_coarse_graining(P, identity_effect(5))
    assert np.max(np.abs(out.matrix - np.eye(5))) < 1e-10


def test_lueders_projective_commuting_fixed_point():
    P = projective_pair(d=4, k=2)
    B = diagonal_effect([0.3, 0.9, 0.2, 0.7])  # commutes with both projections
    out = lueders_coarse_graining(P, B)
    assert np.max(np.abs(out.matrix - B.matrix)) < 1e-12


def test_lueders_against_dense_sqrtm_oracle():
    P = canonical_pair(d=64)
    B = diagonal_effect(np.linspace(0.0, 1.0, 64))
    got = lueders_coarse_graining(P, B).matrix
    expected = np.zeros_like(got)
    for eff in P.effects:
        S = scipy.linalg.sqrtm(eff.matrix)
        expected += S @ B.matrix @ S
    assert np.max(np.abs(got - expected)) < 1e-5


def test_lueders_order_preserving():
    P = random_partition_povm(RNG, 4, 2)
    for _ in range(20):
        B1 = random_effect(RNG, 4, lo=0.0, hi=0.5)
        B2 = validate_effect(B1.matrix + random_effect(RNG, 4, lo=0.0, hi=0.5).matrix)
        assert psd_leq(lueders_coarse_graining(P, B1), lueders_coarse_graining(P, B2))


def test_coarse_graining_gap_projective_zero():
    P = projective_pair(d=4, k=2)
    B = random_effect(RNG, 4)
    states = [np.array([1, 0, 0, 0], complex), np.array([0, 1, 0, 0], complex)]
    gaps = coarse_graining_limit_check(P, B, states, 0)
    assert np.max(gaps) < 1e-12


def test_coarse_graining_gap_decreases_for_coherent_states():
    d = 154
    P = canonical_pair(d=d)
    B = diagonal_effect(np.linspace(0.0, 1.0, d))
    amps = [1.0, 2.0, 3.0, 4.0, 6.0]
    states = [truncated_coherent_state(s * np.exp(1j * np.pi / 2), d) for s in amps]
    gaps = coarse_graining_limit_check(P, B, states, 0)
    assert all(b <= a * (1 + 1e-9) for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-2
    # the partition-tail bound dominates each gap
    from povmlab.effects import sqrt_effect

    S1 = sqrt_effect(P.effects[1]).matrix
    for psi, gap in zip(states, gaps):
        bound = operator_norm(B) * np.linalg.norm(S1 @ psi)
        assert gap <= bound + 1e-12


def test_coarse_graining_rejects_non_concentrating_sequence():
    P = projective_pair(d=4, k=2)
    B = random_effect(RNG, 4)
    good = np.array([1, 0, 0, 0], complex)
    bad = np.array([0, 0, 1, 0], complex)
    with pytest.raises(SequenceNotConcentrating):
        coarse_graining_limit_check(P, B, [good, bad], 0)
