import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsallisq import (
    ANALYTIC_Q_MAX,
    ANALYTIC_Q_MIN,
    DensityMatrix,
    DomainError,
    PureState,
    QRangeError,
    as_q,
    binary_entropy,
    concurrence_pure,
    concurrence_two_qubit,
    ef_two_qubit,
    ghz,
    random_pure_state,
    spin_flip_two_qubit,
    tee_2xd,
    tee_from_concurrence_sq,
    tee_pure,
    tee_two_qubit,
    tsallis_entropy,
    w_state,
)

LN2 = math.log(2.0)


# --- q parameter --------------------------------------------------------------


def test_as_q_flags():
    assert as_q(1.0).is_von_neumann
    assert not as_q(1.0 + 1e-9).is_von_neumann
    assert as_q(2.0).analytic_two_qubit
    assert as_q(0.5).analytic_two_qubit is False
    assert as_q(ANALYTIC_Q_MIN).analytic_two_qubit
    assert as_q(ANALYTIC_Q_MAX).analytic_two_qubit


def test_as_q_concave_regime_bands():
    assert as_q(1.5).concave_regime
    assert as_q(2.0).concave_regime
    assert as_q(2.5).concave_regime is False
    assert as_q(3.0).concave_regime
    assert as_q(4.0).concave_regime
    assert as_q(0.8).concave_regime
    assert as_q(ANALYTIC_Q_MIN - 0.05).concave_regime is False


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_as_q_rejects(bad):
    with pytest.raises(QRangeError):
        as_q(bad)


# --- entropies ----------------------------------------------------------------


def test_tsallis_entropy_maximally_mixed():
    assert tsallis_entropy(np.eye(2) / 2, 2.0) == pytest.approx(0.5, abs=1e-14)
    assert tsallis_entropy(np.eye(3) / 3, 3.0) == pytest.approx(4 / 9, abs=1e-14)
    assert tsallis_entropy(np.eye(2) / 2, 1.0) == pytest.approx(LN2, abs=1e-14)


def test_tsallis_entropy_pure_state_is_zero(rng):
    psi = random_pure_state((4,), rng)
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    assert abs(tsallis_entropy(rho, 2.7)) < 1e-12
    assert abs(tsallis_entropy(rho, 1.0)) < 1e-12


def test_tsallis_entropy_accepts_density_matrix():
    dm = DensityMatrix((2,), np.diag([0.25, 0.75]))
    direct = tsallis_entropy(dm.matrix, 2.0)
    assert tsallis_entropy(dm, 2.0) == pytest.approx(direct, abs=0)


def test_binary_entropy_extremes():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(LN2, abs=1e-14)
    with pytest.raises(DomainError):
        binary_entropy(1.2)


# --- concurrence --------------------------------------------------------------


def test_spin_flip_involution(rng):
    psi = random_pure_state((2, 2), rng)
    rho = psi.to_density().matrix
    assert np.allclose(spin_flip_two_qubit(spin_flip_two_qubit(rho)), rho)


def test_concurrence_bell(bell):
    cv = concurrence_two_qubit(bell.to_density())
    assert cv.c == pytest.approx(1.0, abs=1e-10)
    assert cv.lambdas[0] == pytest.approx(1.0, abs=1e-10)
    assert max(cv.lambdas[1:]) < 1e-10


def test_concurrence_product_and_separable():
    prod = PureState((2, 2), np.array([1.0, 0.0, 0.0, 0.0]))
    assert concurrence_two_qubit(prod.to_density()).c == 0.0
    assert concurrence_two_qubit(np.eye(4) / 4).c == 0.0


def test_concurrence_pure_matches_wootters(rng):
    for _ in range(5):
        psi = random_pure_state((2, 2), rng)
        assert concurrence_pure(psi, 0) == pytest.approx(
            concurrence_two_qubit(psi.to_density()).c, abs=1e-8
        )


def test_concurrence_pure_party_symmetry(rng):
    psi = random_pure_state((2, 2), rng)
    assert concurrence_pure(psi, 0) == pytest.approx(concurrence_pure(psi, 1), abs=1e-12)


def test_concurrence_pure_qudit_ceiling():
    # maximally entangled qutrit pair saturates sqrt(2(d-1)/d)
    amps = np.zeros(9, dtype=complex)
    amps[[0, 4, 8]] = 1 / math.sqrt(3)
    psi = PureState((3, 3), amps)
    assert concurrence_pure(psi, 0) == pytest.approx(math.sqrt(4 / 3), abs=1e-12)


def test_concurrence_two_qubit_rejects_other_dims():
    with pytest.raises(DomainError):
        concurrence_two_qubit(DensityMatrix((4,), np.eye(4) / 4))


# --- closed-form entanglement curve -------------------------------------------


@pytest.mark.parametrize(
    "q,func",
    [
        (2.0, lambda x: x / 2),
        (3.0, lambda x: 3 * x / 8),
        (4.0, lambda x: (8 * x - x * x) / 24),
    ],
)
def test_tee_curve_polynomial_forms(q, func):
    xs = np.linspace(0.0, 1.0, 101)
    assert np.allclose(tee_from_concurrence_sq(xs, q), func(xs), atol=1e-13)


def test_tee_curve_von_neumann_values():
    assert tee_from_concurrence_sq(1.0, 1.0) == pytest.approx(LN2, abs=1e-14)
    assert tee_from_concurrence_sq(0.0, 1.0) == 0.0
    # h((1+sqrt(3)/2)/2) at x = 1/4
    s = math.sqrt(0.75)
    expect = binary_entropy((1 + s) / 2)
    assert tee_from_concurrence_sq(0.25, 1.0) == pytest.approx(expect, abs=1e-14)


def test_tee_curve_broadcasts_q_and_x():
    xs = np.array([0.0, 0.5, 1.0])
    qs = np.array([[1.0], [2.0]])
    out = tee_from_concurrence_sq(xs, qs)
    assert out.shape == (2, 3)
    assert out[1, 2] == pytest.approx(0.5, abs=1e-14)


def test_tee_curve_domain_errors():
    with pytest.raises(DomainError):
        tee_from_concurrence_sq(1.5, 2.0)
    with pytest.raises(QRangeError):
        tee_from_concurrence_sq(0.5, -1.0)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.floats(ANALYTIC_Q_MIN, ANALYTIC_Q_MAX),
)
def test_tee_curve_monotone_in_x(x_a, x_b, q):
    lo, hi = sorted((x_a, x_b))
    assert tee_from_concurrence_sq(hi, q) >= tee_from_concurrence_sq(lo, q) - 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 1.0))
def test_tee_curve_continuous_at_q_one(x):
    at_one = tee_from_concurrence_sq(x, 1.0)
    near = tee_from_concurrence_sq(x, 1.0 + 1e-8)
    assert abs(near - at_one) < 1e-6
    near = tee_from_concurrence_sq(x, 1.0 - 1e-8)
    assert abs(near - at_one) < 1e-6


# --- state-level wrappers ------------------------------------------------------


def test_tee_pure_bell_and_w(bell):
    assert tee_pure(bell, 0, 2.0) == pytest.approx(0.5, abs=1e-12)
    assert tee_pure(bell, 1, 3.0) == pytest.approx(3 / 8, abs=1e-12)
    # W3 one-vs-rest marginal is diag(2/3, 1/3)
    assert tee_pure(w_state(3), 0, 2.0) == pytest.approx(4 / 9, abs=1e-12)


def test_tee_pure_matches_curve(rng):
    psi = random_pure_state((2, 2), rng)
    c = concurrence_pure(psi, 0)
    for q in (1.0, 1.7, 2.0, 3.4):
        assert tee_pure(psi, 0, q) == pytest.approx(
            float(tee_from_concurrence_sq(c * c, q)), abs=1e-10
        )


def test_tee_two_qubit_window_gate(bell):
    rho = bell.to_density()
    with pytest.raises(QRangeError):
        tee_two_qubit(rho, 5.0)
    assert tee_two_qubit(rho, 5.0, force_q=True) > 0.0
    assert tee_two_qubit(rho, 2.0) == pytest.approx(0.5, abs=1e-12)


def test_tee_two_qubit_on_mixture(rng, bell):
    # rank-2 mixture: closed form evaluates f_q of the Wootters concurrence
    mat = 0.7 * bell.to_density().matrix + 0.3 * np.diag([1.0, 0, 0, 0])
    rho = DensityMatrix((2, 2), mat)
    c = concurrence_two_qubit(rho).c
    assert tee_two_qubit(rho, 2.0) == pytest.approx(c * c / 2, abs=1e-12)


def test_ef_two_qubit_bell(bell):
    assert ef_two_qubit(bell.to_density()) == pytest.approx(LN2, abs=1e-10)


def test_tee_2xd_flags_and_gate():
    dm = DensityMatrix((2, 3), np.eye(6) / 6)
    est = tee_2xd(dm, 2.0, 0.5)
    assert est.exact and est.value == pytest.approx(0.125, abs=1e-12)
    est = tee_2xd(dm, 2.5, 0.5)
    assert est.exact is False
    with pytest.raises(DomainError):
        tee_2xd(dm, 2.0, 1.2)
    with pytest.raises(DomainError):
        tee_2xd(DensityMatrix((3, 2), np.eye(6) / 6), 2.0, 0.5)


def test_tee_pure_ghz_across_any_cut():
    g = ghz(4)
    for party in range(4):
        assert tee_pure(g, party, 2.0) == pytest.approx(0.5, abs=1e-12)
