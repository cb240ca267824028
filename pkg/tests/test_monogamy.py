import math

import numpy as np
import pytest

from tsallisq import (
    DensityMatrix,
    DomainError,
    PartitionError,
    PureState,
    QRangeError,
    RoofConfig,
    alpha_residual,
    ckw_check,
    example3_residual,
    example4_residual,
    example5_residual,
    ghz,
    hierarchical_check,
    indicator,
    random_pure_state,
    tee_sq_residual,
    w_indicator_closed_form,
    w_state,
)
from tsallisq.analysis import find_root_q
from tsallisq.monogamy import random_biseparable_mixture

# roots of the two example residuals, frozen from high-precision solves
EXAMPLE4_ROOT = 1.619194744390993
EXAMPLE5_ROOT = 2.471370753410185
# von Neumann limit of the closed-form W3 indicator
W3_TAU_Q1 = 0.114425729109666


# --- squared-TEE residual -------------------------------------------------------


def test_tee_sq_residual_w3(w3):
    rep = tee_sq_residual(w3, 0, 2.0)
    assert rep.residual == pytest.approx(8 / 81, abs=1e-12)
    assert rep.satisfied
    assert rep.partners == (1, 2)
    assert rep.lhs == pytest.approx(16 / 81, abs=1e-12)
    assert rep.rhs == pytest.approx(8 / 81, abs=1e-12)


def test_tee_sq_residual_ghz3(ghz3):
    rep = tee_sq_residual(ghz3, 0, 2.0)
    assert rep.residual == pytest.approx(0.25, abs=1e-12)
    assert rep.terms == (0.0, 0.0)


def test_tee_sq_residual_focus_choice(w3):
    # W state is symmetric, every focus gives the same residual
    vals = [tee_sq_residual(w3, f, 1.5).residual for f in range(3)]
    assert max(vals) - min(vals) < 1e-12


def test_tee_sq_residual_window_gate(w3):
    with pytest.raises(QRangeError):
        tee_sq_residual(w3, 0, 5.0)


def test_tee_sq_residual_needs_qubits():
    psi = random_pure_state((2, 3, 2), np.random.default_rng(1))
    with pytest.raises(PartitionError):
        tee_sq_residual(psi, 0, 2.0)


def test_tee_sq_residual_random_states_satisfied(rng):
    for _ in range(5):
        psi = random_pure_state((2, 2, 2, 2), rng)
        for q in (1.0, 2.0, 3.5):
            assert tee_sq_residual(psi, 0, q).satisfied


# --- alpha variant ---------------------------------------------------------------


def test_alpha_two_matches_squared(w3):
    a = alpha_residual(w3, 0, 2.0, 1.7)
    b = tee_sq_residual(w3, 0, 1.7)
    assert a.residual == pytest.approx(b.residual, abs=1e-14)


def test_alpha_residual_w3_cubed(w3):
    rep = alpha_residual(w3, 0, 3.0, 2.0)
    assert rep.residual == pytest.approx(48 / 729, abs=1e-12)


def test_alpha_residual_rejects_small_alpha(w3):
    with pytest.raises(DomainError):
        alpha_residual(w3, 0, 1.5, 2.0)


def test_alpha_residual_stays_satisfied_as_alpha_grows(w3):
    # satisfaction at alpha = 2 propagates upward since every term is <= 1
    for alpha in (2.0, 2.5, 3.0, 5.0, 8.0):
        assert alpha_residual(w3, 0, alpha, 2.0).satisfied


def test_alpha_residual_random_sweep(rng):
    psi = random_pure_state((2, 2, 2, 2), rng)
    for alpha in (2.0, 2.5, 4.0):
        for q in (0.8, 1.0, 2.0, 4.2):
            assert alpha_residual(psi, 0, alpha, q).satisfied


# --- CKW --------------------------------------------------------------------------


def test_ckw_w3_is_tight(w3):
    rep = ckw_check(w3, 0)
    assert rep.q is None
    assert abs(rep.residual) < 1e-9
    assert rep.satisfied


def test_ckw_ghz3(ghz3):
    rep = ckw_check(ghz3, 0)
    assert rep.residual == pytest.approx(1.0, abs=1e-10)


def test_ckw_random_states(rng):
    for _ in range(5):
        psi = random_pure_state((2, 2, 2), rng)
        assert ckw_check(psi, 0).satisfied


# --- hierarchical variant ----------------------------------------------------------


def test_hierarchical_equals_full_at_k_n(quick_roof):
    for state in (w_state(4), ghz(4)):
        full = tee_sq_residual(state, 0, 2.0).residual
        rep = hierarchical_check(state, 0, 4, 2.0, config=quick_roof)
        assert rep.residual == pytest.approx(full, abs=1e-12)


def test_hierarchical_w4_block(quick_roof):
    rep = hierarchical_check(w_state(4), 0, 3, 2.0, config=quick_roof)
    assert rep.partners == (1, (2, 3))
    assert rep.residual == pytest.approx(0.0625, abs=1e-6)
    assert rep.satisfied


def test_hierarchical_residual_grows_with_k(quick_roof):
    # merging partners into a block can only strengthen the subtracted side
    vals = [
        hierarchical_check(w_state(5), 0, k, 2.0, config=quick_roof).residual
        for k in (3, 4, 5)
    ]
    assert vals[0] <= vals[1] + 1e-6
    assert vals[1] <= vals[2] + 1e-6


def test_hierarchical_range_checks(w3):
    with pytest.raises(DomainError):
        hierarchical_check(w3, 0, 2, 2.0)
    with pytest.raises(DomainError):
        hierarchical_check(w3, 0, 4, 2.0)
    with pytest.raises(QRangeError):
        hierarchical_check(w3, 0, 3, 2.5)  # convex middle band


def test_hierarchical_focus_one(quick_roof):
    rep = hierarchical_check(w_state(4), 1, 3, 2.0, config=quick_roof)
    assert rep.satisfied
    assert rep.partners == (0, (2, 3))


# --- indicator ----------------------------------------------------------------------


def test_indicator_pure_w3(w3):
    res = indicator(w3, 2.0)
    assert res.upper_bound is False
    assert res.value == pytest.approx(8 / 81, abs=1e-12)
    assert res.report is not None


def test_indicator_closed_form_w_family():
    # the closed form covers any N; the residual route checks it state by state
    for n in (3, 4, 5, 6):
        got = tee_sq_residual(w_state(n), 0, 2.0).residual
        assert got == pytest.approx(w_indicator_closed_form(n, 2.0), abs=1e-12)


def test_indicator_closed_form_von_neumann(w3):
    assert w_indicator_closed_form(3, 1.0) == pytest.approx(W3_TAU_Q1, abs=1e-12)
    assert indicator(w3, 1.0).value == pytest.approx(W3_TAU_Q1, abs=1e-9)


def test_indicator_closed_form_broadcasts():
    vals = w_indicator_closed_form(3, np.array([1.0, 2.0, 3.0]))
    assert vals.shape == (3,)
    assert vals[1] == pytest.approx(8 / 81, abs=1e-12)


def test_indicator_mixed_pure_projector(w3, quick_roof):
    rho = DensityMatrix((2, 2, 2), w3.to_density().matrix)
    res = indicator(rho, 2.0, config=quick_roof)
    assert res.upper_bound is True
    assert res.value == pytest.approx(8 / 81, abs=1e-7)
    assert res.roof is not None


def test_indicator_biseparable_mixture_near_zero(quick_roof):
    rng = np.random.default_rng(42)
    rho = random_biseparable_mixture(rng)
    res = indicator(rho, 2.0, config=quick_roof)
    assert res.upper_bound
    assert abs(res.value) < 5e-3


def test_indicator_rejects_wrong_shapes(rng):
    with pytest.raises(PartitionError):
        indicator(random_pure_state((2, 2), rng), 2.0)
    with pytest.raises(TypeError):
        indicator(np.eye(8) / 8, 2.0)
    with pytest.raises(QRangeError):
        indicator(w_state(3), 6.0)


def test_random_biseparable_mixture_valid(rng):
    rho = random_biseparable_mixture(rng, members=4)
    assert rho.dims == (2, 2, 2)
    assert abs(np.trace(rho.matrix).real - 1.0) < 1e-10
    assert rho.spectrum()[-1] > -1e-10


# --- worked examples ------------------------------------------------------------------


def test_example3_values():
    assert example3_residual(np.pi / 4, 2.0) == pytest.approx(1 / 16, abs=1e-12)
    assert example3_residual(np.pi / 4, 4.0) == pytest.approx(
        -2303 / 36864, abs=1e-12
    )
    assert example3_residual(0.0, 2.0) == pytest.approx(0.0, abs=1e-12)


def test_example3_broadcasts_over_q():
    out = example3_residual(0.9, np.array([2.0, 3.0, 4.0]))
    assert out.shape == (3,)
    assert out[0] == pytest.approx(example3_residual(0.9, 2.0), abs=1e-15)


def test_example4_values():
    assert example4_residual(2.0) == pytest.approx(-1 / 18, abs=1e-12)
    root_val = example4_residual(EXAMPLE4_ROOT)
    assert abs(root_val) < 1e-12


def test_example4_root_position():
    root = find_root_q(example4_residual, (1.1, 2.0), f_tol=1e-14, x_tol=1e-13)
    assert root == pytest.approx(EXAMPLE4_ROOT, abs=1e-9)


def test_example5_values():
    assert example5_residual(2.0) == pytest.approx(4 / 81, abs=1e-12)
    assert example5_residual(3.0) == pytest.approx(-2 / 81, abs=1e-12)


def test_example5_root_position():
    root = find_root_q(example5_residual, (2.0, 3.0), f_tol=1e-14, x_tol=1e-13)
    assert root == pytest.approx(EXAMPLE5_ROOT, abs=1e-9)


@pytest.mark.parametrize("func", [example3_residual, example4_residual, example5_residual])
def test_examples_reject_unit_q(func):
    with pytest.raises(QRangeError):
        if func is example3_residual:
            func(0.3, 1.0)
        else:
            func(1.0)


def test_example3_matches_roof_route(quick_roof):
    # the pair terms in the closed form are convex-roof TEEs of the mixed
    # marginals, not plain entropies, so cross-check through the optimizer
    from tsallisq import example3_state, minimize_roof, tee_pure
    from tsallisq.roof import tee_cost

    theta, q = 0.6, 2.0
    psi = example3_state(theta)
    lhs = tee_pure(psi, 0, q) ** 2
    terms = []
    for pair in ((0, 1), (0, 2)):
        red = psi.reduced(pair)
        terms.append(minimize_roof(red, tee_cost(red.dims, 0, q), quick_roof).value ** 2)
    direct = lhs - sum(terms)
    assert example3_residual(theta, q) == pytest.approx(direct, abs=1e-6)


def test_example5_matches_roof_route(quick_roof):
    from tsallisq import example5_state, minimize_roof, tee_pure
    from tsallisq.roof import tee_cost

    q = 2.0
    psi = example5_state()
    lhs = tee_pure(psi, 0, q) ** 2
    terms = []
    for pair in ((0, 1), (0, 2)):
        red = psi.reduced(pair)
        terms.append(minimize_roof(red, tee_cost(red.dims, 0, q), quick_roof).value ** 2)
    direct = lhs - sum(terms)
    assert example5_residual(q) == pytest.approx(direct, abs=1e-6)
