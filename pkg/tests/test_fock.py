"""Truncated Fock-basis oracle: algebra fidelity and exact eigen-evolution."""

import math

import numpy as np
import pytest

import kerrmoyal as km
from kerrmoyal import TruncationInsufficient
from kerrmoyal.fock import annihilation_matrix, power_operator, squeeze_operator

XI = 1.0
PARAMS = km.KerrParams(w1=1.0, w2=0.1, xi=XI)


def test_commutator_on_leading_block():
    space = km.FockSpace(48, XI)
    a = annihilation_matrix(space)
    comm = a @ a.conj().T - a.conj().T @ a
    block = comm[:-1, :-1]
    assert np.max(np.abs(block - XI * np.eye(space.dim - 1))) <= 1e-12
    # truncation corrupts only the last diagonal entry
    assert comm[-1, -1] == pytest.approx(-XI * (space.dim - 1), rel=1e-12)


def test_number_commutators():
    space = km.FockSpace(40, 0.6)
    a, adag, n_op, _ = km.build_operators(space, km.KerrParams(1.0, 0.1, 0.6))
    lhs = (n_op @ a - a @ n_op)[:-1, :-1]
    assert np.max(np.abs(lhs - (-0.6) * a[:-1, :-1])) <= 1e-12
    lhs = (n_op @ adag - adag @ n_op)[1:, 1:]
    assert np.max(np.abs(lhs - 0.6 * adag[1:, 1:])) <= 1e-12


def test_hamiltonian_diagonal():
    space = km.FockSpace(16, XI)
    _, _, n_op, h_op = km.build_operators(space, PARAMS)
    vac = np.zeros(16)
    vac[0] = 1.0
    assert np.allclose(h_op @ vac, 0.0)
    two = np.zeros(16)
    two[2] = 1.0
    expected = 2.0 * PARAMS.w2 * XI**2 + 2.0 * PARAMS.w1 * XI
    assert np.allclose(h_op @ two, expected * two)
    assert np.allclose(np.diag(n_op), XI * np.arange(16))
    # H equals the Wick-ordered operator built from the ladder matrices
    a, adag, _, _ = km.build_operators(space, PARAMS)
    wick = PARAMS.w2 * adag @ adag @ a @ a + PARAMS.w1 * adag @ a
    assert np.max(np.abs(h_op - wick)) <= 1e-12


def test_coherent_vector_properties():
    space = km.FockSpace(64, XI)
    alpha = 1.0
    v = km.coherent_vector(alpha, space)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    a = annihilation_matrix(space)
    # eigenvector property within truncation error
    resid = a @ v - alpha * v
    assert np.linalg.norm(resid[:-1]) <= 1e-10
    n_op = np.diag(XI * np.arange(space.dim))
    assert float(np.real(np.conj(v) @ (n_op @ v))) == pytest.approx(
        abs(alpha) ** 2, abs=1e-10)
    vac = km.coherent_vector(0.0, space)
    assert vac[0] == 1.0 and np.allclose(vac[1:], 0.0)


def test_truncation_report_values():
    space = km.FockSpace(60, XI)
    assert km.truncation_report(km.coherent_vector(1.0, space), space) < 1e-12
    vac = km.coherent_vector(0.0, space)
    assert km.truncation_report(vac, space) == 0.0
    # s = 0.1 squeezing at xi = 1 genuinely needs a basis past 1024 states
    state = km.SqueezedState.from_values(1.0, -math.log(0.1) / 2.0, math.pi, XI)
    big = km.fock_space_for(state, cap=2048)
    assert big.dim == 2048
    assert km.truncation_report(km.squeezed_vector(state, big), big) < 1e-12


def test_truncation_insufficient_raises():
    space = km.FockSpace(8, XI)
    with pytest.raises(TruncationInsufficient):
        km.coherent_vector(2.5, space)
    state = km.SqueezedState.from_values(1.0, -math.log(0.1) / 2.0, 0.0, XI)
    with pytest.raises(TruncationInsufficient):
        km.fock_space_for(state, cap=256)


def test_squeeze_operator_unitary():
    space = km.FockSpace(56, XI)
    v_op = squeeze_operator(0.25 * np.exp(0.4j), space)
    assert np.max(np.abs(v_op.conj().T @ v_op - np.eye(space.dim))) < 1e-10


def test_squeezed_vector_matches_dense_operator():
    state = km.SqueezedState.from_values(0.6, 0.3, 1.2, XI)
    space = km.FockSpace(96, XI)
    via_vector = km.squeezed_vector(state, space)
    dense = squeeze_operator(state.squeeze.tau, space) @ km.coherent_vector(0.6, space)
    assert np.max(np.abs(via_vector - dense / np.linalg.norm(dense))) <= 1e-12


def test_squeezed_vector_moments_match_closed_forms():
    state = km.SqueezedState.from_values(1.0, -math.log(0.5) / 2.0, math.pi, XI)
    space = km.fock_space_for(state)
    v = km.squeezed_vector(state, space)
    a = annihilation_matrix(space)
    q_op = (a + a.conj().T) / math.sqrt(2.0)
    p_op = (a - a.conj().T) / (1j * math.sqrt(2.0))
    mq = float(np.real(np.conj(v) @ (q_op @ v)))
    mp = float(np.real(np.conj(v) @ (p_op @ v)))
    var_q = float(np.real(np.conj(v) @ (q_op @ q_op @ v))) - mq * mq
    var_p = float(np.real(np.conj(v) @ (p_op @ p_op @ v))) - mp * mp
    sym = q_op @ p_op + p_op @ q_op
    cov = 0.5 * float(np.real(np.conj(v) @ (sym @ v))) - mq * mp
    ref_q, ref_p, ref_cov = km.variances(state)
    assert var_q == pytest.approx(ref_q, abs=1e-8)
    assert var_p == pytest.approx(ref_p, abs=1e-8)
    assert cov == pytest.approx(ref_cov, abs=1e-8)
    assert var_q * var_p - cov**2 == pytest.approx(XI**2 / 4.0, abs=1e-8)


def test_heisenberg_number_conserved():
    space = km.FockSpace(64, XI)
    v = km.coherent_vector(0.9, space)
    idx = km.ObservableIndex(1, 1)
    ref = km.heisenberg_expectation(idx, 0.0, v, space, PARAMS)
    for t in (0.7, 3.0, 12.0):
        assert km.heisenberg_expectation(idx, t, v, space, PARAMS) == pytest.approx(
            ref, abs=1e-12)


def test_heisenberg_harmonic_rotation():
    params = km.KerrParams(w1=1.1, w2=0.0, xi=XI)
    space = km.FockSpace(64, XI)
    v = km.coherent_vector(1.0, space)
    for t in (0.4, 2.2):
        val = km.heisenberg_expectation(km.ObservableIndex(0, 1), t, v, space, params)
        assert val == pytest.approx(np.exp(-1j * params.w1 * t), abs=1e-10)


def test_heisenberg_time_reversible():
    space = km.FockSpace(96, XI)
    state = km.SqueezedState.from_values(0.8, 0.2, 0.5, XI)
    v = km.squeezed_vector(state, space)
    idx = km.ObservableIndex(0, 1)
    op = power_operator(idx, space)
    base = km.heisenberg_expectation(idx, 0.0, v, space, PARAMS, op=op)
    t = 1.7
    forward = km.heisenberg_expectation(idx, t, v, space, PARAMS, op=op)
    # evolving the evolved observable backwards restores the t = 0 value
    phase = np.exp(-1j * km.fock.energies(space, PARAMS) * t / XI)
    w = phase * v
    undone = km.heisenberg_expectation(idx, -t, w, space, PARAMS, op=op)
    assert undone == pytest.approx(base, abs=1e-12)
    assert forward != pytest.approx(base, abs=1e-3)  # the dynamics is nontrivial


def test_matrix_element_agreement_with_closed_form():
    space = km.FockSpace(96, XI)
    alpha, beta = 1.0, 0.5 + 0.3j
    va = km.coherent_vector(alpha, space)
    vb = km.coherent_vector(beta, space)
    worst = 0.0
    for s in range(4):
        for m in range(4):
            idx = km.ObservableIndex(s, m)
            op = power_operator(idx, space)
            for t in (0.0, 0.3, 0.7, 1.9, 5.0):
                closed = km.matrix_element(idx, t, alpha, beta, PARAMS)
                oracle = km.heisenberg_matrix_element(idx, t, va, vb, space,
                                                      PARAMS, op=op)
                worst = max(worst, abs(closed - oracle) / (1.0 + abs(oracle)))
    assert worst <= 1e-8


def test_expectation_bounded_through_singular_time():
    # phase averaging keeps <a(t)> finite where the symbol diverges
    t_sing = (math.pi / 2.0) / (XI * PARAMS.w2)
    space = km.FockSpace(80, XI)
    v = km.coherent_vector(1.0, space)
    ts = t_sing + np.linspace(-0.2, 0.2, 9) / PARAMS.w2
    vals = km.heisenberg_expectation_sweep(km.ObservableIndex(0, 1), ts, v,
                                           space, PARAMS)
    assert np.max(np.abs(vals)) <= 1.0  # never exceeds the coherent amplitude
