"""Independent truncated-Fock-space ground truth for the Kerr dynamics.

Dense matrices over the xi-scaled number basis: <n-1|a|n> = sqrt(xi n), so
[a, a^dag] = xi I except in the last diagonal entry, which truncation
corrupts.  The Kerr Hamiltonian is diagonal, so Heisenberg evolution is an
exact elementwise phase multiplication with no time-stepping error; this is
what makes the basis a trustworthy oracle for the closed-form results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.sparse import diags
from scipy.sparse.linalg import expm_multiply

from .errors import TruncationInsufficient
from .kerr import KerrParams, ObservableIndex
from .states import SqueezedState

DIM_CAP = 1024
TAIL_TOL = 1e-12
_TAIL_WINDOW = 5


@dataclass(frozen=True)
class FockSpace:
    """Truncated number basis of dimension dim at deformation parameter xi."""

    dim: int
    xi: float

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be at least 2")
        if self.xi <= 0:
            raise ValueError("xi must be positive")


def annihilation_matrix(space: FockSpace) -> np.ndarray:
    n = np.arange(1, space.dim)
    return np.diag(np.sqrt(space.xi * n), k=1).astype(complex)


def build_operators(space: FockSpace, params: KerrParams):
    """(a, a_dag, N, H) as dense matrices.

    H is diagonal with entries w2 xi^2 n(n-1) + w1 xi n; N = a^dag a has
    diagonal xi n.
    """
    a = annihilation_matrix(space)
    adag = a.conj().T
    n = np.arange(space.dim)
    n_op = np.diag(space.xi * n).astype(complex)
    h_op = np.diag(energies(space, params)).astype(complex)
    return a, adag, n_op, h_op


def energies(space: FockSpace, params: KerrParams) -> np.ndarray:
    n = np.arange(space.dim, dtype=float)
    return params.w2 * space.xi**2 * n * (n - 1) + params.w1 * space.xi * n


def truncation_report(v: np.ndarray, space: FockSpace) -> float:
    """Tail mass sum_{n >= dim-5} |c_n|^2; used to auto-grow the dimension."""
    return float(np.sum(np.abs(v[space.dim - _TAIL_WINDOW:]) ** 2))


def coherent_vector(alpha: complex, space: FockSpace) -> np.ndarray:
    """|alpha> with c_n = e^{-|alpha|^2/(2 xi)} alpha^n / sqrt(xi^n n!)."""
    if alpha == 0:
        v = np.zeros(space.dim, dtype=complex)
        v[0] = 1.0
        return v
    n = np.arange(space.dim)
    # log-scale assembly avoids overflow of alpha^n / sqrt(n!) for large dim
    log_mag = (n * math.log(abs(alpha)) - 0.5 * n * math.log(space.xi)
               - 0.5 * np.array([math.lgamma(k + 1) for k in n])
               - abs(alpha) ** 2 / (2.0 * space.xi))
    v = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    if truncation_report(v, space) > TAIL_TOL:
        raise TruncationInsufficient(
            f"coherent tail mass {truncation_report(v, space):.3e} at dim {space.dim}")
    return v / np.linalg.norm(v)


def _squeeze_generator(tau: complex, space: FockSpace):
    """Sparse tau (a^dag)^2 - tau* a^2; couples n to n +/- 2 only."""
    s = np.sqrt(space.xi * np.arange(1, space.dim))
    band = s[:-1] * s[1:]
    return diags([tau * band, -np.conj(tau) * band], offsets=[-2, 2],
                 format="csr", dtype=complex)


def squeeze_operator(tau: complex, space: FockSpace) -> np.ndarray:
    """Dense V(tau) = expm[tau (a^dag)^2 - tau* a^2] with a unitarity post-check."""
    v_op = expm(_squeeze_generator(tau, space).toarray())
    defect = np.max(np.abs(v_op.conj().T @ v_op - np.eye(space.dim)))
    if defect > 1e-10:
        raise TruncationInsufficient(
            f"squeeze operator unitarity defect {defect:.3e} at dim {space.dim}")
    return v_op


def squeezed_vector(state: SqueezedState, space: FockSpace) -> np.ndarray:
    """|tau alpha> = V(tau)|alpha>, tail-checked and renormalized.

    The matrix exponential is applied to the vector through the banded
    generator (scaled-and-squared Taylor application); unitarity is
    enforced by norm preservation plus an exact-inverse round trip.
    """
    if abs(space.xi - state.xi) > 1e-14:
        raise ValueError("state and space carry different xi")
    v = coherent_vector(state.alpha, space)
    if state.squeeze.magnitude != 0:
        gen = _squeeze_generator(state.squeeze.tau, space)
        w = expm_multiply(gen, v)
        round_trip = np.max(np.abs(expm_multiply(-gen, w) - v))
        if abs(np.linalg.norm(w) - 1.0) > 1e-10 or round_trip > 1e-10:
            raise TruncationInsufficient(
                f"squeeze application defect {round_trip:.3e} at dim {space.dim}")
        v = w
    tail = truncation_report(v, space)
    if tail > TAIL_TOL:
        raise TruncationInsufficient(
            f"squeezed tail mass {tail:.3e} at dim {space.dim}")
    return v / np.linalg.norm(v)


def fock_space_for(state: SqueezedState, start_dim: int = 64,
                   cap: int = DIM_CAP) -> FockSpace:
    """Double the dimension until the truncation report is below 1e-12."""
    dim = start_dim
    while dim <= cap:
        space = FockSpace(dim, state.xi)
        try:
            squeezed_vector(state, space)
            return space
        except TruncationInsufficient:
            dim *= 2
    raise TruncationInsufficient(
        f"no dimension up to {cap} reaches tail mass {TAIL_TOL}")


def power_operator(idx: ObservableIndex, space: FockSpace) -> np.ndarray:
    """(a^dag)^s a^m by repeated matrix products."""
    a = annihilation_matrix(space)
    adag = a.conj().T
    factors = [adag] * idx.s + [a] * idx.m
    if not factors:
        return np.eye(space.dim, dtype=complex)
    out = factors[0]
    for factor in factors[1:]:
        out = out @ factor
    return out


def heisenberg_matrix_element(idx: ObservableIndex, t: float, v_left: np.ndarray,
                              v_right: np.ndarray, space: FockSpace,
                              params: KerrParams, op: np.ndarray | None = None) -> complex:
    """<v_left| e^{iHt/xi} (a^dag)^s a^m e^{-iHt/xi} |v_right>.

    H is diagonal, so the evolution is exact elementwise phase multiplication.
    """
    if op is None:
        op = power_operator(idx, space)
    phase = np.exp(-1j * energies(space, params) * t / space.xi)
    wl = phase * v_left
    wr = phase * v_right
    return complex(np.conj(wl) @ (op @ wr))


def heisenberg_expectation(idx: ObservableIndex, t: float, v: np.ndarray,
                           space: FockSpace, params: KerrParams,
                           op: np.ndarray | None = None) -> complex:
    """<v|(a^dag(t))^s a(t)^m|v> via exact eigen-evolution."""
    return heisenberg_matrix_element(idx, t, v, v, space, params, op=op)


def heisenberg_expectation_sweep(idx: ObservableIndex, times, v: np.ndarray,
                                 space: FockSpace, params: KerrParams) -> np.ndarray:
    """Vector of expectation values over a time grid, sharing one operator build."""
    op = power_operator(idx, space)
    return np.array([heisenberg_expectation(idx, t, v, space, params, op=op)
                     for t in np.asarray(times, dtype=float)])
