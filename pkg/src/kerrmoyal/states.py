"""Coherent and squeezed states of a single mode with xi-scaled algebra.

A squeezed state |tau alpha> = V(tau) D(alpha) |0> is parameterized by the
coherent amplitude alpha and the Bogoliubov parameter tau = |tau| e^{i phi};
the squeeze factor s = exp(-2 xi |tau|) in (0, 1] is always derived, never
an independent input.  The combination that the dynamics actually sees is
Delta_phi = phi - 2 arg(alpha), reduced to (-pi, pi] so that number
squeezing sits at Delta_phi = pi and phase squeezing at Delta_phi = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phase_space import GaussPolySymbol, PhasePoint, ZPoly


@dataclass(frozen=True)
class CoherentParams:
    """Coherent amplitude; arg(alpha) is normalized to [0, 2 pi)."""

    alpha: complex

    @property
    def arg(self) -> float:
        return float(np.angle(self.alpha)) % (2.0 * math.pi)

    @property
    def mean_x(self) -> np.ndarray:
        """Phase-space mean (sqrt(2) Re alpha, sqrt(2) Im alpha)."""
        return np.array([math.sqrt(2.0) * self.alpha.real,
                         math.sqrt(2.0) * self.alpha.imag])


@dataclass(frozen=True)
class SqueezeParams:
    """Squeeze magnitude |tau| >= 0 and phase phi in [0, 2 pi)."""

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError("squeeze magnitude |tau| must be non-negative")
        object.__setattr__(self, "phase", float(self.phase) % (2.0 * math.pi))

    @property
    def tau(self) -> complex:
        return self.magnitude * np.exp(1j * self.phase)

    def s_factor(self, xi: float) -> float:
        return math.exp(-2.0 * xi * self.magnitude)


def _reduce_angle(angle: float) -> float:
    """Reduce to (-pi, pi]."""
    reduced = math.fmod(angle, 2.0 * math.pi)
    if reduced > math.pi:
        reduced -= 2.0 * math.pi
    elif reduced <= -math.pi:
        reduced += 2.0 * math.pi
    return reduced


@dataclass(frozen=True)
class SqueezedState:
    """|tau alpha> = V(tau) D(alpha)|0> at deformation parameter xi."""

    coherent: CoherentParams
    squeeze: SqueezeParams
    xi: float

    @classmethod
    def from_values(cls, alpha: complex, tau_abs: float, tau_phase: float,
                    xi: float) -> "SqueezedState":
        return cls(CoherentParams(alpha), SqueezeParams(tau_abs, tau_phase), xi)

    @property
    def alpha(self) -> complex:
        return self.coherent.alpha

    @property
    def s(self) -> float:
        return self.squeeze.s_factor(self.xi)

    @property
    def delta_phi(self) -> float:
        return _reduce_angle(self.squeeze.phase - 2.0 * np.angle(self.alpha))

    def phase_shifted(self, delta: float) -> "SqueezedState":
        """Phase shift of the mode: alpha -> alpha e^{-i delta}, tau -> tau e^{-2i delta}."""
        return SqueezedState(
            CoherentParams(self.alpha * np.exp(-1j * delta)),
            SqueezeParams(self.squeeze.magnitude, self.squeeze.phase - 2.0 * delta),
            self.xi)


# ---------------------------------------------------------------------------
# Symplectic matrices of the metaplectic action
# ---------------------------------------------------------------------------

def rotation_matrix(phi: float) -> np.ndarray:
    """R(phi): rotation by the half angle phi/2; R(phi)^T = R(-phi)."""
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return np.array([[c, -s], [s, c]])


def scaling_matrix(s: float) -> np.ndarray:
    """Lambda(s) = diag(s, 1/s)."""
    return np.array([[s, 0.0], [0.0, 1.0 / s]])


def squeeze_matrix(squeeze: SqueezeParams, xi: float) -> np.ndarray:
    """S(tau) with V(tau) x_hat V(tau)^dag = S(tau) x_hat.

    Symmetric, positive definite, det = 1; equals
    R(phi) Lambda(s) R(-phi) with s = exp(-2 xi |tau|).
    """
    s = squeeze.s_factor(xi)
    phi = squeeze.phase
    c2, s2 = math.cos(phi / 2.0) ** 2, math.sin(phi / 2.0) ** 2
    off = -0.5 * (1.0 / s - s) * math.sin(phi)
    return np.array([[s * c2 + s2 / s, off],
                     [off, c2 / s + s * s2]])


# ---------------------------------------------------------------------------
# Wave function and projector symbols
# ---------------------------------------------------------------------------

def coherent_wavefunction(alpha: complex, xi: float, q):
    """<q|alpha> = (pi xi)^(-1/4) exp[(1/xi)(-q^2/2 + sqrt(2) alpha q - alpha Re alpha)]."""
    q = np.asarray(q, dtype=float)
    return ((np.pi * xi) ** (-0.25)
            * np.exp((-0.5 * q * q + math.sqrt(2.0) * alpha * q
                      - alpha * alpha.real) / xi))


def coherent_projector_symbol(alpha: complex, xi: float, x: PhasePoint) -> float:
    """[|alpha><alpha|]_w(x) = 2 exp{-(1/xi)[(q - qbar)^2 + (p - pbar)^2]}."""
    qbar = math.sqrt(2.0) * alpha.real
    pbar = math.sqrt(2.0) * alpha.imag
    return 2.0 * math.exp(-((x.q - qbar) ** 2 + (x.p - pbar) ** 2) / xi)


def coherent_projector(alpha: complex, xi: float) -> GaussPolySymbol:
    """GaussPolySymbol form of [|alpha><alpha|]_w."""
    xbar = CoherentParams(alpha).mean_x
    quad = -(1.0 / xi) * np.eye(2)
    lin = (2.0 / xi) * xbar
    const = -float(xbar @ xbar) / xi
    return GaussPolySymbol(quad, lin, const, ZPoly.constant(2.0))


def squeezed_projector_symbol(state: SqueezedState, x: PhasePoint) -> float:
    """[|tau alpha><tau alpha|]_w(x) = [|alpha><alpha|]_w(S(tau) x)."""
    sym = squeezed_projector(state)
    return float(np.real(sym(x)))


def squeezed_projector(state: SqueezedState) -> GaussPolySymbol:
    """2 exp{(1/xi)[-x.S(2 tau) x + 2 x.S(tau) xbar - xbar.xbar]}."""
    xi = state.xi
    xbar = state.coherent.mean_x
    s_tau = squeeze_matrix(state.squeeze, xi)
    s_2tau = squeeze_matrix(SqueezeParams(2.0 * state.squeeze.magnitude,
                                          state.squeeze.phase), xi)
    quad = -s_2tau / xi
    lin = (2.0 / xi) * (s_tau @ xbar)
    const = -float(xbar @ xbar) / xi
    return GaussPolySymbol(quad, lin, const, ZPoly.constant(2.0))


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------

def variances(state: SqueezedState) -> tuple[float, float, float]:
    """(var q, var p, symmetrized covariance) of |tau alpha>.

    var q = (xi/2)(s^-2 cos^2(phi/2) + s^2 sin^2(phi/2)),
    var p = (xi/2)(s^2 cos^2(phi/2) + s^-2 sin^2(phi/2)),
    cov   = (xi/4)(s^-2 - s^2) sin(phi).
    The Schroedinger-Robertson bound is saturated:
    var_q var_p - cov^2 = xi^2/4 identically.
    """
    xi = state.xi
    s = state.s
    phi = state.squeeze.phase
    c2, s2 = math.cos(phi / 2.0) ** 2, math.sin(phi / 2.0) ** 2
    var_q = 0.5 * xi * (c2 / s**2 + s**2 * s2)
    var_p = 0.5 * xi * (s**2 * c2 + s2 / s**2)
    cov_f = 0.25 * xi * (1.0 / s**2 - s**2) * math.sin(phi)
    return var_q, var_p, cov_f


def mean_photon_number(state: SqueezedState) -> float:
    """<a^dag a> = xi sinh^2(2 xi |tau|) + |alpha cosh(2 xi |tau|) + alpha* e^{i phi} sinh(2 xi |tau|)|^2.

    The vacuum-fluctuation term carries the commutator scale xi (it reduces
    to the familiar sinh^2 at xi = 1, the photon-physics value).
    """
    xi = state.xi
    theta = 2.0 * xi * state.squeeze.magnitude
    ch, sh = math.cosh(theta), math.sinh(theta)
    alpha = state.alpha
    shifted = alpha * ch + np.conj(alpha) * np.exp(1j * state.squeeze.phase) * sh
    return xi * sh * sh + float(abs(shifted)) ** 2


def coherent_overlap(alpha: complex, beta: complex, xi: float) -> complex:
    """<alpha|beta> = exp[-(|alpha|^2/2 + |beta|^2/2 - alpha* beta)/xi]."""
    return np.exp((-0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2
                   + np.conj(alpha) * beta) / xi)
