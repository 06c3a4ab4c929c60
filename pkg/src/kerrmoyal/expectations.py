"""Squeezed-state expectation values of the evolving annihilation symbol.

The closed form for <a(t)> is a generalized Gaussian integral of the Moyal
solution Theta_01 against the squeezed Wigner density.  Writing
T = tan(xi w2 t) and m1 = s^2 + iT, m2 = s^-2 + iT, the amplitude factor
G^{3/2} is evaluated as

    sqrtG3 = e^{3i t~} sec^3(t~) (sqrt(m1) sqrt(m2))^{-3}

with principal square roots.  Because m1 and m2 never leave the right
half-plane for s > 0, this expression is the continuous branch along any
time path from t = 0 (where it equals 1): no stateful phase tracking is
required, and the expectation value passes smoothly through the singular
times of the Moyal solution.  Inside the singular window the T-rational
factors are replaced by their algebraic T -> inf limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, SingularWindow, ToleranceNotMet
from .kerr import (
    SINGULAR_COS_WINDOW,
    KerrParams,
    ObservableIndex,
    classical_amplitude,
)
from .phase_space import PhasePoint
from .states import SqueezedState, rotation_matrix

_SQRT2 = math.sqrt(2.0)

# Quadrature domain: disk radius |xbar| + RADIUS_SCALE sqrt(xi) max(1, 1/s).
RADIUS_SCALE = 8.0


@dataclass(frozen=True)
class GaussianFactors:
    """T = tan(xi w2 t), the ratio G(T, s), and its tracked 3/2 power."""

    T: float
    G: complex
    sqrtG3: complex


@dataclass(frozen=True)
class ExpectationResult:
    """<a(t)> together with the canonical means and the pole count."""

    value: complex
    branch_winding: int

    @property
    def mean_q(self) -> float:
        return _SQRT2 * self.value.real

    @property
    def mean_p(self) -> float:
        return _SQRT2 * self.value.imag


def branch_winding(t: float, params: KerrParams) -> int:
    """Number of tan poles of xi w2 t crossed on the way from 0 to t."""
    tt = params.xi * params.w2 * t
    count = int(math.floor((abs(tt) + math.pi / 2.0) / math.pi))
    return count if tt >= 0 else -count


def gaussian_factors(t: float, state: SqueezedState, params: KerrParams) -> GaussianFactors:
    """Branch-consistent (T, G, G^{3/2}) away from the singular window."""
    s = state.s
    tt = params.xi * params.w2 * t
    cos_tt = math.cos(tt)
    if abs(cos_tt) < SINGULAR_COS_WINDOW:
        raise SingularWindow("T = tan(xi w2 t) has a pole here; factors via limits only")
    big_t = math.tan(tt)
    m1 = s * s + 1j * big_t
    m2 = 1.0 / (s * s) + 1j * big_t
    g = (1.0 + 1j * big_t) ** 2 / (m1 * m2)
    sqrt_g3 = np.exp(3j * tt) / (cos_tt ** 3 * (np.sqrt(m1) * np.sqrt(m2)) ** 3)
    return GaussianFactors(big_t, g, sqrt_g3)


def expectation_a_closed(t: float, state: SqueezedState,
                         params: KerrParams) -> ExpectationResult:
    """Closed-form <a(t)> for a squeezed coherent state.

    Smooth and bounded in t for every s > 0; at singular times the
    T-rational factors are evaluated through their algebraic limits
    (G^{3/2} -> 1, Gaussian exponent -> -2|alpha|^2/xi).
    """
    s = state.s
    if s <= 0:
        raise InvalidState("squeeze factor s must be positive")
    xi = params.xi
    alpha = state.alpha
    dphi = state.delta_phi
    tt = xi * params.w2 * t
    cos_half, sin_half = math.cos(dphi / 2.0), math.sin(dphi / 2.0)

    bracket = ((1.0 / s) * math.cos(tt - dphi / 2.0)
               + 1j * s * math.sin(tt - dphi / 2.0))
    phase = np.exp(-1j * (params.w1 * t + tt - dphi / 2.0))

    if abs(math.cos(tt)) < SINGULAR_COS_WINDOW:
        sqrt_g3 = 1.0 + 0.0j
        exponent = -2.0 * abs(alpha) ** 2 / xi
    else:
        factors = gaussian_factors(t, state, params)
        big_t = factors.T
        m1 = s * s + 1j * big_t
        m2 = 1.0 / (s * s) + 1j * big_t
        sqrt_g3 = factors.sqrtG3
        exponent = (-2j * (big_t / xi) * abs(alpha) ** 2
                    * (1j * big_t + cos_half**2 / s**2 + s**2 * sin_half**2)
                    / (m1 * m2))
    value = alpha * sqrt_g3 * bracket * phase * np.exp(exponent)
    return ExpectationResult(complex(value), branch_winding(t, params))


def expectation_a_sweep(times, state: SqueezedState,
                        params: KerrParams) -> list[ExpectationResult]:
    """Expectation values over a time grid with one consistent branch."""
    return [expectation_a_closed(float(t), state, params)
            for t in np.asarray(times, dtype=float)]


def expectation_a_semiclassical(t: float, state: SqueezedState,
                                params: KerrParams) -> complex:
    """First-order small-xi expansion of <a(t)> around the classical flow.

    a_cl(t|xbar) {1 + xi [2|tau| e^{i dphi}
                          - 2|alpha|^2 w2 t (w2 t + 4i |tau| cos dphi)]}.
    """
    xbar = state.coherent.mean_x
    a_cl = classical_amplitude(t, PhasePoint(xbar[0], xbar[1]), params)
    tau_abs = state.squeeze.magnitude
    dphi = state.delta_phi
    w2t = params.w2 * t
    corr = (2.0 * tau_abs * np.exp(1j * dphi)
            - 2.0 * abs(state.alpha) ** 2 * w2t * (w2t + 4j * tau_abs * math.cos(dphi)))
    return complex(a_cl * (1.0 + params.xi * corr))


def semiclassical_validity(t: float, state: SqueezedState, params: KerrParams) -> bool:
    """Advisory validity window of the first-order expansion."""
    return (0.8 < state.s < 1.0) and abs(params.w2 * t) < 0.1


# ---------------------------------------------------------------------------
# Direct phase-space quadrature
# ---------------------------------------------------------------------------

def _axis_nodes(mass_center: float, sigma: float, half_width: float,
                radius: float, big_t: float, xi: float, refine: int):
    """Composite Gauss-Legendre nodes/weights on one principal axis.

    Panel edges are the union of an envelope-resolving uniform grid (scale
    sigma) and equal-phase points of the radial oscillation
    exp(-i T y^2 / xi), so no panel spans more than 2 pi / 2^refine radians
    of phase regardless of where it sits.
    """
    lo = max(-radius, mass_center - half_width)
    hi = min(radius, mass_center + half_width)
    base = sigma / 2.0**refine
    n_env = max(2, int(math.ceil((hi - lo) / base)) + 1)
    edges = np.linspace(lo, hi, n_env)
    if big_t != 0.0:
        dphase = 2.0 * math.pi / 2.0**refine
        y_max = max(abs(lo), abs(hi))
        k_max = int(math.floor(abs(big_t) * y_max**2 / (xi * dphase)))
        if k_max > 0:
            y_phase = np.sqrt(np.arange(1, k_max + 1) * dphase * xi / abs(big_t))
            y_phase = np.concatenate([-y_phase[::-1], y_phase])
            y_phase = y_phase[(y_phase > lo) & (y_phase < hi)]
            edges = np.union1d(edges, y_phase)
    gl_x, gl_w = np.polynomial.legendre.leggauss(8)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * gl_x[None, :]).ravel()
    weights = (half[:, None] * gl_w[None, :]).ravel()
    return nodes, weights


def expectation_a_quadrature(t: float, state: SqueezedState, params: KerrParams,
                             tol: float = 1e-8, radius_scale: float = RADIUS_SCALE,
                             max_refine: int = 4) -> complex:
    """<a(t)> by adaptive tensor quadrature of the phase-space integral.

    Works in the rotated coordinates y = R(-phi) x, where the squeezed
    Wigner weight is axis-aligned; the domain is the disk of radius
    R = |xbar| + radius_scale sqrt(xi) max(1, 1/s), restricted per axis by
    the Gaussian tail bound (contributions beyond exp(-radius_scale^2)).
    Refines by panel halving until the change is below tol.
    """
    s = state.s
    if s <= 0:
        raise InvalidState("squeeze factor s must be positive")
    xi = params.xi
    tt = xi * params.w2 * t
    if abs(math.cos(tt)) < SINGULAR_COS_WINDOW:
        raise SingularWindow("Theta_01 is pointwise singular here")
    big_t = math.tan(tt)
    phi = state.squeeze.phase
    xbar = state.coherent.mean_x
    ybar = rotation_matrix(-phi) @ xbar
    radius = float(np.linalg.norm(xbar)) + radius_scale * math.sqrt(xi) * max(1.0, 1.0 / s)

    # Theta_01(t|y) = pref * exp(-i|y|^2 T/xi) * (y1 + i y2)/sqrt(2)
    pref = (np.exp(-1j * params.w1 * t) / math.cos(tt) ** 2 * np.exp(2j * tt))
    const = np.exp(-float(ybar @ ybar) / xi)

    scales = np.array([s * s, 1.0 / (s * s)])        # Lambda(s^2) diagonal
    lin = np.array([s, 1.0 / s]) * ybar              # Lambda(s) ybar
    centers = lin / scales
    sigmas = np.sqrt(xi / (2.0 * scales))
    half_widths = radius_scale * np.sqrt(xi) / np.sqrt(scales)

    def tensor_value(refine: int) -> complex:
        sums0 = []
        sums1 = []
        for axis in range(2):
            nodes, weights = _axis_nodes(centers[axis], sigmas[axis],
                                         half_widths[axis], radius,
                                         big_t, xi, refine)
            expo = (-(scales[axis] + 1j * big_t) * nodes**2
                    + 2.0 * lin[axis] * nodes) / xi
            vals = np.exp(expo)
            sums0.append(np.sum(weights * vals))
            sums1.append(np.sum(weights * nodes * vals))
        integral = (sums1[0] * sums0[1] + 1j * sums0[0] * sums1[1]) / _SQRT2
        return (np.exp(1j * phi / 2.0) / (np.pi * xi)) * pref * const * integral

    prev = tensor_value(0)
    for refine in range(1, max_refine + 1):
        cur = tensor_value(refine)
        err = abs(cur - prev)
        if err <= tol:
            return complex(cur)
        prev = cur
    raise ToleranceNotMet(f"quadrature error estimate {err:.3e} > tol {tol:.3e}",
                          achieved=float(err))


# ---------------------------------------------------------------------------
# Coherent matrix elements
# ---------------------------------------------------------------------------

def matrix_element(idx: ObservableIndex, t: float, alpha: complex, beta: complex,
                   params: KerrParams) -> complex:
    """<alpha|(a^dag(t))^s a(t)^m|beta> in closed form; finite for all t.

    (alpha*)^s beta^m e^{-i(m-s) t (w1 + (m+s-1) xi w2)}
    exp{-(|alpha|^2 + |beta|^2)/(2 xi) + (beta alpha*/xi) e^{-2i(m-s) xi w2 t}}.
    """
    xi = params.xi
    s, m = idx.s, idx.m
    rotated = beta * np.conj(alpha) / xi * np.exp(-2j * (m - s) * xi * params.w2 * t)
    return complex(np.conj(alpha) ** s * beta ** m
                   * np.exp(-1j * (m - s) * t * (params.w1 + (m + s - 1) * xi * params.w2))
                   * np.exp(-(abs(alpha) ** 2 + abs(beta) ** 2) / (2.0 * xi) + rotated))


def coherent_quantizer_element(alpha: complex, beta: complex, x: PhasePoint,
                               xi: float) -> complex:
    """<alpha|Delta(x)|beta> = (1/pi xi) exp(-z z*/xi + sqrt(2)(beta z* + alpha* z)/xi + C)."""
    c = -(abs(alpha) ** 2 + abs(beta) ** 2 + 2.0 * beta * np.conj(alpha)) / (2.0 * xi)
    return complex(np.exp(-x.z * x.zbar / xi
                          + math.sqrt(2.0) / xi * (beta * x.zbar + np.conj(alpha) * x.z)
                          + c) / (np.pi * xi))
