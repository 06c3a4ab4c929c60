"""Invariant suites behind `kerr validate`.

Each suite runs a fixed set of cross-checks (dual star engines, closed form
vs Fock oracle, symmetry identities) and reports the worst deviation per
check against its tolerance.  Suites are deterministic: random samples are
drawn from a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import expectations, fock, kerr, states
from .phase_space import (
    GaussPolySymbol,
    PhasePoint,
    ZPoly,
    annihilation_symbol,
    creation_symbol,
    moyal_bracket,
    phase_space_inner_product,
    star_differential,
    star_gaussian,
)

_SEED = 20231123


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.informational or self.max_deviation <= self.tolerance


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [dict(asdict(c), passed=c.passed) for c in self.checks],
        }


def _default_params() -> kerr.KerrParams:
    return kerr.KerrParams(w1=1.0, w2=0.1, xi=1.0)


def validate_algebra(params: kerr.KerrParams | None = None) -> SuiteReport:
    params = params or _default_params()
    xi = params.xi
    report = SuiteReport("algebra")
    rng = np.random.RandomState(_SEED)

    a_sym = annihilation_symbol()
    ad_sym = creation_symbol()
    pts = [PhasePoint(q, p) for q, p in rng.uniform(-1.5, 1.5, size=(6, 2))]

    a_star_a = star_differential(a_sym, a_sym, xi)
    dev = max(abs(a_star_a(pt) - (pt.z / math.sqrt(2.0)) ** 2) for pt in pts)
    report.checks.append(CheckResult("a_star_a_equals_a_squared", float(dev), 1e-12))

    comm = star_differential(a_sym, ad_sym, xi) - star_differential(ad_sym, a_sym, xi)
    dev = max(abs(comm(pt) - xi) for pt in pts)
    report.checks.append(CheckResult("a_adag_commutator_equals_xi", float(dev), 1e-12))

    worst = 0.0
    for k1 in range(3):
        for l1 in range(3 - k1):
            for k2 in range(3):
                for l2 in range(3 - k2):
                    f = GaussPolySymbol.polynomial(ZPoly.monomial(k1, l1))
                    g = GaussPolySymbol.polynomial(ZPoly.monomial(k2, l2))
                    diff_engine = star_differential(f, g, xi)
                    int_engine = star_gaussian(f, g, xi)
                    for pt in pts[:3]:
                        ref = diff_engine(pt)
                        worst = max(worst, abs(int_engine(pt) - ref) / (1.0 + abs(ref)))
    report.checks.append(CheckResult("engine_agreement_monomials", float(worst), 1e-10))

    q_sym = GaussPolySymbol.polynomial(ZPoly.linear_qp(0.0, 1.0, 0.0))
    p_sym = GaussPolySymbol.polynomial(ZPoly.linear_qp(0.0, 0.0, 1.0))
    br = moyal_bracket(q_sym, p_sym, xi)
    dev = max(abs(br(pt) - 1.0) for pt in pts)
    report.checks.append(CheckResult("canonical_moyal_bracket", float(dev), 1e-12))

    proj = states.coherent_projector(0.4 + 0.3j, xi)
    trace = phase_space_inner_product(proj, GaussPolySymbol.constant(1.0), xi)
    dev = abs(trace - 2.0 * math.pi * xi)
    report.checks.append(CheckResult("projector_trace_2_pi_xi", float(dev), 1e-10))
    return report


def validate_moyal(params: kerr.KerrParams | None = None) -> SuiteReport:
    params = params or _default_params()
    report = SuiteReport("moyal")
    rng = np.random.RandomState(_SEED + 1)
    pts = [PhasePoint(q, p) for q, p in rng.uniform(-1.4, 1.4, size=(4, 2))]
    times = [0.3, 1.1, 2.7]

    dev = 0.0
    for s in range(3):
        for m in range(3):
            idx = kerr.ObservableIndex(s, m)
            for pt in pts:
                v0 = kerr.moyal_solution(idx, 0.0, pt, params).value
                dev = max(dev, abs(v0 - kerr.initial_symbol(idx, params.xi, pt)))
    report.checks.append(CheckResult("t0_reduction", float(dev), 1e-12))

    dev = 0.0
    for s in range(3):
        for m in range(3):
            idx = kerr.ObservableIndex(s, m)
            idx_t = kerr.ObservableIndex(m, s)
            for t in times:
                for pt in pts[:2]:
                    v = kerr.moyal_solution(idx, t, pt, params).value
                    w = kerr.moyal_solution(idx_t, t, pt, params).value
                    dev = max(dev, abs(np.conj(v) - w))
    report.checks.append(CheckResult("adjoint_symmetry", float(dev), 1e-10))

    dev = 0.0
    for m in range(1, 4):
        idx = kerr.ObservableIndex(m, m)
        for pt in pts[:2]:
            v0 = kerr.moyal_solution(idx, 0.0, pt, params).value
            vt = kerr.moyal_solution(idx, 7.31, pt, params).value
            dev = max(dev, abs(vt - v0))
    report.checks.append(CheckResult("constants_of_motion", float(dev), 1e-12))

    dev = 0.0
    for s in range(2):
        for m in range(2):
            if s == m == 0:
                continue
            idx = kerr.ObservableIndex(s, m)
            for t in times[:2]:
                for pt in pts[:2]:
                    dev = max(dev, kerr.moyal_residual(idx, t, pt, params))
    report.checks.append(CheckResult("pde_residual", float(dev), 1e-5))

    dev = 0.0
    for t in times[:2]:
        for pt in pts[:2]:
            dev = max(dev, kerr.angular_eigenvalue_residual(
                kerr.ObservableIndex(0, 2), t, pt, params))
    report.checks.append(CheckResult("angular_eigenvalue", float(dev), 1e-5))

    dev = 0.0
    for t in times:
        for pt in pts[:2]:
            theta01 = kerr.moyal_solution(kerr.ObservableIndex(0, 1), t, pt, params).value
            dev = max(dev, abs(kerr.quantum_trajectory(t, pt, params) - theta01))
    report.checks.append(CheckResult("trajectory_consistency", float(dev), 1e-12))

    # Z(t) * Z(t) = x^2: the conserved intensity through the star product
    dev = 0.0
    for t in times[:2]:
        t01 = kerr.moyal_solution_symbolic(kerr.ObservableIndex(0, 1), t, params)
        t10 = kerr.moyal_solution_symbolic(kerr.ObservableIndex(1, 0), t, params)
        prod = star_gaussian(t10, t01, params.xi) + star_gaussian(t01, t10, params.xi)
        for pt in pts[:2]:
            dev = max(dev, abs(prod(pt) - pt.x2))
    report.checks.append(CheckResult("z_star_z_conserved", float(dev), 1e-8))

    # informational: growth exponent of the numerically obtained second
    # correction z2(t) ~ t^gamma (the closed form gives no z2 to assert)
    gamma = _z2_growth_exponent(params)
    report.checks.append(CheckResult("z2_growth_exponent_report", float(gamma),
                                     float("inf"), informational=True))
    return report


def _z2_growth_exponent(params: kerr.KerrParams) -> float:
    """Fit |z2(t)| ~ t^gamma via the second xi-derivative of the trajectory.

    Sampled deep in the w2 t x^2 >> 1 regime where the cubic secular growth
    dominates the quadratic cross term.
    """
    pt = PhasePoint(2.0, 0.0)
    h = 1e-4

    def traj(t: float, xi: float) -> complex:
        phase = xi * params.w2 * t
        phi = 2.0 * xi * params.w2 * t + pt.x2 * (params.w2 * t - math.tan(phase) / xi)
        return (np.exp(1j * phi) / math.cos(phase) ** 2
                * kerr.classical_amplitude(t, pt, params))

    ts = np.array([10.0, 20.0, 40.0, 80.0]) / params.w2
    mags = []
    for t in ts:
        z2 = (traj(t, h) - 2.0 * kerr.classical_amplitude(t, pt, params)
              + traj(t, -h)) / (h * h)
        mags.append(abs(z2) * math.sqrt(2.0))
    slope = np.polyfit(np.log(ts), np.log(mags), 1)[0]
    return float(slope)


def validate_states(params: kerr.KerrParams | None = None) -> SuiteReport:
    params = params or _default_params()
    xi = params.xi
    report = SuiteReport("states")
    rng = np.random.RandomState(_SEED + 2)

    dev = 0.0
    for s_target in (0.9, 0.5, 0.2):
        for phi in (0.0, 1.1, math.pi):
            tau_abs = -math.log(s_target) / (2.0 * xi)
            state = states.SqueezedState.from_values(0.7 + 0.2j, tau_abs, phi, xi)
            var_q, var_p, cov_f = states.variances(state)
            dev = max(dev, abs(var_q * var_p - cov_f**2 - xi**2 / 4.0))
    report.checks.append(CheckResult("schroedinger_robertson_saturation", float(dev), 1e-12))

    dev = 0.0
    for _ in range(4):
        alpha = complex(*rng.uniform(-1.0, 1.0, 2))
        tau_abs = rng.uniform(0.0, 0.8)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        state = states.SqueezedState.from_values(alpha, tau_abs, phi, xi)
        s_mat = states.squeeze_matrix(state.squeeze, xi)
        for q, p in rng.uniform(-1.5, 1.5, size=(4, 2)):
            pt = PhasePoint(q, p)
            mapped = s_mat @ pt.as_array()
            lhs = states.squeezed_projector_symbol(state, pt)
            rhs = states.coherent_projector_symbol(alpha, xi, PhasePoint(*mapped))
            dev = max(dev, abs(lhs - rhs))
    report.checks.append(CheckResult("covariance_identity", float(dev), 1e-12))

    sq = states.SqueezeParams(0.35, 0.8)
    s1 = states.squeeze_matrix(sq, xi)
    s2 = states.squeeze_matrix(states.SqueezeParams(0.7, 0.8), xi)
    dev = float(np.max(np.abs(s1 @ s1 - s2)))
    report.checks.append(CheckResult("squeeze_group_law", dev, 1e-12))

    state = states.SqueezedState.from_values(1.0, -math.log(0.5) / (2.0 * xi), math.pi, xi)
    space = fock.fock_space_for(state)
    v = fock.squeezed_vector(state, space)
    n_op = np.diag(space.xi * np.arange(space.dim)).astype(complex)
    dev = abs(float(np.real(np.conj(v) @ (n_op @ v))) - states.mean_photon_number(state))
    report.checks.append(CheckResult("mean_photon_vs_fock", float(dev), 1e-8))

    alpha, beta = 0.6 + 0.1j, -0.2 + 0.4j
    sp = fock.FockSpace(64, xi)
    ov_fock = complex(np.conj(fock.coherent_vector(alpha, sp)) @ fock.coherent_vector(beta, sp))
    dev = abs(ov_fock - states.coherent_overlap(alpha, beta, xi))
    report.checks.append(CheckResult("coherent_overlap_vs_fock", float(dev), 1e-10))
    return report


def validate_expectation(params: kerr.KerrParams | None = None) -> SuiteReport:
    params = params or _default_params()
    xi = params.xi
    report = SuiteReport("expectation")

    dev = 0.0
    for s_target in (0.5, 0.2):
        for dphi in (0.0, math.pi):
            tau_abs = -math.log(s_target) / (2.0 * xi)
            state = states.SqueezedState.from_values(1.0, tau_abs, dphi, xi)
            space = fock.fock_space_for(state)
            v = fock.squeezed_vector(state, space)
            times = np.linspace(0.0, math.pi / (xi * params.w2), 7)[:-1]
            oracle = fock.heisenberg_expectation_sweep(
                kerr.ObservableIndex(0, 1), times, v, space, params)
            for t, ref in zip(times, oracle):
                val = expectations.expectation_a_closed(float(t), state, params).value
                dev = max(dev, abs(val - ref) / (1.0 + abs(ref)))
    report.checks.append(CheckResult("closed_vs_fock", float(dev), 1e-8))

    state = states.SqueezedState.from_values(1.0, -math.log(0.5) / (2.0 * xi), math.pi, xi)
    dev = 0.0
    for t in (0.4, 1.7):
        quad = expectations.expectation_a_quadrature(t, state, params, tol=1e-9)
        closed = expectations.expectation_a_closed(t, state, params).value
        dev = max(dev, abs(quad - closed) / (1.0 + abs(closed)))
    report.checks.append(CheckResult("quadrature_vs_closed", float(dev), 1e-6))

    coh = states.SqueezedState.from_values(0.8 + 0.3j, 0.0, 0.0, xi)
    dev = 0.0
    for t in np.linspace(0.0, 20.0, 9):
        val = expectations.expectation_a_closed(float(t), coh, params).value
        ref = coh.alpha * np.exp(
            -1j * params.w1 * t
            - 2j * abs(coh.alpha) ** 2 / xi * math.sin(xi * params.w2 * t)
            * np.exp(-1j * xi * params.w2 * t))
        dev = max(dev, abs(val - ref))
    report.checks.append(CheckResult("no_squeeze_reduction", float(dev), 1e-12))

    state = states.SqueezedState.from_values(1.0, -math.log(0.2) / (2.0 * xi), math.pi, xi)
    dev = 0.0
    for t in np.linspace(0.1, math.pi / (xi * params.w2), 11):
        f = expectations.gaussian_factors(float(t), state, params)
        dev = max(dev, abs(f.sqrtG3**2 - f.G**3))
    report.checks.append(CheckResult("branch_self_consistency", float(dev), 1e-12))
    return report


SUITES = {
    "algebra": validate_algebra,
    "moyal": validate_moyal,
    "states": validate_states,
    "expectation": validate_expectation,
}


def run_suites(names, params: kerr.KerrParams | None = None) -> list[SuiteReport]:
    return [SUITES[name](params) for name in names]
