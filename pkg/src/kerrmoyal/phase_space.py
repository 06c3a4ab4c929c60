"""Weyl-symbol calculus on the plane for a single bosonic mode.

Conventions used throughout the package:

* phase-space point ``x = (q, p)``, complex coordinate ``z = q + i p``,
  ``a(x) = z / sqrt(2)`` is the symbol of the annihilation operator;
* the deformation parameter ``xi > 0`` plays the role of hbar,
  ``[q, p]_star = i xi``;
* a symbol of the Gaussian-times-polynomial class is stored as
  ``poly(z, z*) * exp(x.A x + b.x + c)`` with the quadratic form in real
  coordinates and the polynomial in ``(z, z*)`` coordinates.

Two star-product engines are provided: a terminating derivative expansion
(for a polynomial left factor) and the closed-form evaluation of the
Berezin double integral via complex Gaussian moments with Fresnel
regularization.  They are deliberately independent of one another so each
can serve as an oracle for the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateQuadraticForm,
    DegreeCapExceeded,
    DivergentIntegral,
    NotSymplectic,
)

# Poisson matrix J: rows (0, 1), (-1, 0).  J^2 = -I, J^T = -J.
POISSON_J = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Default cap on the polynomial degree of a single symbol factor.
DEGREE_CAP = 64

_EIG_TOL = 1e-12


def wedge(x1, x2) -> float:
    """Symplectic wedge x1 ^ x2 = x1 . J x2."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return float(x1 @ POISSON_J @ x2)


@dataclass(frozen=True)
class PhasePoint:
    """A point of dimensionless phase space with complex-coordinate views."""

    q: float
    p: float

    @classmethod
    def from_z(cls, z: complex) -> "PhasePoint":
        return cls(float(np.real(z)), float(np.imag(z)))

    @property
    def z(self) -> complex:
        return self.q + 1j * self.p

    @property
    def zbar(self) -> complex:
        return self.q - 1j * self.p

    @property
    def x2(self) -> float:
        return self.q * self.q + self.p * self.p

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p], dtype=float)


class ZPoly:
    """Polynomial in (z, z*) with complex coefficients, stored sparsely.

    The coefficient table maps ``(k, l) -> c`` meaning ``sum c z^k (z*)^l``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs: dict[tuple[int, int], complex] = {}
        if coeffs:
            for key, val in coeffs.items():
                if val != 0:
                    self.coeffs[key] = complex(val)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "ZPoly":
        return cls()

    @classmethod
    def constant(cls, c: complex) -> "ZPoly":
        return cls({(0, 0): c})

    @classmethod
    def one(cls) -> "ZPoly":
        return cls.constant(1.0)

    @classmethod
    def monomial(cls, k: int, l: int, c: complex = 1.0) -> "ZPoly":
        return cls({(k, l): c})

    @classmethod
    def linear_qp(cls, c0: complex, cq: complex, cp: complex) -> "ZPoly":
        """c0 + cq*q + cp*p expressed in (z, z*)."""
        return cls({(0, 0): c0,
                    (1, 0): 0.5 * (cq - 1j * cp),
                    (0, 1): 0.5 * (cq + 1j * cp)})

    # -- algebra ------------------------------------------------------
    def __add__(self, other: "ZPoly") -> "ZPoly":
        out = dict(self.coeffs)
        for key, val in other.coeffs.items():
            out[key] = out.get(key, 0.0) + val
        return ZPoly(out)

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        return self + other.scale(-1.0)

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        out: dict[tuple[int, int], complex] = {}
        for (k1, l1), c1 in self.coeffs.items():
            for (k2, l2), c2 in other.coeffs.items():
                key = (k1 + k2, l1 + l2)
                out[key] = out.get(key, 0.0) + c1 * c2
        return ZPoly(out)

    def scale(self, c: complex) -> "ZPoly":
        return ZPoly({key: c * val for key, val in self.coeffs.items()})

    def conjugate(self) -> "ZPoly":
        return ZPoly({(l, k): np.conj(c) for (k, l), c in self.coeffs.items()})

    def dz(self) -> "ZPoly":
        return ZPoly({(k - 1, l): k * c for (k, l), c in self.coeffs.items() if k > 0})

    def dzbar(self) -> "ZPoly":
        return ZPoly({(k, l - 1): l * c for (k, l), c in self.coeffs.items() if l > 0})

    @property
    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(k + l for k, l in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def substitute_linear(self, u: complex, v: complex, ub: complex, vb: complex) -> "ZPoly":
        """Pullback under z -> u z + v z*, z* -> vb z + ub z*."""
        zsub = ZPoly({(1, 0): u, (0, 1): v})
        zbsub = ZPoly({(1, 0): vb, (0, 1): ub})
        out = ZPoly.zero()
        for (k, l), c in self.coeffs.items():
            term = ZPoly.constant(c)
            for _ in range(k):
                term = term * zsub
            for _ in range(l):
                term = term * zbsub
            out = out + term
        return out

    def __call__(self, z: complex, zbar: complex | None = None) -> complex:
        if zbar is None:
            zbar = np.conj(z)
        total = 0.0 + 0.0j
        for (k, l), c in self.coeffs.items():
            total += c * z**k * zbar**l
        return total

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        terms = ", ".join(f"z^{k} zb^{l}: {c:.6g}" for (k, l), c in sorted(self.coeffs.items()))
        return f"ZPoly({terms})"


@dataclass(frozen=True)
class GaussPolySymbol:
    """Symbol of the form poly(z, z*) * exp(x.A x + b.x + c).

    ``quad`` is a complex symmetric 2x2 matrix in real (q, p) coordinates,
    ``lin`` a complex 2-vector, ``const`` a complex scalar and ``poly`` the
    finite coefficient table of the polynomial prefactor.
    """

    quad: np.ndarray
    lin: np.ndarray
    const: complex
    poly: ZPoly
    degree_cap: int = field(default=DEGREE_CAP, compare=False)

    def __post_init__(self):
        quad = np.array(self.quad, dtype=complex)
        lin = np.array(self.lin, dtype=complex)
        if quad.shape != (2, 2):
            raise ValueError("quadratic form must be 2x2")
        if not np.allclose(quad, quad.T, atol=1e-12):
            raise ValueError("quadratic form must be symmetric")
        if self.poly.degree > self.degree_cap:
            raise DegreeCapExceeded(
                f"polynomial degree {self.poly.degree} exceeds cap {self.degree_cap}")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "const", complex(self.const))

    # -- constructors -------------------------------------------------
    @classmethod
    def polynomial(cls, poly: ZPoly) -> "GaussPolySymbol":
        return cls(np.zeros((2, 2)), np.zeros(2), 0.0, poly)

    @classmethod
    def constant(cls, c: complex) -> "GaussPolySymbol":
        return cls.polynomial(ZPoly.constant(c))

    @classmethod
    def gaussian(cls, quad, lin=None, const: complex = 0.0,
                 poly: ZPoly | None = None) -> "GaussPolySymbol":
        lin = np.zeros(2) if lin is None else lin
        poly = ZPoly.one() if poly is None else poly
        return cls(quad, lin, const, poly)

    # -- structure ----------------------------------------------------
    @property
    def is_polynomial(self) -> bool:
        return (not np.any(self.quad) and not np.any(self.lin)
                and self.const == 0.0)

    @property
    def degree(self) -> int:
        return self.poly.degree

    def _zform(self):
        """Quadratic exponent in (z, z*) coordinates: (Azz, Abb, Azb, bz, bb)."""
        a11, a12, a22 = self.quad[0, 0], self.quad[0, 1], self.quad[1, 1]
        azz = (a11 - a22 - 2j * a12) / 4.0
        abb = (a11 - a22 + 2j * a12) / 4.0
        azb = (a11 + a22) / 2.0
        bz = (self.lin[0] - 1j * self.lin[1]) / 2.0
        bb = (self.lin[0] + 1j * self.lin[1]) / 2.0
        return azz, abb, azb, bz, bb

    # -- calculus (closed under the class) -----------------------------
    def dz(self) -> "GaussPolySymbol":
        azz, abb, azb, bz, _ = self._zform()
        de = ZPoly({(1, 0): 2.0 * azz, (0, 1): azb, (0, 0): bz})
        return GaussPolySymbol(self.quad, self.lin, self.const,
                               self.poly.dz() + self.poly * de)

    def dzbar(self) -> "GaussPolySymbol":
        azz, abb, azb, _, bb = self._zform()
        de = ZPoly({(0, 1): 2.0 * abb, (1, 0): azb, (0, 0): bb})
        return GaussPolySymbol(self.quad, self.lin, self.const,
                               self.poly.dzbar() + self.poly * de)

    def dq(self) -> "GaussPolySymbol":
        out = self.dz()
        out2 = self.dzbar()
        return GaussPolySymbol(self.quad, self.lin, self.const, out.poly + out2.poly)

    def dp(self) -> "GaussPolySymbol":
        out = self.dz()
        out2 = self.dzbar()
        return GaussPolySymbol(self.quad, self.lin, self.const,
                               out.poly.scale(1j) + out2.poly.scale(-1j))

    def conjugate(self) -> "GaussPolySymbol":
        return GaussPolySymbol(np.conj(self.quad), np.conj(self.lin),
                               np.conj(self.const), self.poly.conjugate())

    def scale(self, c: complex) -> "GaussPolySymbol":
        return GaussPolySymbol(self.quad, self.lin, self.const, self.poly.scale(c))

    def pullback(self, s_matrix: np.ndarray) -> "GaussPolySymbol":
        """Return x -> f(S x) for a real 2x2 matrix S."""
        s = np.asarray(s_matrix, dtype=float)
        quad = s.T @ self.quad @ s
        lin = s.T @ self.lin
        u = (s[0, 0] + s[1, 1] + 1j * (s[1, 0] - s[0, 1])) / 2.0
        v = (s[0, 0] - s[1, 1] + 1j * (s[1, 0] + s[0, 1])) / 2.0
        poly = self.poly.substitute_linear(u, v, np.conj(u), np.conj(v))
        return GaussPolySymbol(quad, lin, self.const, poly)

    def __call__(self, x: PhasePoint) -> complex:
        xv = x.as_array()
        expo = xv @ self.quad @ xv + self.lin @ xv + self.const
        return self.poly(x.z, x.zbar) * np.exp(expo)

    def __add__(self, other: "GaussPolySymbol") -> "GaussPolySymbol":
        if (np.allclose(self.quad, other.quad, atol=1e-14)
                and np.allclose(self.lin, other.lin, atol=1e-14)
                and abs(self.const - other.const) < 1e-14):
            return GaussPolySymbol(self.quad, self.lin, self.const,
                                   self.poly + other.poly)
        raise ValueError("can only add symbols sharing one Gaussian factor")

    def __sub__(self, other: "GaussPolySymbol") -> "GaussPolySymbol":
        return self + other.scale(-1.0)


# Symbols of a and a^dagger: a(x) = z/sqrt(2).
def annihilation_symbol() -> GaussPolySymbol:
    return GaussPolySymbol.polynomial(ZPoly.monomial(1, 0, 1.0 / math.sqrt(2.0)))


def creation_symbol() -> GaussPolySymbol:
    return GaussPolySymbol.polynomial(ZPoly.monomial(0, 1, 1.0 / math.sqrt(2.0)))


# ---------------------------------------------------------------------------
# Fresnel-regularized complex Gaussian integrals
# ---------------------------------------------------------------------------

def _fresnel_sqrt_det(mat: np.ndarray, error_cls=DegenerateQuadraticForm):
    """sqrt(det(-M)) continued from the damped form det(eps*I - M), eps -> 0+.

    Adding -eps|u|^2 to the exponent and following the principal square root
    from large eps down to zero amounts to taking the principal square root
    of -lambda for every eigenvalue lambda of M; the path only degenerates
    when an eigenvalue sits on the non-negative real axis.
    """
    lam = np.linalg.eigvals(mat)
    scale = max(1.0, float(np.max(np.abs(lam))))
    for ev in lam:
        if abs(ev.imag) <= _EIG_TOL * scale and ev.real >= -_EIG_TOL * scale:
            raise error_cls(
                f"quadratic form has eigenvalue {ev} on the non-negative real axis")
    return complex(np.prod(np.sqrt(-lam)))


def _gaussian_moment(counts: tuple[int, ...], means: list[ZPoly],
                     cov: np.ndarray, memo: dict) -> ZPoly:
    """E[prod_i l_i^counts_i] for jointly Gaussian linear forms l_i.

    ``means[i]`` may carry a symbolic (z, z*) dependence; covariances are
    scalars.  Standard Isserlis recursion with memoization on the count
    multi-index.
    """
    if all(c == 0 for c in counts):
        return ZPoly.one()
    if counts in memo:
        return memo[counts]
    i = next(idx for idx, c in enumerate(counts) if c > 0)
    reduced = list(counts)
    reduced[i] -= 1
    reduced_t = tuple(reduced)
    total = means[i] * _gaussian_moment(reduced_t, means, cov, memo)
    for j, cnt in enumerate(reduced_t):
        if cnt == 0 or cov[i, j] == 0:
            continue
        further = list(reduced_t)
        further[j] -= 1
        total = total + _gaussian_moment(tuple(further), means, cov, memo).scale(
            cov[i, j] * cnt)
    memo[counts] = total
    return total


# Linear forms z1, z1*, z2, z2* on R^4 = (x1, x2).
_FORMS_4D = np.array([
    [1.0, 1j, 0.0, 0.0],
    [1.0, -1j, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1j],
    [0.0, 0.0, 1.0, -1j],
])

_FORMS_2D = np.array([
    [1.0, 1j],
    [1.0, -1j],
])


def star_gaussian(f: GaussPolySymbol, g: GaussPolySymbol, xi: float) -> GaussPolySymbol:
    """Star product via the closed-form Berezin double phase-space integral.

    The double integral over (x1, x2) has the pure-phase kernel
    exp((2i/xi)(x1^x2 + x2^x + x^x1)); it is evaluated exactly by Wick
    expansion of the polynomial prefactor around the stationary point,
    with the Fresnel branch fixed by the eps -> 0+ damping.
    """
    if xi <= 0:
        raise ValueError("xi must be positive")
    j = POISSON_J
    q_mat = np.zeros((4, 4), dtype=complex)
    q_mat[:2, :2] = f.quad
    q_mat[2:, 2:] = g.quad
    q_mat[:2, 2:] = (1j / xi) * j
    q_mat[2:, :2] = -(1j / xi) * j

    l0 = np.concatenate([f.lin, g.lin]).astype(complex)
    w_mat = np.vstack([-(2j / xi) * j, (2j / xi) * j]).astype(complex)

    sqrt_det = _fresnel_sqrt_det(q_mat)
    q_inv = np.linalg.inv(q_mat)

    quad_out = -0.25 * (w_mat.T @ q_inv @ w_mat)
    quad_out = 0.5 * (quad_out + quad_out.T)
    lin_out = -0.5 * (w_mat.T @ q_inv @ l0)
    const_out = f.const + g.const - 0.25 * (l0 @ q_inv @ l0)

    mu0 = -0.5 * (q_inv @ l0)
    mu_x = -0.5 * (q_inv @ w_mat)      # 4x2: x-dependent part of the mean
    cov4 = -0.5 * q_inv

    means = []
    for lam in _FORMS_4D:
        c0 = lam @ mu0
        row = lam @ mu_x               # coefficients of (q, p)
        means.append(ZPoly.linear_qp(c0, row[0], row[1]))
    cov_forms = _FORMS_4D @ cov4 @ _FORMS_4D.T

    pref = 1.0 / (xi * xi * sqrt_det)
    memo: dict = {}
    poly_out = ZPoly.zero()
    for (k1, l1), c1 in f.poly.coeffs.items():
        for (k2, l2), c2 in g.poly.coeffs.items():
            mom = _gaussian_moment((k1, l1, k2, l2), means, cov_forms, memo)
            poly_out = poly_out + mom.scale(c1 * c2)
    return GaussPolySymbol(quad_out, lin_out, const_out, poly_out.scale(pref))


def star_differential(f: GaussPolySymbol, g: GaussPolySymbol, xi: float) -> GaussPolySymbol:
    """Star product via the terminating derivative expansion.

    Requires a purely polynomial left factor; the series then truncates at
    order deg(f).  In complex coordinates the bidifferential reads
    (i xi/2) d1.J d2 = xi (dz1 dz2* - dz1* dz2).
    """
    if xi <= 0:
        raise ValueError("xi must be positive")
    if not f.is_polynomial:
        raise ValueError("left factor must be purely polynomial; use star_gaussian")
    max_order = f.poly.degree
    total = ZPoly.zero()
    for n in range(max_order + 1):
        coeff_n = xi**n / math.factorial(n)
        for k in range(n + 1):
            f_der = f.poly
            for _ in range(k):
                f_der = f_der.dz()
            for _ in range(n - k):
                f_der = f_der.dzbar()
            if f_der.is_zero():
                continue
            g_der = g
            for _ in range(k):
                g_der = g_der.dzbar()
            for _ in range(n - k):
                g_der = g_der.dz()
            sign = (-1.0) ** (n - k)
            term = f_der * g_der.poly
            total = total + term.scale(coeff_n * math.comb(n, k) * sign)
    return GaussPolySymbol(g.quad, g.lin, g.const, total)


def star_product(f: GaussPolySymbol, g: GaussPolySymbol, xi: float) -> GaussPolySymbol:
    """Dispatch to the derivative engine when possible, else Berezin."""
    if f.is_polynomial:
        return star_differential(f, g, xi)
    return star_gaussian(f, g, xi)


def moyal_bracket(f: GaussPolySymbol, g: GaussPolySymbol, xi: float) -> GaussPolySymbol:
    """{f, g}_M = (f*g - g*f)/(i xi)."""
    fg = star_product(f, g, xi)
    gf = star_product(g, f, xi)
    return (fg - gf).scale(1.0 / (1j * xi))


def poisson_bracket(f: GaussPolySymbol, g: GaussPolySymbol) -> GaussPolySymbol:
    """{f, g} = dq f dp g - dp f dq g (result shares the Gaussian factors)."""
    fq, fp = f.dq(), f.dp()
    gq, gp = g.dq(), g.dp()
    if not (f.is_polynomial and g.is_polynomial):
        raise ValueError("poisson_bracket is provided for polynomial symbols")
    return GaussPolySymbol.polynomial(fq.poly * gp.poly - fp.poly * gq.poly)


# ---------------------------------------------------------------------------
# Trace pairing
# ---------------------------------------------------------------------------

def gauss_poly_integral(sym: GaussPolySymbol) -> complex:
    """Closed form of int poly(z, z*) exp(x.A x + b.x + c) d^2x (Fresnel branch)."""
    sqrt_det = _fresnel_sqrt_det(sym.quad, error_cls=DivergentIntegral)
    a_inv = np.linalg.inv(sym.quad)
    b = sym.lin
    mu = -0.5 * (a_inv @ b)
    cov = -0.5 * a_inv
    means = [ZPoly.constant(lam @ mu) for lam in _FORMS_2D]
    cov_forms = _FORMS_2D @ cov @ _FORMS_2D.T
    memo: dict = {}
    total = 0.0 + 0.0j
    for (k, l), c in sym.poly.coeffs.items():
        mom = _gaussian_moment((k, l), means, cov_forms, memo)
        total += c * mom.coeffs.get((0, 0), 0.0)
    return total * (np.pi / sqrt_det) * np.exp(sym.const - 0.25 * (b @ a_inv @ b))


def phase_space_inner_product(f: GaussPolySymbol, g: GaussPolySymbol, xi: float) -> complex:
    """int f(x) g(x) d^2x = (2 pi xi) Tr(f_hat g_hat) for trace-class pairs."""
    combined = GaussPolySymbol(f.quad + g.quad, f.lin + g.lin,
                               f.const + g.const, f.poly * g.poly)
    return gauss_poly_integral(combined)


# ---------------------------------------------------------------------------
# Symplectic covariance
# ---------------------------------------------------------------------------

def is_symplectic(s_matrix: np.ndarray, tol: float = 1e-12) -> bool:
    s = np.asarray(s_matrix, dtype=float)
    return bool(np.max(np.abs(s @ POISSON_J @ s.T - POISSON_J)) <= tol)


def symplectic_covariance_check(f: GaussPolySymbol, s_matrix: np.ndarray) -> GaussPolySymbol:
    """Return the pullback x -> f(S x) after validating S J S^T = J."""
    if not is_symplectic(s_matrix):
        raise NotSymplectic("matrix fails S J S^T = J within 1e-12")
    return f.pullback(s_matrix)


# ---------------------------------------------------------------------------
# Quantizer
# ---------------------------------------------------------------------------

def quantizer_kernel(x: PhasePoint, qprime: float, qdprime: float, xi: float) -> complex:
    """Smooth factor of <q'|Delta(x)|q''> = (1/pi xi) exp(i p (q'-q'')/xi) delta(2q-q'-q'').

    The delta factor is never materialized; callers wanting the action on a
    wave function should use :func:`quantizer_apply`.
    """
    return np.exp(1j * x.p * (qprime - qdprime) / xi) / (np.pi * xi)


def quantizer_apply(x: PhasePoint, psi, qprime, xi: float):
    """[Delta(q,p) psi](q') = (1/pi xi) exp(2i p (q'-q)/xi) psi(2q - q')."""
    qprime = np.asarray(qprime, dtype=float)
    return np.exp(2j * x.p * (qprime - x.q) / xi) * psi(2.0 * x.q - qprime) / (np.pi * xi)
