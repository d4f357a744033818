"""Self-adjoint extension data for the proper-time position operators.

The time component (radial chart) has deficiency indices (1,1) but its
energy-sign projections have (1,0)/(0,1), so only the full two-component
operator admits extensions; the third spatial component (nu chart) has
indices (2,2) with (1,1) per energy sign, giving genuine single-particle
extensions whose spectrum is the lattice

    z_phi^n = (2 / m pi) ( arctan[ tan(phi/2) tanh(pi/2) ] + n pi ),

with exact spacing 2/m (one eigenvalue pair per two Compton
wavelengths).  This module provides the analytic eigenfunctions, their
closed-form inner products, the deficiency-space solutions, the CSCO
eigenfunctions on the full hyperbolic chart, and an operational
classifier that places a sampled state in the closure, in an extension
domain, or only in the adjoint domain, from its endpoint decay.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import composite_gauss_legendre, lambda_to_Lambda
from .errors import DomainError, InsufficientResolution
from .specfun import conical_p_batch, csinc, gamma_abs

__all__ = [
    "ExtensionParamQ0",
    "ExtensionParamQ3",
    "EigenstateQ0",
    "EigenstateQ3",
    "DeficiencySolution",
    "DomainClass",
    "q3_eigenvalue",
    "q3_eigenvalue_z0_display",
    "q3_eigenfunction",
    "q0_eigenfunction",
    "q3_inner_product_closed",
    "q3_inner_product_quad",
    "deficiency_solutions",
    "w_radial",
    "w_normalization",
    "csco_eigenfunction_q3",
    "classify_domain",
    "endpoint_nodes",
]


def _check_angle(varphi, name="varphi"):
    if not (-math.pi < varphi <= math.pi):
        raise DomainError(f"{name} must lie in (-pi, pi], got {varphi}")


@dataclass(frozen=True)
class ExtensionParamQ0:
    """Parameter of the one-parameter extension family of the time
    operator (mixes the two energy signs)."""

    varphi: float

    def __post_init__(self):
        _check_angle(self.varphi)


@dataclass(frozen=True)
class ExtensionParamQ3:
    """U(2) extension parameters for the third position component.

    The single-particle subfamily (no energy-sign mixing) has
    varphi2 = varphi4 = 0; `single_particle` builds it from one angle.
    """

    varphi1: float
    varphi2: float = 0.0
    varphi3: float = 0.0
    varphi4: float = 0.0

    def __post_init__(self):
        for k, v in enumerate(
            (self.varphi1, self.varphi2, self.varphi3, self.varphi4), start=1
        ):
            _check_angle(v, f"varphi{k}")

    @classmethod
    def single_particle(cls, varphi):
        return cls(varphi1=varphi)

    @property
    def is_single_particle(self):
        return self.varphi2 == 0.0 and self.varphi4 == 0.0

    def unitary(self):
        """The 2x2 unitary deficiency-space map."""
        p1, p2, p3, p4 = self.varphi1, self.varphi2, self.varphi3, self.varphi4
        c, s = math.cos(p4), math.sin(p4)
        return cmath.exp(1j * p1) * np.array(
            [
                [cmath.exp(1j * p2) * c, cmath.exp(1j * p3) * s],
                [-cmath.exp(-1j * p3) * s, cmath.exp(-1j * p2) * c],
            ]
        )


@dataclass(frozen=True)
class EigenstateQ0:
    """Labels of a generalized time eigenfunction: continuous outcome t,
    angular labels, extension angle, proper time."""

    t: float
    l: int = 0
    m_z: int = 0
    varphi: float = 0.0
    tau: float = 0.0


@dataclass(frozen=True)
class EigenstateQ3:
    """Labels of a CSCO eigenfunction on the hyperbolic chart."""

    n: int
    lam: float = -1.25
    m_z: int = 0
    xi: int = 1
    varphi: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if self.xi not in (1, -1):
            raise DomainError("xi must be +-1")
        if self.lam > -0.25:
            raise DomainError("lam must satisfy lam <= -1/4")

    def z(self, mass=1.0):
        return q3_eigenvalue(self.n, self.varphi, mass)


_TANH_HALF_PI = math.tanh(math.pi / 2)


def q3_eigenvalue(n, varphi, mass=1.0):
    """Eigenvalue z_phi^n of the single-particle extension.

    The arctan argument (1-cos phi)/sin phi is evaluated as tan(phi/2),
    removing the 0/0 at phi=0 and pinning phi=pi to the +pi/2 branch so
    the lattice is continuous across extension families.
    """
    _check_angle(varphi)
    if varphi == math.pi:
        term = math.pi / 2
    else:
        term = math.atan(math.tan(varphi / 2) * _TANH_HALF_PI)
    # grouped as (offset + n) * 2/m so the float lattice spacing is
    # exactly 2/m (term/pi lies in (-1/2, 1/2], so offset + n is exact)
    return (term / math.pi + n) * (2.0 / mass)


def q3_eigenvalue_z0_display(varphi, mass=1.0):
    """n=0 eigenvalue from the alternative printed form
    arctan[sin(phi)/(1+cos(phi)) tanh(pi/2)], kept as a cross-check."""
    _check_angle(varphi)
    denom = 1.0 + math.cos(varphi)
    if denom == 0.0:
        # the ratio blows up with the sign of sin(varphi) at |phi| -> pi
        term = math.copysign(math.pi / 2, math.sin(varphi))
    else:
        term = math.atan(math.sin(varphi) / denom * _TANH_HALF_PI)
    return (2.0 / (mass * math.pi)) * term


def q3_eigenfunction(state: EigenstateQ3, nu, mass=1.0):
    """Single-sign eigenfunction on the nu chart, shape (..., 2).

    The modulus is (sec nu)^{-3/2}/sqrt(pi) for every nu; all other
    factors are unimodular phases.
    """
    nu = np.asarray(nu, dtype=float)
    z = state.z(mass)
    sec = 1.0 / np.cos(nu)
    comp = (
        np.exp(1j * mass * state.tau * np.log(sec))
        * np.exp(-1j * mass * state.xi * z * nu)
        / (math.sqrt(math.pi) * sec**1.5)
    )
    out = np.zeros(nu.shape + (2,), dtype=complex)
    out[..., 0 if state.xi == 1 else 1] = comp
    return out


def q0_eigenfunction(state: EigenstateQ0, r, mass=1.0):
    """Radial part of the generalized time eigenfunction, shape (..., 2).

    The two components carry opposite outcome phases; the extension
    angle enters only the relative phase.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")
    E = np.sqrt(r**2 + mass**2)
    base = math.sqrt(mass / (2 * math.pi)) * r**-1.5 * (r / mass) ** (
        1j * mass * state.tau
    )
    ratio = r / (E + mass)
    out = np.empty(r.shape + (2,), dtype=complex)
    out[..., 0] = base * ratio ** (-1j * mass * state.t)
    out[..., 1] = base * cmath.exp(1j * state.varphi) * ratio ** (1j * mass * state.t)
    return out


def q3_inner_product_closed(z_bra, z_ket, xi_bra, xi_ket,
                            n_bra=None, n_ket=None, mass=1.0):
    """Closed-form nu-chart inner product of two single-sign
    eigenfunction solutions; normalization constants default to the
    continuum value pi^{-1/2}."""
    if xi_bra != xi_ket:
        return 0.0 + 0.0j
    if n_bra is None:
        n_bra = 1.0 / math.sqrt(math.pi)
    if n_ket is None:
        n_ket = 1.0 / math.sqrt(math.pi)
    w = mass * (z_bra - z_ket) * math.pi / 2.0
    return np.conj(n_bra) * n_ket * math.pi * csinc(w)


def q3_inner_product_quad(z_bra, z_ket, xi_bra, xi_ket, tau=0.0, mass=1.0,
                          n_panels=24, order=40):
    """The same inner product by direct quadrature over the nu chart
    (the measure cancels the eigenfunction decay exactly, leaving a pure
    phase integrand)."""
    if xi_bra != xi_ket:
        return 0.0 + 0.0j
    nodes, weights = composite_gauss_legendre(
        -math.pi / 2, math.pi / 2, n_panels, order
    )
    phase = np.exp(1j * mass * xi_bra * (z_bra - z_ket) * nodes)
    return np.sum(weights * phase) / math.pi


@dataclass(frozen=True)
class DeficiencySolution:
    eigenvalue: complex
    xi: int                       # energy-sign occupancy
    fn: Callable                  # coordinate -> (..., 2) complex
    label: str


def deficiency_solutions(which, tau=0.0, mass=1.0):
    """Square-integrable adjoint eigenfunctions at eigenvalue +-i/m.

    For the time operator there are two (one per energy sign, occupying
    opposite eigenvalues: indices (1,1) overall but (1,0)/(0,1) per
    sign).  For the third position component there are four, two per
    energy sign, indices (2,2).  All are unit-normalized.
    """
    if which == "Q0":
        def make(sign):
            comp = 0 if sign > 0 else 1

            def fn(r, comp=comp):
                r = np.asarray(r, dtype=float)
                E = np.sqrt(r**2 + mass**2)
                val = (
                    math.sqrt(2.0 * mass)
                    * np.exp(1j * mass * tau * np.log(r / mass))
                    / (np.sqrt(r) * (E + mass))
                )
                out = np.zeros(r.shape + (2,), dtype=complex)
                out[..., comp] = val
                return out

            return fn

        return [
            DeficiencySolution(+1j / mass, +1, make(+1), "R^{+i/m}"),
            DeficiencySolution(-1j / mass, -1, make(-1), "R^{-i/m}"),
        ]
    if which == "Q3":
        sols = []
        for xi in (+1, -1):
            for sign in (+1, -1):
                # e^{+nu} pairs with +i/m on the positive sign and with
                # -i/m on the negative sign
                expo = sign if xi == 1 else -sign

                def fn(nu, expo=expo, xi=xi):
                    nu = np.asarray(nu, dtype=float)
                    sec = 1.0 / np.cos(nu)
                    val = (
                        sec ** (1j * mass * tau)
                        / sec**1.5
                        * np.exp(expo * nu)
                        / math.sqrt(math.sinh(math.pi))
                    )
                    out = np.zeros(nu.shape + (2,), dtype=complex)
                    out[..., 0 if xi == 1 else 1] = val
                    return out

                sols.append(
                    DeficiencySolution(
                        sign * 1j / mass, xi, fn,
                        f"V^{{{'+' if sign > 0 else '-'}i/m}}_({'+' if xi > 0 else '-'})",
                    )
                )
        return sols
    raise DomainError(f"which must be 'Q0' or 'Q3', got {which!r}")


# ---------------------------------------------------------------------------
# CSCO eigenfunctions on the full hyperbolic chart


def w_normalization(m_z, lam, mass=1.0):
    Lam = lambda_to_Lambda(lam)
    return (
        gamma_abs(m_z, Lam)
        * math.sqrt(math.sinh(math.pi * Lam) / (2 * math.pi))
        / mass**1.5
    )


def w_radial(m_z, lam, omega, mass=1.0):
    """Normalized hyperbolic-radial factor: conical function times the
    delta-normalization constant for the measure m^3 sinh(omega) domega."""
    Lam = lambda_to_Lambda(lam)
    x = math.cosh(omega)
    val = conical_p_batch(m_z, np.array([Lam]), x)[0]
    return w_normalization(m_z, lam, mass) * val


def csco_eigenfunction_q3(state: EigenstateQ3, p, mass=1.0):
    """Full joint eigenfunction V * Phi * W at a hyperbolic momentum
    point, shape (2,)."""
    V = q3_eigenfunction(state, p.nu_pi, mass)
    phi_fac = cmath.exp(1j * state.m_z * p.phi_pi) / math.sqrt(2 * math.pi)
    W = w_radial(state.m_z, state.lam, p.omega_pi, mass)
    return V * phi_fac * W


# ---------------------------------------------------------------------------
# Domain classification from endpoint decay


@dataclass
class DomainClass:
    """Outcome of the operational domain classification.

    category is one of "closure", "extension", "adjoint_only",
    "not_in_adjoint"; decay_exponent is the fitted endpoint exponent of
    the state against the natural boundary scale ((sec nu)^{-s} or
    r^{-s}).
    """

    category: str
    decay_exponent: float
    varphi: Optional[float] = None
    in_adjoint: bool = True
    details: dict = None

    @property
    def is_closure(self):
        return self.category == "closure"

    def in_extension(self, varphi=None):
        """Closure states satisfy every extension boundary condition."""
        if self.category == "closure":
            return True
        if self.category != "extension":
            return False
        if varphi is None or self.varphi is None:
            return True
        return abs((self.varphi - varphi + math.pi) % (2 * math.pi) - math.pi) < 1e-6


def endpoint_nodes(which, mass=1.0, eps_hi=1e-1, eps_lo=1e-6, n=60):
    """Log-spaced sampling ladder approaching the chart boundary.

    Q3: distances eps to nu = +pi/2 (mirror for the other endpoint);
    Q0: radii r = m/eps growing without bound.
    """
    eps = np.geomspace(eps_hi, eps_lo, n)
    if which == "Q3":
        return math.pi / 2 - eps
    if which == "Q0":
        return mass / eps
    raise DomainError(f"which must be 'Q0' or 'Q3', got {which!r}")


def _fit_exponent(scale, vals):
    """Least-squares slope of log|vals| against log(scale) over the last
    decade of nodes; returns (exponent, residual).  A tail that is
    identically zero counts as infinitely fast decay."""
    if np.max(np.abs(vals[-8:])) == 0.0:
        return math.inf, 0.0
    mask = np.abs(vals) > 0
    if mask.sum() < 8:
        raise InsufficientResolution("too few nonzero endpoint samples")
    ls = np.log(scale[mask])
    lv = np.log(np.abs(vals[mask]))
    last = ls >= ls.max() - math.log(10.0)
    if last.sum() < 8:
        raise InsufficientResolution("fewer than 8 nodes in the last decade")
    A = np.vstack([ls[last], np.ones(last.sum())]).T
    coef, res, *_ = np.linalg.lstsq(A, lv[last], rcond=None)
    pred = A @ coef
    resid = float(np.sqrt(np.mean((lv[last] - pred) ** 2)))
    if resid > 0.5:
        raise InsufficientResolution(
            f"endpoint fit rms residual {resid:.2f} too large for a power law"
        )
    return -float(coef[0]), resid


_EXP_TOL = 0.1  # band around 3/2 separating boundary decay from closure


def classify_domain(psi, which, varphi=None, tau=0.0, mass=1.0,
                    eps_hi=1e-1, eps_lo=1e-6, n=60):
    """Classify a state against the operator domain hierarchy.

    ``psi`` is a callable returning the two components at chart
    coordinates (nu for Q3, r for Q0).  The state is sampled on a
    log-spaced ladder toward the chart boundary; the fitted decay
    exponent and the boundary combinations decide the category.
    """
    if not callable(psi):
        fn = getattr(psi, "as_callable", None)
        if fn is None:
            raise DomainError("psi must be callable or expose as_callable()")
        psi = fn()

    if which == "Q3":
        nodes = endpoint_nodes("Q3", mass, eps_hi, eps_lo, n)
        scale = 1.0 / np.cos(nodes)                  # sec(nu) -> inf
        up = np.asarray(psi(nodes))                  # (n, 2)
        dn = np.asarray(psi(-nodes))
        comp_vals = [up[:, 0], up[:, 1], dn[:, 0], dn[:, 1]]
    elif which == "Q0":
        nodes = endpoint_nodes("Q0", mass, eps_hi, eps_lo, n)
        scale = nodes / mass                         # r -> inf
        up = np.asarray(psi(nodes))
        comp_vals = [up[:, 0], up[:, 1]]
    else:
        raise DomainError(f"which must be 'Q0' or 'Q3', got {which!r}")

    ref = max(np.max(np.abs(v) * scale**1.5) for v in comp_vals)
    if ref == 0.0:
        # compactly supported inside the chart: strongest possible decay
        return DomainClass("closure", math.inf, None, True,
                           {"exponents": [math.inf]})

    exponents = []
    for v in comp_vals:
        # components negligible at the boundary scale do not constrain
        if np.max(np.abs(v) * scale**1.5) < 1e-13 * ref:
            continue
        s, _ = _fit_exponent(scale, v)
        exponents.append(s)
    s_min = min(exponents)

    in_l2 = s_min > 1.0 + _EXP_TOL
    details = {"exponents": exponents}

    if not in_l2:
        return DomainClass("not_in_adjoint", s_min, None, False, details)
    if s_min >= 1.5 + _EXP_TOL:
        return DomainClass("closure", s_min, None, True, details)
    if abs(s_min - 1.5) <= _EXP_TOL:
        # boundary-scale decay: membership decided by the extension
        # boundary combination
        if which == "Q3":
            got = _q3_extension_angle(up, dn, scale, varphi)
        else:
            got = _q0_extension_angle(up, scale, varphi)
        if got is not None:
            details["varphi"] = got
            return DomainClass("extension", s_min, got, True, details)
        return DomainClass("adjoint_only", s_min, None, True, details)
    return DomainClass("adjoint_only", s_min, None, True, details)


def _vanishes_faster(scale, combo, ref):
    """True when |combo| sec^{3/2}-scaled tends to zero along the ladder."""
    b = np.abs(combo) * scale**1.5
    if np.max(b) < 1e-8 * ref:
        return True
    head = np.mean(b[:8])
    tail = np.mean(b[-8:])
    return tail < 0.02 * head if head > 0 else True


def _q3_extension_angle(up, dn, scale, varphi):
    ref = max(np.max(np.abs(v) * scale**1.5) for v in (up[:, 0], up[:, 1],
                                                       dn[:, 0], dn[:, 1]))
    ep, em = math.exp(math.pi / 2), math.exp(-math.pi / 2)

    def combo_ok(phase, comp, sgn):
        # sgn: e^{xi pi/2} factors flip with the energy sign
        a, b = (ep, em) if sgn > 0 else (em, ep)
        c = (a + phase * b) * up[:, comp] - (b + phase * a) * dn[:, comp]
        return _vanishes_faster(scale, c, ref)

    if varphi is not None:
        phase = cmath.exp(-1j * varphi)
        ok = all(
            combo_ok(phase, comp, sgn)
            for comp, sgn in ((0, +1), (1, -1))
            if np.max(np.abs(up[:, comp]) * scale**1.5) > 1e-12 * ref
        )
        return varphi if ok else None

    # infer the angle from the boundary value ratio of the dominant sign
    for comp, sgn in ((0, +1), (1, -1)):
        if np.max(np.abs(up[:, comp]) * scale**1.5) < 1e-12 * ref:
            continue
        k = -5
        rho = dn[k, comp] / up[k, comp]
        a, b = (ep, em) if sgn > 0 else (em, ep)
        denom = b - rho * a
        if abs(denom) < 1e-12:
            return None
        phase = (rho * b - a) / denom
        if abs(abs(phase) - 1.0) > 1e-3:
            return None
        cand = -cmath.phase(phase)
        if combo_ok(cmath.exp(-1j * cand), comp, sgn):
            return cand
        return None
    return None


def _q0_extension_angle(up, scale, varphi):
    ref = max(np.max(np.abs(up[:, 0]) * scale**1.5),
              np.max(np.abs(up[:, 1]) * scale**1.5))

    def combo_ok(phase):
        c = up[:, 0] - phase * up[:, 1]
        return _vanishes_faster(scale, c, ref)

    if varphi is not None:
        return varphi if combo_ok(cmath.exp(-1j * varphi)) else None
    if np.max(np.abs(up[:, 1]) * scale**1.5) < 1e-12 * ref:
        return None                     # single-component boundary tail
    rho = up[-5, 0] / up[-5, 1]
    if abs(abs(rho) - 1.0) > 1e-3:
        return None
    cand = -cmath.phase(rho)
    return cand if combo_ok(cmath.exp(-1j * cand)) else None
