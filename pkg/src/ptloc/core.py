"""Momentum-space charts, invariant measures and adaptive quadrature.

Everything downstream works on the mass shell of a spinless particle of
mass m (natural units).  Three coordinate charts on momentum space are
used:

* Cartesian components (pi1, pi2, pi3) with energy E = sqrt(|pi|^2 + m^2).
* Spherical (r_pi, theta, phi_pi).
* Hyperbolic (omega_pi, nu_pi, phi_pi) defined by

      pi1 = m sinh(omega) sec(nu) cos(phi)
      pi2 = m sinh(omega) sec(nu) sin(phi)
      pi3 = m tan(nu)

  in which E = m cosh(omega) sec(nu) and the invariant measure
  m d^3pi / E factorizes exactly as

      dmu(pi) = [m^3 sinh(omega) domega] [sec^3(nu) dnu] [dphi].

Internally all computation fixes m = 1; the mass enters only through the
chart equations and measure weights, which carry it explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, NonConvergence

__all__ = [
    "ModelParams",
    "CartesianMomentum",
    "SphericalMomentum",
    "HyperbolicMomentum",
    "Measure",
    "to_spherical",
    "from_spherical",
    "to_hyperbolic",
    "from_hyperbolic",
    "energy",
    "integrate_measure",
    "lambda_to_Lambda",
    "Lambda_to_lambda",
    "composite_gauss_legendre",
]

DEFAULT_TOL = 1e-10
_QUAD_LIMIT = 200


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the model: just the mass (natural units)."""

    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0.0:
            raise DomainError(f"mass must be positive, got {self.mass}")

    @property
    def compton(self):
        """Compton wavelength 1/m, the intrinsic length scale."""
        return 1.0 / self.mass


@dataclass(frozen=True)
class CartesianMomentum:
    pi1: float
    pi2: float
    pi3: float

    def norm(self):
        return math.sqrt(self.pi1**2 + self.pi2**2 + self.pi3**2)

    def energy(self, mass=1.0):
        return math.sqrt(self.norm() ** 2 + mass**2)


@dataclass(frozen=True)
class SphericalMomentum:
    r_pi: float
    theta: float
    phi_pi: float


@dataclass(frozen=True)
class HyperbolicMomentum:
    omega_pi: float
    nu_pi: float
    phi_pi: float


def energy(p, mass=1.0):
    """Energy of a momentum point in any chart."""
    if isinstance(p, CartesianMomentum):
        return p.energy(mass)
    if isinstance(p, SphericalMomentum):
        return math.sqrt(p.r_pi**2 + mass**2)
    if isinstance(p, HyperbolicMomentum):
        return mass * math.cosh(p.omega_pi) / math.cos(p.nu_pi)
    raise DomainError(f"unknown momentum type {type(p)!r}")


def to_spherical(p: CartesianMomentum) -> SphericalMomentum:
    r = p.norm()
    theta = math.acos(p.pi3 / r) if r > 0 else 0.0
    phi = math.atan2(p.pi2, p.pi1) % (2 * math.pi)
    return SphericalMomentum(r, theta, phi)


def from_spherical(s: SphericalMomentum) -> CartesianMomentum:
    st = math.sin(s.theta)
    return CartesianMomentum(
        s.r_pi * st * math.cos(s.phi_pi),
        s.r_pi * st * math.sin(s.phi_pi),
        s.r_pi * math.cos(s.theta),
    )


def to_hyperbolic(p: CartesianMomentum, mass=1.0) -> HyperbolicMomentum:
    """Invert the hyperbolic chart equations.

    nu is fixed by pi3 alone, omega then follows from the cylindrical
    radius.  The chart covers all of momentum space; nu = +-pi/2 is
    unreachable for finite pi3.
    """
    nu = math.atan2(p.pi3, mass)
    rho = math.hypot(p.pi1, p.pi2)
    omega = math.asinh(rho * math.cos(nu) / mass)
    phi = math.atan2(p.pi2, p.pi1) % (2 * math.pi)
    return HyperbolicMomentum(omega, nu, phi)


def from_hyperbolic(h: HyperbolicMomentum, mass=1.0) -> CartesianMomentum:
    sh = math.sinh(h.omega_pi) / math.cos(h.nu_pi)
    return CartesianMomentum(
        mass * sh * math.cos(h.phi_pi),
        mass * sh * math.sin(h.phi_pi),
        mass * math.tan(h.nu_pi),
    )


def lambda_to_Lambda(lam):
    """Map a point of the hyperbolic-Casimir spectrum lam <= -1/4 to the
    nonnegative spectral parameter Lambda = sqrt(-1/4 - lam)."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam > -0.25):
        raise DomainError("lambda must satisfy lambda <= -1/4")
    out = np.sqrt(-0.25 - lam)
    return float(out) if out.ndim == 0 else out


def Lambda_to_lambda(Lambda):
    Lambda = np.asarray(Lambda, dtype=float)
    if np.any(Lambda < 0):
        raise DomainError("Lambda must be nonnegative")
    out = -0.25 - Lambda**2
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Measures and quadrature


@dataclass(frozen=True)
class Measure:
    """1-D measure on a momentum chart coordinate.

    kind        weight                 domain
    ------      ---------------        -----------------
    radial      m r^2 / E(r)           (0, inf)
    nu          sec^3(nu)              (-pi/2, pi/2)
    omega       m^3 sinh(omega)        (0, inf)

    The improper endpoints are handled inside :func:`integrate_measure`
    by variable substitution (nu is mapped to the real line by
    u = tan(nu); the half-lines use the standard algebraic mapping of
    the quadrature backend).
    """

    kind: str
    mass: float = 1.0

    def __post_init__(self):
        if self.kind not in ("radial", "nu", "omega"):
            raise DomainError(f"unknown measure kind {self.kind!r}")

    @property
    def bounds(self):
        if self.kind == "nu":
            return (-math.pi / 2, math.pi / 2)
        return (0.0, math.inf)

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        m = self.mass
        if self.kind == "radial":
            return m * x**2 / np.sqrt(x**2 + m**2)
        if self.kind == "nu":
            return 1.0 / np.cos(x) ** 3
        return m**3 * np.sinh(x)


def _quad_real(f, a, b, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(
                f, a, b, limit=_QUAD_LIMIT, epsabs=0.1 * tol, epsrel=0.1 * tol
            )
        except integrate.IntegrationWarning as exc:
            # rerun without the warning filter to recover the estimates
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, err = integrate.quad(f, a, b, limit=_QUAD_LIMIT)
            raise NonConvergence(
                f"quadrature did not converge: {exc}", value=val, error=err
            ) from None
    return val, err


def integrate_measure(f, mu: Measure, tol=DEFAULT_TOL):
    """Integrate ``f`` against the measure ``mu`` over its full domain.

    Returns (value, error_estimate); the value is complex whenever the
    sampled integrand is complex.  Raises NonConvergence when the error
    estimate exceeds ``tol`` after the interval subdivision budget.
    """
    if mu.kind == "nu":
        # u = tan(nu): sec^3(nu) dnu = sqrt(1+u^2) du over the real line
        def g(u):
            return f(math.atan(u)) * math.sqrt(1.0 + u * u)

        a, b = -math.inf, math.inf
    elif mu.kind == "omega":
        # u = cosh(omega): m^3 sinh(omega) domega = m^3 du, which keeps
        # the weight bounded however far the tail is probed
        m3 = mu.mass**3

        def g(u):
            return f(math.acosh(u)) * m3

        a, b = 1.0, math.inf
    else:
        w = mu.weight

        def g(x):
            return f(x) * w(x)

        a, b = 0.0, math.inf

    probe = g(1.0 if mu.kind != "nu" else 0.5)
    if np.iscomplexobj(probe) or isinstance(probe, complex):
        re, ere = _quad_real(lambda x: g(x).real, a, b, tol)
        im, eim = _quad_real(lambda x: g(x).imag, a, b, tol)
        val, err = re + 1j * im, math.hypot(ere, eim)
    else:
        val, err = _quad_real(g, a, b, tol)
    if err > tol:
        raise NonConvergence(
            f"error estimate {err:.3e} exceeds tol {tol:.3e}", value=val, error=err
        )
    return val, err


def composite_gauss_legendre(a, b, n_panels, order=40):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b].

    Fixed (non-adaptive) rule used for vectorized inner integrals where
    an error estimate is obtained by comparing against a refined rule.
    """
    xn, wn = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * xn[None, :]).ravel()
    weights = (half[:, None] * wn[None, :]).ravel()
    return nodes, weights
