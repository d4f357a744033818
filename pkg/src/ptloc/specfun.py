"""Special functions for the hyperbolic-chart eigenfunctions.

* complex-argument sinc,
* moduli of Gamma at half-integer-plus-imaginary arguments,
* conical (Mehler) functions, i.e. associated Legendre functions of the
  first kind with degree -1/2 + i*Lambda and nonpositive integer order,
* orthonormal spherical harmonics.

The conical functions are evaluated from an integral representation
with a trigonometric kernel,

    P^{-mu}_{-1/2+iL}(cosh xi) = sqrt(2/pi) (sinh xi)^{-mu} / Gamma(mu+1/2)
        * int_0^xi (cosh xi - cosh t)^(mu-1/2) cos(L t) dt,

which is uniformly accurate in L, with a Gauss hypergeometric series
fallback near argument 1 where the integration interval degenerates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import AccuracyLoss, DomainError

__all__ = [
    "ConicalOrder",
    "csinc",
    "gamma_abs",
    "conical_p",
    "conical_p_batch",
    "spherical_harmonic",
]

# series is abandoned when the alternating-term growth e^{2L sqrt|z|}
# would eat more than ~3 digits of the 1e-10 target
_SERIES_X_MAX = 1.5
_SERIES_L_MAX = 12.0


@dataclass(frozen=True)
class ConicalOrder:
    """Order/degree labels of a conical function P^{-|m_z|}_{-1/2+i*Lambda}."""

    m_z: int
    Lambda: float

    def __post_init__(self):
        if self.Lambda < 0:
            raise DomainError("Lambda must be nonnegative")


def csinc(w):
    """sin(w)/w for complex w, with the removable singularity filled in.

    Accurate to machine precision for moderate |w|; small arguments use
    the Taylor series to avoid 0/0.
    """
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 1e-4
    ws = w[small]
    out[small] = 1.0 - ws**2 / 6.0 + ws**4 / 120.0
    wb = w[~small]
    out[~small] = np.sin(wb) / wb
    return complex(out) if out.ndim == 0 else out


def gamma_abs(m_z: int, Lambda: float) -> float:
    """|Gamma(1/2 + |m_z| + i*Lambda)|.

    Built from |Gamma(1/2+iy)|^2 = pi/cosh(pi y) and the modulus
    recurrence |Gamma(s+1)| = |s| |Gamma(s)|; no general complex Gamma
    is needed at these arguments.
    """
    if Lambda < 0:
        raise DomainError("Lambda must be nonnegative")
    mu = abs(int(m_z))
    val = math.sqrt(math.pi / math.cosh(math.pi * Lambda))
    for j in range(mu):
        val *= math.sqrt((j + 0.5) ** 2 + Lambda**2)
    return val


def _conical_series(mu, L, x):
    """Hypergeometric series about x=1.  Pochhammer products
    (1/2+iL)_k (1/2-iL)_k are real, so the sum is manifestly real."""
    z = (1.0 - x) / 2.0
    term = 1.0
    s = 1.0
    for k in range(400):
        term *= ((k + 0.5) ** 2 + L * L) / ((k + 1.0 + mu) * (k + 1.0)) * z
        s += term
        if abs(term) <= 1e-17 * abs(s):
            break
    pref = ((x - 1.0) / (x + 1.0)) ** (mu / 2.0) / special.gamma(1.0 + mu)
    return pref * s, abs(pref * term)


def _conical_integrand_factory(mu, L, xi):
    # t = xi - u^2 regularizes the (cosh xi - cosh t)^(mu-1/2) endpoint;
    # the cosh difference is computed as a product of sinh factors to
    # avoid cancellation for small xi, and normalized by its maximum
    # cosh(xi)-1 so large orders stay inside double range.
    dmax = 2.0 * math.sinh(0.5 * xi) ** 2

    def g(u):
        t = xi - u * u
        d = 2.0 * np.sinh(xi - 0.5 * u * u) * np.sinh(0.5 * u * u)
        return (d / dmax) ** (mu - 0.5) * np.cos(L * t) * 2.0 * u

    return g


def _conical_prefactor_log(mu, xi):
    # includes the (cosh(xi)-1)^(mu-1/2) normalization of the integrand
    dmax = 2.0 * math.sinh(0.5 * xi) ** 2
    return (
        0.5 * math.log(2.0 / math.pi)
        - mu * math.log(math.sinh(xi))
        - special.gammaln(mu + 0.5)
        + (mu - 0.5) * math.log(dmax)
    )


def conical_p(order, x, target=1e-10):
    """Conical function P^{-|m_z|}_{-1/2 + i*Lambda}(x) for real x >= 1.

    Raises AccuracyLoss when the internal error estimate exceeds
    ``target`` relative to the result (this includes underflow of the
    extremely small high-order values).
    """
    if isinstance(order, tuple):
        order = ConicalOrder(*order)
    mu, L = abs(order.m_z), order.Lambda
    if x < 1.0:
        raise DomainError("argument must satisfy x >= 1")
    if x == 1.0:
        return 1.0 if mu == 0 else 0.0

    if x <= _SERIES_X_MAX and L <= _SERIES_L_MAX:
        val, err = _conical_series(mu, L, x)
        if err > target * max(abs(val), 1e-300):
            raise AccuracyLoss(
                f"series error {err:.2e} exceeds target at x={x}, L={L}"
            )
        return val

    xi = math.acosh(x)
    g = _conical_integrand_factory(mu, L, xi)
    with warnings.catch_warnings():
        # the error estimate is inspected below; quadpack's roundoff
        # complaint for underflowing values is redundant with it
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        ival, ierr = integrate.quad(
            g, 0.0, math.sqrt(xi), limit=200, epsabs=1e-300, epsrel=1e-13
        )
    logpref = _conical_prefactor_log(mu, xi)
    if logpref < -700.0 or ival == 0.0:
        raise AccuracyLoss(
            f"value underflows double precision at x={x}, m_z={mu}, L={L}"
        )
    pref = math.exp(logpref)
    val = pref * ival
    if pref * ierr > target * max(abs(val), 1e-300):
        raise AccuracyLoss(
            f"quadrature error {pref * ierr:.2e} exceeds relative target "
            f"{target:.1e} at x={x}, m_z={mu}, L={L}"
        )
    return val


def conical_p_batch(m_z, Lambdas, x, n_nodes=160):
    """Vectorized conical function over an array of Lambda at fixed x.

    Fixed Gauss-Legendre rule in the substituted variable; used by the
    spectral integrals, where thousands of (Lambda, omega) pairs are
    needed.  Accuracy is that of the rule (near machine precision for
    the Lambda, omega ranges of interest; refine ``n_nodes`` to check).
    """
    Lambdas = np.asarray(Lambdas, dtype=float)
    mu = abs(int(m_z))
    if x < 1.0:
        raise DomainError("argument must satisfy x >= 1")
    if x == 1.0:
        return np.ones_like(Lambdas) if mu == 0 else np.zeros_like(Lambdas)
    xi = math.acosh(x)
    un, wn = np.polynomial.legendre.leggauss(n_nodes)
    u = 0.5 * math.sqrt(xi) * (un + 1.0)
    wu = 0.5 * math.sqrt(xi) * wn
    t = xi - u * u
    dmax = 2.0 * math.sinh(0.5 * xi) ** 2
    d = 2.0 * np.sinh(xi - 0.5 * u * u) * np.sinh(0.5 * u * u) / dmax
    base = d ** (mu - 0.5) * 2.0 * u * wu
    vals = np.cos(np.outer(Lambdas, t)) @ base
    return math.exp(_conical_prefactor_log(mu, xi)) * vals


def spherical_harmonic(l, m, theta, phi):
    """Orthonormal spherical harmonic Y_l^m(theta, phi) with the
    Condon-Shortley phase (theta is the polar angle)."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"need 0 <= |m| <= l, got l={l}, m={m}")
    return complex(special.sph_harm_y(l, m, theta, phi))
