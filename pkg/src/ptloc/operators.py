"""Grid-sampled two-component wavefunctions and the differential acting
rules of the proper-time position and angular-momentum operators.

Charts and the operators available on them:

* ``radial_log``  1-D, coordinate s = ln(r/m):   Q0, Pi0, J12
* ``nu``          1-D, coordinate nu:            Q3, Pi3, J12
* ``nu_omega``    2-D, (nu, omega):              Q3, Q0, Pi0, Pi3, J03, J12
* ``pi1_pi3``     2-D Cartesian slice pi2 = 0 (states even in pi2):
                  J01, J03, J13, Pi0, Pi1, Pi3, Q3, Q3_cartesian

1-D charts use Chebyshev collocation (spectral differentiation and
Clenshaw-Curtis quadrature); 2-D charts use uniform grids with 8th-order
central differences and trapezoidal weights.  Test states must vanish
near grid boundaries (use :func:`bump_window`); the FD stencils then see
exact zero padding and trapezoidal sums converge spectrally.

Energy-sign structure: Q and Pi operators carry the sign matrix
diag(+1,-1) across the two components; the J operators act identically
on both.  States with an azimuthal factor e^{i m_z phi} carry m_z as
metadata and J12 acts as multiplication by m_z.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, GridMismatch, ResolutionWarning

__all__ = [
    "Grid1D",
    "Grid2D",
    "WaveFunction2",
    "OperatorTag",
    "chebyshev_grid",
    "uniform_grid2d",
    "apply",
    "commutator_residual",
    "lagrange_symmetry_defect",
    "eigen_residual",
    "bump_window",
    "gaussian_state",
]


# ---------------------------------------------------------------------------
# Differentiation kernels


def _cheb_lobatto(n):
    """Chebyshev-Lobatto nodes (ascending on [-1,1]) and the spectral
    differentiation matrix (Trefethen's construction)."""
    if n < 2:
        raise DomainError("need at least 2 intervals")
    j = np.arange(n + 1)
    x = -np.cos(np.pi * j / n)                  # ascending
    c = np.ones(n + 1)
    c[0] = c[n] = 2.0
    c *= (-1.0) ** j
    X = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (X + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    return x, D


def _clencurt(n):
    """Clenshaw-Curtis weights on [-1,1] for the Lobatto nodes."""
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    ii = np.arange(1, n)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2 * k * theta[ii]) / (4 * k * k - 1)
        v -= np.cos(n * theta[ii]) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[ii]) / (4 * k * k - 1)
    w[ii] = 2.0 * v / n
    return w


_FD8 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0,
                 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def _fd8_axis(f, h, axis):
    """8th-order first derivative along an axis, zero padding outside
    (exact for states vanishing at the grid margin)."""
    pad = [(0, 0)] * f.ndim
    pad[axis] = (4, 4)
    g = np.pad(f, pad)
    out = np.zeros_like(f)
    sl_all = [slice(None)] * f.ndim
    n = f.shape[axis]
    for k, ck in enumerate(_FD8):
        if ck == 0.0:
            continue
        sl = sl_all.copy()
        sl[axis] = slice(k, k + n)
        out += ck * g[tuple(sl)]
    return out / h


# ---------------------------------------------------------------------------
# Grids and states


@dataclass(frozen=True)
class Grid1D:
    chart: str
    nodes: np.ndarray
    weights: np.ndarray      # measure-inclusive quadrature weights
    diff: np.ndarray         # d/d(coordinate) collocation matrix
    mass: float = 1.0
    axis: int = 3            # spatial axis singled out by the chart

    @property
    def shape(self):
        return self.nodes.shape


@dataclass(frozen=True)
class Grid2D:
    chart: str
    x: np.ndarray            # first coordinate axis (uniform)
    y: np.ndarray            # second coordinate axis (uniform)
    weights: np.ndarray      # (nx, ny) measure-inclusive weights
    mass: float = 1.0

    @property
    def shape(self):
        return (self.x.size, self.y.size)

    @property
    def hx(self):
        return self.x[1] - self.x[0]

    @property
    def hy(self):
        return self.y[1] - self.y[0]


def _measure_1d(chart, t, mass):
    if chart == "nu":
        return 1.0 / np.cos(t) ** 3
    if chart == "radial_log":
        r = mass * np.exp(t)
        return mass * r**3 / np.sqrt(r**2 + mass**2)
    if chart == "omega":
        return mass**3 * np.sinh(t)
    raise DomainError(f"unknown 1-D chart {chart!r}")


def chebyshev_grid(chart, n, lo, hi, mass=1.0, axis=3) -> Grid1D:
    """Chebyshev collocation grid with measure-weighted Clenshaw-Curtis
    quadrature on [lo, hi] of the chart coordinate."""
    x, D = _cheb_lobatto(n)
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    D = D / half
    w = _clencurt(n) * half * _measure_1d(chart, nodes, mass)
    return Grid1D(chart=chart, nodes=nodes, weights=w, diff=D,
                  mass=mass, axis=axis)


def uniform_grid2d(chart, nx, ny, xlim, ylim, mass=1.0) -> Grid2D:
    x = np.linspace(*xlim, nx)
    y = np.linspace(*ylim, ny)
    wx = np.full(nx, x[1] - x[0])
    wx[0] = wx[-1] = 0.5 * (x[1] - x[0])
    wy = np.full(ny, y[1] - y[0])
    wy[0] = wy[-1] = 0.5 * (y[1] - y[0])
    if chart == "nu_omega":
        meas = np.outer(1.0 / np.cos(x) ** 3, mass**3 * np.sinh(y))
    elif chart == "pi1_pi3":
        E = np.sqrt(x[:, None] ** 2 + y[None, :] ** 2 + mass**2)
        meas = mass / E
    else:
        raise DomainError(f"unknown 2-D chart {chart!r}")
    return Grid2D(chart=chart, x=x, y=y,
                  weights=np.outer(wx, wy) * meas, mass=mass)


@dataclass
class WaveFunction2:
    """Two energy-sign components sampled on a grid; the first component
    is the positive-energy one."""

    grid: Union[Grid1D, Grid2D]
    values: np.ndarray               # grid.shape + (2,), complex
    tau: float = 0.0
    m_z: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.shape + (2,):
            raise GridMismatch(
                f"values shape {self.values.shape} does not match grid "
                f"{self.grid.shape}"
            )

    def norm_sq(self):
        dens = np.abs(self.values[..., 0]) ** 2 + np.abs(self.values[..., 1]) ** 2
        return float(np.sum(self.grid.weights * dens))

    def norm(self):
        return math.sqrt(self.norm_sq())

    def inner(self, other):
        """Physical inner product (self|other) on the common grid."""
        prod = np.conj(self.values) * other.values
        return complex(np.sum(self.grid.weights * (prod[..., 0] + prod[..., 1])))


@dataclass(frozen=True)
class OperatorTag:
    kind: str
    tau: float = 0.0


# ---------------------------------------------------------------------------
# Acting rules


def _d1(grid, f):
    return grid.diff @ f


def _sign_apply(fplus_out, fminus_out):
    return np.stack([fplus_out, -fminus_out], axis=-1)


def _apply_1d(tag, psi):
    g, v = psi.grid, psi.values
    t = g.nodes
    m = g.mass
    k = tag.kind
    if g.chart == "nu" and k in ("Q1", "Q2", "Q3"):
        if k != f"Q{g.axis}":
            raise GridMismatch(f"{k} needs a chart aligned with axis {k[1]}")
        tn = np.tan(t)

        def act(f):
            return (1j / m) * (_d1(g, f) + 1.5 * tn * f) + tag.tau * tn * f

        return _sign_apply(act(v[..., 0]), act(v[..., 1]))
    if g.chart == "nu" and k == "Pi3":
        tn = m * np.tan(t)
        return _sign_apply(tn * v[..., 0], tn * v[..., 1])
    if g.chart == "radial_log" and k == "Q0":
        E_over_m = np.sqrt(np.exp(2 * t) + 1.0)

        def act(f):
            return E_over_m * ((1j / m) * (_d1(g, f) + 1.5 * f) + tag.tau * f)

        return _sign_apply(act(v[..., 0]), act(v[..., 1]))
    if g.chart == "radial_log" and k == "Pi0":
        E = m * np.sqrt(np.exp(2 * t) + 1.0)
        return _sign_apply(E * v[..., 0], E * v[..., 1])
    if k == "J12":
        return psi.m_z * v.copy()
    raise GridMismatch(f"operator {k} not available on 1-D chart {g.chart!r}")


def _apply_2d(tag, psi):
    g, v = psi.grid, psi.values
    m = g.mass
    k = tag.kind

    def dx(f):
        return _fd8_axis(f, g.hx, 0)

    def dy(f):
        return _fd8_axis(f, g.hy, 1)

    if g.chart == "nu_omega":
        nu = g.x[:, None]
        om = g.y[None, :]
        if k == "Q3":
            tn = np.tan(nu)

            def act(f):
                return (1j / m) * (dx(f) + 1.5 * tn * f) + tag.tau * tn * f

            return _sign_apply(act(v[..., 0]), act(v[..., 1]))
        if k == "Q0":
            pref = np.cosh(om) / np.cos(nu)

            def act(f):
                scal = (np.sin(nu) * np.cos(nu) * dx(f)
                        + np.tanh(om) * np.cos(nu) ** 2 * dy(f))
                return pref * ((1j / m) * (scal + 1.5 * f) + tag.tau * f)

            return _sign_apply(act(v[..., 0]), act(v[..., 1]))
        if k == "J03":
            def act(f):
                return -1j * (np.cos(nu) * np.cosh(om) * dx(f)
                              - np.sin(nu) * np.sinh(om) * dy(f))

            return np.stack([act(v[..., 0]), act(v[..., 1])], axis=-1)
        if k == "Pi3":
            tn = m * np.tan(nu)
            return _sign_apply(tn * v[..., 0], tn * v[..., 1])
        if k == "Pi0":
            E = m * np.cosh(om) / np.cos(nu)
            return _sign_apply(E * v[..., 0], E * v[..., 1])
        if k == "J12":
            return psi.m_z * v.copy()
    if g.chart == "pi1_pi3":
        p1 = g.x[:, None]
        p3 = g.y[None, :]
        E = np.sqrt(p1**2 + p3**2 + m**2)
        if k == "J01":
            def act(f):
                return -1j * E * dx(f)

            return np.stack([act(v[..., 0]), act(v[..., 1])], axis=-1)
        if k == "J03":
            def act(f):
                return -1j * E * dy(f)

            return np.stack([act(v[..., 0]), act(v[..., 1])], axis=-1)
        if k == "J13":
            def act(f):
                return 1j * (p3 * dx(f) - p1 * dy(f))

            return np.stack([act(v[..., 0]), act(v[..., 1])], axis=-1)
        if k == "Pi1":
            return _sign_apply(p1 * v[..., 0], p1 * v[..., 1])
        if k == "Pi3":
            return _sign_apply(p3 * v[..., 0], p3 * v[..., 1])
        if k == "Pi0":
            return _sign_apply(E * v[..., 0], E * v[..., 1])
        if k == "Q3":
            # hyperbolic-chart rule pushed to the Cartesian slice
            def act(f):
                return ((1j / m) * ((m**2 + p3**2) / m * dy(f)
                                    + (p3 / m) * p1 * dx(f)
                                    + 1.5 * (p3 / m) * f)
                        + tag.tau * (p3 / m) * f)

            return _sign_apply(act(v[..., 0]), act(v[..., 1]))
        if k == "Q3_cartesian":
            # the mixed Cartesian form; equals Q3 identically
            def act(f):
                scal = p1 * dx(f) + p3 * dy(f)
                return (1j * (dy(f) + (p3 / m**2) * scal + 1.5 * p3 / m**2 * f)
                        + tag.tau * (p3 / m) * f)

            return _sign_apply(act(v[..., 0]), act(v[..., 1]))
    raise GridMismatch(f"operator {k} not available on 2-D chart {g.chart!r}")


def apply(tag: OperatorTag, psi: WaveFunction2,
          check_resolution=False, resolution_rtol=1e-6) -> WaveFunction2:
    """Apply an acting rule; returns a new state on the same grid.

    With ``check_resolution`` the application is repeated on a 2x
    coarser grid and a ResolutionWarning is emitted if the two results
    differ beyond ``resolution_rtol`` in the grid norm.
    """
    if isinstance(psi.grid, Grid1D):
        out = _apply_1d(tag, psi)
    else:
        out = _apply_2d(tag, psi)
    result = WaveFunction2(grid=psi.grid, values=out, tau=psi.tau, m_z=psi.m_z)
    if check_resolution:
        _resolution_check(tag, psi, result, resolution_rtol)
    return result


def _resolution_check(tag, psi, fine, rtol):
    g = psi.grid
    if isinstance(g, Grid2D):
        if (g.x.size % 2) == 0 or (g.y.size % 2) == 0:
            return                      # need odd counts to nest nodes
        coarse = uniform_grid2d(g.chart, (g.x.size + 1) // 2,
                                (g.y.size + 1) // 2,
                                (g.x[0], g.x[-1]), (g.y[0], g.y[-1]), g.mass)
        cpsi = WaveFunction2(coarse, psi.values[::2, ::2], psi.tau, psi.m_z)
        cres = apply(tag, cpsi)
        diff = cres.values - fine.values[::2, ::2]
        dens = np.abs(diff[..., 0]) ** 2 + np.abs(diff[..., 1]) ** 2
        rel = math.sqrt(float(np.sum(coarse.weights * dens))) / max(
            fine.norm(), 1e-300
        )
    else:
        n = g.nodes.size - 1
        coarse = chebyshev_grid(g.chart, n // 2, g.nodes[0], g.nodes[-1],
                                g.mass, g.axis)
        vals = np.stack(
            [_barycentric(g.nodes, psi.values[:, c], coarse.nodes)
             for c in (0, 1)], axis=-1)
        cres = apply(tag, WaveFunction2(coarse, vals, psi.tau, psi.m_z))
        fres = np.stack(
            [_barycentric(g.nodes, fine.values[:, c], coarse.nodes)
             for c in (0, 1)], axis=-1)
        diff = cres.values - fres
        dens = np.abs(diff[..., 0]) ** 2 + np.abs(diff[..., 1]) ** 2
        rel = math.sqrt(float(np.sum(coarse.weights * dens))) / max(
            fine.norm(), 1e-300
        )
    if rel > rtol:
        warnings.warn(
            f"{tag.kind}: grid-halving changes the result by {rel:.2e} "
            f"(> {rtol:.1e}); refine the grid",
            ResolutionWarning,
            stacklevel=3,
        )


def _barycentric(nodes, vals, xq):
    """Barycentric interpolation on Chebyshev-Lobatto nodes."""
    n = nodes.size - 1
    w = np.ones(n + 1)
    w[0] = w[n] = 0.5
    w *= (-1.0) ** np.arange(n + 1)
    out = np.empty(xq.size, dtype=vals.dtype)
    for i, xv in enumerate(xq):
        d = xv - nodes
        hit = np.argmin(np.abs(d))
        if abs(d[hit]) < 1e-14:
            out[i] = vals[hit]
            continue
        t = w / d
        out[i] = np.sum(t * vals) / np.sum(t)
    return out


# ---------------------------------------------------------------------------
# Derived diagnostics


def commutator_residual(a: OperatorTag, b: OperatorTag,
                        expected: Sequence, psi: WaveFunction2) -> float:
    """|| (AB - BA - C) psi || / || psi || with C a linear combination
    given as [(coeff, OperatorTag | "I"), ...]."""
    ab = apply(a, apply(b, psi))
    ba = apply(b, apply(a, psi))
    res = ab.values - ba.values
    for coeff, term in expected:
        if term == "I":
            res = res - coeff * psi.values
        else:
            res = res - coeff * apply(term, psi).values
    dens = np.abs(res[..., 0]) ** 2 + np.abs(res[..., 1]) ** 2
    return math.sqrt(float(np.sum(psi.grid.weights * dens))) / psi.norm()


def lagrange_symmetry_defect(tag: OperatorTag, phi: WaveFunction2,
                             psi: WaveFunction2) -> complex:
    """(phi, A psi) - (A phi, psi) under the physical inner product;
    vanishes for symmetric acting rules on states supported away from
    the chart boundary."""
    return phi.inner(apply(tag, psi)) - apply(tag, phi).inner(psi)


def eigen_residual(tag: OperatorTag, psi: WaveFunction2, eigenvalue) -> float:
    """|| A psi - lambda psi || / || psi || on the grid."""
    res = apply(tag, psi).values - eigenvalue * psi.values
    dens = np.abs(res[..., 0]) ** 2 + np.abs(res[..., 1]) ** 2
    return math.sqrt(float(np.sum(psi.grid.weights * dens))) / psi.norm()


# ---------------------------------------------------------------------------
# Test-state construction


def _bump(u):
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


def bump_window(grid, frac=0.85):
    """Smooth compactly supported window, identically zero on the outer
    (1-frac) margin of the chart (states multiplied by it vanish with
    all derivatives at the grid boundary)."""
    if isinstance(grid, Grid1D):
        t = grid.nodes
        mid, half = 0.5 * (t[0] + t[-1]), 0.5 * (t[-1] - t[0])
        return _bump((t - mid) / (frac * half))
    ux = (grid.x - 0.5 * (grid.x[0] + grid.x[-1])) / (
        frac * 0.5 * (grid.x[-1] - grid.x[0]))
    uy = (grid.y - 0.5 * (grid.y[0] + grid.y[-1])) / (
        frac * 0.5 * (grid.y[-1] - grid.y[0]))
    return np.outer(_bump(ux), _bump(uy))


def gaussian_state(grid, center, width, k_phase=0.0, component=0,
                   tau=0.0, m_z=0, window=True, frac=0.85) -> WaveFunction2:
    """Windowed Gaussian test state on one energy-sign component
    (1-D charts) or an isotropic 2-D Gaussian (2-D charts)."""
    if isinstance(grid, Grid1D):
        t = grid.nodes
        f = np.exp(-((t - center) ** 2) / (2 * width**2) + 1j * k_phase * t)
    else:
        cx, cy = center
        wx, wy = width if isinstance(width, tuple) else (width, width)
        f = np.exp(
            -((grid.x[:, None] - cx) ** 2) / (2 * wx**2)
            - ((grid.y[None, :] - cy) ** 2) / (2 * wy**2)
            + 1j * k_phase * grid.x[:, None]
        )
    if window:
        f = f * bump_window(grid, frac)
    vals = np.zeros(grid.shape + (2,), dtype=complex)
    vals[..., component] = f
    return WaveFunction2(grid=grid, values=vals, tau=tau, m_z=m_z)
