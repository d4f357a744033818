"""Classical constraint algebra of the einbein particle.

Phase space is (x^mu, pi_mu, e, pi_e) with metric signature (-,+,+,+);
x is stored with the index up, pi with the index down, and raising or
lowering is always an explicit metric application.  Observables carry
hand-coded analytic gradients so the bracket checks are exact to
rounding (no finite differences).

The module verifies, at sampled phase-space points, the values of the
primary/secondary/gauge constraints, the Dirac-bracket relations of the
reparameterization-invariant position variables q^mu(tau), and the
strong commutation of the improved variables Q^mu(tau), Pi_mu with the
first-class constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])

__all__ = [
    "METRIC",
    "PhaseSpacePoint",
    "BracketReport",
    "Observable",
    "poisson",
    "constraints",
    "physical_vars",
    "verify_bracket_suite",
    "random_points",
    "jacobi_defect",
    "obs_x",
    "obs_pi",
    "obs_pi_up",
    "obs_phi1",
    "obs_phi2",
    "obs_q",
    "obs_q_tau",
    "obs_J",
    "obs_Q_tau",
    "obs_Pi",
]


def raise_index(v):
    return METRIC @ v


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Unconstrained phase-space point; off-shell values are allowed."""

    x: np.ndarray       # x^mu
    pi: np.ndarray      # pi_mu
    e: float
    pi_e: float

    def pi_up(self):
        return METRIC @ self.pi

    def pi_sq(self):
        """pi^mu pi_mu (equals -m^2 on shell)."""
        return self.pi @ METRIC @ self.pi

    def on_shell(self, mass=1.0, tol=1e-10):
        return abs(self.pi_sq() + mass**2) < tol


def constraints(p: PhaseSpacePoint, tau=0.0, mass=1.0):
    """Primary, secondary and proper-time gauge constraint values:
    (pi_e, (pi.pi + m^2)/2, x.pi/m + tau, m e - 1)."""
    phi1 = p.pi_e
    phi2 = 0.5 * (p.pi_sq() + mass**2)
    phi_star1 = (p.pi @ p.x) / mass + tau
    phi_star2 = mass * p.e - 1.0
    return phi1, phi2, phi_star1, phi_star2


@dataclass
class PhysicalVars:
    q: np.ndarray
    q_tau: np.ndarray
    Q: np.ndarray
    Q_tau: np.ndarray
    Pi: np.ndarray
    J: np.ndarray


def physical_vars(p: PhaseSpacePoint, tau=0.0, mass=1.0) -> PhysicalVars:
    """Gauge-invariant position variables and their strongly-commuting
    improvements at a point."""
    m2 = mass**2
    pi_up = p.pi_up()
    c = p.pi @ p.x
    q = p.x + pi_up * c / m2
    q_tau = q + pi_up * tau / mass
    phi2 = 0.5 * (p.pi_sq() + m2)
    Pi = p.pi * (1.0 + phi2 / m2)
    J = np.outer(p.x, pi_up) - np.outer(pi_up, p.x)
    Q = -(J @ Pi) / m2
    Q_tau = Q + (METRIC @ Pi) * tau / mass
    return PhysicalVars(q=q, q_tau=q_tau, Q=Q, Q_tau=Q_tau, Pi=Pi, J=J)


# ---------------------------------------------------------------------------
# Observables with analytic gradients

_Z4 = np.zeros(4)


@dataclass
class Observable:
    name: str
    value: Callable
    dx: Callable = field(default=lambda p: _Z4)      # d/dx^mu, 4-array
    dpi: Callable = field(default=lambda p: _Z4)     # d/dpi_mu, 4-array
    de: Callable = field(default=lambda p: 0.0)
    dpi_e: Callable = field(default=lambda p: 0.0)


def poisson(f: Observable, g: Observable, p: PhaseSpacePoint):
    """Canonical Poisson bracket {f, g} at p: the pairs are
    (x^mu, pi_mu) and (e, pi_e)."""
    val = f.dx(p) @ g.dpi(p) - f.dpi(p) @ g.dx(p)
    val += f.de(p) * g.dpi_e(p) - f.dpi_e(p) * g.de(p)
    return val


def _delta(mu):
    d = np.zeros(4)
    d[mu] = 1.0
    return d


def obs_x(mu):
    return Observable(f"x^{mu}", lambda p: p.x[mu], dx=lambda p, d=_delta(mu): d)


def obs_pi(mu):
    return Observable(f"pi_{mu}", lambda p: p.pi[mu], dpi=lambda p, d=_delta(mu): d)


def obs_pi_up(mu):
    return Observable(
        f"pi^{mu}",
        lambda p: p.pi_up()[mu],
        dpi=lambda p, row=METRIC[mu].copy(): row,
    )


def obs_phi1():
    return Observable("phi1", lambda p: p.pi_e, dpi_e=lambda p: 1.0)


def obs_phi2(mass=1.0):
    return Observable(
        "phi2",
        lambda p: 0.5 * (p.pi_sq() + mass**2),
        dpi=lambda p: p.pi_up(),
    )


def obs_q(mu, mass=1.0):
    m2 = mass**2

    def val(p):
        return p.x[mu] + p.pi_up()[mu] * (p.pi @ p.x) / m2

    def dx(p):
        return _delta(mu) + p.pi_up()[mu] * p.pi / m2

    def dpi(p):
        return (METRIC[mu] * (p.pi @ p.x) + p.pi_up()[mu] * p.x) / m2

    return Observable(f"q^{mu}", val, dx=dx, dpi=dpi)


def obs_q_tau(mu, tau, mass=1.0):
    base = obs_q(mu, mass)

    def val(p):
        return base.value(p) + p.pi_up()[mu] * tau / mass

    def dpi(p):
        return base.dpi(p) + METRIC[mu] * tau / mass

    return Observable(f"q^{mu}(tau)", val, dx=base.dx, dpi=dpi)


def obs_J(mu, nu, mass=1.0):
    def val(p):
        u = p.pi_up()
        return p.x[mu] * u[nu] - p.x[nu] * u[mu]

    def dx(p):
        u = p.pi_up()
        return _delta(mu) * u[nu] - _delta(nu) * u[mu]

    def dpi(p):
        return p.x[mu] * METRIC[nu] - p.x[nu] * METRIC[mu]

    return Observable(f"J^{mu}{nu}", val, dx=dx, dpi=dpi)


def obs_Pi(mu, mass=1.0):
    m2 = mass**2

    def scale(p):
        return 1.0 + 0.5 * (p.pi_sq() + m2) / m2

    def val(p):
        return p.pi[mu] * scale(p)

    def dpi(p):
        return _delta(mu) * scale(p) + p.pi[mu] * p.pi_up() / m2

    return Observable(f"Pi_{mu}", val, dpi=dpi)


def obs_Q_tau(mu, tau, mass=1.0):
    """Q^mu(tau) = -J^{mu lam} Pi_lam / m^2 + Pi^mu tau / m."""
    m2 = mass**2

    def parts(p):
        u = p.pi_up()
        phi2 = 0.5 * (p.pi_sq() + m2)
        Pi = p.pi * (1.0 + phi2 / m2)
        J = np.outer(p.x, u) - np.outer(u, p.x)
        return u, phi2, Pi, J

    def val(p):
        u, phi2, Pi, J = parts(p)
        return -(J[mu] @ Pi) / m2 + (METRIC[mu] @ Pi) * tau / mass

    def dx(p):
        u, phi2, Pi, J = parts(p)
        return -(_delta(mu) * (u @ Pi) - u[mu] * Pi) / m2

    def dpi(p):
        u, phi2, Pi, J = parts(p)
        s = 1.0 + phi2 / m2
        grad = -(
            p.x[mu] * (METRIC @ Pi)
            - (p.x @ Pi) * METRIC[mu]
            + J[mu] * s
            + (J[mu] @ p.pi) * u / m2
        ) / m2
        grad = grad + (tau / mass) * (METRIC[mu] * s + u[mu] * u / m2)
        return grad

    return Observable(f"Q^{mu}(tau)", val, dx=dx, dpi=dpi)


# ---------------------------------------------------------------------------
# Bracket verification suite


@dataclass
class BracketReport:
    relation: str
    lhs: float
    rhs: float
    max_abs_deviation: float


def random_points(n, rng, mass=1.0, on_shell=False):
    """Sample points with components uniform in [-2, 2]; for on-shell
    points pi_0 is solved from the mass shell with positive energy."""
    pts = []
    for _ in range(n):
        x = rng.uniform(-2.0, 2.0, size=4)
        pi = rng.uniform(-2.0, 2.0, size=4)
        if on_shell:
            pi[0] = -np.sqrt(pi[1] ** 2 + pi[2] ** 2 + pi[3] ** 2 + mass**2)
        e = rng.uniform(0.2, 2.0)
        pi_e = rng.uniform(-2.0, 2.0)
        pts.append(PhaseSpacePoint(x=x, pi=pi, e=float(e), pi_e=float(pi_e)))
    return pts


def _track(reports, relation, lhs, rhs):
    dev = abs(lhs - rhs)
    rec = reports.get(relation)
    if rec is None or dev > rec.max_abs_deviation:
        reports[relation] = BracketReport(relation, float(np.real(lhs)),
                                          float(np.real(rhs)), float(dev))


def verify_bracket_suite(points, tau=0.0, mass=1.0):
    """Evaluate every displayed bracket family at the given points and
    report the worst deviation per relation (deviations are reported,
    never asserted here)."""
    m2 = mass**2
    reports = {}
    q = [obs_q_tau(mu, tau, mass) for mu in range(4)]
    Jo = {(a, b): obs_J(a, b, mass) for a in range(4) for b in range(4)}
    Q = [obs_Q_tau(mu, tau, mass) for mu in range(4)]
    Pi = [obs_Pi(mu, mass) for mu in range(4)]
    pi_up = [obs_pi_up(mu) for mu in range(4)]
    phi1, phi2 = obs_phi1(), obs_phi2(mass)

    for p in points:
        pv = physical_vars(p, tau, mass)
        eta = METRIC
        # {q^mu, q^nu} = J^{mu nu}/m^2
        for a in range(4):
            for b in range(a + 1, 4):
                _track(reports, "{q^mu,q^nu}=J/m^2",
                       poisson(q[a], q[b], p), pv.J[a, b] / m2)
        # {q^mu, pi_nu} = delta^mu_nu + pi^mu pi_nu/m^2
        u = p.pi_up()
        for a in range(4):
            for b in range(4):
                rhs = (1.0 if a == b else 0.0) + u[a] * p.pi[b] / m2
                _track(reports, "{q^mu,pi_nu}=eta+pipi/m^2",
                       poisson(q[a], obs_pi(b), p), rhs)
        # {J^{mu nu}, pi^sig} = eta^{sig mu} pi^nu - eta^{sig nu} pi^mu
        for a in range(4):
            for b in range(a + 1, 4):
                for s in range(4):
                    rhs = eta[s, a] * u[b] - eta[s, b] * u[a]
                    _track(reports, "{J,pi}",
                           poisson(Jo[(a, b)], pi_up[s], p), rhs)
        # {J^{mu nu}, J^{sig rho}}
        for a in range(4):
            for b in range(a + 1, 4):
                for s in range(4):
                    for r in range(s + 1, 4):
                        rhs = (eta[a, r] * pv.J[s, b] + eta[a, s] * pv.J[b, r]
                               + eta[b, r] * pv.J[a, s] + eta[b, s] * pv.J[r, a])
                        _track(reports, "{J,J}",
                               poisson(Jo[(a, b)], Jo[(s, r)], p), rhs)
        # {J^{mu nu}, q^sig(tau)} = eta^{sig mu} q^nu(tau) - eta^{sig nu} q^mu(tau)
        for a in range(4):
            for b in range(a + 1, 4):
                for s in range(4):
                    rhs = eta[s, a] * pv.q_tau[b] - eta[s, b] * pv.q_tau[a]
                    _track(reports, "{J,q(tau)}",
                           poisson(Jo[(a, b)], q[s], p), rhs)
        # strong commutation of Q^mu(tau), Pi_mu with both constraints
        for a in range(4):
            _track(reports, "{Q(tau),phi1}=0", poisson(Q[a], phi1, p), 0.0)
            _track(reports, "{Q(tau),phi2}=0", poisson(Q[a], phi2, p), 0.0)
            _track(reports, "{Pi,phi1}=0", poisson(Pi[a], phi1, p), 0.0)
            _track(reports, "{Pi,phi2}=0", poisson(Pi[a], phi2, p), 0.0)
        # gauge invariance of q: {q^mu, phi2} = 2 pi^mu phi2/m^2
        ph2 = 0.5 * (p.pi_sq() + m2)
        for a in range(4):
            _track(reports, "{q,phi2}=2pi phi2/m^2",
                   poisson(q[a], phi2, p), 2.0 * u[a] * ph2 / m2)
    return list(reports.values())


# ---------------------------------------------------------------------------
# Complex-step machinery for the Jacobi identity test

_CS_H = 1e-150


def _cs_point(p, slot, idx, h):
    x = p.x.astype(complex).copy()
    pi = p.pi.astype(complex).copy()
    e, pi_e = complex(p.e), complex(p.pi_e)
    if slot == "x":
        x[idx] += 1j * h
    elif slot == "pi":
        pi[idx] += 1j * h
    elif slot == "e":
        e += 1j * h
    else:
        pi_e += 1j * h
    return PhaseSpacePoint(x=x, pi=pi, e=e, pi_e=pi_e)


def _cs_grads(fun, p):
    dx = np.array([np.imag(fun(_cs_point(p, "x", i, _CS_H))) / _CS_H
                   for i in range(4)])
    dpi = np.array([np.imag(fun(_cs_point(p, "pi", i, _CS_H))) / _CS_H
                    for i in range(4)])
    de = np.imag(fun(_cs_point(p, "e", 0, _CS_H))) / _CS_H
    dpe = np.imag(fun(_cs_point(p, "pi_e", 0, _CS_H))) / _CS_H
    return dx, dpi, de, dpe


def _poisson_fn(ffun, gfun, p):
    fdx, fdpi, fde, fdpe = _cs_grads(ffun, p)
    gdx, gdpi, gde, gdpe = _cs_grads(gfun, p)
    return fdx @ gdpi - fdpi @ gdx + fde * gdpe - fdpe * gde


def jacobi_defect(f: Observable, g: Observable, h: Observable, p):
    """{f,{g,h}} + {g,{h,f}} + {h,{f,g}} with the inner brackets taken
    through the analytic gradients and the outer ones by complex-step
    differentiation (exact to rounding for these polynomial
    observables)."""
    gh = lambda pt: poisson(g, h, pt)
    hf = lambda pt: poisson(h, f, pt)
    fg = lambda pt: poisson(f, g, pt)
    return (_poisson_fn(f.value, gh, p)
            + _poisson_fn(g.value, hf, p)
            + _poisson_fn(h.value, fg, p))
