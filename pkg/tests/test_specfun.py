import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate, special

from ptloc.errors import AccuracyLoss, DomainError
from ptloc.specfun import (
    ConicalOrder,
    conical_p,
    conical_p_batch,
    csinc,
    gamma_abs,
    spherical_harmonic,
)


class TestCsinc:
    def test_removable_singularity(self):
        assert csinc(0.0) == 1.0

    def test_zero_at_pi(self):
        assert abs(csinc(math.pi)) < 1e-15

    def test_imaginary_argument(self):
        # sin(-i x) = -i sinh x, so csinc(-i pi/2) = sinh(pi/2)/(pi/2)
        expect = math.sinh(math.pi / 2) / (math.pi / 2)
        assert csinc(-1j * math.pi / 2) == pytest.approx(expect, rel=1e-14)
        # series evaluation as an independent route
        w = -1j * math.pi / 2
        series = sum((-1) ** k * w ** (2 * k) / math.factorial(2 * k + 1)
                     for k in range(30))
        assert csinc(w) == pytest.approx(complex(series), rel=1e-14)

    def test_against_mpmath(self):
        rng = np.random.default_rng(1)
        ws = rng.uniform(-20, 20, (60, 2)) @ np.array([1.0, 1j])
        for w in ws:
            ref = complex(mp.sinc(mp.mpc(w)))
            assert abs(csinc(w) - ref) <= 1e-14 * max(1.0, abs(ref))

    def test_symmetries_random(self):
        rng = np.random.default_rng(2)
        w = rng.uniform(-30, 30, 1000) + 1j * rng.uniform(-10, 10, 1000)
        vals = csinc(w)
        assert np.allclose(csinc(np.conj(w)), np.conj(vals), rtol=1e-13,
                           atol=0)
        assert np.allclose(csinc(-w), vals, rtol=1e-13, atol=0)


class TestGammaAbs:
    def test_half(self):
        assert gamma_abs(0, 0.0) == pytest.approx(math.sqrt(math.pi),
                                                  rel=1e-15)

    def test_imaginary_shift_identity(self):
        # |Gamma(1/2+i)| = sqrt(pi/cosh(pi))
        assert gamma_abs(0, 1.0) == pytest.approx(
            math.sqrt(math.pi / math.cosh(math.pi)), rel=1e-14
        )

    def test_against_complex_loggamma(self):
        for m_z, L in ((0, 1.0), (1, 1.0), (3, 0.4), (7, 2.3), (0, 0.0)):
            ref = math.exp(special.loggamma(0.5 + abs(m_z) + 1j * L).real)
            assert gamma_abs(m_z, L) == pytest.approx(ref, rel=1e-12)

    def test_modulus_recurrence(self):
        for m_z, L in ((0, 0.3), (1, 1.1), (3, 2.0), (10, 0.05)):
            s = 0.5 + m_z + 1j * L
            assert gamma_abs(m_z + 1, L) == pytest.approx(
                abs(s) * gamma_abs(m_z, L), rel=1e-12
            )

    def test_negative_lambda_rejected(self):
        with pytest.raises(DomainError):
            gamma_abs(0, -0.5)


class TestConical:
    def test_at_argument_one(self):
        assert conical_p(ConicalOrder(0, 0.7), 1.0) == 1.0
        assert conical_p(ConicalOrder(1, 0.7), 1.0) == 0.0
        # order -|m| functions carry an (x-1)^{|m|/2} prefactor
        assert abs(conical_p(ConicalOrder(1, 0.7), 1.0 + 1e-12)) < 1e-5

    def test_frozen_reference_value(self):
        # Mehler-Dirichlet quadrature value, cross-checked against
        # mpmath.legenp(-1/2+1j, 0, cosh(1), type=3)
        assert conical_p(ConicalOrder(0, 1.0), math.cosh(1.0)) == pytest.approx(
            0.722075228279375, rel=1e-12
        )

    @pytest.mark.parametrize(
        "m_z,L,xi",
        [(0, 1.0, 1.0), (0, 0.5, 2.0), (1, 1.0, 1.0), (2, 0.7, 3.0),
         (0, 3.0, 0.3), (1, 2.0, 0.2), (5, 1.5, 2.0), (0, 1.0, 10.0),
         (0, 0.05, 1.0), (3, 0.0, 4.0), (10, 2.0, 1.0), (30, 0.5, 5.0),
         (50, 1.0, 2.0)],
    )
    def test_against_mpmath(self, m_z, L, xi):
        x = math.cosh(xi)
        ref = float(mp.re(mp.legenp(mp.mpf(-0.5) + 1j * L, -m_z, mp.mpf(x),
                                    type=3)))
        assert conical_p(ConicalOrder(m_z, L), x) == pytest.approx(
            ref, rel=1e-10
        )

    def test_hardest_precondition_corner(self):
        # order 50 at cosh(20): the integrand spans ~900 e-folds before
        # normalization; the rescaled rule still tracks mpmath
        mp.mp.dps = 40
        x = math.cosh(20.0)
        ref = float(mp.re(mp.legenp(mp.mpf(-0.5) + 1j, -50, mp.mpf(x),
                                    type=3)))
        assert conical_p(ConicalOrder(50, 1.0), x) == pytest.approx(
            ref, rel=5e-10)

    def test_series_and_integral_agree_in_overlap(self):
        # both branches are exercised around the crossover
        for x in (1.2, 1.4, 1.49):
            lo = conical_p(ConicalOrder(1, 0.8), x)
            hi = conical_p(ConicalOrder(1, 0.8), x + 0.12)
            mid_i = conical_p(ConicalOrder(1, 0.8), 1.55)
            ref = float(mp.re(mp.legenp(mp.mpf(-0.5) + 0.8j, -1, mp.mpf(x),
                                        type=3)))
            assert lo == pytest.approx(ref, rel=1e-11)
            assert np.isfinite(hi) and np.isfinite(mid_i)

    def test_realness_of_complex_series(self):
        # the complex-parameter hypergeometric sum lands on the real axis
        for (mz, L, x) in ((0, 0.7, 1.2), (1, 1.3, 1.4), (2, 0.4, 1.1)):
            a, b = 0.5 + 1j * L, 0.5 - 1j * L
            term, s = 1.0 + 0j, 1.0 + 0j
            z = (1.0 - x) / 2.0
            for k in range(200):
                term *= (a + k) * (b + k) / ((k + 1.0 + mz) * (k + 1.0)) * z
                s += term
            val = ((x - 1) / (x + 1)) ** (mz / 2) / math.gamma(1 + mz) * s
            assert abs(val.imag) < 1e-12 * abs(val)
            assert conical_p(ConicalOrder(mz, L), x) == pytest.approx(
                val.real, rel=1e-12
            )

    def test_batch_matches_scalar(self):
        Ls = np.array([0.1, 0.5, 1.0, 2.0])
        x = math.cosh(1.7)
        batch = conical_p_batch(1, Ls, x)
        for L, v in zip(Ls, batch):
            assert v == pytest.approx(conical_p(ConicalOrder(1, L), x),
                                      rel=1e-11)

    def test_domain_and_accuracy_errors(self):
        with pytest.raises(DomainError):
            conical_p(ConicalOrder(0, 1.0), 0.5)
        # unreachable targets are reported, on both branches
        with pytest.raises(AccuracyLoss):
            conical_p(ConicalOrder(0, 1.0), 1.2, target=1e-18)
        with pytest.raises(AccuracyLoss):
            conical_p(ConicalOrder(0, 1.0), 3.0, target=1e-17)

    def test_smeared_orthogonality_matches_spectral_weight(self):
        # windowed version of the continuum orthogonality of the
        # conical transform, checked against the analytic weight
        # pi / (L sinh(pi L) |Gamma(1/2+|m|+iL)|^2)
        for m_z in (0, 1):
            dev = _smeared_gram_deviation(m_z)
            assert dev < 1e-4


def _smeared_gram_deviation(m_z, centers=(0.5, 1.0), sigma=0.1):
    from ptloc.core import composite_gauss_legendre

    L, wL = composite_gauss_legendre(0.0, centers[-1] + 6 * sigma, 8, 20)
    g = [np.exp(-((L - c) ** 2) / (2 * sigma**2)) for c in centers]
    om, wom = composite_gauss_legendre(0.0, 50.0, 40, 40)
    F = np.zeros((2, om.size))
    for j, xi in enumerate(om):
        P = conical_p_batch(m_z, L, math.cosh(xi), n_nodes=120)
        F[0, j] = np.sum(wL * g[0] * P)
        F[1, j] = np.sum(wL * g[1] * P)
    G = np.array([[np.sum(wom * np.sinh(om) * F[i] * F[j]) for j in range(2)]
                  for i in range(2)])
    wfun = np.pi / (L * np.sinh(np.pi * L)
                    * np.array([gamma_abs(m_z, l) for l in L]) ** 2)
    A = np.array([[np.sum(wL * g[i] * g[j] * wfun) for j in range(2)]
                  for i in range(2)])
    return float(np.max(np.abs(G - A)) / np.max(np.abs(A)))


class TestSphericalHarmonic:
    def test_constant_harmonic(self):
        v = spherical_harmonic(0, 0, 0.7, 1.3)
        assert v == pytest.approx(1.0 / math.sqrt(4 * math.pi), rel=1e-14)

    def test_y10_at_pole(self):
        v = spherical_harmonic(1, 0, 0.0, 0.0)
        assert v.real == pytest.approx(math.sqrt(3 / (4 * math.pi)), rel=1e-14)

    def test_orthonormality_by_quadrature(self):
        theta, wt = np.polynomial.legendre.leggauss(60)
        theta = np.arccos(theta)
        phi = np.linspace(0, 2 * math.pi, 121)[:-1]
        wp = 2 * math.pi / 120
        pairs = [((1, 1), (1, 1)), ((1, 1), (2, 1)), ((2, 0), (2, 0)),
                 ((1, 0), (1, 1))]
        for (l1, m1), (l2, m2) in pairs:
            acc = 0.0
            for th, w in zip(theta, wt):
                ya = np.array([spherical_harmonic(l1, m1, th, p) for p in phi])
                yb = np.array([spherical_harmonic(l2, m2, th, p) for p in phi])
                acc += w * wp * np.sum(np.conj(ya) * yb)
            expect = 1.0 if (l1, m1) == (l2, m2) else 0.0
            assert abs(acc - expect) < 1e-10

    def test_invalid_order(self):
        with pytest.raises(DomainError):
            spherical_harmonic(1, 2, 0.3, 0.0)
