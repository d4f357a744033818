import cmath
import math

import numpy as np
import pytest

from ptloc.core import Measure, composite_gauss_legendre, integrate_measure
from ptloc.errors import DomainError
from ptloc.extensions import (
    DeficiencySolution,
    EigenstateQ0,
    EigenstateQ3,
    ExtensionParamQ0,
    ExtensionParamQ3,
    classify_domain,
    csco_eigenfunction_q3,
    deficiency_solutions,
    q0_eigenfunction,
    q3_eigenfunction,
    q3_eigenvalue,
    q3_eigenvalue_z0_display,
    q3_inner_product_closed,
    q3_inner_product_quad,
    w_normalization,
    w_radial,
)
from ptloc.core import HyperbolicMomentum


class TestEigenvalueLattice:
    def test_trivial_extension_lattice(self):
        for m in (1.0, 2.5):
            for n in range(-5, 6):
                assert q3_eigenvalue(n, 0.0, m) == pytest.approx(2 * n / m,
                                                                 abs=1e-14)
        assert q3_eigenvalue(0, 0.0) == 0.0

    def test_spacing_is_two_compton_wavelengths(self):
        for phi in (-2.0, -0.3, 0.0, 1.1, math.pi):
            for n in (-3, 0, 4):
                sp = q3_eigenvalue(n + 1, phi, 2.0) - q3_eigenvalue(n, phi, 2.0)
                assert sp == pytest.approx(1.0, abs=1e-15)

    def test_family_boundary_continuity(self):
        for n in (-2, 0, 1):
            lim = q3_eigenvalue(n + 1, -math.pi + 1e-12, 1.0)
            assert q3_eigenvalue(n, math.pi, 1.0) == pytest.approx(lim,
                                                                   abs=1e-10)

    def test_printed_formulas_agree(self):
        # the sin/(1+cos) form loses ~4 digits to cancellation within
        # 1e-4 of phi = -pi; away from that fringe both double-precision
        # evaluations agree to 1e-12
        for phi in np.linspace(-math.pi + 1e-4, math.pi, 1001):
            assert q3_eigenvalue(0, float(phi)) == pytest.approx(
                q3_eigenvalue_z0_display(float(phi)), abs=1e-12
            )

    def test_printed_formulas_agree_near_the_fringe(self):
        # the literal display form evaluated in extended precision
        # confirms the main formula right up to the family boundary
        import mpmath as mp

        mp.mp.dps = 50
        th = mp.tanh(mp.pi / 2)
        for eps in (1e-12, 1e-9, 1e-6):
            phi = -math.pi + eps
            ref = (2 / mp.pi) * mp.atan(mp.sin(phi) / (1 + mp.cos(phi)) * th)
            assert q3_eigenvalue(0, phi) == pytest.approx(float(ref),
                                                          abs=1e-13)

    def test_z0_strictly_increasing(self):
        phis = np.linspace(-math.pi + 1e-9, math.pi, 400)
        z = [q3_eigenvalue(0, float(p)) for p in phis]
        assert all(b > a for a, b in zip(z, z[1:]))

    def test_angle_range_enforced(self):
        with pytest.raises(DomainError):
            q3_eigenvalue(0, -math.pi)
        with pytest.raises(DomainError):
            ExtensionParamQ0(4.0)


class TestExtensionParams:
    def test_single_particle_embeds_in_u2(self):
        p = ExtensionParamQ3.single_particle(0.7)
        assert p.is_single_particle
        U = p.unitary()
        assert np.allclose(U, cmath.exp(0.7j) * np.eye(2))

    def test_general_u2_is_unitary(self):
        p = ExtensionParamQ3(0.3, -1.2, 2.0, 0.9)
        U = p.unitary()
        assert np.allclose(U @ U.conj().T, np.eye(2), atol=1e-15)
        assert not p.is_single_particle


class TestEigenfunctions:
    def test_v_at_origin(self):
        st = EigenstateQ3(n=0, varphi=0.0, tau=0.0)
        v = q3_eigenfunction(st, 0.0)
        assert v[..., 0] == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
        assert v[..., 1] == 0.0

    def test_v_unimodular_envelope(self):
        st = EigenstateQ3(n=2, varphi=1.0, xi=1, tau=0.7)
        nu = np.linspace(-1.5, 1.5, 201)
        v = q3_eigenfunction(st, nu)
        env = np.abs(v[:, 0]) * (1 / np.cos(nu)) ** 1.5
        assert np.allclose(env, 1 / math.sqrt(math.pi), rtol=1e-13)

    def test_v_windowed_norm(self):
        # int sec^3 |V|^2 over |nu| < pi/2 - eps equals (pi - 2 eps)/pi
        st = EigenstateQ3(n=1, varphi=0.4)
        for eps in (0.3, 0.05, 0.005):
            nodes, w = composite_gauss_legendre(-math.pi / 2 + eps,
                                                math.pi / 2 - eps, 12, 30)
            v = q3_eigenfunction(st, nodes)
            val = np.sum(w / np.cos(nodes) ** 3
                         * np.abs(v[:, 0]) ** 2)
            assert val == pytest.approx((math.pi - 2 * eps) / math.pi,
                                        rel=1e-12)

    def test_r_components_share_modulus(self):
        st = EigenstateQ0(t=0.4, varphi=1.2, tau=0.3)
        r = np.geomspace(0.01, 100, 50)
        R = q0_eigenfunction(st, r)
        expect = math.sqrt(1 / (2 * math.pi)) * r**-1.5
        assert np.allclose(np.abs(R[:, 0]), expect, rtol=1e-14)
        assert np.allclose(np.abs(R[:, 1]), expect, rtol=1e-14)

    def test_r_rejects_nonpositive_radius(self):
        with pytest.raises(DomainError):
            q0_eigenfunction(EigenstateQ0(t=0.0), np.array([0.0, 1.0]))


class TestInnerProducts:
    def test_same_argument_normalization(self):
        val = q3_inner_product_closed(0.37, 0.37, 1, 1)
        assert val == pytest.approx(1.0, rel=1e-15)

    def test_lattice_orthogonality(self):
        for n in (1, 2, 5):
            val = q3_inner_product_closed(2.0 * n, 0.0, 1, 1)
            assert abs(val) < 1e-15

    def test_opposite_signs_orthogonal(self):
        assert q3_inner_product_closed(0.3, 0.9, 1, -1) == 0.0

    def test_closed_form_against_quadrature(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            z1, z2 = rng.uniform(-5, 5, 2)
            closed = q3_inner_product_closed(z1, z2, 1, 1)
            quad = q3_inner_product_quad(z1, z2, 1, 1, tau=0.4)
            assert abs(closed - quad) < 1e-8

    def test_coincidence_limit_consistency(self):
        # the closed form tends continuously to the normalization value
        for dz in (1e-3, 1e-6, 1e-9):
            val = q3_inner_product_closed(0.5 + dz, 0.5, 1, 1)
            assert val == pytest.approx(1.0, abs=1e-5)


class TestDeficiencySolutions:
    def test_counts(self):
        assert len(deficiency_solutions("Q0", 0.0)) == 2
        assert len(deficiency_solutions("Q3", 0.0)) == 4

    def test_q0_energy_sign_projections(self):
        sols = deficiency_solutions("Q0", 0.2)
        plus = [s for s in sols if s.xi == 1]
        minus = [s for s in sols if s.xi == -1]
        # the positive-energy projection holds only the +i/m vector,
        # the negative-energy one only -i/m
        assert [s.eigenvalue for s in plus] == [1j]
        assert [s.eigenvalue for s in minus] == [-1j]

    def test_unit_norms_by_quadrature(self):
        mu_r = Measure("radial")
        for s in deficiency_solutions("Q0", 0.5):
            val, _ = integrate_measure(
                lambda r, s=s: float(np.sum(np.abs(s.fn(np.array([r]))[0]) ** 2)),
                mu_r, tol=1e-11)
            assert val == pytest.approx(1.0, abs=1e-8)
        mu_nu = Measure("nu")
        for s in deficiency_solutions("Q3", 0.5):
            val, _ = integrate_measure(
                lambda nu, s=s: float(np.sum(np.abs(s.fn(np.array([nu]))[0]) ** 2)),
                mu_nu, tol=1e-11)
            assert val == pytest.approx(1.0, abs=1e-8)

    def test_each_q3_solution_occupies_one_sign(self):
        for s in deficiency_solutions("Q3", 0.0):
            vals = s.fn(np.array([0.3]))
            occupied = int(np.abs(vals[0, 0]) > 0)
            assert np.abs(vals[0, 1 - (1 - occupied)]) >= 0  # shape sanity
            assert (np.abs(vals[0, 0]) > 0) == (s.xi == 1)
            assert (np.abs(vals[0, 1]) > 0) == (s.xi == -1)


class TestCscoEigenfunctions:
    def test_w_at_origin_reduces_to_normalization(self):
        lam = -1.25
        val = w_radial(0, lam, 0.0)
        assert val == pytest.approx(w_normalization(0, lam), rel=1e-14)

    def test_azimuthal_orthogonality(self):
        phi = np.linspace(0, 2 * math.pi, 721)[:-1]
        w = 2 * math.pi / 720
        f0 = np.exp(0j * phi) / math.sqrt(2 * math.pi)
        f1 = np.exp(1j * phi) / math.sqrt(2 * math.pi)
        assert abs(np.sum(w * np.conj(f0) * f1)) < 1e-14

    def test_full_eigenfunction_factorizes(self):
        st = EigenstateQ3(n=1, lam=-1.5, m_z=2, varphi=0.3, tau=0.2)
        p = HyperbolicMomentum(omega_pi=0.8, nu_pi=0.4, phi_pi=1.1)
        full = csco_eigenfunction_q3(st, p)
        v = q3_eigenfunction(st, p.nu_pi)
        phi_fac = cmath.exp(2j * p.phi_pi) / math.sqrt(2 * math.pi)
        w = w_radial(2, -1.5, p.omega_pi)
        assert np.allclose(full, v * phi_fac * w, rtol=1e-13)

    def test_lattice_orthogonality_survives_spectral_factors(self):
        # Gram entry between (n=0, window A) and (n=1, window A):
        # the triple integral factorizes into nu x phi x omega pieces
        nu_n, nu_w = composite_gauss_legendre(-math.pi / 2 + 1e-10,
                                              math.pi / 2 - 1e-10, 24, 40)
        st0 = EigenstateQ3(n=0, varphi=0.6)
        st1 = EigenstateQ3(n=1, varphi=0.6)
        v0 = q3_eigenfunction(st0, nu_n)[:, 0]
        v1 = q3_eigenfunction(st1, nu_n)[:, 0]
        nu_part = np.sum(nu_w / np.cos(nu_n) ** 3 * np.conj(v0) * v1)
        # smeared omega Gram with identical windows is order-one
        L, wL = composite_gauss_legendre(0.2, 1.6, 6, 25)
        g = np.exp(-((L - 0.9) ** 2) / (2 * 0.1**2))
        om, wom = composite_gauss_legendre(0.0, 40.0, 30, 40)
        from ptloc.specfun import conical_p_batch

        F = np.zeros(om.size)
        for j, xi in enumerate(om):
            P = conical_p_batch(0, L, math.cosh(xi), n_nodes=100)
            nrm = np.array([w_normalization(0, -0.25 - l * l) for l in L])
            F[j] = np.sum(wL * 2 * L * g * nrm * P)
        omega_part = np.sum(wom * np.sinh(om) * F * F)
        gram = nu_part * 1.0 * omega_part
        assert abs(nu_part) < 1e-10
        assert omega_part > 0.01
        assert abs(gram) < 1e-8


class TestDomainClassification:
    def test_compact_bump_is_in_the_closure(self):
        def bump(nu):
            u = np.asarray(nu) / 1.2
            out = np.zeros(np.shape(nu) + (2,), dtype=complex)
            inside = np.abs(u) < 1.0
            vals = np.zeros_like(u)
            vals[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
            out[..., 0] = vals
            return out

        c = classify_domain(bump, "Q3")
        assert c.is_closure
        assert c.in_extension(0.3) and c.in_extension(-2.0)

    def test_lattice_eigenfunction_is_extension_only(self):
        varphi = 0.8
        st = EigenstateQ3(n=0, varphi=varphi)
        fn = lambda nu: q3_eigenfunction(st, nu)
        c = classify_domain(fn, "Q3", varphi=varphi)
        assert c.category == "extension" and not c.is_closure
        assert c.decay_exponent == pytest.approx(1.5, abs=0.05)
        inferred = classify_domain(fn, "Q3")
        assert inferred.category == "extension"
        assert inferred.varphi == pytest.approx(varphi, abs=1e-3)
        # a mismatched angle is rejected
        other = classify_domain(fn, "Q3", varphi=varphi + 1.0)
        assert other.category == "adjoint_only"

    def test_classification_stable_under_refinement(self):
        st = EigenstateQ3(n=0, varphi=-1.1)
        fn = lambda nu: q3_eigenfunction(st, nu)
        c1 = classify_domain(fn, "Q3", varphi=-1.1, n=60)
        c2 = classify_domain(fn, "Q3", varphi=-1.1, n=120)
        assert c1.category == c2.category == "extension"

    def test_slow_tail_not_in_adjoint_domain(self):
        def slow(nu):
            out = np.zeros(np.shape(nu) + (2,), dtype=complex)
            out[..., 0] = np.cos(np.asarray(nu))  # (sec nu)^{-1} tail
            return out

        c = classify_domain(slow, "Q3")
        assert c.category == "not_in_adjoint"
        assert not c.in_adjoint

    def test_q0_deficiency_vector_only_in_adjoint(self):
        sol = deficiency_solutions("Q0", 0.0)[0]
        c = classify_domain(sol.fn, "Q0")
        assert c.category == "adjoint_only"
        assert c.decay_exponent == pytest.approx(1.5, abs=0.05)

    def test_q0_deficiency_combination_selects_extension(self):
        varphi = 1.3
        plus, minus = deficiency_solutions("Q0", 0.0)

        def combo(r):
            return plus.fn(r) + cmath.exp(1j * varphi) * minus.fn(r)

        c = classify_domain(combo, "Q0")
        assert c.category == "extension"
        assert c.varphi == pytest.approx(varphi, abs=1e-6)

    def test_q0_eigenfunction_in_its_extension(self):
        varphi = 0.5
        st = EigenstateQ0(t=0.4, varphi=varphi, tau=0.0)
        c = classify_domain(lambda r: q0_eigenfunction(st, r), "Q0",
                            varphi=varphi)
        assert c.category == "extension"


class TestCompleteness:
    def test_parseval_on_the_lattice_basis(self):
        # smooth compactly supported state against the phi = 0.3 family
        varphi = 0.3
        nodes, w = composite_gauss_legendre(-math.pi / 2, math.pi / 2, 30, 40)

        def f(nu):
            u = nu / 1.2
            vals = np.zeros_like(nu)
            inside = np.abs(u) < 1.0
            vals[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2)) * np.exp(
                2.0j * nu[inside]).real
            return vals * np.exp(0.5j * nu)

        fv = f(nodes)
        norm_sq = float(np.sum(w / np.cos(nodes) ** 3 * np.abs(fv) ** 2))

        def coeff(n):
            st = EigenstateQ3(n=n, varphi=varphi)
            v = q3_eigenfunction(st, nodes)[:, 0]
            return np.sum(w / np.cos(nodes) ** 3 * np.conj(v) * fv)

        defects = []
        for N in (10, 20, 40):
            s = sum(abs(coeff(n)) ** 2 for n in range(-N, N + 1))
            defects.append(abs(s - norm_sq) / norm_sq)
        assert defects[-1] < 1e-6
        assert defects[0] >= defects[-1]
