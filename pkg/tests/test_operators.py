import math

import numpy as np
import pytest

from ptloc import extensions as ext
from ptloc.errors import GridMismatch, ResolutionWarning
from ptloc.operators import (
    Grid1D,
    OperatorTag,
    WaveFunction2,
    apply,
    bump_window,
    chebyshev_grid,
    commutator_residual,
    eigen_residual,
    gaussian_state,
    lagrange_symmetry_defect,
    uniform_grid2d,
)

T = OperatorTag
TAU = 0.6
NU_GRID = chebyshev_grid("nu", 512, -math.pi / 2 + 0.03, math.pi / 2 - 0.03)
R_GRID = chebyshev_grid("radial_log", 512, -5.0, 5.0)


def nu_omega_grid(n=257):
    return uniform_grid2d("nu_omega", n, n,
                          (-math.pi / 2 + 0.05, math.pi / 2 - 0.05),
                          (0.05, 5.0))


def cart_grid(n=257):
    return uniform_grid2d("pi1_pi3", n, n, (-6.0, 6.0), (-6.0, 6.0))


class TestEigenResiduals:
    def test_v_is_a_pointwise_eigenfunction_of_q3(self):
        # z = 0.3/m is off the lattice; V is still an eigenfunction of
        # the differential operation
        z = 0.3
        nu = NU_GRID.nodes
        sec = 1.0 / np.cos(nu)
        vals = np.zeros(nu.shape + (2,), dtype=complex)
        vals[:, 0] = (np.exp(1j * TAU * np.log(sec)) * np.exp(-1j * z * nu)
                      / (math.sqrt(math.pi) * sec**1.5))
        psi = WaveFunction2(NU_GRID, vals, tau=TAU)
        assert eigen_residual(T("Q3", TAU), psi, z) < 1e-8

    def test_lattice_eigenfunctions(self):
        st = ext.EigenstateQ3(n=2, varphi=-0.7, tau=TAU)
        psi = WaveFunction2(NU_GRID, ext.q3_eigenfunction(st, NU_GRID.nodes),
                            tau=TAU)
        assert eigen_residual(T("Q3", TAU), psi, st.z()) < 1e-8

    def test_time_eigenfunction(self):
        st = ext.EigenstateQ0(t=0.3, varphi=0.4, tau=TAU)
        grid = chebyshev_grid("radial_log", 128, -5.0, 5.0)
        r = np.exp(grid.nodes)
        psi = WaveFunction2(grid, ext.q0_eigenfunction(st, r), tau=TAU)
        assert eigen_residual(T("Q0", TAU), psi, st.t) < 1e-8

    def test_deficiency_eigenvalues(self):
        for sol in ext.deficiency_solutions("Q3", TAU):
            psi = WaveFunction2(NU_GRID, sol.fn(NU_GRID.nodes), tau=TAU)
            assert eigen_residual(T("Q3", TAU), psi, sol.eigenvalue) < 1e-6
        grid = chebyshev_grid("radial_log", 256, -5.0, 5.0)
        r = np.exp(grid.nodes)
        for sol in ext.deficiency_solutions("Q0", TAU):
            psi = WaveFunction2(grid, sol.fn(r), tau=TAU)
            assert eigen_residual(T("Q0", TAU), psi, sol.eigenvalue) < 1e-6

    def test_residuals_at_512_below_invariant_bound(self):
        st = ext.EigenstateQ0(t=0.3, varphi=0.4, tau=TAU)
        psi = WaveFunction2(R_GRID,
                            ext.q0_eigenfunction(st, np.exp(R_GRID.nodes)),
                            tau=TAU)
        assert eigen_residual(T("Q0", TAU), psi, st.t) < 1e-6

    def test_spectral_convergence_order(self):
        st = ext.EigenstateQ3(n=2, varphi=0.5, tau=0.4)
        res = {}
        for n in (8, 16):
            g = chebyshev_grid("nu", n, -math.pi / 2 + 0.03,
                               math.pi / 2 - 0.03)
            psi = WaveFunction2(g, ext.q3_eigenfunction(st, g.nodes), tau=0.4)
            res[n] = eigen_residual(T("Q3", 0.4), psi, st.z())
        assert math.log2(res[8] / res[16]) >= 4.0

    def test_azimuthal_quantum_number(self):
        psi = gaussian_state(NU_GRID, 0.0, 0.3, m_z=3)
        out = apply(T("J12"), psi)
        assert np.allclose(out.values, 3 * psi.values)


class TestCommutators:
    def test_q3_q0_closes_on_the_boost_generator(self):
        psi = gaussian_state(nu_omega_grid(), (0.0, 1.2), (0.25, 0.7))
        r = commutator_residual(T("Q3", TAU), T("Q0", TAU),
                                [(-1j, T("J03"))], psi)
        assert r < 1e-6

    def test_boost_position_commutator(self):
        psi = gaussian_state(nu_omega_grid(), (0.1, 1.5), (0.3, 0.8))
        r = commutator_residual(T("J03"), T("Q3", TAU),
                                [(-1j, T("Q0", TAU))], psi)
        assert r < 1e-6

    def test_rotation_commutes_with_aligned_position(self):
        psi = gaussian_state(nu_omega_grid(129), (0.0, 1.0), (0.3, 0.6), m_z=1)
        r = commutator_residual(T("J12"), T("Q3", TAU), [], psi)
        assert r < 1e-8

    def test_position_momentum_commutator(self):
        # [Q3, Pi3] = i(1 + Pi3 Pi3/m^2) on the nu chart
        grid = chebyshev_grid("nu", 512, -math.pi / 2 + 0.04,
                              math.pi / 2 - 0.04)
        psi = gaussian_state(grid, 0.1, 0.25, k_phase=1.0)
        ab = apply(T("Q3", TAU), apply(T("Pi3"), psi))
        ba = apply(T("Pi3"), apply(T("Q3", TAU), psi))
        tn = np.tan(grid.nodes)
        expected = 1j * (1.0 + np.stack([tn, tn], -1) ** 2) * psi.values
        res = ab.values - ba.values - expected
        dens = np.abs(res[..., 0]) ** 2 + np.abs(res[..., 1]) ** 2
        r = math.sqrt(float(np.sum(grid.weights * dens))) / psi.norm()
        assert r < 1e-6

    def test_boost_algebra_on_cartesian_slice(self):
        psi = gaussian_state(cart_grid(), (0.3, -0.4), (1.0, 1.2))
        assert commutator_residual(T("J01"), T("J03"),
                                   [(-1j, T("J13"))], psi) < 1e-6

    def test_rotation_momentum_commutator(self):
        psi = gaussian_state(cart_grid(), (-0.2, 0.5), (1.1, 0.9))
        assert commutator_residual(T("J13"), T("Pi1"),
                                   [(1j, T("Pi3"))], psi) < 1e-6

    def test_fd_convergence_order(self):
        res = {}
        for n in (49, 97):
            psi = gaussian_state(nu_omega_grid(n), (0.0, 1.2), (0.25, 0.7))
            res[n] = commutator_residual(T("Q3", TAU), T("Q0", TAU),
                                         [(-1j, T("J03"))], psi)
        assert math.log2(res[49] / res[97]) >= 4.0

    def test_momentum_operators_multiplicative(self):
        grid = nu_omega_grid(65)
        psi = gaussian_state(grid, (0.0, 1.0), (0.3, 0.6))
        out = apply(T("Pi3"), psi)
        tn = np.tan(grid.x)[:, None]
        assert np.array_equal(out.values[..., 0], tn * psi.values[..., 0])
        assert np.array_equal(out.values[..., 1], -tn * psi.values[..., 1])


class TestCartesianHyperbolicEquivalence:
    def test_q3_rules_coincide_on_the_slice(self):
        # the mixed Cartesian form of the spatial rule equals the
        # hyperbolic-chart form pushed to the slice, state by state
        psi = gaussian_state(cart_grid(129), (0.4, -0.3), (1.0, 1.3))
        a = apply(T("Q3", TAU), psi)
        b = apply(T("Q3_cartesian", TAU), psi)
        scale = np.max(np.abs(a.values))
        assert np.max(np.abs(a.values - b.values)) < 1e-13 * scale


class TestLagrangeSymmetry:
    def test_q3_defect_vanishes_on_windowed_pairs(self):
        a = gaussian_state(NU_GRID, -0.2, 0.25, k_phase=1.0)
        b = gaussian_state(NU_GRID, 0.3, 0.2)
        assert abs(lagrange_symmetry_defect(T("Q3", 0.0), a, b)) < 1e-8

    def test_q0_defect_vanishes_on_windowed_pairs(self):
        a = gaussian_state(R_GRID, -0.5, 0.8)
        b = gaussian_state(R_GRID, 0.7, 0.6, k_phase=0.7)
        assert abs(lagrange_symmetry_defect(T("Q0", 1.0), a, b)) < 1e-8

    def test_boundary_violating_tail_produces_the_boundary_term(self):
        # phi ~ (sec nu)^-1 is outside the adjoint domain; the defect
        # equals the boundary term of the integration by parts,
        # (i/m) [sec^3(nu) conj(phi) psi] at the chart ends
        grid = chebyshev_grid("nu", 600, -math.pi / 2 + 0.02,
                              math.pi / 2 - 0.02)
        nu = grid.nodes
        sec = 1.0 / np.cos(nu)
        phi_vals = np.zeros(nu.shape + (2,), dtype=complex)
        phi_vals[:, 0] = sec**-1.0
        psi_vals = np.zeros(nu.shape + (2,), dtype=complex)
        psi_vals[:, 0] = sec**-1.5 * np.exp(0.8j * nu)
        phi = WaveFunction2(grid, phi_vals)
        psi = WaveFunction2(grid, psi_vals)
        defect = lagrange_symmetry_defect(T("Q3", 0.0), phi, psi)

        def boundary(n):
            s = 1.0 / math.cos(n)
            return 1j * s**3 * s**-1.0 * s**-1.5 * np.exp(0.8j * n)

        expect = boundary(nu[-1]) - boundary(nu[0])
        assert abs(defect) > 0.1           # significantly nonzero
        assert defect == pytest.approx(expect, rel=1e-6)


class TestGridPlumbing:
    def test_grid_mismatch(self):
        psi = gaussian_state(NU_GRID, 0.0, 0.3)
        with pytest.raises(GridMismatch):
            apply(T("Q0", 0.0), psi)
        with pytest.raises(GridMismatch):
            apply(T("Q1", 0.0), psi)   # chart is aligned with axis 3

    def test_values_shape_validated(self):
        with pytest.raises(GridMismatch):
            WaveFunction2(NU_GRID, np.zeros((7, 2)))

    def test_resolution_warning_on_underresolved_state(self):
        grid = nu_omega_grid(33)
        psi = gaussian_state(grid, (0.0, 0.8), (0.08, 0.15))
        with pytest.warns(ResolutionWarning):
            apply(T("Q3", 0.0), psi, check_resolution=True,
                  resolution_rtol=1e-10)

    def test_no_warning_when_resolved(self):
        import warnings

        grid = nu_omega_grid(129)
        psi = gaussian_state(grid, (0.0, 1.2), (0.3, 0.8))
        with warnings.catch_warnings():
            warnings.simplefilter("error", ResolutionWarning)
            apply(T("Q3", 0.0), psi, check_resolution=True,
                  resolution_rtol=1e-4)

    def test_norm_and_inner_product(self):
        psi = gaussian_state(NU_GRID, 0.0, 0.3)
        n2 = psi.norm_sq()
        assert n2 > 0
        assert psi.inner(psi) == pytest.approx(n2, rel=1e-14)

    def test_window_is_compactly_supported(self):
        w = bump_window(NU_GRID, frac=0.8)
        assert w[0] == 0.0 and w[-1] == 0.0
        assert np.max(w) <= 1.0


def test_axis_relabelled_chart_supports_q1():
    # the hyperbolic chart singles out one spatial axis; relabeling the
    # axis carries the acting rule over unchanged
    g1 = chebyshev_grid("nu", 128, -1.5, 1.5, axis=1)
    st = ext.EigenstateQ3(n=1, varphi=0.2, tau=0.1)
    psi = WaveFunction2(g1, ext.q3_eigenfunction(st, g1.nodes), tau=0.1)
    assert eigen_residual(T("Q1", 0.1), psi, st.z()) < 1e-8
    with pytest.raises(GridMismatch):
        apply(T("Q3", 0.1), psi)


def test_q0_deficiency_residual_tight():
    grid = chebyshev_grid("radial_log", 256, -5.0, 5.0)
    r = np.exp(grid.nodes)
    for sol in ext.deficiency_solutions("Q0", TAU):
        psi = WaveFunction2(grid, sol.fn(r), tau=TAU)
        assert eigen_residual(T("Q0", TAU), psi, sol.eigenvalue) < 1e-8
