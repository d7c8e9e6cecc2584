import numpy as np
import pytest
from numpy.testing import assert_allclose

from cpsphere.errors import SingularConfigurationError, ValidityError
from cpsphere.response import AtomModel, LorentzOscillator, ResponseSpec
from cpsphere.scatterer import (ClausiusMossottiResponse, SphereAssembly,
                                cavity_excess, clausius_mossotti_assembly,
                                clausius_mossotti_sphere, excess_full_sphere,
                                free_space_sphere, point_particle_excess,
                                sphere_in_cavity_excess,
                                sphere_in_cavity_excess_direct)


def sphere(eps, mu=1.0, radius=1.0, cavity=None):
    eps_spec = eps if not np.isscalar(eps) else (
        ResponseSpec.vacuum() if eps == 1.0 else ResponseSpec.constant(eps))
    mu_spec = mu if not np.isscalar(mu) else (
        ResponseSpec.vacuum() if mu == 1.0 else ResponseSpec.constant(mu))
    return SphereAssembly(radius=radius, eps=eps_spec, mu=mu_spec,
                          cavity_radius=cavity)


FIG3_SPHERE = ResponseSpec.lorentz(LorentzOscillator(1.0, 6.0, 1e-3))


class TestFullSphere:
    def test_index_matched_vanishes(self):
        pair = excess_full_sphere(sphere(2.0), 2.0, 1.0, 0.0)
        assert pair.alpha == 0.0

    def test_conductor_limit(self):
        pair = excess_full_sphere(sphere(1e12), 1.0, 1.0, 0.0)
        assert_allclose(pair.alpha, 1.0, atol=1e-11)

    def test_simple_contrast(self):
        pair = excess_full_sphere(sphere(2.0), 1.0, 1.0, 0.0)
        assert_allclose(pair.alpha, 0.25, rtol=1e-15)

    def test_sign_follows_contrast(self):
        assert excess_full_sphere(sphere(5.0), 2.0, 1.0, 0.0).alpha > 0.0
        assert excess_full_sphere(sphere(1.5), 2.0, 1.0, 0.0).alpha < 0.0

    def test_reduced_bounds(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            eps_s = rng.uniform(1.0, 1e4)
            host = rng.uniform(1.0, 50.0)
            a = excess_full_sphere(sphere(eps_s), host, 1.0, 0.0).alpha
            assert -0.5 < a < 1.0


class TestFreeSpace:
    def test_vacuum_sphere_vanishes(self):
        assert free_space_sphere(sphere(1.0), 0.3).alpha == 0.0

    def test_magnetic_contrast(self):
        assert_allclose(free_space_sphere(sphere(1.0, mu=2.0), 0.0).beta, 0.25,
                        rtol=1e-15)

    def test_matches_unit_host(self):
        s = sphere(FIG3_SPHERE, mu=1.5, radius=0.7)
        for xi in (0.0, 0.4, 3.0):
            a = free_space_sphere(s, xi)
            b = excess_full_sphere(s, 1.0, 1.0, xi)
            assert_allclose(a.alpha, b.alpha, rtol=1e-15)
            assert_allclose(a.beta, b.beta, rtol=1e-15)


class TestCavity:
    def test_vacuum_host_vanishes(self):
        pair = cavity_excess(1.0, 1.0, 1.0)
        assert pair.alpha == 0.0 and pair.beta == 0.0

    def test_value(self):
        assert_allclose(cavity_excess(1.0, 2.0, 1.0).alpha, -0.2, rtol=1e-15)

    def test_dense_host_limit(self):
        assert_allclose(cavity_excess(1.0, 1e12, 1.0).alpha, -0.5, atol=1e-11)

    def test_nonpositive_for_physical_host(self):
        rng = np.random.default_rng(1)
        for host in rng.uniform(1.0, 100.0, size=50):
            assert cavity_excess(2.0, host, 1.0).alpha <= 0.0


class TestSphereInCavity:
    def test_full_sphere_reduction_is_exact(self):
        s = sphere(FIG3_SPHERE, mu=2.0, radius=0.8, cavity=0.8)
        got = sphere_in_cavity_excess(s, 1.7, 1.2, 0.9)
        want = excess_full_sphere(s, 1.7, 1.2, 0.9)
        assert got.alpha == want.alpha and got.beta == want.beta

    def test_near_unit_q_continuity(self):
        s = sphere(4.0, radius=1.0 - 1e-9, cavity=1.0)
        got = sphere_in_cavity_excess(s, 1.5, 1.0, 0.0)
        want = excess_full_sphere(sphere(4.0, radius=1.0), 1.5, 1.0, 0.0)
        assert_allclose(got.alpha, want.alpha, rtol=1e-7)

    def test_vacuum_host_collapses_to_free_sphere(self):
        s = sphere(5.0, radius=0.5, cavity=1.0)
        got = sphere_in_cavity_excess(s, 1.0, 1.0, 0.0)
        assert_allclose(got.alpha, 0.5**3 * (5.0 - 1.0) / (5.0 + 2.0),
                        rtol=1e-14)

    def test_two_formulas_agree_at_resonant_statics(self):
        # strong sphere resonance against the weak host, half-size sphere
        s = sphere(37.0, radius=0.5, cavity=1.0)
        a = sphere_in_cavity_excess(s, 1.0097, 1.0, 0.0)
        b = sphere_in_cavity_excess_direct(s, 1.0097, 1.0, 0.0)
        assert_allclose(a.alpha, b.alpha, rtol=1e-12)
        assert_allclose(a.beta, b.beta, rtol=1e-12)

    def test_two_formulas_agree_randomised(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            s = sphere(rng.uniform(1.0, 80.0), mu=rng.uniform(1.0, 4.0),
                       radius=rng.uniform(0.05, 1.0), cavity=1.0)
            host_e = rng.uniform(1.0, 10.0)
            host_m = rng.uniform(1.0, 3.0)
            xi = rng.uniform(0.0, 5.0)
            a = sphere_in_cavity_excess(s, host_e, host_m, xi)
            b = sphere_in_cavity_excess_direct(s, host_e, host_m, xi)
            assert_allclose(a.alpha, b.alpha, rtol=1e-12, atol=1e-15)
            assert_allclose(a.beta, b.beta, rtol=1e-12, atol=1e-15)

    def test_point_limit(self):
        s = sphere(6.0, radius=1e-4, cavity=1.0)
        got = sphere_in_cavity_excess(s, 1.4, 1.1, 0.0)
        want = point_particle_excess(s, 1.4, 1.1, 0.0)
        assert_allclose(got.alpha, want.alpha, rtol=1e-10)
        assert_allclose(got.beta, want.beta, rtol=1e-10)

    def test_alpha_nondecreasing_in_q(self):
        qs = np.linspace(0.02, 1.0, 40)
        vals = [sphere_in_cavity_excess(sphere(10.0, radius=q, cavity=1.0),
                                        1.3, 1.0, 0.0).alpha for q in qs]
        assert np.all(np.diff(vals) >= 0.0)

    def test_requires_cavity(self):
        with pytest.raises(ValidityError):
            sphere_in_cavity_excess(sphere(2.0), 1.0, 1.0, 0.0)

    def test_singular_denominator_guard(self):
        class Unphysical:
            def at_imag(self, xi):
                return -2.0  # drives the composite denominator to zero

            def at_omega(self, omega):
                return -2.0

            high_frequency_limit = 1.0

        s = SphereAssembly(radius=1.0, eps=Unphysical(), mu=ResponseSpec.vacuum(),
                           cavity_radius=1.0 + 1e-12)
        with pytest.raises(SingularConfigurationError):
            sphere_in_cavity_excess_direct(s, 1.0, 1.0, 0.0)


class TestDuality:
    def test_all_producers_swap(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            eps_s = ResponseSpec.constant(rng.uniform(1.0, 30.0))
            mu_s = ResponseSpec.constant(rng.uniform(1.0, 4.0))
            host_e = rng.uniform(1.0, 8.0)
            host_m = rng.uniform(1.0, 3.0)
            xi = rng.uniform(0.0, 4.0)
            s = SphereAssembly(radius=0.4, eps=eps_s, mu=mu_s, cavity_radius=0.9)
            a = sphere_in_cavity_excess(s, host_e, host_m, xi)
            b = sphere_in_cavity_excess(s.dual(), host_m, host_e, xi)
            assert a.alpha == b.beta and a.beta == b.alpha
            a = excess_full_sphere(s, host_e, host_m, xi)
            b = excess_full_sphere(s.dual(), host_m, host_e, xi)
            assert a.alpha == b.beta and a.beta == b.alpha


class TestClausiusMossotti:
    def test_round_trip(self):
        atom = AtomModel.two_level(omega=1.2, static_polarizability=1e-3)
        assembly = clausius_mossotti_assembly(atom, radius=0.2)
        for xi in (0.0, 0.5, 2.0, 20.0):
            pair = free_space_sphere(assembly, xi)
            assert_allclose(pair.alpha, atom.polarizability(xi), rtol=1e-13)
            assert pair.beta == 0.0

    def test_zero_strength_atom(self):
        eps, mu = clausius_mossotti_sphere(AtomModel(), radius=0.3, xi=0.7)
        assert eps == 1.0 and mu == 1.0

    def test_quarter_ratio(self):
        # response/volume ratio 1/4 corresponds to a permittivity of 2
        atom = AtomModel.two_level(omega=1.0, static_polarizability=0.25)
        eps, _ = clausius_mossotti_sphere(atom, radius=1.0, xi=0.0)
        assert_allclose(eps, 2.0, rtol=1e-14)

    def test_volume_bound_enforced(self):
        atom = AtomModel.two_level(omega=1.0, static_polarizability=2.0)
        with pytest.raises(ValidityError):
            ClausiusMossottiResponse(atom, radius=1.0).at_imag(0.0)

    def test_magnetic_side(self):
        atom = AtomModel.two_level(omega=1.0, static_polarizability=1e-3,
                                   static_magnetizability=2e-3)
        assembly = clausius_mossotti_assembly(atom, radius=0.3)
        pair = free_space_sphere(assembly, 1.1)
        assert_allclose(pair.beta, atom.magnetizability(1.1), rtol=1e-13)


class TestAssemblyValidation:
    def test_radius_positive(self):
        with pytest.raises(ValueError):
            sphere(2.0, radius=0.0)

    def test_cavity_not_smaller(self):
        with pytest.raises(ValueError):
            sphere(2.0, radius=1.0, cavity=0.5)

    def test_q_and_volume(self):
        s = sphere(2.0, radius=0.5, cavity=2.0)
        assert_allclose(s.q, 0.25, rtol=1e-15)
        assert_allclose(s.volume, 4 * np.pi / 3 * 0.125, rtol=1e-15)
