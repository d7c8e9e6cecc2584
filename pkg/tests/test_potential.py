import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.constants import c, epsilon_0, hbar

from cpsphere.errors import ValidityError, ValidityWarning
from cpsphere.potential import (ScenarioConfig, asymptotic_power_fit,
                                g_function, london_limit,
                                potential_bulk_closed_form, potential_ee,
                                potential_em, potential_me, potential_mm,
                                potential_total, potential_two_atoms,
                                retarded_limit)
from cpsphere.quadrature import QuadratureSpec, integrate_semiinfinite
from cpsphere.response import AtomModel, LorentzOscillator, ResponseSpec
from cpsphere.scatterer import SphereAssembly, excess_full_sphere
from cpsphere.units import Units
from cpsphere.verify import (closed_form_screening_residual,
                             duality_potential_residual,
                             london_limit_residual,
                             reduction_two_atom_residual, random_scenario,
                             retarded_limit_residual, weak_host_material)

VAC = ResponseSpec.vacuum()
TIGHT = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-60)


def bare_sphere(eps_value, radius=5e-5, mu_value=None):
    mu = VAC if mu_value is None else ResponseSpec.constant(mu_value)
    eps = VAC if eps_value == 1.0 else ResponseSpec.constant(eps_value)
    return SphereAssembly(radius=radius, eps=eps, mu=mu)


class TestGFunction:
    def test_anchor_values(self):
        assert g_function(0.0) == 3.0
        assert_allclose(g_function(1.0), 17.0 * np.exp(-2.0), rtol=1e-15)
        assert_allclose(g_function(10.0), 12563.0 * np.exp(-20.0), rtol=1e-15)

    def test_positive_decreasing(self):
        x = np.linspace(0.0, 20.0, 500)
        vals = g_function(x)
        assert np.all(vals > 0.0)
        assert np.all(np.diff(vals) < 0.0)

    def test_domain(self):
        with pytest.raises(ValueError):
            g_function(-0.1)


class TestElectricChannel:
    def test_index_matched_vanishes(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(2.0),
                             host_eps=ResponseSpec.constant(2.0),
                             separation=1.0, channels=("ee",))
        assert potential_ee(cfg) == 0.0

    def test_attractive_for_denser_sphere(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(4.0), separation=2.0,
                             channels=("ee",))
        assert potential_ee(cfg) < 0.0

    def test_retarded_coefficient(self):
        assert retarded_limit_residual() < 1e-2

    def test_nonretarded_integral(self):
        assert london_limit_residual() < 5e-3


class TestMagneticMixing:
    def test_zero_for_nonmagnetic_sphere(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(3.0), separation=1.0)
        assert potential_em(cfg) == 0.0

    def test_sign_computed_not_assumed(self):
        # positive magnetic contrast must come out repulsive through the
        # actual trace evaluation
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(1.0, mu_value=3.0),
                             separation=1.0, channels=("em",))
        pair = excess_full_sphere(cfg.partner, 1.0, 1.0, 0.0)
        assert pair.beta > 0.0
        assert potential_em(cfg, TIGHT) > 0.0

    def test_zero_for_nonmagnetic_atom(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(3.0, mu_value=2.0),
                             separation=1.0)
        assert potential_me(cfg) == 0.0
        assert potential_mm(cfg) == 0.0

    def test_direct_route_agrees_with_duality_route(self):
        rng = np.random.default_rng(41)
        for _ in range(5):
            cfg = random_scenario(rng)
            me_dual = potential_me(cfg, TIGHT, route="duality")
            me_direct = potential_me(cfg, TIGHT, route="direct")
            assert_allclose(me_direct, me_dual, rtol=1e-9)
            mm_dual = potential_mm(cfg, TIGHT, route="duality")
            mm_direct = potential_mm(cfg, TIGHT, route="direct")
            assert_allclose(mm_direct, mm_dual, rtol=1e-9)

    def test_self_dual_configuration(self):
        osc = LorentzOscillator(1.1, 0.5, 1e-3)
        host = ResponseSpec.lorentz(osc)
        sphere_resp = ResponseSpec.lorentz(LorentzOscillator(0.9, 2.0, 1e-3))
        cfg = ScenarioConfig(
            atom=AtomModel.two_level(omega=1.0, static_polarizability=0.7,
                                     static_magnetizability=0.7),
            partner=SphereAssembly(radius=2e-3, eps=sphere_resp, mu=sphere_resp),
            host_eps=host, host_mu=host, separation=1.5)
        res = potential_total(cfg, TIGHT, route="direct")
        assert_allclose(res.channels["ee"], res.channels["mm"], rtol=1e-10)
        assert_allclose(res.channels["em"], res.channels["me"], rtol=1e-10)


class TestChannelsAgainstTensorRoute:
    """The channel integrals must agree with the base formulas built from
    the tensor-level scatterer dyadics: frequency^2 times the trace of the
    induced dyadic for an electric atom, and the trace of its double-curled
    counterpart for a magnetic atom.  This pins every channel's frequency
    powers and prefactors to the propagator compositions."""

    @staticmethod
    def _setup():
        from cpsphere.green import (WaveContext, bulk_green_curl_both,
                                    bulk_green_curl_left,
                                    bulk_green_curl_right,
                                    scattering_green_small_sphere)
        from cpsphere.response import (local_field_electric,
                                       local_field_magnetic)
        from cpsphere.scatterer import sphere_in_cavity_excess

        atom = AtomModel.two_level(omega=1.1, static_polarizability=0.8,
                                   static_magnetizability=0.5)
        partner = SphereAssembly(
            radius=2e-3,
            eps=ResponseSpec.lorentz(LorentzOscillator(1.0, 2.5, 1e-3)),
            mu=ResponseSpec.constant(1.8), cavity_radius=4e-3)
        cfg = ScenarioConfig(atom=atom, partner=partner,
                             host_eps=weak_host_material(),
                             host_mu=ResponseSpec.constant(1.2),
                             separation=1.3)
        r = cfg.separation
        rho = np.array([0.0, 0.0, r])

        def pieces(xi):
            eps = cfg.host_eps.at_imag(xi)
            mu = cfg.host_mu.at_imag(xi)
            pair = sphere_in_cavity_excess(partner, eps, mu, xi)
            ctx = WaveContext.imaginary_axis(xi, eps, mu)
            return eps, mu, pair, ctx

        def electric_integrand(xi):
            eps, mu, pair, ctx = pieces(xi)
            dyad = scattering_green_small_sphere(rho, ctx, pair)
            return xi**2 * atom.polarizability(xi) \
                * local_field_electric(eps) ** 2 * dyad.trace.real / (2 * np.pi)

        def magnetic_integrand(xi):
            eps, mu, pair, ctx = pieces(xi)
            w2 = ctx.omega**2
            curled = (eps * pair.alpha * w2) \
                * (bulk_green_curl_left(rho, ctx)
                   @ bulk_green_curl_right(-rho, ctx)) \
                - (pair.beta / mu) * (bulk_green_curl_both(rho, ctx)
                                      @ bulk_green_curl_both(-rho, ctx))
            return atom.magnetizability(xi) * local_field_magnetic(mu) ** 2 \
                * curled.trace.real / (2 * np.pi)

        return cfg, electric_integrand, magnetic_integrand

    def test_electric_atom_base_formula(self):
        cfg, electric_integrand, _ = self._setup()
        base = integrate_semiinfinite(electric_integrand, TIGHT,
                                      decay_scale=2.0 * cfg.separation)
        channels = potential_ee(cfg, TIGHT) + potential_em(cfg, TIGHT)
        assert_allclose(base.value, channels, rtol=1e-10)

    def test_magnetic_atom_base_formula(self):
        cfg, _, magnetic_integrand = self._setup()
        base = integrate_semiinfinite(magnetic_integrand, TIGHT,
                                      decay_scale=2.0 * cfg.separation)
        channels = potential_me(cfg, TIGHT) + potential_mm(cfg, TIGHT)
        assert_allclose(base.value, channels, rtol=1e-10)


class TestTotals:
    def test_single_channel_total(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(4.0), separation=1.0,
                             channels=("ee",))
        res = potential_total(cfg)
        assert res.total == res.channels["ee"]
        assert set(res.channels) == {"ee"}

    def test_all_channels_nonmagnetic_everything(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(4.0), separation=1.0)
        res = potential_total(cfg)
        assert res.total == res.channels["ee"]
        assert res.channels["em"] == res.channels["me"] == res.channels["mm"] == 0.0

    def test_duality_invariance_sample(self):
        assert duality_potential_residual(n_configs=10, seed=99) < 1e-9

    def test_error_bounds_tighter_rerun(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(4.0, radius=2e-3),
                             host_eps=weak_host_material(), separation=1.0,
                             channels=("ee",))
        spec = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-30)
        tight = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-31)
        res = potential_total(cfg, spec)
        res_tight = potential_total(cfg, tight)
        assert abs(res.total - res_tight.total) <= res.errors["ee"]


class TestTwoAtoms:
    def test_nonretarded_regime(self):
        atom = AtomModel.two_level()
        partner = AtomModel.two_level(omega=1.4, static_polarizability=0.6)
        r = 1e-3
        got = potential_two_atoms(atom, partner, VAC, VAC, r, TIGHT)

        def product(xi):
            return atom.polarizability(xi) * partner.polarizability(xi)

        integral = integrate_semiinfinite(product, TIGHT, decay_scale=1.0)
        want = -3.0 * integral.value / (np.pi * r**6)
        assert_allclose(got, want, rtol=5e-3)

    def test_retarded_regime(self):
        atom = AtomModel.two_level()
        partner = AtomModel.two_level(omega=1.4, static_polarizability=0.6)
        got = potential_two_atoms(atom, partner, VAC, VAC, 100.0, TIGHT)
        want = retarded_limit(atom, partner.static_polarizability, 100.0)
        assert_allclose(got, want, rtol=1e-2)

    def test_point_sphere_equivalence(self):
        assert reduction_two_atom_residual() < 1e-3

    def test_scenario_config_two_atom_mode(self):
        atom = AtomModel.two_level()
        partner = AtomModel.two_level(omega=2.0, static_polarizability=0.5)
        cfg = ScenarioConfig(atom=atom, partner=partner, separation=1.0,
                             channels=("ee",))
        res = potential_total(cfg, TIGHT)
        want = potential_two_atoms(atom, partner, VAC, VAC, 1.0, TIGHT)
        assert res.total == want

    def test_two_atom_mode_rejects_magnetic_channels(self):
        with pytest.raises(ValidityError):
            ScenarioConfig(atom=AtomModel.two_level(),
                           partner=AtomModel.two_level(), separation=1.0,
                           channels=("ee", "mm"))


class TestClosedForm:
    def test_vacuum_host_matches_general_route(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(5.0, radius=1e-3),
                             separation=1.0, channels=("ee",))
        assert_allclose(potential_bulk_closed_form(cfg, TIGHT),
                        potential_ee(cfg, TIGHT), rtol=1e-12)

    def test_screening_resolution(self):
        residual, alternative_dev = closed_form_screening_residual()
        assert residual < 1e-10
        assert alternative_dev > 1e-3  # rejected placement stays distinguishable

    def test_restriction_magnetic_atom(self):
        cfg = ScenarioConfig(
            atom=AtomModel.two_level(static_magnetizability=0.5),
            partner=bare_sphere(5.0), separation=1.0)
        with pytest.raises(ValidityError):
            potential_bulk_closed_form(cfg)

    def test_restriction_magnetic_sphere(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(5.0, mu_value=2.0),
                             separation=1.0)
        with pytest.raises(ValidityError):
            potential_bulk_closed_form(cfg)

    def test_restriction_two_atom(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=AtomModel.two_level(), separation=1.0,
                             channels=("ee",))
        with pytest.raises(ValidityError):
            potential_bulk_closed_form(cfg)


class TestResonantSphereGrid:
    @staticmethod
    def scenario(q, separation):
        from cpsphere.verify import resonant_sphere_material
        cavity_radius = 0.015
        return ScenarioConfig(
            atom=AtomModel.two_level(),
            partner=SphereAssembly(radius=q * cavity_radius,
                                   eps=resonant_sphere_material(),
                                   mu=VAC, cavity_radius=cavity_radius),
            host_eps=weak_host_material(), host_mu=VAC,
            separation=separation, channels=("ee",))

    def test_attraction_grows_with_sphere_size(self):
        # strong-resonance sphere in the weak host: attractive everywhere on
        # the grid and strictly deeper for larger spheres at each separation
        quad = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-40)
        for sep in (1.0, 3.0, 10.0):
            values = [potential_bulk_closed_form(self.scenario(q, sep), quad)
                      for q in (0.25, 0.5, 1.0)]
            assert all(v < 0.0 for v in values)
            assert np.all(np.diff(np.abs(values)) > 0.0)

    def test_cavity_reflection_dominates_tiny_spheres(self):
        # below q ~ 0.15 the cavity's own (repulsive) reflection outweighs
        # the transmitted sphere response for these materials; the monotone
        # attractive window therefore starts above the crossover
        quad = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-40)
        assert potential_bulk_closed_form(self.scenario(0.05, 1.0), quad) > 0.0
        assert potential_bulk_closed_form(self.scenario(0.2, 1.0), quad) < 0.0


class TestLimitsOps:
    def test_power_law_structure(self):
        atom = AtomModel.two_level()
        assert_allclose(london_limit(atom, 0.3, 2.0) / london_limit(atom, 0.3, 1.0),
                        2.0**-6, rtol=1e-15)
        assert_allclose(retarded_limit(atom, 0.3, 2.0)
                        / retarded_limit(atom, 0.3, 1.0), 2.0**-7, rtol=1e-15)

    def test_london_closed_form_matches_quadrature(self):
        # the transition-sum integral has the closed value (pi/3) sum s_k
        atom = AtomModel.two_level(omega=1.7, static_polarizability=0.9)
        partner_alpha = 0.25
        r = 2.0
        want = london_limit(atom, partner_alpha, r)
        integral = integrate_semiinfinite(atom.polarizability, TIGHT,
                                          decay_scale=1.0)
        got = -3.0 * partner_alpha * integral.value / (np.pi * r**6)
        assert_allclose(got, want, rtol=1e-12)

    def test_identical_atoms_analytic_integral(self):
        # two identical single-transition atoms: the squared-response
        # integral is (pi/4) alpha0^2 omega exactly
        omega, alpha0 = 1.3, 0.8
        atom = AtomModel.two_level(omega=omega, static_polarizability=alpha0)

        def squared(xi):
            return atom.polarizability(xi) ** 2

        integral = integrate_semiinfinite(squared, TIGHT, decay_scale=1.0)
        assert_allclose(integral.value, (np.pi / 4.0) * alpha0**2 * omega,
                        rtol=1e-12)
        r = 3.0
        got = -3.0 * integral.value / (np.pi * r**6)
        want = -3.0 * alpha0**2 * omega / (4.0 * r**6)
        assert_allclose(got, want, rtol=1e-12)

    def test_power_fit_synthetic(self):
        r = np.geomspace(0.1, 10.0, 30)
        assert_allclose(asymptotic_power_fit(r, 5.0 * r**-6.0), -6.0,
                        rtol=1e-12)

    def test_power_fit_validation(self):
        with pytest.raises(ValueError):
            asymptotic_power_fit([1.0, 2.0], [1.0, -1.0])
        with pytest.raises(ValueError):
            asymptotic_power_fit([1.0], [1.0])


class TestValidityGuard:
    def test_error_inside_exclusion_zone(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(30.0, radius=0.2),
                             separation=1.0, channels=("ee",))
        with pytest.raises(ValidityError):
            potential_ee(cfg)

    def test_warning_near_exclusion_zone(self):
        cfg = ScenarioConfig(atom=AtomModel.two_level(),
                             partner=bare_sphere(30.0, radius=0.05),
                             separation=1.0, channels=("ee",))
        with pytest.warns(ValidityWarning):
            res = potential_total(cfg)
        assert len(res.warnings) == 1

    def test_atom_host_must_match_bulk(self):
        with pytest.raises(ValidityError):
            ScenarioConfig(atom=AtomModel.two_level(),
                           partner=bare_sphere(2.0), separation=1.0,
                           atom_host_eps=ResponseSpec.constant(3.0))

    def test_channel_validation(self):
        with pytest.raises(ValueError):
            ScenarioConfig(atom=AtomModel.two_level(),
                           partner=bare_sphere(2.0), separation=1.0,
                           channels=("xy",))


class TestReducedAgainstSI:
    def test_prefactor_against_full_si_evaluation(self):
        """One-time dimensional lock: the reduced channel value against the
        same integral assembled entirely in SI quantities."""
        units = Units(omega_ref=2.455e15)
        lam = units.length_scale
        atom = AtomModel.two_level(omega=1.0, static_polarizability=1.0)
        sphere = bare_sphere(4.0, radius=1e-3)
        host = weak_host_material()
        cfg = ScenarioConfig(atom=atom, partner=sphere, host_eps=host,
                             separation=1.0, channels=("ee",))
        u_reduced = potential_ee(cfg, TIGHT)

        # SI ingredients
        d_sq = units.dipole_strength_from_reduced(atom.electric[0].strength)
        omega_at = units.omega_ref
        r_si = lam
        radius_si = 1e-3 * lam
        osc = host.oscillators[0]
        w_t = osc.omega_t * units.omega_ref
        w_p = osc.omega_p * units.omega_ref
        gam = osc.gamma * units.omega_ref

        def integrand(xi_hat):
            xi = xi_hat * units.omega_ref  # SI integration variable
            eps = 1.0 + w_p**2 / (w_t**2 + xi**2 + gam * xi)
            alpha_atom = (2.0 / (3.0 * hbar)) * omega_at * d_sq \
                / (omega_at**2 + xi**2)
            alpha_sphere = 4.0 * np.pi * epsilon_0 * radius_si**3 \
                * (4.0 - eps) / (4.0 + 2.0 * eps)
            loc = 3.0 * eps / (2.0 * eps + 1.0)
            x = np.sqrt(eps) * xi * r_si / c
            return -hbar / (16.0 * np.pi**3 * epsilon_0**2 * r_si**6) \
                * loc**2 * alpha_atom * alpha_sphere / eps \
                * g_function(x) * units.omega_ref

        u_si = integrate_semiinfinite(integrand, TIGHT, decay_scale=2.0).value
        assert_allclose(units.energy_from_reduced(u_reduced), u_si, rtol=1e-10)
