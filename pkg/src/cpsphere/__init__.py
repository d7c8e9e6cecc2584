"""Ground-state dispersion potentials between an atom and a small
magnetodielectric sphere (bare or inside an empty cavity) in a homogeneous
magnetoelectric host, with the underlying dyadic-propagator identities
available as a runnable verification suite."""

__version__ = "0.1.0"

from .errors import (ConfigError, CPSphereError, QuadratureError,
                     SingularConfigurationError, ValidityError,
                     ValidityWarning)
from .green import (BulkEnvironment, Dyadic3, Environment, GreenBundle,
                    SphericalPoint, WaveContext, bulk_bundle, bulk_green,
                    bulk_green_curl_both, bulk_green_curl_left,
                    bulk_green_curl_right, bulk_trace_products,
                    duality_transform, mie_l1_full_sphere,
                    mie_l1_sphere_in_cavity, scattering_green_closed_form,
                    scattering_green_small_sphere, scatterer_induced_dyadics,
                    vector_wave_m, vector_wave_n, wavefunction_green_l1)
from .potential import (CHANNELS, PotentialResult, ScenarioConfig,
                        asymptotic_power_fit, g_function, london_limit,
                        potential_bulk_closed_form, potential_ee,
                        potential_em, potential_me, potential_mm,
                        potential_total, potential_two_atoms, retarded_limit)
from .quadrature import QuadratureResult, QuadratureSpec, integrate_semiinfinite
from .response import (AtomModel, LorentzOscillator, ResponseSpec, Transition,
                       atomic_magnetizability_at, atomic_polarizability_at,
                       local_field_electric, local_field_magnetic,
                       permittivity_at)
from .scatterer import (ClausiusMossottiResponse, PolarizabilityPair,
                        SphereAssembly, cavity_excess,
                        clausius_mossotti_assembly, clausius_mossotti_sphere,
                        excess_full_sphere, free_space_sphere,
                        point_particle_excess, sphere_in_cavity_excess,
                        sphere_in_cavity_excess_direct)
from .units import Units

__all__ = [name for name in dir() if not name.startswith("_")]
