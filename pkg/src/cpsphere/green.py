"""Dyadic propagators in a homogeneous magnetoelectric medium, the dyadic
induced by a small scatterer, l=1 spherical vector waves, and the
electric/magnetic duality map.

Conventions
-----------
* Reduced units: lengths in c/omega_ref, frequencies in omega_ref, so the
  medium wave number is ``k = sqrt(eps mu) omega``.
* Tensors carry the 4*pi*(c/omega_ref) scale absorbed (the scalar spherical
  wave is ``exp(i k r)/r`` with no 1/4pi).
* ``curl_left`` differentiates the field point (first index), ``curl_right``
  the source point (second index); displacements are field minus source.
* On the imaginary axis (``omega = i xi`` with real response values) every
  tensor here is real; complex dtype is kept for generality and the
  imaginary parts vanish to rounding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidityError, ValidityWarning
from .scatterer import PolarizabilityPair, SphereAssembly

SMALL_SPHERE_WARN = 0.1
SMALL_SPHERE_FAIL = 1.0
GUARD_FAIL_FACTOR = 2.0
GUARD_WARN_FACTOR = 5.0


@dataclass(frozen=True)
class WaveContext:
    """Frequency and host response values at one evaluation frequency."""

    omega: complex
    eps: complex
    mu: complex

    @classmethod
    def imaginary_axis(cls, xi: float, eps: float, mu: float) -> "WaveContext":
        if xi < 0.0:
            raise ValueError("xi must be >= 0")
        return cls(omega=1j * xi, eps=eps, mu=mu)

    @property
    def k(self) -> complex:
        """Medium wave number sqrt(eps mu) * omega, principal branch."""
        return np.sqrt(complex(self.eps) * complex(self.mu)) * self.omega

    @property
    def refractive_index(self) -> complex:
        return np.sqrt(complex(self.eps) * complex(self.mu))

    def dual(self) -> "WaveContext":
        return WaveContext(omega=self.omega, eps=self.mu, mu=self.eps)


@dataclass(frozen=True)
class SphericalPoint:
    """Point in spherical coordinates (r > 0, theta in [0, pi], phi)."""

    r: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if self.r <= 0.0:
            raise ValueError("radial coordinate must be > 0")
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError("polar angle must lie in [0, pi]")

    @classmethod
    def from_cartesian(cls, v) -> "SphericalPoint":
        x, y, z = np.asarray(v, dtype=float)
        r = float(np.sqrt(x * x + y * y + z * z))
        if r == 0.0:
            raise ValueError("origin has no spherical representation")
        theta = float(np.arccos(np.clip(z / r, -1.0, 1.0)))
        phi = float(np.mod(np.arctan2(y, x), 2.0 * np.pi))
        return cls(r=r, theta=theta, phi=phi)

    def to_cartesian(self) -> np.ndarray:
        st, ct = np.sin(self.theta), np.cos(self.theta)
        sp, cp = np.sin(self.phi), np.cos(self.phi)
        return self.r * np.array([st * cp, st * sp, ct])

    def unit_vectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Orthonormal triad (e_r, e_theta, e_phi) at this point."""
        st, ct = np.sin(self.theta), np.cos(self.theta)
        sp, cp = np.sin(self.phi), np.cos(self.phi)
        e_r = np.array([st * cp, st * sp, ct])
        e_t = np.array([ct * cp, ct * sp, -st])
        e_p = np.array([-sp, cp, 0.0])
        return e_r, e_t, e_p


class Dyadic3:
    """A 3x3 complex tensor value with the small algebra needed here."""

    __slots__ = ("m",)

    def __init__(self, m):
        self.m = np.asarray(m, dtype=complex)
        if self.m.shape != (3, 3):
            raise ValueError("Dyadic3 requires a 3x3 array")

    @classmethod
    def radial(cls, a: complex, b: complex, e_r) -> "Dyadic3":
        """Symmetric form a*I + b*(e_r outer e_r)."""
        e = np.asarray(e_r, dtype=float)
        return cls(a * np.eye(3) + b * np.outer(e, e))

    @classmethod
    def zero(cls) -> "Dyadic3":
        return cls(np.zeros((3, 3)))

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.m))

    @property
    def T(self) -> "Dyadic3":
        return Dyadic3(self.m.T)

    def __add__(self, other: "Dyadic3") -> "Dyadic3":
        return Dyadic3(self.m + other.m)

    def __sub__(self, other: "Dyadic3") -> "Dyadic3":
        return Dyadic3(self.m - other.m)

    def __mul__(self, scalar) -> "Dyadic3":
        return Dyadic3(self.m * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "Dyadic3":
        return Dyadic3(-self.m)

    def __matmul__(self, other: "Dyadic3") -> "Dyadic3":
        return Dyadic3(self.m @ other.m)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.m)))

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = max(self.max_abs(), 1.0)
        return float(np.max(np.abs(self.m.imag))) <= tol * scale

    def __repr__(self) -> str:  # pragma: no cover
        return f"Dyadic3({self.m!r})"


def cross_matrix(e) -> np.ndarray:
    """Skew matrix E with E @ v = e x v."""
    ex, ey, ez = np.asarray(e, dtype=float)
    return np.array([[0.0, -ez, ey],
                     [ez, 0.0, -ex],
                     [-ey, ex, 0.0]])


def _split(rho):
    v = np.asarray(rho, dtype=float)
    r = float(np.linalg.norm(v))
    if r == 0.0:
        raise ValidityError("bulk propagator is singular at zero separation")
    return r, v / r


def _scalar_wave_parts(k: complex, r: float):
    """exp(ikr)/r and its first two radial derivatives."""
    g = np.exp(1j * k * r) / r
    g1 = (1j * k - 1.0 / r) * g
    g2 = (-k * k - 2j * k / r + 2.0 / r**2) * g
    return g, g1, g2


def bulk_green(rho, ctx: WaveContext) -> Dyadic3:
    """Propagator of the homogeneous medium at displacement rho != 0.

    Built as ``mu (I + grad grad / k^2)`` acting on the scalar spherical
    wave; symmetric, of the form a*I + b*(e e), and reciprocal:
    G(rho) = G(-rho)^T.
    """
    r, e = _split(rho)
    k = ctx.k
    g, g1, g2 = _scalar_wave_parts(k, r)
    a = ctx.mu * (g + g1 / (k * k * r))
    b = ctx.mu * (g2 - g1 / r) / (k * k)
    return Dyadic3.radial(a, b, e)


def _curl_coefficient(ctx: WaveContext, r: float) -> complex:
    _, g1, _ = _scalar_wave_parts(ctx.k, r)
    return ctx.mu * g1


def bulk_green_curl_left(rho, ctx: WaveContext) -> Dyadic3:
    """Curl on the field point: mu g'(r) (e x)."""
    r, e = _split(rho)
    return Dyadic3(_curl_coefficient(ctx, r) * cross_matrix(e))


def bulk_green_curl_right(rho, ctx: WaveContext) -> Dyadic3:
    """Curl on the source point: -mu g'(r) (e x)."""
    r, e = _split(rho)
    return Dyadic3(-_curl_coefficient(ctx, r) * cross_matrix(e))


def bulk_green_curl_both(rho, ctx: WaveContext) -> Dyadic3:
    """Curl on both points; symmetric radial form like the propagator."""
    r, e = _split(rho)
    g, g1, g2 = _scalar_wave_parts(ctx.k, r)
    a = ctx.mu * (g2 + g1 / r)
    b = ctx.mu * (g1 / r - g2)
    return Dyadic3.radial(a, b, e)


@dataclass(frozen=True)
class GreenBundle:
    """Propagator and its three curls at one (displacement, frequency)."""

    green: Dyadic3
    curl_left: Dyadic3
    curl_right: Dyadic3
    curl_both: Dyadic3
    omega: complex
    eps: complex
    mu: complex


def bulk_bundle(rho, ctx: WaveContext) -> GreenBundle:
    return GreenBundle(green=bulk_green(rho, ctx),
                       curl_left=bulk_green_curl_left(rho, ctx),
                       curl_right=bulk_green_curl_right(rho, ctx),
                       curl_both=bulk_green_curl_both(rho, ctx),
                       omega=ctx.omega, eps=ctx.eps, mu=ctx.mu)


def duality_transform(bundle: GreenBundle) -> GreenBundle:
    """Map a propagator bundle to the one of the swapped medium (eps <-> mu).

    The four rules exchange the roles of the plain propagator and its double
    curl and cross-map the single curls; applying the transform twice is the
    identity.
    """
    w2 = bundle.omega * bundle.omega
    return GreenBundle(
        green=(-1.0 / (w2 * bundle.mu * bundle.mu)) * bundle.curl_both,
        curl_both=(-bundle.eps * bundle.eps * w2) * bundle.green,
        curl_left=(-bundle.eps / bundle.mu) * bundle.curl_right,
        curl_right=(-bundle.eps / bundle.mu) * bundle.curl_left,
        omega=bundle.omega, eps=bundle.mu, mu=bundle.eps)


def _require_small(label: str, value: float) -> None:
    if value >= SMALL_SPHERE_FAIL:
        raise ValidityError(
            f"small-sphere limit violated: |{label}| = {value:.3g} >= 1")
    if value >= SMALL_SPHERE_WARN:
        warnings.warn(f"small-sphere parameter |{label}| = {value:.3g} "
                      "exceeds 0.1; dipole truncation degrades",
                      ValidityWarning, stacklevel=3)


def mie_l1_full_sphere(assembly: SphereAssembly, ctx: WaveContext) -> tuple:
    """Dipole (l=1) reflection coefficients (B1M, B1N) of the bare sphere.

    ``B1N = (2i/3) (kR)^3 (eps_s - eps)/(eps_s + 2 eps)`` and the magnetic
    analogue; valid for |k_s R|, |k R| well below one.
    """
    eps_s = assembly.eps.at_omega(ctx.omega)
    mu_s = assembly.mu.at_omega(ctx.omega)
    k_s = np.sqrt(eps_s * mu_s) * ctx.omega
    _require_small("k_s R", abs(k_s) * assembly.radius)
    _require_small("k R", abs(ctx.k) * assembly.radius)
    pref = (2j / 3.0) * (ctx.k * assembly.radius) ** 3
    b1n = pref * (eps_s - ctx.eps) / (eps_s + 2.0 * ctx.eps)
    b1m = pref * (mu_s - ctx.mu) / (mu_s + 2.0 * ctx.mu)
    return b1m, b1n


def mie_l1_sphere_in_cavity(assembly: SphereAssembly, ctx: WaveContext) -> tuple:
    """Dipole reflection coefficients of the sphere-plus-cavity composite."""
    if assembly.cavity_radius is None:
        return mie_l1_full_sphere(assembly, ctx)
    eps_s = assembly.eps.at_omega(ctx.omega)
    mu_s = assembly.mu.at_omega(ctx.omega)
    k_s = np.sqrt(eps_s * mu_s) * ctx.omega
    _require_small("k_s R", abs(k_s) * assembly.radius)
    _require_small("k R_C", abs(ctx.k) * assembly.cavity_radius)

    r3 = assembly.radius**3
    rc3 = assembly.cavity_radius**3
    q3 = r3 / rc3

    def bracket(inner, host):
        return rc3 * (1.0 - host) / (1.0 + 2.0 * host) \
            + 9.0 * host * r3 * (inner - 1.0) / (2.0 * host + 1.0) \
            / ((inner + 2.0) * (2.0 * host + 1.0)
               + 2.0 * (inner - 1.0) * (1.0 - host) * q3)

    pref = (2j / 3.0) * (ctx.refractive_index * ctx.omega) ** 3
    return pref * bracket(mu_s, ctx.mu), pref * bracket(eps_s, ctx.eps)


def _guard_distance(r: float, ctx: WaveContext, effective_radius: float) -> None:
    if effective_radius <= 0.0:
        return
    reach = abs(ctx.refractive_index) * effective_radius
    if r <= GUARD_FAIL_FACTOR * reach:
        raise ValidityError(
            f"evaluation distance {r:.3g} inside the exclusion zone "
            f"{GUARD_FAIL_FACTOR:g} x {reach:.3g} of the scatterer")
    if r < GUARD_WARN_FACTOR * reach:
        warnings.warn(
            f"evaluation distance {r:.3g} within {GUARD_WARN_FACTOR:g} "
            f"effective radii ({reach:.3g}); point-scatterer accuracy degrades",
            ValidityWarning, stacklevel=3)


def scattering_green_small_sphere(r_vec, ctx: WaveContext,
                                  pair: PolarizabilityPair,
                                  effective_radius: float = 0.0) -> Dyadic3:
    """Scatterer-induced propagator correction at the source's own position.

    Composes out-and-back products of the bulk propagator: the electric
    response couples through plain propagation, the magnetic response
    through single-curled propagation.  ``r_vec`` is the position relative
    to the scatterer centre.
    """
    r, _ = _split(r_vec)
    _guard_distance(r, ctx, effective_radius)
    out_and_back = bulk_green(r_vec, ctx) @ bulk_green(-np.asarray(r_vec), ctx)
    curled = bulk_green_curl_right(r_vec, ctx) @ bulk_green_curl_left(
        -np.asarray(r_vec), ctx)
    w2 = ctx.omega * ctx.omega
    return (ctx.eps * pair.alpha * w2) * out_and_back \
        - (pair.beta / ctx.mu) * curled


def scattering_green_closed_form(r_vec, ctx: WaveContext,
                                 pair: PolarizabilityPair) -> Dyadic3:
    """Closed polynomial-times-exponential form of the same dyadic.

    Independent transcription used to verify the product composition.
    """
    r, e = _split(r_vec)
    k = ctx.k
    u = k * r
    phase = np.exp(2j * u)
    pref_e = ctx.mu * phase / (k * k * r**6) * pair.alpha
    coef_i = 1.0 - 2j * u - 3.0 * u**2 + 2j * u**3 + u**4
    coef_r = 3.0 - 6j * u - u**2 - 2j * u**3 - u**4
    pref_m = ctx.mu * phase / r**4 * pair.beta
    coef_m = 1.0 - 2j * u - u**2
    return Dyadic3.radial(pref_e * coef_i + pref_m * coef_m,
                          pref_e * coef_r - pref_m * coef_m, e)


# l = 1 angular factors: P_1^0 = cos(theta), P_1^1 = -sin(theta).  The
# m/sin(theta) combinations are entire, so the poles need no special casing.
def _angular_factors(m: int, theta: float) -> tuple:
    if m == 0:
        return 0.0, -np.sin(theta)          # m P/sin, dP/dtheta
    return -1.0, -np.cos(theta)


def _radial_factors(u: complex) -> tuple:
    """Outgoing l=1 spherical wave h(u) and d[u h(u)]/du in closed form."""
    h = -1j * (1.0 - 1j * u) * np.exp(1j * u) / (u * u)
    hp = -1j * np.exp(1j * u) * (u * u - 1.0 + 1j * u) / (u * u)
    return h, hp


def vector_wave_m(m: int, parity: str, point: SphericalPoint,
                  ctx: WaveContext) -> np.ndarray:
    """Transverse-electric l=1 vector wave, Cartesian components.

    ``parity`` selects the (even=cos, odd=sin) azimuthal pairing.
    """
    if m not in (0, 1):
        raise ValueError("l = 1 admits m in {0, 1}")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    u = ctx.k * point.r
    h, _ = _radial_factors(u)
    pi_m, tau_m = _angular_factors(m, point.theta)
    _, e_t, e_p = point.unit_vectors()
    c, s = np.cos(m * point.phi), np.sin(m * point.phi)
    if parity == "even":
        comp_t, comp_p = -h * pi_m * s, -h * tau_m * c
    else:
        comp_t, comp_p = h * pi_m * c, -h * tau_m * s
    return comp_t * e_t.astype(complex) + comp_p * e_p.astype(complex)


def vector_wave_n(m: int, parity: str, point: SphericalPoint,
                  ctx: WaveContext) -> np.ndarray:
    """Transverse-magnetic l=1 vector wave, Cartesian components."""
    if m not in (0, 1):
        raise ValueError("l = 1 admits m in {0, 1}")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    u = ctx.k * point.r
    h, hp = _radial_factors(u)
    pi_m, tau_m = _angular_factors(m, point.theta)
    legendre = np.cos(point.theta) if m == 0 else -np.sin(point.theta)
    e_r, e_t, e_p = point.unit_vectors()
    c, s = np.cos(m * point.phi), np.sin(m * point.phi)
    if parity == "even":
        comp_r = 2.0 * (h / u) * legendre * c
        comp_t = (hp / u) * tau_m * c
        comp_p = -(hp / u) * pi_m * s
    else:
        comp_r = 2.0 * (h / u) * legendre * s
        comp_t = (hp / u) * tau_m * s
        comp_p = (hp / u) * pi_m * c
    return (comp_r * e_r.astype(complex) + comp_t * e_t.astype(complex)
            + comp_p * e_p.astype(complex))


def wavefunction_green_l1(point: SphericalPoint, ctx: WaveContext,
                          b1m: complex, b1n: complex) -> Dyadic3:
    """Scatterer dyadic assembled from the l=1 vector-wave expansion.

    Sums the outer products of the individual wave functions over azimuthal
    order and parity (the l=1 normalisation weights are unity) with the
    dipole reflection coefficients; serves as the independent oracle for
    :func:`scattering_green_closed_form`.
    """
    total = np.zeros((3, 3), dtype=complex)
    for m in (0, 1):
        for parity in ("even", "odd"):
            wm = vector_wave_m(m, parity, point, ctx)
            wn = vector_wave_n(m, parity, point, ctx)
            total = total + b1m * np.outer(wm, wm) + b1n * np.outer(wn, wn)
    pref = 1j * ctx.mu * ctx.k * 1.5
    return Dyadic3(pref * total)


def bulk_trace_products(r: float, xi, eps, mu) -> tuple:
    """Traces of the three out-and-back propagator compositions at
    separation r on the imaginary axis, vectorised over xi.

    Composes the radial coefficients of the bulk tensors exactly as the
    matrix products in :func:`scattering_green_small_sphere` do (a test pins
    the two routes together); real arithmetic, no closed-form shortcuts.

    Returns (plain, single-curled, double-curled) traces.
    """
    xi = np.asarray(xi, dtype=float)
    eps = np.asarray(eps, dtype=float)
    mu = np.asarray(mu, dtype=float)
    x = np.sqrt(eps * mu) * xi * r
    decay = np.exp(-x)
    # radial coefficients of the three bulk tensors at omega = i xi
    a_g = mu * decay * (1.0 + x + x * x) / (x * x * r)
    b_g = -mu * decay * (3.0 + 3.0 * x + x * x) / (x * x * r)
    c_curl = mu * decay * (1.0 + x) / (r * r)
    a_d = mu * decay * (1.0 + x + x * x) / r**3
    b_d = -mu * decay * (3.0 + 3.0 * x + x * x) / r**3

    def sym_product_trace(a, b):
        # trace of (aI + b ee)(aI + b ee)
        return 3.0 * a * a + 2.0 * a * b + b * b

    # single-curl tensors are c (e x); the out-and-back composition picks up
    # (-c)(-c) (e x)(e x), whose trace is -2 c^2
    return (sym_product_trace(a_g, b_g),
            -2.0 * c_curl * c_curl,
            sym_product_trace(a_d, b_d))


class Environment:
    """Interface of an environment able to report propagator bundles and
    local response values; only the homogeneous bulk implementation ships."""

    def response_at(self, position, xi) -> tuple:  # pragma: no cover
        raise NotImplementedError

    def bundle(self, r_field, r_source, xi) -> GreenBundle:  # pragma: no cover
        raise NotImplementedError


def scatterer_induced_dyadics(env: Environment, r_field, r_scatterer, xi,
                              pair: PolarizabilityPair) -> tuple:
    """Scatterer-induced corrections to the equal-position propagator and
    to its double-curled counterpart, composed from the environment's
    out-and-back bundles.

    Written for an arbitrary environment (any background scattering part is
    additive on top of these corrections and is zero in bulk); the local
    response values at the scatterer screen its electric and magnetic
    excess responses.  Returns (plain, double-curled) dyadics.
    """
    out = env.bundle(r_field, r_scatterer, xi)
    back = env.bundle(r_scatterer, r_field, xi)
    eps, mu = env.response_at(r_scatterer, xi)
    w2 = (1j * xi) ** 2
    electric = eps * pair.alpha * w2
    magnetic = pair.beta / mu
    plain = electric * (out.green @ back.green) \
        - magnetic * (out.curl_right @ back.curl_left)
    curled = electric * (out.curl_left @ back.curl_right) \
        - magnetic * (out.curl_both @ back.curl_both)
    return plain, curled


@dataclass(frozen=True)
class BulkEnvironment(Environment):
    """Homogeneous magnetoelectric background."""

    eps: object
    mu: object

    def response_at(self, position, xi) -> tuple:
        return self.eps.at_imag(xi), self.mu.at_imag(xi)

    def bundle(self, r_field, r_source, xi) -> GreenBundle:
        ctx = WaveContext.imaginary_axis(xi, self.eps.at_imag(xi),
                                         self.mu.at_imag(xi))
        return bulk_bundle(np.asarray(r_field) - np.asarray(r_source), ctx)
