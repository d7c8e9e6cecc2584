"""Excess polarisabilities of a small sphere, an empty cavity, and their
composite, relative to a homogeneous host.

All quantities are the reduced (prefactor-absorbed) dimensionless responses:
an excess polarisability is ``R^3 (eps_s - eps) / (eps_s + 2 eps)`` with R a
reduced radius, and its sign follows the sign of the permittivity contrast.
The electric and magnetic formulas are structurally identical, so the dual
swap of all inputs exchanges alpha and beta exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularConfigurationError, ValidityError
from .response import AtomModel, ResponseLike, ResponseSpec

DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True)
class SphereAssembly:
    """A homogeneous sphere, optionally separated from the host by a
    concentric empty cavity.

    Radii are reduced lengths; ``q = radius / cavity_radius`` is the shape
    parameter interpolating between a point-like inclusion (q -> 0) and a
    sphere in immediate contact with the host (q = 1).
    """

    radius: float
    eps: ResponseLike
    mu: ResponseLike
    cavity_radius: float | None = None

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError("sphere radius must be > 0")
        if self.cavity_radius is not None and self.cavity_radius < self.radius:
            raise ValueError("cavity radius must satisfy cavity_radius >= radius")

    @property
    def q(self) -> float:
        if self.cavity_radius is None:
            return 1.0
        return self.radius / self.cavity_radius

    @property
    def outer_radius(self) -> float:
        return self.cavity_radius if self.cavity_radius is not None else self.radius

    @property
    def volume(self) -> float:
        return (4.0 * np.pi / 3.0) * self.radius**3

    def dual(self) -> "SphereAssembly":
        return SphereAssembly(radius=self.radius, eps=self.mu, mu=self.eps,
                              cavity_radius=self.cavity_radius)


@dataclass(frozen=True)
class PolarizabilityPair:
    """Reduced excess polarisability and magnetisability of one scatterer."""

    alpha: float | np.ndarray
    beta: float | np.ndarray


def _contrast(inner, outer):
    return (inner - outer) / (inner + 2.0 * outer)


def excess_full_sphere(assembly: SphereAssembly, host_eps, host_mu, xi) -> PolarizabilityPair:
    """Excess response of the bare sphere against host values at frequency xi.

    ``alpha = R^3 (eps_s - eps_host) / (eps_s + 2 eps_host)`` and the mu
    analogue; sign-indefinite, bounded in (-R^3/2, R^3).
    """
    r3 = assembly.radius**3
    eps_s = assembly.eps.at_imag(xi)
    mu_s = assembly.mu.at_imag(xi)
    return PolarizabilityPair(alpha=r3 * _contrast(eps_s, host_eps),
                              beta=r3 * _contrast(mu_s, host_mu))


def free_space_sphere(assembly: SphereAssembly, xi) -> PolarizabilityPair:
    """Sphere response against vacuum; the host-independent building block."""
    return excess_full_sphere(assembly, 1.0, 1.0, xi)


def cavity_excess(cavity_radius: float, host_eps, host_mu) -> PolarizabilityPair:
    """Excess response of an empty cavity of the given radius in the host.

    Non-positive for host_eps >= 1: the cavity is optically rarer than the
    medium around it.
    """
    if cavity_radius <= 0.0:
        raise ValueError("cavity radius must be > 0")
    rc3 = cavity_radius**3
    return PolarizabilityPair(alpha=rc3 * _contrast(1.0, host_eps),
                              beta=rc3 * _contrast(1.0, host_mu))


def _composite(sphere_free, cavity, rc, transmission):
    # cavity reflection + sphere response transmitted through the cavity
    # surface, corrected for multiple reflections between the two surfaces
    denom = 1.0 + 2.0 * cavity * sphere_free / rc**6
    if np.any(np.abs(denom) < DENOMINATOR_FLOOR):
        raise SingularConfigurationError(
            "multiple-reflection denominator below "
            f"{DENOMINATOR_FLOOR:g}; configuration too resonant to evaluate")
    return cavity + transmission * sphere_free / denom


def sphere_in_cavity_excess(assembly: SphereAssembly, host_eps, host_mu, xi) -> PolarizabilityPair:
    """Excess response of the sphere-plus-cavity composite in the host.

    Evaluates the numerically stable factored form: cavity reflection plus
    the free-space sphere response transmitted through the cavity surface
    (squared local-field factor), with a multiple-reflection denominator.
    For radius == cavity_radius this reduces exactly to the bare-sphere
    result and delegates to that code path.
    """
    if assembly.cavity_radius is None:
        raise ValidityError("assembly has no cavity; use excess_full_sphere")
    if assembly.cavity_radius == assembly.radius:
        return excess_full_sphere(assembly, host_eps, host_mu, xi)

    rc = assembly.cavity_radius
    cav = cavity_excess(rc, host_eps, host_mu)
    free = free_space_sphere(assembly, xi)

    # squared transmission factor over (electric) or times (magnetic) the
    # host response; both reduce to 9 h / (2 h + 1)^2, written identically so
    # the dual swap is exact to the last bit
    trans_e = 9.0 * host_eps / (2.0 * host_eps + 1.0) ** 2
    trans_m = 9.0 * host_mu / (2.0 * host_mu + 1.0) ** 2
    alpha = _composite(free.alpha, cav.alpha, rc, trans_e)
    beta = _composite(free.beta, cav.beta, rc, trans_m)
    return PolarizabilityPair(alpha=alpha, beta=beta)


def sphere_in_cavity_excess_direct(assembly: SphereAssembly, host_eps, host_mu, xi) -> PolarizabilityPair:
    """Single-fraction form of the composite response; cross-check path.

    Algebraically identical to :func:`sphere_in_cavity_excess`; kept as an
    independent evaluation route for verification.
    """
    if assembly.cavity_radius is None:
        raise ValidityError("assembly has no cavity; use excess_full_sphere")
    rc = assembly.cavity_radius
    r3 = assembly.radius**3
    q3 = (assembly.radius / rc) ** 3
    eps_s = assembly.eps.at_imag(xi)
    mu_s = assembly.mu.at_imag(xi)

    def one(inner, host):
        denom = (inner + 2.0) * (2.0 * host + 1.0) \
            + 2.0 * (inner - 1.0) * (1.0 - host) * q3
        if np.any(np.abs(denom) < DENOMINATOR_FLOOR):
            raise SingularConfigurationError(
                "multiple-reflection denominator below "
                f"{DENOMINATOR_FLOOR:g}; configuration too resonant to evaluate")
        return rc**3 * _contrast(1.0, host) \
            + 9.0 * host * r3 * (inner - 1.0) / (2.0 * host + 1.0) / denom

    return PolarizabilityPair(alpha=one(eps_s, host_eps), beta=one(mu_s, host_mu))


def point_particle_excess(assembly: SphereAssembly, host_eps, host_mu, xi,
                          include_cavity: bool = True) -> PolarizabilityPair:
    """Composite response in the small-sphere limit q -> 0, where multiple
    reflections between the surfaces are negligible.

    With ``include_cavity=False`` the cavity's own reflection is dropped as
    well, leaving only the sphere response transmitted through the cavity
    surface -- the form that maps onto a local-field-corrected atom.
    """
    free = free_space_sphere(assembly, xi)
    alpha = free.alpha * 9.0 * host_eps / (2.0 * host_eps + 1.0) ** 2
    beta = free.beta * 9.0 * host_mu / (2.0 * host_mu + 1.0) ** 2
    if include_cavity:
        if assembly.cavity_radius is None:
            raise ValidityError("assembly has no cavity")
        cav = cavity_excess(assembly.cavity_radius, host_eps, host_mu)
        alpha = alpha + cav.alpha
        beta = beta + cav.beta
    return PolarizabilityPair(alpha=alpha, beta=beta)


@dataclass(frozen=True)
class ClausiusMossottiResponse:
    """Sphere material derived from an atomic response so that the sphere's
    free-space excess response equals the atom's response exactly.

    Solves ``(eps_s - 1)/(eps_s + 2) = alpha_atom(xi) / R^3`` pointwise in
    frequency; valid only while that ratio stays below one.
    """

    atom: AtomModel
    radius: float
    kind: str = "electric"

    def __post_init__(self) -> None:
        if self.kind not in ("electric", "magnetic"):
            raise ValueError("kind must be 'electric' or 'magnetic'")
        if self.radius <= 0.0:
            raise ValueError("radius must be > 0")

    def _ratio(self, xi):
        resp = (self.atom.polarizability(xi) if self.kind == "electric"
                else self.atom.magnetizability(xi))
        return resp / self.radius**3

    def at_imag(self, xi):
        t = self._ratio(xi)
        if np.any(np.asarray(t) >= 1.0):
            bad = np.asarray(xi)[np.asarray(t) >= 1.0] if np.ndim(xi) else xi
            raise ValidityError(
                f"atomic response exceeds the volume bound at xi={bad}; "
                "no physical sphere material reproduces it")
        return (1.0 + 2.0 * t) / (1.0 - t)

    def at_omega(self, omega):
        if self.kind != "electric":
            raise NotImplementedError("complex-frequency continuation only "
                                      "for the electric response")
        t = self.atom.polarizability_at_omega(omega) / self.radius**3
        return (1.0 + 2.0 * t) / (1.0 - t)

    @property
    def high_frequency_limit(self) -> float:
        return 1.0


def clausius_mossotti_sphere(atom: AtomModel, radius: float, xi) -> tuple:
    """Material values (eps_s, mu_s) at xi for a sphere equivalent to the atom.

    The returned values satisfy ``free_space_sphere == (alpha_atom(xi),
    beta_atom(xi))`` identically.
    """
    eps = ClausiusMossottiResponse(atom, radius, "electric").at_imag(xi)
    has_mag = any(t.strength > 0.0 for t in atom.magnetic)
    mu = ClausiusMossottiResponse(atom, radius, "magnetic").at_imag(xi) \
        if has_mag else (np.ones_like(np.asarray(xi, dtype=float))
                         if np.ndim(xi) else 1.0)
    return eps, mu


def clausius_mossotti_assembly(atom: AtomModel, radius: float,
                               cavity_radius: float | None = None) -> SphereAssembly:
    """Sphere assembly whose materials track the atom at every frequency."""
    has_mag = any(t.strength > 0.0 for t in atom.magnetic)
    mu = ClausiusMossottiResponse(atom, radius, "magnetic") if has_mag \
        else ResponseSpec.vacuum()
    return SphereAssembly(radius=radius,
                          eps=ClausiusMossottiResponse(atom, radius, "electric"),
                          mu=mu, cavity_radius=cavity_radius)
