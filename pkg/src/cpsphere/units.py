"""Reduced-unit conventions and exact SI conversions.

Every internal computation is dimensionless.  Given a reference angular
frequency ``omega_ref`` (physically, the atomic transition frequency), the
scales are

* frequency:        ``xi_hat = xi / omega_ref``
* length:           ``r_hat = r * omega_ref / c``
* polarisability:   ``alpha_hat = alpha / (4 pi eps0 (c/omega_ref)^3)``
* magnetisability:  ``beta_hat = beta * mu0 / (4 pi (c/omega_ref)^3)``
* energy:           ``U_hat = U / (hbar omega_ref)``

With this choice the electric and magnetic responses transform identically
under the electric/magnetic duality swap, and all channel formulas are free
of physical constants.  There is a single convention; it is not a runtime
switch.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy.constants import c, epsilon_0, hbar, mu_0

FOUR_PI = 4.0 * 3.141592653589793


@dataclass(frozen=True)
class Units:
    """Conversion helper pinned to one reference angular frequency [rad/s]."""

    omega_ref: float

    def __post_init__(self) -> None:
        if self.omega_ref <= 0.0:
            raise ValueError("omega_ref must be positive")

    @property
    def length_scale(self) -> float:
        """Reduced unit of length in metres."""
        return c / self.omega_ref

    @property
    def energy_scale(self) -> float:
        """Reduced unit of energy in joules."""
        return hbar * self.omega_ref

    @property
    def alpha_scale(self) -> float:
        """Reduced unit of polarisability in SI (F m^2)."""
        return FOUR_PI * epsilon_0 * self.length_scale**3

    @property
    def beta_scale(self) -> float:
        """Reduced unit of magnetisability in SI (J/T^2)."""
        return FOUR_PI * self.length_scale**3 / mu_0

    # electric-dipole |d|^2 and magnetic-dipole |m|^2 scales entering the
    # transition-strength sums
    @property
    def dipole_sq_scale(self) -> float:
        return FOUR_PI * epsilon_0 * hbar * self.omega_ref * self.length_scale**3

    @property
    def magnetic_dipole_sq_scale(self) -> float:
        return FOUR_PI * hbar * self.omega_ref * self.length_scale**3 / mu_0

    def frequency_to_reduced(self, omega_si: float) -> float:
        return omega_si / self.omega_ref

    def frequency_from_reduced(self, omega_hat: float) -> float:
        return omega_hat * self.omega_ref

    def length_to_reduced(self, r_si: float) -> float:
        return r_si / self.length_scale

    def length_from_reduced(self, r_hat: float) -> float:
        return r_hat * self.length_scale

    def alpha_to_reduced(self, alpha_si: float) -> float:
        return alpha_si / self.alpha_scale

    def alpha_from_reduced(self, alpha_hat: float) -> float:
        return alpha_hat * self.alpha_scale

    def beta_to_reduced(self, beta_si: float) -> float:
        return beta_si / self.beta_scale

    def beta_from_reduced(self, beta_hat: float) -> float:
        return beta_hat * self.beta_scale

    def energy_to_reduced(self, u_si: float) -> float:
        return u_si / self.energy_scale

    def energy_from_reduced(self, u_hat: float) -> float:
        return u_hat * self.energy_scale

    def dipole_strength_to_reduced(self, d_sq_si: float) -> float:
        return d_sq_si / self.dipole_sq_scale

    def dipole_strength_from_reduced(self, s_hat: float) -> float:
        return s_hat * self.dipole_sq_scale

    def magnetic_strength_to_reduced(self, m_sq_si: float) -> float:
        return m_sq_si / self.magnetic_dipole_sq_scale

    def magnetic_strength_from_reduced(self, s_hat: float) -> float:
        return s_hat * self.magnetic_dipole_sq_scale
