"""Linear response of media and atoms on the positive imaginary frequency axis.

Material permittivities/permeabilities are single- or multi-resonance
oscillator models; atomic polarisability and magnetisability are sums over
transitions.  On the imaginary axis every response is real, so all
evaluations here substitute ``omega = i xi`` analytically and work in real
arithmetic.  Reduced units throughout (see :mod:`cpsphere.units`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np


@runtime_checkable
class ResponseLike(Protocol):
    """Anything evaluable as a scalar response function of frequency."""

    def at_imag(self, xi): ...

    def at_omega(self, omega): ...

    @property
    def high_frequency_limit(self) -> float: ...


def _as_xi(xi):
    arr = np.asarray(xi, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("imaginary-axis frequency xi must be >= 0")
    return arr


def _maybe_scalar(out, xi_arr):
    return float(out) if xi_arr.ndim == 0 else out


@dataclass(frozen=True)
class LorentzOscillator:
    """One resonance: ``omega_p^2 / (omega_t^2 - omega^2 - i omega gamma)``.

    All three parameters are reduced frequencies.
    """

    omega_t: float
    omega_p: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.omega_t <= 0.0:
            raise ValueError("oscillator resonance omega_t must be > 0")
        if self.omega_p < 0.0:
            raise ValueError("oscillator strength omega_p must be >= 0")
        if self.gamma < 0.0:
            raise ValueError("oscillator damping gamma must be >= 0")


@dataclass(frozen=True)
class ResponseSpec:
    """Permittivity or permeability model: vacuum, constant, or oscillators."""

    model: str
    value: float = 1.0
    oscillators: tuple[LorentzOscillator, ...] = ()

    def __post_init__(self) -> None:
        if self.model not in ("vacuum", "constant", "lorentz"):
            raise ValueError(f"unknown response model {self.model!r}")
        if self.model == "constant" and self.value < 1.0:
            raise ValueError("constant response value must be >= 1")
        if self.model == "lorentz" and not self.oscillators:
            raise ValueError("lorentz response needs at least one oscillator")

    @classmethod
    def vacuum(cls) -> "ResponseSpec":
        return cls(model="vacuum")

    @classmethod
    def constant(cls, value: float) -> "ResponseSpec":
        return cls(model="constant", value=float(value))

    @classmethod
    def lorentz(cls, *oscillators: LorentzOscillator) -> "ResponseSpec":
        return cls(model="lorentz", oscillators=tuple(oscillators))

    def at_imag(self, xi):
        """Response at ``omega = i xi`` (real, >= 1, non-increasing in xi)."""
        arr = _as_xi(xi)
        if self.model == "vacuum":
            out = np.ones_like(arr)
        elif self.model == "constant":
            out = np.full_like(arr, self.value)
        else:
            out = np.ones_like(arr)
            for osc in self.oscillators:
                out = out + osc.omega_p**2 / (
                    osc.omega_t**2 + arr**2 + osc.gamma * arr
                )
        return _maybe_scalar(out, arr)

    def at_omega(self, omega):
        """Analytic continuation to complex omega (equals at_imag at i*xi)."""
        w = np.asarray(omega, dtype=complex)
        if self.model == "vacuum":
            out = np.ones_like(w)
        elif self.model == "constant":
            out = np.full_like(w, self.value)
        else:
            out = np.ones_like(w)
            for osc in self.oscillators:
                out = out + osc.omega_p**2 / (
                    osc.omega_t**2 - w**2 - 1j * w * osc.gamma
                )
        return complex(out) if w.ndim == 0 else out

    @property
    def high_frequency_limit(self) -> float:
        """Limit of at_imag as xi -> infinity (transparency for oscillators)."""
        return self.value if self.model == "constant" else 1.0


@dataclass(frozen=True)
class Transition:
    """A ground-state transition: reduced frequency and reduced |dipole|^2."""

    omega: float
    strength: float

    def __post_init__(self) -> None:
        if self.omega <= 0.0:
            raise ValueError("transition frequency must be > 0")
        if self.strength < 0.0:
            raise ValueError("transition strength must be >= 0")


def _transition_sum(transitions, xi_arr):
    out = np.zeros_like(xi_arr)
    for t in transitions:
        out = out + t.strength * t.omega / (t.omega**2 + xi_arr**2)
    return (2.0 / 3.0) * out


@dataclass(frozen=True)
class AtomModel:
    """Ground-state atom defined by its electric and magnetic transitions.

    The reduced polarisability is ``(2/3) sum_k s_k w_k / (w_k^2 + xi^2)``,
    strictly positive and strictly decreasing on the imaginary axis whenever
    any strength is positive; the magnetisability is the same sum over the
    magnetic transitions.
    """

    electric: tuple[Transition, ...] = ()
    magnetic: tuple[Transition, ...] = ()

    @classmethod
    def two_level(cls, omega: float = 1.0, static_polarizability: float = 1.0,
                  static_magnetizability: float = 0.0) -> "AtomModel":
        """Single-transition atom with the given static reduced responses."""
        elec = (Transition(omega, 1.5 * omega * static_polarizability),) \
            if static_polarizability > 0.0 else ()
        mag = (Transition(omega, 1.5 * omega * static_magnetizability),) \
            if static_magnetizability > 0.0 else ()
        return cls(electric=elec, magnetic=mag)

    def polarizability(self, xi):
        arr = _as_xi(xi)
        return _maybe_scalar(_transition_sum(self.electric, arr), arr)

    def magnetizability(self, xi):
        arr = _as_xi(xi)
        return _maybe_scalar(_transition_sum(self.magnetic, arr), arr)

    def polarizability_at_omega(self, omega):
        w = np.asarray(omega, dtype=complex)
        out = np.zeros_like(w)
        for t in self.electric:
            out = out + t.strength * t.omega / (t.omega**2 - w**2)
        out = (2.0 / 3.0) * out
        return complex(out) if w.ndim == 0 else out

    @property
    def static_polarizability(self) -> float:
        return float(self.polarizability(0.0))

    @property
    def static_magnetizability(self) -> float:
        return float(self.magnetizability(0.0))

    @property
    def is_nonmagnetic(self) -> bool:
        return all(t.strength == 0.0 for t in self.magnetic)

    def dual(self) -> "AtomModel":
        """Electric/magnetic swap; exact involution in reduced units."""
        return AtomModel(electric=self.magnetic, magnetic=self.electric)


def permittivity_at(spec: ResponseSpec, xi):
    """Model permittivity at ``omega = i xi``; xi >= 0."""
    return spec.at_imag(xi)


def atomic_polarizability_at(atom: AtomModel, xi):
    return atom.polarizability(xi)


def atomic_magnetizability_at(atom: AtomModel, xi):
    return atom.magnetizability(xi)


def local_field_electric(eps):
    """Cavity transmission factor 3 eps / (2 eps + 1); 1 in vacuum, < 3/2."""
    arr = np.asarray(eps, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("permittivity must be >= 0 for the local-field factor")
    out = 3.0 * arr / (2.0 * arr + 1.0)
    return float(out) if arr.ndim == 0 else out


def local_field_magnetic(mu):
    """Cavity transmission factor 3 / (2 mu + 1); 1 in vacuum."""
    arr = np.asarray(mu, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("permeability must be >= 0 for the local-field factor")
    out = 3.0 / (2.0 * arr + 1.0)
    return float(out) if arr.ndim == 0 else out
