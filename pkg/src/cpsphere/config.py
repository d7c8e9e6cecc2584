"""Run configuration: YAML schema, strict validation, unit handling.

A run file is a single YAML document.  Unknown keys anywhere are rejected,
every error message carries the dotted path of the offending field, and
``cpsphere print-config`` emits the fully defaulted document.  Reduced units
are the default; ``units: SI`` plus an explicit ``omega_ref`` switches every
dimensionful field (radii, separations, frequencies, transition strengths)
to SI on input and output.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import yaml

from .errors import ConfigError
from .potential import CHANNELS, ScenarioConfig
from .quadrature import QuadratureSpec
from .response import AtomModel, LorentzOscillator, ResponseSpec, Transition
from .scatterer import SphereAssembly
from .units import Units

DEFAULT_CONFIG: dict = {
    "units": "reduced",
    "omega_ref": None,
    "atom": {
        "electric_transitions": [{"omega": 1.0, "strength": 1.5}],
        "magnetic_transitions": [],
    },
    "partner": {
        "kind": "sphere",
        "radius": 0.005,
        "cavity_radius": None,
        "eps": {"model": "vacuum"},
        "mu": {"model": "vacuum"},
        "electric_transitions": None,
        "magnetic_transitions": None,
    },
    "host": {
        "eps": {"model": "vacuum"},
        "mu": {"model": "vacuum"},
    },
    "scenario": {
        "separation": 1.0,
        "channels": list(CHANNELS),
    },
    "quadrature": {
        "rel_tol": 1e-10,
        "abs_tol": 1e-14,
        "max_subdivisions": 200,
    },
    "sweep": None,
}

_SWEEP_DEFAULTS = {"parameter": "r_AS", "from": 0.1, "to": 10.0,
                   "steps": 50, "spacing": "log"}


@dataclass(frozen=True)
class SweepSpec:
    parameter: str          # r_AS | q | R_C
    start: float
    stop: float
    steps: int
    spacing: str            # linear | log

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration, already converted to reduced units."""

    scenario: ScenarioConfig
    quadrature: QuadratureSpec
    sweep: SweepSpec | None
    units: str
    units_converter: Units | None
    sha256: str
    document: dict


def _fail(path: str, message: str) -> ConfigError:
    return ConfigError(f"{path}: {message}")


def _require_mapping(node, path: str, allowed: tuple) -> dict:
    if not isinstance(node, dict):
        raise _fail(path, "expected a mapping")
    unknown = sorted(set(node) - set(allowed))
    if unknown:
        raise _fail(f"{path}.{unknown[0]}", "unknown key")
    return node

def _number(node, path: str, *, positive=False, nonnegative=False) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise _fail(path, "expected a number")
    v = float(node)
    if positive and v <= 0.0:
        raise _fail(path, "must be > 0")
    if nonnegative and v < 0.0:
        raise _fail(path, "must be >= 0")
    return v


def _merge_defaults(user: dict, defaults: dict) -> dict:
    out = {}
    for key, dval in defaults.items():
        if key in user and user[key] is not None:
            uval = user[key]
            out[key] = _merge_defaults(uval, dval) \
                if isinstance(dval, dict) and isinstance(uval, dict) else uval
        else:
            out[key] = dval
    for key in user:
        if key not in defaults:
            out[key] = user[key]  # caught later by the strict walk
    return out


def _response_from(node, path: str, units: Units | None) -> ResponseSpec:
    node = _require_mapping(node, path, ("model", "value", "oscillators"))
    model = node.get("model")
    if model == "vacuum":
        if "value" in node or "oscillators" in node:
            raise _fail(path, "vacuum model takes no parameters")
        return ResponseSpec.vacuum()
    if model == "constant":
        if "value" not in node:
            raise _fail(f"{path}.value", "required for the constant model")
        value = _number(node["value"], f"{path}.value")
        if value < 1.0:
            raise _fail(f"{path}.value", "must be >= 1")
        return ResponseSpec.constant(value)
    if model == "lorentz":
        oscs = node.get("oscillators")
        if not isinstance(oscs, list) or not oscs:
            raise _fail(f"{path}.oscillators", "need a non-empty list")
        parsed = []
        for i, osc in enumerate(oscs):
            opath = f"{path}.oscillators[{i}]"
            osc = _require_mapping(osc, opath, ("omega_t", "omega_p", "gamma"))
            wt = _number(osc.get("omega_t", 0.0), f"{opath}.omega_t", positive=True)
            wp = _number(osc.get("omega_p", 0.0), f"{opath}.omega_p", nonnegative=True)
            ga = _number(osc.get("gamma", 0.0), f"{opath}.gamma", nonnegative=True)
            if units is not None:
                wt = units.frequency_to_reduced(wt)
                wp = units.frequency_to_reduced(wp)
                ga = units.frequency_to_reduced(ga)
            parsed.append(LorentzOscillator(omega_t=wt, omega_p=wp, gamma=ga))
        return ResponseSpec.lorentz(*parsed)
    raise _fail(f"{path}.model", "must be one of vacuum, constant, lorentz")


def _transitions_from(node, path: str, units: Units | None,
                      magnetic: bool) -> tuple:
    if node is None:
        return ()
    if not isinstance(node, list):
        raise _fail(path, "expected a list of transitions")
    out = []
    for i, tr in enumerate(node):
        tpath = f"{path}[{i}]"
        tr = _require_mapping(tr, tpath, ("omega", "strength"))
        omega = _number(tr.get("omega", 0.0), f"{tpath}.omega", positive=True)
        strength = _number(tr.get("strength", 0.0), f"{tpath}.strength",
                           nonnegative=True)
        if units is not None:
            omega = units.frequency_to_reduced(omega)
            strength = (units.magnetic_strength_to_reduced(strength) if magnetic
                        else units.dipole_strength_to_reduced(strength))
        out.append(Transition(omega=omega, strength=strength))
    return tuple(out)


def _atom_from(node, path: str, units: Units | None) -> AtomModel:
    node = _require_mapping(node, path,
                            ("electric_transitions", "magnetic_transitions"))
    return AtomModel(
        electric=_transitions_from(node.get("electric_transitions"),
                                   f"{path}.electric_transitions", units, False),
        magnetic=_transitions_from(node.get("magnetic_transitions"),
                                   f"{path}.magnetic_transitions", units, True))


def _partner_from(node, units: Units | None):
    path = "partner"
    node = _require_mapping(node, path, ("kind", "radius", "cavity_radius",
                                         "eps", "mu", "electric_transitions",
                                         "magnetic_transitions"))
    kind = node.get("kind", "sphere")
    if kind == "atom":
        return AtomModel(
            electric=_transitions_from(node.get("electric_transitions"),
                                       f"{path}.electric_transitions", units,
                                       False),
            magnetic=_transitions_from(node.get("magnetic_transitions"),
                                       f"{path}.magnetic_transitions", units,
                                       True))
    if kind != "sphere":
        raise _fail(f"{path}.kind", "must be 'sphere' or 'atom'")
    radius = _number(node.get("radius"), f"{path}.radius", positive=True)
    cavity = node.get("cavity_radius")
    if cavity is not None:
        cavity = _number(cavity, f"{path}.cavity_radius", positive=True)
    if units is not None:
        radius = units.length_to_reduced(radius)
        cavity = None if cavity is None else units.length_to_reduced(cavity)
    if cavity is not None and cavity < radius:
        raise _fail(f"{path}.cavity_radius", "must be >= radius")
    return SphereAssembly(radius=radius,
                          eps=_response_from(node.get("eps"), f"{path}.eps", units),
                          mu=_response_from(node.get("mu"), f"{path}.mu", units),
                          cavity_radius=cavity)


def _sweep_from(node, units: Units | None) -> SweepSpec | None:
    if node is None:
        return None
    path = "sweep"
    node = _merge_defaults(_require_mapping(node, path, tuple(_SWEEP_DEFAULTS)),
                           _SWEEP_DEFAULTS)
    parameter = node["parameter"]
    if parameter not in ("r_AS", "q", "R_C"):
        raise _fail(f"{path}.parameter", "must be one of r_AS, q, R_C")
    start = _number(node["from"], f"{path}.from", positive=True)
    stop = _number(node["to"], f"{path}.to", positive=True)
    steps = node["steps"]
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise _fail(f"{path}.steps", "must be an integer >= 1")
    spacing = node["spacing"]
    if spacing not in ("linear", "log"):
        raise _fail(f"{path}.spacing", "must be 'linear' or 'log'")
    if parameter == "q" and not (0.0 < start <= 1.0 and 0.0 < stop <= 1.0):
        raise _fail(f"{path}.from", "q values must lie in (0, 1]")
    if units is not None and parameter in ("r_AS", "R_C"):
        start = units.length_to_reduced(start)
        stop = units.length_to_reduced(stop)
    return SweepSpec(parameter=parameter, start=start, stop=stop,
                     steps=steps, spacing=spacing)


def validate_document(doc: dict, sha256: str = "") -> RunConfig:
    """Validate a parsed YAML document and build the reduced-unit objects."""
    if not isinstance(doc, dict):
        raise ConfigError("top level: expected a mapping")
    merged = _merge_defaults(doc, DEFAULT_CONFIG)
    _require_mapping(merged, "top level", tuple(DEFAULT_CONFIG))

    units_name = merged["units"]
    if units_name not in ("reduced", "SI"):
        raise _fail("units", "must be 'reduced' or 'SI'")
    converter = None
    if units_name == "SI":
        if merged["omega_ref"] is None:
            raise _fail("omega_ref", "required when units is 'SI'")
        converter = Units(_number(merged["omega_ref"], "omega_ref",
                                  positive=True))

    atom = _atom_from(merged["atom"], "atom", converter)
    partner = _partner_from(merged["partner"], converter)

    host = _require_mapping(merged["host"], "host", ("eps", "mu"))
    host_eps = _response_from(host.get("eps"), "host.eps", converter)
    host_mu = _response_from(host.get("mu"), "host.mu", converter)

    scen = _require_mapping(merged["scenario"], "scenario",
                            ("separation", "channels"))
    separation = _number(scen.get("separation"), "scenario.separation",
                         positive=True)
    if converter is not None:
        separation = converter.length_to_reduced(separation)
    channels = scen.get("channels")
    if not isinstance(channels, list) or not channels:
        raise _fail("scenario.channels", "need a non-empty list")
    for ch in channels:
        if ch not in CHANNELS:
            raise _fail("scenario.channels", f"unknown channel {ch!r}")

    qnode = _require_mapping(merged["quadrature"], "quadrature",
                             ("rel_tol", "abs_tol", "max_subdivisions"))
    rel = _number(qnode.get("rel_tol"), "quadrature.rel_tol", positive=True)
    ab = _number(qnode.get("abs_tol"), "quadrature.abs_tol", positive=True)
    subs = qnode.get("max_subdivisions")
    if isinstance(subs, bool) or not isinstance(subs, int) or subs < 1:
        raise _fail("quadrature.max_subdivisions", "must be an integer >= 1")

    sweep = _sweep_from(merged["sweep"], converter)
    if sweep is not None and sweep.parameter in ("q", "R_C"):
        if isinstance(partner, AtomModel):
            raise _fail("sweep.parameter", "q and R_C sweeps need a sphere partner")
        if partner.cavity_radius is None:
            raise _fail("sweep.parameter",
                        "q and R_C sweeps need partner.cavity_radius")

    try:
        scenario = ScenarioConfig(atom=atom, partner=partner,
                                  host_eps=host_eps, host_mu=host_mu,
                                  separation=separation,
                                  channels=tuple(channels))
    except (ValueError,) as exc:
        raise ConfigError(f"scenario: {exc}") from exc

    return RunConfig(scenario=scenario,
                     quadrature=QuadratureSpec(rel_tol=rel, abs_tol=ab,
                                               max_subdivisions=subs),
                     sweep=sweep, units=units_name, units_converter=converter,
                     sha256=sha256, document=merged)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        doc = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path!r}: {exc}") from exc
    if doc is None:
        doc = {}
    return validate_document(doc, sha256=hashlib.sha256(raw).hexdigest())


def render_config(doc: dict | None = None) -> str:
    """YAML text of the given document (default template if None) with all
    defaults made explicit."""
    merged = _merge_defaults(doc or {}, DEFAULT_CONFIG)
    return yaml.safe_dump(merged, sort_keys=False, default_flow_style=False)


def scenario_with(cfg: RunConfig, **updates) -> ScenarioConfig:
    """Scenario with sweep-parameter substitutions applied."""
    scenario = cfg.scenario
    partner = scenario.partner
    if "q" in updates:
        partner = SphereAssembly(radius=updates["q"] * partner.cavity_radius,
                                 eps=partner.eps, mu=partner.mu,
                                 cavity_radius=partner.cavity_radius)
    if "cavity_radius" in updates:
        q = partner.q
        rc = updates["cavity_radius"]
        partner = SphereAssembly(radius=q * rc, eps=partner.eps,
                                 mu=partner.mu, cavity_radius=rc)
    separation = updates.get("separation", scenario.separation)
    return ScenarioConfig(atom=scenario.atom, partner=partner,
                          host_eps=scenario.host_eps, host_mu=scenario.host_mu,
                          separation=separation, channels=scenario.channels)
