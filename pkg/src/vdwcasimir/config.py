"""Experiment configuration: JSON schema validation and object construction."""

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from .dielectric import Drude, IdealMirror, LorentzSum, OscillatorParams, TabulatedImagAxis, Vacuum
from .dipoles import DipoleSystem
from .errors import CasimirError, ConfigError
from .green import PlanarStack
from .quadrature import QuadratureSpec

MODES = ("force-curve", "free-energy", "energy-profile", "ldos", "dipoles", "validate")
PLANAR_MODES = ("force-curve", "free-energy", "energy-profile")
GRID_KEYS = ("gap_d", "temperature", "z", "omega", "scale")


def load_schema():
    text = resources.files("vdwcasimir").joinpath("config.schema.json").read_text()
    return json.loads(text)


@dataclass
class ExperimentConfig:
    """A validated configuration with its library objects built."""

    raw: dict
    mode: str
    materials: dict
    geometry: dict
    grid: dict
    spec: QuadratureSpec
    output: dict = field(default_factory=dict)

    @property
    def stack(self):
        g = self.geometry
        return PlanarStack(self.materials[g["eps1"]], self.materials[g["eps2"]],
                           self.materials[g["eps3"]], float(g["gap_d"]))

    @property
    def dipole_system(self):
        g = self.geometry
        o = g["oscillator"]
        osc = OscillatorParams(float(o["e2_over_m"]), float(o["omega_0"]),
                               float(o.get("gamma", 0.0)))
        return DipoleSystem(np.array(g["positions"], dtype=float), osc)

    @property
    def material(self):
        return self.materials[self.geometry["material"]]

    def semantic(self):
        """Resolved content that determines the results (no output settings)."""
        used = _referenced(self.geometry)
        if self.mode == "validate":
            used = sorted(self.raw.get("materials", {}))
        return _normalize({
            "mode": self.mode,
            "materials": {k: self.raw.get("materials", {})[k] for k in used},
            # gap_d and temperature act only through the grid they seed
            "geometry": {k: v for k, v in self.geometry.items()
                         if k not in ("gap_d", "temperature")},
            "grid": self.grid,
            "quadrature": {k: getattr(self.spec, k) for k in self.spec.__dataclass_fields__},
        })

    def config_hash(self):
        text = json.dumps(self.semantic(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _referenced(geometry):
    if geometry["type"] == "planar":
        return sorted({geometry["eps1"], geometry["eps2"], geometry["eps3"]})
    if geometry["type"] == "bulk":
        return [geometry["material"]]
    return []


def _normalize(obj):
    if isinstance(obj, dict):
        return {k: _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    return float(obj)


def build_material(spec):
    """Build a :class:`PermittivityModel` from its JSON description."""
    kind = spec["variant"]
    if kind == "Vacuum":
        return Vacuum()
    if kind == "LorentzSum":
        return LorentzSum([OscillatorParams(o["omega_p2"], o.get("omega_0", 0.0),
                                            o.get("gamma", 0.0)) for o in spec["oscillators"]])
    if kind == "Drude":
        o = spec["oscillators"][0]
        return Drude(o["omega_p2"], o["gamma"])
    if kind == "IdealMirror":
        return IdealMirror(spec.get("scale", 1e8))
    table = np.array(spec["table"], dtype=float)
    return TabulatedImagAxis(table[:, 0], table[:, 1], tail=spec.get("tail", False))


def _describe(error):
    path = "/".join(str(p) for p in error.absolute_path) or "<root>"
    return f"{path}: {error.message}"


def _check_grid(name, values):
    arr = np.asarray(values, dtype=float)
    if arr.size > 1 and np.any(np.diff(arr) <= 0):
        raise ConfigError(f"grid '{name}' must be strictly increasing")
    return [float(v) for v in arr]


def parse_config(data):
    """Validate a configuration dict and build an :class:`ExperimentConfig`.

    Raises :class:`ConfigError` with a message naming the offending field.
    """
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (len(e.absolute_path), e.message))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise ConfigError("invalid configuration: " + _describe(best))
    mode = data["mode"]
    geometry = dict(data["geometry"])
    gtype = geometry["type"]
    if mode in PLANAR_MODES and gtype != "planar":
        raise ConfigError(f"mode '{mode}' needs a planar geometry")
    if mode == "dipoles" and gtype != "dipoles":
        raise ConfigError("mode 'dipoles' needs a dipoles geometry")
    if mode == "ldos" and gtype != "bulk":
        raise ConfigError("mode 'ldos' needs a bulk geometry")
    if mode == "validate" and gtype == "dipoles":
        raise ConfigError("mode 'validate' needs a planar or bulk geometry")

    raw_materials = data.get("materials", {})
    for name in _referenced(geometry):
        if name not in raw_materials:
            raise ConfigError(f"geometry references unknown material '{name}'")
    try:
        materials = {k: build_material(v) for k, v in raw_materials.items()}
    except CasimirError as exc:
        raise ConfigError(f"materials: {exc}") from exc

    grid_in = data.get("grid", {})
    grid = {k: _check_grid(k, v) for k, v in grid_in.items()}
    if gtype == "planar":
        grid.setdefault("gap_d", [float(geometry["gap_d"])])
        grid.setdefault("temperature", [float(geometry.get("temperature", 0.0))])
    if gtype == "bulk":
        grid.setdefault("temperature", [float(geometry.get("temperature", 0.0))])
    if mode == "energy-profile" and "z" not in grid:
        raise ConfigError("mode 'energy-profile' needs grid 'z'")
    if mode == "ldos" and "omega" not in grid:
        raise ConfigError("mode 'ldos' needs grid 'omega'")
    if mode == "dipoles":
        grid.setdefault("scale", [1.0])

    try:
        spec = QuadratureSpec(**data.get("quadrature", {}))
    except CasimirError as exc:
        raise ConfigError(f"quadrature: {exc}") from exc
    cfg = ExperimentConfig(data, mode, materials, geometry, grid, spec, data.get("output", {}))
    try:
        if gtype == "planar":
            cfg.stack
        elif gtype == "dipoles":
            cfg.dipole_system
    except CasimirError as exc:
        raise ConfigError(f"geometry: {exc}") from exc
    return cfg


def load_config(path):
    """Read and validate a JSON configuration file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in '{path}': {exc}") from exc
    return parse_config(data)
