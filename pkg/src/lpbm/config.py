"""Scenario configuration: strict JSON schema with materialized defaults.

Unknown keys are rejected with the offending location, because a silently
ignored key here would misconfigure a mathematical parameter. Extended
reals are encoded as numbers or the strings "inf" / "-inf".
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .bodies import Body, HPolytope, LqBall
from .extreal import ExtReal
from .measures import Density, NumericsConfig, Potential, make_density

SCHEMA_VERSION = 1

_TOP_KEYS = {"version", "seed", "output", "tolerance_scale", "bodies", "densities",
             "potentials", "checks", "curves"}
_BODY_KEYS = {
    "lq_ball": {"family", "q", "radii"},
    "h_polytope": {"family", "halfspaces"},
}
_DENSITY_KEYS = {
    "lebesgue": {"family", "dim"},
    "gaussian": {"family", "dim"},
    "power_convex": {"family", "dim", "alpha", "beta"},
    "uniform": {"family", "body"},
}
_POTENTIAL_KEYS = {
    "quadratic": {"kind", "dim"},
    "gaussian": {"kind", "dim"},
}
_COMMON_CHECK_KEYS = {"check", "section", "resolution", "seed"}
_CHECK_KEYS = {
    "check_bmi": {"a", "b", "density", "p", "lambdas"},
    "check_bmi_mset": {"bodies", "weights", "density", "p"},
    "check_inclusion": {"a", "b", "p", "lambda", "samples"},
    "check_plus1_is_minkowski": {"a", "b", "lambda"},
    "check_firey_corollary": {"a", "b", "density", "p", "lambdas"},
    "check_power_dilation_concavity": {"body", "density", "p", "t_range", "triples"},
    "check_dilation_concavity": {"body", "density", "p", "t_range", "triples"},
    "check_gaussian_improvement": {"a", "b", "gamma", "lambdas"},
    "check_B_property": {"density", "body", "t_range", "triples"},
    "check_functional_B": {"f", "g", "t_range", "triples"},
    "uhrin_functional_check": {"f", "g", "alpha", "p", "lambda", "f_box", "g_box"},
    "lift_to_uniform": {"potential", "ps", "box", "max_final_distance", "grid"},
    "certify_region": {"potential", "gamma", "region", "expect"},
    "scan_log_bm": {"lam_grid", "budget", "harmonics", "restarts", "directions"},
}
_CURVE_KEYS = {
    "measure_curve": {"kind", "body", "density", "transform", "p", "t_grid", "resolution"},
    "functional_B_curve": {"kind", "f", "g", "t_grid", "resolution"},
}

_CHECK_SEEDED = {"check_inclusion", "check_power_dilation_concavity",
                 "check_dilation_concavity", "check_B_property", "check_functional_B",
                 "lift_to_uniform", "certify_region", "scan_log_bm"}
_GRID_CHECKS = {"check_bmi", "check_bmi_mset", "check_inclusion",
                "check_plus1_is_minkowski", "check_firey_corollary",
                "check_power_dilation_concavity", "check_dilation_concavity",
                "check_gaussian_improvement", "check_B_property", "check_functional_B",
                "uhrin_functional_check"}
_GRID_DEFAULTS = {1: 2048, 2: 256, 3: 64}
_UHRIN_DEFAULTS = {1: 2048, 2: 64, 3: 16}
_CHECK_DEFAULTS = {
    "check_inclusion": {"samples": 10_000},
    "check_power_dilation_concavity": {"triples": 50},
    "check_dilation_concavity": {"triples": 50},
    "check_B_property": {"triples": 40},
    "check_functional_B": {"triples": 40},
    "lift_to_uniform": {"grid": 129, "max_final_distance": 0.01},
    "certify_region": {"expect": "certified"},
    "scan_log_bm": {"budget": 300, "harmonics": 3, "restarts": 6,
                    "directions": 256, "lam_grid": [0.3, 0.5, 0.7]},
}


class ConfigError(Exception):
    """Configuration problem, carrying the location of the offending key."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _require_keys(obj: dict, allowed: set, required: set, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(where, f"expected an object, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(where, f"unknown keys {sorted(unknown)}; allowed {sorted(allowed)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(where, f"missing required keys {sorted(missing)}")


def parse_extended(value, where: str) -> ExtReal:
    try:
        return ExtReal.of(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(where, f"not an extended real: {value!r} ({exc})")


@dataclass
class ScenarioConfig:
    """A validated scenario with all defaults materialized."""

    version: int
    seed: int
    output_dir: str
    tolerance_scale: float
    bodies: dict
    densities: dict
    potentials: dict
    checks: list
    curves: dict
    source: str = ""

    def materialize(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "output": {"dir": self.output_dir},
            "tolerance_scale": self.tolerance_scale,
            "bodies": self.bodies,
            "densities": self.densities,
            "potentials": self.potentials,
            "checks": self.checks,
            "curves": self.curves,
        }

    def digest(self) -> str:
        payload = json.dumps(self.materialize(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:12]

    def numerics(self, dim_hint: int = 2) -> NumericsConfig:
        return NumericsConfig(seed=self.seed, tolerance_scale=self.tolerance_scale)

    def build_body(self, name: str) -> Body:
        if name not in self.bodies:
            raise ConfigError(f"bodies.{name}", "body name does not resolve")
        spec = self.bodies[name]
        if spec["family"] == "lq_ball":
            q = parse_extended(spec["q"], f"bodies.{name}.q").value
            return LqBall(q, spec["radii"])
        return HPolytope([(np.asarray(u, dtype=float), c) for u, c in spec["halfspaces"]])

    def build_density(self, name: str) -> Density:
        if name not in self.densities:
            raise ConfigError(f"densities.{name}", "density name does not resolve")
        spec = dict(self.densities[name])
        family = spec.pop("family")
        if family == "uniform":
            return make_density("uniform", body=self.build_body(spec.pop("body")))
        if family == "power_convex":
            return make_density("power_convex", dim=spec["dim"], alpha=float(spec["alpha"]),
                                beta=float(spec.get("beta", 1.0)))
        return make_density(family, dim=spec["dim"])

    def build_potential(self, name: str) -> Potential:
        if name in self.potentials:
            spec = self.potentials[name]
            dim = int(spec["dim"])
            if spec["kind"] == "quadratic":
                return Potential(
                    dim,
                    value=lambda pts: 0.5 * np.sum(np.atleast_2d(pts) ** 2, axis=1),
                    grad=lambda x: np.asarray(x, dtype=float),
                    hess=lambda x: np.eye(dim),
                    name="quadratic",
                )
            return make_density("gaussian", dim=dim).potential
        if name in self.densities:
            density = self.build_density(name)
            if density.potential is None:
                raise ConfigError(f"potentials.{name}",
                                  f"density {name!r} carries no potential oracle")
            return density.potential
        raise ConfigError(f"potentials.{name}", "potential name does not resolve")


def _validate_body(name: str, spec, where: str) -> dict:
    _require_keys(spec, {"family", "q", "radii", "halfspaces"}, {"family"}, where)
    family = spec["family"]
    if family not in _BODY_KEYS:
        raise ConfigError(f"{where}.family", f"unknown body family {family!r}")
    _require_keys(spec, _BODY_KEYS[family], _BODY_KEYS[family], where)
    return dict(spec)


def _validate_density(name: str, spec, where: str) -> dict:
    _require_keys(spec, {"family", "dim", "alpha", "beta", "body"}, {"family"}, where)
    family = spec["family"]
    if family not in _DENSITY_KEYS:
        raise ConfigError(f"{where}.family", f"unknown density family {family!r}")
    allowed = _DENSITY_KEYS[family]
    required = allowed - {"beta"}
    _require_keys(spec, allowed, required, where)
    return dict(spec)


def load_config(path) -> ScenarioConfig:
    """Load, validate and materialize a scenario file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(str(path), "file not found")
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}")
    return parse_config(raw, source=str(path))


def parse_config(raw: dict, source: str = "<memory>") -> ScenarioConfig:
    _require_keys(raw, _TOP_KEYS, {"version", "bodies", "densities", "checks"}, "config")
    if raw["version"] != SCHEMA_VERSION:
        raise ConfigError("config.version",
                          f"unsupported schema version {raw['version']!r}, expected {SCHEMA_VERSION}")
    seed = int(raw.get("seed", 0))
    output = raw.get("output", {"dir": "out"})
    _require_keys(output, {"dir"}, {"dir"}, "config.output")
    tolerance_scale = float(raw.get("tolerance_scale", 3.0))
    if tolerance_scale <= 0:
        raise ConfigError("config.tolerance_scale", "must be positive")

    bodies = {}
    for name, spec in raw["bodies"].items():
        bodies[name] = _validate_body(name, spec, f"config.bodies.{name}")
    densities = {}
    for name, spec in raw["densities"].items():
        densities[name] = _validate_density(name, spec, f"config.densities.{name}")
    potentials = {}
    for name, spec in raw.get("potentials", {}).items():
        where = f"config.potentials.{name}"
        _require_keys(spec, {"kind", "dim"}, {"kind", "dim"}, where)
        if spec["kind"] not in _POTENTIAL_KEYS:
            raise ConfigError(f"{where}.kind", f"unknown potential kind {spec['kind']!r}")
        potentials[name] = dict(spec)

    checks = []
    for i, entry in enumerate(raw["checks"]):
        where = f"config.checks[{i}]"
        if not isinstance(entry, dict) or "check" not in entry:
            raise ConfigError(where, "each check entry needs a 'check' key")
        kind = entry["check"]
        if kind not in _CHECK_KEYS:
            raise ConfigError(f"{where}.check", f"unknown check {kind!r}")
        _require_keys(entry, _CHECK_KEYS[kind] | _COMMON_CHECK_KEYS, {"check"}, where)
        entry = dict(entry)
        entry.setdefault("section", kind)
        if kind in _CHECK_SEEDED:
            entry.setdefault("seed", seed)
        for key, value in _CHECK_DEFAULTS.get(kind, {}).items():
            entry.setdefault(key, value)
        _check_references(entry, kind, bodies, densities, potentials, where)
        dim = _entry_dim(entry, kind, bodies)
        if kind in _GRID_CHECKS and dim is not None:
            table = _UHRIN_DEFAULTS if kind == "uhrin_functional_check" else _GRID_DEFAULTS
            entry.setdefault("resolution", table.get(dim, 64))
        checks.append(entry)

    curves = {}
    for name, spec in raw.get("curves", {}).items():
        where = f"config.curves.{name}"
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ConfigError(where, "each curve needs a 'kind' key")
        kind = spec["kind"]
        if kind not in _CURVE_KEYS:
            raise ConfigError(f"{where}.kind", f"unknown curve kind {kind!r}")
        required = _CURVE_KEYS[kind] - {"p", "resolution"}
        _require_keys(spec, _CURVE_KEYS[kind], required, where)
        grid = spec["t_grid"]
        _require_keys(grid, {"start", "stop", "count"}, {"start", "stop", "count"},
                      f"{where}.t_grid")
        for key in ("body", "density", "f", "g"):
            if key in spec:
                _check_name_resolves(spec[key], bodies, densities, f"{where}.{key}")
        curves[name] = dict(spec)

    return ScenarioConfig(
        version=SCHEMA_VERSION, seed=seed, output_dir=str(output["dir"]),
        tolerance_scale=tolerance_scale, bodies=bodies, densities=densities,
        potentials=potentials, checks=checks, curves=curves, source=source,
    )


def _body_dim(spec: dict) -> int:
    if spec["family"] == "lq_ball":
        return len(spec["radii"])
    return len(spec["halfspaces"][0][0])


def _entry_dim(entry: dict, kind: str, bodies: dict) -> int | None:
    for key in ("a", "body"):
        name = entry.get(key)
        if name in bodies:
            return _body_dim(bodies[name])
    if kind == "check_bmi_mset" and entry.get("bodies"):
        return _body_dim(bodies[entry["bodies"][0]])
    if kind == "uhrin_functional_check" and "f_box" in entry:
        return len(entry["f_box"])
    return None


def _check_name_resolves(ref, bodies, densities, where):
    if isinstance(ref, dict):
        _require_keys(ref, {"indicator_of"}, {"indicator_of"}, where)
        if ref["indicator_of"] not in bodies:
            raise ConfigError(where, f"body name {ref['indicator_of']!r} does not resolve")
        return
    if ref not in densities and ref not in bodies:
        raise ConfigError(where, f"name {ref!r} does not resolve")


def _check_references(entry, kind, bodies, densities, potentials, where):
    def need_body(key):
        if key in entry and entry[key] not in bodies:
            raise ConfigError(f"{where}.{key}", f"body name {entry[key]!r} does not resolve")

    def need_density(key):
        if key in entry and not isinstance(entry[key], dict) and entry[key] not in densities:
            raise ConfigError(f"{where}.{key}", f"density name {entry[key]!r} does not resolve")

    for key in ("a", "b", "body"):
        need_body(key)
    for key in ("density",):
        need_density(key)
    if kind in ("check_functional_B", "uhrin_functional_check"):
        for key in ("f", "g"):
            ref = entry.get(key)
            if isinstance(ref, dict):
                _check_name_resolves(ref, bodies, densities, f"{where}.{key}")
            elif ref is not None and ref not in densities:
                raise ConfigError(f"{where}.{key}", f"density name {ref!r} does not resolve")
    if kind == "check_bmi_mset":
        for name in entry.get("bodies", []):
            if name not in bodies:
                raise ConfigError(f"{where}.bodies", f"body name {name!r} does not resolve")
    if kind in ("lift_to_uniform", "certify_region"):
        name = entry.get("potential")
        if name is not None and name not in potentials and name not in densities:
            raise ConfigError(f"{where}.potential", f"potential name {name!r} does not resolve")
    if kind == "certify_region" and "region" in entry:
        _require_keys(entry["region"], {"kind", "radius", "bounds"}, {"kind"},
                      f"{where}.region")


def bundled_config_path(name: str) -> Path:
    """Path of a configuration shipped with the package (e.g. 'acceptance')."""
    base = resources.files("lpbm").joinpath("configs")
    candidate = base.joinpath(f"{name}.json")
    with resources.as_file(candidate) as p:
        if not p.exists():
            raise ConfigError(name, "no bundled configuration with this name")
        return Path(p)


def resolve_config_path(arg: str) -> Path:
    """Interpret a CLI argument as a file path or a bundled config name."""
    p = Path(arg)
    if p.exists():
        return p
    stem = arg[:-5] if arg.endswith(".json") else arg
    return bundled_config_path(stem)
