"""Run configuration: strict JSON parsing, serialization, presets.

The file format is plain JSON with a fixed schema.  Parsing is strict:
unknown keys raise ConfigError, as do missing required keys and values
of the wrong type.  serialize() emits keys in a fixed order so that
parse(serialize(c)) == c and repeated serializations are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError
from .evolution import BackgroundSpec, DeSitter, PowerLaw
from .model import ConstantPotential, KineticModel, PotentialSpec, QuadraticPotential
from .walls import WallProfile

__all__ = [
    "ScanRange",
    "EvolveSpec",
    "OutputSpec",
    "RunConfig",
    "parse_config",
    "load_config",
    "serialize_config",
    "preset_config",
    "PRESET_NAMES",
]


@dataclass(frozen=True)
class ScanRange:
    """Inclusive linear range with `count` points (count=1 pins `min`)."""

    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.min > self.max:
            raise ValueError(f"min={self.min} exceeds max={self.max}")


@dataclass(frozen=True)
class EvolveSpec:
    """Initial data and step control for the evolve command.

    Exactly one of `X` / `phidot` must be set; with X the positive
    velocity branch is taken.
    """

    t_end: float
    phi: float = 0.0
    X: Optional[float] = None
    phidot: Optional[float] = None
    t_start: float = 0.0
    a_start: float = 1.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    n_output: int = 201
    kinetic_only: bool = True

    def __post_init__(self):
        if (self.X is None) == (self.phidot is None):
            raise ValueError("give exactly one of X / phidot")


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    stem: str = "run"


@dataclass(frozen=True)
class RunConfig:
    model: KineticModel
    potential: PotentialSpec
    background: BackgroundSpec
    output: OutputSpec
    wall: Optional[WallProfile] = None
    scan: Optional[dict] = None
    evolve: Optional[EvolveSpec] = None

    def scan_ranges(self) -> dict:
        return dict(self.scan) if self.scan else {}


def _require_keys(obj: dict, where: str, required: tuple, optional: tuple = ()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise ConfigError(f"missing key(s) {missing} in {where}")


def _number(obj: dict, key: str, where: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    return float(v)


def _integer(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {v!r}")
    return v


def _string(obj: dict, key: str, where: str) -> str:
    v = obj[key]
    if not isinstance(v, str):
        raise ConfigError(f"{where}.{key} must be a string, got {v!r}")
    return v


def _boolean(obj: dict, key: str, where: str) -> bool:
    v = obj[key]
    if not isinstance(v, bool):
        raise ConfigError(f"{where}.{key} must be true/false, got {v!r}")
    return v


def _parse_model(obj) -> KineticModel:
    _require_keys(obj, "model", ("F2", "X0"), ("eps0", "F0"))
    kwargs = {"F2": _number(obj, "F2", "model"), "X0": _number(obj, "X0", "model")}
    if "eps0" in obj:
        kwargs["eps0"] = _number(obj, "eps0", "model")
    if "F0" in obj:
        kwargs["F0"] = _number(obj, "F0", "model")
    try:
        return KineticModel(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid model: {exc}") from None


def _parse_potential(obj) -> PotentialSpec:
    _require_keys(obj, "potential", ("kind",),
                  ("V0", "m2"))
    kind = _string(obj, "kind", "potential")
    if kind == "constant":
        _require_keys(obj, "potential", ("kind", "V0"))
        try:
            return ConstantPotential(V0=_number(obj, "V0", "potential"))
        except ValueError as exc:
            raise ConfigError(f"invalid potential: {exc}") from None
    if kind == "quadratic":
        _require_keys(obj, "potential", ("kind", "m2"))
        try:
            return QuadraticPotential(m2=_number(obj, "m2", "potential"))
        except ValueError as exc:
            raise ConfigError(f"invalid potential: {exc}") from None
    raise ConfigError(f"potential.kind must be 'constant' or 'quadratic', got {kind!r}")


def _parse_background(obj) -> BackgroundSpec:
    _require_keys(obj, "background", ("kind",), ("H", "p", "t0"))
    kind = _string(obj, "kind", "background")
    if kind == "desitter":
        _require_keys(obj, "background", ("kind", "H"))
        try:
            return DeSitter(H=_number(obj, "H", "background"))
        except ValueError as exc:
            raise ConfigError(f"invalid background: {exc}") from None
    if kind == "powerlaw":
        _require_keys(obj, "background", ("kind", "p"), ("t0",))
        kwargs = {"p": _number(obj, "p", "background")}
        if "t0" in obj:
            kwargs["t0"] = _number(obj, "t0", "background")
        try:
            return PowerLaw(**kwargs)
        except ValueError as exc:
            raise ConfigError(f"invalid background: {exc}") from None
    raise ConfigError(f"background.kind must be 'desitter' or 'powerlaw', got {kind!r}")


def _parse_wall(obj) -> WallProfile:
    _require_keys(obj, "wall", ("b", "L"))
    try:
        return WallProfile(b=_number(obj, "b", "wall"), L=_number(obj, "L", "wall"))
    except ValueError as exc:
        raise ConfigError(f"invalid wall: {exc}") from None


def _parse_scan(obj) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError("scan must be an object of named ranges")
    out = {}
    for name, entry in obj.items():
        where = f"scan.{name}"
        _require_keys(entry, where, ("min", "max", "count"))
        try:
            out[name] = ScanRange(min=_number(entry, "min", where),
                                  max=_number(entry, "max", where),
                                  count=_integer(entry, "count", where))
        except ValueError as exc:
            raise ConfigError(f"invalid {where}: {exc}") from None
    return out


def _parse_evolve(obj) -> EvolveSpec:
    _require_keys(obj, "evolve", ("t_end",),
                  ("phi", "X", "phidot", "t_start", "a_start",
                   "rel_tol", "abs_tol", "n_output", "kinetic_only"))
    kwargs = {"t_end": _number(obj, "t_end", "evolve")}
    for key in ("phi", "X", "phidot", "t_start", "a_start", "rel_tol", "abs_tol"):
        if key in obj:
            kwargs[key] = _number(obj, key, "evolve")
    if "n_output" in obj:
        kwargs["n_output"] = _integer(obj, "n_output", "evolve")
    if "kinetic_only" in obj:
        kwargs["kinetic_only"] = _boolean(obj, "kinetic_only", "evolve")
    try:
        return EvolveSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid evolve block: {exc}") from None


def _parse_output(obj) -> OutputSpec:
    _require_keys(obj, "output", (), ("directory", "stem"))
    kwargs = {}
    if "directory" in obj:
        kwargs["directory"] = _string(obj, "directory", "output")
    if "stem" in obj:
        kwargs["stem"] = _string(obj, "stem", "output")
    return OutputSpec(**kwargs)


def parse_config(text: str) -> RunConfig:
    """Parse a JSON config document.  Strict: unknown keys are errors."""
    try:
        root = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    _require_keys(root, "config", ("model", "potential", "background"),
                  ("wall", "scan", "evolve", "output"))
    return RunConfig(
        model=_parse_model(root["model"]),
        potential=_parse_potential(root["potential"]),
        background=_parse_background(root["background"]),
        wall=_parse_wall(root["wall"]) if "wall" in root else None,
        scan=_parse_scan(root["scan"]) if "scan" in root else None,
        evolve=_parse_evolve(root["evolve"]) if "evolve" in root else None,
        output=_parse_output(root["output"]) if "output" in root else OutputSpec(),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _model_dict(m: KineticModel) -> dict:
    return {"F2": m.F2, "X0": m.X0, "eps0": m.eps0, "F0": m.F0}


def _potential_dict(p: PotentialSpec) -> dict:
    if isinstance(p, ConstantPotential):
        return {"kind": "constant", "V0": p.V0}
    return {"kind": "quadratic", "m2": p.m2}


def _background_dict(b: BackgroundSpec) -> dict:
    if isinstance(b, DeSitter):
        return {"kind": "desitter", "H": b.H}
    return {"kind": "powerlaw", "p": b.p, "t0": b.t0}


def _evolve_dict(e: EvolveSpec) -> dict:
    out = {"t_end": e.t_end, "phi": e.phi}
    if e.X is not None:
        out["X"] = e.X
    if e.phidot is not None:
        out["phidot"] = e.phidot
    out.update({"t_start": e.t_start, "a_start": e.a_start,
                "rel_tol": e.rel_tol, "abs_tol": e.abs_tol,
                "n_output": e.n_output, "kinetic_only": e.kinetic_only})
    return out


def serialize_config(config: RunConfig) -> str:
    doc = {
        "model": _model_dict(config.model),
        "potential": _potential_dict(config.potential),
        "background": _background_dict(config.background),
    }
    if config.wall is not None:
        doc["wall"] = {"b": config.wall.b, "L": config.wall.L}
    if config.scan is not None:
        doc["scan"] = {name: {"min": r.min, "max": r.max, "count": r.count}
                       for name, r in config.scan.items()}
    if config.evolve is not None:
        doc["evolve"] = _evolve_dict(config.evolve)
    doc["output"] = {"directory": config.output.directory,
                     "stem": config.output.stem}
    return json.dumps(doc, indent=2) + "\n"


# Presets bundle the standard demonstration cases: the two profile
# steepnesses (figure1), the L-trio sharpness comparison (figure2), and
# the reference parameter point F2=1e3, eps0=1e-2, X0=1e3 with F0=-1
# (paper-point).
_REFERENCE_MODEL = KineticModel(F2=1e3, X0=1e3, eps0=1e-2, F0=-1.0)

PRESET_NAMES = ("figure1", "figure2", "paper-point")


def preset_config(name: str) -> RunConfig:
    common = dict(model=_REFERENCE_MODEL,
                  potential=ConstantPotential(V0=1.0),
                  background=DeSitter(H=1.0))
    if name == "figure1":
        return RunConfig(
            **common,
            wall=WallProfile(b=10.0, L=9.0),
            scan={"b": ScanRange(3.0, 10.0, 2), "L": ScanRange(9.0, 9.0, 1)},
            output=OutputSpec(directory="out", stem="figure1"),
        )
    if name == "figure2":
        return RunConfig(
            **common,
            wall=WallProfile(b=10.0, L=9.0),
            scan={"b": ScanRange(10.0, 10.0, 1), "L": ScanRange(3.0, 9.0, 3)},
            output=OutputSpec(directory="out", stem="figure2"),
        )
    if name == "paper-point":
        return RunConfig(
            **common,
            wall=WallProfile(b=10.0, L=9.0),
            scan={"X": ScanRange(1e3, 2e3, 101),
                  "X0": ScanRange(1e3, 1e3, 1),
                  "eps0": ScanRange(1e-2, 1e-2, 1),
                  "F2": ScanRange(1e3, 1e3, 1)},
            evolve=EvolveSpec(t_end=3.0, X=1.05e3),
            output=OutputSpec(directory="out", stem="paper_point"),
        )
    raise ConfigError(
        f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
