"""Scenario data model: the physical inputs shared by every other module.

All values are SI. Defaults reproduce the reference two-micron robot with
twenty 300 nm pistons, water-like plasma around it, and a 1000 W/m^2 source.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field, fields, is_dataclass, replace
from pathlib import Path
from typing import Any, Union

from .errors import ScenarioError
from .units import SI_UNIT, UnitError, parse_quantity, to_si

SAFETY_INTENSITY = 1000.0  # W/m^2, extended-use limit
MIN_FREQUENCY = 20e3
MAX_FREQUENCY = 1e6
MAX_KR = 0.05
LUNG_TRANSMISSION = 0.2  # lumped ribs + impedance mismatch, energy fraction
LUNG_IMPEDANCE_TRANSMISSION = 0.36  # impedance mismatch alone
SOURCE_PRESSURE_TOLERANCE = 0.05

_REL = 1e-12


def q(dim: str, **kw):
    """Dataclass field carrying a physical dimension for the file loader."""
    return field(metadata={"dim": dim}, **kw)


@dataclass(frozen=True)
class PistonGeometry:
    diameter: float = q("length", default=300e-9)
    thickness: float = q("length", default=10e-9)
    half_range: float = q("length", default=100e-9)
    face_area: float = q("area", default=None)
    sliding_area_piston: float = q("area", default=None)
    housing_diameter: float = q("length", default=340e-9)
    housing_depth: float = q("length", default=440e-9)

    def __post_init__(self):
        if self.face_area is None:
            object.__setattr__(self, "face_area", math.pi * (self.diameter / 2) ** 2)
        if self.sliding_area_piston is None:
            object.__setattr__(self, "sliding_area_piston", math.pi * self.diameter * self.thickness)

    @property
    def swept_volume(self) -> float:
        return 2 * self.half_range * self.face_area


@dataclass(frozen=True)
class SpringSpec:
    spring_constant: float = q("spring_constant", default=0.2)
    max_perp_overlap: float = q("length", default=300e-9)
    max_parallel_overlap: float = q("length", default=200e-9)
    overlap_area_bound: float = q("area", default=0.01e-12)


@dataclass(frozen=True)
class FluidMedium:
    dynamic_viscosity: float = q("viscosity", default=1e-3)
    bulk_viscosity: float = q("viscosity", default=3e-3)
    temperature: float = q("temperature", default=310.0)
    thermal_conductivity: float = q("conductivity", default=0.6)
    heat_capacity_cp: float = q("heat_capacity", default=4200.0)
    heat_capacity_ratio: float = 1.02
    density: float = q("density", default=1000.0)
    sound_speed: float = q("speed", default=1500.0)

    @property
    def impedance(self) -> float:
        return self.density * self.sound_speed


@dataclass(frozen=True)
class TissueMedium:
    name: str = "soft_tissue"
    absorption: float = q("absorption", default=8.3e-6)  # 1/(Hz m)
    density: float = q("density", default=1000.0)
    sound_speed: float = q("speed", default=1500.0)

    @classmethod
    def from_per_mhz(cls, name: str, per_mhz_per_m: float, **kw) -> "TissueMedium":
        return cls(name=name, absorption=per_mhz_per_m * 1e-6, **kw)

    @property
    def absorption_per_mhz(self) -> float:
        return self.absorption * 1e6

    @property
    def impedance(self) -> float:
        return self.density * self.sound_speed


SOFT_TISSUE = TissueMedium.from_per_mhz("soft_tissue", 8.3)
LUNG = TissueMedium.from_per_mhz("lung", 470.0)
TISSUES = {"soft_tissue": SOFT_TISSUE, "lung": LUNG}


@dataclass(frozen=True)
class TissuePath:
    segments: tuple[tuple[TissueMedium, float], ...] = ((SOFT_TISSUE, 0.20),)
    interface_energy_transmission: tuple[float, ...] = ()

    @property
    def total_length(self) -> float:
        return sum(length for _, length in self.segments)

    @property
    def boundaries(self) -> list[float]:
        """Depths of the interfaces between consecutive segments."""
        out, depth = [], 0.0
        for _, length in self.segments[:-1]:
            depth += length
            out.append(depth)
        return out

    def segment_index(self, depth: float) -> int:
        """Segment containing ``depth``; an interface depth belongs to the deeper side."""
        edge = 0.0
        for i, (_, length) in enumerate(self.segments):
            edge += length
            if depth < edge:
                return i
        return len(self.segments) - 1


def soft_tissue_path(length: float = 0.20) -> TissuePath:
    return TissuePath(((SOFT_TISSUE, length),))


def lung_path(
    soft_length: float = 0.05,
    lung_length: float = 0.10,
    transmission: float = LUNG_TRANSMISSION,
) -> TissuePath:
    return TissuePath(((SOFT_TISSUE, soft_length), (LUNG, lung_length)), (transmission,))


@dataclass(frozen=True)
class FrequencyShare:
    frequency: float = q("frequency", default=100e3)
    share: float = 1.0


@dataclass(frozen=True)
class SourceSpec:
    """Transducer output.

    ``pressure`` is the nominal skin-side pressure amplitude. When ``None`` it
    is derived from ``intensity`` with the reflection loss applied to the
    amplitude; when set it must agree with that derived value within
    ``SOURCE_PRESSURE_TOLERANCE``.
    """

    intensity: float = q("intensity", default=1000.0)
    reflection_loss_fraction: float = 0.1
    frequencies: tuple[FrequencyShare, ...] = (FrequencyShare(),)
    pressure: float | None = q("pressure", default=50e3)


@dataclass(frozen=True)
class RobotDesign:
    radius: float = q("length", default=1e-6)
    piston: PistonGeometry = field(default_factory=PistonGeometry)
    spring: SpringSpec = field(default_factory=SpringSpec)
    num_pistons: int = 20
    duty_cycle: float = 0.5
    surface_fraction_moving: float = 0.11
    drag_factor: float = 45.0
    sliding_drag_coefficient: float = q("sliding_drag", default=1e3)


@dataclass(frozen=True)
class DensitySegment:
    start: float = q("length", default=0.0)
    end: float = q("length", default=0.0)
    multiplier: float = 1.0


@dataclass(frozen=True)
class SwarmScenario:
    robot_count: float = 0.0
    body_volume: float = q("volume", default=0.05)
    density_profile: tuple[DensitySegment, ...] = ()


@dataclass(frozen=True)
class NoMitigation:
    pass


@dataclass(frozen=True)
class PowerCap:
    cap: float = q("power", default=100e-12)  # per robot


@dataclass(frozen=True)
class SplitFrequency:
    threshold: float = q("power", default=2.3e-12)  # per robot


@dataclass(frozen=True)
class AvoidPath:
    depth_range: tuple[float, float] = (0.0, 0.05)
    redistribute: bool = False


@dataclass(frozen=True)
class SyncDutyCycle:
    off_fraction: float = 0.5
    shallow_depth_range: tuple[float, float] = (0.0, 0.05)


MitigationStrategy = Union[NoMitigation, PowerCap, SplitFrequency, AvoidPath, SyncDutyCycle]

STRATEGY_NAMES = {
    "none": NoMitigation,
    "power_cap": PowerCap,
    "split_frequency": SplitFrequency,
    "avoid_path": AvoidPath,
    "sync_duty_cycle": SyncDutyCycle,
}


def _default_frequencies() -> tuple[float, ...]:
    return tuple(float(f) for f in (20e3, 30e3, 40e3, 50e3, 70e3, 100e3, 150e3, 200e3, 300e3, 500e3, 700e3, 1e6))


@dataclass(frozen=True)
class Numerics:
    step: float = q("length", default=1e-4)
    sample_spacing: float = q("length", default=1e-3)
    frequencies: tuple[float, ...] = field(default_factory=_default_frequencies, metadata={"dim": "frequency"})
    depths: tuple[float, ...] = field(default=(0.0, 0.05, 0.10, 0.15, 0.20), metadata={"dim": "length"})
    include_passive: bool = False
    cross_section_depth: float = q("length", default=0.20)
    steps_per_cycle: int = 400
    sweep_parameter: str = "swarm.robot_count"
    sweep_values: tuple = (1e10, 1e11, 1e12)


@dataclass(frozen=True)
class Scenario:
    robot: RobotDesign = field(default_factory=RobotDesign)
    fluid: FluidMedium = field(default_factory=FluidMedium)
    source: SourceSpec = field(default_factory=SourceSpec)
    path: TissuePath = field(default_factory=soft_tissue_path)
    swarm: SwarmScenario = field(default_factory=SwarmScenario)
    mitigation: MitigationStrategy = field(default_factory=NoMitigation)
    numerics: Numerics = field(default_factory=Numerics)

    def configured_frequencies(self) -> list[float]:
        return sorted({*self.numerics.frequencies, *(fs.frequency for fs in self.source.frequencies)})


# ---------------------------------------------------------------------------
# validation


def _rel_close(a: float, b: float, rel: float = _REL) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b))


def _positive(obj, prefix: str, names, out: list[str]) -> None:
    for name in names:
        value = getattr(obj, name)
        if not value > 0:
            out.append(f"{prefix}.{name}: must be > 0 (got {value!r})")


def validate_scenario(scenario: Scenario) -> list[str]:
    """Return one ``"dotted.path: message"`` entry per violated invariant."""
    from .tissue import pressure_from_intensity

    out: list[str] = []
    robot = scenario.robot

    g = robot.piston
    _positive(g, "robot.piston", [f.name for f in fields(g)], out)
    if g.diameter > 0 and not _rel_close(g.face_area, math.pi * (g.diameter / 2) ** 2):
        out.append(f"robot.piston.face_area: {g.face_area!r} != pi (d/2)^2")
    if g.diameter > 0 and not _rel_close(g.sliding_area_piston, math.pi * g.diameter * g.thickness):
        out.append(f"robot.piston.sliding_area_piston: {g.sliding_area_piston!r} != pi d tau")
    if not 2 * g.half_range + g.thickness < g.housing_depth:
        out.append("robot.piston.housing_depth: range of motion plus thickness must fit (2a + tau < H)")

    s = robot.spring
    _positive(s, "robot.spring", [f.name for f in fields(s)], out)
    if s.overlap_area_bound > s.max_perp_overlap * s.max_parallel_overlap:
        out.append("robot.spring.overlap_area_bound: exceeds max_perp_overlap * max_parallel_overlap")

    fl = scenario.fluid
    _positive(fl, "fluid", [f.name for f in fields(fl)], out)
    if fl.heat_capacity_ratio < 1:
        out.append("fluid.heat_capacity_ratio: must be >= 1")

    _positive(robot, "robot", ["radius"], out)
    if robot.num_pistons < 0 or int(robot.num_pistons) != robot.num_pistons:
        out.append("robot.num_pistons: must be a non-negative integer")
    if not 0 < robot.duty_cycle <= 1:
        out.append("robot.duty_cycle: must lie in (0, 1]")
    if not 0 < robot.surface_fraction_moving < 1:
        out.append("robot.surface_fraction_moving: must lie in (0, 1)")
    if robot.drag_factor < 0:
        out.append("robot.drag_factor: must be >= 0")
    if robot.sliding_drag_coefficient < 0:
        out.append("robot.sliding_drag_coefficient: must be >= 0")

    c = scenario.path.segments[0][0].sound_speed if scenario.path.segments else fl.sound_speed
    for f in scenario.configured_frequencies():
        kr = 2 * math.pi * f / c * robot.radius
        if not kr < MAX_KR:
            out.append(f"robot.radius: k r = {kr:.3g} at {f:g} Hz is not < {MAX_KR} (long-wavelength limit)")
            break

    path = scenario.path
    if not path.segments:
        out.append("path.segments: at least one segment required")
    for i, (medium, length) in enumerate(path.segments):
        if not length > 0:
            out.append(f"path.segments[{i}].length: must be > 0")
        if medium.absorption < 0:
            out.append(f"path.segments[{i}].medium.absorption: must be >= 0")
        _positive(medium, f"path.segments[{i}].medium", ["density", "sound_speed"], out)
    if len(path.interface_energy_transmission) != max(len(path.segments) - 1, 0):
        out.append("path.interface_energy_transmission: need exactly one factor per segment boundary")
    for i, t in enumerate(path.interface_energy_transmission):
        if not 0 < t <= 1:
            out.append(f"path.interface_energy_transmission[{i}]: must lie in (0, 1]")

    src = scenario.source
    if src.intensity < 0:
        out.append("source.intensity: must be >= 0")
    elif src.intensity > SAFETY_INTENSITY:
        out.append(
            f"source.intensity: {src.intensity:g} W/m^2 exceeds the {SAFETY_INTENSITY:g} W/m^2 safety limit"
        )
    if not 0 <= src.reflection_loss_fraction < 1:
        out.append("source.reflection_loss_fraction: must lie in [0, 1)")
    shares = [fs.share for fs in src.frequencies]
    if any(not 0 <= x <= 1 for x in shares):
        out.append("source.frequencies: each share must lie in [0, 1]")
    if sum(shares) > 1 + 1e-12:
        out.append(f"source.frequencies: shares sum to {sum(shares):g} > 1")
    for i, fs in enumerate(src.frequencies):
        if not MIN_FREQUENCY <= fs.frequency <= MAX_FREQUENCY:
            out.append(f"source.frequencies[{i}].frequency: {fs.frequency:g} Hz outside 20 kHz - 1 MHz")
    if src.pressure is not None and src.intensity >= 0 and 0 <= src.reflection_loss_fraction < 1:
        derived = (1 - src.reflection_loss_fraction) * pressure_from_intensity(src.intensity, fl)
        if src.pressure <= 0:
            out.append("source.pressure: must be > 0")
        elif abs(src.pressure - derived) > SOURCE_PRESSURE_TOLERANCE * derived:
            out.append(
                f"source.pressure: {src.pressure:g} Pa inconsistent with intensity and reflection loss "
                f"({derived:g} Pa)"
            )

    sw = scenario.swarm
    if sw.robot_count < 0:
        out.append("swarm.robot_count: must be >= 0")
    if not sw.body_volume > 0:
        out.append("swarm.body_volume: must be > 0")
    for i, seg in enumerate(sw.density_profile):
        if seg.multiplier < 0:
            out.append(f"swarm.density_profile[{i}].multiplier: must be >= 0")
        if not seg.end > seg.start:
            out.append(f"swarm.density_profile[{i}]: end must exceed start")

    m = scenario.mitigation
    total = path.total_length
    if isinstance(m, PowerCap) and not m.cap > 0:
        out.append("mitigation.cap: must be > 0")
    if isinstance(m, SplitFrequency):
        if not m.threshold > 0:
            out.append("mitigation.threshold: must be > 0")
        if len(src.frequencies) != 2:
            out.append("source.frequencies: split_frequency needs exactly two frequencies")
    if isinstance(m, AvoidPath):
        lo, hi = m.depth_range
        if not 0 <= lo <= hi <= total:
            out.append("mitigation.depth_range: must lie within the path")
    if isinstance(m, SyncDutyCycle):
        if not 0 <= m.off_fraction < 1:
            out.append("mitigation.off_fraction: must lie in [0, 1)")
        lo, hi = m.shallow_depth_range
        if not 0 <= lo < hi <= total:
            out.append("mitigation.shallow_depth_range: must be a non-empty range within the path")

    n = scenario.numerics
    _positive(n, "numerics", ["step", "sample_spacing"], out)
    if n.steps_per_cycle < 200:
        out.append("numerics.steps_per_cycle: must be >= 200")
    if any(d < 0 or d > total for d in n.depths):
        out.append("numerics.depths: every depth must lie within the path")
    if not 0 <= n.cross_section_depth <= total:
        out.append("numerics.cross_section_depth: must lie within the path")
    return out


# ---------------------------------------------------------------------------
# scenario files

TOP_LEVEL_KEYS = ("robot", "source", "path", "swarm", "mitigation", "numerics")


def _quantity(raw: Any, dim: str, where: str) -> float:
    if isinstance(raw, str):
        try:
            raw = parse_quantity(raw)
        except UnitError as exc:
            raise ScenarioError(f"{where}: {exc}") from None
    if not isinstance(raw, dict) or set(raw) != {"value", "unit"}:
        raise ScenarioError(f"{where}: expected {{\"value\": number, \"unit\": string}}")
    if not isinstance(raw["value"], (int, float)) or isinstance(raw["value"], bool):
        raise ScenarioError(f"{where}.value: expected a number")
    try:
        return to_si(float(raw["value"]), raw["unit"], dim)
    except UnitError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _plain(raw: Any, kind: type, where: str):
    if kind is bool:
        if not isinstance(raw, bool):
            raise ScenarioError(f"{where}: expected true/false")
        return raw
    if kind is str:
        if not isinstance(raw, str):
            raise ScenarioError(f"{where}: expected a string")
        return raw
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ScenarioError(f"{where}: expected a number")
    return raw


def _check_keys(raw: Any, allowed, where: str) -> None:
    if not isinstance(raw, dict):
        raise ScenarioError(f"{where}: expected an object")
    unknown = sorted(set(raw) - set(allowed))
    if unknown:
        raise ScenarioError(f"{where}: unknown key(s) {', '.join(unknown)}")


_SCALAR_KINDS = {"num_pistons": int, "steps_per_cycle": int, "include_passive": bool,
                 "redistribute": bool, "sweep_parameter": str, "name": str}


def _flat(cls, raw: dict, where: str, skip=()):
    """Build a dataclass whose fields are scalars, quantities or lists of quantities."""
    _check_keys(raw, [f.name for f in fields(cls) if f.name not in skip], where)
    kwargs = {}
    for f in fields(cls):
        if f.name in skip or f.name not in raw:
            continue
        value, at = raw[f.name], f"{where}.{f.name}"
        dim = f.metadata.get("dim")
        if f.name == "sweep_values":
            if not isinstance(value, list):
                raise ScenarioError(f"{at}: expected a list")
            kwargs[f.name] = tuple(value)
        elif f.name in ("depth_range", "shallow_depth_range"):
            if not isinstance(value, list) or len(value) != 2:
                raise ScenarioError(f"{at}: expected [start, end]")
            kwargs[f.name] = tuple(_quantity(v, "length", f"{at}[{i}]") for i, v in enumerate(value))
        elif dim and f.name in ("frequencies", "depths"):
            if not isinstance(value, list):
                raise ScenarioError(f"{at}: expected a list")
            kwargs[f.name] = tuple(_quantity(v, dim, f"{at}[{i}]") for i, v in enumerate(value))
        elif dim:
            kwargs[f.name] = None if value is None else _quantity(value, dim, at)
        else:
            kwargs[f.name] = _plain(value, _SCALAR_KINDS.get(f.name, float), at)
    return cls(**kwargs)


def _medium(raw: Any, where: str) -> TissueMedium:
    if isinstance(raw, str):
        try:
            return TISSUES[raw]
        except KeyError:
            raise ScenarioError(f"{where}: unknown tissue {raw!r} (known: {', '.join(TISSUES)})") from None
    return _flat(TissueMedium, raw, where)


def scenario_from_dict(raw: dict) -> Scenario:
    """Parse a scenario mapping (the JSON file contents). Unknown keys are errors."""
    _check_keys(raw, TOP_LEVEL_KEYS, "scenario")
    kw: dict[str, Any] = {}

    if "robot" in raw:
        r = raw["robot"]
        _check_keys(r, [f.name for f in fields(RobotDesign)] + ["fluid"], "robot")
        sub = {}
        if "piston" in r:
            sub["piston"] = _flat(PistonGeometry, r["piston"], "robot.piston")
        if "spring" in r:
            sub["spring"] = _flat(SpringSpec, r["spring"], "robot.spring")
        if "fluid" in r:
            kw["fluid"] = _flat(FluidMedium, r["fluid"], "robot.fluid")
        rest = {k: v for k, v in r.items() if k not in ("piston", "spring", "fluid")}
        kw["robot"] = replace(_flat(RobotDesign, rest, "robot", skip=("piston", "spring")), **sub)

    if "source" in raw:
        s = raw["source"]
        _check_keys(s, [f.name for f in fields(SourceSpec)], "source")
        freqs = None
        if "frequencies" in s:
            if not isinstance(s["frequencies"], list):
                raise ScenarioError("source.frequencies: expected a list")
            freqs = tuple(
                _flat(FrequencyShare, item, f"source.frequencies[{i}]") for i, item in enumerate(s["frequencies"])
            )
        src = _flat(SourceSpec, {k: v for k, v in s.items() if k != "frequencies"}, "source", skip=("frequencies",))
        kw["source"] = replace(src, frequencies=freqs) if freqs is not None else src

    if "path" in raw:
        p = raw["path"]
        _check_keys(p, ["segments", "interface_energy_transmission"], "path")
        segs = []
        for i, item in enumerate(p.get("segments", [])):
            at = f"path.segments[{i}]"
            _check_keys(item, ["medium", "length"], at)
            if "medium" not in item or "length" not in item:
                raise ScenarioError(f"{at}: needs medium and length")
            segs.append((_medium(item["medium"], f"{at}.medium"), _quantity(item["length"], "length", f"{at}.length")))
        trans = tuple(
            float(_plain(t, float, f"path.interface_energy_transmission[{i}]"))
            for i, t in enumerate(p.get("interface_energy_transmission", []))
        )
        kw["path"] = TissuePath(tuple(segs), trans)

    if "swarm" in raw:
        w = raw["swarm"]
        _check_keys(w, [f.name for f in fields(SwarmScenario)], "swarm")
        prof = tuple(
            _flat(DensitySegment, item, f"swarm.density_profile[{i}]")
            for i, item in enumerate(w.get("density_profile", []))
        )
        base = _flat(SwarmScenario, {k: v for k, v in w.items() if k != "density_profile"}, "swarm",
                     skip=("density_profile",))
        kw["swarm"] = replace(base, density_profile=prof)

    if "mitigation" in raw:
        m = dict(raw["mitigation"]) if isinstance(raw["mitigation"], dict) else raw["mitigation"]
        if not isinstance(m, dict) or "strategy" not in m:
            raise ScenarioError("mitigation: expected an object with a 'strategy' key")
        name = m.pop("strategy")
        if name not in STRATEGY_NAMES:
            raise ScenarioError(f"mitigation.strategy: unknown strategy {name!r} (known: {', '.join(STRATEGY_NAMES)})")
        kw["mitigation"] = _flat(STRATEGY_NAMES[name], m, "mitigation")

    if "numerics" in raw:
        n = dict(raw["numerics"]) if isinstance(raw["numerics"], dict) else raw["numerics"]
        if isinstance(n, dict) and "sweep" in n:
            sweep = n.pop("sweep")
            _check_keys(sweep, ["parameter", "values"], "numerics.sweep")
            if "parameter" in sweep:
                n["sweep_parameter"] = sweep["parameter"]
            if "values" in sweep:
                n["sweep_values"] = sweep["values"]
        kw["numerics"] = _flat(Numerics, n, "numerics")

    return Scenario(**kw)


def _dump_flat(obj, skip=()) -> dict:
    out = {}
    for f in fields(obj):
        if f.name in skip:
            continue
        value = getattr(obj, f.name)
        dim = f.metadata.get("dim")
        if f.name == "sweep_values":
            out[f.name] = list(value)
        elif f.name in ("depth_range", "shallow_depth_range"):
            out[f.name] = [{"value": v, "unit": "m"} for v in value]
        elif dim and isinstance(value, tuple):
            out[f.name] = [{"value": v, "unit": SI_UNIT[dim]} for v in value]
        elif dim:
            out[f.name] = None if value is None else {"value": value, "unit": SI_UNIT[dim]}
        else:
            out[f.name] = value
    return out


def scenario_to_dict(scenario: Scenario) -> dict:
    """Fully resolved scenario in SI units; ``scenario_from_dict`` inverts it."""
    robot = _dump_flat(scenario.robot, skip=("piston", "spring"))
    robot["piston"] = _dump_flat(scenario.robot.piston)
    robot["spring"] = _dump_flat(scenario.robot.spring)
    robot["fluid"] = _dump_flat(scenario.fluid)
    source = _dump_flat(scenario.source, skip=("frequencies",))
    source["frequencies"] = [_dump_flat(fs) for fs in scenario.source.frequencies]
    path = {
        "segments": [{"medium": _dump_flat(m), "length": {"value": L, "unit": "m"}} for m, L in scenario.path.segments],
        "interface_energy_transmission": list(scenario.path.interface_energy_transmission),
    }
    swarm = _dump_flat(scenario.swarm, skip=("density_profile",))
    swarm["density_profile"] = [_dump_flat(seg) for seg in scenario.swarm.density_profile]
    name = next(k for k, v in STRATEGY_NAMES.items() if isinstance(scenario.mitigation, v))
    mitigation = {"strategy": name, **_dump_flat(scenario.mitigation)}
    numerics = _dump_flat(scenario.numerics, skip=("sweep_parameter", "sweep_values"))
    numerics["sweep"] = {"parameter": scenario.numerics.sweep_parameter,
                         "values": list(scenario.numerics.sweep_values)}
    return {"robot": robot, "source": source, "path": path, "swarm": swarm,
            "mitigation": mitigation, "numerics": numerics}


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply ``dotted.path=value`` overrides to a raw scenario mapping.

    The value is read as JSON when possible, else as a quantity string such as
    ``"2 µm"``. A bare number replacing a quantity keeps the quantity's unit.
    """
    raw = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(f"override {item!r}: expected key=value")
        key, text = item.split("=", 1)
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            try:
                value = parse_quantity(text)
            except UnitError:
                value = text
        set_dotted(raw, key.strip(), value)
    return raw


def set_dotted(raw: dict, key: str, value: Any) -> None:
    parts = key.split(".")
    node = raw
    for part in parts[:-1]:
        if isinstance(node, list):
            node = node[int(part)]
        else:
            node = node.setdefault(part, {})
    last = parts[-1]
    if isinstance(node, list):
        node[int(last)] = value
        return
    current = node.get(last)
    if isinstance(current, dict) and set(current) == {"value", "unit"} and isinstance(value, (int, float)):
        node[last] = {"value": value, "unit": current["unit"]}
    else:
        node[last] = value


def load_scenario_dict(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from None


def load_scenario(path: str | Path, overrides: list[str] | None = None) -> Scenario:
    return scenario_from_dict(apply_overrides(load_scenario_dict(path), overrides or []))
