# Unit table for scenario files. Everything inside the package is SI.

micro = 1e-6
nano = 1e-9
pico = 1e-12

kHz = 1e3
MHz = 1e6
kPa = 1e3
cm = 1e-2
mm = 1e-3
um = micro
nm = nano
pW = pico
litre = 1e-3
atm = 101325.0

# unit string -> (dimension, factor to SI)
UNITS: dict[str, tuple[str, float]] = {
    "m": ("length", 1.0),
    "cm": ("length", cm),
    "mm": ("length", mm),
    "µm": ("length", um),
    "um": ("length", um),
    "nm": ("length", nm),
    "m^2": ("area", 1.0),
    "µm^2": ("area", um**2),
    "um^2": ("area", um**2),
    "nm^2": ("area", nm**2),
    "m^3": ("volume", 1.0),
    "L": ("volume", litre),
    "Hz": ("frequency", 1.0),
    "kHz": ("frequency", kHz),
    "MHz": ("frequency", MHz),
    "Pa": ("pressure", 1.0),
    "kPa": ("pressure", kPa),
    "W/m^2": ("intensity", 1.0),
    "W": ("power", 1.0),
    "pW": ("power", pW),
    "/Hz/m": ("absorption", 1.0),
    "/MHz/m": ("absorption", 1.0 / MHz),
    "kg/m^3": ("density", 1.0),
    "m/s": ("speed", 1.0),
    "Pa s": ("viscosity", 1.0),
    "K": ("temperature", 1.0),
    "W/m/K": ("conductivity", 1.0),
    "J/kg/K": ("heat_capacity", 1.0),
    "N/m": ("spring_constant", 1.0),
    "kg/(m^2 s)": ("sliding_drag", 1.0),
    "kg/s": ("drag", 1.0),
    "J": ("energy", 1.0),
    "s": ("time", 1.0),
}

# SI unit used when writing quantities back out
SI_UNIT = {dim: unit for unit, (dim, factor) in UNITS.items() if factor == 1.0 and unit not in ("um", "um^2")}


class UnitError(ValueError):
    pass


def to_si(value: float, unit: str, dimension: str | None = None) -> float:
    try:
        dim, factor = UNITS[unit]
    except KeyError:
        raise UnitError(f"unknown unit {unit!r}") from None
    if dimension is not None and dim != dimension:
        raise UnitError(f"unit {unit!r} is a {dim}, expected a {dimension}")
    return value * factor


def from_si(value: float, unit: str) -> float:
    return value / UNITS[unit][1]


def parse_quantity(text: str) -> dict:
    """Parse ``"2 µm"`` or ``"2µm"`` into a ``{"value", "unit"}`` mapping."""
    text = text.strip()
    for unit in sorted(UNITS, key=len, reverse=True):
        if text.endswith(unit):
            number = text[: -len(unit)].strip()
            try:
                return {"value": float(number), "unit": unit}
            except ValueError:
                continue
    raise UnitError(f"cannot parse quantity {text!r}")
