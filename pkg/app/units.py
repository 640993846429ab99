"""SI quantity parsing with unit suffixes.

"12.5 GHz", "12.5GHz", "70ps" and a bare "1.25e10" all parse; suffixes match
exactly first, then case-insensitively ("12.5Ghz"). A suffix of the wrong
dimension or an unknown one raises ConfigError.
"""

import math
import re
from typing import Dict, Optional, Tuple

from app.errors import ConfigError

FREQUENCY = "frequency"
TIME = "time"
VOLTAGE = "voltage"
POWER = "power"
LOSS = "loss"
ANGLE = "angle"

# Canonical SI unit printed for each dimension
BASE_UNITS = {
    FREQUENCY: "Hz",
    TIME: "s",
    VOLTAGE: "V",
    POWER: "W",
    LOSS: "dB",
    ANGLE: "rad",
    None: "1",
}

UNITS: Dict[str, Tuple[str, float]] = {
    "THz": (FREQUENCY, 1e12),
    "GHz": (FREQUENCY, 1e9),
    "MHz": (FREQUENCY, 1e6),
    "kHz": (FREQUENCY, 1e3),
    "Hz": (FREQUENCY, 1.0),
    "s": (TIME, 1.0),
    "ms": (TIME, 1e-3),
    "us": (TIME, 1e-6),
    "ns": (TIME, 1e-9),
    "ps": (TIME, 1e-12),
    "fs": (TIME, 1e-15),
    "V": (VOLTAGE, 1.0),
    "mV": (VOLTAGE, 1e-3),
    "W": (POWER, 1.0),
    "mW": (POWER, 1e-3),
    "dB": (LOSS, 1.0),
    "rad": (ANGLE, 1.0),
    "deg": (ANGLE, math.pi / 180),
}

_UNITS_FOLDED = {name.lower(): spec for name, spec in UNITS.items()}

_QUANTITY = re.compile(
    r"^\s*(?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?inf|nan)"
    r"\s*(?P<unit>[A-Za-z]*)\s*$"
)


def lookup_unit(suffix: str) -> Tuple[str, float]:
    """Dimension and scale of a unit suffix."""
    if suffix in UNITS:
        return UNITS[suffix]
    folded = _UNITS_FOLDED.get(suffix.lower())
    if folded is None:
        raise ConfigError(f"unknown unit {suffix!r}")
    return folded


def parse_quantity(text: str, dimension: Optional[str], key: Optional[str] = None) -> float:
    """Parse a number with an optional unit suffix into SI base units.

    Args:
        text: Value text, e.g. "12.5 GHz"
        dimension: Expected dimension, or None for a dimensionless value
        key: Config key, for error messages

    Returns:
        Value in SI base units (dB and rad for loss and angle)

    Raises:
        ConfigError: On malformed numbers, unknown units or dimension mismatches
    """
    match = _QUANTITY.match(text)
    if match is None:
        raise ConfigError(f"cannot parse {text!r} as a quantity", key)

    value = float(match.group("number"))
    suffix = match.group("unit")
    if not suffix:
        return value

    try:
        unit_dimension, scale = lookup_unit(suffix)
    except ConfigError as e:
        raise ConfigError(f"{e} in {text!r}", key) from None

    if unit_dimension != dimension:
        expected = BASE_UNITS.get(dimension, "1")
        raise ConfigError(
            f"unit {suffix!r} is a {unit_dimension}, expected {dimension or 'dimensionless'} "
            f"({expected})",
            key,
        )
    return value * scale


def format_quantity(value: float) -> str:
    """Canonical text for an SI value; parses back to the identical float."""
    return repr(float(value))
