"""Reduced-unit system.

All core math runs in natural units hbar = k_B = 1.  A unit system is fixed
by a base time t0 [s] and base length x0 [m]; every other scale follows:

    energy   E0 = hbar / t0          (temperatures are stored as energies)
    mass     m0 = hbar t0 / x0^2
    friction eta0 = m0 / t0 = hbar / x0^2
    force-noise intensity S0 = (E0/x0)^2 t0 = hbar^2 / (t0 x0^2)

SI quantities are converted exactly once, at the trap/CLI boundary.  Field
noise amplitudes <E^2> are noise intensities (V^2 m^-2 s), so that
q^2 <E^2> delta(t) and (q^2 <E^2>/tau) exp(-t/tau) are force correlators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

HBAR = 1.054571817e-34      # J s
K_B = 1.380649e-23          # J/K
ELEMENTARY_CHARGE = 1.602176634e-19  # C
ATOMIC_MASS = 1.66053906892e-27      # kg


@dataclass(frozen=True)
class UnitSystem:
    """Base scales of the reduced system; converts SI <-> reduced."""

    time_s: float
    length_m: float
    scales: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.time_s <= 0 or self.length_m <= 0:
            raise ValueError("base scales must be positive")
        t0, x0 = self.time_s, self.length_m
        energy = HBAR / t0
        mass = HBAR * t0 / x0**2
        object.__setattr__(self, "scales", {
            "time": t0,
            "length": x0,
            "energy": energy,
            "temperature": energy,          # k_B absorbed
            "mass": mass,
            "angular_frequency": 1.0 / t0,  # rad/s
            "rate": 1.0 / t0,
            "friction": mass / t0,          # kg/s
            "momentum": mass * x0 / t0,
            "force_noise": HBAR**2 / (t0 * x0**2),  # N^2 s
        })

    def to_reduced(self, value_si: float, kind: str) -> float:
        return value_si / self.scales[kind]

    def from_reduced(self, value_reduced: float, kind: str) -> float:
        return value_reduced * self.scales[kind]


# SI multipliers per quantity kind.  Cyclic frequency units carry the 2*pi:
# a config value "1 MHz" means omega = 2*pi*1e6 rad/s.
_UNIT_TABLE: dict[str, dict[str, float]] = {
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9},
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9, "pm": 1e-12},
    "mass": {"kg": 1.0, "amu": ATOMIC_MASS},
    "angular_frequency": {
        "rad_s": 1.0, "krad_s": 1e3, "Mrad_s": 1e6, "Grad_s": 1e9,
        "Hz": 2.0 * math.pi, "kHz": 2e3 * math.pi, "MHz": 2e6 * math.pi,
        "GHz": 2e9 * math.pi,
    },
    "temperature": {"K": K_B, "J": 1.0, "eV": ELEMENTARY_CHARGE,
                    "meV": 1e-3 * ELEMENTARY_CHARGE},
    "energy": {"J": 1.0, "eV": ELEMENTARY_CHARGE, "K": K_B},
    "friction": {"kg_s": 1.0},
    "charge": {"C": 1.0, "e": ELEMENTARY_CHARGE},
    "field_intensity": {"V2m-2s": 1.0},   # <E^2> as noise intensity
    "force_noise": {"N2s": 1.0},
    "rate": {"per_s": 1.0, "per_ms": 1e3, "per_us": 1e6},
}


def si_value(value: float, unit: str, kind: str) -> float:
    """Convert a tagged quantity to plain SI ("reduced" is handled upstream)."""
    table = _UNIT_TABLE.get(kind)
    if table is None:
        raise KeyError(f"unknown quantity kind {kind!r}")
    if unit not in table:
        raise KeyError(f"unknown unit {unit!r} for kind {kind!r}")
    return value * table[unit]


def known_units(kind: str) -> tuple[str, ...]:
    return tuple(_UNIT_TABLE[kind]) + ("reduced",)
