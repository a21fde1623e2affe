"""Unit systems declared by scale factors relative to SI.

The solver core never looks at units.  A case that runs in, e.g.,
``(cm, us, g, MK)`` declares those base scales here, and every dimensional
input is converted once when the case is built.
"""

from dataclasses import dataclass

from .errors import ConfigError

# quantity -> exponents of (length, time, mass, temperature)
DIMENSIONS = {
    "length": (1, 0, 0, 0),
    "time": (0, 1, 0, 0),
    "mass": (0, 0, 1, 0),
    "temperature": (0, 0, 0, 1),
    "velocity": (1, -1, 0, 0),
    "density": (-3, 0, 1, 0),
    "pressure": (-1, -2, 1, 0),
    "energy_density": (-1, -2, 1, 0),
    "specific_energy": (2, -2, 0, 0),
    "specific_heat": (2, -2, 0, -1),
    "viscosity": (-1, -1, 1, 0),
    "conductivity": (1, -3, 1, -1),
    "intensity": (0, -3, 1, 0),
    "power_density": (-1, -3, 1, 0),
}


@dataclass(frozen=True)
class UnitSystem:
    """Base units expressed in SI: one solver length unit is ``length`` metres, etc."""

    length: float = 1.0
    time: float = 1.0
    mass: float = 1.0
    temperature: float = 1.0
    name: str = "SI"

    def __post_init__(self):
        for f in ("length", "time", "mass", "temperature"):
            if not getattr(self, f) > 0:
                raise ConfigError(f"unit scale {f!r} must be positive")

    def scale(self, quantity):
        """SI value of one solver unit of ``quantity``."""
        try:
            el, et, em, eT = DIMENSIONS[quantity]
        except KeyError:
            raise ConfigError(f"unknown quantity {quantity!r}") from None
        return self.length ** el * self.time ** et * self.mass ** em * self.temperature ** eT

    def from_si(self, value, quantity):
        return value / self.scale(quantity)

    def to_si(self, value, quantity):
        return value * self.scale(quantity)

    def as_dict(self):
        return {"length": self.length, "time": self.time, "mass": self.mass,
                "temperature": self.temperature, "name": self.name}


SI = UnitSystem()
# centimetre, microsecond, gram, megakelvin
CGS_US_MK = UnitSystem(length=1e-2, time=1e-6, mass=1e-3, temperature=1e6, name="cm-us-g-MK")

NAMED = {"SI": SI, "si": SI, "cm-us-g-MK": CGS_US_MK}


def unit_system(spec):
    """Build a :class:`UnitSystem` from a name, a mapping, or an existing instance."""
    if isinstance(spec, UnitSystem):
        return spec
    if spec is None:
        return SI
    if isinstance(spec, str):
        if spec not in NAMED:
            raise ConfigError(f"unknown unit system {spec!r}; known: {sorted(NAMED)}")
        return NAMED[spec]
    return UnitSystem(**dict(spec))
