"""Transport-property closures and the laser energy deposition profile.

The plain functions work in fixed units (SI unless stated).  The ``*Model``
classes wrap them as callables ``model(rho, T, mat)`` in solver units, which is
what :class:`~diffmix.materials.MaterialParams` expects; they carry the unit
system needed for the conversion.
"""

import warnings
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from scipy import constants as sc

from .errors import ConfigError
from .units import SI, UnitSystem

# Gaussian (CGS) constants for the plasma formulae
K_B_CGS = sc.k * 1e7                       # erg/K
E_CGS = sc.e * sc.c * 10.0                 # statC
M_E_CGS = sc.m_e * 1e3                     # g
HBAR_CGS = sc.hbar * 1e7                   # erg s
AMU_CGS = sc.atomic_mass * 1e3             # g
KELVIN_PER_EV = sc.e / sc.k

SPITZER_PREFACTOR = 9.44 * (2.0 / np.pi) ** 1.5
BRAGINSKII_PREFACTOR = 3.30e-5             # g/(cm s) with T in eV


@dataclass(frozen=True)
class PlasmaSpecies:
    """Average ion of a fully ionized plasma.

    ``ln_lambda`` pins the Coulomb logarithm to a constant when given.
    """

    A: float
    Z: float
    ln_lambda: Optional[float] = None

    def __post_init__(self):
        if not (self.A > 0 and self.Z > 0):
            raise ConfigError("plasma species needs A > 0 and Z > 0")


CH = PlasmaSpecies(A=6.5, Z=3.5)


@dataclass(frozen=True)
class LaserSpec:
    """Constant-intensity deposition band behind the critical-density point."""

    intensity: float
    depth: float
    rho_crit: float

    def __post_init__(self):
        if not (self.intensity > 0 and self.depth > 0 and self.rho_crit > 0):
            raise ConfigError("laser intensity, depth and critical density must be positive")


# ---------------------------------------------------------------- viscosity

def sutherland_viscosity(T, mu0=1.716e-5, T0=273.0, W=130.0):
    """``mu = mu0 (T0 + W) / (T + W) (T / T0)^(3/2)``."""
    T = np.asarray(T, dtype=float)
    return mu0 * (T0 + W) / (T + W) * (T / T0) ** 1.5


def coulomb_logarithm(T_e, rho, species: PlasmaSpecies):
    """Electron-ion Coulomb logarithm, ``max(1, ln(l_D / l_min))``.

    ``T_e`` in K and ``rho`` in kg/m^3.  The short cut-off is the Landau
    length ``Z e^2 / (3 k T)`` when it exceeds the de Broglie wavelength
    ``hbar / sqrt(3 m_e k T)``, and the de Broglie wavelength otherwise; the
    Debye length is ``sqrt(k T / (4 pi N_e e^2))``.  Gaussian units inside.
    """
    T_e = np.asarray(T_e, dtype=float)
    if species.ln_lambda is not None:
        return np.full(np.broadcast(T_e, rho).shape, float(species.ln_lambda))
    rho_cgs = np.asarray(rho, dtype=float) * 1e-3
    n_i = rho_cgs / (species.A * AMU_CGS)
    n_e = species.Z * n_i
    kT = K_B_CGS * T_e
    l_D = np.sqrt(kT / (4.0 * np.pi * n_e * E_CGS ** 2))
    l_LD = species.Z * E_CGS ** 2 / (3.0 * kT)
    l_dB = HBAR_CGS / np.sqrt(3.0 * M_E_CGS * kT)
    l_min = np.where(l_LD >= l_dB, l_LD, l_dB)
    return np.maximum(1.0, np.log(l_D / l_min))


def braginskii_viscosity(T_e, species: PlasmaSpecies, rho=None, ln_lambda=None):
    """Ion viscosity ``3.30e-5 sqrt(A) T^(5/2) / (ln Lambda Z^4)`` in Pa s.

    The prefactor is for ``T`` in eV and ``mu`` in g/(cm s); ``T_e`` here is
    in K.  Supply either ``rho`` [kg/m^3] (Coulomb logarithm evaluated) or
    ``ln_lambda`` directly.
    """
    T_e = np.asarray(T_e, dtype=float)
    if ln_lambda is None:
        if rho is None:
            raise ValueError("braginskii_viscosity needs rho or ln_lambda")
        ln_lambda = coulomb_logarithm(T_e, rho, species)
    T_ev = T_e / KELVIN_PER_EV
    mu_cgs = BRAGINSKII_PREFACTOR * np.sqrt(species.A) * T_ev ** 2.5 / (ln_lambda * species.Z ** 4)
    return 0.1 * mu_cgs


# ---------------------------------------------------------------- conductivity

def spitzer_harm_conductivity(T_e, rho, species: PlasmaSpecies, ln_lambda=None):
    """Spitzer-Harm electron conductivity in W/(m K); ``T_e`` in K, ``rho`` in kg/m^3.

    ``9.44 (2/pi)^(3/2) (k T)^(5/2) k N_e / (sqrt(m_e) e^4 N_i Z (Z + 4) ln Lambda)``
    evaluated in Gaussian units (erg/(s cm K)) and converted.
    """
    T_e = np.asarray(T_e, dtype=float)
    if ln_lambda is None:
        ln_lambda = coulomb_logarithm(T_e, rho, species)
    Z = species.Z
    kT = K_B_CGS * T_e
    # N_e / N_i = Z, so density enters only through the Coulomb logarithm
    lam_cgs = (SPITZER_PREFACTOR * kT ** 2.5 * K_B_CGS * Z
               / (np.sqrt(M_E_CGS) * E_CGS ** 4 * Z * (Z + 4.0) * ln_lambda))
    return lam_cgs * 1e-5


def helium_conductivity_fit(T):
    """Cubic fit for helium(-air) conductivity in W/(m K), ``T`` in K (100-1000 K)."""
    T = np.asarray(T, dtype=float)
    return ((1.29e-11 * T - 7.45e-8) * T + 3.896e-4) * T + 3.722e-2


def prandtl_conductivity(mu, cp, Pr=0.7):
    """``lambda = mu cp / Pr``."""
    return np.asarray(mu, dtype=float) * cp / Pr


# ---------------------------------------------------------------- model wrappers

@dataclass(frozen=True)
class ConstantModel:
    value: float
    kind: str = "constant"

    def __call__(self, rho, T, mat=None):
        return np.full(np.broadcast(rho, T).shape, float(self.value))

    def as_dict(self):
        return {"model": "constant", "value": self.value}


@dataclass(frozen=True)
class SutherlandModel:
    """Sutherland viscosity with constants given in solver units."""

    mu0: float = 1.716e-5
    T0: float = 273.0
    W: float = 130.0

    def __call__(self, rho, T, mat=None):
        return sutherland_viscosity(T, self.mu0, self.T0, self.W)

    def as_dict(self):
        return {"model": "sutherland", "mu0": self.mu0, "T0": self.T0, "W": self.W}


@dataclass(frozen=True)
class BraginskiiModel:
    species: PlasmaSpecies = CH
    units: UnitSystem = SI

    def __call__(self, rho, T, mat=None):
        u = self.units
        mu = braginskii_viscosity(u.to_si(T, "temperature"), self.species, rho=u.to_si(rho, "density"))
        return u.from_si(mu, "viscosity")

    def as_dict(self):
        return {"model": "braginskii", "A": self.species.A, "Z": self.species.Z,
                "ln_lambda": self.species.ln_lambda}


@dataclass(frozen=True)
class SpitzerHarmModel:
    species: PlasmaSpecies = CH
    units: UnitSystem = SI

    def __call__(self, rho, T, mat=None):
        u = self.units
        lam = spitzer_harm_conductivity(u.to_si(T, "temperature"), u.to_si(rho, "density"), self.species)
        return u.from_si(lam, "conductivity")

    def as_dict(self):
        return {"model": "spitzer-harm", "A": self.species.A, "Z": self.species.Z,
                "ln_lambda": self.species.ln_lambda}


@dataclass(frozen=True)
class HeliumFitModel:
    units: UnitSystem = SI

    def __call__(self, rho, T, mat=None):
        u = self.units
        return u.from_si(helium_conductivity_fit(u.to_si(T, "temperature")), "conductivity")

    def as_dict(self):
        return {"model": "helium-fit"}


@dataclass(frozen=True)
class PrandtlModel:
    """Conductivity slaved to a viscosity model: ``mu(rho, T) gamma cv / Pr``."""

    viscosity: Any = field(default_factory=SutherlandModel)
    Pr: float = 0.7

    def __call__(self, rho, T, mat):
        return prandtl_conductivity(self.viscosity(rho, T, mat), mat.cp, self.Pr)

    def as_dict(self):
        return {"model": "prandtl", "Pr": self.Pr, "viscosity": self.viscosity.as_dict()}


def model_from_dict(spec, units: UnitSystem = SI):
    """Inverse of the ``as_dict`` methods; ``None`` or a bare number are accepted."""
    if spec is None:
        return None
    if isinstance(spec, (int, float)):
        return ConstantModel(float(spec))
    spec = dict(spec)
    kind = spec.pop("model", "constant")
    if kind == "constant":
        return ConstantModel(float(spec["value"]))
    if kind == "sutherland":
        return SutherlandModel(**{k: float(v) for k, v in spec.items()})
    if kind in ("braginskii", "spitzer-harm"):
        species = PlasmaSpecies(A=float(spec.get("A", CH.A)), Z=float(spec.get("Z", CH.Z)),
                                ln_lambda=spec.get("ln_lambda"))
        cls = BraginskiiModel if kind == "braginskii" else SpitzerHarmModel
        return cls(species, units)
    if kind == "helium-fit":
        return HeliumFitModel(units)
    if kind == "prandtl":
        return PrandtlModel(model_from_dict(spec.get("viscosity"), units), float(spec.get("Pr", 0.7)))
    raise ConfigError(f"unknown transport model {kind!r}")


# ---------------------------------------------------------------- laser

def critical_position(rho, x_centers, rho_crit):
    """Rightmost point where the density falls through ``rho_crit``, or ``None``.

    Scans for the last pair of neighbours with ``rho_i >= rho_crit > rho_{i+1}``
    and interpolates linearly between their centres.
    """
    rho = np.asarray(rho, dtype=float)
    hit = np.flatnonzero((rho[:-1] >= rho_crit) & (rho[1:] < rho_crit))
    if hit.size == 0:
        return None
    i = hit[-1]
    s = (rho[i] - rho_crit) / (rho[i] - rho[i + 1])
    return x_centers[i] + s * (x_centers[i + 1] - x_centers[i])


def laser_deposition_profile(rho, x_faces, laser: LaserSpec):
    """Volumetric heating ``I(x)`` for a 1D density profile.

    The band ``[x_c, x_c + d]`` behind the critical point receives
    ``I_laser / d`` weighted by each cell's overlap fraction, so that
    ``sum I_i dx_i = I_laser``.  If the band sticks out of the domain the
    remaining cells are rescaled to keep that total.  Without any crossing
    the rightmost ``d`` of the domain is heated and a warning is issued.
    """
    x_faces = np.asarray(x_faces, dtype=float)
    xc = 0.5 * (x_faces[:-1] + x_faces[1:])
    x0 = critical_position(rho, xc, laser.rho_crit)
    if x0 is None:
        warnings.warn("no critical-density crossing found; depositing in the rightmost band",
                      RuntimeWarning, stacklevel=2)
        x0 = x_faces[-1] - laser.depth
    lo = np.maximum(x_faces[:-1], x0)
    hi = np.minimum(x_faces[1:], x0 + laser.depth)
    overlap = np.clip(hi - lo, 0.0, None)
    dx = np.diff(x_faces)
    total = overlap.sum()
    if total <= 0.0:
        return np.zeros_like(dx)
    # overlap/total is the band share of each cell; dividing by dx gives density
    return laser.intensity * overlap / (total * dx)
