"""Temperature-dependent two-phase FGM properties.

Ceramic sits on the top face (z = +h/2), metal on the bottom face
(z = -h/2).  The ceramic volume fraction follows a power law and the
effective moduli come from the Mori-Tanaka estimate.  All quantities are SI,
temperatures in Kelvin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

# Reference state for reported (nondimensional) quantities and stress-free
# temperature default.
T_REF = 300.0


class MaterialError(ValueError):
    """Invalid material input or a non-physical evaluation result."""


@dataclass(frozen=True)
class TemperatureCoefficients:
    """Coefficient set of the cubic temperature law ``P0 (Pm1/T + 1 + P1 T + P2 T^2 + P3 T^3)``."""

    P0: float
    Pm1: float = 0.0
    P1: float = 0.0
    P2: float = 0.0
    P3: float = 0.0

    def __call__(self, T):
        return evaluate_property(self, T)

    @classmethod
    def constant(cls, value: float) -> "TemperatureCoefficients":
        return cls(P0=value)

    @property
    def is_constant(self) -> bool:
        return self.Pm1 == 0.0 and self.P1 == 0.0 and self.P2 == 0.0 and self.P3 == 0.0


@dataclass(frozen=True)
class PhaseMaterial:
    """One constituent phase.

    Attributes
    ----------
    name : str
    E_coeffs : TemperatureCoefficients
        Young's modulus law (Pa).
    alpha_coeffs : TemperatureCoefficients
        Thermal expansion law (1/K).
    rho : float
        Mass density (kg/m^3), temperature independent.
    kappa : float
        Thermal conductivity (W/mK), temperature independent.
    nu : float
        Poisson ratio, temperature independent.
    """

    name: str
    E_coeffs: TemperatureCoefficients
    alpha_coeffs: TemperatureCoefficients
    rho: float
    kappa: float
    nu: float

    def __post_init__(self):
        if not self.rho > 0:
            raise MaterialError(f"{self.name}: density must be positive, got {self.rho}")
        if not self.kappa > 0:
            raise MaterialError(f"{self.name}: conductivity must be positive, got {self.kappa}")
        if not 0.0 < self.nu < 0.5:
            raise MaterialError(f"{self.name}: Poisson ratio must lie in (0, 0.5), got {self.nu}")
        if not self.E_coeffs.P0 > 0:
            raise MaterialError(f"{self.name}: modulus base value must be positive")
        if not self.alpha_coeffs.P0 > 0:
            raise MaterialError(f"{self.name}: expansion base value must be positive")

    def E(self, T):
        return evaluate_property(self.E_coeffs, T)

    def alpha(self, T):
        return evaluate_property(self.alpha_coeffs, T)

    def bulk_shear(self, T):
        """Bulk and shear moduli at temperature ``T``."""
        E = self.E(T)
        return E / (3.0 * (1.0 - 2.0 * self.nu)), E / (2.0 * (1.0 + self.nu))


@dataclass(frozen=True)
class FgmSpec:
    """Two-phase graded material.

    ``poisson`` is either a float (constant Poisson ratio used everywhere) or
    the string ``"mori-tanaka"`` to take nu from the homogenised K and G.
    """

    ceramic: PhaseMaterial
    metal: PhaseMaterial
    n: float
    poisson: object = 0.28

    def __post_init__(self):
        if not (self.n >= 0 and math.isfinite(self.n)):
            raise MaterialError(f"gradient index must be >= 0, got {self.n}")
        if isinstance(self.poisson, str):
            if self.poisson != "mori-tanaka":
                raise MaterialError(f"unknown poisson mode {self.poisson!r}")
        elif not 0.0 < float(self.poisson) < 0.5:
            raise MaterialError(f"constant Poisson ratio must lie in (0, 0.5), got {self.poisson}")

    @property
    def constant_nu(self) -> Optional[float]:
        return None if isinstance(self.poisson, str) else float(self.poisson)

    def with_index(self, n: float) -> "FgmSpec":
        return FgmSpec(self.ceramic, self.metal, n, self.poisson)


@dataclass(frozen=True)
class ThermalState:
    """Surface temperatures and the stress-free reference temperature (K)."""

    Tc: float = T_REF
    Tm: float = T_REF
    T0: float = T_REF

    def __post_init__(self):
        for name in ("Tc", "Tm", "T0"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise MaterialError(f"{name} must be a positive temperature, got {value}")

    @property
    def is_stress_free(self) -> bool:
        return self.Tc == self.T0 and self.Tm == self.T0


@dataclass(frozen=True)
class PointProperties:
    """Effective properties at one thickness coordinate."""

    E: float
    nu: float
    alpha: float
    kappa: float
    rho: float
    T: float
    Vc: float = field(default=float("nan"))


def evaluate_property(coeffs: TemperatureCoefficients, T):
    """Evaluate the cubic temperature law; ``T`` may be scalar or array."""
    T_arr = np.asarray(T, dtype=float)
    if np.any(~(T_arr > 0)):
        raise MaterialError(f"temperature must be positive, got {T}")
    with np.errstate(over="ignore", invalid="ignore"):
        value = coeffs.P0 * (
            coeffs.Pm1 / T_arr + 1.0 + coeffs.P1 * T_arr + coeffs.P2 * T_arr**2 + coeffs.P3 * T_arr**3
        )
    if not np.all(np.isfinite(value)):
        raise MaterialError("non-finite property value")
    return float(value) if np.ndim(value) == 0 else value


def volume_fraction(z, h: float, n: float):
    """Ceramic volume fraction ``((2z + h) / (2h))**n``."""
    if n < 0:
        raise MaterialError(f"gradient index must be >= 0, got {n}")
    z_arr = np.asarray(z, dtype=float)
    tol = 1e-12 * h
    if np.any(z_arr < -h / 2 - tol) or np.any(z_arr > h / 2 + tol):
        raise MaterialError("thickness coordinate outside [-h/2, h/2]")
    s = np.clip((2.0 * z_arr + h) / (2.0 * h), 0.0, 1.0)
    # 0**0 is taken as 1: n = 0 is a pure ceramic plate.
    Vc = np.ones_like(s) if n == 0 else s**n
    return float(Vc) if np.ndim(Vc) == 0 else Vc


def mori_tanaka_moduli(Kc, Gc, Km, Gm, Vc):
    """Mori-Tanaka effective bulk and shear moduli."""
    f1 = Gm * (9.0 * Km + 8.0 * Gm) / (6.0 * (Km + 2.0 * Gm))
    Vm = 1.0 - Vc
    K = Km + (Kc - Km) * Vc / (1.0 + Vm * 3.0 * (Kc - Km) / (3.0 * Km + 4.0 * Gm))
    G = Gm + (Gc - Gm) * Vc / (1.0 + Vm * (Gc - Gm) / (Gm + f1))
    return K, G


def elastic_constants(K, G):
    """Young's modulus and Poisson ratio from bulk and shear moduli."""
    E = 9.0 * K * G / (3.0 * K + G)
    nu = (3.0 * K - 2.0 * G) / (2.0 * (3.0 * K + G))
    return E, nu


def effective_conductivity(kc, km, Vc):
    return km + (kc - km) * Vc / (1.0 + (1.0 - Vc) * (kc - km) / (3.0 * km))


def effective_cte(alpha_c, alpha_m, K, Kc, Km):
    """Expansion coefficient from the effective bulk modulus.

    Raises MaterialError when the phases share a bulk modulus but differ in
    expansion; identical phases return ``alpha_m``.
    """
    denom = 1.0 / Kc - 1.0 / Km
    if np.any(denom == 0):
        if np.all(np.asarray(alpha_c) == np.asarray(alpha_m)):
            return alpha_m + 0.0 * np.asarray(K)
        raise MaterialError("phases have identical bulk modulus; expansion estimate is undefined")
    return alpha_m + (alpha_c - alpha_m) * (1.0 / K - 1.0 / Km) / denom


def effective_density(rho_c, rho_m, Vc):
    return rho_c * Vc + rho_m * (1.0 - Vc)


def _profile_series(s, n, ratio):
    """Truncated conduction series; ``ratio`` is (kc - km) / km."""
    total = s + 0.0
    sign = -1.0
    for j in range(1, 6):
        total = total + sign * ratio**j / (j * n + 1.0) * s ** (j * n + 1.0)
        sign = -sign
    return total


def temperature_profile(z, h, n, kc, km, Tc, Tm):
    """Steady one-dimensional conduction temperature through the thickness.

    Closed-form polynomial series for a rule-of-mixtures conductivity
    ``km + (kc - km) Vc(z)``, truncated after the fifth power of the
    conductivity contrast.
    """
    if not (kc > 0 and km > 0):
        raise MaterialError("conductivities must be positive")
    if n < 0:
        raise MaterialError(f"gradient index must be >= 0, got {n}")
    z_arr = np.asarray(z, dtype=float)
    tol = 1e-12 * h
    if np.any(z_arr < -h / 2 - tol) or np.any(z_arr > h / 2 + tol):
        raise MaterialError("thickness coordinate outside [-h/2, h/2]")
    ratio = (kc - km) / km
    C = _profile_series(1.0, n, ratio)
    if not (math.isfinite(C) and C > 0):
        raise MaterialError(f"conduction series diverged (C = {C})")
    s = np.clip((2.0 * z_arr + h) / (2.0 * h), 0.0, 1.0)
    eta = _profile_series(s, n, ratio) / C
    # Pin the faces exactly.
    eta = np.where(s == 1.0, 1.0, eta)
    T = Tm + (Tc - Tm) * eta
    return float(T) if np.ndim(T) == 0 else T


def point_properties_array(fgm: FgmSpec, thermal: ThermalState, z, h):
    """Vectorised :func:`point_properties`; returns a dict of arrays."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    c, m = fgm.ceramic, fgm.metal
    T = temperature_profile(z, h, fgm.n, c.kappa, m.kappa, thermal.Tc, thermal.Tm)
    T = np.atleast_1d(T)
    Vc = np.atleast_1d(volume_fraction(z, h, fgm.n))

    for phase in (c, m):
        if np.any(phase.E(T) <= 0):
            raise MaterialError(
                f"{phase.name} modulus is non-positive between {T.min():g} K and {T.max():g} K; "
                "the temperature lies outside the coefficient fit"
            )

    Kc, Gc = c.bulk_shear(T)
    Km, Gm = m.bulk_shear(T)
    K, G = mori_tanaka_moduli(Kc, Gc, Km, Gm, Vc)
    E, nu = elastic_constants(K, G)
    if fgm.constant_nu is not None:
        nu = np.full_like(E, fgm.constant_nu)
    alpha = effective_cte(c.alpha(T), m.alpha(T), K, Kc, Km)
    return {
        "E": E,
        "nu": nu,
        "alpha": np.broadcast_to(alpha, E.shape).astype(float),
        "kappa": effective_conductivity(c.kappa, m.kappa, Vc),
        "rho": effective_density(c.rho, m.rho, Vc),
        "T": T,
        "Vc": Vc,
    }


def point_properties(fgm: FgmSpec, thermal: ThermalState, z: float, h: float) -> PointProperties:
    """Effective properties at thickness coordinate ``z``."""
    props = point_properties_array(fgm, thermal, [z], h)
    return PointProperties(**{k: float(v[0]) for k, v in props.items()})


# Temperature-dependent coefficients of silicon nitride and SUS304 stainless
# steel (exponents are powers of ten).
SI3N4 = PhaseMaterial(
    name="Si3N4",
    E_coeffs=TemperatureCoefficients(348.43e9, 0.0, -3.070e-4, 2.160e-7, -8.946e-11),
    alpha_coeffs=TemperatureCoefficients(5.8723e-6, 0.0, 9.095e-4, 0.0, 0.0),
    rho=2370.0,
    kappa=9.19,
    nu=0.28,
)

SUS304 = PhaseMaterial(
    name="SUS304",
    E_coeffs=TemperatureCoefficients(201.04e9, 0.0, 3.079e-4, -6.534e-7, 0.0),
    alpha_coeffs=TemperatureCoefficients(12.330e-6, 0.0, 8.086e-4, 0.0, 0.0),
    rho=8166.0,
    kappa=12.04,
    nu=0.28,
)


def isotropic(name: str, E: float, nu: float, rho: float, alpha: float = 1.0e-5, kappa: float = 1.0) -> PhaseMaterial:
    """Temperature-independent phase, handy for homogeneous validation runs."""
    return PhaseMaterial(
        name=name,
        E_coeffs=TemperatureCoefficients.constant(E),
        alpha_coeffs=TemperatureCoefficients.constant(alpha),
        rho=rho,
        kappa=kappa,
        nu=nu,
    )
