"""
Linear Paul trap description.

Conversions between electrode field gradients and secular frequencies,
the Mathieu q parameter, the time-dependent quadrupole potential, static
equilibria under offset fields and the Lamb-Dicke factor of a two-photon
kick.  Everything is SI with angular frequencies in rad/s.

The trap potential near the centre is

    Phi(r, t) = A cos(Omega t) (x^2 - y^2)
                - B ((1 + eps)(x - x_dc)^2 + (1 - eps)(y - y_dc)^2 - 2 z^2)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .errors import Unstable

__all__ = [
    "IonSpecies",
    "SR88_PLUS",
    "TrapConfig",
    "SecularFrequencies",
    "OffsetField",
    "EquilibriumPosition",
    "secular_from_gradients",
    "gradients_from_secular",
    "mathieu_q",
    "micromotion_factor",
    "equilibrium_from_offset",
    "offset_from_dc_null",
    "mean_square_field",
    "electric_potential",
    "electric_field",
    "pseudopotential_energy",
    "effective_lamb_dicke",
]


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float
    charge: float = constants.e

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"ion mass must be positive, got {self.mass}")
        if not self.charge > 0:
            raise ValueError(f"ion charge must be positive, got {self.charge}")


# Neutral 88Sr atomic mass minus one electron.
SR88_PLUS = IonSpecies("88Sr+", 87.9056121 * constants.atomic_mass - constants.m_e)


@dataclass(frozen=True)
class SecularFrequencies:
    """Pseudopotential secular frequencies in rad/s."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for axis in "xyz":
            value = getattr(self, axis)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"secular frequency omega_{axis} must be positive, got {value}")

    @classmethod
    def from_hz(cls, fx, fy, fz):
        return cls(2 * np.pi * fx, 2 * np.pi * fy, 2 * np.pi * fz)

    def as_hz(self):
        return np.array([self.x, self.y, self.z]) / (2 * np.pi)

    def as_array(self):
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class TrapConfig:
    """
    Canonical trap parameters.

    Attributes
    ----------
    drive_freq : float
        rf drive angular frequency Omega (rad/s).
    grad_rf : float
        Oscillating quadrupole gradient A (V/m^2).
    grad_dc : float
        Static quadrupole gradient B (V/m^2).
    asymmetry : float
        Radial asymmetry eps of the static quadrupole.
    species : IonSpecies
    """

    drive_freq: float
    grad_rf: float
    grad_dc: float
    asymmetry: float = 0.0
    species: IonSpecies = field(default=SR88_PLUS)

    def __post_init__(self):
        if not self.drive_freq > 0:
            raise ValueError(f"drive frequency must be positive, got {self.drive_freq}")
        for name in ("grad_rf", "grad_dc", "asymmetry"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def mass(self):
        return self.species.mass

    @property
    def charge(self):
        return self.species.charge

    @classmethod
    def from_secular(cls, freqs, drive_freq, species=SR88_PLUS):
        return gradients_from_secular(freqs, drive_freq, species)


@dataclass(frozen=True)
class OffsetField:
    """Static offset field (V/m) in the radial plane."""

    x: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("offset field components must be finite")


@dataclass(frozen=True)
class EquilibriumPosition:
    """Radial equilibrium (m) relative to the rf null; z_eq is always 0."""

    x: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("equilibrium coordinates must be finite")


def _squared_frequencies(cfg):
    e, m = cfg.charge, cfg.mass
    A, B, eps, W = cfg.grad_rf, cfg.grad_dc, cfg.asymmetry, cfg.drive_freq
    radial = 2 * e**2 * A**2 / (m**2 * W**2)
    wx2 = radial - 2 * e * B * (1 + eps) / m
    wy2 = radial - 2 * e * B * (1 - eps) / m
    wz2 = 4 * e * B / m
    return wx2, wy2, wz2


def secular_from_gradients(cfg: TrapConfig) -> SecularFrequencies:
    """
    Pseudopotential secular frequencies of a trap.

    Raises
    ------
    Unstable
        If any squared frequency is not positive.
    """
    squares = _squared_frequencies(cfg)
    for axis, w2 in zip("xyz", squares):
        if not w2 > 0:
            raise Unstable(axis, w2)
    return SecularFrequencies(*np.sqrt(squares))


def gradients_from_secular(freqs: SecularFrequencies, drive_freq: float,
                           species: IonSpecies = SR88_PLUS) -> TrapConfig:
    """Invert :func:`secular_from_gradients` for A, B and eps."""
    m, e = species.mass, species.charge
    wx2, wy2, wz2 = freqs.x**2, freqs.y**2, freqs.z**2
    A = m * drive_freq / (2 * e) * np.sqrt(wx2 + wy2 + wz2)
    B = m * wz2 / (4 * e)
    eps = (wy2 - wx2) / wz2
    return TrapConfig(drive_freq, A, B, eps, species)


def mathieu_q(cfg: TrapConfig) -> float:
    """q_x = 4 e A / (M Omega^2); q_y = -q_x."""
    return 4 * cfg.charge * cfg.grad_rf / (cfg.mass * cfg.drive_freq**2)


def micromotion_factor(q: float) -> float:
    """Period-averaged enhancement 1 + 3 q^2 / 16 of <E^2> from intrinsic micromotion."""
    return 1 + 3 * q**2 / 16


def equilibrium_from_offset(cfg: TrapConfig, offset: OffsetField) -> EquilibriumPosition:
    """Pseudopotential equilibrium e E_i / (M omega_i^2) under a static offset field."""
    w = secular_from_gradients(cfg)
    e, m = cfg.charge, cfg.mass
    return EquilibriumPosition(e * offset.x / (m * w.x**2), e * offset.y / (m * w.y**2))


def offset_from_dc_null(cfg: TrapConfig, x_dc: float, y_dc: float) -> OffsetField:
    """Offset field that moves the static quadrupole null to (x_dc, y_dc)."""
    B, eps = cfg.grad_dc, cfg.asymmetry
    return OffsetField(-2 * B * (1 + eps) * x_dc, -2 * B * (1 - eps) * y_dc)


def mean_square_field(cfg: TrapConfig, at: EquilibriumPosition, micromotion_correction=True) -> float:
    """
    Drive-period average of E^2 at a static position, rf quadrupole only.

    The static quadrupole contribution is neglected (A^2 >> B^2).
    """
    q = mathieu_q(cfg)
    c = micromotion_factor(q) if micromotion_correction else 1.0
    # q_y = -q_x, so both axes share the same factor
    return 2 * cfg.grad_rf**2 * (at.x**2 + at.y**2) * c


def electric_potential(cfg: TrapConfig, r, t, dc_null=(0.0, 0.0)):
    """Quadrupole potential Phi(r, t) in volts; ``r`` has trailing dimension 3."""
    r = np.asarray(r, dtype=float)
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    xd, yd = dc_null
    A, B, eps = cfg.grad_rf, cfg.grad_dc, cfg.asymmetry
    return (A * np.cos(cfg.drive_freq * t) * (x**2 - y**2)
            - B * ((1 + eps) * (x - xd)**2 + (1 - eps) * (y - yd)**2 - 2 * z**2))


def electric_field(cfg: TrapConfig, r, t, dc_null=(0.0, 0.0)):
    """E = -grad Phi, returned with trailing dimension 3."""
    r = np.asarray(r, dtype=float)
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    xd, yd = dc_null
    A, B, eps = cfg.grad_rf, cfg.grad_dc, cfg.asymmetry
    c = np.cos(cfg.drive_freq * t)
    ex = -2 * A * c * x + 2 * B * (1 + eps) * (x - xd)
    ey = 2 * A * c * y + 2 * B * (1 - eps) * (y - yd)
    ez = -4 * B * z * np.ones_like(c)
    return np.stack(np.broadcast_arrays(ex, ey, ez), axis=-1)


def pseudopotential_energy(cfg: TrapConfig, r, offset: OffsetField = OffsetField()):
    """
    Time-independent potential energy (J) built directly from the gradients.

    Ponderomotive term e^2 |grad Phi_rf|^2 / (4 M Omega^2) plus the static
    quadrupole and the offset field, -e E_offset . r.
    """
    r = np.asarray(r, dtype=float)
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    e, m = cfg.charge, cfg.mass
    A, B, eps, W = cfg.grad_rf, cfg.grad_dc, cfg.asymmetry, cfg.drive_freq
    rf_grad_sq = 4 * A**2 * (x**2 + y**2)
    ponderomotive = e**2 * rf_grad_sq / (4 * m * W**2)
    static = -e * B * ((1 + eps) * x**2 + (1 - eps) * y**2 - 2 * z**2)
    return ponderomotive + static - e * (offset.x * x + offset.y * y)


def effective_lamb_dicke(wavelength_1, wavelength_2, counterpropagating, mode_freq,
                         species: IonSpecies = SR88_PLUS) -> float:
    """
    Lamb-Dicke factor of the net two-photon momentum kick on one mode.

    Parameters
    ----------
    wavelength_1, wavelength_2 : float
        Laser wavelengths (m).
    counterpropagating : bool
        Beams along opposite directions (kicks subtract) or the same (add).
    mode_freq : float
        Mode angular frequency (rad/s).
    """
    if not (wavelength_1 > 0 and wavelength_2 > 0):
        raise ValueError("wavelengths must be positive")
    k1, k2 = 2 * np.pi / wavelength_1, 2 * np.pi / wavelength_2
    k_eff = k1 - k2 if counterpropagating else k1 + k2
    return abs(k_eff) * np.sqrt(constants.hbar / (2 * species.mass * mode_freq))
