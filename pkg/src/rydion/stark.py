"""
Quadratic Stark modification of the trapping potential.

A state of scalar polarizability alpha sees the extra potential
-alpha A^2 c (x^2 + y^2), with c = 1 + 3 q^2 / 16 when intrinsic
micromotion is included (``micromotion_correction=True``) and c = 1
otherwise.  This softens the radial modes, displaces the equilibrium when
an offset field is present and lowers the potential minimum by delta.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import AntiTrapped, PerturbationInvalid
from .trap import (
    EquilibriumPosition,
    OffsetField,
    SecularFrequencies,
    TrapConfig,
    equilibrium_from_offset,
    mathieu_q,
    mean_square_field,
    micromotion_factor,
    secular_from_gradients,
)

__all__ = [
    "PolarizableState",
    "PhononOccupation",
    "TrapPotential",
    "ALPHA_46S",
    "PERTURBATION_THRESHOLD",
    "stark_curvature",
    "perturbation_ratios",
    "stark_frequencies",
    "stark_equilibrium",
    "stark_delta",
    "stark_delta_approx",
    "stark_potential",
    "transition_shift",
    "stark_sideband_ratio",
]

# Theory polarizability of 88Sr+ 46S_1/2 (C m^2 / V).
ALPHA_46S = 5.6e-31

# |alpha A^2 c| above this fraction of M omega^2 / 2 triggers PerturbationInvalid.
PERTURBATION_THRESHOLD = 0.1


@dataclass(frozen=True)
class PolarizableState:
    label: str
    polarizability: float

    def __post_init__(self):
        if not np.isfinite(self.polarizability):
            raise ValueError("polarizability must be finite")


@dataclass(frozen=True)
class PhononOccupation:
    nx: int = 0
    ny: int = 0

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny or self.nx < 0 or self.ny < 0:
            raise ValueError(f"phonon numbers must be non-negative integers, got ({self.nx}, {self.ny})")


@dataclass(frozen=True)
class TrapPotential:
    """Harmonic potential of one electronic state: frequencies, minimum and its energy offset."""

    frequencies: SecularFrequencies
    equilibrium: EquilibriumPosition
    minimum_offset: float


def stark_curvature(cfg: TrapConfig, state: PolarizableState, micromotion_correction=True) -> float:
    """2 alpha A^2 c / M, the amount subtracted from each radial omega^2."""
    c = micromotion_factor(mathieu_q(cfg)) if micromotion_correction else 1.0
    return 2 * state.polarizability * cfg.grad_rf**2 * c / cfg.mass


def perturbation_ratios(cfg, state, micromotion_correction=True):
    """|alpha A^2 c| / (M omega_i^2 / 2) for the x and y axes."""
    w = secular_from_gradients(cfg)
    k = abs(stark_curvature(cfg, state, micromotion_correction))
    # alpha A^2 c = k M / 2, so the ratio reduces to k / omega^2
    return k / w.x**2, k / w.y**2


def _check_perturbation(cfg, state, micromotion_correction):
    rx, ry = perturbation_ratios(cfg, state, micromotion_correction)
    worst = max(rx, ry)
    if worst > PERTURBATION_THRESHOLD:
        warnings.warn(
            f"state {state.label!r}: |alpha A^2 c| is {worst:.3g} of M omega^2/2 "
            f"(threshold {PERTURBATION_THRESHOLD})",
            PerturbationInvalid,
            stacklevel=3,
        )


def _softened_squares(cfg, state, micromotion_correction):
    w = secular_from_gradients(cfg)
    k = stark_curvature(cfg, state, micromotion_correction)
    wx2, wy2 = w.x**2 - k, w.y**2 - k
    if not wx2 > 0:
        raise AntiTrapped("x", wx2)
    if not wy2 > 0:
        raise AntiTrapped("y", wy2)
    return w, wx2, wy2


def stark_frequencies(cfg: TrapConfig, state: PolarizableState,
                      micromotion_correction=True) -> SecularFrequencies:
    """Secular frequencies of a polarizable state; the axial mode is unchanged."""
    w, wx2, wy2 = _softened_squares(cfg, state, micromotion_correction)
    _check_perturbation(cfg, state, micromotion_correction)
    return SecularFrequencies(np.sqrt(wx2), np.sqrt(wy2), w.z)


def stark_equilibrium(cfg: TrapConfig, offset: OffsetField, state: PolarizableState,
                      micromotion_correction=True) -> EquilibriumPosition:
    w, wx2, wy2 = _softened_squares(cfg, state, micromotion_correction)
    _check_perturbation(cfg, state, micromotion_correction)
    r = equilibrium_from_offset(cfg, offset)
    # x' = x / (1 - k / omega^2) = x omega^2 / omega'^2
    return EquilibriumPosition(r.x * w.x**2 / wx2, r.y * w.y**2 / wy2)


def stark_delta(cfg: TrapConfig, offset: OffsetField, state: PolarizableState,
                micromotion_correction=True) -> float:
    """
    Shift (J) of the potential minimum relative to a non-polarizable state.

    Exact for the harmonic model:
    M/2 (wx^2 x^2 + wy^2 y^2 - wx'^2 x'^2 - wy'^2 y'^2).
    """
    w, wx2, wy2 = _softened_squares(cfg, state, micromotion_correction)
    _check_perturbation(cfg, state, micromotion_correction)
    r = equilibrium_from_offset(cfg, offset)
    xs, ys = r.x * w.x**2 / wx2, r.y * w.y**2 / wy2
    m = cfg.mass
    return 0.5 * m * (w.x**2 * r.x**2 + w.y**2 * r.y**2 - wx2 * xs**2 - wy2 * ys**2)


def stark_delta_approx(cfg: TrapConfig, offset: OffsetField, state: PolarizableState,
                       micromotion_correction=True) -> float:
    """First-order shift -alpha <E(r_eq, t)^2> / 2."""
    r = equilibrium_from_offset(cfg, offset)
    return -0.5 * state.polarizability * mean_square_field(cfg, r, micromotion_correction)


def stark_potential(cfg, offset, state, micromotion_correction=True) -> TrapPotential:
    return TrapPotential(
        stark_frequencies(cfg, state, micromotion_correction),
        stark_equilibrium(cfg, offset, state, micromotion_correction),
        stark_delta(cfg, offset, state, micromotion_correction),
    )


def transition_shift(cfg: TrapConfig, state_1: PolarizableState, state_2: PolarizableState,
                     n: PhononOccupation, micromotion_correction=True) -> float:
    """Phonon-number dependent shift (J) of the 1 -> 2 transition energy."""
    w1 = stark_frequencies(cfg, state_1, micromotion_correction)
    w2 = stark_frequencies(cfg, state_2, micromotion_correction)
    hbar = constants.hbar
    return hbar * ((n.nx + 0.5) * (w2.x - w1.x) + (n.ny + 0.5) * (w2.y - w1.y))


def stark_sideband_ratio(cfg: TrapConfig, offset: OffsetField, state: PolarizableState,
                         micromotion_correction=True) -> float:
    """
    alpha <E^2> / 2 in units of hbar * 2 Omega.

    Stark sidebands at even multiples of the drive are negligible when this
    is much smaller than one.
    """
    r = equilibrium_from_offset(cfg, offset)
    shift = 0.5 * state.polarizability * mean_square_field(cfg, r, micromotion_correction)
    return shift / (constants.hbar * 2 * cfg.drive_freq)
