"""
Data recipes for the four experiment figures.

Each recipe returns plain arrays and dictionaries; the command-line
``figure`` subcommand writes them as CSV.
"""

from __future__ import annotations

import numpy as np
from scipy import constants

from .dynamics import (
    LevelScheme,
    ParameterEnsemble,
    monte_carlo_band,
    thermal_distribution,
    weighted_population,
)
from .overlap import OscillatorSpec, adaptive_overlap_matrix, characteristic_length, line_weights
from .spectra import (
    QuadraticScan,
    SpectrumModel,
    depletion_probability,
    fit_quadratic_turning_point,
)
from .stark import PhononOccupation, stark_delta, stark_equilibrium, stark_frequencies, transition_shift
from .trap import OffsetField, equilibrium_from_offset, mean_square_field

__all__ = [
    "FIGURES",
    "stark_line_weights",
    "fig1b_data",
    "fig2b_data",
    "fig3_data",
    "fig4_data",
]

FIGURES = ("fig1b", "fig2b", "fig3", "fig4")
TWO_PI = 2 * np.pi


def stark_line_weights(cfg, lower, upper, n, offset=OffsetField(), micromotion_correction=True,
                       x_shift=None, tol=1e-8):
    """
    Line weights for a transition between two states of the same ion.

    Oscillator frequencies come from the Stark-softened traps of ``lower``
    and ``upper``; equilibria from the offset field, unless ``x_shift``
    (m) overrides the x displacement x_eq(lower) - x_eq(upper).

    Returns
    -------
    weights : dict
    omega_mean : float
        Mean radial frequency of the upper state.
    """
    w_lo = stark_frequencies(cfg, lower, micromotion_correction)
    w_up = stark_frequencies(cfg, upper, micromotion_correction)
    r_lo = stark_equilibrium(cfg, offset, lower, micromotion_correction)
    r_up = stark_equilibrium(cfg, offset, upper, micromotion_correction)
    m = cfg.mass
    dx = (r_lo.x - r_up.x) if x_shift is None else x_shift
    ax = OscillatorSpec(w_lo.x, 0.0, m)
    bx = OscillatorSpec(w_up.x, -dx, m)
    ay = OscillatorSpec(w_lo.y, r_lo.y, m)
    by = OscillatorSpec(w_up.y, r_up.y, m)
    mx = adaptive_overlap_matrix(ax, bx, n.nx, tol=tol)
    my = adaptive_overlap_matrix(ay, by, n.ny, tol=tol)
    return line_weights(mx, my, n, tol=max(tol, 1e-6)), 0.5 * (w_up.x + w_up.y)


def fig1b_data(cfg, lower, upper, n_max=10, micromotion_correction=True):
    """Resonance shift (Hz) against phonon number in one mode, the other at 0."""
    base = transition_shift(cfg, lower, upper, PhononOccupation(0, 0), micromotion_correction)
    rows = []
    for mode in ("x", "y"):
        for k in range(n_max + 1):
            n = PhononOccupation(k, 0) if mode == "x" else PhononOccupation(0, k)
            shift = transition_shift(cfg, lower, upper, n, micromotion_correction) - base
            rows.append((mode, k, shift / constants.h))
    w_lo = stark_frequencies(cfg, lower, micromotion_correction)
    w_up = stark_frequencies(cfg, upper, micromotion_correction)
    return {
        "rows": rows,
        "slope_x_hz": (w_up.x - w_lo.x) / TWO_PI,
        "slope_y_hz": (w_up.y - w_lo.y) / TWO_PI,
    }


def fig2b_data(cfg, lower, upper, span=6.0, points=21, noise_hz=10e3, null=0.0, seed=0,
               micromotion_correction=True):
    """
    Quadratic resonance shift over an x offset-field sweep.

    The control value is the applied offset field (V/m); the micromotion
    null sits at ``null``.  A Gaussian-noise copy of the shift and the
    turning-point fit of that copy are included.
    """
    control = np.linspace(null - span, null + span, points)
    msf, shift = [], []
    for c in control:
        off = OffsetField(c - null, 0.0)
        d = (stark_delta(cfg, off, upper, micromotion_correction)
             - stark_delta(cfg, off, lower, micromotion_correction))
        shift.append(d / constants.h)
        msf.append(mean_square_field(cfg, equilibrium_from_offset(cfg, off), micromotion_correction))
    shift = np.array(shift)
    rng = np.random.default_rng(seed)
    noisy = shift + noise_hz * rng.standard_normal(points)
    fit = fit_quadratic_turning_point(
        QuadraticScan(control, TWO_PI * noisy, np.full(points, TWO_PI * noise_hz)),
        polarizability=upper.polarizability - lower.polarizability)
    return {
        "control": control,
        "mean_square_field": np.array(msf),
        "shift_hz": shift,
        "shift_noisy_hz": noisy,
        "turning_point": fit,
    }


def fig3_data(cfg, lower, upper, shifts_xho=(0.0, 1.0, 2.0), n=PhononOccupation(20, 0),
              rabi=TWO_PI * 60e3, linewidth=TWO_PI * 120e3, background=0.0, exposure=20e-6,
              detunings=None, micromotion_correction=True):
    """
    Overlap slices and depletion spectra for growing x displacements.

    Displacements are in units of the lower state's x oscillator length.
    Detunings (rad/s) are measured from the phonon-preserving line.
    """
    w_lo = stark_frequencies(cfg, lower, micromotion_correction)
    w_up = stark_frequencies(cfg, upper, micromotion_correction)
    omega_mean = 0.5 * (w_up.x + w_up.y)
    x_ho = characteristic_length(w_lo.x, cfg.mass)
    if detunings is None:
        detunings = np.linspace(-6.5 * omega_mean, 6.5 * omega_mean, 6001)
    panels = []
    for s in shifts_xho:
        weights, _ = stark_line_weights(cfg, lower, upper, n, micromotion_correction=micromotion_correction,
                                        x_shift=s * x_ho)
        a = OscillatorSpec(w_lo.x, 0.0, cfg.mass)
        b = OscillatorSpec(w_up.x, -s * x_ho, cfg.mass)
        mat = adaptive_overlap_matrix(a, b, n.nx)
        model = SpectrumModel(rabi, linewidth, 0.0, background, omega_mean, weights)
        panels.append({
            "shift_xho": s,
            "overlap_row": mat.values[n.nx],
            "matrix": mat,
            "weights": weights,
            "model": model,
            "spectrum": depletion_probability(model, detunings, exposure),
        })
    return {"detunings": np.asarray(detunings), "omega_mean": omega_mean, "x_ho": x_ho,
            "frequency_ratio": w_up.x / w_lo.x, "panels": panels}


def fig4_data(cfg, lower, upper, scheme: LevelScheme, times, nbar_sideband=0.1, nbar_doppler=10.0,
              sigmas=None, samples=100, seed=0, micromotion_correction=True):
    """
    Weighted |0> population and Monte Carlo bands for two cooling regimes.

    ``sigmas`` maps ensemble parameter names to 1 sigma uncertainties;
    parameters without an entry are held fixed.  ``samples=0`` skips the
    Monte Carlo bands.
    """
    w_lo = stark_frequencies(cfg, lower, micromotion_correction)
    w_up = stark_frequencies(cfg, upper, micromotion_correction)
    dwx, dwy = w_up.x - w_lo.x, w_up.y - w_lo.y
    sigmas = dict(sigmas or {})
    central = {
        "rabi_1": scheme.rabi_1, "rabi_2": scheme.rabi_2,
        "delta_intermediate": scheme.delta_intermediate, "delta_2photon": scheme.delta_2photon,
        "gamma_e": scheme.gamma_e, "gamma_r": scheme.gamma_r,
        "delta_omega_x": dwx, "delta_omega_y": dwy,
    }
    ensemble = None
    if samples:
        ensemble = ParameterEnsemble({k: (v, sigmas.get(k, 0.0)) for k, v in central.items()},
                                     count=samples, seed=seed)
    out = {"times": np.asarray(times), "delta_omega_x": dwx, "delta_omega_y": dwy}
    for name, nbar in (("sideband", nbar_sideband), ("doppler", nbar_doppler)):
        dist = thermal_distribution(nbar, nbar)
        out[name] = {
            "nbar": nbar,
            "population": weighted_population(scheme, dist, dwx, dwy, times),
            "band": monte_carlo_band(ensemble, dist, times) if ensemble else None,
        }
    return out


