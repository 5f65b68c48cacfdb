"""Synthesize a noisy sideband spectrum and fit it back."""
import numpy as np

from rydion.overlap import OscillatorSpec, adaptive_overlap_matrix, characteristic_length, line_weights
from rydion.spectra import SpectrumModel, fit_spectrum, synthesize_scan
from rydion.stark import PhononOccupation
from rydion.trap import SR88_PLUS

TWO_PI = 2 * np.pi
w, m = TWO_PI * 1.76e6, SR88_PLUS.mass
x_ho = characteristic_length(w, m)
n = PhononOccupation(20, 0)
mx = adaptive_overlap_matrix(OscillatorSpec(w, 0.0, m), OscillatorSpec(0.977 * w, -1.5 * x_ho, m), n.nx)
my = adaptive_overlap_matrix(OscillatorSpec(w, 0.0, m), OscillatorSpec(w, 0.0, m), 0)
weights = line_weights(mx, my, n)
omega_mean = TWO_PI * 1.69e6

truth = SpectrumModel(TWO_PI * 60e3, TWO_PI * 120e3, TWO_PI * 15e3, 0.0, omega_mean, weights)
det = np.linspace(-6.5 * omega_mean, 6.5 * omega_mean, 801)
scan = synthesize_scan(truth, det, 20e-6, trials=100, seed=1)

fit = fit_spectrum(scan, weights, omega_mean)
for name in ("rabi", "linewidth", "center"):
    print(f"{name:9s} true {getattr(truth, name) / TWO_PI / 1e3:8.2f} kHz   "
          f"fit {getattr(fit.model, name) / TWO_PI / 1e3:8.2f} +- {fit.uncertainties[name] / TWO_PI / 1e3:.2f} kHz")
