"""Two-photon Rabi flops averaged over thermal phonon distributions."""
import numpy as np

from rydion.dynamics import LevelScheme, oscillation_contrast, thermal_distribution, weighted_population

TWO_PI = 2 * np.pi
scheme = LevelScheme(TWO_PI * 20e6, TWO_PI * 20e6, TWO_PI * 1e9, 0.0, 3e7, 5e4)
dwx, dwy = -TWO_PI * 40.5e3, -TWO_PI * 42.0e3
period = TWO_PI / scheme.effective_rabi
t = np.linspace(0, 2 * period, 161)

for label, nbar in (("sideband", 0.1), ("doppler", 10.0)):
    p0 = weighted_population(scheme, thermal_distribution(nbar, nbar), dwx, dwy, t)
    print(f"{label:9s} nbar {nbar:5.1f}: second-period contrast "
          f"{oscillation_contrast(t, p0, period, 2 * period):.3f}")
