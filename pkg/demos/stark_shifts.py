"""Rydberg-state softening of the radial modes and the per-phonon line shift."""
import numpy as np
from scipy import constants

from rydion import (ALPHA_46S, OffsetField, PhononOccupation, PolarizableState, SecularFrequencies, TrapConfig,
                    stark_delta, stark_frequencies, transition_shift)

TWO_PI = 2 * np.pi
trap = TrapConfig.from_secular(SecularFrequencies(TWO_PI * 1.76e6, TWO_PI * 1.70e6, TWO_PI * 0.87e6),
                               TWO_PI * 18.1e6)
lower, upper = PolarizableState("4D52", 0.0), PolarizableState("46S", ALPHA_46S)

w = stark_frequencies(trap, upper)
print(f"Rydberg radial frequencies: {w.x / TWO_PI / 1e6:.4f}, {w.y / TWO_PI / 1e6:.4f} MHz")

base = transition_shift(trap, lower, upper, PhononOccupation(0, 0))
for n in (PhononOccupation(1, 0), PhononOccupation(0, 1), PhononOccupation(5, 5)):
    d = (transition_shift(trap, lower, upper, n) - base) / constants.h
    print(f"n = ({n.nx}, {n.ny}): line shift {d / 1e3:8.2f} kHz")

# excess micromotion from a stray field shifts the line quadratically
for e in (0.0, 2.0, 4.0):
    d = stark_delta(trap, OffsetField(e, 0.0), upper) / constants.h
    print(f"offset {e:.1f} V/m: Rydberg level shift {d / 1e3:8.2f} kHz")
