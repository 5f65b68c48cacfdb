"""Overlaps between oscillator states of two traps that differ in frequency and centre."""
import numpy as np

from rydion.overlap import OscillatorSpec, adaptive_overlap_matrix, characteristic_length
from rydion.trap import SR88_PLUS

TWO_PI = 2 * np.pi
w, m = TWO_PI * 1.76e6, SR88_PLUS.mass
x_ho = characteristic_length(w, m)

a = OscillatorSpec(w, 0.0, m)
for shift in (0.0, 1.0, 2.0):
    b = OscillatorSpec(0.974 * w, -shift * x_ho, m)
    mat = adaptive_overlap_matrix(a, b, 20)
    row = mat.values[20] ** 2
    top = np.argsort(row)[::-1][:4]
    print(f"shift {shift:.1f} x_ho: row sum {row.sum():.10f}, strongest targets",
          ", ".join(f"{k}:{row[k]:.3f}" for k in sorted(top)))
