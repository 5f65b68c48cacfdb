"""Secular frequencies, gradients and micromotion factor of a linear Paul trap."""
import numpy as np

from rydion import SecularFrequencies, TrapConfig, mathieu_q, micromotion_factor, secular_from_gradients
from rydion import effective_lamb_dicke

TWO_PI = 2 * np.pi

trap = TrapConfig.from_secular(SecularFrequencies(TWO_PI * 1.76e6, TWO_PI * 1.70e6, TWO_PI * 0.87e6),
                               TWO_PI * 18.1e6)
q = mathieu_q(trap)
print(f"rf gradient  A = {trap.grad_rf:.4g} V/m^2")
print(f"dc gradient  B = {trap.grad_dc:.4g} V/m^2")
print(f"asymmetry  eps = {trap.asymmetry:.4f}")
print(f"Mathieu q      = {q:.4f}, <E^2> enhancement {micromotion_factor(q) - 1:.4%}")

w = secular_from_gradients(trap)
print("secular (MHz)  =", np.round(np.array([w.x, w.y, w.z]) / TWO_PI / 1e6, 6))
print(f"two-photon Lamb-Dicke factor at 800 kHz: "
      f"{effective_lamb_dicke(243e-9, 306e-9, True, TWO_PI * 800e3):.4f}")
