"""Find the micromotion null from a noisy quadratic Stark-shift scan."""
import numpy as np

from rydion import ALPHA_46S, PolarizableState, SecularFrequencies, TrapConfig
from rydion.figures import fig2b_data
from rydion.spectra import residual_field_limit

TWO_PI = 2 * np.pi
trap = TrapConfig.from_secular(SecularFrequencies(TWO_PI * 1.76e6, TWO_PI * 1.70e6, TWO_PI * 0.87e6),
                               TWO_PI * 18.1e6)
data = fig2b_data(trap, PolarizableState("4D52", 0.0), PolarizableState("46S", ALPHA_46S),
                  null=0.7, noise_hz=10e3, seed=3)
fit = data["turning_point"]
print(f"true null 0.700 V/m, fitted {fit.control:.3f} +- {fit.control_err:.3f} V/m")
print(f"curvature {fit.curvature / TWO_PI / 1e3:.2f} +- {fit.curvature_err / TWO_PI / 1e3:.2f} kHz/(V/m)^2")
print(f"residual field resolvable at 10% of a 100 kHz line: "
      f"{residual_field_limit(ALPHA_46S, 100e3, 0.1):.2f} V/m")
