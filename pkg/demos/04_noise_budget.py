"""
Noise budget
============

How large is each circuit noise source compared with the amplifier
floor and with the signal levels seen by the shrinkage stage?
"""

import numpy as np

from diodeprox import CircuitParams, DiodeParams, NoiseParams, v_out_vec
from diodeprox.noise import shot_variance, thermal_variance

params = NoiseParams()
diode = DiodeParams()
l1 = CircuitParams.for_l1(35.0)

print(f"amplifier variance      {params.amplifier_variance:.2e}")
print(f"thermal, R  = 35 ohm    {thermal_variance(params, l1.series_resistance):.2e}")
print(f"thermal, R' = {l1.load_resistance:.3f}   {thermal_variance(params, l1.load_resistance):.2e}")

# shot noise scales with the input current; 0.1 A is a typical gradient-step entry
for i in (0.01, 0.1, 1.0):
    print(f"shot, I = {i:<5} A        {shot_variance(i, params):.2e}")

# the diode branch carries only a small part of the input near the knee
i_d = v_out_vec(np.array([0.01, 0.1, 1.0]), diode, l1) / l1.load_resistance
print("\ndiode branch current at the same inputs:", np.array2string(i_d, precision=4))

# every term is far below the per-step amplifier floor, which is itself
# small next to a measurement noise variance of 1e-5 per entry
