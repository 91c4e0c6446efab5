"""
Calibration table
=================

The l1 rule has a closed form. The MCP rule pins a fixed point k and
depends on it strongly, so the table is printed for a few k.
"""

from diodeprox import DiodeParams, calibrate_l1, calibrate_mcp

for R in (25, 35, 45):
    print(f"R = {R:2d} ohm  ->  R' = {calibrate_l1(R):.3f} ohm")

print()
d = DiodeParams()
print("R' \\ k " + "".join(f"{k:>10.1f}" for k in (1.0, 1.5, 2.0)))
for rp in (1.03, 1.04, 1.05):
    print(f"{rp:<7}" + "".join(f"{calibrate_mcp(rp, k, d):10.2f}" for k in (1.0, 1.5, 2.0)))
