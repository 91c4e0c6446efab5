"""
Diode shrinkage curves next to the ideal operators
===================================================

Sweep the circuit input and print the diode output beside the exact
soft-threshold and MCP prox values. Both circuits are calibrated from
a single resistor choice.
"""

import numpy as np

from diodeprox import CircuitParams, DiodeParams, McpParams, mcp_prox, soft_threshold, v_out_vec

diode = DiodeParams()

# l1 circuit: R fixed, R' chosen so the far-field slope is exactly one
l1 = CircuitParams.for_l1(35.0)
print(f"l1 circuit: R = {l1.series_resistance:.3f}, R' = {l1.load_resistance:.4f}")

u = np.linspace(-0.3, 0.3, 13)
ideal = soft_threshold(u, 0.0225)
diode_out = v_out_vec(u, diode, l1)

print(f"{'input':>8} {'soft':>10} {'diode':>10}")
for a, b, c in zip(u, ideal, diode_out):
    print(f"{a:8.3f} {b:10.5f} {c:10.5f}")

# the diode knee is soft: small inputs leak through a little, large inputs
# come out shifted by roughly the forward drop scaled by the divider
big = np.array([1.0, 5.0, 10.0])
print("\nlarge-input offset (input - output):", np.round(big - v_out_vec(big, diode, l1), 4))

# MCP circuit: R' fixed, R solved so v_out(k) = k
mcp = CircuitParams.for_mcp(1.04, 1.5, diode)
print(f"\nMCP circuit: R = {mcp.series_resistance:.2f}, R' = {mcp.load_resistance}")

p = McpParams(lam=0.0225, alpha=27.0, epsilon=1.0)
u = np.linspace(0, 2.0, 9)
for a, b, c in zip(u, mcp_prox(u, p), v_out_vec(u, diode, mcp)):
    print(f"{a:8.3f} {b:10.5f} {c:10.5f}")

# past the fixed point the circuit slope exceeds one, unlike the ideal MCP
print("\nasymptotic slope:", round(mcp.asymptotic_slope, 4))
