"""PN-junction diode circuit used as an approximate proximal operator.

The circuit takes an input current ``I_in`` into a shunt resistor ``R``; in
parallel with ``R`` sits a pair of anti-parallel diodes in series with a load
``R'``. The output is the voltage across ``R'``. Ignoring reverse-bias
current, the forward branch solves in closed form through Lambert W, and the
negative half follows by odd symmetry.

Signal values are used directly as amperes (input) and volts (output).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CalibrationError
from .lambert import lambert_w0_of_exp

__all__ = [
    "DiodeParams",
    "CircuitParams",
    "diode_current",
    "v_out",
    "v_out_vec",
    "calibrate_l1",
    "calibrate_mcp",
]


@dataclass(frozen=True)
class DiodeParams:
    """Shockley model constants.

    Defaults are a small-signal silicon diode at room temperature.
    """

    saturation_current: float = 1.4e-14  # A
    emission_coefficient: float = 1.0
    thermal_voltage: float = 0.026  # V

    def __post_init__(self):
        for name in ("saturation_current", "emission_coefficient", "thermal_voltage"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive and finite, got {val}")

    @property
    def mvt(self):
        """``m * V_T``, the exponential slope voltage."""
        return self.emission_coefficient * self.thermal_voltage


@dataclass(frozen=True)
class CircuitParams:
    """Shunt resistance ``R``, load resistance ``R'`` and, in MCP mode, the fixed point ``k``.

    Use :meth:`for_l1` or :meth:`for_mcp` to get a calibrated pair.
    """

    series_resistance: float
    load_resistance: float
    fixed_point: Optional[float] = None

    def __post_init__(self):
        if not (self.series_resistance > 0 and self.load_resistance > 0):
            raise ValueError(
                f"resistances must be positive, got R={self.series_resistance}, "
                f"R'={self.load_resistance}"
            )
        if self.fixed_point is not None:
            if not self.fixed_point > 0:
                raise ValueError(f"fixed point k must be positive, got {self.fixed_point}")
            if not self.load_resistance > 1:
                raise CalibrationError(
                    f"MCP mode requires R' > 1, got R'={self.load_resistance}"
                )

    @classmethod
    def for_l1(cls, series_resistance):
        """Unit asymptotic slope: ``R' = R / (R - 1)``."""
        return cls(series_resistance, calibrate_l1(series_resistance))

    @classmethod
    def for_mcp(cls, load_resistance, fixed_point, diode=DiodeParams()):
        """Choose ``R`` so the transfer curve passes through ``(k, k)``."""
        r = calibrate_mcp(load_resistance, fixed_point, diode)
        return cls(r, load_resistance, fixed_point)

    @property
    def asymptotic_slope(self):
        r, rp = self.series_resistance, self.load_resistance
        return r * rp / (r + rp)


def diode_current(v_d, diode=DiodeParams()):
    """Forward diode current ``I_s (exp(V_D / (m V_T)) - 1)``."""
    vd = np.asarray(v_d, dtype=float)
    i = diode.saturation_current * np.expm1(vd / diode.mvt)
    return float(i) if np.ndim(v_d) == 0 else i


def v_out(i_in, diode=DiodeParams(), circuit=None):
    """Output voltage of the diode circuit for input current(s) ``i_in``.

    With ``S = R + R'`` and ``c = I_s S / (m V_T)``::

        V_out = sgn(I) R' (m V_T / S * W(c * exp(c + |I| R / (m V_T))) - I_s)

    The Lambert W argument is handled in log form because its exponent is in
    the thousands for ordinary inputs.

    Parameters
    ----------
    i_in : float or array_like
        Input current(s); any finite value.
    diode : DiodeParams
    circuit : CircuitParams

    Returns
    -------
    float or ndarray
        Output voltage(s), same shape as ``i_in``.
    """
    if circuit is None:
        raise TypeError("v_out requires circuit parameters")
    ia = np.asarray(i_in, dtype=float)
    if not np.isfinite(ia).all():
        raise ValueError("v_out input must be finite")
    r, rp = circuit.series_resistance, circuit.load_resistance
    s = r + rp
    mvt = diode.mvt
    i_s = diode.saturation_current
    c = i_s * s / mvt
    y = np.log(c) + c + np.abs(ia) * r / mvt
    w = lambert_w0_of_exp(y)
    out = np.sign(ia) * rp * (mvt / s * w - i_s)
    return float(out) if ia.ndim == 0 else out


def v_out_vec(i_in, diode, circuit):
    """Elementwise :func:`v_out` over a 1-D vector."""
    return v_out(np.asarray(i_in, dtype=float).reshape(-1), diode, circuit)


def calibrate_l1(series_resistance):
    """Load resistance giving unit asymptotic slope, ``R R' / (R + R') = 1``.

    Raises
    ------
    CalibrationError
        If ``R <= 1``; the slope ``R R' / (R + R')`` is then below 1 for every
        positive ``R'``.
    """
    r = float(series_resistance)
    if not r > 1:
        raise CalibrationError(f"l1 calibration needs R > 1 ohm, got R={r}")
    return r / (r - 1.0)


def calibrate_mcp(load_resistance, fixed_point, diode=DiodeParams()):
    """Shunt resistance ``R`` for which ``v_out(k) = k``.

    ``R = R' / (R' - 1) * (1 + m V_T / k * log(1 + k / (I_s R')))``
    """
    rp = float(load_resistance)
    k = float(fixed_point)
    if not rp > 1:
        raise CalibrationError(f"MCP calibration needs R' > 1 ohm, got R'={rp}")
    if not k > 0:
        raise CalibrationError(f"MCP calibration needs k > 0, got k={k}")
    v_d = diode.mvt * np.log1p(k / (diode.saturation_current * rp))
    return float(rp / (rp - 1.0) * (1.0 + v_d / k))
