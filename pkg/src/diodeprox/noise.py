"""Analog circuit noise: variance formulas and Gaussian samplers.

Three sources are modelled:

* the optical amplifier, a fixed-variance Gaussian added every iteration;
* the optical-to-electrical modulator (OEM) at the circuit input, shot noise
  plus thermal noise of ``R``;
* the electrical-to-optical modulator (EOM) at the circuit output, thermal
  noise of ``R'``.

Shot noise is drawn as a Gaussian with the Poisson variance, one variance per
element.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "ELEMENTARY_CHARGE",
    "BOLTZMANN",
    "NoiseParams",
    "NoiseConfig",
    "shot_variance",
    "thermal_variance",
    "bandwidth",
    "sample_additive_noise",
]

ELEMENTARY_CHARGE = 1.602e-19  # C
BOLTZMANN = 1.381e-23  # J/K


def bandwidth(capacitance, combined_resistance):
    """RC bandwidth ``1 / (2 pi C R_cmb)`` in hertz."""
    if not (capacitance > 0 and combined_resistance > 0):
        raise ValueError("capacitance and combined resistance must be positive")
    return 1.0 / (2.0 * np.pi * capacitance * combined_resistance)


@dataclass(frozen=True)
class NoiseParams:
    """Physical noise parameters.

    If both ``capacitance`` and ``combined_resistance`` are given they must
    reproduce ``bandwidth`` to within 1%.
    """

    temperature: float = 300.0  # K
    bandwidth: float = 1e10  # Hz
    amplifier_variance: float = 3.84e-8
    capacitance: Optional[float] = None  # F
    combined_resistance: Optional[float] = None  # ohm
    elementary_charge: float = ELEMENTARY_CHARGE
    boltzmann: float = BOLTZMANN

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if not self.amplifier_variance >= 0:
            raise ValueError(f"amplifier variance must be >= 0, got {self.amplifier_variance}")
        if self.capacitance is not None and self.combined_resistance is not None:
            b = bandwidth(self.capacitance, self.combined_resistance)
            if abs(b - self.bandwidth) > 0.01 * self.bandwidth:
                raise ValueError(
                    f"bandwidth {self.bandwidth:g} Hz inconsistent with C={self.capacitance:g} F, "
                    f"R_cmb={self.combined_resistance:g} ohm (gives {b:g} Hz)"
                )


@dataclass(frozen=True)
class NoiseConfig:
    """Which noise stages are active, and the default seed for a lone solver run."""

    enabled: bool = True
    amplifier: bool = True
    oem: bool = True
    eom: bool = True
    seed: int = 0

    @property
    def use_amplifier(self):
        return self.enabled and self.amplifier

    @property
    def use_oem(self):
        return self.enabled and self.oem

    @property
    def use_eom(self):
        return self.enabled and self.eom


def shot_variance(i_in, params=NoiseParams()):
    """Shot-noise variance ``2 q |I_in| B``, elementwise."""
    var = 2.0 * params.elementary_charge * np.abs(np.asarray(i_in, dtype=float)) * params.bandwidth
    return float(var) if np.ndim(i_in) == 0 else var


def thermal_variance(params, load_resistance):
    """Johnson noise variance ``4 k_B T B / R_load``."""
    if not load_resistance > 0:
        raise ValueError(f"load resistance must be positive, got {load_resistance}")
    return 4.0 * params.boltzmann * params.temperature * params.bandwidth / load_resistance


def sample_additive_noise(rng, variance, n):
    """Draw ``n`` zero-mean Gaussian samples.

    ``variance`` may be a scalar or a length-``n`` array of per-element
    variances. Zero variance gives exact zeros, and the generator is still
    advanced by ``n`` draws so streams stay aligned.
    """
    var = np.asarray(variance, dtype=float)
    if (var < 0).any():
        raise ValueError("variance must be nonnegative")
    return np.sqrt(var) * rng.standard_normal(n)
