"""Spin-1 color-center coherence and AC-magnetometry simulator.

Frequencies are angular (rad/us); use mhz(f) to convert "(2 pi) x f MHz".
Times are in us.
"""

from ._spinsim import (
    TWO_PI,
    ConfigError,
    NumericalError,
    OuProcess,
    PhysicsGuardError,
    Spin1Op,
    ac_sensing_trace,
    ac_spectrum,
    dephasing_comparison,
    derive_seed,
    expectation,
    fit_coherence,
    gap_clock,
    gap_linear,
    gap_orthogonal,
    h_lab,
    h_rotating,
    matrix_exponential,
    mhz,
    phase_modulation,
    resonant_omega1,
    run_config,
    spin_operator,
)

__all__ = [
    "TWO_PI",
    "ConfigError",
    "NumericalError",
    "OuProcess",
    "PhysicsGuardError",
    "Spin1Op",
    "ac_sensing_trace",
    "ac_spectrum",
    "dephasing_comparison",
    "derive_seed",
    "expectation",
    "fit_coherence",
    "gap_clock",
    "gap_linear",
    "gap_orthogonal",
    "h_lab",
    "h_rotating",
    "matrix_exponential",
    "mhz",
    "phase_modulation",
    "resonant_omega1",
    "run_config",
    "spin_operator",
]
