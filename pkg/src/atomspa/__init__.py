"""Atomic-pattern EC scalar multiplication laboratory with a power side channel.

The package models a hardware kP accelerator at three levels: field and curve
arithmetic executed through fixed atomic operation patterns, a cycle-accurate
schedule of how those patterns drive a shared bus, and a synthetic power trace
whose leakage comes from the bit difference of consecutive bus addresses.  An
automated simple-power-analysis pipeline recovers the scalar from such traces.
"""

from atomspa.field import PrimeField, Curve, CURVES, mul_schedule
from atomspa.atoms import k_mul, reference_k_mul, AffinePoint, ScalarK

__all__ = [
    "PrimeField",
    "Curve",
    "CURVES",
    "mul_schedule",
    "k_mul",
    "reference_k_mul",
    "AffinePoint",
    "ScalarK",
]

__version__ = "0.1.0"
