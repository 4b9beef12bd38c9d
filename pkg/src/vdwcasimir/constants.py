"""Physical constants (CODATA, via scipy.constants), SI units.

Every module takes its constants from here so that the values are pinned
in one place.
"""

from scipy.constants import c, hbar, k as k_B

C_LIGHT = c
HBAR = hbar
K_B = k_B

UNIT_SYSTEM = "SI"

__all__ = ["C_LIGHT", "HBAR", "K_B", "UNIT_SYSTEM"]
