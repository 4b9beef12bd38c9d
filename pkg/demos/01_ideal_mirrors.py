"""Casimir pressure between ideal mirrors, and how real metals fall short of it.

Run: python3 demos/01_ideal_mirrors.py
"""

# %%
import math

import numpy as np

from vdwcasimir import Drude, IdealMirror, PlanarStack, ThermalState, Vacuum, force_per_area
from vdwcasimir.constants import C_LIGHT, HBAR

# %% [markdown]
# Perfect mirrors give the textbook result pi^2 hbar c / (240 d^4). The mirror
# is modelled as a huge constant permittivity and extrapolated to the limit.

# %%
d = 1e-6
p = force_per_area(PlanarStack(IdealMirror(), IdealMirror(), Vacuum(), d)).pressure
print(f"ideal mirrors at 1 um: {p:.5e} Pa")
print(f"closed form:           {-math.pi ** 2 * HBAR * C_LIGHT / (240 * d ** 4):.5e} Pa")

# %% [markdown]
# A Drude metal (gold-like plasma frequency) reflects poorly above its plasma
# frequency, so at short distances the pressure drops below the mirror value.

# %%
gold = Drude(1.37e16 ** 2, 5.3e13)
print(f"\n{'d [m]':>10} {'P gold [Pa]':>14} {'P/P_mirror':>11}")
for d in np.geomspace(5e-8, 2e-6, 6):
    mirror = -math.pi ** 2 * HBAR * C_LIGHT / (240 * d ** 4)
    pg = force_per_area(PlanarStack(gold, gold, Vacuum(), d)).pressure
    print(f"{d:10.3e} {pg:14.5e} {pg / mirror:11.4f}")

# %% [markdown]
# At room temperature and micron distances thermal photons matter. The
# zero-frequency TE term of a Drude metal vanishes, which lowers the force.

# %%
d = 2e-6
cold = force_per_area(PlanarStack(gold, gold, Vacuum(), d))
warm = force_per_area(PlanarStack(gold, gold, Vacuum(), d), ThermalState(300.0))
print(f"\ngold at 2 um: T=0 {cold.pressure:.4e} Pa, T=300 K {warm.pressure:.4e} Pa "
      f"(n=0 term {warm.n0_term:.3e} Pa)")
