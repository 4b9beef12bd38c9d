"""Zero-point energy density inside a cavity and across an interface.

Run: python3 demos/05_cavity_energy_density.py
"""

# %%
import numpy as np

from vdwcasimir import (IdealMirror, Lorentz, PlanarStack, Vacuum, bulk_spectral_energy_density,
                        energy_density_profile)
from vdwcasimir.constants import C_LIGHT, HBAR

# %% [markdown]
# Between ideal mirrors the scattering part of the energy density is finite
# away from the walls and diverges as 1/z^4 toward them.

# %%
d = 1e-6
s = PlanarStack(IdealMirror(), IdealMirror(), Vacuum(), d)
print(f"{'z/d':>5} {'u d^4/(hbar c)':>15}")
for zs in (0.05, 0.1, 0.2, 0.3, 0.5):
    u = energy_density_profile(s, zs * d)
    print(f"{zs:5.2f} {u * d ** 4 / (HBAR * C_LIGHT):15.6f}")

# %% [markdown]
# With dielectric walls the profile is softened near the surfaces.

# %%
w0 = 1e16
plate = Lorentz(w0 ** 2, w0, 0.1 * w0)
L = C_LIGHT / w0
s = PlanarStack(plate, plate, Vacuum(), L)
for zs in (0.1, 0.3, 0.5):
    print(f"z = {zs:.1f} d: u = {energy_density_profile(s, zs * L):.4e} J/m^3")

# %% [markdown]
# In an absorbing bulk medium the spectral energy density can be built from
# the refractive index directly or from the Green function trace.

# %%
for w in np.array([0.5, 1.0, 1.5]) * w0:
    a = bulk_spectral_energy_density(plate, w)
    b = bulk_spectral_energy_density(plate, w, method="green")
    print(f"omega = {w / w0:.1f} w0: closed {a:.6e}, green {b:.6e} J s/m^3")
