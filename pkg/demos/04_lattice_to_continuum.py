"""From atoms to plates: summing pair forces in a dilute lattice.

When the atoms are far apart compared with their size, the pressure between
two slabs of atoms equals the Lifshitz pressure linearized in (eps - 1).

Run: python3 demos/04_lattice_to_continuum.py
"""

# %%
import numpy as np

from vdwcasimir import (OscillatorParams, PlanarStack, Vacuum, dilute_force_per_area,
                        force_per_area, gas_permittivity, pair_energy)
from vdwcasimir.constants import C_LIGHT

atom = OscillatorParams(253.0, 1e16, 0.0)
d = C_LIGHT / atom.omega_0


def lattice_pressure(a, layers, radius):
    """Force per area between two simple-cubic slabs, one column against a disc."""
    K = int(radius / a) + 1
    ix = np.arange(-K, K + 1)
    n2 = (ix[:, None] ** 2 + ix[None, :] ** 2).ravel()
    n2, lateral = np.unique(n2[n2 * a * a <= radius * radius], return_counts=True)
    offsets = np.arange(2 * layers - 1)
    mult = layers - np.abs(offsets - (layers - 1))

    def energy(gap):
        dz = gap + a + offsets * a
        R = np.sqrt(n2[:, None] * a * a + dz[None, :] ** 2)
        return float(np.sum(lateral[:, None] * mult[None, :]
                            * pair_energy(R.ravel(), atom).reshape(R.shape)))

    h = 1e-3 * d
    return -(energy(d + h) - energy(d - h)) / (2 * h) / a ** 2


# %% [markdown]
# The lattice converges to the continuum as the spacing shrinks. The
# remaining error scales like (a/d)^2.

# %%
print(f"{'a [d]':>7} {'lattice [Pa]':>13} {'continuum [Pa]':>15} {'ratio':>7}")
for per_gap in (4, 8):
    a = d / per_gap
    layers = 3 * per_gap
    gas = gas_permittivity(atom, 1 / a ** 3)
    thick = layers * a
    hs = lambda x: dilute_force_per_area(PlanarStack(gas, gas, Vacuum(), x)).pressure
    cont = hs(d) - 2 * hs(d + thick) + hs(d + 2 * thick)
    lat = lattice_pressure(a, layers, 6 * d)
    print(f"{1 / per_gap:7.3f} {lat:13.4e} {cont:15.4e} {lat / cont:7.3f}")

# %% [markdown]
# For a dilute gas the linearized pressure and the full Lifshitz pressure of
# half-spaces agree closely.

# %%
gas = gas_permittivity(atom, (8 / d) ** 3)
s = PlanarStack(gas, gas, Vacuum(), d)
print(f"\nfull {force_per_area(s).pressure:.5e} Pa, "
      f"linearized {dilute_force_per_area(s).pressure:.5e} Pa")
