"""Van der Waals energy of two and three atoms from coupled dipoles.

Run: python3 demos/03_two_atoms.py
"""

# %%
import numpy as np

from vdwcasimir import (DipoleSystem, OscillatorParams, casimir_polder_energy, london_energy,
                        pairwise_vdw_energy, vdw_energy)
from vdwcasimir.constants import C_LIGHT

# %% [markdown]
# A single-oscillator atom: e^2/m and a resonance. Its static polarizability
# volume is (e^2/m)/omega_0^2.

# %%
atom = OscillatorParams(253.0, 1e14, 0.0)
lam = C_LIGHT / atom.omega_0
print(f"alpha_0 = {atom.static_polarizability:.3e} m^3, c/omega_0 = {lam:.3e} m")

# %% [markdown]
# Sweeping the separation through c/omega_0 shows the crossover from the
# London R^-6 law to the retarded Casimir-Polder R^-7 law.

# %%
print(f"\n{'R [c/w0]':>9} {'E [J]':>12} {'E/London':>9} {'E/CP':>9}")
for units in (0.01, 0.1, 1.0, 10.0, 100.0):
    R = units * lam
    E = vdw_energy(DipoleSystem(np.array([[0, 0, 0], [R, 0, 0]]), atom))
    print(f"{units:9.2f} {E:12.4e} {E / london_energy(R, atom):9.4f} "
          f"{E / casimir_polder_energy(R, atom):9.4f}")

# %% [markdown]
# Three atoms are not pairwise additive. Close together, the triangle's
# energy differs from the sum of its pairs by the triple-dipole term.

# %%
R = 0.01 * lam
tri = np.array([[0, 0, 0], [R, 0, 0], [R / 2, R * np.sqrt(3) / 2, 0]])
line = np.array([[0, 0, 0], [R, 0, 0], [2 * R, 0, 0]])
for name, pos in (("triangle", tri), ("line", line)):
    s = DipoleSystem(pos, atom)
    full, pair = vdw_energy(s), pairwise_vdw_energy(s)
    print(f"{name:9s} full {full:.5e} J, pairwise {pair:.5e} J, non-additive {full - pair:+.3e} J")
