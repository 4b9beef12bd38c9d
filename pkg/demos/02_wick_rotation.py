"""The same Lifshitz pressure from real and imaginary frequencies.

Along real frequencies the integrand oscillates and has sharp resonances;
after rotating onto the imaginary axis it is smooth and positive. Both must
give the same number.

Run: python3 demos/02_wick_rotation.py
"""

# %%
import numpy as np

from vdwcasimir import (Lorentz, PlanarStack, ThermalState, Vacuum, force_per_area,
                        force_per_area_real_axis, kk_consistency_residual)
from vdwcasimir.constants import C_LIGHT

w0 = 1e16
plate = Lorentz(w0 ** 2, w0, 0.3 * w0)

# %% [markdown]
# Causality first: the model's imaginary-axis values must follow from its
# absorption spectrum by the Kramers-Kronig relation.

# %%
xi = w0 * np.logspace(-2, 2, 9)
print(f"KK residual: {kk_consistency_residual(plate, xi):.2e}")

# %%
print(f"\n{'d [c/w0]':>9} {'imag axis [Pa]':>15} {'real axis [Pa]':>15} {'rel diff':>9}")
for units in (0.3, 1.0, 3.0):
    s = PlanarStack(plate, plate, Vacuum(), units * C_LIGHT / w0)
    a = force_per_area(s).pressure
    b = force_per_area_real_axis(s).pressure
    print(f"{units:9.1f} {a:15.6e} {b:15.6e} {abs(b / a - 1):9.1e}")

# %% [markdown]
# At finite temperature the real-axis integrand picks up coth(hbar w/2kT);
# on the imaginary axis the integral becomes a Matsubara sum.

# %%
s = PlanarStack(plate, plate, Vacuum(), C_LIGHT / w0)
T = 3e4
a = force_per_area(s, ThermalState(T)).pressure
b = force_per_area_real_axis(s, ThermalState(T)).pressure
print(f"\nT = {T:g} K: Matsubara {a:.6e} Pa, real axis {b:.6e} Pa")
