"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
written straight to the terminal even when output is captured.
"""

import math
import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import zeta

from vdwcasimir import (DipoleSystem, Drude, IdealMirror, Lorentz, OscillatorParams, PlanarStack,
                        SpectralPoint, ThermalState, Vacuum, bulk_spectral_energy_density,
                        dilute_force_per_area, force_per_area, force_per_area_real_axis,
                        free_energy_per_area, fresnel, gas_permittivity, kk_consistency_residual,
                        pair_energy, vdw_energy)
from vdwcasimir.constants import C_LIGHT, HBAR, K_B

W0 = 1.0e16
LENGTH0 = C_LIGHT / W0


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, elapsed, limit):
        ok = ok and elapsed < limit
        line = (f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'}  {detail}  "
                f"({elapsed:.1f} s, limit {limit:.0f} s)")
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def tau_temperature(tau, d):
    """Temperature at which 2 pi k_B T d/(hbar c) equals ``tau``."""
    return tau * HBAR * C_LIGHT / (2 * math.pi * K_B * d)


def test_1_ideal_mirror_pressure(report):
    d = 1e-6
    t0 = time.perf_counter()
    p = force_per_area(PlanarStack(IdealMirror(), IdealMirror(), Vacuum(), d)).pressure
    elapsed = time.perf_counter() - t0
    oracle = -math.pi ** 2 * HBAR * C_LIGHT / (240 * d ** 4)
    rel = abs(p / oracle - 1)
    ok = report(1, "ideal mirrors, 1 um", rel < 5e-3 and abs(p / -1.30e-3 - 1) < 5e-3,
                f"P = {p:.6e} Pa, oracle {oracle:.6e} Pa, rel {rel:.2e}", elapsed, 5)
    assert ok


def test_2_gradient_identity(report):
    gold = Drude(1.37e16 ** 2, 5.3e13)
    worst = 0.0
    t0 = time.perf_counter()
    for d in (1e-7, 3e-7, 1e-6, 3e-6):
        h = 1e-3 * d
        F = lambda x: free_energy_per_area(PlanarStack(gold, gold, Vacuum(), x))
        grad = -(F(d + h) - F(d - h)) / (2 * h)
        P = force_per_area(PlanarStack(gold, gold, Vacuum(), d)).pressure
        worst = max(worst, abs(grad / P - 1))
    elapsed = time.perf_counter() - t0
    ok = report(2, "-dF/dd = P, Drude plates", worst < 1e-3,
                f"max rel deviation {worst:.2e} over d = 0.1, 0.3, 1, 3 um", elapsed, 30)
    assert ok


def test_3_wick_rotation(report):
    plate = Lorentz(W0 ** 2, W0, 0.3 * W0)
    worst = 0.0
    t0 = time.perf_counter()
    for units in (0.3, 1.0, 3.0):
        s = PlanarStack(plate, plate, Vacuum(), units * LENGTH0)
        imag = force_per_area(s).pressure
        real = force_per_area_real_axis(s).pressure
        worst = max(worst, abs(real / imag - 1))
    elapsed = time.perf_counter() - t0
    ok = report(3, "real axis = imaginary axis", worst < 1e-2,
                f"max rel deviation {worst:.2e} at d = 0.3, 1, 3 c/omega_0", elapsed, 120)
    assert ok


def test_4_temperature_limits(report):
    plate = Lorentz(W0 ** 2, W0, 0.3 * W0)
    d = LENGTH0
    t0 = time.perf_counter()
    s = PlanarStack(plate, plate, Vacuum(), d)
    cold = force_per_area(s).pressure
    low = force_per_area(s, ThermalState(tau_temperature(0.02, d))).pressure
    rel_low = abs(low / cold - 1)
    dm = 1e-6
    T = tau_temperature(20.0, dm)
    hot = force_per_area(PlanarStack(IdealMirror(), IdealMirror(), Vacuum(), dm),
                         ThermalState(T)).pressure
    oracle = -zeta(3) * K_B * T / (8 * math.pi * dm ** 3)
    rel_hot = abs(hot / oracle - 1)
    elapsed = time.perf_counter() - t0
    ok = report(4, "tau = 0.02 and tau = 20 limits", rel_low < 1e-2 and rel_hot < 1e-2,
                f"tau=0.02 rel {rel_low:.2e}; tau=20 mirrors rel {rel_hot:.2e}", elapsed, 60)
    assert ok


def test_5_two_atom_limits(report):
    # omega_0 low enough that 0.01 c/omega_0 is many atomic radii
    osc = OscillatorParams(253.0, 1e14, 0.0)
    a0 = osc.coupling / osc.omega_0 ** 2
    lam = C_LIGHT / osc.omega_0
    t0 = time.perf_counter()
    R = 0.01 * lam
    near = vdw_energy(DipoleSystem(np.array([[0, 0, 0], [R, 0, 0]]), osc))
    london = -3 * HBAR * osc.omega_0 * a0 ** 2 / (4 * R ** 6)
    R = 100 * lam
    far = vdw_energy(DipoleSystem(np.array([[0, 0, 0], [0, 0, R]]), osc))
    cp = -23 * HBAR * C_LIGHT * a0 ** 2 / (4 * math.pi * R ** 7)
    elapsed = time.perf_counter() - t0
    rn, rf = abs(near / london - 1), abs(far / cp - 1)
    ok = report(5, "London and Casimir-Polder", rn < 1e-2 and rf < 2e-2,
                f"London rel {rn:.2e}; Casimir-Polder rel {rf:.2e}", elapsed, 30)
    assert ok


def _lattice_pressure(osc, d, a, layers, radius):
    """Pairwise force per area between two simple-cubic slabs of ``layers`` planes.

    Plane spacing and lateral spacing are ``a``; the first planes sit a/2
    outside the continuum boundaries 0 and d. Atoms of one slab interact with
    one column of the other inside a lateral disc of ``radius``.
    """
    K = int(radius / a) + 1
    ix = np.arange(-K, K + 1)
    n2 = (ix[:, None] ** 2 + ix[None, :] ** 2).ravel()
    n2, lateral = np.unique(n2[n2 * a * a <= radius * radius], return_counts=True)
    offsets = np.arange(2 * layers - 1)
    multiplicity = layers - np.abs(offsets - (layers - 1))

    def energy(gap):
        dz = gap + a + offsets * a
        R = np.sqrt(n2[:, None] * a * a + dz[None, :] ** 2)
        U = pair_energy(R.ravel(), osc).reshape(R.shape)
        return float(np.sum(lateral[:, None] * multiplicity[None, :] * U))

    def slope(h):
        return (energy(d + h) - energy(d - h)) / (2 * h)

    h = 1e-3 * d
    dE = (4 * slope(h) - slope(2 * h)) / 3
    atoms = int(lateral.sum()) * layers + layers
    return -dE / a ** 2, atoms


def test_6_discrete_continuum_bridge(report):
    osc = OscillatorParams(253.0, W0, 0.0)
    d = LENGTH0
    a, layers = d / 8, 24
    t0 = time.perf_counter()
    lattice, atoms = _lattice_pressure(osc, d, a, layers, 6 * d)
    gas = gas_permittivity(osc, 1 / a ** 3)
    thick = layers * a

    def half_spaces(x):
        return dilute_force_per_area(PlanarStack(gas, gas, Vacuum(), x)).pressure

    # slabs of finite thickness from half-space pressures (linear in eps - 1)
    continuum = half_spaces(d) - 2 * half_spaces(d + thick) + half_spaces(d + 2 * thick)
    elapsed = time.perf_counter() - t0
    rel = abs(lattice / continuum - 1)
    ok = report(6, "dipole lattice vs dilute Lifshitz", rel < 5e-2,
                f"lattice {lattice:.4e} Pa, continuum {continuum:.4e} Pa, rel {rel:.2e}, "
                f"{atoms} atoms", elapsed, 120)
    assert ok


def test_7_spectral_identities(report):
    model = Lorentz(W0 ** 2, W0, 0.3 * W0)
    omega = np.linspace(0.05, 3.0, 50) * W0
    t0 = time.perf_counter()
    closed = np.array([bulk_spectral_energy_density(model, w) for w in omega])
    green = np.array([bulk_spectral_energy_density(model, w, method="green") for w in omega])
    worst = float(np.max(np.abs(green - closed) / np.abs(closed)))
    vac = max(abs(bulk_spectral_energy_density(Vacuum(), w) / (HBAR * w / 2)
                  / (w ** 2 / (math.pi ** 2 * C_LIGHT ** 3)) - 1) for w in omega)
    elapsed = time.perf_counter() - t0
    ok = report(7, "spectral energy density paths", worst < 1e-9 and vac < 1e-14,
                f"max path deviation {worst:.2e}; vacuum mode density rel {vac:.1e}", elapsed, 5)
    assert ok


# ---------------------------------------------------------------- criterion 8

lorentz = st.builds(lambda s, w, g: Lorentz(s * W0 ** 2, w * W0, g * W0),
                    st.floats(0.05, 5.0), st.floats(0.2, 5.0), st.floats(0.01, 1.0))
distance = st.floats(0.3, 3.0).map(lambda u: u * LENGTH0)


@settings(max_examples=6, deadline=None)
@given(lorentz, distance)
def _identical_media_zero(m, d):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        assert force_per_area(PlanarStack(m, m, d=d, eps3=m)).pressure == 0.0


@settings(max_examples=6, deadline=None)
@given(lorentz, lorentz, distance)
def _swap_invariance(m1, m2, d):
    a = force_per_area(PlanarStack(m1, m2, Vacuum(), d)).pressure
    b = force_per_area(PlanarStack(m2, m1, Vacuum(), d)).pressure
    assert a == pytest.approx(b, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(lorentz, lorentz, st.floats(1e-3, 1e3), st.floats(0.0, 1e3), st.sampled_from(["te", "tm"]))
def _reflection_bounded(m1, m3, x, k, pol):
    d = LENGTH0
    point = SpectralPoint.imag(x * W0, k / d)
    r = fresnel(pol, 1, PlanarStack(m1, m1, m3, d), point)
    assert abs(r) <= 1.0 + 1e-12


@settings(max_examples=5, deadline=None)
@given(lorentz, distance)
def _monotone_in_distance(m, d):
    near = force_per_area(PlanarStack(m, m, Vacuum(), d)).pressure
    far = force_per_area(PlanarStack(m, m, Vacuum(), 1.3 * d)).pressure
    assert abs(far) < abs(near)


@settings(max_examples=40, deadline=None)
@given(lorentz)
def _eps_monotone(m):
    xi = np.geomspace(1e-3, 1e3, 200) * W0
    eps = m.eps_imag(xi)
    assert np.all(np.diff(eps) <= 0) and np.all(eps >= 1)


@settings(max_examples=10, deadline=None)
@given(lorentz)
def _kk_residual(m):
    xi = np.geomspace(1e-2, 1e2, 9) * W0
    assert kk_consistency_residual(m, xi) < 1e-6


def test_8_property_suite(report):
    checks = [("identical media", _identical_media_zero), ("1<->2 swap", _swap_invariance),
              ("|r| <= 1", _reflection_bounded), ("monotone |F|(d)", _monotone_in_distance),
              ("eps(i xi) monotone", _eps_monotone), ("KK residual", _kk_residual)]
    failed = []
    t0 = time.perf_counter()
    for name, check in checks:
        try:
            check()
        except Exception as exc:  # hypothesis re-raises the falsifying example
            failed.append(f"{name}: {type(exc).__name__}")
    elapsed = time.perf_counter() - t0
    detail = "all properties hold" if not failed else "; ".join(failed)
    ok = report(8, "symmetry and property suite", not failed, detail, elapsed, 60)
    assert ok
