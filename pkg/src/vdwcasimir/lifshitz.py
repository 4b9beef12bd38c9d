r"""Casimir pressure, free energy and energy densities of planar stacks.

All planar integrals run in variables scaled by the gap width ``d``:
``x = xi d / c`` for the frequency and ``t = 2 kappa_3 d`` for the normal wave
number in the gap. The reflection round trip is then
``q_p = r1_p r2_p exp(-t)`` and

.. math::
    P = -\frac{\hbar c}{2\pi^2 d^4}\int_0^\infty dx \sum_p
        \int_{t_0}^\infty \frac{t^2}{8}\,\frac{q_p}{1-q_p}\,dt,
    \qquad t_0 = 2\sqrt{\epsilon_3}\,x,

at zero temperature. At temperature ``T`` the ``x`` integral becomes
``(2 pi k_B T d / hbar c) * sum'`` over Matsubara points ``x_n = n tau``
with ``tau = 2 pi k_B T d/(hbar c)``; the primed sum halves ``n = 0``.

Sign convention: negative pressure means the plates attract.
"""

import math
import warnings
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from .constants import C_LIGHT, HBAR as hbar, K_B

from .dielectric import PermittivityModel, Vacuum
from .errors import ConvergenceError, DomainError, UnsupportedAxisError
from .green import (EXP_WINDOW, IMAG, PlanarStack, _coefficients, _media,
                    homogeneous_green_trace, scaled_weighted_trace_imag, _region)
from .quadrature import (DEFAULT_SPEC, gauss_kronrod, integrate_exp_tail,
                         integrate_half_line)

POLS = ("te", "tm")

# ratio between successive mirror scales in the extrapolation
MIRROR_FACTOR = 4.0


@dataclass(frozen=True)
class ThermalState:
    """Temperature [K]; ``T = 0`` selects frequency integrals, ``T > 0`` Matsubara sums."""

    T: float = 0.0

    def __post_init__(self):
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise DomainError("temperature must be finite and >= 0")

    @property
    def zero(self):
        return self.T == 0

    def tau(self, d):
        """Scaled Matsubara spacing ``2 pi k_B T d / (hbar c)``."""
        return 2 * math.pi * K_B * self.T * d / (hbar * C_LIGHT)


@dataclass(frozen=True)
class ForceResult:
    """Pressure [Pa] with its polarization parts and error estimate.

    ``n0_term`` is the (half-weighted) zero-frequency Matsubara contribution,
    0 at ``T = 0``. ``pressure == te + tm``.
    """

    d: float
    T: float
    pressure: float
    te: float
    tm: float
    n0_term: float
    err_estimate: float

    def to_dict(self):
        return asdict(self)


class MatsubaraFrequencies(NamedTuple):
    xi: np.ndarray
    weight: np.ndarray


def matsubara_frequencies(T, n_max):
    r"""Matsubara frequencies :math:`\xi_n = 2\pi n k_B T/\hbar` [rad/s], n = 0..n_max.

    Returned with their weights (1/2 for ``n = 0``, 1 otherwise).
    """
    if not T > 0:
        raise DomainError("Matsubara frequencies need T > 0")
    if n_max < 0 or int(n_max) != n_max:
        raise DomainError("n_max must be a non-negative integer")
    n = np.arange(int(n_max) + 1)
    xi = 2 * math.pi * K_B * T / hbar * n
    w = np.ones(n.size)
    w[0] = 0.5
    return MatsubaraFrequencies(xi, w)


# ---------------------------------------------------------------- kernels

def _round_trip(stack, x):
    """Closure over ``t`` returning (q_te, q_tm) and the lower limit t0."""
    media = _media(stack, IMAG, x)
    mu3 = -media.epsw2[2].real
    t0 = 2.0 * math.sqrt(max(mu3, 0.0))

    def q(t):
        k2 = np.maximum(0.25 * t * t - mu3, 0.0)
        _, r1, r2, _, _ = _coefficients(media, k2)
        e = np.exp(-t)
        return np.stack([(r1[p] * r2[p]).real * e for p in POLS], axis=-1)

    return q, t0, media


def _pressure_kernel(stack, x, spec):
    """Scaled inner integral per polarization; pressure = -hbar c/(2 pi^2 d^4) * outer."""
    q, t0, _ = _round_trip(stack, x)

    def f(t):
        qq = q(t)
        return (t * t / 8.0)[:, None] * qq / (1.0 - qq)

    return integrate_exp_tail(f, t0, spec, length=EXP_WINDOW)


def _free_kernel(stack, x, spec):
    q, t0, _ = _round_trip(stack, x)

    def f(t):
        return (t / 4.0)[:, None] * np.log1p(-q(t))

    return integrate_exp_tail(f, t0, spec, length=EXP_WINDOW)


def _dilute_kernel(stack, x, spec):
    media = _media(stack, IMAG, x)
    x2 = x * x
    deltas = []
    for j in (0, 1):
        delta = (media.chiw2[j] / media.w2).real if media.w2 != 0 else media.eps[j].real - 1.0
        if not math.isfinite(delta):
            raise DomainError("dilute limit needs finite eps - 1")
        deltas.append(delta)

    def f(t):
        kap2 = 0.25 * t * t
        out = []
        r_te = [-dl * x2 / (4 * kap2) for dl in deltas]
        r_tm = [dl / 2 - dl * x2 / (4 * kap2) for dl in deltas]
        e = np.exp(-t)
        w = t * t / 8.0
        return np.stack([w * r_te[0] * r_te[1] * e, w * r_tm[0] * r_tm[1] * e], axis=-1)

    return integrate_exp_tail(f, 2.0 * x, spec, length=EXP_WINDOW)


def _x_points(stack):
    """Resonances and kinks of all media in scaled frequency, plus the mirror scale."""
    pts = set()
    for m in (stack.eps1, stack.eps2, stack.eps3):
        for w in m.breakpoints:
            pts.add(w * stack.d / C_LIGHT)
        if hasattr(m, "scale"):
            pts.add(1.0 / math.sqrt(m.scale))
    return sorted(p for p in pts if p > 0)


def _frequency_integral(stack, kernel, spec):
    """Scaled T = 0 integral over x of a vector-valued kernel."""
    def outer(xs):
        return np.array([kernel(stack, float(x), spec).value for x in xs])
    res = integrate_half_line(outer, 0.0, 1.0, spec, points=_x_points(stack))
    return np.asarray(res.value, dtype=float), res.error


def _geometric_tail(history):
    """Tail sum and error from the last three terms of one component."""
    a, b, cc = history[-3:]
    if b == 0 or cc == 0:
        return 0.0, abs(cc)
    r1, r2 = b / a if a != 0 else math.inf, cc / b
    if 0 < r2 < 1 and 0 < r1 < 1 and abs(r2 - r1) <= 0.5 * r1:
        tail = cc * r2 / (1.0 - r2)
        return tail, abs(tail)
    return 0.0, abs(cc)


def _matsubara_sum(stack, thermal, kernel, spec):
    """Scaled primed sum over x_n = n tau. Returns (total vector, n0 vector, error)."""
    tau = thermal.tau(stack.d)
    terms = []
    partial = np.zeros(2)
    n = 0
    while True:
        w = 0.5 if n == 0 else 1.0
        term = w * np.asarray(kernel(stack, n * tau, spec).value, dtype=float)
        terms.append(term)
        partial = partial + term
        n += 1
        tot = float(np.abs(partial).sum())
        if n >= 3 and (tot == 0 or np.abs(term).sum() <= spec.matsubara_rel_tail * tot):
            break
        if n >= spec.max_matsubara_terms:
            raise ConvergenceError(
                f"Matsubara sum not converged after {n} terms; use T = 0 "
                "or raise max_matsubara_terms", value=partial, error=float(np.abs(term).sum()))
    arr = np.array(terms)
    total = np.array([math.fsum(arr[:, i]) for i in range(2)])
    err = 0.0
    for i in range(2):
        tail, e = _geometric_tail(list(arr[:, i]))
        total[i] += tail
        err += e
    return total, arr[0], err


def richardson_mirror(evaluate, stack):
    """Extrapolate a planar quantity to perfectly reflecting mirrors.

    ``evaluate(stack)`` must return a tuple of floats whose last entry is an
    error estimate. A finite-``scale`` mirror biases results by
    ``(A + B ln s) / sqrt(s)``; the log comes from the band ``xi d/c < s**-0.5``
    where the te reflection of the mirror falls from -1 to 0. The quantity is
    evaluated at ``s``, ``4 s`` and ``16 s`` and ``A``, ``B`` and the limit
    are solved for. The next correction is of order ``1/s``, which is folded
    into the error.
    """
    if not stack.has_mirror:
        return evaluate(stack)
    levels = [1.0, MIRROR_FACTOR, MIRROR_FACTOR ** 2]
    runs = [evaluate(stack.mirror_scaled(f) if f != 1.0 else stack) for f in levels]
    scale = max(getattr(m, "scale", 0.0) for m in (stack.eps1, stack.eps2, stack.eps3))
    sc = np.array([scale * f for f in levels])
    u = sc ** -0.5
    A = np.column_stack([np.ones(3), u, u * np.log(sc)])
    values = []
    for i in range(len(runs[0]) - 1):
        q = np.array([r[i] for r in runs])
        values.append(float(np.linalg.solve(A, q)[0]))
    err = sum(r[-1] for r in runs) + 10.0 * max(abs(v) for v in values) / scale
    return (*values, err)


def _check_imag(stack):
    for m in (stack.eps1, stack.eps2, stack.eps3):
        if not isinstance(m, PermittivityModel):
            raise DomainError("stack media must be PermittivityModel instances")


def _degenerate(stack, thermal, quantity):
    if stack.degenerate:
        warnings.warn(f"all media are identical; {quantity} is exactly 0", RuntimeWarning,
                      stacklevel=3)
        return True
    return False


# ---------------------------------------------------------------- pressure / energy

def _pressure_parts(stack, thermal, spec):
    if thermal.zero:
        vec, err = _frequency_integral(stack, _pressure_kernel, spec)
        pref = -hbar * C_LIGHT / (2 * math.pi ** 2 * stack.d ** 4)
        n0 = 0.0
    else:
        vec, n0v, err = _matsubara_sum(stack, thermal, _pressure_kernel, spec)
        pref = -K_B * thermal.T / (math.pi * stack.d ** 3)
        n0 = pref * float(n0v.sum())
    te, tm = pref * vec
    return te, tm, n0, abs(pref) * err


def force_per_area(stack, thermal=ThermalState(), spec=DEFAULT_SPEC):
    r"""Lifshitz pressure between half-spaces 1 and 2 across the gap [Pa].

    .. math:: P = -\frac{k_BT}{\pi}{\sum_n}'\int_0^\infty k\,dk\,\tilde\kappa_3
              \sum_p\frac{r_1^p r_2^p e^{-2\tilde\kappa_3 d}}
              {1 - r_1^p r_2^p e^{-2\tilde\kappa_3 d}}

    and its ``T = 0`` integral form. Returns a :class:`ForceResult`; identical
    media give exactly 0 with a warning.
    """
    _check_imag(stack)
    if _degenerate(stack, thermal, "the pressure"):
        return ForceResult(stack.d, thermal.T, 0.0, 0.0, 0.0, 0.0, 0.0)
    te, tm, n0, err = richardson_mirror(lambda s: _pressure_parts(s, thermal, spec), stack)
    return ForceResult(stack.d, thermal.T, te + tm, te, tm, n0, err)


def _free_parts(stack, thermal, spec):
    if thermal.zero:
        vec, err = _frequency_integral(stack, _free_kernel, spec)
        pref = hbar * C_LIGHT / (4 * math.pi ** 2 * stack.d ** 3)
    else:
        vec, _, err = _matsubara_sum(stack, thermal, _free_kernel, spec)
        pref = K_B * thermal.T / (2 * math.pi * stack.d ** 2)
    return float(pref * vec.sum()), abs(pref) * err


def free_energy_per_area(stack, thermal=ThermalState(), spec=DEFAULT_SPEC,
                         return_error=False):
    r"""Interaction free energy per area [J/m^2] from the trace-log formula.

    .. math:: \mathcal F = \frac{k_BT}{2\pi}{\sum_n}'\int_0^\infty k\,dk
              \sum_p\ln\big(1 - r_1^p r_2^p e^{-2\tilde\kappa_3 d}\big)

    Its derivative ``-dF/dd`` is the pressure of :func:`force_per_area`.
    """
    _check_imag(stack)
    if _degenerate(stack, thermal, "the free energy"):
        return (0.0, 0.0) if return_error else 0.0
    value, err = richardson_mirror(lambda s: _free_parts(s, thermal, spec), stack)
    return (value, err) if return_error else value


def dilute_force_per_area(stack, thermal=ThermalState(), spec=DEFAULT_SPEC):
    r"""Pressure with the integrand linearized in ``eps_j - 1`` for both plates.

    Needs a vacuum gap. To this order the Fresnel coefficients are
    :math:`r^{te} \approx -\delta\xi^2/(4c^2\tilde\kappa^2)` and
    :math:`r^{tm} \approx \delta/2 - \delta\xi^2/(4c^2\tilde\kappa^2)`,
    and the multiple-reflection denominator is dropped. The result equals the
    pairwise sum of retarded two-atom interactions over both half-spaces.
    """
    if stack.eps3 != Vacuum():
        raise DomainError("the dilute expansion needs a vacuum gap")
    if thermal.zero:
        vec, err = _frequency_integral(stack, _dilute_kernel, spec)
        pref = -hbar * C_LIGHT / (2 * math.pi ** 2 * stack.d ** 4)
        n0 = 0.0
    else:
        vec, n0v, err = _matsubara_sum(stack, thermal, _dilute_kernel, spec)
        pref = -K_B * thermal.T / (math.pi * stack.d ** 3)
        n0 = pref * float(n0v.sum())
    te, tm = pref * vec
    return ForceResult(stack.d, thermal.T, te + tm, te, tm, n0, abs(pref) * err)


# ---------------------------------------------------------------- real axis

def _coth_weight(w, tau):
    """coth(pi w / tau), with 1 at T = 0 and the small-argument expansion near 0."""
    if tau == 0:
        return np.ones_like(w)
    a = math.pi * np.asarray(w) / tau
    small = a < 1e-6
    safe = np.where(small, 1.0, a)
    return np.where(small, 1.0 / np.where(small, a, 1.0) + a / 3.0, 1.0 / np.tanh(safe))


def _ratio(num, den):
    # at w -> 0 and grazing k, D rounds to exactly 0 while num -> 0 faster
    return np.divide(num, den, out=np.zeros(np.broadcast(num, den).shape, complex),
                     where=den != 0)


def _real_axis_inner(stack, w, spec):
    """Scaled k integral of kappa_3 * r1 r2 e^{2 i kappa_3}/D per polarization, at real w."""
    media = _media(stack, "real", w)
    eps3 = media.eps[2]
    if abs(eps3.imag) > 0:
        raise DomainError("the real-axis path needs a lossless gap medium")
    n3 = math.sqrt(eps3.real)
    kmax = n3 * w

    def prop(kap):
        # k dk = -kappa dkappa; limits flipped
        k2 = kmax * kmax - kap * kap
        _, r1, r2, ph, D = _coefficients(media, k2)
        return np.stack([_ratio(kap * kap * r1[p] * r2[p] * ph, D[p]) for p in POLS], axis=-1)

    def evan(q):
        k2 = kmax * kmax + q * q
        _, r1, r2, ph, D = _coefficients(media, k2)
        return np.stack([_ratio(q * (1j * q) * r1[p] * r2[p] * ph, D[p]) for p in POLS], axis=-1)

    # Re kappa_j^2 changes sign at these kappa_3^2: critical angles, smoothed only by loss
    edges = [-(media.chiw2[j] - media.chiw2[2]).real for j in (0, 1)]
    a = gauss_kronrod(prop, 0.0, kmax, spec, strict=False,
                      points=[math.sqrt(e) for e in edges if e > 0])
    b = integrate_exp_tail(evan, 0.0, spec, length=0.5 * EXP_WINDOW, strict=False,
                           points=[math.sqrt(-e) for e in edges if e < 0])
    return np.asarray(a.value) + np.asarray(b.value), a.error + b.error


REAL_AXIS_CUTOFF = 100.0


def _oscillator_scale(stack):
    """Largest oscillator frequency of the stack in units of c/d (at least 1)."""
    scale = 0.0
    for m in (stack.eps1, stack.eps2, stack.eps3):
        for o in getattr(m, "oscillators", ()):
            scale = max(scale, math.sqrt(o.coupling), o.omega_0, o.gamma)
    return max(scale * stack.d / C_LIGHT, 1.0)


def force_per_area_real_axis(stack, thermal=ThermalState(), spec=DEFAULT_SPEC, w_max=None):
    r"""Validation path: the pressure integrated along real frequencies.

    .. math:: P = \frac{\hbar}{2\pi^2}\,\mathrm{Re}\int_0^\infty d\omega
              \coth\frac{\hbar\omega}{2k_BT}\int_0^\infty k\,dk\,\kappa_3
              \sum_p\frac{r_1^p r_2^p e^{2i\kappa_3 d}}{1 - r_1^p r_2^p e^{2i\kappa_3 d}}

    The transverse integral is split into propagating (``kappa_3`` real) and
    evanescent (``kappa_3 = i q``) sectors; the frequency integral is split
    at every oscillator resonance and truncated at ``w_max`` (units of c/d).
    The default cutoff is 100 times the largest oscillator frequency scale
    (resonance, plasma frequency or damping); the truncated tail falls off
    like ``(eps - 1)^2``. Far above the resonances the gap guides almost
    lossless modes whose poles sit next to the real axis, so pushing the
    cutoff much further only buys cost. Needs at least one damped medium and
    a lossless gap.
    """
    media = (stack.eps1, stack.eps2, stack.eps3)
    for m in media:
        try:
            m.eps_real(1.0)
        except UnsupportedAxisError as exc:
            raise UnsupportedAxisError("real-axis path needs models defined on the real axis") \
                from exc
    if _degenerate(stack, thermal, "the pressure"):
        return ForceResult(stack.d, thermal.T, 0.0, 0.0, 0.0, 0.0, 0.0)
    if all(m.lossless for m in media):
        raise DomainError("the real-axis integrand needs damping in at least one medium")
    tau = thermal.tau(stack.d)
    if w_max is None:
        w_max = REAL_AXIS_CUTOFF * _oscillator_scale(stack)
    inner_spec = spec.replace(rel_tol=max(spec.rel_tol, 1e-8))

    def outer(ws):
        vals = []
        for w in ws:
            v, _ = _real_axis_inner(stack, float(w), inner_spec)
            vals.append(np.real(v) * _coth_weight(float(w), tau))
        return np.array(vals)

    pts = set(_x_points(stack))
    # oscillation period of exp(2 i w) is pi
    pts.update(np.arange(math.pi, w_max, math.pi))
    for m in media:
        for osc_w, g in zip(getattr(m, "_w0", ()), getattr(m, "_g", ())):
            for off in (-2 * g, 2 * g):
                pts.add((osc_w + off) * stack.d / C_LIGHT)
    pts = sorted(p for p in pts if 0 < p < w_max)
    outer_spec = spec.replace(rel_tol=max(spec.rel_tol, 1e-6),
                              max_panel_depth=min(spec.max_panel_depth, 16))
    res = gauss_kronrod(outer, 0.0, w_max, outer_spec, points=pts, strict=False)
    pref = hbar * C_LIGHT / (2 * math.pi ** 2 * stack.d ** 4)
    te, tm = pref * np.asarray(res.value)
    tail = abs(pref) * float(np.abs(outer(np.array([w_max]))).sum())
    return ForceResult(stack.d, thermal.T, te + tm, te, tm, 0.0, abs(pref) * res.error + tail)


# ---------------------------------------------------------------- interface forces

@dataclass(frozen=True)
class InterfaceForces:
    """Per-interface pressure contributions [Pa].

    ``lower`` and ``upper`` are the shares carried by the interfaces at 0 and
    ``d``; ``total = lower + upper`` reproduces the Lifshitz pressure.
    ``on_plate1`` and ``on_plate2`` are the full forces per area on each
    half-space along +z (equal and opposite).
    """

    lower: float
    upper: float
    total: float
    on_plate1: float
    on_plate2: float
    err_estimate: float


def _jump_kernel(stack, x, spec):
    r"""Scaled :math:`x^2\Delta\epsilon\,[\hat G_t + (\epsilon_3/\epsilon_j)\hat G_n]`
    on the gap side of the interfaces at 0 and d, isolated-interface terms removed."""
    media = _media(stack, IMAG, x)
    e1, e2, e3 = (m.real for m in media.eps)
    if math.isinf(e1) or math.isinf(e2):
        # (eps - eps3) G_t is an inf * 0 form here; per transverse wave number the
        # jump equals -4 times the Lifshitz integrand on the upper interface
        lif = float(np.sum(_pressure_kernel(stack, x, spec).value))
        return _Vec(np.array([4.0 * lif, -4.0 * lif]))
    out = []
    for side, zs, ej in (("0+", 0.0, e1), ("d-", 1.0, e2)):
        region = _region(stack, zs * stack.d, side)
        drop = "lower" if side == "0+" else "upper"
        _, tan, nrm, _ = scaled_weighted_trace_imag(stack, region, zs, x, spec, drop)
        # weighted traces carry x^2 eps3 G
        jump = (e3 - ej) if side == "0+" else (ej - e3)
        out.append(jump * tan / e3 + jump * nrm / ej)
    return _Vec(np.array(out))


class _Vec(NamedTuple):
    value: np.ndarray


def _jump_parts(stack, thermal, spec):
    if thermal.zero:
        vec, err = _frequency_integral(stack, _jump_kernel, spec)
        pref = hbar * C_LIGHT / (8 * math.pi ** 2 * stack.d ** 4)
    else:
        vec, _, err = _matsubara_sum(stack, thermal, _jump_kernel, spec)
        pref = K_B * thermal.T / (4 * math.pi * stack.d ** 3)
    f1, f2 = pref * vec
    return f1, f2, abs(pref) * err


def surface_force_jumps(stack, thermal=ThermalState(), spec=DEFAULT_SPEC):
    r"""Decompose the pressure into contributions of the two interfaces.

    The force density :math:`-\tfrac18\pi^{-1}E^2\nabla\epsilon` is concentrated
    on the interfaces. The force per area on the half-space beyond ``z = d``
    is

    .. math:: f_2 = \frac{\hbar}{8\pi^2c^2}\int_0^\infty d\xi\,\xi^2
              (\epsilon_2-\epsilon_3)\Big[G_t(d^-) + \frac{\epsilon_3}{\epsilon_2}
              G_n(d^-)\Big],

    using only gap-side traces (tangential ``E`` and normal ``D`` are
    continuous), and analogously for the interface at 0. Terms of an
    isolated interface do not depend on ``d`` and are dropped. Each
    interface is credited with half of the relative force between the plates.
    """
    _check_imag(stack)
    if _degenerate(stack, thermal, "each interface force"):
        return InterfaceForces(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    f1, f2, err = richardson_mirror(lambda s: _jump_parts(s, thermal, spec), stack)
    lower, upper = -0.5 * f1, 0.5 * f2
    return InterfaceForces(lower, upper, lower + upper, f1, f2, err)


# ---------------------------------------------------------------- energy density

def _profile_kernel(stack, region, zs):
    def kernel(_stack, x, spec):
        if x == 0:
            return _Vec(np.zeros(2))
        total, _, _, _ = scaled_weighted_trace_imag(_stack, region, zs, x, spec)
        model = (_stack.eps1, _stack.eps2, _stack.eps3)[region - 1]
        xi = x * C_LIGHT / _stack.d
        eps = float(model.eps_imag(xi))
        disp = 2.0 * eps + xi * float(model.deps_imag(xi))
        # total = x^2 eps G (scaled); split into halves to reuse the 2-vector machinery
        val = disp * total / eps
        return _Vec(np.array([val, 0.0]))
    return kernel


def energy_density_profile(stack, z, thermal=ThermalState(), spec=DEFAULT_SPEC, side=None,
                           return_error=False):
    r"""Scattering part of the zero-point (and thermal) energy density [J/m^3].

    .. math:: u(z) = -\frac{\hbar}{8\pi^2c^2}\int_0^\infty d\xi\,\xi^2
              \big[2\epsilon(i\xi) + \xi\epsilon'(i\xi)\big]\,G_{ii}(z, z; i\xi)

    with ``(hbar/2pi) * integral`` replaced by ``k_B T sum'`` at ``T > 0``.
    ``z`` must lie strictly inside a region. With ``return_error`` a
    ``(value, error)`` pair is returned.
    """
    if side is not None:
        raise DomainError("the energy density diverges on an interface; pick z inside a region")
    region = _region(stack, z, None)
    zs = z / stack.d
    if _degenerate(stack, thermal, "the energy density"):
        return (0.0, 0.0) if return_error else 0.0
    kernel = _profile_kernel(stack, region, zs)

    def evaluate(s):
        if thermal.zero:
            vec, err = _frequency_integral(s, kernel, spec)
            pref = -hbar * C_LIGHT / (8 * math.pi ** 2 * s.d ** 4)
        else:
            vec, _, err = _matsubara_sum(s, thermal, kernel, spec)
            pref = -K_B * thermal.T / (4 * math.pi * s.d ** 3)
        return float(pref * vec[0]), abs(pref) * err

    value, err = richardson_mirror(evaluate, stack)
    return (value, err) if return_error else value


# ---------------------------------------------------------------- bulk spectra

def _complex_eps(model, omega):
    if isinstance(model, PermittivityModel):
        return complex(model.eps_real(omega)), complex(model.deps_real(omega))
    return complex(model), 0j


def _check_omega(omega):
    if not omega > 0:
        raise DomainError("omega must be positive")


def _index(eps):
    n = complex(np.sqrt(complex(eps)))
    return -n if n.real < 0 else n


def bulk_spectral_energy_density(model, omega, method="closed"):
    r"""Zero-point spectral energy density of a homogeneous medium [J s/m^3].

    ``method="closed"``:
    :math:`\frac{\hbar}{2\pi^2c^3}\,\omega^3 n_R^2\,\frac{d(\omega n_R)}{d\omega}`.

    ``method="green"``: the field part ``u`` plus the noise part ``u_N``
    built from :func:`homogeneous_green_trace`,

    .. math:: \frac{\hbar}{8\pi^2c^2}\omega^2\Big[(2\epsilon+\omega\epsilon')_R\,
              \mathrm{Im\,Tr}\bar G + (2\epsilon+\omega\epsilon')_I\,
              \mathrm{Re\,Tr}\bar G + \epsilon_I\,\mathrm{Re\,Tr}\bar G\Big],

    plus the total derivative
    :math:`-\frac{\hbar}{2\pi^2c^3}\frac{d}{d\omega}[\omega^4 n_R n_I^2]`,
    which integrates to zero over frequency and is the only pointwise
    difference between the two forms. Both agree for absorbing media and
    coincide term by term for lossless ones. A complex number may be passed
    instead of a model (treated as dispersionless).
    """
    _check_omega(omega)
    eps, deps = _complex_eps(model, omega)
    n = _index(eps)
    # d n / d omega from d eps / d omega
    dn = deps / (2 * n)
    pref = hbar / (2 * math.pi ** 2 * C_LIGHT ** 3)
    if method == "closed":
        return pref * omega ** 3 * n.real ** 2 * (n.real + omega * dn.real)
    if method != "green":
        raise DomainError("method must be 'closed' or 'green'")
    trace = homogeneous_green_trace(eps, omega)
    disp = 2 * eps + omega * deps
    base = hbar * omega ** 2 / (8 * math.pi ** 2 * C_LIGHT ** 2)
    u = base * (disp.real * trace.imag + disp.imag * trace.real)
    u_noise = base * eps.imag * trace.real
    boundary = -pref * (4 * omega ** 3 * n.real * n.imag ** 2
                        + omega ** 4 * (dn.real * n.imag ** 2 + 2 * n.real * n.imag * dn.imag))
    return u + u_noise - boundary


def noise_energy_spectral_density(model, omega, thermal=ThermalState()):
    r"""Noise-polarization contribution :math:`\frac{\hbar\omega^2}{8\pi^2c^2}\epsilon_I\,
    \mathrm{Re\,Tr}\bar G` [J s/m^3], times ``coth(hbar omega/2 k_B T)`` at ``T > 0``.

    ``Re Tr G = -2 n_I omega/c``, so the result is non-positive and vanishes
    for lossless media.
    """
    _check_omega(omega)
    eps, _ = _complex_eps(model, omega)
    trace = homogeneous_green_trace(eps, omega)
    val = hbar * omega ** 2 / (8 * math.pi ** 2 * C_LIGHT ** 2) * eps.imag * trace.real
    if not thermal.zero:
        val /= math.tanh(hbar * omega / (2 * K_B * thermal.T))
    return val


def absorption_rate_spectral_density(model, omega):
    r"""Absorbed power spectrum :math:`\frac{\hbar\omega^3}{4\pi^2c^2}\epsilon_I\,
    \mathrm{Im\,Tr}\bar G` [J/m^3].

    ``Im Tr G = 2 n_R omega/c`` makes it non-negative, zero iff ``eps_I = 0``.
    Over a time ``t`` this absorbed energy, linear in ``t``, is exactly the
    loss of field energy flowing into the medium, so the two cancel in the
    energy balance and the stationary energy density carries no such term.
    """
    _check_omega(omega)
    eps, _ = _complex_eps(model, omega)
    trace = homogeneous_green_trace(eps, omega)
    return hbar * omega ** 3 / (4 * math.pi ** 2 * C_LIGHT ** 2) * eps.imag * trace.imag


def local_dos(model, nu):
    r"""Literal local density of states
    :math:`\rho(\nu) = \frac{\nu}{4\pi^2c^2}\{\frac{d}{d\nu}[\nu\epsilon(i\nu)] + \epsilon(i\nu)\}`.

    Note: in vacuum this gives ``nu/(2 pi^2 c^2)``, which is neither
    dimensionally nor numerically the vacuum mode density ``nu^2/(pi^2 c^3)``;
    the expression appears to lack a Green-function factor. It is evaluated
    exactly as written, without correction.
    """
    if not nu > 0:
        raise DomainError("nu must be positive")
    eps = float(model.eps_imag(nu))
    deps = float(model.deps_imag(nu))
    return nu / (4 * math.pi ** 2 * C_LIGHT ** 2) * (2 * eps + nu * deps)
