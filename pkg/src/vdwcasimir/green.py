r"""Dyadic Green functions: homogeneous closed forms and the three-layer stack.

Conventions (Gaussian): the Green dyadic solves
:math:`\nabla\times\nabla\times G - (\omega^2/c^2)\epsilon G = 4\pi\delta`, so
:math:`G` has units 1/length. Planar quantities are evaluated internally in
variables scaled by the gap width ``d``: lengths in ``d``, frequencies in
``c/d``. Wave numbers ``kappa`` follow the retarded branch ``Im kappa >= 0``;
on the imaginary axis ``kappa = i*kappa_tilde`` with real positive
``kappa_tilde``.

Only scattering (bulk-subtracted) coincidence traces are exposed. The
contact term and the 1/R^3 singularity of the homogeneous dyadic never
enter any result.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from .constants import C_LIGHT

from .dielectric import IdealMirror, PermittivityModel, Vacuum
from .errors import (CoincidenceError, ConvergenceError, DegenerateDenominatorError,
                     DomainError)
from .quadrature import DEFAULT_SPEC, gauss_kronrod, integrate_exp_tail, integrate_half_line

REAL = "real"
IMAG = "imag"

# exp(-2 kappa d) is negligible past this many decay lengths
EXP_WINDOW = 80.0


@dataclass(frozen=True)
class SpectralPoint:
    """A frequency on the real (``omega``) or imaginary (``xi``) axis [rad/s],
    optionally with a transverse wave number ``k_par`` [rad/m]."""

    axis: str
    value: float
    k_par: Optional[float] = None

    def __post_init__(self):
        if self.axis not in (REAL, IMAG):
            raise DomainError("axis must be 'real' or 'imag'")
        if self.value < 0 or (self.axis == REAL and self.value == 0):
            raise DomainError("frequency must be positive")
        if self.k_par is not None and self.k_par < 0:
            raise DomainError("k_par must be >= 0")

    @classmethod
    def real(cls, omega, k_par=None):
        return cls(REAL, float(omega), k_par)

    @classmethod
    def imag(cls, xi, k_par=None):
        return cls(IMAG, float(xi), k_par)


@dataclass(frozen=True)
class PlanarStack:
    """Half-space 1 (z <= 0) | gap medium 3 of width d [m] | half-space 2 (z >= d)."""

    eps1: PermittivityModel
    eps2: PermittivityModel
    eps3: PermittivityModel
    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError("gap width d must be positive")

    def with_d(self, d):
        return PlanarStack(self.eps1, self.eps2, self.eps3, d)

    def swapped(self):
        return PlanarStack(self.eps2, self.eps1, self.eps3, self.d)

    @property
    def degenerate(self):
        return self.eps1 == self.eps3 and self.eps2 == self.eps3

    @property
    def has_mirror(self):
        return any(isinstance(m, IdealMirror) for m in (self.eps1, self.eps2, self.eps3))

    def mirror_scaled(self, factor):
        def sc(m):
            return m.scaled(factor) if isinstance(m, IdealMirror) else m
        return PlanarStack(sc(self.eps1), sc(self.eps2), sc(self.eps3), self.d)


@dataclass(frozen=True)
class GreenTrace:
    """Coincidence trace Tr G [1/m]."""

    value: complex

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag


# ---------------------------------------------------------------- kernels

def branch_sqrt(z):
    """sqrt with Im >= 0, and Re >= 0 whenever Im == 0."""
    s = np.sqrt(np.asarray(z, dtype=complex))
    flip = (s.imag < 0) | ((s.imag == 0) & (s.real < 0))
    return np.where(flip, -s, s)


@dataclass
class _Media:
    """eps, eps*omega^2 and (eps - 1)*omega^2 of the three media at one scaled frequency.

    ``chiw2`` carries the susceptibility part of ``epsw2`` so that differences
    of wave numbers between nearly identical media are free of cancellation.
    """

    eps: tuple
    epsw2: tuple
    chiw2: tuple
    w2: complex  # omega^2 in scaled units: x^2 on the real axis, -x^2 on the imaginary one


def _media(stack, axis, x):
    """Evaluate the three media at scaled frequency ``x`` (units c/d)."""
    scale = C_LIGHT / stack.d
    eps, epsw2, chiw2 = [], [], []
    for m in (stack.eps1, stack.eps2, stack.eps3):
        if axis == IMAG:
            xi = x * scale
            eps.append(complex(m.eps_imag(xi)))
            epsw2.append(complex(-m.eps_xi2(xi) / scale ** 2))
            chiw2.append(complex(-m.chi_xi2(xi) / scale ** 2))
        else:
            chi = complex(m.chi_real(x * scale))
            eps.append(1.0 + chi)
            epsw2.append((1.0 + chi) * x * x)
            chiw2.append(chi * x * x)
    w2 = complex(-x * x if axis == IMAG else x * x)
    return _Media(tuple(eps), tuple(epsw2), tuple(chiw2), w2)


def _kappas(media, k2):
    return tuple(branch_sqrt(ew2 - k2) for ew2 in media.epsw2)


def _dkappa(media, kap, j):
    """``kappa_3 - kappa_j`` as ``(kappa_3^2 - kappa_j^2) / (kappa_3 + kappa_j)``."""
    kj, k3 = kap[j - 1], kap[2]
    s = k3 + kj
    with np.errstate(invalid="ignore", divide="ignore"):
        dk = (media.chiw2[2] - media.chiw2[j - 1]) / s
    return np.where(s == 0, 0.0, dk)


def _r_te(media, kap, j):
    kj, k3 = kap[j - 1], kap[2]
    s = k3 + kj
    with np.errstate(invalid="ignore", divide="ignore"):
        r = _dkappa(media, kap, j) / s
    return np.where(s == 0, 0.0, r)


def _r_tm(media, kap, j):
    kj, k3 = kap[j - 1], kap[2]
    ej, e3 = media.eps[j - 1], media.eps[2]
    if not np.isfinite(ej):
        num, den = k3, k3
    elif not np.isfinite(e3):
        num, den = -kj, kj
    else:
        # eps_j k3 - eps3 kj = eps_j (k3 - kj) + (eps_j - eps_3) kj, normalized by the larger eps
        dk = _dkappa(media, kap, j)
        dchi = _dchi(media, j)
        big = ej if abs(ej) >= abs(e3) else e3
        num = (ej / big) * dk + (dchi / big) * kj
        den = (ej / big) * k3 + (e3 / big) * kj
    with np.errstate(invalid="ignore", divide="ignore"):
        r = num / den
    return np.where(den == 0, 0.0, r)


def _dchi(media, j):
    """``eps_j - eps_3`` from the susceptibility parts."""
    ej, e3 = media.eps[j - 1], media.eps[2]
    if media.w2 != 0:
        return (media.chiw2[j - 1] - media.chiw2[2]) / media.w2
    return ej - e3


def _one_pm_r(media, kap, j):
    """Exact ``(1 + r_j, 1 - r_j)`` per polarization, free of cancellation."""
    kj, k3 = kap[j - 1], kap[2]
    ej, e3 = media.eps[j - 1], media.eps[2]
    with np.errstate(invalid="ignore", divide="ignore"):
        s = k3 + kj
        te = (2 * k3 / s, 2 * kj / s)
        if abs(ej) >= abs(e3):
            ratio = e3 / ej if np.isfinite(ej) else 0.0
            s = k3 + ratio * kj
            tm = (2 * k3 / s, 2 * ratio * kj / s)
        else:
            ratio = ej / e3
            s = ratio * k3 + kj
            tm = (2 * ratio * k3 / s, 2 * kj / s)
    return {"te": te, "tm": tm}


def _coefficients(media, k2, d_scaled=1.0):
    """Fresnel, phase and denominators for arrays of k_par^2 (scaled)."""
    k1, k2_, k3 = _kappas(media, k2)
    kap = (k1, k2_, k3)
    r1 = {"te": _r_te(media, kap, 1), "tm": _r_tm(media, kap, 1)}
    r2 = {"te": _r_te(media, kap, 2), "tm": _r_tm(media, kap, 2)}
    phase = np.exp(2j * k3 * d_scaled)
    D = {p: 1.0 - r1[p] * r2[p] * phase for p in ("te", "tm")}
    return (k1, k2_, k3), r1, r2, phase, D


# ---------------------------------------------------------------- public SI API

def _eps_value(eps, point):
    if isinstance(eps, PermittivityModel):
        if point.axis == IMAG:
            return complex(eps.eps_imag(point.value))
        return complex(eps.eps_real(point.value))
    return complex(eps)


def kappa(eps, point):
    r"""Normal wave number [rad/m] for permittivity ``eps`` at ``point``.

    Real axis: :math:`\sqrt{\epsilon\omega^2/c^2 - k_\parallel^2}` with
    ``Im >= 0``. Imaginary axis: the real positive
    :math:`\tilde\kappa = \sqrt{\epsilon\xi^2/c^2 + k_\parallel^2}`.
    """
    e = _eps_value(eps, point)
    k = point.k_par or 0.0
    w = point.value / C_LIGHT
    if point.axis == IMAG:
        val = branch_sqrt(e * w * w + k * k)
        return float(val.real)
    return complex(branch_sqrt(e * w * w - k * k))


def _point_media(stack, point):
    x = point.value * stack.d / C_LIGHT
    media = _media(stack, point.axis, x)
    kp = (point.k_par or 0.0) * stack.d
    return media, kp * kp


def fresnel(pol, j, stack, point):
    r"""Reflection coefficient at the interface between the gap and medium ``j``.

    ``te``: :math:`(\kappa_3-\kappa_j)/(\kappa_3+\kappa_j)`;
    ``tm``: :math:`(\epsilon_j\kappa_3-\epsilon_3\kappa_j)/(\epsilon_j\kappa_3+\epsilon_3\kappa_j)`.
    Real on the imaginary axis.
    """
    if pol not in ("te", "tm") or j not in (1, 2):
        raise DomainError("pol must be 'te'/'tm' and j must be 1 or 2")
    media, k2 = _point_media(stack, point)
    kap = _kappas(media, k2)
    r = complex((_r_te if pol == "te" else _r_tm)(media, kap, j))
    return r.real if point.axis == IMAG else r


@dataclass(frozen=True)
class MultipleReflection:
    R1_te: complex
    R1_tm: complex
    R2_te: complex
    R2_tm: complex
    D_te: complex
    D_tm: complex
    phase: complex


def _R(ra, rb, phase, D):
    return (-ra + rb * phase) / D


def multiple_reflection(stack, point):
    r"""Round-trip quantities of the gap at ``point``.

    :math:`D_p = 1 - r_1 r_2 e^{2i\kappa_3 d}`,
    :math:`R_1 = (-r_1 + r_2 e^{2i\kappa_3 d})/D_p`, and ``R2`` with 1<->2.
    """
    media, k2 = _point_media(stack, point)
    _, r1, r2, phase, D = _coefficients(media, k2)
    for p in ("te", "tm"):
        if abs(complex(D[p])) < 1e-14:
            raise DegenerateDenominatorError(f"|D_{p}| < 1e-14")
    vals = dict(
        R1_te=_R(r1["te"], r2["te"], phase, D["te"]),
        R1_tm=_R(r1["tm"], r2["tm"], phase, D["tm"]),
        R2_te=_R(r2["te"], r1["te"], phase, D["te"]),
        R2_tm=_R(r2["tm"], r1["tm"], phase, D["tm"]),
        D_te=D["te"], D_tm=D["tm"], phase=phase,
    )
    conv = (lambda v: float(np.real(v))) if point.axis == IMAG else complex
    return MultipleReflection(**{k: conv(v) for k, v in vals.items()})


def homogeneous_green_trace(eps, omega):
    r"""Bulk-subtracted coincidence trace of the homogeneous medium dyadic.

    With :math:`n=\sqrt\epsilon`: ``Im Tr = 2 n_R omega/c`` and
    ``Re Tr = -2 n_I omega/c``.
    """
    if not omega > 0:
        raise DomainError("omega must be positive")
    n = complex(branch_sqrt(complex(eps)))
    if n.real < 0:
        n = -n
    k0 = omega / C_LIGHT
    return GreenTrace(complex(-2 * n.imag * k0, 2 * n.real * k0))


def _separation(r, rp):
    R = np.asarray(r, dtype=float) - np.asarray(rp, dtype=float)
    dist = float(np.linalg.norm(R))
    if dist == 0.0:
        raise CoincidenceError("Green dyadic needs r != r'")
    return R / dist, dist


def _k_of(frequency):
    w = complex(frequency)
    if w.imag < 0:
        raise DomainError("frequency must lie in the closed upper half-plane")
    return w / C_LIGHT


def dipole_field_dyadic(r, rp, frequency):
    r"""Field of a unit dipole, :math:`(\omega^2/c^2) G^0(r, r', \omega)` [1/m^3].

    .. math:: \frac{e^{ikR}}{R^3}\big[(k^2R^2 + ikR - 1)\,\mathbb 1
              + (3 - 3ikR - k^2R^2)\,\hat R\hat R\big]

    Finite at zero frequency, where it is the static dipole field.
    """
    u, R = _separation(r, rp)
    k = _k_of(frequency)
    kr = k * R
    a = kr * kr + 1j * kr - 1.0
    b = 3.0 - 3j * kr - kr * kr
    return np.exp(1j * kr) / R ** 3 * (a * np.eye(3) + b * np.outer(u, u))


def free_space_dyadic(r, rp, frequency):
    r"""Retarded free-space Green dyadic :math:`G^0(r, r', \omega)` [1/m].

    ``frequency`` may be complex (``1j*xi`` on the imaginary axis, where the
    result is real). Zero frequency is excluded because G^0 itself diverges
    like 1/k^2 there; use :func:`dipole_field_dyadic` for that limit.
    """
    k = _k_of(frequency)
    if k == 0:
        raise DomainError("G0 diverges at zero frequency")
    return dipole_field_dyadic(r, rp, frequency) / (k * k)


# ---------------------------------------------------------------- planar trace

def _region(stack, z, side):
    if side is not None:
        if side not in ("0+", "0-", "d+", "d-"):
            raise DomainError("side must be one of 0+, 0-, d+, d-")
        if (side[0] == "0" and z != 0) or (side[0] == "d" and z != stack.d):
            raise DomainError("side tag does not match z")
        return {"0-": 1, "0+": 3, "d-": 3, "d+": 2}[side]
    if z == 0 or z == stack.d:
        raise DomainError("z on an interface needs an explicit side tag (0+/0-/d+/d-)")
    if z < 0:
        return 1
    if z > stack.d:
        return 2
    return 3


def trace_integrand(media, region, zs, k2, drop=None):
    r"""Scaled integrand of :math:`\omega^2\epsilon_{loc}\,G_{ii}(z,z)` per
    :math:`k\,dk`, split into tangential and normal parts.

    Returns ``(tangential_te, tangential_tm, normal_tm)`` as complex arrays.
    Inputs are scaled by ``d`` (``zs = z/d``). The full trace is
    ``i/(omega^2 eps_loc) * integral(k dk (...))``.

    ``drop`` (``"lower"`` or ``"upper"``) applies on the interface at 0 or at
    d and removes the single-reflection term of that interface, which does
    not depend on the gap width and diverges at coincidence. The remainder is
    written in factorized closed form, which stays accurate for nearly
    perfect reflectors.
    """
    kap, r1, r2, phase, D = _coefficients(media, k2)
    k1, k2_, k3 = kap
    kp2 = k2
    if region == 3:
        out = {}
        if drop is None:
            ez = np.exp(2j * k3 * zs)
            edz = np.exp(2j * k3 * (1.0 - zs))
            for p in ("te", "tm"):
                a, b, dd = r1[p], r2[p], D[p]
                ab = a * b * phase
                out[p] = ((2 * ab + a * ez + b * edz) / dd, (2 * ab - a * ez - b * edz) / dd)
        else:
            # on the interface: z = d (upper) or z = 0 (lower)
            j = 2 if drop == "upper" else 1
            other = r1 if j == 2 else r2
            pm = _one_pm_r(media, kap, j)
            for p in ("te", "tm"):
                base = other[p] * phase / D[p]
                plus, minus = pm[p]
                out[p] = (base * plus * plus, -base * minus * minus)
        ew2 = media.epsw2[2]
        tan_te = ew2 * out["te"][0] / k3
        tan_tm = k3 * out["tm"][1]
        nrm_tm = kp2 * out["tm"][0] / k3
        return tan_te, tan_tm, nrm_tm
    j = region
    kj = k1 if j == 1 else k2_
    ew2 = media.epsw2[j - 1]
    ra, rb = (r1, r2) if j == 1 else (r2, r1)
    depth = -zs if j == 1 else zs - 1.0
    decay = np.exp(2j * kj * depth)
    pm = _one_pm_r(media, kap, j) if drop is not None else None
    res = {}
    for p in ("te", "tm"):
        if drop is None:
            R = _R(ra[p], rb[p], phase, D[p])
        else:
            R = rb[p] * phase * pm[p][0] * pm[p][1] / D[p]
        res[p] = R * decay
    tan_te = ew2 * res["te"] / kj
    tan_tm = -kj * res["tm"]
    nrm_tm = kp2 * res["tm"] / kj
    return tan_te, tan_tm, nrm_tm


def _local_eps(media, region):
    return media.eps[region - 1], media.epsw2[region - 1]


def _slowest_decay(region, zs, drop):
    """Smallest large-k decay rate in t of the terms present at ``zs``.

    A point at distance ``z`` from an interface sees ``exp(-t z/d)``, so the
    integration window has to grow as the point nears an interface.
    """
    if region == 3:
        rates = [1.0]
        if drop != "lower":
            rates.append(zs)
        if drop != "upper":
            rates.append(1.0 - zs)
    else:
        depth = -zs if region == 1 else zs - 1.0
        rates = [1.0 + depth] if drop is not None else [depth]
    return min(rates)


def scaled_weighted_trace_imag(stack, region, zs, x, spec=DEFAULT_SPEC, drop=None):
    r"""Imaginary-axis :math:`x^2\epsilon_{loc}\hat G` and its parts (scaled by d).

    Returns ``(total, tangential, normal, error)``, integrated in
    ``t = 2*kappa_tilde_3`` over ``[t0, t0 + 80/rate]`` plus an exponential
    tail, where ``rate`` is the slowest decay of the terms present.
    Multiplying by ``1/eps_loc`` gives :math:`x^2 \hat G_{ii}`.
    """
    media = _media(stack, IMAG, x)
    mu3 = -media.epsw2[2].real  # eps3 x^2 >= 0
    t0 = 2.0 * math.sqrt(max(mu3, 0.0))

    def f(t):
        k2 = np.maximum(0.25 * t * t - mu3, 0.0)
        tt, tm_t, tm_n = trace_integrand(media, region, zs, k2, drop)
        # k dk = (t/4) dt ; the i of the prefactor combines with 1/kappa to a real number
        w = 0.25 * t
        vals = np.stack([tt * w, tm_t * w, tm_n * w], axis=-1)
        return (-1j * vals).real

    rate = _slowest_decay(region, zs, drop)
    res = integrate_exp_tail(f, t0, spec, length=EXP_WINDOW / rate,
                             points=(t0 + EXP_WINDOW,) if rate < 1 else ())
    te_t, tm_t, tm_n = (float(v) for v in res.value)
    return te_t + tm_t + tm_n, te_t + tm_t, tm_n, res.error


def planar_scattering_trace(stack, z, point, spec=DEFAULT_SPEC, side=None, self_terms=True):
    r"""Scattering part of :math:`G_{ii}(z, z)` [1/m] for the three-layer stack.

    Without ``point.k_par`` the transverse wave vector is integrated out
    (imaginary axis only). With ``k_par`` the spectral density ``g`` with
    :math:`\mathrm{Tr}\,G = \int_0^\infty k\,dk\,g(k)` is returned [m], on
    either axis.

    On an interface (``z`` equal to 0 or ``d``) a ``side`` tag is required.
    The single-reflection term of that interface diverges at coincidence and
    does not depend on ``d``; pass ``self_terms=False`` to drop it.
    """
    region = _region(stack, z, side)
    drop = None
    if not self_terms:
        if side is None:
            raise DomainError("self_terms=False applies on an interface (give a side tag)")
        drop = "lower" if side[0] == "0" else "upper"
    elif side is not None and point.k_par is None:
        raise ConvergenceError("the single-interface term diverges on the interface; "
                               "pass self_terms=False")
    zs = z / stack.d
    x = point.value * stack.d / C_LIGHT
    if point.k_par is not None:
        if point.axis == IMAG and x == 0:
            raise DomainError("spectral trace needs a nonzero frequency")
        media = _media(stack, point.axis, x)
        kp = point.k_par * stack.d
        parts = trace_integrand(media, region, zs, np.array([kp * kp]), drop)
        ew2 = _local_eps(media, region)[1]
        val = sum(complex(p[0]) for p in parts) * 1j / ew2 * stack.d
        return GreenTrace(complex(val.real, 0.0) if point.axis == IMAG else val)
    if point.axis != IMAG:
        raise DomainError("k_par-integrated traces are evaluated on the imaginary axis")
    if x == 0:
        raise DomainError("the trace diverges at xi = 0")
    total, _, _, _ = scaled_weighted_trace_imag(stack, region, zs, x, spec, drop)
    media = _media(stack, IMAG, x)
    ew2 = -_local_eps(media, region)[1].real
    return GreenTrace(complex(total / ew2 / stack.d, 0.0))
