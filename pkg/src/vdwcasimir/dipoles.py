r"""Van der Waals energies of coupled, fluctuating point dipoles.

Each dipole is a damped oscillator with polarizability volume
:math:`\alpha(i\xi) = (e^2/m)/(\omega_0^2 + \xi^2 + \gamma\xi)` [m^3]. The
zero-temperature interaction energy is

.. math:: E = \frac{\hbar}{2\pi}\int_0^\infty d\xi\,
          \ln\det\big[1 - \alpha(i\xi)\,T(i\xi)\big],

where :math:`T_{ij}` is the imaginary-frequency dipole field dyadic between
distinct dipoles, with zero diagonal blocks. Expanding the logarithm to second
order gives the pairwise-additive energy.
"""

import math
from dataclasses import dataclass

import numpy as np
from .constants import C_LIGHT, HBAR as hbar
from scipy.linalg import lu_factor

from .dielectric import OscillatorParams
from .errors import CoincidenceError, DomainError, SpectralRadiusError
from .quadrature import DEFAULT_SPEC, gauss_kronrod, integrate_on_panels

# closest approach allowed, in units of alpha(0)^(1/3)
MIN_SEPARATION_FACTOR = 3.0


@dataclass(frozen=True)
class DipoleSystem:
    """Polarizable dipoles at ``positions`` [m], shape (N, 3).

    ``oscillator`` is one :class:`OscillatorParams` shared by every atom, or a
    sequence with one entry per atom. ``coupling`` is the single-atom
    strength e^2/m [m^3 rad^2/s^2].
    """

    positions: np.ndarray
    oscillator: object

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise DomainError("positions must have shape (N, 3) with N >= 1")
        if not np.all(np.isfinite(pos)):
            raise DomainError("positions must be finite")
        oscs = self.oscillator
        if isinstance(oscs, OscillatorParams):
            oscs = (oscs,) * pos.shape[0]
        else:
            oscs = tuple(oscs)
            if len(oscs) != pos.shape[0]:
                raise DomainError("need one oscillator per atom")
        for o in oscs:
            if o.omega_0 <= 0:
                raise DomainError("dipoles need a bound resonance omega_0 > 0")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "oscillators", oscs)
        if pos.shape[0] > 1 and self.min_separation() == 0:
            raise CoincidenceError("two dipoles coincide")

    @property
    def n(self):
        return self.positions.shape[0]

    @property
    def uniform(self):
        return all(o == self.oscillators[0] for o in self.oscillators)

    def distances(self):
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.linalg.norm(diff, axis=-1)

    def min_separation(self):
        if self.n < 2:
            return math.inf
        dist = self.distances()
        return float(dist[np.triu_indices(self.n, 1)].min())

    def moved(self, index, delta):
        pos = self.positions.copy()
        pos[index] += delta
        return DipoleSystem(pos, self.oscillators)

    def alpha_imag(self, xi):
        """Polarizabilities alpha_n(i xi) [m^3], shape (N,)."""
        return np.array([_alpha_imag(o, xi) for o in self.oscillators])


def _alpha_imag(osc, xi):
    return osc.coupling / (osc.omega_0 ** 2 + xi * xi + osc.gamma * xi)


def _check_separation(system):
    alpha0 = max(o.static_polarizability for o in system.oscillators)
    rmin = system.min_separation()
    if rmin < MIN_SEPARATION_FACTOR * alpha0 ** (1.0 / 3.0):
        raise SpectralRadiusError(
            f"separation {rmin:.3e} m is below {MIN_SEPARATION_FACTOR} alpha(0)^(1/3); "
            "the point-dipole model does not apply")


def _coupling_blocks(pos, kR_factor, imaginary):
    """Blocks of (omega^2/c^2) G0 for wave number ``k``; ``kR_factor`` is k."""
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    R = np.linalg.norm(diff, axis=-1)
    off = ~np.eye(n, dtype=bool)
    if n > 1 and np.any(R[off] == 0):
        raise CoincidenceError("two dipoles coincide")
    np.fill_diagonal(R, 1.0)
    u = diff / R[..., None]
    if imaginary:
        # k = i xi/c: closed form is real
        x = kR_factor * R
        pref = np.exp(-x) / R ** 3
        a = -(1.0 + x + x * x) * pref
        b = (3.0 + 3.0 * x + x * x) * pref
    else:
        kr = kR_factor * R
        pref = np.exp(1j * kr) / R ** 3
        a = (kr * kr + 1j * kr - 1.0) * pref
        b = (3.0 - 3j * kr - kr * kr) * pref
    T = a[..., None, None] * np.eye(3) + b[..., None, None] * u[..., :, None] * u[..., None, :]
    T[np.arange(n), np.arange(n)] = 0.0
    return T.transpose(0, 2, 1, 3).reshape(3 * n, 3 * n)


def dipole_coupling_imag(positions, xi):
    r"""Real block matrix :math:`T(i\xi)` [1/m^3], shape (3N, 3N).

    .. math:: T_{ij} = \frac{e^{-x}}{R^3}\big[-(1+x+x^2)\,\mathbb 1
              + (3+3x+x^2)\,\hat R\hat R\big],\quad x = \xi R/c

    Diagonal blocks are zero.
    """
    return _coupling_blocks(np.asarray(positions, dtype=float), xi / C_LIGHT, True)


def build_interaction_matrix(system, frequency):
    r"""Dense matrix of dipole-field blocks :math:`(\omega^2/c^2)G^0(r_n, r_m)` [1/m^3].

    ``frequency`` is real (``omega``) or purely imaginary (``1j*xi``); on the
    imaginary axis the result is a real array. Diagonal blocks are zero.
    """
    w = complex(frequency)
    if w.real != 0 and w.imag != 0:
        raise DomainError("frequency must lie on the real or the imaginary axis")
    if w.imag < 0:
        raise DomainError("imaginary frequencies must be i*xi with xi >= 0")
    if w.real == 0:
        return dipole_coupling_imag(system.positions, w.imag)
    return _coupling_blocks(system.positions, w.real / C_LIGHT, False)


def scaled_coupling(system, xi):
    r"""Symmetric :math:`A^{1/2} T A^{1/2}` with :math:`A = \mathrm{diag}\,\alpha(i\xi)`.

    Shares its determinant with :math:`\alpha T`, so
    ``log det(1 - alpha T) = logdet_one_plus(-scaled_coupling)``.
    """
    sq = np.repeat(np.sqrt(system.alpha_imag(xi)), 3)
    return sq[:, None] * dipole_coupling_imag(system.positions, xi) * sq[None, :]


def logdet_one_plus(B):
    r"""``log det(1 + B)`` for a real symmetric ``B``, accurate when ``B`` is small.

    Unpivoted elimination is carried out on ``B`` itself so that each pivot
    enters as ``log1p(b_kk)``; this keeps full relative accuracy of results of
    order ``|B|^2``. A non-positive pivot means ``1 + B`` is not positive
    definite and raises :class:`SpectralRadiusError`.
    """
    B = np.array(B, dtype=float)
    n = B.shape[0]
    terms = np.empty(n)
    for k in range(n):
        p = 1.0 + B[k, k]
        if not p > 0:
            raise SpectralRadiusError("1 - alpha T is not positive definite")
        if p < 1e-8:
            # ill-conditioned: finish with a pivoted factorization
            lu, _ = lu_factor(np.eye(n - k) + B[k:, k:])
            diag = np.diag(lu)
            if np.any(diag <= 0):
                raise SpectralRadiusError("1 - alpha T is not positive definite")
            terms[k:] = np.log(diag)
            return math.fsum(terms)
        terms[k] = math.log1p(B[k, k])
        if k + 1 < n:
            col = B[k + 1:, k] / p
            B[k + 1:, k + 1:] -= np.outer(col, B[k, k + 1:])
    return math.fsum(terms)


def _energy_scale(system):
    rmin = system.min_separation()
    return min(min(o.omega_0 for o in system.oscillators), C_LIGHT / rmin)


def _logdet_integrand(system, scale):
    def f(u):
        out = np.empty(u.size)
        for i, ui in enumerate(u):
            xi = scale * ui / (1.0 - ui)
            jac = scale / (1.0 - ui) ** 2
            out[i] = jac * logdet_one_plus(-scaled_coupling(system, xi))
        return out
    return f


def _energy_integral(system, spec, panels=None):
    _check_separation(system)
    if system.n < 2:
        return 0.0, 0.0, None
    scale = _energy_scale(system)
    f = _logdet_integrand(system, scale)
    if panels is None:
        res = gauss_kronrod(f, 0.0, 1.0, spec)
    else:
        res = integrate_on_panels(f, panels)
    pref = hbar / (2 * math.pi)
    return pref * res.value, pref * res.error, res.panels


def vdw_energy(system, spec=DEFAULT_SPEC, return_error=False):
    """Many-body dispersion energy [J] at zero temperature.

    With ``return_error`` a ``(value, error)`` pair is returned.
    """
    value, err, _ = _energy_integral(system, spec)
    return (value, err) if return_error else value


def pair_energy(R, osc, spec=DEFAULT_SPEC, osc_b=None):
    r"""Pair dispersion energy [J] of two dipoles at distances ``R`` [m].

    .. math:: E(R) = -\frac{\hbar}{2\pi}\int_0^\infty d\xi\,
              \alpha_a(i\xi)\alpha_b(i\xi)\operatorname{Tr}T^2,\quad
              \operatorname{Tr}T^2 = \frac{e^{-2x}}{R^6}
              \big[2(1+x+x^2)^2 + 4(1+x)^2\big]

    Vectorized over ``R``; each distance uses its own frequency scale
    ``min(omega_0, c/R)``. ``osc_b`` defaults to ``osc`` (identical atoms).
    """
    osc_b = osc if osc_b is None else osc_b
    R = np.atleast_1d(np.asarray(R, dtype=float))
    if np.any(R <= 0):
        raise DomainError("distances must be positive")
    w0 = min(osc.omega_0, osc_b.omega_0)
    scale = np.minimum(w0, C_LIGHT / R)
    # London-like magnitude, used only to normalize columns
    unit = hbar * w0 * osc.static_polarizability * osc_b.static_polarizability / R ** 6

    def f(u):
        u = u[:, None]
        xi = scale[None, :] * u / (1.0 - u)
        jac = scale[None, :] / (1.0 - u) ** 2
        x = xi * R[None, :] / C_LIGHT
        tr = np.exp(-2 * x) / R[None, :] ** 6 * (2 * (1 + x + x * x) ** 2 + 4 * (1 + x) ** 2)
        a = _alpha_imag(osc, xi) * _alpha_imag(osc_b, xi)
        return jac * a * tr * (hbar / (2 * math.pi)) / unit[None, :]

    res = gauss_kronrod(f, 0.0, 1.0, spec)
    return -np.asarray(res.value) * unit


def pairwise_vdw_energy(system, spec=DEFAULT_SPEC):
    """Sum of pair energies [J] over all distinct pairs.

    Pairs are grouped by oscillator species and repeated distances are
    evaluated once.
    """
    _check_separation(system)
    if system.n < 2:
        return 0.0
    species = []
    label = np.empty(system.n, dtype=int)
    for i, o in enumerate(system.oscillators):
        if o not in species:
            species.append(o)
        label[i] = species.index(o)
    iu, ju = np.triu_indices(system.n, 1)
    dist = system.distances()[iu, ju]
    unit = dist.min()
    la, lb = np.minimum(label[iu], label[ju]), np.maximum(label[iu], label[ju])
    total = []
    for sa in range(len(species)):
        for sb in range(sa, len(species)):
            sel = (la == sa) & (lb == sb)
            if not np.any(sel):
                continue
            d = dist[sel]
            _, first, counts = np.unique(np.round(d / unit, 12), return_index=True,
                                         return_counts=True)
            e = pair_energy(d[first], species[sa], spec, species[sb])
            total.extend(e * counts)
    return math.fsum(total)


def vdw_force(system, index=None, spec=DEFAULT_SPEC, method="logdet", step=1e-3):
    """Force [N] on dipole ``index`` (or on every dipole, shape (N, 3)).

    Central differences of the energy with steps ``h`` and ``h/2``
    (``h = step * min separation``), combined by Richardson extrapolation.
    For ``method="logdet"`` every displaced configuration reuses the
    quadrature panels of the undisplaced one, so differences are free of
    adaptivity noise.
    """
    if method not in ("logdet", "pairwise"):
        raise DomainError("method must be 'logdet' or 'pairwise'")
    if system.n < 2:
        raise DomainError("a force needs at least two dipoles")
    h = step * system.min_separation()
    if method == "logdet":
        _, _, panels = _energy_integral(system, spec)

        def energy(s):
            return _energy_integral(s, spec, panels)[0]
    else:
        def energy(s):
            return pairwise_vdw_energy(s, spec)
    indices = range(system.n) if index is None else [index]
    forces = []
    for i in indices:
        f = np.empty(3)
        for axis in range(3):
            e = np.zeros(3)
            e[axis] = 1.0
            d1 = (energy(system.moved(i, h * e)) - energy(system.moved(i, -h * e))) / (2 * h)
            d2 = (energy(system.moved(i, 0.5 * h * e))
                  - energy(system.moved(i, -0.5 * h * e))) / h
            f[axis] = -(4.0 * d2 - d1) / 3.0
        forces.append(f)
    return forces[0] if index is not None else np.array(forces)


def london_energy(R, osc):
    r"""Identical-atom nonretarded limit :math:`-3\hbar\omega_0\alpha_0^2/(4R^6)` [J]."""
    a0 = osc.static_polarizability
    return -3.0 * hbar * osc.omega_0 * a0 ** 2 / (4.0 * np.asarray(R, dtype=float) ** 6)


def casimir_polder_energy(R, osc):
    r"""Identical-atom retarded limit :math:`-23\hbar c\alpha_0^2/(4\pi R^7)` [J]."""
    a0 = osc.static_polarizability
    return -23.0 * hbar * C_LIGHT * a0 ** 2 / (4.0 * math.pi * np.asarray(R, dtype=float) ** 7)
