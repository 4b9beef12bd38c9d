r"""Causal permittivity and polarizability models.

Frequencies are angular frequencies in rad/s throughout. Oscillator
couplings are squared plasma frequencies :math:`\Omega^2` in rad²/s², so
that

.. math:: \epsilon(\omega) = 1 + \sum_j \frac{\Omega_j^2}{\omega_{0j}^2 - \omega^2 - i\gamma_j\omega}.

Single-atom polarizabilities use Gaussian "polarizability volume"
conventions: :math:`\alpha_0(\omega) = (e^2/m)/(\omega_0^2-\omega^2-i\gamma\omega)`
in m³, with ``e^2/m`` supplied in m³·rad²/s². A gas of such atoms at number
density :math:`N` has :math:`\epsilon = 1 + 4\pi N\alpha_0`.
"""

import math
from dataclasses import dataclass
import numpy as np

from .errors import DomainError, PoleError, UnsupportedAxisError, ConvergenceError
from .quadrature import DEFAULT_SPEC, gauss_kronrod, integrate_half_line


@dataclass(frozen=True)
class OscillatorParams:
    """One damped harmonic oscillator.

    ``coupling`` is Ω² for a permittivity term, or e²/m for a single atom.
    ``omega_0 = 0`` with ``gamma > 0`` is a Drude term.
    """

    coupling: float
    omega_0: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.coupling < 0 or self.omega_0 < 0 or self.gamma < 0:
            raise DomainError("oscillator parameters must be non-negative")
        if self.omega_0 == 0 and self.gamma == 0 and self.coupling > 0:
            raise DomainError("a Drude term (omega_0 = 0) needs gamma > 0")

    @property
    def static_polarizability(self):
        if self.omega_0 == 0:
            return math.inf
        return self.coupling / self.omega_0 ** 2


class PermittivityModel:
    """Base class. Subclasses are immutable value objects."""

    name = "model"

    def eps_imag(self, xi):
        raise NotImplementedError

    def deps_imag(self, xi):
        """d eps(i xi) / d xi."""
        raise NotImplementedError

    def eps_xi2(self, xi):
        """eps(i xi) * xi**2, finite at xi = 0 even for Drude terms."""
        x = np.asarray(xi, dtype=float)
        with np.errstate(invalid="ignore"):
            out = self.eps_imag(x) * x ** 2
        return np.where(x == 0, 0.0, out)

    def chi_xi2(self, xi):
        """(eps(i xi) - 1) * xi**2 without forming ``eps - 1`` by subtraction when possible."""
        x = np.asarray(xi, dtype=float)
        with np.errstate(invalid="ignore"):
            out = (self.eps_imag(x) - 1.0) * x ** 2
        return np.where(x == 0, 0.0, out)

    def chi_real(self, omega):
        """eps(omega) - 1 on the real axis."""
        return self.eps_real(omega) - 1.0

    def eps_real(self, omega):
        raise UnsupportedAxisError(f"{type(self).__name__} cannot be evaluated on the real axis")

    def deps_real(self, omega):
        raise UnsupportedAxisError(f"{type(self).__name__} cannot be evaluated on the real axis")

    def eps_imag_part(self, omega):
        return np.imag(self.eps_real(omega))

    @property
    def lossless(self):
        return False

    @property
    def resonances(self):
        return ()

    @property
    def breakpoints(self):
        """Frequencies [rad/s] where the model has resonances or kinks."""
        return self.resonances

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()


class Vacuum(PermittivityModel):
    name = "vacuum"

    def eps_imag(self, xi):
        return np.ones_like(np.asarray(xi, dtype=float))

    def deps_imag(self, xi):
        return np.zeros_like(np.asarray(xi, dtype=float))

    def eps_real(self, omega):
        return np.ones_like(np.asarray(omega, dtype=float)) + 0j

    def deps_real(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float)) + 0j

    @property
    def lossless(self):
        return True

    def __repr__(self):
        return "Vacuum()"


class LorentzSum(PermittivityModel):
    """Sum of Lorentz (and possibly Drude) oscillators; strengths add."""

    name = "lorentz"

    def __init__(self, oscillators):
        oscillators = tuple(oscillators)
        if not all(isinstance(o, OscillatorParams) for o in oscillators):
            raise TypeError("oscillators must be OscillatorParams")
        self.oscillators = oscillators
        self._c = np.array([o.coupling for o in oscillators], dtype=float)
        self._w0 = np.array([o.omega_0 for o in oscillators], dtype=float)
        self._g = np.array([o.gamma for o in oscillators], dtype=float)

    def _key(self):
        return self.oscillators

    def __eq__(self, other):
        return isinstance(other, LorentzSum) and self.oscillators == other.oscillators

    def __hash__(self):
        return hash(("LorentzSum", self.oscillators))

    def __repr__(self):
        return f"{type(self).__name__}({list(self.oscillators)!r})"

    def _bcast(self, x):
        x = np.asarray(x)
        return x[..., None]

    def eps_imag(self, xi):
        x = self._bcast(np.asarray(xi, dtype=float))
        with np.errstate(divide="ignore"):
            terms = self._c / (self._w0 ** 2 + x ** 2 + self._g * x)
        return 1.0 + terms.sum(axis=-1)

    def eps_xi2(self, xi):
        return np.asarray(xi, dtype=float) ** 2 + self.chi_xi2(xi)

    def chi_xi2(self, xi):
        xb = self._bcast(np.asarray(xi, dtype=float))
        # Drude terms: Omega^2 xi / (xi + gamma) stays finite at xi = 0
        drude = self._w0 == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            lor = np.where(drude, 0.0, self._c * xb ** 2 / (self._w0 ** 2 + xb ** 2 + self._g * xb))
            dru = np.where(drude, self._c * xb / (xb + self._g), 0.0)
        return (lor + dru).sum(axis=-1)

    def deps_imag(self, xi):
        x = self._bcast(np.asarray(xi, dtype=float))
        with np.errstate(divide="ignore"):
            den = self._w0 ** 2 + x ** 2 + self._g * x
            terms = -self._c * (2 * x + self._g) / den ** 2
        return terms.sum(axis=-1)

    def _den_real(self, omega):
        w = self._bcast(np.asarray(omega, dtype=float))
        den = self._w0 ** 2 - w ** 2 - 1j * self._g * w
        if np.any(den == 0):
            raise PoleError("undamped resonance hit exactly")
        return w, den

    def eps_real(self, omega):
        return 1.0 + self.chi_real(omega)

    def chi_real(self, omega):
        _, den = self._den_real(omega)
        return (self._c / den).sum(axis=-1)

    def deps_real(self, omega):
        w, den = self._den_real(omega)
        return (self._c * (2 * w + 1j * self._g) / den ** 2).sum(axis=-1)

    def eps_imag_part(self, omega):
        w = self._bcast(np.asarray(omega, dtype=float))
        den = (self._w0 ** 2 - w ** 2) ** 2 + (self._g * w) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(den > 0, self._c * self._g * w / np.where(den > 0, den, 1.0), 0.0)
        return t.sum(axis=-1)

    @property
    def lossless(self):
        return bool(np.all((self._g == 0) | (self._c == 0)))

    @property
    def resonances(self):
        return tuple(sorted({float(w) for w in self._w0 if w > 0}))

    @property
    def static_value(self):
        if np.any((self._w0 == 0) & (self._c > 0)):
            return math.inf
        return 1.0 + float(np.sum(self._c / self._w0 ** 2)) if self._c.size else 1.0


class Lorentz(LorentzSum):
    """Single Lorentz oscillator ``1 + omega_p2 / (omega_0^2 - w^2 - i gamma w)``."""

    def __init__(self, omega_p2, omega_0, gamma):
        super().__init__([OscillatorParams(omega_p2, omega_0, gamma)])


class Drude(LorentzSum):
    """Drude metal ``1 - omega_p2 / (w^2 + i gamma w)``."""

    name = "drude"

    def __init__(self, omega_p2, gamma):
        if gamma <= 0:
            raise DomainError("Drude model needs gamma > 0")
        super().__init__([OscillatorParams(omega_p2, 0.0, gamma)])


class IdealMirror(PermittivityModel):
    """Perfect conductor as the limit ``eps = scale -> inf``.

    Evaluations return the finite value ``scale``. Planar results carry
    errors of order ``scale**-0.5``; the planar operations evaluate at
    ``scale``, ``4*scale`` and ``16*scale`` and extrapolate
    (see :func:`vdwcasimir.lifshitz.richardson_mirror`).
    """

    name = "ideal_mirror"

    def __init__(self, scale=1e8):
        if not scale > 0:
            raise DomainError("IdealMirror scale must be positive")
        self.scale = float(scale)

    def _key(self):
        return (self.scale,)

    def scaled(self, factor):
        return IdealMirror(self.scale * factor)

    def eps_imag(self, xi):
        return np.full_like(np.asarray(xi, dtype=float), self.scale)

    def deps_imag(self, xi):
        return np.zeros_like(np.asarray(xi, dtype=float))

    def eps_real(self, omega):
        return np.full_like(np.asarray(omega, dtype=float), self.scale) + 0j

    def deps_real(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float)) + 0j

    @property
    def lossless(self):
        return True

    def __repr__(self):
        return f"IdealMirror(scale={self.scale:g})"


class TabulatedImagAxis(PermittivityModel):
    r"""eps(i xi) from samples, interpolated linearly in (log xi, log(eps - 1)).

    Parameters
    ----------
    xi : array_like
        Strictly increasing positive imaginary frequencies [rad/s].
    eps : array_like
        Samples, all >= 1 and nonincreasing.
    tail : bool
        When true, below the table eps is held at its first sample and above
        it follows ``1 + A/xi**2`` with ``A`` least-squares fitted to the last
        two samples. When false, out-of-range evaluation raises.
    """

    name = "tabulated"

    def __init__(self, xi, eps, tail=False):
        xi = np.asarray(xi, dtype=float)
        eps = np.asarray(eps, dtype=float)
        if xi.ndim != 1 or xi.shape != eps.shape or xi.size < 2:
            raise DomainError("need at least two (xi, eps) samples")
        if np.any(xi <= 0) or np.any(np.diff(xi) <= 0):
            raise DomainError("table xi must be positive and strictly increasing")
        if np.any(eps < 1) or np.any(np.diff(eps) > 0):
            raise DomainError("table eps must be >= 1 and nonincreasing")
        self.xi = xi
        self.eps = eps
        self.tail = bool(tail)
        self._lx = np.log(xi)
        self._ly = np.log(np.maximum(eps - 1.0, 1e-300))
        tx, ty = xi[-2:], eps[-2:] - 1.0
        self._tail_a = float(np.sum(ty / tx ** 2) / np.sum(1.0 / tx ** 4))

    def _key(self):
        return (tuple(self.xi), tuple(self.eps), self.tail)

    def __repr__(self):
        return f"TabulatedImagAxis({self.xi.size} samples, tail={self.tail})"

    def _chi(self, xi):
        x = np.asarray(xi, dtype=float)
        if np.any(x < 0):
            raise DomainError("xi must be >= 0")
        lo = x < self.xi[0]
        hi = x > self.xi[-1]
        if (np.any(lo) or np.any(hi)) and not self.tail:
            raise DomainError("xi outside the tabulated range and no tail rule configured")
        with np.errstate(divide="ignore"):
            lx = np.log(np.clip(x, self.xi[0], self.xi[-1]))
        out = np.exp(np.interp(lx, self._lx, self._ly))
        if self.tail:
            out = np.where(lo, self.eps[0] - 1.0, out)
            with np.errstate(divide="ignore"):
                out = np.where(hi, self._tail_a / np.where(hi, x, 1.0) ** 2, out)
        return out

    def eps_imag(self, xi):
        return 1.0 + self._chi(xi)

    def chi_xi2(self, xi):
        x = np.asarray(xi, dtype=float)
        return self._chi(x) * x ** 2

    @property
    def breakpoints(self):
        return tuple(float(v) for v in self.xi)

    def deps_imag(self, xi, step=1e-4):
        """Centered difference on a log grid: x*exp(+-step)."""
        x = np.asarray(xi, dtype=float)
        up = self.eps_imag(x * math.exp(step)) if self.tail else self.eps_imag(
            np.minimum(x * math.exp(step), self.xi[-1]))
        dn = self.eps_imag(x * math.exp(-step)) if self.tail else self.eps_imag(
            np.maximum(x * math.exp(-step), self.xi[0]))
        xu = x * math.exp(step) if self.tail else np.minimum(x * math.exp(step), self.xi[-1])
        xd = x * math.exp(-step) if self.tail else np.maximum(x * math.exp(-step), self.xi[0])
        return (up - dn) / (xu - xd)


def _check_positive(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise DomainError("real frequency must be > 0")
    return w


def eps_real_axis(model, omega):
    """Permittivity at real angular frequency ``omega`` > 0 (complex)."""
    if isinstance(model, TabulatedImagAxis):
        raise UnsupportedAxisError("imaginary-axis tables cannot be evaluated on the real axis")
    w = _check_positive(omega)
    out = model.eps_real(w)
    return complex(out) if np.ndim(out) == 0 else out


def eps_imag_axis(model, xi):
    """Permittivity at imaginary frequency ``i*xi``, ``xi >= 0`` (real)."""
    x = np.asarray(xi, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("xi must be >= 0")
    out = model.eps_imag(x)
    return float(out) if np.ndim(out) == 0 else out


def polarizability(params, omega):
    r"""Single-atom polarizability :math:`(e^2/m)/(\omega_0^2 - \omega^2 - i\gamma\omega)`.

    ``params.coupling`` is e²/m. ``omega`` may be complex (closed upper
    half-plane); on the imaginary axis the result is real and positive.
    """
    w = np.asarray(omega, dtype=complex)
    if np.any(w.imag < 0):
        raise DomainError("omega must lie in the closed upper half-plane")
    den = params.omega_0 ** 2 - w ** 2 - 1j * params.gamma * w
    if np.any(den == 0):
        raise PoleError("undamped resonance: gamma = 0 and omega = omega_0")
    out = params.coupling / den
    return complex(out) if out.ndim == 0 else out


def polarizability_imag(params, xi):
    """Real polarizability at ``i*xi`` (vectorized, float output)."""
    x = np.asarray(xi, dtype=float)
    return params.coupling / (params.omega_0 ** 2 + x ** 2 + params.gamma * x)


def gas_permittivity(params, number_density):
    """Lorentz model of a dilute gas of identical atoms, eps = 1 + 4 pi N alpha."""
    return Lorentz(4 * math.pi * number_density * params.coupling, params.omega_0, params.gamma)


def kk_consistency_residual(model, xi_grid, spec=DEFAULT_SPEC):
    r"""Max relative deviation between eps(i xi) and its Kramers-Kronig image.

    The image is :math:`1 + (2/\pi)\int_0^\infty \omega\,\epsilon_I(\omega)/(\omega^2+\xi^2)\,d\omega`,
    integrated with breakpoints at every resonance.
    """
    if isinstance(model, TabulatedImagAxis):
        raise UnsupportedAxisError("tabulated imaginary-axis data has no real-axis loss to integrate")
    if isinstance(model, (Vacuum, IdealMirror)) or model.lossless:
        return 0.0
    res = list(model.resonances)
    gammas = [o.gamma for o in model.oscillators if o.gamma > 0]
    scale = max(res + gammas) if (res or gammas) else 1.0
    worst = 0.0
    for xi in np.atleast_1d(np.asarray(xi_grid, dtype=float)):
        if xi < 0:
            raise DomainError("xi must be >= 0")

        def integrand(w, xi=xi):
            return w * model.eps_imag_part(w) / (w ** 2 + xi ** 2)

        pts = []
        for o in model.oscillators:
            if o.omega_0 > 0:
                pts += [o.omega_0 - 2 * o.gamma, o.omega_0, o.omega_0 + 2 * o.gamma]
        pts = [p for p in pts if p > 0]
        upper = 4 * max(pts + [scale])
        try:
            head = gauss_kronrod(integrand, 0.0, upper, spec, points=pts)
            tail = integrate_half_line(integrand, upper, upper, spec)
        except ConvergenceError as exc:
            raise ConvergenceError(f"KK integral failed at xi={xi}: {exc}") from exc
        rebuilt = 1.0 + 2.0 / math.pi * (head.value + tail.value)
        direct = float(eps_imag_axis(model, xi))
        worst = max(worst, abs(rebuilt - direct) / abs(direct))
    return worst
