"""Bath description: spectral density, thermal factors, spatial correlation.

Everything downstream of the microscopic bath enters through a handful of
numbers evaluated at the qubit splitting ``Delta``:

* the golden-rule rate ``gamma0 = 2 pi J(Delta)``,
* the thermal occupation ``N`` (equivalently the ratio
  ``R = 1/(1 + 2N) = tanh(Delta / 2 T)``),
* the correlation deficit ``delta = 1 - f(kappa(Delta) d)`` measuring how
  much the two qubits' local environments differ at separation ``d``,
* the Lamb-shift strengths ``A`` and ``B`` (principal-value integrals over
  the full spectral density).

The spatial correlation function ``f`` depends on the bath dimension:
``cos x`` in 1D, the Bessel function ``J_0(x)`` in 2D and ``sin(x)/x`` in
3D, with ``x = kappa(omega) d`` and a linear dispersion by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import InvalidRatesError, NumericalFailureError

__all__ = [
    "SpectralDensity",
    "BathGeometry",
    "BathThermal",
    "RateSet",
    "thermal_occupation",
    "bessel_j0",
    "spatial_correlation",
    "correlation_delta",
    "build_rates",
    "lamb_shift_coefficients",
]


# ---------------------------------------------------------------------------
# Spectral density
# ---------------------------------------------------------------------------

OHMIC = "ohmic"
TABULATED = "tabulated"
EXPONENTIAL_CUTOFF = "exponential"
HARD_CUTOFF = "hard"


@dataclass(frozen=True)
class SpectralDensity:
    """Bath spectral density ``J(omega)``, zero for ``omega <= 0``.

    The Ohmic form is ``J(omega) = (coupling / 2) * omega`` times an
    exponential or hard cutoff at ``cutoff_frequency``.  Tabulated data is
    interpolated linearly and vanishes outside the tabulated range.
    """

    form: str = OHMIC
    coupling: float = 0.0
    cutoff_frequency: float = 0.0
    cutoff_form: str = EXPONENTIAL_CUTOFF
    table: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.form not in (OHMIC, TABULATED):
            raise ValueError(f"unknown spectral form {self.form!r}")
        if self.form == OHMIC:
            if self.coupling < 0:
                raise ValueError("ohmic coupling must be non-negative")
            if self.cutoff_frequency <= 0:
                raise ValueError("a positive cutoff frequency is required")
            if self.cutoff_form not in (EXPONENTIAL_CUTOFF, HARD_CUTOFF):
                raise ValueError(f"unknown cutoff form {self.cutoff_form!r}")
        else:
            table = np.asarray(self.table, dtype=float)
            if table.ndim != 2 or table.shape[1] != 2 or table.shape[0] < 2:
                raise ValueError("table must be an (n, 2) array of (omega, J) rows")
            if np.any(np.diff(table[:, 0]) <= 0):
                raise ValueError("table frequencies must be strictly increasing")
            if np.any(table[:, 1] < 0):
                raise ValueError("tabulated J values must be non-negative")
            table.setflags(write=False)
            object.__setattr__(self, "table", table)

    @classmethod
    def ohmic(
        cls,
        coupling: float,
        cutoff_frequency: float,
        cutoff_form: str = EXPONENTIAL_CUTOFF,
    ) -> "SpectralDensity":
        return cls(OHMIC, coupling, cutoff_frequency, cutoff_form)

    @classmethod
    def from_table(cls, omega, values) -> "SpectralDensity":
        table = np.column_stack([omega, values])
        return cls(form=TABULATED, table=table)

    @classmethod
    def from_table_file(cls, path) -> "SpectralDensity":
        """Load a two-column (omega, J) text table."""
        data = np.loadtxt(path)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        return cls(form=TABULATED, table=data)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.form == OHMIC:
            value = 0.5 * self.coupling * omega
            if self.cutoff_form == EXPONENTIAL_CUTOFF:
                value = value * np.exp(-omega / self.cutoff_frequency)
            else:
                value = np.where(omega <= self.cutoff_frequency, value, 0.0)
        else:
            value = np.interp(omega, self.table[:, 0], self.table[:, 1], left=0.0, right=0.0)
        value = np.where(omega > 0.0, value, 0.0)
        return float(value) if value.ndim == 0 else value

    def support_limit(self) -> float:
        """Frequency beyond which J is (numerically) negligible."""
        if self.form == TABULATED:
            return float(self.table[-1, 0])
        if self.cutoff_form == HARD_CUTOFF:
            return self.cutoff_frequency
        return 45.0 * self.cutoff_frequency


# ---------------------------------------------------------------------------
# Geometry and thermal state of the bath
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BathGeometry:
    """Qubit separation ``d``, bath dimension and dispersion ``kappa(omega)``.

    The default dispersion is linear, ``kappa = omega / velocity``.  An
    arbitrary map can be supplied through ``dispersion``.
    """

    separation: float = 0.0
    dimension: int = 1
    velocity: float = 1.0
    dispersion: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.separation < 0:
            raise ValueError("separation must be non-negative")
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"bath dimension must be 1, 2 or 3, got {self.dimension}")
        if self.dispersion is None and self.velocity <= 0:
            raise ValueError("velocity must be positive for the linear dispersion")

    def kappa(self, omega):
        if self.dispersion is not None:
            return self.dispersion(omega)
        return np.asarray(omega, dtype=float) / self.velocity


@dataclass(frozen=True)
class BathThermal:
    """Thermal occupation ``N`` at the system frequency.

    The equivalent ratio ``R = 1/(1 + 2N)`` (the asymptotic single-spin
    x-polarization) is derived on demand so the two parametrizations can
    never drift apart.
    """

    occupation: float = 0.0

    def __post_init__(self):
        if not self.occupation >= 0:
            raise ValueError("occupation must be non-negative")

    @property
    def ratio(self) -> float:
        """R = 1/(1 + 2N), in (0, 1]."""
        return 1.0 / (1.0 + 2.0 * self.occupation)

    @classmethod
    def from_occupation(cls, occupation: float) -> "BathThermal":
        return cls(occupation)

    @classmethod
    def from_ratio(cls, ratio: float) -> "BathThermal":
        if not 0.0 < ratio <= 1.0:
            raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
        return cls((1.0 / ratio - 1.0) / 2.0)

    @classmethod
    def from_temperature(cls, delta_freq: float, temperature: float) -> "BathThermal":
        return cls(thermal_occupation(delta_freq, temperature))

    def coth_factor(self, omega: float, delta_freq: float) -> float:
        """``coth(omega / 2T)`` for the temperature implied by (N, Delta).

        Uses ``Delta / 2T = artanh(R)``; at zero temperature (N = 0) the
        factor is identically 1 for positive frequencies.
        """
        if self.occupation == 0.0:
            return 1.0
        arg = omega * math.atanh(self.ratio) / delta_freq
        return 1.0 / math.tanh(arg)


def thermal_occupation(delta_freq: float, temperature: float) -> float:
    """Bose-Einstein occupation ``1 / (exp(Delta/T) - 1)``.

    ``temperature`` is in energy units (k_B absorbed); zero maps to zero
    occupation.
    """
    if delta_freq <= 0:
        raise ValueError(f"frequency must be positive, got {delta_freq}")
    if temperature < 0:
        raise ValueError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(delta_freq / temperature)


# ---------------------------------------------------------------------------
# Spatial correlation function
# ---------------------------------------------------------------------------


def bessel_j0(x):
    """Bessel function J_0, accurate to about 1e-10 over the real line.

    Power series below |x| = 12; Hankel asymptotic expansion beyond,
    truncated at its smallest term.  (The asymptotic series only reaches
    ~1e-8 at |x| = 8, so the switch point sits higher than the customary
    8 to meet the accuracy target on both sides.)
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(np.abs(x))
    out = np.empty_like(x)

    small = x < 12.0
    if np.any(small):
        xs = x[small]
        quarter = 0.25 * xs * xs
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        for k in range(1, 60):
            term = term * (-quarter) / (k * k)
            total += term
            if np.all(np.abs(term) < 1e-17 * (1.0 + np.abs(total))):
                break
        out[small] = total

    if np.any(~small):
        xl = x[~small]
        # Hankel coefficients a_n = -a_{n-1} (2n - 1)^2 / (8 n); the series
        # is asymptotic, so each element stops at its own smallest term.
        p = np.ones_like(xl)
        q = np.zeros_like(xl)
        coeff = 1.0
        power = np.ones_like(xl)
        prev = np.full_like(xl, np.inf)
        active = np.ones(xl.shape, dtype=bool)
        for n in range(1, 31):
            coeff = coeff * (-((2 * n - 1) ** 2)) / (8.0 * n)
            power = power / xl
            term = coeff * power
            active &= np.abs(term) < prev
            if not active.any():
                break
            contrib = np.where(active, term, 0.0)
            half, odd = divmod(n, 2)
            sign = -1.0 if half % 2 else 1.0
            if odd:
                q += sign * contrib
            else:
                p += sign * contrib
            prev = np.abs(term)
        chi = xl - 0.25 * math.pi
        out[~small] = np.sqrt(2.0 / (math.pi * xl)) * (
            p * np.cos(chi) - q * np.sin(chi)
        )

    return float(out[0]) if scalar else out


def spatial_correlation(x, dimension: int):
    """Normalized bath correlation profile ``f(x)`` at scaled separation x.

    ``cos(x)`` for a 1D bath, ``J_0(x)`` for 2D, ``sin(x)/x`` for 3D; all
    satisfy ``f(0) = 1`` and ``|f| <= 1``.
    """
    if dimension == 1:
        value = np.cos(x)
    elif dimension == 2:
        value = bessel_j0(x)
    elif dimension == 3:
        x = np.asarray(x, dtype=float)
        value = np.where(x == 0.0, 1.0, np.divide(np.sin(x), np.where(x == 0.0, 1.0, x)))
        value = float(value) if value.ndim == 0 else value
    else:
        raise ValueError(f"bath dimension must be 1, 2 or 3, got {dimension}")
    if np.ndim(value) == 0:
        return float(value)
    return value


def correlation_delta(
    geometry: BathGeometry, delta_freq: float, approx: bool = False
) -> float:
    """Correlation deficit ``delta = 1 - f(kappa(Delta) d)``.

    With ``approx=True`` the small-separation quadratic form
    ``(kappa d)^2 / (2 D)`` is used instead of the exact profile; the two
    agree to second order in ``kappa d``.
    """
    if delta_freq <= 0:
        raise ValueError(f"frequency must be positive, got {delta_freq}")
    x = float(geometry.kappa(delta_freq)) * geometry.separation
    if approx:
        return x * x / (2.0 * geometry.dimension)
    return 1.0 - float(spatial_correlation(x, geometry.dimension))


# ---------------------------------------------------------------------------
# Decay rates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateSet:
    """Golden-rule rates entering the dissipator.

    Same-qubit rates carry the thermal factors, ``gamma11(+Delta) =
    (N + 1) gamma0`` for emission and ``gamma11(-Delta) = N gamma0`` for
    absorption; cross-qubit rates are suppressed by the correlation
    deficit, ``gamma12 = (1 - delta) gamma11``.  Positivity of each 2x2
    rate matrix requires ``delta`` in [0, 2].
    """

    gamma0: float
    gamma11_plus: float
    gamma11_minus: float
    gamma12_plus: float
    gamma12_minus: float
    delta: float

    @classmethod
    def from_parameters(
        cls, gamma0: float, thermal: BathThermal, delta: float
    ) -> "RateSet":
        if gamma0 <= 0:
            raise InvalidRatesError(f"gamma0 must be positive, got {gamma0}")
        if not 0.0 <= delta <= 2.0:
            raise InvalidRatesError(
                f"correlation deficit {delta} outside [0, 2] violates positivity"
            )
        n = thermal.occupation
        g_plus = (n + 1.0) * gamma0
        g_minus = n * gamma0
        return cls(
            gamma0=gamma0,
            gamma11_plus=g_plus,
            gamma11_minus=g_minus,
            gamma12_plus=(1.0 - delta) * g_plus,
            gamma12_minus=(1.0 - delta) * g_minus,
            delta=delta,
        )

    @property
    def occupation(self) -> float:
        return self.gamma11_minus / self.gamma0

    @property
    def ratio(self) -> float:
        return 1.0 / (1.0 + 2.0 * self.occupation)


def build_rates(
    spectral: SpectralDensity,
    thermal: BathThermal,
    geometry: BathGeometry,
    delta_freq: float,
    approx_delta: bool = False,
) -> RateSet:
    """Assemble the dissipator rates for a splitting ``delta_freq``.

    Raises :class:`InvalidRatesError` when ``J(delta_freq)`` is not
    positive or the (approximate) correlation deficit breaks positivity.
    """
    j_at_delta = float(spectral(delta_freq))
    if j_at_delta <= 0.0:
        raise InvalidRatesError(
            f"spectral density at the splitting is {j_at_delta}; rates undefined"
        )
    gamma0 = 2.0 * math.pi * j_at_delta
    delta = correlation_delta(geometry, delta_freq, approx=approx_delta)
    return RateSet.from_parameters(gamma0, thermal, delta)


# ---------------------------------------------------------------------------
# Lamb-shift coefficients (principal-value integrals)
# ---------------------------------------------------------------------------

_QUAD_OPTS = dict(limit=400, epsabs=1e-13, epsrel=1e-11)


def _excised_integral(integrand, pole: float, upper: float, eps: float) -> float:
    left, _ = integrate.quad(integrand, 0.0, pole - eps, **_QUAD_OPTS)
    right, _ = integrate.quad(integrand, pole + eps, upper, **_QUAD_OPTS)
    return left + right


def _principal_value(integrand, pole: float, upper: float, rel_tol: float) -> float:
    """PV integral of ``integrand`` over (0, upper) with a simple pole.

    Symmetric excision of a shrinking window around the pole followed by
    three rounds of Richardson extrapolation in the window half-width:
    the excision error is odd in eps (c1*eps + c3*eps^3 + c5*eps^5 ...),
    so successive rounds cancel eps, eps^3 and eps^5.
    """
    if not 0.0 < pole < upper:
        value, _ = integrate.quad(integrand, 0.0, upper, **_QUAD_OPTS)
        return value
    scale = min(pole, upper - pole)
    eps_ladder = [scale * frac for frac in (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625)]
    estimates = [_excised_integral(integrand, pole, upper, eps) for eps in eps_ladder]
    raw_magnitude = sum(abs(v) for v in estimates)
    for weight in (2.0, 8.0, 32.0):
        estimates = [
            (weight * estimates[i + 1] - estimates[i]) / (weight - 1.0)
            for i in range(len(estimates) - 1)
        ]
    magnitude = max(1e-30, abs(estimates[-1]))
    drift = abs(estimates[-1] - estimates[-2])
    if drift > rel_tol * magnitude + 1e-13 * (1.0 + raw_magnitude):
        raise NumericalFailureError(
            "principal-value extrapolation did not converge: "
            f"estimates {estimates}, smallest excision width {eps_ladder[-1]}"
        )
    return estimates[-1]


def lamb_shift_coefficients(
    spectral: SpectralDensity,
    thermal: BathThermal,
    geometry: BathGeometry,
    delta_freq: float,
    rel_tol: float = 1e-6,
) -> tuple[float, float]:
    """Strengths of the bath-induced Hamiltonian corrections.

    ``A`` multiplies the single-qubit field term and ``B`` the exchange-like
    two-qubit term:

        A = 2 PV int_0^inf J(w) coth(w / 2T) Delta / (Delta^2 - w^2) dw
        B =   PV int_0^inf J(w) f(kappa(w) d)   w   / (Delta^2 - w^2) dw

    ``A`` is independent of the qubit separation by construction.  A
    spectral density without sufficient falloff makes these integrals
    ill-defined; non-convergence raises :class:`NumericalFailureError`.
    """
    if delta_freq <= 0:
        raise ValueError(f"frequency must be positive, got {delta_freq}")
    upper = spectral.support_limit()
    floor = 1e-12 * delta_freq

    def integrand_a(omega: float) -> float:
        omega = max(omega, floor)
        num = 2.0 * spectral(omega) * thermal.coth_factor(omega, delta_freq) * delta_freq
        return num / ((delta_freq - omega) * (delta_freq + omega))

    def integrand_b(omega: float) -> float:
        omega = max(omega, floor)
        x = float(geometry.kappa(omega)) * geometry.separation
        num = spectral(omega) * spatial_correlation(x, geometry.dimension) * omega
        return num / ((delta_freq - omega) * (delta_freq + omega))

    coeff_a = _principal_value(integrand_a, delta_freq, upper, rel_tol)
    coeff_b = _principal_value(integrand_b, delta_freq, upper, rel_tol)
    return coeff_a, coeff_b
