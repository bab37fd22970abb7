"""Equation of motion for the 16-component Pauli vector.

The master equation (coherent part plus a secular dissipator built from
the ``(sigma_z -+ i sigma_y)/2`` eigenoperators of the transverse field)
is linear, so in the Pauli-product basis it reads ``d alpha/dt = L alpha``
with a real 16x16 generator ``L``.  The matrix is assembled by applying
the superoperator to each basis operator ``sigma_i (x) sigma_j / 4`` and
projecting back.

For a strictly positive correlation deficit the spectrum splits into

* one zero mode — the thermal (Gibbs) product state,
* one slow real mode, rate ``~ (1 + 3N) * delta * gamma0``, which carries
  all long-lived entanglement,
* one weakly damped conjugate pair oscillating at the qubit splitting,
* twelve fast modes decaying at rates of order ``gamma0 / R``.

:func:`classify_spectrum` performs that split numerically and returns a
bi-orthonormal left/right eigensystem for spectral propagation.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .bath import RateSet
from .errors import DefectiveSpectrumError, DegenerateSpectrumError
from .states import PAULI, PAULI_PRODUCTS, PauliVector, flat_index

__all__ = [
    "ModelParams",
    "GeneratorMatrix",
    "SpectrumReport",
    "build_generator",
    "hamiltonian_matrix",
    "classify_spectrum",
    "mode_coefficients",
    "analytic_slow_eigenpair",
    "thermal_alpha",
    "slow_alpha_pattern",
    "oscillatory_alpha_pattern",
    "generator_to_json",
    "spectrum_to_json",
]

_I2 = np.eye(2, dtype=complex)
_SX, _SY, _SZ = PAULI[1], PAULI[2], PAULI[3]

#: total x-polarization sigma_x^(1) + sigma_x^(2)
_X_TOTAL = np.kron(_SX, _I2) + np.kron(_I2, _SX)
_ZZ_PLUS_YY = np.kron(_SZ, _SZ) + np.kron(_SY, _SY)
_HEISENBERG = np.kron(_SX, _SX) + _ZZ_PLUS_YY

# Eigenoperators of the field term for each qubit: lowering at +Delta,
# raising at -Delta (in the x eigenbasis of the local field).
_LOWER = 0.5 * (_SZ - 1j * _SY)
_RAISE = 0.5 * (_SZ + 1j * _SY)
_OPS_PLUS = (np.kron(_LOWER, _I2), np.kron(_I2, _LOWER))
_OPS_MINUS = (np.kron(_RAISE, _I2), np.kron(_I2, _RAISE))


@dataclass(frozen=True)
class ModelParams:
    """Coherent-sector parameters.

    ``delta_field`` is the transverse splitting; ``lamb_a``/``lamb_b`` are
    the strengths of the bath-induced single-qubit and two-qubit
    Hamiltonian corrections, ``exchange_xi`` the isotropic exchange

        H = -(delta_field/2) (sx1 + sx2)
            + lamb_a (sx1 + sx2) + lamb_b (sz1 sz2 + sy1 sy2)
            + exchange_xi (sx1 sx2 + sy1 sy2 + sz1 sz2).
    """

    delta_field: float
    lamb_a: float = 0.0
    lamb_b: float = 0.0
    exchange_xi: float = 0.0

    def __post_init__(self):
        if self.delta_field <= 0:
            raise ValueError(f"delta_field must be positive, got {self.delta_field}")


@dataclass(frozen=True)
class GeneratorMatrix:
    """Real 16x16 generator with its construction context attached."""

    entries: np.ndarray
    params: ModelParams
    rates: RateSet
    include_lamb: bool = False
    include_exchange: bool = False

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.shape != (16, 16):
            raise ValueError(f"generator must be 16x16, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def apply(self, alpha) -> np.ndarray:
        vec = alpha.alpha if isinstance(alpha, PauliVector) else np.asarray(alpha)
        return self.entries @ vec


def hamiltonian_matrix(
    params: ModelParams, include_lamb: bool = False, include_exchange: bool = False
) -> np.ndarray:
    """4x4 Hamiltonian for the coherent part of the evolution."""
    ham = -(params.delta_field / 2.0) * _X_TOTAL
    if include_lamb:
        ham = ham + params.lamb_a * _X_TOTAL + params.lamb_b * _ZZ_PLUS_YY
    if include_exchange:
        ham = ham + params.exchange_xi * _HEISENBERG
    return ham


def _apply_master_equation(
    state: np.ndarray, ham: np.ndarray, rates: RateSet
) -> np.ndarray:
    """Right-hand side of the master equation for one 4x4 operator."""
    out = -1j * (ham @ state - state @ ham)
    for (same, cross), ops in (
        ((rates.gamma11_plus, rates.gamma12_plus), _OPS_PLUS),
        ((rates.gamma11_minus, rates.gamma12_minus), _OPS_MINUS),
    ):
        for n in range(2):
            for m in range(2):
                g = same if n == m else cross
                if g == 0.0:
                    continue
                a_m = ops[m]
                a_n_dag = ops[n].conj().T
                sandwich = a_m @ state @ a_n_dag
                overlap = a_n_dag @ a_m
                out = out + g * (
                    sandwich - 0.5 * (overlap @ state + state @ overlap)
                )
    return out


def build_generator(
    params: ModelParams,
    rates: RateSet,
    include_lamb: bool = False,
    include_exchange: bool = False,
) -> GeneratorMatrix:
    """Assemble the Pauli-vector generator ``L``.

    Trace preservation makes the first row vanish identically; it is
    zeroed exactly after an internal consistency check.  All entries are
    real by Hermiticity preservation.
    """
    ham = hamiltonian_matrix(params, include_lamb, include_exchange)
    entries = np.empty((16, 16))
    scale = max(
        abs(params.delta_field), rates.gamma11_plus, abs(params.lamb_b), 1e-300
    )
    for col in range(16):
        image = _apply_master_equation(PAULI_PRODUCTS[col] / 4.0, ham, rates)
        projected = np.einsum("kab,ba->k", PAULI_PRODUCTS, image)
        residue = float(np.max(np.abs(projected.imag)))
        if residue > 1e-10 * scale:
            raise RuntimeError(
                f"generator column {col} has imaginary residue {residue:.3e}"
            )
        entries[:, col] = projected.real
    top = float(np.max(np.abs(entries[0])))
    if top > 1e-10 * scale:
        raise RuntimeError(f"trace-preservation defect {top:.3e} in generator")
    entries[0] = 0.0
    return GeneratorMatrix(entries, params, rates, include_lamb, include_exchange)


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    """Classified eigensystem of a generator.

    ``right[:, k]`` is the k-th right eigenvector and ``left[k]`` the
    matching left eigenvector, normalized so that
    ``vdot(left[k], right[:, l]) = delta_kl``.  Mode order is thermal,
    slow, oscillatory pair (positive imaginary part first), then fast
    modes by decreasing real part.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    labels: tuple
    gamma0: float
    delta: float
    fast_violations: tuple

    def __post_init__(self):
        for name in ("eigenvalues", "right", "left"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def thermal_index(self) -> int:
        return self.labels.index("thermal")

    @property
    def slow_index(self) -> int:
        return self.labels.index("slow")

    @property
    def oscillatory_indices(self) -> tuple:
        return tuple(k for k, lab in enumerate(self.labels) if lab == "oscillatory")

    @property
    def fast_indices(self) -> tuple:
        return tuple(k for k, lab in enumerate(self.labels) if lab == "fast")

    @property
    def slow_eigenvalue(self) -> float:
        return float(self.eigenvalues[self.slow_index].real)


def _pair_conjugates(values: np.ndarray, indices: list) -> list:
    """Group indices of complex eigenvalues into conjugate pairs."""
    pool = sorted(indices, key=lambda k: -values[k].imag)
    pairs = []
    used = set()
    for k in pool:
        if k in used or values[k].imag <= 0:
            continue
        partner = min(
            (j for j in pool if j not in used and values[j].imag < 0),
            key=lambda j: abs(values[j] - values[k].conjugate()),
            default=None,
        )
        if partner is None:
            continue
        used.update((k, partner))
        pairs.append((k, partner))
    return pairs


def classify_spectrum(generator: GeneratorMatrix) -> SpectrumReport:
    """Eigendecompose and label the generator spectrum.

    Requires a strictly positive correlation deficit; at ``delta = 0`` the
    zero eigenvalue is degenerate and no unique thermal mode exists.
    """
    rates = generator.rates
    gamma0 = rates.gamma0
    if rates.delta <= 0.0:
        raise DegenerateSpectrumError(
            "spectrum classification needs delta > 0; the zero eigenvalue is "
            "degenerate for perfectly correlated baths"
        )
    values, right = np.linalg.eig(generator.entries)
    if np.linalg.cond(right) > 1e12:
        raise DefectiveSpectrumError(
            "eigenvector matrix is numerically singular; generator is defective"
        )

    tol_zero = 1e-9 * gamma0
    tol_imag = 1e-9 * gamma0

    zero_modes = [k for k in range(16) if abs(values[k]) < tol_zero]
    if len(zero_modes) != 1:
        raise DegenerateSpectrumError(
            f"expected exactly one zero mode, found {len(zero_modes)}",
            candidates=values[zero_modes],
        )
    thermal = zero_modes[0]

    real_modes = [
        k
        for k in range(16)
        if k != thermal and abs(values[k].imag) < tol_imag
    ]
    if not real_modes:
        raise DegenerateSpectrumError("no real nonzero eigenvalue to label as slow")
    real_modes.sort(key=lambda k: abs(values[k].real))
    slow = real_modes[0]
    if len(real_modes) > 1:
        gap = abs(abs(values[real_modes[1]].real) - abs(values[slow].real))
        if gap < 1e-10 * gamma0:
            raise DegenerateSpectrumError(
                "two slow-mode candidates are degenerate",
                candidates=(values[slow], values[real_modes[1]]),
            )

    complex_modes = [
        k for k in range(16) if k != thermal and abs(values[k].imag) >= tol_imag
    ]
    pairs = _pair_conjugates(values, complex_modes)
    if not pairs:
        raise DegenerateSpectrumError("no conjugate pair available as oscillatory")
    # The slowly decaying pair oscillates at the bare splitting.  Lamb or
    # exchange terms shift mode frequencies, so the proximity filter only
    # applies to undressed generators; the slowest complex pair is the
    # discriminating feature either way.
    delta_field = generator.params.delta_field
    if not (generator.include_lamb or generator.include_exchange):
        near = [
            pr
            for pr in pairs
            if abs(values[pr[0]].imag - delta_field) <= 0.5 * delta_field
        ]
        candidates = near if near else pairs
    else:
        candidates = pairs
    candidates.sort(key=lambda pr: -values[pr[0]].real)
    if (
        len(candidates) > 1
        and abs(values[candidates[0][0]].real - values[candidates[1][0]].real)
        < 1e-10 * gamma0
    ):
        raise DegenerateSpectrumError(
            "two oscillatory-pair candidates are degenerate",
            candidates=(values[candidates[0][0]], values[candidates[1][0]]),
        )
    osc_plus, osc_minus = candidates[0]

    fast = [k for k in range(16) if k not in (thermal, slow, osc_plus, osc_minus)]
    fast.sort(key=lambda k: (-values[k].real, -values[k].imag))

    order = [thermal, slow, osc_plus, osc_minus] + fast
    values = values[order]
    right = right[:, order]
    labels = ("thermal", "slow", "oscillatory", "oscillatory") + ("fast",) * 12

    right = right.copy()
    right[:, 0] = right[:, 0] / right[0, 0]
    slow_anchor = right[flat_index(2, 2), 1]
    if abs(slow_anchor) > 1e-6 * np.linalg.norm(right[:, 1]):
        right[:, 1] = right[:, 1] / slow_anchor
    for k in range(2, 16):
        vec = right[:, k]
        lead = vec[np.argmax(np.abs(vec))]
        right[:, k] = vec / lead * abs(lead) / np.linalg.norm(vec)

    left = np.linalg.inv(right).conj()

    ratio = rates.ratio
    bound = -0.5 * gamma0 / ratio
    violations = tuple(
        (k, complex(values[k]))
        for k in range(4, 16)
        if values[k].real > bound + 1e-9 * gamma0
    )

    return SpectrumReport(
        eigenvalues=values,
        right=right,
        left=left,
        labels=labels,
        gamma0=gamma0,
        delta=rates.delta,
        fast_violations=violations,
    )


def mode_coefficients(report: SpectrumReport, initial) -> np.ndarray:
    """Expansion amplitudes ``a_l = <left_l | alpha(0)>``.

    The reconstruction ``sum_l a_l right_l`` reproduces the input; the
    thermal amplitude is exactly the trace component of the input, so it
    equals one for any valid state.
    """
    alpha = initial.alpha if isinstance(initial, PauliVector) else np.asarray(initial)
    return report.left.conj() @ alpha


# ---------------------------------------------------------------------------
# Analytic patterns
# ---------------------------------------------------------------------------


def thermal_alpha(ratio: float) -> PauliVector:
    """Stationary (thermal product) state: polarization R along x."""
    return PauliVector.from_components(
        {(0, 0): 1.0, (0, 1): ratio, (1, 0): ratio, (1, 1): ratio * ratio}
    )


def slow_alpha_pattern(ratio: float) -> PauliVector:
    """Leading-order slow eigenvector, scaled to unit yy/zz components."""
    return PauliVector.from_components(
        {
            (0, 1): ratio,
            (1, 0): ratio,
            (1, 1): 1.0 + ratio * ratio,
            (2, 2): 1.0,
            (3, 3): 1.0,
        }
    )


def oscillatory_alpha_pattern() -> np.ndarray:
    """Limiting oscillatory eigenvector (complex), for the mode whose
    eigenvalue has negative imaginary part."""
    vec = np.zeros(16, dtype=complex)
    vec[flat_index(0, 2)] = 1j
    vec[flat_index(0, 3)] = 1.0
    vec[flat_index(1, 2)] = 1j
    vec[flat_index(1, 3)] = 1.0
    vec[flat_index(2, 0)] = -1j
    vec[flat_index(3, 0)] = -1.0
    vec[flat_index(2, 1)] = -1j
    vec[flat_index(3, 1)] = -1.0
    return vec


def analytic_slow_eigenpair(rates: RateSet) -> tuple[float, PauliVector]:
    """First-order slow eigenvalue and its limiting eigenvector.

    ``lambda_1 = -(1 + 3N) delta gamma0``, valid to first order in the
    correlation deficit and through second order in the occupation.
    Warns when the deficit is large enough (> 0.2) that the first-order
    form is only qualitative.
    """
    if rates.delta > 0.2:
        warnings.warn(
            f"first-order slow eigenvalue requested at deficit {rates.delta}; "
            "corrections are O(delta) and no longer small",
            stacklevel=2,
        )
    n = rates.occupation
    eigenvalue = -(1.0 + 3.0 * n) * rates.delta * rates.gamma0
    return eigenvalue, slow_alpha_pattern(rates.ratio)


# ---------------------------------------------------------------------------
# JSON export
# ---------------------------------------------------------------------------


def generator_to_json(generator: GeneratorMatrix) -> str:
    payload = {
        "entries_row_major": [float(x) for x in generator.entries.reshape(-1)],
        "delta_field": generator.params.delta_field,
        "lamb_a": generator.params.lamb_a,
        "lamb_b": generator.params.lamb_b,
        "exchange_xi": generator.params.exchange_xi,
        "include_lamb": generator.include_lamb,
        "include_exchange": generator.include_exchange,
        "gamma0": generator.rates.gamma0,
        "delta": generator.rates.delta,
        "occupation": generator.rates.occupation,
    }
    return json.dumps(payload, sort_keys=True)


def spectrum_to_json(report: SpectrumReport) -> str:
    payload = {
        "gamma0": report.gamma0,
        "delta": report.delta,
        "modes": [
            {
                "index": k,
                "label": report.labels[k],
                "re": report.eigenvalues[k].real,
                "im": report.eigenvalues[k].imag,
                "right_re": [float(v) for v in report.right[:, k].real],
                "right_im": [float(v) for v in report.right[:, k].imag],
            }
            for k in range(16)
        ],
        "fast_violations": [
            {"index": k, "re": v.real, "im": v.imag}
            for k, v in report.fast_violations
        ],
    }
    return json.dumps(payload, sort_keys=True)
