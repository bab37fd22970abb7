"""Two-qubit states in the Pauli-product (generalized Bloch) representation.

A two-qubit density operator is expanded as

    rho = (1/4) * sum_{i,j=0..3} alpha_ij  sigma_i (x) sigma_j,

with sigma_0 the identity and sigma_1..3 the Pauli matrices, so that
``alpha_ij = Tr[rho (sigma_i (x) sigma_j)]`` are real expectation values.
The sixteen coefficients are kept as a flat vector in row-major order,
``alpha[4*i + j]``; normalization fixes ``alpha[0] == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError

__all__ = [
    "PAULI",
    "PAULI_PRODUCTS",
    "flat_index",
    "PauliVector",
    "TwoQubitDensityMatrix",
    "density_to_bloch",
    "bloch_to_density",
    "correlation_scalar",
    "wootters_concurrence",
    "maximally_mixed",
    "bell_singlet",
    "bell_triplet",
    "z_up_down",
    "x_up_down",
    "x_up_up",
    "werner",
    "state_for_correlation",
]

PAULI = np.array(
    [
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)

#: sigma_i (x) sigma_j for i, j = 0..3, flattened row-major: entry 4*i + j.
PAULI_PRODUCTS = np.stack(
    [np.kron(PAULI[i], PAULI[j]) for i in range(4) for j in range(4)]
)
PAULI_PRODUCTS.setflags(write=False)

# sigma_y (x) sigma_y is real; used by the spin-flip transform below.
_SYSY = np.kron(PAULI[2], PAULI[2]).real

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-12
_POSITIVITY_TOL = 1e-10
_IMAG_COMPONENT_TOL = 1e-10


def flat_index(i: int, j: int) -> int:
    """Row-major position of the ``sigma_i (x) sigma_j`` coefficient."""
    return 4 * i + j


def _as_alpha(vector) -> np.ndarray:
    alpha = np.asarray(
        vector.alpha if isinstance(vector, PauliVector) else vector, dtype=float
    )
    if alpha.shape == (4, 4):
        alpha = alpha.reshape(16)
    if alpha.shape != (16,):
        raise InvalidStateError(f"expected 16 Pauli components, got shape {alpha.shape}")
    return alpha


@dataclass(frozen=True)
class PauliVector:
    """Flat vector of the 16 Pauli-product expectation values.

    The container itself does not force ``alpha[0] == 1``: spectral
    eigenvectors and mode patterns reuse it with other normalizations.
    Operations that need a bona fide state check that condition themselves.
    """

    alpha: np.ndarray

    def __post_init__(self):
        alpha = _as_alpha(self.alpha)
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def from_components(cls, components: dict) -> "PauliVector":
        """Build from a sparse ``{(i, j): value}`` mapping; rest zero."""
        alpha = np.zeros(16)
        for (i, j), value in components.items():
            alpha[flat_index(i, j)] = value
        return cls(alpha)

    def component(self, i: int, j: int) -> float:
        return float(self.alpha[flat_index(i, j)])

    def as_matrix(self) -> np.ndarray:
        """The coefficients as a 4x4 array indexed ``[i, j]``."""
        return self.alpha.reshape(4, 4).copy()


@dataclass(frozen=True)
class TwoQubitDensityMatrix:
    """Validated 4x4 density matrix (Hermitian, unit trace).

    Positivity is not enforced at construction: truncated mode expansions
    legitimately produce slightly indefinite matrices.  Use
    :meth:`min_eigenvalue` or :meth:`assert_positive` where it matters.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidStateError(f"expected a 4x4 matrix, got shape {m.shape}")
        herm_defect = np.max(np.abs(m - m.conj().T))
        if herm_defect > _HERMITICITY_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (defect {herm_defect:.3e})")
        trace_defect = abs(m.trace() - 1.0)
        if trace_defect > _TRACE_TOL:
            raise InvalidStateError(f"trace differs from one by {trace_defect:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def assert_positive(self, tol: float = _POSITIVITY_TOL) -> None:
        lo = self.min_eigenvalue()
        if lo < -tol:
            raise InvalidStateError(f"matrix has eigenvalue {lo:.3e} below -{tol:.1e}")


def _as_density(rho) -> TwoQubitDensityMatrix:
    if isinstance(rho, TwoQubitDensityMatrix):
        return rho
    return TwoQubitDensityMatrix(rho)


def density_to_bloch(rho) -> PauliVector:
    """Project a density matrix onto the Pauli-product basis.

    Parameters
    ----------
    rho : TwoQubitDensityMatrix or (4, 4) array_like
        A valid density matrix (Hermitian, unit trace, positive up to
        numerical slack 1e-10).

    Returns
    -------
    PauliVector
        Real coefficients ``alpha_ij = Tr[rho (sigma_i (x) sigma_j)]``.

    Raises
    ------
    InvalidStateError
        If the input violates its invariants, or a projected component
        carries an imaginary part above 1e-10 (symptom of a corrupted
        input rather than roundoff).
    """
    dm = _as_density(rho)
    dm.assert_positive()
    alpha_c = np.einsum("kab,ba->k", PAULI_PRODUCTS, dm.matrix)
    worst = float(np.max(np.abs(alpha_c.imag)))
    if worst > _IMAG_COMPONENT_TOL:
        raise InvalidStateError(
            f"Pauli components have imaginary residue {worst:.3e} (tolerance 1e-10)"
        )
    return PauliVector(alpha_c.real)


def bloch_to_density(vector) -> TwoQubitDensityMatrix:
    """Reassemble ``rho = (1/4) sum_ij alpha_ij sigma_i (x) sigma_j``.

    The identity component must be exactly the trace: ``alpha[0] == 1``
    (within 1e-12).  Positivity is deliberately *not* checked — truncated
    expansions (analytic long-time states, single spectral modes) are
    allowed to leave the physical set.
    """
    alpha = _as_alpha(vector)
    if abs(alpha[0] - 1.0) > _TRACE_TOL:
        raise InvalidStateError(
            f"alpha[0] must be 1 for a unit-trace state, got {alpha[0]!r}"
        )
    matrix = np.tensordot(alpha, PAULI_PRODUCTS, axes=1) / 4.0
    return TwoQubitDensityMatrix(matrix)


def correlation_scalar(vector) -> float:
    """Sum of the three diagonal correlators, ``<xx> + <yy> + <zz>``.

    This single number controls the long-time entanglement dynamics; it
    lies in [-3, 1] for valid states (-3 for the singlet, +1 for the
    triplet Bell state and for the maximally mixed state it vanishes).
    Invariant under identical local rotations on both qubits.
    """
    alpha = _as_alpha(vector)
    return float(alpha[flat_index(1, 1)] + alpha[flat_index(2, 2)] + alpha[flat_index(3, 3)])


def wootters_concurrence(rho) -> float:
    """Concurrence of a two-qubit density matrix.

    Uses the spin-flip construction: with ``rho_tilde = (sy (x) sy)
    conj(rho) (sy (x) sy)``, the concurrence is ``max(0, sqrt(mu_1) -
    sqrt(mu_2) - sqrt(mu_3) - sqrt(mu_4))`` where ``mu_k`` are the
    eigenvalues of ``rho @ rho_tilde`` in decreasing order.  See
    https://en.wikipedia.org/wiki/Concurrence_(quantum_computing).

    Eigenvalue dust more negative than -1e-12 but within -1e-9 is clamped
    to zero before the square roots; anything worse raises.
    """
    dm = _as_density(rho)
    dm.assert_positive()
    return _concurrence(dm.matrix)


def _signed_concurrence(matrix: np.ndarray, dust_tol: float = 1e-9) -> float:
    """Unclamped spin-flip root difference; negative for separable states.

    Useful for root-finding on the entanglement boundary, where the
    clamped concurrence is identically zero on one side.
    """
    flipped = _SYSY @ matrix.conj() @ _SYSY
    mu = np.linalg.eigvals(matrix @ flipped)
    worst_imag = float(np.max(np.abs(mu.imag)))
    if worst_imag > max(1e-8, dust_tol):
        raise InvalidStateError(
            f"spin-flip spectrum has imaginary residue {worst_imag:.3e}"
        )
    mu = mu.real
    if mu.min() < -dust_tol:
        raise InvalidStateError(
            f"spin-flip spectrum has eigenvalue {mu.min():.3e} below -{dust_tol:.1e}"
        )
    roots = np.sqrt(np.sort(np.clip(mu, 0.0, None))[::-1])
    return float(roots[0] - roots[1] - roots[2] - roots[3])


def _concurrence(matrix: np.ndarray, dust_tol: float = 1e-9) -> float:
    """Concurrence of an (assumed Hermitian, unit-trace) 4x4 array."""
    c = _signed_concurrence(matrix, dust_tol)
    return float(min(max(c, 0.0), 1.0))


# ---------------------------------------------------------------------------
# Common states
# ---------------------------------------------------------------------------


def maximally_mixed() -> PauliVector:
    """The identity state, ``rho = I/4``."""
    return PauliVector.from_components({(0, 0): 1.0})


def bell_singlet() -> PauliVector:
    """``(|01> - |10>)/sqrt(2)``; correlation scalar -3."""
    return PauliVector.from_components(
        {(0, 0): 1.0, (1, 1): -1.0, (2, 2): -1.0, (3, 3): -1.0}
    )


def bell_triplet() -> PauliVector:
    """``(|01> + |10>)/sqrt(2)``; correlation scalar +1."""
    return PauliVector.from_components(
        {(0, 0): 1.0, (1, 1): 1.0, (2, 2): 1.0, (3, 3): -1.0}
    )


def z_up_down() -> PauliVector:
    """Product state up/down along z; correlation scalar -1."""
    return PauliVector.from_components(
        {(0, 0): 1.0, (3, 0): 1.0, (0, 3): -1.0, (3, 3): -1.0}
    )


def x_up_down() -> PauliVector:
    """Product state up/down along x; correlation scalar -1."""
    return PauliVector.from_components(
        {(0, 0): 1.0, (1, 0): 1.0, (0, 1): -1.0, (1, 1): -1.0}
    )


def x_up_up() -> PauliVector:
    """Both spins along +x (the ground state of a -x field)."""
    return PauliVector.from_components(
        {(0, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0, (1, 1): 1.0}
    )


def werner(p: float) -> PauliVector:
    """Singlet fraction ``p`` mixed with identity: ``p |S><S| + (1-p) I/4``."""
    if not -1.0 / 3.0 <= p <= 1.0:
        raise InvalidStateError(f"Werner weight must lie in [-1/3, 1], got {p}")
    return PauliVector.from_components(
        {(0, 0): 1.0, (1, 1): -p, (2, 2): -p, (3, 3): -p}
    )


def state_for_correlation(lambda_corr: float) -> PauliVector:
    """A canonical valid state with the requested correlation scalar.

    Werner-type mixtures are used: singlet-weighted for
    ``lambda_corr <= 0``, triplet-weighted for ``lambda_corr > 0``.
    """
    if not -3.0 <= lambda_corr <= 1.0:
        raise InvalidStateError(
            f"correlation scalar must lie in [-3, 1], got {lambda_corr}"
        )
    if lambda_corr <= 0:
        return werner(-lambda_corr / 3.0)
    w = lambda_corr
    return PauliVector.from_components(
        {(0, 0): 1.0, (1, 1): w, (2, 2): w, (3, 3): -w}
    )
