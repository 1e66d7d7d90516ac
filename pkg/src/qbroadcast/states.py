"""Two-qubit states in density-matrix and Bloch (x, y, T) form.

Basis order is |00>, |01>, |10>, |11>; sigma_1, sigma_2, sigma_3 are X, Y, Z.
All matrix helpers accept leading batch dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidState

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# PAULI_PAIRS[i, j] = sigma_i (x) sigma_j, with sigma_0 the identity
PAULI_PAIRS = np.einsum("iab,jcd->ijacbd", PAULI, PAULI).reshape(4, 4, 4, 4)


@dataclass(frozen=True, eq=False)
class BlochState:
    """A two-qubit operator written as {x, y, T}.

    ``x`` and ``y`` are the local Bloch vectors of the first and second qubit,
    ``T`` the 3x3 correlation matrix ``t_ij = tr[rho (sigma_i (x) sigma_j)]``.
    """

    x: np.ndarray
    y: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).copy()
        y = np.asarray(self.y, dtype=float).copy()
        T = np.asarray(self.T, dtype=float).copy()
        if x.shape != (3,) or y.shape != (3,) or T.shape != (3, 3):
            raise DimensionMismatch(
                f"expected shapes (3,), (3,), (3, 3); got {x.shape}, {y.shape}, {T.shape}"
            )
        for name, arr in (("x", x), ("y", y), ("T", T)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def correlation_block(self) -> np.ndarray:
        """The 4x4 real matrix R with R[0,0]=1, R[0,1:]=y, R[1:,0]=x, R[1:,1:]=T."""
        return bloch_block(self.x, self.y, self.T)

    def max_abs_diff(self, other: "BlochState") -> float:
        return float(np.abs(self.correlation_block() - other.correlation_block()).max())

    def allclose(self, other: "BlochState", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def swapped(self) -> "BlochState":
        """The same state with the two qubits exchanged."""
        return BlochState(self.y, self.x, self.T.T)

    def __repr__(self):
        fmt = lambda a: np.array2string(a, precision=6, suppress_small=True)  # noqa: E731
        return f"BlochState(x={fmt(self.x)}, y={fmt(self.y)}, T={fmt(self.T)})"


@dataclass(frozen=True)
class ValidityReport:
    hermiticity_error: float
    trace_error: float
    min_eigenvalue: float

    @property
    def valid(self) -> bool:
        return (
            self.hermiticity_error <= HERMITIAN_TOL
            and self.trace_error <= TRACE_TOL
            and self.min_eigenvalue >= -PSD_TOL
        )

    def __bool__(self):
        return self.valid


def norm_sq(a) -> float:
    """Squared Hilbert-Schmidt norm ``tr(a^dagger a)`` of a vector or matrix."""
    a = np.asarray(a)
    return float(np.vdot(a, a).real)


def bloch_block(x, y, T) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    T = np.asarray(T, dtype=float)
    batch = np.broadcast_shapes(x.shape[:-1], y.shape[:-1], T.shape[:-2])
    R = np.empty(batch + (4, 4))
    R[..., 0, 0] = 1.0
    R[..., 0, 1:] = y
    R[..., 1:, 0] = x
    R[..., 1:, 1:] = T
    return R


def block_to_matrix(R) -> np.ndarray:
    """Density matrix from a (..., 4, 4) block of Pauli expectation values."""
    return np.einsum("...ij,ijab->...ab", R, PAULI_PAIRS) / 4


def matrix_to_block(rho) -> np.ndarray:
    """Inverse of :func:`block_to_matrix`: ``R[i, j] = tr[rho (sigma_i (x) sigma_j)]``."""
    return np.einsum("...ab,ijba->...ij", rho, PAULI_PAIRS).real


def from_bloch(s: BlochState) -> np.ndarray:
    """4x4 density matrix of ``s``. No physicality check is made; see :func:`validate`."""
    return block_to_matrix(s.correlation_block())


def to_bloch(rho) -> BlochState:
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"to_bloch needs a 4x4 matrix, got shape {rho.shape}")
    R = matrix_to_block(rho)
    return BlochState(R[1:, 0], R[0, 1:], R[1:, 1:])


def validate(rho) -> ValidityReport:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {rho.shape}")
    herm = float(np.abs(rho - rho.conj().T).max())
    tr = float(abs(np.trace(rho) - 1))
    hermitian_part = (rho + rho.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(hermitian_part)[0])
    return ValidityReport(herm, tr, min_eig)


def require_valid(rho) -> None:
    report = validate(rho)
    if not report.valid:
        raise InvalidState(
            "not a density matrix: "
            f"hermiticity error {report.hermiticity_error:.3g}, "
            f"trace error {report.trace_error:.3g}, "
            f"min eigenvalue {report.min_eigenvalue:.3g}"
        )


def _check_unit(name, value):
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value} outside [0, 1]")


def werner_like(p: float, alpha_sq: float) -> BlochState:
    """p-mixture of sqrt(a^2)|00> + sqrt(1-a^2)|11> with the maximally mixed state.

    The product alpha*beta is taken non-negative.
    """
    _check_unit("p", p)
    _check_unit("alpha_sq", alpha_sq)
    ab = np.sqrt(alpha_sq * (1.0 - alpha_sq))
    x = np.array([0.0, 0.0, p * (2.0 * alpha_sq - 1.0)])
    return BlochState(x, x, np.diag([2 * p * ab, -2 * p * ab, p]))


def bell_eigenvalues(c) -> np.ndarray:
    """Weights (lambda_00, lambda_01, lambda_10, lambda_11) of the four Bell states.

    Works on arrays of shape (..., 3).
    """
    c = np.asarray(c, dtype=float)
    c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2]
    out = []
    for m in (0, 1):
        for n in (0, 1):
            sm, sn, smn = (-1) ** m, (-1) ** n, (-1) ** (m + n)
            out.append((1 + sm * c1 - smn * c2 + sn * c3) / 4)
    return np.stack(out, axis=-1)


def is_valid_bell(c, tol: float = 1e-12):
    """Tetrahedron membership test; vectorised over (..., 3)."""
    return np.all(bell_eigenvalues(c) >= -tol, axis=-1)


def bell_diagonal(c) -> BlochState:
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise DimensionMismatch(f"expected three coefficients, got shape {c.shape}")
    lam = bell_eigenvalues(c)
    if lam.min() < -1e-12:
        raise InvalidState(f"Bell-diagonal weights {lam} contain a negative entry")
    return BlochState(np.zeros(3), np.zeros(3), np.diag(c))


def pure_schmidt(s: float) -> BlochState:
    """The pure state sqrt(s)|00> + sqrt(1-s)|11>."""
    _check_unit("s", s)
    r = 2 * np.sqrt(s * (1 - s))
    x = np.array([0.0, 0.0, 2 * s - 1])
    return BlochState(x, x, np.diag([r, -r, 1.0]))


def maximally_mixed() -> BlochState:
    return BlochState(np.zeros(3), np.zeros(3), np.zeros((3, 3)))


def random_density_matrix(rng: np.random.Generator, dim: int = 4, rank: int | None = None):
    """Hilbert-Schmidt (Ginibre) random density matrix."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_bloch_state(rng: np.random.Generator, rank: int | None = None) -> BlochState:
    return to_bloch(random_density_matrix(rng, 4, rank))


def random_classical_quantum(rng: np.random.Generator) -> np.ndarray:
    """sum_i p_i |a_i><a_i| (x) rho_i with {|a_i>} a random orthonormal basis of qubit A."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    basis, _ = np.linalg.qr(g)
    p = rng.uniform()
    rho = np.zeros((4, 4), dtype=complex)
    for weight, k in ((p, 0), (1 - p, 1)):
        proj = np.outer(basis[:, k], basis[:, k].conj())
        rho += weight * np.kron(proj, random_density_matrix(rng, 2))
    return rho
