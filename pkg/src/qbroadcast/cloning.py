"""Buzek-Hillery 1->2 cloners applied to two-qubit states.

Two independent routes are provided. ``clone_closed_form`` applies the Bloch
shrinking maps directly. ``clone_oracle`` builds the cloner unitary on
input (x) blank (x) machine, evolves the embedded state and partial-traces
to each qubit pair.

Qubit labels: 1, 2 are the input qubits (1 with party A, 2 with party B);
3 is the copy of 1 and 4 the copy of 2. Cross pairs are reported with the
A-side qubit first, so the pair "23" is the state of (3, 2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .errors import DimensionMismatch, SpecError
from .states import BlochState, bloch_block, from_bloch, to_bloch


class Locality(str, enum.Enum):
    LOCAL = "local"
    NONLOCAL = "nonlocal"


class Dependence(str, enum.Enum):
    INDEPENDENT = "si"
    DEPENDENT = "sd"


# lambda values at which the state-dependent machine coincides with the universal one
_SI_POINT = {Locality.LOCAL: 1 / 6, Locality.NONLOCAL: 1 / 10}
_LAMBDA_MAX = {Locality.LOCAL: 0.5, Locality.NONLOCAL: 0.25}


@dataclass(frozen=True)
class ClonerSpec:
    """Which Buzek-Hillery machine to use.

    ``lam`` is the machine parameter of the state-dependent cloner and must be
    ``None`` for the universal (state-independent) one.
    """

    locality: Locality
    dependence: Dependence = Dependence.INDEPENDENT
    lam: float | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "locality", Locality(self.locality))
            object.__setattr__(self, "dependence", Dependence(self.dependence))
        except ValueError as exc:
            raise SpecError(str(exc)) from None
        if self.dependence is Dependence.INDEPENDENT:
            if self.lam is not None:
                raise SpecError("state-independent cloner takes no lambda")
        else:
            if self.lam is None:
                raise SpecError("state-dependent cloner needs lambda")
            lam = float(self.lam)
            if not 0.0 <= lam <= self.lambda_max:
                raise SpecError(
                    f"lambda={lam} outside [0, {self.lambda_max}] for a {self.locality.value} cloner"
                )
            object.__setattr__(self, "lam", lam)

    @classmethod
    def si(cls, locality) -> "ClonerSpec":
        return cls(Locality(locality))

    @classmethod
    def sd(cls, locality, lam: float) -> "ClonerSpec":
        return cls(Locality(locality), Dependence.DEPENDENT, lam)

    @property
    def local(self) -> bool:
        return self.locality is Locality.LOCAL

    @property
    def register_dim(self) -> int:
        """Dimension M of the system each cloner copies."""
        return 2 if self.local else 4

    @property
    def lambda_max(self) -> float:
        return _LAMBDA_MAX[self.locality]

    @property
    def amplitudes(self) -> tuple[float, float]:
        """(c, d) of the universal machine: c^2 = 2/(M+1), d^2 = 1/(2(M+1))."""
        M = self.register_dim
        return np.sqrt(2 / (M + 1)), np.sqrt(1 / (2 * (M + 1)))

    @property
    def mu(self) -> float:
        """Shrinking factor of the Bloch data under one clone."""
        if self.dependence is Dependence.INDEPENDENT:
            M = self.register_dim
            return (M + 2) / (2 * (M + 1))
        return 1 - (2 if self.local else 4) * self.lam

    @property
    def reduces_to_independent(self) -> bool:
        """True at the excluded lambda where the dependent machine loses its state dependence."""
        return (
            self.dependence is Dependence.DEPENDENT
            and abs(self.lam - _SI_POINT[self.locality]) < 1e-12
        )

    def side_correlations(self) -> np.ndarray:
        """Correlation matrix of the same-side output pairs (13 and 24)."""
        if self.dependence is Dependence.INDEPENDENT:
            return np.eye(3) / (self.register_dim + 1)
        lam = self.lam
        return np.diag([2 * lam, 2 * lam, 1 - (4 if self.local else 8) * lam])

    def label(self) -> str:
        s = f"{self.locality.value}/{self.dependence.value}"
        return s if self.lam is None else f"{s}(lambda={self.lam:g})"


PAIR_LABELS = {
    Locality.LOCAL: ("13", "24", "14", "23"),
    Locality.NONLOCAL: ("12", "34", "13", "24"),
}
CROSS_PAIRS = {Locality.LOCAL: ("14", "23"), Locality.NONLOCAL: ("12", "34")}
SIDE_PAIRS = ("13", "24")


@dataclass(frozen=True)
class CloneOutputs:
    spec: ClonerSpec
    pairs: dict[str, BlochState] = field(repr=False)

    def __getitem__(self, label: str) -> BlochState:
        return self.pairs[label]

    @property
    def cross(self) -> tuple[BlochState, BlochState]:
        return tuple(self.pairs[k] for k in CROSS_PAIRS[self.spec.locality])

    @property
    def side(self) -> tuple[BlochState, BlochState]:
        return tuple(self.pairs[k] for k in SIDE_PAIRS)

    def max_abs_diff(self, other: "CloneOutputs") -> float:
        return max(self.pairs[k].max_abs_diff(other.pairs[k]) for k in self.pairs)


def output_blocks(x, y, T, spec: ClonerSpec) -> dict[str, np.ndarray]:
    """Closed-form Bloch blocks of every output pair; vectorised over leading axes.

    Returns a mapping from pair label to a (..., 4, 4) block as produced by
    :func:`qbroadcast.states.bloch_block`.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    T = np.asarray(T, dtype=float)
    mu = spec.mu
    side_T = spec.side_correlations()
    # local maps act qubit-wise, so correlations shrink twice
    cross_T = mu * mu * T if spec.local else mu * T
    cross = bloch_block(mu * x, mu * y, cross_T)
    blocks = {
        "13": bloch_block(mu * x, mu * x, np.broadcast_to(side_T, T.shape)),
        "24": bloch_block(mu * y, mu * y, np.broadcast_to(side_T, T.shape)),
    }
    for label in CROSS_PAIRS[spec.locality]:
        blocks[label] = cross
    return blocks


def clone_closed_form(s: BlochState, spec: ClonerSpec) -> CloneOutputs:
    blocks = output_blocks(s.x, s.y, s.T, spec)
    pairs = {
        k: BlochState(b[1:, 0], b[0, 1:], b[1:, 1:])
        for k, b in blocks.items()
    }
    return CloneOutputs(spec, {k: pairs[k] for k in PAIR_LABELS[spec.locality]})


# ---------------------------------------------------------------------------
# partial traces and factor permutations


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    The kept factors appear in the order given by ``keep``, which need not be
    sorted.
    """
    rho = np.asarray(rho)
    dims = [int(d) for d in dims]
    keep = [int(k) for k in keep]
    n = len(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatch(f"factor dims {dims} do not match matrix shape {rho.shape}")
    if not keep or len(set(keep)) != len(keep) or not all(0 <= k < n for k in keep):
        raise DimensionMismatch(f"invalid factor selection {keep} for {n} factors")
    rows = list(range(n))
    cols = [i + n if i in keep else i for i in range(n)]
    out = keep + [k + n for k in keep]
    reduced = np.einsum(rho.reshape(dims + dims), rows + cols, out)
    d = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(d, d)


def permute_factors(rho, dims, order) -> np.ndarray:
    """Reorder tensor factors so that new factor ``k`` is old factor ``order[k]``."""
    dims = list(dims)
    n = len(dims)
    t = np.asarray(rho).reshape(dims + dims)
    t = t.transpose(list(order) + [o + n for o in order])
    total = int(np.prod(dims))
    return t.reshape(total, total)


# ---------------------------------------------------------------------------
# unitary oracle


def _complete_unitary(columns: dict[int, np.ndarray], dim: int) -> np.ndarray:
    """Extend orthonormal columns at the given indices to a full unitary."""
    idx = sorted(columns)
    V = np.stack([columns[i] for i in idx], axis=1).astype(complex)
    if np.abs(V.conj().T @ V - np.eye(len(idx))).max() > 1e-12:
        raise SpecError("prescribed cloner outputs are not orthonormal")
    rest = null_space(V.conj().T)
    U = np.zeros((dim, dim), dtype=complex)
    U[:, idx] = V
    U[:, [i for i in range(dim) if i not in columns]] = rest
    if np.abs(U.conj().T @ U - np.eye(dim)).max() > 1e-12:
        raise RuntimeError("unitary completion failed")
    return U


def build_bh_unitary(spec: ClonerSpec) -> np.ndarray:
    """Universal Buzek-Hillery cloner on input (x) blank (x) machine.

    Each factor has dimension M (2 for the local machine, 4 for the nonlocal
    one). The machine states are |X_ii> = |i>, with |Y_ij> = |X_jj>, and both
    the blank and the initial machine state are the first basis vector.
    """
    if spec.dependence is not Dependence.INDEPENDENT:
        raise SpecError("build_bh_unitary covers the state-independent cloners only")
    M = spec.register_dim
    c, d = spec.amplitudes
    E = np.eye(M)
    columns = {}
    for i in range(M):
        out = c * np.kron(np.kron(E[i], E[i]), E[i])
        for j in range(M):
            if j != i:
                out = out + d * np.kron(np.kron(E[i], E[j]) + np.kron(E[j], E[i]), E[j])
        columns[i * M * M] = out
    return _complete_unitary(columns, M**3)


SD_LOCAL_LAMBDA_MIN = 1 / 6


def sd_machine_vectors(lam: float) -> dict[str, np.ndarray]:
    """Machine states (X00, X11, Y01, Y10) of the local state-dependent cloner.

    They realise <X_ii|X_ii> = 1 - 2 lambda, <Y_ij|Y_ij> = lambda,
    <X_ii|Y_ji> = mu/2 with mu = 1 - 2 lambda and all other overlaps zero.
    The Gram matrix is positive semidefinite only for lambda >= 1/6.
    """
    if not SD_LOCAL_LAMBDA_MIN - 1e-12 <= lam <= 0.5:
        raise SpecError(
            f"local state-dependent machine has no vector realisation at lambda={lam}"
        )
    mu = 1 - 2 * lam
    x = 1 - 2 * lam
    gram = np.array(
        [
            [x, 0, 0, mu / 2],
            [0, x, mu / 2, 0],
            [0, mu / 2, lam, 0],
            [mu / 2, 0, 0, lam],
        ]
    )
    w, V = np.linalg.eigh(gram)
    vecs = V * np.sqrt(np.clip(w, 0, None))
    return dict(zip(("X00", "X11", "Y01", "Y10"), vecs))


def build_sd_local_unitary(lam: float) -> np.ndarray:
    """Local state-dependent cloner on input (x) blank (x) 4-dim machine."""
    v = sd_machine_vectors(lam)
    E = np.eye(2)
    out0 = np.kron(np.kron(E[0], E[0]), v["X00"]) + np.kron(
        np.kron(E[0], E[1]) + np.kron(E[1], E[0]), v["Y01"]
    )
    out1 = np.kron(np.kron(E[1], E[1]), v["X11"]) + np.kron(
        np.kron(E[1], E[0]) + np.kron(E[0], E[1]), v["Y10"]
    )
    # columns for input |0> and |1> with blank |0> and machine in its first basis state
    return _complete_unitary({0: out0, 8: out1}, 16)


def _zero_projector(dim: int) -> np.ndarray:
    p = np.zeros((dim, dim))
    p[0, 0] = 1.0
    return p


def _local_oracle(rho12: np.ndarray, U: np.ndarray, machine_dim: int) -> dict[str, np.ndarray]:
    m = machine_dim
    # start in order (q1, q2, q3, mA, q4, mB)
    rho = np.kron(rho12, np.kron(_zero_projector(2 * m), _zero_projector(2 * m)))
    dims = [2, 2, 2, m, 2, m]
    # regroup as (q1, q3, mA, q2, q4, mB) so U (x) U acts on contiguous blocks
    rho = permute_factors(rho, dims, [0, 2, 3, 1, 4, 5])
    W = np.kron(U, U)
    rho = W @ rho @ W.conj().T
    dims = [2, 2, m, 2, 2, m]
    keep = {"13": [0, 1], "24": [3, 4], "14": [0, 4], "23": [1, 3]}
    return {k: partial_trace(rho, dims, v) for k, v in keep.items()}


def _nonlocal_oracle(rho12: np.ndarray, U: np.ndarray) -> dict[str, np.ndarray]:
    rho = np.kron(rho12, np.kron(_zero_projector(4), _zero_projector(4)))
    rho = U @ rho @ U.conj().T
    dims = [2, 2, 2, 2, 4]
    keep = {"12": [0, 1], "34": [2, 3], "13": [0, 2], "24": [1, 3]}
    return {k: partial_trace(rho, dims, v) for k, v in keep.items()}


def _as_outputs(spec: ClonerSpec, mats: dict[str, np.ndarray]) -> CloneOutputs:
    return CloneOutputs(spec, {k: to_bloch(mats[k]) for k in PAIR_LABELS[spec.locality]})


def clone_oracle(s: BlochState, spec: ClonerSpec, unitary: np.ndarray | None = None) -> CloneOutputs:
    """Clone by explicit unitary evolution and partial traces.

    ``unitary`` may be passed to reuse a matrix from :func:`build_bh_unitary`.
    """
    if spec.dependence is not Dependence.INDEPENDENT:
        raise SpecError("the unitary oracle covers the state-independent cloners only")
    U = build_bh_unitary(spec) if unitary is None else unitary
    rho12 = from_bloch(s)
    if spec.local:
        mats = _local_oracle(rho12, U, 2)
    else:
        mats = _nonlocal_oracle(rho12, U)
    return _as_outputs(spec, mats)


def clone_oracle_sd_local(s: BlochState, lam: float) -> CloneOutputs:
    """Unitary oracle for the local state-dependent cloner, lambda in [1/6, 1/2]."""
    spec = ClonerSpec.sd(Locality.LOCAL, lam)
    mats = _local_oracle(from_bloch(s), build_sd_local_unitary(lam), 4)
    return _as_outputs(spec, mats)


def output_matrices(outputs: CloneOutputs) -> dict[str, np.ndarray]:
    return {k: from_bloch(v) for k, v in outputs.pairs.items()}


__all__ = [
    "Locality",
    "Dependence",
    "ClonerSpec",
    "CloneOutputs",
    "CROSS_PAIRS",
    "SIDE_PAIRS",
    "output_blocks",
    "clone_closed_form",
    "partial_trace",
    "permute_factors",
    "build_bh_unitary",
    "build_sd_local_unitary",
    "sd_machine_vectors",
    "clone_oracle",
    "clone_oracle_sd_local",
    "output_matrices",
]
