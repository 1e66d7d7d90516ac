"""Peres-Horodecki test for two qubits, by partial-transpose spectrum and by minors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloning import ClonerSpec, Locality, clone_closed_form
from .errors import DimensionMismatch
from .states import PSD_TOL, BlochState, from_bloch, norm_sq, require_valid

# separable iff the smallest partial-transpose eigenvalue is at least -PPT_TOL
PPT_TOL = PSD_TOL


@dataclass(frozen=True)
class SeparabilityVerdict:
    w2: float
    w3: float
    w4: float
    min_pt_eigenvalue: float

    @property
    def separable(self) -> bool:
        return self.min_pt_eigenvalue >= -PPT_TOL

    @property
    def minors_predict_entangled(self) -> bool:
        """The determinant form of the criterion: (W3 < 0 or W4 < 0) and W2 >= 0.

        W2 vanishes identically on some pure states, so its sign test carries
        the PPT tolerance to absorb rounding.
        """
        return (self.w3 < 0 or self.w4 < 0) and self.w2 >= -PPT_TOL


def _check_two_qubit(rho):
    rho = np.asarray(rho)
    if rho.shape[-2:] != (4, 4):
        raise DimensionMismatch(f"expected 4x4 matrices, got shape {rho.shape}")
    return rho


def partial_transpose(rho, subsystem: str = "B") -> np.ndarray:
    """Transpose one qubit of a (..., 4, 4) operator.

    For subsystem B the entries map as rho[m mu, n nu] -> rho[m nu, n mu].
    """
    rho = _check_two_qubit(rho)
    t = rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))
    if subsystem == "B":
        t = np.swapaxes(t, -3, -1)
    elif subsystem == "A":
        t = np.swapaxes(t, -4, -2)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', not {subsystem!r}")
    return t.reshape(rho.shape)


def pt_spectrum(rho, subsystem: str = "B") -> np.ndarray:
    pt = partial_transpose(rho, subsystem)
    return np.linalg.eigvalsh((pt + np.conj(np.swapaxes(pt, -1, -2))) / 2)


def min_pt_eigenvalue(rho):
    """Smallest eigenvalue of the partial transpose; vectorised over leading axes."""
    low = pt_spectrum(rho)[..., 0]
    return float(low) if np.ndim(low) == 0 else low


def w_minors(rho):
    """Leading principal minors (W2, W3, W4) of the partial transpose.

    Vectorised: returns three arrays for batched input.
    """
    pt = partial_transpose(rho)
    w = [np.linalg.det(pt[..., :k, :k]).real for k in (2, 3, 4)]
    if np.ndim(w[0]) == 0:
        return tuple(float(v) for v in w)
    return tuple(w)


def is_separable(rho) -> SeparabilityVerdict:
    rho = _check_two_qubit(rho)
    require_valid(rho)
    w2, w3, w4 = w_minors(rho)
    return SeparabilityVerdict(w2, w3, w4, min_pt_eigenvalue(rho))


def local_output_separable_zone(s: BlochState) -> tuple[bool, bool]:
    """Closed-form separability of the same-side outputs of the local universal cloner.

    Returns the verdict for pair 13 (in terms of x) and pair 24 (in terms of y);
    norms are squared Euclidean norms.
    """

    def zone(v):
        n = norm_sq(v)
        return 0 <= n <= 3 / 4 and n <= 1 + v[2] + v[2] ** 2

    return zone(s.x), zone(s.y)


def nonlocal_output_separable_zone(s: BlochState) -> tuple[bool, bool]:
    """As :func:`local_output_separable_zone` for the nonlocal universal cloner."""

    def zone(v):
        n = norm_sq(v)
        return 0 <= n <= 8 / 9 and n - v[2] ** 2 <= 4 / 3 * (1 + v[2])

    return zone(s.x), zone(s.y)


def side_pairs_separable(s: BlochState, locality) -> tuple[bool, bool]:
    """Direct PPT verdicts for the same-side outputs of the universal cloner."""
    out = clone_closed_form(s, ClonerSpec.si(Locality(locality)))
    return tuple(is_separable(from_bloch(p)).separable for p in out.side)
