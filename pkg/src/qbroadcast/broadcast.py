"""Broadcasting verdicts, closed-form ranges and parameter-space scans.

A state is *broadcast* when both cross pairs (14/23 locally, 12/34 nonlocally)
are entangled, and *optimally* broadcast when in addition the same-side pairs
13 and 24 are separable. The discord variant replaces "entangled" by "has
non-zero geometric discord" and "separable" by "has zero discord".

Every region claim is decided numerically by the partial-transpose spectrum
of the cloned pairs; the closed-form ranges are independent cross-checks.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cloning import CROSS_PAIRS, SIDE_PAIRS, ClonerSpec, Locality, clone_closed_form, output_blocks
from .discord import ZERO_DISCORD_TOL, discord_from_bloch, geometric_discord
from .errors import DomainError, InvalidState
from .separability import PPT_TOL, is_separable, min_pt_eigenvalue
from .states import (
    BlochState,
    bell_diagonal,
    block_to_matrix,
    from_bloch,
    is_valid_bell,
    pure_schmidt,
    require_valid,
    werner_like,
)

BOUNDARY_BAND = 1e-9


class Kind(str, enum.Enum):
    ENTANGLEMENT = "entanglement"
    DISCORD = "discord"


class Family(str, enum.Enum):
    WERNER = "werner"
    BELL = "bell"
    PURE = "pure"


@dataclass(frozen=True)
class BroadcastVerdict:
    """Outcome of cloning one input state.

    ``cross_min_pt``/``side_min_pt`` are the smallest partial-transpose
    eigenvalues over the two cross and the two same-side pairs;
    ``discord_cross`` is the smaller cross-pair discord and ``discord_side``
    the larger same-side discord. For ``kind == DISCORD`` the two leading
    booleans refer to discord rather than entanglement.
    """

    kind: Kind
    cross_min_pt: float
    side_min_pt: float
    discord_cross: float
    discord_side: float

    @property
    def cross_pairs_entangled(self) -> bool:
        if self.kind is Kind.DISCORD:
            return self.discord_cross > ZERO_DISCORD_TOL
        return self.cross_min_pt < -PPT_TOL

    @property
    def side_pairs_separable(self) -> bool:
        if self.kind is Kind.DISCORD:
            return self.discord_side <= ZERO_DISCORD_TOL
        return self.side_min_pt >= -PPT_TOL

    @property
    def broadcastable(self) -> bool:
        return self.cross_pairs_entangled

    @property
    def optimally_broadcastable(self) -> bool:
        return self.cross_pairs_entangled and self.side_pairs_separable

    @property
    def boundary(self) -> bool:
        """Cross pairs within the boundary band of the separable set."""
        return self.kind is Kind.ENTANGLEMENT and abs(self.cross_min_pt) <= BOUNDARY_BAND


def _verdict(spec: ClonerSpec, s: BlochState, kind: Kind, check_outputs: bool) -> BroadcastVerdict:
    require_valid(from_bloch(s))
    out = clone_closed_form(s, spec)
    cross = [out[k] for k in CROSS_PAIRS[spec.locality]]
    side = [out[k] for k in SIDE_PAIRS]
    if check_outputs:
        cross_pt = min(is_separable(from_bloch(p)).min_pt_eigenvalue for p in cross)
        side_pt = min(is_separable(from_bloch(p)).min_pt_eigenvalue for p in side)
    else:
        cross_pt = min(min_pt_eigenvalue(from_bloch(p)) for p in cross)
        side_pt = min(min_pt_eigenvalue(from_bloch(p)) for p in side)
    d_cross = min(geometric_discord(p, check=False).value for p in cross)
    d_side = max(geometric_discord(p, check=False).value for p in side)
    return BroadcastVerdict(Kind(kind), cross_pt, side_pt, d_cross, d_side)


def classify_entanglement_broadcast(s: BlochState, spec: ClonerSpec) -> BroadcastVerdict:
    """Entanglement broadcasting verdict; raises InvalidState on unphysical outputs."""
    return _verdict(spec, s, Kind.ENTANGLEMENT, check_outputs=True)


def classify_qcsbe_broadcast(s: BlochState, spec: ClonerSpec) -> BroadcastVerdict:
    """Discord broadcasting verdict.

    Only the input is checked for positivity; the discord formula is applied to
    the cloned pairs as they come out of the closed-form maps.
    """
    return _verdict(spec, s, Kind.DISCORD, check_outputs=False)


# ---------------------------------------------------------------------------
# closed-form ranges


def pure_state_range(locality) -> tuple[float, float]:
    """Open interval of Schmidt weights s for which sqrt(s)|00>+sqrt(1-s)|11> is optimally broadcast."""
    if Locality(locality) is Locality.LOCAL:
        r = np.sqrt(39)
        return (8 - r) / 16, (8 + r) / 16
    r = 2 * np.sqrt(2)
    return (3 - r) / 6, (3 + r) / 6


def werner_range(locality, p: float) -> tuple[float, float] | None:
    """Open interval of alpha^2 over which the Werner-like state is broadcast, or None.

    local:    8/16 +/- sqrt(48 - 81/p^2 + 72/p)/16,    for p > 3/4
    nonlocal: 1/2 +/- sqrt((27p^2 + 30p - 25)/(144 p^2)), for p > 5/9
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    if Locality(locality) is Locality.LOCAL:
        if p <= 3 / 4:
            return None
        r = np.sqrt(48 - 81 / p**2 + 72 / p) / 16
    else:
        if p <= 5 / 9:
            return None
        r = np.sqrt((27 * p**2 + 30 * p - 25) / (144 * p**2))
    return 0.5 - r, 0.5 + r


def bell_closed_form(locality, c) -> bool:
    """Closed-form broadcasting predicate for Bell-diagonal inputs (validity not checked)."""
    c1, c2, c3 = (float(v) for v in c)
    g = c1 + c2 + c3
    if Locality(locality) is Locality.LOCAL:
        c_plus = -9 / 4 + (c1 + c3)
        c_minus = 9 / 4 - (c1 - c3)
        if -1 <= c1 < -1 / 4 and (g < -9 / 4 or 9 / 2 - c_minus < c2 <= 1):
            return True
        return 1 / 4 < c1 <= 1 and (c_minus < c2 <= 1 or -1 <= c2 < c_plus)
    first = (6 * c1 - 3 * g + 5) * (3 * g - 6 * c3 - 5) * (3 * g - 6 * c2 - 5) * (3 * g + 5)
    second = (3 * c3 + 5) * ((5 - 3 * c3) ** 2 - 9 * (c1 - c2) ** 2)
    return first < 0 or second < 0


def bell_disagreements(locality, resolution: int = 64) -> np.ndarray:
    """Grid points (outside the boundary band) where the closed-form Bell predicate and the numeric verdict differ."""
    report = scan(Family.BELL, ClonerSpec.si(Locality(locality)), resolution)
    closed = np.array([bell_closed_form(locality, c) for c in report.params], dtype=bool)
    numeric = report.column("optimally_broadcastable")
    return report.params[(closed != numeric) & ~report.column("boundary")]


def bell_condition(locality, c) -> bool:
    """Numeric broadcasting verdict for the Bell-diagonal state with coefficients ``c``."""
    spec = ClonerSpec.si(Locality(locality))
    return classify_entanglement_broadcast(bell_diagonal(c), spec).optimally_broadcastable


# ---------------------------------------------------------------------------
# bisection oracles


def _bisect(pred, lo: float, hi: float, tol: float) -> float:
    """Boundary between pred(lo) and pred(hi), which must differ."""
    f_lo = pred(lo)
    if f_lo == pred(hi):
        raise ValueError("predicate does not change over the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if pred(mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _optimal(s: BlochState, spec: ClonerSpec) -> bool:
    return classify_entanglement_broadcast(s, spec).optimally_broadcastable


def pure_state_range_numeric(locality, tol: float = 1e-10) -> tuple[float, float]:
    spec = ClonerSpec.si(Locality(locality))
    pred = lambda s: _optimal(pure_schmidt(s), spec)  # noqa: E731
    return _bisect(pred, 0.0, 0.5, tol), _bisect(pred, 0.5, 1.0, tol)


def werner_range_numeric(locality, p: float, tol: float = 1e-10) -> tuple[float, float] | None:
    spec = ClonerSpec.si(Locality(locality))
    pred = lambda a: _optimal(werner_like(p, a), spec)  # noqa: E731
    if not pred(0.5):
        return None
    return _bisect(pred, 0.0, 0.5, tol), _bisect(pred, 0.5, 1.0, tol)


def werner_threshold(locality, alpha_sq: float, tol: float = 1e-10) -> float | None:
    """Smallest p such that the Werner-like state is broadcast for every p in (p, 1]."""
    if not 0.0 <= alpha_sq <= 1.0:
        raise DomainError(f"alpha_sq={alpha_sq} outside [0, 1]")
    spec = ClonerSpec.si(Locality(locality))
    pred = lambda p: _optimal(werner_like(p, alpha_sq), spec)  # noqa: E731
    if not pred(1.0):
        return None
    return _bisect(pred, 0.0, 1.0, tol)


# ---------------------------------------------------------------------------
# batched evaluation


def evaluate_batch(x, y, T, spec: ClonerSpec) -> dict[str, np.ndarray]:
    """Verdict columns for stacked inputs x (N, 3), y (N, 3), T (N, 3, 3)."""
    blocks = output_blocks(x, y, T, spec)
    pt = {k: min_pt_eigenvalue(block_to_matrix(b)) for k, b in blocks.items()}
    dis = {k: discord_from_bloch(b[..., 1:, 0], b[..., 1:, 1:]) for k, b in blocks.items()}
    cross, side = CROSS_PAIRS[spec.locality], SIDE_PAIRS
    return {
        "cross_min_pt": np.minimum(pt[cross[0]], pt[cross[1]]),
        "side_min_pt": np.minimum(pt[side[0]], pt[side[1]]),
        "discord_cross": np.minimum(dis[cross[0]], dis[cross[1]]),
        "discord_side": np.maximum(dis[side[0]], dis[side[1]]),
    }


def thread_count() -> int:
    env = os.environ.get("QBROADCAST_THREADS")
    n = os.cpu_count() or 1
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            pass
    return n


def _evaluate_chunked(x, y, T, spec, threads: int, chunk: int = 8192):
    n = len(x)
    starts = list(range(0, n, chunk)) or [0]
    job = lambda i: evaluate_batch(x[i : i + chunk], y[i : i + chunk], T[i : i + chunk], spec)  # noqa: E731
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, starts))
    else:
        parts = [job(i) for i in starts]
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def family_grid(family, resolution: int):
    """Parameter names, parameter rows and stacked (x, y, T) for a family grid.

    Rows are ordered row-major over the axes; Bell-diagonal cube points
    outside the tetrahedron of valid states are dropped.
    """
    family = Family(family)
    if resolution < 16:
        raise DomainError(f"resolution must be at least 16, got {resolution}")
    if family is Family.WERNER:
        axis = np.linspace(0.0, 1.0, resolution)
        p, a = (g.ravel() for g in np.meshgrid(axis, axis, indexing="ij"))
        params = np.stack([p, a], axis=1)
        ab = np.sqrt(a * (1 - a))
        zeros = np.zeros_like(p)
        x = np.stack([zeros, zeros, p * (2 * a - 1)], axis=1)
        T = np.zeros((len(p), 3, 3))
        T[:, 0, 0], T[:, 1, 1], T[:, 2, 2] = 2 * p * ab, -2 * p * ab, p
        return ("p", "alpha_sq"), params, x, x.copy(), T
    if family is Family.PURE:
        s = np.linspace(0.0, 1.0, resolution)
        r = 2 * np.sqrt(s * (1 - s))
        zeros = np.zeros_like(s)
        x = np.stack([zeros, zeros, 2 * s - 1], axis=1)
        T = np.zeros((len(s), 3, 3))
        T[:, 0, 0], T[:, 1, 1], T[:, 2, 2] = r, -r, 1.0
        return ("s",), s[:, None], x, x.copy(), T
    axis = np.linspace(-1.0, 1.0, resolution)
    c = np.stack([g.ravel() for g in np.meshgrid(axis, axis, axis, indexing="ij")], axis=1)
    c = c[is_valid_bell(c)]
    T = np.zeros((len(c), 3, 3))
    T[:, 0, 0], T[:, 1, 1], T[:, 2, 2] = c[:, 0], c[:, 1], c[:, 2]
    zeros = np.zeros((len(c), 3))
    return ("c1", "c2", "c3"), c, zeros, zeros.copy(), T


VERDICT_FIELDS = (
    "cross_min_pt",
    "side_min_pt",
    "discord_cross",
    "discord_side",
    "cross_pairs_entangled",
    "side_pairs_separable",
    "broadcastable",
    "optimally_broadcastable",
    "boundary",
)


@dataclass
class ScanReport:
    """Column-oriented verdicts over a family grid."""

    family: Family
    spec: ClonerSpec
    kind: Kind
    resolution: int
    param_names: tuple[str, ...]
    params: np.ndarray
    values: dict[str, np.ndarray] = field(repr=False)

    def __len__(self):
        return len(self.params)

    def column(self, name: str) -> np.ndarray:
        return self.values[name]

    @property
    def step(self) -> float:
        lo = -1.0 if self.family is Family.BELL else 0.0
        return (1.0 - lo) / (self.resolution - 1)

    def verdict(self, i: int) -> BroadcastVerdict:
        return BroadcastVerdict(
            self.kind,
            *(float(self.values[k][i]) for k in VERDICT_FIELDS[:4]),
        )

    def points(self):
        """Iterate over (parameter dict, BroadcastVerdict) in grid order."""
        for i, row in enumerate(self.params):
            yield dict(zip(self.param_names, map(float, row))), self.verdict(i)

    def same_as(self, other: "ScanReport", rtol: float = 1e-11, atol: float = 1e-15) -> bool:
        """Equality up to the 12-significant-digit rounding used on disk."""
        if (self.family, self.kind, self.resolution, self.param_names) != (
            other.family, other.kind, other.resolution, other.param_names
        ) or self.spec.label() != other.spec.label():
            return False
        if self.params.shape != other.params.shape:
            return False
        if not np.allclose(self.params, other.params, rtol=rtol, atol=atol):
            return False
        for k in VERDICT_FIELDS:
            a, b = self.values[k], other.values[k]
            if a.dtype == bool or b.dtype == bool:
                if not np.array_equal(a, b):
                    return False
            elif not np.allclose(a, b, rtol=rtol, atol=atol):
                return False
        return True

    def summary(self) -> dict:
        return {
            "points": len(self),
            "broadcastable": int(self.column("broadcastable").sum()),
            "optimally_broadcastable": int(self.column("optimally_broadcastable").sum()),
            "boundary": int(self.column("boundary").sum()),
        }


def scan(
    family,
    spec: ClonerSpec,
    resolution: int,
    kind=Kind.ENTANGLEMENT,
    threads: int | None = None,
) -> ScanReport:
    names, params, x, y, T = family_grid(family, resolution)
    threads = thread_count() if threads is None else threads
    values = _evaluate_chunked(x, y, T, spec, threads)
    values.update(derive_flags(values, Kind(kind)))
    return ScanReport(Family(family), spec, Kind(kind), resolution, names, params, values)


def derive_flags(values: dict[str, np.ndarray], kind: Kind) -> dict[str, np.ndarray]:
    """Boolean verdict columns from the four numeric columns."""
    if Kind(kind) is Kind.DISCORD:
        cross = values["discord_cross"] > ZERO_DISCORD_TOL
        side = values["discord_side"] <= ZERO_DISCORD_TOL
        boundary = np.zeros(len(cross), dtype=bool)
    else:
        cross = values["cross_min_pt"] < -PPT_TOL
        side = values["side_min_pt"] >= -PPT_TOL
        boundary = np.abs(values["cross_min_pt"]) <= BOUNDARY_BAND
    return {
        "cross_pairs_entangled": cross,
        "side_pairs_separable": side,
        "broadcastable": cross.copy(),
        "optimally_broadcastable": cross & side,
        "boundary": boundary,
    }


# ---------------------------------------------------------------------------
# one-dimensional Bell-diagonal sweeps


def bell_c3_sweep(locality, c1: float, c2: float, step: float = 1 / 256):
    """Grid of c3 values in [-1, 1] that give valid states, and their optimal verdicts."""
    n = int(round(2 / step)) + 1
    c3 = np.linspace(-1.0, 1.0, n)
    c = np.column_stack([np.full(n, c1), np.full(n, c2), c3])
    c = c[is_valid_bell(c)]
    return c[:, 2], _bell_optimal(locality, c)


def _bell_optimal(locality, c) -> np.ndarray:
    spec = ClonerSpec.si(Locality(locality))
    T = np.zeros((len(c), 3, 3))
    T[:, 0, 0], T[:, 1, 1], T[:, 2, 2] = c[:, 0], c[:, 1], c[:, 2]
    zeros = np.zeros((len(c), 3))
    v = evaluate_batch(zeros, zeros, T, spec)
    return (v["cross_min_pt"] < -PPT_TOL) & (v["side_min_pt"] >= -PPT_TOL)


def bell_c3_range(locality, c1: float, c2: float, step: float = 1 / 256):
    """(min, max) of broadcastable c3 on the sweep grid, or None if there are none."""
    c3, ok = bell_c3_sweep(locality, c1, c2, step)
    if not ok.any():
        return None
    return float(c3[ok].min()), float(c3[ok].max())


def cone_edge_sweep(locality, axis: int, sign: int, step: float = 1 / 256):
    """Sweep the tetrahedron edge with c_axis = sign.

    For sign -1 the other two coefficients are equal (c_j = c_k = t); for
    sign +1 they are opposite (c_j = t, c_k = -t). Returns t and the verdicts.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    n = int(round(2 / step)) + 1
    t = np.linspace(-1.0, 1.0, n)
    c = np.empty((n, 3))
    j, k = [i for i in range(3) if i != axis]
    c[:, axis] = sign
    c[:, j] = t
    c[:, k] = t if sign == -1 else -t
    if not is_valid_bell(c).all():
        raise InvalidState("edge sweep left the tetrahedron")
    return t, _bell_optimal(locality, c)
