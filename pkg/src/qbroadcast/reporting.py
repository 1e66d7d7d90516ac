"""Tables of broadcasting ranges, scan serialisation and the verification suite."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from .broadcast import (
    VERDICT_FIELDS,
    Family,
    Kind,
    ScanReport,
    bell_c3_range,
    werner_range_numeric,
    werner_threshold,
)
from .cloning import (
    ClonerSpec,
    Dependence,
    Locality,
    clone_closed_form,
    clone_oracle,
    clone_oracle_sd_local,
    output_blocks,
)
from .discord import (
    ZERO_DISCORD_TOL,
    discord_from_bloch,
    discord_local_output_sd,
    discord_oracle,
    geometric_discord,
    closed_form_minimum,
    theorem_minimum_check,
)
from .errors import DomainError
from .separability import is_separable
from .states import random_bloch_state, random_classical_quantum, random_density_matrix, to_bloch

DEFAULT_SEED = 1729
SIG_DIGITS = 12
TABLE_TOL = 0.005
BELL_STEP = 1 / 256

# Printed two-decimal values. Threshold tables: alpha^2 -> lower p bound.
# Range tables: p -> (lower, upper) alpha^2 bounds.
REFERENCE_THRESHOLDS = {
    Locality.LOCAL: {0.2: 0.87, 0.4: 0.76, 0.5: 0.75, 0.6: 0.76, 0.8: 0.87},
    Locality.NONLOCAL: {0.2: 0.64, 0.4: 0.56, 0.5: 0.55, 0.6: 0.56, 0.8: 0.64},
}
REFERENCE_RANGES = {
    Locality.LOCAL: {
        0.76: (0.40, 0.60),
        0.85: (0.22, 0.78),
        0.9: (0.17, 0.83),
        0.95: (0.14, 0.87),
        1.0: (0.11, 0.89),
    },
    Locality.NONLOCAL: {
        0.56: (0.42, 0.58),
        0.65: (0.19, 0.81),
        0.85: (0.06, 0.94),
        0.95: (0.04, 0.96),
        1.0: (0.03, 0.97),
    },
}
# (c1, c2) -> reference c3 range, exact fractions
REFERENCE_BELL = {
    Locality.LOCAL: {
        (-7 / 8, -7 / 8): (-1.0, -3 / 4),
        (-3 / 4, -3 / 4): (-1.0, -3 / 4),
        (-7 / 8, -3 / 4): (-7 / 8, -5 / 8),
        (-3 / 4, -7 / 8): (-7 / 8, -5 / 8),
    },
    Locality.NONLOCAL: {
        (-7 / 9, -7 / 9): (-1.0, -5 / 9),
        (-5 / 9, -5 / 9): (-1.0, -5 / 9),
        (-7 / 9, -5 / 9): (-7 / 9, -1 / 3),
        (-5 / 9, -7 / 9): (-7 / 9, -1 / 3),
    },
}
# the reference 0.55 rounds the exact 5/9 down, so that row gets twice the tolerance
ROW_TOLERANCE = {("III(i)", 0.5): 0.01}

TABLE_NAMES = {
    (Locality.LOCAL, "threshold"): "I(i)",
    (Locality.LOCAL, "range"): "I(ii)",
    (Locality.LOCAL, "bell"): "II",
    (Locality.NONLOCAL, "threshold"): "III(i)",
    (Locality.NONLOCAL, "range"): "III(ii)",
    (Locality.NONLOCAL, "bell"): "IV",
}


@dataclass(frozen=True)
class TableRow:
    table: str
    key: str
    computed: tuple[float, ...] | None
    reference: tuple[float, ...]
    tolerance: float

    @property
    def deviation(self) -> float:
        if self.computed is None:
            return float("inf")
        return max(abs(a - b) for a, b in zip(self.computed, self.reference))

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def table_rows(tables=None) -> list[TableRow]:
    """Rows of the threshold, range and Bell-diagonal tables, computed numerically.

    ``tables`` optionally restricts the output to the given table names.
    """
    rows = []
    for loc in Locality:
        name = TABLE_NAMES[(loc, "threshold")]
        for a, reference in REFERENCE_THRESHOLDS[loc].items():
            p = werner_threshold(loc, a)
            tol = ROW_TOLERANCE.get((name, a), TABLE_TOL)
            rows.append(TableRow(name, f"alpha_sq={a:g}", None if p is None else (p,), (reference,), tol))
        name = TABLE_NAMES[(loc, "range")]
        for p, reference in REFERENCE_RANGES[loc].items():
            r = werner_range_numeric(loc, p)
            rows.append(TableRow(name, f"p={p:g}", r, reference, TABLE_TOL))
        name = TABLE_NAMES[(loc, "bell")]
        for (c1, c2), reference in REFERENCE_BELL[loc].items():
            r = bell_c3_range(loc, c1, c2, BELL_STEP)
            rows.append(TableRow(name, f"c1={c1:.6g},c2={c2:.6g}", r, reference, BELL_STEP))
    if tables is not None:
        rows = [r for r in rows if r.table in set(tables)]
    return rows


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.{SIG_DIGITS}g}"


def _round(v: float) -> float:
    return float(_fmt(v))


def tables_csv(rows: list[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["table", "key", "computed", "reference", "deviation", "tolerance", "pass"])
    for r in rows:
        comp = "" if r.computed is None else " ".join(_fmt(c) for c in r.computed)
        w.writerow([r.table, r.key, comp, " ".join(_fmt(c) for c in r.reference),
                    _fmt(r.deviation), _fmt(r.tolerance), _fmt(r.passed)])
    return buf.getvalue()


def tables_json(rows: list[TableRow]) -> str:
    data = [
        {
            "table": r.table,
            "key": r.key,
            "computed": None if r.computed is None else [_round(c) for c in r.computed],
            "reference": list(r.reference),
            "deviation": _round(r.deviation),
            "tolerance": r.tolerance,
            "pass": r.passed,
        }
        for r in rows
    ]
    summary = {"rows": len(rows), "passed": sum(r.passed for r in rows)}
    return json.dumps({"rows": data, "summary": summary}, indent=2) + "\n"


# ---------------------------------------------------------------------------
# scan reports on disk


def scan_config(report: ScanReport, seed: int = DEFAULT_SEED) -> dict:
    return {
        "family": report.family.value,
        "locality": report.spec.locality.value,
        "dependence": report.spec.dependence.value,
        "lambda": report.spec.lam,
        "kind": report.kind.value,
        "resolution": report.resolution,
        "seed": seed,
    }


def scan_to_csv(report: ScanReport) -> str:
    """Header of parameter names then verdict fields; 12 significant digits; LF endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*report.param_names, *VERDICT_FIELDS])
    cols = [report.column(k) for k in VERDICT_FIELDS]
    for i, row in enumerate(report.params):
        w.writerow([*(_fmt(v) for v in row), *(_fmt(c[i]) for c in cols)])
    return buf.getvalue()


_FAMILY_BY_PARAMS = {("p", "alpha_sq"): Family.WERNER, ("c1", "c2", "c3"): Family.BELL, ("s",): Family.PURE}


def _report_from_columns(names, table, spec, kind, resolution=None) -> ScanReport:
    names = tuple(names)
    family = _FAMILY_BY_PARAMS.get(names)
    if family is None:
        raise DomainError(f"unrecognised parameter columns {names}")
    n_par = len(names)
    params = np.array([[float(v) for v in row[:n_par]] for row in table]).reshape(-1, n_par)
    values = {}
    for j, k in enumerate(VERDICT_FIELDS):
        raw = [row[n_par + j] for row in table]
        if k in ("cross_min_pt", "side_min_pt", "discord_cross", "discord_side"):
            values[k] = np.array([float(v) for v in raw])
        else:
            values[k] = np.array([v in ("true", True) for v in raw], dtype=bool)
    if resolution is None:
        resolution = len(np.unique(params[:, 0]))
    return ScanReport(family, spec, Kind(kind), int(resolution), names, params, values)


def scan_from_csv(text: str, spec: ClonerSpec, kind=Kind.ENTANGLEMENT) -> ScanReport:
    """Parse :func:`scan_to_csv` output; the family and resolution are read off the grid."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    names = header[: len(header) - len(VERDICT_FIELDS)]
    if tuple(header[len(names):]) != VERDICT_FIELDS:
        raise DomainError("CSV header does not end with the verdict fields")
    return _report_from_columns(names, body, spec, kind)


def scan_to_json(report: ScanReport, seed: int = DEFAULT_SEED) -> str:
    """One object with keys ``config``, ``grid`` and ``summary``.

    ``grid`` holds ``params`` (names), ``fields`` (verdict names) and ``rows``,
    each row the parameter values followed by the verdict values.
    """
    cols = [report.column(k) for k in VERDICT_FIELDS]
    rows = []
    for i, row in enumerate(report.params):
        vals = [_round(v) for v in row]
        for k, c in zip(VERDICT_FIELDS, cols):
            vals.append(bool(c[i]) if c.dtype == bool else _round(c[i]))
        rows.append(vals)
    doc = {
        "config": scan_config(report, seed),
        "grid": {"params": list(report.param_names), "fields": list(VERDICT_FIELDS), "rows": rows},
        "summary": report.summary(),
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def scan_from_json(text: str) -> ScanReport:
    doc = json.loads(text)
    cfg = doc["config"]
    if cfg["dependence"] == Dependence.DEPENDENT.value:
        spec = ClonerSpec.sd(cfg["locality"], cfg["lambda"])
    else:
        spec = ClonerSpec.si(cfg["locality"])
    grid = doc["grid"]
    return _report_from_columns(grid["params"], grid["rows"], spec, cfg["kind"], cfg["resolution"])


# ---------------------------------------------------------------------------
# verification suite


@dataclass(frozen=True)
class Measurement:
    label: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measurements: tuple[Measurement, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.measurements)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{m.label} {m.value:.3g} (tol {m.tolerance:.3g})" for m in self.measurements)
        return f"{flag} {self.name}: {parts} [{self.seconds:.1f}s]"


def check_oracle(rng, n=200):
    """Closed-form cloner outputs against the dilated unitary followed by partial traces."""
    worst = 0.0
    for loc in Locality:
        spec = ClonerSpec.si(loc)
        for _ in range(n):
            s = random_bloch_state(rng)
            worst = max(worst, clone_closed_form(s, spec).max_abs_diff(clone_oracle(s, spec)))
    worst_sd = 0.0
    for lam in (1 / 6, 0.25, 0.4, 0.5):
        spec = ClonerSpec.sd(Locality.LOCAL, lam)
        for _ in range(10):
            s = random_bloch_state(rng)
            worst_sd = max(worst_sd, clone_closed_form(s, spec).max_abs_diff(clone_oracle_sd_local(s, lam)))
    return [
        Measurement(f"universal max deviation ({2 * n} inputs)", worst, 1e-12),
        Measurement("local state-dependent max deviation (40 inputs)", worst_sd, 1e-12),
    ]


def check_ppt(rng, n=10_000, band=1e-9):
    """Partial-transpose spectrum against the determinant-minor form of the criterion."""
    disagree = 0
    for _ in range(n):
        rank = int(rng.integers(1, 5))
        v = is_separable(random_density_matrix(rng, 4, rank))
        if abs(v.min_pt_eigenvalue) > band:
            disagree += int(v.separable == v.minors_predict_entangled)
    return [Measurement(f"disagreements ({n} states)", float(disagree), 0.0)]


def check_discord(rng, n_random=50, n_cq=100):
    """Closed-form discord against the measurement search, and zero on classical-quantum states."""
    worst = 0.0
    for _ in range(n_random):
        rho = random_density_matrix(rng)
        worst = max(worst, abs(discord_oracle(rho) - geometric_discord(to_bloch(rho)).value))
    worst_cq = 0.0
    for _ in range(n_cq):
        worst_cq = max(worst_cq, abs(geometric_discord(to_bloch(random_classical_quantum(rng))).value))
    return [
        Measurement(f"oracle gap ({n_random} states)", worst, 1e-4),
        Measurement(f"classical-quantum |D| ({n_cq} states)", worst_cq, 1e-8),
    ]


def check_theorem(rng, step=1e-3, n_inputs=50):
    """Side-pair discord of state-dependent outputs stays positive; the closed-form minima are reproduced.

    The closed-form expressions are swept over the full lambda range; discord of
    the actual outputs is swept over lambda > 0, since at lambda = 0 inputs with
    x along z give a classical same-side pair.
    """
    norms = np.linspace(0.0, 1.0, 21)
    expr_bad = 0
    output_bad = 0
    for loc in Locality:
        hi = ClonerSpec.sd(loc, 0.0).lambda_max
        lams = np.linspace(0.0, hi, int(round(hi / step)) + 1)
        vals = np.array([[discord_local_output_sd(loc, lam, w) for w in norms] for lam in lams])
        expr_bad += int((vals <= 0).sum())
        states = [random_bloch_state(rng) for _ in range(n_inputs)]
        x = np.array([s.x for s in states])
        y = np.array([s.y for s in states])
        T = np.array([s.T for s in states])
        for lam in lams[1:]:
            b = output_blocks(x, y, T, ClonerSpec.sd(loc, lam))
            for k in ("13", "24"):
                d = discord_from_bloch(b[k][:, 1:, 0], b[k][:, 1:, 1:])
                output_bad += int((d <= ZERO_DISCORD_TOL).sum())
    gap = 0.0
    for loc in Locality:
        for w in norms:
            m = theorem_minimum_check(loc, w)
            lam_s, min_s = closed_form_minimum(loc, w)
            gap = max(gap, abs(m.lambda_star - lam_s), abs(m.min_value - min_s))
    return [
        Measurement("non-positive expression values", float(expr_bad), 0.0),
        Measurement("zero-discord side pairs", float(output_bad), 0.0),
        Measurement("closed-form-minimum gap", gap, 1e-10),
    ]


CHECKS = {
    "oracle": check_oracle,
    "ppt": check_ppt,
    "discord": check_discord,
    "theorem": check_theorem,
}


def verify(checks=None, seed: int = DEFAULT_SEED, corrupt: bool = False) -> list[CheckResult]:
    """Run the named checks (all by default), each with its own seeded generator.

    ``corrupt`` replaces every tolerance by -1, which no measurement can meet;
    it exists to exercise the failure path.
    """
    names = list(CHECKS) if checks is None else list(checks)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise DomainError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    results = []
    for name in names:
        rng = np.random.default_rng([seed, list(CHECKS).index(name)])
        t0 = time.perf_counter()
        ms = CHECKS[name](rng)
        if corrupt:
            ms = [Measurement(m.label, m.value, -1.0) for m in ms]
        results.append(CheckResult(name, tuple(ms), time.perf_counter() - t0))
    return results


def verify_json(results: list[CheckResult]) -> str:
    data = [
        {
            "name": r.name,
            "passed": r.passed,
            "measurements": [{**asdict(m), "passed": m.passed} for m in r.measurements],
        }
        for r in results
    ]
    return json.dumps({"checks": data, "passed": all(r.passed for r in results)}, indent=2) + "\n"
