"""Evaluation pipeline shared by the CLI and the acceptance suite.

spec -> frame snapshots -> invariant reports -> class verdicts -> flat records.
A record is a flat ``{key: number | bool | None}`` mapping with keys such as
``norm_N.1``, ``tau_star.2``, ``R.1212``, ``rho.23``, ``k.12`` and
``class.kaehler.1``; it serialises deterministically to one JSON line.
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import catalog
from .catalog import canonical_key
from .classify import TOL_MATCH, TOL_ZERO, classify, theorem_crosschecks
from .invariants import invariant_report

# independent Riemann components: a < b, c < d, (a, b) <= (c, d)
_PAIRS = [(a, b) for a in range(4) for b in range(a + 1, 4)]
R_KEYS = [(p, q) for i, p in enumerate(_PAIRS) for q in _PAIRS[i:]]


def riemann_key(indices):
    """Canonical record key and sign for ``R.abcd`` in any index order (1-based)."""
    a, b, c, d = indices
    sign = 1.0
    if a == b or c == d:
        return None, 0.0
    if a > b:
        a, b, sign = b, a, -sign
    if c > d:
        c, d, sign = d, c, -sign
    if (a, b) > (c, d):
        a, b, c, d = c, d, a, b
    return f"R.{a}{b}{c}{d}", sign


def lookup(record, key):
    """Value of ``key`` in ``record``, resolving Riemann index order and aliases."""
    key = canonical_key(key)
    if key in record:
        return record[key]
    if key.startswith("R.") and len(key) == 6:
        rk, sign = riemann_key([int(ch) for ch in key[2:]])
        if rk is None:
            return 0.0
        return sign * record[rk]
    if key.startswith("rho.") and len(key) == 6:
        return record[f"rho.{key[5]}{key[4]}"]
    if key.startswith("k."):
        return record[f"k.{key[3]}{key[2]}"]
    if key == "k_const":
        return record["constant_k"]
    raise KeyError(key)


def _num(x):
    return None if x is None else float(x)


def flat_record(report, verdict, example_id=None, point_index=None):
    rec = {"example": example_id, "point_index": point_index,
           "point": None if report.point is None else [float(v) for v in report.point]}
    for name in ("nablaJ", "F", "N", "theta"):
        arr = getattr(report, f"norm_{name}")
        for i in range(3):
            rec[f"norm_{name}.{i + 1}"] = float(arr[i])
    for i in range(3):
        rec[f"tau_star.{i + 1}"] = float(report.tau_star[i])
        rec[f"tau_star_hermitian.{i + 1}"] = float(report.tau_star_hermitian[i])
        rec[f"tau_star_norden.{i + 1}"] = float(report.tau_star_norden[i])
        rec[f"max_F.{i + 1}"] = float(report.max_F[i])
        rec[f"max_N.{i + 1}"] = float(report.max_N[i])
        rec[f"max_theta.{i + 1}"] = float(report.max_theta[i])
    rec["tau"] = float(report.tau)
    for (a, b), (c, d) in R_KEYS:
        rec[f"R.{a + 1}{b + 1}{c + 1}{d + 1}"] = float(report.riemann[a, b, c, d])
    for a in range(4):
        for b in range(a, 4):
            rec[f"rho.{a + 1}{b + 1}"] = float(report.ricci[a, b])
    for a, b in _PAIRS:
        rec[f"k.{a + 1}{b + 1}"] = float(report.sectional[a, b])
    rec["max_R"] = float(report.max_R)
    rec["constant_k"] = _num(report.constant_k)
    rec["nu"] = _num(report.nu)
    rec["nu_star2"] = _num(report.nu_star2)
    rec["nu_spread"] = _num(report.nu_spread)
    rec["flat"] = bool(report.flat)
    rec["einstein"] = bool(report.einstein)
    for k, v in verdict.as_flat().items():
        rec[f"class.{k}"] = v
    return rec


@dataclass
class Comparison:
    key: str
    expected: object
    actual: object
    delta: Optional[float]
    ok: bool


def compare(record, expected, expected_classes=None, tol_zero=TOL_ZERO, tol_match=TOL_MATCH):
    """Per-key comparison; numbers pass when ``|Δ| <= tol_zero + tol_match·|expected|``."""
    out = []
    for key in sorted(expected):
        want = expected[key]
        try:
            got = lookup(record, key)
        except KeyError:
            out.append(Comparison(key, want, None, None, False))
            continue
        if got is None:
            out.append(Comparison(key, want, None, None, False))
            continue
        delta = got - want
        ok = bool(np.isfinite(delta) and abs(delta) <= tol_zero + tol_match * abs(want))
        out.append(Comparison(key, want, got, float(delta), ok))
    for key in sorted(expected_classes or {}):
        want = expected_classes[key]
        rk = key if key in ("flat", "einstein") else f"class.{key}"
        got = record.get(rk)
        out.append(Comparison(rk, want, got, None, got == want))
    return out


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def random_points(spec, n, seed):
    """``n`` points drawn uniformly from the entry's sample box, rejecting guard failures."""
    if spec.sample_box is None:
        return np.zeros((0, 4))
    rng = np.random.default_rng(seed)
    lo, hi = spec.sample_box[:, 0], spec.sample_box[:, 1]
    found = []
    for _ in range(100):
        cand = rng.uniform(lo, hi, size=(max(n, 8), 4))
        found.extend(cand[spec.guard(cand)])
        if len(found) >= n:
            return np.array(found[:n])
    raise RuntimeError(f"{spec.id}: could not sample {n} valid points")


def grid_points(spec, n):
    """``n`` points per axis across the sample box (interior nodes), guard-filtered."""
    if spec.sample_box is None:
        return np.zeros((0, 4))
    axes = [lo + (hi - lo) * (np.arange(n) + 0.5) / n for lo, hi in spec.sample_box]
    pts = np.array(list(itertools.product(*axes)))
    return pts[spec.guard(pts)]


# ---------------------------------------------------------------------------
# finite-difference cross-check
# ---------------------------------------------------------------------------

def fd_check(spec, points, h=1e-5):
    """Largest deviation of the AD metric/frame derivatives from central differences.

    For embeddings the first derivatives of ``g`` are exact while the second ones
    already are differences; only first derivatives are checked there.
    """
    if spec.kind == "lie_algebra":
        return {}
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = {}
    shifts = np.eye(4) * h

    def central(fn):
        return np.stack([(fn(pts + s) - fn(pts - s)) / (2 * h) for s in shifts], axis=-1)

    if spec.kind == "chart":
        gj = spec.metric.jet(pts)
        out["fd.metric_d1"] = float(np.max(np.abs(gj.grad - central(lambda p: spec.metric.jet(p).value))))
        out["fd.metric_d2"] = float(np.max(np.abs(gj.hess - central(lambda p: spec.metric.jet(p).grad))))
    else:
        _, dg = spec.metric.first_order(pts)
        out["fd.metric_d1"] = float(np.max(np.abs(dg - central(lambda p: spec.metric.first_order(p)[0]))))
    Ej = spec.frame.jet(pts)
    out["fd.frame_d1"] = float(np.max(np.abs(Ej.grad - central(lambda p: spec.frame.jet(p).value))))
    out["fd.max"] = max(out.values())
    return out


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    example_id: Optional[str] = None
    manifold_file: Optional[str] = None
    points: Optional[list] = None
    grid: Optional[int] = None
    random: Optional[int] = None
    seed: int = 0
    tol_zero: Optional[float] = None
    tol_match: Optional[float] = None
    compare: bool = False
    reference: str = "printed"
    fd_check: bool = False


@dataclass
class RunResult:
    example_id: str
    records: list = field(default_factory=list)
    comparisons: list = field(default_factory=list)   # one list per record
    verdicts: list = field(default_factory=list)
    reports: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for cs in self.comparisons for c in cs)


def resolve_spec(cfg):
    if cfg.manifold_file:
        return catalog.load_file(cfg.manifold_file)
    return catalog.build(cfg.example_id)


def choose_points(spec, cfg):
    if spec.kind == "lie_algebra":
        return None
    parts = []
    if cfg.points is not None:
        parts.append(np.atleast_2d(np.asarray(cfg.points, dtype=float)))
    if cfg.grid:
        parts.append(grid_points(spec, cfg.grid))
    if cfg.random:
        parts.append(random_points(spec, cfg.random, cfg.seed))
    if not parts:
        return spec.default_points
    return np.concatenate(parts)


def run_spec(spec, cfg):
    tz_default, tm_default = spec.tolerances()
    tol_zero = cfg.tol_zero if cfg.tol_zero is not None else tz_default
    tol_match = cfg.tol_match if cfg.tol_match is not None else tm_default
    pts = choose_points(spec, cfg)
    snaps = spec.snapshots(pts)
    result = RunResult(spec.id)
    fd = fd_check(spec, pts) if cfg.fd_check and pts is not None else {}
    for i, snap in enumerate(snaps):
        report = invariant_report(snap, spec.H, tol_zero=tol_zero)
        verdict = classify(report, spec.H, tol_zero=tol_zero, tol_match=tol_match)
        rec = flat_record(report, verdict, spec.id, i)
        if fd:
            rec.update(fd)
        cmp = []
        if cfg.compare:
            want = spec.expected_at(snap.point, cfg.reference)
            cmp = compare(rec, want, spec.expected_classes, tol_zero, tol_match)
            rec["compare.failures"] = sorted(c.key for c in cmp if not c.ok)
        result.records.append(rec)
        result.comparisons.append(cmp)
        result.verdicts.append(verdict)
        result.reports.append(report)
    return result


def run(cfg):
    return run_spec(resolve_spec(cfg), cfg)


def to_json_line(record):
    return json.dumps(record, sort_keys=True, allow_nan=True)


# ---------------------------------------------------------------------------
# verify-all
# ---------------------------------------------------------------------------

GROUPS = ("norm_N", "norm_F", "norm_nablaJ", "norm_theta", "R", "rho", "k", "tau",
          "tau_star", "nu", "class")


def _group(key):
    if key.startswith("class.") or key in ("flat", "einstein"):
        return "class"
    if key in ("nu", "nu_star2"):
        return "nu"
    if key == "k_const":
        return "k"
    return key.split(".")[0]


@dataclass
class Summary:
    results: dict
    matrix: dict
    theorems: dict
    reference: str

    @property
    def ok(self):
        thm_ok = all(s != "FAIL" for st in self.theorems.values() for s in st.values())
        return thm_ok and all(r.ok for r in self.results.values())

    @property
    def passed(self):
        return sorted(ex for ex, r in self.results.items() if r.ok)

    def records(self):
        for ex in sorted(self.results):
            yield from self.results[ex].records

    def summary_record(self):
        return {"summary": {
            "reference": self.reference,
            "passed": self.passed,
            "failed": sorted(set(self.results) - set(self.passed)),
            "matrix": self.matrix,
            "theorems": self.theorems,
        }}


def verify_all(reference="printed", random=0, seed=0, ids=None, specs=None):
    """Every catalog entry at its default points (plus ``random`` seeded points) with compare on."""
    specs = specs if specs is not None else [catalog.build(i) for i in (ids or catalog.list_examples())]
    results, matrix, per_thm = {}, {}, {}
    for spec in sorted(specs, key=lambda s: s.id):
        cfg = RunConfig(example_id=spec.id, compare=True, reference=reference, seed=seed)
        if random and spec.kind != "lie_algebra":
            cfg.points = spec.default_points
            cfg.random = random
        res = run_spec(spec, cfg)
        results[spec.id] = res
        row = {}
        for cs in res.comparisons:
            for c in cs:
                g = _group(c.key)
                row[g] = row.get(g, True) and c.ok
        matrix[spec.id] = {g: ("pass" if row[g] else "FAIL") for g in GROUPS if g in row}
        per_thm[spec.id] = list(zip(res.reports, res.verdicts))
    theorems = theorem_crosschecks(per_thm, raise_on_violation=False)
    return Summary(results, matrix, theorems, reference)
