"""Scenario files and the staged verification pipeline.

A scenario is a JSON document::

    {
      "name": "demo",
      "group": "su2xu1",                      # preset name, or {"f": [[[...]]], "fiber_fields": [[...]]}
      "domain": {"x0": [-1, 1]},              # optional per-coordinate sampling intervals
      "fields": {
        "alpha": [[...4 strings...] x G],     # first change of basis
        "gamma": [[...] x G],                 # second change of basis
        "H":     [[...4...] x 4],             # tetrad (needs G = 4)
        "C":     [[[...G...] x 4] x G],       # starting C (default 0)
        "beta":  [[[...4...] x 4] x G],       # starting beta (default 0)
        "J":     [[...4...] x G],             # prescribed source current
        "eta":   [[...G numbers...] x G]      # internal metric (default identity)
      },
      "metric": "minkowski",                  # base metric without a tetrad: minkowski, euclidean or a 4x4 table
      "options": {"samples": 64, "tol": 1e-8, "seed": 0,
                  "stages": ["algebra", "gauge", "extended", "geometry", "dynamics"],
                  "field_equations": "report"}
    }

Only the ``mu < nu`` entries of ``beta`` are read; the rest follows by
antisymmetry.  Field equations are not identities: with ``"field_equations": "report"`` their
residuals are listed with verdict ``info``; ``"check"`` turns them into pass/fail.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import algebra, dynamics, frames, geometry
from .algebra import GroupPreset, StructureConstants, check_representation, check_structure_constants
from .expr import Chart, ExprError, ZERO, _coerce, evaluate_many, parse
from .frames import VectorField, trivial_frame
from .report import FAIL, INCONCLUSIVE, INFO, PASS, SKIPPED, ResidualReport, check, from_values, points_for
from .tensors import elementwise, zeros

STAGES = ("algebra", "gauge", "extended", "geometry", "dynamics")
FIELD_KEYS = ("alpha", "gamma", "H", "C", "beta", "J", "eta")


class ScenarioError(ValueError):
    """Invalid scenario input; the CLI maps it to exit code 2."""


@dataclass
class Scenario:
    name: str
    group: GroupPreset
    chart: Chart
    fields: dict[str, np.ndarray]
    metric: Any = "minkowski"
    samples: int = 64
    tol: float = 1e-8
    seed: int = 0
    stages: tuple[str, ...] = STAGES
    field_equations: str = "report"

    @property
    def dim(self) -> int:
        return self.group.dim


def _shape_of(table) -> tuple | None:
    """Shape of a regularly nested list, or None when ragged."""
    if not isinstance(table, list):
        return ()
    subs = [_shape_of(t) for t in table]
    if any(x is None for x in subs) or len(set(subs)) > 1:
        return None
    return (len(table),) + (subs[0] if subs else ())


def _table(name: str, raw, shape: tuple, chart: Chart, numeric: bool = False) -> np.ndarray:
    got = _shape_of(raw)
    if got != shape:
        what = "a ragged table" if got is None else f"shape {got}"
        raise ScenarioError(f"field '{name}': expected shape {shape}, got {what}")
    arr = np.empty(shape, dtype=object)
    for ix in np.ndindex(shape):
        v = raw
        for i in ix:
            v = v[i]
        arr[ix] = v
    out = np.empty(shape, dtype=object)
    for ix in np.ndindex(shape):
        v = arr[ix]
        loc = f"field '{name}' entry {list(ix)}"
        if numeric:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ScenarioError(f"{loc}: expected a number")
            out[ix] = float(v)
        elif isinstance(v, str):
            try:
                out[ix] = parse(v, chart)
            except ExprError as err:
                raise ScenarioError(f"{loc}: {err}") from None
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            out[ix] = _coerce(float(v))
        else:
            raise ScenarioError(f"{loc}: expected an expression string or number")
    return out.astype(float) if numeric else out


def _group(raw, domain: dict) -> GroupPreset:
    if isinstance(raw, str):
        try:
            p = algebra.preset(raw)
        except KeyError as err:
            raise ScenarioError(str(err.args[0])) from None
        if domain:
            p = p.on_chart(p.chart.with_domain(domain))
        return p
    if isinstance(raw, dict) and "f" in raw:
        try:
            sc = StructureConstants(np.asarray(raw["f"], dtype=float))
        except (ValueError, TypeError) as err:
            raise ScenarioError(f"group 'f': {err}") from None
        chart = Chart.bundle(sc.dim)
        if domain:
            chart = chart.with_domain(domain)
        if "fiber_fields" in raw:
            comps = _table("group.fiber_fields", raw["fiber_fields"], (sc.dim, chart.dim), chart)
            fields = tuple(VectorField(chart, list(comps[a])) for a in range(sc.dim))
        else:
            fields = tuple(VectorField.coordinate(chart, n) for n in chart.fiber_names)
        return GroupPreset("inline", sc, chart, fields)
    raise ScenarioError("'group' must be a preset name or an object with key 'f'")


def scenario_from_dict(doc: dict, source: str = "<scenario>") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(doc) - {"name", "group", "domain", "fields", "metric", "options", "description"}
    if unknown:
        raise ScenarioError(f"unknown top-level keys: {sorted(unknown)}")
    if "group" not in doc:
        raise ScenarioError("missing required key 'group'")
    domain = doc.get("domain") or {}
    if not isinstance(domain, dict):
        raise ScenarioError("'domain' must map coordinate names to [lo, hi]")
    dom = {}
    for k, v in domain.items():
        if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
            raise ScenarioError(f"domain '{k}': expected [lo, hi]")
        if not v[1] > v[0]:
            raise ScenarioError(f"domain '{k}': empty interval")
        dom[k] = (float(v[0]), float(v[1]))
    p = _group(doc["group"], dom)
    chart = p.chart
    bad = set(dom) - set(chart.names)
    if bad:
        raise ScenarioError(f"domain names unknown coordinates: {sorted(bad)}")
    G = p.dim
    raw = doc.get("fields") or {}
    if not isinstance(raw, dict):
        raise ScenarioError("'fields' must be an object")
    extra = set(raw) - set(FIELD_KEYS)
    if extra:
        raise ScenarioError(f"unknown fields: {sorted(extra)}")
    shapes = {"alpha": (G, 4), "gamma": (G, 4), "H": (4, 4), "C": (G, 4, G), "beta": (G, 4, 4),
              "J": (G, 4), "eta": (G, G)}
    if "H" in raw and G != 4:
        raise ScenarioError(f"field 'H' needs a 4-dimensional group, got dimension {G}")
    fields = {k: _table(k, raw[k], shapes[k], chart, numeric=(k == "eta")) for k in FIELD_KEYS if k in raw}
    if "beta" in fields:
        b = fields["beta"]
        for a, m, n in np.ndindex(b.shape):
            if m < n:
                b[a, n, m] = -b[a, m, n]
            elif m == n:
                b[a, m, n] = ZERO
    metric = doc.get("metric", "minkowski")
    if isinstance(metric, str):
        if metric not in ("minkowski", "euclidean"):
            raise ScenarioError(f"unknown metric {metric!r}")
    else:
        metric = _table("metric", metric, (4, 4), chart)
    opts = doc.get("options") or {}
    stages = tuple(opts.get("stages", STAGES))
    bad = [s for s in stages if s not in STAGES]
    if bad:
        raise ScenarioError(f"unknown stages {bad}; expected a subset of {list(STAGES)}")
    fe = opts.get("field_equations", "report")
    if fe not in ("report", "check"):
        raise ScenarioError("options.field_equations must be 'report' or 'check'")
    try:
        samples, tol, seed = int(opts.get("samples", 64)), float(opts.get("tol", 1e-8)), int(opts.get("seed", 0))
    except (TypeError, ValueError) as err:
        raise ScenarioError(f"options: {err}") from None
    if samples < 1 or tol <= 0:
        raise ScenarioError("options: samples must be >= 1 and tol > 0")
    return Scenario(str(doc.get("name", Path(source).stem)), p, chart, fields, metric, samples, tol, seed,
                    tuple(s for s in STAGES if s in stages), fe)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ScenarioError(f"cannot read {path}: {err.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{path}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from None
    return scenario_from_dict(doc, str(path))


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def _diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return elementwise(lambda x, y: x - y, a, b)


class _Run:
    def __init__(self, sc: Scenario, samples=None, tol=None, seed=None, stages=None):
        self.sc = sc
        self.samples = sc.samples if samples is None else samples
        self.tol = sc.tol if tol is None else tol
        self.seed = sc.seed if seed is None else seed
        self.stages = sc.stages if stages is None else tuple(s for s in STAGES if s in stages)
        self.pts = points_for(sc.chart, self.samples, self.seed)
        self.reports: list[ResidualReport] = []
        self.notes: dict[str, str] = {}
        self.state: dict[str, Any] = {}

    # helpers ---------------------------------------------------------------
    def add(self, *reps):
        for r in reps:
            self.reports.append(r)
        return reps

    def equation(self, rep: ResidualReport) -> ResidualReport:
        if self.sc.field_equations == "report" and rep.verdict in (PASS, FAIL):
            rep.note = (rep.note + " " if rep.note else "") + f"field equation, not an identity ({rep.verdict} at tol)"
            rep.verdict = INFO
        return self.add(rep)[0]

    def skip(self, stage: str, why: str):
        self.notes[stage] = f"skipped: {why}"
        self.reports.append(ResidualReport.skipped(f"{stage} stage", f"stage.{stage}", why))

    def failed(self, reps) -> bool:
        return any(r.verdict in (FAIL, INCONCLUSIVE) for r in reps)

    # stages ----------------------------------------------------------------
    def algebra(self):
        p = self.sc.group
        reps = self.add(check_structure_constants(p.constants), check_representation(p, self.pts))
        return not self.failed(reps)

    def gauge(self):
        sc, p, ch, pts, tol = self.sc, self.sc.group, self.sc.chart, self.pts, self.tol
        G, f, X = p.dim, p.constants, p.fiber_fields
        C0 = sc.fields.get("C", zeros(G, 4, G))
        b0 = sc.fields.get("beta", zeros(G, 4, 4))
        start = trivial_frame(ch, X)
        trivial_start = "C" not in sc.fields and "beta" not in sc.fields
        reps = frames.jacobi_residuals(start.base_fields, X, C0, b0, f, ch, pts, tol,
                                       names=("starting jacobi YYY", "starting jacobi YYX", "starting jacobi YXX"))
        self.add(*reps)
        ok = not self.failed(reps)
        alpha = sc.fields.get("alpha", zeros(G, 4))
        fr1 = frames.basis_change(start, alpha)
        C1 = frames.transformed_C(C0, alpha, X, f)
        b1 = frames.transformed_beta(b0, alpha, C1, f, fr1.base_fields, X)
        checks = [frames.transformation_crosscheck(fr1, C1, b1, f, ch, pts, tol,
                                                   name="first change: laws vs commutators")]
        if trivial_start:
            checks.append(check("first change: field strength", "frames.field_strength",
                                _diff(b1, frames.generalized_field_strength(alpha, C1, f, ch)), ch, pts, tol))
        checks += frames.jacobi_residuals(fr1.base_fields, X, C1, b1, f, ch, pts, tol)
        strict, corr = frames.adjoint_behavior_residual(alpha, X, f, ch, pts, tol,
                                                        Cprime=C1 if trivial_start else None)
        if strict.verdict == FAIL:
            strict.verdict, strict.note = INFO, "alpha does not behave as a connection"
        checks.append(strict)
        if corr is not None:
            checks.append(corr)
        self.add(*checks)
        ok = ok and not self.failed(checks)
        cz = check("first change: C' vanishes", "frames.direct_product", C1, ch, pts, tol)
        if cz.verdict == FAIL:
            cz.verdict, cz.note = INFO, "extended (non-direct-product) configuration"
        self.add(cz)
        if cz.verdict == PASS:
            self.add(frames.central_extension_check(b1, X, f, ch, pts, tol))
            self.equation(dynamics.yang_mills_residual(b1, self.base_metric(), fr1.base_fields, ch, pts, tol))
        else:
            self.reports.append(ResidualReport.skipped("central extension", "central",
                                                       "configuration is not a direct product"))
            self.reports.append(ResidualReport.skipped("sourceless gauge field equation", "field.gauge",
                                                       "configuration is not a direct product"))
        self.state.update(frame=fr1, C=C1, beta=b1, sigma=alpha, trivial_start=trivial_start, C0=C0, b0=b0)
        return ok

    def extended(self):
        sc, p, ch, pts, tol = self.sc, self.sc.group, self.sc.chart, self.pts, self.tol
        f, X = p.constants, p.fiber_fields
        if "gamma" not in sc.fields:
            self.skip("extended", "no 'gamma' field in the scenario")
            return True
        gamma = sc.fields["gamma"]
        fr1, C1, b1 = self.state["frame"], self.state["C"], self.state["beta"]
        fr2 = frames.basis_change(fr1, gamma)
        C2 = frames.transformed_C(C1, gamma, X, f)
        b2 = frames.transformed_beta(b1, gamma, C2, f, fr2.base_fields, X)
        checks = [frames.transformation_crosscheck(fr2, C2, b2, f, ch, pts, tol,
                                                   name="second change: laws vs commutators")]
        sigma = elementwise(lambda a, b: a + b, self.state["sigma"], gamma)
        if self.state["trivial_start"]:
            checks.append(check("two changes equal one change by the sum", "frames.field_strength",
                                _diff(b2, frames.generalized_field_strength(sigma, C2, f, ch)), ch, pts, tol))
            strict, corr = frames.adjoint_behavior_residual(sigma, X, f, ch, pts, tol, Cprime=C2)
            if strict.verdict == FAIL:
                strict.verdict, strict.note = INFO, "sigma deviates from connection behaviour"
            checks += [strict, corr]
        checks += frames.jacobi_residuals(fr2.base_fields, X, C2, b2, f, ch, pts, tol,
                                          names=("extended jacobi YYY", "extended jacobi YYX",
                                                 "extended jacobi YXX"))
        self.add(*checks)
        self.equation(dynamics.extended_field_eq_residual(b2, C2, self.base_metric(), fr2.base_fields, ch, pts,
                                                          tol=tol))
        self.state.update(frame=fr2, C=C2, beta=b2, sigma=sigma)
        return not self.failed(checks)

    def base_metric(self) -> dynamics.Metric:
        m = self.sc.metric
        if isinstance(m, str):
            return dynamics.flat_metric(m)
        return dynamics.metric_from_table(m)

    def geometry(self):
        sc, p, ch, pts, tol = self.sc, self.sc.group, self.sc.chart, self.pts, self.tol
        if "H" not in sc.fields:
            self.skip("geometry", "no tetrad 'H' in the scenario")
            return True
        f, X = p.constants.f, p.fiber_fields
        tet = geometry.Tetrad(sc.fields["H"])
        tv = tet.validate(ch, pts)
        self.add(tv)
        if tv.verdict != PASS:
            self.skip("geometry", "tetrad is not invertible on the sampled points")
            return False
        g = geometry.TetradGeometry.build(tet, X, f)
        # frame round trip and commutator tables
        dec = frames.decompose(X, g.base_fields, pts)
        Hv = evaluate_many(list(tet.H.ravel()), ch, pts).reshape(4, 4, -1)
        rt = dec.coeffs - np.transpose(Hv, (2, 1, 0))          # coeffs[k, mu, a] vs H[a, mu]
        self.add(from_values("tetrad frame round trip", "tetrad.frame", rt.reshape(len(pts), -1).T, tol, pts))
        self.add(self._frame_tables(g, pts, tol))
        self.add(check("torsion equals minus anholonomy", "torsion",
                       elementwise(lambda a, b: a + b, g.T, g.beta_space), ch, pts, tol))
        self.add(*geometry.beta_erre_residual(g.beta_internal, g.Rprime, X, f, ch, pts, tol,
                                              g.curv.spacetime, g.beta_space, g.base_fields))
        self.add(check("curvature transmutation", "curvature.transmutation",
                       _diff(g.curv.spacetime, geometry.transmuted_curvature(g.curv.internal, tet)), ch, pts, tol))
        self.add(*geometry.bianchi1_residual(g.curv.spacetime, g.beta_space, g.base_fields, ch, pts, tol))
        self.add(geometry.bianchi2_residual(g.curv.spacetime, g.D, ch, pts, tol))
        metric = dynamics.metric_from_tetrad(tet, sc.fields.get("eta"))
        self.add(metric.validate(ch, pts))
        ricci, scalar, G = geometry.ricci_and_einstein(g.curv.spacetime, metric.g, metric.ginv)
        rel = np.empty((4, 4), dtype=object)
        for s, n in np.ndindex(rel.shape):
            rel[s, n] = ricci[s, n] + sum((frames.apply(g.base_fields[s], g.beta_space[a, a, n]) for a in range(4)),
                                          ZERO)
        self.add(check("ricci and anholonomy trace", "ricci", rel, ch, pts, tol))
        mp = dynamics.metric_preservation_residual(metric, g.D, ch, pts, tol)
        preserved = mp.verdict == PASS
        if mp.verdict == FAIL:
            mp.verdict = INFO
            mp.note = "metric is not preserved by the enlarged derivative"
        self.add(mp)
        cb = check("contracted Bianchi identity", "bianchi.contracted", geometry.contracted_bianchi(G, g.D), ch,
                   pts, tol)
        cb.extra["metric_preserved"] = preserved
        self.add(cb)
        ad = check("curvature antisymmetry defect", "curvature.antisymmetry",
                   geometry.antisymmetry_defect(g.curv.spacetime, metric.g), ch, pts, tol)
        ad.verdict, ad.note = INFO, "diagnostic only"
        self.add(ad)
        self.add(*geometry.property_residuals(g.D, g.beta_space, g.curv.spacetime, g.gamma, g.Cprime, X, tet,
                                              ch, pts, tol))
        self.state.update(geometry=g, metric=metric)
        return True

    def _frame_tables(self, g, pts, tol) -> ResidualReport:
        ch = self.sc.chart
        X = g.fiber_fields
        comm_b = [frames.commutator(g.base_fields[m], g.base_fields[n]) for m in range(4) for n in range(4)]
        comm_c = [frames.commutator(g.base_fields[m], X[a]) for m in range(4) for a in range(4)]
        d1 = frames.decompose(g.base_fields, comm_b, pts)            # in {X'_rho}
        d2 = frames.decompose(X, comm_c, pts)                         # in {X_b}
        B = evaluate_many(list(g.beta_space.ravel()), ch, pts).reshape(4, 4, 4, -1)   # [r, m, n, k]
        C = evaluate_many(list(g.Cprime.ravel()), ch, pts).reshape(4, 4, 4, -1)       # [b, m, a, k]
        r1 = d1.coeffs.reshape(len(pts), 4, 4, 4) + np.transpose(B, (3, 1, 2, 0))
        r2 = d2.coeffs.reshape(len(pts), 4, 4, 4) - np.transpose(C, (3, 1, 2, 0))
        vals = np.concatenate([r1.reshape(len(pts), -1), r2.reshape(len(pts), -1),
                               d1.residual[:, None], d2.residual[:, None]], axis=1).T
        return from_values("tetrad frame commutators", "tetrad.commutators", vals, tol, pts)

    def dynamics(self):
        sc, ch, pts, tol = self.sc, self.sc.chart, self.pts, self.tol
        g = self.state.get("geometry")
        metric = self.base_metric()
        if g is not None:
            beta, C, base, D = g.beta_internal, g.Cprime, g.base_fields, g.D
        else:
            beta, C = self.state["beta"], self.state["C"]
            base = self.state["frame"].base_fields
            D = geometry.EnlargedDerivative(base, C)
        # spacetime indices are raised with the fiber-independent base metric and left external
        J = dynamics.source_current(beta, C, metric, base)
        self.add(dynamics.extended_field_eq_residual(beta, C, metric, base, ch, pts, J, tol))
        self.reports[-1].identity = "field equation with extracted source"
        if "J" in sc.fields:
            self.equation(dynamics.extended_field_eq_residual(beta, C, metric, base, ch, pts,
                                                              dynamics.SourceCurrent(sc.fields["J"]), tol))
            self.reports[-1].identity = "field equation with prescribed source"
        self.add(dynamics.current_conservation_residual(J, D, ch, pts, tol))
        if g is not None:
            tm = self.state["metric"]
            Jt = dynamics.source_current(beta, C, tm, base)
            alt = dynamics.current_conservation_residual(Jt, D, ch, pts, tol, geometry.IndexKind.SP_UP)
            alt.identity = "current conservation with tetrad metric"
            alt.verdict, alt.note = INFO, "diagnostic only; the tetrad metric depends on the fiber"
            self.add(alt)
        return True

    def run(self) -> dict:
        blocked = None
        for stage in STAGES:
            if stage not in self.stages:
                continue
            if blocked:
                self.skip(stage, blocked)
                continue
            if stage == "extended" and "frame" not in self.state:
                self.skip(stage, "requires the gauge stage")
                continue
            if stage == "dynamics" and "frame" not in self.state and "geometry" not in self.state:
                self.skip(stage, "requires the gauge or geometry stage")
                continue
            try:
                ok = getattr(self, stage)()
            except Exception as err:  # recorded; later stages are skipped
                self.reports.append(ResidualReport(f"{stage} stage", f"stage.{stage}", float("nan"), float("nan"),
                                                   0, INCONCLUSIVE, self.tol, note=f"error: {err}"))
                ok = False
            self.notes.setdefault(stage, "ran")
            if not ok:
                blocked = f"an identity of the {stage} stage failed"
        return self.document()

    def document(self) -> dict:
        counts = {v: 0 for v in (PASS, FAIL, INCONCLUSIVE, SKIPPED, INFO)}
        for r in self.reports:
            counts[r.verdict] += 1
        status = PASS if counts[FAIL] == 0 and counts[INCONCLUSIVE] == 0 else FAIL
        return {
            "scenario": self.sc.name,
            "group": self.sc.group.name,
            "samples": self.samples,
            "tol": self.tol,
            "seed": self.seed,
            "stages": self.notes,
            "reports": [r.to_dict() for r in self.reports],
            "summary": dict(counts, status=status),
        }


def run(sc: Scenario, samples: int | None = None, tol: float | None = None, seed: int | None = None,
        stages=None) -> dict:
    """Execute the requested stages and return the report document."""
    return _Run(sc, samples, tol, seed, stages).run()


def render_text(doc: dict) -> str:
    lines = [f"scenario {doc['scenario']}  group={doc['group']}  samples={doc['samples']}  "
             f"tol={doc['tol']:g}  seed={doc['seed']}", ""]
    for r in doc["reports"]:
        mx = r["max_abs"]
        mxs = "      -" if mx != mx else f"{mx:.3e}"
        lines.append(f"{r['verdict']:<12} {r['identity']:<44} {r['tag']:<26} {mxs}")
        if r.get("witness") and r["verdict"] in (FAIL, INCONCLUSIVE):
            lines.append(f"{'':12} witness: {json.dumps(r['witness'])}")
        if r.get("note"):
            lines.append(f"{'':12} {r['note']}")
    s = doc["summary"]
    lines += ["", "summary: " + ", ".join(f"{k}={s[k]}" for k in (PASS, FAIL, INCONCLUSIVE, INFO, SKIPPED))
              + f"  status={s['status']}"]
    return "\n".join(lines)
