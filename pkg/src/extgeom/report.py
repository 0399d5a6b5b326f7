"""Residual reports: the verdict format shared by every identity check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .expr import Chart, EvaluationError, evaluate_many, sample_points, ZERO

PASS, FAIL, INCONCLUSIVE, SKIPPED, INFO = "pass", "fail", "inconclusive", "skipped", "info"

#: Fixed tag set; every report row carries one of these.
TAGS = frozenset({
    "algebra.jacobi", "algebra.representation",
    "jacobi.yyy", "jacobi.yyx", "jacobi.yxx", "adjoint", "central",
    "frames.crosscheck", "frames.field_strength", "frames.direct_product",
    "field.gauge", "field.extended",
    "tetrad.inverse", "tetrad.frame", "tetrad.commutators", "torsion",
    "anholonomy.fiber", "curvature.anholonomy", "curvature.transmutation",
    "bianchi.first", "bianchi.cyclic", "bianchi.second", "bianchi.contracted",
    "metric", "metric.preservation", "ricci", "curvature.antisymmetry",
    "connection.anholonomy", "connection.invariance", "enlarged.external", "enlarged.fiber",
    "current.conservation",
    "stage.algebra", "stage.gauge", "stage.extended", "stage.geometry", "stage.dynamics",
})


@dataclass
class ResidualReport:
    identity: str
    tag: str
    max_abs: float = 0.0
    mean_abs: float = 0.0
    samples: int = 0
    verdict: str = PASS
    tol: float | None = None
    witness: dict | None = None
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        d = {
            "identity": self.identity,
            "tag": self.tag,
            "max_abs": float(self.max_abs),
            "mean_abs": float(self.mean_abs),
            "samples": int(self.samples),
            "verdict": self.verdict,
            "tol": self.tol,
            "witness": self.witness,
        }
        if self.note:
            d["note"] = self.note
        if self.extra:
            d["extra"] = self.extra
        return d

    @classmethod
    def skipped(cls, identity: str, tag: str, note: str) -> "ResidualReport":
        return cls(identity, tag, float("nan"), float("nan"), 0, SKIPPED, note=note)

    def __str__(self):
        return f"{self.verdict:>12}  {self.identity:<40} [{self.tag}] max={self.max_abs:.3e}"


def _flatten(components) -> tuple[list, list]:
    """Flatten an object array (or nested lists) of Expr, keeping indices."""
    arr = np.asarray(components, dtype=object)
    if arr.ndim == 0:
        return [arr.item()], [()]
    labels = [tuple(int(i) for i in ix) for ix in np.ndindex(arr.shape)]
    return [arr[ix] for ix in labels], labels


def from_values(identity: str, tag: str, values: np.ndarray, tol: float,
                points: np.ndarray | None = None, scale: np.ndarray | None = None,
                labels: list | None = None, note: str = "") -> ResidualReport:
    """Build a report from residual values shaped ``(components, points)``."""
    v = np.atleast_2d(np.asarray(values, dtype=float))
    s = np.zeros_like(v) if scale is None else np.atleast_2d(scale)
    a = np.abs(v)
    excess = a - tol * (1.0 + s)
    n_pts = v.shape[1]
    rep = ResidualReport(identity, tag, float(a.max(initial=0.0)), float(a.mean()) if a.size else 0.0,
                         n_pts, PASS, tol, note=note)
    if v.size and excess.max() > 0:
        i, k = np.unravel_index(int(np.argmax(excess)), excess.shape)
        rep.verdict = FAIL
        rep.witness = {
            "component": list(labels[i]) if labels else int(i),
            "value": float(v[i, k]),
        }
        if points is not None:
            rep.witness["point"] = [float(x) for x in points[k]]
    return rep


def check(identity: str, tag: str, components, chart: Chart, points: np.ndarray,
          tol: float, note: str = "") -> ResidualReport:
    """Evaluate an array of residual expressions and judge it."""
    exprs, labels = _flatten(components)
    exprs = [ZERO if e is None else e for e in exprs]
    try:
        vals, scale = evaluate_many(exprs, chart, points, with_terms=True)
    except EvaluationError as err:
        rep = ResidualReport(identity, tag, float("nan"), float("nan"), len(points), INCONCLUSIVE, tol,
                             note=f"{note} evaluation error: {err}".strip())
        if err.point is not None:
            rep.witness = {"point": [float(x) for x in err.point]}
        return rep
    return from_values(identity, tag, vals, tol, points, scale, labels, note)


def points_for(chart: Chart, samples: int, seed: int) -> np.ndarray:
    return sample_points(chart, samples, seed)


def all_passed(reports: Iterable[ResidualReport]) -> bool:
    return all(r.verdict in (PASS, INFO, SKIPPED) for r in reports)
