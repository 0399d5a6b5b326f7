"""Structure constants, their consistency checks and named group presets.

Presets carry a canonical realisation of the algebra by vector fields on
the fiber coordinates.  For su(2) the fiber chart is ZYZ Euler angles
``(th0, th1, th2)`` with ``g = Rz(th0) Ry(th1) Rz(th2)``; the fields below
are left-invariant and satisfy ``[X_a, X_b] = eps_abc X_c``::

    X0 = -cos(th2)/sin(th1) d0 + sin(th2) d1 + cos(th2) cos(th1)/sin(th1) d2
    X1 =  sin(th2)/sin(th1) d0 + cos(th2) d1 - sin(th2) cos(th1)/sin(th1) d2
    X2 =  d2

``th1`` is sampled in ``[0.5, 2.6]`` to stay clear of the coordinate
singularity ``sin(th1) = 0``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .expr import Chart, ZERO, ONE, cos, sin, var
from .frames import VectorField, commutator, decompose
from .report import PASS, FAIL, ResidualReport, from_values
from .tensors import zeros

__all__ = [
    "StructureConstants",
    "GroupPreset",
    "check_structure_constants",
    "check_representation",
    "preset",
    "PRESETS",
    "load_constants",
]


@dataclass(frozen=True)
class StructureConstants:
    """``f[c, a, b] = f^c_{ab}``."""

    f: np.ndarray

    def __post_init__(self):
        f = np.array(self.f, dtype=float)
        if f.ndim != 3 or len(set(f.shape)) != 1:
            raise ValueError(f"structure constants must be a cube array, got shape {f.shape}")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @property
    def dim(self) -> int:
        return self.f.shape[0]

    @classmethod
    def abelian(cls, dim: int) -> "StructureConstants":
        return cls(np.zeros((dim, dim, dim)))

    @classmethod
    def su2(cls) -> "StructureConstants":
        f = np.zeros((3, 3, 3))
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            f[c, a, b], f[c, b, a] = 1.0, -1.0
        return cls(f)

    def direct_sum(self, other: "StructureConstants") -> "StructureConstants":
        n, m = self.dim, other.dim
        f = np.zeros((n + m,) * 3)
        f[:n, :n, :n] = self.f
        f[n:, n:, n:] = other.f
        return StructureConstants(f)

    def antisymmetry_defect(self) -> float:
        return float(np.abs(self.f + np.swapaxes(self.f, 1, 2)).max(initial=0.0))

    def jacobi_defect(self) -> np.ndarray:
        """``J[a, b, c, d] = f^e_{ab} f^d_{ec} + f^e_{bc} f^d_{ea} + f^e_{ca} f^d_{eb}``."""
        f = self.f
        t = np.einsum("eab,dec->abcd", f, f)
        return t + np.transpose(t, (2, 0, 1, 3)) + np.transpose(t, (1, 2, 0, 3))


def check_structure_constants(sc: StructureConstants, tol: float = 1e-12) -> ResidualReport:
    anti = sc.antisymmetry_defect()
    jac = sc.jacobi_defect()
    jmax = float(np.abs(jac).max(initial=0.0))
    rep = ResidualReport("structure constants", "algebra.jacobi", max(anti, jmax),
                         float(np.abs(jac).mean()) if jac.size else 0.0, int(jac.size), PASS, tol,
                         extra={"antisymmetry": anti, "jacobi": jmax})
    if anti > tol or jmax > tol:
        rep.verdict = FAIL
        if jmax >= anti:
            ix = np.unravel_index(int(np.argmax(np.abs(jac))), jac.shape)
            rep.witness = {"component": [int(i) for i in ix], "value": float(jac[ix])}
        else:
            d = sc.f + np.swapaxes(sc.f, 1, 2)
            ix = np.unravel_index(int(np.argmax(np.abs(d))), d.shape)
            rep.witness = {"component": [int(i) for i in ix], "value": float(d[ix])}
    return rep


@dataclass(frozen=True)
class GroupPreset:
    name: str
    constants: StructureConstants
    chart: Chart
    fiber_fields: tuple[VectorField, ...]
    adjoint_factory: object = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.constants.dim

    def adjoint_matrix(self) -> np.ndarray:
        """Matrix ``M[b, c]`` of fiber functions with ``X_a(M[b, c]) = f^b_{da} M[d, c]``.

        Multiplying a base-only one-form ``A[c, mu]`` by ``M`` gives a field
        with adjoint behaviour under the fiber fields.
        """
        if self.adjoint_factory is None:
            m = zeros(self.dim, self.dim)
            for i in range(self.dim):
                m[i, i] = ONE
            return m
        return self.adjoint_factory(self.chart)

    def on_chart(self, chart: Chart) -> "GroupPreset":
        """Same realisation on another chart sharing the fiber coordinate names."""
        if chart.fiber_names != self.chart.fiber_names:
            raise ValueError("chart fiber coordinates differ from the preset's")
        fields = _fields_for(self.name, chart)
        return GroupPreset(self.name, self.constants, chart, fields, self.adjoint_factory)


def _su2_fields(chart: Chart, offset: int = 0) -> list[VectorField]:
    t1, t2 = var(chart.fiber_names[offset + 1]), var(chart.fiber_names[offset + 2])
    k = chart.base_count + offset
    n = chart.dim

    def vf(c0, c1, c2):
        comps = [ZERO] * n
        comps[k], comps[k + 1], comps[k + 2] = c0, c1, c2
        return VectorField(chart, comps)

    return [
        vf(-cos(t2) / sin(t1), sin(t2), cos(t2) * cos(t1) / sin(t1)),
        vf(sin(t2) / sin(t1), cos(t2), -sin(t2) * cos(t1) / sin(t1)),
        vf(ZERO, ZERO, ONE),
    ]


def _su2_adjoint_block(chart: Chart, offset: int = 0) -> np.ndarray:
    """``Ad(g^{-1}) = g^T`` for ``g = Rz(th0) Ry(th1) Rz(th2)``."""
    t0, t1, t2 = (var(chart.fiber_names[offset + i]) for i in range(3))
    s0, c0, s1, c1, s2, c2 = sin(t0), cos(t0), sin(t1), cos(t1), sin(t2), cos(t2)
    m = np.empty((3, 3), dtype=object)
    m[0] = [-s0 * s2 + c0 * c1 * c2, s0 * c1 * c2 + s2 * c0, -s1 * c2]
    m[1] = [-s0 * c2 - s2 * c0 * c1, -s0 * s2 * c1 + c0 * c2, s1 * s2]
    m[2] = [s1 * c0, s0 * s1, c1]
    return m


def _su2_adjoint(chart: Chart) -> np.ndarray:
    return _su2_adjoint_block(chart)


def _su2xu1_adjoint(chart: Chart) -> np.ndarray:
    m = zeros(4, 4)
    m[:3, :3] = _su2_adjoint_block(chart)
    m[3, 3] = ONE
    return m


def _coordinate_fields(chart: Chart, start: int, count: int) -> list[VectorField]:
    return [VectorField.coordinate(chart, chart.fiber_names[start + i]) for i in range(count)]


def _fields_for(name: str, chart: Chart) -> tuple[VectorField, ...]:
    if name in ("abelian4", "u1") or name.startswith("abelian"):
        return tuple(_coordinate_fields(chart, 0, chart.fiber_count))
    if name == "su2":
        return tuple(_su2_fields(chart))
    if name == "su2xu1":
        return tuple(_su2_fields(chart) + _coordinate_fields(chart, 3, 1))
    raise KeyError(name)


_SU2_DOMAIN = [(-1.0, 1.0), (0.5, 2.6), (-1.0, 1.0)]

PRESETS = ("abelian4", "u1", "su2", "su2xu1")


def preset(name: str, chart: Chart | None = None) -> GroupPreset:
    """Named group with a canonical fiber realisation.

    ``abelian4`` and ``u1`` use coordinate fields ``d/dth^a``; ``su2`` uses
    the Euler-angle fields of the module docstring; ``su2xu1`` appends
    ``d/dth3`` to the su(2) fields, with block-diagonal constants.
    """
    if name == "abelian4":
        sc, dom, adj = StructureConstants.abelian(4), [(-1.0, 1.0)] * 4, None
    elif name == "u1":
        sc, dom, adj = StructureConstants.abelian(1), [(-1.0, 1.0)], None
    elif name == "su2":
        sc, dom, adj = StructureConstants.su2(), _SU2_DOMAIN, _su2_adjoint
    elif name == "su2xu1":
        sc = StructureConstants.su2().direct_sum(StructureConstants.abelian(1))
        dom, adj = _SU2_DOMAIN + [(-1.0, 1.0)], _su2xu1_adjoint
    else:
        raise KeyError(f"unknown group preset {name!r}; expected one of {', '.join(PRESETS)}")
    if chart is None:
        chart = Chart.bundle(sc.dim, fiber_domain=dom)
    elif chart.fiber_count != sc.dim:
        raise ValueError(f"preset {name} needs {sc.dim} fiber coordinates, chart has {chart.fiber_count}")
    return GroupPreset(name, sc, chart, _fields_for(name, chart), adj)


def check_representation(p: GroupPreset, points: np.ndarray, tol: float = 1e-8) -> ResidualReport:
    """Decompose ``[X_a, X_b]`` in the fiber fields and compare with ``f^c_{ab}``."""
    X, f, G = p.fiber_fields, p.constants.f, p.dim
    pairs = [(a, b) for a in range(G) for b in range(G)]
    dec = decompose(X, [commutator(X[a], X[b]) for a, b in pairs], points)
    vals = np.empty((len(pairs) * G, len(points)))
    labels = []
    for k, (a, b) in enumerate(pairs):
        for c in range(G):
            vals[k * G + c] = dec.coeffs[:, k, c] - f[c, a, b]
            labels.append((c, a, b))
    rep = from_values("fiber representation", "algebra.representation", vals, tol, points, labels=labels)
    rep.extra["decomposition_residual"] = dec.max_residual
    if dec.singular.any() or dec.max_residual > tol:
        rep.verdict = FAIL
        rep.note = "commutators leave the span of the fiber fields"
    return rep


def load_constants(source) -> StructureConstants:
    """Structure constants from a JSON file or mapping with key ``f`` (``[c][a][b]``)."""
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    if isinstance(source, dict):
        source = source["f"]
    return StructureConstants(np.asarray(source, dtype=float))
