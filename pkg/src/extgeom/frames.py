"""Vector fields, local frames and the extension coefficients of their algebra.

A frame is a set of base fields ``Y_mu`` (four of them) plus fiber fields
``X_a`` realising a Lie algebra.  Its commutation table reads::

    [Y_mu, Y_nu] = -beta^a_{mu nu} X_a
    [Y_mu, X_a]  =  C^b_{mu a} X_b
    [X_a, X_b]   =  f^c_{ab} X_c

Array conventions used throughout the package: ``C[b, mu, a]``,
``beta[a, mu, nu]``, one-forms ``alpha[a, mu]``, structure constants
``f[c, a, b]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expr import Chart, Expr, ZERO, ONE, add, mul, differentiate, evaluate_many, _coerce
from .report import ResidualReport, check, from_values
from .tensors import contract, elementwise

__all__ = [
    "VectorField",
    "Frame",
    "Decomposition",
    "StructureFunctions",
    "apply",
    "commutator",
    "decompose",
    "structure_functions",
    "basis_change",
    "trivial_frame",
    "transformed_C",
    "transformed_beta",
    "field_strength",
    "generalized_field_strength",
    "jacobi_residuals",
    "jacobi_residual_exprs",
    "adjoint_behavior_residual",
    "central_extension_check",
    "transformation_crosscheck",
    "INDEPENDENCE_THRESHOLD",
]

INDEPENDENCE_THRESHOLD = 1e-8


class VectorField:
    """First-order operator ``sum_i comps[i] * d/d(coordinate i)``."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Sequence):
        comps = tuple(_coerce(c) for c in comps)
        if len(comps) != chart.dim:
            raise ValueError(f"vector field needs {chart.dim} components, got {len(comps)}")
        self.chart = chart
        self.comps = comps

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        k = chart.index[name]
        return cls(chart, [ONE if i == k else ZERO for i in range(chart.dim)])

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        return cls(chart, [ZERO] * chart.dim)

    def __call__(self, e) -> Expr:
        return apply(self, e)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.comps])

    def scale(self, factor) -> "VectorField":
        factor = _coerce(factor)
        return VectorField(self.chart, [mul(factor, a) for a in self.comps])

    __rmul__ = scale

    def __eq__(self, other):
        return (isinstance(other, VectorField) and self.chart.names == other.chart.names
                and all(a is b for a, b in zip(self.comps, other.comps)))

    def __hash__(self):
        return hash((self.chart.names,) + tuple(id(c) for c in self.comps))

    def __repr__(self):
        terms = [f"({c})*d/d{n}" for c, n in zip(self.comps, self.chart.names) if c is not ZERO]
        return "VectorField(" + (" + ".join(terms) or "0") + ")"

    @property
    def is_zero(self) -> bool:
        return all(c is ZERO for c in self.comps)


def combine(coeffs: Sequence, fields: Sequence[VectorField]) -> VectorField:
    """``sum_k coeffs[k] * fields[k]`` with expression coefficients."""
    chart = fields[0].chart
    comps = []
    for i in range(chart.dim):
        comps.append(add(*(mul(c, f.comps[i]) for c, f in zip(coeffs, fields)
                           if f.comps[i] is not ZERO)))
    return VectorField(chart, comps)


def apply(v: VectorField, e) -> Expr:
    """Directional derivative ``v(e)``."""
    e = _coerce(e)
    return add(*(mul(c, differentiate(e, n)) for c, n in zip(v.comps, v.chart.names) if c is not ZERO))


def commutator(v: VectorField, w: VectorField) -> VectorField:
    return VectorField(v.chart, [apply(v, wi) - apply(w, vi) for vi, wi in zip(v.comps, w.comps)])


@dataclass(frozen=True)
class Frame:
    base_fields: tuple[VectorField, ...]
    fiber_fields: tuple[VectorField, ...]

    def __post_init__(self):
        object.__setattr__(self, "base_fields", tuple(self.base_fields))
        object.__setattr__(self, "fiber_fields", tuple(self.fiber_fields))

    @property
    def chart(self) -> Chart:
        return self.fiber_fields[0].chart

    @property
    def members(self) -> tuple[VectorField, ...]:
        return self.base_fields + self.fiber_fields

    def component_matrices(self, points: np.ndarray) -> np.ndarray:
        """Stack of ``(n_points, chart_dim, n_members)`` component matrices."""
        return _field_matrices(self.members, points)

    def min_singular_values(self, points: np.ndarray) -> np.ndarray:
        m = self.component_matrices(points)
        return np.linalg.svd(m, compute_uv=False).min(axis=1)

    def independent(self, points: np.ndarray, threshold: float = INDEPENDENCE_THRESHOLD) -> np.ndarray:
        return self.min_singular_values(points) > threshold


def trivial_frame(chart: Chart, fiber_fields: Sequence[VectorField]) -> Frame:
    """Holonomic base ``{d/dx^mu}`` with the given fiber fields."""
    base = [VectorField.coordinate(chart, n) for n in chart.base_names]
    return Frame(tuple(base), tuple(fiber_fields))


def _field_matrices(fields: Sequence[VectorField], points: np.ndarray) -> np.ndarray:
    chart = fields[0].chart
    exprs = [c for f in fields for c in f.comps]
    vals = evaluate_many(exprs, chart, points)          # (nf*dim, N)
    vals = vals.reshape(len(fields), chart.dim, -1)     # (nf, dim, N)
    return np.transpose(vals, (2, 1, 0))                # (N, dim, nf)


@dataclass
class Decomposition:
    coeffs: np.ndarray      # (N, n_fields) or (N, n_vectors, n_fields)
    residual: np.ndarray    # (N,) least-squares residual norm (max over vectors)
    singular: np.ndarray    # (N,) bool, system rank-deficient / ill-conditioned

    @property
    def max_residual(self) -> float:
        ok = ~self.singular
        return float(self.residual[ok].max(initial=0.0))


def _solve(mats: np.ndarray, rhs: np.ndarray, threshold: float):
    """Pointwise least squares ``mats[k] @ x = rhs[k]`` for stacked systems.

    ``rhs`` is ``(N, dim, n_rhs)``.  Uses an SVD; points whose smallest
    singular value is below ``threshold`` are flagged.
    """
    u, s, vt = np.linalg.svd(mats, full_matrices=False)
    smin = s.min(axis=1)
    singular = smin <= threshold
    sinv = np.where(s > threshold, 1.0 / np.where(s > threshold, s, 1.0), 0.0)
    x = np.einsum("nji,nj,njk->nik", vt, sinv, np.einsum("nji,njk->nik", u, rhs))
    r = np.einsum("nij,njk->nik", mats, x) - rhs
    res = np.linalg.norm(r, axis=1).max(axis=1) if r.shape[2] else np.zeros(len(mats))
    return x, res, singular


def decompose(fields, vectors, points: np.ndarray, threshold: float = INDEPENDENCE_THRESHOLD) -> Decomposition:
    """Express vector field(s) in ``fields`` (a Frame or a list) at each point.

    ``vectors`` may be one VectorField or a list; coefficients come back as
    ``(N, n_fields)`` or ``(N, n_vectors, n_fields)`` respectively.
    """
    members = fields.members if isinstance(fields, Frame) else tuple(fields)
    single = isinstance(vectors, VectorField)
    vecs = [vectors] if single else list(vectors)
    mats = _field_matrices(members, points)
    rhs = _field_matrices(vecs, points) if vecs else np.zeros(mats.shape[:2] + (0,))
    x, res, singular = _solve(mats, rhs, threshold)
    coeffs = np.transpose(x, (0, 2, 1))
    return Decomposition(coeffs[:, 0, :] if single else coeffs, res, singular)


@dataclass
class StructureFunctions:
    """Commutation table of a frame sampled at points (leading axis)."""

    beta: np.ndarray         # (N, G, 4, 4)  minus fiber part of [Y_mu, Y_nu]
    C: np.ndarray            # (N, G, 4, G)  fiber part of [Y_mu, X_a]
    f: np.ndarray            # (N, G, G, G)  fiber part of [X_a, X_b]
    base_yy: np.ndarray      # (N, 4, 4, 4)  base part of [Y_mu, Y_nu]
    base_yx: np.ndarray      # (N, 4, 4, G)  base part of [Y_mu, X_a]
    base_xx: np.ndarray      # (N, 4, G, G)  base part of [X_a, X_b]
    residual: float
    excluded: np.ndarray     # (N,) bool


def structure_functions(frame: Frame, points: np.ndarray,
                        threshold: float = INDEPENDENCE_THRESHOLD) -> StructureFunctions:
    """Numerically decompose every commutator of frame members in the frame."""
    B, X = frame.base_fields, frame.fiber_fields
    nb, G = len(B), len(X)
    comms, slots = [], []
    for m in range(nb):
        for n in range(m + 1, nb):
            comms.append(commutator(B[m], B[n])); slots.append(("yy", m, n))
    for m in range(nb):
        for a in range(G):
            comms.append(commutator(B[m], X[a])); slots.append(("yx", m, a))
    for a in range(G):
        for b in range(a + 1, G):
            comms.append(commutator(X[a], X[b])); slots.append(("xx", a, b))
    dec = decompose(frame, comms, points, threshold)
    N = len(points)
    beta = np.zeros((N, G, nb, nb)); C = np.zeros((N, G, nb, G)); f = np.zeros((N, G, G, G))
    yy = np.zeros((N, nb, nb, nb)); yx = np.zeros((N, nb, nb, G)); xx = np.zeros((N, nb, G, G))
    for k, (kind, i, j) in enumerate(slots):
        base_part, fiber_part = dec.coeffs[:, k, :nb], dec.coeffs[:, k, nb:]
        if kind == "yy":
            beta[:, :, i, j] = -fiber_part; beta[:, :, j, i] = fiber_part
            yy[:, :, i, j] = base_part; yy[:, :, j, i] = -base_part
        elif kind == "yx":
            C[:, :, i, j] = fiber_part
            yx[:, :, i, j] = base_part
        else:
            f[:, :, i, j] = fiber_part; f[:, :, j, i] = -fiber_part
            xx[:, :, i, j] = base_part; xx[:, :, j, i] = -base_part
    return StructureFunctions(beta, C, f, yy, yx, xx, dec.max_residual, dec.singular)


def basis_change(frame: Frame, alpha: np.ndarray) -> Frame:
    """``Y'_mu = Y_mu - alpha^a_mu X_a``; fiber fields unchanged."""
    alpha = np.asarray(alpha, dtype=object)
    G, nb = len(frame.fiber_fields), len(frame.base_fields)
    if alpha.shape != (G, nb):
        raise ValueError(f"alpha must have shape {(G, nb)}, got {alpha.shape}")
    new = []
    for m, Y in enumerate(frame.base_fields):
        shift = combine([alpha[a, m] for a in range(G)], frame.fiber_fields)
        new.append(Y - shift)
    return Frame(tuple(new), frame.fiber_fields)


def _fiber_derivs(fiber_fields, arr: np.ndarray) -> np.ndarray:
    """``out[b, ...] = X_b(arr[...])``."""
    G = len(fiber_fields)
    out = np.empty((G,) + arr.shape, dtype=object)
    for b in range(G):
        out[b] = elementwise(lambda e: apply(fiber_fields[b], e), arr)
    return out


def _base_derivs(base_fields, arr: np.ndarray) -> np.ndarray:
    out = np.empty((len(base_fields),) + arr.shape, dtype=object)
    for m, Y in enumerate(base_fields):
        out[m] = elementwise(lambda e: apply(Y, e), arr)
    return out


def transformed_C(C: np.ndarray, alpha: np.ndarray, fiber_fields, f) -> np.ndarray:
    """``C'^b_{mu a} = C^b_{mu a} - alpha^c_mu f^b_{ca} + X_a(alpha^b_mu)``."""
    f = np.asarray(getattr(f, "f", f), dtype=float)
    Xa = _fiber_derivs(fiber_fields, alpha)           # [a, b, mu] = X_a(alpha^b_mu)
    fa = contract("cm,bca->bma", alpha, f)
    G, nb = alpha.shape
    out = np.empty((G, nb, G), dtype=object)
    for b, m, a in np.ndindex(out.shape):
        out[b, m, a] = C[b, m, a] - fa[b, m, a] + Xa[a, b, m]
    return out


def transformed_beta(beta: np.ndarray, alpha: np.ndarray, Cprime: np.ndarray, f,
                     new_base_fields, fiber_fields) -> np.ndarray:
    """``beta' = beta + K`` for the change ``Y' = Y - alpha X`` (holonomic base).

    ``K^a_{mu nu} = Y'_mu alpha^a_nu - Y'_nu alpha^a_mu
    + alpha^b_mu X_b(alpha^a_nu) - alpha^b_nu X_b(alpha^a_mu)
    + alpha^b_nu C'^a_{mu b} - alpha^b_mu C'^a_{nu b}
    + f^a_{bc} alpha^b_mu alpha^c_nu``.
    """
    f = np.asarray(getattr(f, "f", f), dtype=float)
    G, nb = alpha.shape
    Ya = _base_derivs(new_base_fields, alpha)         # [mu, a, nu] = Y'_mu(alpha^a_nu)
    Xa = _fiber_derivs(fiber_fields, alpha)           # [b, a, nu] = X_b(alpha^a_nu)
    aXa = contract("bm,ban->amn", alpha, Xa)          # alpha^b_mu X_b(alpha^a_nu)
    aC = contract("bn,amb->amn", alpha, Cprime)       # alpha^b_nu C'^a_{mu b}
    faa = contract("abc,bm,cn->amn", f, alpha, alpha)
    out = np.empty((G, nb, nb), dtype=object)
    for a, m, n in np.ndindex(out.shape):
        if m == n:
            out[a, m, n] = ZERO
            continue
        if m > n:
            out[a, m, n] = -out[a, n, m]
            continue
        out[a, m, n] = add(beta[a, m, n], Ya[m, a, n], -Ya[n, a, m], aXa[a, m, n], -aXa[a, n, m],
                           aC[a, m, n], -aC[a, n, m], faa[a, m, n])
    return out


def field_strength(alpha: np.ndarray, f, chart: Chart) -> np.ndarray:
    """``beta^a_{mu nu} = d_mu alpha^a_nu - d_nu alpha^a_mu + f^a_{bc} alpha^b_mu alpha^c_nu``."""
    f = np.asarray(getattr(f, "f", f), dtype=float)
    G, nb = alpha.shape
    names = chart.base_names
    faa = contract("abc,bm,cn->amn", f, alpha, alpha)
    out = np.empty((G, nb, nb), dtype=object)
    for a, m, n in np.ndindex(out.shape):
        out[a, m, n] = (differentiate(alpha[a, n], names[m]) - differentiate(alpha[a, m], names[n])
                        + faa[a, m, n])
    return out


def generalized_field_strength(sigma: np.ndarray, Cprime: np.ndarray, f, chart: Chart) -> np.ndarray:
    """Deformed field strength of a single change by ``sigma`` from the trivial frame.

    ``beta'^a_{mu nu} = d_mu sigma^a_nu - d_nu sigma^a_mu + f^a_{bc} sigma^b_mu sigma^c_nu
    + C'^a_{mu c} sigma^c_nu - C'^a_{nu c} sigma^c_mu``.
    """
    base = field_strength(sigma, f, chart)
    cs = contract("amc,cn->amn", Cprime, sigma)
    return elementwise(lambda b, x, y: b + x - y, base, cs, np.swapaxes(cs, 1, 2))


def jacobi_residual_exprs(base_fields, fiber_fields, C: np.ndarray, beta: np.ndarray, f) -> tuple:
    """Left-hand sides of the three Jacobi constraints (holonomic base).

    Returns ``(yyy[a, mu, nu, sigma], yyx[a, b, mu, nu], yxx[c, mu, a, b])``.
    """
    f = np.asarray(getattr(f, "f", f), dtype=float)
    G, nb = len(fiber_fields), len(base_fields)
    Yb = _base_derivs(base_fields, beta)        # [mu, a, nu, s] = Y_mu beta^a_{nu s}
    Yc = _base_derivs(base_fields, C)           # [mu, a, nu, b] = Y_mu C^a_{nu b}
    Xb = _fiber_derivs(fiber_fields, beta)      # [b, a, mu, nu]
    Xc = _fiber_derivs(fiber_fields, C)         # [a, c, mu, b] = X_a C^c_{mu b}
    Cb = contract("amc,cns->amns", C, beta)     # C^a_{mu c} beta^c_{nu s}
    yyy = np.empty((G, nb, nb, nb), dtype=object)
    for a, m, n, s in np.ndindex(yyy.shape):
        yyy[a, m, n, s] = add(Yb[m, a, n, s], Yb[s, a, m, n], Yb[n, a, s, m],
                              Cb[a, n, s, m], Cb[a, s, m, n], Cb[a, m, n, s])
    CC = contract("amc,cnb->amnb", C, C)        # C^a_{mu c} C^c_{nu b}
    fb = contract("cmn,abc->abmn", beta, f)     # beta^c_{mu nu} f^a_{bc}
    yyx = np.empty((G, G, nb, nb), dtype=object)
    for a, b, m, n in np.ndindex(yyx.shape):
        yyx[a, b, m, n] = add(Yc[m, a, n, b], -Yc[n, a, m, b], CC[a, m, n, b], -CC[a, n, m, b],
                              -Xb[b, a, m, n], -fb[a, b, m, n])
    t1 = contract("dma,cbd->cmab", C, f)        # C^d_{mu a} f^c_{bd}
    t2 = contract("cmd,dba->cmab", C, f)        # C^c_{mu d} f^d_{ba}
    yxx = np.empty((G, nb, G, G), dtype=object)
    for c, m, a, b in np.ndindex(yxx.shape):
        yxx[c, m, a, b] = add(Xc[a, c, m, b], -Xc[b, c, m, a], -t1[c, m, a, b], t2[c, m, a, b],
                              t1[c, m, b, a])
    return yyy, yyx, yxx


def jacobi_residuals(base_fields, fiber_fields, C, beta, f, chart: Chart, points: np.ndarray,
                     tol: float = 1e-8, tags=("jacobi.yyy", "jacobi.yyx", "jacobi.yxx"),
                     names=("jacobi YYY", "jacobi YYX", "jacobi YXX")) -> list[ResidualReport]:
    exprs = jacobi_residual_exprs(base_fields, fiber_fields, C, beta, f)
    return [check(n, t, e, chart, points, tol) for n, t, e in zip(names, tags, exprs)]


def adjoint_behavior_residual(field: np.ndarray, fiber_fields, f, chart: Chart, points: np.ndarray,
                              tol: float = 1e-8, Cprime: np.ndarray | None = None,
                              tag: str = "adjoint") -> tuple[ResidualReport, ResidualReport | None]:
    """Deviation of ``field[a, ...]`` from adjoint behaviour under the fiber fields.

    Strict residual: ``X_b(field^a_...) - f^a_{cb} field^c_...``.  When ``Cprime``
    (shape ``[a, ..., b]``) is given the corrected residual subtracts
    ``C'^a_{... b}`` as well.
    """
    f = np.asarray(getattr(f, "f", f), dtype=float)
    field = np.asarray(field, dtype=object)
    Xf = _fiber_derivs(fiber_fields, field)              # [b, a, ...]
    rest = "mnpq"[: field.ndim - 1]
    ff = contract(f"acb,c{rest}->ba{rest}", f, field)   # f^a_{cb} field^c
    strict = elementwise(lambda x, y: x - y, Xf, ff)
    strict_rep = check("adjoint behaviour (strict)", tag, strict, chart, points, tol)
    if Cprime is None:
        return strict_rep, None
    corr = np.empty(strict.shape, dtype=object)
    for ix in np.ndindex(strict.shape):
        b, a, ext = ix[0], ix[1], ix[2:]
        corr[ix] = strict[ix] - Cprime[(a,) + ext + (b,)]
    return strict_rep, check("adjoint behaviour (C'-corrected)", tag, corr, chart, points, tol)


def central_extension_check(beta: np.ndarray, fiber_fields, f, chart: Chart, points: np.ndarray,
                            tol: float = 1e-8) -> ResidualReport:
    """``X_b(beta^c_{mu nu}) + f^c_{ba} beta^a_{mu nu} = 0``."""
    f = np.asarray(getattr(f, "f", f), dtype=float)
    Xb = _fiber_derivs(fiber_fields, beta)              # [b, c, mu, nu]
    fb = contract("cba,amn->bcmn", f, beta)
    res = elementwise(lambda x, y: x + y, Xb, fb)
    return check("central extension", "central", res, chart, points, tol)


def transformation_crosscheck(frame: Frame, C: np.ndarray, beta: np.ndarray, f, chart: Chart,
                              pts: np.ndarray, tol: float = 1e-8, name: str = "transformation laws vs commutators",
                              tag: str = "frames.crosscheck") -> ResidualReport:
    """Symbolic transformation laws against the numeric commutator table of the frame."""
    f = np.asarray(getattr(f, "f", f), dtype=float)
    sf = structure_functions(frame, pts)
    ok = ~sf.excluded
    n = len(pts)
    Cv = evaluate_many(list(C.ravel()), chart, pts).reshape(C.shape + (-1,))
    bv = evaluate_many(list(beta.ravel()), chart, pts).reshape(beta.shape + (-1,))
    rows = [
        (np.moveaxis(Cv, -1, 0) - sf.C).reshape(n, -1),
        (np.moveaxis(bv, -1, 0) - sf.beta).reshape(n, -1),
        (sf.f - f).reshape(n, -1),
        sf.base_yy.reshape(n, -1),
        sf.base_yx.reshape(n, -1),
        sf.base_xx.reshape(n, -1),
    ]
    vals = np.concatenate(rows, axis=1)[ok].T
    rep = from_values(name, tag, vals, tol, pts[ok])
    rep.extra["excluded_points"] = int((~ok).sum())
    if (~ok).any():
        rep.note = "frame is degenerate at some sample points; they are excluded"
    return rep
