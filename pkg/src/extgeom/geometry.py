"""Tetrad-induced geometry: enlarged derivative, curvature, torsion, Bianchi identities.

A tetrad ``H[a, mu]`` maps the four base directions onto a four-dimensional
gauge algebra, ``X'_mu = H^a_mu X_a``.  From it follow

* the internal connection ``C'[d, mu, a] = f^d_{ca} H^c_mu - X_a(H^d_mu)``,
* the fiber-valued anholonomy ``beta'[a, mu, nu]`` with
  ``[X'_mu, X'_nu] = -beta'^a_{mu nu} X_a = -beta'^rho_{mu nu} X'_rho``,
* the spacetime connection ``Gamma[l, n, m] = C'^l_{n m}`` obtained by
  transmuting ``C'`` with the tetrad.

Index order conventions: ``C'^c_{a mu}`` (connection written with the
algebra index first) equals ``-C'[c, mu, a]``.  Curvatures are stored as
``R[upper, lower, mu, nu]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .expr import Chart, Expr, ZERO, ONE, add, mul, div, _coerce, evaluate_many
from .frames import VectorField, apply, combine
from .report import ResidualReport, check, INFO, FAIL, PASS, from_values
from .tensors import contract, elementwise

__all__ = [
    "Tetrad",
    "IndexKind",
    "Indexed",
    "EnlargedDerivative",
    "CurvatureField",
    "TetradGeometry",
    "frame_from_tetrad",
    "c_from_tetrad",
    "beta_from_tetrad",
    "anholonomy",
    "spacetime_connection",
    "torsion",
    "curvature_internal",
    "curvature",
    "beta_erre_residual",
    "ricci_and_einstein",
    "bianchi1_residual",
    "bianchi2_residual",
    "property_residuals",
    "DET_THRESHOLD",
]

DET_THRESHOLD = 1e-6


def _det_and_cofactors(m: np.ndarray) -> tuple[Expr, np.ndarray]:
    """Symbolic determinant and cofactor matrix of a square object array."""
    n = m.shape[0]
    memo: dict = {}

    def minor_det(rows, cols):
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            r = m[rows[0], cols[0]]
        else:
            terms = []
            for j, c in enumerate(cols):
                e = m[rows[0], c]
                if e is ZERO:
                    continue
                sub = minor_det(rows[1:], cols[:j] + cols[j + 1:])
                terms.append(mul(e, sub) if j % 2 == 0 else -mul(e, sub))
            r = add(*terms)
        memo[key] = r
        return r

    full = tuple(range(n))
    cof = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            rows = full[:i] + full[i + 1:]
            cols = full[:j] + full[j + 1:]
            d = minor_det(rows, cols) if n > 1 else ONE
            cof[i, j] = d if (i + j) % 2 == 0 else -d
    det = add(*(mul(m[0, j], cof[0, j]) for j in range(n)))
    return det, cof


class Tetrad:
    """``H[a, mu] = H^a_mu`` with symbolic inverse ``Hinv[a, mu] = H_a^mu``."""

    def __init__(self, H):
        H = np.asarray(H, dtype=object)
        if H.shape != (4, 4):
            raise ValueError(f"tetrad must be 4x4, got {H.shape}")
        self.H = elementwise(_coerce, H)
        self.det, cof = _det_and_cofactors(self.H)
        self.Hinv = elementwise(lambda c: div(c, self.det), cof)

    @classmethod
    def identity(cls) -> "Tetrad":
        return cls([[ONE if a == m else ZERO for m in range(4)] for a in range(4)])

    def validate(self, chart: Chart, points: np.ndarray, tol: float = 1e-9) -> ResidualReport:
        """Inverse relations pointwise and the determinant threshold."""
        det = evaluate_many([self.det], chart, points)[0]
        k = int(np.argmin(np.abs(det)))
        if abs(det[k]) < DET_THRESHOLD:
            rep = ResidualReport("tetrad invertibility", "tetrad.inverse", float(abs(det[k])), 0.0,
                                 len(points), FAIL, DET_THRESHOLD,
                                 witness={"point": [float(x) for x in points[k]], "value": float(det[k])},
                                 note="|det H| below threshold")
            return rep
        h = evaluate_many(list(self.H.ravel()), chart, points).reshape(4, 4, -1)
        hi = evaluate_many(list(self.Hinv.ravel()), chart, points).reshape(4, 4, -1)
        eye = np.eye(4)[:, :, None]
        r1 = np.einsum("amk,bmk->abk", h, hi) - eye      # H^a_mu H_b^mu - delta
        r2 = np.einsum("amk,ank->mnk", h, hi) - eye      # H^a_mu H_a^nu - delta
        vals = np.concatenate([r1.reshape(16, -1), r2.reshape(16, -1)])
        rep = from_values("tetrad inverse", "tetrad.inverse", vals, tol, points)
        rep.extra["min_abs_det"] = float(abs(det[k]))
        return rep


def frame_from_tetrad(tet: Tetrad, fiber_fields: Sequence[VectorField]) -> list[VectorField]:
    """``X'_mu = H^a_mu X_a``."""
    return [combine([tet.H[a, m] for a in range(4)], fiber_fields) for m in range(4)]


def _f(f) -> np.ndarray:
    return np.asarray(getattr(f, "f", f), dtype=float)


def c_from_tetrad(tet: Tetrad, fiber_fields, f) -> np.ndarray:
    """``C'[d, mu, a] = f^d_{ca} H^c_mu - X_a(H^d_mu)``."""
    f = _f(f)
    fh = contract("dca,cm->dma", f, tet.H)
    out = np.empty((4, 4, 4), dtype=object)
    for d, m, a in np.ndindex(out.shape):
        out[d, m, a] = fh[d, m, a] - apply(fiber_fields[a], tet.H[d, m])
    return out


def beta_from_tetrad(tet: Tetrad, base_fields, f) -> np.ndarray:
    """Fiber-valued anholonomy of ``{X'_mu}``:
    ``beta'^a_{mu nu} = -(X'_mu H^a_nu - X'_nu H^a_mu + f^a_{bc} H^b_mu H^c_nu)``."""
    f = _f(f)
    fhh = contract("abc,bm,cn->amn", f, tet.H, tet.H)
    out = np.empty((4, 4, 4), dtype=object)
    for a, m, n in np.ndindex(out.shape):
        if m == n:
            out[a, m, n] = ZERO
        elif m > n:
            out[a, m, n] = -out[a, n, m]
        else:
            out[a, m, n] = -(apply(base_fields[m], tet.H[a, n]) - apply(base_fields[n], tet.H[a, m])
                             + fhh[a, m, n])
    return out


def anholonomy(beta_internal: np.ndarray, tet: Tetrad) -> np.ndarray:
    """``beta'^rho_{mu nu} = beta'^a_{mu nu} H_a^rho``."""
    return contract("amn,ar->rmn", beta_internal, tet.Hinv)


def torsion(tet: Tetrad, base_fields, f) -> np.ndarray:
    """``T^rho_{mu nu} = H_a^rho (X'_mu H^a_nu - X'_nu H^a_mu + f^a_{bc} H^b_mu H^c_nu)``."""
    f = _f(f)
    fhh = contract("abc,bm,cn->amn", f, tet.H, tet.H)
    inner = np.empty((4, 4, 4), dtype=object)
    for a, m, n in np.ndindex(inner.shape):
        inner[a, m, n] = (apply(base_fields[m], tet.H[a, n]) - apply(base_fields[n], tet.H[a, m])
                          + fhh[a, m, n])
    return contract("amn,ar->rmn", inner, tet.Hinv)


def spacetime_connection(Cprime: np.ndarray, tet: Tetrad, base_fields) -> np.ndarray:
    """``Gamma[l, n, m] = C'^l_{n m}`` solved from
    ``C'^b_{a mu} = H^b_l C'^l_{n mu} H_a^n + H_a^n X'_mu(H^b_n)``:

    ``C'^l_{n mu} = H_b^l H^a_n C'^b_{a mu} - H_b^l X'_mu(H^b_n)``.
    """
    K = elementwise(lambda e: -e, np.transpose(Cprime, (0, 2, 1)))      # K[b, a, mu] = C'^b_{a mu}
    dH = np.empty((4, 4, 4), dtype=object)                               # dH[b, n, mu] = X'_mu H^b_n
    for b, n, m in np.ndindex(dH.shape):
        dH[b, n, m] = apply(base_fields[m], tet.H[b, n])
    t1 = contract("bl,an,bam->lnm", tet.Hinv, tet.H, K)
    t2 = contract("bl,bnm->lnm", tet.Hinv, dH)
    return elementwise(lambda x, y: x - y, t1, t2)


# ---------------------------------------------------------------------------
# enlarged derivative
# ---------------------------------------------------------------------------

class IndexKind(str, Enum):
    INT_UP = "int^"        # algebra index, upper
    INT_DOWN = "int_"      # algebra index, lower
    SP_UP = "sp^"          # transmuted spacetime index, upper
    SP_DOWN = "sp_"        # transmuted spacetime index, lower
    TORSION = "tor_"       # lower slot carrying the anholonomy rule
    EXTERNAL = "ext"       # untouched by the connection


@dataclass(frozen=True)
class Indexed:
    """An Expr array with an explicit index signature."""

    values: np.ndarray
    kinds: tuple

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=object)
        kinds = tuple(IndexKind(k) for k in self.kinds)
        if vals.ndim != len(kinds):
            raise ValueError(f"signature has {len(kinds)} indices, array has rank {vals.ndim}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "kinds", kinds)


class EnlargedDerivative:
    """``X'*_mu`` acting on indexed arrays by signature dispatch.

    For derivative direction ``mu`` the rules are::

        upper algebra index c      : + C'[c, mu, a] Z^a        (= -C'^c_{a mu} Z^a)
        lower algebra index c      : - C'[e, mu, c] Z_e        (= +C'^e_{c mu} Z_e)
        upper spacetime index r    : - Gamma[r, s, mu] Z^s
        lower spacetime index s    : + Gamma[r, s, mu] Z_r
        lower torsion-rule slot l  : - bsp[r, l, mu] Z_r
        external index             : nothing

    The result has the derivative index first, followed by the operand's
    indices; its signature starts with ``EXTERNAL``.
    """

    def __init__(self, base_fields, Cprime: np.ndarray, gamma: np.ndarray | None = None,
                 beta_space: np.ndarray | None = None):
        self.base_fields = list(base_fields)
        self.Cprime = Cprime
        self.gamma = gamma
        self.beta_space = beta_space

    def along(self, mu: int, Z: Indexed) -> np.ndarray:
        if not isinstance(Z, Indexed):
            raise TypeError("operand needs an explicit index signature (wrap it in Indexed)")
        vals = Z.values
        Y = self.base_fields[mu]
        out = elementwise(lambda e: apply(Y, e), vals) if vals.ndim else np.array(apply(Y, vals.item()), dtype=object)
        extra: list[np.ndarray] = []
        for slot, kind in enumerate(Z.kinds):
            if kind is IndexKind.EXTERNAL:
                continue
            if kind is IndexKind.INT_UP:
                M = self.Cprime[:, mu, :]                 # M[c, a], coefficient of Z^a
            elif kind is IndexKind.INT_DOWN:
                M = elementwise(lambda e: -e, self.Cprime[:, mu, :].T)   # M[c, e]
            elif kind is IndexKind.SP_UP:
                M = elementwise(lambda e: -e, self._need("gamma")[:, :, mu])
            elif kind is IndexKind.SP_DOWN:
                M = self._need("gamma")[:, :, mu].T
            else:
                M = elementwise(lambda e: -e, self._need("beta_space")[:, :, mu].T)
            extra.append(_slot_contract(M, vals, slot))
        if extra:
            out = elementwise(lambda *xs: add(*xs), out, *extra)
        return out

    def __call__(self, Z: Indexed) -> Indexed:
        vals = np.empty((len(self.base_fields),) + Z.values.shape, dtype=object)
        for m in range(len(self.base_fields)):
            vals[m] = self.along(m, Z)
        return Indexed(vals, (IndexKind.EXTERNAL,) + Z.kinds)

    def _need(self, name):
        v = getattr(self, name)
        if v is None:
            raise ValueError(f"operand uses a spacetime rule but no {name} was supplied")
        return v


def _slot_contract(M: np.ndarray, vals: np.ndarray, slot: int) -> np.ndarray:
    """``out[..., i, ...] = sum_j M[i, j] vals[..., j, ...]`` on axis ``slot``."""
    moved = np.moveaxis(vals, slot, 0)
    n = M.shape[0]
    res = np.empty((n,) + moved.shape[1:], dtype=object)
    for i in range(n):
        for rest in np.ndindex(moved.shape[1:]):
            res[(i,) + rest] = add(*(mul(M[i, j], moved[(j,) + rest]) for j in range(moved.shape[0])
                                     if M[i, j] is not ZERO and moved[(j,) + rest] is not ZERO))
    return np.moveaxis(res, 0, slot)


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def _conn(C: np.ndarray) -> np.ndarray:
    """``K[c, a, mu] = C'^c_{a mu} = -C'[c, mu, a]``."""
    return elementwise(lambda e: -e, np.transpose(C, (0, 2, 1)))


def _curv(K: np.ndarray, base_fields, beta_space: np.ndarray | None) -> np.ndarray:
    """Curvature of ``K[c, a, mu]`` in the frame ``base_fields``; adds
    ``beta^r_{mu nu} K[c, a, r]`` when ``beta_space`` is given."""
    n_up, n_lo, nb = K.shape
    dK = np.empty((nb,) + K.shape, dtype=object)   # dK[m, c, a, n] = X'_m K[c, a, n]
    for m in range(nb):
        dK[m] = elementwise(lambda e: apply(base_fields[m], e), K)
    KK = contract("cbm,ban->camn", K, K)
    bK = contract("rmn,car->camn", beta_space, K) if beta_space is not None else None
    out = np.empty((n_up, n_lo, nb, nb), dtype=object)
    for c, a, m, n in np.ndindex(out.shape):
        if m == n:
            out[c, a, m, n] = ZERO
        elif m > n:
            out[c, a, m, n] = -out[c, a, n, m]
        else:
            terms = [dK[m, c, a, n], -dK[n, c, a, m], -KK[c, a, m, n], KK[c, a, n, m]]
            if bK is not None:
                terms.append(bK[c, a, m, n])
            out[c, a, m, n] = add(*terms)
    return out


def curvature_internal(Cprime: np.ndarray, base_fields) -> np.ndarray:
    """``R'^c_{a mu nu} = X'_mu C'^c_{a nu} - X'_nu C'^c_{a mu}
    - C'^c_{b mu} C'^b_{a nu} + C'^c_{b nu} C'^b_{a mu}``."""
    return _curv(_conn(Cprime), base_fields, None)


@dataclass
class CurvatureField:
    internal: np.ndarray                 # [c, a, mu, nu]
    spacetime: np.ndarray | None = None  # [rho, sigma, mu, nu]


def curvature(Cprime: np.ndarray, base_fields, beta_space: np.ndarray,
              gamma: np.ndarray | None = None) -> CurvatureField:
    """Internal curvature with the anholonomy completion term and, when the
    spacetime connection ``gamma[l, n, m]`` is given, the all-spacetime form
    built from ``gamma`` by the same formula."""
    internal = _curv(_conn(Cprime), base_fields, beta_space)
    space = _curv(gamma, base_fields, beta_space) if gamma is not None else None
    return CurvatureField(internal, space)


def transmuted_curvature(curv_internal: np.ndarray, tet: Tetrad) -> np.ndarray:
    """``H_c^rho H^a_sigma R^c_{a mu nu}``."""
    return contract("cr,as,camn->rsmn", tet.Hinv, tet.H, curv_internal)


# ---------------------------------------------------------------------------
# identity residuals
# ---------------------------------------------------------------------------

def _sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return elementwise(lambda x, y: x - y, a, b)


def beta_erre_residual(beta_internal: np.ndarray, Rprime: np.ndarray, fiber_fields, f,
                       chart: Chart, points: np.ndarray, tol: float = 1e-8,
                       curv_space: np.ndarray | None = None, beta_space: np.ndarray | None = None,
                       base_fields=None) -> list[ResidualReport]:
    """Fiber derivative of the anholonomy against curvature.

    Always: ``X_b(beta'^a_{mu nu}) + f^a_{bc} beta'^c_{mu nu} + R'^a_{b mu nu}``.
    With the spacetime curvature, anholonomy and frame also:
    ``Rsp^a_{s mu nu} + X'_s(beta'^a_{mu nu})``.
    """
    f = _f(f)
    G = len(fiber_fields)
    Xb = np.empty((G,) + beta_internal.shape, dtype=object)
    for b in range(G):
        Xb[b] = elementwise(lambda e: apply(fiber_fields[b], e), beta_internal)
    fb = contract("abc,cmn->abmn", f, beta_internal)
    res = np.empty(Rprime.shape, dtype=object)
    for a, b, m, n in np.ndindex(res.shape):
        res[a, b, m, n] = add(Xb[b, a, m, n], fb[a, b, m, n], Rprime[a, b, m, n])
    reports = [check("fiber derivative of anholonomy", "anholonomy.fiber", res, chart, points, tol)]
    if curv_space is not None:
        res2 = np.empty(curv_space.shape, dtype=object)
        for r, s, m, n in np.ndindex(res2.shape):
            res2[r, s, m, n] = curv_space[r, s, m, n] + apply(base_fields[s], beta_space[r, m, n])
        reports.append(check("curvature as anholonomy derivative", "curvature.anholonomy", res2, chart,
                             points, tol))
    return reports


def _cyc(fn):
    """``fn(l, m, n) + fn(n, l, m) + fn(m, n, l)``."""
    return lambda l, m, n: add(fn(l, m, n), fn(n, l, m), fn(m, n, l))


def bianchi1_residual(curv_space: np.ndarray, beta_space: np.ndarray, base_fields, chart: Chart,
                      points: np.ndarray, tol: float = 1e-8) -> list[ResidualReport]:
    """Cyclic curvature sum against the cyclic frame derivative of the anholonomy,
    and the cyclic identity linking that derivative to quadratic anholonomy terms."""
    R, B = curv_space, beta_space
    dB = np.empty((4, 4, 4, 4), dtype=object)       # dB[l, r, m, n] = X'_l B[r, m, n]
    for l in range(4):
        dB[l] = elementwise(lambda e: apply(base_fields[l], e), B)
    BB = contract("amn,rla->rlmn", B, B)     # B^a_{mn} B^r_{la}
    first = np.empty((4, 4, 4, 4), dtype=object)
    cyc = np.empty((4, 4, 4, 4), dtype=object)
    for a, l, m, n in np.ndindex(first.shape):
        lhs = add(R[a, l, m, n], R[a, n, l, m], R[a, m, n, l])
        rhs = add(dB[l, a, n, m], dB[m, a, l, n], dB[n, a, m, l])
        first[a, l, m, n] = lhs - rhs
        cyc[a, l, m, n] = add(dB[l, a, n, m], dB[m, a, l, n], dB[n, a, m, l],
                              BB[a, l, m, n], BB[a, m, n, l], BB[a, n, l, m])
    return [check("first Bianchi identity", "bianchi.first", first, chart, points, tol),
            check("cyclic anholonomy identity", "bianchi.cyclic", cyc, chart, points, tol)]


def bianchi2_residual(curv_space: np.ndarray, D: EnlargedDerivative, chart: Chart, points: np.ndarray,
                      tol: float = 1e-8, kinds=None) -> ResidualReport:
    """Cyclic sum ``D_n R^a_{s l m} + D_l R^a_{s m n} + D_m R^a_{s n l}``.

    ``kinds`` overrides the curvature's index signature (default: upper
    spacetime, lower spacetime, torsion-rule slot, external).
    """
    kinds = kinds or (IndexKind.SP_UP, IndexKind.SP_DOWN, IndexKind.TORSION, IndexKind.EXTERNAL)
    DR = D(Indexed(curv_space, kinds)).values        # DR[n, a, s, l, m]
    res = np.empty((4, 4, 4, 4, 4), dtype=object)
    for a, s, l, m, n in np.ndindex(res.shape):
        if l == m or m == n or l == n:
            res[a, s, l, m, n] = ZERO
            continue
        res[a, s, l, m, n] = add(DR[n, a, s, l, m], DR[l, a, s, m, n], DR[m, a, s, n, l])
    return check("second Bianchi identity", "bianchi.second", res, chart, points, tol)


def ricci_and_einstein(curv_space: np.ndarray, g: np.ndarray, ginv: np.ndarray):
    """Ricci ``R_{s n} = R^a_{s a n}``, scalar ``g^{s n} R_{s n}`` and
    ``G^{a s} = R^{a s} - g^{a s} R - g^{s n} R^{a m}_{m n}``.

    Index raising uses ``ginv``: ``R^{a s} = g^{s n} R^a_n`` with
    ``R^a_n = g^{a k} R_{k n}``, and ``R^{a m}_{m n} = g^{m k} R^a_{k m n}``.
    """
    ricci = contract("asan->sn", curv_space)
    scalar = contract("sn,sn->", ginv, ricci)[()]
    ric_up = contract("ak,sn,kn->as", ginv, ginv, ricci)
    mixed = contract("mk,akmn->an", ginv, curv_space)          # R^{a m}_{m n}
    third = contract("sn,an->as", ginv, mixed)
    G = np.empty((4, 4), dtype=object)
    for a, s in np.ndindex(G.shape):
        G[a, s] = ric_up[a, s] - mul(ginv[a, s], scalar) - third[a, s]
    return ricci, scalar, G


def contracted_bianchi(G: np.ndarray, D: EnlargedDerivative) -> np.ndarray:
    """``D_a G^{a s}`` with both indices treated as upper spacetime indices."""
    DG = D(Indexed(G, (IndexKind.SP_UP, IndexKind.SP_UP))).values   # [n, a, s]
    return np.array([add(*(DG[a, a, s] for a in range(4))) for s in range(4)], dtype=object)


def antisymmetry_defect(curv_space: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``R_{a b l m} + R_{b a l m}`` with the first index lowered by ``g``."""
    low = contract("ka,kblm->ablm", g, curv_space)
    return elementwise(lambda x, y: x + y, low, np.swapaxes(low, 0, 1))


def property_residuals(D: EnlargedDerivative, beta_space: np.ndarray, curv_space: np.ndarray,
                       gamma: np.ndarray, Cprime: np.ndarray, fiber_fields, tet: Tetrad,
                       chart: Chart, points: np.ndarray, tol: float = 1e-8) -> list[ResidualReport]:
    """Transmutation properties of the tetrad geometry.

    * the spacetime connection equals the anholonomy with swapped lower pair,
    * ``X'*`` and ``X'`` agree on external-only operands (anholonomy and curvature),
    * fiber fields expressed through the enlarged derivative,
    * fiber invariance of ``C'`` (reported as info: it marks the direct-product regime).
    """
    reps = []
    swapped = np.transpose(beta_space, (0, 2, 1))
    reps.append(check("spacetime connection is anholonomy", "connection.anholonomy",
                      _sub(gamma, swapped), chart, points, tol))
    ext3 = (IndexKind.EXTERNAL,) * 3
    ext4 = (IndexKind.EXTERNAL,) * 4
    plain_b = np.array([elementwise(lambda e: apply(Y, e), beta_space) for Y in D.base_fields], dtype=object)
    plain_r = np.array([elementwise(lambda e: apply(Y, e), curv_space) for Y in D.base_fields], dtype=object)
    reps.append(check("enlarged derivative on external anholonomy", "enlarged.external",
                      _sub(D(Indexed(beta_space, ext3)).values, plain_b), chart, points, tol))
    reps.append(check("enlarged derivative on external curvature", "enlarged.external",
                      _sub(D(Indexed(curv_space, ext4)).values, plain_r), chart, points, tol))
    # X_a Z^c = H_a^mu (X'*_mu Z^c + C'^c_{b mu} Z^b), tested on Z^c = H^c_nu (nu external)
    Z = Indexed(tet.H, (IndexKind.INT_UP, IndexKind.EXTERNAL))
    DZ = D(Z).values                                  # [mu, c, nu]
    K = _conn(Cprime)                                 # K[c, b, mu]
    KZ = contract("cbm,bn->mcn", K, tet.H)
    inner = elementwise(lambda x, y: x + y, DZ, KZ)
    rhs = contract("am,mcn->acn", tet.Hinv, inner)
    lhs = np.empty((4, 4, 4), dtype=object)
    for a, c, n in np.ndindex(lhs.shape):
        lhs[a, c, n] = apply(fiber_fields[a], tet.H[c, n])
    reps.append(check("fiber fields via enlarged derivative", "enlarged.fiber", _sub(lhs, rhs), chart,
                      points, tol))
    XC = np.empty((len(fiber_fields),) + Cprime.shape, dtype=object)
    for a, X in enumerate(fiber_fields):
        XC[a] = elementwise(lambda e: apply(X, e), Cprime)
    inv = check("fiber invariance of C'", "connection.invariance", XC, chart, points, tol)
    inv.note = ("direct-product regime" if inv.verdict == PASS
                else "extended (non-direct-product) regime")
    if inv.verdict == FAIL:
        inv.verdict = INFO
    reps.append(inv)
    return reps


@dataclass
class TetradGeometry:
    """Every derived object of a tetrad on a fiber realisation."""

    tetrad: Tetrad
    base_fields: list
    fiber_fields: tuple
    f: np.ndarray
    Cprime: np.ndarray
    beta_internal: np.ndarray
    beta_space: np.ndarray
    gamma: np.ndarray
    Rprime: np.ndarray
    curv: CurvatureField
    T: np.ndarray
    D: EnlargedDerivative

    @classmethod
    def build(cls, tet: Tetrad, fiber_fields, f) -> "TetradGeometry":
        f = _f(f)
        base = frame_from_tetrad(tet, fiber_fields)
        C = c_from_tetrad(tet, fiber_fields, f)
        b_int = beta_from_tetrad(tet, base, f)
        b_sp = anholonomy(b_int, tet)
        gam = spacetime_connection(C, tet, base)
        Rp = curvature_internal(C, base)
        curv = curvature(C, base, b_sp, gam)
        T = torsion(tet, base, f)
        D = EnlargedDerivative(base, C, gam, b_sp)
        return cls(tet, base, tuple(fiber_fields), f, C, b_int, b_sp, gam, Rp, curv, T, D)
