"""Field equations obtained by duality, metrics, source currents and conservation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .expr import Chart, Expr, add, mul, div, const, evaluate_many
from .frames import apply
from .geometry import EnlargedDerivative, IndexKind, Indexed, Tetrad, _det_and_cofactors
from .report import ResidualReport, check, from_values
from .tensors import constant, contract, elementwise

__all__ = [
    "Metric",
    "SourceCurrent",
    "metric_from_tetrad",
    "flat_metric",
    "metric_from_table",
    "raise_two_form",
    "yang_mills_residual",
    "extended_field_eq_residual",
    "source_current",
    "current_conservation_residual",
    "metric_preservation_residual",
    "hodge_dual",
    "levi_civita",
]

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass
class Metric:
    g: np.ndarray          # [mu, nu]
    ginv: np.ndarray       # [mu, nu]
    internal: np.ndarray   # eta_ab, numeric
    det: Expr | None = None

    def validate(self, chart: Chart, points: np.ndarray, tol: float = 1e-9) -> ResidualReport:
        gv = evaluate_many(list(self.g.ravel()), chart, points).reshape(4, 4, -1)
        giv = evaluate_many(list(self.ginv.ravel()), chart, points).reshape(4, 4, -1)
        prod = np.einsum("mnk,nlk->mlk", gv, giv) - np.eye(4)[:, :, None]
        sym = gv - np.transpose(gv, (1, 0, 2))
        return from_values("metric inverse and symmetry", "metric", np.concatenate(
            [prod.reshape(16, -1), sym.reshape(16, -1)]), tol, points)


@dataclass
class SourceCurrent:
    J: np.ndarray          # [a, nu] = J^{a nu}


def _check_internal(eta) -> np.ndarray:
    eta = np.asarray(eta, dtype=float)
    if eta.ndim != 2 or eta.shape[0] != eta.shape[1]:
        raise ValueError("internal metric must be square")
    if not np.allclose(eta, eta.T):
        raise ValueError("internal metric must be symmetric")
    if abs(np.linalg.det(eta)) < 1e-12:
        raise ValueError("internal metric is degenerate")
    return eta


def metric_from_tetrad(tet: Tetrad, internal=None) -> Metric:
    """``g_{mu nu} = eta_ab H^a_mu H^b_nu``, ``g^{mu nu} = H_a^mu eta^{ab} H_b^nu``."""
    eta = _check_internal(np.eye(4) if internal is None else internal)
    g = contract("ab,am,bn->mn", constant(eta), tet.H, tet.H)
    ginv = contract("am,ab,bn->mn", tet.Hinv, constant(np.linalg.inv(eta)), tet.Hinv)
    return Metric(g, ginv, eta, mul(const(float(np.linalg.det(eta))), tet.det, tet.det))


def flat_metric(kind: str = "minkowski") -> Metric:
    if kind == "minkowski":
        m = MINKOWSKI
    elif kind == "euclidean":
        m = np.eye(4)
    else:
        raise ValueError(f"unknown flat metric {kind!r}")
    return Metric(constant(m), constant(np.linalg.inv(m)), np.eye(4), const(float(np.linalg.det(m))))


def metric_from_table(g: np.ndarray) -> Metric:
    """Metric from an Expr table; inverse through the symbolic adjugate."""
    g = np.asarray(g, dtype=object)
    det, cof = _det_and_cofactors(g)
    ginv = elementwise(lambda c: div(c, det), cof.T)
    return Metric(g, ginv, np.eye(4), det)


def raise_two_form(beta: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """``beta^{a mu nu} = g^{mu k} g^{nu l} beta^a_{k l}``."""
    return contract("mk,nl,akl->amn", ginv, ginv, beta)


def _divergence(up: np.ndarray, base_fields) -> np.ndarray:
    """``out[a, nu] = sum_mu Y_mu(up[a, mu, nu])``."""
    G = up.shape[0]
    out = np.empty((G, 4), dtype=object)
    for a, n in np.ndindex(out.shape):
        out[a, n] = add(*(apply(base_fields[m], up[a, m, n]) for m in range(4)))
    return out


def yang_mills_residual(beta: np.ndarray, metric: Metric, base_fields, chart: Chart, points: np.ndarray,
                        tol: float = 1e-9) -> ResidualReport:
    """``Y_mu beta^{a mu nu}`` for a direct-product configuration."""
    res = _divergence(raise_two_form(beta, metric.ginv), base_fields)
    return check("sourceless gauge field equation", "field.gauge", res, chart, points, tol)


def _field_lhs(beta: np.ndarray, Cprime: np.ndarray, metric: Metric, base_fields) -> np.ndarray:
    """``X'_mu beta'^{a mu nu} - C'^a_{d mu} beta'^{d mu nu}``; note ``C'^a_{d mu} = -C'[a, mu, d]``."""
    up = raise_two_form(beta, metric.ginv)
    div_ = _divergence(up, base_fields)
    cb = contract("amd,dmn->an", Cprime, up)
    return elementwise(lambda x, y: x + y, div_, cb)


def source_current(beta: np.ndarray, Cprime: np.ndarray, metric: Metric, base_fields) -> SourceCurrent:
    """``J^{a nu} = X'*_mu beta'^{a mu nu}`` (spacetime indices external)."""
    return SourceCurrent(_field_lhs(beta, Cprime, metric, base_fields))


def extended_field_eq_residual(beta: np.ndarray, Cprime: np.ndarray, metric: Metric, base_fields,
                               chart: Chart, points: np.ndarray, J: SourceCurrent | None = None,
                               tol: float = 1e-8) -> ResidualReport:
    """``X'*_mu beta'^{a mu nu} - J^{a nu}``; ``J = 0`` gives the sourceless equation."""
    lhs = _field_lhs(beta, Cprime, metric, base_fields)
    if J is not None:
        lhs = elementwise(lambda x, y: x - y, lhs, J.J)
    return check("extended field equation", "field.extended", lhs, chart, points, tol)


def current_conservation_residual(J: SourceCurrent, D: EnlargedDerivative, chart: Chart,
                                  points: np.ndarray, tol: float = 1e-7,
                                  spacetime: IndexKind = IndexKind.EXTERNAL) -> ResidualReport:
    """``X'*_nu J^{a nu}`` with the ``C'`` rule on the internal index.

    By default the spacetime index is external (no connection term), which is the
    reading under which conservation follows from the field equation when ``J`` is
    raised with a fiber-independent metric.  ``IndexKind.SP_UP`` adds the
    anholonomy trace ``-Gamma^nu_{r nu} J^{a r}``."""
    DJ = D(Indexed(J.J, (IndexKind.INT_UP, spacetime))).values     # [nu, a, nu']
    res = np.array([add(*(DJ[n, a, n] for n in range(4))) for a in range(J.J.shape[0])], dtype=object)
    return check("current conservation", "current.conservation", res, chart, points, tol)


def metric_preservation_residual(metric: Metric, D: EnlargedDerivative, chart: Chart,
                                 points: np.ndarray, tol: float = 1e-8) -> ResidualReport:
    """``D_l g_{mu nu}`` with both metric indices as lower spacetime indices."""
    Dg = D(Indexed(metric.g, (IndexKind.SP_DOWN, IndexKind.SP_DOWN))).values
    return check("metric preservation", "metric.preservation", Dg, chart, points, tol)


def levi_civita(n: int = 4) -> np.ndarray:
    """Permutation symbol with ``eps[0, 1, 2, 3] = +1``."""
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


def hodge_dual(two_form: np.ndarray, metric: Metric, sqrt_abs_det: Expr | None = None) -> np.ndarray:
    """``(*b)^a_{mu nu} = 1/2 sqrt|g| eps_{mu nu r s} g^{r k} g^{s l} b^a_{k l}``.

    ``sqrt_abs_det`` must be supplied for non-constant metrics (the grammar
    has no square root); constant metrics use their numeric determinant.
    """
    if sqrt_abs_det is None:
        try:
            num = np.array([[float(e.value) for e in row] for row in metric.g])  # type: ignore[attr-defined]
        except AttributeError:
            raise ValueError("non-constant metric: pass sqrt_abs_det explicitly") from None
        sqrt_abs_det = const(float(np.sqrt(abs(np.linalg.det(num)))))
    up = raise_two_form(two_form, metric.ginv)         # [a, r, s]
    eps = levi_civita(4)
    dual = contract("mnrs,ars->amn", eps, up)
    half = mul(const(0.5), sqrt_abs_det)
    return elementwise(lambda e: mul(half, e), dual)
