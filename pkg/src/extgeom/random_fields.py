"""Random smooth coefficient fields for property tests and demo scenarios."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .expr import Chart, Expr, ZERO, ONE, add, const, cos, mul, sin, var
from .tensors import contract


def random_smooth(chart: Chart, rng: np.random.Generator, coords: Sequence[str] | None = None,
                  terms: int = 3, scale: float = 1.0) -> Expr:
    """Sum of a few products ``c * trig(k . x) * x_i`` over ``coords``.

    Mixing trig and polynomial factors keeps every derivative order nonzero.
    """
    coords = list(coords if coords is not None else chart.names)
    out = []
    for _ in range(terms):
        picks = rng.choice(len(coords), size=min(2, len(coords)), replace=False)
        arg = add(*(mul(const(round(float(rng.uniform(-1.5, 1.5)), 3)), var(coords[i])) for i in picks),
                  const(round(float(rng.uniform(-1, 1)), 3)))
        trig = sin(arg) if rng.random() < 0.5 else cos(arg)
        poly = var(coords[int(rng.integers(len(coords)))]) if rng.random() < 0.5 else ONE
        out.append(mul(const(round(float(scale * rng.uniform(-1, 1)), 3)), trig, poly))
    return add(*out)


def random_one_form(chart: Chart, rng: np.random.Generator, dim: int, coords=None,
                    scale: float = 0.5, terms: int = 2) -> np.ndarray:
    """``alpha[a, mu]`` with random smooth entries."""
    out = np.empty((dim, 4), dtype=object)
    for ix in np.ndindex(out.shape):
        out[ix] = random_smooth(chart, rng, coords, terms=terms, scale=scale)
    return out


def adjoint_one_form(preset, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """One-form with adjoint behaviour: base-only ``A`` lifted by the preset's adjoint matrix."""
    chart = preset.chart
    A = random_one_form(chart, rng, preset.dim, chart.base_names, scale=scale)
    return contract("bc,cm->bm", preset.adjoint_matrix(), A)


def random_tetrad(chart: Chart, rng: np.random.Generator, coords=None, scale: float = 0.25,
                  diag: float = 1.5, terms: int = 2) -> np.ndarray:
    """``diag * I + scale * (random smooth)``: invertible on the sampled domain in practice."""
    H = np.empty((4, 4), dtype=object)
    for a, m in np.ndindex(H.shape):
        e = random_smooth(chart, rng, coords, terms=terms, scale=scale)
        H[a, m] = e + diag if a == m else e
    return H


def killing_tetrad(preset, rng: np.random.Generator, scale: float = 0.25, diag: float = 1.5) -> np.ndarray:
    """Tetrad whose frame fields are Killing for the bi-invariant fiber metric.

    ``H = Ad(g^{-1}) B(x) + A(x)`` on the su(2) block (right- plus left-invariant
    combinations with base-only coefficients) and base-only entries on the
    abelian row, so the tetrad metric ``delta_ab H^a H^b`` is preserved.
    """
    chart = preset.chart
    base = chart.base_names
    if preset.name != "su2xu1":
        raise ValueError("Killing tetrads are provided for su2xu1 only")
    # right-invariant fields have left-invariant components Ad(g^{-1}), the lifting matrix
    adg = preset.adjoint_matrix()
    B = random_tetrad(chart, rng, base, scale=scale, diag=0.0)
    A = random_tetrad(chart, rng, base, scale=scale, diag=diag)
    for j in range(4):
        B[3, j] = ZERO
    right = contract("ab,bm->am", adg, B)
    out = np.empty((4, 4), dtype=object)
    for ix in np.ndindex(out.shape):
        out[ix] = right[ix] + A[ix]
    return out
