"""Small helpers for object arrays of expressions."""
from __future__ import annotations

import itertools

import numpy as np

from .expr import Chart, Expr, ZERO, add, const, differentiate, parse, _coerce


def zeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def as_exprs(table, chart: Chart | None = None) -> np.ndarray:
    """Convert nested lists of numbers, strings or Expr into an object array."""
    arr = np.array(table, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for ix in np.ndindex(arr.shape):
        v = arr[ix]
        out[ix] = parse(v, chart) if isinstance(v, str) else _coerce(v)
    return out


def constant(values) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    out = np.empty(a.shape, dtype=object)
    for ix in np.ndindex(a.shape):
        out[ix] = const(a[ix])
    return out


def expr_sum(terms) -> Expr:
    return add(*terms)


def contract(subscripts: str, *operands) -> np.ndarray:
    """Einstein summation over object arrays of Expr.

    ``subscripts`` uses numpy einsum notation with an explicit output, e.g.
    ``"cab,bm->cam"``.  Operands may be object or numeric arrays; numeric
    zeros are skipped so sparse structure constants stay cheap.
    """
    ins, out = subscripts.replace(" ", "").split("->")
    ins = ins.split(",")
    if len(ins) != len(operands):
        raise ValueError("operand count does not match subscripts")
    dims: dict[str, int] = {}
    for sub, op in zip(ins, operands):
        if len(sub) != np.ndim(op):
            raise ValueError(f"subscript {sub!r} does not match operand rank {np.ndim(op)}")
        for ch, n in zip(sub, np.shape(op)):
            if dims.setdefault(ch, n) != n:
                raise ValueError(f"dimension mismatch on index {ch!r}")
    summed = [ch for ch in dims if ch not in out]
    result = np.empty(tuple(dims[c] for c in out), dtype=object)
    for oix in np.ndindex(result.shape):
        fixed = dict(zip(out, oix))
        terms = []
        for six in itertools.product(*(range(dims[c]) for c in summed)):
            env = dict(fixed)
            env.update(zip(summed, six))
            factors = []
            for sub, op in zip(ins, operands):
                v = op[tuple(env[c] for c in sub)]
                if isinstance(v, Expr):
                    if v is ZERO:
                        break
                elif v == 0:
                    break
                factors.append(v)
            else:
                t = factors[0]
                for fct in factors[1:]:
                    t = t * fct
                terms.append(_coerce(t))
        result[oix] = add(*terms)
    return result


def elementwise(fn, *arrays) -> np.ndarray:
    shape = np.shape(arrays[0])
    out = np.empty(shape, dtype=object)
    for ix in np.ndindex(shape):
        out[ix] = _coerce(fn(*(a[ix] for a in arrays)))
    return out


def d_coord(arr: np.ndarray, coord: str) -> np.ndarray:
    return elementwise(lambda e: differentiate(e, coord), arr)


def antisym_defect(arr: np.ndarray, i: int, j: int) -> np.ndarray:
    """``arr + arr`` with axes ``i`` and ``j`` swapped; zero when antisymmetric."""
    return elementwise(lambda a, b: a + b, arr, np.swapaxes(arr, i, j))
