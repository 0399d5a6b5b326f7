"""Symbolic scalar expressions over a coordinate chart.

Expressions are immutable, hash-consed DAG nodes.  Structurally equal
expressions are the same Python object, so derivative and evaluation caches
are shared across every array that mentions a subexpression.

Evaluation is vectorised: :func:`evaluate_many` walks the union DAG of a
batch of expressions once and evaluates every node on all sample points at
the same time.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Chart",
    "Expr",
    "Const",
    "Var",
    "ExprError",
    "ExprSyntaxError",
    "UnknownIdentifier",
    "EvaluationError",
    "DivisionByZero",
    "NonFiniteValue",
    "ZeroCheck",
    "const",
    "var",
    "add",
    "mul",
    "div",
    "power",
    "sin",
    "cos",
    "exp",
    "ZERO",
    "ONE",
    "parse",
    "render",
    "differentiate",
    "evaluate",
    "evaluate_many",
    "sample_points",
    "top_terms",
    "is_zero",
]


class ExprError(ValueError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownIdentifier(ExprError):
    def __init__(self, name: str, offset: int | None = None):
        where = "" if offset is None else f" at offset {offset}"
        super().__init__(f"unknown identifier {name!r}{where}")
        self.name = name
        self.offset = offset


class EvaluationError(ArithmeticError):
    """Raised when an expression cannot be evaluated at a point."""

    def __init__(self, message: str, point: np.ndarray | None = None):
        super().__init__(message)
        self.point = point


class DivisionByZero(EvaluationError):
    pass


class NonFiniteValue(EvaluationError):
    pass


# ---------------------------------------------------------------------------
# chart
# ---------------------------------------------------------------------------

_RESERVED = {"sin", "cos", "exp"}


@dataclass(frozen=True)
class Chart:
    """Ordered coordinates: ``base_count`` spacetime ones, then the fiber."""

    names: tuple[str, ...]
    base_count: int = 4
    domain: tuple[tuple[float, float], ...] = ()
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        for n in names:
            if not n.isidentifier() or n in _RESERVED:
                raise ValueError(f"invalid coordinate name {n!r}")
        if not 0 <= self.base_count <= len(names):
            raise ValueError("base_count exceeds number of coordinates")
        dom = tuple(tuple(map(float, d)) for d in self.domain) if self.domain else ((-1.0, 1.0),) * len(names)
        if len(dom) != len(names):
            raise ValueError("one domain interval per coordinate is required")
        for lo, hi in dom:
            if not hi > lo:
                raise ValueError(f"empty domain interval [{lo}, {hi}]")
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})

    @classmethod
    def bundle(cls, fiber_count: int, base_prefix="x", fiber_prefix="th", fiber_domain=None) -> "Chart":
        names = [f"{base_prefix}{i}" for i in range(4)] + [f"{fiber_prefix}{i}" for i in range(fiber_count)]
        dom = [(-1.0, 1.0)] * 4 + list(fiber_domain or [(-1.0, 1.0)] * fiber_count)
        return cls(tuple(names), 4, tuple(dom))

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def fiber_count(self) -> int:
        return len(self.names) - self.base_count

    @property
    def base_names(self) -> tuple[str, ...]:
        return self.names[: self.base_count]

    @property
    def fiber_names(self) -> tuple[str, ...]:
        return self.names[self.base_count:]

    def with_domain(self, overrides: dict[str, tuple[float, float]]) -> "Chart":
        dom = [overrides.get(n, d) for n, d in zip(self.names, self.domain)]
        return Chart(self.names, self.base_count, tuple(dom))

    def coord(self, name: str) -> "Var":
        if name not in self.index:
            raise UnknownIdentifier(name)
        return var(name)


# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------

_INTERN: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()
_VAR_BITS: dict[str, int] = {}


def _var_bit(name: str) -> int:
    """Bit used in dependency masks; lets derivatives skip constant subtrees."""
    b = _VAR_BITS.get(name)
    if b is None:
        b = _VAR_BITS[name] = 1 << len(_VAR_BITS)
    return b


class Expr:
    """Base class of expression nodes.  Build through the module constructors."""

    __slots__ = ("key", "args", "_hash", "_dcache", "_mask", "__weakref__")
    kind = "?"

    def __new__(cls, *a, **k):
        raise TypeError("use the constructor functions of extgeom.expr")

    @classmethod
    def _make(cls, key: tuple, args: tuple = ()):
        full = (cls.kind,) + key
        node = _INTERN.get(full)
        if node is None:
            node = object.__new__(cls)
            node.key = full
            node.args = args
            node._hash = hash(full)
            node._dcache = None
            m = 0
            for a in args:
                m |= a._mask
            if cls.kind == "var":
                m = _var_bit(key[0])
            node._mask = m
            _INTERN[full] = node
        return node

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __repr__(self):
        return f"Expr({render(self)!r})"

    def __str__(self):
        return render(self)

    # arithmetic sugar
    def __add__(self, o):
        return add(self, o)

    def __radd__(self, o):
        return add(o, self)

    def __sub__(self, o):
        return add(self, mul(-1.0, o))

    def __rsub__(self, o):
        return add(o, mul(-1.0, self))

    def __mul__(self, o):
        return mul(self, o)

    def __rmul__(self, o):
        return mul(o, self)

    def __truediv__(self, o):
        return div(self, o)

    def __rtruediv__(self, o):
        return div(o, self)

    def __neg__(self):
        return mul(-1.0, self)

    def __pos__(self):
        return self

    def __pow__(self, n):
        return power(self, n)

    @property
    def is_const(self) -> bool:
        return False

    def variables(self) -> set[str]:
        out = set()
        for node in _postorder([self]):
            if isinstance(node, Var):
                out.add(node.name)
        return out


class Const(Expr):
    __slots__ = ()
    kind = "num"

    @property
    def value(self) -> float:
        return self.key[1]

    @property
    def is_const(self) -> bool:
        return True


class Var(Expr):
    __slots__ = ()
    kind = "var"

    @property
    def name(self) -> str:
        return self.key[1]


class Add(Expr):
    __slots__ = ()
    kind = "add"


class Mul(Expr):
    __slots__ = ()
    kind = "mul"


class Div(Expr):
    __slots__ = ()
    kind = "div"


class Pow(Expr):
    __slots__ = ()
    kind = "pow"

    @property
    def exponent(self) -> int:
        return self.key[2]


class Func(Expr):
    __slots__ = ()
    kind = "fn"

    @property
    def name(self) -> str:
        return self.key[1]


def const(value: float) -> Const:
    v = float(value)
    if v == 0.0:
        v = 0.0  # fold -0.0
    return Const._make((v,))


def var(name: str) -> Var:
    return Var._make((name,))


ZERO = const(0.0)
ONE = const(1.0)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, np.integer, np.floating)):
        return const(x)
    raise TypeError(f"cannot use {type(x).__name__} in an expression")


def _split_coeff(t: Expr) -> tuple[float, Expr]:
    if isinstance(t, Mul) and isinstance(t.args[0], Const):
        rest = t.args[1:]
        return t.args[0].value, rest[0] if len(rest) == 1 else Mul._make(_node_key(rest), rest)
    return 1.0, t


def _node_key(args: Sequence[Expr]) -> tuple:
    # child identity is a stable key while the child is alive; the parent
    # holds strong references to its children
    return tuple(id(a) for a in args)


def add(*terms) -> Expr:
    acc: dict[Expr, float] = {}
    c = 0.0
    stack = [_coerce(t) for t in terms]
    flat: list[Expr] = []
    for t in stack:
        if isinstance(t, Add):
            flat.extend(t.args)
        else:
            flat.append(t)
    for t in flat:
        if isinstance(t, Const):
            c += t.value
            continue
        k, base = _split_coeff(t)
        acc[base] = acc.get(base, 0.0) + k
    out = []
    for base, k in acc.items():
        if k == 0.0:
            continue
        out.append(base if k == 1.0 else mul(k, base))
    if c != 0.0:
        out.append(const(c))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    args = tuple(out)
    return Add._make(_node_key(args), args)


def mul(*factors) -> Expr:
    c = 1.0
    powers: dict[Expr, int] = {}
    flat: list[Expr] = []
    for f in factors:
        f = _coerce(f)
        if isinstance(f, Mul):
            flat.extend(f.args)
        else:
            flat.append(f)
    for f in flat:
        if isinstance(f, Const):
            c *= f.value
            continue
        if isinstance(f, Pow):
            base, n = f.args[0], f.exponent
        else:
            base, n = f, 1
        powers[base] = powers.get(base, 0) + n
    if c == 0.0:
        return ZERO
    out = [power(b, n) for b, n in powers.items()]
    out = [o for o in out if o is not ONE]
    if not out:
        return const(c)
    if c == 1.0 and len(out) == 1:
        return out[0]
    args = tuple(out) if c == 1.0 else (const(c),) + tuple(out)
    return Mul._make(_node_key(args), args)


def div(num, den) -> Expr:
    num, den = _coerce(num), _coerce(den)
    if isinstance(den, Const) and den.value != 0.0:
        return mul(1.0 / den.value, num)
    if num is ZERO:
        return ZERO
    if num is den:
        return ONE
    args = (num, den)
    return Div._make(_node_key(args), args)


def power(base, n) -> Expr:
    base = _coerce(base)
    if isinstance(n, Expr):
        if not isinstance(n, Const):
            raise ExprError("exponents must be integer constants")
        n = n.value
    if isinstance(n, float):
        if not n.is_integer():
            raise ExprError(f"non-integer exponent {n}")
        n = int(n)
    if not isinstance(n, (int, np.integer)):
        raise ExprError("exponents must be integers")
    n = int(n)
    if n < 0:
        raise ExprError(f"negative exponent {n}; use division")
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const):
        return const(base.value ** n)
    if isinstance(base, Pow):
        return power(base.args[0], base.exponent * n)
    args = (base,)
    return Pow._make((id(base), n), args)


def _func(name: str, arg) -> Expr:
    arg = _coerce(arg)
    if isinstance(arg, Const):
        return const(getattr(math, name)(arg.value))
    args = (arg,)
    return Func._make((name, id(arg)), args)


def sin(x) -> Expr:
    return _func("sin", x)


def cos(x) -> Expr:
    return _func("cos", x)


def exp(x) -> Expr:
    return _func("exp", x)


# ---------------------------------------------------------------------------
# traversal
# ---------------------------------------------------------------------------

def _postorder(roots: Iterable[Expr]) -> list[Expr]:
    seen: set[int] = set()
    order: list[Expr] = []
    for root in roots:
        if id(root) in seen:
            continue
        stack = [(root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for a in node.args:
                if id(a) not in seen:
                    stack.append((a, False))
    return order


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

def _d_node(node: Expr, d: list[Expr]) -> Expr:
    """Derivative of ``node`` given derivatives ``d`` of its args."""
    if isinstance(node, Add):
        return add(*d)
    if isinstance(node, Mul):
        terms = []
        for i, di in enumerate(d):
            if di is ZERO:
                continue
            others = node.args[:i] + node.args[i + 1:]
            terms.append(mul(di, *others))
        return add(*terms)
    if isinstance(node, Div):
        u, v = node.args
        du, dv = d
        if dv is ZERO:
            return div(du, v)
        return div(add(mul(du, v), mul(-1.0, u, dv)), power(v, 2))
    if isinstance(node, Pow):
        (b,), (db,) = node.args, d
        if db is ZERO:
            return ZERO
        n = node.exponent
        return mul(float(n), power(b, n - 1), db)
    if isinstance(node, Func):
        (u,), (du,) = node.args, d
        if du is ZERO:
            return ZERO
        if node.name == "sin":
            return mul(cos(u), du)
        if node.name == "cos":
            return mul(-1.0, sin(u), du)
        return mul(node, du)
    raise TypeError(node)


def differentiate(e: Expr, coord: str, chart: Chart | None = None) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``coord``."""
    if chart is not None and coord not in chart.index:
        raise UnknownIdentifier(coord)
    e = _coerce(e)
    cached = e._dcache.get(coord) if e._dcache else None
    if cached is not None:
        return cached
    bit = _VAR_BITS.get(coord, 0)
    if not e._mask & bit:
        return ZERO
    # post-order over the nodes that depend on coord and lack a cached derivative
    stack = [(e, False)]
    while stack:
        node, ready = stack.pop()
        dc = node._dcache
        if dc is not None and coord in dc:
            continue
        if ready:
            if isinstance(node, Var):
                r = ONE
            else:
                r = _d_node(node, [a._dcache[coord] if a._mask & bit else ZERO for a in node.args])
            if dc is None:
                node._dcache = dc = {}
            dc[coord] = r
            continue
        stack.append((node, True))
        for a in node.args:
            if a._mask & bit and not (a._dcache is not None and coord in a._dcache):
                stack.append((a, False))
    return e._dcache[coord]


# ---------------------------------------------------------------------------
# rendering and parsing
# ---------------------------------------------------------------------------

_PREC = {"add": 1, "mul": 2, "div": 2, "pow": 3}


def _fmt_num(v: float) -> str:
    s = repr(float(v))
    if s in ("inf", "-inf", "nan"):
        raise ExprError(f"cannot render non-finite constant {s}")
    return s


def render(e: Expr) -> str:
    """Text form in the expression grammar; ``parse(render(e))`` is equivalent."""
    memo: dict[int, tuple[str, int]] = {}
    for node in _postorder([e]):
        memo[id(node)] = _render_node(node, memo)
    return memo[id(e)][0]


def _wrap(child: tuple[str, int], min_prec: int) -> str:
    s, p = child
    return s if p >= min_prec else f"({s})"


def _render_node(node: Expr, memo) -> tuple[str, int]:
    if isinstance(node, Const):
        v = node.value
        s = _fmt_num(abs(v))
        return (s, 9) if v >= 0 else (f"(-{s})", 9)
    if isinstance(node, Var):
        return node.name, 9
    if isinstance(node, Func):
        return f"{node.name}({memo[id(node.args[0])][0]})", 9
    if isinstance(node, Pow):
        return f"{_wrap(memo[id(node.args[0])], 9)}^{node.exponent}", 3
    if isinstance(node, Div):
        a, b = (memo[id(x)] for x in node.args)
        return f"{_wrap(a, 2)}/{_wrap(b, 3)}", 2
    if isinstance(node, Mul):
        return _render_mul(node.args, memo), 2
    if isinstance(node, Add):
        out = []
        for i, x in enumerate(node.args):
            neg = _negated(x)
            if neg is not None and i > 0:
                out.append(f" - {_render_mul(neg, memo) if len(neg) > 1 else _wrap(memo[id(neg[0])], 2)}")
            elif isinstance(x, Const) and x.value < 0 and i > 0:
                out.append(f" - {_fmt_num(-x.value)}")
            else:
                out.append((" + " if i else "") + _wrap(memo[id(x)], 2))
        return "".join(out), 1
    raise TypeError(node)


def _negated(x: Expr):
    """Factors of ``-x`` when ``x`` carries a negative leading coefficient."""
    if isinstance(x, Mul) and isinstance(x.args[0], Const) and x.args[0].value < 0:
        c = -x.args[0].value
        return x.args[1:] if c == 1.0 else (const(c),) + x.args[1:]
    return None


def _render_mul(args, memo) -> str:
    parts = []
    for x in args:
        if isinstance(x, Const):
            parts.append(_fmt_num(x.value) if x.value >= 0 else f"(-{_fmt_num(-x.value)})")
        else:
            parts.append(_wrap(memo[id(x)], 3))
    if len(parts) > 1 and parts[0] == "(-1.0)":
        rest = "*".join(parts[1:])
        return f"-({rest})" if len(parts) > 2 or not _is_atom_text(parts[1]) else f"-{rest}"
    return "*".join(parts)


def _is_atom_text(s: str) -> bool:
    return s.replace("_", "a").isalnum() or s.startswith("(")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] == ".":
                    j += 1
                    while j < n and text[j].isdigit():
                        j += 1
                if j < n and text[j] in "eE":
                    k = j + 1
                    if k < n and text[k] in "+-":
                        k += 1
                    if k < n and text[k].isdigit():
                        while k < n and text[k].isdigit():
                            k += 1
                        j = k
                self.toks.append(("num", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("id", text[i:j], i))
                i = j
            elif ch in "+-*/^()":
                self.toks.append((ch, ch, i))
                i += 1
            else:
                raise ExprSyntaxError(f"unexpected character {ch!r}", i, text)
        self.toks.append(("eof", "", n))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t


def _describe(tok) -> str:
    return "end of input" if tok[0] == "eof" else repr(tok[1])


def parse(text: str, chart: Chart | None = None) -> Expr:
    """Parse infix text.

    Grammar::

        expr   := term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := atom ('^' uint)?
        atom   := number | ident | func '(' expr ')' | '(' expr ')' | '-' atom
        func   := sin | cos | exp

    Note that ``-x^2`` reads as ``(-x)^2`` under this grammar.
    """
    lx = _Lexer(text)

    def expr():
        left = term()
        while lx.peek()[0] in "+-":
            op = lx.next()[0]
            right = term()
            left = add(left, right) if op == "+" else add(left, mul(-1.0, right))
        return left

    def term():
        left = factor()
        while lx.peek()[0] in "*/":
            op = lx.next()[0]
            right = factor()
            left = mul(left, right) if op == "*" else div(left, right)
        return left

    def factor():
        base = atom()
        if lx.peek()[0] == "^":
            lx.next()
            tok = lx.peek()
            if tok[0] == "-":
                raise ExprSyntaxError("negative exponent", tok[2], text)
            if tok[0] != "num":
                raise ExprSyntaxError(f"expected integer exponent, got {_describe(tok)}", tok[2], text)
            lx.next()
            if not tok[1].isdigit():
                raise ExprSyntaxError(f"non-integer exponent {tok[1]!r}", tok[2], text)
            return power(base, int(tok[1]))
        return base

    def atom():
        tok = lx.next()
        kind, val, off = tok
        if kind == "num":
            return const(float(val))
        if kind == "-":
            return mul(-1.0, atom())
        if kind == "(":
            inner = expr()
            close = lx.next()
            if close[0] != ")":
                raise ExprSyntaxError(f"expected ')', got {_describe(close)}", close[2], text)
            return inner
        if kind == "id":
            if val in _RESERVED:
                open_ = lx.next()
                if open_[0] != "(":
                    raise ExprSyntaxError(f"expected '(' after {val}", open_[2], text)
                inner = expr()
                close = lx.next()
                if close[0] != ")":
                    raise ExprSyntaxError(f"expected ')', got {_describe(close)}", close[2], text)
                return _func(val, inner)
            if chart is not None and val not in chart.index:
                raise UnknownIdentifier(val, off)
            return var(val)
        raise ExprSyntaxError(f"unexpected {_describe(tok)}", off, text)

    result = expr()
    tok = lx.peek()
    if tok[0] != "eof":
        raise ExprSyntaxError(f"unexpected {_describe(tok)}", tok[2], text)
    return result


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate_many(exprs: Sequence[Expr], chart: Chart, points: np.ndarray,
                  with_terms: bool = False):
    """Evaluate every expression in ``exprs`` at every row of ``points``.

    Returns an array of shape ``(len(exprs), n_points)``.  With
    ``with_terms`` also returns the per-expression maximum magnitude of its
    top-level additive terms (the scale used by :func:`is_zero`).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != chart.dim:
        raise ValueError(f"points have {pts.shape[1]} coordinates, chart has {chart.dim}")
    exprs = [_coerce(e) for e in exprs]
    n = pts.shape[0]
    vals: dict[int, np.ndarray | float] = {}
    cols = chart.index
    with np.errstate(all="ignore"):
        for node in _postorder(exprs):
            if isinstance(node, Const):
                v = node.value
            elif isinstance(node, Var):
                if node.name not in cols:
                    raise UnknownIdentifier(node.name)
                v = pts[:, cols[node.name]]
            elif isinstance(node, Add):
                it = iter(node.args)
                v = vals[id(next(it))]
                for a in it:
                    v = v + vals[id(a)]
            elif isinstance(node, Mul):
                it = iter(node.args)
                v = vals[id(next(it))]
                for a in it:
                    v = v * vals[id(a)]
            elif isinstance(node, Div):
                num, den = vals[id(node.args[0])], vals[id(node.args[1])]
                bad = np.asarray(den) == 0.0
                if np.any(bad):
                    k = int(np.flatnonzero(np.broadcast_to(bad, (n,)))[0])
                    raise DivisionByZero(f"division by zero in {render(node)[:80]}", pts[k])
                v = num / den
            elif isinstance(node, Pow):
                v = vals[id(node.args[0])] ** node.exponent
            elif isinstance(node, Func):
                v = getattr(np, node.name)(vals[id(node.args[0])])
            else:
                raise TypeError(node)
            vals[id(node)] = v
    out = np.empty((len(exprs), n))
    for i, e in enumerate(exprs):
        out[i] = vals[id(e)]
    bad = ~np.isfinite(out)
    if bad.any():
        i, k = np.argwhere(bad)[0]
        raise NonFiniteValue(f"non-finite value of {render(exprs[i])[:80]}", pts[k])
    if not with_terms:
        return out
    scale = np.zeros_like(out)
    for i, e in enumerate(exprs):
        terms = e.args if isinstance(e, Add) else (e,)
        for t in terms:
            scale[i] = np.maximum(scale[i], np.abs(vals[id(t)]))
    return out, scale


def evaluate(e: Expr, chart: Chart, point: Sequence[float]) -> float:
    return float(evaluate_many([e], chart, np.asarray(point, dtype=float)[None, :])[0, 0])


def sample_points(chart: Chart, samples: int, seed: int) -> np.ndarray:
    """Uniform draws from the chart's domain box; deterministic in ``seed``."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    lo = np.array([d[0] for d in chart.domain])
    hi = np.array([d[1] for d in chart.domain])
    return lo + (hi - lo) * rng.random((samples, chart.dim))


def top_terms(e: Expr) -> tuple[Expr, ...]:
    return e.args if isinstance(e, Add) else (e,)


@dataclass(frozen=True)
class ZeroCheck:
    holds: bool
    inconclusive: bool = False
    witness: tuple[float, ...] | None = None
    value: float | None = None
    max_abs: float = 0.0
    message: str = ""

    def __bool__(self):
        return self.holds


def is_zero(e: Expr, chart: Chart, samples: int = 64, tol: float = 1e-9, seed: int = 0) -> ZeroCheck:
    """Probabilistic zero test.

    ``e`` is declared zero when ``|e(p)| <= tol * (1 + s(p))`` at every
    sampled point, with ``s(p)`` the largest magnitude among the top-level
    additive terms of ``e`` at ``p``.  An evaluation error makes the verdict
    inconclusive (``holds`` false, ``inconclusive`` true).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    pts = sample_points(chart, samples, seed)
    try:
        vals, scale = evaluate_many([e], chart, pts, with_terms=True)
    except EvaluationError as err:
        w = None if err.point is None else tuple(map(float, err.point))
        return ZeroCheck(False, True, w, None, math.nan, str(err))
    v, s = vals[0], scale[0]
    ratio = np.abs(v) - tol * (1.0 + s)
    k = int(np.argmax(ratio))
    mx = float(np.max(np.abs(v)))
    if ratio[k] <= 0:
        return ZeroCheck(True, max_abs=mx)
    return ZeroCheck(False, False, tuple(map(float, pts[k])), float(v[k]), mx)
