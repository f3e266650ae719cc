"""Independent oracle: field modes acting on the vacuum module.

States are finite combinations of creation words ``g1(n1) g2(n2) ... |0>``
(all n < 0, sorted by (generator, mode)) with Fraction coefficients.  Modes
of composite fields come from the mode formulas for Wick products,
derivatives and circle products; the only input from the algebra is its OPE
table, evaluated at a rational level k0.  Nothing here calls the kernel's
normal-ordering code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .kernel import Field

try:  # exact rationals; gmpy2 is several times faster than Fraction here
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

__all__ = [
    "FockModule",
    "FockError",
    "TruncationError",
    "Basic",
    "Lin",
    "WickNode",
    "Deriv",
    "Circle",
    "Leaf",
    "Expr",
    "node_of",
    "mode_action",
    "oracle_verify",
    "OracleResult",
    "render_state",
]


class FockError(ValueError):
    pass


class TruncationError(FockError):
    pass


# ---------------------------------------------------------------------------
# expression trees (hashable, so mode actions can be cached by structure)


class _Node:
    """Hash-consed tree node: structurally equal nodes are the same object,
    so caches keyed on nodes hash by identity."""

    __slots__ = ("__weakref__",)
    _fields = ()
    _table = {}

    def __new__(cls, *args):
        key = (cls,) + tuple(id(a) if isinstance(a, _Node) else a for a in args)
        hit = _Node._table.get(key)
        if hit is None:
            hit = object.__new__(cls)
            for name, value in zip(cls._fields, args):
                object.__setattr__(hit, name, value)
            _Node._table[key] = hit
        return hit

    def __setattr__(self, name, value):
        raise AttributeError("nodes are immutable")

    def __reduce__(self):
        return (type(self), tuple(getattr(self, f) for f in self._fields))

    def __repr__(self):
        args = ", ".join(repr(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({args})"


class Basic(_Node):
    __slots__ = ("g",)
    _fields = ("g",)


class Deriv(_Node):
    __slots__ = ("a",)
    _fields = ("a",)


class WickNode(_Node):
    __slots__ = ("a", "b")
    _fields = ("a", "b")


class Circle(_Node):
    __slots__ = ("a", "b", "n")
    _fields = ("a", "b", "n")


class Lin(_Node):
    """sum c * node over a tuple of (coefficient, node); coefficients may depend on k."""

    __slots__ = ("parts",)
    _fields = ("parts",)

    def __new__(cls, parts):
        parts = tuple(parts)
        key = (cls, tuple((c, id(x) if isinstance(x, _Node) else x) for c, x in parts))
        hit = _Node._table.get(key)
        if hit is None:
            hit = object.__new__(cls)
            object.__setattr__(hit, "parts", parts)
            _Node._table[key] = hit
        return hit


class Leaf(_Node):
    """A kernel Field used as a black box (its PBW terms read as Wick trees)."""

    __slots__ = ("field",)
    _fields = ("field",)


class Expr:
    """Oracle-side expression: build fields from their definitions.

    ``Expr.of(f)`` wraps a Field; ``a.wick(b)``, ``a.derive(t)`` and
    ``a.circle(b, n)`` build trees evaluated purely through mode formulas.
    """

    __slots__ = ("node",)

    def __init__(self, node):
        self.node = node

    @classmethod
    def of(cls, f):
        return f if isinstance(f, Expr) else cls(Leaf(f))

    def wick(self, other):
        return Expr(WickNode(self.node, Expr.of(other).node))

    def derive(self, times=1):
        node = self.node
        for _ in range(times):
            node = Deriv(node)
        return Expr(node)

    def circle(self, other, n):
        if n >= 0:
            return Expr(Circle(self.node, Expr.of(other).node, n))
        # a_(-m-1) b = (1/m!) :∂^m a b:
        m = -n - 1
        f = 1
        for i in range(2, m + 1):
            f *= i
        return self.derive(m).wick(other) * Fraction(1, f)

    def __add__(self, other):
        return Expr(Lin(((1, self.node), (1, Expr.of(other).node))))

    def __sub__(self, other):
        return Expr(Lin(((1, self.node), (-1, Expr.of(other).node))))

    def __neg__(self):
        return Expr(Lin(((-1, self.node),)))

    def __mul__(self, c):
        return Expr(Lin(((c, self.node),)))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c) if not hasattr(c, "inverse") else c.inverse())


def _monomial_node(mono):
    """Right-nested Wick product of ∂^d g factors; None for the vacuum."""
    node = None
    for g, d in reversed(mono):
        f = Basic(g)
        for _ in range(d):
            f = Deriv(f)
        node = f if node is None else WickNode(f, node)
    return node


def node_of(field, k0=None):
    """Expression tree of a kernel Field, coefficients evaluated at k0."""
    parts = []
    for mono, c in sorted(field.terms.items()):
        v = c.to_fraction() if c.is_constant else c(k0)
        if not v:
            continue
        parts.append((Fraction(v), _monomial_node(mono) if mono else "vac"))
    return Lin(tuple(parts))


# ---------------------------------------------------------------------------


_UNSET = object()


def _wsum(*parts):
    return None if None in parts else sum(parts)


def _add(res, state, c=1):
    get = res.get
    for w, x in state.items():
        if c != 1:
            x = c * x
        v = get(w)
        if v is None:
            res[w] = x
        else:
            v = v + x
            if v:
                res[w] = v
            else:
                del res[w]
    return res


class FockModule:
    """Vacuum module of a freely generated algebra at level k0.

    Mode actions are memoised per (node, mode, word).  Entries for nodes that
    belong to generators or kernel fields persist across checks; everything
    else lives in a scratch cache that ``release`` drops.
    """

    def __init__(self, spec, k0=None, max_entries=1_000_000):
        self.spec = spec
        self.k0 = Fraction(k0) if k0 is not None else None
        self.wt = [g.weight for g in spec.generators]
        self.max_entries = max_entries
        self._memo = {}
        self._transient = []
        self._weights = {}
        self._leaves = {}
        self._lin = {}
        self._ww = {}
        self._keep = set()
        self._bases = {}
        # table at k0 as trees: (i, j) -> {n: Lin}
        self.table = {}
        for key, row in spec.table.items():
            self.table[key] = {n: self._pin(node_of(Field(spec, t), self.k0)) for n, t in row.items()}

    def _pin(self, node):
        """Mark a node and its subtrees as persistent."""
        stack = [node]
        while stack:
            x = stack.pop()
            if not isinstance(x, _Node) or x in self._keep:
                continue
            self._keep.add(x)
            if isinstance(x, Lin):
                stack.extend(y for _, y in x.parts)
            else:
                stack.extend(getattr(x, f) for f in ("a", "b") if hasattr(x, f))
        return node

    def release(self):
        """Drop cached actions of transient nodes."""
        memo = self._memo
        for key in self._transient:
            memo.pop(key, None)
        self._transient = []
        if len(memo) > self.max_entries:
            memo.clear()

    def _num(self, c):
        if isinstance(c, (int, Fraction)):
            return _Q(c)
        if c.is_constant:
            return _Q(c.to_fraction())
        if self.k0 is None:
            raise FockError("k-dependent coefficient needs a level k0")
        return _Q(c(self.k0))

    def _leaf(self, node):
        if type(node) is not Leaf:
            return node
        hit = self._leaves.get(node)
        if hit is None:
            f = node.field
            if f.spec is not self.spec and not f.spec.same_structure(self.spec):
                raise FockError("field belongs to a different algebra")
            hit = self._pin(node_of(f, self.k0))
            self._keep.add(node)
            self._leaves[node] = hit
        return hit

    def _parts(self, node):
        hit = self._lin.get(node)
        if hit is None:
            hit = []
            for c, x in node.parts:
                c = self._num(c)
                if c:
                    hit.append((c, x))
            self._lin[node] = hit
        return hit

    # -- weights ----------------------------------------------------------

    def word_weight(self, word):
        w = self._ww.get(word)
        if w is None:
            w = self._ww[word] = sum(self.wt[g] - n - 1 for g, n in word)
        return w

    def node_weight(self, node):
        """Conformal weight of a node; None for a node that is identically zero."""
        hit = self._weights.get(node, _UNSET)
        if hit is not _UNSET:
            return hit
        if node == "vac":
            w = 0
        elif isinstance(node, Basic):
            w = self.wt[node.g]
        elif isinstance(node, Deriv):
            w = _wsum(self.node_weight(node.a), 1)
        elif isinstance(node, WickNode):
            w = _wsum(self.node_weight(node.a), self.node_weight(node.b))
        elif isinstance(node, Circle):
            w = _wsum(self.node_weight(node.a), self.node_weight(node.b), -node.n - 1)
        elif isinstance(node, Leaf):
            w = self.node_weight(self._leaf(node))
        else:
            ws = {self.node_weight(x) for c, x in self._parts(node)} - {None}
            if len(ws) > 1:
                raise FockError("linear combination of mixed weight")
            w = ws.pop() if ws else None
        self._weights[node] = w
        return w

    # -- action -----------------------------------------------------------

    def act(self, node, n, state):
        if type(node) is Leaf:
            node = self._leaf(node)
        res = {}
        memo = self._memo
        for word, c in state.items():
            r = memo.get((node, n, word))
            if r is None:
                r = self.act_word(node, n, word)
            if r:
                _add(res, r, c)
        return res

    def act_word(self, node, n, word):
        """node(n) applied to the basis state ``word``."""
        kind = type(node)
        if kind is Leaf:
            node = self._leaf(node)
            kind = type(node)
        key = (node, n, word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        # result has weight wt(word) + wt(node) - n - 1
        wn = self.node_weight(node)
        if wn is None or self.word_weight(word) + wn - n - 1 < 0:
            res = {}
        elif kind is Lin:
            res = {}
            for c, x in self._parts(node):
                r = self.act_word(x, n, word)
                if r:
                    _add(res, r, c)
        elif kind is Basic:
            res = self._basic(node.g, n, word)
        elif kind is Deriv:
            # (∂^t x)(n) = (-1)^t n(n-1)...(n-t+1) x(n-t)
            t, x, c = 0, node, 1
            while type(x) is Deriv:
                c *= -(n - t)
                t += 1
                x = x.a
            res = {}
            if c:
                r = self.act_word(x, n - t, word)
                if r:
                    _add(res, r, c)
        elif kind is WickNode:
            res = self._wick(node.a, node.b, n, word)
        elif kind is Circle:
            res = self._circle(node.a, node.b, node.n, n, word)
        elif node == "vac":
            res = {word: _Q(1)} if n == -1 else {}
        else:
            raise FockError(f"unknown node {node!r}")
        self._memo[key] = res
        if kind is not Basic and node not in self._keep:
            self._transient.append(key)
        return res

    def _basic(self, g, n, word):
        if n < 0:
            if not word or (g, n) <= word[0]:
                return {((g, n),) + word: _Q(1)}
        elif not word:
            return {}
        # g(n) x rest = x (g(n) rest) + [g(n), x] rest
        (h, q), rest = word[0], word[1:]
        res = {}
        inner = self.act_word(Basic(g), n, rest)
        for w, c in inner.items():
            _add(res, self.act_word(Basic(h), q, w), c)
        _add(res, self._bracket(g, n, h, q, rest))
        return res

    def _bracket(self, g, p, h, q, state):
        """[g(p), h(q)] applied to ``state`` (a basis word)."""
        row = self.table.get((g, h))
        res = {}
        if not row:
            return res
        for j, entry in row.items():
            c = _binom(p, j)
            if c:
                _add(res, self.act_word(entry, p + q - j, state), c)
        return res

    def _wick(self, a, b, n, word):
        a, b = self._leaf(a), self._leaf(b)
        memo, aw = self._memo, self.act_word
        res = {}
        s = self.word_weight(word)
        wa, wb = self.node_weight(a), self.node_weight(b)
        # sum_{p<0} a(p) b(n-p-1) + sum_{p>=0} b(n-p-1) a(p)
        for p in range(-1, n - s - wb - 1, -1):
            inner = memo.get((b, n - p - 1, word))
            if inner is None:
                inner = aw(b, n - p - 1, word)
            if inner:
                _add(res, self.act(a, p, inner))
        for p in range(0, s + wa):
            inner = memo.get((a, p, word))
            if inner is None:
                inner = aw(a, p, word)
            if inner:
                _add(res, self.act(b, n - p - 1, inner))
        return res

    def _circle(self, a, b, k, m, word):
        """(a_(k) b)(m) for k >= 0 via the Borcherds identity."""
        if k < 0:
            raise FockError("circle nodes need k >= 0")
        a, b = self._leaf(a), self._leaf(b)
        res = {}
        for j in range(k + 1):
            c = (-1) ** j * comb(k, j)
            inner = self.act_word(b, m + j, word)
            if inner:
                _add(res, self.act(a, k - j, inner), c)
            inner = self.act_word(a, j, word)
            if inner:
                _add(res, self.act(b, k + m - j, inner), -c * (-1) ** k)
        return res

    # -- basis ------------------------------------------------------------

    def basis(self, weight):
        """Creation words of exactly the given weight, in canonical order."""
        hit = self._bases.get(weight)
        if hit is None:
            hit = self._bases[weight] = tuple(self._basis(weight))
        return list(hit)

    def _basis(self, weight):
        out = []
        n = len(self.wt)

        def rec(prefix, remaining, start):
            if remaining == 0:
                out.append(tuple(prefix))
                return
            g0, q0 = start
            for g in range(g0, n):
                # mode q <= -1 contributes wt - q - 1
                qmin = -(remaining - self.wt[g] + 1)
                for q in range(qmin, 0):
                    if (g, q) < (g0, q0):
                        continue
                    prefix.append((g, q))
                    rec(prefix, remaining - (self.wt[g] - q - 1), (g, q))
                    prefix.pop()

        rec([], weight, (0, -(10**9)))
        return out

    def state_of(self, node):
        """node(-1)|0>."""
        return self.act_word(node, -1, ())

    def mode_action(self, field, n, state, cutoff=None):
        """Apply the mode field(n) to ``state``; raise if the result exceeds the cutoff."""
        node = field if not isinstance(field, Field) else node_of(field, self.k0)
        res = self.act(node, n, state)
        if cutoff is not None:
            for w in res:
                if self.word_weight(w) > cutoff:
                    raise TruncationError(f"result has weight {self.word_weight(w)} > {cutoff}")
        return res


@lru_cache(maxsize=None)
def _binom(p, j):
    """Generalized binomial coefficient p choose j for any integer p."""
    out = _Q(1)
    for t in range(j):
        out = out * (p - t) / (t + 1)
    return out


def render_state(module, state):
    if not state:
        return "0"
    names = [g.name for g in module.spec.generators]
    parts = []
    for w, c in sorted(state.items()):
        body = " ".join(f"{names[g]}({q})" for g, q in w) or ""
        parts.append(f"{c}*{body}|0>" if body else f"{c}|0>")
    return " + ".join(parts)


@dataclass
class OracleResult:
    ok: bool
    checked: int
    witness: str | None = None

    def __bool__(self):
        return self.ok


def oracle_verify(lhs, rhs, cutoff=6, k0=5, module=None):
    """Compare two fields (or Exprs) mode by mode on all states of weight <= cutoff.

    The two sides are evaluated separately, never simplified against each
    other.  Checks D(n)w = 0 for D = lhs - rhs, every basis state w and every
    mode n whose result has weight in [0, cutoff]; D(-1)|0> = 0 is always
    checked.
    """
    lhs, rhs = Expr.of(lhs), Expr.of(rhs)
    if module is None:
        spec = _spec_of(lhs.node) or _spec_of(rhs.node)
        module = FockModule(spec, k0 if spec.symbolic_level else None)
    try:
        return _verify(module, Lin(((1, lhs.node), (-1, rhs.node))), cutoff)
    finally:
        module.release()


def _verify(M, d, cutoff):
    wd = M.node_weight(d)
    if wd is None:
        wd = 0
    checked = 1
    vac = M.state_of(d)
    if vac:
        return OracleResult(False, checked, f"D(-1)|0> = {render_state(M, vac)}")
    for s in range(cutoff + 1):
        for word in M.basis(s):
            for n in range(s + wd - 1 - cutoff, s + wd):
                out = M.act_word(d, n, word)
                checked += 1
                if out:
                    return OracleResult(
                        False,
                        checked,
                        f"D({n}) {render_state(M, {word: 1})} = {render_state(M, out)}",
                    )
    return OracleResult(True, checked)


def _spec_of(node):
    if isinstance(node, Leaf):
        return node.field.spec
    if isinstance(node, Lin):
        for _, x in node.parts:
            s = _spec_of(x)
            if s is not None:
                return s
        return None
    for attr in ("a", "b"):
        x = getattr(node, attr, None)
        if x is not None:
            s = _spec_of(x)
            if s is not None:
                return s
    return None


def mode_action(field, n, state, k0=None, cutoff=None):
    return FockModule(field.spec, k0).mode_action(field, n, state, cutoff)
