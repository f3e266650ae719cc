"""Normally ordered calculus for freely generated (even) vertex algebras.

Fields are finite linear combinations of PBW monomials.  A monomial is a
tuple of factors ``(g, d)`` standing for ``∂^d g`` and is read as the
right-nested Wick product ``:f1 (:f2 (... fr):):``.  Factors are kept in
canonical order: ascending generator index, and for a repeated generator the
derivative orders weakly decreasing.  The empty tuple is the vacuum.

All n-th products with n >= 0 are computed from the OPE table of the basic
generators by structural recursion:

* ``x_(n) :m R:`` for a single factor x uses the commutator formula,
* ``(:a A:)_(n) B`` for a composite left argument uses the n = -1 case of
  the Borcherds identity,
* reordering uses ``:a :b c:: = :b :a c:: + :(:ab: - :ba:) c:`` and
  ``:(:a A:) B:`` is reduced by quasi-associativity.

Every intermediate result is canonical, so two fields are equal iff their
term dictionaries are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb

from .coefficients import ONE, ZERO, Scalar

__all__ = [
    "GeneratorSymbol",
    "AlgebraSpec",
    "Field",
    "SpecError",
    "derive",
    "wick",
    "iterated_wick",
    "nproduct",
    "ope",
    "conformal_weight",
    "MIXED",
]

MIXED = "mixed"


class SpecError(ValueError):
    """Inconsistent algebra data (bad table, unknown generator, ...)."""


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    weight: int = 1
    parity: dict = dc_field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.weight < 1:
            raise SpecError(f"generator {self.name!r} must have positive weight")


# ---------------------------------------------------------------------------
# small cached numerics


@lru_cache(maxsize=None)
def _inv_factorial(n):
    f = 1
    for i in range(2, n + 1):
        f *= i
    return Scalar.coerce(Fraction(1, f))


@lru_cache(maxsize=None)
def _falling(n, m):
    """n (n-1) ... (n-m+1); zero when 0 <= n < m."""
    out = 1
    for i in range(m):
        out *= n - i
    return out


def _key(f):
    return (f[0], -f[1])


def _acc(res, terms, c=ONE):
    """res += c * terms (in place)."""
    unit = c.num == (1,) and c.den == (1,)
    for m, v in terms.items():
        x = v if unit else v * c
        old = res.get(m)
        if old is None:
            res[m] = x
        else:
            s = old + x
            if s.num:
                res[m] = s
            else:
                del res[m]
    return res


def _scale(terms, c):
    if not c:
        return {}
    if c.num == (1,) and c.den == (1,):
        return dict(terms)
    return {m: v * c for m, v in terms.items()}


# ---------------------------------------------------------------------------


class _Engine:
    """Memoized normal-ordering and n-th product machinery for one algebra."""

    def __init__(self, spec):
        self.spec = spec
        self.wt = tuple(g.weight for g in spec.generators)
        self.table = spec.table
        self._insert = {}
        self._wick = {}
        self._nprod = {}
        self._fprod = {}
        self._fmono = {}
        self._derive = {}
        self._comm = {}

    # -- weights --------------------------------------------------------

    def mono_weight(self, m):
        wt = self.wt
        return sum(wt[g] + d for g, d in m)

    # -- derivative -----------------------------------------------------

    def derive_mono(self, m):
        hit = self._derive.get(m)
        if hit is not None:
            return hit
        res = {}
        for i, (g, d) in enumerate(m):
            x = (g, d + 1)
            if i == 0 or _key(m[i - 1]) <= _key(x):
                _acc(res, {m[:i] + (x,) + m[i + 1:]: ONE})
                continue
            t = self.insert(x, m[i + 1:])
            for p in reversed(m[:i]):
                t = self.insert_terms(p, t)
            _acc(res, t)
        self._derive[m] = res
        return res

    def derive_terms(self, terms, times=1):
        for _ in range(times):
            res = {}
            for m, c in terms.items():
                _acc(res, self.derive_mono(m), c)
            terms = res
        return terms

    # -- products of single factors ------------------------------------

    def fprod(self, x, y, n):
        """(∂^d g)_(n) (∂^e h) for factors x = (g, d), y = (h, e)."""
        key = (x, y, n)
        hit = self._fprod.get(key)
        if hit is not None:
            return hit
        g, d = x
        h, e = y
        res = {}
        if n >= d:
            entries = self.table.get((g, h))
            if entries:
                m = n - d
                c0 = (-1) ** d * _falling(n, d)
                for i in range(0, min(e, m) + 1):
                    entry = entries.get(m - i)
                    if entry:
                        c = Scalar.coerce(c0 * comb(e, i) * _falling(m, i))
                        _acc(res, self.derive_terms(entry, e - i), c)
        self._fprod[key] = res
        return res

    def commutator(self, x, y):
        """:x y: - :y x: for single factors."""
        key = (x, y)
        hit = self._comm.get(key)
        if hit is not None:
            return hit
        res = {}
        top = self.wt[x[0]] + x[1] + self.wt[y[0]] + y[1]
        for j in range(top):
            p = self.fprod(x, y, j)
            if p:
                c = _inv_factorial(j + 1) if j % 2 == 0 else -_inv_factorial(j + 1)
                _acc(res, self.derive_terms(p, j + 1), c)
        self._comm[key] = res
        return res

    # -- Wick products ----------------------------------------------------

    def insert(self, x, m):
        """:x m: for a single factor x and a canonical monomial m."""
        if not m or _key(x) <= _key(m[0]):
            return {(x,) + m: ONE}
        key = (x, m)
        hit = self._insert.get(key)
        if hit is not None:
            return hit
        m1, rest = m[0], m[1:]
        res = self.insert_terms(m1, self.insert(x, rest))
        corr = self.commutator(x, m1)
        if corr:
            for cm, c in corr.items():
                _acc(res, self.wick(cm, rest), c)
        self._insert[key] = res
        return res

    def insert_terms(self, x, terms):
        res = {}
        for m, c in terms.items():
            _acc(res, self.insert(x, m), c)
        return res

    def wick(self, a, b):
        """:a b: for canonical monomials a, b."""
        if not a:
            return {b: ONE}
        if not b:
            return {a: ONE}
        if len(a) == 1:
            return self.insert(a[0], b)
        key = (a, b)
        hit = self._wick.get(key)
        if hit is not None:
            return hit
        a1, ap = a[0], a[1:]
        res = self.insert_terms(a1, self.wick(ap, b))
        top = self.mono_weight(a) + self.mono_weight(b)
        for j in range(top):
            c = _inv_factorial(j + 1)
            p = self.nprod(ap, b, j)
            if p:
                _acc(res, self.insert_terms((a1[0], a1[1] + j + 1), p), c)
            q = self.fmono(a1, b, j)
            if q:
                dap = self.derive_terms({ap: ONE}, j + 1)
                _acc(res, self.wick_terms(dap, q), c)
        self._wick[key] = res
        return res

    def wick_terms(self, ta, tb):
        res = {}
        for ma, ca in ta.items():
            for mb, cb in tb.items():
                _acc(res, self.wick(ma, mb), ca * cb)
        return res

    # -- n-th products, n >= 0 ------------------------------------------

    def fmono(self, x, m, n):
        """x_(n) m for a single factor x and canonical monomial m."""
        if not m:
            return {}
        if len(m) == 1:
            return self.fprod(x, m[0], n)
        key = (x, m, n)
        hit = self._fmono.get(key)
        if hit is not None:
            return hit
        res = {}
        if self.wt[x[0]] + x[1] + self.mono_weight(m) - n - 1 >= 0:
            m1, rest = m[0], m[1:]
            head = self.fprod(x, m1, n)
            if head:
                for hm, c in head.items():
                    _acc(res, self.wick(hm, rest), c)
            _acc(res, self.insert_terms(m1, self.fmono(x, rest, n)))
            for j in range(n):
                f = self.fprod(x, m1, j)
                if f:
                    c = Scalar.coerce(comb(n, j))
                    for fm, fc in f.items():
                        _acc(res, self.nprod(fm, rest, n - 1 - j), fc * c)
        self._fmono[key] = res
        return res

    def nprod(self, a, b, n):
        """a_(n) b for canonical monomials a, b and n >= 0."""
        if not a or not b:
            return {}
        if len(a) == 1:
            return self.fmono(a[0], b, n)
        key = (a, b, n)
        hit = self._nprod.get(key)
        if hit is not None:
            return hit
        res = {}
        top = self.mono_weight(a) + self.mono_weight(b) - 1
        if n <= top:
            a1, ap = a[0], a[1:]
            g, d = a1
            # sum_j 1/j! :∂^j a1 (ap_(n+j) b):
            for j in range(top - n + 1):
                p = self.nprod(ap, b, n + j)
                if p:
                    _acc(res, self.insert_terms((g, d + j), p), _inv_factorial(j))
            # sum_{j<n} ap_(n-1-j) (a1_(j) b)
            for j in range(n):
                q = self.fmono(a1, b, j)
                if q:
                    for qm, qc in q.items():
                        _acc(res, self.nprod(ap, qm, n - 1 - j), qc)
            # sum_{j>=n} 1/(j-n)! :∂^{j-n} ap (a1_(j) b):
            for j in range(n, top + 1):
                q = self.fmono(a1, b, j)
                if q:
                    dap = self.derive_terms({ap: ONE}, j - n)
                    _acc(res, self.wick_terms(dap, q), _inv_factorial(j - n))
        self._nprod[key] = res
        return res

    def nprod_terms(self, ta, tb, n):
        res = {}
        for ma, ca in ta.items():
            for mb, cb in tb.items():
                p = self.nprod(ma, mb, n)
                if p:
                    _acc(res, p, ca * cb)
        return res

    def normal_form(self, factors):
        """Right-nested Wick product of an arbitrary sequence of factors."""
        t = {(): ONE}
        for f in reversed(factors):
            t = self.insert_terms(f, t)
        return t

    def cache_size(self):
        return sum(
            len(c)
            for c in (
                self._insert,
                self._wick,
                self._nprod,
                self._fprod,
                self._fmono,
                self._derive,
                self._comm,
            )
        )


# ---------------------------------------------------------------------------


def _sign_of(mono, signs):
    s = 1
    for g, _ in mono:
        s *= signs[g]
    return s


class AlgebraSpec:
    """Basic generators, their OPE table and registered sign involutions.

    ``table`` maps ``(i, j)`` (generator indices or names) to ``{n: entry}``
    where an entry is anything :meth:`as_terms` accepts.  Reverse pairs that
    are not supplied are filled in by skew-symmetry; supplied pairs are
    checked against it.
    """

    def __init__(
        self,
        generators,
        table,
        involutions=None,
        *,
        name="",
        conformal_vector=None,
        dual_coxeter=None,
        bilinear_form=None,
        symbolic_level=False,
        check=True,
    ):
        self.name = name
        self.generators = tuple(generators)
        self.index = {}
        for i, g in enumerate(self.generators):
            if g.name in self.index:
                raise SpecError(f"duplicate generator name {g.name!r}")
            self.index[g.name] = i
        self.symbolic_level = symbolic_level
        self.dual_coxeter = dual_coxeter
        self.bilinear_form = bilinear_form
        self.table = {}
        given = set()
        for (a, b), entries in table.items():
            i, j = self.gen_index(a), self.gen_index(b)
            row = {}
            for n, entry in entries.items():
                if n < 0:
                    raise SpecError("OPE table entries must have n >= 0")
                terms = self.as_terms(entry)
                if terms:
                    self._check_entry_weight(i, j, n, terms)
                    row[n] = terms
            self.table[(i, j)] = row
            given.add((i, j))
        self._complete_by_skew_symmetry(given, check)
        self.involutions = {}
        for inv_name, signs in (involutions or {}).items():
            self.register_involution(inv_name, signs, check=check)
        for g in self.generators:
            for inv_name, sign in g.parity.items():
                if inv_name not in self.involutions:
                    self.register_involution(
                        inv_name, {h.name: h.parity.get(inv_name, 1) for h in self.generators}, check=check
                    )
        self.conformal_vector = conformal_vector

    # -- construction helpers ------------------------------------------

    def gen_index(self, g):
        if isinstance(g, int):
            if not 0 <= g < len(self.generators):
                raise SpecError(f"generator index {g} out of range")
            return g
        try:
            return self.index[g]
        except KeyError:
            raise SpecError(f"unknown generator {g!r}") from None

    def as_terms(self, entry):
        """Normalize a table entry to a terms dict.

        Accepts a :class:`Field`, a scalar (multiple of the vacuum), a terms
        dict keyed by monomial tuples, or ``{generator_name: coefficient}``.
        """
        if isinstance(entry, Field):
            return dict(entry.terms)
        if isinstance(entry, (int, Fraction, Scalar)):
            c = Scalar.coerce(entry)
            return {(): c} if c else {}
        if isinstance(entry, dict):
            out = {}
            for key, c in entry.items():
                if isinstance(key, str):
                    key = ((self.gen_index(key), 0),)
                c = Scalar.coerce(c)
                if c:
                    _acc(out, {tuple(key): c})
            return out
        raise SpecError(f"unsupported table entry {entry!r}")

    def _check_entry_weight(self, i, j, n, terms):
        expect = self.generators[i].weight + self.generators[j].weight - n - 1
        wt = tuple(g.weight for g in self.generators)
        for m in terms:
            w = sum(wt[g] + d for g, d in m)
            if w != expect:
                raise SpecError(
                    f"table entry {self.generators[i].name}_({n}){self.generators[j].name} "
                    f"has weight {w}, expected {expect}"
                )

    def _complete_by_skew_symmetry(self, given, check):
        eng = _Engine(self)
        ngen = len(self.generators)
        for i in range(ngen):
            for j in range(ngen):
                if (i, j) not in given:
                    continue
                derived = self._skew(eng, i, j)
                if (j, i) in given:
                    if check and derived != self.table[(j, i)]:
                        raise SpecError(
                            f"OPE table violates skew-symmetry for "
                            f"({self.generators[j].name}, {self.generators[i].name})"
                        )
                else:
                    self.table[(j, i)] = derived
                    given.add((j, i))
        self.table = {key: row for key, row in self.table.items() if row}

    def _skew(self, eng, i, j):
        """Entries of g_j (n) g_i derived from those of g_i (n) g_j."""
        row = self.table.get((i, j), {})
        top = self.generators[i].weight + self.generators[j].weight - 1
        out = {}
        for n in range(top + 1):
            acc = {}
            for jj in range(top - n + 1):
                entry = row.get(n + jj)
                if entry:
                    c = _inv_factorial(jj) if (n + jj + 1) % 2 == 0 else -_inv_factorial(jj)
                    _acc(acc, eng.derive_terms(entry, jj), c)
            if acc:
                out[n] = acc
        return out

    def register_involution(self, name, signs, check=True):
        if isinstance(signs, dict):
            vec = [1] * len(self.generators)
            for g, s in signs.items():
                vec[self.gen_index(g)] = s
        else:
            vec = list(signs)
        if len(vec) != len(self.generators) or any(s not in (1, -1) for s in vec):
            raise SpecError(f"involution {name!r} must assign +1/-1 to every generator")
        vec = tuple(vec)
        if check:
            for (i, j), row in self.table.items():
                for n, terms in row.items():
                    for m in terms:
                        if _sign_of(m, vec) != vec[i] * vec[j]:
                            raise SpecError(
                                f"involution {name!r} does not preserve "
                                f"{self.generators[i].name}_({n}){self.generators[j].name}"
                            )
        self.involutions[name] = vec

    # -- accessors ------------------------------------------------------

    @cached_property
    def engine(self):
        return _Engine(self)

    @property
    def rank(self):
        return len(self.generators)

    def gen(self, g, d=0):
        """The field ∂^d g."""
        return Field(self, {((self.gen_index(g), d),): ONE})

    def vacuum(self, c=1):
        c = Scalar.coerce(c)
        return Field(self, {(): c} if c else {})

    def zero(self):
        return Field(self, {})

    def monomial(self, factors):
        """Normal form of an arbitrary sequence of (generator, derivative) factors."""
        facs = [(self.gen_index(g), d) for g, d in factors]
        return Field(self, self.engine.normal_form(facs))

    def parse(self, text):
        """Parse a field expression (see :mod:`vertex_orbifold.dsl`)."""
        from .dsl import parse_field

        return parse_field(text, self)

    def max_pole(self, i, j):
        row = self.table.get((self.gen_index(i), self.gen_index(j)), {})
        return max(row) + 1 if row else 0

    def table_entry(self, a, b, n):
        return Field(self, dict(self.table.get((self.gen_index(a), self.gen_index(b)), {}).get(n, {})))

    def evaluate_level(self, k0):
        """Copy of this spec with every coefficient evaluated at k = k0."""
        k0 = Fraction(k0)
        table = {}
        for key, row in self.table.items():
            table[key] = {
                n: {m: Scalar.coerce(c(k0)) for m, c in terms.items()} for n, terms in row.items()
            }
        return AlgebraSpec(
            self.generators,
            table,
            dict(self.involutions),
            name=f"{self.name}@k={k0}",
            dual_coxeter=self.dual_coxeter,
            bilinear_form=self.bilinear_form,
            check=False,
        )

    def same_structure(self, other, rename=False, involutions=True):
        """Equal generator data and tables (and involutions unless disabled).

        With ``rename=True`` generator names are ignored (positions must match).
        """
        key = (lambda g: g.weight) if rename else (lambda g: (g.name, g.weight))
        return (
            [key(g) for g in self.generators] == [key(g) for g in other.generators]
            and self.table == other.table
            and (not involutions or self.involutions == other.involutions)
        )

    def __repr__(self):
        names = ", ".join(g.name for g in self.generators)
        return f"AlgebraSpec({self.name or '?'}: {names})"


# ---------------------------------------------------------------------------


class Field:
    """Finite Scalar-linear combination of canonical monomials."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec, terms):
        self.spec = spec
        self.terms = terms

    # -- linear structure -------------------------------------------------

    def _other(self, other):
        if isinstance(other, Field):
            if other.spec is not self.spec:
                raise SpecError("fields belong to different algebras")
            return other.terms
        return self.spec.vacuum(other).terms

    def __add__(self, other):
        try:
            t = self._other(other)
        except TypeError:
            return NotImplemented
        return Field(self.spec, _acc(dict(self.terms), t))

    __radd__ = __add__

    def __sub__(self, other):
        try:
            t = self._other(other)
        except TypeError:
            return NotImplemented
        return Field(self.spec, _acc(dict(self.terms), t, -ONE))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Field(self.spec, {m: -c for m, c in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, Field):
            return NotImplemented
        try:
            c = Scalar.coerce(c)
        except TypeError:
            return NotImplemented
        return Field(self.spec, _scale(self.terms, c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * Scalar.coerce(c).inverse()

    def __eq__(self, other):
        if isinstance(other, Field):
            return self.spec is other.spec and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, mono):
        return self.terms.get(tuple(mono), ZERO)

    def weight(self):
        return conformal_weight(self)

    def homogeneous_parts(self):
        eng = self.spec.engine
        parts = {}
        for m, c in self.terms.items():
            parts.setdefault(eng.mono_weight(m), {})[m] = c
        return {w: Field(self.spec, t) for w, t in sorted(parts.items())}

    def max_degree(self):
        return max((len(m) for m in self.terms), default=0)

    def substitute(self, k0):
        """Evaluate all coefficients at k = k0 (returns a Field over the same spec)."""
        return Field(self.spec, {m: Scalar.coerce(c(k0)) for m, c in self.terms.items() if c(k0)})

    # -- vertex algebra operations ---------------------------------------

    def derive(self, times=1):
        return derive(self, times)

    def __str__(self):
        from .render import render_field

        return render_field(self)

    def __repr__(self):
        return f"Field({self})"


def _terms_of(a):
    if not isinstance(a, Field):
        raise TypeError(f"expected Field, got {type(a).__name__}")
    return a.terms


def derive(a, times=1):
    """∂^times a."""
    return Field(a.spec, a.spec.engine.derive_terms(_terms_of(a), times))


def wick(a, b):
    """Normally ordered product :a b: in canonical form."""
    if a.spec is not b.spec:
        raise SpecError("fields belong to different algebras")
    return Field(a.spec, a.spec.engine.wick_terms(_terms_of(a), _terms_of(b)))


def iterated_wick(fields):
    """Right-nested :a1 (:a2 (... an):):."""
    fields = list(fields)
    if not fields:
        raise ValueError("iterated_wick needs at least one field")
    out = fields[-1]
    for f in reversed(fields[:-1]):
        out = wick(f, out)
    return out


def nproduct(a, b, n):
    """The n-th circle product a ∘_n b for any integer n."""
    if a.spec is not b.spec:
        raise SpecError("fields belong to different algebras")
    eng = a.spec.engine
    if n >= 0:
        return Field(a.spec, eng.nprod_terms(_terms_of(a), _terms_of(b), n))
    m = -n - 1
    da = eng.derive_terms(_terms_of(a), m)
    return Field(a.spec, _scale(eng.wick_terms(da, _terms_of(b)), _inv_factorial(m)))


def _top_weight(a):
    eng = a.spec.engine
    return max((eng.mono_weight(m) for m in a.terms), default=0)


def ope(a, b):
    """All nonzero singular terms [(n, a ∘_n b)] with n >= 0."""
    out = []
    for n in range(_top_weight(a) + _top_weight(b)):
        p = nproduct(a, b, n)
        if p:
            out.append((n, p))
    return out


def conformal_weight(a):
    """Common weight of the terms, MIXED otherwise (the zero field has weight None)."""
    eng = a.spec.engine
    ws = {eng.mono_weight(m) for m in a.terms}
    if not ws:
        return None
    if len(ws) > 1:
        return MIXED
    return ws.pop()
