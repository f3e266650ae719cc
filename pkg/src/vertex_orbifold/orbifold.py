"""Z2-orbifold toolkit: quadratic invariants, derivative-basis rewriting,
closed-form circle products, decoupling, span checks and primary correction."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .coefficients import ONE, Scalar, render_scalar
from .kernel import Field, SpecError, conformal_weight, derive, nproduct, wick
from .linalg import EchelonBasis, rank_mod_p
from .render import render_terms

__all__ = [
    "OrbifoldError",
    "is_invariant",
    "quadratic",
    "omega",
    "rewrite_derivative_basis",
    "expand_derivative_basis",
    "quadratic_coordinates",
    "falling",
    "lam",
    "circle_closed_form",
    "CLOSED_FORM_KINDS",
    "GeneratorSet",
    "DecouplingResult",
    "decouple",
    "decoupling_ladder",
    "SpanRow",
    "strong_span_check",
    "invariant_monomials",
    "PrimaryResult",
    "primary_correct",
    "primary_conditions",
    "is_primary",
    "heisenberg_generating_set",
]


class OrbifoldError(ValueError):
    pass


def is_invariant(a, involution="cartan"):
    """True iff every monomial has an even number of odd factors."""
    spec = a.spec
    if involution not in spec.involutions:
        raise SpecError(f"unknown involution {involution!r}")
    signs = spec.involutions[involution]
    for m in a.terms:
        s = 1
        for g, _ in m:
            s *= signs[g]
        if s != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# quadratic fields


def quadratic(spec, g1, g2, a, b):
    """:∂^a g1 ∂^b g2: for generators given by name or 0-based index."""
    return spec.monomial([(g1, a), (g2, b)])


def _alpha(spec, i):
    if isinstance(i, str):
        return spec.gen_index(i)
    if not 1 <= i <= spec.rank:
        raise SpecError(f"index {i} out of range 1..{spec.rank}")
    return i - 1


def omega(spec, i, j, a, b):
    """ω^{i,j}_{a,b} = :∂^a α^i ∂^b α^j: with 1-based indices."""
    return quadratic(spec, _alpha(spec, i), _alpha(spec, j), a, b)


def _pair_expansion(t, c):
    """∂^t ω_{0,c} as {(x, y): coeff} with x <= y (same-index family)."""
    out = {}
    for s in range(t + 1):
        x, y = s, c + t - s
        key = (min(x, y), max(x, y))
        out[key] = out.get(key, 0) + comb(t, s)
    return out


def rewrite_derivative_basis(i, j, a, b):
    """Write ω^{i,j}_{a,b} as sum coeff * ∂^t ω^{i,j}_{0,c}.

    Returns a list of ``(coeff, t, c)``.  For i = j the basis is
    ∂^{2k} ω_{0,2m-2k} (a+b = 2m) or ∂^{2k+1} ω_{0,2m-2k} (a+b = 2m+1);
    for i ≠ j it is ∂^k ω_{0,a+b-k}.
    """
    if a < 0 or b < 0:
        raise ValueError("derivative orders must be nonnegative")
    if i != j:
        if i > j:
            a, b = b, a
        r, m = a, a + b
        return [(Fraction((-1) ** (r + k) * comb(r, k)), k, m - k) for k in range(r + 1)]
    N = a + b
    m = N // 2
    cands = [(2 * k + N % 2, 2 * m - 2 * k) for k in range(m + 1)]
    rows = [(x, N - x) for x in range(m + 1)]
    cols = [_pair_expansion(t, c) for t, c in cands]
    A = [[Fraction(cols[q].get(r, 0)) for q in range(m + 1)] + [Fraction(int(r == (min(a, b), max(a, b))))] for r in rows]
    n = m + 1
    for col in range(n):
        p = next(r for r in range(col, n) if A[r][col])
        A[col], A[p] = A[p], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [(A[q][n], t, c) for q, (t, c) in enumerate(cands) if A[q][n]]


def expand_derivative_basis(spec, i, j, combo):
    """Field of a ``rewrite_derivative_basis`` combination."""
    out = spec.zero()
    for coeff, t, c in combo:
        out = out + derive(omega(spec, i, j, 0, c), t) * coeff
    return out


def quadratic_coordinates(f):
    """Coordinates of a quadratic field of H(n) in the derivative bases.

    Returns ``{(i, j, t, c): coeff}`` meaning coeff * ∂^t ω^{i,j}_{0,c}
    (1-based, i <= j).  Non-quadratic terms raise OrbifoldError.
    """
    out = {}
    for mono, coeff in f.terms.items():
        if len(mono) != 2:
            raise OrbifoldError("field is not purely quadratic")
        (g1, x), (g2, y) = mono
        i, j = g1 + 1, g2 + 1
        for c0, t, c in rewrite_derivative_basis(i, j, x, y):
            key = (i, j, t, c)
            v = out.get(key, Scalar(0)) + coeff * c0
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# closed forms


def falling(n, m):
    """n!/(n-m)!, zero when m > n >= 0."""
    out = 1
    for t in range(m):
        out *= n - t
    return out


def lam(a, b, c, m):
    return (-1) ** b * falling(b + c + 1, m) + (-1) ** a * falling(a + c + 1, m)


CLOSED_FORM_KINDS = ("ij*di", "ij*dj", "ii*di", "ij.ij", "ij.jk", "ii.ij", "jj.ij", "ii.ii")


def _term(spec, coeff, build):
    return build() * coeff if coeff else spec.zero()


def circle_closed_form(spec, kind, indices, a, b, c, m, d=0):
    """Right-hand side of the closed circle-product formulas in H(n).

    ``kind`` is one of CLOSED_FORM_KINDS; ``indices`` is (i,), (i, j) or
    (i, j, k) (1-based).  Valid for 0 <= m <= a+b+c+1.
    """
    if kind not in CLOSED_FORM_KINDS:
        raise ValueError(f"unknown closed form {kind!r}")
    if not 0 <= m <= a + b + c + 1:
        raise ValueError(f"m = {m} outside the range 0..{a + b + c + 1}")
    top = a + b + c + 1 - m
    topd = a + b + d + 1 - m
    alpha = lambda i, e: spec.gen(_alpha(spec, i), e)
    w = lambda i, j, x, y: omega(spec, i, j, x, y)
    if kind == "ij*di":
        i, j = indices
        return _term(spec, (-1) ** a * falling(a + c + 1, m), lambda: alpha(j, top))
    if kind == "ij*dj":
        i, j = indices
        return _term(spec, (-1) ** b * falling(b + c + 1, m), lambda: alpha(i, top))
    if kind == "ii*di":
        (i,) = indices
        return _term(spec, lam(a, b, c, m), lambda: alpha(i, top))
    if kind == "ij.ij":
        i, j = indices
        return _term(spec, (-1) ** a * falling(a + c + 1, m), lambda: w(j, j, top, d)) + _term(
            spec, (-1) ** b * falling(b + d + 1, m), lambda: w(i, i, topd, c)
        )
    if kind == "ij.jk":
        i, j, k = indices
        return _term(spec, (-1) ** b * falling(b + c + 1, m), lambda: w(i, k, top, d))
    if kind == "ii.ij":
        i, j = indices
        return _term(spec, lam(a, b, c, m), lambda: w(i, j, top, d))
    if kind == "jj.ij":
        i, j = indices
        return _term(spec, lam(a, b, d, m), lambda: w(i, j, c, topd))
    (i,) = indices
    return _term(spec, lam(a, b, c, m), lambda: w(i, i, top, d)) + _term(
        spec, lam(a, b, d, m), lambda: w(i, i, c, topd)
    )


# ---------------------------------------------------------------------------
# generator alphabets and words


def _homogeneous_weight(f):
    w = conformal_weight(f)
    if w is None or w == "mixed":
        raise OrbifoldError(f"field {f} is not weight-homogeneous")
    return w


class GeneratorSet:
    """An ordered alphabet of homogeneous fields and their normally ordered words.

    A word is a tuple of ``(p, t)`` (generator p differentiated t times) in
    canonical order; it is realized as the right-nested Wick product.
    """

    def __init__(self, fields, names=None):
        fields = list(fields)
        if not fields:
            raise OrbifoldError("empty generator set")
        self.spec = fields[0].spec
        self.fields = fields
        self.names = list(names) if names else [f"g{p}" for p in range(len(fields))]
        self.weights = [_homogeneous_weight(f) for f in fields]
        self._factor = {}
        self._word = {(): {(): ONE}}
        self._words = {}
        self._bases = {}

    def __len__(self):
        return len(self.fields)

    def factor(self, p, t):
        key = (p, t)
        hit = self._factor.get(key)
        if hit is None:
            hit = self.spec.engine.derive_terms(self.fields[p].terms, t)
            self._factor[key] = hit
        return hit

    def realize_terms(self, word):
        hit = self._word.get(word)
        if hit is None:
            eng = self.spec.engine
            hit = eng.wick_terms(self.factor(*word[0]), self.realize_terms(word[1:]))
            self._word[word] = hit
        return hit

    def realize(self, word):
        return Field(self.spec, self.realize_terms(tuple(word)))

    def words(self, weight):
        """All canonical words of the given weight, in the solver's column order."""
        hit = self._words.get(weight)
        if hit is not None:
            return hit
        out = []
        ws = self.weights
        n = len(ws)

        def rec(prefix, remaining, start):
            if remaining == 0:
                out.append(tuple(prefix))
                return
            # factors in canonical order: generator ascending, derivative descending
            p0, t0 = start
            for p in range(p0, n):
                tmax = remaining - ws[p]
                if p == p0:
                    tmax = min(tmax, t0)
                for t in range(tmax, -1, -1):
                    prefix.append((p, t))
                    rec(prefix, remaining - ws[p] - t, (p, t))
                    prefix.pop()

        rec([], weight, (0, weight))
        out.sort(key=lambda w: (len(w), tuple(p for p, _ in w), tuple(t for _, t in w)))
        self._words[weight] = out
        return out

    def basis(self, weight):
        """Echelon basis of all words of the given weight (cached)."""
        hit = self._bases.get(weight)
        if hit is None:
            hit = EchelonBasis()
            for word in self.words(weight):
                hit.add(self.realize_terms(word), word)
            self._bases[weight] = hit
        return hit

    def render_word_terms(self, terms):
        return render_terms(self.names, self.weights, terms)


@dataclass
class DecouplingResult:
    """target = expression (a polynomial in the generator words) + residual."""

    target: Field
    expression: dict
    residual: Field
    denominators: set
    generators: GeneratorSet = dc_field(repr=False)
    leading: Scalar | None = None

    @property
    def success(self):
        return not self.residual

    def expand(self):
        out = self.target.spec.zero()
        for word, c in self.expression.items():
            out = out + self.generators.realize(word) * c
        return out

    def render_expression(self):
        return self.generators.render_word_terms(self.expression)

    def to_json(self):
        return {
            "target": str(self.target),
            "expression": self.render_expression(),
            "residual": str(self.residual),
            "success": self.success,
            "denominators": sorted(render_scalar(d) for d in self.denominators),
        }


def _denominators(coeffs):
    out = set()
    for c in coeffs:
        if len(c.den) > 1:
            out.add(Scalar.from_polys(c.den, (1,)))
    return out


def _as_generator_set(generators, names=None):
    if isinstance(generators, GeneratorSet):
        return generators
    return GeneratorSet(generators, names)


def decouple(target, generators, names=None):
    """Express ``target`` through normally ordered words in ``generators``.

    Columns are all words of the target's weight in a fixed order; columns in
    the span of earlier ones get coefficient zero.  A nonzero residual means
    no solution exists.
    """
    gs = _as_generator_set(generators, names)
    w = _homogeneous_weight(target)
    coeffs, residual = gs.basis(w).solve(target.terms)
    return DecouplingResult(
        target=target,
        expression=coeffs,
        residual=Field(target.spec, residual),
        denominators=_denominators(coeffs.values()),
        generators=gs,
    )


def decoupling_ladder(seed, raising, steps):
    """Raise a decoupling relation repeatedly with ``raising ∘_1``.

    Each step applies the operator to the previous target, keeps its
    underived quadratic part, normalizes it to a unit leading coefficient and
    re-solves over the seed's generators.  ``result.leading`` records the
    normalizing coefficient.
    """
    out = []
    current = seed.target
    for step in range(1, steps + 1):
        image = nproduct(raising, current, 1)
        coords = quadratic_coordinates(image)
        head = {key: c for key, c in coords.items() if key[2] == 0}
        if not head:
            raise OrbifoldError(f"ladder step {step}: image has no underived part")
        first = min(head, key=lambda key: (key[3], key[0], key[1]))
        lead = head[first]
        nxt = image.spec.zero()
        for (i, j, _, c), v in head.items():
            nxt = nxt + omega(image.spec, i, j, 0, c) * (v / lead)
        res = decouple(nxt, seed.generators)
        res.leading = lead
        if not res.success:
            raise OrbifoldError(f"ladder step {step}: decoupling of {nxt} failed")
        out.append(res)
        current = nxt
    return out


# ---------------------------------------------------------------------------
# span checks


def invariant_monomials(spec, weight, involution="cartan"):
    """PBW monomials of the given weight fixed by the involution."""
    signs = spec.involutions[involution] if involution else None
    ws = [g.weight for g in spec.generators]
    n = len(ws)
    out = []

    def rec(prefix, remaining, start, sign):
        if remaining == 0:
            if sign == 1:
                out.append(tuple(prefix))
            return
        g0, d0 = start
        for g in range(g0, n):
            dmax = remaining - ws[g]
            if g == g0:
                dmax = min(dmax, d0)
            for d in range(dmax, -1, -1):
                prefix.append((g, d))
                rec(prefix, remaining - ws[g] - d, (g, d), sign * (signs[g] if signs else 1))
                prefix.pop()

    rec([], weight, (0, weight), 1)
    return out


@dataclass
class SpanRow:
    weight: int
    spanned: int
    ambient: int
    words: int
    certificate: str
    witness: tuple | None = None

    @property
    def full(self):
        return self.spanned == self.ambient


def _numeric_terms(terms, k0):
    out = {}
    for m, c in terms.items():
        v = c.to_fraction() if c.is_constant else c(k0)
        if v:
            out[m] = v
    return out


def strong_span_check(generators, cutoff, names=None, involution="cartan", k0=None, witness=False, start=1):
    """Per-weight dimension of the span of generator words vs the invariant space.

    Full span is certified by rank over F_p (rank mod p can only drop).  A
    deficiency is certified by counting words, or by exact elimination.
    Coefficients depending on k are specialized at ``k0`` for the modular
    rank; an exact generic rank is used to confirm deficiencies.
    """
    gs = _as_generator_set(generators, names)
    spec = gs.spec
    rows = []
    for w in range(start, cutoff + 1):
        ambient = invariant_monomials(spec, w, involution)
        words = gs.words(w)
        vecs = [gs.realize_terms(word) for word in words]
        kk = Fraction(k0) if k0 is not None else Fraction(7, 3)
        r = rank_mod_p([_numeric_terms(v, kk) for v in vecs]) if vecs else 0
        if r == len(ambient):
            rows.append(SpanRow(w, r, len(ambient), len(words), "rank mod p"))
            continue
        if len(words) < len(ambient) and not witness:
            rows.append(SpanRow(w, r, len(ambient), len(words), "word count"))
            continue
        basis = gs.basis(w)
        wit = None
        if witness:
            # rows: first ambient monomial outside the span
            for mono in ambient:
                if not basis.contains({mono: ONE}):
                    wit = mono
                    break
        rows.append(SpanRow(w, len(basis), len(ambient), len(words), "exact", wit))
    return rows


# ---------------------------------------------------------------------------
# primary correction


@dataclass
class PrimaryResult:
    field: Field
    corrected: Field
    correction: dict
    residual: dict
    generators: GeneratorSet = dc_field(repr=False)

    @property
    def success(self):
        return not self.residual

    def render_correction(self):
        return self.generators.render_word_terms(self.correction)


def primary_conditions(L, f, weight):
    """Stacked vector of L∘_m f (2 <= m <= weight+1) and L∘_1 f - weight*f."""
    vec = {}
    for m in range(1, weight + 2):
        p = nproduct(L, f, m)
        if m == 1:
            p = p - f * weight
        for mono, c in p.terms.items():
            vec[(m, mono)] = c
    return vec


def is_primary(L, f, weight=None):
    w = _homogeneous_weight(f) if weight is None else weight
    return not primary_conditions(L, f, w)


def primary_correct(field, L, lower, names=None):
    """Subtract a normally ordered polynomial in ``lower`` to make ``field`` primary.

    Returns a PrimaryResult with ``corrected = field - sum c_M word_M``.
    """
    w = _homogeneous_weight(field)
    gs = _as_generator_set(lower, names)
    eb = EchelonBasis()
    for word in gs.words(w):
        eb.add(primary_conditions(L, gs.realize(word), w), word)
    coeffs, residual = eb.solve(primary_conditions(L, field, w))
    corrected = field
    for word, c in coeffs.items():
        corrected = corrected - gs.realize(word) * c
    return PrimaryResult(field, corrected, coeffs, residual, gs)


# ---------------------------------------------------------------------------
# named Heisenberg generating sets


def heisenberg_generating_set(spec, convention="w11"):
    """Minimal strong generating sets of H(n)^{Z2} as (fields, names).

    n = 1: ω_{0,0}, ω_{0,2}.  n >= 2: ω^{ii}_{0,0}, ω^{ij}_{0,0}, ω^{ij}_{0,1},
    one weight-4 field ω^{11}_{0,2} (``convention="w11"``) or, for n = 2,
    ω^{22}_{0,2} (``"w22"``), and for n = 2 additionally ω^{12}_{0,2}.
    """
    n = spec.rank
    fields, names = [], []

    def add(i, j, a, b):
        fields.append(omega(spec, i, j, a, b))
        names.append(f"w{i}{j}_{a}{b}")

    if n == 1:
        add(1, 1, 0, 0)
        add(1, 1, 0, 2)
        return fields, names
    for i in range(1, n + 1):
        add(i, i, 0, 0)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            add(i, j, 0, 0)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            add(i, j, 0, 1)
    if n == 2:
        add(1, 2, 0, 2)
    if convention == "w11":
        add(1, 1, 0, 2)
    elif convention == "w22" and n == 2:
        add(2, 2, 0, 2)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return fields, names
