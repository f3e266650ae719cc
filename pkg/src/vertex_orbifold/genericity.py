"""Orbifold generators of V^k(g)^{Z2}, their structure constants as rational
functions of k, pole extraction and the large-level limit."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .algebras import CLASSIFICATION
from .coefficients import Scalar, render_rational, render_scalar, scalar_poles
from .kernel import AlgebraSpec, GeneratorSymbol, SpecError, nproduct
from .orbifold import GeneratorSet, quadratic

__all__ = [
    "GeneratorLabel",
    "generator_labels",
    "generator_type",
    "type_formula",
    "orbifold_generators",
    "SL2_GENERATOR_NAMES",
    "PoleReport",
    "structure_constants",
    "LimitError",
    "LimitReport",
    "large_level_limit",
    "gram_heisenberg",
    "classification_check",
]


@dataclass(frozen=True)
class GeneratorLabel:
    """A strong generator: ``kind`` is "F" or a quadratic ``(left, right, a, b)``
    with left/right labels like ("E", 1) or ("h", 2)."""

    name: str
    weight: int
    kind: str
    data: tuple


def _q(x, y, a, b):
    (s, i), (t, j) = x, y
    name = f"Q[{s}{i},{t}{j}]_{a}{b}"
    return GeneratorLabel(name, a + b + 2, "Q", (x, y, a, b))


def generator_labels(m, l):
    """Minimal strong generators of V^k(g)^{Z2} from (m, l) alone.

    For sl2 (m = l = 1) this is F, Q_00, U_00, U_02, V_00, V_01, V_02.
    Otherwise: F_i; Q^{E_a,E_b}_{00} (a <= b), Q^{E_a,E_b}_{01} (a < b);
    Q^{h_r,h_s}_{00} (r <= s), Q^{h_r,h_s}_{01} (r < s); Q^{h_t,E_u}_{00},
    Q^{h_t,E_u}_{01}; and Q^{E_1,E_1}_{02}.
    """
    if m < 1 or l < 1:
        raise SpecError("need at least one positive root and rank >= 1")
    if (m, l) == (1, 1):
        E, h = ("E", 1), ("h", 1)
        out = [GeneratorLabel("F", 1, "F", (1,))]
        for nm, (x, y, a, b) in zip(
            ("Q00", "U00", "U02", "V00", "V01", "V02"),
            ((E, E, 0, 0), (h, h, 0, 0), (h, h, 0, 2), (h, E, 0, 0), (h, E, 0, 1), (h, E, 0, 2)),
        ):
            out.append(GeneratorLabel(nm, a + b + 2, "Q", (x, y, a, b)))
        return out
    out = [GeneratorLabel(f"F{i}", 1, "F", (i,)) for i in range(1, m + 1)]
    Es = [("E", i) for i in range(1, m + 1)]
    hs = [("h", r) for r in range(1, l + 1)]
    for a in range(m):
        for b in range(a, m):
            out.append(_q(Es[a], Es[b], 0, 0))
    for r in range(l):
        for s in range(r, l):
            out.append(_q(hs[r], hs[s], 0, 0))
    for t in range(l):
        for u in range(m):
            out.append(_q(hs[t], Es[u], 0, 0))
    for a in range(m):
        for b in range(a + 1, m):
            out.append(_q(Es[a], Es[b], 0, 1))
    for r in range(l):
        for s in range(r + 1, l):
            out.append(_q(hs[r], hs[s], 0, 1))
    for t in range(l):
        for u in range(m):
            out.append(_q(hs[t], Es[u], 0, 1))
    out.append(_q(Es[0], Es[0], 0, 2))
    return out


def generator_type(m, l):
    """{weight: count} of the generator labels."""
    out = {}
    for g in generator_labels(m, l):
        out[g.weight] = out.get(g.weight, 0) + 1
    return dict(sorted(out.items()))


def type_formula(m, l):
    """The closed type W(1^m, 2^{d+C(d,2)}, 3^{C(d,2)}, 4), or W(1,2^3,3,4^2) for sl2."""
    if (m, l) == (1, 1):
        return {1: 1, 2: 3, 3: 1, 4: 2}
    d = m + l
    return {1: m, 2: d + comb(d, 2), 3: comb(d, 2), 4: 1}


def classification_check(n_values=range(1, 9)):
    """Compare builder counts with the type formula for every classification row.

    Returns a list of (row name, n, dim, l, m, builder, formula, ok).
    """
    out = []
    for row in CLASSIFICATION:
        ns = [None] if row.min_n is None else [n for n in n_values if n >= row.min_n]
        for n in ns:
            dim, l, m = row.at(n)
            built, formula = generator_type(m, l), type_formula(m, l)
            ok = built == formula and dim == 2 * m + l
            out.append((row.name, n, dim, l, m, built, formula, ok))
    return out


SL2_GENERATOR_NAMES = ("F", "Q00", "U00", "U02", "V00", "V01", "V02")


def orbifold_generators(spec, root_data=None):
    """Realize the generator labels in a Cartan-eigenbasis spec.

    Returns a GeneratorSet whose names follow :func:`generator_labels`.
    """
    root_data = root_data or getattr(spec, "root_data", None)
    names = getattr(spec, "eigen_names", None)
    if root_data is None or names is None:
        raise SpecError("orbifold_generators needs an eigenbasis spec with root data")
    lookup = {}
    for i, nm in enumerate(names["F"], 1):
        lookup[("F", i)] = nm
    for i, nm in enumerate(names["E"], 1):
        lookup[("E", i)] = nm
    for r, nm in enumerate(names["h"], 1):
        lookup[("h", r)] = nm
    fields, labels = [], []
    for g in generator_labels(root_data.m, root_data.l):
        if g.kind == "F":
            fields.append(spec.gen(lookup[("F", g.data[0])]))
        else:
            x, y, a, b = g.data
            fields.append(quadratic(spec, lookup[x], lookup[y], a, b))
        labels.append(g.name)
    return GeneratorSet(fields, labels)


# ---------------------------------------------------------------------------
# structure constants


@dataclass
class PoleReport:
    """All products a ∘_n b (n >= 0) of the generators in their word basis."""

    generators: GeneratorSet = dc_field(repr=False)
    entries: dict = dc_field(default_factory=dict)  # (a, b, n) -> {word: Scalar}
    poles: list = dc_field(default_factory=list)
    residual_factors: list = dc_field(default_factory=list)
    failures: list = dc_field(default_factory=list)
    pole_sources: dict = dc_field(default_factory=dict)  # pole -> [(a, b, n)]

    @property
    def success(self):
        return not self.failures

    def render_entry(self, key):
        return self.generators.render_word_terms(self.entries[key])

    def to_json(self):
        gs = self.generators
        return {
            "generators": list(gs.names),
            "entries": [
                {
                    "a": a,
                    "b": b,
                    "n": n,
                    "terms": {
                        gs.render_word_terms({w: ONE_SCALAR}) if w else "1": render_scalar(c)
                        for w, c in sorted(terms.items())
                    },
                }
                for (a, b, n), terms in self.entries.items()
            ],
            "poles": [render_rational(p) for p in self.poles],
            "residual_factors": [render_scalar(f) for f in self.residual_factors],
            "failures": [list(f) for f in self.failures],
        }


ONE_SCALAR = Scalar(1)


def structure_constants(generators, pairs=None):
    """Decompose every a ∘_n b into generator words and collect poles in k.

    ``generators`` is a GeneratorSet.  Poles come from the final coefficients
    only.  ``pairs`` optionally restricts to a list of (a, b) name pairs.
    """
    gs = generators
    report = PoleReport(generators=gs)
    idx = {nm: p for p, nm in enumerate(gs.names)}
    todo = pairs or [(a, b) for a in gs.names for b in gs.names]
    poles = set()
    residual = []
    for a, b in todo:
        i, j = idx[a], idx[b]
        for n in range(gs.weights[i] + gs.weights[j]):
            prod = nproduct(gs.fields[i], gs.fields[j], n)
            if not prod:
                continue
            w = gs.weights[i] + gs.weights[j] - n - 1
            if w == 0:
                coeffs, res = dict(prod.terms), {}
            else:
                coeffs, res = gs.basis(w).solve(prod.terms)
            if res:
                report.failures.append((a, b, n))
                continue
            report.entries[(a, b, n)] = coeffs
            for c in coeffs.values():
                roots, rest = scalar_poles(c)
                for r in roots:
                    poles.add(r)
                    srcs = report.pole_sources.setdefault(r, [])
                    if (a, b, n) not in srcs:
                        srcs.append((a, b, n))
                for f in rest:
                    if f not in residual:
                        residual.append(f)
    report.poles = sorted(poles)
    report.residual_factors = residual
    return report


# ---------------------------------------------------------------------------
# large-level limit


class LimitError(ValueError):
    pass


@dataclass
class LimitReport:
    limit: AlgebraSpec
    entries: dict  # (a, b, n) -> {monomial: Fraction}
    checked: int
    matches_gram: bool


def _limit_at_infinity(c, half_exponent):
    """lim k^{half_exponent/2} * c(k) as k -> oo; None if infinite."""
    deg = c.degree()
    order = 2 * deg + half_exponent
    if order > 0:
        return None
    if order < 0:
        return Fraction(0)
    return Fraction(c.num[-1], c.den[-1])


def gram_heisenberg(names, B):
    """Heisenberg algebra with a ∘_1 b = B(a, b)."""
    n = len(names)
    gens = [GeneratorSymbol(nm, 1) for nm in names]
    table = {(i, j): ({1: B[i][j]} if B[i][j] else {}) for i in range(n) for j in range(n)}
    return AlgebraSpec(gens, table, name="gram-heisenberg", bilinear_form=B)


def large_level_limit(spec):
    """Rescale generators by k^{-1/2} and take k -> oo in every OPE coefficient.

    A degree-r monomial in a ∘_n b picks up k^{(r-2)/2}; exponents are kept
    as integer half-units so coefficients stay in Q(k).
    """
    if not spec.symbolic_level:
        raise LimitError("large-level limit needs a symbolic level")
    n = spec.rank
    entries = {}
    checked = 0
    for (i, j), row in spec.table.items():
        for nn, terms in row.items():
            out = {}
            for mono, c in terms.items():
                checked += 1
                val = _limit_at_infinity(c, len(mono) - 2)
                if val is None:
                    raise LimitError(
                        f"{spec.generators[i].name}_({nn}){spec.generators[j].name}: "
                        f"coefficient {render_scalar(c)} grows with k"
                    )
                if val:
                    out[mono] = val
            if out:
                entries[(i, j, nn)] = out
    B = [[Fraction(0)] * n for _ in range(n)]
    ok = True
    for (i, j, nn), terms in entries.items():
        if nn != 1 or set(terms) != {()}:
            ok = False
            continue
        B[i][j] = terms[()]
    names = [g.name for g in spec.generators]
    limit = gram_heisenberg(names, B)
    if spec.bilinear_form is not None:
        ok = ok and all(B[i][j] == Fraction(spec.bilinear_form[i][j]) for i in range(n) for j in range(n))
    return LimitReport(limit, entries, checked, ok)
