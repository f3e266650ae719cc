"""Canonical text rendering of monomials and fields.

Monomials render as ``:d^2 x y:`` (factors in canonical order, ``d^n``
prefixes for derivatives); the vacuum renders as its coefficient alone.
Terms are sorted by (weight, length, factors) so output is deterministic.
"""

from __future__ import annotations

from .coefficients import render_scalar


def render_factor(names, f):
    g, d = f
    return names[g] if d == 0 else f"d^{d} {names[g]}"


def render_monomial(names, m):
    if not m:
        return "1"
    return ":" + " ".join(render_factor(names, f) for f in m) + ":"


def monomial_sort_key(weights, m):
    return (sum(weights[g] + d for g, d in m), len(m), tuple((g, -d) for g, d in m))


def _coeff_parts(c):
    """(negative?, text) with the sign pulled out where that is unambiguous."""
    text = render_scalar(c)
    single = sum(1 for x in c.num if x) == 1
    if single and text.startswith("-"):
        return True, text[1:]
    if c.den == (1,) and not single:
        return False, f"({text})"
    return False, text


def render_terms(names, weights, terms):
    if not terms:
        return "0"
    pieces = []
    for m in sorted(terms, key=lambda m: monomial_sort_key(weights, m)):
        neg, coeff = _coeff_parts(terms[m])
        if not m:
            body = coeff
        elif coeff == "1":
            body = render_monomial(names, m)
        else:
            body = f"{coeff}*{render_monomial(names, m)}"
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def render_field(f):
    spec = f.spec
    names = [g.name for g in spec.generators]
    weights = [g.weight for g in spec.generators]
    return render_terms(names, weights, f.terms)
