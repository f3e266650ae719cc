from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vertex_orbifold import SpecError, derive, iterated_wick, nproduct, wick
from vertex_orbifold.algebras import heisenberg, heisenberg_virasoro, sl2_eigenbasis
from vertex_orbifold.orbifold import (
    CLOSED_FORM_KINDS,
    circle_closed_form,
    decouple,
    decoupling_ladder,
    expand_derivative_basis,
    heisenberg_generating_set,
    invariant_monomials,
    is_invariant,
    is_primary,
    lam,
    omega,
    primary_correct,
    quadratic_coordinates,
    rewrite_derivative_basis,
    strong_span_check,
)

H1 = heisenberg(1)
H2 = heisenberg(2)
H3 = heisenberg(3)
E = sl2_eigenbasis()

half = Fraction(1, 2)


def w(i, j, a, b, spec=H3):
    return omega(spec, i, j, a, b)


def test_is_invariant_examples():
    a = H1.gen(0)
    assert is_invariant(wick(a, a))
    assert not is_invariant(a)
    F, G = E.gen("F"), E.gen("G")
    assert is_invariant(iterated_wick([F, G, G]))
    with pytest.raises(SpecError):
        is_invariant(a, "nope")


def test_omega_relations():
    assert w(1, 1, 0, 1, H1) == derive(w(1, 1, 0, 0, H1)) * half
    assert w(1, 1, 1, 1, H1) == -w(1, 1, 0, 2, H1) + derive(w(1, 1, 0, 0, H1), 2) * half
    assert w(1, 1, 2, 1) == w(1, 1, 1, 2)
    assert w(2, 1, 0, 1) == w(1, 2, 1, 0)


def test_omega_weight_and_range():
    assert w(1, 2, 1, 2).weight() == 5
    with pytest.raises(SpecError):
        omega(H2, 1, 3, 0, 0)


def test_rewrite_examples():
    assert rewrite_derivative_basis(1, 2, 1, 1) == [(Fraction(-1), 0, 2), (Fraction(1), 1, 1)]
    assert rewrite_derivative_basis(1, 1, 0, 4) == [(Fraction(1), 0, 4)]
    assert sorted(rewrite_derivative_basis(1, 1, 1, 1)) == [(Fraction(-1), 0, 2), (half, 2, 0)]


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 1), (3, 3)])
def test_rewrite_expands_back(i, j):
    for a in range(5):
        for b in range(5):
            combo = rewrite_derivative_basis(i, j, a, b)
            lo, hi = min(i, j), max(i, j)
            assert expand_derivative_basis(H3, lo, hi, combo) == w(i, j, a, b)


def test_derivative_basis_dimensions():
    # A_N: span of ω_{a,b}, a+b = N, same index; A'_N for distinct indices
    for m in range(5):
        for N in (2 * m, 2 * m + 1):
            used = {(t, c) for a in range(N + 1) for _, t, c in rewrite_derivative_basis(1, 1, a, N - a)}
            assert len(used) == m + 1
        used = {(t, c) for a in range(m + 1) for _, t, c in rewrite_derivative_basis(1, 2, a, m - a)}
        assert len(used) == m + 1


def test_quadratic_coordinates():
    f = w(1, 2, 1, 1) + 3 * w(2, 2, 1, 1)
    coords = quadratic_coordinates(f)
    assert coords[(1, 2, 0, 2)] == -1
    assert coords[(2, 2, 2, 0)] == Fraction(3, 2)


def test_lambda():
    assert lam(0, 0, 0, 1) == 2
    assert lam(0, 2, 0, 1) == 4


def test_closed_form_examples():
    assert circle_closed_form(H3, "ii.ii", (1,), 0, 0, 0, 1, 0) == 4 * w(1, 1, 0, 0)
    assert circle_closed_form(H3, "ij.jk", (1, 2, 3), 0, 0, 0, 0, 0) == w(1, 3, 1, 0)
    assert circle_closed_form(H3, "ii.ii", (2,), 0, 2, 0, 1, 0) == 8 * w(2, 2, 0, 2)


def test_closed_form_range():
    with pytest.raises(ValueError):
        circle_closed_form(H3, "ii.ii", (1,), 0, 0, 0, 2, 0)


@pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
def test_closed_forms_sample(kind):
    idx = {"ij.jk": (3, 1, 2), "ii*di": (2,), "ii.ii": (3,)}.get(kind, (1, 3))
    for a, b, c, d in [(0, 0, 0, 0), (1, 2, 0, 1), (2, 1, 2, 2)]:
        if kind.startswith(("ij*", "ii*")):
            d = 0
        for m in range(a + b + c + 2):
            rhs = circle_closed_form(H3, kind, idx, a, b, c, m, d)
            i = idx[0]
            if kind == "ij*di":
                lhs = nproduct(w(*idx, a, b), H3.gen(i - 1, c), m)
            elif kind == "ij*dj":
                lhs = nproduct(w(*idx, a, b), H3.gen(idx[1] - 1, c), m)
            elif kind == "ii*di":
                lhs = nproduct(w(i, i, a, b), H3.gen(i - 1, c), m)
            elif kind == "ij.ij":
                lhs = nproduct(w(*idx, a, b), w(*idx, c, d), m)
            elif kind == "ij.jk":
                i, j, k = idx
                lhs = nproduct(w(i, j, a, b), w(j, k, c, d), m)
            elif kind == "ii.ij":
                lhs = nproduct(w(i, i, a, b), w(*idx, c, d), m)
            elif kind == "jj.ij":
                j = idx[1]
                lhs = nproduct(w(j, j, a, b), w(*idx, c, d), m)
            else:
                lhs = nproduct(w(i, i, a, b), w(i, i, c, d), m)
            assert lhs == rhs, (kind, a, b, c, d, m)


def test_quartic_relation_decoupling():
    gens = [w(1, 1, 0, 0, H1), w(1, 1, 0, 2, H1)]
    res = decouple(w(1, 1, 0, 4, H1), gens, ["w00", "w02"])
    assert res.success and res.expand() == w(1, 1, 0, 4, H1)
    lhs = wick(w(1, 1, 0, 0, H1), w(1, 1, 1, 1, H1)) - wick(w(1, 1, 0, 1, H1), w(1, 1, 0, 1, H1))
    rhs = (
        w(1, 1, 0, 4, H1) * Fraction(-5, 4)
        + derive(w(1, 1, 0, 2, H1), 2) * Fraction(7, 4)
        - derive(w(1, 1, 0, 0, H1), 4) * Fraction(7, 24)
    )
    assert lhs == rhs


def test_decouple_reports_residual():
    res = decouple(w(1, 1, 0, 2, H1), [w(1, 1, 0, 0, H1)])
    assert not res.success
    assert res.residual


def test_h2_and_h3_relations():
    lhs = wick(w(1, 2, 0, 0, H2), w(2, 2, 0, 1, H2)) - wick(w(1, 2, 0, 1, H2), w(2, 2, 0, 0, H2))
    rhs = (
        w(1, 2, 0, 3, H2) * -half
        + 2 * derive(w(1, 2, 0, 2, H2))
        - derive(w(1, 2, 0, 1, H2), 2) * Fraction(5, 2)
        + derive(w(1, 2, 0, 0, H2), 3)
    )
    assert lhs == rhs
    lhs = wick(w(1, 3, 0, 0), w(3, 2, 0, 0)) - wick(w(1, 2, 0, 0), w(3, 3, 0, 0))
    rhs = w(1, 2, 0, 2) * half - derive(w(1, 2, 0, 1)) + derive(w(1, 2, 0, 0), 2) * half
    assert lhs == rhs
    for j in (2, 3):
        lhs = wick(w(1, j, 0, 0), w(1, j, 0, 0))
        rhs = w(1, 1, 0, 2) * half + w(j, j, 0, 2) * half + wick(w(1, 1, 0, 0), w(j, j, 0, 0))
        assert lhs == rhs


def test_ladder_leading_coefficients():
    gens = [w(1, 1, 0, 0, H1), w(1, 1, 0, 2, H1)]
    seed = decouple(w(1, 1, 0, 4, H1), gens)
    steps = decoupling_ladder(seed, w(1, 1, 0, 2, H1), 2)
    assert [s.target for s in steps] == [w(1, 1, 0, 6, H1), w(1, 1, 0, 8, H1)]
    assert [s.leading for s in steps] == [16, 20]
    assert all(s.success and s.expand() == s.target for s in steps)


def test_raising_rule_h2():
    for k in range(5):
        assert nproduct(w(2, 2, 0, 1, H2), w(1, 2, 0, k, H2), 1) == -w(1, 2, 0, k + 1, H2)


def test_span_examples():
    gens = [w(1, 1, 0, 0, H1), w(1, 1, 0, 2, H1)]
    rows = strong_span_check(gens, 6)
    assert all(r.full for r in rows)
    assert rows[3].ambient == 3
    rows = strong_span_check(gens[:1], 4, witness=True)
    assert not rows[3].full and rows[3].witness is not None
    fields, names = heisenberg_generating_set(H2)
    assert all(r.full for r in strong_span_check(fields, 5, names))


def test_invariant_monomials_weight4():
    monos = invariant_monomials(H1, 4)
    assert sorted(monos) == sorted([((0, 2), (0, 0)), ((0, 1), (0, 1)), ((0, 0),) * 4])


def test_generating_sets():
    fields, names = heisenberg_generating_set(H2, "w22")
    assert names[-1] == "w22_02"
    assert [f.weight() for f in fields] == [2, 2, 2, 3, 4, 4]
    fields, names = heisenberg_generating_set(H3)
    assert len(fields) == 10


def test_primary_fields():
    L = heisenberg_virasoro(H3)
    c01 = w(1, 2, 0, 1) - derive(w(1, 2, 0, 0)) * half
    assert is_primary(L, c01)
    c02 = w(1, 1, 0, 2) - wick(w(1, 1, 0, 0), w(1, 1, 0, 0)) * Fraction(2, 9) - derive(w(1, 1, 0, 0), 2) * Fraction(1, 6)
    assert is_primary(L, c02)
    assert not is_primary(L, c02 + derive(w(1, 1, 0, 0), 2))
    assert not is_primary(L, w(1, 2, 0, 1))


def test_primary_correct_solver():
    L = heisenberg_virasoro(H3)
    lower = [w(1, 2, 0, 0), w(1, 2, 0, 1), w(1, 1, 0, 0), w(2, 2, 0, 0)]
    res = primary_correct(w(1, 2, 0, 1), L, lower)
    assert res.success
    assert res.corrected == w(1, 2, 0, 1) - derive(w(1, 2, 0, 0)) * half
    for m in range(2, 5):
        assert not nproduct(L, res.corrected, m)


@st.composite
def invariant_fields(draw):
    """Random even-length words in the sl2 eigenbasis generators."""
    spec = E
    signs = spec.involutions["cartan"]
    out = spec.zero()
    for _ in range(draw(st.integers(1, 2))):
        factors = draw(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 1)), min_size=1, max_size=2))
        sign = 1
        for g, _ in factors:
            sign *= signs[g]
        if sign == -1:
            factors.append((0, 0) if signs[0] == -1 else (1, 0))
        out = out + draw(st.integers(1, 3)) * iterated_wick([spec.gen(g, d) for g, d in factors])
    return out


@settings(max_examples=60, deadline=None)
@given(invariant_fields(), invariant_fields(), st.integers(0, 3))
def test_invariance_closed_under_nproduct(x, y, n):
    assert is_invariant(x) and is_invariant(y)
    assert is_invariant(nproduct(x, y, n))
