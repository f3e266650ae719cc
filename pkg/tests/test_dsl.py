from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vertex_orbifold import K, Scalar
from vertex_orbifold.algebras import affine, heisenberg, sl2_affine, sl2_eigenbasis
from vertex_orbifold.coefficients import render_scalar
from vertex_orbifold.dsl import (
    SL2_SOURCE,
    DSLError,
    DSLSemanticError,
    DSLSyntaxError,
    document_of,
    heisenberg_source,
    parse_algebra,
    parse_document,
    parse_field,
    parse_scalar,
    render_algebra,
    render_document,
)


def errors_at(text):
    with pytest.raises((DSLSyntaxError, DSLSemanticError)) as info:
        parse_algebra(text)
    return info.value


def test_sl2_source_matches_builtin():
    assert parse_algebra(SL2_SOURCE).same_structure(sl2_affine())


def test_one_line_heisenberg():
    spec = parse_algebra("algebra h\ngen a weight 1\nope a a 1= 1\n")
    assert spec.same_structure(heisenberg(1), rename=True, involutions=False)


def test_heisenberg_source_with_parity():
    assert parse_algebra(heisenberg_source(3)).same_structure(heisenberg(3), rename=True)


def test_builtin_headers():
    assert parse_algebra("algebra heisenberg 2").same_structure(heisenberg(2))
    assert parse_algebra("algebra sl2-eigen").same_structure(sl2_eigenbasis())


def test_comments_and_blank_lines():
    text = "# header\nalgebra h   # name\n\ngen a weight 1\nope a a 1= 1 # pole\n"
    assert parse_algebra(text).rank == 1


def test_dangling_operator():
    err = errors_at("algebra t over k\ngen a weight 1\nope a a 1= k^")
    assert isinstance(err, DSLSyntaxError)
    assert (err.line, err.col) == (3, 13)
    assert "line 3, col 13" in str(err)


def test_semantic_errors_are_sourced():
    err = errors_at("algebra t\ngen a weight 1\nope a b 1= 1")
    assert isinstance(err, DSLSemanticError) and (err.line, err.col) == (3, 7)
    err = errors_at("algebra t\ngen a weight 1\nope a a 1= :a:")
    assert "weight" in str(err) and err.line == 3
    err = errors_at("algebra t\ngen a weight 1\ngen b weight 1\nope a b 1= 1\nope b a 1= 2")
    assert "skew-symmetry" in str(err) and (err.line, err.col) == (5, 11)
    err = errors_at("algebra t\ngen a weight 1\nope a a 1= k")
    assert err.line == 3


def test_syntax_errors():
    assert errors_at("gen a weight 1").line == 1
    assert errors_at("algebra t\ngen a weight x").line == 2
    assert errors_at("algebra t\nfoo bar").line == 2
    assert errors_at("algebra t\ngen k weight 1").line == 2
    assert errors_at("algebra t\ngen a weight 1\ngen a weight 1").line == 3
    assert errors_at("algebra t\ngen a weight 1\nope a a 1=").line == 3


def test_table_monomials_must_be_canonical():
    text = "algebra t\ngen a weight 1\ngen b weight 1\nope a b 0= :b a:"
    assert errors_at(text).line == 4


def test_reverse_entries_consistent_with_skew_symmetry():
    text = SL2_SOURCE + "ope y x 0= -1*:h:\nope y x 1= k\n"
    assert parse_algebra(text).same_structure(sl2_affine())


@pytest.mark.parametrize("spec", [heisenberg(1), heisenberg(3), sl2_affine(), sl2_eigenbasis(), sl2_affine(5)])
def test_render_round_trip(spec):
    doc = document_of(spec)
    text = render_document(doc)
    assert parse_document(text) == doc
    assert parse_algebra(text).same_structure(spec)
    assert render_algebra(parse_algebra(text), doc.name) == text


@st.composite
def gram_algebras(draw):
    n = draw(st.integers(1, 3))
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            B[i][j] = B[j][i] = draw(st.integers(-3, 3))
    level = draw(st.sampled_from([K, Scalar(1), 2 * K + 1]))
    return affine([f"u{i}" for i in range(n)], {}, B, level)


@settings(max_examples=50, deadline=None)
@given(gram_algebras())
def test_random_documents_round_trip(spec):
    doc = document_of(spec, "g")
    assert parse_document(render_document(doc)) == doc
    assert parse_algebra(render_document(doc)).same_structure(spec)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.lists(st.tuples(st.sampled_from("xyh"), st.integers(0, 2)), min_size=1, max_size=3),
            st.integers(-4, 4).filter(bool),
            st.integers(0, 2),
        ),
        min_size=1,
        max_size=3,
    )
)
def test_field_text_round_trip(terms):
    S = sl2_affine()
    f = S.zero()
    for factors, c, kpow in terms:
        f = f + S.monomial([(S.gen_index(g), d) for g, d in factors]) * (c * K**kpow)
    assert parse_field(str(f), S) == f


def test_parse_scalar():
    s = parse_scalar("(16 - 51*k)/(9*k)")
    assert s == (16 - 51 * K) / (9 * K)
    assert render_scalar(s) == "(16 - 51*k)/(9*k)"
    assert parse_scalar("-5/4") == Scalar(Fraction(-5, 4))
    assert parse_scalar("k^-1 + 2^2") == 1 / K + 4


def test_parse_field_expressions():
    S = sl2_affine()
    x, y, h = S.gen("x"), S.gen("y"), S.gen("h")
    assert parse_field("x + 2*d^1 y", S) == x + 2 * y.derive()
    assert parse_field(":y x:", S) == S.monomial([(1, 0), (0, 0)])
    assert parse_field("(k+2)*h/2", S) == h * ((K + 2) / 2)
    with pytest.raises(DSLError):
        parse_field("x*y", S)
