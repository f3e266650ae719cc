from fractions import Fraction

import pytest

from vertex_orbifold import K, scalar_eval
from vertex_orbifold.algebras import heisenberg, sl2_affine, sl2_eigenbasis, special_linear
from vertex_orbifold.genericity import (
    SL2_GENERATOR_NAMES,
    LimitError,
    classification_check,
    generator_labels,
    generator_type,
    large_level_limit,
    orbifold_generators,
    structure_constants,
    type_formula,
)
from vertex_orbifold.orbifold import GeneratorSet, circle_closed_form, heisenberg_generating_set


def test_sl2_generators():
    gs = orbifold_generators(sl2_eigenbasis())
    assert tuple(gs.names) == SL2_GENERATOR_NAMES
    assert sorted(gs.weights) == [1, 2, 2, 2, 3, 4, 4]


def test_generator_counts():
    assert generator_type(3, 2) == {1: 3, 2: 15, 3: 10, 4: 1}
    assert generator_type(4, 2) == {1: 4, 2: 21, 3: 15, 4: 1}
    assert generator_type(1, 1) == type_formula(1, 1) == {1: 1, 2: 3, 3: 1, 4: 2}


def test_labels_are_distinct():
    for m, l in [(3, 2), (4, 2), (6, 2), (36, 6)]:
        names = [g.name for g in generator_labels(m, l)]
        assert len(names) == len(set(names))


def test_classification_table():
    rows = classification_check()
    assert rows and all(r[-1] for r in rows)


def test_sl3_generators_realize():
    spec, rd = special_linear(3)
    from vertex_orbifold.algebras import cartan_eigenbasis
    from vertex_orbifold.orbifold import is_invariant

    gs = orbifold_generators(cartan_eigenbasis(spec, rd))
    counts = {}
    for w in gs.weights:
        counts[w] = counts.get(w, 0) + 1
    assert counts == {1: 3, 2: 15, 3: 10, 4: 1}
    assert all(is_invariant(f) for f in gs.fields)


def test_f_f_product():
    gs = orbifold_generators(sl2_eigenbasis())
    r = structure_constants(gs, pairs=[("F", "F")])
    assert r.entries[("F", "F", 1)] == {(): -2 * K}


def test_heisenberg_family_has_no_poles():
    fields, names = heisenberg_generating_set(heisenberg(2))
    r = structure_constants(GeneratorSet(fields, names))
    assert r.success and r.poles == [] and r.residual_factors == []


def test_heisenberg_family_matches_closed_forms():
    H1 = heisenberg(1)
    fields, names = heisenberg_generating_set(H1)
    gs = GeneratorSet(fields, names)
    r = structure_constants(gs)
    for (a, b, n), terms in r.entries.items():
        x = {"w11_00": (0, 0), "w11_02": (0, 2)}
        lhs = H1.zero()
        for word, c in terms.items():
            lhs = lhs + gs.realize(word) * c
        (a1, b1), (c1, d1) = x[a], x[b]
        if n <= a1 + b1 + c1 + 1:
            assert lhs == circle_closed_form(H1, "ii.ii", (1,), a1, b1, c1, n, d1)


def test_structure_constants_json(sl2_report):
    doc = sl2_report.to_json()
    assert doc["generators"] == list(SL2_GENERATOR_NAMES)
    assert {"a": "F", "b": "F", "n": 1, "terms": {"1": "-2*k"}} in doc["entries"]


def test_no_residual_factors(sl2_report):
    assert sl2_report.success
    assert sl2_report.residual_factors == []


def test_evaluation_commutes(sl2_report):
    numeric = structure_constants(orbifold_generators(sl2_eigenbasis(5)))
    assert set(numeric.entries) == set(sl2_report.entries)
    for key, terms in sl2_report.entries.items():
        special = {w: scalar_eval(c, 5) for w, c in terms.items()}
        assert {w: c for w, c in special.items() if c} == {w: c.to_fraction() for w, c in numeric.entries[key].items()}


def test_large_level_limit_sl2():
    rep = large_level_limit(sl2_affine())
    assert rep.matches_gram
    idx = {g.name: i for i, g in enumerate(sl2_affine().generators)}
    x, y, h = idx["x"], idx["y"], idx["h"]
    assert rep.entries[(x, y, 1)] == {(): Fraction(1)}
    assert rep.entries[(h, h, 1)] == {(): Fraction(2)}
    assert all(n == 1 for (_, _, n) in rep.entries)
    assert rep.limit.rank == 3


def test_large_level_needs_symbolic_level():
    with pytest.raises(LimitError):
        large_level_limit(sl2_affine(5))
