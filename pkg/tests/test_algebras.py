from fractions import Fraction

import pytest

from vertex_orbifold import K, Scalar, SpecError, nproduct
from vertex_orbifold.algebras import (
    CLASSIFICATION,
    affine,
    heisenberg,
    heisenberg_virasoro,
    sl2_affine,
    sl2_eigenbasis,
    special_linear,
    sugawara,
)
from vertex_orbifold.orbifold import omega


def involution_preserves_table(spec, name):
    signs = spec.involutions[name]
    for (i, j), row in spec.table.items():
        for n, terms in row.items():
            for mono, c in terms.items():
                s = 1
                for g, _ in mono:
                    s *= signs[g]
                if s != signs[i] * signs[j]:
                    return False
    return True


def test_heisenberg_tables():
    H1 = heisenberg(1)
    assert H1.rank == 1
    assert sum(len(row) for row in H1.table.values()) == 1
    H3 = heisenberg(3)
    assert not nproduct(H3.gen(0), H3.gen(2), 1)
    assert nproduct(H3.gen(2), H3.gen(2), 1) == H3.vacuum()
    H2 = heisenberg(2)
    assert all(s == -1 for s in H2.involutions["cartan"])


def test_heisenberg_virasoro():
    H1 = heisenberg(1)
    L = heisenberg_virasoro(H1)
    assert nproduct(L, L, 3) == H1.vacuum() * Fraction(1, 2)
    assert L * 2 == omega(H1, 1, 1, 0, 0)
    H3 = heisenberg(3)
    L3 = heisenberg_virasoro(H3)
    for i in range(3):
        assert nproduct(L3, H3.gen(i), 1) == H3.gen(i)
        assert not nproduct(L3, H3.gen(i), 2)
    assert sum((omega(H3, i, i, 0, 0) for i in (2, 3)), omega(H3, 1, 1, 0, 0)) == 2 * L3
    assert nproduct(L3, L3, 3) == H3.vacuum() * Fraction(3, 2)


def test_abelian_affine_is_heisenberg():
    spec = affine(["u", "v"], {}, {("u", "u"): 1, ("v", "v"): 1}, 1)
    assert spec.same_structure(heisenberg(2), rename=True, involutions=False)


def test_affine_rejects_bad_input():
    with pytest.raises(SpecError):
        affine(["u", "v"], {}, [[1, 2], [3, 1]])
    bad = {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1}, ("c", "a"): {"a": 1}}
    with pytest.raises(SpecError):
        affine(["a", "b", "c"], bad, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_sl2_table():
    S = sl2_affine()
    x, y, h = S.gen("x"), S.gen("y"), S.gen("h")
    assert nproduct(h, h, 1) == 2 * K * S.vacuum()
    assert nproduct(h, y, 0) == -2 * y
    assert nproduct(x, y, 0) == h
    for n in range(3):
        assert not nproduct(x, x, n)
    assert S.dual_coxeter == 2


def test_sugawara_sl2():
    S = sl2_affine()
    L = sugawara(S)
    c = 3 * K / (K + 2)
    assert nproduct(L, L, 3) == S.vacuum() * (c / 2)
    assert nproduct(L, S.gen("h"), 1) == S.gen("h")
    assert not nproduct(L, S.gen("x"), 2)


def test_sugawara_critical_level():
    with pytest.raises(SpecError):
        sugawara(sl2_affine(-2))


def test_eigenbasis_sl2():
    E = sl2_eigenbasis()
    assert [g.name for g in E.generators] == ["F", "G", "H"]
    F, G, H = E.gen("F"), E.gen("G"), E.gen("H")
    assert nproduct(G, G, 1) == 2 * K * E.vacuum()
    assert nproduct(F, G, 0) == 2 * H
    assert not nproduct(F, G, 1)
    assert nproduct(F, F, 1) == -2 * K * E.vacuum()
    assert E.involutions["cartan"] == (1, -1, -1)
    assert involution_preserves_table(E, "cartan")


def test_special_linear_sl2_matches_root_basis():
    spec, rd = special_linear(2)
    assert spec.same_structure(sl2_affine(), rename=True, involutions=False)
    assert rd.m == 1 and rd.l == 1


def test_special_linear_sl3():
    spec, rd = special_linear(3)
    assert spec.rank == 8 and rd.m == 3 and rd.l == 2
    x12, y12 = spec.gen("x12"), spec.gen("y12")
    assert nproduct(x12, y12, 1) == K * spec.vacuum()
    assert nproduct(x12, y12, 0) == spec.gen("h1")


def test_classification_metadata():
    rows = {r.name: r for r in CLASSIFICATION}
    assert rows["sl_{n+1}"].at(2) == (8, 2, 3)
    assert rows["so_{2n+1}"].at(2) == (10, 2, 4)
    assert rows["G2"].at() == (14, 2, 6)
    for r in CLASSIFICATION:
        for n in ([r.min_n, r.min_n + 3] if r.min_n else [None]):
            dim, l, m = r.at(n)
            assert dim == l + 2 * m


def test_heisenberg_involution_preserves_table():
    assert involution_preserves_table(heisenberg(3), "cartan")


def test_level_specialization():
    S5 = sl2_affine(5)
    assert not S5.symbolic_level
    assert nproduct(S5.gen("x"), S5.gen("y"), 1) == Scalar(5) * S5.vacuum()
