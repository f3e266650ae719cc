"""Constructors for the concrete algebras: Heisenberg H(n), universal affine
V^k(g, B), the sl2 root basis and the Cartan-involution eigenbasis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .coefficients import K, ONE, Scalar
from .kernel import AlgebraSpec, Field, GeneratorSymbol, SpecError, wick

__all__ = [
    "heisenberg",
    "heisenberg_virasoro",
    "affine",
    "sl2_affine",
    "sl2_eigenbasis",
    "sugawara",
    "cartan_eigenbasis",
    "change_basis",
    "special_linear",
    "RootData",
    "SL2_ROOT_DATA",
    "CLASSIFICATION",
]


def heisenberg(n):
    """Rank-n Heisenberg algebra: generators a1..an, a_i ∘_1 a_j = δ_ij."""
    if n < 1:
        raise SpecError("heisenberg rank must be >= 1")
    gens = [GeneratorSymbol(f"a{i}", 1, {"cartan": -1}) for i in range(1, n + 1)]
    table = {(i, j): ({1: 1} if i == j else {}) for i in range(n) for j in range(n)}
    bilinear = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    spec = AlgebraSpec(gens, table, name=f"H({n})", bilinear_form=bilinear)
    spec.level = ONE
    return spec


def heisenberg_virasoro(spec):
    """L = 1/2 sum_i :a_i a_i: for a Heisenberg spec (or rank)."""
    if isinstance(spec, int):
        raise TypeError("pass the heisenberg spec, not its rank")
    out = spec.zero()
    for i in range(spec.rank):
        a = spec.gen(i)
        out = out + wick(a, a)
    return out * Fraction(1, 2)


# ---------------------------------------------------------------------------
# affine algebras


def _as_matrix(names, B):
    n = len(names)
    if isinstance(B, dict):
        M = [[Fraction(0)] * n for _ in range(n)]
        idx = {x: i for i, x in enumerate(names)}
        for (a, b), v in B.items():
            M[idx[a]][idx[b]] = Fraction(v)
            M[idx[b]][idx[a]] = Fraction(v)
        return M
    M = [[Fraction(x) for x in row] for row in B]
    if len(M) != n or any(len(r) != n for r in M):
        raise SpecError("bilinear form has the wrong shape")
    return M


def _bracket_table(names, brackets):
    """Dense antisymmetric bracket table br[i][j] = {l: coeff}."""
    idx = {x: i for i, x in enumerate(names)}
    n = len(names)
    br = [[{} for _ in range(n)] for _ in range(n)]
    seen = set()
    for (a, b), val in brackets.items():
        i, j = idx[a], idx[b]
        vec = {idx[c]: Fraction(v) for c, v in val.items() if v}
        if (j, i) in seen:
            if {l: -v for l, v in br[j][i].items()} != vec:
                raise SpecError(f"structure constants are not antisymmetric at [{a}, {b}]")
        if i == j and vec:
            raise SpecError(f"[{a}, {a}] must vanish")
        br[i][j] = vec
        br[j][i] = {l: -v for l, v in vec.items()}
        seen.add((i, j))
    return br


def _lie(br, u, v):
    out = {}
    for i, a in u.items():
        for j, b in v.items():
            for l, c in br[i][j].items():
                out[l] = out.get(l, 0) + a * b * c
    return {l: c for l, c in out.items() if c}


def _check_jacobi(names, br):
    n = len(names)
    for i, j, l in product(range(n), repeat=3):
        if not i < j < l:
            continue
        ei, ej, el = {i: 1}, {j: 1}, {l: 1}
        tot = {}
        for x, y, z in ((ei, ej, el), (ej, el, ei), (el, ei, ej)):
            for m, c in _lie(br, x, _lie(br, y, z)).items():
                tot[m] = tot.get(m, 0) + c
        if any(tot.values()):
            raise SpecError(f"Jacobi identity fails for ({names[i]}, {names[j]}, {names[l]})")


def affine(basis, brackets, B, level=K, *, name="", dual_coxeter=None, involutions=None):
    """Universal affine algebra V^level(g, B).

    ``basis`` lists generator names, ``brackets`` maps name pairs to
    ``{name: coefficient}``, ``B`` is a symmetric matrix (or dict of pairs).
    ``level`` is a Scalar (use ``K`` for the symbolic level).
    """
    basis = list(basis)
    M = _as_matrix(basis, B)
    n = len(basis)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise SpecError("bilinear form must be symmetric")
    br = _bracket_table(basis, brackets)
    _check_jacobi(basis, br)
    level = Scalar.coerce(level)
    table = {}
    for i in range(n):
        for j in range(n):
            row = {}
            if M[i][j]:
                row[1] = level * M[i][j]
            if br[i][j]:
                row[0] = {((l, 0),): c for l, c in br[i][j].items()}
            table[(i, j)] = row
    gens = [GeneratorSymbol(x, 1) for x in basis]
    spec = AlgebraSpec(
        gens,
        table,
        involutions,
        name=name or "V(g)",
        dual_coxeter=dual_coxeter,
        bilinear_form=M,
        symbolic_level=not level.is_constant,
    )
    spec.level = level
    spec.brackets = br
    return spec


SL2_BRACKETS = {("x", "y"): {"h": 1}, ("h", "x"): {"x": 2}, ("h", "y"): {"y": -2}}
SL2_FORM = {("x", "y"): 1, ("h", "h"): 2}


def sl2_affine(level=K):
    """V^k(sl2) in the root basis x, y, h with (x|y) = 1, (h|h) = 2."""
    return affine(["x", "y", "h"], SL2_BRACKETS, SL2_FORM, level, name="sl2", dual_coxeter=2)


def _invert(M):
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise SpecError("matrix is singular")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def sugawara(spec, pairs=None):
    """Sugawara vector 1/(2(k + h∨)) sum_i :X^{ζ_i} X^{ζ^i}:.

    ``pairs`` optionally lists ``(coefficient, a, b)`` quadratic terms
    (e.g. from an orthonormal basis).  By default the dual basis with
    respect to B is used, which needs no square roots.
    """
    if spec.dual_coxeter is None or spec.bilinear_form is None:
        raise SpecError("sugawara needs dual Coxeter number and bilinear form")
    shift = spec.level + spec.dual_coxeter
    if not shift:
        raise SpecError(f"critical level k = -{spec.dual_coxeter}: no Sugawara vector")
    if pairs is None:
        Binv = _invert(spec.bilinear_form)
        pairs = [
            (Binv[i][j], i, j)
            for i in range(spec.rank)
            for j in range(spec.rank)
            if Binv[i][j]
        ]
    total = spec.zero()
    for c, a, b in pairs:
        total = total + wick(spec.gen(a), spec.gen(b)) * c
    return total / (2 * shift)


# ---------------------------------------------------------------------------
# change of generators


def change_basis(spec, new_generators, *, name="", involutions=None):
    """Re-express an affine-type spec in new weight-1 generators.

    ``new_generators`` is a list of ``(name, {old_name: coeff})``.  Table
    entries are recomputed by bilinearity and rewritten in the new basis.
    """
    n = spec.rank
    if len(new_generators) != n:
        raise SpecError("change of basis must keep the number of generators")
    P = [[Fraction(0)] * n for _ in range(n)]  # new_i = sum_j P[i][j] old_j
    for i, (_, combo) in enumerate(new_generators):
        for old, c in combo.items():
            P[i][spec.gen_index(old)] = Fraction(c)
    Pinv = _invert(P)  # old_j = sum_i Pinv[j][i] new_i
    for row in spec.table.values():
        for terms in row.values():
            if any(len(m) > 1 or (m and m[0][1]) for m in terms):
                raise SpecError("change_basis supports linear (affine-type) tables only")
    table = {}
    for i in range(n):
        for j in range(n):
            row = {}
            for a in range(n):
                for b in range(n):
                    c = P[i][a] * P[j][b]
                    if not c:
                        continue
                    for nn, terms in spec.table.get((a, b), {}).items():
                        acc = row.setdefault(nn, {})
                        for m, v in terms.items():
                            if not m:
                                acc[()] = acc.get((), Scalar(0)) + v * c
                            else:
                                old = m[0][0]
                                for t in range(n):
                                    w = Pinv[old][t]
                                    if w:
                                        key = ((t, 0),)
                                        acc[key] = acc.get(key, Scalar(0)) + v * (c * w)
            table[(i, j)] = {nn: {m: v for m, v in t.items() if v} for nn, t in row.items()}
    gens = [GeneratorSymbol(nm, 1) for nm, _ in new_generators]
    B = None
    if spec.bilinear_form is not None:
        M = spec.bilinear_form
        B = [
            [sum(P[i][a] * P[j][b] * M[a][b] for a in range(n) for b in range(n)) for j in range(n)]
            for i in range(n)
        ]
    out = AlgebraSpec(
        gens,
        table,
        involutions,
        name=name,
        dual_coxeter=spec.dual_coxeter,
        bilinear_form=B,
        symbolic_level=spec.symbolic_level,
    )
    out.level = getattr(spec, "level", None)
    out.basis_change = {nm: dict(combo) for nm, combo in new_generators}
    return out


@dataclass(frozen=True)
class RootData:
    """Labels of a root-basis spec: ``positive`` pairs (x_β, y_β), ``cartan`` h_r.

    ``names`` optionally overrides the eigenbasis names as
    ``{"F": [...], "E": [...], "h": [...]}``.
    """

    positive: tuple
    cartan: tuple
    names: dict | None = None

    @property
    def m(self):
        return len(self.positive)

    @property
    def l(self):
        return len(self.cartan)


SL2_ROOT_DATA = RootData(positive=(("x", "y"),), cartan=("h",), names={"F": ["F"], "E": ["G"], "h": ["H"]})


def cartan_eigenbasis(spec, root_data):
    """Eigenbasis of the Cartan involution: E = x + y (odd), F = x - y
    (even), h (odd).  Generator order: F's, then E's, then h's."""
    labels = [x for pair in root_data.positive for x in pair] + list(root_data.cartan)
    if sorted(labels) != sorted(g.name for g in spec.generators) or len(set(labels)) != len(labels):
        raise SpecError("root data must label every generator exactly once")
    m = root_data.m
    names = root_data.names or {
        "F": [f"F{i}" for i in range(1, m + 1)],
        "E": [f"E{i}" for i in range(1, m + 1)],
        "h": [f"h{r}" for r in range(1, root_data.l + 1)],
    }
    new = []
    parity = {}
    for (x, y), nm in zip(root_data.positive, names["F"]):
        new.append((nm, {x: 1, y: -1}))
        parity[nm] = 1
    for (x, y), nm in zip(root_data.positive, names["E"]):
        new.append((nm, {x: 1, y: 1}))
        parity[nm] = -1
    for h, nm in zip(root_data.cartan, names["h"]):
        new.append((nm, {h: 1}))
        parity[nm] = -1
    out = change_basis(spec, new, name=f"{spec.name}-eigen", involutions={"cartan": parity})
    out.root_data = root_data
    out.eigen_names = names
    return out


def sl2_eigenbasis(level=K):
    """V^k(sl2) in the generators F = x - y, G = x + y, H = h."""
    return cartan_eigenbasis(sl2_affine(level), SL2_ROOT_DATA)


# ---------------------------------------------------------------------------
# sl_n from matrix units


def _matrix_unit(n, i, j):
    M = [[Fraction(0)] * n for _ in range(n)]
    M[i][j] = Fraction(1)
    return M


def _mm(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def special_linear(n, level=K):
    """V^k(sl_n) in the matrix-unit root basis with trace form, plus root data.

    Generators ``x{i}{j}`` = E_ij (i<j), ``y{i}{j}`` = E_ji, ``h{r}`` =
    E_rr - E_{r+1,r+1}.  Returns ``(spec, RootData)``.
    """
    mats = {}
    positive = []
    for i in range(n):
        for j in range(i + 1, n):
            mats[f"x{i+1}{j+1}"] = _matrix_unit(n, i, j)
            mats[f"y{i+1}{j+1}"] = _matrix_unit(n, j, i)
            positive.append((f"x{i+1}{j+1}", f"y{i+1}{j+1}"))
    cartan = []
    for r in range(n - 1):
        H = _matrix_unit(n, r, r)
        H[r + 1][r + 1] = Fraction(-1)
        mats[f"h{r+1}"] = H
        cartan.append(f"h{r+1}")
    names = list(mats)
    flat = {nm: [x for row in M for x in row] for nm, M in mats.items()}
    # solve for bracket coordinates by least-squares-free elimination on the flat basis
    basis_cols = [flat[nm] for nm in names]

    def coords(M):
        target = [x for row in M for x in row]
        A = [[basis_cols[c][r] for c in range(len(names))] + [target[r]] for r in range(n * n)]
        ncol = len(names)
        piv = []
        row = 0
        for c in range(ncol):
            p = next((r for r in range(row, len(A)) if A[r][c]), None)
            if p is None:
                continue
            A[row], A[p] = A[p], A[row]
            inv = 1 / A[row][c]
            A[row] = [x * inv for x in A[row]]
            for r in range(len(A)):
                if r != row and A[r][c]:
                    f = A[r][c]
                    A[r] = [x - f * y for x, y in zip(A[r], A[row])]
            piv.append(c)
            row += 1
        return {names[c]: A[i][-1] for i, c in enumerate(piv) if A[i][-1]}

    brackets = {}
    for a in names:
        for b in names:
            if a < b:
                C = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(_mm(mats[a], mats[b]), _mm(mats[b], mats[a]))]
                val = coords(C)
                if val:
                    brackets[(a, b)] = val
    form = {}
    for a in names:
        for b in names:
            t = sum(_mm(mats[a], mats[b])[i][i] for i in range(n))
            if t and (b, a) not in form:
                form[(a, b)] = t
    spec = affine(names, brackets, form, level, name=f"sl{n}", dual_coxeter=n)
    return spec, RootData(tuple(positive), tuple(cartan))


# ---------------------------------------------------------------------------
# Cartan-Killing classification (static metadata)


@dataclass(frozen=True)
class LieRow:
    name: str
    min_n: int | None
    dim: object
    rank: object
    positive_roots: object

    def at(self, n=None):
        f = lambda v: v(n) if callable(v) else v
        return f(self.dim), f(self.rank), f(self.positive_roots)


CLASSIFICATION = (
    LieRow("sl_{n+1}", 1, lambda n: (n + 1) ** 2 - 1, lambda n: n, lambda n: (n * n + n) // 2),
    LieRow("so_{2n+1}", 2, lambda n: 2 * n * (2 * n + 1) // 2, lambda n: n, lambda n: n * n),
    LieRow("sp_{2n}", 3, lambda n: n * (2 * n + 1), lambda n: n, lambda n: n * n),
    LieRow("so_{2n}", 4, lambda n: 2 * n * (2 * n - 1) // 2, lambda n: n, lambda n: n * n - n),
    LieRow("G2", None, 14, 2, 6),
    LieRow("F4", None, 52, 4, 24),
    LieRow("E6", None, 78, 6, 36),
    LieRow("E7", None, 133, 7, 63),
    LieRow("E8", None, 248, 8, 120),
)
