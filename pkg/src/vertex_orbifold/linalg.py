"""Exact sparse elimination over Q(k) and modular rank over F_p.

Vectors are dicts ``row_key -> Scalar``.  :class:`EchelonBasis` reduces
columns one at a time in the order they are added, so the pivot columns are
exactly the columns not in the span of earlier ones.  Dependent columns get
coefficient zero in every solution; this makes the solution unique given the
column order.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .coefficients import ONE, Scalar

DEFAULT_PRIME = 2_147_483_647


def _axpy(v, c, b):
    """v -= c * b (in place, dropping zeros)."""
    for key, x in b.items():
        old = v.get(key)
        if old is None:
            v[key] = -(c * x)
        else:
            s = old - c * x
            if s.num:
                v[key] = s
            else:
                del v[key]


def _pivot_key(item):
    key, x = item
    # prefer constant pivots (no new denominators), then the smallest row key
    return (0 if x.is_constant else 1, len(x.num) + len(x.den), key)


class EchelonBasis:
    """Incremental column echelon form with provenance.

    Each stored vector is a combination of original columns; ``reduce``
    writes a target as a combination of the pivot columns.
    """

    def __init__(self):
        self.pivots = []  # (row_key, vector, combo)
        self.pivot_rows = set()
        self.columns = []  # labels of pivot columns in order
        self.dependent = []  # labels of columns found dependent

    def __len__(self):
        return len(self.pivots)

    def _reduce(self, vec, track):
        v = dict(vec)
        combo = {}
        if not v:
            return v, combo
        for row, b, bc in self.pivots:
            c = v.get(row)
            if c is None:
                continue
            _axpy(v, c, b)
            if track:
                for lab, x in bc.items():
                    old = combo.get(lab)
                    s = c * x if old is None else old + c * x
                    if s.num:
                        combo[lab] = s
                    else:
                        combo.pop(lab, None)
            if not v:
                break
        return v, combo

    def add(self, vec, label):
        """Add a column; returns True if it was independent of earlier ones."""
        v, combo = self._reduce(vec, True)
        if not v:
            self.dependent.append(label)
            return False
        row, piv = min(v.items(), key=_pivot_key)
        inv = piv.inverse()
        v = {key: x * inv for key, x in v.items()}
        # stored vector = inv * (column - sum combo * pivot columns)
        full = {lab: -(x * inv) for lab, x in combo.items()}
        full[label] = inv
        self.pivots.append((row, v, full))
        self.pivot_rows.add(row)
        self.columns.append(label)
        return True

    def solve(self, vec):
        """(coefficients by column label, residual); residual empty iff in span."""
        v, combo = self._reduce(vec, True)
        return combo, v

    def contains(self, vec):
        v, _ = self._reduce(vec, False)
        return not v


def rank_mod_p(rows, p=DEFAULT_PRIME):
    """Rank over F_p of a list of sparse vectors with rational entries.

    Raises ZeroDivisionError if some denominator vanishes mod p.
    """
    keys = sorted({key for r in rows for key in r})
    if not rows or not keys:
        return 0
    col = {key: i for i, key in enumerate(keys)}
    M = np.zeros((len(rows), len(keys)), dtype=np.int64)
    for i, r in enumerate(rows):
        for key, x in r.items():
            M[i, col[key]] = _mod(x, p)
    return _rank_dense(M, p)


def _mod(x, p):
    if isinstance(x, Scalar):
        x = x.to_fraction()
    x = Fraction(x)
    d = x.denominator % p
    if d == 0:
        raise ZeroDivisionError(f"denominator divisible by {p}")
    return (x.numerator % p) * pow(d, -1, p) % p


def _rank_dense(M, p):
    M = M.copy() % p
    nrows, ncols = M.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(M[rank:, c])[0]
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            M[[rank, r]] = M[[r, rank]]
        inv = pow(int(M[rank, c]), -1, p)
        M[rank] = (M[rank] * inv) % p
        others = np.nonzero(M[:, c])[0]
        others = others[others != rank]
        if others.size:
            f = M[others, c].reshape(-1, 1)
            M[others] = (M[others] - (f * M[rank]) % p) % p
        rank += 1
    return rank


def solve_exact(columns, target):
    """Solve target = sum c_j columns[j] with dependent columns set to zero.

    ``columns`` is a list of (label, vector).  Returns (coefficients, residual).
    """
    eb = EchelonBasis()
    for label, vec in columns:
        eb.add(vec, label)
    return eb.solve(target)


def exact_rank(vectors):
    eb = EchelonBasis()
    for i, v in enumerate(vectors):
        eb.add(v, i)
    return len(eb)


__all__ = ["EchelonBasis", "rank_mod_p", "solve_exact", "exact_rank", "DEFAULT_PRIME"]
