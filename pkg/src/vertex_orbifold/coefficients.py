"""Exact arithmetic in the rational-function field Q(k).

A :class:`Scalar` is a reduced ratio of two integer polynomials in the level
symbol ``k``.  Polynomials are stored as tuples of Python ints, lowest degree
first, with no trailing zeros (the zero polynomial is ``()``).

Canonical form: numerator and denominator are coprime over Q, the combined
integer content of the pair is 1 and the denominator has a positive leading
coefficient.  Equality and hashing are therefore structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

Poly = tuple

__all__ = [
    "Scalar",
    "ScalarError",
    "scalar_arith",
    "scalar_eval",
    "scalar_poles",
    "K",
    "ONE",
    "ZERO",
]


class ScalarError(ArithmeticError):
    """Division by zero or evaluation at a pole."""


# ---------------------------------------------------------------------------
# integer polynomial helpers


def _trim(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _psub(a, b):
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return tuple(c * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _pscale(p, c):
    if c == 1:
        return p
    return tuple(c * x for x in p)


def _content(p):
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _pexquo_int(p, c):
    return tuple(x // c for x in p)


def _prem(a, b):
    """Pseudo-remainder of a by b (b nonzero)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r = list(_trim(r))
    return tuple(r)


def _primitive(p):
    if not p:
        return p
    c = _content(p)
    if p[-1] < 0:
        c = -c
    return p if c == 1 else _pexquo_int(p, c)


def _pgcd(a, b):
    """Primitive gcd over Z[k] with positive leading coefficient."""
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    if len(a) == 1 or len(b) == 1:
        return (1,)
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
        if len(b) == 1:
            return (1,)
    return _primitive(a)


def _pexquo(a, b):
    """Exact quotient a / b in Z[k]; raises if inexact."""
    if len(b) == 1:
        c = b[0]
        if c == 1:
            return a
        q = tuple(x // c for x in a)
        if any(x % c for x in a):
            raise ArithmeticError("inexact polynomial division")
        return q
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * max(len(a) - db, 0)
    while len(r) - 1 >= db and r:
        lr = r[-1]
        if lr % lb:
            raise ArithmeticError("inexact polynomial division")
        c = lr // lb
        shift = len(r) - 1 - db
        q[shift] = c
        for i, x in enumerate(b):
            r[i + shift] -= c * x
        r = list(_trim(r))
    if r:
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _pdiv_rational(p, root):
    """Divide the integer polynomial p by (q*k - r) where root = r/q."""
    r, q = root.numerator, root.denominator
    # synthetic division over Q, then clear back to integers
    coeffs = [Fraction(c) for c in reversed(p)]
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    quotient = list(reversed(out))
    # p = (k - root) * quotient = (q*k - r) * quotient / q
    scaled = [c / q for c in quotient]
    den = 1
    for c in scaled:
        den = den * c.denominator // gcd(den, c.denominator)
    return tuple(int(c * den) for c in scaled)


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------


def _normalize(num, den):
    if not den:
        raise ScalarError("division by zero scalar")
    if not num:
        return (), (1,)
    if len(den) > 1:
        g = _pgcd(num, den)
        if g != (1,):
            num = _pexquo(num, g)
            den = _pexquo(den, g)
    c = gcd(_content(num), _content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = _pexquo_int(num, c)
        den = _pexquo_int(den, c)
    return num, den


class Scalar:
    """Element of Q(k) in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if isinstance(num, Scalar) and den == 1:
            self.num, self.den = num.num, num.den
        else:
            n, d = _as_pair(num, den)
            self.num, self.den = _normalize(n, d)
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    @classmethod
    def from_polys(cls, num, den=(1,)):
        """Build from integer coefficient sequences (lowest degree first)."""
        n, d = _normalize(_trim(tuple(int(c) for c in num)), _trim(tuple(int(c) for c in den)))
        return cls._raw(n, d)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return _int_scalar(x)
        if isinstance(x, Fraction):
            return cls._raw(*_normalize((x.numerator,) if x else (), (x.denominator,)))
        if isinstance(x, Rational):
            return cls.coerce(Fraction(x.numerator, x.denominator))
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    # -- predicates -------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    @property
    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    @property
    def is_polynomial(self):
        return len(self.den) == 1

    def to_fraction(self):
        if not self.is_constant:
            raise ValueError(f"{self} depends on k")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    def degree(self):
        """Degree at infinity: deg(num) - deg(den); None for zero."""
        if not self.num:
            return None
        return len(self.num) - len(self.den)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        da, db = self.den, other.den
        if len(da) == 1 and len(db) == 1:
            a, b = da[0], db[0]
            if a == b:
                num = _padd(self.num, other.num)
                den = a
            else:
                g = gcd(a, b)
                num = _padd(_pscale(self.num, b // g), _pscale(other.num, a // g))
                den = a // g * b
            if not num:
                return ZERO
            c = gcd(_content(num), den)
            if c != 1:
                return Scalar._raw(_pexquo_int(num, c), (den // c,))
            return Scalar._raw(num, (den,))
        if da == db:
            return Scalar._raw(*_normalize(_padd(self.num, other.num), da))
        return Scalar._raw(
            *_normalize(_padd(_pmul(self.num, db), _pmul(other.num, da)), _pmul(da, db))
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        if not self.num or not other.num:
            return ZERO
        da, db = self.den, other.den
        if len(da) == 1 and len(db) == 1:
            num = _pmul(self.num, other.num)
            den = da[0] * db[0]
            if den == 1:
                return Scalar._raw(num, (1,))
            c = gcd(_content(num), den)
            if c != 1:
                return Scalar._raw(_pexquo_int(num, c), (den // c,))
            return Scalar._raw(num, (den,))
        return Scalar._raw(*_normalize(_pmul(self.num, other.num), _pmul(da, db)))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ScalarError("division by zero scalar")
        return Scalar._raw(*_normalize(self.den, self.num))

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out = ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_constant:
                h = hash(self.to_fraction())
            else:
                h = hash((self.num, self.den))
            self._hash = h
        return h

    # -- evaluation ---------------------------------------------------------

    def __call__(self, k0):
        return scalar_eval(self, k0)

    def __str__(self):
        return render_scalar(self)

    def __repr__(self):
        return f"Scalar({render_scalar(self)!r})"


def _as_pair(num, den):
    def one(x):
        if isinstance(x, Scalar):
            return x.num, x.den
        if isinstance(x, int):
            return ((x,) if x else ()), (1,)
        if isinstance(x, Fraction):
            return ((x.numerator,) if x else ()), (x.denominator,)
        if isinstance(x, (tuple, list)):
            return _trim(tuple(int(c) for c in x)), (1,)
        if isinstance(x, Rational):
            return one(Fraction(x.numerator, x.denominator))
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    n1, d1 = one(num)
    n2, d2 = one(den)
    if not n2:
        raise ScalarError("division by zero scalar")
    return _pmul(n1, d2), _pmul(d1, n2)


@lru_cache(maxsize=4096)
def _int_scalar(n):
    return Scalar._raw((n,) if n else (), (1,))


ZERO = Scalar._raw((), (1,))
ONE = Scalar._raw((1,), (1,))
K = Scalar._raw((0, 1), (1,))


# ---------------------------------------------------------------------------
# rendering


def _render_poly(p):
    terms = []
    for e, c in enumerate(p):
        if not c:
            continue
        if e == 0:
            body = str(abs(c))
        else:
            mono = "k" if e == 1 else f"k^{e}"
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        terms.append((c < 0, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] else "") + terms[0][1]
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _single_term(p):
    return sum(1 for c in p if c) == 1


def render_scalar(s):
    """Canonical text, e.g. ``(16 - 51*k)/(9*k)`` or ``-5/4``."""
    num = _render_poly(s.num)
    if s.den == (1,):
        return num
    den = _render_poly(s.den)
    if not _single_term(s.num):
        num = f"({num})"
    if not (len(s.den) == 1 or (_single_term(s.den) and s.den[-1] == 1)):
        den = f"({den})"
    return f"{num}/{den}"


# ---------------------------------------------------------------------------
# the module-level operations


def scalar_arith(op, a, b):
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two scalars."""
    a, b = Scalar.coerce(a), Scalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown scalar operation {op!r}")


def scalar_eval(f, k0):
    """Exact value of f at the rational point k0."""
    f = Scalar.coerce(f)
    k0 = Fraction(k0)
    d = _peval(f.den, k0)
    if d == 0:
        raise ScalarError(f"{f} has a pole at k = {k0}")
    return _peval(f.num, k0) / d


def _divisors(n):
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p):
    """Distinct rational roots of an integer polynomial together with the
    leftover factor (integer polynomial with no rational root)."""
    p = _primitive(_trim(tuple(p)))
    roots = []
    if not p:
        raise ValueError("zero polynomial has every root")
    while len(p) > 1 and p[0] == 0:
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
        p = p[1:]
    changed = True
    while changed and len(p) > 1:
        changed = False
        for q in _divisors(p[-1]):
            for r in _divisors(p[0]):
                for cand in (Fraction(r, q), Fraction(-r, q)):
                    if _peval(p, cand) == 0:
                        if cand not in roots:
                            roots.append(cand)
                        while len(p) > 1 and _peval(p, cand) == 0:
                            p = _primitive(_pdiv_rational(p, cand))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return sorted(roots), _primitive(p)


def _squarefree_parts(p):
    """Split a primitive polynomial into its distinct squarefree factors."""
    out = []
    while len(p) > 1:
        dp = _trim(tuple(i * c for i, c in enumerate(p))[1:])
        g = _pgcd(p, dp)
        out.append(_primitive(_pexquo(p, g)) if g != (1,) else p)
        p = g
    return out


def _irreducible_factors(p):
    # only reached for denominators without rational roots; delegate to sympy
    import sympy

    k = sympy.Symbol("k")
    expr = sum(c * k**e for e, c in enumerate(p))
    _, factors = sympy.factor_list(expr, k)
    out = []
    for fac, _mult in factors:
        coeffs = sympy.Poly(fac, k).all_coeffs()[::-1]
        out.append(_primitive(tuple(int(c) for c in coeffs)))
    return out


def scalar_poles(f):
    """Poles of f: (sorted rational roots of the denominator, residual
    irreducible factors of degree >= 2 as Scalars)."""
    f = Scalar.coerce(f)
    if len(f.den) <= 1:
        return [], []
    roots, rest = rational_roots(f.den)
    residual = []
    if len(rest) > 1:
        seen = set()
        for part in _squarefree_parts(rest):
            for fac in _irreducible_factors(part):
                if fac not in seen:
                    seen.add(fac)
                    residual.append(Scalar._raw(fac, (1,)))
    return roots, residual


def render_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
