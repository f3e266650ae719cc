"""Named identity suites: every explicit relation checked by the kernel and,
optionally, re-checked mode by mode in the Fock module."""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

from .algebras import (
    CLASSIFICATION,
    heisenberg,
    heisenberg_virasoro,
    sl2_affine,
    sl2_eigenbasis,
)
from .coefficients import render_rational, scalar_eval
from .fock import Expr, FockModule, oracle_verify
from .genericity import (
    classification_check,
    generator_type,
    large_level_limit,
    orbifold_generators,
    structure_constants,
)
from .kernel import nproduct, wick
from .orbifold import (
    CLOSED_FORM_KINDS,
    GeneratorSet,
    circle_closed_form,
    decouple,
    decoupling_ladder,
    heisenberg_generating_set,
    is_primary,
    omega,
    primary_correct,
    quadratic_coordinates,
    strong_span_check,
)

__all__ = [
    "SuiteConfig",
    "Check",
    "SuiteResult",
    "SUITES",
    "run_suite",
    "words_expr",
    "SL2_EXPECTED_POLES",
    "closed_form_cases",
]

SL2_EXPECTED_POLES = (Fraction(-32, 3), Fraction(0), Fraction(16, 51), Fraction(16, 9))


@dataclass
class SuiteConfig:
    cutoff: int = 6
    k0: Fraction = Fraction(5)
    oracle: bool = True


@dataclass
class Check:
    label: str
    ok: bool
    detail: str = ""
    group: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: list = dc_field(default_factory=list)
    elapsed: float = 0.0
    data: dict = dc_field(default_factory=dict, repr=False)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def lines(self):
        out = []
        for c in self.checks:
            tag = "PASS" if c.ok else "FAIL"
            out.append(f"{tag} {c.label}" + (f": {c.detail}" if c.detail else ""))
        passed = sum(c.ok for c in self.checks)
        out.append(f"{self.name}: {passed}/{len(self.checks)} checks passed")
        return out

    def to_json(self):
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": [{"label": c.label, "ok": c.ok, "detail": c.detail, "group": c.group} for c in self.checks],
        }


def _num(c, k0):
    return c.to_fraction() if c.is_constant else scalar_eval(c, k0)


def words_expr(gs, terms, k0=None):
    """Oracle expression for a combination of generator words.

    Each word is rebuilt as a right-nested Wick product of the generator
    fields, so the Fock module evaluates the products itself.
    """
    out = None
    for word, c in sorted(terms.items()):
        node = None
        for p, t in reversed(word):
            f = Expr.of(gs.fields[p]).derive(t)
            node = f if node is None else f.wick(node)
        if node is None:
            node = Expr("vac")
        term = node * _num(c, k0)
        out = term if out is None else out + term
    return out if out is not None else Expr.of(gs.spec.zero())


class _Runner:
    def __init__(self, name, cfg):
        self.cfg = cfg
        self.result = SuiteResult(name)
        self.group = ""
        self._modules = {}

    def check(self, label, ok, detail=""):
        self.result.checks.append(Check(label, bool(ok), detail, self.group))
        return ok

    def module(self, spec):
        key = id(spec)
        if key not in self._modules:
            k0 = self.cfg.k0 if spec.symbolic_level else None
            self._modules[key] = (spec, FockModule(spec, k0))
        return self._modules[key][1]

    def oracle(self, label, lhs, rhs, spec):
        if not self.cfg.oracle:
            return True
        res = oracle_verify(lhs, rhs, cutoff=self.cfg.cutoff, module=self.module(spec))
        detail = f"{res.checked} mode checks at cutoff {self.cfg.cutoff}"
        if not res.ok:
            detail += f"; witness {res.witness}"
        return self.check(f"oracle: {label}", res.ok, detail)

    def exact(self, label, lhs, rhs, lhs_expr=None, rhs_expr=None):
        ok = lhs == rhs
        detail = str(rhs) if ok else f"got {lhs}, expected {rhs}"
        self.check(label, ok, detail)
        if lhs_expr is not None:
            self.oracle(label, lhs_expr, rhs_expr if rhs_expr is not None else Expr.of(rhs), lhs.spec)
        return ok


def _E(f):
    return Expr.of(f)


# ---------------------------------------------------------------------------
# H(1)


def _suite_heisenberg_n1(run):
    H = heisenberg(1)
    w = lambda a, b: omega(H, 1, 1, a, b)
    run.group = "dn"
    t0 = time.perf_counter()
    lhs = wick(w(0, 0), w(1, 1)) - wick(w(0, 1), w(0, 1))
    elapsed = time.perf_counter() - t0
    rhs = w(0, 4) * Fraction(-5, 4) + w(0, 2).derive(2) * Fraction(7, 4) - w(0, 0).derive(4) * Fraction(7, 24)
    run.exact(
        ":w00 w11: - :w01 w01: = -5/4 w04 + 7/4 d^2 w02 - 7/24 d^4 w00",
        lhs,
        rhs,
        _E(w(0, 0)).wick(w(1, 1)) - _E(w(0, 1)).wick(w(0, 1)),
        _E(w(0, 4)) * Fraction(-5, 4) + _E(w(0, 2)).derive(2) * Fraction(7, 4) - _E(w(0, 0)).derive(4) * Fraction(7, 24),
    )
    run.result.data["dn_seconds"] = elapsed

    run.group = "low-order"
    run.exact("w01 = 1/2 d w00", w(0, 1), w(0, 0).derive() * Fraction(1, 2), _E(w(0, 1)), _E(w(0, 0)).derive() * Fraction(1, 2))
    run.exact(
        "w11 = -w02 + 1/2 d^2 w00",
        w(1, 1),
        -w(0, 2) + w(0, 0).derive(2) * Fraction(1, 2),
        _E(w(1, 1)),
        -_E(w(0, 2)) + _E(w(0, 0)).derive(2) * Fraction(1, 2),
    )

    run.group = "ladder"
    for k in range(1, 5):
        image = nproduct(w(0, 2), w(0, 2 * k), 1)
        coords = quadratic_coordinates(image)
        lead = coords.get((1, 1, 0, 2 * k + 2))
        rest_ok = all(
            key == (1, 1, 0, 2 * k + 2) or (key[2] >= 2 and key[2] % 2 == 0 and key[2] + key[3] == 2 * k + 2)
            for key in coords
        )
        run.check(
            f"w02 o1 w0{2 * k} leading coefficient {8 + 4 * k}",
            lead == 8 + 4 * k,
            f"leading {lead}",
        )
        run.check(
            f"w02 o1 w0{2 * k} remainder in d^2 span{{d^2r w0,{2 * k}-2r}}",
            rest_ok,
            ", ".join(f"{c}*d^{t} w0{cc}" for (_, _, t, cc), c in sorted(coords.items())),
        )
        rhs = None
        for (_, _, t, cc), c in coords.items():
            term = _E(w(0, cc)).derive(t) * c.to_fraction()
            rhs = term if rhs is None else rhs + term
        run.oracle(f"w02 o1 w0{2 * k}", _E(w(0, 2)).circle(w(0, 2 * k), 1), rhs, H)

    run.group = "decouple"
    gens, names = heisenberg_generating_set(H)
    gs = GeneratorSet(gens, names)
    seed = decouple(w(0, 4), gs)
    run.check("w04 decouples over {w00, w02}", seed.success, seed.render_expression())
    run.check("w04 decoupling re-expands to the target", seed.expand() == w(0, 4))
    run.oracle("w04 decoupling", _E(w(0, 4)), words_expr(gs, seed.expression), H)
    ladder = decoupling_ladder(seed, w(0, 2), 2)
    for res in ladder:
        wt = res.target.weight()
        label = f"ladder decoupling at weight {wt}"
        run.check(label, res.success and res.expand() == res.target, f"leading {res.leading}")
        run.oracle(label, _E(res.target), words_expr(gs, res.expression), H)

    run.group = "span"
    _span_rows(run, gs, 10, "{w00, w02}")
    _minimality(run, gs, 8)
    return run


def _span_rows(run, gs, cutoff, label):
    rows = strong_span_check(gs, cutoff)
    run.result.data.setdefault("span", {})[label] = rows
    detail = " ".join(f"{r.weight}:{r.spanned}/{r.ambient}" for r in rows)
    run.check(f"{label} spans up to weight {cutoff}", all(r.full for r in rows), detail)


def _minimality(run, gs, cutoff):
    for drop in range(len(gs)):
        keep = [p for p in range(len(gs)) if p != drop]
        sub = GeneratorSet([gs.fields[p] for p in keep], [gs.names[p] for p in keep])
        found = None
        for wt in range(1, cutoff + 1):
            row = strong_span_check(sub, wt, start=wt, witness=True)[0]
            if not row.full:
                found = row
                break
        detail = f"no deficiency up to weight {cutoff}"
        if found is None:
            res = decouple(gs.fields[drop], sub)
            if res.success:
                detail += f"; {gs.names[drop]} = {res.render_expression()}"
        else:
            wit = found.witness
            detail = f"weight {found.weight}: {found.spanned}/{found.ambient}"
            if wit is not None:
                detail += f", missing {gs.spec.monomial(list(wit))}"
        run.check(f"dropping {gs.names[drop]} leaves a deficiency", found is not None, detail)


# ---------------------------------------------------------------------------
# H(2)


def _suite_heisenberg_n2(run):
    H = heisenberg(2)
    w = lambda i, j, a, b: omega(H, i, j, a, b)
    run.group = "cubic"
    lhs = wick(w(1, 2, 0, 0), w(2, 2, 0, 1)) - wick(w(1, 2, 0, 1), w(2, 2, 0, 0))
    coeffs = (Fraction(-1, 2), Fraction(2), Fraction(-5, 2), Fraction(1))
    rhs = H.zero()
    rhs_e = None
    for t, c in enumerate(coeffs):
        rhs = rhs + w(1, 2, 0, 3 - t).derive(t) * c
        term = _E(w(1, 2, 0, 3 - t)).derive(t) * c
        rhs_e = term if rhs_e is None else rhs_e + term
    run.exact(
        ":w12_00 w22_01: - :w12_01 w22_00: = -1/2 w12_03 + 2 d w12_02 - 5/2 d^2 w12_01 + d^3 w12_00",
        lhs,
        rhs,
        _E(w(1, 2, 0, 0)).wick(w(2, 2, 0, 1)) - _E(w(1, 2, 0, 1)).wick(w(2, 2, 0, 0)),
        rhs_e,
    )
    run.group = "raising"
    for k in range(5):
        run.exact(
            f"w22_01 o1 w12_0{k} = -w12_0{k + 1}",
            nproduct(w(2, 2, 0, 1), w(1, 2, 0, k), 1),
            -w(1, 2, 0, k + 1),
            _E(w(2, 2, 0, 1)).circle(w(1, 2, 0, k), 1),
            -_E(w(1, 2, 0, k + 1)),
        )
    run.group = "square"
    _square_relation(run, H, 2)
    run.group = "decouple"
    gens, names = heisenberg_generating_set(H)
    gs = GeneratorSet(gens, names)
    for target, label in ((w(1, 2, 0, 3), "w12_03"), (w(2, 2, 0, 2), "w22_02")):
        res = decouple(target, gs)
        run.check(f"{label} decouples", res.success and res.expand() == target, res.render_expression())
        run.oracle(f"{label} decoupling", _E(target), words_expr(gs, res.expression), H)
    run.group = "span"
    _span_rows(run, gs, 8, "H(2) set with w11_02")
    alt, alt_names = heisenberg_generating_set(H, "w22")
    _span_rows(run, GeneratorSet(alt, alt_names), 8, "H(2) set with w22_02")
    _minimality(run, gs, 8)
    return run


def _square_relation(run, H, j):
    w = lambda i, jj, a, b: omega(H, i, jj, a, b)
    run.exact(
        f":w1{j}_00 w1{j}_00: = 1/2 w11_02 + 1/2 w{j}{j}_02 + :w11_00 w{j}{j}_00:",
        wick(w(1, j, 0, 0), w(1, j, 0, 0)),
        w(1, 1, 0, 2) * Fraction(1, 2) + w(j, j, 0, 2) * Fraction(1, 2) + wick(w(1, 1, 0, 0), w(j, j, 0, 0)),
        _E(w(1, j, 0, 0)).wick(w(1, j, 0, 0)),
        _E(w(1, 1, 0, 2)) * Fraction(1, 2) + _E(w(j, j, 0, 2)) * Fraction(1, 2) + _E(w(1, 1, 0, 0)).wick(w(j, j, 0, 0)),
    )


# ---------------------------------------------------------------------------
# H(3)


def _suite_heisenberg_n3(run):
    H = heisenberg(3)
    w = lambda i, j, a, b: omega(H, i, j, a, b)
    run.group = "three-copy"
    for i, j, k in ((1, 2, 3),):
        lhs = wick(w(i, j, 0, 0), w(j, k, 0, 0)) - wick(w(i, k, 0, 0), w(j, j, 0, 0))
        rhs = w(i, k, 0, 2) * Fraction(1, 2) - w(i, k, 0, 1).derive() + w(i, k, 0, 0).derive(2) * Fraction(1, 2)
        run.exact(
            f":w{i}{j}_00 w{j}{k}_00: - :w{i}{k}_00 w{j}{j}_00: = 1/2 w{i}{k}_02 - d w{i}{k}_01 + 1/2 d^2 w{i}{k}_00",
            lhs,
            rhs,
            _E(w(i, j, 0, 0)).wick(w(j, k, 0, 0)) - _E(w(i, k, 0, 0)).wick(w(j, j, 0, 0)),
            _E(w(i, k, 0, 2)) * Fraction(1, 2) - _E(w(i, k, 0, 1)).derive() + _E(w(i, k, 0, 0)).derive(2) * Fraction(1, 2),
        )
    run.group = "square"
    for j in (2, 3):
        _square_relation(run, H, j)
    run.group = "span"
    gens, names = heisenberg_generating_set(H)
    gs = GeneratorSet(gens, names)
    _span_rows(run, gs, 8, "H(3) set")
    _minimality(run, gs, 8)
    return run


# ---------------------------------------------------------------------------
# primary fields in H(3)


def _suite_primary(run):
    H = heisenberg(3)
    L = heisenberg_virasoro(H)
    w = lambda i, j, a, b: omega(H, i, j, a, b)
    half = Fraction(1, 2)
    cases = []
    for k in (2, 3):
        cases.append((f"C^{k} = 1/2 (w11_00 - w{k}{k}_00)", (w(1, 1, 0, 0) - w(k, k, 0, 0)) * half, 2))
    for i in (1, 2, 3):
        c = w(i, i, 0, 2) - wick(w(i, i, 0, 0), w(i, i, 0, 0)) * Fraction(2, 9) - w(i, i, 0, 0).derive(2) * Fraction(1, 6)
        cases.append((f"C^{i}{i}_02", c, 4))
    for i, j in ((1, 2), (1, 3), (2, 3)):
        cases.append((f"C^{i}{j}_00", w(i, j, 0, 0), 2))
        cases.append((f"C^{i}{j}_01", w(i, j, 0, 1) - w(i, j, 0, 0).derive() * half, 3))
        c = (
            w(i, j, 0, 2)
            - wick(w(i, j, 0, 0), w(j, j, 0, 0)) * Fraction(4, 9)
            + w(i, j, 0, 0).derive(2) * Fraction(5, 9)
            - w(i, j, 0, 1).derive() * Fraction(13, 9)
        )
        cases.append((f"C^{i}{j}_02", c, 4))
    run.group = "primary"
    for label, C, wt in cases:
        ok = is_primary(L, C, wt)
        run.check(f"{label} is primary of weight {wt}", ok)
        if run.cfg.oracle:
            for m in range(1, wt + 2):
                rhs = _E(C) * wt if m == 1 else _E(H.zero())
                run.oracle(f"L o{m} {label}", _E(L).circle(C, m), rhs, H)
    run.group = "solver"
    i, j = 1, 2
    solved = [
        ("C^12_01", w(i, j, 0, 1), [w(i, j, 0, 0)], ["w12_00"]),
        ("C^11_02", w(i, i, 0, 2), [w(i, i, 0, 0)], ["w11_00"]),
        ("C^12_02", w(i, j, 0, 2), [w(i, j, 0, 0), w(j, j, 0, 0), w(i, j, 0, 1)], ["w12_00", "w22_00", "w12_01"]),
    ]
    for label, f, lower, names in solved:
        res = primary_correct(f, L, lower, names)
        run.check(f"solver correction for {label}", res.success and is_primary(L, res.corrected), res.render_correction())
    return run


# ---------------------------------------------------------------------------
# closed forms


def closed_form_cases(n=3, top=2):
    """(kind, indices, a, b, c, d, m) for all index choices in H(n) and orders <= top."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    singles = [(i,) for i in range(1, n + 1)]
    triples = [(i, j, k) for i in range(1, n + 1) for j in range(1, n + 1) for k in range(1, n + 1) if len({i, j, k}) == 3]
    index_sets = {
        "ij*di": pairs,
        "ij*dj": pairs,
        "ii*di": singles,
        "ij.ij": pairs,
        "ij.jk": triples,
        "ii.ij": pairs,
        "jj.ij": pairs,
        "ii.ii": singles,
    }
    for kind in CLOSED_FORM_KINDS:
        linear = kind.startswith(("ij*", "ii*"))
        for ind in index_sets[kind]:
            for a, b, c, d in product(range(top + 1), repeat=4):
                if linear and d:
                    continue
                for m in range(a + b + c + 2):
                    yield kind, ind, a, b, c, d, m


def closed_form_lhs(H, kind, ind, a, b, c, d):
    """(left, right) fields whose circle product the closed form describes."""
    w = lambda i, j, x, y: omega(H, i, j, x, y)
    if kind == "ij*di":
        return w(ind[0], ind[1], a, b), H.gen(ind[0] - 1, c)
    if kind == "ij*dj":
        return w(ind[0], ind[1], a, b), H.gen(ind[1] - 1, c)
    if kind == "ii*di":
        return w(ind[0], ind[0], a, b), H.gen(ind[0] - 1, c)
    if kind == "ij.ij":
        return w(*ind, a, b), w(*ind, c, d)
    if kind == "ij.jk":
        i, j, k = ind
        return w(i, j, a, b), w(j, k, c, d)
    if kind == "ii.ij":
        i, j = ind
        return w(i, i, a, b), w(i, j, c, d)
    if kind == "jj.ij":
        i, j = ind
        return w(j, j, a, b), w(i, j, c, d)
    (i,) = ind
    return w(i, i, a, b), w(i, i, c, d)


def _suite_closed_forms(run):
    H = heisenberg(3)
    run.group = "closed-forms"
    t0 = time.perf_counter()
    total, bad, first = 0, 0, None
    cases = list(closed_form_cases())
    for kind, ind, a, b, c, d, m in cases:
        x, y = closed_form_lhs(H, kind, ind, a, b, c, d)
        lhs = nproduct(x, y, m)
        rhs = circle_closed_form(H, kind, ind, a, b, c, m, d)
        total += 1
        if lhs != rhs:
            bad += 1
            first = first or (kind, ind, a, b, c, d, m, str(lhs), str(rhs))
    elapsed = time.perf_counter() - t0
    run.result.data["closed_form_seconds"] = elapsed
    detail = f"{total} comparisons, {bad} discrepancies"
    if first:
        detail += f"; first {first}"
    run.check("kernel n-products equal the closed forms", bad == 0, detail)
    if run.cfg.oracle:
        M = run.module(H)
        obad, ofirst = 0, None
        for kind, ind, a, b, c, d, m in cases:
            x, y = closed_form_lhs(H, kind, ind, a, b, c, d)
            rhs = circle_closed_form(H, kind, ind, a, b, c, m, d)
            res = oracle_verify(_E(x).circle(y, m), _E(rhs), cutoff=run.cfg.cutoff, module=M)
            if not res.ok:
                obad += 1
                ofirst = ofirst or (kind, ind, a, b, c, d, m, res.witness)
        run.check(
            "oracle: closed forms",
            obad == 0,
            f"{len(cases)} identities at cutoff {run.cfg.cutoff}, {obad} failures" + (f"; first {ofirst}" if ofirst else ""),
        )
    return run


# ---------------------------------------------------------------------------
# sl2


def _suite_sl2_poles(run):
    E = sl2_eigenbasis()
    gs = orbifold_generators(E)
    run.group = "generators"
    weights = tuple(gs.weights)
    run.check("generator weights (1, 2, 2, 2, 3, 4, 4)", weights == (1, 2, 2, 2, 3, 4, 4), " ".join(gs.names))
    run.check(
        "generators are invariant",
        all(_invariant(f) for f in gs.fields),
    )
    run.group = "structure"
    t0 = time.perf_counter()
    report = structure_constants(gs)
    run.result.data["report"] = report
    run.result.data["pole_seconds"] = time.perf_counter() - t0
    run.check(
        "every product decomposes into generator words",
        not report.failures,
        f"{len(report.entries)} products" + (f"; failed {report.failures}" if report.failures else ""),
    )
    run.check("no irreducible residual factors", not report.residual_factors, ", ".join(map(str, report.residual_factors)))
    got = "{" + ", ".join(render_rational(p) for p in report.poles) + "}"
    want = "{" + ", ".join(render_rational(p) for p in sorted(SL2_EXPECTED_POLES)) + "}"
    sources = "; ".join(
        f"{render_rational(p)} from " + ", ".join(f"{a} o{n} {b}" for a, b, n in report.pole_sources[p][:3])
        for p in report.poles
    )
    run.check(f"pole set equals {want}", tuple(report.poles) == tuple(sorted(SL2_EXPECTED_POLES)), f"computed {got}; {sources}")
    if run.cfg.oracle:
        M = run.module(E)
        idx = {nm: p for p, nm in enumerate(gs.names)}
        bad, first = 0, None
        for (a, b, n), terms in report.entries.items():
            lhs = _E(gs.fields[idx[a]]).circle(gs.fields[idx[b]], n)
            res = oracle_verify(lhs, words_expr(gs, terms, run.cfg.k0), cutoff=run.cfg.cutoff, module=M)
            if not res.ok:
                bad += 1
                first = first or (a, b, n, res.witness)
        run.check(
            f"oracle: structure constants at k0 = {run.cfg.k0}",
            bad == 0,
            f"{len(report.entries)} products at cutoff {run.cfg.cutoff}, {bad} failures" + (f"; first {first}" if first else ""),
        )
    return run


def _invariant(f):
    from .orbifold import is_invariant

    return is_invariant(f)


# ---------------------------------------------------------------------------
# large level and generator counts


def _suite_large_level(run):
    run.group = "limit"
    for label, spec in (("sl2 root basis", sl2_affine()), ("sl2 eigenbasis", sl2_eigenbasis())):
        rep = large_level_limit(spec)
        run.check(
            f"{label}: rescaled OPE has the Heisenberg Gram limit",
            rep.matches_gram,
            f"{rep.checked} coefficients, Gram {[[str(x) for x in row] for row in rep.limit.bilinear_form]}",
        )
        zero_ok = all(nn != 0 for (_, _, nn) in rep.entries)
        run.check(f"{label}: every o0 coefficient vanishes at infinity", zero_ok)
    run.group = "counts"
    rows = classification_check()
    bad = [r for r in rows if not r[-1]]
    run.check(
        "generator counts match the type formula on every classification row",
        not bad,
        f"{len(rows)} rows over {len(CLASSIFICATION)} families" + (f"; mismatches {bad}" if bad else ""),
    )
    for label, (m, l), want in (
        ("sl2", (1, 1), {1: 1, 2: 3, 3: 1, 4: 2}),
        ("sl3", (3, 2), {1: 3, 2: 15, 3: 10, 4: 1}),
        ("so5", (4, 2), {1: 4, 2: 21, 3: 15, 4: 1}),
    ):
        got = generator_type(m, l)
        run.check(f"{label} generator type {want}", got == want, str(got))
    return run


SUITES = {
    "heisenberg-n1-dn": _suite_heisenberg_n1,
    "heisenberg-n2": _suite_heisenberg_n2,
    "heisenberg-n3": _suite_heisenberg_n3,
    "primary-eq10": _suite_primary,
    "closed-forms": _suite_closed_forms,
    "sl2-poles": _suite_sl2_poles,
    "large-level": _suite_large_level,
}


def run_suite(name, cfg=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    run = _Runner(name, cfg)
    t0 = time.perf_counter()
    SUITES[name](run)
    run.result.elapsed = time.perf_counter() - t0
    return run.result
