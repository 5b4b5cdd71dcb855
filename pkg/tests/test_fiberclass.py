import random
import zlib

import pytest
import sympy
from gmpy2 import mpq

from geocad.exactpoly import Ring
from geocad.fiberclass import INFINITY, InvariantViolation, Region, fiber_classification, fiber_count_oracle
from geocad.groebner import Ideal, saturate

QR = Ring(("a", "b", "c", "d", "x"))
DELTA4 = "256*a^2*d^3 - 128*a*b^2*d^2 + 144*a*b*c^2*d - 27*a*c^4 + 16*b^4*d - 4*b^3*c^2"
DELTA3 = [
    "-9*b*c^3 + 32*b^2*c*d", "3*b*c^2 - 8*b^2*d + 32*a*d^2", "b^2*c + 12*a*c*d",
    "8*b^3*c + 27*a*c^3", "-2*b^3 - 9*a*c^2 + 8*a*b*d",
]


def _ideal(*texts):
    return Ideal(QR, [QR.parse(t) for t in texts])


@pytest.fixture(scope="module")
def quartic_regions():
    return fiber_classification(_ideal("a*x^4 + b*x^2 + c*x + d"), Ideal.zero(QR), QR.one(), 4)


def _find(regions, count, b_contains):
    return [r for r in regions if r.count == count and b_contains in r.b.key()]


def test_quartic_top_stratum(quartic_regions):
    by_count = {r.count: r for r in quartic_regions[:5]}
    base = QR.prefix(4)
    delta4 = Ideal(base, [base.parse(DELTA4)])
    delta3 = Ideal(base, [base.parse(g) for g in DELTA3])
    a = base.parse("a")
    assert by_count[3].a == delta4
    assert by_count[2].a == delta4 + delta3 or by_count[2].a == delta3
    # the count-1 stratum is V(b, c, d) away from V(a)
    assert saturate(by_count[1].a, a) == Ideal(base, [base.parse(v) for v in "bcd"])
    assert by_count[4].a.is_zero()


def test_quartic_lower_strata(quartic_regions):
    base = QR.prefix(4)
    rest = [r for r in quartic_regions[5:] if not r.a.is_unit()]
    summary = [(r.count, r.a, r.b) for r in rest]
    assert (2, Ideal(base, [base.parse("a")]), Ideal(base, [base.parse("b*c^2 - 4*b^2*d")])) in summary
    assert (1, Ideal(base, [base.parse("a"), base.parse("c^2 - 4*b*d")]), Ideal(base, [base.parse("b")])) in summary
    assert (1, Ideal(base, [base.parse("a"), base.parse("b")]), Ideal(base, [base.parse("c")])) in summary
    assert (INFINITY, Ideal(base, [base.parse(v) for v in "abcd"]), Ideal.unit(base)) in summary


def test_unit_ideal_gives_no_regions():
    assert fiber_classification(Ideal.unit(QR), Ideal.zero(QR), QR.one(), 4) == []


def test_empty_system_has_whole_line_fibers():
    R = Ring(("x",))
    (region,) = fiber_classification(Ideal.zero(R), Ideal.zero(R), R.one(), 0)
    assert region.count == INFINITY and region.a.is_zero() and region.b.is_unit()


def test_oracle_examples():
    X = Ring(("x",))
    assert fiber_count_oracle([X.parse("x^4 + 1")], X.one()) == 4
    assert fiber_count_oracle([X.parse("x^4 - x^2")], X.parse("x")) == 2
    assert fiber_count_oracle([X.zero()], X.one()) == INFINITY


def test_region_serialization():
    r = Region(_ideal("a"), Ideal.unit(QR), INFINITY, False)
    assert r.to_dict() == {"a": ["a"], "b": ["1"], "count": "inf", "certified": False}


# corpus: (ring names, parameter count, generators, inequation)
CORPUS = [
    (("a", "b", "c", "d", "x"), 4, ["a*x^4 + b*x^2 + c*x + d"], "1"),
    (("p", "q", "x"), 2, ["x^3 + p*x + q"], "1"),
    (("p", "q", "x"), 2, ["x^3 + p*x + q"], "x - p"),
    (("a", "x"), 1, ["x^2 - a"], "x - 1"),
    (("a", "x"), 1, ["a*x"], "1"),
    (("a", "x"), 1, ["a*x"], "x"),
    (("a", "b", "x", "y"), 2, ["x^2 + y^2 - a", "x - y - b"], "1"),
    (("a", "b", "x", "y"), 2, ["a*x - b", "x*y - 1"], "y - 1"),
]


def _planted_quartic(rng):
    """Parameters of a*(x - r)^2 (x^2 + 2 r x + s): always on the discriminant."""
    r, s, a = (mpq(rng.randint(-3, 3)) for _ in range(3))
    a = a or mpq(1)
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.Integer(int(a)) * (x - int(r)) ** 2 * (x**2 + 2 * int(r) * x + int(s)), x)
    _, _, b, c, d = [mpq(int(v)) for v in poly.all_coeffs()]
    return [a, b, c, d]


def _sample_point(rng, nparams, planted=None):
    if planted is not None and rng.random() < 0.3:
        return planted(rng)
    special = [mpq(v) for v in (-2, -1, 0, 0, 1, 2)]
    return [rng.choice(special) if rng.random() < 0.5 else mpq(rng.randint(-12, 12), rng.randint(1, 5))
            for _ in range(nparams)]


def _sympy_count(system, h, params, unknowns):
    """Independent count of distinct complex solutions with h != 0, via sympy."""
    syms = sympy.symbols(unknowns)
    eqs = [sympy.sympify(str(p).replace("^", "**"), dict(zip(unknowns, syms))) for p in system]
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return INFINITY
    G = sympy.groebner(eqs, *syms, order="grevlex")
    if list(G.exprs) == [1]:
        return 0
    if not G.is_zero_dimensional:
        hval = sympy.sympify(str(h).replace("^", "**"), dict(zip(unknowns, syms)))
        # a positive-dimensional fiber inside V(h) would need more care; none occurs in the corpus
        return INFINITY if hval != 0 else 0
    sols = sympy.solve_poly_system(list(G.exprs), *syms) or []
    hexpr = sympy.sympify(str(h).replace("^", "**"), dict(zip(unknowns, syms)))
    return len({tuple(sympy.nsimplify(v) for v in sol) for sol in sols
                if sympy.simplify(hexpr.subs(dict(zip(syms, sol)))) != 0})


@pytest.mark.parametrize("names, nparams, gens, ineq", CORPUS)
def test_pointwise_soundness_coverage_and_disjointness(names, nparams, gens, ineq):
    R = Ring(names)
    I = Ideal(R, [R.parse(g) for g in gens])
    h = R.parse(ineq)
    regions = fiber_classification(I, Ideal.zero(R), h, nparams)
    params, unknowns = names[:nparams], names[nparams:]
    rng = random.Random(zlib.crc32(repr((names, gens, ineq)).encode()))
    planted = _planted_quartic if names[0] == "a" and nparams == 4 else None
    for _ in range(500):
        pt = _sample_point(rng, nparams, planted)
        where = dict(zip(params, pt))
        system = [g.substitute(where) for g in I.gens]
        hs = h.substitute(where)
        truth = fiber_count_oracle(system, hs, unknowns)
        hits = {r.count for r in regions if r.contains(where)}
        # coverage is promised on the projection of V(I) & D(h) only
        if truth != 0:
            assert hits, f"{where} not covered"
        assert hits <= {truth}, (where, hits, truth)


@pytest.mark.parametrize("names, nparams, gens, ineq", CORPUS[1:])
def test_oracle_agrees_with_sympy(names, nparams, gens, ineq):
    R = Ring(names)
    rng = random.Random(99)
    params, unknowns = names[:nparams], names[nparams:]
    for _ in range(25):
        where = dict(zip(params, _sample_point(rng, nparams)))
        system = [R.parse(g).substitute(where) for g in gens]
        hs = R.parse(ineq).substitute(where)
        assert fiber_count_oracle(system, hs, unknowns) == _sympy_count(system, hs, params, unknowns), where


def test_recursion_never_revisits_a_case():
    # every corpus run completes without the revisit guard firing
    for names, nparams, gens, ineq in CORPUS:
        R = Ring(names)
        try:
            fiber_classification(Ideal(R, [R.parse(g) for g in gens]), Ideal.zero(R), R.parse(ineq), nparams)
        except InvariantViolation as exc:  # pragma: no cover
            pytest.fail(str(exc))
