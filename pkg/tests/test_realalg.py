import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from geocad.exactpoly import Ordering, Ring
from geocad.realalg import (
    IdenticallyZero,
    RealAlgebraicNumber,
    RefinementBudgetExceeded,
    compare,
    isolate_roots,
    partition1d,
    refinement_budget,
    roots_at_sample,
    sign_at,
    sign_at_point,
    sturm_count,
)

X = Ring(("x",))
YX = Ring(("y", "x"))
PQX = Ring(("p", "q", "x"))
SQRT2 = RealAlgebraicNumber(X.parse("x^2 - 2"), 1, 2)
SX = sympy.Symbol("x")


def _sym(p):
    return sympy.Poly(sympy.sympify(str(p).replace("^", "**")), SX, domain="QQ")


def _random_univariate(rng: random.Random):
    deg = rng.randint(1, 8)
    # products of small factors give repeated and clustered roots
    if rng.random() < 0.4:
        f = X.one()
        for _ in range(rng.randint(1, 4)):
            f = f * X.parse(f"{rng.randint(1, 4)}*x - {rng.randint(-6, 6)}")
        return f
    cs = [rng.randint(-9, 9) for _ in range(deg + 1)]
    cs[-1] = cs[-1] or 1
    return X.parse(" + ".join(f"({c})*x^{k}" for k, c in enumerate(cs)))


def _increasing(nums):
    return all(compare(a, b) is Ordering.LESS for a, b in zip(nums, nums[1:]))


# ------------------------------------------------------------ examples


def test_isolate_examples():
    r1, r2 = isolate_roots(X.parse("9*x^2 - 4*x - 4"))
    for r, s in ((r1, -1), (r2, 1)):
        assert abs(float(r) - (2 + s * 2 * 10**0.5) / 9) < 1e-12
    assert isolate_roots(X.parse("104*x^2 + 44*x + 5")) == []
    (z,) = isolate_roots(X.parse("x^3"))
    assert z.is_rational and z.value == 0


def test_sign_examples():
    assert sign_at(X.parse("x"), RealAlgebraicNumber.rational(0)) == 0
    assert sign_at(X.parse("x^2 - 2"), SQRT2) == 0
    assert sign_at(X.parse("x^3 - 3"), SQRT2) == -1


def test_compare_examples():
    assert compare(SQRT2, RealAlgebraicNumber.rational(mpq(3, 2))) is Ordering.LESS
    other = RealAlgebraicNumber(X.parse("x^4 - 4"), 1, 2)
    assert compare(SQRT2, other) is Ordering.EQUAL
    assert compare(SQRT2, SQRT2) is Ordering.EQUAL
    assert SQRT2 == other and hash(SQRT2) == hash(other)


def test_roots_at_sample_examples():
    plus, minus = RealAlgebraicNumber(X.parse("x^2 - 2"), 1, 2), RealAlgebraicNumber(X.parse("x^2 - 2"), -2, -1)
    got = roots_at_sample(YX.parse("x^2 - y"), [RealAlgebraicNumber.rational(2)])
    assert got == [minus, plus]
    got = roots_at_sample(PQX.parse("x^3 + p*x + q"), [RealAlgebraicNumber.rational(-1), RealAlgebraicNumber.rational(0)])
    assert [r.value for r in got] == [-1, 0, 1]
    got = roots_at_sample(YX.parse("x^2 - y"), [SQRT2])
    assert [str(r.defining_polynomial()) for r in got] == ["x^4 - 2", "x^4 - 2"]
    assert got[0] < 0 < got[1]


def test_identically_zero_specialization_is_reported():
    with pytest.raises(IdenticallyZero):
        roots_at_sample(YX.parse("x*y - x"), [RealAlgebraicNumber.rational(1)])
    with pytest.raises(IdenticallyZero):
        roots_at_sample(YX.parse("(y^2 - 2)*x"), [SQRT2])


def test_partition_examples():
    cells = partition1d([X.parse("x"), X.parse("9 - 3*x + 4*x^2")])
    assert [c.kind for c in cells] == ["interval", "point", "interval"]
    assert cells[1].sample.value == 0
    assert [c.sample.value for c in cells] == [-1, 0, 1]
    cells = partition1d([X.parse("9*x^2 - 4*x - 4"), X.parse("104*x^2 + 44*x + 5")])
    assert [c.kind for c in cells] == ["interval", "point", "interval", "point", "interval"]
    (whole,) = partition1d([])
    assert whole.lower is None and whole.upper is None


def test_serialization_round_trip():
    data = SQRT2.to_dict()
    assert set(data) == {"defining", "lo", "hi"}
    assert RealAlgebraicNumber.from_dict(data) == SQRT2


def test_construction_rejects_bad_interval():
    with pytest.raises(ValueError):
        RealAlgebraicNumber(X.parse("x^2 - 2"), 2, 3)
    with pytest.raises(ValueError):
        RealAlgebraicNumber(X.parse("x^2 - 2"), -2, 2)


def test_budget_exhaustion_is_reported():
    close = RealAlgebraicNumber(X.parse("x^2 - 2"), 1, 2)
    q = X.parse("10^20*x - 141421356237309504881")
    with refinement_budget(3), pytest.raises(RefinementBudgetExceeded):
        sign_at(q, close)
    assert sign_at(q, RealAlgebraicNumber(X.parse("x^2 - 2"), 1, 2)) == -1


# ---------------------------------------------------------- properties


def test_sturm_agreement_on_random_polynomials():
    rng = random.Random(11)
    for _ in range(500):
        f = _random_univariate(rng)
        roots = isolate_roots(f)
        assert len(roots) == sturm_count(f) == _sym(f).count_roots()
        assert _increasing(roots)
        for a, b in zip(roots, roots[1:]):
            assert a.interval[1] <= b.interval[0]


def _hp_sign(q, alpha):
    """Sign of q at alpha via a 10^-30 enclosure and 60-digit sympy evaluation."""
    alpha.refine_below(mpq(1, 10**30))
    mid = (alpha.interval[0] + alpha.interval[1]) / 2
    val = _sym(q).eval(sympy.Rational(str(mid)))
    val = sympy.N(val, 60)
    return 0 if abs(val) < sympy.Rational(1, 10**20) else (1 if val > 0 else -1)


def test_sign_soundness_against_high_precision():
    rng = random.Random(12)
    checked = 0
    while checked < 150:
        roots = isolate_roots(_random_univariate(rng))
        if not roots:
            continue
        alpha = rng.choice(roots)
        q = _random_univariate(rng)
        if rng.random() < 0.2:
            q = q * alpha.defining_polynomial()
        expected = _hp_sign(q, RealAlgebraicNumber(alpha.defining_polynomial(), *alpha.interval))
        assert sign_at(q, alpha) == expected
        checked += 1


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=2, max_size=2),
       st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_roots_at_rational_sample_match_substitution(sample, cs):
    p, q = (mpq(s.numerator, s.denominator) for s in sample)
    f = PQX.parse(f"({cs[0]})*x^3 + ({cs[1]})*p*x^2 + ({cs[2]})*x*q + ({cs[3]})*p*q + ({cs[4]}) + x")
    spec = f.substitute({"p": p, "q": q})
    point = [RealAlgebraicNumber.rational(p), RealAlgebraicNumber.rational(q)]
    if spec.is_zero():
        with pytest.raises(IdenticallyZero):
            roots_at_sample(f, point)
        return
    got = roots_at_sample(f, point)
    assert got == isolate_roots(spec)
    assert _increasing(got)


def test_roots_at_algebraic_sample_are_roots():
    rng = random.Random(13)
    for _ in range(40):
        base = isolate_roots(_random_univariate(rng))
        if not base:
            continue
        alpha = rng.choice(base)
        f = YX.parse(f"x^2 + ({rng.randint(-3, 3)})*x*y + ({rng.randint(-3, 3)})*y - {rng.randint(0, 3)}")
        got = roots_at_sample(f, [alpha])
        assert _increasing(got)
        for r in got:
            assert sign_at_point(f, [alpha, r]) == 0
        # between and beyond the roots, f does not vanish
        mids = [mpq(-10**6)] + [(a.interval[1] + b.interval[0]) / 2 for a, b in zip(got, got[1:])] + [mpq(10**6)]
        for m in mids:
            assert sign_at_point(f, [alpha, RealAlgebraicNumber.rational(m)]) != 0


def test_partition_cells_are_disjoint_and_ordered():
    rng = random.Random(14)
    for _ in range(60):
        polys = [_random_univariate(rng) for _ in range(rng.randint(1, 3))]
        cells = partition1d(polys)
        assert [c.kind for c in cells[::2]] == ["interval"] * ((len(cells) + 1) // 2)
        for c in cells:
            if not c.is_point:
                assert c.sample.is_rational
                assert c.lower is None or c.lower < c.sample
                assert c.upper is None or c.sample < c.upper
                for p in polys:
                    assert sign_at(p, c.sample) != 0
            else:
                assert any(sign_at(p, c.sample) == 0 for p in polys)
        assert _increasing([c.sample for c in cells])
