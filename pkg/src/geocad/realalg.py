"""Exact real algebraic numbers: isolation, sign determination, sample lifting.

A :class:`RealAlgebraicNumber` stores an irreducible integer defining
polynomial together with an open isolating interval, or an exact rational.
Refinement bisects the interval in place.

>>> [str(r) for r in isolate_roots(Ring("x").parse("x^3 - 2*x"))]
['root(x^2 - 2, -8, 0)', '0', 'root(x^2 - 2, 0, 8)']
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Sequence

import flint
from gmpy2 import mpq

from .exactpoly import Ordering, Polynomial, PolynomialError, Rational, Ring, to_rational

__all__ = [
    "RealAlgebraicNumber", "Level1Cell", "RefinementBudgetExceeded", "IdenticallyZero",
    "isolate_roots", "sign_at", "sign_at_point", "compare", "roots_at_sample", "partition1d",
    "sturm_count", "refinement_budget", "interval_evaluate",
]

_UNIVARIATE = Ring(("x",))


class RefinementBudgetExceeded(RuntimeError):
    pass


class IdenticallyZero(ValueError):
    """The polynomial vanishes identically on the fiber over the sample."""


_budget = [4000]


@contextmanager
def refinement_budget(steps: int):
    """Cap on bisection rounds for any single sign or separation decision."""
    old = _budget[0]
    _budget[0] = steps
    try:
        yield
    finally:
        _budget[0] = old


def _exhausted(what: str):
    raise RefinementBudgetExceeded(f"refinement budget of {_budget[0]} steps exhausted while {what}")


# ------------------------------------------------------- univariate helpers


def _as_fmpz_poly(p) -> flint.fmpz_poly:
    if isinstance(p, flint.fmpz_poly):
        return p
    if isinstance(p, Polynomial):
        if len(p.support()) > 1:
            raise PolynomialError(f"{p} is not univariate")
        _, terms = p.integer_terms()
        deg = max((sum(e) for e in terms), default=0)
        cs = [0] * (deg + 1)
        for e, c in terms.items():
            cs[sum(e)] = c
        return flint.fmpz_poly(cs)
    return flint.fmpz_poly([int(c) for c in p])


def _normalize(f: flint.fmpz_poly) -> flint.fmpz_poly:
    c = f.content()
    if c != 1 and c != 0:
        f = flint.fmpz_poly([int(x) // int(c) for x in f.coeffs()])
    if f.degree() >= 0 and f.leading_coefficient() < 0:
        f = -f
    return f


def _ints(f: flint.fmpz_poly) -> list[int]:
    return [int(c) for c in f.coeffs()]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _sign_eval(cs: Sequence[int], q: Rational) -> int:
    """Sign of the integer polynomial with ascending coefficients cs at q."""
    n, d = int(q.numerator), int(q.denominator)
    acc = 0
    dp = 1
    # sum c_i n^i d^(deg-i), evaluated by Horner on the homogenized form
    for c in reversed(cs):
        acc = acc * n + c * dp
        dp *= d
    return _sign(acc)


def _eval(cs: Sequence[int], q: Rational) -> Rational:
    acc = mpq(0)
    for c in reversed(cs):
        acc = acc * q + c
    return acc


def _variations(cs: Iterable[int]) -> int:
    last = 0
    v = 0
    for c in cs:
        if c:
            if last and (c > 0) != (last > 0):
                v += 1
            last = c
    return v


def _taylor1(cs: list[int]) -> list[int]:
    """Coefficients of p(x + 1)."""
    a = list(cs)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _roots_in_unit(cs: list[int]) -> int:
    """Descartes bound for roots in (0, 1): variations of (x+1)^n p(1/(x+1))."""
    return _variations(_taylor1(cs[::-1]))


def _cauchy_exponent(cs: Sequence[int]) -> int:
    """e with every root of modulus below 2^e."""
    lead = abs(cs[-1])
    m = max(abs(c) for c in cs[:-1]) if len(cs) > 1 else 0
    bound = 1 + mpq(m, lead)
    return max(1, math.ceil(math.log2(float(bound))) + 1)


def _isolate_positive(cs: list[int]) -> list[tuple[Rational, Rational]]:
    """Isolating intervals (or degenerate exact ones) for the positive roots of a squarefree polynomial."""
    if len(cs) < 2:
        return []
    e = _cauchy_exponent(cs)
    n = len(cs) - 1
    # g(x) = p(2^e x) restricted to (0, 1)
    g = [c << (e * i) for i, c in enumerate(cs)]
    out = []
    stack = [(g, 0, 0)]  # (poly, numerator c, level k) representing (c/2^k, (c+1)/2^k)
    scale = mpq(2) ** e
    while stack:
        g, c, k = stack.pop()
        v = _roots_in_unit(g)
        if v == 0:
            continue
        lo = mpq(c, 2 ** k) * scale
        hi = mpq(c + 1, 2 ** k) * scale
        if v == 1:
            out.append((lo, hi))
            continue
        # left half: 2^n g(x/2); right half: the left one shifted by 1
        left = [a << (n - i) for i, a in enumerate(g)]
        right = _taylor1(left)
        if right[0] == 0:
            mid = mpq(2 * c + 1, 2 ** (k + 1)) * scale
            out.append((mid, mid))
            right = right[1:]
        stack.append((right, 2 * c + 1, k + 1))
        stack.append((left, 2 * c, k + 1))
    return out


def sturm_count(p, lo: Rational | None = None, hi: Rational | None = None) -> int:
    """Distinct real roots of p in (lo, hi]; unbounded ends by default."""
    f = _as_fmpz_poly(p)
    if f.degree() <= 0:
        return 0
    f = flint.fmpq_poly(f)
    seq = [f, f.derivative()]
    while seq[-1].degree() > 0:
        r = seq[-2] % seq[-1]
        if r == 0:
            break
        seq.append(-r)

    def signs_at(x):
        out = []
        for s in seq:
            if x is None:
                continue
            out.append(_sign(s(flint.fmpq(int(x.numerator), int(x.denominator)))))
        return out

    def signs_inf(positive: bool):
        out = []
        for s in seq:
            lc = _sign(s.coeffs()[-1])
            out.append(lc if positive or s.degree() % 2 == 0 else -lc)
        return out

    a = signs_inf(False) if lo is None else signs_at(to_rational(lo))
    b = signs_inf(True) if hi is None else signs_at(to_rational(hi))
    return _variations(a) - _variations(b)


# ------------------------------------------------------------ the numbers


class RealAlgebraicNumber:
    """The unique root of ``defining`` in the open interval (lo, hi), or a rational."""

    __slots__ = ("_f", "_cs", "lo", "hi", "_value", "_slo")

    def __init__(self, defining, lo=None, hi=None, *, verify: bool = True):
        f = _normalize(_as_fmpz_poly(defining))
        if f.degree() < 1:
            raise PolynomialError("defining polynomial must be non-constant")
        if verify and f.degree() > 1:
            f = _owning_factor(f, to_rational(lo), to_rational(hi))
        self._f = f
        self._cs = _ints(f)
        self._value = None
        if f.degree() == 1:
            a0, a1 = self._cs
            self._value = mpq(-a0, a1)
            self.lo = self.hi = self._value
            self._slo = 0
            return
        lo, hi = to_rational(lo), to_rational(hi)
        if not lo < hi:
            raise PolynomialError("empty isolating interval")
        self.lo, self.hi = lo, hi
        self._slo = _sign_eval(self._cs, lo)
        if verify:
            shi = _sign_eval(self._cs, hi)
            if self._slo * shi >= 0 or sturm_count(f, lo, hi) != 1:
                raise PolynomialError(f"({lo}, {hi}) does not isolate a root of {f}")

    @classmethod
    def rational(cls, q) -> "RealAlgebraicNumber":
        q = to_rational(q)
        return cls(flint.fmpz_poly([-int(q.numerator), int(q.denominator)]))

    @classmethod
    def from_dict(cls, data: dict) -> "RealAlgebraicNumber":
        f = _UNIVARIATE.parse(data["defining"])
        return cls(f, data.get("lo"), data.get("hi"))

    # -- accessors
    @property
    def is_rational(self) -> bool:
        return self._value is not None

    @property
    def value(self) -> Rational:
        if self._value is None:
            raise PolynomialError("irrational algebraic number has no rational value")
        return self._value

    @property
    def defining(self) -> flint.fmpz_poly:
        return self._f

    def defining_polynomial(self, var: str = "x") -> Polynomial:
        ring = Ring((var,))
        return Polynomial(ring, {(i,): mpq(c) for i, c in enumerate(self._cs) if c})

    @property
    def degree(self) -> int:
        return self._f.degree()

    @property
    def interval(self) -> tuple[Rational, Rational]:
        return self.lo, self.hi

    def width(self) -> Rational:
        return self.hi - self.lo

    # -- refinement
    def refine(self) -> None:
        if self._value is not None:
            return
        mid = (self.lo + self.hi) / 2
        s = _sign_eval(self._cs, mid)
        if s == 0:
            raise PolynomialError("irreducible defining polynomial has a rational root")
        if s == self._slo:
            self.lo = mid
        else:
            self.hi = mid

    def refine_below(self, width: Rational) -> None:
        steps = 0
        while self.hi - self.lo > width:
            self.refine()
            steps += 1
            if steps > _budget[0]:
                _exhausted("narrowing an isolating interval")

    def __float__(self) -> float:
        if self._value is not None:
            return float(self._value)
        self.refine_below(mpq(1, 2 ** 60) * max(1, abs(self.lo)))
        return float((self.lo + self.hi) / 2)

    # -- comparisons
    def __eq__(self, other):
        if not isinstance(other, RealAlgebraicNumber):
            if isinstance(other, (int, Rational)):
                other = RealAlgebraicNumber.rational(other)
            else:
                return NotImplemented
        return compare(self, other) is Ordering.EQUAL

    def __lt__(self, other):
        return compare(self, _coerce(other)) is Ordering.LESS

    def __le__(self, other):
        return compare(self, _coerce(other)) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, _coerce(other)) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, _coerce(other)) is not Ordering.LESS

    def __hash__(self):
        return hash(tuple(self._cs)) if self._value is None else hash(self._value)

    def __str__(self):
        if self._value is not None:
            return str(self._value)
        return f"root({self.defining_polynomial()}, {self.lo}, {self.hi})"

    __repr__ = __str__

    def to_dict(self) -> dict:
        return {"defining": str(self.defining_polynomial()), "lo": str(self.lo), "hi": str(self.hi)}


def _owning_factor(f: flint.fmpz_poly, lo: Rational, hi: Rational) -> flint.fmpz_poly:
    # equality tests rely on irreducible defining polynomials
    _, facs = f.factor()
    if len(facs) == 1 and facs[0][1] == 1:
        return f
    if not lo < hi:
        raise PolynomialError("empty isolating interval")
    owners = [g for g, _ in facs if sturm_count(g, lo, hi) - (_sign_eval(_ints(g), hi) == 0) > 0]
    if len(owners) != 1 or sturm_count(owners[0], lo, hi) - (_sign_eval(_ints(owners[0]), hi) == 0) != 1:
        raise PolynomialError(f"({lo}, {hi}) does not isolate a root of {f}")
    return _normalize(owners[0])


def _coerce(x) -> RealAlgebraicNumber:
    return x if isinstance(x, RealAlgebraicNumber) else RealAlgebraicNumber.rational(x)


def compare(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> Ordering:
    """Exact order of two real algebraic numbers."""
    if a is b:
        return Ordering.EQUAL
    if a.is_rational and b.is_rational:
        return Ordering(_sign(a.value - b.value))
    same = a._cs == b._cs
    if same and a.lo == b.lo and a.hi == b.hi:
        return Ordering.EQUAL
    for _ in range(_budget[0]):
        if a.hi <= b.lo and not (a.hi == b.lo and a.is_rational and b.is_rational):
            return Ordering.LESS
        if b.hi <= a.lo:
            return Ordering.GREATER
        if same:
            # same irreducible polynomial: equal iff the union still isolates one root
            lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
            if sturm_count(a._f, lo, hi) == 1:
                return Ordering.EQUAL
        # distinct irreducible defining polynomials never share a root
        if a.width() >= b.width():
            a.refine()
        else:
            b.refine()
    _exhausted("separating two algebraic numbers")


def _sort(nums: Iterable[RealAlgebraicNumber]) -> list[RealAlgebraicNumber]:
    return sorted(nums, key=cmp_to_key(lambda u, v: compare(u, v).value))


def _dedup_sorted(nums: list[RealAlgebraicNumber]) -> list[RealAlgebraicNumber]:
    out: list[RealAlgebraicNumber] = []
    for r in nums:
        if not out or compare(out[-1], r) is not Ordering.EQUAL:
            out.append(r)
    return out


# --------------------------------------------------------------- isolation


def _isolate_irreducible(f: flint.fmpz_poly) -> list[RealAlgebraicNumber]:
    cs = _ints(f)
    if len(cs) == 2:
        return [RealAlgebraicNumber(f)]
    if cs[0] == 0:
        return [RealAlgebraicNumber.rational(0)]
    out = []
    for lo, hi in _isolate_positive(cs):
        out.append(RealAlgebraicNumber(f, lo, hi, verify=False))
    neg = [c if i % 2 == 0 else -c for i, c in enumerate(cs)]
    for lo, hi in _isolate_positive(neg):
        out.append(RealAlgebraicNumber(f, -hi, -lo, verify=False))
    return out


def _irreducible_factors(f: flint.fmpz_poly) -> list[flint.fmpz_poly]:
    if f.degree() <= 0:
        return []
    _, facs = f.factor()
    return sorted((_normalize(g) for g, _ in facs), key=lambda g: (g.degree(), _ints(g)))


def isolate_roots(p) -> list[RealAlgebraicNumber]:
    """Distinct real roots of a nonzero univariate polynomial, increasing."""
    f = _as_fmpz_poly(p)
    if f == 0:
        raise PolynomialError("isolation of the zero polynomial")
    roots = []
    for g in _irreducible_factors(f):
        roots.extend(_isolate_irreducible(g))
    return _sort(roots)


# ------------------------------------------------------- interval arithmetic


def _imul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def _ipow(a, k: int):
    if k == 0:
        return mpq(1), mpq(1)
    lo, hi = a
    if k % 2 == 1 or lo >= 0:
        return lo ** k, hi ** k
    if hi <= 0:
        return hi ** k, lo ** k
    return mpq(0), max(lo ** k, hi ** k)


def interval_evaluate(p: Polynomial, boxes: Sequence[tuple[Rational, Rational]]) -> tuple[Rational, Rational]:
    """Enclosure of p over a box; boxes[i] bounds variable i."""
    lo = hi = mpq(0)
    cache: dict[tuple[int, int], tuple] = {}
    for e, c in p.terms.items():
        t = (mpq(1), mpq(1))
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                pw = cache.get(key)
                if pw is None:
                    pw = cache[key] = _ipow(boxes[i], k)
                t = _imul(t, pw)
        if c > 0:
            lo += c * t[0]
            hi += c * t[1]
        else:
            lo += c * t[1]
            hi += c * t[0]
    return lo, hi


# ------------------------------------------------------- sign determination


def sign_at(q, alpha: RealAlgebraicNumber) -> int:
    """Exact sign of a univariate polynomial at alpha."""
    f = _as_fmpz_poly(q)
    if f == 0:
        return 0
    cs = _ints(f)
    if alpha.is_rational:
        return _sign(_eval(cs, alpha.value))
    if f.degree() == 0:
        return _sign(cs[0])
    if f.gcd(alpha.defining).degree() > 0:
        # the defining polynomial is irreducible, so it divides q
        return 0
    for _ in range(_budget[0]):
        lo, hi = _univariate_enclosure(cs, alpha.lo, alpha.hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        alpha.refine()
    _exhausted("determining a sign at an algebraic number")


def _univariate_enclosure(cs, lo, hi):
    box = (lo, hi)
    acc = (mpq(0), mpq(0))
    for c in reversed(cs):
        acc = _imul(acc, box)
        acc = (acc[0] + c, acc[1] + c)
    return acc


def _rational_part(q: Polynomial, point: Sequence[RealAlgebraicNumber]) -> Polynomial:
    subs = {i: a.value for i, a in enumerate(point) if a.is_rational and i in q.support()}
    return q.substitute(subs) if subs else q


def _boxes(point: Sequence[RealAlgebraicNumber], nvars: int):
    out = [(a.lo, a.hi) for a in point]
    out.extend([(mpq(0), mpq(0))] * (nvars - len(out)))
    return out


def _refine_all(point: Sequence[RealAlgebraicNumber], used: Iterable[int]) -> None:
    for i in used:
        point[i].refine()


def _value_resultant(q: Polynomial, point: Sequence[RealAlgebraicNumber], used: list[int]) -> flint.fmpz_poly:
    """Integer polynomial in t vanishing at the (integer-scaled) value of q at the point."""
    ring = q.ring
    names = [ring.vars[i] for i in used] + ["_t"]
    ctx = flint.fmpz_mpoly_ctx.get(tuple(names), "lex")
    _, terms = q.integer_terms()
    k = len(used)
    pos = {v: j for j, v in enumerate(used)}
    qdict = {}
    for e, c in terms.items():
        ee = [0] * (k + 1)
        for i, d in enumerate(e):
            if d:
                ee[pos[i]] = d
        qdict[tuple(ee)] = -c
    qdict[tuple([0] * k + [1])] = qdict.get(tuple([0] * k + [1]), 0) + 1
    R = ctx.from_dict(qdict)
    for j in reversed(range(k)):
        R = R.resultant(_lift_univariate(point[used[j]].defining, ctx, j), names[j])
    cs = [0] * (R.degrees()[k] + 1)
    for e, c in R.to_dict().items():
        cs[e[k]] += int(c)
    return flint.fmpz_poly(cs)


def _lift_univariate(f: flint.fmpz_poly, ctx, slot: int):
    n = ctx.nvars()
    terms = {}
    for d, c in enumerate(_ints(f)):
        if c:
            e = [0] * n
            e[slot] = d
            terms[tuple(e)] = c
    return ctx.from_dict(terms)


def _zero_radius(R: flint.fmpz_poly) -> Rational | None:
    """None if 0 is not a root of R; else a bound below every nonzero root modulus."""
    cs = _ints(R)
    v = 0
    while v < len(cs) and cs[v] == 0:
        v += 1
    if v == 0:
        return None
    rest = cs[v:]
    if len(rest) <= 1:
        return mpq(1)
    r0 = abs(rest[0])
    return mpq(r0, r0 + max(abs(c) for c in rest[1:]))


_QUICK_ROUNDS = 8


def sign_at_point(q: Polynomial, point: Sequence[RealAlgebraicNumber]) -> int:
    """Exact sign of q at a point whose coordinates are the leading ring variables."""
    if any(i >= len(point) for i in q.support()):
        raise PolynomialError(f"{q} involves variables beyond the point")
    q = _rational_part(q, point)
    if q.is_constant():
        return _sign(q.constant_value())
    used = sorted(q.support())
    if len(used) == 1:
        (i,) = used
        return sign_at(_univariate_of(q, i), point[i])
    boxes = _boxes(point, q.ring.nvars)
    for _ in range(_QUICK_ROUNDS):
        lo, hi = interval_evaluate(q, boxes)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        _refine_all(point, used)
        boxes = _boxes(point, q.ring.nvars)
    _, qi = q.integer_terms()
    qint = Polynomial(q.ring, {e: mpq(c) for e, c in qi.items()}, check=False)
    radius = _zero_radius(_value_resultant(qint, point, used))
    for _ in range(_budget[0]):
        lo, hi = interval_evaluate(qint, boxes)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if radius is not None and -radius < lo and hi < radius:
            return 0
        _refine_all(point, used)
        boxes = _boxes(point, q.ring.nvars)
    _exhausted("determining a sign at an algebraic point")


def _univariate_of(q: Polynomial, i: int) -> flint.fmpz_poly:
    _, terms = q.integer_terms()
    cs = [0] * (q.degree(i) + 1)
    for e, c in terms.items():
        cs[e[i]] += c
    return flint.fmpz_poly(cs)


# --------------------------------------------------------- roots over a sample


def _strip_factor(R, m, var: str):
    """R with every factor m (univariate in var) divided out."""
    while not R.is_zero():
        quo, rem = divmod(R, m)
        if not rem.is_zero():
            break
        R = quo
    return R


def _candidate_polynomial(p: Polynomial, point: Sequence[RealAlgebraicNumber], used: list[int], xi: int) -> flint.fmpz_poly:
    """Iterated resultant in x eliminating the irrational coordinates."""
    ring = p.ring
    names = [ring.vars[i] for i in used] + [ring.vars[xi]]
    ctx = flint.fmpz_mpoly_ctx.get(tuple(names), "lex")
    k = len(used)
    pos = {v: j for j, v in enumerate(used)}
    pos[xi] = k
    _, terms = p.integer_terms()
    pdict = {}
    for e, c in terms.items():
        ee = [0] * (k + 1)
        for i, d in enumerate(e):
            if d:
                ee[pos[i]] = d
        pdict[tuple(ee)] = c
    R = ctx.from_dict(pdict)
    for j in reversed(range(k)):
        m = _lift_univariate(point[used[j]].defining, ctx, j)
        # a conjugate coordinate on which R vanishes identically would zero the resultant
        R = _strip_factor(R, m, names[j])
        R = R.resultant(m, names[j])
    cs = [0] * (R.degrees()[k] + 1)
    for e, c in R.to_dict().items():
        cs[e[k]] += int(c)
    return flint.fmpz_poly(cs)


def roots_at_sample(p: Polynomial, sample: Sequence[RealAlgebraicNumber]) -> list[RealAlgebraicNumber]:
    """Distinct real roots in x (the variable after the sample's) of p specialized at the sample."""
    sample = list(sample)
    xi = len(sample)
    if any(i > xi for i in p.support()):
        raise PolynomialError(f"{p} involves variables beyond level {xi + 1}")
    p = _rational_part(p, sample)
    coeffs = p.coefficients_in(xi)
    top = max(coeffs, default=-1)
    while top >= 0 and (top not in coeffs or sign_at_point(coeffs[top], sample) == 0):
        top -= 1
    if top < 0:
        raise IdenticallyZero(f"{p} vanishes identically over the sample")
    xv = p.ring.gen(xi)
    p = sum((c * xv ** d for d, c in coeffs.items() if d <= top), p.ring.zero())
    if top == 0:
        return []
    used = sorted(i for i in p.support() if i != xi)
    if not used:
        return isolate_roots(_univariate_of(p, xi))
    R = _candidate_polynomial(p, sample, used, xi)
    candidates = isolate_roots(R)
    _separate_all(candidates)
    return [c for c in candidates if _is_root(p, sample, used, c)]


def _separate_all(nums: list[RealAlgebraicNumber]) -> None:
    """Refine sorted distinct numbers until their closed intervals are pairwise disjoint."""
    for a, b in zip(nums, nums[1:]):
        separate(a, b)


_IVT_ROUNDS = 24


def _is_root(p: Polynomial, sample: list[RealAlgebraicNumber], used: list[int], c: RealAlgebraicNumber) -> bool:
    """Whether c is a root of p over the sample; every such root is among the separated candidates."""
    xi = len(sample)
    if c.is_rational:
        return sign_at_point(p.substitute({xi: c.value}), sample) == 0
    point = sample + [c]
    for rnd in range(_IVT_ROUNDS):
        boxes = _boxes(point, p.ring.nvars)
        lo, hi = interval_evaluate(p, boxes)
        if lo > 0 or hi < 0:
            return False
        # a strict sign change across the isolating interval forces a root inside it, and c is the only candidate there
        a = interval_evaluate(p.substitute({xi: c.lo}), boxes)
        b = interval_evaluate(p.substitute({xi: c.hi}), boxes)
        if (a[1] < 0 < b[0]) or (b[1] < 0 < a[0]):
            return True
        _refine_all(point, used)
        if rnd % 3 == 2:
            c.refine()
    return sign_at_point(p, point) == 0


# -------------------------------------------------------------- Partition1D


@dataclass
class Level1Cell:
    """A point {root} or an open interval (lower, upper); None marks an infinite end."""

    kind: str
    sample: RealAlgebraicNumber
    lower: RealAlgebraicNumber | None = None
    upper: RealAlgebraicNumber | None = None

    @property
    def is_point(self) -> bool:
        return self.kind == "point"

    def to_dict(self) -> dict:
        def bound(b):
            return None if b is None else b.to_dict()

        return {"kind": self.kind, "sample": self.sample.to_dict(), "lower": bound(self.lower), "upper": bound(self.upper)}


def separate(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> Rational:
    """A rational strictly between a < b: the midpoint of the separated interval ends."""
    for _ in range(_budget[0]):
        if a.hi < b.lo:
            return (a.hi + b.lo) / 2
        if a.width() >= b.width() and not a.is_rational:
            a.refine()
        elif not b.is_rational:
            b.refine()
        else:
            a.refine()
    _exhausted("separating adjacent roots")


def sections_and_bands(roots: Sequence[RealAlgebraicNumber]) -> list[Level1Cell]:
    """Interleave sorted distinct roots with the open intervals around them."""
    if not roots:
        return [Level1Cell("interval", RealAlgebraicNumber.rational(0))]
    cells = [Level1Cell("interval", RealAlgebraicNumber.rational(roots[0].lo - 1), None, roots[0])]
    for k, r in enumerate(roots):
        cells.append(Level1Cell("point", r, r, r))
        if k + 1 < len(roots):
            mid = separate(r, roots[k + 1])
            cells.append(Level1Cell("interval", RealAlgebraicNumber.rational(mid), r, roots[k + 1]))
    last = roots[-1]
    cells.append(Level1Cell("interval", RealAlgebraicNumber.rational(last.hi + 1), last, None))
    return cells


def partition1d(polys: Iterable) -> list[Level1Cell]:
    """Sign-invariant points and open intervals of the line for the given polynomials."""
    roots: list[RealAlgebraicNumber] = []
    for p in polys:
        f = _as_fmpz_poly(p)
        if f.degree() > 0:
            roots.extend(isolate_roots(f))
    return sections_and_bands(_dedup_sorted(_sort(roots)))
