"""Parametric Hermite quadratic forms over the localized ring (k[y]/J)_w.

Coefficients are pairs ``numerator / W^k`` where ``W`` is the product of the
distinct irreducible factors of the x-leading coefficients of G minus J.
Numerators are polynomials in y, kept reduced modulo J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import flint
from gmpy2 import mpq

from .exactpoly import (
    GREVLEX,
    Block,
    Exponent,
    GrevLex,
    Polynomial,
    PolynomialError,
    Ring,
    _bareiss_det,
    factor_integer_poly,
    to_rational,
)
from .groebner import Ideal, normal_form, lc_factors_x, saturate, staircase

__all__ = [
    "LocalizedElement", "HermiteForm", "HermiteError", "hermite_matrix",
    "trace_of_multiplication", "minors_ideal", "charpoly_cleared", "rank_signature_at",
    "rank_signature_of", "descartes_signature",
]

_XORD = GrevLex()


class HermiteError(PolynomialError):
    pass


@dataclass(frozen=True)
class LocalizedElement:
    """``numerator / w^w_exponent`` with the numerator in y only."""

    numerator: Polynomial
    w_exponent: int

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __str__(self):
        if self.w_exponent == 0:
            return str(self.numerator)
        return f"({self.numerator})/w^{self.w_exponent}"


class _Localization:
    """Arithmetic in (k[y]/J)_W with a single denominator polynomial W."""

    def __init__(self, ring: Ring, W: Polynomial, J: Ideal):
        self.ring = ring
        self.W = W
        self.Jgb = J.groebner(GREVLEX)
        self._Wpow = [ring.one()]
        self._fW = None if W.is_constant() else flint.fmpz_mpoly_ctx.get(ring.vars, "lex")

    def wpow(self, k: int) -> Polynomial:
        while len(self._Wpow) <= k:
            self._Wpow.append(self._Wpow[-1] * self.W)
        return self._Wpow[k]

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.Jgb, GREVLEX) if self.Jgb else p

    def normalize(self, num: Polynomial, k: int) -> tuple[Polynomial, int]:
        num = self.reduce(num)
        if num.is_zero():
            return num, 0
        while k > 0:
            q = _exact_div(num, self.W)
            if q is None:
                break
            num, k = self.reduce(q), k - 1
        return num, k

    def align(self, a: tuple[Polynomial, int], k: int) -> Polynomial:
        return a[0] * self.wpow(k - a[1]) if k > a[1] else a[0]

    def add(self, a, b):
        if a[0].is_zero():
            return b
        if b[0].is_zero():
            return a
        k = max(a[1], b[1])
        return (self.reduce(self.align(a, k) + self.align(b, k)), k)

    def mul(self, a, b):
        if a[0].is_zero() or b[0].is_zero():
            return (self.ring.zero(), 0)
        return (self.reduce(a[0] * b[0]), a[1] + b[1])


def _exact_div(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """a / b if b divides a exactly, else None."""
    from .exactpoly import from_flint, to_flint

    if b.is_constant():
        return a / b.constant_value()
    if a.is_zero():
        return a
    ca, cb = a.content(), b.content()
    # primitive parts divide over Z iff they divide over Q
    q, r = divmod(to_flint(a.scale(1 / ca)), to_flint(b.scale(1 / cb)))
    if r != 0:
        return None
    return from_flint(q, a.ring).scale(ca / cb)


def _split_x(p: Polynomial, split: int) -> dict[Exponent, Polynomial]:
    """Group p as a polynomial in x with coefficients in y (same ring)."""
    out: dict[Exponent, dict] = {}
    n = p.ring.nvars
    for e, c in p.terms.items():
        out.setdefault(e[split:], {})[e[:split] + (0,) * (n - split)] = c
    return {k: Polynomial(p.ring, v, check=False) for k, v in out.items()}


@dataclass
class HermiteForm:
    """Symmetric trace matrix with entries ``LocalizedElement``; ``w`` lists W's factors."""

    basis: tuple[Exponent, ...]
    entries: list[list[LocalizedElement]]
    w: list[Polynomial]
    J: Ideal
    h: Polynomial
    split: int
    W: Polynomial = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def ring(self) -> Ring:
        return self.J.ring

    def entry_str(self, i: int, j: int) -> str:
        return str(self.entries[i][j])

    def cleared(self) -> tuple[list[list[Polynomial]], int]:
        """(W^m * H as polynomial representatives, m)."""
        m = max((e.w_exponent for row in self.entries for e in row), default=0)
        Wp = [self.ring.one()]
        for _ in range(m):
            Wp.append(Wp[-1] * self.W)
        mat = [[e.numerator * Wp[m - e.w_exponent] for e in row] for row in self.entries]
        return mat, m

    def as_fraction(self, i: int, j: int) -> tuple[Polynomial, Polynomial]:
        e = self.entries[i][j]
        return e.numerator, self.W ** e.w_exponent


class _HermiteBuilder:
    """Multiplication matrices of the x-variables on the staircase basis."""

    def __init__(self, G: Sequence[Polynomial], J: Ideal, split: int):
        self.ring = J.ring
        self.split = split
        self.J = J
        outside = [g for g in G if not J.contains(g)]
        st = staircase(G, J, split)
        if not st.finite:
            raise HermiteError("staircase is infinite")
        self.basis = st.monomials
        self.index = {b: i for i, b in enumerate(self.basis)}
        factors: dict[Polynomial, None] = {}
        self.leads = []
        for g in outside:
            lm, lc = lc_factors_x(g, split)
            for f, _m in factor_integer_poly(lc) if not lc.is_constant() else []:
                factors[f] = None
            self.leads.append((lm, lc, _split_x(g, split)))
        self.w = list(factors)
        W = self.ring.one()
        for f in self.w:
            W = W * f
        self.W = W
        self.loc = _Localization(self.ring, W, J)
        # LC inverse as (W^m / LC) / W^m
        self.lc_inv = []
        for lm, lc, gx in self.leads:
            m = 0
            while True:
                q = _exact_div(self.loc.wpow(m), lc)
                if q is not None:
                    self.lc_inv.append((q, m))
                    break
                m += 1
                if m > 64:
                    raise HermiteError("leading coefficient does not divide a power of w")
        self._vecs: dict[Exponent, list] = {}
        self.nx = self.ring.nvars - split
        zero = (self.ring.zero(), 0)
        one = (self.ring.one(), 0)
        base = [zero] * len(self.basis)
        base[self.index[(0,) * self.nx]] = one
        self._vecs[(0,) * self.nx] = base
        self.mult = [self._mult_matrix(k) for k in range(self.nx)]

    def reduce_x(self, coeffs: dict[Exponent, tuple]) -> dict[Exponent, tuple]:
        """Normal form over k(y) of a polynomial in x with localized coefficients."""
        loc = self.loc
        work = {e: c for e, c in coeffs.items() if not c[0].is_zero()}
        rem = {}
        while work:
            e = max(work, key=_XORD.key)
            c = work.pop(e)
            for (lm, lc, gx), (inv, m) in zip(self.leads, self.lc_inv):
                if all(a >= b for a, b in zip(e, lm)):
                    q = loc.mul(c, (inv, m))
                    shift = tuple(a - b for a, b in zip(e, lm))
                    for ge, gc in gx.items():
                        if ge == lm:
                            continue
                        te = tuple(a + b for a, b in zip(ge, shift))
                        t = loc.mul(q, (-gc, 0))
                        v = loc.add(work.get(te, (self.ring.zero(), 0)), t)
                        if v[0].is_zero():
                            work.pop(te, None)
                        else:
                            work[te] = v
                    break
            else:
                rem[e] = c
        return rem

    def _mult_matrix(self, k: int) -> list[list[tuple]]:
        """Column j holds the coordinates of x_k * basis_j."""
        n = len(self.basis)
        cols = []
        for b in self.basis:
            e = list(b)
            e[k] += 1
            r = self.reduce_x({tuple(e): (self.ring.one(), 0)})
            col = [(self.ring.zero(), 0)] * n
            for me, c in r.items():
                if me not in self.index:
                    raise HermiteError("normal form left the staircase")
                col[self.index[me]] = self.loc.normalize(*c)
            cols.append(col)
        return cols

    def vector(self, mono: Exponent) -> list[tuple]:
        """Coordinates of x^mono in the staircase basis (memoized by recursion on degree)."""
        v = self._vecs.get(mono)
        if v is not None:
            return v
        k = next(i for i, d in enumerate(mono) if d)
        prev = list(mono)
        prev[k] -= 1
        pv = self.vector(tuple(prev))
        M = self.mult[k]
        loc = self.loc
        n = len(self.basis)
        out = []
        for i in range(n):
            acc = (self.ring.zero(), 0)
            for j in range(n):
                if pv[j][0].is_zero() or M[j][i][0].is_zero():
                    continue
                acc = loc.add(acc, loc.mul(M[j][i], pv[j]))
            out.append(loc.normalize(*acc))
        self._vecs[mono] = out
        return out

    def trace_monomial(self, mono: Exponent) -> tuple:
        loc = self.loc
        acc = (self.ring.zero(), 0)
        for i, b in enumerate(self.basis):
            v = self.vector(tuple(x + y for x, y in zip(mono, b)))
            acc = loc.add(acc, v[i])
        return loc.normalize(*acc)

    def trace(self, f: Polynomial) -> tuple:
        loc = self.loc
        acc = (self.ring.zero(), 0)
        for mono, coeff in _split_x(f, self.split).items():
            t = self.trace_monomial(mono)
            acc = loc.add(acc, loc.mul(t, (coeff, 0)))
        return loc.normalize(*acc)


_BUILDERS: dict = {}


def _builder(G: Sequence[Polynomial], J: Ideal, split: int) -> _HermiteBuilder:
    key = (J.ring.vars, tuple(G), J.key(), split)
    b = _BUILDERS.get(key)
    if b is None:
        if len(_BUILDERS) > 256:
            _BUILDERS.clear()
        b = _BUILDERS[key] = _HermiteBuilder(G, J, split)
    return b


def _gb_and_J(I: Ideal, split: int, J: Ideal | None):
    G = I.groebner(Block(split))
    if J is None:
        J = Ideal(I.ring, [g for g in G if not any(any(e[split:]) for e in g.terms)])
    return G, J


def trace_of_multiplication(f: Polynomial, G: Sequence[Polynomial], J: Ideal, split: int) -> LocalizedElement:
    b = _builder(G, J, split)
    num, k = b.trace(f)
    return LocalizedElement(num, k)


def hermite_matrix(I: Ideal, J: Ideal | None, h: Polynomial, split: int, G: Sequence[Polynomial] | None = None) -> HermiteForm:
    """Matrix of tr(L_{b_i b_j h}) over the staircase basis of I's block Groebner basis."""
    if G is None:
        G, J = _gb_and_J(I, split, J)
    elif J is None:
        _, J = _gb_and_J(I, split, None)
    b = _builder(G, J, split)
    hx = _split_x(h, split)
    n = len(b.basis)
    loc = b.loc
    ent = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = (b.ring.zero(), 0)
            bij = tuple(x + y for x, y in zip(b.basis[i], b.basis[j]))
            for mono, coeff in hx.items():
                t = b.trace_monomial(tuple(x + y for x, y in zip(bij, mono)))
                acc = loc.add(acc, loc.mul(t, (coeff, 0)))
            num, k = loc.normalize(*acc)
            ent[i][j] = ent[j][i] = LocalizedElement(num, k)
    return HermiteForm(b.basis, ent, list(b.w), J, h, split, b.W)


# ---------------------------------------------------------------- minors


def _minor_numerators(H: HermiteForm, i: int) -> list[Polynomial]:
    mat, m = H.cleared()
    n = H.size
    ring = H.ring
    loc = _Localization(ring, H.W, H.J)
    out = []
    for rows in combinations(range(n), i):
        for cols in combinations(range(n), i):
            if cols < rows:
                continue  # symmetric: minor(rows, cols) = minor(cols, rows)
            sub = [[mat[r][c] for c in cols] for r in rows]
            det = _bareiss_det(sub, ring)
            num, _ = loc.normalize(det, m * i)
            if not num.is_zero():
                out.append(num)
    return out


def minors_ideal(H: HermiteForm, i: int, saturated: bool = False) -> Ideal:
    """Ideal of i-minor numerators; with ``saturated`` it is (minors + J) : w^inf.

    i = 0 gives <1>; i > size gives <0>.
    """
    ring = H.ring
    if i == 0:
        return Ideal.unit(ring)
    if i > H.size:
        return Ideal.zero(ring)
    gens = _minor_numerators(H, i)
    I = Ideal(ring, gens)
    if saturated and not H.W.is_constant() and gens:
        I = saturate(I + H.J, H.W)
        # drop J's generators again so the result lists minors-side content only
        I = Ideal(ring, [g for g in I.groebner() if not H.J.contains(g)] or [])
        if not I.gens and gens:
            I = Ideal(ring, [])
    return I


def charpoly_cleared(H: HermiteForm) -> tuple[list[Polynomial], int]:
    """Coefficients c~_0..c~_s of det(lambda*I - W^m H) reduced mod J, and m."""
    mat, m = H.cleared()
    ring = H.ring
    lam_name = ring.fresh("lam")
    big = ring.extend(lam_name)
    lam = big.gen(lam_name)
    n = H.size
    M = [[(lam if r == c else big.zero()) - mat[r][c].to_ring(big) for c in range(n)] for r in range(n)]
    det = _bareiss_det(M, big)
    cs = det.coefficients_in(lam_name)
    loc = _Localization(ring, H.W, H.J)
    out = []
    for k in range(n + 1):
        c = cs.get(k, big.zero())
        # drop lambda (absent in c) and move back to the base ring
        c = Polynomial(ring, {e[:-1]: v for e, v in c.terms.items()}, check=False)
        out.append(loc.reduce(c))
    return out, m


# ------------------------------------------------------------- pointwise


def descartes_signature(charpoly: Sequence) -> int:
    """#positive - #negative roots of a real-rooted polynomial (coefficients low to high)."""
    def variations(seq):
        s = [x for x in seq if x]
        return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))

    pos = variations(list(charpoly))
    neg = variations([c * (-1) ** k for k, c in enumerate(charpoly)])
    return pos - neg


def rank_signature_of(matrix: Sequence[Sequence]) -> tuple[int, int]:
    """Rank and signature of a symmetric rational matrix."""
    n = len(matrix)
    if n == 0:
        return 0, 0
    M = flint.fmpq_mat(n, n, [flint.fmpq(int(v.numerator), int(v.denominator)) for row in matrix for v in map(to_rational, row)])
    rank = M.rank()
    cp = M.charpoly()
    coeffs = [mpq(int(c.p), int(c.q)) for c in cp.coeffs()]
    return rank, descartes_signature(coeffs)


def _point_map(H: HermiteForm, point) -> dict:
    ring = H.ring
    y = ring.vars[: H.split]
    if isinstance(point, Mapping):
        vals = {k: to_rational(v) for k, v in point.items()}
    else:
        if len(point) != len(y):
            raise HermiteError(f"expected {len(y)} coordinates")
        vals = dict(zip(y, map(to_rational, point)))
    missing = set(y) - set(vals)
    if missing:
        raise HermiteError(f"missing coordinates for {sorted(missing)}")
    return vals


def rank_signature_at(H: HermiteForm, point) -> tuple[int, int]:
    """(rank, signature) of H specialized at a rational point of V(J) minus V(w)."""
    vals = _point_map(H, point)
    if H.W.evaluate(vals) == 0:
        raise HermiteError("w vanishes at the point")
    for g in H.J.gens:
        if g.evaluate(vals) != 0:
            raise HermiteError("point is not on V(J)")
    Wv = H.W.evaluate(vals)
    mat = [[e.numerator.evaluate(vals) / Wv ** e.w_exponent for e in row] for row in H.entries]
    return rank_signature_of(mat)


def specialize_matrix(H: HermiteForm, point) -> list[list[mpq]]:
    vals = _point_map(H, point)
    Wv = H.W.evaluate(vals)
    if Wv == 0:
        raise HermiteError("w vanishes at the point")
    return [[e.numerator.evaluate(vals) / Wv ** e.w_exponent for e in row] for row in H.entries]
