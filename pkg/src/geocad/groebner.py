"""Buchberger's algorithm, normal forms and ideal predicates.

Rings put the parameter block ``y`` first and the fiber block ``x`` last, so
``Block(len(y))`` compares x-monomials first.  All ideals live in one ring;
an elimination ideal is returned in the same ring with generators free of x.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .exactpoly import (
    GREVLEX,
    Block,
    Exponent,
    GrevLex,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    Ring,
)

__all__ = [
    "Ideal", "Staircase", "reduced_groebner", "normal_form", "elimination_ideal",
    "staircase", "lc_product", "lc_factors_x", "radical_membership", "ideal_equal",
    "is_groebner", "s_polynomial", "saturate", "x_split",
]


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Full reduction of f by G; the result has no term divisible by any LM(g)."""
    if not f.terms or not G:
        return f
    key = order.key
    leads = []
    for g in G:
        e, c = g.leading_term(order)
        leads.append((e, c, g.terms))
    work = dict(f.terms)
    heap = [tuple(-k for k in key(e)) + (i,) for i, e in enumerate(work)]
    idx = list(work)
    heapq.heapify(heap)
    rem = {}
    n = len(idx)
    while heap:
        item = heapq.heappop(heap)
        e = idx[item[-1]]
        c = work.get(e)
        if c is None:
            continue
        # skip duplicated heap entries for the same monomial
        while heap and heap[0][:-1] == item[:-1]:
            heapq.heappop(heap)
        for le, lc, gt in leads:
            if _divides(le, e):
                qe = tuple(a - b for a, b in zip(e, le))
                qc = c / lc
                del work[e]
                for de, dc in gt.items():
                    if de == le:
                        continue
                    te = tuple(a + b for a, b in zip(de, qe))
                    old = work.get(te)
                    if old is None:
                        work[te] = -qc * dc
                        idx.append(te)
                        heapq.heappush(heap, tuple(-k for k in key(te)) + (n,))
                        n += 1
                    else:
                        v = old - qc * dc
                        if v:
                            work[te] = v
                        else:
                            del work[te]
                break
        else:
            rem[e] = c
            del work[e]
    return Polynomial(f.ring, rem, check=False)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    m = _lcm(ef, eg)
    a = f.mul_term(tuple(x - y for x, y in zip(m, ef)), 1 / cf)
    b = g.mul_term(tuple(x - y for x, y in zip(m, eg)), 1 / cg)
    return a - b


def _disjoint(a: Exponent, b: Exponent) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _update(basis: set, lms: list, pairs: set, h: int):
    """Gebauer-Moeller update of the pair set and basis after adding element h."""
    lh = lms[h]
    cand = sorted(basis)
    lcms = {g: _lcm(lms[g], lh) for g in cand}
    kept = []
    for pos, g in enumerate(cand):
        lg = lcms[g]
        if _disjoint(lms[g], lh):
            kept.append(g)
            continue
        # chain criterion against the other new pairs (undecided ones and kept ones)
        rest = cand[pos + 1:]
        if any(_divides(lcms[o], lg) for o in rest) or any(_divides(lcms[o], lg) for o in kept):
            continue
        kept.append(g)
    new_pairs = {(g, h) for g in kept if not _disjoint(lms[g], lh)}
    survivors = set()
    for i, j in pairs:
        lij = _lcm(lms[i], lms[j])
        if _divides(lh, lij) and _lcm(lms[i], lh) != lij and _lcm(lms[j], lh) != lij:
            continue
        survivors.add((i, j))
    pairs.clear()
    pairs.update(survivors)
    pairs.update(new_pairs)
    for g in cand:
        if _divides(lh, lms[g]):
            basis.discard(g)
    basis.add(h)


def _buchberger(gens: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    polys: list[Polynomial] = []
    lms: list[Exponent] = []
    basis: set[int] = set()
    pairs: set[tuple[int, int]] = set()
    key = order.key

    def reducers():
        return [polys[i] for i in sorted(basis)]

    def add(p: Polynomial):
        p = p.monic(order)
        polys.append(p)
        lms.append(p.lm(order))
        _update(basis, lms, pairs, len(polys) - 1)

    for g in sorted(gens, key=lambda p: key(p.lm(order))):
        r = normal_form(g, reducers(), order)
        if r:
            if r.is_constant():
                return [r.ring.one()]
            add(r)
    while pairs:
        # normal selection strategy
        pair = min(pairs, key=lambda ij: (key(_lcm(lms[ij[0]], lms[ij[1]])), ij))
        pairs.discard(pair)
        s = s_polynomial(polys[pair[0]], polys[pair[1]], order)
        r = normal_form(s, reducers(), order)
        if r:
            if r.is_constant():
                return [r.ring.one()]
            add(r)
    return reducers()


def _interreduce(G: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    key = order.key
    G = sorted(G, key=lambda p: key(p.lm(order)))
    # drop elements whose LM is divisible by another's
    minimal = []
    for i, g in enumerate(G):
        lg = g.lm(order)
        if any(_divides(h.lm(order), lg) for j, h in enumerate(G) if j != i and (h.lm(order) != lg or j < i)):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        e, c = g.leading_term(order)
        tail = Polynomial(g.ring, {k: v for k, v in g.terms.items() if k != e}, check=False)
        r = normal_form(tail, others, order)
        out.append((Polynomial(g.ring, {e: c}, check=False) + r).monic(order))
    return sorted(out, key=lambda p: key(p.lm(order)), reverse=True)


@lru_cache(maxsize=4096)
def _cached_gb(ring: Ring, gens: tuple[Polynomial, ...], order: MonomialOrder) -> tuple[Polynomial, ...]:
    if not gens:
        return ()
    if any(g.is_constant() for g in gens):
        return (ring.one(),)
    return tuple(_interreduce(_buchberger(list(gens), order), order))


def _prepare(polys: Iterable[Polynomial]) -> tuple[Polynomial, ...]:
    seen = {}
    for p in polys:
        if not p.is_zero():
            c = p.canonical()
            seen[c] = None
    return tuple(sorted(seen, key=str))


def reduced_groebner(gens: "Ideal | Iterable[Polynomial]", order: MonomialOrder = GREVLEX) -> list[Polynomial]:
    """Reduced monic Groebner basis, sorted by leading monomial, largest first."""
    if isinstance(gens, Ideal):
        return list(gens.groebner(order))
    gens = list(gens)
    if not gens:
        return []
    ring = gens[0].ring
    if any(g.ring is not ring for g in gens):
        raise PolynomialError("generators from different rings")
    return list(_cached_gb(ring, _prepare(gens), order))


def is_groebner(G: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    G = [g for g in G if g]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if normal_form(s_polynomial(G[i], G[j], order), G, order):
                return False
    return True


# ------------------------------------------------------------------ ideal


class Ideal:
    """Finitely generated ideal with a per-order Groebner basis cache."""

    __slots__ = ("ring", "gens", "_gb")

    def __init__(self, ring: Ring, gens: Iterable[Polynomial] = ()):
        self.ring = ring
        gs = []
        for g in gens:
            if g.ring is not ring:
                g = g.to_ring(ring)
            gs.append(g)
        self.gens = _prepare(gs)
        self._gb: dict[MonomialOrder, tuple[Polynomial, ...]] = {}

    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring: Ring) -> "Ideal":
        return cls(ring, [])

    def groebner(self, order: MonomialOrder = GREVLEX) -> tuple[Polynomial, ...]:
        gb = self._gb.get(order)
        if gb is None:
            gb = self._gb[order] = _cached_gb(self.ring, self.gens, order)
        return gb

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def contains(self, f: Polynomial) -> bool:
        if f.ring is not self.ring:
            f = f.to_ring(self.ring)
        return normal_form(f, self.groebner(), GREVLEX).is_zero()

    def __contains__(self, f):
        return self.contains(f)

    def reduce(self, f: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        return normal_form(f, self.groebner(order), order)

    def __add__(self, other: "Ideal | Iterable[Polynomial]") -> "Ideal":
        extra = other.gens if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, self.gens + tuple(extra))

    def key(self) -> tuple[str, ...]:
        """Canonical identity: the canonicalized reduced grevlex basis."""
        return tuple(sorted(str(g.canonical()) for g in self.groebner()))

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ring.vars, self.key()))

    def to_ring(self, ring: Ring) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def __repr__(self):
        return f"<{', '.join(map(str, self.gens)) or '0'}>"

    __str__ = __repr__


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    if a.ring is not b.ring:
        raise PolynomialError("ideal comparison across rings")
    return a.key() == b.key()


def x_split(ring: Ring, x_vars: Sequence[str]) -> int:
    """Index where the x-block starts; x_vars must be the trailing variables."""
    n = len(x_vars)
    if tuple(ring.vars[len(ring.vars) - n:]) != tuple(x_vars):
        raise PolynomialError(f"{list(x_vars)} are not the trailing variables of {ring}")
    return len(ring.vars) - n


def _eliminate_trailing(gens: Sequence[Polynomial], ring: Ring, split: int) -> list[Polynomial]:
    gb = reduced_groebner(gens, Block(split)) if gens else []
    return [g for g in gb if not any(any(e[split:]) for e in g.terms)]


def elimination_ideal(I: Ideal, y_vars: Sequence[str]) -> Ideal:
    """I intersected with k[y_vars], returned in I's ring."""
    ring = I.ring
    y = [v for v in ring.vars if v in set(y_vars)]
    unknown = set(y_vars) - set(ring.vars)
    if unknown:
        raise PolynomialError(f"unknown variables {sorted(unknown)}")
    x = [v for v in ring.vars if v not in set(y_vars)]
    if not x:
        return I
    work = Ring(tuple(y) + tuple(x))
    gens = [g.to_ring(work) for g in I.gens]
    kept = _eliminate_trailing(gens, work, len(y))
    return Ideal(ring, [g.to_ring(ring) for g in kept])


def saturate(I: Ideal, h: Polynomial) -> Ideal:
    """I : h^infinity via a fresh Rabinowitsch variable."""
    if h.is_zero():
        return Ideal.unit(I.ring)
    if h.is_constant():
        return I
    z = I.ring.fresh("z")
    big = I.ring.extend(z)
    zz = big.gen(z)
    gens = [g.to_ring(big) for g in I.gens] + [zz * h.to_ring(big) - 1]
    kept = _eliminate_trailing(gens, big, I.ring.nvars)
    return Ideal(I.ring, [g.to_ring(I.ring) for g in kept])


def radical_membership(f: Polynomial, I: Ideal) -> bool:
    """True iff f vanishes on V(I) over the algebraic closure."""
    if f.is_zero():
        return True
    if I.is_unit():
        return True
    if f.is_constant():
        return False
    z = I.ring.fresh("z")
    big = I.ring.extend(z)
    zz = big.gen(z)
    J = Ideal(big, [g.to_ring(big) for g in I.gens] + [zz * f.to_ring(big) - 1])
    return J.is_unit()


# ---------------------------------------------------------- staircases


@dataclass(frozen=True)
class Staircase:
    """``monomials`` is None for an infinite staircase; otherwise x-exponents sorted ascending."""

    monomials: tuple[Exponent, ...] | None

    @property
    def finite(self) -> bool:
        return self.monomials is not None

    def __len__(self):
        if self.monomials is None:
            raise PolynomialError("infinite staircase has no length")
        return len(self.monomials)


def _x_part(e: Exponent, split: int) -> Exponent:
    return e[split:]


def lc_factors_x(g: Polynomial, split: int) -> tuple[Exponent, Polynomial]:
    """(LM_{T_x}(g), LC_{T_x}(g)) with the coefficient in the y-variables of g's ring."""
    xord = GrevLex()
    best = max((_x_part(e, split) for e in g.terms), key=xord.key)
    coef = {e[:split] + (0,) * (len(e) - split): c for e, c in g.terms.items() if e[split:] == best}
    return best, Polynomial(g.ring, coef, check=False)


def _outside_J(G: Sequence[Polynomial], J: Ideal, split: int) -> list[Polynomial]:
    return [g for g in G if not J.contains(g)]


def staircase(G: Sequence[Polynomial], J: Ideal, split: int) -> Staircase:
    """Monomials in the x-block not divisible by any LM_{T_x}(g), g in G minus J."""
    nx = G[0].ring.nvars - split if G else J.ring.nvars - split
    lead = [lc_factors_x(g, split)[0] for g in _outside_J(G, J, split)]
    if nx == 0:
        return Staircase(((),)) if not lead else Staircase(())
    bounds = []
    for k in range(nx):
        pure = [m[k] for m in lead if all(v == 0 for j, v in enumerate(m) if j != k)]
        if not pure:
            return Staircase(None)
        bounds.append(min(pure))
    mons = [m for m in product(*(range(b) for b in bounds)) if not any(_divides(l, m) for l in lead)]
    xord = GrevLex()
    mons.sort(key=xord.key)
    return Staircase(tuple(mons))


def lc_product(G: Sequence[Polynomial], J: Ideal, split: int) -> list[Polynomial]:
    """Factor list of w: square-free LC_{T_x}(g) for g in G minus J, constants dropped."""
    from .exactpoly import squarefree_part

    out: dict[Polynomial, None] = {}
    for g in _outside_J(G, J, split):
        c = lc_factors_x(g, split)[1]
        if c.is_constant():
            continue
        out[squarefree_part(c)] = None
    return list(out)
