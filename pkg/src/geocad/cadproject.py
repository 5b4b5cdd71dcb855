"""Projection phase of the geometric CAD over basic constructible sets.

Sets at level n live in a ring whose last variable is the one projected away;
every projection operator returns sets in the prefix ring of the first n-1
variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .decompose import factor_split, minimal_primes
from .exactpoly import Block, GREVLEX, Polynomial, Ring, squarefree_part
from .groebner import Ideal, elimination_ideal, lc_product, normal_form, radical_membership
from .hermite import charpoly_cleared, hermite_matrix

__all__ = [
    "BasicConstructibleSet", "HEURISTICS", "proj1", "proj2", "proj2sub", "cad_projection",
    "simplify_sets", "restrict_to_constraints", "elimination_chain", "decompose_difference",
]

HEURISTICS = frozenset({"dedup", "empty", "squarefree", "factor", "discard-open"})

# origin tags: which operator produced a set (discard-open only touches "proj1")
INPUT, PROJ1, PROJ2 = "input", "proj1", "proj2"


@dataclass(frozen=True)
class BasicConstructibleSet:
    """V(ideal) intersected with D(h); ``h = 1`` encodes a closed set."""

    ideal: Ideal
    h: Polynomial
    origin: str = INPUT
    certified: bool = True
    label: str = field(default="", compare=False)

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    @classmethod
    def make(cls, ring: Ring, eqs: Iterable[Polynomial] = (), h: Polynomial | None = None, **kw) -> "BasicConstructibleSet":
        return cls(Ideal(ring, list(eqs)), h if h is not None else ring.one(), **kw)

    def key(self) -> tuple:
        gb = self.ideal.groebner()
        r = normal_form(self.h, gb, GREVLEX) if gb else self.h
        return (self.ideal.key(), str(r.canonical()))

    def is_open(self) -> bool:
        return self.ideal.is_zero()

    def to_ring(self, ring: Ring) -> "BasicConstructibleSet":
        if ring is self.ring:
            return self
        return replace(self, ideal=self.ideal.to_ring(ring), h=self.h.to_ring(ring))

    def contains_rational(self, point: Sequence) -> bool:
        return all(g.evaluate(point) == 0 for g in self.ideal.gens) and self.h.evaluate(point) != 0

    def defining_polynomials(self) -> list[Polynomial]:
        polys = list(self.ideal.gens)
        if not self.h.is_constant():
            polys.extend(f for f, _ in factor_split(self.h))
        return polys

    def __str__(self):
        eqs = ", ".join(map(str, self.ideal.gens)) or "0"
        return f"V({eqs})" if self.h.is_constant() else f"V({eqs}) & D({self.h})"

    def to_dict(self) -> dict:
        return {"eqs": [str(g) for g in self.ideal.gens], "ineq": str(self.h), "origin": self.origin,
                "certified": self.certified}


def _split_of(ring: Ring) -> int:
    return ring.nvars - 1


def _y_only(ideal: Ideal, split: int) -> Ideal:
    G = ideal.groebner(Block(split))
    return Ideal(ideal.ring, [g for g in G if not any(any(e[split:]) for e in g.terms)])


def _prod(ps: Sequence[Polynomial], ring: Ring) -> Polynomial:
    out = ring.one()
    for p in ps:
        out = out * p
    return out


def _emit(base: Ring, ideal: Ideal, h: Polynomial, origin: str, certified: bool) -> BasicConstructibleSet:
    return BasicConstructibleSet(ideal.to_ring(base), h.to_ring(base), origin, certified)


def decompose_difference(J: Ideal, K: Ideal) -> list[tuple[Ideal, Polynomial]]:
    """V(J) minus V(K) (K containing J) as V(J + <k_1..k_{i-1}>) & D(k_i)."""
    gb = sorted(K.groebner(), key=lambda g: GREVLEX.key(g.lm(GREVLEX)))
    out = []
    acc: list[Polynomial] = []
    for k in gb:
        r = J.reduce(k)
        if r.is_zero():
            continue
        out.append((J + acc, r))
        acc.append(r)
    return out


# --------------------------------------------------------------- Proj1


def _whole_fiber_parts(I: Ideal, h: Polynomial, factor: bool) -> list[Ideal]:
    """V(I + <h>), or one variety per irreducible factor of h when factoring is enabled."""
    if not factor or h.is_constant():
        return [I + [h]]
    facs = [f for f, _ in factor_split(h)]
    return [I + [f] for f in facs] if len(facs) > 1 else [I + [h]]


def proj1(I: Ideal, J: Ideal, h: Polynomial, certified: bool = True, factor: bool = False) -> list[BasicConstructibleSet]:
    """Sets covering V(J) over whose connected pieces V(I) & D(h) is geometrically delineable."""
    ring = I.ring
    split = _split_of(ring)
    base = ring.prefix(split)
    if I.is_unit():
        return [_emit(base, J, ring.one(), PROJ1, certified)]
    G = I.groebner(Block(split))
    elim = _y_only(I, split)
    if elim != J:
        out = [_emit(base, a, b, PROJ1, certified) for a, b in decompose_difference(J, elim)]
        for comp in minimal_primes(elim):
            out.extend(proj1(comp.ideal + I, comp.ideal, h, certified and comp.certified, factor))
        return out
    if all(not any(any(e[split:]) for e in g.terms) for g in G):
        # the fiber is the whole line: delineate V(h); its factors jointly suffice
        parts = _whole_fiber_parts(I, h, factor)
        out = []
        for k, P in enumerate(parts):
            out.extend(proj1(P, J, ring.one(), certified, factor))
            for Q in parts[:k]:
                out.extend(proj2(P, Q, J, ring.one(), ring.one(), certified, factor))
        return out
    w = lc_product(G, J, split)
    W = _prod(w, ring)
    H = hermite_matrix(I, J, h, split, G)
    cs, _m = charpoly_cleared(H)
    out = []
    # i runs to s: the i = s piece (all lower coefficients zero, c_s = 1) keeps V(J) & D(w) covered
    for i in range(H.size + 1):
        if cs[i].is_zero():
            continue
        out.append(_emit(base, J + cs[:i], W * cs[i], PROJ1, certified))
    for comp in minimal_primes(J + [W]):
        out.extend(proj1(comp.ideal + I, comp.ideal, h, certified and comp.certified, factor))
    return out


# --------------------------------------------------------------- Proj2


def proj2sub(I0: Ideal, J0: Ideal, hp: Polynomial, w: Polynomial, certified: bool = True) -> list[BasicConstructibleSet]:
    ring = I0.ring
    split = _split_of(ring)
    base = ring.prefix(split)
    z = ring.fresh("z")
    big = ring.extend(z)
    Iz = Ideal(big, [g.to_ring(big) for g in I0.gens] + [big.gen(z) * hp.to_ring(big) - 1])
    # emptiness and dominance are read off the Rabinowitsch ideal, whose basis is G
    if Iz.is_unit():
        return []
    Gz = Iz.groebner(Block(split))
    elim = Ideal(ring, [g.to_ring(ring) for g in _y_only(Iz, split).gens])
    if elim != J0:
        out = []
        for comp in minimal_primes(elim):
            out.extend(proj2sub(I0 + comp.ideal, comp.ideal, hp, w, certified and comp.certified))
        return out
    v = _prod(lc_product(Gz, J0.to_ring(big), split), big).to_ring(ring)
    out = [_emit(base, J0, w * v, PROJ2, certified)]
    for comp in minimal_primes(J0 + [v]):
        out.extend(proj2sub(I0 + comp.ideal, comp.ideal, hp, w, certified and comp.certified))
    return out


def proj2(I: Ideal, Ip: Ideal, J: Ideal, h: Polynomial, hp: Polynomial, certified: bool = True,
          factor: bool = False) -> list[BasicConstructibleSet]:
    """Sets over which the sections of V(I) & D(h) and V(I') & D(h') are identical or disjoint."""
    ring = I.ring
    split = _split_of(ring)
    if I.is_unit():
        return []
    G = I.groebner(Block(split))
    elim = _y_only(I, split)
    if elim != J:
        out = []
        for comp in minimal_primes(elim):
            out.extend(proj2(I + comp.ideal, Ip, comp.ideal, h, hp, certified and comp.certified, factor))
        return out
    if I == J:
        out = []
        for P in _whole_fiber_parts(I, h, factor):
            out.extend(proj2(P, Ip, J, ring.one(), hp, certified, factor))
        return out
    W = _prod(lc_product(G, J, split), ring)
    # common sections live on V(I + I') & D(h h'); with h dropped, disjoint pairs would still emit sets
    out = proj2sub(I + Ip, Ideal.zero(ring), h * hp, W, certified)
    for comp in minimal_primes(J + [W]):
        out.extend(proj2(I + comp.ideal, Ip, comp.ideal, h, hp, certified and comp.certified, factor))
    return out


# ------------------------------------------------------- simplification


def _unit_on(I: Ideal, f: Polynomial) -> bool:
    return (I + [f]).is_unit()


def _simplify_one(S: BasicConstructibleSet, flags: frozenset) -> list[BasicConstructibleSet]:
    I = S.ideal
    ring = S.ring
    if I.is_unit():
        return [] if "empty" in flags else [S]
    if "squarefree" in flags and not I.is_zero():
        I = Ideal(ring, [squarefree_part(g) for g in I.groebner()])
    pieces = [I]
    if "factor" in flags:
        gb = I.groebner()
        if len(gb) == 1 and not gb[0].is_constant():
            facs = factor_split(gb[0])
            if len(facs) > 1:
                pieces = [Ideal(ring, [f]) for f, _ in facs]
    out = []
    for P in pieces:
        gb = P.groebner()
        if "factor" in flags or "squarefree" in flags:
            hs: list[Polynomial] = []
            empty = False
            if S.h.is_constant():
                todo = []
            elif "factor" in flags:
                todo = [f for f, _ in factor_split(S.h)]
            else:
                todo = [S.h]
            for f in todo:
                r = normal_form(f, gb, GREVLEX) if gb else f
                if r.is_zero():
                    empty = True
                    break
                if r.is_constant():
                    continue
                parts = [g for g, _ in factor_split(r)] if "factor" in flags else [squarefree_part(r)]
                for g in parts:
                    if "empty" in flags and _unit_on(P, g):
                        continue
                    if g not in hs:
                        hs.append(g)
            if empty:
                if "empty" in flags:
                    continue
                h = S.h
            else:
                h = _prod(sorted(hs, key=str), ring)
        else:
            h = S.h
        if "empty" in flags and radical_membership(h, P):
            continue
        out.append(replace(S, ideal=P, h=h))
    return out


def simplify_sets(sets: Iterable[BasicConstructibleSet], flags: Iterable[str] = HEURISTICS, full: bool = False) -> list[BasicConstructibleSet]:
    """Apply the enabled heuristics; ``discard-open`` only acts when ``full`` is set."""
    flags = frozenset(flags)
    out: list[BasicConstructibleSet] = []
    for S in sets:
        out.extend(_simplify_one(S, flags))
    if "discard-open" in flags and full:
        out = [S for S in out if not (S.origin == PROJ1 and S.is_open())]
    if "dedup" in flags:
        merged: dict[tuple, BasicConstructibleSet] = {}
        for S in out:
            k = S.key()
            old = merged.get(k)
            if old is None:
                merged[k] = S
            else:
                origin = old.origin if old.origin == S.origin else (PROJ2 if PROJ2 in (old.origin, S.origin) else old.origin)
                merged[k] = replace(old, origin=origin, certified=old.certified and S.certified)
        out = sorted(merged.values(), key=lambda s: s.key())
    return out


# ------------------------------------------------------------ top level


def cad_projection(sets: Sequence[BasicConstructibleSet], flags: Iterable[str] = HEURISTICS, full: bool = False) -> list[BasicConstructibleSet]:
    """Proj1 of every set plus Proj2 of every pair, then simplification."""
    if not sets:
        return []
    ordered = sorted(sets, key=lambda s: s.key())
    ring = ordered[0].ring
    zero = Ideal.zero(ring)
    flags = frozenset(flags)
    factor = "factor" in flags
    raw: list[BasicConstructibleSet] = []
    for S in ordered:
        raw.extend(proj1(S.ideal, zero, S.h, S.certified, factor))
    for i, Si in enumerate(ordered):
        for Sj in ordered[:i]:
            raw.extend(proj2(Si.ideal, Sj.ideal, zero, Si.h, Sj.h, Si.certified and Sj.certified, factor))
    return simplify_sets(raw, flags, full)


def elimination_chain(eqs: Ideal, ineq: Polynomial | None = None) -> list[Ideal]:
    """chain[i] = <eqs, z*ineq - 1> intersected with the first i variables, for i = 0..n."""
    ring = eqs.ring
    n = ring.nvars
    if ineq is not None and not ineq.is_constant():
        z = ring.fresh("z")
        big = ring.extend(z)
        full = Ideal(big, [g.to_ring(big) for g in eqs.gens] + [big.gen(z) * ineq.to_ring(big) - 1])
    else:
        big, full = ring, eqs
    chain = []
    for i in range(n + 1):
        sub = ring.prefix(i)
        if full.is_unit():
            chain.append(Ideal.unit(sub))
            continue
        e = elimination_ideal(full, ring.vars[:i]) if i < big.nvars else full
        chain.append(Ideal(sub, [g.to_ring(sub) for g in e.gens]))
    return chain


def restrict_to_constraints(sets: Iterable[BasicConstructibleSet], constraint: Ideal | None, flags: Iterable[str] = HEURISTICS) -> list[BasicConstructibleSet]:
    """Intersect every set with V(constraint) and drop the empty results."""
    sets = list(sets)
    if constraint is None:
        return sets
    out = [replace(S, ideal=S.ideal + constraint.to_ring(S.ring)) for S in sets]
    return simplify_sets(out, set(flags) | {"empty"}, full=False)
