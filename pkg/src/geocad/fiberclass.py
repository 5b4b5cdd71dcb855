"""Classification of parameter space by the cardinality of geometric fibers.

The input ring lists the parameters ``y`` first and the unknowns ``x`` last;
``split`` is the number of parameters.  Each returned :class:`Region` says
that over V(a) minus V(b) the open part D(h) of every fiber has ``count``
points over the algebraic closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .decompose import dimension, minimal_primes, quotient_basis
from .exactpoly import Block, Polynomial, Ring, exact_quotient, gcd, gcd_many, squarefree_part
from .groebner import Ideal, elimination_ideal, lc_product, saturate, staircase
from .hermite import hermite_matrix, minors_ideal

__all__ = ["Region", "InvariantViolation", "fiber_classification", "fiber_count_oracle", "INFINITY"]

INFINITY = math.inf


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class Region:
    a: Ideal
    b: Ideal
    count: int | float
    certified: bool = True

    def contains(self, point: dict) -> bool:
        """Whether a rational parameter point lies in V(a) minus V(b)."""
        on_a = all(g.evaluate(point) == 0 for g in self.a.gens)
        on_b = all(g.evaluate(point) == 0 for g in self.b.gens)
        return on_a and not on_b

    def is_empty_syntactically(self) -> bool:
        return self.a.is_unit() or self.b.is_zero()

    def to_dict(self) -> dict:
        count = "inf" if self.count == INFINITY else int(self.count)
        return {
            "a": list(self.a.key()) or ["0"],
            "b": list(self.b.key()) or ["0"],
            "count": count,
            "certified": self.certified,
        }


@dataclass
class _Trace:
    chain: list = field(default_factory=list)
    calls: int = 0


def _y_part(ideal: Ideal, split: int) -> list[Polynomial]:
    return [g for g in ideal.groebner(Block(split)) if not any(any(e[split:]) for e in g.terms)]


def _to_base(ideal: Ideal, ring: Ring) -> Ideal:
    return ideal if ideal.ring is ring else Ideal(ring, [g.to_ring(ring) for g in ideal.gens])


def _product(w: Sequence[Polynomial], I: Ideal) -> Ideal:
    W = w[0].ring.one() if w else I.ring.one()
    for f in w:
        W = W * f
    return Ideal(I.ring, [W * g for g in I.gens])


def fiber_classification(
    I: Ideal, J: Ideal, h: Polynomial, split: int, certified: bool = True, _trace: _Trace | None = None
) -> list[Region]:
    """Regions (a, b, r): on V(a) minus V(b) the fiber of V(I) inside D(h) has r points."""
    trace = _trace or _Trace()
    trace.calls += 1
    ring = I.ring
    base = ring.prefix(split)
    G = I.groebner(Block(split))
    if I.is_unit():
        return []
    elim = Ideal(ring, _y_part(I, split))
    J = _to_base(J, ring) if J.ring is not ring else J
    if elim != J:
        out = []
        for comp in minimal_primes(elim):
            out.extend(fiber_classification(comp.ideal + I, comp.ideal, h, split, certified and comp.certified, trace))
        return out
    state = (J.key(), h.is_constant())
    if state in trace.chain:
        raise InvariantViolation(f"recursion revisited {J} with the same case")
    trace.chain.append(state)
    try:
        return _classify_dominant(I, J, h, split, certified, trace, G, base)
    finally:
        trace.chain.pop()


def _classify_dominant(I, J, h, split, certified, trace, G, base) -> list[Region]:
    ring = I.ring
    w = lc_product(G, J, split)
    B = staircase(G, J, split)
    wideal = Ideal(ring, [_prod(w, ring)])
    out: list[Region] = []
    if not B.finite:
        if (I + [h]).is_unit():
            out.append(Region(_to_base(J, base), _to_base(wideal, base), INFINITY, certified))
            for comp in minimal_primes(J + wideal):
                out.extend(fiber_classification(comp.ideal + I, comp.ideal, h, split, certified and comp.certified, trace))
            return out
        z = ring.fresh("z")
        big = ring.extend(z)
        zz = big.gen(z)
        Iz = Ideal(big, [g.to_ring(big) for g in I.gens] + [zz * h.to_ring(big) - 1])
        sub = fiber_classification(Iz, J.to_ring(big), big.one(), split, certified, trace)
        return [Region(_to_base(r.a, base), _to_base(r.b, base), r.count, r.certified) for r in sub]
    H = hermite_matrix(I, J, h, split, G)
    s = H.size
    minors = [minors_ideal(H, i) for i in range(s + 2)]
    for i in range(s + 1):
        a = minors[i + 1] + J
        b = _product(w, minors[i])
        out.append(Region(_to_base(a, base), _to_base(b, base), i, certified))
    for comp in minimal_primes(J + wideal):
        out.extend(fiber_classification(comp.ideal + I, comp.ideal, h, split, certified and comp.certified, trace))
    return out


def _prod(w: Sequence[Polynomial], ring: Ring) -> Polynomial:
    W = ring.one()
    for f in w:
        W = W * f
    return W


# ---------------------------------------------------------------- oracle


def fiber_count_oracle(system: Sequence[Polynomial], h: Polynomial | None = None,
                       unknowns: Sequence[str] | None = None) -> int | float:
    """Distinct points of V(system) inside D(h) over the algebraic closure.

    Specialized parameters must be gone; the count is over ``unknowns``
    (default: every variable of the ring).
    """
    source = h.ring if h is not None else (system[0].ring if system else None)
    if source is None:
        return INFINITY
    ring = Ring(tuple(unknowns)) if unknowns is not None else source
    system = [p.to_ring(ring) for p in system if not p.is_zero()]
    h = h.to_ring(ring) if h is not None else None
    if h is not None and h.is_zero():
        return 0
    if not system:
        return 1 if ring.nvars == 0 else INFINITY
    if ring.nvars == 1:
        g = gcd_many(system)
        if g.is_constant():
            return 0
        u = squarefree_part(g)
        if h is not None and not h.is_constant():
            k = gcd(u, squarefree_part(h))
            u = exact_quotient(u, k) if not k.is_constant() else u
        return u.degree()
    I = Ideal(ring, system)
    if h is not None and not h.is_constant():
        I = saturate(I, h)
    if I.is_unit():
        return 0
    if dimension(I) > 0:
        return INFINITY
    extra = []
    for v in ring.vars:
        e = elimination_ideal(I, [v]).gens
        if e:
            extra.append(squarefree_part(e[0]))
    return len(quotient_basis(I + extra))
