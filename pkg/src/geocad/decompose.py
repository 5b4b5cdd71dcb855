"""Minimal associated primes by recursive factor splitting.

Each returned component carries a ``certified`` flag: True only when its
primality was established (principal irreducible, linear elimination onto a
prime, zero-dimensional with an irreducible separating minimal polynomial).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from gmpy2 import mpq

from .exactpoly import (
    GREVLEX,
    Polynomial,
    PolynomialError,
    Ring,
    factor_integer_poly,
)
from .groebner import Ideal, normal_form, radical_membership

__all__ = [
    "PrimeComponent", "factorize_univariate", "factor_split", "minimal_primes",
    "dimension", "quotient_basis", "minimal_polynomial",
]


@dataclass(frozen=True)
class PrimeComponent:
    ideal: Ideal
    certified: bool

    def __repr__(self):
        flag = "" if self.certified else " (uncertified)"
        return f"PrimeComponent({self.ideal}{flag})"


def _factor_order(item: tuple[Polynomial, int]):
    # degree, then larger grevlex monomials first, then coefficients: x before y + 1, x - 1 before x + 1
    f, m = item
    terms = [(tuple(-k for k in GREVLEX.key(e)), c) for e, c in f.sorted_terms(GREVLEX)]
    return (f.degree(), terms, m)


def factorize_univariate(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible factors over Q of a univariate polynomial, by degree then text."""
    if p.is_zero():
        raise PolynomialError("factorization of zero")
    if len(p.support()) > 1:
        raise PolynomialError(f"{p} is not univariate")
    return sorted(factor_integer_poly(p), key=_factor_order)


def factor_split(p: Polynomial | list) -> list[tuple[Polynomial, int]]:
    """Irreducible factors with multiplicities; a list input is treated as a product.

    List items may be polynomials or (polynomial, multiplicity) pairs; product
    structure is kept and multiplicities of equal factors are merged.
    """
    items = p if isinstance(p, list) else [(p, 1)]
    merged: dict[Polynomial, int] = {}
    for item in items:
        f, m = item if isinstance(item, tuple) else (item, 1)
        if f.is_zero():
            raise PolynomialError("factorization of zero")
        for g, k in factor_integer_poly(f):
            merged[g] = merged.get(g, 0) + k * m
    return sorted(merged.items(), key=_factor_order)


# ---------------------------------------------------------- quotient ring


def dimension(I: Ideal) -> int:
    """Krull dimension from a maximal independent set of grevlex leading monomials; -1 for <1>."""
    if I.is_unit():
        return -1
    n = I.ring.nvars
    lms = [g.lm(GREVLEX) for g in I.groebner()]
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = frozenset(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def quotient_basis(I: Ideal) -> list[tuple[int, ...]]:
    """Standard monomials of a zero-dimensional ideal (grevlex), ascending."""
    gb = I.groebner()
    lms = [g.lm(GREVLEX) for g in gb]
    n = I.ring.nvars
    bounds = []
    for k in range(n):
        pure = [m[k] for m in lms if all(v == 0 for j, v in enumerate(m) if j != k)]
        if not pure:
            raise PolynomialError("ideal is not zero-dimensional")
        bounds.append(min(pure))
    out = []

    def rec(prefix):
        if len(prefix) == n:
            e = tuple(prefix)
            if not any(all(a <= b for a, b in zip(m, e)) for m in lms):
                out.append(e)
            return
        for d in range(bounds[len(prefix)]):
            rec(prefix + [d])

    rec([])
    out.sort(key=GREVLEX.key)
    return out


def _solve_dependency(vectors: list[list], target: list) -> list | None:
    """Coefficients c with sum c_i vectors_i = target, or None (exact Gaussian elimination)."""
    m = len(vectors)
    dim = len(target)
    rows = [[vectors[j][r] for j in range(m)] + [target[r]] for r in range(dim)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, dim) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(dim):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][m] for i in range(r, dim)):
        return None
    sol = [mpq(0)] * m
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][m]
    return sol


def minimal_polynomial(u: Polynomial, I: Ideal, var: str = "t") -> tuple[Polynomial, int]:
    """(minimal polynomial of u in Q[x]/I as a polynomial in ``var``, dim of the quotient)."""
    basis = quotient_basis(I)
    index = {e: k for k, e in enumerate(basis)}
    gb = I.groebner()

    def vec(p):
        r = normal_form(p, gb, GREVLEX)
        v = [mpq(0)] * len(basis)
        for e, c in r.terms.items():
            v[index[e]] = c
        return v

    powers = [vec(I.ring.one())]
    cur = I.ring.one()
    T = Ring((var,))
    while True:
        cur = normal_form(cur * u, gb, GREVLEX)
        target = vec(cur)
        sol = _solve_dependency(powers, target)
        if sol is not None:
            k = len(powers)
            terms = {(k,): mpq(1)}
            for j, c in enumerate(sol):
                if c:
                    terms[(j,)] = -c
            return Polynomial(T, terms), len(basis)
        powers.append(target)


# -------------------------------------------------------------- splitting


def _linear_variable(g: Polynomial) -> int | None:
    """A variable occurring in g only linearly with a constant coefficient."""
    for v in sorted(g.support()):
        if g.degree(v) != 1:
            continue
        cs = g.coefficients_in(v)
        if cs[1].is_constant():
            return v
    return None


def _split(I: Ideal, rng: random.Random, depth: int = 0) -> list[tuple[Ideal, bool]]:
    if depth > 64:
        return [(I, False)]
    if I.is_unit():
        return []
    gb = I.groebner()
    if not gb:
        return [(I, True)]
    ring = I.ring
    # branch on any reducible or non-reduced basis element
    for g in gb:
        facs = factor_integer_poly(g)
        if len(facs) > 1 or (facs and facs[0][1] > 1):
            out = []
            for f, _m in facs:
                out.extend(_split(I + [f], rng, depth + 1))
            return out
    # eliminate a linearly occurring variable
    for g in gb:
        v = _linear_variable(g)
        if v is None:
            continue
        cs = g.coefficients_in(v)
        repl = -cs.get(0, ring.zero()) / cs[1].constant_value()
        rest = [q.substitute({v: repl}) for q in gb if q is not g]
        sub = Ideal(ring, rest)
        return [(P + [g], ok) for P, ok in _split(sub, rng, depth + 1)]
    if len(gb) == 1:
        return [(I, True)]
    if dimension(I) == 0:
        return _split_zero_dim(I, rng, depth)
    return [(I, False)]


def _split_zero_dim(I: Ideal, rng: random.Random, depth: int) -> list[tuple[Ideal, bool]]:
    from .groebner import elimination_ideal

    ring = I.ring
    extra = []
    for v in ring.vars:
        (elim,) = elimination_ideal(I, [v]).gens or (None,)
        if elim is None:
            continue
        facs = factorize_univariate(elim)
        if len(facs) > 1:
            out = []
            for f, _m in facs:
                out.extend(_split(I + [f], rng, depth + 1))
            return out
        if facs and facs[0][1] > 1:
            extra.append(facs[0][0])
    if extra:
        # square-free eliminants for every variable make the ideal radical
        return _split(I + extra, rng, depth + 1)
    for attempt in range(6):
        bound = 3 + 4 * attempt
        coeffs = [rng.randint(-bound, bound) or 1 for _ in ring.vars]
        u = ring.zero()
        for c, x in zip(coeffs, ring.gens()):
            u = u + x * c
        mu, dim_a = minimal_polynomial(u, I)
        if mu.degree() != dim_a:
            continue
        facs = factor_integer_poly(mu)
        if len(facs) == 1 and facs[0][1] == 1:
            return [(I, True)]
        out = []
        for f, _m in facs:
            fu = _compose(f, u)
            out.extend(_split(I + [fu], rng, depth + 1))
        return out
    return [(I, False)]


def _compose(f: Polynomial, u: Polynomial) -> Polynomial:
    """f(u) for univariate f."""
    out = u.ring.zero()
    for (k,), c in f.terms.items():
        out = out + (u ** k) * c
    return out


# seed for the random separating forms; the command line may override it
DEFAULT_SEED = 0


def minimal_primes(J: Ideal, seed: int | None = None) -> list[PrimeComponent]:
    """Minimal primes of J in canonical order; [] for the unit ideal."""
    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    raw = _split(J, rng)
    uniq: dict[tuple, tuple[Ideal, bool]] = {}
    for P, ok in raw:
        k = P.key()
        if k in uniq:
            uniq[k] = (uniq[k][0], uniq[k][1] and ok)
        else:
            uniq[k] = (P, ok)
    items = sorted(uniq.values(), key=lambda t: t[0].key())
    keep = []
    for i, (P, ok) in enumerate(items):
        redundant = False
        for j, (Q, _) in enumerate(items):
            if i == j:
                continue
            # V(P) inside V(Q) makes P non-minimal
            if all(radical_membership(q, P) for q in Q.gens):
                if not all(radical_membership(p, Q) for p in P.gens) or j < i:
                    redundant = True
                    break
        if not redundant:
            keep.append(PrimeComponent(P, ok))
    return keep
