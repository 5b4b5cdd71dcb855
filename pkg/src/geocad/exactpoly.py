"""Sparse multivariate polynomials over the rationals.

A :class:`Ring` fixes an ordered tuple of variable names; a
:class:`Polynomial` maps dense exponent tuples to nonzero ``mpq``
coefficients.  Monomial orders are small objects exposing a sort ``key``.

>>> R = Ring("x y")
>>> x, y = R.gens()
>>> str((x - y) * (x + y))
'x^2 - y^2'
>>> str(resultant(R.parse("x^2 - y"), R.parse("x - 3"), "x"))
'-y + 9'
"""

from __future__ import annotations

import ast
from enum import Enum
from functools import reduce
from math import lcm
from typing import Iterable, Mapping, Sequence

import flint
from gmpy2 import mpq, mpz

Rational = type(mpq())
Exponent = tuple[int, ...]

__all__ = [
    "Rational", "Ordering", "PolynomialError", "ParseError", "Ring", "Polynomial",
    "MonomialOrder", "Lex", "GrevLex", "Block", "GREVLEX", "compare_monomials",
    "divrem", "gcd", "gcd_many", "gcd_squarefree", "squarefree_part", "factor_integer_poly", "resultant", "specialize",
    "to_rational", "exact_quotient",
]


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    pass


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def to_rational(value) -> Rational:
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


# ---------------------------------------------------------------- orders


class MonomialOrder:
    """Base class; subclasses implement ``_key`` returning a flat tuple of ints."""

    name = "order"

    def __init__(self):
        self._cache: dict[Exponent, tuple] = {}

    def key(self, exp: Exponent) -> tuple:
        k = self._cache.get(exp)
        if k is None:
            k = self._cache[exp] = self._key(exp)
        return k

    def _key(self, exp: Exponent) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._ident() == other._ident()

    def __hash__(self):
        return hash((type(self).__name__, self._ident()))

    def _ident(self):
        return ()

    def __repr__(self):
        return f"{type(self).__name__}{self._ident()}"


class Lex(MonomialOrder):
    """Lexicographic order; ``priority`` lists variable indices, most significant first."""

    name = "lex"

    def __init__(self, priority: Sequence[int] | None = None):
        super().__init__()
        self.priority = tuple(priority) if priority is not None else None

    def _key(self, exp):
        if self.priority is None:
            return exp
        return tuple(exp[i] for i in self.priority)

    def _ident(self):
        return (self.priority,)


def _grevlex_key(exp: Exponent) -> tuple:
    # flat int tuple so callers can negate it for heap ordering
    return (sum(exp),) + tuple(-e for e in reversed(exp))


class GrevLex(MonomialOrder):
    name = "grevlex"

    def _key(self, exp):
        return _grevlex_key(exp)


class Block(MonomialOrder):
    """Block order: trailing variables ``[split:]`` (the x-block) compared first.

    Both blocks use grevlex internally.
    """

    name = "block"

    def __init__(self, split: int):
        super().__init__()
        self.split = split

    def _key(self, exp):
        s = self.split
        return _grevlex_key(exp[s:]) + _grevlex_key(exp[:s])

    def _ident(self):
        return (self.split,)


GREVLEX = GrevLex()


def compare_monomials(m1: Exponent, m2: Exponent, order: MonomialOrder) -> Ordering:
    if len(m1) != len(m2):
        raise PolynomialError("monomials from different variable contexts")
    k1, k2 = order.key(tuple(m1)), order.key(tuple(m2))
    if k1 == k2:
        return Ordering.EQUAL
    return Ordering.GREATER if k1 > k2 else Ordering.LESS


# ------------------------------------------------------------------ rings

_RINGS: dict[tuple[str, ...], "Ring"] = {}


class Ring:
    """An ordered variable context.  Instances are interned by variable names."""

    __slots__ = ("vars", "index", "nvars", "_zero_exp", "__weakref__")

    def __new__(cls, names: str | Iterable[str]):
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        names = tuple(names)
        ring = _RINGS.get(names)
        if ring is None:
            if len(set(names)) != len(names):
                raise PolynomialError(f"duplicate variable names in {names}")
            ring = object.__new__(cls)
            ring.vars = names
            ring.index = {v: i for i, v in enumerate(names)}
            ring.nvars = len(names)
            ring._zero_exp = (0,) * len(names)
            _RINGS[names] = ring
        return ring

    def __reduce__(self):
        return (Ring, (self.vars,))

    def __repr__(self):
        return f"Ring({' '.join(self.vars)!r})"

    def __len__(self):
        return self.nvars

    def var_index(self, var: str | int) -> int:
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise PolynomialError(f"variable index {var} out of range")
            return var
        try:
            return self.index[var]
        except KeyError:
            raise PolynomialError(f"unknown variable {var!r} in {self}") from None

    def gen(self, var: str | int) -> "Polynomial":
        i = self.var_index(var)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): mpq(1)}, check=False)

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, check=False)

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = to_rational(c)
        return Polynomial(self, {self._zero_exp: c} if c else {}, check=False)

    def extend(self, *names: str) -> "Ring":
        return Ring(self.vars + tuple(names))

    def prefix(self, k: int) -> "Ring":
        return Ring(self.vars[:k])

    def fresh(self, base: str = "z") -> str:
        """A variable name not used in this ring (reserved ``_`` suffix)."""
        name = f"{base}_"
        while name in self.index:
            name += "_"
        return name

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


# ------------------------------------------------------------- polynomial


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial.  ``terms`` must not be mutated by callers."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, object] | None = None, check: bool = True):
        self.ring = ring
        self._hash = None
        if terms is None:
            self.terms = {}
        elif check:
            clean = {}
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != ring.nvars or min(e, default=0) < 0:
                    raise PolynomialError(f"bad exponent {e} for {ring}")
                c = to_rational(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            self.terms = {e: c for e, c in clean.items() if c}
        else:
            self.terms = terms  # trusted: no zeros, correct arity

    # -- basic predicates
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        return self.terms.get(self.ring._zero_exp, mpq(0))

    def constant_term(self) -> Rational:
        return self.terms.get(self.ring._zero_exp, mpq(0))

    def __len__(self):
        return len(self.terms)

    # -- comparison
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.vars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise PolynomialError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Rational, mpz)) or hasattr(other, "numerator"):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial(self.ring, out, check=False)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = to_rational(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, check=False)

    def mul_term(self, exp: Exponent, c) -> "Polynomial":
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {_add_exp(e, exp): v * c for e, v in self.terms.items()}, check=False)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Rational)):
                return self.scale(other)
            other = self._coerce(other)
        elif other.ring is not self.ring:
            raise PolynomialError(f"ring mismatch: {self.ring} vs {other.ring}")
        if not self.terms or not other.terms:
            return self.ring.zero()
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            return self.mul_term(e, c)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return other.mul_term(e, c)
        out: dict[Exponent, Rational] = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Polynomial(self.ring, {e: c for e, c in out.items() if c}, check=False)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                return exact_quotient(self, other)
            other = other.constant_value()
        other = to_rational(other)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        return self.scale(1 / other)

    # -- structure
    def degree(self, var: str | int | None = None) -> int:
        """Total degree, or degree in ``var``; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.ring.var_index(var)
        return max(e[i] for e in self.terms)

    def support(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, v in enumerate(e) if v)
        return used

    def variables(self) -> list[str]:
        return [self.ring.vars[i] for i in sorted(self.support())]

    def leading_term(self, order: MonomialOrder) -> tuple[Exponent, Rational]:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        key = order.key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def lm(self, order: MonomialOrder) -> Exponent:
        return self.leading_term(order)[0]

    def lc(self, order: MonomialOrder) -> Rational:
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        return self.scale(1 / self.lc(order))

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Exponent, Rational]]:
        key = order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def coefficients_in(self, var: str | int) -> dict[int, "Polynomial"]:
        """Coefficients as polynomials (same ring, ``var`` absent) keyed by degree in ``var``."""
        i = self.ring.var_index(var)
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            d = e[i]
            buckets.setdefault(d, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {d: Polynomial(self.ring, t, check=False) for d, t in buckets.items()}

    def leading_coefficient_in(self, var: str | int) -> "Polynomial":
        cs = self.coefficients_in(var)
        return cs[max(cs)] if cs else self.ring.zero()

    def derivative(self, var: str | int) -> "Polynomial":
        i = self.ring.var_index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Polynomial(self.ring, out, check=False)

    def content(self) -> Rational:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return mpq(0)
        nums = reduce(lambda a, b: _gcd(a, b), (int(c.numerator) for c in self.terms.values()))
        dens = reduce(lcm, (int(c.denominator) for c in self.terms.values()))
        return mpq(abs(nums), dens)

    def primitive(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    def canonical(self) -> "Polynomial":
        """Integer content removed, grevlex leading coefficient positive."""
        if not self.terms:
            return self
        p = self.primitive()
        if p.lc(GREVLEX) < 0:
            p = -p
        return p

    def integer_terms(self) -> tuple[int, dict[Exponent, int]]:
        """(d, terms) with d * self having the given integer coefficients."""
        d = reduce(lcm, (int(c.denominator) for c in self.terms.values()), 1)
        return d, {e: int(c * d) for e, c in self.terms.items()}

    # -- substitution / evaluation
    def evaluate(self, point: Mapping | Sequence) -> Rational:
        if isinstance(point, Mapping):
            vals = [None] * self.ring.nvars
            for k, v in point.items():
                vals[self.ring.var_index(k)] = to_rational(v)
        else:
            vals = [to_rational(v) for v in point]
        total = mpq(0)
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise PolynomialError(f"no value for {self.ring.vars[i]}")
                    t *= vals[i] ** k
            total += t
        return total

    def substitute(self, assignment: Mapping) -> "Polynomial":
        """Substitute rationals or polynomials (of the same ring) for variables."""
        numeric: dict[int, Rational] = {}
        symbolic: dict[int, Polynomial] = {}
        for k, v in assignment.items():
            i = self.ring.var_index(k)
            if isinstance(v, Polynomial):
                if v.is_constant():
                    numeric[i] = v.constant_value()
                else:
                    symbolic[i] = self._coerce(v)
            else:
                numeric[i] = to_rational(v)
        if not numeric and not symbolic:
            return self
        out: dict[Exponent, Rational] = {}
        pending: list[tuple[dict[int, int], Exponent, Rational]] = []
        powcache: dict[tuple[int, int], Rational] = {}
        for e, c in self.terms.items():
            coef = c
            ne = list(e)
            for i, v in numeric.items():
                k = e[i]
                if k:
                    pv = powcache.get((i, k))
                    if pv is None:
                        pv = powcache[(i, k)] = v ** k
                    coef = coef * pv
                    ne[i] = 0
            if not coef:
                continue
            sym = {}
            for i in symbolic:
                if ne[i]:
                    sym[i] = ne[i]
                    ne[i] = 0
            ne = tuple(ne)
            if sym:
                pending.append((sym, ne, coef))
            else:
                out[ne] = out.get(ne, 0) + coef
        result = Polynomial(self.ring, {e: c for e, c in out.items() if c}, check=False)
        if pending:
            pcache: dict[tuple[int, int], Polynomial] = {}
            acc = result
            for sym, ne, coef in pending:
                t = Polynomial(self.ring, {ne: coef}, check=False)
                for i, k in sym.items():
                    pw = pcache.get((i, k))
                    if pw is None:
                        pw = pcache[(i, k)] = symbolic[i] ** k
                    t = t * pw
                acc = acc + t
            result = acc
        return result

    def to_ring(self, ring: Ring) -> "Polynomial":
        """Re-embed into ``ring`` by variable name; used variables must exist there."""
        if ring is self.ring:
            return self
        used = self.support()
        mapping = []
        for i in used:
            name = self.ring.vars[i]
            if name not in ring.index:
                raise PolynomialError(f"variable {name!r} not in {ring}")
            mapping.append((i, ring.index[name]))
        out = {}
        zero = [0] * ring.nvars
        for e, c in self.terms.items():
            ne = list(zero)
            for i, j in mapping:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial(ring, out, check=False)

    # -- printing
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {' '.join(self.ring.vars)!r})"


def _gcd(a: int, b: int) -> int:
    from math import gcd as g
    return g(a, b)


# -------------------------------------------------------------- printing


def _format_rational(c: Rational) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms(order):
        mono = "*".join(
            (v if k == 1 else f"{v}^{k}") for v, k in zip(p.ring.vars, e) if k
        )
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# --------------------------------------------------------------- parsing


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse ``+ - * ^``, integer and ``a/b`` literals, declared identifiers, parentheses."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty polynomial text")
    if "**" in text:
        raise ParseError("use ^ for powers")
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError(f"only integer literals allowed, got {node.value!r}")
            return ring.const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in ring.index:
                raise ParseError(f"undeclared variable {node.id!r}")
            return ring.gen(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParseError("exponent must be a non-negative integer literal")
                if node.right.value < 0:
                    raise ParseError("negative exponent")
                return a ** node.right.value
            b = walk(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b.is_constant() or b.is_zero():
                    raise ParseError("division only by nonzero constants")
                return a / b.constant_value()
        raise ParseError(f"unsupported syntax in {text!r}")

    return walk(tree)


# -------------------------------------------------------------- division


def divrem(f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder):
    """Multivariate division: returns (quotients, remainder) with f = sum q_i d_i + r."""
    if any(d.is_zero() for d in divisors):
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    leads = [d.leading_term(order) for d in divisors]
    quots: list[dict] = [{} for _ in divisors]
    rem: dict[Exponent, Rational] = {}
    work = dict(f.terms)
    key = order.key
    while work:
        e = max(work, key=key)
        c = work[e]
        for k, (le, lcoef) in enumerate(leads):
            if all(a >= b for a, b in zip(e, le)):
                qe = tuple(a - b for a, b in zip(e, le))
                qc = c / lcoef
                quots[k][qe] = quots[k].get(qe, 0) + qc
                for de, dc in divisors[k].terms.items():
                    te = _add_exp(de, qe)
                    v = work.get(te, 0) - qc * dc
                    if v:
                        work[te] = v
                    else:
                        work.pop(te, None)
                break
        else:
            rem[e] = c
            del work[e]
    qs = [Polynomial(ring, {e: c for e, c in q.items() if c}, check=False) for q in quots]
    return qs, Polynomial(ring, rem, check=False)


def exact_quotient(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly; raises otherwise."""
    (q,), r = divrem(f, [g], GREVLEX)
    if r:
        raise PolynomialError("inexact polynomial division")
    return q


# ----------------------------------------------------------- flint bridge


def _ctx(ring: Ring):
    return flint.fmpz_mpoly_ctx.get(ring.vars, "lex")


def to_flint(p: Polynomial):
    """Integer-coefficient flint image of a primitive multiple of p."""
    _, terms = p.integer_terms()
    return _ctx(p.ring).from_dict(terms)


def from_flint(q, ring: Ring) -> Polynomial:
    return Polynomial(ring, {tuple(int(k) for k in e): mpq(int(c)) for e, c in q.to_dict().items()}, check=False)


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Canonical gcd (integer content 1, grevlex leading coefficient positive)."""
    if p.ring is not q.ring:
        raise PolynomialError("ring mismatch")
    if p.is_zero() and q.is_zero():
        raise PolynomialError("gcd of two zero polynomials")
    if p.is_zero():
        return q.canonical()
    if q.is_zero():
        return p.canonical()
    if p.is_constant() or q.is_constant():
        return p.ring.one()
    return from_flint(to_flint(p).gcd(to_flint(q)), p.ring).canonical()


def gcd_many(polys: Iterable[Polynomial]) -> Polynomial:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise PolynomialError("gcd of zero polynomials")
    return reduce(gcd, polys[1:], polys[0].canonical())


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of p, canonicalized."""
    if p.is_zero():
        raise PolynomialError("square-free part of zero")
    if p.is_constant():
        return p.ring.one()
    _, facs = to_flint(p).factor_squarefree()
    out = p.ring.one()
    for f, _m in facs:
        out = out * from_flint(f, p.ring)
    return out.canonical()


def factor_integer_poly(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible factorization over Q (canonical factors, constant dropped)."""
    if p.is_zero():
        raise PolynomialError("factorization of zero")
    if p.is_constant():
        return []
    _, facs = to_flint(p).factor()
    out = [(from_flint(f, p.ring).canonical(), int(m)) for f, m in facs]
    return [(f, m) for f, m in out if not f.is_constant()]


# -------------------------------------------------------------- resultant


def _bareiss_det(mat: list[list[Polynomial]], ring: Ring) -> Polynomial:
    n = len(mat)
    if n == 0:
        return ring.one()
    m = [row[:] for row in mat]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * piv - m[i][k] * m[k][j]
                m[i][j] = num if prev == 1 else exact_quotient(num, prev)
            m[i][k] = ring.zero()
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(p: Polynomial, q: Polynomial, var: str | int) -> list[list[Polynomial]]:
    i = p.ring.var_index(var)
    pc, qc = p.coefficients_in(i), q.coefficients_in(i)
    m, n = p.degree(i), q.degree(i)
    zero = p.ring.zero()
    size = m + n
    rows = []
    for r in range(n):
        rows.append([pc.get(m - (c - r), zero) if 0 <= c - r <= m else zero for c in range(size)])
    for r in range(m):
        rows.append([qc.get(n - (c - r), zero) if 0 <= c - r <= n else zero for c in range(size)])
    return rows


def resultant(p: Polynomial, q: Polynomial, var: str | int) -> Polynomial:
    """Sylvester resultant w.r.t. ``var`` by fraction-free Bareiss elimination, p's rows first."""
    if p.ring is not q.ring:
        raise PolynomialError("ring mismatch")
    if p.is_zero() or q.is_zero():
        raise PolynomialError("resultant with the zero polynomial")
    i = p.ring.var_index(var)
    m, n = p.degree(i), q.degree(i)
    if m == 0 and n == 0:
        return p.ring.one()
    if m == 0:
        return p ** n
    if n == 0:
        return q ** m
    return _bareiss_det(sylvester_matrix(p, q, i), p.ring)


def specialize(p: Polynomial, assignment: Mapping) -> Polynomial:
    """Exact substitution; results stay in p's ring with assigned variables absent."""
    return p.substitute(assignment)


def gcd_squarefree(p: Polynomial, q: Polynomial | None = None, mode: str = "gcd", var: str | int | None = None) -> Polynomial:
    """Dispatch for ``gcd``, ``squarefree_part`` and ``derivative`` (needs ``var``)."""
    if mode == "gcd":
        if q is None:
            raise PolynomialError("gcd needs two polynomials")
        return gcd(p, q)
    if mode == "squarefree_part":
        return squarefree_part(p)
    if mode == "derivative":
        if var is None:
            raise PolynomialError("derivative needs a variable")
        return p.derivative(var)
    raise PolynomialError(f"unknown mode {mode!r}")
