"""Lifting phase of the cylindrical decomposition and its applications.

Cells are addressed by path: the ordinal of each cell among all sections
and bands over its parent (bands even, sections odd, starting at 0).  In
relevant-only mode cells outside every projection set of their level are
not created, but the surviving cells keep their full-mode ordinals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cadproject import (
    HEURISTICS,
    BasicConstructibleSet,
    cad_projection,
    elimination_chain,
    restrict_to_constraints,
)
from .exactpoly import ParseError, Polynomial, Ring, squarefree_part, to_rational
from .groebner import Ideal
from .realalg import (
    IdenticallyZero,
    Level1Cell,
    RealAlgebraicNumber,
    compare,
    partition1d,
    roots_at_sample,
    sections_and_bands,
    sign_at_point,
)
from .exactpoly import Ordering

__all__ = [
    "Cell", "CellTree", "geometric_cad", "lift_cell", "locate", "decide", "classify_real",
    "cad_with_constraints", "PrenexFormula", "parse_formula", "cell_dimension",
    "fiber_sections", "project_all", "formula_sets", "real_count_at", "RealCountRegion",
]

POINT, INTERVAL, SECTION, BAND = "point", "interval", "section", "band"


@dataclass(eq=False)
class Cell:
    level: int
    kind: str
    index: int
    sample: list[RealAlgebraicNumber]
    parent: "Cell | None" = None
    membership: dict[int, bool] = field(default_factory=dict)
    children: list["Cell"] = field(default_factory=list)
    # polynomials known to vanish at the sample; spares exact zero proofs
    zeros: set = field(default_factory=set, repr=False)

    @property
    def path(self) -> tuple[int, ...]:
        out = []
        c = self
        while c is not None and c.level > 0:
            out.append(c.index)
            c = c.parent
        return tuple(reversed(out))

    @property
    def is_section(self) -> bool:
        return self.kind in (POINT, SECTION)

    def to_dict(self) -> dict:
        return {
            "path": list(self.path),
            "level": self.level,
            "kind": self.kind,
            "sample": [a.to_dict() for a in self.sample],
            "membership": {str(k): v for k, v in sorted(self.membership.items())},
        }


def cell_dimension(cell: Cell) -> int:
    """Number of interval or band steps on the path to the cell."""
    d = 0
    c = cell
    while c is not None and c.level > 0:
        d += not c.is_section
        c = c.parent
    return d


@dataclass
class CellTree:
    ring: Ring
    sets: list[BasicConstructibleSet]
    precells: list[list[BasicConstructibleSet]]
    root: Cell
    mode: str = "full"
    certified: bool = True
    line: list[Level1Cell] = field(default_factory=list)

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def level(self, i: int) -> list[Cell]:
        """Cells of level i in path order."""
        out = [self.root]
        for _ in range(i):
            out = [c for p in out for c in p.children]
        return out

    @property
    def levels(self) -> list[list[Cell]]:
        return [self.level(i) for i in range(1, self.nvars + 1)]

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.level(i)) for i in range(1, self.nvars + 1))

    def is_empty(self) -> bool:
        return not self.root.children

    def to_dict(self) -> dict:
        return {
            "vars": list(self.ring.vars),
            "mode": self.mode,
            "certified": self.certified,
            "counts": list(self.counts()),
            "sets": [s.to_dict() for s in self.sets],
            "cells": [c.to_dict() for lv in self.levels for c in lv],
        }


# ---------------------------------------------------------------- signs


def _zkey(p: Polynomial) -> str:
    return str(p.canonical())


def _sign(cell_sample: Sequence[RealAlgebraicNumber], p: Polynomial, zeros: set) -> int:
    if _zkey(p) in zeros:
        return 0
    s = sign_at_point(p, cell_sample)
    if s == 0:
        zeros.add(_zkey(p))
    return s


def _member(S: BasicConstructibleSet, sample: Sequence[RealAlgebraicNumber], zeros: set) -> bool:
    for g in S.ideal.gens:
        if _sign(sample, g, zeros) != 0:
            return False
    return S.h.is_constant() and not S.h.is_zero() or _sign(sample, S.h, zeros) != 0


# -------------------------------------------------------------- sections


def _roots_or_none(p: Polynomial, sample: list[RealAlgebraicNumber]):
    if p.degree(len(sample)) <= 0:
        return None
    try:
        return roots_at_sample(p, sample)
    except IdenticallyZero:
        return None


def _set_sections(S: BasicConstructibleSet, sample: list[RealAlgebraicNumber], base_zeros: set) -> list[tuple[RealAlgebraicNumber, list[Polynomial]]]:
    """Real points of S in the fiber line over sample, with polynomials vanishing there."""
    xi = len(sample)
    gens = S.ideal.groebner() if S.ideal.gens else []
    lower = [g for g in gens if g.degree(xi) <= 0]
    if any(_sign(sample, g, base_zeros) != 0 for g in lower):
        return []
    upper = [g for g in gens if g.degree(xi) > 0]
    for k, g in enumerate(upper):
        roots = _roots_or_none(g, sample)
        if roots is None:
            continue
        out = []
        for r in roots:
            pt = sample + [r]
            zeros = [g]
            ok = True
            for other in upper[k + 1:]:
                if sign_at_point(other, pt) != 0:
                    ok = False
                    break
                zeros.append(other)
            if ok and (S.h.is_constant() or sign_at_point(S.h, pt) != 0):
                out.append((r, zeros))
        return out
    # the fiber of V(I) is the whole line, so the sections come from V(h)
    if S.h.is_constant():
        return []
    out = []
    for f in _h_factors(S.h):
        roots = _roots_or_none(f, sample)
        if roots:
            out.extend((r, [f]) for r in roots)
    return out


def _h_factors(h: Polynomial) -> list[Polynomial]:
    return [squarefree_part(h)]


def fiber_sections(sets: Sequence[BasicConstructibleSet], sample: Sequence[RealAlgebraicNumber],
                   base_zeros: set | None = None) -> list[tuple[RealAlgebraicNumber, set]]:
    """Sorted distinct section values over sample for a family of sets."""
    sample = list(sample)
    base_zeros = set() if base_zeros is None else base_zeros
    found: list[tuple[RealAlgebraicNumber, set]] = []
    for S in sets:
        for r, zs in _set_sections(S, sample, base_zeros):
            for j, (q, zq) in enumerate(found):
                if compare(q, r) is Ordering.EQUAL:
                    zq.update(map(_zkey, zs))
                    break
            else:
                found.append((r, set(map(_zkey, zs))))
    found.sort(key=_cmp_key)
    return found


class _cmp_key:
    __slots__ = ("r",)

    def __init__(self, item):
        self.r = item[0]

    def __lt__(self, other):
        return compare(self.r, other.r) is Ordering.LESS


def lift_cell(cell: Cell, precells_i: Sequence[BasicConstructibleSet], relevant_only: bool = False) -> list[Cell]:
    """Sections and bands over a cell, with membership in each set of the new level."""
    sample = list(cell.sample)
    sections = fiber_sections(precells_i, sample, cell.zeros)
    lv = cell.level + 1
    roots = [r for r, _ in sections]
    layout = sections_and_bands(roots)
    zeros_by_root = {id(r): zs for r, zs in sections}
    out = []
    for idx, lc in enumerate(layout):
        kind = SECTION if lc.is_point else BAND
        # polynomials of lower levels that vanish at the parent vanish on the whole fiber
        zs = set(cell.zeros)
        if lc.is_point:
            zs.update(zeros_by_root.get(id(lc.sample), ()))
        child = Cell(lv, kind, idx, sample + [lc.sample], cell, zeros=zs)
        child.membership = {k: _member(S, child.sample, zs) for k, S in enumerate(precells_i)}
        if relevant_only and not any(child.membership.values()):
            continue
        out.append(child)
    return out


# ---------------------------------------------------------- the algorithm


def project_all(sets: Sequence[BasicConstructibleSet], flags: Iterable[str] = HEURISTICS, full: bool = True,
                chain: Sequence[Ideal] | None = None) -> list[list[BasicConstructibleSet]]:
    """precells[i] for i = 1..n (index 0 unused); chain restricts every level."""
    ring = sets[0].ring
    n = ring.nvars
    precells: list[list[BasicConstructibleSet]] = [[] for _ in range(n + 1)]
    top = list(sets)
    if chain is not None:
        top = restrict_to_constraints(top, chain[n], flags)
    precells[n] = top
    for i in range(n, 1, -1):
        nxt = cad_projection(precells[i], flags, full) if precells[i] else []
        if chain is not None:
            nxt = restrict_to_constraints(nxt, chain[i - 1], flags)
        precells[i - 1] = nxt
    return precells


def _level1_polys(sets: Sequence[BasicConstructibleSet]) -> list[Polynomial]:
    polys = []
    for S in sets:
        polys.extend(p for p in S.defining_polynomials() if not p.is_constant())
    return polys


def _build(ring: Ring, sets: list[BasicConstructibleSet], precells, mode: str) -> CellTree:
    relevant = mode != "full"
    root = Cell(0, "root", 0, [])
    certified = all(S.certified for lv in precells for S in lv)
    tree = CellTree(ring, sets, precells, root, mode, certified)
    if not precells[1] and relevant:
        return tree
    n = ring.nvars
    tree.line = partition1d(p.to_ring(Ring(ring.vars[:1])) for p in _level1_polys(precells[1]))
    for idx, lc in enumerate(tree.line):
        kind = POINT if lc.is_point else INTERVAL
        zs = set()
        c = Cell(1, kind, idx, [lc.sample], root, zeros=zs)
        c.membership = {k: _member(S, c.sample, zs) for k, S in enumerate(precells[1])}
        if relevant and not any(c.membership.values()):
            continue
        root.children.append(c)
    frontier = root.children
    for i in range(2, n + 1):
        nxt = []
        for c in frontier:
            c.children = lift_cell(c, precells[i], relevant)
            nxt.extend(c.children)
        frontier = nxt
    # level-n membership refers to the caller's sets
    if precells[n] is not sets:
        for c in frontier:
            c.membership = {k: _member(S, c.sample, c.zeros) for k, S in enumerate(sets)}
    return tree


def geometric_cad(sets: Sequence[BasicConstructibleSet], mode: str = "full", flags: Iterable[str] = HEURISTICS) -> CellTree:
    """Projection down to the line, Partition1D, then lifting level by level."""
    if mode not in ("full", "relevant_only"):
        raise ValueError(f"unknown mode {mode!r}")
    sets = list(sets)
    if not sets:
        raise ValueError("at least one set is required")
    ring = sets[0].ring
    precells = project_all(sets, flags, full=mode == "full") if ring.nvars > 1 else [[], sets]
    return _build(ring, sets, precells, mode)


def cad_with_constraints(eq_ideal: Ideal, ineq: Polynomial | None = None, extra: Sequence[Polynomial] = (),
                         flags: Iterable[str] = HEURISTICS) -> CellTree:
    """Decomposition of L = V(eq) & D(ineq) split by the extra polynomials, following L's silhouettes."""
    ring = eq_ideal.ring
    h = ineq if ineq is not None else ring.one()
    if extra:
        prod = ring.one()
        for g in extra:
            prod = prod * g
        sets = [BasicConstructibleSet(eq_ideal + [g], h) for g in extra]
        sets.append(BasicConstructibleSet(eq_ideal, h * prod))
    else:
        sets = [BasicConstructibleSet(eq_ideal, h)]
    if eq_ideal.is_unit():
        return CellTree(ring, sets, [[] for _ in range(ring.nvars + 1)], Cell(0, "root", 0, []), "relevant_only")
    chain = elimination_chain(eq_ideal, None if h.is_constant() else h)
    precells = project_all(sets, flags, full=False, chain=chain) if ring.nvars > 1 else [[], sets]
    return _build(ring, sets, precells, "relevant_only")


# ---------------------------------------------------------------- locate


def locate(tree: CellTree, point: Sequence) -> Cell | None:
    """The deepest existing cell containing a point (None if outside level 1)."""
    pt = [v if isinstance(v, RealAlgebraicNumber) else RealAlgebraicNumber.rational(to_rational(v)) for v in point]
    node = tree.root
    for i in range(len(pt)):
        if i == 0:
            idx = _position([c.sample for c in tree.line if c.is_point], pt[0])
        else:
            secs = [r for r, _ in fiber_sections(tree.precells[i + 1], pt[:i])]
            idx = _position(secs, pt[i])
        child = next((c for c in node.children if c.index == idx), None)
        if child is None:
            return node if node.level else None
        node = child
    return node


def _position(sections: list[RealAlgebraicNumber], v: RealAlgebraicNumber) -> int:
    for k, r in enumerate(sections):
        o = compare(v, r)
        if o is Ordering.LESS:
            return 2 * k
        if o is Ordering.EQUAL:
            return 2 * k + 1
    return 2 * len(sections)


# ----------------------------------------------------------- formulas


_CMP = ("<=", ">=", "!=", "==", "<", ">", "=")


@dataclass(frozen=True)
class Atom:
    poly: Polynomial
    op: str

    def holds(self, s: int) -> bool:
        return {"=": s == 0, "!=": s != 0, "<": s < 0, "<=": s <= 0, ">": s > 0, ">=": s >= 0}[self.op]


@dataclass(frozen=True)
class Connective:
    op: str  # "and" | "or" | "not"
    args: tuple


@dataclass
class PrenexFormula:
    quantifiers: list[tuple[str, str]]
    matrix: object
    ring: Ring

    def atoms(self) -> list[Atom]:
        out = []

        def walk(node):
            if isinstance(node, Atom):
                out.append(node)
            else:
                for a in node.args:
                    walk(a)

        walk(self.matrix)
        return out

    def evaluate(self, signs) -> bool:
        """Truth of the matrix given a callable from polynomial to sign."""

        def ev(node):
            if isinstance(node, Atom):
                return node.holds(signs(node.poly))
            if node.op == "not":
                return not ev(node.args[0])
            vals = (ev(a) for a in node.args)
            return all(vals) if node.op == "and" else any(vals)

        return ev(self.matrix)


_QUANT = re.compile(r"\s*([AE])\s+([A-Za-z_][A-Za-z0-9_]*)")


def parse_formula(text: str, variables: Sequence[str] | None = None) -> PrenexFormula:
    """``A p A q E x (x^3 + p*x + q = 0)``: quantifier prefix, then the matrix."""
    pos = 0
    quants = []
    while True:
        m = _QUANT.match(text, pos)
        if not m:
            break
        quants.append((m.group(1), m.group(2)))
        pos = m.end()
    if not quants:
        raise ParseError("formula has no quantifier prefix")
    names = [v for _, v in quants]
    if len(set(names)) != len(names):
        raise ParseError("a variable is quantified twice")
    if variables is not None and list(variables) != names:
        raise ParseError(f"quantified variables {names} do not match the declared order {list(variables)}")
    ring = Ring(tuple(names))
    matrix = _MatrixParser(text[pos:], ring).parse()
    return PrenexFormula(quants, matrix, ring)


class _MatrixParser:
    def __init__(self, text: str, ring: Ring):
        self.s = text
        self.i = 0
        self.ring = ring

    def parse(self):
        node = self.disj()
        self.ws()
        if self.i != len(self.s):
            raise ParseError(f"unexpected text in formula: {self.s[self.i:]!r}")
        return node

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def keyword(self, *words) -> bool:
        self.ws()
        for w in words:
            if self.s.startswith(w, self.i):
                end = self.i + len(w)
                if w.isalpha() and end < len(self.s) and (self.s[end].isalnum() or self.s[end] == "_"):
                    continue
                if w == "!" and self.s.startswith("!=", self.i):
                    continue
                self.i = end
                return True
        return False

    def disj(self):
        args = [self.conj()]
        while self.keyword("or", "|", "\\/"):
            args.append(self.conj())
        return args[0] if len(args) == 1 else Connective("or", tuple(args))

    def conj(self):
        args = [self.neg()]
        while self.keyword("and", "&", "/\\"):
            args.append(self.neg())
        return args[0] if len(args) == 1 else Connective("and", tuple(args))

    def neg(self):
        if self.keyword("not", "~", "!"):
            return Connective("not", (self.neg(),))
        self.ws()
        if self.i < len(self.s) and self.s[self.i] == "(":
            close = self._matching(self.i)
            inner = self.s[self.i + 1:close]
            if _is_boolean(inner):
                sub = _MatrixParser(inner, self.ring)
                node = sub.parse()
                self.i = close + 1
                return node
        return self.atom()

    def _matching(self, start: int) -> int:
        depth = 0
        for j in range(start, len(self.s)):
            if self.s[j] == "(":
                depth += 1
            elif self.s[j] == ")":
                depth -= 1
                if depth == 0:
                    return j
        raise ParseError("unbalanced parentheses in formula")

    def atom(self):
        self.ws()
        start = self.i
        depth = 0
        j = start
        while j < len(self.s):
            ch = self.s[j]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and _boolean_at(self.s, j):
                break
            j += 1
        text = self.s[start:j]
        self.i = j
        for op in _CMP:
            k = _top_level_find(text, op)
            if k >= 0:
                lhs, rhs = text[:k], text[k + len(op):]
                p = self.ring.parse(lhs) - self.ring.parse(rhs)
                return Atom(p, "=" if op == "==" else op)
        raise ParseError(f"atom without comparison: {text.strip()!r}")


def _top_level_find(text: str, op: str) -> int:
    depth = 0
    for j in range(len(text)):
        ch = text[j]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(op, j):
            # "<" must not be the start of "<=", "=" not the tail of another operator
            if op in ("<", ">", "=") and text[j + 1:j + 2] == "=":
                continue
            if op == "=" and j > 0 and text[j - 1] in "<>!=":
                continue
            return j
    return -1


def _boolean_at(s: str, j: int) -> bool:
    if s[j] in "&|~":
        return True
    if s[j] == "!" and s[j + 1:j + 2] != "=":
        return True
    if s.startswith("/\\", j) or s.startswith("\\/", j):
        return True
    for w in ("and", "or", "not"):
        if s.startswith(w, j):
            before = s[j - 1] if j else " "
            after = s[j + len(w)] if j + len(w) < len(s) else " "
            if not (before.isalnum() or before == "_") and not (after.isalnum() or after == "_"):
                return True
    return False


def _is_boolean(inner: str) -> bool:
    depth = 0
    for j, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and (ch in "<>=" or _boolean_at(inner, j) or (ch == "!" and inner[j + 1:j + 2] == "=")):
            return True
    return False


# -------------------------------------------------------------- decision


def formula_sets(phi: PrenexFormula) -> list[BasicConstructibleSet]:
    """V(f) for every distinct atom polynomial, plus the open set where none vanishes."""
    ring = phi.ring
    polys: dict[str, Polynomial] = {}
    for a in phi.atoms():
        if a.poly.is_constant():
            continue
        f = squarefree_part(a.poly)
        polys.setdefault(str(f), f)
    ordered = [polys[k] for k in sorted(polys)]
    prod = ring.one()
    for f in ordered:
        prod = prod * f
    return [BasicConstructibleSet.make(ring, [f]) for f in ordered] + [BasicConstructibleSet.make(ring, [], prod)]


def decide(phi: PrenexFormula | str, flags: Iterable[str] = HEURISTICS) -> bool:
    """Truth value of a closed prenex formula."""
    if isinstance(phi, str):
        phi = parse_formula(phi)
    free = set().union(*(set(a.poly.variables()) for a in phi.atoms())) - {v for _, v in phi.quantifiers}
    if free:
        raise ParseError(f"formula is not closed: free {sorted(free)}")
    sets = formula_sets(phi)
    if len(sets) == 1:
        # only constant atoms
        return phi.evaluate(lambda p: (p.constant_value() > 0) - (p.constant_value() < 0))
    tree = geometric_cad(sets, "full", flags)
    return _fold(tree.root, phi, 0)


def _fold(cell: Cell, phi: PrenexFormula, depth: int) -> bool:
    if depth == len(phi.quantifiers):
        return phi.evaluate(lambda p: _sign(cell.sample, p, cell.zeros))
    q, _ = phi.quantifiers[depth]
    vals = (_fold(c, phi, depth + 1) for c in cell.children)
    return all(vals) if q == "A" else any(vals)


# ------------------------------------------------------- real root counts


@dataclass
class RealCountRegion:
    cell: Cell
    count: int | float

    def to_dict(self) -> dict:
        count = "inf" if self.count == float("inf") else self.count
        return {"path": list(self.cell.path), "kind": self.cell.kind, "sample": [a.to_dict() for a in self.cell.sample],
                "count": count}


def classify_real(I: Ideal, h: Polynomial | None, param_count: int, mode: str = "relevant_only",
                  flags: Iterable[str] = HEURISTICS) -> tuple[list[RealCountRegion], CellTree]:
    """Number of real points of V(I) & D(h) over every parameter cell."""
    ring = I.ring
    h = h if h is not None else ring.one()
    S = BasicConstructibleSet(I, h)
    if param_count == ring.nvars:
        raise ValueError("at least one unknown is required")
    if param_count == 0:
        raise ValueError("at least one parameter is required")
    tree = geometric_cad([S], mode, flags)
    if I.is_zero() and h.is_constant():
        tree_cells = tree.level(param_count)
        return [RealCountRegion(c, float("inf")) for c in tree_cells], tree
    out = []
    for c in _full_parameter_cells(tree, param_count):
        out.append(RealCountRegion(c, _count_over(c, ring.nvars)))
    return out, tree


def _full_parameter_cells(tree: CellTree, k: int) -> list[Cell]:
    return tree.level(k)


def _count_over(cell: Cell, n: int) -> int | float:
    base_dim = cell_dimension(cell)
    leaves = [cell]
    for _ in range(n - cell.level):
        leaves = [c for p in leaves for c in p.children]
    inside = [c for c in leaves if c.membership.get(0)]
    if any(cell_dimension(c) > base_dim for c in inside):
        return float("inf")
    return len(inside)


def real_count_at(tree: CellTree, param_point: Sequence, param_count: int) -> int | float:
    """Real fiber count at a rational parameter point, read off the tree."""
    cell = locate(tree, param_point)
    if cell is None or cell.level < param_count:
        return 0
    return _count_over(cell, tree.nvars)
