import itertools
import random
import zlib

import pytest
from gmpy2 import mpq

from geocad.cadlift import (
    SECTION,
    cad_with_constraints,
    cell_dimension,
    classify_real,
    decide,
    fiber_sections,
    formula_sets,
    geometric_cad,
    locate,
    parse_formula,
    real_count_at,
)
from geocad.cadproject import BasicConstructibleSet
from geocad.exactpoly import Ordering, ParseError, Ring
from geocad.groebner import Ideal
from geocad.realalg import RealAlgebraicNumber, compare, isolate_roots, sign_at, sign_at_point, sturm_count

PQX = Ring(("p", "q", "x"))
XYZ = Ring(("x", "y", "z"))
XY = Ring(("x", "y"))
CUBIC = "x^3 + p*x + q"


def _set(ring, eqs=(), h=None):
    return BasicConstructibleSet.make(ring, [ring.parse(e) for e in eqs], ring.parse(h) if h else None)


@pytest.fixture(scope="module")
def cubic_tree():
    return geometric_cad([_set(PQX, [CUBIC])], "full")


@pytest.fixture(scope="module")
def sphere_tree():
    sets = [_set(XYZ, ["x^2 + y^2 + z^2 - 1"]), _set(XYZ, ["x - y"]), _set(XYZ, [], "z - x^2")]
    return geometric_cad(sets, "full")


# ------------------------------------------------------------ examples


def test_cubic_lift_counts(cubic_tree):
    assert cubic_tree.counts() == (3, 9, 35)
    below, zero, above = cubic_tree.level(1)
    assert [len(c.children) for c in (below, zero, above)] == [5, 3, 1]
    q_roots = [c.sample[1] for c in below.children if c.kind == SECTION]
    assert [round(float(r), 12) for r in q_roots] == [round(-2 / 27**0.5, 12), round(2 / 27**0.5, 12)]


def test_whole_line_is_one_cell():
    X = Ring(("x",))
    tree = geometric_cad([BasicConstructibleSet.make(X)], "full")
    assert tree.counts() == (1,)
    assert tree.level(1)[0].membership == {0: True}


def test_decide_examples():
    assert decide("A p A q E x (x^3 + p*x + q = 0)") is True
    assert decide("A p A q E x (p*x + q = 0)") is False
    assert decide("E x (x^2 + 1 = 0)") is False


def test_decide_rejects_open_formulas():
    with pytest.raises(ParseError):
        decide("E x (x*y = 1)")
    with pytest.raises(ParseError):
        parse_formula("x > 0")
    with pytest.raises(ParseError):
        parse_formula("E x E x (x > 0)")


def test_formula_parser():
    phi = parse_formula("A a E b (a^2 + b >= 1 and not (b < 0 or a = b))", ["a", "b"])
    assert phi.quantifiers == [("A", "a"), ("E", "b")]
    assert sorted(a.op for a in phi.atoms()) == ["<", "=", ">="]
    with pytest.raises(ParseError):
        parse_formula("A b E a (a > b)", ["a", "b"])
    sets = formula_sets(parse_formula("E x E y (x^2 - y = 0 and 2*x^2 - 2*y != 0)"))
    # square-free and de-duplicated atoms, plus the open set avoiding all of them
    assert len(sets) == 2 and not sets[1].ideal.gens


def _cubic_truth(sample):
    disc = sign_at_point(PQX.prefix(2).parse("4*p^3 + 27*q^2"), sample)
    if disc < 0:
        return 3
    if disc == 0:
        return 1 if sign_at_point(PQX.prefix(1).parse("p"), sample[:1]) == 0 else 2
    return 1


def test_classify_cubic():
    regions, tree = classify_real(Ideal(PQX, [PQX.parse(CUBIC)]), None, 2)
    assert {r.count for r in regions} == {1, 2, 3}
    for r in regions:
        assert r.count == _cubic_truth(r.cell.sample), r.cell.path
    # the two-root cells are the two open cusp branches
    two = [r.cell for r in regions if r.count == 2]
    assert [c.kind for c in two] == [SECTION, SECTION]
    assert all(c.sample[0] < 0 for c in two)


def test_classify_linear():
    regions, tree = classify_real(Ideal(PQX, [PQX.parse("p*x + q")]), None, 2, mode="full")
    table = {(float(r.cell.sample[0]), float(r.cell.sample[1])): r.count for r in regions}
    assert table[(0.0, 0.0)] == float("inf")
    for (p, q), count in table.items():
        if p != 0:
            assert count == 1
        elif q != 0:
            assert count == 0


def test_classify_empty_system_is_infinite_everywhere():
    Y = Ring(("p", "x"))
    regions, _ = classify_real(Ideal.zero(Y), None, 1)
    assert regions and all(r.count == float("inf") for r in regions)


def test_constraint_example():
    ring = XYZ
    tree = cad_with_constraints(
        Ideal(ring, [ring.parse("x^2 + y^2 + z^2 - 1"), ring.parse("2*x - 2*y + z - 1")]),
        None, [ring.parse("x + y + z + 3/2")])
    assert tree.counts()[1:] == (4, 4)
    g = ring.parse("x + y + z + 3/2")
    assert all(sign_at_point(g, c.sample) > 0 for c in tree.level(3))
    # hence no level-3 cell lies in V(g)
    assert not any(c.membership[0] for c in tree.level(3))


def test_constraint_parabolic_pair_has_five_cells_per_level():
    ring = XYZ
    tree = cad_with_constraints(Ideal(ring, [ring.parse("x + y^2 + z"), ring.parse("x - y^2 + z")]),
                                None, [ring.parse("x^2 + y^2 + z^2 - 1")])
    assert tree.counts() == (5, 5, 5)


def test_unit_constraint_gives_an_empty_tree():
    tree = cad_with_constraints(Ideal.unit(XYZ), None, [XYZ.parse("x")])
    assert tree.is_empty() and tree.counts() == (0, 0, 0)


@pytest.mark.slow
def test_parabolic_full_counts():
    sets = [_set(XYZ, ["x + y^2 + z"]), _set(XYZ, ["x - y^2 + z"]), _set(XYZ, ["x^2 + y^2 + z^2 - 1"])]
    assert geometric_cad(sets, "full").counts() == (27, 217, 1487)


# ----------------------------------------------------------- invariants


def _trees(cubic_tree, sphere_tree):
    return [cubic_tree, sphere_tree]


def test_cylindricity_and_order(cubic_tree, sphere_tree):
    for tree in _trees(cubic_tree, sphere_tree):
        for lv in tree.levels:
            for c in lv:
                if c.level > 1:
                    assert len(c.sample) == c.level
                    assert all(compare(a, b) is Ordering.EQUAL for a, b in zip(c.sample, c.parent.sample))
        for parent in [tree.root] + [c for lv in tree.levels for c in lv]:
            kids = parent.children
            lasts = [c.sample[-1] for c in kids]
            assert all(compare(a, b) is Ordering.LESS for a, b in zip(lasts, lasts[1:]))
            assert [c.index for c in kids] == list(range(len(kids)))
            assert all(c.is_section == (c.index % 2 == 1) for c in kids)
            assert all(c.sample[-1].is_rational for c in kids if not c.is_section)


def _perturbed_point(tree, cell, rng):
    """A fresh sample in the same cell: walk down the path, re-deriving sections at each level."""
    chain = []
    c = cell
    while c.level > 0:
        chain.append(c)
        c = c.parent
    chain.reverse()
    pt: list[RealAlgebraicNumber] = []
    for c in chain:
        if c.level == 1:
            secs = [lc.sample for lc in tree.line if lc.is_point]
        else:
            secs = [r for r, _ in fiber_sections(tree.precells[c.level], pt)]
        k = c.index // 2
        if c.index % 2:
            pt.append(secs[k])
            continue
        lo = secs[k - 1] if k >= 1 else None
        hi = secs[k] if k < len(secs) else None
        pt.append(RealAlgebraicNumber.rational(_rational_between(lo, hi, rng)))
    return pt


def _rational_between(lo, hi, rng):
    if lo is None and hi is None:
        return mpq(rng.randint(-50, 50), rng.randint(1, 5))
    if lo is None:
        return mpq(hi.interval[0]) - rng.randint(1, 40)
    if hi is None:
        return mpq(lo.interval[1]) + rng.randint(1, 40)
    a, b = _separated(lo, hi)
    return a + (b - a) * mpq(rng.randint(1, 99), 100)


def _separated(lo, hi):
    while lo.interval[1] >= hi.interval[0]:
        lo.refine()
        hi.refine()
    return mpq(lo.interval[1]), mpq(hi.interval[0])


def _signs(sets, pt):
    return tuple(sign_at_point(p, pt) for S in sets for p in list(S.ideal.gens) + [S.h])


def test_sign_invariance_at_perturbed_samples(cubic_tree, sphere_tree):
    for tree in _trees(cubic_tree, sphere_tree):
        rng = random.Random(zlib.crc32(repr(tree.ring.vars).encode()))
        for cell in tree.level(tree.nvars):
            expected = _signs(tree.sets, cell.sample)
            for _ in range(3):
                pt = _perturbed_point(tree, cell, rng)
                assert locate(tree, pt) is cell
                assert _signs(tree.sets, pt) == expected, (cell.path, pt)


def test_membership_tags_match_exact_evaluation(sphere_tree):
    for cell in sphere_tree.level(3):
        for k, S in enumerate(sphere_tree.sets):
            inside = all(sign_at_point(g, cell.sample) == 0 for g in S.ideal.gens) and \
                sign_at_point(S.h, cell.sample) != 0
            assert cell.membership[k] == inside


def test_cell_dimension(cubic_tree):
    dims = [cell_dimension(c) for c in cubic_tree.level(3)]
    assert max(dims) == 3 and min(dims) == 0
    for c in cubic_tree.level(3):
        assert cell_dimension(c) == sum(1 for i in c.path if i % 2 == 0)
    # the cubic surface is two-dimensional: sections over open parameter cells
    inside = [c for c in cubic_tree.level(3) if c.membership[0]]
    assert max(cell_dimension(c) for c in inside) == 2


def _random_formula(rng):
    atoms = []
    for _ in range(rng.randint(1, 2)):
        cs = [rng.randint(-2, 2) for _ in range(4)]
        poly = f"({cs[0]})*x^2 + ({cs[1]})*y^2 + ({cs[2]})*x*y + ({cs[3]}) + x - y"
        atoms.append(f"{poly} {rng.choice(['=', '<', '>', '<=', '!='])} 0")
    return f" {rng.choice(['and', 'or'])} ".join(atoms)


def _grid_witness(matrix, quant, names):
    """One-sided grid evidence: a witness for E or a counterexample for A."""
    phi = parse_formula(f"{quant} {names[0]} {quant} {names[1]} ({matrix})")
    ring = phi.ring
    grid = [mpq(k, 4) for k in range(-12, 13)]
    for a, b in itertools.product(grid, grid):
        pt = [RealAlgebraicNumber.rational(a), RealAlgebraicNumber.rational(b)]
        val = phi.evaluate(lambda p: sign_at_point(p.to_ring(ring), pt))
        if quant == "E" and val:
            return True
        if quant == "A" and not val:
            return False
    return None


def test_decision_soundness_under_permuted_blocks():
    rng = random.Random(21)
    for _ in range(25):
        matrix = _random_formula(rng)
        quant = rng.choice("AE")
        forward = decide(f"{quant} x {quant} y ({matrix})")
        backward = decide(f"{quant} y {quant} x ({matrix})")
        assert forward == backward, matrix
        evidence = _grid_witness(matrix, quant, ["x", "y"])
        if evidence is not None:
            assert forward == evidence, matrix


def test_decide_matches_brute_force_on_cell_samples():
    # (A x)(E y) with y^2 = x has no real witness for x < 0
    assert decide("A x E y (y^2 - x = 0)") is False
    assert decide("E x A y (y^2 - x != 0)") is True
    assert decide("A x E y (y^2 - x = 0 or x < 0)") is True


def _count_oracle(poly, h, p_val, q_val):
    spec = poly.substitute({"p": p_val, "q": q_val})
    if spec.is_zero():
        hs = h.substitute({"p": p_val, "q": q_val})
        return float("inf") if not hs.is_zero() else 0
    roots = isolate_roots(spec)
    if h.is_constant():
        assert len(roots) == sturm_count(spec)
        return len(roots)
    hs = h.substitute({"p": p_val, "q": q_val})
    return sum(1 for r in roots if sign_at(hs, r) != 0) if not hs.is_zero() else 0


@pytest.mark.parametrize("poly, h", [
    (CUBIC, "1"),
    ("p*x + q", "1"),
    ("x^2 - p", "x - q"),
    ("p*x^2 + q*x + 1", "x + 1"),
])
def test_real_count_soundness(poly, h):
    f, g = PQX.parse(poly), PQX.parse(h)
    _, tree = classify_real(Ideal(PQX, [f]), g, 2, mode="full")
    rng = random.Random(zlib.crc32(poly.encode()))
    for k in range(200):
        if k % 4 == 0:
            t = mpq(rng.randint(-4, 4), rng.randint(1, 2))
            p_val, q_val = -3 * t * t, 2 * t**3
        else:
            p_val, q_val = mpq(rng.randint(-12, 12), rng.randint(1, 3)), mpq(rng.randint(-12, 12), rng.randint(1, 3))
        assert real_count_at(tree, [p_val, q_val], 2) == _count_oracle(f, g, p_val, q_val), (p_val, q_val)
