"""Shared strategies and the sympy bridge used as an independent oracle."""

import sympy
from gmpy2 import mpq
from hypothesis import strategies as st

from geocad.exactpoly import Polynomial, Ring


XY = Ring(("x", "y"))


@st.composite
def polynomials(draw, ring=XY, max_terms=5, max_degree=3, coeff=9):
    terms = draw(st.lists(
        st.tuples(st.tuples(*[st.integers(0, max_degree) for _ in ring.vars]), st.integers(-coeff, coeff)),
        max_size=max_terms,
    ))
    p = ring.zero()
    for exp, c in terms:
        p = p + ring.const(c).mul_term(exp, 1)
    return p


def to_sympy(p):
    syms = sympy.symbols(p.ring.vars)
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(syms, exp):
            term *= s ** k
        expr += term
    return sympy.Poly(expr, *syms, domain="QQ")


def from_sympy(poly, ring):
    terms = {tuple(exp): mpq(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for exp, c in poly.terms()}
    return Polynomial(ring, terms)
