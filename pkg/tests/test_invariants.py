import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from reflmf.invariants import (
    CoinvariantAlgebra,
    InvariantError,
    basic_invariants,
    express_in_basics,
    graded_ideal_basis,
    ideal_membership,
    reduce,
)
from reflmf.polyring import MultiPoly, act_by_matrix
from reflmf.reflgroup import build_group, reynolds

_CACHE: dict = {}


def algebra(spec):
    if spec not in _CACHE:
        _CACHE[spec] = CoinvariantAlgebra(build_group(spec))
    return _CACHE[spec]


def product_formula_dims(degrees):
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.prod([sum(t**k for k in range(d)) for d in degrees]), t)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


DEGREES = {
    "Sym(3)": (2, 3), "Sym(4)": (2, 3, 4), "Sym(5)": (2, 3, 4, 5), "B2": (2, 4), "B3": (2, 4, 6),
    "I2(5)": (2, 5), "I2(8)": (2, 8), "Dihedral(6)": (2, 6), "H3": (2, 6, 10), "Cyclic(5)": (5,),
    "G(3,1,2)": (3, 6), "G(4,2,2)": (4, 4), "G(3,3,3)": (3, 3, 6), "G(4,1,2)": (4, 8),
}


@pytest.mark.parametrize("spec,degrees", DEGREES.items())
def test_degrees_and_harmonic_dims(spec, degrees):
    C = algebra(spec)
    assert C.degrees == degrees
    assert C.harmonics.dims == product_formula_dims(degrees)
    assert C.harmonics.total_dimension == C.group.order


@pytest.mark.parametrize("spec", ["Sym(3)", "G(3,1,2)", "I2(5)"])
def test_basic_invariants_are_invariant(spec):
    C = algebra(spec)
    for f in C.basics.polys:
        for g in C.group.generators:
            assert act_by_matrix(g, f) == f


def test_basic_invariants_function_agrees():
    B = basic_invariants(build_group("B2"))
    assert B.degrees == (2, 4) and B.highest_degree == 4


def test_sym3_harmonic_and_ideal_dims():
    C = algebra("Sym(3)")
    assert C.harmonics.dims == (1, 2, 2, 1)
    assert len(graded_ideal_basis(C, 0, 3)) == 3
    assert len(graded_ideal_basis(C, 0, 4)) == 5


def test_b2_harmonic_dims():
    assert algebra("B2").harmonics.dims == (1, 2, 2, 2, 1)


def _sym_coords(field, n):
    """x_0..x_n on the sum-zero plane in the coordinates dual to v_i = e_i - (1,..,1)/(n+1)."""
    y = [MultiPoly.variable(field, n, i) for i in range(n)]
    s = MultiPoly.zero(field, n)
    for v in y:
        s = s + v
    x0 = s * field(Fraction(-1, n + 1))
    return [x0] + [v + x0 for v in y]


def test_sym4_basics_match_elementary_symmetric():
    C = algebra("Sym(4)")
    x = _sym_coords(C.field, 3)
    for k in (2, 3, 4):
        sigma = MultiPoly.zero(C.field, 3)
        for idx in itertools.combinations(range(4), k):
            term = MultiPoly.constant(C.field, 3, 1)
            for i in idx:
                term = term * x[i]
            sigma = sigma + term
        P = express_in_basics(C, sigma)
        linear = tuple(1 if j == k - 2 else 0 for j in range(3))
        assert P.coefficient(linear)  # sigma_k is a new generator, not decomposable


def test_f2_not_in_I3():
    C = algebra("Sym(3)")
    assert not ideal_membership(C, C.basics.polys[1], 3).member
    assert ideal_membership(C, C.basics.polys[1], 0).member


def test_power_sum_is_multiple_of_F1():
    C = algebra("Sym(3)")
    x = _sym_coords(C.field, 2)
    p2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    P = express_in_basics(C, p2)
    assert set(P.terms) == {(1, 0)}


def test_express_rejects_non_invariant():
    C = algebra("Sym(3)")
    with pytest.raises(InvariantError):
        express_in_basics(C, MultiPoly.variable(C.field, 2, 0))


poly_terms = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-6, 6),
                             min_size=1, max_size=5)


@pytest.mark.parametrize("spec", ["Sym(3)", "G(3,1,2)", "I2(5)"])
@settings(max_examples=20, deadline=None)
@given(terms=poly_terms)
def test_reduce_properties(spec, terms):
    C = algebra(spec)
    F = C.field
    p = MultiPoly(F, 2, {e: F(c) for e, c in terms.items()})
    r = reduce(C, p)
    assert reduce(C, r) == r
    for m, comp in (p - r).homogeneous_components().items():
        assert ideal_membership(C, comp).member
    for m, comp in r.homogeneous_components().items():
        # harmonic coordinates reproduce the normal form
        coords = C.harmonic_coordinates(comp, m)
        acc = MultiPoly.zero(F, 2)
        for c, h in zip(coords, C.harmonics.basis(m)):
            acc = acc + h * c
        assert acc == comp


@settings(max_examples=20, deadline=None)
@given(terms=poly_terms)
def test_membership_witnesses_reconstruct(terms):
    C = algebra("B2")
    F = C.field
    q = MultiPoly(F, 2, {e: F(c) for e, c in terms.items() if sum(e) == 3} or {(3, 0): F(1)})
    p = q * C.basics.polys[0] + MultiPoly.variable(F, 2, 0) * C.basics.polys[1]
    res = ideal_membership(C, p, 0, witness=True)
    assert res.member
    acc = MultiPoly.zero(F, 2)
    for mult, f in zip(res.multipliers, C.basics.polys):
        acc = acc + mult * f
    assert acc == p


@settings(max_examples=15, deadline=None)
@given(terms=poly_terms)
def test_reynolds_images_are_expressible(terms):
    C = algebra("I2(5)")
    F = C.field
    p = MultiPoly(F, 2, {e: F(c) for e, c in terms.items()})
    inv = reynolds(C.group, p)
    P = express_in_basics(C, inv)
    acc = MultiPoly.zero(F, 2)
    for e, c in P.terms.items():
        term = MultiPoly.constant(F, 2, 1)
        for f, k in zip(C.basics.polys, e):
            term = term * f**k
        acc = acc + term * c
    assert acc == inv


def test_top_harmonic_degree_is_reflection_count():
    C = algebra("G(3,1,2)")
    top = C.harmonics.basis(C.harmonics.top_degree)
    assert len(top) == 1
    assert C.harmonics.top_degree == len(C.group.reflections) == C.N
