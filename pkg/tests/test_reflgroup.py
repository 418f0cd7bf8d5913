import json
import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from reflmf.polyring import MultiPoly, act_by_matrix, parse_poly
from reflmf.reflgroup import (
    GroupSpecError,
    build_group,
    eigenspace,
    invariant_bilinear_form,
    is_well_generated,
    molien,
    parse_group_spec,
    regular_vector_search,
    reynolds,
    well_generating_set,
)
from reflmf.scalars import CapExceeded, limits


@pytest.fixture(scope="module")
def groups():
    cache = {}

    def get(spec):
        if spec not in cache:
            cache[spec] = build_group(spec)
        return cache[spec]

    return get


# order oracle: m^n n!/p for G(m,p,n), standard Coxeter orders otherwise
ORDERS = {
    "Sym(3)": 6, "Sym(4)": 24, "A1": 2, "A3": 24, "B2": 8, "B3": 48, "D4": 192,
    "I2(5)": 10, "I2(8)": 16, "Dihedral(6)": 12, "H3": 120, "Cyclic(5)": 5,
    "G(3,1,2)": 18, "G(4,2,2)": 16, "G(3,3,3)": 54, "G(4,1,2)": 32,
}


@pytest.mark.parametrize("spec,order", ORDERS.items())
def test_orders(groups, spec, order):
    assert groups(spec).order == order


@pytest.mark.parametrize("m,p,n", [(3, 1, 2), (4, 2, 2), (3, 3, 3), (4, 1, 2), (2, 1, 3)])
def test_gmpn_order_formula(groups, m, p, n):
    assert groups(f"G({m},{p},{n})").order == m**n * math.factorial(n) // p


@pytest.mark.parametrize("spec,refl,hyp", [("Sym(3)", 3, 3), ("B2", 4, 4), ("G(3,1,2)", 7, 5),
                                           ("Cyclic(4)", 3, 1), ("H3", 15, 15)])
def test_reflections_and_hyperplanes(groups, spec, refl, hyp):
    G = groups(spec)
    assert len(G.reflections) == refl
    assert len(G.hyperplane_forms) == hyp


def test_reflections_have_rank_one(groups):
    G = groups("G(3,1,2)")
    for i in G.reflections:
        assert (G.elements[i] - G.identity).rank() == 1


@pytest.mark.parametrize("spec", ["Sym(4)", "G(3,1,2)", "I2(5)"])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_closure_under_products(groups, spec, data):
    G = groups(spec)
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    assert G.index.get(G.elements[a] @ G.elements[b]) is not None
    assert G.elements[G.inverse_index()[a]] @ G.elements[a] == G.identity


@pytest.mark.parametrize("spec,degrees", [("Sym(3)", (2, 3)), ("B2", (2, 4)), ("I2(5)", (2, 5)),
                                          ("G(3,1,2)", (3, 6)), ("G(4,2,2)", (4, 4))])
def test_molien_matches_product_formula(groups, spec, degrees):
    t = sympy.Symbol("t")
    oracle = sympy.series(1 / sympy.prod([1 - t**d for d in degrees]), t, 0, 12).removeO()
    series = molien(groups(spec), order=12)
    assert [int(series[k]) for k in range(12)] == [oracle.coeff(t, k) for k in range(12)]


def test_sym3_molien_prefix(groups):
    assert tuple(int(c) for c in molien(groups("Sym(3)"), order=8).coefficients) == (1, 0, 1, 1, 1, 1, 2, 1)


def test_reynolds_of_square_is_degree_two_invariant(groups):
    G = groups("Sym(3)")
    # x_0 restricted to the sum-zero plane is -(y_1 + y_2)/3
    x0 = parse_poly("-1/3*x0-1/3*x1", G.field, 2)
    avg = reynolds(G, x0 * x0)
    assert not avg.is_zero()
    for g in G.generators:
        assert act_by_matrix(g, avg) == avg
    assert reynolds(G, avg) == avg


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=4))
def test_reynolds_is_invariant_projector(terms):
    G = build_group("B2")
    p = MultiPoly(G.field, 2, {e: G.field(c) for e, c in terms.items()})
    r = reynolds(G, p)
    assert all(act_by_matrix(g, r) == r for g in G.generators)
    assert reynolds(G, r) == r


@pytest.mark.parametrize("spec,expected", [("Sym(3)", True), ("B2", True), ("H3", True), ("G(3,1,2)", True),
                                           ("G(4,2,2)", False), ("G(3,3,3)", True), ("Cyclic(4)", True)])
def test_well_generated(groups, spec, expected):
    G = groups(spec)
    assert is_well_generated(G) is expected
    found = well_generating_set(G)
    assert (found is not None) is expected
    if found:
        assert len(found) == G.n


def test_coxeter_element_eigenspace(groups):
    from reflmf.scalars import make_field

    G = groups("Sym(3)")
    F = make_field(3)
    c = next(g for g, o in zip(G.elements, G.element_orders()) if o == 3)
    assert len(eigenspace(c.embed(F), F.zeta)) == 1


@pytest.mark.parametrize("k,found", [(1, True), (2, True), (3, True), (4, False), (6, False)])
def test_regular_vector_search_sym3(groups, k, found):
    w = regular_vector_search(groups("Sym(3)"), k)
    assert (w is not None) is found
    if w:
        G = groups("Sym(3)")
        g = G.elements[w.element].embed(w.field)
        assert g @ list(w.vector) == tuple(w.zeta * x for x in w.vector)
        assert all(a.evaluate(list(w.vector)) for a in G.hyperplane_forms)


def test_invariant_form_for_real_group(groups):
    G = groups("H3")
    B = invariant_bilinear_form(G)
    for g in G.generators:
        assert g.transpose() @ B @ g == B
    assert G.is_real


def test_complex_group_is_not_real(groups):
    assert not groups("G(3,1,2)").is_real


@pytest.mark.parametrize("bad", ["Sym(1)", "G(4,3,2)", "G(2,2,2)", "Cyclic(1)", "D3", "foo", "I2(2)"])
def test_bad_specs(bad):
    with pytest.raises(GroupSpecError):
        parse_group_spec(bad)


def test_labels_round_trip():
    for s in ["Sym(4)", "G(3,1,2)", "I2(5)", "Cyclic(7)", "B3", "H3"]:
        assert parse_group_spec(s).label == s


def test_order_cap():
    with limits(order_cap=50):
        with pytest.raises(CapExceeded):
            build_group("Sym(5)")


def test_group_file(tmp_path):
    doc = {"conductor": 3, "dimension": 1, "generators": [[["z"]]]}
    path = tmp_path / "c3.json"
    path.write_text(json.dumps(doc))
    G = build_group(f"file:{path}")
    assert G.order == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    with pytest.raises(GroupSpecError):
        build_group(f"file:{bad}")
