import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflmf import equivariant as eq
from reflmf.invariants import CoinvariantAlgebra
from reflmf.polyring import LinearSubstitution
from reflmf.reflgroup import build_group, regular_vector_search

_CACHE: dict = {}


def canon(spec):
    if spec not in _CACHE:
        _CACHE[spec] = eq.canonical(CoinvariantAlgebra(build_group(spec)))
    return _CACHE[spec]


def test_sym3_maps_from_V():
    C = canon("Sym(3)")
    dims = {e: len(eq.hom_w_basis(C, "V", e)) for e in range(C.N + 1)}
    assert dims == {0: 0, 1: 1, 2: 1, 3: 0}
    assert [s.degree for s in C.sigma] == [2, 3]


@pytest.mark.parametrize("m", [2, 3, 5])
def test_cyclic_dual_map_in_degree_zero(m):
    C = canon(f"Cyclic({m})")
    psi = eq.all_maps(C, "V*")
    assert len(psi) == 1 and psi[0].degree == 0


@pytest.mark.parametrize("spec", ["Sym(4)", "G(3,1,2)", "I2(5)"])
def test_maps_are_equivariant_on_all_elements(spec):
    C = canon(spec)
    G = C.group
    for phi in C.sigma:
        for g in G.elements[:: max(1, G.order // 12)]:
            sub = LinearSubstitution(g.inverse())
            # (g.phi(v))(x) = phi(g v)
            for j in range(G.n):
                gv = g.col(j)
                lhs = sub(phi.images[j])
                rhs = sum((phi.images[k] * gv[k] for k in range(G.n) if gv[k]), start=phi.images[0] * 0)
                assert C.reduce(lhs - rhs).is_zero()


@pytest.mark.parametrize("spec,degrees,codegrees", [
    ("Sym(3)", (2, 3), (1, 0)), ("Sym(4)", (2, 3, 4), (2, 1, 0)), ("B2", (2, 4), (2, 0)),
    ("G(4,2,2)", (4, 4), (4, 0)), ("G(3,1,2)", (3, 6), (3, 0)), ("I2(5)", (2, 5), (3, 0)),
    ("Cyclic(4)", (4,), (0,)),
])
def test_degrees_codegrees(spec, degrees, codegrees):
    dd = eq.degrees_codegrees(canon(spec))
    assert dd.degrees == degrees and dd.codegrees == codegrees


@pytest.mark.parametrize("spec,duality", [("Sym(4)", True), ("G(4,2,2)", False), ("H3", True), ("G(3,3,3)", True)])
def test_duality(spec, duality):
    assert eq.is_duality_group(canon(spec)) is duality


def test_sym3_gram_is_antidiagonal_and_invertible():
    g = eq.gram_matrix(canon("Sym(3)"))
    assert g.perfect and g.support_by_degree
    assert not g.P[0, 0] and not g.P[1, 1]
    assert g.P[0, 1] and g.P[1, 0]


def test_cyclic_pairing_is_one():
    C = canon("Cyclic(5)")
    g = eq.gram_matrix(C)
    assert g.P[0, 0] == 1


def test_g422_gram_is_not_perfect():
    assert not eq.gram_matrix(canon("G(4,2,2)")).perfect


@pytest.mark.parametrize("spec", ["Sym(3)", "B2", "G(3,1,2)"])
def test_evaluation_iso_at_regular_and_singular_points(spec):
    C = canon(spec)
    w = regular_vector_search(C.group, C.d)
    assert w is not None
    for M in ("V", "V*"):
        assert not eq.evaluation_iso(C, M, list(w.vector)).det().is_zero()
    # a point on a hyperplane: the kernel of the first reflection's form
    form = C.group.hyperplane_forms[0]
    coeffs = [form.coefficient(tuple(int(i == j) for i in range(C.n))) for j in range(C.n)]
    k = next(j for j, c in enumerate(coeffs) if c)
    v = [C.field.zero] * C.n
    other = (k + 1) % C.n
    v[other] = coeffs[k]
    v[k] = -coeffs[other]
    assert form.evaluate(v).is_zero()
    for M in ("V", "V*"):
        assert eq.evaluation_iso(C, M, v).det().is_zero()


def test_sym3_regular_numbers():
    assert eq.regular_numbers(canon("Sym(3)"), 6) == [1, 2, 3]


def test_g422_criterion_says_4_regular():
    dd = eq.degrees_codegrees(canon("G(4,2,2)"))
    assert eq.criterion_regular(dd, 4)


@pytest.mark.parametrize("spec", ["Sym(4)", "B2", "I2(5)", "G(3,1,2)", "H3"])
def test_highest_degree_is_regular(spec):
    C = canon(spec)
    assert eq.criterion_regular(eq.degrees_codegrees(C), C.d)
    assert regular_vector_search(C.group, C.d) is not None


@pytest.mark.parametrize("spec", ["Sym(3)", "Sym(4)", "B2", "G(3,1,2)"])
def test_permutation_exists_for_regular_numbers(spec):
    C = canon(spec)
    for k in eq.regular_numbers(C, 2 * C.d, search=False):
        pi = eq.degree_codegree_permutation(C, k)
        assert pi is not None
        dd = eq.degrees_codegrees(C)
        assert all((dd.degrees[i] + dd.codegrees[pi[i]]) % k == 0 for i in range(C.n))


@pytest.mark.parametrize("spec,k", [("Sym(3)", 3), ("Sym(3)", 2), ("B2", 4), ("Cyclic(4)", 2)])
def test_springer_forward(spec, k):
    assert eq.springer_forward_check(canon(spec), k)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["Sym(3)", "B2", "G(3,1,2)", "I2(5)"]), st.integers(1, 12))
def test_criterion_never_contradicted_by_search(spec, k):
    C = canon(spec)
    if regular_vector_search(C.group, k) is not None:
        assert eq.criterion_regular(eq.degrees_codegrees(C), k)


def test_canonical_basics_are_multiplication_invariants():
    C = canon("Sym(4)")
    for s, f in zip(C.sigma, C.basics.polys):
        assert eq.multiplication_invariant(s) == f
