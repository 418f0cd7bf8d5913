import json
from fractions import Fraction

import pytest

from reflmf import equivariant as eq
from reflmf import factorisation as fz
from reflmf.invariants import CoinvariantAlgebra
from reflmf.polyring import MultiPoly, poly_matmul
from reflmf.reflgroup import build_group, invariant_bilinear_form

_CACHE: dict = {}


def pipeline(spec):
    if spec not in _CACHE:
        C = eq.canonical(CoinvariantAlgebra(build_group(spec)))
        JP, KM = fz.jacobian_pair(C), fz.k_matrix(C)
        _CACHE[spec] = (C, JP, KM, fz.verify_mf(C, JP, KM))
    return _CACHE[spec]


SMALL = ["Sym(3)", "Sym(4)", "B2", "I2(5)", "G(3,1,2)", "Cyclic(4)"]


@pytest.mark.parametrize("m", [2, 3, 6])
def test_cyclic_k_is_x(m):
    C, JP, KM, MF = pipeline(f"Cyclic({m})")
    x = MultiPoly.variable(C.field, 1, 0)
    c = fz._proportional(KM.K[0][0], x)
    assert c is not None
    assert MF.certified


@pytest.mark.parametrize("spec", SMALL)
def test_mf_certified_with_witnesses(spec):
    C, JP, KM, MF = pipeline(spec)
    assert MF.certified and JP.consistent
    n, f = C.n, C.basics.polys[-1]
    for prod, wit in ((poly_matmul(JP.Jbar, KM.K), MF.witnesses_jk), (poly_matmul(KM.K, JP.Jbar), MF.witnesses_kj)):
        for i in range(n):
            for j in range(n):
                acc = f if i == j else MultiPoly.zero(C.field, n)
                for q, g in zip(wit[i][j], C.basics.polys[:-1]):
                    acc = acc + q * g
                assert prod[i][j] == acc


def test_jacobian_congruence_sym3():
    C, JP, _, _ = pipeline("Sym(3)")
    for i in range(2):
        for j in range(2):
            diff = JP.J[i][j] - JP.Jbar[i][j] * JP.D[i]
            assert C.ideal_membership(diff, C.d).member


def test_sym3_det_k_is_vandermonde_product():
    C, JP, KM, _ = pipeline("Sym(3)")
    F = C.field
    y = [MultiPoly.variable(F, 2, i) for i in range(2)]
    x0 = (y[0] + y[1]) * F(Fraction(-1, 3))
    x = [x0, y[0] + x0, y[1] + x0]
    prod = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2])
    assert fz._proportional(fz.poly_matrix_det(KM.K), prod) is not None


@pytest.mark.parametrize("spec", SMALL)
def test_determinant_checks(spec):
    C, JP, KM, _ = pipeline(spec)
    rep = fz.determinant_checks(C, JP, KM)
    assert rep.ok


def test_sym3_discriminant_leading_term():
    C, JP, KM, _ = pipeline("Sym(3)")
    P = fz.determinant_checks(C, JP, KM).discriminant
    assert P.coefficient((0, 2))
    assert max(e[1] for e in P.terms) == 2


@pytest.mark.parametrize("spec", ["Sym(3)", "B2", "Cyclic(4)", "G(3,1,2)"])
def test_periodic_resolution(spec):
    C, _, _, MF = pipeline(spec)
    res = fz.periodic_resolution(C, MF)
    assert res.certified
    assert res.bound == C.N + 2 * C.d
    assert sum(res.der_dims.values()) == C.N * C.group.order // C.d


def test_resolution_positions_shift_by_d():
    C, _, _, _ = pipeline("Sym(4)")
    pos = fz.resolution_positions(C, 5)
    for p in range(4):
        assert tuple(a + C.d for a in pos[p]) == pos[p + 2]


def test_non_duality_group_rejected():
    C = eq.canonical(CoinvariantAlgebra(build_group("G(4,2,2)")))
    with pytest.raises(fz.FactorisationError):
        fz.k_matrix(C)


@pytest.mark.parametrize("spec", ["Sym(3)", "B2"])
def test_coxeter_selfduality(spec):
    C, _, _, MF = pipeline(spec)
    rep = fz.coxeter_selfduality_check(C, MF, invariant_bilinear_form(C.group))
    assert rep.ok
    assert rep.omega_total == rep.der_total == C.n * C.group.order // 2
    # observed shifts; they always sum to d
    assert (rep.syz_omega_shift, rep.syz_der_shift) == (2, C.d - 2)


def test_json_and_latex_emission_are_deterministic():
    C, JP, KM, MF = pipeline("Sym(3)")
    a = fz.dumps(fz.mf_to_json(C, JP, KM, MF))
    b = fz.dumps(fz.mf_to_json(C, JP, KM, MF))
    assert a == b
    doc = json.loads(a)
    assert doc["certified"] and doc["K_target_shifts"] == [-1, -1]
    tex = fz.mf_to_latex(C, JP, KM)
    assert tex.count("\\begin{tabular}") == tex.count("\\end{tabular}") == 3


def test_graded_piece_of_identity_has_full_rank():
    C, _, _, _ = pipeline("Sym(3)")
    one = MultiPoly.constant(C.field, 2, 1)
    zero = MultiPoly.zero(C.field, 2)
    ident = [[one, zero], [zero, one]]
    for m in range(4):
        M = fz.graded_piece(C, ident, (0, 0), (0, 0), m)
        assert M.rank() == 2 * C.harmonics.dims[m] == fz.module_dim(C, (0, 0), m)
