"""The reduced Jacobian, the map K, and the matrix factorisation of f_n mod I_d.

Free modules over A are described by the degrees of their generators.  With
d/dx_j in degree -1 and d/df_i in degree -d_i, both Jbar and K are homogeneous
of degree zero:

    ... -> A{d - d_i} --K--> A{-1}^n --Jbar--> A{-d_i}      (positions 2, 1, 0)

and position p + 2 is position p with every generator degree raised by d.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Sequence

from .equivariant import EquivariantMap, PairingGram, canonical, gram_matrix, is_duality_group
from .invariants import CoinvariantAlgebra, MembershipResult
from .polyring import MultiPoly, default_names, poly_matmul, poly_matrix_det, render_poly
from .scalars import ExactMatrix, ReflmfError, render_scalar


class FactorisationError(ReflmfError):
    pass


PolyMatrix = list  # list of rows of MultiPoly


@dataclasses.dataclass
class JacobianPair:
    J: PolyMatrix  # J[i][j] = d f_i / d x_j
    Jbar: PolyMatrix  # Jbar[i][j] = sigma_i(v_j)
    D: tuple  # the degrees d_i, i.e. diag(D)
    consistent: bool  # J = D Jbar mod I_d entrywise


@dataclasses.dataclass
class KMatrix:
    K: PolyMatrix  # K[j][i] = phi_i(x_j)
    phi: tuple  # the pairing-dual basis of Hom_W(V*, H)
    column_degrees: tuple  # d - d_i + 1


@dataclasses.dataclass
class MatrixFactorisation:
    f: MultiPoly
    phi: PolyMatrix  # Jbar
    psi: PolyMatrix  # K
    ring: str
    source_shifts: tuple  # generator degrees of the source of Jbar
    target_shifts: tuple  # generator degrees of the target of Jbar
    certified: bool
    witnesses_jk: list  # [i][k] -> multipliers q_l of f_1..f_{n-1}
    witnesses_kj: list


def _zero_matrix(field, n, rows, cols):
    return [[MultiPoly.zero(field, n) for _ in range(cols)] for _ in range(rows)]


def jacobian_pair(CA: CoinvariantAlgebra, gram: PairingGram | None = None) -> JacobianPair:
    C = canonical(CA)
    n = C.n
    J = [[f.partial(j) for j in range(n)] for f in C.basics.polys]
    Jbar = [list(s.images) for s in C.sigma]
    D = tuple(C.degrees)
    diffs = [J[i][j] - Jbar[i][j] * D[i] for i in range(n) for j in range(n)]
    consistent = all(C.ideal_membership_many(diffs, C.d))
    if not consistent:
        raise FactorisationError("J and D*Jbar disagree modulo I_d")
    return JacobianPair(J, Jbar, D, consistent)


def pairing_dual_basis(CA: CoinvariantAlgebra, gram: PairingGram | None = None) -> list[EquivariantMap]:
    """phi_i = sum_l (P^-1)_{li} psi_l, so that <sigma_k, phi_i> = delta_ki."""
    C = canonical(CA)
    gram = gram or gram_matrix(C)
    if not gram.invertible:
        raise FactorisationError("the Gram matrix is singular; K needs a duality group")
    Pinv = gram.inverse
    out = []
    for i in range(C.n):
        imgs = []
        for j in range(C.n):
            acc = MultiPoly.zero(C.field, C.n)
            for l, psi in enumerate(gram.psi):
                c = Pinv[l, i]
                if c:
                    acc = acc + psi.images[j] * c
            imgs.append(acc)
        deg = {p.harmonic_degree for l, p in enumerate(gram.psi) if Pinv[l, i]}
        if len(deg) != 1:
            raise FactorisationError("pairing-dual map is not homogeneous")
        out.append(EquivariantMap("V*", deg.pop(), (), tuple(imgs)))
    return out


def k_matrix(CA: CoinvariantAlgebra, gram: PairingGram | None = None) -> KMatrix:
    C = canonical(CA)
    phi = pairing_dual_basis(C, gram)
    K = [[phi[i].images[j] for i in range(C.n)] for j in range(C.n)]
    return KMatrix(K, tuple(phi), tuple(C.d - d + 1 for d in C.degrees))


def _minus_f_identity(M: PolyMatrix, f: MultiPoly) -> PolyMatrix:
    return [[M[i][j] - f if i == j else M[i][j] for j in range(len(M[i]))] for i in range(len(M))]


def verify_mf(CA: CoinvariantAlgebra, JP: JacobianPair, KM: KMatrix) -> MatrixFactorisation:
    """Certify Jbar K = f_n Id = K Jbar modulo (f_1, ..., f_{n-1}) with witnesses."""
    C = canonical(CA)
    if not is_duality_group(C):
        raise FactorisationError(f"{C.group.label} is not a duality group")
    n, f = C.n, C.basics.polys[-1]
    results = []
    for prod in (poly_matmul(JP.Jbar, KM.K), poly_matmul(KM.K, JP.Jbar)):
        R = _minus_f_identity(prod, f)
        flat = [R[i][j] for i in range(n) for j in range(n)]
        mem = C.ideal_membership_many(flat, C.d, witness=True)
        for idx, r in enumerate(mem):
            if not r.member:
                i, j = divmod(idx, n)
                raise FactorisationError(f"entry ({i},{j}) of a product minus f_n is not in I_d: {flat[idx]}")
        results.append([[mem[i * n + j].multipliers[:-1] for j in range(n)] for i in range(n)])
    return MatrixFactorisation(
        f, JP.Jbar, KM.K, "S/(f_1,...,f_{n-1})",
        tuple(-1 for _ in range(n)), tuple(-d for d in C.degrees),
        True, results[0], results[1])


# -- determinants ---------------------------------------------------------------


@dataclasses.dataclass
class DeterminantReport:
    det_K_is_hyperplane_product: bool
    det_K_scalar: object  # det K / prod alpha_H
    discriminant: MultiPoly  # det(J K) written in F_1..F_n
    monic_in_fn: bool
    invariant: bool

    @property
    def ok(self) -> bool:
        return self.det_K_is_hyperplane_product and self.monic_in_fn and self.invariant


def _proportional(p: MultiPoly, q: MultiPoly):
    """c with p = c q, or None."""
    if q.is_zero():
        return None
    e, c = q.leading_term()
    a = p.coefficient(e)
    if not a:
        return None
    ratio = a * c.inverse()
    return ratio if p == q * ratio else None


def determinant_checks(CA: CoinvariantAlgebra, JP: JacobianPair, KM: KMatrix) -> DeterminantReport:
    C = canonical(CA)
    detK = poly_matrix_det(KM.K)
    scalar = _proportional(detK, C.group.hyperplane_product())
    disc = poly_matrix_det(JP.J) * detK
    invariant = C.is_invariant(disc)
    P = C.express_in_basics(disc, check_invariant=False) if invariant else MultiPoly.zero(C.field, C.n)
    n = C.n
    top = P.coefficient((0,) * (n - 1) + (n,))
    monic = bool(top) and all(e[-1] <= n for e in P.terms)
    return DeterminantReport(scalar is not None, scalar, P, monic, invariant)


# -- graded pieces and the periodic resolution -----------------------------------


def graded_piece(CA: CoinvariantAlgebra, M: PolyMatrix, src: Sequence[int], tgt: Sequence[int],
                 m: int) -> ExactMatrix:
    """Scalar matrix of the A-linear map M in internal degree m.

    M[i][j] is the coefficient of target generator i in the image of source
    generator j; generator degrees are src and tgt.  Columns run over
    (j, harmonic basis of A_{m - src_j}), rows over (i, basis of A_{m - tgt_i}).
    """
    H = CA.harmonics
    rows_per = [len(H.basis(m - t)) for t in tgt]
    offsets = [sum(rows_per[:i]) for i in range(len(tgt))]
    nrows = sum(rows_per)
    columns = []
    for j, s in enumerate(src):
        basis = H.basis(m - s)
        cols = [[CA.field.zero] * nrows for _ in basis]
        for i, t in enumerate(tgt):
            if not rows_per[i] or M[i][j].is_zero():
                continue
            prods = [M[i][j] * h for h in basis]
            for c, coords in enumerate(CA.harmonic_coordinates_many(prods, m - t)):
                cols[c][offsets[i]:offsets[i] + rows_per[i]] = coords
        columns.extend(cols)
    return ExactMatrix.from_columns(CA.field, columns, nrows)


def module_dim(CA: CoinvariantAlgebra, gens: Sequence[int], m: int) -> int:
    return sum(len(CA.harmonics.basis(m - s)) for s in gens)


def transpose(M: PolyMatrix) -> PolyMatrix:
    return [list(r) for r in zip(*M)]


@dataclasses.dataclass
class PeriodicResolution:
    generator_degrees: dict  # position -> generator degrees
    dims: dict  # (position, m) -> dim of the module
    ranks: dict  # (position, m) -> rank of the map out of position (into position - 1)
    exact: dict  # (position, m) -> bool, for interior positions
    quasi_periodic: bool
    minimal: bool
    bound: int
    der_dims: dict  # m -> dim Der(A,A)_m (kernel at position 1)
    t1_dims: dict  # m -> dim coker(Jbar)_m at position 0

    @property
    def certified(self) -> bool:
        return all(self.exact.values()) and self.quasi_periodic and self.minimal


def _minimal(CA: CoinvariantAlgebra, M: PolyMatrix) -> bool:
    return all(e.is_zero() or (not CA.reduce(e).constant_term() and not e.constant_term())
               for row in M for e in row)


def resolution_positions(CA: CoinvariantAlgebra, top: int) -> dict[int, tuple]:
    degs = CA.degrees
    out = {}
    for p in range(top + 1):
        q = p // 2
        out[p] = tuple(q * CA.d - d for d in degs) if p % 2 == 0 else tuple(q * CA.d - 1 for _ in degs)
    return out


def periodic_resolution(CA: CoinvariantAlgebra, MF: MatrixFactorisation, bound: int | None = None,
                        positions: int = 4) -> PeriodicResolution:
    """Certify exactness at positions 1..positions in every internal degree |m| <= bound."""
    C = canonical(CA)
    bound = C.N + 2 * C.d if bound is None else bound
    gens = resolution_positions(C, positions + 1)
    dims, ranks, exact = {}, {}, {}
    degrees = range(-bound, bound + 1)
    for p in range(1, positions + 2):
        mat = MF.phi if p % 2 == 1 else MF.psi
        for m in degrees:
            if not module_dim(C, gens[p], m) or not module_dim(C, gens[p - 1], m):
                ranks[(p, m)] = 0
                continue
            ranks[(p, m)] = graded_piece(C, mat, gens[p], gens[p - 1], m).rank()
    for p in range(0, positions + 2):
        for m in degrees:
            dims[(p, m)] = module_dim(C, gens[p], m)
    for p in range(1, positions + 1):
        for m in degrees:
            kernel = dims[(p, m)] - ranks[(p, m)]
            exact[(p, m)] = kernel == ranks[(p + 1, m)]
    qp = all(dims[(p, m)] == dims[(p + 2, m + C.d)] and ranks[(p, m)] == ranks[(p + 2, m + C.d)]
             for p in range(1, positions) for m in degrees if m + C.d <= bound)
    minimal = _minimal(C, MF.phi) and _minimal(C, MF.psi)
    der = {m: dims[(1, m)] - ranks[(1, m)] for m in degrees if dims[(1, m)] - ranks[(1, m)]}
    t1 = {m: dims[(0, m)] - ranks[(1, m)] for m in degrees if dims[(0, m)] - ranks[(1, m)]}
    return PeriodicResolution(gens, dims, ranks, exact, qp, minimal, bound, der, t1)


# -- the real (Coxeter) case ------------------------------------------------------


@dataclasses.dataclass
class SelfDualityReport:
    form_invariant: bool
    form_invertible: bool
    omega_total: int
    der_total: int
    expected_total: int  # n |W| / 2
    syz_omega_shift: int | None  # s with H_{Syz Omega}(t) = t^s H_Der(t)
    syz_der_shift: int | None  # s with H_{Syz Der}(t) = t^s H_Omega(t)
    expected_shifts_hold: bool  # Der(d+2) and Omega(-2), i.e. s = -(d+2) and s = 2

    @property
    def ok(self) -> bool:
        return (self.form_invariant and self.form_invertible and self.omega_total == self.der_total
                == self.expected_total and self.syz_omega_shift is not None and self.syz_der_shift is not None)


def _series_shift(a: dict, b: dict) -> int | None:
    """s with a(t) = t^s b(t) for finitely supported series, or None."""
    a = {k: v for k, v in a.items() if v}
    b = {k: v for k, v in b.items() if v}
    if not a or not b:
        return 0 if a == b else None
    s = min(a) - min(b)
    return s if a == {k + s: v for k, v in b.items()} else None


def coxeter_selfduality_check(CA: CoinvariantAlgebra, MF: MatrixFactorisation,
                              bilinear: ExactMatrix) -> SelfDualityReport:
    C = canonical(CA)
    G = C.group
    B = bilinear
    inv = all(g.transpose() @ B @ g == B for g in G.generators)
    invertible = B.rank() == B.rows
    n, degs = C.n, C.degrees
    lo, hi = -(C.N + 2 * C.d), C.N + 2 * C.d
    JbT = transpose(MF.phi)
    omega, syz_omega = {}, {}
    # Omega = coker(Jbar^T: A{d_i} -> A{1}^n), Syz^1 Omega = its image
    for m in range(lo, hi + 1):
        src, tgt = module_dim(C, degs, m), module_dim(C, (1,) * n, m)
        r = graded_piece(C, JbT, degs, (1,) * n, m).rank() if src and tgt else 0
        omega[m] = tgt - r
        syz_omega[m] = r
    res = periodic_resolution(C, MF, positions=2)
    der = res.der_dims
    # Der = ker at position 1 = image from position 2; Syz^1 Der = ker at position 2
    syz_der = {m: res.dims[(2, m)] - res.ranks[(2, m)] for m in range(-res.bound, res.bound + 1)}
    s1 = _series_shift(syz_omega, der)
    s2 = _series_shift(syz_der, omega)
    return SelfDualityReport(inv, invertible, sum(omega.values()), sum(der.values()), n * G.order // 2,
                             s1, s2, s1 == -(C.d + 2) and s2 == 2)


# -- emission -----------------------------------------------------------------------


def matrix_to_strings(M: PolyMatrix, names=None) -> list[list[str]]:
    return [[render_poly(e, names) for e in row] for row in M]


def mf_to_json(CA: CoinvariantAlgebra, JP: JacobianPair, KM: KMatrix, MF: MatrixFactorisation | None) -> dict:
    C = canonical(CA)
    names = default_names(C.n)
    out = {
        "group": C.group.label,
        "field_conductor": C.field.conductor,
        "basic_invariants": [render_poly(f, names) for f in C.basics.polys],
        "degrees": list(C.degrees),
        "J": matrix_to_strings(JP.J, names),
        "Jbar": matrix_to_strings(JP.Jbar, names),
        "K": matrix_to_strings(KM.K, names),
        "Jbar_source_shifts": [-1] * C.n,
        "Jbar_target_shifts": [-d for d in C.degrees],
        "K_source_shifts": [C.d - d for d in C.degrees],
        "K_target_shifts": [-1] * C.n,
        "J_congruent_to_D_Jbar": JP.consistent,
        "certified": bool(MF and MF.certified),
    }
    if MF is not None:
        out["witnesses"] = {
            "JbarK": [[[render_poly(q, names) for q in w] for w in row] for row in MF.witnesses_jk],
            "KJbar": [[[render_poly(q, names) for q in w] for w in row] for row in MF.witnesses_kj],
        }
    return out


def _latex_poly(p: MultiPoly) -> str:
    s = render_poly(p, default_names(p.n))
    s = s.replace("*", " ")
    for i in range(p.n):
        s = s.replace(f"x{i}", f"x_{{{i}}}")
    return s


def matrix_to_latex(M: PolyMatrix) -> str:
    cols = len(M[0]) if M else 0
    body = " \\\\\n".join(" & ".join(f"${_latex_poly(e)}$" for e in row) for row in M)
    return f"\\begin{{tabular}}{{{'c' * cols}}}\n{body}\n\\end{{tabular}}"


def mf_to_latex(CA: CoinvariantAlgebra, JP: JacobianPair, KM: KMatrix) -> str:
    parts = []
    for name, M in (("J", JP.J), ("\\bar J", JP.Jbar), ("K", KM.K)):
        parts.append(f"% ${name}$\n" + matrix_to_latex(M))
    return "\n\n".join(parts) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=lambda x: render_scalar(x))
