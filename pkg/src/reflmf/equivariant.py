"""Equivariant maps into the harmonics, the duality pairing and regularity.

A map phi in Hom_W(M, H_e) is stored by the images phi(b_j) of a fixed basis
of M.  For M = V the basis is the standard basis v_j and for M = V* it is the
dual basis, i.e. the coordinate forms x_j.  Degrees follow the convention that
V sits in degree -1 and V* in degree +1, so phi: V -> H_e has degree e + 1 and
psi: V* -> H_e has codegree e - 1.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from typing import Sequence

from .invariants import CoinvariantAlgebra, InvariantError
from .polyring import LinearSubstitution, MultiPoly
from .reflgroup import eigenspace, regular_vector_search
from .scalars import CycloNumber, ExactMatrix, ReflmfError, make_field

# degree/codegree matching convention for the permutation check, see
# degree_codegree_permutation
PERMUTATION_CONVENTION = "d_i + d*_pi(i) = 0 mod k"


class DualityError(ReflmfError):
    pass


@dataclasses.dataclass(frozen=True)
class EquivariantMap:
    rep: str  # "V", "V*" or "explicit"
    harmonic_degree: int
    coefficients: tuple  # column j = harmonic coordinates of phi(b_j)
    images: tuple  # phi(b_j) as MultiPoly

    @property
    def degree(self) -> int:
        return self.harmonic_degree + {"V": 1, "V*": -1}.get(self.rep, 0)


@dataclasses.dataclass(frozen=True)
class DegreeData:
    degrees: tuple  # ascending
    codegrees: tuple  # descending
    d: int
    N: int


@dataclasses.dataclass(frozen=True)
class PairingGram:
    sigma: tuple
    psi: tuple  # ascending by codegree
    P: ExactMatrix
    top_degree_one_dimensional: bool
    invertible: bool
    inverse: ExactMatrix | None
    support_by_degree: bool  # P_ij != 0 only when d_i + d*_j = d

    @property
    def perfect(self) -> bool:
        return self.invertible and self.top_degree_one_dimensional


def _rep_matrices(CA: CoinvariantAlgebra, M) -> tuple[str, list[ExactMatrix]]:
    gens = CA.group.generators
    if isinstance(M, str):
        if M == "V":
            return "V", list(gens)
        if M == "V*":
            return "V*", [g.inverse().transpose() for g in gens]
        raise ValueError(f"unknown representation tag {M!r}")
    mats = list(M)
    if len(mats) != len(gens):
        raise ValueError("explicit representation needs one matrix per generator")
    return "explicit", mats


def _harmonic_action(CA: CoinvariantAlgebra, e: int) -> list[ExactMatrix]:
    cache = CA.__dict__.setdefault("_harm_action", {})
    got = cache.get(e)
    if got is None:
        H = CA.harmonics.basis(e)
        got = []
        for g in CA.group.generators:
            sub = LinearSubstitution(g.inverse())
            cols = [CA.harmonic_coordinates(sub(h), e) for h in H]
            got.append(ExactMatrix.from_columns(CA.field, cols, len(H)))
        cache[e] = got
    return got


def hom_w_basis(CA: CoinvariantAlgebra, M, e: int) -> list[EquivariantMap]:
    """Basis of Hom_W(M, H_e), imposing T_g C = C rho(g) for the generators only."""
    H = CA.harmonics.basis(e)
    if not H:
        return []
    tag, rho = _rep_matrices(CA, M)
    key = (tag, e) if tag != "explicit" else None
    cache = CA.__dict__.setdefault("_hom_cache", {})
    if key is not None and key in cache:
        return cache[key]
    F = CA.field
    h, m = len(H), rho[0].rows
    rows = []
    for T, R in zip(_harmonic_action(CA, e), rho):
        R = R.embed(F) if R.field != F else R
        for l in range(h):
            for j in range(m):
                row = [F.zero] * (h * m)
                for k in range(h):
                    row[k * m + j] = row[k * m + j] + T[l, k]
                for i in range(m):
                    row[l * m + i] = row[l * m + i] - R[i, j]
                rows.append(row)
    out = []
    for vec in ExactMatrix.from_rows(F, rows, h * m).kernel_basis():
        C = tuple(tuple(vec[k * m + j] for k in range(h)) for j in range(m))
        imgs = []
        for col in C:
            p = MultiPoly.zero(F, CA.n)
            for c, hk in zip(col, H):
                if c:
                    p = p + hk * c
            imgs.append(p)
        out.append(EquivariantMap(tag, e, C, tuple(imgs)))
    if key is not None:
        cache[key] = out
    return out


def all_maps(CA: CoinvariantAlgebra, M) -> list[EquivariantMap]:
    out = []
    for e in range(CA.N + 1):
        out.extend(hom_w_basis(CA, M, e))
    return out


def multiplication_invariant(phi: EquivariantMap) -> MultiPoly:
    """The invariant sum_j x_j phi(v_j) attached to phi in Hom_W(V, H)."""
    p = MultiPoly.zero(phi.images[0].field, phi.images[0].n)
    for j, img in enumerate(phi.images):
        p = p + MultiPoly.variable(img.field, img.n, j) * img
    return p


def canonical(CA: CoinvariantAlgebra) -> CoinvariantAlgebra:
    """Rebase CA onto f_i = sigma~_i; attaches the sigma and psi bases."""
    if getattr(CA, "sigma", None) is not None:
        return CA
    got = CA.__dict__.get("_canonical")
    if got is not None:
        return got
    sigma = all_maps(CA, "V")
    psi = sorted(all_maps(CA, "V*"), key=lambda p: p.degree)
    if len(sigma) != CA.n or len(psi) != CA.n:
        raise DualityError("equivariant multiplicities differ from dim V")
    new = CA.rebase([multiplication_invariant(s) for s in sigma])
    new.sigma = tuple(sigma)
    new.psi = tuple(psi)
    CA._canonical = new
    return new


def degrees_codegrees(CA: CoinvariantAlgebra) -> DegreeData:
    C = canonical(CA)
    degs = tuple(s.degree for s in C.sigma)
    if degs != CA.degrees:
        raise InvariantError(f"equivariant degrees {degs} differ from invariant degrees {CA.degrees}")
    codegs = tuple(sorted((p.degree for p in C.psi), reverse=True))
    return DegreeData(degs, codegs, degs[-1], sum(x - 1 for x in degs))


def is_duality_group(CA: CoinvariantAlgebra) -> bool:
    dd = degrees_codegrees(CA)
    return all(a + b == dd.d for a, b in zip(dd.degrees, dd.codegrees))


def pairing_invariant(phi: EquivariantMap, psi: EquivariantMap) -> MultiPoly:
    """sum_j phi(v_j) psi(x_j), an invariant of degree deg phi + deg psi."""
    p = MultiPoly.zero(phi.images[0].field, phi.images[0].n)
    for a, b in zip(phi.images, psi.images):
        p = p + a * b
    return p


def duality_pairing(CA: CoinvariantAlgebra, phi: EquivariantMap, psi: EquivariantMap) -> CycloNumber:
    C = canonical(CA)
    if phi.degree + psi.degree != C.d:
        return C.field.zero
    return C.coefficient_of_fn(pairing_invariant(phi, psi), check_invariant=False)


def gram_matrix(CA: CoinvariantAlgebra) -> PairingGram:
    C = canonical(CA)
    cache = C.__dict__.get("_gram")
    if cache is not None:
        return cache
    dd = degrees_codegrees(C)
    rows = [[duality_pairing(C, s, p) for p in C.psi] for s in C.sigma]
    P = ExactMatrix.from_rows(C.field, rows)
    support = all(not rows[i][j] or C.sigma[i].degree + C.psi[j].degree == dd.d
                  for i in range(C.n) for j in range(C.n))
    inv = None
    if P.rank() == C.n:
        inv = P.inverse()
    gram = PairingGram(C.sigma, C.psi, P, dd.degrees.count(dd.d) == 1, inv is not None, inv, support)
    C._gram = gram
    return gram


def evaluation_iso(CA: CoinvariantAlgebra, M, v: Sequence) -> ExactMatrix:
    """Matrix (phi, b_j) -> phi(b_j)(v) over a basis of all of Hom_W(M, H)."""
    maps = all_maps(CA, M)
    if not maps:
        raise DualityError("no equivariant maps")
    m = len(maps[0].images)
    if len(maps) != m:
        raise DualityError(f"{len(maps)} maps for a representation of dimension {m}")
    vals = [[phi.images[j].evaluate(v) for j in range(m)] for phi in maps]
    F = vals[0][0].field
    for row in vals:
        for x in row:
            if x.field.conductor > F.conductor:
                F = x.field
    return ExactMatrix.from_rows(F, [[F(x) if x.field == F else x.embed(F) for x in row] for row in vals])


def criterion_regular(dd: DegreeData, k: int) -> bool:
    """k divides exactly as many degrees as codegrees (k | 0 always)."""
    return sum(x % k == 0 for x in dd.degrees) == sum(x % k == 0 for x in dd.codegrees)


def regularity_table(CA: CoinvariantAlgebra, bound: int, search: bool = True) -> dict[int, dict]:
    dd = degrees_codegrees(CA)
    table = {}
    for k in range(1, bound + 1):
        crit = criterion_regular(dd, k)
        found = None
        if search:
            found = regular_vector_search(CA.group, k) is not None
            if found and not crit:
                raise DualityError(f"regular vector found for k={k} but the criterion says non-regular")
            if crit and not found:
                warnings.warn(f"criterion says {k} is regular but the search found no witness", stacklevel=2)
        table[k] = {"criterion": crit, "witness_found": found}
    return table


def regular_numbers(CA: CoinvariantAlgebra, bound: int, search: bool = True) -> list[int]:
    return [k for k, row in regularity_table(CA, bound, search).items() if row["criterion"]]


def degree_codegree_permutation(CA: CoinvariantAlgebra, k: int) -> tuple | None:
    """A matching pi with d_i + d*_pi(i) = 0 mod k (codegrees indexed in descending order).

    The harmonic images of paired maps have degrees summing to d_i + d*_j, and
    evaluation at a regular vector of Z(I_k) preserves the Z/k grading, hence
    the sum.
    """
    if k < 1:
        raise ValueError("k must be positive")
    dd = degrees_codegrees(CA)
    n = len(dd.degrees)
    ok = [[(dd.degrees[i] + dd.codegrees[j]) % k == 0 for j in range(n)] for i in range(n)]
    match = [-1] * n  # codegree index -> degree index

    def augment(i, seen):
        for j in range(n):
            if ok[i][j] and j not in seen:
                seen.add(j)
                if match[j] < 0 or augment(match[j], seen):
                    match[j] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, set()):
            return None
    pi = [0] * n
    for j, i in enumerate(match):
        pi[i] = j
    return tuple(pi)


def springer_forward_check(CA: CoinvariantAlgebra, k: int) -> bool:
    """Every eigenspace V(g, zeta), zeta a primitive k-th root, lies in Z(I_k)."""
    G = CA.group
    polys = [f for f, d in zip(CA.basics.polys, CA.degrees) if d % k]
    if not polys:
        return True
    F = make_field(math.lcm(G.field.conductor, k))
    fs = [f.embed(F) for f in polys]
    roots = F.primitive_roots(k)
    seen = set()
    orders = G.element_orders()
    for g, o in zip(G.elements, orders):
        if o % k:
            continue  # no primitive k-th root among the eigenvalues
        gF = g.embed(F)
        for z in roots:
            basis = eigenspace(gF, z)
            if not basis:
                continue
            key = tuple(basis)
            if key in seen:
                continue
            seen.add(key)
            B = ExactMatrix.from_columns(F, basis, G.n)
            sub = LinearSubstitution(B)
            if any(not sub(f).is_zero() for f in fs):
                return False
    return True
