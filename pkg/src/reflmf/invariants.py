"""Basic invariants, harmonics and normal forms in the coinvariant algebra.

The harmonic space H is the common kernel of the operators f(d/dx) where f
runs over invariants of the *contragredient* action (generators transposed).
Its apolar partner, the annihilator of the Hilbert ideal, is kept as well:
pairing against it is how a degree-m form is projected onto H along I.
"""

from __future__ import annotations

import dataclasses
import math
from functools import cached_property
from typing import Sequence

from .polyring import (
    LinearSubstitution,
    MultiPoly,
    dim_homogeneous,
    monomials,
)
from .reflgroup import ReflectionGroup
from .scalars import CycloField, CycloNumber, ExactMatrix, ReflmfError


class InvariantError(ReflmfError):
    pass


@dataclasses.dataclass(frozen=True)
class BasicInvariants:
    polys: tuple
    degrees: tuple

    @property
    def highest_degree(self) -> int:
        return self.degrees[-1]

    def __len__(self):
        return len(self.polys)


@dataclasses.dataclass(frozen=True)
class HarmonicBasis:
    by_degree: tuple  # by_degree[m] = tuple of MultiPoly spanning H_m

    @property
    def dims(self) -> tuple:
        return tuple(len(b) for b in self.by_degree)

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)

    @property
    def top_degree(self) -> int:
        return len(self.by_degree) - 1

    def basis(self, m: int) -> tuple:
        return self.by_degree[m] if 0 <= m < len(self.by_degree) else ()


@dataclasses.dataclass(frozen=True)
class MembershipResult:
    member: bool
    multipliers: tuple | None = None  # q_i with p = sum q_i f_i, when requested

    def __bool__(self):
        return self.member


def _apolar_weights(n: int, m: int) -> list[int]:
    return [math.prod(math.factorial(k) for k in e) for e in monomials(n, m)]


def weighted_exponents(degrees: Sequence[int], m: int) -> list[tuple]:
    """Exponent vectors e with sum e_i * degrees[i] == m, in lex-descending order."""
    out = []

    def rec(i, left, acc):
        if i == len(degrees):
            if left == 0:
                out.append(tuple(acc))
            return
        for k in range(left // degrees[i], -1, -1):
            rec(i + 1, left - k * degrees[i], acc + [k])

    rec(0, m, [])
    return out


class _ProductCache:
    """Memoised monomials f^e in a fixed list of polynomials."""

    def __init__(self, polys: Sequence[MultiPoly], field: CycloField, n: int):
        self.polys = list(polys)
        self._cache = {(0,) * len(polys): MultiPoly.constant(field, n, 1)}

    def __call__(self, e: tuple) -> MultiPoly:
        got = self._cache.get(e)
        if got is None:
            i = next(k for k, x in enumerate(e) if x)
            prev = e[:i] + (e[i] - 1,) + e[i + 1:]
            got = self.polys[i] * self(prev)
            self._cache[e] = got
        return got


def invariant_subspace(generators: Sequence[ExactMatrix], m: int) -> list[MultiPoly]:
    """Basis of the degree-m forms fixed by every generator."""
    field = generators[0].field
    n = generators[0].rows
    D = dim_homogeneous(n, m)
    rows = []
    for g in generators:
        A = LinearSubstitution(g).degree_matrix(m)
        for i in range(D):
            r = list(A.row(i))
            r[i] = r[i] - 1
            rows.append(r)
    ker = ExactMatrix.from_rows(field, rows, D).kernel_basis()
    return [MultiPoly.from_vector(field, n, m, v) for v in ker]


def basic_invariants_from_generators(generators: Sequence[ExactMatrix], order: int,
                                     degree_cap: int | None = None) -> BasicInvariants:
    """Degree-by-degree search for algebra generators of the invariant ring."""
    field = generators[0].field
    n = generators[0].rows
    cap = 2 * order if degree_cap is None else degree_cap
    polys: list[MultiPoly] = []
    degrees: list[int] = []
    m = 0
    while len(polys) < n:
        m += 1
        if m > cap:
            raise InvariantError(f"found only {len(polys)} of {n} basic invariants below degree {cap}")
        inv = invariant_subspace(generators, m)
        if not inv:
            continue
        prods = _ProductCache(polys, field, n)
        known = [prods(e).to_vector(m) for e in weighted_exponents(degrees, m)] if polys else []
        cols = known + [p.to_vector(m) for p in inv]
        piv = ExactMatrix.from_columns(field, cols, dim_homogeneous(n, m)).pivot_columns()
        for j in piv:
            if j >= len(known):
                polys.append(inv[j - len(known)].monic())
                degrees.append(m)
    if math.prod(degrees) != order:
        raise InvariantError(f"degrees {degrees} do not multiply to the group order {order}")
    return BasicInvariants(tuple(polys), tuple(degrees))


def basic_invariants(G: ReflectionGroup) -> BasicInvariants:
    return basic_invariants_from_generators(G.generators, G.order)


def _annihilator(ideal_gens: Sequence[MultiPoly], degrees: Sequence[int], field: CycloField, n: int,
                 m: int) -> list[MultiPoly]:
    """Forms of degree m killed by every q(d/dx) with q in the ideal generated by ideal_gens."""
    D = dim_homogeneous(n, m)
    w = _apolar_weights(n, m)
    rows = []
    for f, d in zip(ideal_gens, degrees):
        if d > m:
            continue
        for beta in monomials(n, m - d):
            v = (f * MultiPoly.monomial(field, beta)).to_vector(m)
            rows.append([c * wi for c, wi in zip(v, w)])
    if not rows:
        return [MultiPoly.monomial(field, e) for e in monomials(n, m)]
    ker = ExactMatrix.from_rows(field, rows, D).kernel_basis()
    return [MultiPoly.from_vector(field, n, m, v) for v in ker]


def _expected_dims(degrees: Sequence[int], n: int) -> list[int]:
    """Coefficients of prod_i (1 + t + ... + t^(d_i - 1))."""
    c = [1]
    for d in degrees:
        new = [0] * (len(c) + d - 1)
        for i, x in enumerate(c):
            for j in range(d):
                new[i + j] += x
        c = new
    return c


class CoinvariantAlgebra:
    """S / I with H as the chosen complement, degreewise reduction data and ideal queries."""

    def __init__(self, G: ReflectionGroup, basics: BasicInvariants | None = None):
        self.group = G
        self.field = G.field
        self.n = G.n
        self.basics = basics if basics is not None else basic_invariants(G)
        dual_gens = [g.transpose() for g in G.generators]
        self.dual_basics = basic_invariants_from_generators(dual_gens, G.order)
        if self.dual_basics.degrees != self.basics.degrees:
            raise InvariantError("dual invariants have different degrees")
        N = sum(d - 1 for d in self.basics.degrees)
        self.N = N
        expected = _expected_dims(self.basics.degrees, self.n)
        harm, dual_harm = [], []
        for m in range(N + 1):
            h = _annihilator(self.dual_basics.polys, self.dual_basics.degrees, self.field, self.n, m)
            hd = _annihilator(self.basics.polys, self.basics.degrees, self.field, self.n, m)
            if len(h) != expected[m] or len(hd) != expected[m]:
                raise InvariantError(f"harmonic dimension mismatch in degree {m}")
            harm.append(tuple(h))
            dual_harm.append(tuple(hd))
        self.harmonics = HarmonicBasis(tuple(harm))
        self.dual_harmonics = HarmonicBasis(tuple(dual_harm))
        if self.harmonics.total_dimension != G.order:
            raise InvariantError("harmonic space does not have dimension |W|")
        self._nf: dict[int, ExactMatrix] = {}
        self._ideal: dict = {}
        self._express: dict = {}

    # -- basic data ----------------------------------------------------------

    @property
    def degrees(self) -> tuple:
        return self.basics.degrees

    @property
    def d(self) -> int:
        return self.basics.highest_degree

    def rebase(self, polys: Sequence[MultiPoly]) -> "CoinvariantAlgebra":
        """Same algebra with another set of basic invariants (same degrees, same ideal)."""
        new = object.__new__(CoinvariantAlgebra)
        new.__dict__.update(self.__dict__)
        degs = tuple(p.homogeneous_degree() for p in polys)
        if degs != self.degrees:
            raise InvariantError("replacement invariants have the wrong degrees")
        for p in polys:
            if not self.reduce(p).is_zero():
                raise InvariantError("replacement polynomial is not in the Hilbert ideal")
        new.basics = BasicInvariants(tuple(polys), degs)
        new._ideal = {}
        new._express = {}
        for stale in ("_products", "_canonical", "_gram", "sigma", "psi"):
            new.__dict__.pop(stale, None)
        return new

    def is_invariant(self, p: MultiPoly) -> bool:
        return all(LinearSubstitution(g)(p) == p for g in self.group.generators)

    # -- normal forms -----------------------------------------------------------

    def _nf_matrix(self, m: int) -> ExactMatrix:
        """R_m with R_m @ vec(p) = harmonic coordinates of the normal form of p."""
        got = self._nf.get(m)
        if got is None:
            H = self.harmonics.basis(m)
            Q = self.dual_harmonics.basis(m)
            w = _apolar_weights(self.n, m)
            B = ExactMatrix.from_rows(self.field, [[c * wi for c, wi in zip(q.to_vector(m), w)] for q in Q],
                                      dim_homogeneous(self.n, m))
            Hm = ExactMatrix.from_columns(self.field, [h.to_vector(m) for h in H], dim_homogeneous(self.n, m))
            got = (B @ Hm).inverse() @ B
            self._nf[m] = got
        return got

    def harmonic_coordinates(self, p: MultiPoly, m: int) -> tuple:
        if m > self.N or m < 0:
            return ()
        return self.harmonic_coordinates_many([p], m)[0]

    def harmonic_coordinates_many(self, polys: Sequence[MultiPoly], m: int) -> list[tuple]:
        """Batched harmonic_coordinates for forms of a common degree m."""
        if m > self.N or m < 0:
            return [() for _ in polys]
        vecs = [p.embed(self.field).to_vector(m) for p in polys]
        return self._nf_matrix(m).apply_many(vecs)

    def reduce(self, p: MultiPoly) -> MultiPoly:
        """The harmonic h with p - h in I."""
        out = MultiPoly.zero(self.field, self.n)
        for m, comp in sorted(p.homogeneous_components().items()):
            coords = self.harmonic_coordinates(comp, m)
            for c, h in zip(coords, self.harmonics.basis(m)):
                if c:
                    out = out + h * c
        return out

    # -- ideals ---------------------------------------------------------------------

    def _ideal_data(self, k: int, m: int):
        key = (k, m)
        got = self._ideal.get(key)
        if got is None:
            spanning = []  # (i, beta)
            for i, d in enumerate(self.degrees):
                if (k == 0 or d % k) and d <= m:
                    spanning.extend((i, beta) for beta in monomials(self.n, m - d))
            D = dim_homogeneous(self.n, m)
            cols = [(self.basics.polys[i] * MultiPoly.monomial(self.field, beta)).to_vector(m)
                    for i, beta in spanning]
            if cols:
                M = ExactMatrix.from_columns(self.field, cols, D)
                piv = M.pivot_columns()
                basis = [spanning[j] for j in piv]
                Mb = ExactMatrix.from_columns(self.field, [cols[j] for j in piv], D)
            else:
                basis, Mb = [], None
            got = (basis, Mb)
            self._ideal[key] = got
        return got

    def graded_ideal_basis(self, k: int, m: int) -> list[MultiPoly]:
        basis, _ = self._ideal_data(k, m)
        return [self.basics.polys[i] * MultiPoly.monomial(self.field, beta) for i, beta in basis]

    def ideal_membership(self, p: MultiPoly, k: int = 0, witness: bool = False) -> MembershipResult:
        return self.ideal_membership_many([p], k, witness)[0]

    def ideal_membership_many(self, polys: Sequence[MultiPoly], k: int = 0,
                              witness: bool = False) -> list[MembershipResult]:
        """Decide p in (I_k)_m for homogeneous p; all inputs grouped by degree and batched."""
        out: list = [None] * len(polys)
        by_deg: dict[int, list[int]] = {}
        for idx, p in enumerate(polys):
            if p.is_zero():
                out[idx] = MembershipResult(True, self._zero_witness() if witness else None)
                continue
            by_deg.setdefault(p.homogeneous_degree(), []).append(idx)
        for m, idxs in by_deg.items():
            basis, Mb = self._ideal_data(k, m)
            if Mb is None:
                for idx in idxs:
                    out[idx] = MembershipResult(False)
                continue
            sols = Mb.solve_many([polys[idx].embed(self.field).to_vector(m) for idx in idxs])
            for idx, sol in zip(idxs, sols):
                if sol is None:
                    out[idx] = MembershipResult(False)
                elif not witness:
                    out[idx] = MembershipResult(True)
                else:
                    mult = [MultiPoly.zero(self.field, self.n) for _ in self.degrees]
                    for (i, beta), c in zip(basis, sol):
                        if c:
                            mult[i] = mult[i] + MultiPoly.monomial(self.field, beta, c)
                    out[idx] = MembershipResult(True, tuple(mult))
        return out

    def _zero_witness(self):
        return tuple(MultiPoly.zero(self.field, self.n) for _ in self.degrees)

    # -- invariants in terms of the basics --------------------------------------

    @cached_property
    def _products(self) -> _ProductCache:
        return _ProductCache(self.basics.polys, self.field, self.n)

    def express_in_basics(self, g: MultiPoly, check_invariant: bool = True) -> MultiPoly:
        """P with g = P(f_1, ..., f_n); P is returned as a polynomial in n formal symbols."""
        g = g.embed(self.field)
        if g.is_zero():
            return MultiPoly.zero(self.field, self.n)
        if not g.is_homogeneous():
            out = MultiPoly.zero(self.field, self.n)
            for comp in g.homogeneous_components().values():
                out = out + self.express_in_basics(comp, check_invariant)
            return out
        m = g.homogeneous_degree()
        if check_invariant and not self.is_invariant(g):
            raise InvariantError("polynomial is not invariant")
        exps = self._express.get(m)
        if exps is None:
            exps = weighted_exponents(self.degrees, m)
            M = ExactMatrix.from_columns(self.field, [self._products(e).to_vector(m) for e in exps],
                                         dim_homogeneous(self.n, m)) if exps else None
            exps = (exps, M)
            self._express[m] = exps
        es, M = exps
        sol = M.solve(g.to_vector(m)) if M is not None else None
        if sol is None:
            raise InvariantError("invariant has no expression in the basic invariants")
        return MultiPoly(self.field, self.n, {e: c for e, c in zip(es, sol) if c})

    def coefficient_of_fn(self, g: MultiPoly, check_invariant: bool = True) -> CycloNumber:
        if g.is_zero():
            return self.field.zero
        if g.homogeneous_degree() != self.d:
            raise InvariantError(f"expected degree {self.d}, got {g.homogeneous_degree()}")
        P = self.express_in_basics(g, check_invariant)
        return P.coefficient((0,) * (self.n - 1) + (1,))

    def hilbert_dims(self) -> tuple:
        return self.harmonics.dims


def harmonic_basis(CA: CoinvariantAlgebra) -> HarmonicBasis:
    return CA.harmonics


def graded_ideal_basis(CA: CoinvariantAlgebra, k: int, m: int) -> list[MultiPoly]:
    return CA.graded_ideal_basis(k, m)


def reduce(CA: CoinvariantAlgebra, p: MultiPoly) -> MultiPoly:
    return CA.reduce(p)


def ideal_membership(CA: CoinvariantAlgebra, p: MultiPoly, k: int = 0, witness: bool = False) -> MembershipResult:
    return CA.ideal_membership(p, k, witness)


def express_in_basics(CA: CoinvariantAlgebra, g: MultiPoly) -> MultiPoly:
    return CA.express_in_basics(g)


def coefficient_of_fn(CA: CoinvariantAlgebra, g: MultiPoly) -> CycloNumber:
    return CA.coefficient_of_fn(g)
