"""Finite complex reflection groups as explicit matrix groups.

Groups are built from a :class:`GroupSpec` (catalog entry or JSON file),
enumerated by breadth-first closure and then mined for reflections and
reflecting hyperplanes.  Every group element acts on ``V = K^n`` by matrix
multiplication on column vectors; the polynomial variables ``x0..x{n-1}``
are the coordinates dual to the standard basis of ``V``.

Coxeter groups are realised on the basis of simple roots through a
generalised Cartan matrix: ``s_i(a_j) = a_j - c_ij a_i`` with ``c_ii = 2``
and ``c_ij c_ji = 4 cos^2(pi/m_ij)``.  Choosing ``c_ij = -1`` on one side of
each edge keeps every entry in ``Q(zeta_m)`` and rational for Weyl groups.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import math
import re
from collections import deque
from pathlib import Path
from typing import Sequence

import flint

from .polyring import LinearSubstitution, MultiPoly
from .scalars import (
    QQ,
    CapExceeded,
    CycloField,
    CycloNumber,
    ExactMatrix,
    ReflmfError,
    common_field,
    get_limits,
    make_field,
    parse_scalar,
)


class GroupSpecError(ReflmfError, ValueError):
    pass


class ReducibleGroupError(ReflmfError):
    pass


@dataclasses.dataclass(frozen=True)
class GroupSpec:
    kind: str  # SymmetricSumZero | GIm | Dihedral | Coxeter | Cyclic | Explicit
    params: tuple = ()
    path: str | None = None

    @property
    def label(self) -> str:
        k, p = self.kind, self.params
        if k == "SymmetricSumZero":
            return f"Sym({p[0]})"
        if k == "GIm":
            return "G({},{},{})".format(*p)
        if k == "Dihedral":
            return f"I2({p[0]})"
        if k == "Coxeter":
            return f"{p[0]}{p[1]}" if p[0] != "I2" else f"I2({p[1]})"
        if k == "Cyclic":
            return f"Cyclic({p[0]})"
        return f"file:{self.path}"


_SPEC_PATTERNS = [
    (re.compile(r"^Sym\((\d+)\)$"), lambda m: GroupSpec("SymmetricSumZero", (int(m[1]),))),
    (re.compile(r"^G\((\d+),(\d+),(\d+)\)$"), lambda m: GroupSpec("GIm", (int(m[1]), int(m[2]), int(m[3])))),
    (re.compile(r"^I2\((\d+)\)$"), lambda m: GroupSpec("Coxeter", ("I2", int(m[1])))),
    (re.compile(r"^Dihedral\((\d+)\)$"), lambda m: GroupSpec("Dihedral", (int(m[1]),))),
    (re.compile(r"^Cyclic\((\d+)\)$"), lambda m: GroupSpec("Cyclic", (int(m[1]),))),
    (re.compile(r"^([ABD])(\d+)$"), lambda m: GroupSpec("Coxeter", (m[1], int(m[2])))),
    (re.compile(r"^H3$"), lambda m: GroupSpec("Coxeter", ("H", 3))),
]


def parse_group_spec(text: str) -> GroupSpec:
    s = text.strip().replace(" ", "")
    if s.startswith("file:"):
        return GroupSpec("Explicit", (), s[5:])
    for pat, make in _SPEC_PATTERNS:
        m = pat.match(s)
        if m:
            spec = make(m)
            _validate(spec)
            return spec
    raise GroupSpecError(
        f"unknown group spec {text!r}; built-ins are A<n>, B<n>, D<n>, H3, I2(m), "
        "G(m,p,n), Sym(n), Cyclic(m), Dihedral(m).  Other groups (e.g. further "
        "exceptional Shephard-Todd groups) can be given as file:path.json with "
        '{"conductor": m, "dimension": n, "generators": [[["1", "z^2"], ...], ...]}'
    )


def _validate(spec: GroupSpec):
    k, p = spec.kind, spec.params
    if k == "SymmetricSumZero" and p[0] < 2:
        raise GroupSpecError("Sym(n) needs n >= 2")
    if k == "GIm":
        m, pp, n = p
        if min(p) < 1 or m % pp:
            raise GroupSpecError("G(m,p,n) needs positive parameters with p | m")
        if (m, pp, n) == (2, 2, 2) or m == 1 and n > 1:
            raise GroupSpecError(f"G({m},{pp},{n}) is not irreducible")
    if k in ("Dihedral",) and p[0] < 3:
        raise GroupSpecError("Dihedral(m) needs m >= 3")
    if k == "Cyclic" and p[0] < 2:
        raise GroupSpecError("Cyclic(m) needs m >= 2")
    if k == "Coxeter":
        t, n = p
        if t == "A" and n < 1 or t == "B" and n < 2 or t == "D" and n < 4:
            raise GroupSpecError(f"no Coxeter group {t}{n}")
        if t == "I2" and n < 3:
            raise GroupSpecError("I2(m) needs m >= 3")


# -- generator matrices ------------------------------------------------------


def _sym_generators(npts: int):
    n = npts - 1
    gens = []
    for k in range(npts - 1):
        perm = list(range(npts))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        cols = []
        for i in range(1, npts):
            j = perm[i]
            cols.append([1 if r + 1 == j else 0 for r in range(n)] if j else [-1] * n)
        gens.append(ExactMatrix.from_columns(QQ, cols, n))
    return QQ, gens


def _cartan_generators(field: CycloField, cartan: list[list]):
    n = len(cartan)
    gens = []
    for i in range(n):
        rows = [[field.one if r == c else field.zero for c in range(n)] for r in range(n)]
        for j in range(n):
            rows[i][j] = rows[i][j] - field(cartan[i][j])
        gens.append(ExactMatrix.from_rows(field, rows))
    return gens


def _coxeter_generators(t: str, n: int):
    if t == "I2":
        m = n
        field = make_field(m)
        z = field.zeta
        four_cos2 = 2 + z + z.inverse()
        return field, _cartan_generators(field, [[2, -1], [-four_cos2, 2]])
    if t == "H":
        field = make_field(5)
        z = field.zeta
        four_cos2 = 2 + z + z.inverse()
        cartan = [[2, -1, 0], [-four_cos2, 2, -1], [0, -1, 2]]
        return field, _cartan_generators(field, cartan)
    cartan = [[0] * n for _ in range(n)]
    for i in range(n):
        cartan[i][i] = 2
    edges = [(i, i + 1) for i in range(n - 1)]
    if t == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    for i, j in edges:
        cartan[i][j] = cartan[j][i] = -1
    if t == "B" and n >= 2:
        cartan[n - 1][n - 2] = -2
    return QQ, _cartan_generators(QQ, cartan)


def _gmpn_generators(m: int, p: int, n: int):
    field = make_field(m)
    z = field.zeta
    if n == 1:
        return field, [ExactMatrix.from_rows(field, [[z ** p]])]
    gens = []

    def perm_matrix(i, j, a=1, b=1):
        rows = [[field.one if r == c else field.zero for c in range(n)] for r in range(n)]
        rows[i][i] = rows[j][j] = field.zero
        rows[i][j] = field(a)
        rows[j][i] = field(b)
        return ExactMatrix.from_rows(field, rows)

    for i in range(n - 1):
        gens.append(perm_matrix(i, i + 1))
    if p > 1:
        gens.append(perm_matrix(0, 1, z.inverse(), z))
    if p < m:
        rows = [[field.one if r == c else field.zero for c in range(n)] for r in range(n)]
        rows[0][0] = z ** p
        gens.append(ExactMatrix.from_rows(field, rows))
    return field, gens


def load_group_file(path: str | Path):
    """Read the explicit-matrices JSON format; returns (field, generators)."""
    try:
        doc = json.loads(Path(path).read_text())
        m = int(doc["conductor"])
        n = int(doc["dimension"])
        raw = doc["generators"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise GroupSpecError(f"cannot read group file {path}: {exc}") from exc
    field = make_field(m)
    gens = []
    for g in raw:
        if len(g) != n or any(len(r) != n for r in g):
            raise GroupSpecError(f"generator is not {n}x{n}")
        gens.append(ExactMatrix.from_rows(field, [[parse_scalar(str(x), field) for x in r] for r in g]))
    if not gens:
        raise GroupSpecError("group file lists no generators")
    return field, gens


def generator_matrices(spec: GroupSpec):
    k, p = spec.kind, spec.params
    if k == "SymmetricSumZero":
        field, gens = _sym_generators(p[0])
    elif k == "GIm":
        field, gens = _gmpn_generators(*p)
    elif k == "Dihedral":
        field, gens = _coxeter_generators("I2", p[0])
    elif k == "Coxeter":
        field, gens = _coxeter_generators(*p)
    elif k == "Cyclic":
        field, gens = _gmpn_generators(p[0], 1, 1)
    elif k == "Explicit":
        field, gens = load_group_file(spec.path)
    else:
        raise GroupSpecError(f"unknown group kind {k!r}")
    if field.dimension > 1 and all(a.is_rational() for g in gens for a in g.entries):
        gens = [ExactMatrix(QQ, g.rows, g.cols, [a.to_rational() for a in g.entries]) for g in gens]
        field = QQ
    return field, gens


# -- the group ---------------------------------------------------------------


class ReflectionGroup:
    """An enumerated finite matrix group generated by reflections."""

    def __init__(self, label: str, field: CycloField, generators: Sequence[ExactMatrix], elements, reflections,
                 hyperplane_forms):
        self.label = label
        self.field = field
        self.generators = tuple(generators)
        self.n = self.generators[0].rows
        self.elements = tuple(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.reflections = tuple(reflections)
        self.hyperplane_forms = tuple(hyperplane_forms)
        self._orders = None
        self._inverse = None

    def __repr__(self):
        return f"ReflectionGroup({self.label}, n={self.n}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> ExactMatrix:
        return self.elements[0]

    @property
    def is_real(self) -> bool:
        """True when every generator entry is fixed by complex conjugation."""
        return all(a.conjugate() == a for g in self.generators for a in g.entries)

    def element_orders(self) -> list[int]:
        if self._orders is None:
            ident = self.identity
            orders = []
            for g in self.elements:
                k, h = 1, g
                while h != ident:
                    h = h @ g
                    k += 1
                orders.append(k)
            self._orders = orders
        return self._orders

    def inverse_index(self) -> list[int]:
        if self._inverse is None:
            inv = [0] * self.order
            for i, g in enumerate(self.elements):
                if inv[i]:
                    continue
                j = self.index[g.inverse()]
                inv[i], inv[j] = j, i
            self._inverse = inv
        return self._inverse

    def hyperplane_product(self) -> MultiPoly:
        acc = MultiPoly.constant(self.field, self.n, 1)
        for a in self.hyperplane_forms:
            acc = acc * a
        return acc


def _finite_order(g: ExactMatrix, cap: int) -> bool:
    ident = ExactMatrix.identity(g.field, g.rows)
    h = g
    for _ in range(cap):
        if h == ident:
            return True
        h = h @ g
    return False


def enumerate_elements(generators: Sequence[ExactMatrix], cap: int | None = None) -> list[ExactMatrix]:
    """Breadth-first closure of the generators under left multiplication."""
    cap = get_limits().order_cap if cap is None else cap
    for g in generators:
        if not _finite_order(g, cap):
            raise CapExceeded(f"a generator has order above {cap} (or infinite order)")
    field = generators[0].field
    ident = ExactMatrix.identity(field, generators[0].rows)
    seen = {ident}
    elements = [ident]
    queue = deque([ident])
    while queue:
        h = queue.popleft()
        for g in generators:
            k = g @ h
            if k not in seen:
                seen.add(k)
                elements.append(k)
                if len(elements) > cap:
                    raise CapExceeded(f"group order exceeds the order cap {cap}")
                queue.append(k)
    return elements


def commutant_dimension(generators: Sequence[ExactMatrix]) -> int:
    """dim of {X : X g = g X for all generators}; 1 iff the action is irreducible."""
    field = generators[0].field
    n = generators[0].rows
    rows = []
    for g in generators:
        # (X g - g X)[i, j] = sum_k X[i,k] g[k,j] - g[i,k] X[k,j]
        for i in range(n):
            for j in range(n):
                row = [field.zero] * (n * n)
                for k in range(n):
                    row[i * n + k] = row[i * n + k] + g[k, j]
                    row[k * n + j] = row[k * n + j] - g[i, k]
                rows.append(row)
    M = ExactMatrix.from_rows(field, rows, n * n)
    return n * n - M.rank()


def reflections_and_hyperplanes(elements: Sequence[ExactMatrix]):
    """Indices of the reflections and the normalised, deduplicated hyperplane forms."""
    if not elements:
        return [], []
    field = elements[0].field
    n = elements[0].rows
    ident = ExactMatrix.identity(field, n)
    refl, forms, seen = [], [], set()
    for i, g in enumerate(elements):
        diff = g - ident
        if diff.is_zero() or diff.rank() != 1:
            continue
        refl.append(i)
        row = next(diff.row(r) for r in range(n) if any(diff.row(r)))
        lead = next(x for x in row if x).inverse()
        coeffs = tuple(x * lead for x in row)
        if coeffs not in seen:
            seen.add(coeffs)
            forms.append(MultiPoly.linear_form(field, coeffs))
    return refl, forms


def build_group(spec: GroupSpec | str) -> ReflectionGroup:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    field, gens = generator_matrices(spec)
    if commutant_dimension(gens) != 1:
        raise ReducibleGroupError(f"{spec.label} does not act irreducibly")
    elements = enumerate_elements(gens)
    refl, forms = reflections_and_hyperplanes(elements)
    return ReflectionGroup(spec.label, field, gens, elements, refl, forms)


def group_from_matrices(label: str, generators: Sequence[ExactMatrix]) -> ReflectionGroup:
    if commutant_dimension(generators) != 1:
        raise ReducibleGroupError(f"{label} does not act irreducibly")
    elements = enumerate_elements(generators)
    refl, forms = reflections_and_hyperplanes(elements)
    return ReflectionGroup(label, generators[0].field, generators, elements, refl, forms)


# -- averaging and series ----------------------------------------------------


def reynolds(G: ReflectionGroup, p: MultiPoly) -> MultiPoly:
    """(1/|W|) sum_g g.p; the sum over g^-1 is the same sum, so substitute by g."""
    acc = MultiPoly.zero(common_field(G.field, p.field), p.n)
    for g in G.elements:
        acc = acc + LinearSubstitution(g)(p)
    return acc * flint.fmpq(1, G.order)


@dataclasses.dataclass(frozen=True)
class PowerSeriesTrunc:
    coefficients: tuple  # of Rational, index = degree
    order: int  # terms known up to t^(order-1)

    def __getitem__(self, k):
        return self.coefficients[k]


def _char_coeffs(g: ExactMatrix) -> list[CycloNumber]:
    """Coefficients c_k of det(1 - t g) = sum_k c_k t^k (Faddeev-LeVerrier)."""
    n = g.rows
    field = g.field
    ident = ExactMatrix.identity(field, n)
    c = [field.one]
    Mk = ExactMatrix.zeros(field, n, n)
    for k in range(1, n + 1):
        Mk = g @ Mk + ident.scale(c[-1])
        gm = g @ Mk
        tr = field.zero
        for i in range(n):
            tr = tr + gm[i, i]
        c.append(tr * flint.fmpq(-1, k))
    return c


def molien(G: ReflectionGroup, character: Sequence | None = None, order: int = 10) -> PowerSeriesTrunc:
    """Truncated (1/|W|) sum_g chi(g^-1) / det(1 - t g)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    inv = G.inverse_index()
    F = G.field
    if character is not None:
        F = common_field(F, *(x.field for x in character if isinstance(x, CycloNumber)))
    totals = [F.zero] * order
    grouped: dict = {}
    for i, g in enumerate(G.elements):
        key = tuple(_char_coeffs(g))
        w = F.one if character is None else F(character[inv[i]])
        grouped[key] = grouped.get(key, F.zero) + w
    for key, weight in grouped.items():
        c = [F(x) for x in key]
        b = [F.one]
        for j in range(1, order):
            acc = F.zero
            for k in range(1, min(j, len(c) - 1) + 1):
                acc = acc - c[k] * b[j - k]
            b.append(acc)
        for j in range(order):
            totals[j] = totals[j] + weight * b[j]
    coeffs = tuple((t * flint.fmpq(1, G.order)).to_rational() for t in totals)
    return PowerSeriesTrunc(coeffs, order)


# -- generation ----------------------------------------------------------------


def _left_permutations(G: ReflectionGroup, indices: Sequence[int]) -> dict[int, list[int]]:
    perms = {}
    for r in indices:
        g = G.elements[r]
        perms[r] = [G.index[g @ h] for h in G.elements]
    return perms


def _generated_order(perms: Sequence[list[int]], target: int) -> int:
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for p in perms:
            j = p[i]
            if j not in seen:
                seen.add(j)
                if len(seen) == target:
                    return target
                stack.append(j)
    return len(seen)


def is_well_generated(G: ReflectionGroup) -> bool:
    """Some n reflections generate W (exhaustive subset search with early exit)."""
    return well_generating_set(G) is not None


def well_generating_set(G: ReflectionGroup) -> tuple | None:
    perms = _left_permutations(G, G.reflections)
    if G.order == 1:
        return ()
    for subset in itertools.combinations(G.reflections, G.n):
        if _generated_order([perms[r] for r in subset], G.order) == G.order:
            return subset
    return None


# -- eigenspaces and regular vectors -----------------------------------------


def eigenspace(g: ExactMatrix, zeta) -> list[tuple]:
    if isinstance(zeta, CycloNumber):
        F = common_field(g.field, zeta.field)
    else:
        F = g.field
    g = g.embed(F)
    z = F(zeta)
    shifted = g - ExactMatrix.identity(F, g.rows).scale(z)
    return shifted.kernel_basis()


def _grid(r: int, bound: int):
    """Nonzero integer vectors in [0, bound]^r, ordered by max-norm then lex."""
    for norm in range(1, bound + 1):
        for v in itertools.product(range(norm + 1), repeat=r):
            if max(v) == norm:
                yield v


@dataclasses.dataclass(frozen=True)
class RegularWitness:
    element: int
    zeta: CycloNumber
    vector: tuple

    @property
    def field(self) -> CycloField:
        return self.zeta.field


def regular_vector_search(G: ReflectionGroup, k: int) -> RegularWitness | None:
    """Look for g, a primitive k-th root zeta and v in V(g, zeta) off every hyperplane.

    None means nothing was found; it is not a proof that k is not regular.
    """
    if k < 1:
        raise ValueError("k must be positive")
    orders = G.element_orders()
    candidates = [i for i, o in enumerate(orders) if o % k == 0]
    if not candidates:
        return None
    F = make_field(math.lcm(G.field.conductor, k))
    forms = [a.embed(F) for a in G.hyperplane_forms]
    roots = F.primitive_roots(k)
    for i in candidates:
        g = G.elements[i].embed(F)
        for z in roots:
            basis = eigenspace(g, z)
            if not basis:
                continue
            if any(all(not a.evaluate(b) for b in basis) for a in forms):
                continue
            for coeffs in _grid(len(basis), len(forms) + 1):
                v = [F.zero] * G.n
                for c, b in zip(coeffs, basis):
                    if c:
                        v = [x + y * c for x, y in zip(v, b)]
                if all(a.evaluate(v) for a in forms):
                    return RegularWitness(i, z, tuple(v))
    return None


def invariant_bilinear_form(G: ReflectionGroup) -> ExactMatrix:
    """A nonzero symmetric B with g^T B g = B for every generator."""
    n, field = G.n, G.field
    rows = []
    for g in G.generators:
        # (g^T B g - B)[i, j] = sum_{k,l} g[k,i] B[k,l] g[l,j] - B[i,j]
        for i in range(n):
            for j in range(n):
                row = [field.zero] * (n * n)
                for k in range(n):
                    for l in range(n):
                        row[k * n + l] = row[k * n + l] + g[k, i] * g[l, j]
                row[i * n + j] = row[i * n + j] - 1
                rows.append(row)
    for i in range(n):
        for j in range(i + 1, n):
            row = [field.zero] * (n * n)
            row[i * n + j] = field.one
            row[j * n + i] = -field.one
            rows.append(row)
    ker = ExactMatrix.from_rows(field, rows, n * n).kernel_basis()
    if not ker:
        raise ReflmfError(f"{G.label} has no invariant symmetric bilinear form")
    return ExactMatrix(field, n, n, ker[0])
