"""Exact scalars: cyclotomic fields Q(zeta_m) and dense exact linear algebra.

Elements of Q(zeta_m) are stored in the power basis 1, z, ..., z^(phi(m)-1)
and reduced modulo the m-th cyclotomic polynomial.  Rational coefficients are
``flint.fmpq`` values, which are always kept in lowest terms.

Linear algebra over Q(zeta_m) is carried out on the Q-expansion of a matrix:
every entry ``a`` becomes the phi(m) x phi(m) block of multiplication by
``a``.  A K-column is a pivot of the K-row-echelon form exactly when its whole
block of Q-columns is pivotal, so ranks, normalised kernels and solutions can
all be read off a single rational RREF.
"""

from __future__ import annotations

import contextlib
import dataclasses
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint

Rational = flint.fmpq


class ReflmfError(Exception):
    """Base class for errors raised by this package."""


class CapExceeded(ReflmfError):
    """A configured resource cap (conductor, matrix size, group order) was hit."""


class FieldMismatch(ReflmfError, ValueError):
    pass


class SingularMatrixError(ReflmfError, ZeroDivisionError):
    pass


@dataclasses.dataclass(frozen=True)
class Limits:
    conductor_cap: int = 120
    max_columns: int = 5000
    order_cap: int = 1000


_limits = Limits()


def get_limits() -> Limits:
    return _limits


def set_limits(**changes) -> Limits:
    """Replace the process-wide caps; returns the previous value."""
    global _limits
    old = _limits
    new = dataclasses.replace(old, **changes)
    for name, value in dataclasses.asdict(new).items():
        if value <= 0:
            raise ValueError(f"{name} must be positive")
    _limits = new
    return old


@contextlib.contextmanager
def limits(**changes):
    old = set_limits(**changes)
    try:
        yield get_limits()
    finally:
        set_limits(**dataclasses.asdict(old))


def to_rational(x) -> Rational:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, (int, flint.fmpz)):
        return flint.fmpq(x)
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


# -- cyclotomic fields -------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> flint.fmpq_poly:
    num = flint.fmpq_poly([-1] + [0] * (m - 1) + [1])
    for e in range(1, m):
        if m % e == 0:
            q, r = divmod(num, _cyclotomic(e))
            assert r == 0
            num = q
    return num


def euler_phi(m: int) -> int:
    result = m
    p, k = 2, m
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


class CycloField:
    """The cyclotomic field Q(zeta_m); use :func:`make_field` to obtain one."""

    __slots__ = ("conductor", "modulus", "dimension", "_powers")

    def __init__(self, m: int):
        self.conductor = m
        self.modulus = _cyclotomic(m)
        self.dimension = self.modulus.degree()
        # z^k reduced, for k < m
        x = flint.fmpq_poly([0, 1])
        pw = [flint.fmpq_poly([1])]
        for _ in range(1, m):
            pw.append((pw[-1] * x) % self.modulus)
        self._powers = tuple(pw)

    @property
    def minimal_polynomial(self) -> list[Rational]:
        """Coefficients of Phi_m, constant term first."""
        return list(self.modulus.coeffs())

    def __repr__(self):
        return f"CycloField({self.conductor})"

    def __eq__(self, other):
        return isinstance(other, CycloField) and other.conductor == self.conductor

    def __hash__(self):
        return hash(("CycloField", self.conductor))

    def __reduce__(self):
        return (make_field, (self.conductor,))

    @property
    def is_rational(self) -> bool:
        return self.dimension == 1

    def __call__(self, value) -> "CycloNumber":
        if isinstance(value, CycloNumber):
            if value.field == self:
                return value
            return value.embed(self)
        return CycloNumber(self, flint.fmpq_poly([to_rational(value)]))

    @property
    def zero(self) -> "CycloNumber":
        return CycloNumber(self, flint.fmpq_poly())

    @property
    def one(self) -> "CycloNumber":
        return CycloNumber(self, flint.fmpq_poly([1]))

    @property
    def zeta(self) -> "CycloNumber":
        return self.root_of_unity(1)

    def root_of_unity(self, k: int) -> "CycloNumber":
        """zeta_m ** k for any integer k."""
        return CycloNumber(self, self._powers[k % self.conductor])

    def from_coeffs(self, coeffs: Sequence) -> "CycloNumber":
        if len(coeffs) > self.dimension:
            raise ValueError("too many coordinates for this field")
        return CycloNumber(self, flint.fmpq_poly([to_rational(c) for c in coeffs]))

    def primitive_root(self, k: int, j: int = 1) -> "CycloNumber":
        """The primitive k-th root zeta_k^j, which requires k | conductor."""
        if self.conductor % k:
            raise FieldMismatch(f"Q(zeta_{self.conductor}) has no primitive {k}-th root")
        return self.root_of_unity(j * (self.conductor // k))

    def primitive_roots(self, k: int) -> list["CycloNumber"]:
        return [self.primitive_root(k, j) for j in range(1, k + 1) if math.gcd(j, k) == 1]


@lru_cache(maxsize=None)
def _field(m: int) -> CycloField:
    return CycloField(m)


def make_field(m: int) -> CycloField:
    if m < 1:
        raise ValueError("conductor must be positive")
    cap = get_limits().conductor_cap
    if m > cap:
        raise CapExceeded(f"conductor {m} exceeds the conductor cap {cap}")
    return _field(m)


QQ = make_field(1)


def common_field(*fields: CycloField) -> CycloField:
    m = 1
    for f in fields:
        m = math.lcm(m, f.conductor)
    return make_field(m)


class CycloNumber:
    __slots__ = ("field", "poly")

    def __init__(self, field: CycloField, poly: flint.fmpq_poly):
        # poly must already be reduced mod field.modulus
        self.field = field
        self.poly = poly

    # construction helpers
    def _new(self, poly):
        return CycloNumber(self.field, poly)

    def _coerce(self, other) -> "CycloNumber":
        if isinstance(other, CycloNumber):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        return self.field(other)

    @property
    def coeffs(self) -> list[Rational]:
        c = self.poly.coeffs()
        return c + [flint.fmpq(0)] * (self.field.dimension - len(c))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def to_rational(self) -> Rational:
        if self.poly.degree() > 0:
            raise ValueError(f"{self} is not rational")
        c = self.poly.coeffs()
        return c[0] if c else flint.fmpq(0)

    def __add__(self, other):
        other = self._coerce(other)
        return self._new(self.poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self._new(self.poly - other.poly)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self._new(-self.poly)

    def __mul__(self, other):
        if isinstance(other, CycloNumber):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            if self.field.dimension == 1:
                return self._new(self.poly * other.poly)
            return self._new((self.poly * other.poly) % self.field.modulus)
        return self._new(self.poly * to_rational(other))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        """Multiplicative inverse by the extended Euclidean algorithm against Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.field.dimension == 1:
            return self._new(flint.fmpq_poly([1 / self.to_rational()]))
        # invariant: r_i = s_i * a  (mod Phi)
        r0, r1 = self.field.modulus, self.poly
        s0, s1 = flint.fmpq_poly(), flint.fmpq_poly([1])
        while r1.degree() > 0:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        c = r1.coeffs()[0]
        return self._new((s1 / c) % self.field.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation z -> z^-1."""
        m = self.field.conductor
        acc = flint.fmpq_poly()
        for k, c in enumerate(self.poly.coeffs()):
            if c:
                acc += self.field._powers[(-k) % m] * c
        return self._new(acc)

    def embed(self, target: CycloField) -> "CycloNumber":
        """Image under Q(zeta_m) -> Q(zeta_M), zeta_m -> zeta_M^(M/m)."""
        if target == self.field:
            return self
        m, big = self.field.conductor, target.conductor
        if big % m:
            raise FieldMismatch(f"Q(zeta_{m}) does not embed in Q(zeta_{big})")
        step = big // m
        acc = flint.fmpq_poly()
        for k, c in enumerate(self.poly.coeffs()):
            if c:
                acc += target._powers[(k * step) % big] * c
        return CycloNumber(target, acc)

    def __eq__(self, other):
        if isinstance(other, CycloNumber):
            return self.field == other.field and self.poly == other.poly
        try:
            return self.poly == flint.fmpq_poly([to_rational(other)])
        except TypeError:
            return NotImplemented

    def __hash__(self):
        c = self.poly.coeffs()
        if len(c) <= 1:
            return hash(c[0] if c else 0)
        return hash(tuple((int(x.p), int(x.q)) for x in c))

    def __repr__(self):
        return f"CycloNumber({self.field.conductor}, {render_scalar(self)!r})"

    def __str__(self):
        return render_scalar(self)


def field_arith(a: CycloNumber, b: CycloNumber, op: str) -> CycloNumber:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def field_invert(a: CycloNumber) -> CycloNumber:
    return a.inverse()


# -- rendering / parsing -----------------------------------------------------


def _render_rational(q: Rational) -> str:
    return str(int(q.p)) if q.q == 1 else f"{int(q.p)}/{int(q.q)}"


def render_scalar(a: CycloNumber) -> str:
    """Render as a combination of powers of ``z``, e.g. ``1-z`` or ``-1/2*z^2``."""
    parts = []
    for k, c in enumerate(a.poly.coeffs()):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _render_rational(mag)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if mag == 1 else f"{_render_rational(mag)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TERM = re.compile(
    r"^(?P<coef>\d+(?:/\d+)?)?\s*(?:[*·]\s*)?(?P<z>z(?:\s*\^\s*(?P<exp>\d+))?)?$"
)


def parse_scalar(text: str, field: CycloField) -> CycloNumber:
    """Inverse of :func:`render_scalar`; also accepts ``·`` as a product sign."""
    s = text.strip()
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1].strip()
    if not s:
        raise ValueError("empty scalar")
    pieces = re.findall(r"[+-]?[^+-]+", s.replace(" ", ""))
    acc = field.zero
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM.match(body)
        if not m or not (m.group("coef") or m.group("z")):
            raise ValueError(f"cannot parse scalar term {piece!r} in {text!r}")
        coef = to_rational(m.group("coef") or "1")
        k = 0
        if m.group("z"):
            k = int(m.group("exp") or 1)
        acc = acc + field.root_of_unity(k) * (coef * sign)
    return acc


# -- dense exact matrices ----------------------------------------------------


class ExactMatrix:
    """Immutable dense matrix over a cyclotomic field, row-major."""

    __slots__ = ("field", "rows", "cols", "entries", "_qcache")

    def __init__(self, field: CycloField, rows: int, cols: int, entries: Iterable):
        ent = tuple(field(e) for e in entries)
        if len(ent) != rows * cols:
            raise ValueError("entry count does not match the shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = ent

    @classmethod
    def from_rows(cls, field: CycloField, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(field, len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, field: CycloField, columns: Sequence[Sequence], rows: int | None = None):
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows(field, [[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def identity(cls, field: CycloField, n: int):
        return cls(field, n, n, [field.one if i == j else field.zero for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, field: CycloField, rows: int, cols: int):
        return cls(field, rows, cols, [field.zero] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[CycloNumber]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.shape == other.shape
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __repr__(self):
        body = "; ".join(", ".join(render_scalar(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix({self.field.conductor}, [{body}])"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.cols, self.rows,
                           [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.field, self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(self.field, self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        return ExactMatrix(self.field, self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            out = []
            zero = self.field.zero
            ocols = [other.col(j) for j in range(other.cols)]
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    acc = zero
                    for a, b in zip(r, c):
                        if a and b:
                            acc = acc + a * b
                    out.append(acc)
            return ExactMatrix(self.field, self.rows, other.cols, out)
        vec = [self.field(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            acc = self.field.zero
            for a, b in zip(self.row(i), vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def _qmat(self) -> flint.fmpq_mat:
        """The Q-expansion: each entry replaced by its multiplication block."""
        got = getattr(self, "_qcache", None)
        if got is None:
            dim = self.field.dimension
            qc = self.cols * dim
            data = [flint.fmpq(0)] * (self.rows * dim * qc)
            for i in range(self.rows):
                for j in range(self.cols):
                    a = self.entries[i * self.cols + j]
                    if not a:
                        continue
                    if dim == 1:
                        data[i * qc + j] = a.to_rational()
                        continue
                    for t, col in enumerate(_block_columns(a)):
                        for r, x in enumerate(col):
                            if x:
                                data[(i * dim + r) * qc + j * dim + t] = x
            got = flint.fmpq_mat(self.rows * dim, qc, data)
            self._qcache = got
        return got

    def apply_many(self, vectors: Sequence[Sequence]) -> list[tuple]:
        """[self @ v for v in vectors] as a single product over Q."""
        if not vectors:
            return []
        field = self.field
        dim = field.dimension
        if self.rows == 0:
            return [() for _ in vectors]
        zero = flint.fmpq(0)
        B = [zero] * (self.cols * dim * len(vectors))
        nv = len(vectors)
        for t, v in enumerate(vectors):
            if len(v) != self.cols:
                raise ValueError("shape mismatch")
            for j, x in enumerate(v):
                if not x:
                    continue
                x = field(x)
                for r, c in enumerate(x.poly.coeffs()):
                    if c:
                        B[(j * dim + r) * nv + t] = c
        C = self._qmat() * flint.fmpq_mat(self.cols * dim, nv, B)
        flat = C.entries()
        out = []
        for t in range(nv):
            out.append(tuple(field.from_coeffs([flat[(i * dim + r) * nv + t] for r in range(dim)])
                             for i in range(self.rows)))
        return out

    def embed(self, target: CycloField) -> "ExactMatrix":
        return ExactMatrix(target, self.rows, self.cols, [a.embed(target) for a in self.entries])

    def is_zero(self) -> bool:
        return not any(self.entries)

    # exact linear algebra, all routed through _Echelon

    def rank(self) -> int:
        return _Echelon(self).rank

    def pivot_columns(self) -> list[int]:
        """Indices of the pivot columns, i.e. the greedy independent subset of columns."""
        return list(_Echelon(self).pivots)

    def kernel_basis(self) -> list[tuple]:
        return _Echelon(self).kernel()

    def solve(self, b: Sequence):
        """One solution of ``self @ x == b`` (free variables zero), or None."""
        sols = self.solve_many([b])
        return sols[0]

    def solve_many(self, rhs: Sequence[Sequence]) -> list:
        return _Echelon(self, rhs).solutions()

    def det(self) -> CycloNumber:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(self.row(i)) for i in range(n)]
        det = self.field.one
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return self.field.zero
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            piv = a[c][c]
            det = det * piv
            inv = piv.inverse()
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] * inv
                    a[r] = [x - f * y if y else x for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        ident = ExactMatrix.identity(self.field, n)
        ech = _Echelon(self, [ident.col(j) for j in range(n)])
        if ech.rank < n:
            raise SingularMatrixError("matrix is singular")
        cols = ech.solutions()
        return ExactMatrix.from_columns(self.field, cols, n)


def exact_linalg(M: ExactMatrix, task: str, b: Sequence | None = None):
    if task == "rank":
        return M.rank()
    if task == "kernel_basis":
        return M.kernel_basis()
    if task == "solve":
        return M.solve(b)
    if task == "det":
        return M.det()
    if task == "invert":
        return M.inverse()
    raise ValueError(f"unknown task {task!r}")


def _block_columns(a: CycloNumber) -> list[list[Rational]]:
    """Columns of the multiplication-by-a matrix in the power basis."""
    f = a.field
    dim = f.dimension
    zero = flint.fmpq(0)
    cols = []
    v = a.poly
    shift = flint.fmpq_poly([0, 1])
    for s in range(dim):
        c = v.coeffs()
        cols.append(c + [zero] * (dim - len(c)))
        if s + 1 < dim:
            v = (v * shift) % f.modulus
    return cols


class _Echelon:
    """Reduced row echelon form of [M | rhs] computed over Q on the expansion."""

    def __init__(self, M: ExactMatrix, rhs: Sequence[Sequence] = ()):
        cap = get_limits().max_columns
        if M.cols > cap:
            raise CapExceeded(f"matrix with {M.cols} columns exceeds the column cap {cap}")
        self.M = M
        field = M.field
        dim = field.dimension
        self.dim = dim
        rhs = [[field(x) for x in b] for b in rhs]
        for b in rhs:
            if len(b) != M.rows:
                raise ValueError("right-hand side has the wrong length")
        self.nrhs = len(rhs)
        qrows, qcols = M.rows * dim, M.cols * dim + len(rhs)
        self.qcols = qcols
        if qrows == 0 or qcols == 0:
            self.rank = 0
            self.pivots = []
            self._qpivots = []
            self._R = []
            self.consistent = [True] * len(rhs)
            return
        zero = flint.fmpq(0)
        data = [zero] * (qrows * qcols)
        for i in range(M.rows):
            for j in range(M.cols):
                a = M.entries[i * M.cols + j]
                if not a:
                    continue
                if dim == 1:
                    data[i * qcols + j] = a.to_rational()
                    continue
                for s, col in enumerate(_block_columns(a)):
                    for r, x in enumerate(col):
                        if x:
                            data[(i * dim + r) * qcols + j * dim + s] = x
            for t, b in enumerate(rhs):
                c = b[i].poly.coeffs()
                for r, x in enumerate(c):
                    if x:
                        data[(i * dim + r) * qcols + M.cols * dim + t] = x
        R, qrank = flint.fmpq_mat(qrows, qcols, data).rref()
        flat = R.entries()
        self._R = [flat[r * qcols:(r + 1) * qcols] for r in range(qrank)]
        self._qpivots = []
        for row in self._R:
            self._qpivots.append(next(c for c, x in enumerate(row) if x))
        limit = M.cols * dim
        self.consistent = [True] * len(rhs)
        for row, p in zip(self._R, self._qpivots):
            if p >= limit:
                self.consistent[p - limit] = False
        main = [p for p in self._qpivots if p < limit]
        self.pivots = [p // dim for p in main if p % dim == 0]
        self.rank = len(main) // dim
        assert self.rank == len(self.pivots)

    def kernel(self) -> list[tuple]:
        M, dim, field = self.M, self.dim, self.M.field
        pivset = set(self.pivots)
        rowof = {p: r for r, p in enumerate(self._qpivots)}
        basis = []
        for f in range(M.cols):
            if f in pivset:
                continue
            vec = [field.zero] * M.cols
            vec[f] = field.one
            qf = f * dim
            for p in self.pivots:
                coeffs = []
                for r in range(dim):
                    coeffs.append(-self._R[rowof[p * dim + r]][qf])
                vec[p] = field.from_coeffs(coeffs)
            lead = next(x for x in vec if x)
            if lead != 1:
                inv = lead.inverse()
                vec = [x * inv for x in vec]
            basis.append(tuple(vec))
        return basis

    def solutions(self) -> list:
        M, dim, field = self.M, self.dim, self.M.field
        out = []
        rowof = {p: r for r, p in enumerate(self._qpivots)}
        for t in range(self.nrhs):
            if not self.consistent[t]:
                out.append(None)
                continue
            qc = M.cols * dim + t
            vec = [field.zero] * M.cols
            for p in self.pivots:
                vec[p] = field.from_coeffs([self._R[rowof[p * dim + r]][qc] for r in range(dim)])
            out.append(tuple(vec))
        return out
