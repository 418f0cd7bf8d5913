"""Sparse multivariate polynomials over a cyclotomic field.

A polynomial is a dict from exponent tuples to nonzero coefficients.  The
global term order is graded lexicographic; iteration and rendering always
list the largest monomial first.  The group action convention is the left
action ``(g.p)(x) = p(g^-1 x)``.
"""

from __future__ import annotations

import math
import operator
import re
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import flint

from .scalars import (
    CycloField,
    CycloNumber,
    ExactMatrix,
    ReflmfError,
    _render_rational,
    common_field,
    parse_scalar,
    render_scalar,
)

Exponent = tuple


class NotHomogeneousError(ReflmfError, ValueError):
    pass


@lru_cache(maxsize=None)
def monomials(n: int, m: int) -> tuple[Exponent, ...]:
    """Exponent vectors of total degree m in n variables, lex-descending."""
    if m < 0:
        return ()
    if n == 0:
        return ((),) if m == 0 else ()
    if n == 1:
        return ((m,),)
    out = []
    for first in range(m, -1, -1):
        for rest in monomials(n - 1, m - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, m: int) -> dict:
    return {e: i for i, e in enumerate(monomials(n, m))}


def dim_homogeneous(n: int, m: int) -> int:
    if m < 0:
        return 0
    return math.comb(m + n - 1, n - 1) if n else int(m == 0)


def _gradlex_key(e):
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("field", "n", "terms")

    def __init__(self, field: CycloField, n: int, terms: Mapping | None = None):
        self.field = field
        self.n = n
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = field(c)
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise ValueError("exponent length does not match the variable count")
                    self.terms[e] = c

    @classmethod
    def _raw(cls, field, n, terms):
        p = cls.__new__(cls)
        p.field, p.n, p.terms = field, n, terms
        return p

    @classmethod
    def _from_polys(cls, field, n, acc):
        # acc: exponent -> unreduced fmpq_poly
        mod = field.modulus
        reduce = field.dimension > 1
        terms = {}
        for e, v in acc.items():
            if reduce and v.degree() >= field.dimension:
                v = v % mod
            if not v.is_zero():
                terms[e] = CycloNumber(field, v)
        return cls._raw(field, n, terms)

    @classmethod
    def zero(cls, field, n):
        return cls._raw(field, n, {})

    @classmethod
    def constant(cls, field, n, c):
        c = field(c)
        return cls._raw(field, n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, field, n, i):
        e = [0] * n
        e[i] = 1
        return cls._raw(field, n, {tuple(e): field.one})

    @classmethod
    def monomial(cls, field, exponent, coeff=1):
        return cls(field, len(exponent), {tuple(exponent): coeff})

    @classmethod
    def linear_form(cls, field, coeffs: Sequence):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(field, n, terms)

    # -- basic structure -------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.n != other.n:
            raise ValueError(f"variable-count mismatch: {self.n} vs {other.n}")
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.n == other.n and self.field == other.field and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _gradlex_key(t[0]), reverse=True)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_degree(self) -> int:
        """Degree of a homogeneous polynomial (-1 for zero); raises otherwise."""
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            raise NotHomogeneousError(f"polynomial has components in degrees {sorted(degs)}")
        return degs.pop() if degs else -1

    def homogeneous_components(self) -> dict[int, "MultiPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {m: MultiPoly._raw(self.field, self.n, t) for m, t in sorted(parts.items())}

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_gradlex_key)
        return e, self.terms[e]

    def leading_coefficient(self) -> CycloNumber:
        return self.leading_term()[1]

    def coefficient(self, exponent) -> CycloNumber:
        return self.terms.get(tuple(exponent), self.field.zero)

    def constant_term(self) -> CycloNumber:
        return self.coefficient((0,) * self.n)

    def monic(self) -> "MultiPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        return self * self.leading_coefficient().inverse()

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.field, self.n, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return MultiPoly._raw(self.field, self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.field, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.field, self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.field(other)
            if not c:
                return MultiPoly.zero(self.field, self.n)
            return MultiPoly._raw(self.field, self.n, {e: a * c for e, a in self.terms.items()})
        self._check(other)
        if len(self.terms) < len(other.terms):
            a_terms, b_terms = other.terms, self.terms
        else:
            a_terms, b_terms = self.terms, other.terms
        acc: dict = {}
        get = acc.get
        add = operator.add
        b_items = [(e, c.poly) for e, c in b_terms.items()]
        for e1, c1 in a_terms.items():
            p1 = c1.poly
            for e2, p2 in b_items:
                e = tuple(map(add, e1, e2))
                v = get(e)
                acc[e] = p1 * p2 if v is None else v + p1 * p2
        return MultiPoly._from_polys(self.field, self.n, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.field, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def embed(self, target: CycloField) -> "MultiPoly":
        if target == self.field:
            return self
        return MultiPoly._raw(target, self.n, {e: c.embed(target) for e, c in self.terms.items()})

    # -- vectors ---------------------------------------------------------

    def to_vector(self, m: int) -> list[CycloNumber]:
        """Coordinates in the degree-m monomial basis; other degrees must be absent."""
        idx = monomial_index(self.n, m)
        vec = [self.field.zero] * len(idx)
        for e, c in self.terms.items():
            try:
                vec[idx[e]] = c
            except KeyError:
                raise NotHomogeneousError(f"term {e} is not of degree {m}") from None
        return vec

    @classmethod
    def from_vector(cls, field, n, m, vec: Sequence) -> "MultiPoly":
        terms = {}
        for e, c in zip(monomials(n, m), vec):
            if c:
                terms[e] = field(c)
        return cls._raw(field, n, terms)

    # -- calculus and actions --------------------------------------------

    def partial(self, j: int) -> "MultiPoly":
        terms = {}
        for e, c in self.terms.items():
            k = e[j]
            if k:
                e2 = e[:j] + (k - 1,) + e[j + 1:]
                terms[e2] = c * k
        return MultiPoly._raw(self.field, self.n, terms)

    def differentiate(self, direction: Sequence) -> "MultiPoly":
        if len(direction) != self.n:
            raise ValueError("direction length must equal the number of variables")
        out = MultiPoly.zero(self.field, self.n)
        for j, a in enumerate(direction):
            a = self.field(a)
            if a:
                out = out + self.partial(j) * a
        return out

    def evaluate(self, point: Sequence) -> CycloNumber:
        if len(point) != self.n:
            raise ValueError("point length must equal the number of variables")
        fields = [x.field for x in point if isinstance(x, CycloNumber)]
        F = common_field(self.field, *fields)
        v = [F(x) for x in point]
        powers = [[F.one] for _ in v]
        acc = F.zero
        for e, c in self.terms.items():
            term = c.embed(F)
            for i, k in enumerate(e):
                if k:
                    pw = powers[i]
                    while len(pw) <= k:
                        pw.append(pw[-1] * v[i])
                    term = term * pw[k]
            acc = acc + term
        return acc

    def render(self, names: Sequence[str] | None = None) -> str:
        return render_poly(self, names)

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"MultiPoly({self.field.conductor}, {self.n}, {render_poly(self)!r})"


def poly_arith(p: MultiPoly, q, op: str) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def differentiate(p: MultiPoly, direction: Sequence) -> MultiPoly:
    return p.differentiate(direction)


def evaluate(p: MultiPoly, v: Sequence) -> CycloNumber:
    return p.evaluate(v)


def apolarity_apply(q: MultiPoly, p: MultiPoly) -> MultiPoly:
    """Apply the constant-coefficient operator q(d/dx_1, ..., d/dx_n) to p."""
    q._check(p)
    acc: dict = {}
    for a, qa in q.terms.items():
        for b, pb in p.terms.items():
            if any(x > y for x, y in zip(a, b)):
                continue
            k = 1
            for x, y in zip(a, b):
                for t in range(y - x + 1, y + 1):
                    k *= t
            e = tuple(y - x for x, y in zip(a, b))
            v = (qa.poly * pb.poly) * k
            acc[e] = acc[e] + v if e in acc else v
    return MultiPoly._from_polys(p.field, p.n, acc)


def apolar_pairing(q: MultiPoly, p: MultiPoly) -> CycloNumber:
    """<x^a, x^b> = a! delta_ab, extended bilinearly."""
    acc = p.field.zero
    small, big = (q, p) if len(q.terms) <= len(p.terms) else (p, q)
    for e, c in small.terms.items():
        d = big.terms.get(e)
        if d is not None:
            f = 1
            for k in e:
                f *= math.factorial(k)
            acc = acc + c * d * f
    return acc


class LinearSubstitution:
    """p(x) -> p(B y) for an n x r matrix B, with memoised monomial images.

    Variable x_i is replaced by the linear form sum_j B[i, j] y_j.
    """

    def __init__(self, B: ExactMatrix):
        self.B = B
        self.field = B.field
        self.n = B.rows
        self.r = B.cols
        self.images = [MultiPoly.linear_form(B.field, B.row(i)) for i in range(B.rows)]
        self._cache = {(0,) * self.n: MultiPoly.constant(B.field, B.cols, 1)}

    def monomial_image(self, e: Exponent) -> MultiPoly:
        got = self._cache.get(e)
        if got is not None:
            return got
        i = next(k for k, x in enumerate(e) if x)
        prev = e[:i] + (e[i] - 1,) + e[i + 1:]
        img = self.images[i] * self.monomial_image(prev)
        self._cache[e] = img
        return img

    def __call__(self, p: MultiPoly) -> MultiPoly:
        if p.n != self.n:
            raise ValueError("variable-count mismatch")
        F = common_field(self.field, p.field)
        acc: dict = {}
        for e, c in p.terms.items():
            img = self.monomial_image(e)
            cp = c.embed(F).poly
            for e2, c2 in img.terms.items():
                v = cp * c2.embed(F).poly
                acc[e2] = acc[e2] + v if e2 in acc else v
        return MultiPoly._from_polys(F, self.r, acc)

    def degree_matrix(self, m: int) -> ExactMatrix:
        """Matrix of the substitution on degree-m forms, monomial bases (columns = sources)."""
        src = monomials(self.n, m)
        tgt_idx = monomial_index(self.r, m)
        zero = self.field.zero
        data = [[zero] * len(src) for _ in range(len(tgt_idx))]
        for j, e in enumerate(src):
            for e2, c in self.monomial_image(e).terms.items():
                data[tgt_idx[e2]][j] = c
        return ExactMatrix.from_rows(self.field, data, len(src))


def substitute_linear(p: MultiPoly, B: ExactMatrix) -> MultiPoly:
    return LinearSubstitution(B)(p)


def act_by_matrix(g: ExactMatrix, p: MultiPoly) -> MultiPoly:
    """(g.p)(x) = p(g^-1 x)."""
    if g.rows != g.cols or g.rows != p.n:
        raise ValueError("g must be n x n")
    return LinearSubstitution(g.inverse())(p)


# -- rendering / parsing -----------------------------------------------------


def _render_monomial(e, names) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(names[i])
        elif k > 1:
            parts.append(f"{names[i]}^{k}")
    return "*".join(parts)


def default_names(n: int, prefix: str = "x", start: int = 0) -> list[str]:
    return [f"{prefix}{i + start}" for i in range(n)]


def render_poly(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    """Render terms in graded-lex order, e.g. ``x0^2+2*x0*x1-(1-z)*x1``."""
    if names is None:
        names = default_names(p.n)
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _render_monomial(e, names)
        if c.is_rational():
            q = c.to_rational()
            sign = "-" if q < 0 else "+"
            mag = abs(q)
            if not mono:
                body = _render_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_render_rational(mag)}*{mono}"
        else:
            sign = "+"
            s = render_scalar(c)
            body = f"({s})" + (f"*{mono}" if mono else "")
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += sign + body
    return text


def _split_top(s: str) -> list[str]:
    pieces, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and not cur.endswith(("^", "*")):
            pieces.append(cur)
            cur = ch
        else:
            cur += ch
    if cur:
        pieces.append(cur)
    return pieces


def parse_poly(text: str, field: CycloField, n: int, prefix: str = "x") -> MultiPoly:
    """Parse the output of :func:`render_poly` back into a polynomial."""
    s = text.replace(" ", "")
    if s == "0":
        return MultiPoly.zero(field, n)
    acc = MultiPoly.zero(field, n)
    var = re.compile(rf"^{re.escape(prefix)}(\d+)(?:\^(\d+))?$")
    for piece in _split_top(s):
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        coef = field.one
        factors = []
        if body.startswith("("):
            close = body.index(")")
            coef = parse_scalar(body[1:close], field)
            body = body[close + 1:].lstrip("*")
        for f in filter(None, body.split("*")):
            m = var.match(f)
            if m:
                factors.append((int(m.group(1)), int(m.group(2) or 1)))
            else:
                coef = coef * parse_scalar(f, field)
        e = [0] * n
        for i, k in factors:
            e[i] += k
        acc = acc + MultiPoly.monomial(field, e, coef * sign)
    return acc


def poly_matrix_det(M: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a small square matrix of polynomials by cofactor expansion."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return M[0][0]
    memo: dict = {}

    def minor(rows: tuple, cols: tuple) -> MultiPoly:
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        r0 = rows[0]
        acc = None
        for k, c in enumerate(cols):
            entry = M[r0][c]
            if entry.is_zero():
                continue
            sub = minor(rows[1:], cols[:k] + cols[k + 1:])
            term = entry * sub
            if k % 2:
                term = -term
            acc = term if acc is None else acc + term
        if acc is None:
            acc = MultiPoly.zero(M[0][0].field, M[0][0].n)
        memo[key] = acc
        return acc

    return minor(tuple(range(n)), tuple(range(n)))


def poly_matmul(A: Sequence[Sequence[MultiPoly]], B: Sequence[Sequence[MultiPoly]]) -> list[list[MultiPoly]]:
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = MultiPoly.zero(A[0][0].field, A[0][0].n)
            for k in range(inner):
                if A[i][k] and B[k][j]:
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out
