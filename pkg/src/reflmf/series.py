"""Exact Laurent-polynomial Hilbert series for A, Omega^1, Der, T^1 and the flag formula."""

from __future__ import annotations

import dataclasses
import math
from typing import Mapping

from .equivariant import canonical, degrees_codegrees, is_duality_group
from .factorisation import (
    MatrixFactorisation,
    graded_piece,
    module_dim,
    periodic_resolution,
    transpose,
)
from .invariants import CoinvariantAlgebra
from .scalars import ReflmfError


class SeriesError(ReflmfError):
    pass


class HilbertSeries:
    """Finitely supported Laurent polynomial with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self.coeffs = {int(k): int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "HilbertSeries":
        return cls({k: c})

    @classmethod
    def geometric(cls, a: int, b: int, step: int = 1) -> "HilbertSeries":
        """(t^a - t^b) / (1 - t^step), which must be a Laurent polynomial."""
        if (b - a) % step:
            raise SeriesError("non-exact geometric quotient")
        if b >= a:
            return cls({k: 1 for k in range(a, b, step)})
        return cls({k: -1 for k in range(b, a, step)})

    def __eq__(self, other):
        return isinstance(other, HilbertSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return HilbertSeries(out)

    def __neg__(self):
        return HilbertSeries({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return HilbertSeries({k: v * other for k, v in self.coeffs.items()})
        out: dict = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return HilbertSeries(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "HilbertSeries":
        """Multiply by t^k."""
        return HilbertSeries({a + k: v for a, v in self.coeffs.items()})

    def reflect(self) -> "HilbertSeries":
        """t -> 1/t."""
        return HilbertSeries({-a: v for a, v in self.coeffs.items()})

    def substitute_power(self, k: int) -> "HilbertSeries":
        return HilbertSeries({a * k: v for a, v in self.coeffs.items()})

    def total(self) -> int:
        return sum(self.coeffs.values())

    def __getitem__(self, k: int) -> int:
        return self.coeffs.get(k, 0)

    @property
    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def nonnegative(self) -> bool:
        return all(v >= 0 for v in self.coeffs.values())

    def to_dict(self) -> dict[str, int]:
        return {str(k): v for k, v in sorted(self.coeffs.items())}

    def render(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}" if k > 0 else f"{var}^({k})")
            mag = abs(v)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            sign = "-" if v < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += sign + body
        return s

    def __repr__(self):
        return f"HilbertSeries({self.render()})"

    def to_csv(self) -> str:
        return "degree,coefficient\n" + "".join(f"{k},{v}\n" for k, v in sorted(self.coeffs.items()))


def _product_A(degrees, skip_last: bool = False, step: int = 1) -> HilbertSeries:
    """prod_i (1 - t^{step d_i}) / (1 - t^step), optionally over i < n."""
    out = HilbertSeries({0: 1})
    for d in degrees[:-1] if skip_last else degrees:
        out = out * HilbertSeries.geometric(0, step * d, step)
    return out


def series_of_A(CA: CoinvariantAlgebra) -> HilbertSeries:
    direct = HilbertSeries(dict(enumerate(CA.harmonics.dims)))
    formula = _product_A(CA.degrees)
    if direct != formula:
        raise SeriesError(f"harmonic dimensions {direct} disagree with the product formula {formula}")
    return direct


def _omega_direct(CA: CoinvariantAlgebra, MF: MatrixFactorisation) -> HilbertSeries:
    """coker(Jbar^T: (+) A{d_i} -> A{1}^n)."""
    n, degs = CA.n, CA.degrees
    JbT = transpose(MF.phi)
    out = {}
    for m in range(0, CA.N + 2):
        tgt = module_dim(CA, (1,) * n, m)
        if not tgt:
            continue
        r = graded_piece(CA, JbT, degs, (1,) * n, m).rank() if module_dim(CA, degs, m) else 0
        out[m] = tgt - r
    return HilbertSeries(out)


def module_series_direct(CA: CoinvariantAlgebra, MF: MatrixFactorisation, which: str) -> HilbertSeries:
    C = canonical(CA)
    if which == "omega":
        return _omega_direct(C, MF)
    if which in ("der", "t1"):
        cache = C.__dict__.setdefault("_res_cache", {})
        res = cache.get("res")
        if res is None:
            res = periodic_resolution(C, MF, positions=1)
            cache["res"] = res
        return HilbertSeries(res.der_dims if which == "der" else res.t1_dims)
    raise ValueError(f"unknown module {which!r}")


def module_series_formula(CA: CoinvariantAlgebra, which: str) -> HilbertSeries:
    C = canonical(CA)
    if not is_duality_group(C):
        raise SeriesError(f"{C.group.label} is not a duality group")
    dd = degrees_codegrees(C)
    tail = _product_A(dd.degrees, skip_last=True)
    acc = HilbertSeries()
    if which == "omega":
        for d in dd.degrees:
            acc = acc + HilbertSeries.geometric(1, d)
    elif which == "der":
        for c in dd.codegrees:
            acc = acc + HilbertSeries.geometric(c, dd.d - 1)
    else:
        raise ValueError(f"unknown module {which!r}")
    return acc * tail


def frobenius_duality_check(CA: CoinvariantAlgebra, omega: HilbertSeries, der: HilbertSeries) -> bool:
    """H_Der(t) = t^N H_Omega(1/t)."""
    return der == omega.reflect().shift(CA.N)


@dataclasses.dataclass(frozen=True)
class AQSeries:
    h0: HilbertSeries
    h1: HilbertSeries
    d: int

    @property
    def shift_holds(self) -> bool:
        return self.h0 == self.h1.shift(self.d)

    @property
    def tjurina_number(self) -> int:
        return self.h1.total()

    def bigraded(self) -> dict:
        """{cohomological degree: {internal degree: dim}}."""
        return {0: self.h0.to_dict(), 1: self.h1.to_dict()}


def aq_series(CA: CoinvariantAlgebra, MF: MatrixFactorisation) -> AQSeries:
    C = canonical(CA)
    if not is_duality_group(C):
        raise SeriesError(f"{C.group.label} is not a duality group")
    out = AQSeries(module_series_direct(C, MF, "der"), module_series_direct(C, MF, "t1"), C.d)
    if not out.shift_holds:
        raise SeriesError("H^0 is not H^1 shifted by d")
    return out


@dataclasses.dataclass(frozen=True)
class FlagPolynomial:
    series: HilbertSeries
    crystallographic: bool  # False means the flag-manifold reading does not apply

    def pi_dimension(self, i: int) -> int:
        return self.series[-i]


def flag_homotopy_polynomial(CA: CoinvariantAlgebra) -> FlagPolynomial:
    """(sum_i (t^{1-2d_i} - t^{-1}) / (1 - t^2)) * prod_{i<n} (1 - t^{2 d_i}) / (1 - t^2)."""
    degs = CA.degrees
    acc = HilbertSeries()
    for d in degs:
        acc = acc + HilbertSeries.geometric(1 - 2 * d, -1, 2)
    poly = acc * _product_A(degs, skip_last=True, step=2)
    G = CA.group
    return FlagPolynomial(poly, G.is_real and G.field.dimension == 1)


def homotopy_report(CA: CoinvariantAlgebra) -> dict[int, int]:
    """Informational: dims of V + Hom_W(V, A)(1) with doubled grading, as pi_i dims."""
    out = {2: CA.n}
    for d in CA.degrees:
        out[2 * d - 1] = out.get(2 * d - 1, 0) + 1
    return dict(sorted(out.items()))


def totals_expected(CA: CoinvariantAlgebra) -> int:
    """N |W| / d."""
    return CA.N * math.prod(CA.degrees) // CA.d
