"""Comparison of the Sym(n+1) factorisation with the Vandermonde example.

The group acts on the sum-zero hyperplane with basis v_i = e_i - (1,..,1)/(n+1),
so the ambient coordinates restrict to x_i = y_i - s/(n+1) for i >= 1 and
x_0 = -s/(n+1), where y is the dual basis and s = y_1 + ... + y_n.
"""

from fractions import Fraction

from reflmf.polyring import MultiPoly


def ambient_coordinates(field, n):
    """[x_0, x_1, ..., x_n] as polynomials in the n sum-zero coordinates."""
    y = [MultiPoly.variable(field, n, i) for i in range(n)]
    s = MultiPoly.zero(field, n)
    for v in y:
        s = s + v
    x0 = s * field(Fraction(-1, n + 1))
    return [x0] + [v + x0 for v in y]


def unit_multiple_mod(CA, p, q, k):
    """Nonzero scalar c with p - c q in I_k, or None.

    q must be nonzero in the coinvariant algebra, which pins c down.
    """
    m = q.homogeneous_degree()
    qa = CA.harmonic_coordinates(q, m)
    pa = CA.harmonic_coordinates(p, m) if not p.is_zero() else [CA.field.zero] * len(qa)
    piv = next((i for i, a in enumerate(qa) if a), None)
    if piv is None:
        raise ValueError("q vanishes in the coinvariant algebra")
    c = pa[piv] * qa[piv].inverse()
    if not c:
        return None
    return c if CA.ideal_membership(p - q * c, k).member else None


def jacobian_rows_match(CA, J):
    """Row k of J is a constant multiple of (x_1^k, ..., x_n^k) modulo I_d."""
    n = CA.n
    x = ambient_coordinates(CA.field, n)
    units = []
    for k in range(1, n + 1):
        cs = {unit_multiple_mod(CA, J[k - 1][j], x[j + 1] ** k, CA.d) for j in range(n)}
        if None in cs or len(cs) != 1:
            return None
        units.append(cs.pop())
    return units


def k_columns_match(CA, K):
    """Column i of K is a constant multiple of (x_j^e - x_0^e)_j, e = n + 1 - i (1-based), mod I_d.

    Our columns are ordered by ascending degree of the paired invariant, so
    column i (0-based) has degree d - d_i + 1 = n - i.
    """
    n = CA.n
    x = ambient_coordinates(CA.field, n)
    units = []
    for i in range(n):
        e = n - i
        cs = {unit_multiple_mod(CA, K[j][i], x[j + 1] ** e - x[0] ** e, CA.d) for j in range(n)}
        if None in cs or len(cs) != 1:
            return None
        units.append(cs.pop())
    return units
