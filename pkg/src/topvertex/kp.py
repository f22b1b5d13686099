"""KP-integrability diagnostics on Schur-coefficient series.

Coefficients c_lambda are read from a FluxSeries (as Xi-Laurent KSeries) or a
SchurSeries.  Affine coordinates a_(n,m) = (-1)^n c_(m|n) / c_0, the
Giambelli residual, the first Plucker relation, the connected n-point
functions and the principal specialization (wave function at t = 0).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import partitions as P
from .flux import FluxSeries, SchurSeries
from .qcoeff import KSeries


def coefficient(Z, lam):
    """c_lambda as a KSeries; raises if lambda lies outside the computed window."""
    lam = P.make(lam)
    if isinstance(Z, FluxSeries):
        if lam not in Z.partitions():
            raise KeyError(f"partition {P.to_text(lam) or '()'} is outside the computed window")
        return Z.coefficient(lam)
    if isinstance(Z, SchurSeries):
        if lam not in Z.coeffs:
            raise KeyError(f"partition {P.to_text(lam) or '()'} is outside the computed window")
        return Z.get(lam)
    raise TypeError("expected a FluxSeries or SchurSeries")


def _bound(Z):
    return Fraction(Z.bound)


def _inverse_c0(Z, order=None):
    c0 = coefficient(Z, ())
    if order is not None:
        c0 = c0.truncate(order)
    try:
        return c0.inverse()
    except ZeroDivisionError:
        raise ZeroDivisionError("c_0 has no invertible constant term") from None


def affine_coords(Z, n, m, order=None):
    """(-1)^n Z[(m|n)] / Z[()] as a truncated series."""
    inv = _inverse_c0(Z, order)
    c = coefficient(Z, P.hook(m, n))
    if order is not None:
        c = c.truncate(order)
    out = c * inv
    return -out if n % 2 else out


@dataclass
class AffineTable:
    """c0 and a[(n, m)]; missing entries mean 'not computed', not zero."""

    c0: KSeries
    a: dict = field(default_factory=dict)

    @classmethod
    def from_series(cls, Z, max_size=None, order=None):
        if max_size is None:
            max_size = max((P.size(l) for l in _partitions(Z)), default=0)
        inv = _inverse_c0(Z, order)
        table = {}
        for size in range(1, max_size + 1):
            for n in range(size):
                m = size - 1 - n
                c = coefficient(Z, P.hook(m, n))
                if order is not None:
                    c = c.truncate(order)
                v = c * inv
                table[(n, m)] = -v if n % 2 else v
        c0 = coefficient(Z, ())
        return cls(c0.truncate(order) if order is not None else c0, table)

    def get(self, n, m):
        try:
            return self.a[(n, m)]
        except KeyError:
            raise KeyError(f"affine coordinate a[{n}][{m}] was not computed") from None

    @property
    def bound(self):
        return self.c0.bound


def _partitions(Z):
    return Z.partitions()


def determinant(M):
    """Laplace expansion over a commutative ring without division (k is tiny)."""
    k = len(M)
    if k == 0:
        return None
    if k == 1:
        return M[0][0]
    out = None
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = M[0][j] * determinant(minor)
        if j % 2:
            t = -t
        out = t if out is None else out + t
    return out


def giambelli_residual(Z, lam, order=None):
    """c_lam/c_0 - (-1)^(sum n_i) det(a[n_i][m_j]), truncated at ``order``."""
    lam = P.make(lam)
    if order is None:
        order = _bound(Z)
    order = Fraction(order)
    inv = _inverse_c0(Z, order)
    ratio = coefficient(Z, lam).truncate(order) * inv
    if not lam:
        return ratio - KSeries.one(order)
    arms, legs = P.frobenius_of(lam)
    M = [[affine_coords(Z, n, m, order) for m in arms] for n in legs]
    d = determinant(M)
    if sum(legs) % 2:
        d = -d
    return ratio - d


def plucker_sides(Z, order=None):
    """(c_(2,2) c_0, c_(2,1) c_(1) - c_(2) c_(1,1))."""
    if order is None:
        order = _bound(Z)
    c = {l: coefficient(Z, l).truncate(order) for l in [(), (1,), (2,), (1, 1), (2, 1), (2, 2)]}
    lhs = c[(2, 2)] * c[()]
    rhs = c[(2, 1)] * c[(1,)] - c[(2,)] * c[(1, 1)]
    return lhs, rhs


def plucker_first(Z, order=None):
    """c_(2,2) c_0 - det[[c_(2,1), c_(2)], [c_(1,1), c_(1)]]."""
    lhs, rhs = plucker_sides(Z, order)
    return lhs - rhs


def first_nonzero_order(residual):
    """Smallest Kahler weight carrying a nonzero term, or None."""
    from .qcoeff import mono_weight
    ws = [mono_weight(m) for _, m in residual.terms]
    return min(ws) if ws else None


# ---------------------------------------------------------------------------
# synthetic tau-functions


def bogoliubov_series(table, L_max):
    """SchurSeries of c0 * exp(sum a[n,m] psi_(-m-1/2) psi*_(-n-1/2)) |0>,
    read off in the Fock basis (independent of the determinant code)."""
    from .fock import FockState, bogoliubov_state
    bound = table.bound
    a = {k: (c if isinstance(c, KSeries) else KSeries.const(c, bound)) for k, c in table.a.items()}
    v = bogoliubov_state(a, L_max, KSeries.one(bound))
    coeffs = {}
    for lam in P.partitions_up_to(L_max):
        c = v.coeff(FockState(0, lam), None)
        coeffs[lam] = KSeries({}, bound) if c is None else c * table.c0
    return SchurSeries(coeffs, bound)


# ---------------------------------------------------------------------------
# connected n-point functions


def _weights(n):
    # z_1 is the largest variable; weight strictly decreases with the index
    return [n + 1 - i for i in range(1, n + 1)]


def _wdeg(e, w):
    return sum(a * b for a, b in zip(e, w))


def _factor_terms(i, j, n, table, w, wmin, bound):
    """Terms of A-hat(z_i, z_j) with weighted degree >= wmin."""
    out = {}

    def put(e, c):
        if _wdeg(e, w) < wmin:
            return False
        out[e] = out[e] + c if e in out else c
        return True

    one = KSeries.one(bound)
    if i != j:
        first, second = (i, j) if i < j else (j, i)
        sign = 1 if i < j else -1
        k = 0
        while True:
            e = [0] * n
            e[first] = -1 - k
            e[second] = k
            if not put(tuple(e), one if sign == 1 else -one):
                break
            k += 1
    for (a, b), c in table.items():
        e = [0] * n
        e[i] -= a + 1
        e[j] -= b + 1
        if _wdeg(e, w) >= wmin:
            out[tuple(e)] = out[tuple(e)] + c if tuple(e) in out else c
    return out


def npoint_connected(table, n, order, bound=None):
    """Coefficients of prod z_i^(-j_i-1), 1 <= j_i <= order, from the cycle formula
    (-1)^(n-1) sum_cycles prod A-hat - delta_(n,2)/(z_1-z_2)^2.

    ``table`` maps (n, m) -> coefficient of xi^(-n-1) eta^(-m-1) in A(xi, eta)
    (an AffineTable or a plain dict of KSeries/QRat).  Every expansion is in
    the region |z_1| > |z_2| > ...; weighted degree with weights n, n-1, ..., 1
    bounds all sums, so the result is exact."""
    if n < 1:
        raise ValueError("n must be at least 1")
    raw = table.a if isinstance(table, AffineTable) else dict(table)
    if bound is None:
        bs = [v.bound for v in raw.values() if isinstance(v, KSeries)]
        bound = min(bs) if bs else Fraction(0)
    coeffs = {k: (v if isinstance(v, KSeries) else KSeries.const(v, bound)) for k, v in raw.items()}
    w = _weights(n)
    target = -(order + 1)
    wmin = _wdeg([target] * n, w)
    # the table must cover every a_(n,m) with n + m <= n*order - 1
    need = n * order - 1
    for s in range(need + 1):
        for a in range(s + 1):
            if (a, s - a) not in coeffs:
                raise KeyError(f"affine coordinate a[{a}][{s - a}] needed for order {order}")
    total = {}
    for perm in itertools.permutations(range(1, n)):
        cyc = (0,) + perm
        prod = {tuple([0] * n): KSeries.one(bound)}
        for t in range(n):
            i, j = cyc[t], cyc[(t + 1) % n]
            fac = _factor_terms(i, j, n, coeffs, w, wmin, bound)
            new = {}
            for e1, c1 in prod.items():
                for e2, c2 in fac.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    if _wdeg(e, w) < wmin:
                        continue
                    c = c1 * c2
                    if e in new:
                        new[e] = new[e] + c
                    else:
                        new[e] = c
            prod = new
        for e, c in prod.items():
            total[e] = total[e] + c if e in total else c
    if (n - 1) % 2:
        total = {e: -c for e, c in total.items()}
    if n == 2:
        # -1/(z_1 - z_2)^2 = -sum_k (k+1) z_1^(-2-k) z_2^k
        k = 0
        while _wdeg((-2 - k, k), w) >= wmin:
            e = (-2 - k, k)
            c = KSeries.const(-(k + 1), bound)
            total[e] = total[e] + c if e in total else c
            k += 1
    out = {}
    for js in itertools.product(range(1, order + 1), repeat=n):
        c = total.get(tuple(-j - 1 for j in js))
        if c is not None and not c.is_zero():
            out[js] = c
    return out


# ---------------------------------------------------------------------------
# wave function


def principal_specialization(table, m_max=None):
    """Psi(z) = 1 + sum_m a[0][m] z^(-m-1) as {exponent: KSeries}."""
    raw = table.a if isinstance(table, AffineTable) else dict(table)
    bound = table.bound if isinstance(table, AffineTable) else None
    ms = sorted(m for (n, m) in raw if n == 0)
    if m_max is not None:
        ms = [m for m in ms if m <= m_max]
        missing = [m for m in range(m_max + 1) if m not in ms]
        if missing:
            raise KeyError(f"a[0][{missing[0]}] was not computed")
    vals = [raw[(0, m)] for m in ms]
    if bound is None:
        bs = [v.bound for v in vals if isinstance(v, KSeries)]
        bound = min(bs) if bs else Fraction(0)
    out = {0: KSeries.one(bound)}
    for m, v in zip(ms, vals):
        v = v if isinstance(v, KSeries) else KSeries.const(v, bound)
        if not v.is_zero():
            out[-m - 1] = v
    return out
