"""Littlewood-Richardson coefficients and exact Schur specializations.

An Alphabet is the infinite variable set x_i = q^(sign * (mu_i - i + c)),
i >= 1.  Its power sums have closed forms, complete homogeneous functions
follow from Newton's identities, and (skew) Schur functions from
Jacobi-Trudi determinants.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import partitions as P
from .qcoeff import QRat, geom_qsum


# ---------------------------------------------------------------------------
# Littlewood-Richardson rule


@lru_cache(maxsize=None)
def lr_coefficient(lam, mu, nu):
    """c^lam_{mu nu} counted as LR tableaux of shape lam/mu and content nu."""
    if P.size(lam) != P.size(mu) + P.size(nu):
        return 0
    if not P.contains(lam, mu) or not P.contains(lam, nu):
        return 0
    # symmetric in mu, nu; fill the smaller skew shape's complement
    if (P.size(mu), mu) < (P.size(nu), nu):
        mu, nu = nu, mu
    return _count_lr(lam, mu, nu)


def _count_lr(lam, mu, nu):
    rows = [(mu[i] if i < len(mu) else 0, lam[i]) for i in range(len(lam))]
    n_vals = len(nu)

    def rec(r, above, counts):
        if r == len(rows):
            return 1 if tuple(counts) == tuple(nu) else 0
        lo, hi = rows[r]
        total = 0
        # fill cells lo..hi-1 with a weakly increasing sequence
        for row in _row_fillings(hi - lo, n_vals):
            ok = True
            for j, v in enumerate(row):
                col = lo + j
                a = above.get(col)
                if a is not None and a >= v:
                    ok = False
                    break
            if not ok:
                continue
            c = list(counts)
            # reverse reading: right to left
            for v in reversed(row):
                c[v - 1] += 1
                if c[v - 1] > nu[v - 1] or (v > 1 and c[v - 1] > c[v - 2]):
                    ok = False
                    break
            if not ok:
                continue
            new_above = {lo + j: v for j, v in enumerate(row)}
            total += rec(r + 1, new_above, c)
        return total

    return rec(0, {}, [0] * n_vals)


@lru_cache(maxsize=None)
def _row_fillings(length, n_vals):
    if length == 0:
        return ((),)
    out = []

    def rec(acc, start):
        if len(acc) == length:
            out.append(tuple(acc))
            return
        for v in range(start, n_vals + 1):
            rec(acc + [v], v)

    rec([], 1)
    return tuple(out)


@lru_cache(maxsize=None)
def skew_expand(lam, mu):
    """s_{lam/mu} = sum_nu c^lam_{mu nu} s_nu, as a dict nu -> multiplicity."""
    if not P.contains(lam, mu):
        return {}
    n = P.size(lam) - P.size(mu)
    out = {}
    for nu in P.partitions_of(n):
        c = lr_coefficient(lam, mu, nu)
        if c:
            out[nu] = c
    return out


# ---------------------------------------------------------------------------
# principal alphabets


@dataclass(frozen=True)
class Alphabet:
    """x_i = q^(sign*(shape_i - i + shift)); sign = -1 gives the mirrored set."""

    shape: tuple = ()
    shift: Fraction = Fraction(0)
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "shift", Fraction(self.shift))
        object.__setattr__(self, "shape", P.make(self.shape))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def exponent(self, i):
        m = self.shape[i - 1] if i <= len(self.shape) else 0
        return self.sign * (m - i + self.shift)


def q_minus_rho():
    """{q^(1/2), q^(3/2), ...}."""
    return Alphabet((), Fraction(1, 2), -1)


def q_shape_plus_rho(mu):
    """{q^(mu_i - i + 1/2)}."""
    return Alphabet(mu, Fraction(1, 2), 1)


def q_shape_integer(mu):
    """{q^(mu_i - i)}."""
    return Alphabet(mu, 0, 1)


@lru_cache(maxsize=None)
def power_sum_at(A, k):
    """p_k(A) in closed form: finite head plus a geometric tail."""
    if k < 1:
        raise ValueError("power sums need k >= 1")
    l = len(A.shape)
    out = QRat.zero()
    for i in range(1, l + 1):
        out = out + QRat.monomial(k * A.exponent(i))
    # tail i > l: exponents sign*(c - i), first at i = l+1, step -sign
    return out + geom_qsum(A.sign * (A.shift - l - 1), -A.sign, k)


@lru_cache(maxsize=None)
def complete_at(A, n):
    """h_n(A) by Newton: n h_n = sum_{k=1}^n p_k h_{n-k}."""
    if n < 0:
        return QRat.zero()
    if n == 0:
        return QRat.one()
    acc = QRat.zero()
    for k in range(1, n + 1):
        acc = acc + power_sum_at(A, k) * complete_at(A, n - k)
    return acc / n


def complete_from_power_sums(p, n_max):
    """h_0..h_{n_max} from a power-sum function p(k) -> QRat."""
    h = [QRat.one()]
    for n in range(1, n_max + 1):
        acc = QRat.zero()
        for k in range(1, n + 1):
            acc = acc + p(k) * h[n - k]
        h.append(acc / n)
    return h


def determinant(M):
    """Exact determinant by Gaussian elimination over QRat."""
    n = len(M)
    if n == 0:
        return QRat.one()
    A = [list(row) for row in M]
    det = QRat.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if piv is None:
            return QRat.zero()
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        p = A[c][c]
        det = det * p
        inv = p.inverse()
        for r in range(c + 1, n):
            if A[r][c].is_zero():
                continue
            f = A[r][c] * inv
            for j in range(c + 1, n):
                if not A[c][j].is_zero():
                    A[r][j] = A[r][j] - f * A[c][j]
    return det


def jacobi_trudi(lam, eta, h):
    """det(h_{lam_i - eta_j - i + j}) with h a function n -> QRat."""
    if not P.contains(lam, eta):
        return QRat.zero()
    l = len(lam)
    M = []
    for i in range(l):
        row = []
        for j in range(l):
            e = eta[j] if j < len(eta) else 0
            row.append(h(lam[i] - e - i + j))
        M.append(row)
    return determinant(M)


@lru_cache(maxsize=None)
def schur_at(nu, A):
    return jacobi_trudi(nu, (), lambda n: complete_at(A, n))


@lru_cache(maxsize=None)
def skew_schur_at(lam, eta, A):
    return jacobi_trudi(lam, eta, lambda n: complete_at(A, n))
