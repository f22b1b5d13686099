"""The topological vertex, its building blocks and the ADKMV coefficients.

Two independent evaluations of the vertex are provided:
``vertex_lr`` sums W_{mu,nu} blocks with Littlewood-Richardson weights, and
``vertex_schur`` uses skew Schur functions at half-integer shifted
principal alphabets.  ``vertex`` is the memoized default (the LR form).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import partitions as P
from .qcoeff import QRat, bracket, bracket_factorial, bracket_int
from .symfunc import (lr_coefficient, q_minus_rho, q_shape_integer, q_shape_plus_rho,
                      schur_at, skew_expand, skew_schur_at)


@lru_cache(maxsize=None)
def w_one(mu):
    """W_mu = q^(kappa/4) prod_{i<j} [mu_i-mu_j+j-i]/[j-i] prod_i prod_v 1/[v-i+l]."""
    l = len(mu)
    out = QRat.monomial(Fraction(P.kappa(mu), 4))
    for i in range(l):
        for j in range(i + 1, l):
            out = out * bracket(mu[i] - mu[j] + j - i) / bracket(j - i)
    for i in range(1, l + 1):
        for v in range(1, mu[i - 1] + 1):
            out = out / bracket(v - i + l)
    return out


@lru_cache(maxsize=None)
def w_two(mu, nu):
    """W_{mu,nu} = q^(|nu|/2) W_mu s_nu(q^(mu_i - i))."""
    return QRat.monomial(Fraction(P.size(nu), 2)) * w_one(mu) * schur_at(nu, q_shape_integer(mu))


@lru_cache(maxsize=None)
def vertex_lr(m1, m2, m3):
    """Definition via W_{mu,nu} blocks:
    q^(k2/2 + k3/2) sum c^{m1}_{eta r1} c^{m3t}_{eta r3t} W_{m2t,r1} W_{m2,r3t} / W_{m2}."""
    m2t = P.transpose(m2)
    m3t = P.transpose(m3)
    pre = QRat.monomial(Fraction(P.kappa(m2) + P.kappa(m3), 2)) / w_one(m2)
    acc = QRat.zero()
    for eta in P.subpartitions(m1):
        if not P.contains(m3t, eta):
            continue
        for r1, c1 in skew_expand(m1, eta).items():
            left = w_two(m2t, r1)
            for r3t, c3 in skew_expand(m3t, eta).items():
                acc = acc + left * w_two(m2, r3t) * (c1 * c3)
    return pre * acc


@lru_cache(maxsize=None)
def vertex_schur(m1, m2, m3):
    """Skew-Schur form at framing zero:
    (-1)^|m2| q^(k3/2) s_{m2t}(q^-rho) sum_eta s_{m1/eta}(q^(m2t+rho)) s_{m3t/eta}(q^(m2+rho))."""
    m2t = P.transpose(m2)
    m3t = P.transpose(m3)
    a1 = q_shape_plus_rho(m2t)
    a3 = q_shape_plus_rho(m2)
    acc = QRat.zero()
    for eta in P.subpartitions(m1):
        if not P.contains(m3t, eta):
            continue
        acc = acc + skew_schur_at(m1, eta, a1) * skew_schur_at(m3t, eta, a3)
    sign = -1 if P.size(m2) % 2 else 1
    return QRat.monomial(Fraction(P.kappa(m3), 2), sign) * schur_at(m2t, q_minus_rho()) * acc


def vertex(m1, m2, m3):
    return vertex_lr(P.make(m1), P.make(m2), P.make(m3))


def framed_vertex(m1, m2, m3, a=(0, 0, 0)):
    """q^(sum a_i kappa_i / 2) W_{m1,m2,m3}."""
    e = Fraction(sum(ai * P.kappa(P.make(m)) for ai, m in zip(a, (m1, m2, m3))), 2)
    return QRat.monomial(e) * vertex(m1, m2, m3)


def adkmv_coeff(i, j, m, n, a=(0, 0, 0)):
    """Bogoliubov coefficient A^{ij}_{mn}(q; a), legs 1..3 cyclic."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError("leg indices must be 1, 2 or 3")
    ai = 2 * a[i - 1] + 1
    aj = 2 * a[j - 1] + 1
    sign = -1 if n % 2 else 1
    if i == j:
        e = Fraction(ai * (m * (m + 1) - n * (n + 1)), 4)
        return QRat.monomial(e, sign) / (bracket(m + n + 1) * bracket_factorial(m) * bracket_factorial(n))
    base = Fraction(ai * m * (m + 1) - aj * n * (n + 1), 4)
    if j == i % 3 + 1:
        acc = QRat.zero()
        for l in range(min(m, n) + 1):
            acc = acc + QRat.monomial(Fraction((l + 1) * (m + n - l), 2)) / (
                bracket_factorial(m - l) * bracket_factorial(n - l))
        return QRat.monomial(base + Fraction(1, 6), sign) * acc
    acc = QRat.zero()
    for l in range(min(m, n) + 1):
        acc = acc + QRat.monomial(Fraction(-(l + 1) * (m + n - l), 2)) / (
            bracket_factorial(m - l) * bracket_factorial(n - l))
    return QRat.monomial(base - Fraction(1, 6), -sign) * acc


__all__ = ["w_one", "w_two", "vertex", "vertex_lr", "vertex_schur", "framed_vertex",
           "adkmv_coeff", "bracket_int", "lr_coefficient"]
