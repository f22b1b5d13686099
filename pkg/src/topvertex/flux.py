"""Flux sectors Z^(N) and the total partition function as a Xi-Laurent window."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import partitions as P
from .glue import one_brane
from .qcoeff import KSeries, QRat, make_mono, minus_one_pow, mono_mul

log = logging.getLogger(__name__)


@dataclass
class SchurSeries:
    """sum_lambda coeffs[lambda] s_lambda(t), coefficients are KSeries."""

    coeffs: dict = field(default_factory=dict)
    bound: Fraction = Fraction(0)

    def get(self, lam):
        c = self.coeffs.get(P.make(lam))
        return c if c is not None else KSeries({}, self.bound)

    def partitions(self):
        return sorted(self.coeffs, key=lambda l: (P.size(l), l))

    def degree_operator(self):
        """L_0 acting diagonally: s_lambda -> |lambda| s_lambda."""
        return SchurSeries({l: c.scale(QRat.const(P.size(l))) for l, c in self.coeffs.items()},
                           self.bound)


@dataclass
class FluxSeries:
    """sum_N sectors[N] Xi^(-N)."""

    sectors: dict = field(default_factory=dict)
    bound: Fraction = Fraction(0)
    n_max: int = 0

    def coefficient(self, lam):
        """The Xi-Laurent coefficient of s_lambda."""
        lam = P.make(lam)
        out = KSeries({}, self.bound)
        for N in sorted(self.sectors):
            c = self.sectors[N].coeffs.get(lam)
            if c is not None:
                out = out + c.times_xi(-N)
        return out

    def slice(self, N):
        """The FluxSeries keeping only sector N (e.g. the N=0 control)."""
        return FluxSeries({N: self.sectors[N]}, self.bound, self.n_max)

    def partitions(self):
        s = set()
        for sec in self.sectors.values():
            s.update(sec.coeffs)
        return sorted(s, key=lambda l: (P.size(l), l))


CONVENTIONS = ("product", "per_name")


def _flux_names(model, convention):
    # "product": Q = prod over edges (the default);
    # "per_name": Q = prod over distinct names (the local P^2 shorthand Q^(N^2/2))
    if convention == "product":
        return model.kahler
    if convention == "per_name":
        return model.names
    raise ValueError(f"unknown flux convention {convention!r}")


def flux_weight(model, N, convention="product"):
    """Kahler weight of the Q^(N^2/2) prefactor."""
    return Fraction(N * N, 2) * len(_flux_names(model, convention))


def default_n_max(model, D, convention="product"):
    """Largest N whose prefactor weight fits in D."""
    N = 0
    while flux_weight(model, N + 1, convention) <= Fraction(D):
        N += 1
    return N


def sector_prefactor_exponent(lam, N, model):
    """q-exponent -N|lambda| + (gamma + 2M) N (4N^2 - 1)/24."""
    g = sum(model.gamma)
    return Fraction(-N * P.size(P.make(lam))) + Fraction((g + 2 * model.M) * N * (4 * N * N - 1), 24)


def kahler_shifts(model, N):
    """Q_name -> q^(shift) Q_name with shift (gamma_i + 2) N; edges sharing a
    name must agree."""
    shifts = {}
    for g, name in zip(model.gamma, model.kahler):
        s = (g + 2) * N
        if shifts.setdefault(name, s) != s:
            raise ValueError(f"edges named {name!r} have different framings; "
                             "the Kahler shift is ambiguous")
    return shifts


def flux_monomial(model, N, convention="product"):
    """Q^(N^2/2) as a monomial key."""
    exps = {}
    for name in _flux_names(model, convention):
        exps[name] = exps.get(name, 0) + Fraction(N * N, 2)
    return make_mono(exps)


def sector_coefficient(lam, N, model, D, convention="product"):
    """Z^(N)_lambda = q^(-N|lam|) Q^(N^2/2) (-1)^(gamma N^2/2)
    q^((gamma+2M) N (4N^2-1)/24) Z_lambda(q^((gamma_i+2)N) Q_i)."""
    D = Fraction(D)
    lam = P.make(lam)
    w = flux_weight(model, N, convention)
    if w > D:
        log.warning("sector N=%d needs Kahler weight %s > %s; reported empty", N, w, D)
        return KSeries({}, D)
    base = one_brane(lam, model, D - w)
    if N == 0:
        return base
    shifted = base.shift_kahler(kahler_shifts(model, N))
    g = sum(model.gamma)
    c = QRat.monomial(sector_prefactor_exponent(lam, N, model), minus_one_pow(Fraction(g * N * N, 2)))
    mono = flux_monomial(model, N, convention)
    t = {(x, mono_mul(m, mono)): v * c for (x, m), v in shifted.terms.items()}
    return KSeries({}, D).copy_with(t, D)


def total(model, D, L_max, N_max=None, convention="product"):
    """All sectors |N| <= N_max for every |lambda| <= L_max."""
    D = Fraction(D)
    if N_max is None:
        N_max = default_n_max(model, D, convention)
    sectors = {}
    for N in range(-N_max, N_max + 1):
        coeffs = {}
        w = flux_weight(model, N, convention)
        if w > D:
            log.warning("sector N=%d needs Kahler weight %s > %s; reported empty", N, w, D)
            coeffs = {lam: KSeries({}, D) for lam in P.partitions_up_to(L_max)}
            sectors[N] = SchurSeries(coeffs, D)
            continue
        for lam in P.partitions_up_to(L_max):
            coeffs[lam] = sector_coefficient(lam, N, model, D, convention)
        sectors[N] = SchurSeries(coeffs, D)
    return FluxSeries(sectors, D, N_max)
