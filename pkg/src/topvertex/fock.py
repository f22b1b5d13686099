"""Truncated fermionic Fock space used as an independent oracle.

A basis state ``(n, mu)`` stands for R^(-n)|mu>: the semi-infinite wedge with
exponents a_i = i - 1/2 - mu_i + n, charge -n.  Coefficients of a
``StateVector`` may be any ring elements (QRat, KSeries, Fraction, ...).
Fermion modes act by wedge insertion/deletion; the bosons alpha_k are built
from them, and Gamma_+-(p) = exp(sum_k p_k/k alpha_(+-k)) is applied by
summing the exponential series, never through Schur functions.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

from . import partitions as P
from .qcoeff import KSeries, QRat, geom_qsum, minus_one_pow

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _is_zero(c):
    if isinstance(c, (QRat, KSeries)):
        return c.is_zero()
    return c == 0


@dataclass(frozen=True, order=True)
class FockState:
    """R^(-n)|mu>; charge is -n."""

    n: int
    mu: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mu", P.make(self.mu))

    @property
    def charge(self):
        return -self.n

    @property
    def energy(self):
        """Eigenvalue of L."""
        return P.size(self.mu) + Fraction(self.n * self.n, 2)

    def positions(self, k):
        """First k occupied exponents, increasing."""
        mu = self.mu
        return [i - HALF - (mu[i - 1] if i <= len(mu) else 0) + self.n for i in range(1, k + 1)]

    def eigen_clk(self):
        """(C, L, K) read off the wedge: particles below 0 count +1, |a|, a^2;
        holes above 0 count -1, a, -a^2."""
        pos = self.positions(len(self.mu) + abs(self.n) + 2)
        occupied = set(pos)
        C, L, K = 0, Fraction(0), Fraction(0)
        for a in pos:
            if a < 0:
                C, L, K = C + 1, L - a, K + a * a
        a = HALF
        while a < pos[-1]:
            if a not in occupied:
                C, L, K = C - 1, L + a, K - a * a
            a += 1
        return C, L, K


def state_from_positions(pos, tail_start):
    """Read back (n, mu) from a finite increasing head followed by the full
    tail tail_start, tail_start+1, ...; the charge is fixed by the length."""
    # with head length k the charge-neutral tail would start at k + 1/2 + n
    n = tail_start - len(pos) - HALF
    if n.denominator != 1:
        raise ValueError("inconsistent wedge")
    n = int(n)
    mu = [i - HALF + n - a for i, a in enumerate(pos, start=1)]
    if any(m.denominator != 1 for m in mu):
        raise ValueError("positions must be half-integers")
    return FockState(n, tuple(int(m) for m in mu))


@dataclass
class StateVector:
    """Finite linear combination of FockStates."""

    terms: dict = field(default_factory=dict)

    @classmethod
    def basis(cls, n=0, mu=(), coeff=1):
        return cls({FockState(n, mu): coeff})

    @classmethod
    def vacuum(cls, coeff=1):
        return cls.basis(0, (), coeff)

    def add(self, state, c):
        if _is_zero(c):
            return
        if state in self.terms:
            s = self.terms[state] + c
            if _is_zero(s):
                del self.terms[state]
            else:
                self.terms[state] = s
        else:
            self.terms[state] = c

    def __add__(self, o):
        out = StateVector(dict(self.terms))
        for s, c in o.terms.items():
            out.add(s, c)
        return out

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c):
        out = StateVector()
        for s, v in self.terms.items():
            out.add(s, v * c)
        return out

    def coeff(self, state, zero=0):
        return self.terms.get(state, zero)

    def is_zero(self):
        return not self.terms

    def max_energy(self):
        return max((s.energy for s in self.terms), default=None)

    def truncate(self, e_max):
        return StateVector({s: c for s, c in self.terms.items() if s.energy <= e_max})

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].n, P.size(kv[0].mu), kv[0].mu))


@dataclass
class TruncationReport:
    dropped: int = 0
    max_dropped_energy: Fraction = None

    def note(self, e):
        self.dropped += 1
        if self.max_dropped_energy is None or e > self.max_dropped_energy:
            self.max_dropped_energy = e


# ---------------------------------------------------------------------------
# fermions


def _psi_state(r, s):
    """psi_r on one basis state: (sign, new state) or None."""
    k = len(s.mu) + max(0, int(r - s.n)) + 2
    pos = s.positions(k)
    tail = pos[-1] + 1
    if r in pos or r >= tail:
        return None
    below = sum(1 for a in pos if a < r)
    new = sorted(pos + [r])
    return (-1) ** below, state_from_positions(new, tail)


def _psi_star_state(r, s):
    """psi*_r removes z^(-r) at 1-based index k with sign (-1)^(k+1)."""
    target = -r
    k = len(s.mu) + max(0, int(target - s.n)) + 2
    pos = s.positions(k)
    tail = pos[-1] + 1
    if target >= tail:
        # inside the filled tail: extend the head so the removal is explicit
        pos = s.positions(k + int(target - tail) + 2)
        tail = pos[-1] + 1
    if target not in pos:
        return None
    idx = pos.index(target) + 1
    new = pos[: idx - 1] + pos[idx:]
    return (-1) ** (idx + 1), state_from_positions(new, tail)


def apply_fermion(r, kind, v):
    """psi_r (kind='psi') or psi*_r (kind='psi*') on a StateVector."""
    r = Fraction(r)
    if r.denominator != 2:
        raise ValueError("fermion modes are half-integers")
    f = {"psi": _psi_state, "psi*": _psi_star_state}.get(kind)
    if f is None:
        raise ValueError("kind must be 'psi' or 'psi*'")
    out = StateVector()
    for s, c in v.terms.items():
        res = f(r, s)
        if res is not None:
            sign, t = res
            out.add(t, c * sign)
    return out


@lru_cache(maxsize=None)
def _alpha_basis(k, s):
    """alpha_k on one basis state as ((state, sign), ...)."""
    out = StateVector()
    for a in s.positions(len(s.mu) + abs(k) + 2):
        t = apply_fermion(-a, "psi*", StateVector({s: 1}))
        if not t.is_zero():
            out = out + apply_fermion(a + k, "psi", t)
    return tuple(out.terms.items())


def apply_alpha(k, v):
    """alpha_k = sum_a psi_(a+k) psi*_(-a) for k != 0: moves a particle a -> a+k."""
    if k == 0:
        return apply_diag(lambda C, L, K: C, v)
    out = StateVector()
    for s, c in v.terms.items():
        for t, sign in _alpha_basis(k, s):
            out.add(t, c * sign)
    return out


# ---------------------------------------------------------------------------
# vertex operators


def _power_sums(p, kmax):
    if callable(p):
        return [None] + [p(k) for k in range(1, kmax + 1)]
    seq = list(p)
    return [None] + [seq[k - 1] if k - 1 < len(seq) else 0 for k in range(1, kmax + 1)]


def apply_gamma(sign, p, v, e_max=None, report=None):
    """Gamma_(+-)(p) = exp(sum_k p_k/k alpha_(+-k)) applied to v.

    ``p`` is a callable k -> p_k or a finite sequence (p_1, p_2, ...).  For
    sign -1 the energy grows, so every component above e_max is dropped and
    counted in ``report``; sign +1 lowers energy and is exact."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if v.is_zero():
        return StateVector()
    top = v.max_energy()
    if sign == -1:
        if e_max is None:
            raise ValueError("Gamma_- needs an energy cutoff")
        low = min(s.energy for s in v.terms)
        kmax = int(Fraction(e_max) - low)
    else:
        kmax = int(top)
    if kmax < 1:
        return StateVector(dict(v.terms))
    ps = _power_sums(p, kmax)

    def step(w):
        out = StateVector()
        for s, c in w.terms.items():
            for k in range(1, kmax + 1):
                if _is_zero(ps[k]):
                    continue
                if sign == -1 and s.energy + k > e_max:
                    # alpha_(-k) raises the energy by exactly k
                    if report is not None:
                        report.note(s.energy + k)
                    continue
                ck = c * ps[k] * Fraction(1, k)
                for t, sg in _alpha_basis(sign * k, s):
                    out.add(t, ck * sg)
        return out

    total = StateVector(dict(v.terms))
    term = v
    j = 0
    while True:
        j += 1
        term = step(term).scale(Fraction(1, j))
        if term.is_zero():
            break
        total = total + term
    return total


def single_variable(z):
    """Power sums of the one-letter alphabet {z}: p_k = z^k."""
    return lambda k: z ** k


# ---------------------------------------------------------------------------
# diagonal operators and the shift


def apply_diag(f, v):
    """Multiply each basis state by f(C, L, K)."""
    out = StateVector()
    for s, c in v.terms.items():
        out.add(s, c * f(*s.eigen_clk()))
    return out


def apply_shift(power, v):
    """R^power: R lowers every exponent by one, i.e. n -> n - 1."""
    return StateVector({FockState(s.n - power, s.mu): c for s, c in v.terms.items()})


# ---------------------------------------------------------------------------
# the Psi_mu operator


def f_one(k):
    """f_1(q^k) for half-integer k."""
    k = Fraction(k)
    return QRat.monomial(k * k / 2 - k / 2 - Fraction(1, 16), minus_one_pow(k - HALF))


def f_two(k):
    """f_2(q^k) for half-integer k."""
    k = Fraction(k)
    return QRat.monomial(-k / 2 - Fraction(1, 16), minus_one_pow(k + HALF))


class PsiOperator:
    """Psi_mu(q) in normal-ordered form.

    All Gamma_- factors (the tail Gamma_-(q^(-j-1/2)) at non-arm slots and the
    Gamma_-(q^(i+1/2)) inside the leg insertions) are moved left of all Gamma_+
    factors; each swap of single-letter operators costs 1/(1 - w z).  The R
    and z^C pieces commute with the Gamma's and stay in their original order."""

    def __init__(self, mu):
        self.mu = P.make(mu)
        self.arms, self.legs = P.frobenius_of(self.mu)
        arms, legs = set(self.arms), set(self.legs)
        scalar = QRat.one()
        for j in self.arms:
            scalar = scalar * f_one(j + HALF)
        for i in self.legs:
            scalar = scalar * f_two(i + HALF)
        # arm Gamma_+(q^(j+1/2)) passes tail Gamma_-(q^(-j'-1/2)), j' < j non-arm,
        # and every leg Gamma_-(q^(i+1/2))
        for j in self.arms:
            for jp in range(j):
                if jp not in arms:
                    scalar = scalar / (QRat.one() - QRat.qpow(j - jp))
            for i in self.legs:
                scalar = scalar / (QRat.one() - QRat.qpow(i + j + 1))
        # leg Gamma_-(q^(i+1/2)) passes tail Gamma_+(q^(-i'-1/2)), i' < i non-leg
        for i in self.legs:
            for ip in range(i):
                if ip not in legs:
                    scalar = scalar / (QRat.one() - QRat.qpow(i - ip))
        self.scalar = scalar

    def minus_sums(self, k):
        out = geom_qsum(-HALF, -1, k)
        for j in self.arms:
            out = out - QRat.qpow(-k * (j + HALF))
        for i in self.legs:
            out = out + QRat.qpow(k * (i + HALF))
        return out

    def plus_sums(self, k):
        out = geom_qsum(-HALF, -1, k)
        for i in self.legs:
            out = out - QRat.qpow(-k * (i + HALF))
        for j in self.arms:
            out = out + QRat.qpow(k * (j + HALF))
        return out

    def shift_scalar(self, charge):
        """The R / z^C word acting on a state of the given charge.

        Word order (left to right): arms by decreasing j as R^-1 w^C, then legs
        by increasing i as w^C R.  The rightmost piece acts first."""
        c = charge
        out = Fraction(0)
        for i in sorted(self.legs, reverse=True):
            c += 1
            out += (i + HALF) * c
        for j in sorted(self.arms):
            out += (j + HALF) * c
            c -= 1
        if c != charge:
            raise AssertionError("Psi_mu must have charge zero")
        return QRat.qpow(out)

    def apply(self, v, e_max, report=None):
        w = apply_gamma(1, self.plus_sums, v)
        out = StateVector()
        for s, c in w.terms.items():
            out.add(s, c * self.shift_scalar(s.charge))
        out = apply_gamma(-1, self.minus_sums, out, e_max, report)
        return out.scale(self.scalar)


_PSI_CACHE = {}


def psi_operator(mu):
    mu = P.make(mu)
    op = _PSI_CACHE.get(mu)
    if op is None:
        op = _PSI_CACHE[mu] = PsiOperator(mu)
    return op


def psi_mu_element(lam, mu, nu, e_max=None):
    """<lam| Psi_mu(q) q^(-K/2) |nu^t> on charge 0."""
    lam, mu, nu = P.make(lam), P.make(mu), P.make(nu)
    need = max(P.size(lam), P.size(nu))
    if e_max is None:
        e_max = need
    if e_max < need:
        raise ValueError(f"energy cutoff {e_max} is below the required {need}; refusing")
    nut = P.transpose(nu)
    v = StateVector.basis(0, nut, QRat.qpow(Fraction(-P.kappa(nut), 2)))
    out = psi_operator(mu).apply(v, e_max)
    return out.coeff(FockState(0, lam), QRat.zero())


# ---------------------------------------------------------------------------
# operator words and traces


@dataclass(frozen=True)
class Atom:
    """One operator factor.

    kind is one of 'gamma+', 'gamma-' (data = power-sum callable),
    'psi' / 'psi*' (data = mode), 'shift' (data = power of R),
    'diag' (data = f(C, L, K)), 'scalar' (data = ring element),
    'Psi' (data = partition mu)."""

    kind: str
    data: object = None

    @property
    def charge_shift(self):
        if self.kind == "psi":
            return 1
        if self.kind == "psi*":
            return -1
        if self.kind == "shift":
            return int(self.data)
        return 0


@dataclass
class OperatorWord:
    """Product of atoms; atoms[0] is leftmost (acts last)."""

    atoms: list = field(default_factory=list)

    @property
    def charge_shift(self):
        return sum(a.charge_shift for a in self.atoms)

    def apply(self, v, e_max, report=None):
        for a in reversed(self.atoms):
            v = apply_atom(a, v, e_max, report)
            if v.is_zero():
                break
        return v


def apply_atom(a, v, e_max, report=None):
    if a.kind == "gamma+":
        return apply_gamma(1, a.data, v)
    if a.kind == "gamma-":
        return apply_gamma(-1, a.data, v, e_max, report)
    if a.kind in ("psi", "psi*"):
        return apply_fermion(a.data, a.kind, v)
    if a.kind == "shift":
        return apply_shift(a.data, v)
    if a.kind == "diag":
        return apply_diag(a.data, v)
    if a.kind == "scalar":
        return v.scale(a.data)
    if a.kind == "Psi":
        return psi_operator(a.data).apply(v, e_max, report)
    raise ValueError(f"unknown atom kind {a.kind!r}")


def loop_word(lam, model, D):
    """prod_i Psi_(lam or empty) q^(-(gamma_i+2)K/2) (-1)^(gamma_i L) Q_i^L."""
    D = Fraction(D)
    atoms = []
    for i, (g, name) in enumerate(zip(model.gamma, model.kahler)):
        atoms.append(Atom("Psi", P.make(lam) if i == 0 else ()))

        def weight(C, L, K, g=g, name=name):
            c = QRat.monomial(-Fraction(g + 2, 2) * K, minus_one_pow(g * L))
            return KSeries.term(c, D, **{name: L})

        atoms.append(Atom("diag", weight))
    return OperatorWord(atoms)


def trace_sector(word, D, N_max, E_max=None):
    """sum_{|N| <= N_max} sum_mu <mu| R^N Xi^C word R^(-N) |mu>, as a KSeries.

    The trace runs over R^(-N)|mu> with energy <= E_max; when the word carries
    a Q^L weight per edge (as ``loop_word`` does) energy e costs Kahler weight
    e, so E_max = D + N_max^2/2 makes every reported order exact."""
    D = Fraction(D)
    if E_max is None:
        E_max = D + Fraction(N_max * N_max, 2)
    out = KSeries({}, D)
    for N in range(-N_max, N_max + 1):
        base = Fraction(N * N, 2)
        for size in range(int(E_max - base) + 1 if E_max >= base else 0):
            for mu in P.partitions_of(size):
                s = FockState(N, mu)
                v = word.apply(StateVector({s: KSeries.one(D)}), E_max)
                c = v.coeff(s, None)
                if c is None:
                    continue
                if not isinstance(c, KSeries):
                    c = KSeries.const(c, D)
                out = out + c.times_xi(s.charge)
    return out


# ---------------------------------------------------------------------------
# Bogoliubov states


def bogoliubov_state(a, e_max, one=None):
    """prod_(n,m) (1 + a[n,m] psi_(-m-1/2) psi*_(-n-1/2)) |0>, truncated at energy e_max.

    The bilinears are creators that commute pairwise and square to zero, so
    the exponential is this finite product."""
    v = StateVector.vacuum(QRat.one() if one is None else one)
    for (n, m), c in sorted(a.items()):
        if _is_zero(c) or m + n + 1 > e_max:
            continue
        t = apply_fermion(-n - HALF, "psi*", v)
        t = apply_fermion(-m - HALF, "psi", t)
        v = v + t.truncate(e_max).scale(c)
    return v
