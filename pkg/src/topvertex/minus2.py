"""Closed forms for the (-2,...,-2)-model.

Every infinite product is turned into a sum of logarithms, one Kahler
monomial at a time, then exponentiated inside the truncated KSeries ring.
Paired q-shifted products in the affine coordinates are telescoped to finite
products first.  Notation: Q = prod over edges, A_l = Q_1...Q_(l-1),
B_l = Q_l...Q_M.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qcoeff import KSeries, QRat, make_mono, mono_mul, mono_weight

HALF = Fraction(1, 2)


def _check_model(model):
    if any(g != -2 for g in model.gamma):
        raise ValueError("closed forms need every framing gamma_i = -2")


def _mono(model, edges, power=1):
    """prod_(i in edges) Q_i^power as a monomial (edges are 0-based)."""
    exps = {}
    for i in edges:
        name = model.kahler[i]
        exps[name] = exps.get(name, 0) + Fraction(power)
    return make_mono(exps)


def _full(model):
    return _mono(model, range(model.M))


def _a_mono(model, l):
    """A_l = Q_1 ... Q_(l-1) (1-based l)."""
    return _mono(model, range(l - 1))


def _b_mono(model, l):
    """B_l = Q_l ... Q_M (1-based l)."""
    return _mono(model, range(l - 1, model.M))


def _mono_pow(m, j):
    return make_mono({n: e * j for n, e in m}) if j else ()


# ---------------------------------------------------------------------------
# theta function


@dataclass(frozen=True)
class ThetaSeries:
    """Theta_3(t; nome) = sum_(|n| <= n_max) nome^(n^2) t^n, stored as n -> (nome power, t power)."""

    n_max: int

    def terms(self):
        return {n: (n * n, n) for n in range(-self.n_max, self.n_max + 1)}

    def invert_argument(self):
        """Theta_3(t^-1; nome): relabel n -> -n."""
        return {-n: (e, -t) for n, (e, t) in self.terms().items()}


def theta3(model, q_shift, D, n_max):
    """Theta_3((-1)^M Xi^-1 q^q_shift; Q^(1/2)) as a Xi-Laurent KSeries."""
    D = Fraction(D)
    full = _full(model)
    t = {}
    for n, (nome, tp) in ThetaSeries(n_max).terms().items():
        mono = _mono_pow(full, Fraction(nome, 2))
        if mono_weight(mono) > D:
            continue
        sign = -1 if (model.M * tp) % 2 else 1
        t[(-tp, mono)] = QRat.monomial(Fraction(q_shift) * tp, sign)
    return KSeries(t, D)


# ---------------------------------------------------------------------------
# logarithmic expansion of products


class LogSum:
    """Accumulates log of a product of factors (1 - X q^e)^p and MacMahon
    factors, truncated at Kahler weight D; ``series()`` exponentiates."""

    def __init__(self, D):
        self.D = Fraction(D)
        self.terms = {}

    def _add(self, mono, c):
        key = (0, mono)
        s = self.terms[key] + c if key in self.terms else c
        if s.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = s

    def factor(self, mono, qexp, power):
        """(1 - X q^qexp)^power with X a Kahler monomial of positive weight."""
        w = mono_weight(mono)
        if w <= 0:
            raise ValueError("factor argument has zero Kahler weight; the product cannot be truncated")
        k = 1
        while k * w <= self.D:
            # log(1 - x) = -sum x^k / k
            self._add(_mono_pow(mono, k), QRat.monomial(Fraction(qexp) * k, Fraction(-power, k)))
            k += 1

    def macmahon_inverse(self, mono):
        """1 / M(X; q) with M(z; q) = prod_(n >= 1) (1 - z q^-n)^n."""
        w = mono_weight(mono)
        if w <= 0:
            raise ValueError("MacMahon argument has zero Kahler weight; the product cannot be truncated")
        k = 1
        while k * w <= self.D:
            x = QRat.qpow(-k)
            # sum_n n q^(-nk) = x / (1 - x)^2
            c = x / ((QRat.one() - x) * (QRat.one() - x)) * Fraction(1, k)
            self._add(_mono_pow(mono, k), c)
            k += 1

    def series(self):
        return KSeries(self.terms, self.D).exp()


def _j_range(model, base, D, start=0):
    """j >= start with weight(Q^j * base) <= D."""
    full_w = model.M
    w0 = mono_weight(base)
    j = start
    while w0 + j * full_w <= D:
        yield j
        j += 1


def _qj(model, j, base):
    return mono_mul(_mono_pow(_full(model), j), base)


# ---------------------------------------------------------------------------
# constant term


def const_term_closed(model, D, N_max):
    """Theta_3((-1)^M Xi^-1; Q^(1/2)) prod_(i>=1) (1-Q^i)^-1
    prod_(k<l) M(Q_k..Q_(l-1))^-1 prod_(k,l) prod_(j>=0) M(Q^j A_k B_l)^-1."""
    _check_model(model)
    D = Fraction(D)
    M = model.M
    logs = LogSum(D)
    full = _full(model)
    for j in _j_range(model, (), D, start=1):
        logs.factor(_mono_pow(full, j), 0, -1)
    for k in range(1, M + 1):
        for l in range(k + 1, M + 1):
            logs.macmahon_inverse(_mono(model, range(k - 1, l - 1)))
    for k in range(1, M + 1):
        for l in range(1, M + 1):
            base = mono_mul(_a_mono(model, k), _b_mono(model, l))
            for j in _j_range(model, base, D):
                logs.macmahon_inverse(_qj(model, j, base))
    return theta3(model, 0, D, N_max) * logs.series()


# ---------------------------------------------------------------------------
# affine coordinates


def _theta_ratio(model, shift, D, N_max):
    return theta3(model, -shift, D, N_max) * theta3(model, 0, D, N_max).inverse()


def affine_closed(n, m, model, D, N_max):
    """a_(n,m) for the (-2)-model after telescoping every paired q-shifted product."""
    _check_model(model)
    D = Fraction(D)
    M = model.M
    s = m + n + 1
    pre = QRat.monomial(Fraction(m * m, 2) + m + Fraction(n, 2) + HALF, -1 if (m + 1) % 2 else 1)
    den = QRat.one() - QRat.qpow(s)
    for j in range(m):
        den = den * (QRat.one() - QRat.qpow(m - j))
    for i in range(n):
        den = den * (QRat.one() - QRat.qpow(n - i))
    pre = pre / den
    logs = LogSum(D)
    # prod_j prod_(l>=2) (1 - A_l q^(-n-j-1)) / (1 - A_l q^(m-j)) = prod_(i=0)^(m+n) (1 - A_l q^(m-i))^-1
    for l in range(2, M + 1):
        for i in range(s):
            logs.factor(_a_mono(model, l), m - i, -1)
    full = _full(model)
    for j in _j_range(model, (), D, start=1):
        qj = _mono_pow(full, j)
        logs.factor(qj, 0, 2)
        logs.factor(qj, s, -1)
        logs.factor(qj, -s, -1)
    # prod_i (1 - X q^(-m-i-1)) / (1 - X q^(n-i)) = prod_(i=0)^(m+n) (1 - X q^(n-i))^-1
    for l in range(1, M + 1):
        base = _b_mono(model, l)
        for j in _j_range(model, base, D):
            for i in range(s):
                logs.factor(_qj(model, j, base), n - i, -1)
    # prod_i (1 - X q^(-n-i-1)) / (1 - X q^(m-i)) = prod_(i=0)^(m+n) (1 - X q^(m-i))^-1
    for k in range(1, M + 1):
        base = _a_mono(model, k)
        for j in _j_range(model, base, D, start=1):
            for i in range(s):
                logs.factor(_qj(model, j, base), m - i, -1)
    return (_theta_ratio(model, s, D, N_max) * logs.series()).scale(pre)


def a0m_specialized(m, model, D, N_max):
    """a_(0,m) in its own product form (finite products already collected)."""
    _check_model(model)
    D = Fraction(D)
    M = model.M
    pre = QRat.monomial(Fraction(m * m, 2) + m + HALF, -1 if (m + 1) % 2 else 1)
    for j in range(1, m + 2):
        pre = pre / (QRat.one() - QRat.qpow(j))
    logs = LogSum(D)
    for l in range(2, M + 1):
        for i in range(m + 1):
            logs.factor(_a_mono(model, l), i, -1)
    full = _full(model)
    for j in _j_range(model, (), D, start=1):
        qj = _mono_pow(full, j)
        logs.factor(qj, 0, 2)
        logs.factor(qj, m + 1, -1)
        logs.factor(qj, -m - 1, -1)
    for j in _j_range(model, (), D):
        for l in range(1, M + 1):
            x = _qj(model, j, _b_mono(model, l))
            if mono_weight(x) > D:
                continue
            for i in range(m + 1):
                logs.factor(x, -i, -1)
        for k in range(1, M + 1):
            x = _qj(model, j + 1, _a_mono(model, k))
            if mono_weight(x) > D:
                continue
            for i in range(m + 1):
                logs.factor(x, i, -1)
    return (_theta_ratio(model, m + 1, D, N_max) * logs.series()).scale(pre)


# ---------------------------------------------------------------------------
# quantum spectral curve


def _finite_product(factors, D):
    """prod (1 - X q^e) over (X, e) with X of positive weight, as a KSeries."""
    logs = LogSum(D)
    for x, e in factors:
        if mono_weight(x) <= D:
            logs.factor(x, e, 1)
    return logs.series()


def qsc_b(s, model, D, N_max):
    """Eigenvalue on z^s of Theta_3(.. q^(z d_z - 1)) q^(-z d_z + 1/2) prod_j (1 - Q^(j+1) q^-+(z d_z))."""
    full = _full(model)
    fac = []
    for j in _j_range(model, (), D, start=1):
        qj = _mono_pow(full, j)
        fac += [(qj, -s), (qj, s)]
    return (theta3(model, s - 1, D, N_max) * _finite_product(fac, D)).scale(QRat.qpow(-s + HALF))


def qsc_c(t, model, D, N_max):
    """Eigenvalue on z^t of the operator multiplying z in the second line."""
    M = model.M
    full = _full(model)
    scalar = QRat.one() - QRat.qpow(-t)
    fac = []
    for l in range(2, M + 1):
        fac.append((_a_mono(model, l), -t - 1))
    for l in range(1, M + 1):
        base = _b_mono(model, l)
        for j in _j_range(model, base, D):
            fac.append((_qj(model, j, base), t + 1))
    for k in range(1, M + 1):
        base = _a_mono(model, k)
        for j in _j_range(model, base, D, start=1):
            fac.append((_qj(model, j, base), -t - 1))
    for j in _j_range(model, (), D, start=1):
        qj = _mono_pow(full, j)
        fac += [(qj, -t), (qj, t)]
    return (theta3(model, t + 1, D, N_max) * _finite_product(fac, D)).scale(scalar)


def wave_function(model, D, N_max, m_max):
    """Psi(z) = 1 + sum_(m <= m_max) a_(0,m) z^(-m-1) from the closed form."""
    D = Fraction(D)
    out = {0: KSeries.one(D)}
    for m in range(m_max + 1):
        out[-m - 1] = a0m_specialized(m, model, D, N_max)
    return out


def qsc_residual(model, D, N_max, z_order, psi=None):
    """Coefficients of z^k, 1 >= k >= -z_order, in (B + C o z) Psi.

    The z^k coefficient is b(k) psi_k + c(k-1) psi_(k-1)."""
    _check_model(model)
    D = Fraction(D)
    if psi is None:
        psi = wave_function(model, D, N_max, z_order)
    zero = KSeries({}, D)

    def get(k):
        v = psi.get(k)
        if v is None:
            return zero
        return v if isinstance(v, KSeries) else KSeries.const(v, D)

    out = {}
    for k in range(1, -z_order - 1, -1):
        r = zero
        if not get(k).is_zero():
            r = r + qsc_b(k, model, D, N_max) * get(k)
        if not get(k - 1).is_zero():
            r = r + qsc_c(k - 1, model, D, N_max) * get(k - 1)
        out[k] = r
    return out


def dilogarithm_coefficient(n):
    """(-1)^n q^(n^2/2) / prod_(j=1)^n (1 - q^j)."""
    out = QRat.monomial(Fraction(n * n, 2), -1 if n % 2 else 1)
    for j in range(1, n + 1):
        out = out / (QRat.one() - QRat.qpow(j))
    return out
