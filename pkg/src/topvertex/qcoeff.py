"""Exact coefficients: Gaussian rationals, q-Laurent objects with rational
exponents, rational functions in q, and truncated series in Kahler monomials.

A QRat is stored as x^s * (N_re + i*N_im) / D with x = q^(1/d), where the
three polynomials have rational coefficients (python-flint ``fmpq_poly``).
The canonical form has D(0) = 1, gcd(D, N_re, N_im) = 1, no common power of
x in the numerator, and the smallest possible lattice d.  Canonical forms
are unique, so equality is structural; ``equals_cross`` offers the
cross-multiplication test as an independent check.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

import flint

_P = flint.fmpq_poly
_ZERO = _P([])
_ONE = _P([1])


def _fmpq(r):
    r = Fraction(r)
    return flint.fmpq(r.numerator, r.denominator)


def _frac(c):
    return Fraction(int(c.p), int(c.q))


def _lcm(a, b):
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussRat:
    """re + im*i with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, v):
        if isinstance(v, GaussRat):
            return v
        if isinstance(v, complex):
            raise TypeError("floating point complex values are not exact")
        return cls(v)

    def __add__(self, o):
        o = GaussRat.coerce(o)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussRat.coerce(o))

    def __rsub__(self, o):
        return GaussRat.coerce(o) - self

    def __mul__(self, o):
        o = GaussRat.coerce(o)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * GaussRat.coerce(o).inverse()

    def __rtruediv__(self, o):
        return GaussRat.coerce(o) * self.inverse()

    def conj(self):
        return GaussRat(self.re, -self.im)

    def __eq__(self, o):
        try:
            o = GaussRat.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def to_text(self):
        im = self.im
        sign = "-" if im < 0 else "+"
        return f"{_qtext(self.re)}{sign}{_qtext(abs(im))}*i"

    @classmethod
    def from_text(cls, s):
        m = _GAUSS_RE.fullmatch(s.strip())
        if not m:
            raise ValueError(f"bad Gaussian rational {s!r}")
        re_, sign, im = m.group(1), m.group(2), m.group(3)
        v = Fraction(im)
        return cls(Fraction(re_), -v if sign == "-" else v)

    def __repr__(self):
        return f"GaussRat({self.to_text()})"


_GAUSS_RE = re.compile(r"(-?\d+/\d+)([+-])(\d+/\d+)\*i")


def _qtext(r):
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


# ---------------------------------------------------------------------------
# finite Laurent objects with rational exponents


class QLaurent:
    """Finite sum  sum_e c_e q^e  with rational e and GaussRat c_e."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for e, c in (terms or {}).items():
            c = GaussRat.coerce(c)
            if c:
                t[Fraction(e)] = c
        self.terms = t

    def __eq__(self, o):
        return isinstance(o, QLaurent) and self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_text(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c.to_text()}*q^({_qtext(e)})" for e, c in self.sorted_terms())

    @classmethod
    def from_text(cls, s):
        s = s.strip()
        if s == "0":
            return cls()
        terms = {}
        for part in s.split(" + "):
            m = _TERM_RE.fullmatch(part.strip())
            if not m:
                raise ValueError(f"bad Laurent term {part!r}")
            e = Fraction(m.group(2))
            terms[e] = terms.get(e, GaussRat()) + GaussRat.from_text(m.group(1))
        return cls(terms)

    def to_json(self):
        return [[_qtext(e), c.to_text()] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data):
        return cls({Fraction(e): GaussRat.from_text(c) for e, c in data})

    def to_qrat(self):
        out = QRat.zero()
        for e, c in self.terms.items():
            out = out + QRat.monomial(e, c)
        return out

    def __repr__(self):
        return f"QLaurent({self.to_text()})"


_TERM_RE = re.compile(r"(\S+)\*q\^\((-?\d+/\d+)\)")


# ---------------------------------------------------------------------------
# rational functions


def _val(p):
    """x-adic valuation of a nonzero polynomial."""
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    raise ValueError("valuation of zero polynomial")


def _exp_gcd(p):
    g = 0
    for k, c in enumerate(p.coeffs()):
        if c != 0 and k:
            g = gcd(g, k)
    return g


def _deflate(p, g):
    if g == 1 or p.is_zero():
        return p
    return _P(p.coeffs()[::g])


def _inflate(p, k):
    if k == 1 or p.is_constant():
        return p
    cs = p.coeffs()
    out = [0] * ((len(cs) - 1) * k + 1)
    for j, c in enumerate(cs):
        out[j * k] = c
    return _P(out)


class QRat:
    """Exact rational function of q with rational exponents and Q(i) coefficients."""

    __slots__ = ("d", "s", "nr", "ni", "den", "_hash")

    def __init__(self, d, s, nr, ni, den, _canonical=False):
        self.d, self.s, self.nr, self.ni, self.den = d, s, nr, ni, den
        self._hash = None
        if not _canonical:
            self._canonicalize()

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls(1, 0, _ZERO, _ZERO, _ONE, True)

    @classmethod
    def one(cls):
        return cls(1, 0, _ONE, _ZERO, _ONE, True)

    @classmethod
    def const(cls, c):
        c = GaussRat.coerce(c)
        if not c:
            return cls.zero()
        return cls(1, 0, _P([_fmpq(c.re)]), _P([_fmpq(c.im)]), _ONE, True)

    @classmethod
    def monomial(cls, e, c=1):
        """c * q^e."""
        c = GaussRat.coerce(c)
        if not c:
            return cls.zero()
        e = Fraction(e)
        return cls(e.denominator, e.numerator, _P([_fmpq(c.re)]), _P([_fmpq(c.im)]), _ONE, True)

    @classmethod
    def qpow(cls, e):
        return cls.monomial(e)

    @classmethod
    def coerce(cls, v):
        if isinstance(v, QRat):
            return v
        return cls.const(v)

    @classmethod
    def from_laurent(cls, num, den=None):
        n = num.to_qrat()
        return n if den is None else n / den.to_qrat()

    # canonical form ---------------------------------------------------------
    def _canonicalize(self):
        nr, ni, den = self.nr, self.ni, self.den
        if den.is_zero():
            raise ZeroDivisionError("QRat with zero denominator")
        if nr.is_zero() and ni.is_zero():
            self.d, self.s, self.nr, self.ni, self.den = 1, 0, _ZERO, _ZERO, _ONE
            return
        s = self.s
        vd = _val(den)
        if vd:
            den = den.right_shift(vd)
            s -= vd
        if not den.is_constant():
            g = den.gcd(nr) if ni.is_zero() else den.gcd(nr.gcd(ni))
            if not g.is_constant():
                den = den // g
                nr = nr // g
                ni = ni // g
        v = min(_val(p) for p in (nr, ni) if not p.is_zero())
        if v:
            nr, ni = nr.right_shift(v), ni.right_shift(v)
            s += v
        c0 = den.coeffs()[0]
        if c0 != 1:
            inv = 1 / c0
            nr, ni, den = nr * inv, ni * inv, den * inv
        d = self.d
        g = gcd(d, s)
        if g != 1:
            for p in (nr, ni, den):
                g = gcd(g, _exp_gcd(p))
                if g == 1:
                    break
        if g > 1:
            d //= g
            s //= g
            nr, ni, den = _deflate(nr, g), _deflate(ni, g), _deflate(den, g)
        self.d, self.s, self.nr, self.ni, self.den = d, s, nr, ni, den

    def _lifted(self, d):
        """(s, nr, ni, den) on the finer lattice x = q^(1/d)."""
        k = d // self.d
        if k == 1:
            return self.s, self.nr, self.ni, self.den
        return self.s * k, _inflate(self.nr, k), _inflate(self.ni, k), _inflate(self.den, k)

    # predicates ---------------------------------------------------------------
    def is_zero(self):
        return self.nr.is_zero() and self.ni.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_real(self):
        return self.ni.is_zero()

    def is_laurent(self):
        return self.den.is_one()

    def is_monomial(self):
        return self.den.is_one() and self.nr.length() <= 1 and self.ni.length() <= 1

    def __eq__(self, o):
        if not isinstance(o, QRat):
            try:
                o = QRat.coerce(o)
            except TypeError:
                return NotImplemented
        return (self.d == o.d and self.s == o.s and self.nr == o.nr
                and self.ni == o.ni and self.den == o.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, self.s, str(self.nr), str(self.ni), str(self.den)))
        return self._hash

    def equals_cross(self, o):
        """Equality by cross-multiplication, independent of canonical form."""
        o = QRat.coerce(o)
        d = _lcm(self.d, o.d)
        sa, ar, ai, ad = self._lifted(d)
        sb, br, bi, bd = o._lifted(d)
        m = min(sa, sb)
        ar, ai = ar.left_shift(sa - m), ai.left_shift(sa - m)
        br, bi = br.left_shift(sb - m), bi.left_shift(sb - m)
        return ar * bd == br * ad and ai * bd == bi * ad

    # arithmetic -------------------------------------------------------------
    def __add__(self, o):
        if not isinstance(o, QRat):
            o = QRat.coerce(o)
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        d = self.d if self.d == o.d else _lcm(self.d, o.d)
        sa, ar, ai, ad = self._lifted(d)
        sb, br, bi, bd = o._lifted(d)
        m = min(sa, sb)
        if sa != m:
            ar, ai = ar.left_shift(sa - m), ai.left_shift(sa - m)
        if sb != m:
            br, bi = br.left_shift(sb - m), bi.left_shift(sb - m)
        if ad == bd:
            return QRat(d, m, ar + br, ai + bi, ad)
        g = ad.gcd(bd)
        if g.is_one():
            return QRat(d, m, ar * bd + br * ad, ai * bd + bi * ad, ad * bd)
        a2, b2 = ad // g, bd // g
        return QRat(d, m, ar * b2 + br * a2, ai * b2 + bi * a2, ad * b2)

    __radd__ = __add__

    def __neg__(self):
        return QRat(self.d, self.s, -self.nr, -self.ni, self.den, True)

    def __sub__(self, o):
        return self + (-QRat.coerce(o))

    def __rsub__(self, o):
        return QRat.coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, QRat):
            o = QRat.coerce(o)
        if self.is_zero() or o.is_zero():
            return QRat.zero()
        d = self.d if self.d == o.d else _lcm(self.d, o.d)
        sa, ar, ai, ad = self._lifted(d)
        sb, br, bi, bd = o._lifted(d)
        if ai.is_zero() and bi.is_zero():
            nr, ni = ar * br, _ZERO
        else:
            nr, ni = ar * br - ai * bi, ar * bi + ai * br
        if ad.is_one():
            den = bd
        elif bd.is_one():
            den = ad
        else:
            den = ad * bd
        return QRat(d, sa + sb, nr, ni, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("QRat division by zero")
        if self.ni.is_zero():
            return QRat(self.d, -self.s, self.den, _ZERO, self.nr)
        norm = self.nr * self.nr + self.ni * self.ni
        return QRat(self.d, -self.s, self.den * self.nr, -(self.den * self.ni), norm)

    def __truediv__(self, o):
        return self * QRat.coerce(o).inverse()

    def __rtruediv__(self, o):
        return QRat.coerce(o) * self.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = QRat.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def conj(self):
        return QRat(self.d, self.s, self.nr, -self.ni, self.den, True)

    def subs_qpow(self, k):
        """f(q^k) for a rational k > 0 (q -> q^k)."""
        k = Fraction(k)
        if k <= 0:
            raise ValueError("subs_qpow needs k > 0")
        d = self.d * k.denominator
        s, nr, ni, den = self._lifted(d)
        kk = k.numerator
        return QRat(d, s * kk, _inflate(nr, kk), _inflate(ni, kk), _inflate(den, kk))

    def invert_q(self):
        """f(q^-1)."""
        if self.is_zero():
            return self
        n = max(self.nr.degree(), self.ni.degree(), 0)
        m = self.den.degree()
        def rev(p, deg):
            cs = p.coeffs() + [0] * (deg + 1 - p.length())
            return _P(cs[::-1]) if cs else _ZERO
        # x^-s N(1/x)/D(1/x) = x^(-s-n+m) rev(N)/rev(D)
        return QRat(self.d, -self.s - n + m, rev(self.nr, n), rev(self.ni, n), rev(self.den, m))

    # views ------------------------------------------------------------------
    @property
    def num(self):
        terms = {}
        for p, unit in ((self.nr, GaussRat(1)), (self.ni, GaussRat(0, 1))):
            for k, c in enumerate(p.coeffs()):
                if c != 0:
                    e = Fraction(self.s + k, self.d)
                    terms[e] = terms.get(e, GaussRat()) + unit * _frac(c)
        return QLaurent(terms)

    @property
    def den_laurent(self):
        return QLaurent({Fraction(k, self.d): _frac(c) for k, c in enumerate(self.den.coeffs()) if c != 0})

    def exponents(self):
        return [e for e in list(self.num.terms) + list(self.den_laurent.terms)]

    def constant_value(self):
        """The GaussRat value if this is a constant, else None."""
        if self.is_zero():
            return GaussRat()
        if self.s == 0 and self.den.is_one() and self.nr.length() <= 1 and self.ni.length() <= 1:
            re_ = _frac(self.nr.coeffs()[0]) if self.nr.length() else 0
            im = _frac(self.ni.coeffs()[0]) if self.ni.length() else 0
            return GaussRat(re_, im)
        return None

    def series(self, order, direction=1):
        """Expansion as a Laurent series in q (direction=1) or q^-1
        (direction=-1), returned as {exponent: GaussRat} for exponents up to
        `order` in absolute value along the expansion direction."""
        f = self if direction == 1 else self.invert_q()
        # now expand f in ascending powers of x
        dcs = [_frac(c) for c in f.den.coeffs()]
        nlen = int(order * f.d) - f.s + 1
        if nlen <= 0:
            return {}
        out_r = _power_div([_frac(c) for c in f.nr.coeffs()], dcs, nlen)
        out_i = _power_div([_frac(c) for c in f.ni.coeffs()], dcs, nlen)
        res = {}
        for k in range(nlen):
            c = GaussRat(out_r[k], out_i[k])
            if c:
                e = Fraction(f.s + k, f.d)
                res[e * direction] = c
        return res

    # text -------------------------------------------------------------------
    def to_text(self):
        n = self.num.to_text()
        if self.den.is_one():
            return n
        return f"{n} / {self.den_laurent.to_text()}"

    @classmethod
    def from_text(cls, s):
        s = s.strip()
        if s != "0" and "*i*q^(" not in s:
            return parse_bracket_text(s)
        parts = s.split(" / ")
        if len(parts) == 1:
            return QLaurent.from_text(parts[0]).to_qrat()
        if len(parts) != 2:
            raise ValueError(f"bad QRat text {s!r}")
        return QLaurent.from_text(parts[0]).to_qrat() / QLaurent.from_text(parts[1]).to_qrat()

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den_laurent.to_json()}

    @classmethod
    def from_json(cls, data):
        return QLaurent.from_json(data["num"]).to_qrat() / QLaurent.from_json(data["den"]).to_qrat()

    def pretty(self):
        """Bracket-product display c * q^e * prod [k]^n when the value has that
        shape; otherwise the canonical text."""
        b = bracket_decompose(self)
        if b is None:
            return self.to_text()
        return format_bracket(*b)

    def __repr__(self):
        return f"QRat({self.pretty()})"


def _power_div(num, den, n):
    """First n coefficients of num/den as power series (den[0] != 0)."""
    out = []
    num = list(num) + [0] * max(0, n - len(num))
    d0 = den[0]
    for k in range(n):
        acc = num[k]
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / d0)
    return out


# ---------------------------------------------------------------------------
# brackets and sums


def bracket(k):
    """[k] = q^(k/2) - q^(-k/2)."""
    if k < 1:
        raise ValueError("bracket needs k >= 1")
    return QRat.monomial(Fraction(k, 2)) - QRat.monomial(Fraction(-k, 2))


def bracket_int(k):
    """[k] for any integer k, with [0] = 0 and [-k] = -[k]."""
    if k == 0:
        return QRat.zero()
    return bracket(k) if k > 0 else -bracket(-k)


def bracket_factorial(m):
    out = QRat.one()
    for k in range(1, m + 1):
        out = out * bracket(k)
    return out


def geom_qsum(e0, s, k=1):
    """Closed form of sum_{i>=0} q^(k(e0 + i s)) = q^(k e0) / (1 - q^(k s))."""
    s = Fraction(s)
    if s == 0:
        raise ValueError("geom_qsum: step must be nonzero (divergent sum)")
    return QRat.monomial(Fraction(e0) * k) / (1 - QRat.monomial(s * k))


def minus_one_pow(r):
    """(-1)^r for r in (1/2)Z with the branch (-1)^(1/2) = +i."""
    r = Fraction(r)
    t = 2 * r
    if t.denominator != 1:
        raise ValueError(f"(-1)^{r} is outside the fixed branch")
    return [GaussRat(1), GaussRat(0, 1), GaussRat(-1), GaussRat(0, -1)][int(t) % 4]


# bracket display ------------------------------------------------------------


def _peel_brackets(p, d):
    """Greedily write p (a polynomial in x = q^(1/d) with p(0) != 0) as
    c * prod (x^(d k) - 1)^n_k.  Returns (c, {k: n_k}) or None."""
    out = {}
    if p.is_constant():
        return p.coeffs()[0], out
    k = p.degree() // d
    while k >= 1 and not p.is_constant():
        f = _P([-1] + [0] * (d * k - 1) + [1])
        qq, r = divmod(p, f)
        if r.is_zero():
            out[k] = out.get(k, 0) + 1
            p = qq
            continue
        k -= 1
    if not p.is_constant():
        return None
    return p.coeffs()[0], out


def bracket_decompose(v):
    """(coefficient GaussRat, q-exponent, {k: power}) with v = c q^e prod [k]^n."""
    if v.is_zero():
        return None
    if not v.ni.is_zero() and not v.nr.is_zero():
        return None
    unit = GaussRat(1) if v.ni.is_zero() else GaussRat(0, 1)
    num = v.nr if v.ni.is_zero() else v.ni
    a = _peel_brackets(num, v.d)
    b = _peel_brackets(v.den, v.d)
    if a is None or b is None:
        return None
    ca, na = a
    cb, nb = b
    powers = dict(na)
    for k, n in nb.items():
        powers[k] = powers.get(k, 0) - n
    powers = {k: n for k, n in powers.items() if n}
    # prod (q^k - 1)^n = prod [k]^n q^(k n / 2)
    e = Fraction(v.s, v.d) + sum(Fraction(k * n, 2) for k, n in powers.items())
    return unit * (_frac(ca) / _frac(cb)), e, powers


def format_bracket(c, e, powers):
    parts = []
    if c != GaussRat(1) or (e == 0 and not powers):
        if c.im == 0:
            parts.append(_short(c.re))
        else:
            parts.append("(" + c.to_text() + ")")
    if e != 0:
        parts.append(f"q^({_short(e)})")
    for k in sorted(powers, reverse=True):
        n = powers[k]
        parts.append(f"[{k}]" if n == 1 else f"[{k}]^{n}")
    return "*".join(parts)


def _short(r):
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


_BTOK = re.compile(r"\(([^)]*)\)|q\^\(([^)]*)\)|\[(\d+)\](?:\^(-?\d+))?|(-?\d+(?:/\d+)?)")


def parse_bracket_text(s):
    """Inverse of format_bracket."""
    out = QRat.one()
    for tok in s.split("*"):
        tok = tok.strip()
        m = re.fullmatch(r"q\^\((-?\d+(?:/\d+)?)\)", tok)
        if m:
            out = out * QRat.monomial(Fraction(m.group(1)))
            continue
        m = re.fullmatch(r"\[(\d+)\](?:\^(-?\d+))?", tok)
        if m:
            out = out * bracket(int(m.group(1))) ** int(m.group(2) or 1)
            continue
        m = re.fullmatch(r"\((.*)\)", tok)
        if m:
            out = out * QRat.const(GaussRat.from_text(m.group(1)))
            continue
        out = out * QRat.const(Fraction(tok))
    return out


# ---------------------------------------------------------------------------
# Kahler monomials and truncated series


def kmono(**exps):
    return make_mono(exps)


def make_mono(exps):
    """Canonical monomial key: sorted tuple of (name, exponent), zeros dropped."""
    items = []
    for name, e in exps.items():
        e = Fraction(e)
        if e < 0:
            raise ValueError("Kahler exponents must be non-negative")
        if 2 * e != int(2 * e):
            raise ValueError("Kahler exponents must be half-integers")
        if e:
            items.append((name, e))
    return tuple(sorted(items))


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for n, e in b:
        d[n] = d.get(n, 0) + e
    return tuple(sorted(d.items()))


def mono_weight(m):
    return sum((e for _, e in m), Fraction(0))


def mono_text(m):
    if not m:
        return "1"
    return "*".join(f"{n}^({_short(e)})" for n, e in m)


class KSeries:
    """Truncated series  sum Xi^x * prod Q_name^e * coeff.

    Keys are (xi, mono) with xi an integer power of the flux variable Xi
    (weightless) and mono a canonical Kahler monomial.  Only terms of total
    Kahler weight <= bound are kept."""

    __slots__ = ("terms", "bound")

    def __init__(self, terms=None, bound=0):
        self.bound = Fraction(bound)
        t = {}
        for key, c in (terms or {}).items():
            if not isinstance(c, QRat):
                c = QRat.coerce(c)
            if c.is_zero() or mono_weight(key[1]) > self.bound:
                continue
            t[key] = c
        self.terms = t

    @classmethod
    def const(cls, c, bound):
        return cls({(0, ()): QRat.coerce(c)}, bound)

    @classmethod
    def one(cls, bound):
        return cls.const(1, bound)

    @classmethod
    def term(cls, c, bound, xi=0, **exps):
        return cls({(xi, make_mono(exps)): QRat.coerce(c)}, bound)

    def copy_with(self, terms, bound=None):
        out = KSeries.__new__(KSeries)
        out.bound = self.bound if bound is None else Fraction(bound)
        out.terms = terms
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, o):
        if not isinstance(o, KSeries):
            return NotImplemented
        return self.terms == o.terms and self.bound == o.bound

    def same_terms(self, o, bound=None):
        """Term-wise equality through the given (or common) weight bound."""
        b = min(self.bound, o.bound) if bound is None else Fraction(bound)
        a = {k: v for k, v in self.terms.items() if mono_weight(k[1]) <= b}
        c = {k: v for k, v in o.terms.items() if mono_weight(k[1]) <= b}
        return a == c

    def __add__(self, o):
        if not isinstance(o, KSeries):
            o = KSeries.const(o, self.bound)
        b = min(self.bound, o.bound)
        t = {k: v for k, v in self.terms.items() if mono_weight(k[1]) <= b}
        for k, v in o.terms.items():
            if mono_weight(k[1]) > b:
                continue
            if k in t:
                s = t[k] + v
                if s.is_zero():
                    del t[k]
                else:
                    t[k] = s
            else:
                t[k] = v
        return self.copy_with(t, b)

    __radd__ = __add__

    def __neg__(self):
        return self.copy_with({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        if not isinstance(o, KSeries):
            o = KSeries.const(o, self.bound)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def scale(self, c):
        c = QRat.coerce(c)
        if c.is_zero():
            return self.copy_with({})
        return self.copy_with({k: v * c for k, v in self.terms.items()})

    def __mul__(self, o):
        if not isinstance(o, KSeries):
            return self.scale(o)
        return kseries_mul(self, o, min(self.bound, o.bound))

    def __rmul__(self, o):
        return self.scale(o)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = KSeries.one(self.bound)
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, bound):
        bound = Fraction(bound)
        return self.copy_with({k: v for k, v in self.terms.items() if mono_weight(k[1]) <= bound},
                              min(bound, self.bound))

    def coeff(self, xi=0, **exps):
        return self.terms.get((xi, make_mono(exps)), QRat.zero())

    def get(self, key):
        return self.terms.get(key, QRat.zero())

    def constant(self):
        return self.terms.get((0, ()), QRat.zero())

    def xi_part(self, xi):
        """Coefficient of Xi^xi as a Xi-free series."""
        return self.copy_with({(0, m): v for (x, m), v in self.terms.items() if x == xi})

    def xi_degrees(self):
        return sorted({x for x, _ in self.terms})

    def times_xi(self, n):
        return self.copy_with({(x + n, m): v for (x, m), v in self.terms.items()})

    def times_mono(self, mono, c=None):
        t = {}
        for (x, m), v in self.terms.items():
            m2 = mono_mul(m, mono)
            if mono_weight(m2) <= self.bound:
                t[(x, m2)] = v if c is None else v * c
        return self.copy_with(t)

    def rename(self, mapping):
        """Identify Kahler names (e.g. Q1, Q2, Q3 -> Q)."""
        t = {}
        for (x, m), v in self.terms.items():
            d = {}
            for n, e in m:
                n2 = mapping.get(n, n)
                d[n2] = d.get(n2, 0) + e
            key = (x, make_mono(d))
            s = t[key] + v if key in t else v
            if s.is_zero():
                t.pop(key, None)
            else:
                t[key] = s
        return self.copy_with(t)

    def shift_kahler(self, shifts):
        """Q_name -> q^(shifts[name]) Q_name on every term."""
        t = {}
        for (x, m), v in self.terms.items():
            e = sum((Fraction(shifts.get(n, 0)) * k for n, k in m), Fraction(0))
            t[(x, m)] = v * QRat.monomial(e) if e else v
        return self.copy_with(t)

    def map_coeffs(self, f):
        t = {}
        for k, v in self.terms.items():
            w = f(v)
            if not w.is_zero():
                t[k] = w
        return self.copy_with(t)

    def min_positive_weight(self):
        ws = [mono_weight(m) for _, m in self.terms]
        ws = [w for w in ws if w > 0]
        return min(ws) if ws else None

    def inverse(self):
        """Series inverse; the weight-0 part must be a single nonzero Xi^0 term."""
        c0 = self.terms.get((0, ()))
        zero_w = [k for k in self.terms if mono_weight(k[1]) == 0]
        if c0 is None or len(zero_w) != 1:
            raise ZeroDivisionError("KSeries has no invertible constant term")
        inv0 = c0.inverse()
        r = self.copy_with({k: -v * inv0 for k, v in self.terms.items() if k != (0, ())})
        out = KSeries.one(self.bound)
        if r.is_zero():
            return out.scale(inv0)
        w = r.min_positive_weight()
        power = KSeries.one(self.bound)
        for _ in range(int(self.bound / w)):
            power = power * r
            if power.is_zero():
                break
            out = out + power
        return out.scale(inv0)

    def __truediv__(self, o):
        if isinstance(o, KSeries):
            return self * o.inverse()
        return self.scale(QRat.coerce(o).inverse())

    def exp(self):
        """exp of a series without weight-0 terms."""
        if any(mono_weight(m) == 0 for _, m in self.terms):
            raise ValueError("exp needs a series of positive Kahler weight")
        out = KSeries.one(self.bound)
        if self.is_zero():
            return out
        w = self.min_positive_weight()
        power = KSeries.one(self.bound)
        for j in range(1, int(self.bound / w) + 1):
            power = (power * self).scale(QRat.const(Fraction(1, j)))
            if power.is_zero():
                break
            out = out + power
        return out

    def log1p(self):
        """log(1 + self) for a series without weight-0 terms."""
        if any(mono_weight(m) == 0 for _, m in self.terms):
            raise ValueError("log1p needs a series of positive Kahler weight")
        out = KSeries({}, self.bound)
        if self.is_zero():
            return out
        w = self.min_positive_weight()
        power = KSeries.one(self.bound)
        for j in range(1, int(self.bound / w) + 1):
            power = power * self
            if power.is_zero():
                break
            out = out + power.scale(QRat.const(Fraction((-1) ** (j + 1), j)))
        return out

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (mono_weight(kv[0][1]), kv[0][1], kv[0][0]))

    def __repr__(self):
        if not self.terms:
            return f"KSeries(0; D={self.bound})"
        parts = []
        for (x, m), v in self.sorted_items():
            xs = "" if x == 0 else f"Xi^({x})*"
            parts.append(f"{xs}{mono_text(m)}: {v.pretty()}")
        return "KSeries(" + "; ".join(parts) + f"; D={self.bound})"


def kseries_mul(a, b, D=None):
    """Product truncated at total Kahler weight D."""
    D = min(a.bound, b.bound) if D is None else Fraction(D)
    t = {}
    bw = [(k, v, mono_weight(k[1])) for k, v in b.terms.items()]
    for (xa, ma), va in a.terms.items():
        wa = mono_weight(ma)
        if wa > D:
            continue
        for (xb, mb), vb, wb in bw:
            if wa + wb > D:
                continue
            key = (xa + xb, mono_mul(ma, mb))
            p = va * vb
            if key in t:
                s = t[key] + p
                if s.is_zero():
                    del t[key]
                else:
                    t[key] = s
            else:
                t[key] = p
    out = KSeries.__new__(KSeries)
    out.bound = D
    out.terms = t
    return out


def kseries_to_json(s):
    return {
        "bound": _qtext(s.bound),
        "terms": [
            {"xi": x, "kahler": {n: _qtext(e) for n, e in m}, "coeff": v.to_json()}
            for (x, m), v in s.sorted_items()
        ],
    }


def kseries_from_json(data):
    t = {}
    for term in data["terms"]:
        key = (int(term["xi"]), make_mono({n: Fraction(e) for n, e in term["kahler"].items()}))
        t[key] = QRat.from_json(term["coeff"])
    return KSeries(t, Fraction(data["bound"]))
