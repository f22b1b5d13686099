"""Command-line interface and machine-readable output."""
from __future__ import annotations

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from . import flux, fock, kp, minus2
from . import partitions as P
from .glue import LoopModel, closed, local_p2, minus2_model, one_brane
from .qcoeff import KSeries, QRat, make_mono, mono_text
from .vertex import framed_vertex

DEFAULTS = {"qdeg": Fraction(2), "nmax": 1, "lmax": 4, "emax": None}


# ---------------------------------------------------------------------------
# entries and emitters


@dataclass(frozen=True)
class Entry:
    N: int
    partition: tuple
    kahler: tuple
    coeff: QRat

    def sort_key(self):
        return (self.N, P.size(self.partition), self.partition, self.kahler)


def entries_of(obj, partition=()):
    """Flatten a FluxSeries, SchurSeries or Xi-Laurent KSeries."""
    out = []
    if isinstance(obj, flux.FluxSeries):
        for N, sec in obj.sectors.items():
            for lam, c in sec.coeffs.items():
                out += [Entry(N - x, lam, m, v) for (x, m), v in c.terms.items()]
    elif isinstance(obj, flux.SchurSeries):
        for lam, c in obj.coeffs.items():
            out += [Entry(-x, lam, m, v) for (x, m), v in c.terms.items()]
    elif isinstance(obj, KSeries):
        lam = P.make(partition)
        out = [Entry(-x, lam, m, v) for (x, m), v in obj.terms.items()]
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")
    return sorted(out, key=Entry.sort_key)


def _window(entries, n_max=None):
    if n_max is None:
        n_max = max((abs(e.N) for e in entries), default=0)
    return [-n_max, n_max]


def to_document(entries, n_max=None):
    return {
        "xi_window": _window(entries, n_max),
        "entries": [
            {
                "N": e.N,
                "partition": P.to_text(e.partition),
                "kahler": {n: _frac_text(x) for n, x in e.kahler},
                "coeff": e.coeff.to_json(),
            }
            for e in sorted(entries, key=Entry.sort_key)
        ],
    }


def _frac_text(r):
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _laurent_display(L):
    parts = []
    for e, c in sorted(L.terms.items(), reverse=True):
        if c.im:
            return None
        r = Fraction(c.re)
        mag = abs(r)
        q = "" if e == 0 else ("q" if e == 1 else (f"q^{e}" if e.denominator == 1 else f"q^({_frac_text(e)})"))
        coef = _frac_text(mag) if (mag != 1 or not q) else ""
        body = "*".join(x for x in (coef, q) if x)
        parts.append(("- " if r < 0 else "+ ") + body)
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def display(v):
    """Bracket product when available, else (numerator)/(denominator) in q."""
    text = v.pretty()
    if "*i*q^(" not in text:
        return text
    num, den = v.num, v.den_laurent
    if den.terms and den.terms[max(den.terms)].re < 0:
        # present the denominator with a positive leading coefficient
        num = type(num)({e: -c for e, c in num.terms.items()})
        den = type(den)({e: -c for e, c in den.terms.items()})
    num, den = _laurent_display(num), _laurent_display(den)
    if num is None or den is None:
        return text
    return f"({num})" if den == "1" else f"({num})/({den})"


def emit(entries, fmt="json", n_max=None):
    """Serialize entries as text, json or csv (byte-stable)."""
    entries = sorted(entries, key=Entry.sort_key)
    if fmt == "json":
        return json.dumps(to_document(entries, n_max), indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "partition", "kahler", "num", "den"])
        for e in entries:
            w.writerow([e.N, P.to_text(e.partition), mono_text(e.kahler),
                        e.coeff.num.to_text(), e.coeff.den_laurent.to_text()])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"xi window {_window(entries, n_max)}"]
        for e in entries:
            lam = P.to_text(e.partition) or "()"
            lines.append(f"N={e.N} lambda={lam} {mono_text(e.kahler)}: {display(e.coeff)}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")


def parse(text):
    """Inverse of emit(..., 'json'): (entries, xi_window)."""
    doc = json.loads(text)
    entries = []
    for d in doc["entries"]:
        entries.append(Entry(
            int(d["N"]),
            P.from_text(d["partition"]),
            make_mono({n: Fraction(x) for n, x in d["kahler"].items()}),
            QRat.from_json(d["coeff"]),
        ))
    return sorted(entries, key=Entry.sort_key), list(doc["xi_window"])


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ModelConfig:
    model: LoopModel
    truncation: dict = field(default_factory=dict)

    @classmethod
    def load(cls, spec):
        """``p2``, ``minus2:M`` or a JSON file {M, gamma, kahler[, truncation]}."""
        if spec in (None, "p2"):
            return cls(local_p2())
        if spec.startswith("minus2:"):
            try:
                return cls(minus2_model(int(spec.split(":", 1)[1])))
            except ValueError as exc:
                raise click.BadParameter(str(exc), param_hint="--model") from None
        path = Path(spec)
        if not path.exists():
            raise click.BadParameter(f"no such model file {spec!r}", param_hint="--model")
        try:
            data = json.loads(path.read_text())
            model = LoopModel.from_json(data)
        except (ValueError, TypeError) as exc:
            raise click.BadParameter(f"malformed model config: {exc}", param_hint="--model") from None
        return cls(model, dict(data.get("truncation", {})))

    def bound(self, name, value):
        if value is not None:
            return value
        if name in self.truncation:
            v = self.truncation[name]
            return Fraction(str(v)) if name == "qdeg" else (None if v is None else int(v))
        return DEFAULTS[name]


def _fraction(ctx, param, value):
    if value is None:
        return None
    try:
        v = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational number: {value!r}") from None
    if v < 0:
        raise click.BadParameter("must be non-negative")
    return v


def _partition(ctx, param, value):
    if value is None:
        return None
    try:
        return P.from_text(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _nonneg(name, v):
    if v is not None and v < 0:
        raise click.UsageError(f"truncation bound {name} must be non-negative")


def _write(text):
    click.echo(text, nl=False)


def _report(fmt, payload, text_lines):
    if fmt == "text":
        _write("\n".join(text_lines) + "\n")
    else:
        _write(json.dumps(payload, indent=1) + "\n")


out_option = click.option("--out", "fmt", type=click.Choice(["text", "json", "csv"]), default="text",
                          show_default=True)
model_option = click.option("--model", "model_spec", default="p2", show_default=True,
                            help="p2, minus2:M or a model JSON file")
qdeg_option = click.option("--qdeg", callback=_fraction, help="Kahler weight bound D [2]")
nmax_option = click.option("--nmax", type=int, help="flux window |N| <= nmax [1]")
lmax_option = click.option("--lmax", type=int, help="largest |lambda| [4]")
conv_option = click.option("--convention", type=click.Choice(flux.CONVENTIONS), default="product",
                           show_default=True, help="Q in the flux prefactor Q^(N^2/2)")


def _total(cfg, qdeg, nmax, lmax, convention="product"):
    D = cfg.bound("qdeg", qdeg)
    N = cfg.bound("nmax", nmax)
    L = cfg.bound("lmax", lmax)
    for name, v in (("nmax", N), ("lmax", L)):
        _nonneg(name, v)
    return flux.total(cfg.model, D, L, N, convention), D, N, L


def _check_minus2(model):
    if any(g != -2 for g in model.gamma):
        raise click.UsageError("this command needs a model with every gamma_i = -2")


def _series_lines(entries):
    return emit(entries, "text").rstrip("\n").split("\n")


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="log truncation warnings")
def main(verbose):
    """Topological-vertex partition functions, flux sectors and KP checks."""
    logging.basicConfig(level=logging.WARNING if verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--mu1", default="", callback=_partition)
@click.option("--mu2", default="", callback=_partition)
@click.option("--mu3", default="", callback=_partition)
@click.option("--framing", default="0,0,0", help="framing integers a1,a2,a3")
@out_option
def vertex(mu1, mu2, mu3, framing, fmt):
    """The topological vertex W_{mu1,mu2,mu3}(q)."""
    try:
        a = tuple(int(x) for x in framing.split(","))
        if len(a) != 3:
            raise ValueError
    except ValueError:
        raise click.BadParameter("expected three integers a1,a2,a3", param_hint="--framing") from None
    v = framed_vertex(mu1, mu2, mu3, a)
    if fmt == "text":
        _write(v.pretty() + "\n")
    else:
        _write(emit([Entry(0, (), (), v)], fmt))


@main.command()
@model_option
@click.option("--lambda", "lam", default="", callback=_partition)
@qdeg_option
@out_option
def glue(model_spec, lam, qdeg, fmt):
    """One-brane amplitude Z_lambda (closed series for the empty partition)."""
    cfg = ModelConfig.load(model_spec)
    D = cfg.bound("qdeg", qdeg)
    s = closed(cfg.model, D) if not lam else one_brane(lam, cfg.model, D)
    _write(emit(entries_of(s, lam), fmt))


@main.command()
@model_option
@qdeg_option
@nmax_option
@lmax_option
@conv_option
@out_option
def total(model_spec, qdeg, nmax, lmax, convention, fmt):
    """All flux sectors |N| <= nmax for |lambda| <= lmax."""
    cfg = ModelConfig.load(model_spec)
    Z, _, N, _ = _total(cfg, qdeg, nmax, lmax, convention)
    _write(emit(entries_of(Z), fmt, N))


@main.command()
@model_option
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@qdeg_option
@nmax_option
@lmax_option
@conv_option
@out_option
def affine(model_spec, n, m, qdeg, nmax, lmax, convention, fmt):
    """Affine coordinate a_(n,m) = (-1)^n c_(m|n) / c_0 of the total series."""
    if n < 0 or m < 0:
        raise click.UsageError("n and m must be non-negative")
    cfg = ModelConfig.load(model_spec)
    need = n + m + 1
    L = cfg.bound("lmax", lmax) if lmax is not None else max(need, DEFAULTS["lmax"])
    if L < need:
        raise click.UsageError(f"lmax={L} is below |(m|n)| = {need}; raise --lmax")
    Z, _, N, _ = _total(cfg, qdeg, nmax, L, convention)
    _write(emit(entries_of(kp.affine_coords(Z, n, m)), fmt, N))


@main.group()
def check():
    """KP-integrability residuals."""


def _residual_payload(kind, r, N, extra=None):
    order = kp.first_nonzero_order(r)
    payload = {"check": kind}
    payload.update(extra or {})
    payload.update({
        "vanishes_within_truncation": r.is_zero(),
        "first_nonzero_order": None if order is None else _frac_text(order),
        "bound": _frac_text(r.bound),
        "residual": to_document(entries_of(r), N),
    })
    return payload


def _residual_text(payload):
    lines = [f"check {payload['check']}"]
    if "lambda" in payload:
        lines.append(f"lambda = {payload['lambda'] or '()'}")
    lines.append(f"vanishes_within_truncation = {str(payload['vanishes_within_truncation']).lower()}")
    if payload["first_nonzero_order"] is not None:
        lines.append(f"first_nonzero_order = {payload['first_nonzero_order']}")
    return lines


@check.command()
@model_option
@qdeg_option
@nmax_option
@conv_option
@click.option("--slice", "only", type=int, help="keep a single flux sector N")
@click.option("--out", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def plucker(model_spec, qdeg, nmax, convention, only, fmt):
    """c_(2,2) c_0 - c_(2,1) c_(1) + c_(2) c_(1,1)."""
    cfg = ModelConfig.load(model_spec)
    Z, D, N, _ = _total(cfg, qdeg, nmax, 4, convention)
    if only is not None:
        if only not in Z.sectors:
            raise click.UsageError(f"--slice {only} lies outside nmax={N}")
        Z = Z.slice(only)
    payload = _residual_payload("plucker", kp.plucker_first(Z), N)
    _report(fmt, payload, _residual_text(payload))


@check.command()
@model_option
@click.option("--lambda", "lam", default="2,2", callback=_partition, show_default=True)
@qdeg_option
@nmax_option
@conv_option
@click.option("--slice", "only", type=int, help="keep a single flux sector N")
@click.option("--out", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def giambelli(model_spec, lam, qdeg, nmax, convention, only, fmt):
    """c_lambda / c_0 - (-1)^(sum legs) det(a_(n_i, m_j))."""
    cfg = ModelConfig.load(model_spec)
    Z, D, N, _ = _total(cfg, qdeg, nmax, max(P.size(lam), 1), convention)
    if only is not None:
        if only not in Z.sectors:
            raise click.UsageError(f"--slice {only} lies outside nmax={N}")
        Z = Z.slice(only)
    payload = _residual_payload("giambelli", kp.giambelli_residual(Z, lam), N,
                                {"lambda": P.to_text(lam)})
    _report(fmt, payload, _residual_text(payload))


@main.group(name="minus2")
def minus2_group():
    """Closed forms for the (-2,...,-2)-model."""


m_option = click.option("--M", "M", type=int, default=1, show_default=True)


def _minus2_bounds(M, qdeg, nmax):
    if M < 1:
        raise click.UsageError("M must be positive")
    D = DEFAULTS["qdeg"] if qdeg is None else qdeg
    N = DEFAULTS["nmax"] if nmax is None else nmax
    _nonneg("nmax", N)
    return minus2_model(M), D, N


@minus2_group.command()
@m_option
@qdeg_option
@nmax_option
@out_option
def const(M, qdeg, nmax, fmt):
    """Closed-form constant term c_0."""
    model, D, N = _minus2_bounds(M, qdeg, nmax)
    _write(emit(entries_of(minus2.const_term_closed(model, D, N)), fmt, N))


@minus2_group.command(name="affine")
@m_option
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@qdeg_option
@nmax_option
@out_option
def minus2_affine(M, n, m, qdeg, nmax, fmt):
    """Closed-form affine coordinate a_(n,m)."""
    if n < 0 or m < 0:
        raise click.UsageError("n and m must be non-negative")
    model, D, N = _minus2_bounds(M, qdeg, nmax)
    _write(emit(entries_of(minus2.affine_closed(n, m, model, D, N)), fmt, N))


@minus2_group.command()
@m_option
@qdeg_option
@nmax_option
@click.option("--zorder", type=int, default=6, show_default=True)
@click.option("--out", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def qsc(M, qdeg, nmax, zorder, fmt):
    """Quantum spectral curve residual, one z-mode at a time."""
    if zorder < 0:
        raise click.UsageError("zorder must be non-negative")
    model, D, N = _minus2_bounds(M, qdeg, nmax)
    res = minus2.qsc_residual(model, D, N, zorder)
    ok = all(r.is_zero() for r in res.values())
    payload = {
        "check": "qsc",
        "vanishes_within_truncation": ok,
        "bound": _frac_text(D),
        "z_modes": {str(k): to_document(entries_of(r), N) for k, r in sorted(res.items(), reverse=True)},
    }
    lines = [f"z^{k}: {'0' if r.is_zero() else 'nonzero'}" for k, r in sorted(res.items(), reverse=True)]
    lines.append(f"vanishes_within_truncation = {str(ok).lower()}")
    _report(fmt, payload, lines)


@main.group()
def oracle():
    """Independent cross-checks."""


@oracle.command()
@model_option
@click.option("--lambda", "lam", default="", callback=_partition)
@qdeg_option
@nmax_option
@click.option("--emax", callback=_fraction, help="Fock energy cutoff [qdeg + nmax^2/2]")
@click.option("--out", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def trace(model_spec, lam, qdeg, nmax, emax, fmt):
    """Fermionic trace of the loop word against the bosonic flux sectors."""
    cfg = ModelConfig.load(model_spec)
    D = cfg.bound("qdeg", qdeg)
    N = cfg.bound("nmax", nmax)
    _nonneg("nmax", N)
    need = D + Fraction(N * N, 2)
    E = emax if emax is not None else cfg.bound("emax", None)
    E = need if E is None else Fraction(E)
    if E < need:
        raise click.UsageError(f"emax={_frac_text(E)} is below qdeg + nmax^2/2 = {_frac_text(need)}")
    fermionic = fock.trace_sector(fock.loop_word(lam, cfg.model, D), D, N, E)
    Z = flux.total(cfg.model, D, P.size(lam), N)
    bosonic = Z.coefficient(lam)
    ok = (fermionic - bosonic).is_zero()
    payload = {"check": "trace", "lambda": P.to_text(lam), "agrees": ok,
               "fermionic": to_document(entries_of(fermionic, lam), N)}
    lines = [f"trace lambda={P.to_text(lam) or '()'} D={_frac_text(D)} nmax={N}",
             f"agrees_with_flux_total = {str(ok).lower()}"] + _series_lines(entries_of(fermionic, lam))
    _report(fmt, payload, lines)


@main.command()
@model_option
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--order", type=int, default=2, show_default=True)
@qdeg_option
@nmax_option
@click.option("--out", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def npoint(model_spec, n, order, qdeg, nmax, fmt):
    """Connected n-point functions <p_j1 ... p_jn> for 1 <= j_i <= order."""
    if n < 1 or order < 1:
        raise click.UsageError("n and order must be positive")
    cfg = ModelConfig.load(model_spec)
    L = n * order
    Z, D, N, _ = _total(cfg, qdeg, nmax, L)
    table = kp.AffineTable.from_series(Z, L)
    res = kp.npoint_connected(table, n, order)
    payload = {"n": n, "order": order,
               "values": {",".join(map(str, js)): to_document(entries_of(c), N) for js, c in sorted(res.items())}}
    lines = []
    for js, c in sorted(res.items()):
        lines.append(f"<{' '.join(f'p{j}' for j in js)}>:")
        lines += ["  " + x for x in _series_lines(entries_of(c))[1:]]
    _report(fmt, payload, lines)


def run(args):
    """Invoke the CLI in-process: (exit code, output)."""
    from click.testing import CliRunner
    r = CliRunner().invoke(main, list(args))
    return r.exit_code, r.output


if __name__ == "__main__":
    sys.exit(main())
