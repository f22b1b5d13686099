"""Gluing vertices around a one-loop (M-gon) toric diagram."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from . import partitions as P
from .qcoeff import KSeries, QRat, make_mono
from .vertex import vertex


@dataclass(frozen=True)
class LoopModel:
    """M vertices in a cycle; edge i (vertex i to i+1) has framing gamma[i]
    and Kahler name kahler[i].  Several edges may share one name."""

    M: int
    gamma: tuple
    kahler: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(int(g) for g in self.gamma))
        object.__setattr__(self, "kahler", tuple(str(k) for k in self.kahler))
        if self.M < 1:
            raise ValueError("M must be positive")
        if len(self.gamma) != self.M or len(self.kahler) != self.M:
            raise ValueError("gamma and kahler must have length M")

    @property
    def names(self):
        return tuple(sorted(set(self.kahler)))

    def rotate(self, k=1):
        k %= self.M
        return LoopModel(self.M, self.gamma[k:] + self.gamma[:k], self.kahler[k:] + self.kahler[:k])

    def to_json(self):
        return {"M": self.M, "gamma": list(self.gamma), "kahler": list(self.kahler)}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(int(data["M"]), tuple(data["gamma"]), tuple(data["kahler"]))
        except KeyError as exc:
            raise ValueError(f"model is missing field {exc}") from None


def local_p2():
    return LoopModel(3, (1, 1, 1), ("Q", "Q", "Q"))


def minus2_model(M):
    """The (-2,...,-2)-model with distinct Kahler names Q1..QM."""
    return LoopModel(M, (-2,) * M, tuple(f"Q{i}" for i in range(1, M + 1)))


def _tuples(M, D):
    """Tuples of M partitions with total size <= D, by weight shell."""
    for total in range(int(D) + 1):
        for sizes in _compositions(total, M):
            for mus in itertools.product(*(P.partitions_of(s) for s in sizes)):
                yield mus


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def open_amplitude(lams, model, D):
    """Sum over internal partitions of the glued vertex product, to Kahler weight D."""
    M = model.M
    lams = tuple(P.make(l) for l in lams)
    if len(lams) != M:
        raise ValueError("need one outer partition per vertex")
    D = Fraction(D)
    terms = {}
    for mus in _tuples(M, D):
        sign = (-1) ** (sum(g * P.size(m) for g, m in zip(model.gamma, mus)) % 2)
        e = Fraction(sum((g + 1) * P.kappa(m) for g, m in zip(model.gamma, mus)), 2)
        val = QRat.monomial(e, sign)
        for i in range(M):
            prev = mus[i - 1]
            val = val * vertex(P.transpose(prev), lams[i], mus[i])
            if val.is_zero():
                break
        if val.is_zero():
            continue
        exps = {}
        for name, m in zip(model.kahler, mus):
            exps[name] = exps.get(name, 0) + P.size(m)
        key = (0, make_mono(exps))
        if key in terms:
            terms[key] = terms[key] + val
        else:
            terms[key] = val
    return KSeries(terms, D)


def one_brane(lam, model, D):
    return open_amplitude((lam,) + ((),) * (model.M - 1), model, D)


def closed(model, D):
    return open_amplitude(((),) * model.M, model, D)
