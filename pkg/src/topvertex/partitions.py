"""Integer partitions as plain tuples of weakly decreasing positive parts."""
from functools import lru_cache

EMPTY = ()


def make(parts):
    """Canonical partition tuple; validates and drops trailing zeros."""
    parts = tuple(int(p) for p in parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise ValueError(f"parts not weakly decreasing: {parts}")
    if parts and parts[-1] < 0:
        raise ValueError(f"negative part in {parts}")
    return parts


def size(lam):
    return sum(lam)


@lru_cache(maxsize=None)
def transpose(lam):
    if not lam:
        return EMPTY
    return tuple(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def frobenius_of(lam):
    """(arms, legs) with m_i = lam_i - i and n_i = lam^t_i - i (1-based i)."""
    lt = transpose(lam)
    arms, legs = [], []
    i = 0
    while i < len(lam) and lam[i] > i:
        arms.append(lam[i] - i - 1)
        legs.append(lt[i] - i - 1)
        i += 1
    return tuple(arms), tuple(legs)


def from_frobenius(arms, legs):
    arms, legs = tuple(arms), tuple(legs)
    k = len(arms)
    if len(legs) != k:
        raise ValueError("arm and leg lists differ in length")
    for seq in (arms, legs):
        if any(a <= b for a, b in zip(seq, seq[1:])) or any(x < 0 for x in seq):
            raise ValueError("Frobenius coordinates must be strictly decreasing and >= 0")
    rows = [arms[i] + i + 1 for i in range(k)]
    # rows below the Durfee square come from the legs
    lt = [legs[i] + i + 1 for i in range(k)]
    n_rows = lt[0] if k else 0
    for r in range(k, n_rows):
        rows.append(sum(1 for j in range(k) if lt[j] > r))
    return make(rows)


def hook(m, n):
    """The hook partition (m|n) = (m+1, 1^n)."""
    return make((m + 1,) + (1,) * n)


def kappa(lam):
    """kappa = sum lam_i (lam_i - 2i + 1)."""
    return sum(p * (p - 2 * i + 1) for i, p in enumerate(lam, start=1))


def kappa_frobenius(lam):
    """Same value via sum (m+1/2)^2 - (n+1/2)^2, in integers."""
    arms, legs = frobenius_of(lam)
    four = sum((2 * m + 1) ** 2 for m in arms) - sum((2 * n + 1) ** 2 for n in legs)
    return four // 4


def contains(lam, mu):
    """mu is a subdiagram of lam."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


@lru_cache(maxsize=None)
def partitions_of(n, max_part=None):
    """Partitions of n in increasing lexicographic order: (1,..,1) ... (n)."""
    if max_part is None:
        max_part = n
    if n == 0:
        return (EMPTY,)
    out = []
    for first in range(1, min(n, max_part) + 1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_up_to(D):
    """All partitions of size <= D, graded by size then lexicographic."""
    out = []
    for n in range(int(D) + 1):
        out.extend(partitions_of(n))
    return out


def subpartitions(lam):
    """All mu contained in lam, graded then lexicographic."""
    out = []

    def rec(i, bound, acc):
        if i == len(lam):
            out.append(make(acc))
            return
        for p in range(0, min(bound, lam[i]) + 1):
            if p == 0:
                out.append(make(acc))
                continue
            rec(i + 1, p, acc + [p])

    rec(0, lam[0] if lam else 0, [])
    return sorted(set(out), key=lambda m: (size(m), m))


def to_text(lam):
    return ",".join(str(p) for p in lam)


def from_text(s):
    s = s.strip()
    if s in ("", "∅", "()"):
        return EMPTY
    s = s.strip("()")
    try:
        return make(int(x) for x in s.split(",") if x.strip() != "")
    except ValueError as exc:
        raise ValueError(f"malformed partition {s!r}: {exc}") from None


def frobenius_text(lam):
    arms, legs = frobenius_of(lam)
    return "(" + ",".join(map(str, arms)) + "|" + ",".join(map(str, legs)) + ")"


def count_partitions(n):
    """p(n) by Euler's pentagonal recurrence (independent of enumeration)."""
    p = [1] + [0] * n
    for k in range(1, n + 1):
        total, j = 0, 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > k:
                break
            sign = 1 if j % 2 else -1
            total += sign * p[k - g1]
            g2 = j * (3 * j + 1) // 2
            if g2 <= k:
                total += sign * p[k - g2]
            j += 1
        p[k] = total
    return p[n]
