"""Reference implementations written from the definitions, independent of arrowlab.

Orders are frozensets of weak pairs ``(a, b)`` meaning ``a ⪯ b`` over
alternative indices; the collapsed cycle is ``None``.
"""

from __future__ import annotations

import itertools
from math import comb, factorial


def fubini(m: int) -> int:
    """Ordered set partitions of an m-set: sum over k of k! * S(m, k)."""
    def stirling(n, k):
        return sum((-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1)) // factorial(k)
    return sum(factorial(k) * stirling(m, k) for k in range(m + 1)) if m else 1


def _offdiag(m):
    return [(a, b) for a in range(m) for b in range(m) if a != b]


def complete(rel, m) -> bool:
    return all((a, b) in rel or (b, a) in rel for a, b in _offdiag(m))


def transitive(rel, m) -> bool:
    return all((a, c) in rel for a, b in rel for b2, c in rel if b == b2 and a != c)


def weak_orders(m: int) -> list[frozenset]:
    """Every complete transitive relation, found by brute force over relation subsets."""
    pairs = _offdiag(m)
    out = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = frozenset(p for p, keep in zip(pairs, bits) if keep)
        if complete(rel, m) and transitive(rel, m):
            out.append(rel)
    return out


def strict(rel) -> frozenset:
    return frozenset((a, b) for a, b in rel if (b, a) not in rel)


def leq(r, s) -> bool:
    if r is None:
        return True
    if s is None:
        return False
    return strict(s) <= strict(r)


def carrier(m: int) -> list:
    return weak_orders(m) + [None]


def glb(r, s, elems):
    lower = [z for z in elems if leq(z, r) and leq(z, s)]
    best = [z for z in lower if all(leq(u, z) for u in lower)]
    assert len(best) == 1
    return best[0]


def lub(r, s, elems):
    upper = [z for z in elems if leq(r, z) and leq(s, z)]
    best = [z for z in upper if all(leq(z, u) for u in upper)]
    assert len(best) == 1
    return best[0]


def negate(r, m):
    if r is None:
        return frozenset(_offdiag(m))
    if r == frozenset(_offdiag(m)):
        return None
    return frozenset((b, a) for a, b in r)


def chain(r, names) -> str:
    if r is None:
        return "CYCLE"
    m = len(names)
    level = {a: sum((b, a) in strict(r) for b in range(m)) for a in range(m)}
    groups = {}
    for a in range(m):
        groups.setdefault(level[a], []).append(names[a])
    return "<".join("~".join(g) for _, g in sorted(groups.items()))


def from_chain(text: str, names) -> frozenset | None:
    if text == "CYCLE":
        return None
    idx = {n: k for k, n in enumerate(names)}
    levels = {}
    for lv, group in enumerate(text.split("<")):
        for n in group.split("~"):
            levels[idx[n]] = lv
    m = len(names)
    return frozenset((a, b) for a, b in _offdiag(m) if levels[a] <= levels[b])


def majority(profile, m):
    """Aggregate by strict-preference counts; ties give indifference; intransitive gives None."""
    if any(r is None for r in profile):
        return None
    rel = set()
    for a, b in _offdiag(m):
        ab = sum((a, b) in strict(r) for r in profile)
        ba = sum((b, a) in strict(r) for r in profile)
        if ab >= ba:
            rel.add((a, b))
    rel = frozenset(rel)
    return rel if transitive(rel, m) else None


def borda(profile, m):
    if any(r is None for r in profile):
        return None
    total = [0] * m
    for r in profile:
        lv = {a: sum((b, a) in strict(r) for b in range(m)) for a in range(m)}
        ranks = sorted(set(lv.values()))
        for a in range(m):
            total[a] += ranks.index(lv[a])
    return frozenset((a, b) for a, b in _offdiag(m) if total[a] <= total[b])


def join(r, s, m):
    if r is None:
        return s
    if s is None:
        return r
    rel = set(r) | set(s)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for b2, c in list(rel):
                if b == b2 and a != c and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    return frozenset(rel)


def plus(r, s, m):
    if r is None or s is None:
        return frozenset(_offdiag(m))
    return join(r, s, m)


def dictator_by_clauses(outputs, profiles, i, m) -> bool:
    """Two-clause definition: cycle outcome only if i is indifferent; else w(p) ≤ p_i."""
    top = frozenset(_offdiag(m))
    for out, p in zip(outputs, profiles):
        pi = p[i]
        if out is None and pi != top:
            return False
        if pi != top and not leq(out, pi):
            return False
    return True


def dictator_by_identity(outputs, profiles, i, m) -> bool:
    return all(plus(out, p[i], m) == p[i] for out, p in zip(outputs, profiles))
