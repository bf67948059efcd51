"""Weak orders, the collapsed contradictory cycle, and the extended preference lattice.

A weak order over ``m`` alternatives is stored as a normalized level vector:
``levels[a] < levels[b]`` means ``a`` is strictly preferred to ``b`` and equal
levels mean indifference.  The set of used levels is always ``{0, ..., k-1}``.
Every intransitive aggregate is represented by the single value ``Cycle``,
which sits at the bottom of the strictness order.

Two layers live here:

* value-level operations (:func:`leq`, :func:`meet`, :func:`join`,
  :func:`join_plus`, :func:`negate`) computed on pair relations, and
* integer-handle lattices (:class:`PreferenceLattice`, :class:`BooleanAlgebra`,
  :class:`ProductLattice`) whose operations are numpy-vectorised table lookups,
  used by the exhaustive checkers.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, EmptyAlternativesError, NoDigitsError, ParseError, SizeError

DIGITS = ("0", "1", "e")
_DIGIT_CODE = {"0": 0, "1": 1, "e": 2, 0: 0, 1: 1}

CYCLE_TOKEN = "CYCLE"


@dataclass(frozen=True)
class AlternativeSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate alternative labels in {names}")
        for n in names:
            if not n or any(ch in n for ch in "<~ ") or n == CYCLE_TOKEN:
                raise ValueError(f"invalid alternative label {n!r}")

    @classmethod
    def default(cls, m: int) -> "AlternativeSet":
        """Alternatives labelled ``a, b, c, ...``."""
        if m < 1:
            raise EmptyAlternativesError("need at least one alternative")
        if m > 26:
            raise SizeError("at most 26 default labels")
        return cls(tuple(chr(ord("a") + k) for k in range(m)))

    @property
    def m(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError("unknown alternative label", token=name) from None

    def __len__(self):
        return self.m

    def __iter__(self):
        return iter(self.names)


def _dense_rank(values: Sequence[int]) -> tuple[int, ...]:
    used = sorted(set(values))
    rank = {v: k for k, v in enumerate(used)}
    return tuple(rank[v] for v in values)


@dataclass(frozen=True)
class WeakOrder:
    alts: AlternativeSet
    levels: tuple[int, ...]

    def __post_init__(self):
        levels = tuple(int(v) for v in self.levels)
        if len(levels) != self.alts.m:
            raise DimensionError(f"{len(levels)} levels for {self.alts.m} alternatives")
        if any(v < 0 for v in levels):
            raise ValueError("levels must be non-negative")
        object.__setattr__(self, "levels", _dense_rank(levels))

    is_cycle = False

    @property
    def is_top(self) -> bool:
        return all(v == 0 for v in self.levels)

    def strict_pairs(self) -> frozenset[tuple[int, int]]:
        lv = self.levels
        m = len(lv)
        return frozenset((a, b) for a in range(m) for b in range(m) if lv[a] < lv[b])

    def weak_pairs(self) -> frozenset[tuple[int, int]]:
        """The ``a ⪯ b`` relation as a set of index pairs (reflexive)."""
        lv = self.levels
        m = len(lv)
        return frozenset((a, b) for a in range(m) for b in range(m) if lv[a] <= lv[b])

    def prefers(self, a: int, b: int) -> bool:
        return self.levels[a] < self.levels[b]

    def __str__(self):
        return format_chain(self)


@dataclass(frozen=True)
class Cycle:
    """The single collapsed contradictory preference cycle over ``alts``."""

    alts: AlternativeSet
    is_cycle = True
    is_top = False

    def __str__(self):
        return CYCLE_TOKEN


PreferenceRelation = Union[WeakOrder, Cycle]


def top(alts: AlternativeSet) -> WeakOrder:
    """The all-indifferent order."""
    return WeakOrder(alts, (0,) * alts.m)


def _same_alts(r: PreferenceRelation, s: PreferenceRelation) -> AlternativeSet:
    if r.alts != s.alts:
        raise DimensionError(f"alternative sets differ: {r.alts.names} vs {s.alts.names}")
    return r.alts


def _order_from_relation(alts: AlternativeSet, rel: set[tuple[int, int]]) -> WeakOrder:
    # rel must be a complete preorder; rank by the number of strictly better alternatives
    m = alts.m
    better = [sum(1 for b in range(m) if (b, a) in rel and (a, b) not in rel) for a in range(m)]
    return WeakOrder(alts, better)


def _is_complete(rel, m: int) -> bool:
    return all((a, b) in rel or (b, a) in rel for a in range(m) for b in range(a + 1, m))


def _is_transitive(rel, m: int) -> bool:
    for a, b in rel:
        for c in range(m):
            if (b, c) in rel and (a, c) not in rel:
                return False
    return True


def _transitive_closure(rel, m: int) -> set[tuple[int, int]]:
    reach = [[(a, b) in rel for b in range(m)] for a in range(m)]
    for k in range(m):
        for a in range(m):
            if reach[a][k]:
                row_k = reach[k]
                row_a = reach[a]
                for b in range(m):
                    if row_k[b]:
                        row_a[b] = True
    return {(a, b) for a in range(m) for b in range(m) if reach[a][b]}


def leq(r: PreferenceRelation, s: PreferenceRelation) -> bool:
    """Strictness order: ``r <= s`` when ``r`` has every strict preference of ``s``."""
    _same_alts(r, s)
    if r.is_cycle:
        return True
    if s.is_cycle:
        return False
    return s.strict_pairs() <= r.strict_pairs()


def meet(r: PreferenceRelation, s: PreferenceRelation) -> PreferenceRelation:
    alts = _same_alts(r, s)
    if r.is_cycle or s.is_cycle:
        return Cycle(alts)
    rel = r.weak_pairs() & s.weak_pairs()
    if not _is_complete(rel, alts.m):
        return Cycle(alts)
    assert _is_transitive(rel, alts.m)
    return _order_from_relation(alts, set(rel))


def join(r: PreferenceRelation, s: PreferenceRelation) -> PreferenceRelation:
    _same_alts(r, s)
    if r.is_cycle:
        return s
    if s.is_cycle:
        return r
    rel = _transitive_closure(r.weak_pairs() | s.weak_pairs(), r.alts.m)
    return _order_from_relation(r.alts, rel)


def join_plus(r: PreferenceRelation, s: PreferenceRelation) -> PreferenceRelation:
    """``r + s``: the ordinary join on orders, the top order whenever a cycle is involved."""
    alts = _same_alts(r, s)
    if r.is_cycle or s.is_cycle:
        return top(alts)
    return join(r, s)


def negate(r: PreferenceRelation) -> PreferenceRelation:
    if r.is_cycle:
        return top(r.alts)
    if r.is_top:
        return Cycle(r.alts)
    hi = max(r.levels)
    return WeakOrder(r.alts, tuple(hi - v for v in r.levels))


def enumerate_weak_orders(alts: AlternativeSet) -> list[WeakOrder]:
    """Every weak order over ``alts`` once, lexicographic on level vectors."""
    m = alts.m
    if m == 0:
        raise EmptyAlternativesError("cannot enumerate weak orders over zero alternatives")
    out = []
    for levels in itertools.product(range(m), repeat=m):
        used = set(levels)
        if used == set(range(len(used))):
            out.append(WeakOrder(alts, levels))
    return out


# -- ternary digits ---------------------------------------------------------

def digit_pairs(m: int) -> list[tuple[int, int]]:
    """Pair order used by ternary digit tuples.

    Pairs are taken around the cycle of alternatives by increasing gap: for
    ``a, b, c`` this is ``(a, b), (b, c), (c, a)``.
    """
    pairs = []
    for gap in range(1, m // 2 + 1):
        starts = range(m // 2) if 2 * gap == m else range(m)
        for i in starts:
            pairs.append((i, (i + gap) % m))
    return pairs


def digits_encode(r: PreferenceRelation) -> tuple[str, ...]:
    if r.is_cycle:
        raise NoDigitsError("the collapsed cycle has no unique digit tuple")
    lv = r.levels
    out = []
    for a, b in digit_pairs(r.alts.m):
        out.append("0" if lv[a] < lv[b] else "1" if lv[b] < lv[a] else "e")
    return tuple(out)


def digits_decode(digits: Iterable, alts: AlternativeSet) -> PreferenceRelation:
    digits = tuple(digits)
    pairs = digit_pairs(alts.m)
    if len(digits) != len(pairs):
        raise DimensionError(f"expected {len(pairs)} digits for m={alts.m}, got {len(digits)}")
    rel = {(a, a) for a in range(alts.m)}
    for (a, b), d in zip(pairs, digits):
        code = _DIGIT_CODE.get(d if not isinstance(d, str) else d.lower())
        if code is None:
            raise ParseError("digit must be one of 0, 1, e", token=d)
        if code in (0, 2):
            rel.add((a, b))
        if code in (1, 2):
            rel.add((b, a))
    if not _is_transitive(rel, alts.m):
        return Cycle(alts)
    return _order_from_relation(alts, rel)


# -- chain notation ---------------------------------------------------------

def format_chain(r: PreferenceRelation) -> str:
    if r.is_cycle:
        return CYCLE_TOKEN
    groups: dict[int, list[str]] = {}
    for name, lv in zip(r.alts.names, r.levels):
        groups.setdefault(lv, []).append(name)
    return "<".join("~".join(groups[k]) for k in sorted(groups))


def parse_chain(text: str, alts: AlternativeSet, line: int | None = None) -> PreferenceRelation:
    """Parse ``a<b~c`` or ``CYCLE``; every alternative must appear exactly once."""
    text = text.strip()
    if text == CYCLE_TOKEN:
        return Cycle(alts)
    if not text:
        raise ParseError("empty preference chain", line=line)
    levels: dict[str, int] = {}
    for lv, group in enumerate(text.split("<")):
        for raw in group.split("~"):
            name = raw.strip()
            if not name:
                raise ParseError("empty label in chain", token=text, line=line)
            if name not in alts.names:
                raise ParseError("unknown alternative label", token=name, line=line)
            if name in levels:
                raise ParseError("duplicate alternative label", token=name, line=line)
            levels[name] = lv
    missing = [n for n in alts.names if n not in levels]
    if missing:
        raise ParseError("chain does not rank every alternative", token=",".join(missing), line=line)
    return WeakOrder(alts, tuple(levels[n] for n in alts.names))


def relation_to_json(r: PreferenceRelation) -> dict:
    return {"order": format_chain(r)}


def relation_from_json(obj: dict | str, alts: AlternativeSet) -> PreferenceRelation:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "order" not in obj:
        raise ParseError("expected an object with key 'order'")
    return parse_chain(obj["order"], alts)


# -- integer-handle lattices -------------------------------------------------

class OrthoLattice:
    """A finite orthocomplemented lattice over handles ``0 .. size-1``.

    The operations accept Python ints or numpy integer arrays and broadcast.
    """

    size: int
    bot: int
    top: int

    def meet(self, x, y):
        raise NotImplementedError

    def join(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def leq(self, x, y):
        return self.meet(x, y) == x

    def elements(self) -> np.ndarray:
        return np.arange(self.size)

    def label(self, x) -> str:
        return str(int(x))


class TableLattice(OrthoLattice):
    def __init__(self, labels, meet_table, join_table, neg_table, bot, top):
        self.labels = list(labels)
        self.size = len(self.labels)
        self.meet_table = np.asarray(meet_table, dtype=np.int64)
        self.join_table = np.asarray(join_table, dtype=np.int64)
        self.neg_table = np.asarray(neg_table, dtype=np.int64)
        self.bot = int(bot)
        self.top = int(top)
        for t in (self.meet_table, self.join_table):
            if t.shape != (self.size, self.size):
                raise DimensionError("binary tables must be size x size")
        if self.neg_table.shape != (self.size,):
            raise DimensionError("negation table must have one entry per element")

    def meet(self, x, y):
        return self.meet_table[x, y]

    def join(self, x, y):
        return self.join_table[x, y]

    def neg(self, x):
        return self.neg_table[x]

    def label(self, x) -> str:
        return self.labels[int(x)]


class PreferenceLattice(TableLattice):
    """The extended lattice of weak orders plus the cycle, as integer handles.

    Handles ``0 .. k-1`` are the weak orders in enumeration order and handle
    ``k`` is the cycle.  Tables are filled from the value-level operations.
    """

    def __init__(self, alts: AlternativeSet):
        self.alts = alts
        orders = enumerate_weak_orders(alts)
        self.orders: list[WeakOrder] = orders
        self.relations: list[PreferenceRelation] = [*orders, Cycle(alts)]
        self._index = {r: k for k, r in enumerate(self.relations)}
        n = len(self.relations)
        self.n_orders = len(orders)
        self.cycle = n - 1
        rel = self.relations
        mt = np.empty((n, n), dtype=np.int64)
        jt = np.empty((n, n), dtype=np.int64)
        pt = np.empty((n, n), dtype=np.int64)
        lt = np.empty((n, n), dtype=bool)
        for x in range(n):
            for y in range(n):
                mt[x, y] = self._index[meet(rel[x], rel[y])]
                jt[x, y] = self._index[join(rel[x], rel[y])]
                pt[x, y] = self._index[join_plus(rel[x], rel[y])]
                lt[x, y] = leq(rel[x], rel[y])
        nt = np.array([self._index[negate(r)] for r in rel], dtype=np.int64)
        super().__init__([format_chain(r) for r in rel], mt, jt, nt, self.cycle, self._index[top(alts)])
        self.plus_table = pt
        self.leq_table = lt

    def index(self, r: PreferenceRelation) -> int:
        if r.alts != self.alts:
            raise DimensionError("relation over a different alternative set")
        return self._index[r]

    def element(self, x) -> PreferenceRelation:
        return self.relations[int(x)]

    def parse(self, text: str) -> int:
        return self.index(parse_chain(text, self.alts))

    def plus(self, x, y):
        return self.plus_table[x, y]

    def leq(self, x, y):
        return self.leq_table[x, y]

    @cached_property
    def strict(self) -> np.ndarray:
        """``strict[x, a, b]`` is true when element ``x`` is an order with ``a`` before ``b``."""
        m = self.alts.m
        out = np.zeros((len(self.relations), m, m), dtype=bool)
        for x, r in enumerate(self.orders):
            for a, b in r.strict_pairs():
                out[x, a, b] = True
        return out

    @cached_property
    def digit_codes(self) -> np.ndarray:
        """Digit codes (0, 1, 2 for ``e``) per element and pair; -1 for the cycle."""
        pairs = digit_pairs(self.alts.m)
        out = np.full((len(self.relations), len(pairs)), -1, dtype=np.int8)
        for x, r in enumerate(self.orders):
            out[x] = [_DIGIT_CODE[d] for d in digits_encode(r)]
        return out

    @cached_property
    def decode_table(self) -> np.ndarray:
        """Element handle for every digit-code tuple, indexed in base 3 (first pair most significant)."""
        pairs = digit_pairs(self.alts.m)
        out = np.empty(3 ** len(pairs), dtype=np.int64)
        for k, codes in enumerate(itertools.product(range(3), repeat=len(pairs))):
            out[k] = self._index[digits_decode([DIGITS[c] for c in codes], self.alts)]
        return out


class BooleanAlgebra(OrthoLattice):
    """Truth functions of ``k`` atoms as bitmasks over the ``2**k`` valuations."""

    def __init__(self, k: int):
        if not 1 <= k <= 4:
            raise SizeError("boolean algebra supports 1..4 atoms")
        self.k = k
        self.rows = 2 ** k
        self.size = 2 ** self.rows
        self.mask = self.size - 1
        self.bot = 0
        self.top = self.mask

    def atom(self, j: int) -> int:
        """The truth function of the ``j``-th atom."""
        return sum(1 << row for row in range(self.rows) if row >> j & 1)

    def meet(self, x, y):
        return np.bitwise_and(x, y)

    def join(self, x, y):
        return np.bitwise_or(x, y)

    def neg(self, x):
        return np.bitwise_xor(x, self.mask)

    def label(self, x) -> str:
        return format(int(x), f"0{self.rows}b")


def boolean_algebra(k: int) -> BooleanAlgebra:
    return BooleanAlgebra(k)


class ProductLattice(OrthoLattice):
    """``factor ** n`` with coordinatewise operations; coordinate 0 is most significant."""

    MAX_SIZE = 2_000_000

    def __init__(self, factor: TableLattice, n: int):
        if n < 1:
            raise SizeError("product needs at least one coordinate")
        self.factor = factor
        self.n = n
        self.radix = factor.size
        self.size = self.radix ** n
        if self.size > self.MAX_SIZE:
            raise SizeError(f"product carrier of {self.size} elements exceeds {self.MAX_SIZE}")
        self.weights = np.array([self.radix ** (n - 1 - j) for j in range(n)], dtype=np.int64)
        self.bot = self.compose([factor.bot] * n)
        self.top = self.compose([factor.top] * n)

    @cached_property
    def coords(self) -> np.ndarray:
        """``coords[x, j]``: factor handle at coordinate ``j`` of product handle ``x``."""
        idx = np.arange(self.size, dtype=np.int64)
        return (idx[:, None] // self.weights[None, :]) % self.radix

    def compose(self, coords) -> int:
        return int(np.dot(np.asarray(coords, dtype=np.int64), self.weights))

    def _lift(self, table, x, y):
        cx = self.coords[x]
        cy = self.coords[y]
        return (table[cx, cy] * self.weights).sum(axis=-1)

    def meet(self, x, y):
        return self._lift(self.factor.meet_table, x, y)

    def join(self, x, y):
        return self._lift(self.factor.join_table, x, y)

    def neg(self, x):
        return (self.factor.neg_table[self.coords[x]] * self.weights).sum(axis=-1)

    def leq(self, x, y):
        cx = self.coords[x]
        cy = self.coords[y]
        return (self.factor.meet_table[cx, cy] == cx).all(axis=-1)

    def label(self, x) -> str:
        return "(" + ", ".join(self.factor.label(c) for c in self.coords[int(x)]) + ")"


# -- law checks ------------------------------------------------------------

@dataclass
class LemmaReport:
    passed: bool
    checked: int
    counterexample: tuple[int, int] | None = None
    labels: tuple[str, str] | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": list(self.labels) if self.labels else None,
            "detail": self.detail,
        }


def classical_lemma_holds(L: OrthoLattice, a, b):
    """``a ∧ b = ⊥`` iff ``a ≤ ¬b``, elementwise."""
    return (L.meet(a, b) == L.bot) == L.leq(a, L.neg(b))


def check_classical_lemma(L: OrthoLattice) -> LemmaReport:
    """Check ``A ∧ B = ⊥ ⟺ A ≤ ¬B`` over every pair of the carrier."""
    elems = L.elements()
    for a in range(L.size):
        ok = classical_lemma_holds(L, np.full_like(elems, a), elems)
        if not ok.all():
            b = int(np.argmin(ok))
            lhs = bool(L.meet(a, b) == L.bot)
            return LemmaReport(
                False, a * L.size + b + 1, (a, b), (L.label(a), L.label(b)),
                f"meet is bottom: {lhs}; a <= neg(b): {not lhs}",
            )
    return LemmaReport(True, L.size * L.size)


def check_lattice_laws(L: OrthoLattice, triples: bool = True) -> list[str]:
    """Exhaustively check lattice and orthocomplement laws; return failure descriptions."""
    fails = []
    e = L.elements()
    x, y = np.meshgrid(e, e, indexing="ij")
    mxy, jxy = L.meet(x, y), L.join(x, y)
    checks = {
        "meet commutative": mxy == L.meet(y, x),
        "join commutative": jxy == L.join(y, x),
        "absorption meet/join": L.meet(x, jxy) == x,
        "absorption join/meet": L.join(x, mxy) == x,
        "leq iff meet": L.leq(x, y) == (mxy == x),
        "leq iff join": L.leq(x, y) == (jxy == y),
        "negation order-reversing": ~L.leq(x, y) | L.leq(L.neg(y), L.neg(x)),
    }
    checks["meet idempotent"] = L.meet(e, e) == e
    checks["join idempotent"] = L.join(e, e) == e
    checks["complement meet"] = L.meet(e, L.neg(e)) == L.bot
    checks["complement join"] = L.join(e, L.neg(e)) == L.top
    checks["involution"] = L.neg(L.neg(e)) == e
    checks["bottom least"] = L.leq(L.bot, e)
    checks["top greatest"] = L.leq(e, L.top)
    if triples:
        for a in range(L.size):
            ok_m = L.meet(L.meet(a, x), y) == L.meet(a, L.meet(x, y))
            ok_j = L.join(L.join(a, x), y) == L.join(a, L.join(x, y))
            if not ok_m.all():
                fails.append(f"meet associativity fails at first element {L.label(a)}")
                break
            if not ok_j.all():
                fails.append(f"join associativity fails at first element {L.label(a)}")
                break
    for name, ok in checks.items():
        if not np.all(ok):
            fails.append(name)
    return fails


def bruteforce_bounds(L: PreferenceLattice) -> tuple[np.ndarray, np.ndarray]:
    """glb/lub tables computed only from the strictness order, by enumeration."""
    n = L.size
    le = L.leq_table
    glb = np.full((n, n), -1, dtype=np.int64)
    lub = np.full((n, n), -1, dtype=np.int64)
    for x in range(n):
        for y in range(n):
            lower = [z for z in range(n) if le[z, x] and le[z, y]]
            upper = [z for z in range(n) if le[x, z] and le[y, z]]
            greatest = [z for z in lower if all(le[u, z] for u in lower)]
            least = [z for z in upper if all(le[z, u] for u in upper)]
            if len(greatest) == 1:
                glb[x, y] = greatest[0]
            if len(least) == 1:
                lub[x, y] = least[0]
    return glb, lub


def oracle_equivalence(L: PreferenceLattice) -> list[str]:
    glb, lub = bruteforce_bounds(L)
    fails = []
    bad = np.argwhere(glb != L.meet_table)
    if len(bad):
        x, y = bad[0]
        fails.append(f"meet({L.label(x)}, {L.label(y)}) differs from enumerated glb")
    bad = np.argwhere(lub != L.join_table)
    if len(bad):
        x, y = bad[0]
        fails.append(f"join({L.label(x)}, {L.label(y)}) differs from enumerated lub")
    return fails
