"""Profiles, Social Welfare Functions and auditors for the Arrovian conditions.

Profiles over ``N`` individuals are handles into a :class:`ProfileSpace`, the
coordinatewise power of the extended preference lattice.  Handles use
mixed-radix order over the weak-order enumeration with the cycle as the last
digit, so handle order is lexicographic in the coordinates.

Individuals are numbered from 1, matching the usual ``p_1 .. p_N`` notation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ParseError, SizeError, UnknownKindError
from .lattice import (
    AlternativeSet,
    PreferenceLattice,
    PreferenceRelation,
    ProductLattice,
    digit_pairs,
    format_chain,
    join,
    join_plus,
    meet,
    negate,
    parse_chain,
)

BUILTIN_KINDS = ("majority", "projection", "constant", "borda")


@lru_cache(maxsize=None)
def preference_lattice(alts: AlternativeSet) -> PreferenceLattice:
    return PreferenceLattice(alts)


@dataclass(frozen=True)
class Profile:
    coords: tuple[PreferenceRelation, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if not self.coords:
            raise DimensionError("a profile needs at least one individual")
        alts = self.coords[0].alts
        if any(r.alts != alts for r in self.coords):
            raise DimensionError("profile coordinates use different alternative sets")

    @property
    def alts(self) -> AlternativeSet:
        return self.coords[0].alts

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def valid(self) -> bool:
        return not any(r.is_cycle for r in self.coords)

    def __getitem__(self, i: int) -> PreferenceRelation:
        """Coordinate of individual ``i`` (1-based)."""
        if not 1 <= i <= len(self.coords):
            raise IndexError(f"individual {i} outside 1..{len(self.coords)}")
        return self.coords[i - 1]

    def chains(self) -> list[str]:
        return [format_chain(r) for r in self.coords]

    def __str__(self):
        return "(" + ", ".join(self.chains()) + ")"


def parse_profile(chains: Sequence[str], alts: AlternativeSet | None = None) -> Profile:
    if isinstance(chains, str):
        try:
            chains = json.loads(chains)
        except json.JSONDecodeError as exc:
            raise ParseError(f"profile is not a JSON list: {exc.msg}", line=exc.lineno) from None
    if not isinstance(chains, list) or not chains:
        raise ParseError("profile must be a non-empty list of chains")
    if alts is None:
        alts = infer_alternatives(chains)
    return Profile(tuple(parse_chain(c, alts, line=k + 1) for k, c in enumerate(chains)))


def infer_alternatives(chains: Iterable[str]) -> AlternativeSet:
    """Alternatives named in the first non-cycle chain, sorted by label."""
    for c in chains:
        if c.strip() != "CYCLE":
            names = [t.strip() for t in c.replace("<", "~").split("~")]
            return AlternativeSet(tuple(sorted(names)))
    raise ParseError("cannot infer alternatives from a profile of cycles")


def profile_from_json(obj) -> Profile:
    """Read ``{"alternatives": [...], "profile": [...]}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    alts = AlternativeSet(tuple(obj["alternatives"])) if "alternatives" in obj else None
    return parse_profile(obj["profile"], alts)


def profile_to_json(p: Profile) -> dict:
    return {"alternatives": list(p.alts.names), "profile": p.chains()}


_OPS = {"meet": meet, "join": join, "join_plus": join_plus}


def coordinatewise(op: str, p: Profile, q: Profile | None = None) -> Profile:
    """Apply a lattice operation at every coordinate (``negate`` is unary)."""
    if op == "negate":
        return Profile(tuple(negate(r) for r in p.coords))
    if op not in _OPS:
        raise UnknownKindError(f"unknown coordinatewise op {op!r}")
    if q is None or p.n != q.n:
        raise DimensionError("profiles must have the same number of individuals")
    if p.alts != q.alts:
        raise DimensionError("profiles use different alternative sets")
    f = _OPS[op]
    return Profile(tuple(f(r, s) for r, s in zip(p.coords, q.coords)))


class ProfileSpace(ProductLattice):
    """All ``N``-individual profiles over the extended lattice, as integer handles."""

    def __init__(self, alts: AlternativeSet, n: int):
        self.alts = alts
        self.pref = preference_lattice(alts)
        super().__init__(self.pref, n)

    @property
    def N(self) -> int:
        return self.n

    @cached_property
    def valid_mask(self) -> np.ndarray:
        return (self.coords != self.pref.cycle).all(axis=1)

    @cached_property
    def valid_indices(self) -> np.ndarray:
        return np.flatnonzero(self.valid_mask)

    def index(self, p: Profile) -> int:
        if p.n != self.n:
            raise DimensionError(f"profile has {p.n} individuals, space has {self.n}")
        return self.compose([self.pref.index(r) for r in p.coords])

    def profile(self, x) -> Profile:
        return Profile(tuple(self.pref.element(c) for c in self.coords[int(x)]))

    def parse(self, chains) -> int:
        return self.index(parse_profile(chains, self.alts))

    def chains(self, x) -> list[str]:
        return [self.pref.label(c) for c in self.coords[int(x)]]

    def replace(self, x, j: int, value):
        """Handles with coordinate ``j`` (0-based) of ``x`` replaced by ``value``; broadcasts."""
        w = self.weights[j]
        x = np.asarray(x, dtype=np.int64)
        return x + (np.asarray(value, dtype=np.int64) - self.coords[x, j]) * w

    def single(self, j: int, value, fill=None):
        """Handle of the profile that is ``fill`` (default: cycle) except ``value`` at coordinate ``j``."""
        fill = self.pref.cycle if fill is None else fill
        base = self.compose([fill] * self.n)
        return base + (np.asarray(value, dtype=np.int64) - fill) * self.weights[j]

    def indicator(self, i: int) -> int:
        """``(c, ..., top, ..., c)`` with the top order at individual ``i``."""
        return int(self.single(i - 1, self.pref.top))


@lru_cache(maxsize=None)
def profile_space(alts: AlternativeSet, n: int) -> ProfileSpace:
    return ProfileSpace(alts, n)


class Swf:
    """A total map from every profile handle to a preference-lattice handle.

    ``digit_table`` holds the pre-collapse per-pair aggregate digit codes
    (0, 1, 2 for ``e``; -1 where undefined) used for exact IIA checks.
    """

    def __init__(self, space: ProfileSpace, kind: str, table, digit_table=None, name: str | None = None):
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (space.size,):
            raise DimensionError(f"table must cover all {space.size} profiles, got {table.shape}")
        if table.min() < 0 or table.max() >= space.pref.size:
            raise ValueError("table entries must be preference-lattice handles")
        self.space = space
        self.kind = kind
        self.table = table
        self.digit_table = None if digit_table is None else np.asarray(digit_table, dtype=np.int8)
        self.name = name or kind

    @property
    def pref(self) -> PreferenceLattice:
        return self.space.pref

    def __call__(self, p):
        if isinstance(p, Profile):
            return self.pref.element(self.table[self.space.index(p)])
        return self.table[p]

    def __repr__(self):
        return f"Swf({self.name}, m={self.space.alts.m}, N={self.space.n})"

    def to_json(self) -> dict:
        sp = self.space
        return {
            "kind": "table",
            "alternatives": list(sp.alts.names),
            "entries": [
                {"profile": sp.chains(x), "out": self.pref.label(self.table[x])}
                for x in range(sp.size)
            ],
        }


def _codes_to_output(pref: PreferenceLattice, codes: np.ndarray) -> np.ndarray:
    weights = 3 ** np.arange(codes.shape[1] - 1, -1, -1, dtype=np.int64)
    return pref.decode_table[(codes.astype(np.int64) * weights).sum(axis=1)]


def _compare_codes(lo_a, lo_b):
    """Digit code for a pair given scores where lower is better for ``a``."""
    return np.where(lo_a, 0, np.where(lo_b, 1, 2)).astype(np.int8)


def builtin_swf(kind: str, alts: AlternativeSet, n: int, i: int | None = None,
                r: PreferenceRelation | str | None = None) -> Swf:
    """Build a pairwise-majority, projection, constant or Borda rule.

    Profiles containing a cycle map to the cycle under majority and Borda;
    projection returns the projected coordinate verbatim.
    """
    space = profile_space(alts, n)
    pref = space.pref
    coords = space.coords
    has_cycle = ~space.valid_mask
    pairs = digit_pairs(alts.m)
    if kind == "majority":
        strict = pref.strict
        codes = np.empty((space.size, len(pairs)), dtype=np.int8)
        for k, (a, b) in enumerate(pairs):
            ab = strict[coords, a, b].sum(axis=1)
            ba = strict[coords, b, a].sum(axis=1)
            codes[:, k] = _compare_codes(ab > ba, ba > ab)
        table = _codes_to_output(pref, codes) if pairs else np.full(space.size, pref.top)
        table = np.where(has_cycle, pref.cycle, table)
        codes[has_cycle] = -1
        return Swf(space, "majority", table, codes, "majority")
    if kind == "borda":
        levels = np.zeros((pref.size, alts.m), dtype=np.int64)
        for x, o in enumerate(pref.orders):
            levels[x] = o.levels
        totals = levels[coords].sum(axis=1)
        codes = np.empty((space.size, len(pairs)), dtype=np.int8)
        for k, (a, b) in enumerate(pairs):
            codes[:, k] = _compare_codes(totals[:, a] < totals[:, b], totals[:, b] < totals[:, a])
        table = _codes_to_output(pref, codes) if pairs else np.full(space.size, pref.top)
        table = np.where(has_cycle, pref.cycle, table)
        codes[has_cycle] = -1
        return Swf(space, "borda", table, codes, "borda")
    if kind == "projection":
        if i is None or not 1 <= i <= n:
            raise ValueError(f"projection needs an individual 1..{n}")
        table = coords[:, i - 1]
        return Swf(space, "projection", table, pref.digit_codes[table], f"projection:{i}")
    if kind == "constant":
        if r is None:
            raise ValueError("constant rule needs an output relation")
        x = pref.parse(r) if isinstance(r, str) else pref.index(r)
        table = np.full(space.size, x)
        return Swf(space, "constant", table, pref.digit_codes[table], f"constant:{pref.label(x)}")
    raise UnknownKindError(f"unknown rule kind {kind!r}")


def table_swf(space: ProfileSpace, table, name: str = "table") -> Swf:
    return Swf(space, "table", table, None, name)


def swf_from_json(obj, n: int | None = None) -> Swf:
    """Load ``{"kind": "table", "entries": [...]}``; every profile must appear exactly once."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("kind") != "table":
        raise UnknownKindError(f"expected kind 'table', got {obj.get('kind')!r}")
    entries = obj.get("entries") or []
    if not entries:
        raise ParseError("table has no entries")
    alts = AlternativeSet(tuple(obj["alternatives"])) if "alternatives" in obj else infer_alternatives(
        c for e in entries for c in e["profile"])
    n = n or len(entries[0]["profile"])
    space = profile_space(alts, n)
    table = np.full(space.size, -1, dtype=np.int64)
    for line, e in enumerate(entries, start=1):
        try:
            x = space.index(parse_profile(e["profile"], alts))
            out = space.pref.parse(e["out"])
        except ParseError as exc:
            raise ParseError(f"entry {line}: {exc}", line=line) from None
        if table[x] != -1:
            raise ParseError("duplicate profile in table", token=str(e["profile"]), line=line)
        table[x] = out
    missing = np.flatnonzero(table < 0)
    if len(missing):
        raise ParseError(f"table is not total: {len(missing)} profiles missing, first {space.chains(missing[0])}")
    return table_swf(space, table, obj.get("name", "table"))


def parse_rule(spec: str, alts: AlternativeSet, n: int) -> Swf:
    """Rule selector: ``majority``, ``borda``, ``projection:i``, ``constant:<chain>`` or ``table:<path>``."""
    kind, _, arg = spec.partition(":")
    if kind == "projection":
        try:
            return builtin_swf("projection", alts, n, i=int(arg or 1))
        except ValueError as exc:
            raise ParseError(str(exc), token=spec) from None
    if kind == "constant":
        return builtin_swf("constant", alts, n, r=arg or "~".join(alts.names))
    if kind == "table":
        with open(arg) as fh:
            return swf_from_json(json.load(fh), n)
    if kind in ("majority", "borda"):
        return builtin_swf(kind, alts, n)
    raise UnknownKindError(f"unknown rule {spec!r}")


# -- auditors --------------------------------------------------------------

@dataclass
class Witness:
    prop: str
    profiles: list[int]
    pair: tuple[int, int] | None = None
    individual: int | None = None
    detail: str = ""
    order: int | None = None

    def to_json(self, space: ProfileSpace) -> dict:
        out = {"property": self.prop, "profiles": [space.chains(x) for x in self.profiles]}
        if self.pair is not None:
            out["pair"] = [space.alts.names[self.pair[0]], space.alts.names[self.pair[1]]]
        if self.individual is not None:
            out["individual"] = self.individual
        if self.order is not None:
            out["order"] = space.pref.label(self.order)
        if self.detail:
            out["detail"] = self.detail
        return out


def _individual(w: Swf, i: int) -> int:
    if not 1 <= i <= w.space.n:
        raise DimensionError(f"individual {i} outside 1..{w.space.n}")
    return i - 1


def dictator_identity(w: Swf, i: int) -> np.ndarray:
    """``w(p) + p_i == p_i`` for each valid profile, in handle order."""
    V = w.space.valid_indices
    pi = w.space.coords[V, _individual(w, i)]
    return w.pref.plus(w.table[V], pi) == pi


def dictator_clauses(w: Swf, i: int) -> np.ndarray:
    """The two-clause dictator definition evaluated per valid profile."""
    pref = w.pref
    V = w.space.valid_indices
    pi = w.space.coords[V, _individual(w, i)]
    out = w.table[V]
    clause1 = (out != pref.cycle) | (pi == pref.top)
    clause2 = (pi == pref.top) | pref.leq(out, pi)
    return clause1 & clause2


def has_dictator(w: Swf, i: int) -> bool:
    ok = dictator_identity(w, i)
    result = bool(ok.all())
    if __debug__:
        assert result == bool(dictator_clauses(w, i).all()), "dictator characterisations disagree"
    return result


def has_vetoer(w: Swf, i: int) -> bool:
    V = w.space.valid_indices
    pi = w.space.coords[V, _individual(w, i)]
    return bool((w.pref.meet(w.table[V], pi) == pi).all())


def dictators(w: Swf) -> list[int]:
    return [i for i in range(1, w.space.n + 1) if has_dictator(w, i)]


def vetoers(w: Swf) -> list[int]:
    return [i for i in range(1, w.space.n + 1) if has_vetoer(w, i)]


def _first_violation(w: Swf, ok: np.ndarray) -> int | None:
    bad = np.flatnonzero(~ok)
    return int(w.space.valid_indices[bad[0]]) if len(bad) else None


def dictator_witness(w: Swf, i: int) -> Witness | None:
    x = _first_violation(w, dictator_identity(w, i))
    if x is None:
        return None
    return Witness("non-dictator", [x], individual=i, detail=f"w(p) = {w.pref.label(w.table[x])}")


def satisfies_unanimity(w: Swf) -> tuple[bool, Witness | None]:
    space, pref = w.space, w.pref
    V = space.valid_indices
    coords = space.coords[V]
    out = w.table[V]
    m = space.alts.m
    first = None
    for a in range(m):
        for b in range(m):
            if a == b:
                continue
            unanimous = pref.strict[coords, a, b].all(axis=1)
            bad = unanimous & ~pref.strict[out, a, b]
            if bad.any():
                x = int(V[np.argmax(bad)])
                if first is None or x < first.profiles[0]:
                    first = Witness("unanimity", [x], pair=(a, b), detail=f"w(p) = {pref.label(w.table[x])}")
    return first is None, first


@dataclass
class IiaResult:
    holds: bool
    partial: bool
    witness: Witness | None = None


def satisfies_iia(w: Swf) -> IiaResult:
    """Pairwise independence on valid profiles.

    Uses the rule's pre-collapse digits when present.  Otherwise only profile
    pairs whose outcomes are both orders are compared and the result is
    marked partial.
    """
    space, pref = w.space, w.pref
    V = space.valid_indices
    coords = space.coords[V]
    pairs = digit_pairs(space.alts.m)
    weights = 3 ** np.arange(space.n - 1, -1, -1, dtype=np.int64)
    partial = w.digit_table is None
    for k, (a, b) in enumerate(pairs):
        agg = (pref.digit_codes[w.table[V], k] if w.digit_table is None else w.digit_table[V, k]).astype(np.int64)
        defined = agg >= 0
        if not defined.all():
            partial = True
        key = (pref.digit_codes[coords, k].astype(np.int64) * weights).sum(axis=1)
        rows = np.flatnonzero(defined)
        order = rows[np.lexsort((rows, agg[rows], key[rows]))]
        same = key[order[:-1]] == key[order[1:]]
        differ = agg[order[:-1]] != agg[order[1:]]
        hit = np.flatnonzero(same & differ)
        if len(hit):
            x, y = int(V[order[hit[0]]]), int(V[order[hit[0] + 1]])
            return IiaResult(False, partial, Witness(
                "iia", [x, y], pair=(a, b),
                detail=f"outcomes {pref.label(w.table[x])} vs {pref.label(w.table[y])}"))
    return IiaResult(True, partial)


@dataclass
class DomainResult:
    literal: bool
    never_cycles: bool
    cycle_witness: int | None = None
    missing_order: int | None = None


def unrestricted_domain(w: Swf) -> DomainResult:
    """``literal``: the image of valid profiles is exactly the set of weak orders."""
    pref = w.pref
    out = w.table[w.space.valid_indices]
    image = set(np.unique(out).tolist())
    cyc = np.flatnonzero(out == pref.cycle)
    missing = [x for x in range(pref.n_orders) if x not in image]
    return DomainResult(
        literal=not cyc.size and not missing,
        never_cycles=not cyc.size,
        cycle_witness=int(w.space.valid_indices[cyc[0]]) if cyc.size else None,
        missing_order=missing[0] if missing else None,
    )


def consistency_rows(space: ProfileSpace, xs, ys) -> np.ndarray:
    """``out[a, b]``: profiles ``xs[a]`` and ``ys[b]`` meet to a valid profile."""
    ok = space.pref.meet_table != space.pref.cycle
    cx = space.coords[np.asarray(xs)]
    cy = space.coords[np.asarray(ys)]
    out = np.ones((len(cx), len(cy)), dtype=bool)
    for j in range(space.n):
        out &= ok[cx[:, j][:, None], cy[:, j][None, :]]
    return out


def find_condorcet_witnesses(w: Swf) -> tuple[int, int] | None:
    """First pair of valid profiles both mapped to the cycle that meet to an invalid profile."""
    V = w.space.valid_indices
    C = V[w.table[V] == w.pref.cycle]
    if not len(C):
        return None
    cons = consistency_rows(w.space, C, C)
    bad = np.argwhere(~cons)
    if not len(bad):
        return None
    a, b = bad[0]
    return int(C[a]), int(C[b])


# -- audit report ----------------------------------------------------------

GLYPHS = {"yes": "✓", "no": "✗", "prec": "≺", "ind": "∼"}
ASCII_GLYPHS = {"yes": "yes", "no": "no", "prec": "<", "ind": "~"}


def glyphs(ascii_only: bool = False) -> dict:
    return ASCII_GLYPHS if ascii_only else GLYPHS


@dataclass
class AuditReport:
    rule: str
    m: int
    N: int
    unanimity: bool
    iia: bool
    iia_partial: bool
    unrestricted_domain: bool
    never_cycles: bool
    dictator_at: int | None
    vetoer_at: list[int]
    witnesses: dict[str, list[Witness]] = field(default_factory=dict)
    space: ProfileSpace | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "m": self.m,
            "N": self.N,
            "unanimity": self.unanimity,
            "iia": self.iia,
            "iia_partial": self.iia_partial,
            "unrestricted_domain": self.unrestricted_domain,
            "never_cycles": self.never_cycles,
            "dictator_at": self.dictator_at,
            "vetoer_at": self.vetoer_at,
            "witnesses": {k: [w.to_json(self.space) for w in v] for k, v in self.witnesses.items()},
        }

    def to_text(self, ascii_only: bool = False) -> str:
        g = glyphs(ascii_only)
        mark = lambda b: g["yes"] if b else g["no"]
        rows = [
            ("unanimity", mark(self.unanimity)),
            ("IIA" + (" (partial)" if self.iia_partial else ""), mark(self.iia)),
            ("unrestricted domain (im = P)", mark(self.unrestricted_domain)),
            ("never cycles (im within P)", mark(self.never_cycles)),
            ("dictator", "none" if self.dictator_at is None else str(self.dictator_at)),
            ("vetoers", ", ".join(map(str, self.vetoer_at)) or "none"),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"audit of {self.rule} (m={self.m}, N={self.N})"]
        lines += [f"  {k.ljust(width)}  {v}" for k, v in rows]
        for key in sorted(self.witnesses):
            for wit in self.witnesses[key]:
                js = wit.to_json(self.space)
                prof = " | ".join("(" + ", ".join(p) + ")" for p in js["profiles"])
                extra = []
                if "pair" in js:
                    extra.append(f"pair {js['pair'][0]},{js['pair'][1]}")
                if "individual" in js:
                    extra.append(f"individual {js['individual']}")
                if "order" in js:
                    extra.append(f"order {js['order']} not attained")
                if "detail" in js:
                    extra.append(js["detail"])
                txt = f"  witness[{key}]: {prof}".rstrip()
                if extra:
                    txt += "  " + "; ".join(extra)
                if ascii_only:
                    txt = txt.replace("∼", "~").replace("≺", "<")
                lines.append(txt)
        return "\n".join(lines)


def audit(w: Swf) -> AuditReport:
    unan, unan_w = satisfies_unanimity(w)
    iia = satisfies_iia(w)
    dom = unrestricted_domain(w)
    dicts = dictators(w)
    witnesses: dict[str, list[Witness]] = {}
    if unan_w:
        witnesses["unanimity"] = [unan_w]
    if iia.witness:
        witnesses["iia"] = [iia.witness]
    if not dom.never_cycles:
        witnesses["never_cycles"] = [Witness("cycle", [dom.cycle_witness], detail="w(p) = CYCLE")]
    if not dom.literal:
        if dom.cycle_witness is not None:
            witnesses["unrestricted_domain"] = [Witness("cycle", [dom.cycle_witness], detail="w(p) = CYCLE")]
        else:
            witnesses["unrestricted_domain"] = [Witness("missing-order", [], order=dom.missing_order)]
    if not dicts:
        witnesses["non_dictatorship"] = [dictator_witness(w, i) for i in range(1, w.space.n + 1)]
    return AuditReport(
        rule=w.name, m=w.space.alts.m, N=w.space.n,
        unanimity=unan, iia=iia.holds, iia_partial=iia.partial,
        unrestricted_domain=dom.literal, never_cycles=dom.never_cycles,
        dictator_at=dicts[0] if dicts else None, vetoer_at=vetoers(w),
        witnesses=witnesses, space=w.space,
    )


def replay(w: Swf, wit: Witness) -> bool:
    """Re-evaluate a stored witness; true when the violation it records reproduces."""
    space, pref = w.space, w.pref
    if wit.prop == "unanimity":
        (x,), (a, b) = wit.profiles, wit.pair
        unanimous = all(pref.strict[c, a, b] for c in space.coords[x])
        return bool(unanimous and not pref.strict[w.table[x], a, b])
    if wit.prop == "iia":
        (x, y), (a, b) = wit.profiles, wit.pair
        k = digit_pairs(space.alts.m).index((a, b))
        same = (pref.digit_codes[space.coords[x], k] == pref.digit_codes[space.coords[y], k]).all()
        if w.digit_table is not None:
            dx, dy = w.digit_table[x, k], w.digit_table[y, k]
        else:
            dx, dy = pref.digit_codes[w.table[x], k], pref.digit_codes[w.table[y], k]
        return bool(same and dx >= 0 and dy >= 0 and dx != dy)
    if wit.prop == "cycle":
        (x,) = wit.profiles
        return bool(space.valid_mask[x] and w.table[x] == pref.cycle)
    if wit.prop == "missing-order":
        return bool(wit.order not in set(w.table[space.valid_indices].tolist()))
    if wit.prop == "non-dictator":
        (x,) = wit.profiles
        pi = space.coords[x, wit.individual - 1]
        return bool(space.valid_mask[x] and pref.plus(w.table[x], pi) != pi)
    raise ValueError(f"unknown witness kind {wit.prop!r}")


def check_size(m: int, n: int, allow_large: bool = False) -> None:
    if not allow_large and (m > 4 or n > 4):
        raise SizeError(f"m={m}, N={n} exceeds the m<=4, N<=4 guard; pass allow_large to override")
