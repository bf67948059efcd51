"""Valid elements, consistency-respecting expressions and quasi-Gödelian systems.

Also hosts the theorem verifiers that tie these notions to the social-choice
systems, and the reproduction of the overlap table contrasting
non-dictatorial and dictatorial rules.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from .errors import SizeError, StructureError, UnknownKindError
from .lattice import AlternativeSet, OrthoLattice
from .social_choice import (
    ProfileSpace,
    Swf,
    check_size,
    consistency_rows,
    dictators,
    find_condorcet_witnesses,
    glyphs,
    has_dictator,
    has_vetoer,
    parse_rule,
    satisfies_iia,
    satisfies_unanimity,
    unrestricted_domain,
)
from .srs import Srs
from .srs_instances import Family, make_srs

THEOREMS = ("arrow-full", "arrow-main", "strong-dictator", "condorcet-abstract",
            "dictator-abstract", "dictator-abstract-2")


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ARROWLAB_WORKERS", "1")))
    except ValueError:
        return 1


class ValidSubset:
    """A subset of a meet-semilattice excluding its bottom element."""

    def __init__(self, host: OrthoLattice, members):
        self.host = host
        members = np.asarray(members)
        if members.dtype == bool:
            mask = members.copy()
        else:
            mask = np.zeros(host.size, dtype=bool)
            mask[members] = True
        if mask.shape != (host.size,):
            raise ValueError("membership mask must cover the host carrier")
        if mask[host.bot]:
            raise ValueError("the bottom element cannot be valid")
        self.mask = mask

    @cached_property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def pairwise(self, xs, ys) -> np.ndarray:
        """``out[a, b]``: ``meet(xs[a], ys[b])`` is a member."""
        xs, ys = np.asarray(xs), np.asarray(ys)
        if isinstance(self.host, ProfileSpace) and (self.mask == self.host.valid_mask).all():
            return consistency_rows(self.host, xs, ys)
        return self.mask[self.host.meet(xs[:, None], ys[None, :])]

    @cached_property
    def member_matrix(self) -> np.ndarray:
        return self.pairwise(self.indices, self.indices)


def valid_profiles(space: ProfileSpace) -> ValidSubset:
    return ValidSubset(space, space.valid_mask)


def consistent(D: ValidSubset, s, t):
    """``s ∧ t`` lies in the valid subset; broadcasts over handle arrays."""
    out = D.mask[D.host.meet(s, t)]
    return bool(out) if np.ndim(out) == 0 else out


@dataclass
class RespectResult:
    holds: bool
    witness: tuple[int, int] | None = None
    members_consistent: bool | None = None


def is_consistency_respecting(S: Srs, ups: int, D: ValidSubset) -> RespectResult:
    """``d ⋈ d'`` iff ``Υ*d ⋈ Υ*d'`` for every pair of members; first violation on failure."""
    M = D.indices
    if not len(M):
        return RespectResult(True)
    images = S.star(np.full_like(M, ups), M)
    uniq, inv = np.unique(images, return_inverse=True)
    img_cons = D.pairwise(uniq, uniq)
    base = D.member_matrix
    step = max(1, 1_000_000 // len(M))
    for lo in range(0, len(M), step):
        rows = slice(lo, lo + step)
        bad = base[rows] != img_cons[inv[rows]][:, inv]
        if bad.any():
            a, b = np.argwhere(bad)[0]
            return RespectResult(False, (int(M[lo + a]), int(M[b])), bool(base[lo + a, b]))
    return RespectResult(True)


@dataclass
class QuasiFlags:
    quasi_consistent: bool
    quasi_godel_sentence: bool
    quasi_complete: bool

    @property
    def both(self) -> bool:
        return self.quasi_consistent and self.quasi_complete


def _lattice(S: Srs) -> OrthoLattice:
    if S.lattice is None:
        raise StructureError("quasi conditions need an orthocomplemented expression lattice")
    return S.lattice


def quasi_arrays(S: Srs, ups: int, ds, D: ValidSubset):
    """Vectorised quasi-consistency, quasi-Gödel-sentence and quasi-completeness flags."""
    L = _lattice(S)
    ds = np.asarray(ds)
    u = np.full_like(ds, ups)
    not_star_d = L.neg(S.star(u, ds))
    not_star_nd = L.neg(S.star(u, L.neg(ds)))
    qc = L.leq(ds, not_star_nd)
    qg = L.leq(ds, not_star_d)
    qcomp = ~D.mask[L.meet(not_star_d, not_star_nd)]
    return np.asarray(qc), np.asarray(qg), np.asarray(qcomp)


def quasi_flags(S: Srs, ups: int, d: int, D: ValidSubset) -> QuasiFlags:
    if d not in D:
        raise ValueError("d must be a valid element")
    qc, qg, qcomp = quasi_arrays(S, ups, np.array([d]), D)
    return QuasiFlags(bool(qc[0]), bool(qg[0]), bool(qcomp[0]))


def is_quasi_godelian(S: Srs, ups: int, D: ValidSubset) -> tuple[bool, int | None]:
    """Some member is a quasi-Gödel sentence whose quasi-consistency and quasi-completeness do not both hold."""
    M = D.indices
    if not len(M):
        return False, None
    qc, qg, qcomp = quasi_arrays(S, ups, M, D)
    hit = np.flatnonzero(qg & ~(qc & qcomp))
    return (True, int(M[hit[0]])) if len(hit) else (False, None)


# -- theorem verifiers -----------------------------------------------------

@dataclass
class TheoremConfig:
    m: int = 3
    N: int = 3
    rule: str = "majority"
    i: int = 1
    mode: str = "fast"
    families: tuple[str, ...] = ("omega_i", "^i", "+i")
    seed: int = 0
    app_table: np.ndarray | None = None
    allow_large: bool = False

    def to_json(self) -> dict:
        out = asdict(self)
        out["families"] = list(self.families)
        out["app_table"] = None if self.app_table is None else "user-supplied"
        return out


@dataclass
class TheoremReport:
    theorem: str
    config: dict
    status: str
    witnesses: list[dict] = field(default_factory=list)
    cells: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "config": self.config, "pass": self.passed,
                "status": self.status, "witnesses": self.witnesses, "cells": self.cells,
                "notes": self.notes}

    def to_text(self, ascii_only: bool = False) -> str:
        lines = [f"{self.theorem}: {self.status.upper()}"]
        lines += [f"  note: {n}" for n in self.notes]
        for c in self.cells:
            lines.append("  " + ", ".join(f"{k}={v}" for k, v in c.items()))
        for w in self.witnesses:
            lines.append("  witness: " + ", ".join(f"{k}={v}" for k, v in w.items()))
        text = "\n".join(lines)
        if ascii_only:
            text = text.replace("∼", "~").replace("≺", "<").replace("Υ", "U")
        return text


def _preconditions(w: Swf, i: int, want_dictator: bool | None, want_domain: bool = False) -> dict:
    out = {"unanimity": satisfies_unanimity(w)[0], "iia": satisfies_iia(w).holds}
    if want_dictator is True:
        out[f"dictator_at_{i}"] = has_dictator(w, i)
    elif want_dictator is False:
        out["non_dictatorship"] = not dictators(w)
    if want_domain:
        out["unrestricted_domain"] = unrestricted_domain(w).literal
    return out


def _profile_dict(space: ProfileSpace, x: int, w: Swf | None = None) -> dict:
    out = {"profile": space.chains(x)}
    if w is not None:
        out["image"] = w.pref.label(w.table[x])
    return out


def _rule(cfg: TheoremConfig) -> Swf:
    check_size(cfg.m, cfg.N, cfg.allow_large)
    return parse_rule(cfg.rule, AlternativeSet.default(cfg.m), cfg.N)


def _verify_arrow_full(cfg: TheoremConfig, rep: TheoremReport) -> None:
    w = _rule(cfg)
    pre = _preconditions(w, cfg.i, want_dictator=False)
    rep.cells.append({"preconditions": pre})
    pair = find_condorcet_witnesses(w)
    if pair is not None:
        q, q2 = pair
        sp = w.space
        bad = [j + 1 for j in range(sp.n) if w.pref.meet(sp.coords[q, j], sp.coords[q2, j]) == w.pref.cycle]
        rep.witnesses += [_profile_dict(sp, q, w), _profile_dict(sp, q2, w) | {"inconsistent_at": bad}]
        rep.status = "pass"
        if not all(pre.values()):
            rep.notes.append("preconditions not all met; witnesses exist regardless")
    elif all(pre.values()):
        rep.status = "fail"
    else:
        rep.status = "not-applicable"
        rep.notes.append("preconditions fail and no witness pair exists")


def random_app_table(n_expr: int, n_const: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).integers(0, n_expr, size=(n_expr, n_const))


def replay_arrow_main(S: Srs, q: int, q2: int, D: ValidSubset) -> tuple[bool, list[dict]]:
    """Mechanically replay the impossibility argument on a witness pair for every Υ.

    Both witnesses encode to the same constant, so ``Υ*q == Υ*q'`` for any
    application table.  Consistency-respect would then force ``q ⋈ q`` to fail,
    contradicting validity, so one of the pairs ``(q, q')`` or ``(q, q)`` must
    be a violation for every Υ.
    """
    assert not consistent(D, q, q2) and consistent(D, q, q)
    E = np.arange(S.n_expr)
    a = S.star(E, np.full_like(E, q))
    b = S.star(E, np.full_like(E, q2))
    same = bool((a == b).all())
    img_cons = D.mask[D.host.meet(a, b)]
    # (q, q') violates when the images are consistent; otherwise (q, q) does
    violated_by = np.where(img_cons, 1, 0)
    q_self = D.mask[D.host.meet(a, a)]
    ok = same & np.where(img_cons, True, ~q_self)
    samples = []
    for ups in E[:3]:
        pair = (q, q2) if img_cons[ups] else (q, q)
        samples.append({"upsilon": S.label(ups), "violating_pair": [S.label(x) for x in pair]})
    return bool(same and ok.all() and violated_by.size == S.n_expr), samples


def _verify_arrow_main(cfg: TheoremConfig, rep: TheoremReport) -> None:
    w = _rule(cfg)
    sp = w.space
    D = valid_profiles(sp)
    pre = _preconditions(w, cfg.i, want_dictator=False)
    rep.cells.append({"preconditions": pre})
    if cfg.mode == "fast":
        pair = find_condorcet_witnesses(w)
        if pair is None:
            rep.status = "not-applicable"
            rep.notes.append("no Condorcet witness pair to replay")
            return
        q, q2 = pair
        app = cfg.app_table if cfg.app_table is not None else random_app_table(sp.size, sp.pref.size, cfg.seed)
        S = Srs(w.table, app, lattice=sp, name="user-app")
        ok, samples = replay_arrow_main(S, q, q2, D)
        rep.witnesses += [_profile_dict(sp, q, w), _profile_dict(sp, q2, w)]
        rep.witnesses += samples
        cross = range(S.n_expr) if S.n_expr <= 256 else range(0, S.n_expr, max(1, S.n_expr // 64))
        respecting = [u for u in cross if is_consistency_respecting(S, u, D).holds]
        rep.cells.append({"replayed_upsilons": S.n_expr, "cross_checked": len(cross),
                          "respecting_found": len(respecting)})
        rep.status = "pass" if ok and not respecting else "fail"
        return
    if cfg.mode != "slow":
        raise UnknownKindError(f"unknown mode {cfg.mode!r}")
    if cfg.N > 2 and not cfg.allow_large:
        raise SizeError("slow mode above N=2 needs allow_large")
    if cfg.N > 2:
        warnings.warn("exhaustive Υ enumeration above N=2 is expensive", RuntimeWarning, stacklevel=3)
    all_ok = True
    for fam in cfg.families:
        S = make_srs(w, fam, cfg.i)
        cands = list(range(sp.size))

        def check(u, S=S):
            return u, is_consistency_respecting(S, u, D).holds

        workers = worker_count()
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(check, cands))
        else:
            results = [check(u) for u in cands]
        found = [u for u, holds in results if holds]
        rep.cells.append({"family": fam, "candidates": len(cands), "respecting": len(found)})
        if found:
            all_ok = False
            rep.witnesses.append({"family": fam, "respecting_upsilon": sp.chains(found[0])})
    rep.status = "pass" if all_ok else "fail"
    if not all(pre.values()):
        rep.notes.append("preconditions not all met")


def _verify_strong_dictator(cfg: TheoremConfig, rep: TheoremReport) -> None:
    w = _rule(cfg)
    i = cfg.i
    pre = {f"dictator_at_{i}": has_dictator(w, i), f"vetoer_at_{i}": has_vetoer(w, i)}
    rep.cells.append({"preconditions": pre})
    if not all(pre.values()):
        rep.status = "not-applicable"
        return
    S = make_srs(w, Family.MEET, i)
    D = valid_profiles(w.space)
    res = is_consistency_respecting(S, w.space.top, D)
    rep.cells.append({"upsilon": w.space.chains(w.space.top), "pairs_checked": len(D.indices) ** 2,
                      "respecting": res.holds})
    if res.witness:
        rep.witnesses += [_profile_dict(w.space, x) for x in res.witness]
    rep.status = "pass" if res.holds else "fail"


def _verify_condorcet_abstract(cfg: TheoremConfig, rep: TheoremReport) -> None:
    w = _rule(cfg)
    sp, i = w.space, cfg.i
    pre = _preconditions(w, i, want_dictator=False)
    rep.cells.append({"preconditions": pre})
    S = make_srs(w, Family.OMEGA, i)
    D = valid_profiles(sp)
    ups = sp.indicator(i)
    yes, d = is_quasi_godelian(S, ups, D)
    V = sp.valid_indices
    Q = V[w.table[V] == sp.pref.cycle]
    structure_ok = True
    if len(Q):
        qc, qg, qcomp = quasi_arrays(S, ups, Q, D)
        top_image = (sp.neg(S.star(np.full_like(Q, ups), Q)) == sp.top).all()
        structure_ok = bool(top_image and qg.all() and (qcomp == ~qc).all())
        rep.cells.append({"cycle_profiles": int(len(Q)), "negated_image_is_top": bool(top_image),
                          "godel_sentences": int(qg.sum()), "exclusive": bool((qcomp == ~qc).all())})
    if yes:
        f = quasi_flags(S, ups, d, D)
        rep.witnesses.append(_profile_dict(sp, d, w) | asdict(f))
    if yes and structure_ok:
        rep.status = "pass"
    elif all(pre.values()):
        rep.status = "fail"
    else:
        rep.status = "not-applicable"


def _verify_dictator_abstract(cfg: TheoremConfig, rep: TheoremReport) -> None:
    w = _rule(cfg)
    sp, i = w.space, cfg.i
    pre = _preconditions(w, i, want_dictator=True, want_domain=True)
    rep.cells.append({"preconditions": pre})
    S = make_srs(w, Family.OMEGA, i)
    D = valid_profiles(sp)
    _, qg, _ = quasi_arrays(S, sp.indicator(i), D.indices, D)
    yes, d = is_quasi_godelian(S, sp.indicator(i), D)
    rep.cells.append({"valid_profiles": int(len(D.indices)), "godel_sentences": int(qg.sum()),
                      "quasi_godelian": yes})
    if qg.any():
        rep.witnesses.append(_profile_dict(sp, int(D.indices[np.argmax(qg)]), w))
    if not all(pre.values()):
        rep.status = "not-applicable"
    else:
        rep.status = "pass" if not yes and not qg.any() else "fail"


def neutrality_mask(w: Swf) -> np.ndarray:
    """Per valid profile: ``w(¬p) == ¬w(p)``."""
    sp = w.space
    V = sp.valid_indices
    return w.table[sp.neg(V)] == w.pref.neg(w.table[V])


def _verify_dictator_abstract_2(cfg: TheoremConfig, rep: TheoremReport) -> None:
    w = _rule(cfg)
    sp, i = w.space, cfg.i
    pre = _preconditions(w, i, want_dictator=True)
    rep.cells.append({"preconditions": pre})
    if not all(pre.values()):
        rep.status = "not-applicable"
        return
    S = make_srs(w, Family.OMEGA, i)
    D = valid_profiles(sp)
    V = sp.valid_indices
    hyp = (sp.coords[V, i - 1] != sp.pref.top) & neutrality_mask(w)
    P = V[hyp]
    qc, _, qcomp = quasi_arrays(S, sp.indicator(i), P, D)
    both = qc & qcomp
    rep.cells.append({"hypothesis_profiles": int(len(P)), "both_hold": int(both.sum())})
    if len(P):
        rep.witnesses.append(_profile_dict(sp, int(P[0]), w))
    bad = P[~both]
    if len(bad):
        rep.witnesses.append(_profile_dict(sp, int(bad[0]), w) | {"violates": True})
    rep.status = "pass" if len(P) and both.all() else "fail"


_VERIFIERS = {
    "arrow-full": _verify_arrow_full,
    "arrow-main": _verify_arrow_main,
    "strong-dictator": _verify_strong_dictator,
    "condorcet-abstract": _verify_condorcet_abstract,
    "dictator-abstract": _verify_dictator_abstract,
    "dictator-abstract-2": _verify_dictator_abstract_2,
}


def verify_theorem(theorem_id: str, config: TheoremConfig | None = None) -> TheoremReport:
    if theorem_id not in _VERIFIERS:
        raise UnknownKindError(f"unknown theorem id {theorem_id!r}; choose from {', '.join(THEOREMS)}")
    cfg = config or TheoremConfig()
    rep = TheoremReport(theorem_id, cfg.to_json(), "fail")
    _VERIFIERS[theorem_id](cfg, rep)
    return rep


# -- overlap table ---------------------------------------------------------

@dataclass
class Table2Report:
    i: int
    nodict_rule: str
    dict_rule: str
    preconditions: dict
    cells: list[dict] = field(default_factory=list)
    witness: dict | None = None

    @property
    def failed_preconditions(self) -> list[str]:
        return [f"{col}: {k}" for col, pre in self.preconditions.items() for k, v in pre.items() if not v]

    @property
    def ok(self) -> bool:
        return not self.failed_preconditions and all(c["verified"] for c in self.cells)

    def cell(self, row: str, column: str) -> dict:
        return next(c for c in self.cells if c["row"] == row and c["column"] == column)

    def to_json(self) -> dict:
        return {"i": self.i, "no_dictator_rule": self.nodict_rule, "dictator_rule": self.dict_rule,
                "preconditions": self.preconditions, "failed_preconditions": self.failed_preconditions,
                "pass": self.ok, "cells": self.cells, "satisfying_profile": self.witness}

    def to_text(self, ascii_only: bool = False) -> str:
        if self.failed_preconditions:
            return "precondition failure:\n" + "\n".join(f"  {f}" for f in self.failed_preconditions)
        g = glyphs(ascii_only)
        sym = {"always": g["yes"], "never": g["no"], "satisfiable": "Satisfiable"}
        ups = "U" if ascii_only else "Υ"
        header = ["Setting", "No Dictator", f"Unrestricted Domain + Dictator at {self.i}"]
        pairs = ["Expression Pair", f"({ups}_{self.i}, q) for w(q) = c", f"({ups}_{self.i}, p) for p in P^N"]
        body = [header, pairs]
        for row, title in (("godel", "Quasi-Godel Sentence" if ascii_only else "Quasi-Gödel Sentence"),
                           ("both", "Quasi-consistency & Quasi-completeness" if ascii_only
                            else "Quasi-consistency ∧ Quasi-completeness")):
            vals = []
            for col in ("no_dictator", "dictator"):
                c = self.cell(row, col)
                vals.append(sym[c["claim"]] if c["verified"] else "FAIL")
            body.append([title, *vals])
        widths = [max(len(r[k]) for r in body) for k in range(3)]
        rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
        lines = [rule]
        for n, r in enumerate(body):
            lines.append("| " + " | ".join(v.ljust(w) for v, w in zip(r, widths)) + " |")
            if n in (0, 1, 3):
                lines.append(rule)
        counts = [f"  {c['row']}/{c['column']}: {c['satisfied']}/{c['total']} profiles" for c in self.cells]
        if self.witness:
            counts.append("  satisfying p: (" + ", ".join(self.witness["profile"]) + ")")
        return "\n".join(lines + counts)


def table_overlap_report(w_nodict: Swf, w_dict: Swf, i: int) -> Table2Report:
    pre_n = _preconditions(w_nodict, i, want_dictator=False)
    pre_n = {"unanimity": pre_n["unanimity"], "iia": pre_n["iia"], f"no_dictator_at_{i}": not has_dictator(w_nodict, i)}
    pre_d = _preconditions(w_dict, i, want_dictator=True, want_domain=True)
    neutral = neutrality_mask(w_dict)
    pre_d["neutrality w(¬p) = ¬w(p)"] = bool(neutral.all())
    rep = Table2Report(i, w_nodict.name, w_dict.name, {"no_dictator": pre_n, "dictator": pre_d})
    if rep.failed_preconditions:
        return rep

    def cell(row, col, claim, mask):
        total, sat = int(mask.size), int(mask.sum())
        verified = {"always": sat == total, "never": sat == 0, "satisfiable": sat > 0}[claim]
        return {"row": row, "column": col, "claim": claim, "verified": bool(verified),
                "satisfied": sat, "total": total}

    sp = w_nodict.space
    S = make_srs(w_nodict, Family.OMEGA, i)
    D = valid_profiles(sp)
    V = sp.valid_indices
    Q = V[w_nodict.table[V] == sp.pref.cycle]
    qc, qg, qcomp = quasi_arrays(S, sp.indicator(i), Q, D)
    rep.cells.append(cell("godel", "no_dictator", "always", qg) | {"nonempty": bool(len(Q))})
    rep.cells.append(cell("both", "no_dictator", "never", qc & qcomp))
    if not len(Q):
        rep.cells[0]["verified"] = False

    sp2 = w_dict.space
    S2 = make_srs(w_dict, Family.OMEGA, i)
    D2 = valid_profiles(sp2)
    V2 = sp2.valid_indices
    qc2, qg2, qcomp2 = quasi_arrays(S2, sp2.indicator(i), V2, D2)
    both2 = qc2 & qcomp2
    rep.cells.append(cell("godel", "dictator", "never", qg2))
    rep.cells.append(cell("both", "dictator", "satisfiable", both2))
    choice = both2 & (sp2.coords[V2, i - 1] != sp2.pref.top)
    if choice.any():
        x = int(V2[np.argmax(choice)])
        rep.witness = _profile_dict(sp2, x, w_dict) | asdict(quasi_flags(S2, sp2.indicator(i), x, D2))
    else:
        rep.cells[-1]["verified"] = False
    return rep
