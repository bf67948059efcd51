"""Finite Self-Reference Systems over integer handles.

A system has expressions ``0 .. n_expr-1`` and constants ``0 .. n_const-1``,
an encoding table ``enc[e]`` and an application table ``app[e, c]``.  The
star operation is ``star(e, f) = app(e, enc(f))``.  Embeddable systems add an
embedding ``emb[c]`` and an associative composition on expressions such that
``app(e, c) = comp(e, emb(c))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, ParseError, SizeError
from .lattice import OrthoLattice, ProductLattice

TRIPLE_BUDGET = 200_000_000


class Srs:
    def __init__(self, enc, app, expr_labels=None, const_labels=None,
                 lattice: OrthoLattice | None = None, name: str = "srs"):
        self.enc = np.asarray(enc, dtype=np.int64)
        self.app = np.asarray(app, dtype=np.int64)
        if self.app.ndim != 2 or self.app.shape[0] != self.enc.shape[0]:
            raise DimensionError("app must be an n_expr x n_const table matching enc")
        self.n_expr, self.n_const = self.app.shape
        if self.enc.size and (self.enc.min() < 0 or self.enc.max() >= self.n_const):
            raise DimensionError("enc maps outside the constants")
        if self.app.size and (self.app.min() < 0 or self.app.max() >= self.n_expr):
            raise DimensionError("app maps outside the expressions")
        self.expr_labels = expr_labels
        self.const_labels = const_labels
        self.lattice = lattice
        self.name = name

    def _check(self, e):
        arr = np.asarray(e)
        if arr.size and (arr.min() < 0 or arr.max() >= self.n_expr):
            raise IndexError(f"expression outside the carrier 0..{self.n_expr - 1}")

    def star(self, e, f):
        self._check(e)
        self._check(f)
        return self.app[e, self.enc[f]]

    @cached_property
    def star_table(self) -> np.ndarray:
        if self.n_expr ** 2 > 50_000_000:
            raise SizeError("star table too large to materialise")
        return self.app[:, self.enc]

    def label(self, e) -> str:
        if self.expr_labels is not None:
            return self.expr_labels(int(e)) if callable(self.expr_labels) else str(self.expr_labels[int(e)])
        if self.lattice is not None:
            return self.lattice.label(e)
        return str(int(e))


class TableOp:
    """A binary operation on expressions given as a dense table."""

    def __init__(self, table):
        self.table = np.asarray(table, dtype=np.int64)
        n = self.table.shape[0]
        if self.table.shape != (n, n):
            raise DimensionError("composition table must be square")
        self.n = n

    def __call__(self, x, y):
        return self.table[x, y]

    def associativity_counterexample(self) -> tuple[int, int, int] | None:
        t = self.table
        if self.n ** 3 > TRIPLE_BUDGET:
            raise SizeError(f"associativity check over {self.n}^3 triples exceeds budget")
        for a in range(self.n):
            bad = t[t[a], :] != t[a][t]
            if bad.any():
                b, c = np.argwhere(bad)[0]
                return a, int(b), int(c)
        return None


class CoordinatewiseOp:
    """A factor operation applied at every coordinate of a product carrier.

    Associativity reduces exactly to associativity of the factor table, so the
    check runs on the factor and lifts any counterexample to constant profiles.
    """

    def __init__(self, space: ProductLattice, factor_table):
        self.space = space
        self.factor = TableOp(factor_table)
        if self.factor.n != space.radix:
            raise DimensionError("factor table does not match the product radix")
        self.n = space.size

    def __call__(self, x, y):
        cx = self.space.coords[x]
        cy = self.space.coords[y]
        return (self.factor.table[cx, cy] * self.space.weights).sum(axis=-1)

    @cached_property
    def table(self) -> np.ndarray:
        if self.n ** 2 > 50_000_000:
            raise SizeError("composition table too large to materialise")
        e = np.arange(self.n)
        return self(e[:, None], e[None, :])

    def associativity_counterexample(self):
        hit = self.factor.associativity_counterexample()
        if hit is None:
            return None
        return tuple(self.space.compose([v] * self.space.n) for v in hit)


def as_op(comp):
    if isinstance(comp, (TableOp, CoordinatewiseOp)):
        return comp
    return TableOp(comp)


class EmbeddableSrs:
    def __init__(self, base: Srs, emb, comp):
        self.base = base
        self.emb = np.asarray(emb, dtype=np.int64)
        if self.emb.shape != (base.n_const,):
            raise DimensionError("emb needs one expression per constant")
        if self.emb.size and (self.emb.min() < 0 or self.emb.max() >= base.n_expr):
            raise DimensionError("emb maps outside the expressions")
        self.comp = as_op(comp)
        if self.comp.n != base.n_expr:
            raise DimensionError("composition must act on the expression carrier")

    @property
    def n_expr(self) -> int:
        return self.base.n_expr

    def star(self, e, f):
        return self.base.star(e, f)

    def dobar(self, e):
        return self.emb[self.base.enc[e]]

    def diag(self, e):
        return self.dobar(self.base.star(e, e))

    def label(self, e) -> str:
        return self.base.label(e)


def star(S, e, f):
    return S.star(e, f)


def diag(ES: EmbeddableSrs, e):
    return ES.diag(e)


def find_fixed_points(S, e: int, domain=None) -> list[int]:
    """Every ``f`` (in carrier order, restricted to ``domain``) with ``star(e, f) == f``."""
    dom = np.arange(S.n_expr) if domain is None else np.asarray(domain, dtype=np.int64)
    return dom[S.star(np.full_like(dom, e), dom) == dom].tolist()


@dataclass
class EmbeddingCheck:
    ok: bool
    associative: bool
    equation: bool
    assoc_counterexample: tuple | None = None
    equation_counterexample: tuple | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "associative": self.associative,
            "equation": self.equation,
            "assoc_counterexample": list(self.assoc_counterexample) if self.assoc_counterexample else None,
            "equation_counterexample": list(self.equation_counterexample) if self.equation_counterexample else None,
        }


def check_embeddable(S: Srs, emb, comp) -> EmbeddingCheck:
    """Exhaustively check composition associativity and ``app(e, c) == comp(e, emb(c))``."""
    emb = np.asarray(emb, dtype=np.int64)
    comp = as_op(comp)
    assoc = comp.associativity_counterexample()
    eq_bad = None
    for e in range(S.n_expr):
        bad = S.app[e] != comp(np.full_like(emb, e), emb)
        if bad.any():
            eq_bad = (e, int(np.argmax(bad)))
            break
    return EmbeddingCheck(assoc is None and eq_bad is None, assoc is None, eq_bad is None, assoc, eq_bad)


def is_diagonaliser(ES: EmbeddableSrs, f: int, domain=None) -> bool:
    dom = np.arange(ES.n_expr) if domain is None else np.asarray(domain, dtype=np.int64)
    return bool((ES.star(np.full_like(dom, f), dom) == ES.diag(dom)).all())


def find_diagonaliser(ES: EmbeddableSrs, domain=None) -> int | None:
    """First expression ``f`` with ``star(f, e) == diag(e)`` for every ``e`` in ``domain``."""
    dom = np.arange(ES.n_expr) if domain is None else np.asarray(domain, dtype=np.int64)
    target = ES.diag(dom)
    cols = ES.base.enc[dom]
    step = max(1, 2_000_000 // max(1, len(dom)))
    for lo in range(0, ES.n_expr, step):
        rows = ES.base.app[lo:lo + step][:, cols]
        ok = (rows == target[None, :]).all(axis=1)
        if ok.any():
            return lo + int(np.argmax(ok))
    return None


@dataclass
class AdlReport:
    status: str
    f_diag: int | None = None
    fixed_points: dict[int, int] = field(default_factory=dict)
    failures: list[int] = field(default_factory=list)
    helper_star: bool | None = None
    helper_assoc: bool | None = None
    helper_counterexamples: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "f_diag": self.f_diag,
            "fixed_points": {str(d): f for d, f in self.fixed_points.items()},
            "failures": self.failures,
            "helper_star": self.helper_star,
            "helper_assoc": self.helper_assoc,
            "helper_counterexamples": {k: list(v) for k, v in self.helper_counterexamples.items()},
        }


def verify_adl(ES: EmbeddableSrs) -> AdlReport:
    """Replay the diagonalisation construction for every expression.

    For each ``d``: ``e = comp(d, f_diag)``, ``f = e * e`` and then
    ``d * f == f`` must hold.  Also checks ``f * g == comp(f, dobar(g))`` on all
    pairs and ``comp(f, g) * h == comp(f, g * h)`` on all triples.
    """
    f_diag = find_diagonaliser(ES)
    if f_diag is None:
        return AdlReport("not-applicable")
    n = ES.n_expr
    if n ** 3 > TRIPLE_BUDGET:
        raise SizeError(f"ADL triple check over {n}^3 expressions exceeds budget")
    E = np.arange(n)
    rep = AdlReport("pass", f_diag=int(f_diag))
    e = ES.comp(E, np.full_like(E, f_diag))
    f = ES.star(e, e)
    ok = ES.star(E, f) == f
    rep.fixed_points = {int(d): int(x) for d, x in zip(E, f)}
    rep.failures = E[~ok].tolist()

    st = ES.base.star_table
    helper1 = st == ES.comp(E[:, None], ES.dobar(E)[None, :])
    rep.helper_star = bool(helper1.all())
    if not rep.helper_star:
        rep.helper_counterexamples["star"] = tuple(int(v) for v in np.argwhere(~helper1)[0])
    rep.helper_assoc = True
    comp_t = ES.comp(E[:, None], E[None, :])
    for a in range(n):
        lhs = st[comp_t[a]]                # lhs[g, h] = comp(a, g) * h
        rhs = comp_t[a][st]                # rhs[g, h] = comp(a, g * h)
        if not (lhs == rhs).all():
            g, h = np.argwhere(lhs != rhs)[0]
            rep.helper_assoc = False
            rep.helper_counterexamples["assoc"] = (a, int(g), int(h))
            break
    if rep.failures or not rep.helper_star or not rep.helper_assoc:
        rep.status = "fail"
    return rep


# -- JSON descriptors -------------------------------------------------------

def _table(obj, key, shape):
    arr = np.asarray(obj[key], dtype=np.int64)
    if arr.shape != shape:
        raise ParseError(f"{key} has shape {arr.shape}, expected {shape}", token=key)
    return arr


def load_system(obj) -> Srs | EmbeddableSrs:
    """Read ``{"n_expr", "n_const", "enc", "app", optional "emb", "comp"}``.

    ``app`` may be omitted for embeddable systems and is then derived from
    ``comp`` and ``emb``.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        n_e, n_c = int(obj["n_expr"]), int(obj["n_const"])
        enc = _table(obj, "enc", (n_e,))
        emb = _table(obj, "emb", (n_c,)) if "emb" in obj else None
        comp = _table(obj, "comp", (n_e, n_e)) if "comp" in obj else None
    except KeyError as exc:
        raise ParseError("missing key in system descriptor", token=exc.args[0]) from None
    if "app" in obj:
        app = _table(obj, "app", (n_e, n_c))
    elif emb is not None and comp is not None:
        app = comp[:, emb]
    else:
        raise ParseError("system needs app, or emb and comp", token="app")
    for name, arr, hi in (("enc", enc, n_c), ("app", app, n_e), ("emb", emb, n_e), ("comp", comp, n_e)):
        if arr is not None and arr.size and (arr.min() < 0 or arr.max() >= hi):
            raise ParseError(f"{name} has entries outside 0..{hi - 1}", token=name)
    S = Srs(enc, app, expr_labels=obj.get("expr_labels"), const_labels=obj.get("const_labels"),
            name=obj.get("name", "srs"))
    if emb is None or comp is None:
        return S
    return EmbeddableSrs(S, emb, comp)


def dump_system(S: Srs | EmbeddableSrs) -> dict:
    base = S.base if isinstance(S, EmbeddableSrs) else S
    out = {
        "name": base.name,
        "n_expr": base.n_expr,
        "n_const": base.n_const,
        "enc": base.enc.tolist(),
        "app": base.app.tolist(),
    }
    if isinstance(S, EmbeddableSrs):
        out["emb"] = S.emb.tolist()
        out["comp"] = S.comp.table.tolist()
    return out


def trivial_system(n: int, right: bool = False) -> EmbeddableSrs:
    """``E = C``, identity encoding and embedding, left (or right) projection composition."""
    E = np.arange(n)
    comp = np.broadcast_to(E[None, :] if right else E[:, None], (n, n)).copy()
    S = Srs(E.copy(), comp.copy(), name="trivial-right" if right else "trivial")
    return EmbeddableSrs(S, E.copy(), comp)
