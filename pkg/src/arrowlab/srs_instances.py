"""The social-choice Self-Reference Systems and the dictator bridge checks.

For a rule ``w`` and individual ``i`` the expressions are all profiles, the
constants are preference relations, ``enc = w`` and the application
function is one of three families acting on coordinate ``i``:

* ``+i``      replaces ``p_i`` by ``p_i + r``,
* ``^i``      replaces ``p_i`` by ``p_i ∧ r``,
* ``omega_i`` returns ``(c, ..., p_i ∧ r, ..., c)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .social_choice import ProfileSpace, Swf, dictator_identity, has_dictator
from .srs import CoordinatewiseOp, EmbeddableSrs, Srs


class Family(enum.Enum):
    PLUS = "+i"
    MEET = "^i"
    OMEGA = "omega_i"

    @classmethod
    def parse(cls, text: str) -> "Family":
        aliases = {"+i": cls.PLUS, "plus": cls.PLUS, "^i": cls.MEET, "meet": cls.MEET,
                   "omega_i": cls.OMEGA, "omega": cls.OMEGA}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ParseError("unknown application family", token=text) from None


def _app_table(space: ProfileSpace, family: Family, i: int) -> np.ndarray:
    pref = space.pref
    j = i - 1
    P = np.arange(space.size)[:, None]
    r = np.arange(pref.size)[None, :]
    pi = space.coords[P, j]
    if family is Family.PLUS:
        return space.replace(P, j, pref.plus(pi, r))
    if family is Family.MEET:
        return space.replace(P, j, pref.meet(pi, r))
    return space.single(j, pref.meet(pi, r))


def make_srs(w: Swf, family: Family | str, i: int) -> Srs:
    if isinstance(family, str):
        family = Family.parse(family)
    space = w.space
    if not 1 <= i <= space.n:
        raise ValueError(f"individual {i} outside 1..{space.n}")
    return Srs(w.table, _app_table(space, family, i), lattice=space,
               name=f"({w.name}, {family.value.replace('i', str(i))})")


def indicator(space: ProfileSpace, i: int) -> int:
    return space.indicator(i)


def make_embedding(space: ProfileSpace, i: int):
    """``emb_i(r) = (c, ..., r, ..., c)`` and coordinatewise meet."""
    emb = space.single(i - 1, np.arange(space.pref.size))
    return emb, CoordinatewiseOp(space, space.pref.meet_table)


def embeddable_omega(w: Swf, i: int) -> EmbeddableSrs:
    emb, comp = make_embedding(w.space, i)
    return EmbeddableSrs(make_srs(w, Family.OMEGA, i), emb, comp)


@dataclass
class BridgeCheck:
    rule: str
    i: int
    system_side: bool
    dictator: bool
    detail: dict

    @property
    def agree(self) -> bool:
        return self.system_side == self.dictator

    def to_json(self) -> dict:
        return {"rule": self.rule, "i": self.i, "system_side": self.system_side,
                "dictator": self.dictator, "agree": self.agree, **self.detail}


def self_fixed_points(w: Swf, i: int) -> np.ndarray:
    """Per valid profile: ``p * p == p`` in ``(w, +i)``."""
    S = make_srs(w, Family.PLUS, i)
    V = w.space.valid_indices
    return S.star(V, V) == V


def check_dictator_iff_fixed_point(w: Swf, i: int) -> BridgeCheck:
    fixed = self_fixed_points(w, i)
    dictator = has_dictator(w, i)
    detail = {"fixed_profiles": int(fixed.sum()), "valid_profiles": int(fixed.size)}
    chk = BridgeCheck(w.name, i, bool(fixed.all()), dictator, detail)
    assert (fixed == dictator_identity(w, i)).all()
    return chk


def check_dictator_iff_diagonaliser(w: Swf, i: int) -> BridgeCheck:
    """Compare ``Υ_i * p == p * p`` over valid ``p`` in ``(w, omega_i)`` with dictatorship.

    ``detail["diag_reading"]`` also reports whether ``Υ_i * p == diag(p)``
    holds on valid profiles; that reading depends on how ``w`` treats
    profiles containing the cycle, so it is informational only.
    """
    ES = embeddable_omega(w, i)
    V = w.space.valid_indices
    ups = w.space.indicator(i)
    lhs = ES.star(np.full_like(V, ups), V)
    proof_eq = lhs == ES.star(V, V)
    diag_eq = lhs == ES.diag(V)
    detail = {"diag_reading": bool(diag_eq.all()), "matching_profiles": int(proof_eq.sum()),
              "valid_profiles": int(V.size)}
    return BridgeCheck(w.name, i, bool(proof_eq.all()), has_dictator(w, i), detail)
