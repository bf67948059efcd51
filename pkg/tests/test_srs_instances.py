import numpy as np
import pytest

from arrowlab.errors import ParseError
from arrowlab.lattice import AlternativeSet
from arrowlab.social_choice import builtin_swf, parse_rule, profile_space
from arrowlab.srs import check_embeddable, find_diagonaliser, is_diagonaliser, verify_adl
from arrowlab.srs_instances import (
    Family,
    check_dictator_iff_diagonaliser,
    check_dictator_iff_fixed_point,
    embeddable_omega,
    make_embedding,
    make_srs,
    self_fixed_points,
)

A3 = AlternativeSet.default(3)
RULES = ["projection:{i}", "majority", "constant:a~b~c", "constant:a<b<c", "borda"]


def test_family_parse():
    assert Family.parse("omega") is Family.OMEGA
    assert Family.parse("^i") is Family.MEET
    assert Family.parse("+i") is Family.PLUS
    with pytest.raises(ParseError):
        Family.parse("xor")


def test_star_unfolds_per_family(space2):
    sp, pref = space2, space2.pref
    w = builtin_swf("borda", A3, 2)
    rng = np.random.default_rng(0)
    S = {f: make_srs(w, f, 2) for f in Family}
    for p, q in rng.integers(0, sp.size, size=(200, 2)):
        r = w.table[q]
        p1, p2 = sp.coords[p]
        assert list(sp.coords[S[Family.PLUS].star(p, q)]) == [p1, pref.plus(p2, r)]
        assert list(sp.coords[S[Family.MEET].star(p, q)]) == [p1, pref.meet(p2, r)]
        assert list(sp.coords[S[Family.OMEGA].star(p, q)]) == [pref.cycle, pref.meet(p2, r)]


def test_projection_plus_fixed_points():
    w = builtin_swf("projection", A3, 3, i=2)
    assert self_fixed_points(w, 2).all()
    maj = builtin_swf("majority", A3, 3)
    assert not self_fixed_points(maj, 1).all()


def test_majority_omega_on_table1(space3):
    w = builtin_swf("majority", A3, 3)
    S = make_srs(w, Family.OMEGA, 1)
    q = space3.parse(["a<b<c", "b<c<a", "c<a<b"])
    assert S.star(space3.indicator(1), q) == space3.bot


def test_constant_meet_unfolds(space2):
    w = builtin_swf("constant", A3, 2, r="a<b<c")
    S = make_srs(w, Family.MEET, 1)
    r = space2.pref.parse("a<b<c")
    for p in range(0, space2.size, 7):
        p1, p2 = space2.coords[p]
        assert list(space2.coords[S.star(p, 0)]) == [space2.pref.meet(p1, r), p2]


def test_embedding(space2):
    emb, comp = make_embedding(space2, 1)
    pref = space2.pref
    assert space2.chains(emb[pref.parse("a<b<c")]) == ["a<b<c", "CYCLE"]
    assert comp.associativity_counterexample() is None
    for rule in ("majority", "borda", "projection:2"):
        w = parse_rule(rule, A3, 2)
        ES = embeddable_omega(w, 1)
        assert check_embeddable(ES.base, ES.emb, ES.comp).ok
        V = space2.valid_indices
        assert (ES.dobar(V) == emb[w.table[V]]).all()
    bad = check_embeddable(make_srs(builtin_swf("majority", A3, 2), Family.PLUS, 1), emb, comp)
    assert bad.associative and not bad.equation


@pytest.mark.parametrize("n", [2, 3])
def test_bridges_agree(n):
    for i in range(1, n + 1):
        for rule in RULES:
            w = parse_rule(rule.format(i=i), A3, n)
            fp = check_dictator_iff_fixed_point(w, i)
            dg = check_dictator_iff_diagonaliser(w, i)
            assert fp.agree and dg.agree, (rule, i)
            assert fp.dictator == (rule == "projection:{i}")


def test_diag_reading_is_not_a_dictator_test():
    w = builtin_swf("constant", A3, 2, r="a<b<c")
    chk = check_dictator_iff_diagonaliser(w, 1)
    assert chk.agree and not chk.dictator
    assert chk.detail["diag_reading"]


def test_indicator_diagonaliser_on_valid_domain():
    for n in (2, 3):
        sp = profile_space(A3, n)
        proj = embeddable_omega(builtin_swf("projection", A3, n, i=1), 1)
        assert is_diagonaliser(proj, sp.indicator(1), domain=sp.valid_indices)
        maj = embeddable_omega(builtin_swf("majority", A3, n), 1)
        assert not is_diagonaliser(maj, sp.indicator(1), domain=sp.valid_indices)


def test_majority_omega_full_search_finds_cycle_at_i(space2):
    ES = embeddable_omega(builtin_swf("majority", A3, 2), 1)
    f = find_diagonaliser(ES)
    assert f is not None and space2.coords[f, 0] == space2.pref.cycle
    assert (ES.diag(np.arange(ES.n_expr)) == space2.bot).all()
    assert verify_adl(ES).passed


def test_projection_omega_adl():
    ES = embeddable_omega(builtin_swf("projection", A3, 2, i=1), 1)
    rep = verify_adl(ES)
    assert rep.passed and rep.helper_star and rep.helper_assoc


def test_bridge_json():
    js = check_dictator_iff_fixed_point(builtin_swf("majority", A3, 2), 1).to_json()
    assert js["agree"] and js["rule"] == "majority"
