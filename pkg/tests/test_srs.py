import json
from importlib import resources

import numpy as np
import pytest

from arrowlab.errors import DimensionError, ParseError
from arrowlab.srs import (
    CoordinatewiseOp,
    EmbeddableSrs,
    Srs,
    TableOp,
    check_embeddable,
    diag,
    dump_system,
    find_diagonaliser,
    find_fixed_points,
    is_diagonaliser,
    load_system,
    star,
    trivial_system,
    verify_adl,
)


def fixture_system():
    text = resources.files("arrowlab").joinpath("data/adl_fixture.json").read_text()
    return load_system(json.loads(text))


def test_trivial_systems_star():
    left, right = trivial_system(5), trivial_system(5, right=True)
    for e in range(5):
        for f in range(5):
            assert star(left, e, f) == e
            assert star(right, e, f) == f


def test_fixed_points():
    right = trivial_system(4, right=True)
    for e in range(4):
        assert find_fixed_points(right.base, e) == [0, 1, 2, 3]
    left = trivial_system(4)
    assert find_fixed_points(left.base, 2) == [2]
    assert find_fixed_points(left.base, 2, domain=[0, 1, 3]) == []


def test_check_embeddable():
    left = trivial_system(4)
    assert check_embeddable(left.base, left.emb, left.comp).ok
    bad_comp = np.array([[0, 1], [1, 0]])  # associative but breaks the embedding equation
    S = Srs([0, 1], [[0, 0], [1, 1]])
    res = check_embeddable(S, [0, 1], bad_comp)
    assert res.associative and not res.equation and res.equation_counterexample is not None
    nonassoc = np.array([[1, 0], [0, 0]])
    assert TableOp(nonassoc).associativity_counterexample() is not None
    assert not check_embeddable(S, [0, 1], nonassoc).associative


def test_diag_examples():
    right = trivial_system(4, right=True)
    E = np.arange(4)
    assert (diag(right, E) == E).all()
    assert find_diagonaliser(right) == 0
    ES = fixture_system()
    image = set(ES.dobar(np.arange(ES.n_expr)).tolist())
    assert set(ES.diag(np.arange(ES.n_expr)).tolist()) <= image


def test_adl_on_trivial_right_and_fixture():
    for ES in (trivial_system(6, right=True), fixture_system()):
        rep = verify_adl(ES)
        assert rep.passed and rep.helper_star and rep.helper_assoc and not rep.failures
        for d, f in rep.fixed_points.items():
            assert f in find_fixed_points(ES.base, d)


def test_fixture_is_nondegenerate():
    ES = fixture_system()
    E = np.arange(ES.n_expr)
    st = ES.base.star_table
    assert ES.n_expr == 4 and ES.base.n_const == 2
    assert check_embeddable(ES.base, ES.emb, ES.comp).ok
    assert not (st == E[None, :]).all() and not (st == E[:, None]).all()
    assert len(np.unique(st)) >= 3 and len(set(ES.diag(E).tolist())) >= 2
    f = find_diagonaliser(ES)
    assert f is not None and is_diagonaliser(ES, f)
    for d in E:
        assert find_fixed_points(ES.base, d)


def test_adl_not_applicable_without_diagonaliser():
    assert verify_adl(trivial_system(3)).status == "not-applicable"
    assert find_diagonaliser(trivial_system(3)) is None


def test_star_factors_through_encoding():
    ES = fixture_system()
    S = ES.base
    for f in range(S.n_expr):
        for g in range(S.n_expr):
            if S.enc[f] == S.enc[g]:
                assert (S.star_table[:, f] == S.star_table[:, g]).all()


def test_descriptor_round_trip_and_errors():
    ES = fixture_system()
    again = load_system(dump_system(ES))
    assert isinstance(again, EmbeddableSrs)
    assert (again.base.app == ES.base.app).all() and (again.emb == ES.emb).all()
    obj = dump_system(ES)
    del obj["app"]
    assert (load_system(obj).base.app == ES.base.app).all()
    with pytest.raises(ParseError):
        load_system({"n_expr": 2, "n_const": 1, "enc": [0, 0]})
    with pytest.raises(ParseError):
        load_system({"n_expr": 2, "n_const": 1, "enc": [0, 3], "app": [[0], [1]]})
    with pytest.raises(ParseError):
        load_system({"n_expr": 2, "enc": [0, 0]})
    with pytest.raises(DimensionError):
        Srs([0, 0], [[0, 1, 2]])


def test_coordinatewise_op_associativity(pref3):
    from arrowlab.lattice import ProductLattice

    P = ProductLattice(pref3, 2)
    assert CoordinatewiseOp(P, pref3.meet_table).associativity_counterexample() is None
    bogus = pref3.plus_table.copy()
    bogus[0, 1] = pref3.cycle
    assert TableOp(bogus).associativity_counterexample() is not None
    x, y, z = CoordinatewiseOp(P, bogus).associativity_counterexample()
    op = CoordinatewiseOp(P, bogus)
    assert op(op(x, y), z) != op(x, op(y, z))
