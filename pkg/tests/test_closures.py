import pytest

import oracles as O
from setsharing.closures import (CLOSURE_MAX_VARS, ClosureId, apply_closure,
                                 ground_equiv_classes, is_fixpoint, pairs, parse_closure,
                                 rho_ps_prime, rho_ts, rho_tsd, tuples_k)
from setsharing.lattice import decode
from setsharing.shcore import parse_sh, self_union, star_union
from setsharing.universe import CapExceeded, numbered_universe


def E(u, text):
    return parse_sh(u, text)


def as_names(x):
    return frozenset(frozenset(x.universe.names_in(g)) for g in x.groups)


def test_tuples(xyz):
    assert tuples_k(E(xyz, "{xyz}"), 2) == {xyz.mask("xy"), xyz.mask("xz"), xyz.mask("yz")}
    assert tuples_k(E(xyz, "{x, y}"), 2) == frozenset()
    assert tuples_k(E(xyz, "{xy}"), 1) == {1, 2}
    assert pairs(E(xyz, "{xy}")) == {3}


def test_rho_ts_examples(xyz):
    assert rho_ts(E(xyz, "{xy}"), 2) == E(xyz, "{x, y, z, xy}")
    top = E(xyz, "{x, y, z, xy, xz, yz, xyz}")
    for k in (1, 2, 3):
        assert rho_ts(top, k) == top
    assert rho_ts(E(xyz, "{xy}"), 1) == E(xyz, "{x, y, xy}")


def test_rho_tsd_examples(xyz):
    assert rho_tsd(E(xyz, "{xy, xz, yz}"), 2) == E(xyz, "{xy, xz, yz, xyz}")
    assert rho_tsd(E(xyz, "{x, y}"), 1) == E(xyz, "{x, y, xy}")
    for k in (1, 2, 3):
        assert rho_tsd(E(xyz, "{}"), k) == E(xyz, "{}")


def test_rho_ps_prime_examples(xyz):
    assert rho_ps_prime(E(xyz, "{xy, xz, yz}")) == E(xyz, "{x, y, z, xy, xz, yz}")
    top = E(xyz, "{x, y, z, xy, xz, yz, xyz}")
    assert rho_ps_prime(top) == top
    assert rho_ps_prime(E(xyz, "{xy}")) == E(xyz, "{x, y, z, xy}")


def test_ground_classes(xyz):
    assert ground_equiv_classes(E(xyz, "{xy, xyz}")) == [0b011, 0b100]
    assert ground_equiv_classes(E(xyz, "{}")) == [0b111]
    assert ground_equiv_classes(E(xyz, "{x, y, z}")) == [1, 2, 4]


def test_closure_names():
    assert parse_closure("con") == ClosureId("TS", 1)
    assert parse_closure("PSD") == ClosureId("TSD", 2)
    assert parse_closure("ts:3") == ClosureId("TS", 3)
    assert parse_closure("sh") == ClosureId("Identity")
    assert ClosureId("TSD", 3).normalized(3) == ClosureId("Identity")
    assert ClosureId("TS", 4).label == "ts:4"
    for bad in ("tsd:0", "ts:", "foo", "tsd:x"):
        with pytest.raises(ValueError):
            parse_closure(bad)
    with pytest.raises(ValueError):
        ClosureId("TS")
    with pytest.raises(ValueError):
        ClosureId("Top", 2)


def test_closure_index_checks(xyz):
    with pytest.raises(ValueError):
        rho_tsd(E(xyz, "{x}"), 4)
    with pytest.raises(ValueError):
        apply_closure(ClosureId("TS", 5), E(xyz, "{x}"))
    with pytest.raises(CapExceeded):
        rho_ts(decode(numbered_universe(CLOSURE_MAX_VARS + 1), 0), 1)


def test_membership_is_fixpoint(xyz):
    assert is_fixpoint(parse_closure("def"), E(xyz, "{x, y, xy}"))
    assert not is_fixpoint(parse_closure("def"), E(xyz, "{x, y}"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_closures_match_literal_definitions(n):
    u = numbered_universe(n)
    vi = frozenset(u.names)
    for e in range(1 << u.full):
        x = decode(u, e)
        nx = as_names(x)
        for k in range(1, n + 1):
            assert as_names(rho_ts(x, k)) == O.rho_ts(nx, k, vi)
            assert as_names(rho_tsd(x, k)) == O.rho_tsd(nx, k, vi)


def test_literal_oracle_sanity(xyz):
    # the oracle itself reproduces a hand-worked value
    vi = frozenset("xyz")
    assert O.rho_tsd(O.parse("xy xz yz"), 2, vi) == O.parse("xy xz yz xyz")
    assert O.rho_tsd(O.parse("x y"), 1, vi) == O.star(O.parse("x y"))


def test_self_union_replaces_star_exhaustive_n3(xyz):
    for e in range(128):
        x = decode(xyz, e)
        for k in (1, 2, 3):
            assert rho_tsd(self_union(x, k), k) == star_union(x)


def test_identity_and_star_ends(xyz):
    for e in range(128):
        x = decode(xyz, e)
        assert rho_tsd(x, 3) == x
        assert rho_tsd(x, 1) == star_union(x)
