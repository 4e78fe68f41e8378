import pytest

from setsharing.universe import (DuplicateName, MalformedIdentifier, UnknownVariable,
                                 UniverseMismatch, bits_of, make_universe, numbered_universe,
                                 submasks, var_index)


def test_make_universe_bit_order():
    u = make_universe(["x", "y", "z"])
    assert u.n == 3
    assert [var_index(u, v) for v in "xyz"] == [0, 1, 2]
    assert u.full == 0b111


def test_duplicate_rejected():
    with pytest.raises(DuplicateName):
        make_universe(["x", "x"])


def test_single_variable():
    u = make_universe(["a"])
    assert u.n == 1 and var_index(u, "a") == 0


@pytest.mark.parametrize("bad", ["", "1x", "x-y", "x y"])
def test_malformed_identifier(bad):
    with pytest.raises(MalformedIdentifier):
        make_universe(["x", bad])


def test_unknown_variable():
    u = make_universe("x,y,z")
    with pytest.raises(UnknownVariable):
        var_index(u, "w")
    assert "w" not in u


def test_round_trip():
    u = numbered_universe(6)
    for name in u.names:
        assert u.name_of(var_index(u, name)) == name
    assert sorted(var_index(u, v) for v in u.names) == list(range(6))


def test_mask_forms():
    u = make_universe("x,y,z")
    assert u.mask("xz") == 0b101
    assert u.mask(["y"]) == 0b010
    assert u.mask("x,z") == 0b101
    assert u.names_in(0b110) == ["y", "z"]
    v = numbered_universe(3)
    assert v.mask("v1,v3") == 0b101


def test_check_same():
    with pytest.raises(UniverseMismatch):
        make_universe("x,y").check_same(make_universe("x,z"))


def test_bit_helpers():
    assert list(bits_of(0b1011)) == [1, 2, 8]
    assert sorted(submasks(0b101)) == [0b001, 0b100, 0b101]
