from itertools import product

import pytest

from cspcount.constraints import (
    Constraint,
    builtin,
    from_symmetric,
    identify,
    index_to_bits,
    is_non_zero,
    is_symmetric,
    nonzero_part,
    pin,
    pointwise_product,
    project,
    scale,
    underlying_relation,
)
from cspcount.errors import InputError, PreconditionError
from cspcount.scalars import I, ONE, ZERO, gr

from _generators import rand_constraint


def T(*vals):
    k = (len(vals)).bit_length() - 1
    return Constraint(k, [gr(v) for v in vals])


def test_builtin_tables():
    assert builtin("EQ", 3).table == T(1, 0, 0, 0, 0, 0, 0, 1).table
    assert builtin("Implies", 2).table == T(1, 1, 0, 1).table
    assert builtin("Delta0", 1).table == T(1, 0).table
    assert builtin("Delta1", 1).table == T(0, 1).table
    assert builtin("OR", 1) == builtin("Delta1", 1)
    assert builtin("NAND", 1) == builtin("Delta0", 1)
    assert builtin("XOR", 2).table == T(0, 1, 1, 0).table


def test_builtin_rejects():
    with pytest.raises(InputError):
        builtin("XOR", 3)
    with pytest.raises(InputError):
        builtin("EQ", 0)
    with pytest.raises(InputError):
        builtin("Majority", 3)


def test_from_symmetric():
    assert from_symmetric([0, 1, 0]) == builtin("XOR", 2)
    assert from_symmetric([1, 1]) == builtin("EQ", 1)
    assert from_symmetric([0, 1, 1]) == builtin("OR", 2)


def test_table_length_validation():
    with pytest.raises(InputError):
        Constraint(2, [ONE, ZERO, ONE])


def test_pin_examples():
    assert pin(builtin("EQ", 3), 1, 0) == T(1, 0, 0, 0)
    assert pin(builtin("Implies", 2), 1, 1) == builtin("Delta1", 1)
    f = T("a", "b", "c", "d") if False else T(5, 7, 11, 13)
    assert pin(f, 2, 1) == Constraint(1, [f.table[1], f.table[3]])


def test_project_examples():
    assert project(builtin("XOR", 2), 1) == T(1, 1)
    assert project(builtin("EQ", 2), 2) == T(1, 1)
    assert project(T(1, 2, 3, 6), 1) == T(4, 8)


def test_identify_examples():
    assert identify(builtin("XOR", 2), 1, 2) == T(0, 0)
    assert identify(builtin("EQ", 2), 1, 2) == T(1, 1)
    assert identify(builtin("OR", 3), 2, 3) == T(0, 1, 1, 1)
    with pytest.raises(PreconditionError):
        identify(builtin("XOR", 2), 1, 1)


def test_scale_and_product():
    assert scale(builtin("EQ", 2), gr(6)) == T(6, 0, 0, 6)
    f = T(0, 2, 3, 0)
    assert scale(f, ONE) == f
    assert scale(T(0, 2, 3, 0), I).table[1] == gr((0, 2))
    assert pointwise_product(builtin("OR", 2), builtin("NAND", 2)) == builtin("XOR", 2)
    assert pointwise_product(T(0, 1, 1, 1), T(1, 2, 3, 5)) == T(0, 2, 3, 5)
    with pytest.raises(PreconditionError):
        pointwise_product(builtin("OR", 2), builtin("EQ", 3))


def test_relation_and_nonzero_part():
    assert underlying_relation(T(0, 2, 3, 0)) == T(0, 1, 1, 0)
    assert underlying_relation(T(0, 0, 0, 0)) == T(0, 0, 0, 0)
    assert underlying_relation(T(1, 2, 3, 5)) == T(1, 1, 1, 1)
    assert nonzero_part(T(0, 2, 3, 0)) == T(1, 2, 3, 1)
    assert nonzero_part(T(0, 1, 1, 1)) == T(1, 1, 1, 1)


def test_predicates():
    assert is_non_zero(T(1, 2, 3, 5))
    assert not is_non_zero(builtin("OR", 2))
    assert is_symmetric(T(1, 2, 2, 7))
    assert not is_symmetric(T(1, 2, 3, 7))


def test_relation_times_nonzero_part_recovers(rng):
    for _ in range(50):
        f = rand_constraint(rng, rng.randint(1, 3))
        assert pointwise_product(underlying_relation(f), nonzero_part(f)) == f


def test_pin_sum_is_projection(rng):
    for _ in range(50):
        k = rng.randint(1, 4)
        f = rand_constraint(rng, k)
        i = rng.randint(1, k)
        lhs = [a + b for a, b in zip(pin(f, i, 0).table, pin(f, i, 1).table)]
        assert Constraint(k - 1, lhs) == project(f, i)


def test_pin_project_match_direct_enumeration(rng):
    # exhaustive small-case oracle for the index bookkeeping
    for k in (2, 3, 4):
        f = rand_constraint(rng, k, zero_prob=0.2)
        for i in range(1, k + 1):
            for c in (0, 1):
                g = pin(f, i, c)
                for idx in range(1 << (k - 1)):
                    bits = list(index_to_bits(idx, k - 1))
                    full = bits[: i - 1] + [c] + bits[i - 1 :]
                    assert g.table[idx] == f.value(full)


def test_value_lookup_order():
    f = T(0, 1, 2, 3, 4, 5, 6, 7)
    for bits in product((0, 1), repeat=3):
        assert f.value(bits) == gr(bits[0] * 4 + bits[1] * 2 + bits[2])
