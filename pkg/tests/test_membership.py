from itertools import product

import pytest

from cspcount.constraints import Constraint, builtin, pointwise_product, scale
from cspcount.errors import PreconditionError
from cspcount.membership import (
    binary_dg_test,
    degenerate_factorization,
    delta_atom,
    disj_membership,
    distinctive_list,
    ed_factorization,
    ed_membership,
    is_degenerate,
    nand_atom,
    nand_membership,
    normalize_factor_list,
    or_atom,
    width,
)
from cspcount.scalars import ONE, ZERO, gr

from _generators import (
    add_redundancy,
    rand_clause_presentation,
    rand_constraint,
    rand_ed_constraint,
    rand_weighted_clause_constraint,
    relation_of,
)
from _oracles import brute_degenerate, brute_ed


def T(*vals):
    k = (len(vals)).bit_length() - 1
    return Constraint(k, [gr(v) for v in vals])


class TestDegenerate:
    def test_examples(self):
        w = degenerate_factorization(T(1, 2, 3, 6))
        assert w is not None and w.reproduces(T(1, 2, 3, 6))
        assert not is_degenerate(T(1, 1, 1, -1))
        assert not is_degenerate(builtin("EQ", 3))

    def test_zero_constraint_is_degenerate(self):
        w = degenerate_factorization(T(0, 0, 0, 0))
        assert w is not None and w.reproduces(T(0, 0, 0, 0))

    def test_unary_always_degenerate(self):
        assert is_degenerate(T(3, "1i"))

    def test_binary_test_matches(self, rng):
        assert binary_dg_test(T(1, 2, 3, 6))
        assert not binary_dg_test(builtin("XOR", 2))
        assert binary_dg_test(T(0, 0, 5, 7))
        with pytest.raises(PreconditionError):
            binary_dg_test(builtin("EQ", 3))

    def test_against_oracle(self, rng):
        for _ in range(150):
            f = rand_constraint(rng, rng.randint(1, 4), zero_prob=0.4)
            assert is_degenerate(f) == brute_degenerate(f)


class TestEd:
    def test_examples(self):
        f = scale(builtin("XOR", 2), gr(2))
        w = ed_factorization(f)
        assert w is not None and w.reproduces(f)
        assert not ed_membership(builtin("OR", 2))
        assert ed_membership(T(1, 2, 3, 6))  # degenerate constraints belong

    def test_zero_constraint(self):
        w = ed_factorization(T(0, 0, 0, 0))
        assert w is not None and w.reproduces(T(0, 0, 0, 0))

    def test_weighted_equality_chain(self):
        f = T(2, 0, 0, 0, 0, 0, 0, 3)
        w = ed_factorization(f)
        assert w is not None and w.reproduces(f)

    def test_parity_support_is_outside(self):
        # even-parity indicator is not expressible with pairwise ties
        table = [ONE if bin(i).count("1") % 2 == 0 else ZERO for i in range(8)]
        assert not ed_membership(Constraint(3, table))

    def test_witnesses_reproduce(self, rng):
        for _ in range(100):
            f = rand_ed_constraint(rng, rng.randint(1, 4))
            w = ed_factorization(f)
            assert w is not None and w.reproduces(f)

    def test_against_oracle(self, rng):
        for _ in range(150):
            f = rand_constraint(rng, rng.randint(1, 3), zero_prob=0.45)
            assert ed_membership(f) == brute_ed(f)
        for _ in range(40):
            f = rand_constraint(rng, 4, zero_prob=0.5)
            assert ed_membership(f) == brute_ed(f)

    def test_degenerate_subset_of_ed(self, rng):
        for _ in range(60):
            f = rand_constraint(rng, rng.randint(1, 4), zero_prob=0.4)
            if is_degenerate(f):
                assert ed_membership(f)


class TestClauseClasses:
    def test_examples(self):
        assert disj_membership(T(0, 1, 2, 3))
        assert not disj_membership(builtin("Implies", 2))
        assert not nand_membership(builtin("Implies", 2))
        assert not disj_membership(T(1, 1, 1, 1))  # the full relation
        assert not nand_membership(T(1, 1, 1, 1))

    def test_empty_relation_in_both(self):
        zero = T(0, 0, 0, 0)
        assert disj_membership(zero) and nand_membership(zero)
        with pytest.raises(PreconditionError):
            distinctive_list(zero, "or")

    def test_pins_only_member(self):
        f = T(0, 0, 5, 7)  # Delta1(x1) with weights
        assert disj_membership(f) and nand_membership(f)
        assert width(f) == 0

    def test_generated_members(self, rng):
        for _ in range(60):
            mode = rng.choice(["or", "nand"])
            f = rand_weighted_clause_constraint(rng, rng.randint(2, 4), mode)
            assert (disj_membership(f) if mode == "or" else nand_membership(f))


class TestDistinctiveList:
    def test_subsumption_example(self):
        atoms = [or_atom([1, 2]), or_atom([1, 2, 3])]
        rel = relation_of(3, atoms)
        lst = distinctive_list(rel, "or")
        assert lst.clauses == frozenset({(1, 2)})
        assert lst.pins == frozenset()
        assert lst.relation(3) == rel

    def test_pin_absorbs_clause(self):
        atoms = [delta_atom(1, 1), or_atom([1, 2])]
        rel = relation_of(2, atoms)
        lst = distinctive_list(rel, "or")
        assert lst.pins == frozenset({(1, 1)})
        assert lst.clauses == frozenset()

    def test_plain_clause(self):
        lst = distinctive_list(builtin("OR", 2), "or")
        assert lst.clauses == frozenset({(1, 2)})

    def test_rules_hold(self, rng):
        for _ in range(80):
            mode = rng.choice(["or", "nand"])
            arity = rng.randint(2, 5)
            atoms = rand_clause_presentation(rng, arity, mode)
            rel = relation_of(arity, atoms)
            if all(v.is_zero() for v in rel.table):
                continue
            lst = distinctive_list(rel, mode)
            pinned = {v for _, v in lst.pins}
            for c in lst.clauses:
                assert len(c) >= 2
                assert len(set(c)) == len(c)
                assert not (set(c) & pinned)
                for other in lst.clauses:
                    if other != c:
                        assert not set(other) <= set(c)
            assert lst.relation(arity) == rel

    def test_normalization_reaches_fixed_point(self, rng):
        for _ in range(40):
            mode = rng.choice(["or", "nand"])
            arity = rng.randint(2, 5)
            atoms = rand_clause_presentation(rng, arity, mode)
            rel = relation_of(arity, atoms)
            if all(v.is_zero() for v in rel.table):
                continue
            lst = normalize_factor_list(arity, atoms, mode)
            assert lst == distinctive_list(rel, mode)
            # re-normalizing the normalized presentation changes nothing
            mk = or_atom if mode == "or" else nand_atom
            again = normalize_factor_list(
                arity,
                [delta_atom(b, v) for b, v in lst.pins] + [mk(c) for c in lst.clauses],
                mode,
            )
            assert again == lst

    def test_uniqueness_under_redundant_presentations(self, rng):
        for _ in range(60):
            mode = rng.choice(["or", "nand"])
            arity = rng.randint(2, 5)
            atoms = rand_clause_presentation(rng, arity, mode)
            rel = relation_of(arity, atoms)
            if all(v.is_zero() for v in rel.table):
                continue
            a1 = add_redundancy(rng, arity, atoms, mode)
            a2 = add_redundancy(rng, arity, atoms, mode)
            l1 = normalize_factor_list(arity, a1, mode)
            l2 = normalize_factor_list(arity, a2, mode)
            assert l1 == l2
            assert l1.relation(arity) == rel


class TestWidth:
    def test_examples(self):
        weighted_or3 = pointwise_product(
            builtin("OR", 3), T(2, 3, 5, 7, 11, 13, 17, 19)
        )
        assert width(weighted_or3) == 3
        two_clauses = relation_of(4, [or_atom([1, 2]), or_atom([3, 4])])
        assert width(two_clauses) == 2
        with pytest.raises(PreconditionError):
            width(builtin("Implies", 2))
