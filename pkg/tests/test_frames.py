import pytest

from cspcount.constraints import Constraint, builtin
from cspcount.errors import InputError, PreconditionError
from cspcount.evaluators import eval_csp_bruteforce, eval_holant_bruteforce
from cspcount.frames import (
    ConstraintFrame,
    FrameAtom,
    GridNode,
    SignatureGrid,
    check_eq_separation,
    csp_to_holant,
    degree,
    degree2_to_holant,
    holant_eq3_form,
    holant_to_degree2,
)
from cspcount.scalars import gr

from _generators import rand_constraint, rand_frame
from _oracles import brute_csp, brute_holant

OR2 = builtin("OR", 2)
EQ2 = builtin("EQ", 2)
EQ3 = builtin("EQ", 3)


def frame(vars_, *atoms):
    return ConstraintFrame(
        vars_, [FrameAtom(f"a{i}", c, vs) for i, (c, vs) in enumerate(atoms)]
    )


class TestFrameBasics:
    def test_degree_examples(self):
        assert degree(frame(["x", "y"], (OR2, ("x", "y")))) == 1
        f = rand = Constraint(2, [gr(1)] * 4)
        fr = frame(["x", "y", "z", "w"], (rand, ("x", "y")), (rand, ("y", "z")), (rand, ("y", "w")))
        assert degree(fr) == 3
        assert degree(frame(["x"], (rand, ("x", "x")))) == 2

    def test_validation(self):
        with pytest.raises(InputError):
            frame(["x"], (OR2, ("x", "y")))
        with pytest.raises(InputError):
            frame(["x", "y"], (OR2, ("x",)))

    def test_eq_separation(self):
        assert check_eq_separation(
            frame(["x", "y", "z"], (EQ2, ("x", "y")), (OR2, ("y", "z")))
        )
        assert not check_eq_separation(
            frame(["x", "y", "u", "v"], (EQ2, ("x", "y")), (EQ3, ("y", "u", "v")))
        )
        assert check_eq_separation(frame(["x", "y"], (OR2, ("x", "y"))))


class TestGridValidation:
    def test_ports_used_once(self):
        u = builtin("Delta1", 1)
        with pytest.raises(InputError):
            SignatureGrid([GridNode("a", u), GridNode("b", u)], [((0, 0), (0, 0))])
        with pytest.raises(InputError):
            SignatureGrid([GridNode("a", u)], [])  # dangling port

    def test_two_deltas_one_edge(self):
        d1 = builtin("Delta1", 1)
        g = SignatureGrid([GridNode("a", d1), GridNode("b", d1)], [((0, 0), (1, 0))])
        assert eval_holant_bruteforce(g) == gr(1)


class TestCspToHolant:
    def test_or2_example(self):
        fr = frame(["x", "y"], (OR2, ("x", "y")))
        grid = csp_to_holant(fr)
        assert eval_holant_bruteforce(grid) == gr(3)
        assert grid.left is not None

    def test_repeated_variable(self):
        f = Constraint(2, [gr(1), gr(2), gr(3), gr(4)])
        fr = frame(["x"], (f, ("x", "x")))
        grid = csp_to_holant(fr)
        # the variable node is an EQ_2 wired twice into f
        eq_nodes = [n for i, n in enumerate(grid.nodes) if i in grid.left]
        assert eq_nodes[0].constraint == EQ2
        assert eval_holant_bruteforce(grid) == eval_csp_bruteforce(fr) == gr(5)

    def test_empty_frame(self):
        fr = ConstraintFrame([], [])
        grid = csp_to_holant(fr)
        assert eval_holant_bruteforce(grid) == gr(1)

    def test_unused_variable_counts_twice(self):
        fr = frame(["x", "y"], (builtin("Delta1", 1), ("x",)))
        grid = csp_to_holant(fr)
        assert eval_holant_bruteforce(grid) == eval_csp_bruteforce(fr) == gr(2)

    def test_matches_brute_force_on_random_frames(self, rng):
        pool = [
            ("u", rand_constraint(rng, 1)),
            ("b", rand_constraint(rng, 2)),
            ("t", rand_constraint(rng, 3)),
        ]
        for _ in range(50):
            names = [f"v{i}" for i in range(rng.randint(1, 5))]
            fr = rand_frame(rng, names, pool, rng.randint(1, 4))
            grid = csp_to_holant(fr)
            v = brute_csp(fr)
            assert eval_csp_bruteforce(fr) == v
            assert eval_holant_bruteforce(grid) == v
            assert brute_holant(grid) == v


class TestEq3Form:
    def test_eq1_unary_example(self):
        u = Constraint(1, [gr(2), gr(3)])
        fr = frame(["x"], (u, ("x",)))
        grid = csp_to_holant(fr)
        out = holant_eq3_form(grid)
        assert eval_holant_bruteforce(out) == gr(5)
        for i in out.left:
            assert out.nodes[i].constraint == EQ3

    def test_eq2_between_two_nodes(self):
        f = Constraint(1, [gr(2), gr(3)])
        g = Constraint(1, [gr(5), gr(7)])
        fr = frame(["x"], (f, ("x",)), (g, ("x",)))
        grid = csp_to_holant(fr)
        out = holant_eq3_form(grid)
        assert eval_holant_bruteforce(out) == eval_csp_bruteforce(fr) == gr(31)

    def test_already_eq3_unchanged(self):
        fr = frame(
            ["x", "y", "z"],
            (OR2, ("x", "y")),
            (OR2, ("y", "z")),
            (OR2, ("z", "x")),
        )
        grid = csp_to_holant(fr)
        out = holant_eq3_form(grid)
        assert len(out.nodes) == len(grid.nodes)
        assert eval_holant_bruteforce(out) == eval_holant_bruteforce(grid)

    def test_requires_left_marking(self):
        d1 = builtin("Delta1", 1)
        g = SignatureGrid([GridNode("a", d1), GridNode("b", d1)], [((0, 0), (1, 0))])
        with pytest.raises(PreconditionError):
            holant_eq3_form(g)

    def test_preserves_value_on_random_frames(self, rng):
        pool = [
            ("u", rand_constraint(rng, 1)),
            ("b", rand_constraint(rng, 2)),
        ]
        for _ in range(40):
            names = [f"v{i}" for i in range(rng.randint(1, 4))]
            fr = rand_frame(rng, names, pool, rng.randint(1, 3))
            if degree(fr) > 3:
                continue
            grid = csp_to_holant(fr)
            out = holant_eq3_form(grid)
            assert eval_holant_bruteforce(out) == eval_csp_bruteforce(fr)


class TestDegree2Translations:
    def test_eq2_chain_value(self):
        fr = frame(["x", "y", "z"], (EQ2, ("x", "y")), (EQ2, ("y", "z")))
        grid = degree2_to_holant(fr)
        assert eval_holant_bruteforce(grid) == gr(2)
        back = holant_to_degree2(grid)
        assert eval_csp_bruteforce(back) == gr(2)

    def test_single_edge_grid(self):
        d1 = builtin("Delta1", 1)
        grid = SignatureGrid([GridNode("a", d1), GridNode("b", d1)], [((0, 0), (1, 0))])
        fr = holant_to_degree2(grid)
        assert degree(fr) == 2
        assert eval_csp_bruteforce(fr) == gr(1)

    def test_empty(self):
        fr = ConstraintFrame([], [])
        grid = degree2_to_holant(fr)
        assert eval_holant_bruteforce(grid) == gr(1)

    def test_degree_violation(self):
        f = rand = Constraint(1, [gr(1), gr(1)])
        fr = frame(["x"], (f, ("x",)), (f, ("x",)), (f, ("x",)))
        with pytest.raises(PreconditionError):
            degree2_to_holant(fr)

    def test_roundtrip_values_on_random_degree2_frames(self, rng):
        pool = [
            ("u", rand_constraint(rng, 1)),
            ("b", rand_constraint(rng, 2)),
            ("t", rand_constraint(rng, 3)),
        ]
        done = 0
        while done < 40:
            names = [f"v{i}" for i in range(rng.randint(1, 6))]
            fr = rand_frame(rng, names, pool, rng.randint(1, 3))
            if degree(fr) > 2:
                continue
            done += 1
            v = eval_csp_bruteforce(fr)
            grid = degree2_to_holant(fr)
            assert eval_holant_bruteforce(grid) == v
            back = holant_to_degree2(grid)
            assert eval_csp_bruteforce(back) == v
            assert degree(back) <= 2
