import time

import pytest

from cspcount.constraints import Constraint, builtin
from cspcount.errors import CapExceededError, InputError, PreconditionError
from cspcount.evaluators import (
    eval_csp_bruteforce,
    eval_degree1,
    eval_ed_polytime,
    eval_holant_bruteforce,
    sum_product,
)
from cspcount.frames import ConstraintFrame, FrameAtom, csp_to_holant
from cspcount.membership import (
    FactorList,
    ed_factorization,
    unary_atom,
    xor2_atom,
)
from cspcount.scalars import ONE, gr

from _generators import rand_constraint, rand_ed_frame, rand_frame
from _oracles import brute_csp

OR2 = builtin("OR", 2)
EQ2 = builtin("EQ", 2)
XOR = builtin("XOR", 2)


def frame(vars_, *atoms):
    return ConstraintFrame(
        vars_, [FrameAtom(f"a{i}", c, vs) for i, (c, vs) in enumerate(atoms)]
    )


class TestBruteForce:
    def test_examples(self):
        assert eval_csp_bruteforce(frame(["x", "y"], (OR2, ("x", "y")))) == gr(3)
        f = Constraint(2, ["0", "2", "3", "5"])
        assert eval_csp_bruteforce(frame(["x", "y"], (f, ("x", "y")))) == gr(10)
        fr = frame(["x", "y", "z"], (EQ2, ("x", "y")), (OR2, ("y", "z")))
        assert eval_csp_bruteforce(fr) == gr(3)

    def test_cap(self):
        fr = ConstraintFrame([f"v{i}" for i in range(30)], [])
        with pytest.raises(CapExceededError):
            eval_csp_bruteforce(fr)
        assert eval_csp_bruteforce(fr, max_vars=30) == gr(2) ** 30

    def test_matches_independent_loop(self, rng):
        pool = [
            ("u", rand_constraint(rng, 1)),
            ("b", rand_constraint(rng, 2)),
            ("t", rand_constraint(rng, 3)),
        ]
        for _ in range(60):
            names = [f"v{i}" for i in range(rng.randint(1, 6))]
            fr = rand_frame(rng, names, pool, rng.randint(0, 4))
            assert eval_csp_bruteforce(fr) == brute_csp(fr)


class TestHolantBruteForce:
    def test_translation_identity(self, rng):
        pool = [
            ("u", rand_constraint(rng, 1)),
            ("b", rand_constraint(rng, 2)),
        ]
        for _ in range(40):
            names = [f"v{i}" for i in range(rng.randint(1, 5))]
            fr = rand_frame(rng, names, pool, rng.randint(1, 4))
            assert eval_holant_bruteforce(csp_to_holant(fr)) == eval_csp_bruteforce(fr)


class TestDegree1:
    def test_examples(self):
        assert eval_degree1(frame(["x", "y"], (OR2, ("x", "y")))) == gr(3)
        fr = frame(
            ["x", "y", "u", "v"],
            (OR2, ("x", "y")),
            (builtin("NAND", 2), ("u", "v")),
        )
        assert eval_degree1(fr) == gr(9)
        fr = frame(["x", "w"], (builtin("Delta1", 1), ("x",)))
        assert eval_degree1(fr) == gr(2)

    def test_rejects_higher_degree(self):
        fr = frame(["x", "y", "z"], (OR2, ("x", "y")), (OR2, ("x", "z")))
        with pytest.raises(PreconditionError):
            eval_degree1(fr)

    def test_matches_brute_force(self, rng):
        pool = [
            ("u", rand_constraint(rng, 1)),
            ("b", rand_constraint(rng, 2)),
            ("t", rand_constraint(rng, 3)),
        ]
        done = 0
        while done < 40:
            names = [f"v{i}" for i in range(rng.randint(1, 8))]
            fr = rand_frame(rng, names, pool, rng.randint(0, 3))
            occ = fr.occurrences()
            if max(occ.values(), default=0) > 1:
                continue
            done += 1
            assert eval_degree1(fr) == eval_csp_bruteforce(fr)


class TestEdEvaluator:
    def test_xor_chain_example(self):
        u = Constraint(1, ["2", "3"])
        fr = frame(
            ["x1", "x2", "x3"],
            (XOR, ("x1", "x2")),
            (XOR, ("x2", "x3")),
            (u, ("x1",)),
        )
        witnesses = {
            "a0": FactorList(ONE, (xor2_atom(1, 2),)),
            "a1": FactorList(ONE, (xor2_atom(1, 2),)),
            "a2": FactorList(ONE, (unary_atom(1, "2", "3"),)),
        }
        assert eval_ed_polytime(fr, witnesses) == gr(5)

    def test_eq_chain(self):
        fr = frame(["x1", "x2", "x3"], (EQ2, ("x1", "x2")), (EQ2, ("x2", "x3")))
        w = {label: ed_factorization(EQ2) for label in ("a0", "a1")}
        assert eval_ed_polytime(fr, w) == gr(2)

    def test_self_disequality_is_zero(self):
        fr = frame(["x"], (XOR, ("x", "x")))
        w = {"a0": FactorList(ONE, (xor2_atom(1, 2),))}
        assert eval_ed_polytime(fr, w) == gr(0)

    def test_invalid_witness_rejected(self):
        fr = frame(["x", "y"], (EQ2, ("x", "y")))
        bad = {"a0": FactorList(ONE, (xor2_atom(1, 2),))}
        with pytest.raises(InputError):
            eval_ed_polytime(fr, bad)

    def test_matches_brute_force_on_random_ed_frames(self, rng):
        for _ in range(100):
            fr, witnesses = rand_ed_frame(rng, rng.randint(1, 8), rng.randint(1, 5))
            assert eval_ed_polytime(fr, witnesses) == eval_csp_bruteforce(fr)

    def test_large_instance_is_fast(self, rng):
        fr, witnesses = rand_ed_frame(rng, 200, 150)
        start = time.perf_counter()
        eval_ed_polytime(fr, witnesses)
        assert time.perf_counter() - start < 1.0


class TestSumProduct:
    def test_matches_direct_contraction(self, rng):
        for _ in range(40):
            n = rng.randint(1, 6)
            n_out = rng.randint(0, min(3, n))
            factors = []
            for _ in range(rng.randint(1, 5)):
                arity = rng.randint(1, min(3, n))
                vs = tuple(rng.sample(range(n), arity))
                factors.append((vs, rand_constraint(rng, arity).flat_triples()))
            got = sum_product(factors, range(n_out), range(n_out, n))
            # reference: pin the output variables and brute-force the rest
            fr_vars = [f"v{i}" for i in range(n)]
            want = []
            for idx in range(1 << n_out):
                bits = [(idx >> (n_out - 1 - i)) & 1 for i in range(n_out)]
                frame_atoms = [
                    FrameAtom(
                        f"p{i}",
                        builtin("Delta0" if b == 0 else "Delta1", 1),
                        (fr_vars[i],),
                    )
                    for i, b in enumerate(bits)
                ]
                frame_atoms += [
                    FrameAtom(
                        f"f{j}",
                        _constraint_from_triples(len(vs), table),
                        tuple(fr_vars[v] for v in vs),
                    )
                    for j, (vs, table) in enumerate(factors)
                ]
                want.append(brute_csp(ConstraintFrame(fr_vars, frame_atoms)))
            assert got == want

    def test_free_summed_variable_doubles(self):
        out = sum_product([], [], ["lonely"])
        assert out == [gr(2)]


def _constraint_from_triples(arity, flat):
    from cspcount.scalars import GaussianRational

    vals = [
        GaussianRational.from_triple(flat[3 * i], flat[3 * i + 1], flat[3 * i + 2])
        for i in range(1 << arity)
    ]
    return Constraint(arity, vals)
