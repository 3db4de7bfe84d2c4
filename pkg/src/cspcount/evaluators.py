"""Exact evaluation: brute-force csp/Holant sums, a linear-time evaluator
for instances factored into unary/equality/disequality atoms, the
degree-1 product fast path, and an exact sum-product eliminator for
low-treewidth factor networks (used for gadget realization).
"""

from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from ._backend import contract
from .constraints import Constraint
from .errors import CapExceededError, InputError, PreconditionError
from .frames import ConstraintFrame, SignatureGrid, degree
from .membership import FactorList
from .scalars import ONE, TWO, ZERO, GaussianRational

__all__ = [
    "DEFAULT_CAP",
    "eval_csp_bruteforce",
    "eval_holant_bruteforce",
    "eval_ed_polytime",
    "eval_degree1",
    "sum_product",
]

DEFAULT_CAP = 24


def _from_triple(t: tuple[int, int, int]) -> GaussianRational:
    return GaussianRational.from_triple(*t)


def eval_csp_bruteforce(
    frame: ConstraintFrame, max_vars: int = DEFAULT_CAP
) -> GaussianRational:
    """Sum over all variable assignments of the product of atom values."""
    n = len(frame.variables)
    if n > max_vars:
        raise CapExceededError(f"{n} variables exceed the brute-force cap {max_vars}")
    index = {v: i for i, v in enumerate(frame.variables)}
    atoms = [
        (tuple(index[v] for v in atom.vars), atom.constraint.flat_triples())
        for atom in frame.atoms
    ]
    return _from_triple(contract(0, n, atoms)[0])


def eval_holant_bruteforce(
    grid: SignatureGrid, max_edges: int = DEFAULT_CAP
) -> GaussianRational:
    """Sum over all edge assignments of the product of node signatures."""
    n = len(grid.edges)
    if n > max_edges:
        raise CapExceededError(f"{n} edges exceed the brute-force cap {max_edges}")
    port_edge: dict[tuple[int, int], int] = {}
    for ei, ((i, p), (j, q)) in enumerate(grid.edges):
        port_edge[(i, p)] = ei
        port_edge[(j, q)] = ei
    atoms = []
    for ni, node in enumerate(grid.nodes):
        vs = tuple(port_edge[(ni, p)] for p in range(node.constraint.arity))
        atoms.append((vs, node.constraint.flat_triples()))
    return _from_triple(contract(0, n, atoms)[0])


def eval_degree1(frame: ConstraintFrame, max_vars: int | None = None) -> GaussianRational:
    """Degree <= 1 instances factor completely: the value is the product of
    each atom's full projection times 2 per unused variable."""
    if degree(frame) > 1:
        raise PreconditionError("fast path needs instance degree <= 1")
    total = ONE
    for atom in frame.atoms:
        s = ZERO
        for v in atom.constraint.table:
            s = s + v
        total = total * s
    occ = frame.occurrences()
    for v in frame.variables:
        if occ[v] == 0:
            total = total * TWO
    return total


def eval_ed_polytime(
    frame: ConstraintFrame,
    witnesses: Mapping[str, FactorList],
    validate: bool = True,
) -> GaussianRational:
    """Exact csp value in time linear in the expanded factor count.

    Every atom label must map to a factor list over unary/delta/eq2/xor2
    atoms that reproduces that atom's constraint (checked by enumeration
    when ``validate``). Equality factors carry parity 0 and disequality
    factors parity 1; each connected component of the resulting tie graph
    admits at most two consistent assignments, whose unary weights are
    summed directly.
    """
    checked: set[str] = set()
    scalar = ONE
    unaries: dict[str, list[tuple[GaussianRational, GaussianRational]]] = {
        v: [] for v in frame.variables
    }
    ties: dict[str, list[tuple[str, int]]] = {v: [] for v in frame.variables}
    hard_zero = False

    for atom in frame.atoms:
        w = witnesses.get(atom.label)
        if w is None:
            raise InputError(f"no factorization supplied for atom {atom.label!r}")
        if validate and atom.label not in checked:
            if not w.reproduces(atom.constraint):
                raise InputError(
                    f"factorization for {atom.label!r} does not reproduce its table"
                )
            checked.add(atom.label)
        scalar = scalar * w.scalar
        for fa in w.atoms:
            hosts = [atom.vars[p - 1] for p in fa.vars]
            if fa.kind == "unary":
                unaries[hosts[0]].append(fa.weights)
            elif fa.kind == "delta":
                weights = (ONE, ZERO) if fa.bit == 0 else (ZERO, ONE)
                unaries[hosts[0]].append(weights)
            elif fa.kind in ("eq2", "xor2"):
                parity = 0 if fa.kind == "eq2" else 1
                a, b = hosts
                if a == b:
                    if parity == 1:
                        hard_zero = True  # disequality of a variable with itself
                    continue
                ties[a].append((b, parity))
                ties[b].append((a, parity))
            else:
                raise InputError(
                    f"factor kind {fa.kind!r} is not part of an ED witness"
                )

    if hard_zero or scalar.is_zero():
        return ZERO

    total = scalar
    visited: set[str] = set()
    for root in frame.variables:
        if root in visited:
            continue
        comp: list[tuple[str, int]] = [(root, 0)]
        offset = {root: 0}
        visited.add(root)
        stack = [root]
        consistent = True
        while stack:
            u = stack.pop()
            for w_, par in ties[u]:
                want = offset[u] ^ par
                if w_ in offset:
                    if offset[w_] != want:
                        consistent = False
                else:
                    offset[w_] = want
                    visited.add(w_)
                    comp.append((w_, want))
                    stack.append(w_)
        if not consistent:
            return ZERO
        comp_sum = ZERO
        for root_val in (0, 1):
            term = ONE
            for var, off in comp:
                val = root_val ^ off
                for w0, w1 in unaries[var]:
                    term = term * (w0 if val == 0 else w1)
                    if term.is_zero():
                        break
                if term.is_zero():
                    break
            comp_sum = comp_sum + term
        if comp_sum.is_zero():
            return ZERO
        total = total * comp_sum
    return total


# -- exact sum-product elimination --------------------------------------------

Factor = tuple[tuple[Hashable, ...], list[int]]

DEFAULT_WIDTH_CAP = 22


def sum_product(
    factors: Sequence[Factor],
    out_vars: Sequence[Hashable],
    sum_vars: Sequence[Hashable],
    width_cap: int = DEFAULT_WIDTH_CAP,
) -> list[GaussianRational]:
    """Exact Sum_{sum_vars} Prod factors, as a table over out_vars.

    Eliminates sum variables one at a time (greedy smallest-clique order);
    each elimination is a kernel contraction over the factors touching the
    variable. Raises when an intermediate clique would exceed width_cap
    bits. A summed variable in no factor contributes a factor 2.
    """
    out_list = list(out_vars)
    if len(set(out_list)) != len(out_list):
        raise InputError("duplicate output variable")
    work = [(tuple(vs), list(table)) for vs, table in factors]
    free_multiplier = 0
    remaining = list(dict.fromkeys(sum_vars))
    out_set = set(out_list)
    for v in remaining:
        if v in out_set:
            raise InputError("a variable cannot be both summed and output")

    while remaining:
        best = None
        best_clique = None
        for v in remaining:
            clique: set[Hashable] = set()
            for vs, _ in work:
                if v in vs:
                    clique |= set(vs)
            if best is None or len(clique) < len(best_clique):
                best, best_clique = v, clique
        v = best
        remaining.remove(v)
        touching = [f for f in work if v in f[0]]
        if not touching:
            free_multiplier += 1
            continue
        rest = [f for f in work if v not in f[0]]
        keep = sorted(best_clique - {v}, key=repr)
        order = keep + [v]
        if len(order) > width_cap:
            raise CapExceededError(
                f"elimination clique of {len(order)} variables exceeds cap {width_cap}"
            )
        pos = {u: i for i, u in enumerate(order)}
        atoms = [
            (tuple(pos[u] for u in vs), table) for vs, table in touching
        ]
        new_table: list[int] = []
        for t in contract(len(keep), 1, atoms):
            new_table.extend(t)
        work = rest + [(tuple(keep), new_table)]

    if len(out_list) > width_cap:
        raise CapExceededError(
            f"output table over {len(out_list)} variables exceeds cap {width_cap}"
        )
    pos = {u: i for i, u in enumerate(out_list)}
    for vs, _ in work:
        for u in vs:
            if u not in pos:
                raise InputError(f"factor variable {u!r} neither summed nor output")
    atoms = [(tuple(pos[u] for u in vs), table) for vs, table in work]
    result = [
        GaussianRational.from_triple(*t)
        for t in contract(len(out_list), 0, atoms)
    ]
    if free_multiplier:
        mult = TWO ** free_multiplier
        result = [mult * v for v in result]
    return result
