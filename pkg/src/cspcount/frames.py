"""Instance representations: constraint frames (variables + constraint
atoms) and signature grids (nodes + port-wired edges), with the structural
translations between them.

Grids wire edges to explicit (node, port) endpoints; a node's signature
reads its inputs in port index order. Variable tuples in frames may repeat
a variable, and the degree counts each occurrence separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .constraints import Constraint, builtin
from .errors import InputError, PreconditionError

__all__ = [
    "FrameAtom",
    "ConstraintFrame",
    "GridNode",
    "SignatureGrid",
    "degree",
    "check_eq_separation",
    "is_equality_table",
    "csp_to_holant",
    "holant_eq3_form",
    "degree2_to_holant",
    "holant_to_degree2",
    "fresh_name",
]


@dataclass(frozen=True)
class FrameAtom:
    label: str
    constraint: Constraint
    vars: tuple[str, ...]


class ConstraintFrame:
    """A #CSP instance: declared variables plus constraint applications."""

    def __init__(self, variables: Iterable[str], atoms: Iterable[FrameAtom]):
        self.variables = tuple(variables)
        self.atoms = tuple(atoms)
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable declaration")
        declared = set(self.variables)
        for atom in self.atoms:
            if len(atom.vars) != atom.constraint.arity:
                raise InputError(
                    f"atom {atom.label!r} takes {len(atom.vars)} variables "
                    f"but has arity {atom.constraint.arity}"
                )
            for v in atom.vars:
                if v not in declared:
                    raise InputError(f"atom {atom.label!r} uses undeclared variable {v!r}")

    def occurrences(self) -> dict[str, int]:
        occ = {v: 0 for v in self.variables}
        for atom in self.atoms:
            for v in atom.vars:
                occ[v] += 1
        return occ

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstraintFrame):
            return NotImplemented
        return self.variables == other.variables and self.atoms == other.atoms

    def __repr__(self) -> str:
        return f"ConstraintFrame(vars={len(self.variables)}, atoms={len(self.atoms)})"


def degree(frame: ConstraintFrame) -> int:
    occ = frame.occurrences()
    return max(occ.values(), default=0)


def is_equality_table(c: Constraint, min_arity: int = 2) -> bool:
    """True for an exact EQ_k table with k >= min_arity."""
    return c.arity >= min_arity and c == builtin("EQ", c.arity)


def check_eq_separation(frame: ConstraintFrame) -> bool:
    """No variable is shared by two distinct equality atoms (condition on
    frames required before gadget substitution)."""
    seen: set[str] = set()
    for atom in frame.atoms:
        if is_equality_table(atom.constraint):
            vs = set(atom.vars)
            if vs & seen:
                return False
            seen |= vs
    return True


def fresh_name(base: str, taken: set[str]) -> str:
    if base not in taken:
        taken.add(base)
        return base
    i = 1
    while f"{base}.{i}" in taken:
        i += 1
    name = f"{base}.{i}"
    taken.add(name)
    return name


# -- signature grids ---------------------------------------------------------


@dataclass(frozen=True)
class GridNode:
    label: str
    constraint: Constraint


class SignatureGrid:
    """A Holant instance: signature nodes and port-to-port edges.

    Every port of every node must be used exactly once. ``left`` optionally
    marks the variable-side nodes of a bipartite grid produced by a
    translation.
    """

    def __init__(
        self,
        nodes: Iterable[GridNode],
        edges: Iterable[tuple[tuple[int, int], tuple[int, int]]],
        left: Optional[frozenset[int]] = None,
    ):
        self.nodes = tuple(nodes)
        self.edges = tuple(tuple(map(tuple, e)) for e in edges)
        self.left = left
        used: set[tuple[int, int]] = set()
        for (i, p), (j, q) in self.edges:
            for node_i, port in ((i, p), (j, q)):
                if not 0 <= node_i < len(self.nodes):
                    raise InputError(f"edge endpoint references unknown node {node_i}")
                if not 0 <= port < self.nodes[node_i].constraint.arity:
                    raise InputError(f"port {port} out of range on node {node_i}")
                if (node_i, port) in used:
                    raise InputError(f"port ({node_i},{port}) used twice")
                used.add((node_i, port))
        for i, node in enumerate(self.nodes):
            for p in range(node.constraint.arity):
                if (i, p) not in used:
                    raise InputError(f"dangling port ({i},{p}) on node {node.label!r}")

    def __repr__(self) -> str:
        return f"SignatureGrid(nodes={len(self.nodes)}, edges={len(self.edges)})"


# -- translations -------------------------------------------------------------


def csp_to_holant(frame: ConstraintFrame) -> SignatureGrid:
    """Bipartite grid: each degree-k variable becomes an EQ_k node wired to
    its occurrence ports; unused variables become an EQ_1 pair (value 2)."""
    nodes: list[GridNode] = []
    edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
    atom_node: dict[int, int] = {}
    for ai, atom in enumerate(frame.atoms):
        atom_node[ai] = len(nodes)
        nodes.append(GridNode(atom.label, atom.constraint))
    left: set[int] = set()
    eq1 = builtin("EQ", 1)
    for v in frame.variables:
        ports = [
            (atom_node[ai], pos)
            for ai, atom in enumerate(frame.atoms)
            for pos, w in enumerate(atom.vars)
            if w == v
        ]
        if not ports:
            li = len(nodes)
            nodes.append(GridNode(v, eq1))
            left.add(li)
            ri = len(nodes)
            nodes.append(GridNode(f"{v}#free", eq1))
            edges.append(((li, 0), (ri, 0)))
            continue
        vi = len(nodes)
        nodes.append(GridNode(v, builtin("EQ", len(ports))))
        left.add(vi)
        for port_idx, (ni, np_) in enumerate(ports):
            edges.append(((vi, port_idx), (ni, np_)))
    return SignatureGrid(nodes, edges, left=frozenset(left))


def holant_eq3_form(grid: SignatureGrid) -> SignatureGrid:
    """Rewrite a bipartite grid whose left labels are EQ_1/EQ_2/EQ_3 into
    one whose left labels are all EQ_3, preserving the Holant value."""
    if grid.left is None:
        raise PreconditionError("grid does not mark its variable-side nodes")
    eq1 = builtin("EQ", 1)
    eq3 = builtin("EQ", 3)
    for i in grid.left:
        c = grid.nodes[i].constraint
        if c.arity > 3 or not is_equality_table(c, min_arity=1):
            raise PreconditionError("left labels must be EQ_1, EQ_2 or EQ_3")
    nodes = list(grid.nodes)
    edges = list(grid.edges)
    left = set(grid.left)
    for i in sorted(grid.left):
        c = nodes[i].constraint
        missing = 3 - c.arity
        if missing == 0:
            continue
        nodes[i] = GridNode(nodes[i].label, eq3)
        for extra in range(missing):
            ui = len(nodes)
            nodes.append(GridNode(f"{nodes[i].label}#pad{extra}", eq1))
            edges.append(((i, c.arity + extra), (ui, 0)))
    return SignatureGrid(nodes, edges, left=frozenset(left))


def degree2_to_holant(frame: ConstraintFrame) -> SignatureGrid:
    """Degree <= 2 frame to a plain grid: shared variables become direct
    edges, degree-1 variables hang an EQ_1 node, unused variables an EQ_1
    pair."""
    if degree(frame) > 2:
        raise PreconditionError("translation needs instance degree <= 2")
    nodes = [GridNode(a.label, a.constraint) for a in frame.atoms]
    edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
    eq1 = builtin("EQ", 1)
    for v in frame.variables:
        ports = [
            (ai, pos)
            for ai, atom in enumerate(frame.atoms)
            for pos, w in enumerate(atom.vars)
            if w == v
        ]
        if len(ports) == 2:
            edges.append((ports[0], ports[1]))
        elif len(ports) == 1:
            ui = len(nodes)
            nodes.append(GridNode(f"{v}#u", eq1))
            edges.append((ports[0], (ui, 0)))
        else:
            a = len(nodes)
            nodes.append(GridNode(f"{v}#u0", eq1))
            b = len(nodes)
            nodes.append(GridNode(f"{v}#u1", eq1))
            edges.append(((a, 0), (b, 0)))
    return SignatureGrid(nodes, edges)


def holant_to_degree2(grid: SignatureGrid) -> ConstraintFrame:
    """Each edge becomes a variable (occurring exactly twice), each node an
    atom reading its edge variables in port order."""
    names: list[str] = [f"e{idx}" for idx in range(len(grid.edges))]
    port_var: dict[tuple[int, int], str] = {}
    for name, ((i, p), (j, q)) in zip(names, grid.edges):
        port_var[(i, p)] = name
        port_var[(j, q)] = name
    atoms = []
    for ni, node in enumerate(grid.nodes):
        vs = tuple(port_var[(ni, p)] for p in range(node.constraint.arity))
        atoms.append(FrameAtom(node.label, node.constraint, vs))
    return ConstraintFrame(names, atoms)
