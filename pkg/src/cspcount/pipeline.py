"""Value-preserving frame rewrites and their composition into the
degree-3 reduction: merge away equality atoms, split every variable to
occurrence degree <= 2 behind a fresh equality star, then substitute a
verified equality gadget (built from a designated hard constraint plus
unaries) for every equality atom.

Scalars are tracked globally: the result records kappa with
csp(new frame) = kappa * csp(original frame), exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .constraints import Constraint, builtin
from .errors import PreconditionError, VerificationError
from .evaluators import DEFAULT_CAP, eval_csp_bruteforce
from .frames import (
    ConstraintFrame,
    FrameAtom,
    check_eq_separation,
    degree,
    fresh_name,
    is_equality_table,
)
from .gadgets import Derivation, build_eq_gadget
from .membership import ed_membership
from .scalars import ONE, GaussianRational

__all__ = [
    "ReductionResult",
    "eliminate_eq_nodes",
    "to_degree2_eqform",
    "substitute_eq_gadgets",
    "reduce_to_degree3",
    "verify_reduction",
    "derivation_cache",
]


@dataclass
class ReductionResult:
    frame: ConstraintFrame
    kappa: GaussianRational
    trace: list[dict] = field(default_factory=list)

    def chain(self, other: "ReductionResult") -> "ReductionResult":
        return ReductionResult(
            other.frame, self.kappa * other.kappa, self.trace + other.trace
        )


def eliminate_eq_nodes(frame: ConstraintFrame) -> ReductionResult:
    """Merge the variable classes of every exact-equality atom, keeping one
    arity-1 equality atom per merged class (a free unary, value-neutral).
    Duplicate variables inside an equality tuple are dropped first."""
    parent: dict[str, str] = {v: v for v in frame.variables}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    eq_atoms: list[FrameAtom] = []
    rest: list[FrameAtom] = []
    for atom in frame.atoms:
        if is_equality_table(atom.constraint):
            eq_atoms.append(atom)
        else:
            rest.append(atom)
    for atom in eq_atoms:
        distinct = list(dict.fromkeys(atom.vars))
        for v in distinct[1:]:
            union(distinct[0], v)

    rename = {v: find(v) for v in frame.variables}
    variables = list(dict.fromkeys(rename[v] for v in frame.variables))
    eq1 = builtin("EQ", 1)
    atoms = [
        FrameAtom(a.label, a.constraint, tuple(rename[v] for v in a.vars))
        for a in rest
    ]
    atoms.extend(
        FrameAtom(a.label, eq1, (rename[a.vars[0]],)) for a in eq_atoms
    )
    trace = [{"op": "eliminate_eq_nodes", "merged_atoms": len(eq_atoms)}]
    return ReductionResult(ConstraintFrame(variables, atoms), ONE, trace)


def to_degree2_eqform(frame: ConstraintFrame) -> ReductionResult:
    """Replace every variable of occurrence degree d >= 2 by d fresh
    variables joined through one EQ_d atom, so every variable occurs at
    most twice and no two equality atoms share a variable."""
    for atom in frame.atoms:
        if is_equality_table(atom.constraint):
            raise PreconditionError("frame must not contain equality atoms")
    occ = frame.occurrences()
    taken = set(frame.variables)
    variables: list[str] = []
    replacements: dict[str, list[str]] = {}
    new_atoms_tail: list[FrameAtom] = []
    trace: list[dict] = []
    for v in frame.variables:
        if occ[v] < 2:
            variables.append(v)
            continue
        copies = [fresh_name(f"{v}", taken) for _ in range(occ[v])]
        replacements[v] = copies
        variables.extend(copies)
        new_atoms_tail.append(
            FrameAtom(f"eq:{v}", builtin("EQ", occ[v]), tuple(copies))
        )
        trace.append({"op": "split_variable", "variable": v, "degree": occ[v]})

    cursor = {v: 0 for v in replacements}
    atoms: list[FrameAtom] = []
    for atom in frame.atoms:
        new_vars = []
        for v in atom.vars:
            if v in replacements:
                new_vars.append(replacements[v][cursor[v]])
                cursor[v] += 1
            else:
                new_vars.append(v)
        atoms.append(FrameAtom(atom.label, atom.constraint, tuple(new_vars)))
    atoms.extend(new_atoms_tail)
    return ReductionResult(ConstraintFrame(variables, atoms), ONE, trace)


def derivation_cache(hard: Constraint) -> Callable[[int], Derivation]:
    """Memoized builder of equality gadgets from one hard constraint."""
    memo: dict[int, Derivation] = {}

    def build(d: int) -> Derivation:
        if d not in memo:
            memo[d] = build_eq_gadget(hard, d)
        return memo[d]

    return build


def substitute_eq_gadgets(
    frame: ConstraintFrame,
    builder: Callable[[int], Derivation],
) -> ReductionResult:
    """Replace every equality atom (arity >= 2) by a verified equality
    gadget; external gadget variables attach to the atom's variables and
    internal ones become fresh frame variables. The tracked kappa is the
    product of the gadget scalars."""
    if not check_eq_separation(frame):
        raise PreconditionError("equality atoms must not share variables")
    if degree(frame) > 2:
        raise PreconditionError("frame must have degree <= 2 before substitution")
    taken = set(frame.variables)
    variables = list(frame.variables)
    atoms: list[FrameAtom] = []
    kappa = ONE
    trace: list[dict] = []
    for atom in frame.atoms:
        if not is_equality_table(atom.constraint):
            atoms.append(atom)
            continue
        if len(set(atom.vars)) != len(atom.vars):
            raise PreconditionError(
                "equality atom with a repeated variable; run eliminate_eq_nodes first"
            )
        d = atom.constraint.arity
        der = builder(d)
        mapping = {i: atom.vars[i] for i in range(d)}
        for j in range(der.gadget.internals):
            mapping[d + j] = fresh_name(f"{atom.label}.y{j}", taken)
            variables.append(mapping[d + j])
        for ci, (c, vs) in enumerate(der.gadget.atoms):
            atoms.append(
                FrameAtom(
                    f"{atom.label}.g{ci}", c, tuple(mapping[v] for v in vs)
                )
            )
        kappa = kappa * (der.scalar / der.gadget.scalar)
        trace.append(
            {
                "op": "substitute_eq_gadget",
                "atom": atom.label,
                "arity": d,
                "scalar": str(der.scalar),
                "rules": [s.rule for s in der.steps],
            }
        )
    return ReductionResult(ConstraintFrame(variables, atoms), kappa, trace)


def reduce_to_degree3(
    frame: ConstraintFrame,
    hard: Constraint,
    builder: Optional[Callable[[int], Derivation]] = None,
) -> ReductionResult:
    """Full rewrite chain to an equality-free frame of degree <= 3 over the
    original non-equality constraints, the hard constraint and unaries."""
    if ed_membership(hard):
        raise PreconditionError("the designated hard constraint is tractable")
    if builder is None:
        builder = derivation_cache(hard)
    r1 = eliminate_eq_nodes(frame)
    r2 = r1.chain(to_degree2_eqform(r1.frame))
    if not check_eq_separation(r2.frame) or degree(r2.frame) > 2:
        raise VerificationError("intermediate stage violates its invariants")
    r3 = r2.chain(substitute_eq_gadgets(r2.frame, builder))
    if degree(r3.frame) > 3:
        raise VerificationError("rewritten frame exceeds degree 3")
    return r3


def verify_reduction(
    result: ReductionResult,
    original: ConstraintFrame,
    max_vars: int = DEFAULT_CAP,
) -> bool:
    """Exact check csp(result.frame) == kappa * csp(original)."""
    new_val = eval_csp_bruteforce(result.frame, max_vars=max_vars)
    old_val = eval_csp_bruteforce(original, max_vars=max_vars)
    return new_val == result.kappa * old_val
