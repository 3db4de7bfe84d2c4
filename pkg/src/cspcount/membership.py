"""Deciders and factorizers for the structured constraint classes.

Classes: degenerate constraints (products of unaries), the
equality/disequality class (unaries + binary equality + binary
disequality), and the monotone-clause classes whose underlying relation is
a positive product of OR (resp. NAND) clauses and unit pins.

Every positive decision is backed by an explicit witness that reproduces
the constraint or relation exactly under enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .constraints import (
    Constraint,
    bits_to_index,
    index_to_bits,
    pin,
    support,
)
from .errors import InputError, PreconditionError
from .scalars import ONE, ZERO, GaussianRational

__all__ = [
    "FactorAtom",
    "FactorList",
    "DistinctiveList",
    "unary_atom",
    "delta_atom",
    "eq2_atom",
    "xor2_atom",
    "or_atom",
    "nand_atom",
    "degenerate_factorization",
    "is_degenerate",
    "binary_dg_test",
    "ed_factorization",
    "ed_membership",
    "disj_membership",
    "nand_membership",
    "distinctive_list",
    "normalize_factor_list",
    "width",
]


@dataclass(frozen=True)
class FactorAtom:
    """One factor of a decomposition; vars are 1-based host positions.

    kinds: "unary" (weights), "delta" (pin, carries bit), "eq2"/"xor2"
    (binary ties, a variable may repeat), "or"/"nand" (relational clauses
    over distinct variables).
    """

    kind: str
    vars: tuple[int, ...]
    weights: Optional[tuple[GaussianRational, GaussianRational]] = None
    bit: Optional[int] = None

    def evaluate(self, bits: Sequence[int]) -> GaussianRational:
        """Value on a full host assignment (1-based lookup via vars)."""
        vals = [bits[v - 1] for v in self.vars]
        if self.kind == "unary":
            return self.weights[vals[0]]
        if self.kind == "delta":
            return ONE if vals[0] == self.bit else ZERO
        if self.kind == "eq2":
            return ONE if vals[0] == vals[1] else ZERO
        if self.kind == "xor2":
            return ONE if vals[0] != vals[1] else ZERO
        if self.kind == "or":
            return ONE if any(vals) else ZERO
        if self.kind == "nand":
            return ZERO if all(vals) else ONE
        raise InputError(f"unknown factor kind {self.kind!r}")


def unary_atom(var: int, w0, w1) -> FactorAtom:
    from .scalars import gr

    return FactorAtom("unary", (var,), weights=(gr(w0), gr(w1)))


def delta_atom(bit: int, var: int) -> FactorAtom:
    return FactorAtom("delta", (var,), bit=bit)


def eq2_atom(a: int, b: int) -> FactorAtom:
    return FactorAtom("eq2", (a, b))


def xor2_atom(a: int, b: int) -> FactorAtom:
    return FactorAtom("xor2", (a, b))


def or_atom(vars_: Iterable[int]) -> FactorAtom:
    vs = tuple(vars_)
    if len(set(vs)) != len(vs) or not vs:
        raise InputError("clause atoms need distinct variables")
    return FactorAtom("or", vs)


def nand_atom(vars_: Iterable[int]) -> FactorAtom:
    vs = tuple(vars_)
    if len(set(vs)) != len(vs) or not vs:
        raise InputError("clause atoms need distinct variables")
    return FactorAtom("nand", vs)


@dataclass(frozen=True)
class FactorList:
    """scalar * product(atoms); reproduces the factored object exactly."""

    scalar: GaussianRational
    atoms: tuple[FactorAtom, ...]

    def evaluate(self, arity: int) -> Constraint:
        table = []
        for idx in range(1 << arity):
            bits = index_to_bits(idx, arity)
            v = self.scalar
            for atom in self.atoms:
                if v.is_zero():
                    break
                v = v * atom.evaluate(bits)
            table.append(v)
        return Constraint(arity, table)

    def reproduces(self, f: Constraint) -> bool:
        return self.evaluate(f.arity) == f


@dataclass(frozen=True)
class DistinctiveList:
    """Canonical pin/clause presentation of a monotone-clause relation.

    kind is "or" or "nand"; pins are (bit, var) pairs; clauses are sorted
    variable tuples of length >= 2, pairwise subset-incomparable and
    disjoint from the pinned variables.
    """

    kind: str
    pins: frozenset[tuple[int, int]]
    clauses: frozenset[tuple[int, ...]]

    def relation(self, arity: int) -> Constraint:
        atoms = [delta_atom(b, v) for b, v in sorted(self.pins)]
        mk = or_atom if self.kind == "or" else nand_atom
        atoms.extend(mk(c) for c in sorted(self.clauses))
        return FactorList(ONE, tuple(atoms)).evaluate(arity)

    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


# -- degenerate constraints ------------------------------------------------


def degenerate_factorization(f: Constraint) -> Optional[FactorList]:
    """Witness that f is a product of unaries on distinct variables."""
    k = f.arity
    sup = support(f)
    if not sup:
        atoms = [unary_atom(1, ZERO, ZERO)]
        atoms += [unary_atom(i, ONE, ONE) for i in range(2, k + 1)]
        return FactorList(ONE, tuple(atoms))
    base_idx = sup[0]
    base = index_to_bits(base_idx, k)
    base_val = f.table[base_idx]
    # candidate unaries are the axis slices through the base point; if f is
    # a rank-1 tensor this is the unique witness up to scaling
    atoms = []
    for i in range(k):
        flipped = list(base)
        flipped[i] = 0
        w0 = f.table[bits_to_index(flipped)]
        flipped[i] = 1
        w1 = f.table[bits_to_index(flipped)]
        atoms.append(unary_atom(i + 1, w0, w1))
    scalar = base_val ** (-(k - 1)) if k >= 1 else base_val
    witness = FactorList(scalar, tuple(atoms))
    if witness.reproduces(f):
        return witness
    return None


def is_degenerate(f: Constraint) -> bool:
    return degenerate_factorization(f) is not None


def binary_dg_test(f: Constraint) -> bool:
    """Degeneracy of a binary (a,b,c,d) is exactly ad == bc."""
    if f.arity != 2:
        raise PreconditionError("binary_dg_test needs arity 2")
    a, b, c, d = f.table
    return a * d == b * c


# -- equality/disequality class ---------------------------------------------


def _pins_and_free(f: Constraint) -> tuple[dict[int, int], list[int], list[int]]:
    """Support-constant columns (0-based) and the remaining free columns."""
    k = f.arity
    sup = support(f)
    pins: dict[int, int] = {}
    free: list[int] = []
    for i in range(k):
        col = {(idx >> (k - 1 - i)) & 1 for idx in sup}
        if len(col) == 1:
            pins[i] = col.pop()
        else:
            free.append(i)
    return pins, free, sup


def ed_factorization(f: Constraint) -> Optional[FactorList]:
    """Witness over unary/eq2/xor2/delta atoms, or None.

    Decision: (1) the support must be exactly the solution set of its own
    forced pins and forced pairwise (dis)equalities; (2) on the quotient of
    tied components the weights must pass the rank-1 cross-ratio test;
    (3) the witness is assembled from single-component flip ratios.
    """
    k = f.arity
    sup = support(f)
    if not sup:
        return FactorList(ONE, (delta_atom(0, 1), delta_atom(1, 1)))
    pins, free, _ = _pins_and_free(f)

    # forced ties between free columns, derived over the whole support
    bit = lambda idx, i: (idx >> (k - 1 - i)) & 1
    parent: dict[int, int] = {i: i for i in free}
    parity: dict[int, int] = {i: 0 for i in free}

    def find(x: int) -> tuple[int, int]:
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    for a in range(len(free)):
        for b in range(a + 1, len(free)):
            i, j = free[a], free[b]
            rels = {bit(idx, i) ^ bit(idx, j) for idx in sup}
            if len(rels) == 1:
                ri, pi = find(i)
                rj, pj = find(j)
                if ri != rj:
                    parent[rj] = ri
                    parity[rj] = pi ^ pj ^ rels.pop()

    comps: dict[int, list[int]] = {}
    for i in free:
        r, _ = find(i)
        comps.setdefault(r, []).append(i)
    m = len(comps)
    if len(sup) != 1 << m:
        return None

    base_idx = sup[0]
    base = list(index_to_bits(base_idx, k))
    base_val = f.table[base_idx]
    roots = sorted(comps)

    def flip_component(bits: list[int], root: int) -> list[int]:
        out = list(bits)
        for v in comps[root]:
            out[v] ^= 1
        return out

    flip_vals = {
        r: f.table[bits_to_index(flip_component(base, r))] for r in roots
    }

    # rank-1 cross-ratio test on the support
    for idx in sup:
        bits = index_to_bits(idx, k)
        rhs = ONE
        for r in roots:
            rhs = rhs * (flip_vals[r] if bits[r] != base[r] else base_val)
        if f.table[idx] * base_val ** (m - 1) != rhs:
            return None

    atoms: list[FactorAtom] = []
    for i, c in sorted(pins.items()):
        atoms.append(delta_atom(c, i + 1))
    for r in roots:
        rr, _ = find(r)
        for v in comps[r]:
            if v == r:
                continue
            _, pv = find(v)
            atoms.append(eq2_atom(r + 1, v + 1) if pv == 0 else xor2_atom(r + 1, v + 1))
        ratio = flip_vals[r] / base_val
        w = [ONE, ONE]
        w[base[r] ^ 1] = ratio
        atoms.append(unary_atom(r + 1, w[0], w[1]))
    witness = FactorList(base_val, tuple(atoms))
    assert witness.reproduces(f), "internal: assembled witness must match"
    return witness


def ed_membership(f: Constraint) -> bool:
    return ed_factorization(f) is not None


# -- monotone clause classes -------------------------------------------------


def _free_projection(f: Constraint) -> tuple[dict[int, int], list[int], set[tuple[int, ...]]]:
    k = f.arity
    pins, free, sup = _pins_and_free(f)
    proj = {
        tuple((idx >> (k - 1 - i)) & 1 for i in free)
        for idx in sup
    }
    return pins, free, proj


def _closed(proj: set[tuple[int, ...]], m: int, upward: bool) -> bool:
    for t in proj:
        for i in range(m):
            if upward and t[i] == 0:
                u = t[:i] + (1,) + t[i + 1 :]
                if u not in proj:
                    return False
            if not upward and t[i] == 1:
                u = t[:i] + (0,) + t[i + 1 :]
                if u not in proj:
                    return False
    return True


def _clause_membership(f: Constraint, upward: bool) -> bool:
    if not support(f):
        return True
    pins, free, proj = _free_projection(f)
    if not pins and len(proj) == 1 << len(free):
        # the full relation is not a positive product: every admissible
        # factor excludes at least one assignment
        return False
    return _closed(proj, len(free), upward)


def disj_membership(f: Constraint) -> bool:
    return _clause_membership(f, upward=True)


def nand_membership(f: Constraint) -> bool:
    return _clause_membership(f, upward=False)


def distinctive_list(f: Constraint, mode: str) -> DistinctiveList:
    """The unique normalized pin/clause presentation of R_f.

    Clauses are read off the maximal (for "or") resp. minimal (for "nand")
    non-members of the projection onto the free coordinates.
    """
    if mode not in ("or", "nand"):
        raise InputError("mode must be 'or' or 'nand'")
    upward = mode == "or"
    if not (disj_membership(f) if upward else nand_membership(f)):
        raise PreconditionError(f"constraint is not in the {mode.upper()} clause class")
    if not support(f):
        raise PreconditionError("the empty relation has no distinctive list")
    pins, free, proj = _free_projection(f)
    m = len(free)
    non_members = [
        t
        for idx in range(1 << m)
        if (t := index_to_bits(idx, m)) not in proj
    ]
    clauses: set[tuple[int, ...]] = set()
    for z in non_members:
        if upward:
            # maximal non-member: flipping any 0 to 1 lands in the relation
            if all(
                z[:i] + (1,) + z[i + 1 :] in proj for i in range(m) if z[i] == 0
            ):
                clauses.add(tuple(free[i] + 1 for i in range(m) if z[i] == 0))
        else:
            if all(
                z[:i] + (0,) + z[i + 1 :] in proj for i in range(m) if z[i] == 1
            ):
                clauses.add(tuple(free[i] + 1 for i in range(m) if z[i] == 1))
    return DistinctiveList(
        mode,
        frozenset((c, i + 1) for i, c in pins.items()),
        frozenset(clauses),
    )


def width(f: Constraint) -> int:
    """Maximal clause arity in the distinctive list (0 when pins only)."""
    if disj_membership(f):
        mode = "or"
    elif nand_membership(f):
        mode = "nand"
    else:
        raise PreconditionError("width needs a clause-class constraint")
    if not support(f):
        raise PreconditionError("width of the empty relation is undefined")
    return distinctive_list(f, mode).width()


def normalize_factor_list(
    arity: int, atoms: Sequence[FactorAtom], mode: str
) -> DistinctiveList:
    """Normalize an arbitrary pin/clause presentation to its distinctive
    list: drop duplicated clause variables, drop clauses neutralized by a
    pin, shrink clauses through opposite pins, promote unit clauses to
    pins, and remove subset-subsumed clauses. Rejects presentations of the
    empty relation."""
    if mode not in ("or", "nand"):
        raise InputError("mode must be 'or' or 'nand'")
    absorb = 1 if mode == "or" else 0  # pin value that satisfies a clause
    pins: dict[int, int] = {}
    clauses: list[list[int]] = []
    for atom in atoms:
        if atom.kind == "delta":
            v = atom.vars[0]
            if pins.get(v, atom.bit) != atom.bit:
                raise PreconditionError("presentation describes the empty relation")
            pins[v] = atom.bit
        elif atom.kind == mode:
            clauses.append(list(dict.fromkeys(atom.vars)))
        else:
            raise InputError(f"unsupported atom kind {atom.kind!r} for {mode} list")

    changed = True
    while changed:
        changed = False
        kept: list[list[int]] = []
        for cl in clauses:
            cl = list(dict.fromkeys(cl))
            if any(pins.get(v) == absorb for v in cl):
                changed = True
                continue
            shrunk = [v for v in cl if v not in pins]
            if len(shrunk) != len(cl):
                changed = True
            if not shrunk:
                raise PreconditionError("presentation describes the empty relation")
            if len(shrunk) == 1:
                v = shrunk[0]
                if pins.get(v, absorb) != absorb:
                    raise PreconditionError("presentation describes the empty relation")
                if v not in pins:
                    pins[v] = absorb
                    changed = True
                continue
            kept.append(shrunk)
        clauses = kept

    sets = [frozenset(c) for c in clauses]
    reduced: set[frozenset[int]] = set()
    for s in sets:
        if any(o < s for o in sets):
            continue
        reduced.add(s)
    return DistinctiveList(
        mode,
        frozenset((c, v) for v, c in pins.items()),
        frozenset(tuple(sorted(s)) for s in reduced),
    )
