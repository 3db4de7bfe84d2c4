"""Boolean constraints as exact complex truth tables, plus the primitive
constructions: pinning, projection, variable identification, scaling,
pointwise products, underlying relations.

A constraint of arity k is a table of 2**k scalars in lexicographic input
order with x_1 as the most significant bit; variable positions in all
operations are 1-based.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import InputError, PreconditionError
from .scalars import ONE, ZERO, GaussianRational, gr

__all__ = [
    "Constraint",
    "builtin",
    "from_symmetric",
    "pin",
    "project",
    "identify",
    "scale",
    "pointwise_product",
    "underlying_relation",
    "nonzero_part",
    "is_non_zero",
    "is_symmetric",
    "support",
    "bits_to_index",
    "index_to_bits",
]


def bits_to_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def index_to_bits(idx: int, arity: int) -> tuple[int, ...]:
    return tuple((idx >> (arity - 1 - i)) & 1 for i in range(arity))


class Constraint:
    """Immutable truth table of GaussianRational values."""

    __slots__ = ("arity", "table")

    def __init__(self, arity: int, table: Iterable):
        entries = tuple(gr(v) for v in table)
        if arity < 0 or len(entries) != 1 << arity:
            raise InputError(
                f"table of length {len(entries)} does not match arity {arity}"
            )
        self.arity = arity
        self.table = entries

    def value(self, bits: Sequence[int]) -> GaussianRational:
        if len(bits) != self.arity:
            raise InputError("wrong number of input bits")
        return self.table[bits_to_index(bits)]

    def __getitem__(self, idx: int) -> GaussianRational:
        return self.table[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Constraint):
            return NotImplemented
        return self.arity == other.arity and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.arity, self.table))

    def __repr__(self) -> str:
        vals = ",".join(str(v) for v in self.table)
        return f"Constraint({self.arity}, ({vals}))"

    def flat_triples(self) -> list[int]:
        """Table as the flat (p, q, r) list consumed by the kernels."""
        flat: list[int] = []
        for v in self.table:
            flat.extend(v.as_triple())
        return flat


def builtin(name: str, arity: int) -> Constraint:
    """Named signatures: EQ, OR, NAND of any arity >= 1; XOR, Implies,
    Delta0, Delta1 at their fixed arities."""
    if arity < 1:
        raise InputError("builtin constraints need arity >= 1")
    if name == "EQ":
        return from_symmetric([ONE] + [ZERO] * (arity - 1) + [ONE])
    if name == "OR":
        return from_symmetric([ZERO] + [ONE] * arity)
    if name == "NAND":
        return from_symmetric([ONE] * arity + [ZERO])
    if name == "XOR":
        if arity != 2:
            raise InputError("XOR is binary")
        return from_symmetric([ZERO, ONE, ZERO])
    if name == "Implies":
        if arity != 2:
            raise InputError("Implies is binary")
        return Constraint(2, [ONE, ONE, ZERO, ONE])
    if name == "Delta0":
        if arity != 1:
            raise InputError("Delta0 is unary")
        return Constraint(1, [ONE, ZERO])
    if name == "Delta1":
        if arity != 1:
            raise InputError("Delta1 is unary")
        return Constraint(1, [ZERO, ONE])
    raise InputError(f"unknown builtin constraint {name!r}")


def from_symmetric(values: Sequence) -> Constraint:
    """Constraint whose value depends only on the Hamming weight;
    values = [f_0, ..., f_k]."""
    vals = [gr(v) for v in values]
    k = len(vals) - 1
    if k < 0:
        raise InputError("symmetric spec needs at least one value")
    table = [vals[bin(i).count("1")] for i in range(1 << k)]
    return Constraint(k, table)


def _check_pos(f: Constraint, i: int) -> None:
    if not 1 <= i <= f.arity:
        raise PreconditionError(f"variable position {i} out of range for arity {f.arity}")


def pin(f: Constraint, i: int, c: int) -> Constraint:
    """Fix input x_i to the bit c."""
    _check_pos(f, i)
    if c not in (0, 1):
        raise PreconditionError("pin value must be 0 or 1")
    k = f.arity
    table = []
    for idx in range(1 << (k - 1)):
        bits = index_to_bits(idx, k - 1)
        full = bits[: i - 1] + (c,) + bits[i - 1 :]
        table.append(f.table[bits_to_index(full)])
    return Constraint(k - 1, table)


def project(f: Constraint, i: int) -> Constraint:
    """Sum input x_i over both bit values."""
    _check_pos(f, i)
    zero_part = pin(f, i, 0)
    one_part = pin(f, i, 1)
    return Constraint(
        f.arity - 1,
        [a + b for a, b in zip(zero_part.table, one_part.table)],
    )


def identify(f: Constraint, i: int, j: int) -> Constraint:
    """Replace variable x_j by x_i (diagonal restriction)."""
    _check_pos(f, i)
    _check_pos(f, j)
    if i == j:
        raise PreconditionError("identify needs two distinct positions")
    k = f.arity
    # output variables keep f's order with position j removed
    keep = [p for p in range(1, k + 1) if p != j]
    table = []
    for idx in range(1 << (k - 1)):
        bits = index_to_bits(idx, k - 1)
        assign = dict(zip(keep, bits))
        full = tuple(assign[p] if p != j else assign[i] for p in range(1, k + 1))
        table.append(f.table[bits_to_index(full)])
    return Constraint(k - 1, table)


def scale(f: Constraint, lam: GaussianRational) -> Constraint:
    return Constraint(f.arity, [lam * v for v in f.table])


def pointwise_product(f: Constraint, g: Constraint) -> Constraint:
    if f.arity != g.arity:
        raise PreconditionError("pointwise product needs equal arities")
    return Constraint(f.arity, [a * b for a, b in zip(f.table, g.table)])


def support(f: Constraint) -> list[int]:
    """Indices of nonzero table entries."""
    return [i for i, v in enumerate(f.table) if not v.is_zero()]


def underlying_relation(f: Constraint) -> Constraint:
    return Constraint(f.arity, [ZERO if v.is_zero() else ONE for v in f.table])


def nonzero_part(f: Constraint) -> Constraint:
    """Non-zero g with underlying_relation(f) * g == f (1 off support)."""
    return Constraint(f.arity, [ONE if v.is_zero() else v for v in f.table])


def is_non_zero(f: Constraint) -> bool:
    return all(not v.is_zero() for v in f.table)


def is_symmetric(f: Constraint) -> bool:
    by_weight: dict[int, GaussianRational] = {}
    for idx, v in enumerate(f.table):
        w = bin(idx).count("1")
        if w in by_weight:
            if by_weight[w] != v:
                return False
        else:
            by_weight[w] = v
    return True
