"""Independent brute-force oracles.

These deliberately avoid the library's decision paths: evaluation loops
run on GaussianRational values directly (no kernel, no elimination), and
the class oracles decide membership by recursive factor extraction
instead of support/cross-ratio analysis.
"""

from itertools import product

from cspcount.constraints import (
    Constraint,
    bits_to_index,
    identify,
    index_to_bits,
    pin,
)
from cspcount.scalars import ONE, ZERO


def brute_csp(frame):
    """Direct sum over variable assignments, no kernel involvement."""
    total = ZERO
    n = len(frame.variables)
    for bits in product((0, 1), repeat=n):
        asg = dict(zip(frame.variables, bits))
        term = ONE
        for atom in frame.atoms:
            term = term * atom.constraint.value([asg[v] for v in atom.vars])
            if term.is_zero():
                break
        total = total + term
    return total


def brute_holant(grid):
    """Direct sum over edge assignments."""
    total = ZERO
    m = len(grid.edges)
    port_edge = {}
    for ei, ((i, p), (j, q)) in enumerate(grid.edges):
        port_edge[(i, p)] = ei
        port_edge[(j, q)] = ei
    for bits in product((0, 1), repeat=m):
        term = ONE
        for ni, node in enumerate(grid.nodes):
            vals = [bits[port_edge[(ni, p)]] for p in range(node.constraint.arity)]
            term = term * node.constraint.value(vals)
            if term.is_zero():
                break
        total = total + term
    return total


def _is_zero_constraint(f):
    return all(v.is_zero() for v in f.table)


def _proportional(f, g):
    """f == lam * g for some nonzero lam (g not identically zero)."""
    lam = None
    for a, b in zip(f.table, g.table):
        if b.is_zero():
            if not a.is_zero():
                return False
            continue
        ratio = a / b
        if lam is None:
            lam = ratio
        elif lam != ratio:
            return False
    return lam is not None and not lam.is_zero()


def brute_degenerate(f):
    """Recursive slice-proportionality test for rank-1 tensors."""
    if f.arity <= 1:
        return True
    s0, s1 = pin(f, 1, 0), pin(f, 1, 1)
    if _is_zero_constraint(s0):
        return brute_degenerate(s1)
    if _is_zero_constraint(s1):
        return brute_degenerate(s0)
    return _proportional(s0, s1) and brute_degenerate(s1)


def _antidiagonal_restrict(f, i, j):
    """The constraint f with x_j replaced by NOT x_i (j dropped)."""
    k = f.arity
    keep = [p for p in range(1, k + 1) if p != j]
    table = []
    for idx in range(1 << (k - 1)):
        bits = index_to_bits(idx, k - 1)
        asg = dict(zip(keep, bits))
        full = tuple(
            asg[p] if p != j else asg[i] ^ 1 for p in range(1, k + 1)
        )
        table.append(f.table[bits_to_index(full)])
    return Constraint(k - 1, table)


def brute_ed(f):
    """Recursive factor extraction: peel a pinned variable, a unary factor
    (proportional slices), or a forced (dis)equality between two
    variables; membership in the equality/disequality class is preserved
    and reflected by each extraction."""
    if _is_zero_constraint(f):
        return True
    if f.arity <= 1:
        return True
    k = f.arity
    for i in range(1, k + 1):
        s0, s1 = pin(f, i, 0), pin(f, i, 1)
        if _is_zero_constraint(s0):
            return brute_ed(s1)
        if _is_zero_constraint(s1):
            return brute_ed(s0)
        if _proportional(s0, s1):
            return brute_ed(s1)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            off_diag_zero = True
            diag_zero = True
            for idx in range(1 << k):
                bits = index_to_bits(idx, k)
                if f.table[idx].is_zero():
                    continue
                if bits[i - 1] != bits[j - 1]:
                    off_diag_zero = False
                else:
                    diag_zero = False
            if off_diag_zero:
                return brute_ed(identify(f, i, j))
            if diag_zero:
                return brute_ed(_antidiagonal_restrict(f, i, j))
    return False
