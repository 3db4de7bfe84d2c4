"""Pure-Python enumeration kernel (fallback for the compiled extension).

Scalars travel as (p, q, r) integer triples meaning (p + q*i)/r with r > 0
and gcd(p, q, r) == 1; tables are flat lists [p0, q0, r0, p1, q1, r1, ...]
indexed in lexicographic input order. ``contract`` is the single hot
primitive: for every assignment of the leading ``n_out`` variables it sums,
over all assignments of the trailing ``n_sum`` variables, the product of
all atom values. Variable 0 carries the most significant bit everywhere.

The compiled twin in ``_ckernel.pyx`` must stay semantically identical;
``tests/test_backends.py`` compares them output-for-output.
"""

from math import gcd

BACKEND_NAME = "python"

_MAX_BITS = 62


def contract(n_out, n_sum, atoms):
    """Sum-of-products over a shared Boolean assignment space.

    atoms: sequence of (var_index_tuple, flat_triple_table).
    Returns a list of 2**n_out canonical triples.
    """
    n = n_out + n_sum
    if n > _MAX_BITS:
        raise ValueError(f"assignment space of {n} variables exceeds kernel limit")
    out = []
    for ext in range(1 << n_out):
        base = ext << n_sum
        sp, sq, sr = 0, 0, 1
        for s in range(1 << n_sum):
            a = base | s
            tp, tq, tr = 1, 0, 1
            for vars_, table in atoms:
                idx = 0
                for v in vars_:
                    idx = (idx << 1) | ((a >> (n - 1 - v)) & 1)
                j = 3 * idx
                p = table[j]
                q = table[j + 1]
                if p == 0 and q == 0:
                    tp = 0
                    tq = 0
                    break
                tp, tq = tp * p - tq * q, tp * q + tq * p
                tr *= table[j + 2]
            if tp or tq:
                sp, sq, sr = sp * tr + tp * sr, sq * tr + tq * sr, sr * tr
                g = gcd(sp, sq, sr)
                if g > 1:
                    sp //= g
                    sq //= g
                    sr //= g
        if sp == 0 and sq == 0:
            out.append((0, 0, 1))
        else:
            out.append((sp, sq, sr))
    return out
