"""
Polynomial-time membership for powers of the four-element transformation
semigroup on two letters.

A tuple splits into its constant part (coordinates carrying one of the two
constant maps) and the rest, which behaves like a GF(2) vector (identity = 0,
transposition = 1). The solver peels off a candidate last generator with
nonempty constant part, fixes up the constant coordinates with a GF(2)
solve, and recurses on the surviving non-constant coordinates; with no
constant coordinates left the whole question is one GF(2) span membership.
"""

from __future__ import annotations

import numpy as np

from .core import SmpInstance, builtin

__all__ = ["z2_membership", "t2_smp", "T2_ZERO", "T2_ID", "T2_FLIP", "T2_ONE"]

# canonical indices in builtin("T(2)"): image words 11, 12, 21, 22
T2_ZERO, T2_ID, T2_FLIP, T2_ONE = 1, 2, 3, 4

_T2 = builtin("T(2)")
_T2_TBL = _T2.np_table()


def z2_membership(vectors, target, allow_empty: bool):
    """Is the target a sum of a sub-multiset of the given GF(2) vectors?

    With allow_empty the empty sum (zero vector) is admitted. Since v+v = 0,
    a zero target is reachable by a nonempty combination iff any vector
    exists at all, in which case the doubled first vector is reported.
    Returns (member, combination) with 1-based indices, deterministically:
    vectors are eliminated in index order with pivots on the lowest column.
    """
    vectors = [list(v) for v in vectors]
    target = list(target)
    width = len(target)
    for v in vectors:
        if len(v) != width:
            raise ValueError(f"vector length {len(v)} does not match target length {width}")

    def mask(bits):
        m = 0
        for col, bit in enumerate(bits):
            if bit:
                m |= 1 << col
        return m

    basis = {}  # pivot column -> (row mask, combination mask)
    for i, v in enumerate(vectors):
        row, combo = mask(v), 1 << i
        while row:
            piv = (row & -row).bit_length() - 1
            if piv not in basis:
                basis[piv] = (row, combo)
                break
            brow, bcombo = basis[piv]
            row ^= brow
            combo ^= bcombo

    row, combo = mask(target), 0
    while row:
        piv = (row & -row).bit_length() - 1
        if piv not in basis:
            return False, None
        brow, bcombo = basis[piv]
        row ^= brow
        combo ^= bcombo
    indices = [i + 1 for i in range(len(vectors)) if combo >> i & 1]
    if indices or allow_empty:
        return True, indices
    if vectors:
        return True, [1, 1]  # zero target as a nonempty product: v1 * v1
    return False, None


def _constant_mask(tup: np.ndarray) -> np.ndarray:
    return (tup == T2_ZERO) | (tup == T2_ONE)


def t2_smp(inst: SmpInstance, stats: dict | None = None) -> bool:
    """Exact membership over builtin T(2), polynomial in n and k."""
    if inst.semigroup.table != _T2.table:
        raise ValueError("t2_smp only applies to the builtin T(2) semigroup")
    gens = [np.array(g, dtype=np.int16) for g in inst.generators]
    b = np.array(inst.target, dtype=np.int16)
    bcp = _constant_mask(b)
    # generators whose constant part sticks out of the target's can never occur
    gens = [g for g in gens if not np.any(_constant_mask(g) & ~bcp)]
    if stats is not None:
        stats["max_depth"] = 0
    return _solve(gens, b, depth=1, max_n=inst.n, stats=stats)


def _solve(gens, b, depth, max_n, stats) -> bool:
    assert depth <= max_n + 1, "recursion exceeded the coordinate budget"
    if stats is not None:
        stats["max_depth"] = max(stats["max_depth"], depth)
    n = len(b)
    if n == 0:
        return len(gens) > 0  # every nonempty product equals the empty tuple
    cp = [_constant_mask(g) for g in gens]
    empties = [i for i in range(len(gens)) if not cp[i].any()]
    others = [i for i in range(len(gens)) if cp[i].any()]
    bcp = _constant_mask(b)

    if not bcp.any():
        vectors = [(gens[i] == T2_FLIP).astype(np.int8) for i in empties]
        return z2_membership(vectors, (b == T2_FLIP).astype(np.int8), allow_empty=False)[0]

    for i in others:
        # can gens[i] be the last factor with nonempty constant part?
        here = np.flatnonzero(cp[i])
        assert not np.any(cp[i] & ~bcp), "constant-part invariant broken in recursion"
        demand = (b[here] != gens[i][here]).astype(np.int8)
        vectors = [(gens[j][here] == T2_FLIP).astype(np.int8) for j in empties]
        ok, combo = z2_membership(vectors, demand, allow_empty=True)
        if not ok:
            continue
        c = b
        for j in combo:
            c = _T2_TBL[c - 1, gens[empties[j - 1]] - 1] + 1
        rest = np.flatnonzero(~cp[i])
        return _solve([g[rest] for g in gens], c[rest], depth + 1, max_n, stats)
    return False
