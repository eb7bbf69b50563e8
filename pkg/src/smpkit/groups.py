"""
Membership in subgroups of G^n for a finite group G, in time polynomial in
n, k and |G|.

The chain stores, per coordinate level j, one representative for each value
v in G that is achieved at j by a chain element that is the identity on all
earlier coordinates. Sifting a tuple reduces it level by level with the
stored representatives; it sifts to the identity exactly when it lies in
the generated subgroup.

Completeness is established by Schreier saturation: for every level j,
every transversal element t at j and every representative s at levels >= j,
the Schreier element t' ^-1 * (t * s) must sift to the identity through the
deeper levels (t' being the representative matching the product's value at
j); failures are installed as new representatives and the checks repeat
until stable. When G is abelian it suffices to take s from level j itself,
which keeps the benchmark-sized builds cheap.

Witness words stay over the original generators: inverses are eliminated by
raising to (order - 1), so every stored representative carries a nonempty
product of generator indices that evaluates to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Semigroup, SmpInstance

__all__ = ["StabilizerChain", "group_smp"]


@dataclass(frozen=True)
class _Rep:
    vec: np.ndarray  # 0-based element indices, identity before its level
    inv: np.ndarray
    word: tuple | None
    order: int  # order of the tuple in G^n (lcm of coordinate orders)


class StabilizerChain:
    """Strong-generator chain for a subgroup of G^n given by generators."""

    def __init__(self, group: Semigroup, n: int, generators, track_words=True):
        if not group.is_group():
            raise ValueError("stabilizer chains need a group (identity and inverses)")
        self.group = group
        self.n = n
        self.track_words = track_words
        self._t0 = group.np_table()
        e = group.identity()
        self._e0 = e - 1
        self._inv0 = np.array([group.inverse(x) - 1 for x in group.elements], dtype=np.int16)
        self._ord0 = np.array([group.element_order(x) for x in group.elements], dtype=np.int64)
        self._abelian = group.is_commutative()
        self.levels: list[dict] = [dict() for _ in range(n)]
        gens0 = [np.array(g, dtype=np.int16) - 1 for g in generators]
        self._build(gens0)

    # -- vector helpers ----------------------------------------------------

    def _first_nonid(self, vec, start=0):
        nz = np.flatnonzero(vec[start:] != self._e0)
        return start + int(nz[0]) if len(nz) else None

    def _tuple_order(self, vec) -> int:
        out = 1
        for o in np.unique(self._ord0[vec]):
            out = math.lcm(out, int(o))
        return out

    def _inv_word(self, rep: _Rep) -> tuple:
        return rep.word * (rep.order - 1)

    def _mul_from(self, u, v, j):
        """u * v restricted to coordinates >= j; both are identity before j."""
        out = np.full(self.n, self._e0, dtype=np.int16)
        out[j:] = self._t0[u[j:], v[j:]]
        return out

    # -- sifting -----------------------------------------------------------

    def _sift(self, vec):
        """Reduce vec through the chain.

        Returns (None, used) when vec reduces to the identity, where `used`
        lists the representatives consumed in order (so vec = product of
        their vecs); otherwise ((j, residue), used) with the reduction stuck
        at level j.
        """
        vec = np.array(vec, dtype=np.int16, copy=True)
        used = []
        j = self._first_nonid(vec)
        while j is not None:
            rep = self.levels[j].get(int(vec[j]))
            if rep is None:
                return (j, vec), used
            vec[j:] = self._t0[rep.inv[j:], vec[j:]]
            used.append(rep)
            j = self._first_nonid(vec, j)
        return None, used

    def _residue_word(self, word, used):
        """Word for rep_t^-1 ... rep_1^-1 * x given x's word and the reps used."""
        if not self.track_words:
            return None
        parts = []
        for rep in reversed(used):
            parts.extend(self._inv_word(rep))
        parts.extend(word)
        return tuple(parts)

    def _insert(self, vec, word):
        """Sift vec; install the residue as a new representative if stuck.

        Returns the level where something was installed, or None.
        """
        stuck, used = self._sift(vec)
        if stuck is None:
            return None
        j, residue = stuck
        rep = _Rep(
            vec=residue,
            inv=self._inv0[residue],
            word=self._residue_word(word, used),
            order=self._tuple_order(residue),
        )
        self.levels[j][int(residue[j])] = rep
        return j

    # -- construction ------------------------------------------------------

    def _build(self, gens0):
        for idx, g in enumerate(gens0):
            self._insert(g, (idx + 1,) if self.track_words else None)
        # Sifting decomposes x = t * (t^-1 x) with the transversal element on
        # the left, so the Schreier generators take the form bar(s*t)^-1 * s*t:
        # generator times transversal, not the other way around.
        checked = set()
        while True:
            installed = False
            for j in range(self.n - 1, -1, -1):
                if not self.levels[j]:
                    continue
                t_items = sorted(self.levels[j].items())
                if self._abelian:
                    s_items = t_items
                else:
                    s_items = [
                        it for l in range(j, self.n) for it in sorted(self.levels[l].items())
                    ]
                for sv, s in s_items:
                    for tv, t in t_items:
                        key = (j, id(s), id(t))
                        if key in checked:
                            continue
                        checked.add(key)
                        prod = self._mul_from(s.vec, t.vec, j)
                        word = (s.word + t.word) if self.track_words else None
                        if self._insert(prod, word) is not None:
                            installed = True
            if not installed:
                return

    # -- queries -----------------------------------------------------------

    def total_representatives(self) -> int:
        return sum(len(level) for level in self.levels)

    def membership(self, tup):
        """(member, witness word) for a tuple of 1-based element indices."""
        vec = np.array(tup, dtype=np.int16) - 1
        stuck, used = self._sift(vec)
        if stuck is not None:
            return False, None
        if not self.track_words:
            return True, None
        word = []
        for rep in used:
            word.extend(rep.word)
        return True, tuple(word)


def group_smp(inst: SmpInstance, want_witness: bool = True):
    """Exact subpower membership over a finite group.

    Returns (member, witness); the witness is a nonempty generator word
    evaluating to the target (inverses never appear: they are realized as
    powers). Membership in the generated subsemigroup coincides with
    subgroup membership because every generator reaches the identity by a
    nonempty power.
    """
    s = inst.semigroup
    if not s.is_group():
        raise ValueError("group_smp needs a group")
    if inst.k == 0:
        return False, None
    e = s.identity()
    if all(v == e for v in inst.target):
        if not want_witness:
            return True, None
        g = inst.generators[0]
        order = 1
        for v in g:
            order = math.lcm(order, s.element_order(v))
        return True, (1,) * order
    chain = StabilizerChain(s, inst.n, inst.generators, track_words=want_witness)
    return chain.membership(inst.target)
