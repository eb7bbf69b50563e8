"""
Finite semigroups given by Cayley tables, tuples in direct powers, and the
exact closure oracle for membership in generated subalgebras.

Elements are 1-based indices into the table; names are presentation only.
A tuple in S^n is a plain tuple of element indices, so everything hashes
and compares structurally.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Semigroup",
    "SmpInstance",
    "OracleResult",
    "ClosureCapExceeded",
    "make_semigroup",
    "builtin",
    "restrict",
    "tup_mul",
    "tup_pow",
    "idempotent_power",
    "eval_word",
    "closure_oracle",
    "read_sgp",
    "write_sgp",
    "transformation_index",
]


class ClosureCapExceeded(Exception):
    """Raised when the closure exploration hits its state cap undecided."""

    def __init__(self, cap, states):
        super().__init__(f"closure exceeded cap of {cap} states ({states} explored)")
        self.cap = cap
        self.states = states


@dataclass(frozen=True)
class Semigroup:
    """A finite semigroup: validated m x m Cayley table over indices 1..m."""

    table: tuple
    names: tuple | None = None
    _np: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(1, self.order + 1)

    def mul(self, x: int, y: int) -> int:
        return self.table[x - 1][y - 1]

    def np_table(self) -> np.ndarray:
        """0-based int16 table for vectorized coordinatewise products."""
        return self._np

    def name_of(self, x: int) -> str:
        return self.names[x - 1] if self.names else str(x)

    def index_of(self, name: str) -> int:
        if self.names is None or name not in self.names:
            raise ValueError(f"unknown element name {name!r}")
        return self.names.index(name) + 1

    def power(self, x: int, k: int) -> int:
        """x^k for k >= 1 by repeated squaring."""
        if k < 1:
            raise ValueError("semigroup powers need k >= 1")
        acc = None
        base = x
        while k:
            if k & 1:
                acc = base if acc is None else self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def idempotents(self) -> frozenset:
        return frozenset(x for x in self.elements if self.mul(x, x) == x)

    def is_commutative(self) -> bool:
        t = self._np
        return bool(np.array_equal(t, t.T))

    def identity(self) -> int | None:
        for e in self.elements:
            if all(self.mul(e, x) == x == self.mul(x, e) for x in self.elements):
                return e
        return None

    def is_group(self) -> bool:
        e = self.identity()
        if e is None:
            return False
        # every row must contain the identity (left solvability suffices here)
        return all(e in self.table[x - 1] for x in self.elements)

    def inverse(self, x: int) -> int:
        e = self.identity()
        if e is None:
            raise ValueError("semigroup has no identity")
        for y in self.elements:
            if self.mul(x, y) == e == self.mul(y, x):
                return y
        raise ValueError(f"element {x} has no inverse")

    def element_order(self, x: int) -> int:
        """Smallest t >= 1 with x^t = identity (groups only)."""
        e = self.identity()
        acc, t = x, 1
        while acc != e:
            acc = self.mul(acc, x)
            t += 1
            if t > self.order + 1:
                raise ValueError(f"element {x} has no power equal to the identity")
        return t


def _violating_triple(t0: np.ndarray):
    """First (x, y, z) with (xy)z != x(yz), 1-based, or None."""
    m = t0.shape[0]
    left = t0[t0]  # left[x, y, z] = (xy)z
    right = t0[np.arange(m)[:, None, None], t0[None, :, :]]  # x(yz)
    bad = np.argwhere(left != right)
    if len(bad):
        x, y, z = bad[0]
        return int(x) + 1, int(y) + 1, int(z) + 1
    return None


def make_semigroup(table, names=None) -> Semigroup:
    """Validate and build a Semigroup from an m x m table of 1-based indices."""
    rows = tuple(tuple(int(v) for v in row) for row in table)
    m = len(rows)
    if m < 1:
        raise ValueError("empty multiplication table")
    for row in rows:
        if len(row) != m:
            raise ValueError(f"table is not square: row of length {len(row)} in order {m}")
        for v in row:
            if not 1 <= v <= m:
                raise ValueError(f"table entry {v} out of range [1, {m}]")
    t0 = np.array(rows, dtype=np.int16) - 1
    bad = _violating_triple(t0)
    if bad is not None:
        x, y, z = bad
        raise ValueError(f"table is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")
    if names is not None:
        names = tuple(str(s) for s in names)
        if len(names) != m:
            raise ValueError(f"expected {m} names, got {len(names)}")
    sg = Semigroup(table=rows, names=names)
    object.__setattr__(sg, "_np", t0)
    return sg


def transformation_index(image, m: int) -> int:
    """Canonical 1-based index of a map on [m] given its image word."""
    idx = 0
    for v in image:
        if not 1 <= v <= m:
            raise ValueError(f"image value {v} out of range [1, {m}]")
        idx = idx * m + (v - 1)
    return idx + 1


def _full_transformation(m: int) -> Semigroup:
    """T(m): all m^m maps on [m], composed left to right, indexed by image word."""
    words = list(itertools.product(range(1, m + 1), repeat=m))
    table = [
        [transformation_index([h[g[x] - 1] for x in range(m)], m) for h in words]
        for g in words
    ]
    names = ["".join(str(v) for v in w) for w in words]
    return make_semigroup(table, names)


def _direct_product(s1: Semigroup, s2: Semigroup) -> Semigroup:
    m1, m2 = s1.order, s2.order
    pairs = [(x1, x2) for x1 in s1.elements for x2 in s2.elements]
    pos = {p: i + 1 for i, p in enumerate(pairs)}
    table = [
        [pos[(s1.mul(x1, y1), s2.mul(x2, y2))] for (y1, y2) in pairs]
        for (x1, x2) in pairs
    ]
    names = [f"({s1.name_of(x1)},{s2.name_of(x2)})" for (x1, x2) in pairs]
    return make_semigroup(table, names)


_BUILTIN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\((.*)\))?$")


def _split_args(argstr: str):
    """Split on top-level commas so nested builtin names parse."""
    parts, depth, cur = [], 0, []
    for ch in argstr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if cur or parts:
        parts.append("".join(cur).strip())
    return parts


def builtin(name: str) -> Semigroup:
    """Construct a named semigroup.

    Known names: T(m) for m <= 4, Z2_1, null(q), cyclic_group(q),
    semilattice_chain(q), direct_product(s1, s2) with nested names.
    """
    text = name.strip()
    m = _BUILTIN_RE.match(text)
    if not m:
        raise ValueError(f"unknown builtin semigroup {name!r}")
    head, argstr = m.group(1), m.group(2)
    args = _split_args(argstr) if argstr is not None else []

    if head == "Z2_1" and not args:
        return make_semigroup([[1, 1, 1], [1, 1, 2], [1, 2, 3]], names=["0", "a", "1"])
    if head == "T" and len(args) == 1:
        q = int(args[0])
        if not 1 <= q <= 4:
            raise ValueError(f"T(m) supported for 1 <= m <= 4, got {q}")
        return _full_transformation(q)
    if head == "null" and len(args) == 1:
        q = int(args[0])
        if q < 1:
            raise ValueError("null(q) needs q >= 1")
        table = [[1] * q for _ in range(q)]
        names = ["0"] + [f"a{i}" for i in range(1, q)]
        return make_semigroup(table, names)
    if head == "cyclic_group" and len(args) == 1:
        q = int(args[0])
        if q < 1:
            raise ValueError("cyclic_group(q) needs q >= 1")
        table = [[(x + y) % q + 1 for y in range(q)] for x in range(q)]
        return make_semigroup(table, names=[str(i) for i in range(q)])
    if head == "semilattice_chain" and len(args) == 1:
        q = int(args[0])
        if q < 1:
            raise ValueError("semilattice_chain(q) needs q >= 1")
        table = [[min(x, y) for y in range(1, q + 1)] for x in range(1, q + 1)]
        return make_semigroup(table, names=[str(i) for i in range(q)])
    if head == "direct_product" and len(args) == 2:
        return _direct_product(builtin(args[0]), builtin(args[1]))
    raise ValueError(f"unknown builtin semigroup {name!r}")


def restrict(s: Semigroup, subset) -> tuple[Semigroup, dict]:
    """Subsemigroup on `subset` (must be product-closed); returns (sub, old->new map)."""
    elems = sorted(subset)
    to_new = {x: i + 1 for i, x in enumerate(elems)}
    for x in elems:
        for y in elems:
            if s.mul(x, y) not in to_new:
                raise ValueError(
                    f"subset not closed under products: {x}*{y} = {s.mul(x, y)} escapes"
                )
    table = [[to_new[s.mul(x, y)] for y in elems] for x in elems]
    names = [s.name_of(x) for x in elems]
    return make_semigroup(table, names), to_new


# ---------------------------------------------------------------------------
# tuples and instances


def tup_mul(s: Semigroup, u, v):
    if len(u) != len(v):
        raise ValueError(f"tuple length mismatch: {len(u)} vs {len(v)}")
    t = s.table
    return tuple(t[x - 1][y - 1] for x, y in zip(u, v))


def tup_pow(s: Semigroup, u, k: int):
    """u^k for k >= 1, coordinatewise, by repeated squaring."""
    if k < 1:
        raise ValueError("tuple powers need k >= 1")
    acc = None
    base = u
    while k:
        if k & 1:
            acc = base if acc is None else tup_mul(s, acc, base)
        base = tup_mul(s, base, base)
        k >>= 1
    return acc


def idempotent_power(s: Semigroup, x: int) -> int:
    """The unique idempotent among the powers of x."""
    seen = set()
    y = x
    while y not in seen:
        seen.add(y)
        y = s.mul(y, x)
    for z in seen:
        if s.mul(z, z) == z:
            return z
    raise AssertionError("cyclic subsemigroup without idempotent")  # unreachable


@dataclass(frozen=True)
class SmpInstance:
    """Generators and target in S^n: is the target a nonempty product of generators?"""

    semigroup: Semigroup
    n: int
    generators: tuple
    target: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("instances need n >= 1")
        object.__setattr__(self, "generators", tuple(tuple(g) for g in self.generators))
        object.__setattr__(self, "target", tuple(self.target))
        m = self.semigroup.order
        for tup in (*self.generators, self.target):
            if len(tup) != self.n:
                raise ValueError(f"tuple of length {len(tup)} in an n = {self.n} instance")
            for v in tup:
                if not 1 <= v <= m:
                    raise ValueError(f"element index {v} out of range [1, {m}]")

    @property
    def k(self) -> int:
        return len(self.generators)


def eval_word(inst: SmpInstance, word):
    """Left-to-right product of the selected generators."""
    word = list(word)
    if not word:
        raise ValueError("witness words must be nonempty")
    for i in word:
        if not 1 <= i <= inst.k:
            raise ValueError(f"generator index {i} out of range [1, {inst.k}]")
    acc = inst.generators[word[0] - 1]
    for i in word[1:]:
        acc = tup_mul(inst.semigroup, acc, inst.generators[i - 1])
    return acc


@dataclass(frozen=True)
class OracleResult:
    member: bool
    witness: tuple | None
    closure_size: int | None


def closure_oracle(inst: SmpInstance, cap: int | None = None) -> OracleResult:
    """Exact membership by breadth-first closure under right multiplication.

    Exploration order is (word length, parent discovery rank, generator
    index), so returned witnesses are shortest and deterministic.
    closure_size is reported only when the closure was fully explored;
    hitting `cap` undecided raises ClosureCapExceeded.
    """
    if inst.k == 0:
        return OracleResult(member=False, witness=None, closure_size=0)
    m = inst.semigroup.order
    if inst.n * np.log2(m) <= 62:
        return _closure_np(inst, cap)
    return _closure_dict(inst, cap)


def _closure_dict(inst: SmpInstance, cap) -> OracleResult:
    s, gens, target = inst.semigroup, inst.generators, inst.target
    visited = {}  # tuple -> (parent tuple | None, generator index)
    queue = []
    for gi, g in enumerate(gens, start=1):
        if g not in visited:
            visited[g] = (None, gi)
            queue.append(g)
            if g == target:
                return OracleResult(True, _walk_back(visited, target), None)
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for gi, g in enumerate(gens, start=1):
            nxt = tup_mul(s, cur, g)
            if nxt not in visited:
                visited[nxt] = (cur, gi)
                queue.append(nxt)
                if nxt == target:
                    return OracleResult(True, _walk_back(visited, target), None)
                if cap is not None and len(visited) > cap:
                    raise ClosureCapExceeded(cap, len(visited))
    return OracleResult(False, None, len(visited))


def _walk_back(visited, target):
    word = []
    cur = target
    while cur is not None:
        parent, gi = visited[cur]
        word.append(gi)
        cur = parent
    return tuple(reversed(word))


def _closure_np(inst: SmpInstance, cap) -> OracleResult:
    """Vectorized closure: tuples packed into int64 keys, levels expanded in bulk."""
    s, n = inst.semigroup, inst.n
    m = s.order
    t0 = s.np_table()
    radix = (m ** np.arange(n - 1, -1, -1, dtype=np.int64)).astype(np.int64)
    gens0 = np.array(inst.generators, dtype=np.int16) - 1  # (k, n)

    def pack(arr):  # arr (..., n) 0-based
        return arr.astype(np.int64) @ radix

    target_key = int(pack(np.array(inst.target, dtype=np.int64) - 1))

    # discovery-ordered store with parent links for witness reconstruction
    k = len(gens0)
    first_keys = pack(gens0)
    uniq_pos = _first_occurrence(first_keys)
    disc_keys = [first_keys[uniq_pos]]
    disc_parent = [np.full(len(uniq_pos), -1, dtype=np.int64)]
    disc_gen = [uniq_pos.astype(np.int64)]  # generator index = flat position for level 1
    frontier = gens0[uniq_pos]
    frontier_base = 0
    sorted_keys = np.sort(disc_keys[0])
    total = len(sorted_keys)

    def found(pos_in_disc):
        flat_keys = np.concatenate(disc_keys)
        flat_parent = np.concatenate(disc_parent)
        flat_gen = np.concatenate(disc_gen)
        word = []
        pos = pos_in_disc
        while pos >= 0:
            word.append(int(flat_gen[pos]) + 1)
            pos = int(flat_parent[pos])
        return OracleResult(True, tuple(reversed(word)), None)

    hit = np.flatnonzero(disc_keys[0] == target_key)
    if len(hit):
        return found(int(hit[0]))

    while len(frontier):
        f = len(frontier)
        # candidates ordered parent-major, generator-minor
        cand = t0[frontier[:, None, :], gens0[None, :, :]]  # (f, k, n)
        cand_keys = pack(cand).reshape(-1)
        new_mask = ~np.isin(cand_keys, sorted_keys, assume_unique=False)
        new_flat = np.flatnonzero(new_mask)
        if len(new_flat) == 0:
            break
        first = _first_occurrence(cand_keys[new_flat])
        new_flat = new_flat[first]
        keys = cand_keys[new_flat]
        parents = frontier_base + new_flat // k
        gidx = new_flat % k
        disc_keys.append(keys)
        disc_parent.append(parents.astype(np.int64))
        disc_gen.append(gidx.astype(np.int64))
        frontier_base = total  # new level starts at the current discovery count
        hit = np.flatnonzero(keys == target_key)
        if len(hit):
            return found(frontier_base + int(hit[0]))
        total += len(keys)
        if cap is not None and total > cap:
            raise ClosureCapExceeded(cap, total)
        sorted_keys = np.sort(np.concatenate([sorted_keys, keys]))
        frontier = cand.reshape(-1, n)[new_flat]
    return OracleResult(False, None, total)


def _first_occurrence(keys: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of each distinct key, in ascending index order."""
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    lead = np.r_[True, sk[1:] != sk[:-1]]
    return np.sort(order[lead])


# ---------------------------------------------------------------------------
# .sgp text format: `semigroup m`, m table rows, optional `names ...` line


def read_sgp(path) -> Semigroup:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("semigroup"):
        raise ValueError("missing 'semigroup m' header line")
    try:
        m = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError("malformed 'semigroup m' header line") from None
    if len(lines) < m + 1:
        raise ValueError(f"expected {m} table rows, found {len(lines) - 1}")
    table = [[int(v) for v in lines[1 + i].split()] for i in range(m)]
    names = None
    if len(lines) > m + 1 and lines[m + 1].startswith("names"):
        names = lines[m + 1].split()[1:]
    return make_semigroup(table, names)


def write_sgp(path, s: Semigroup):
    with open(path, "w") as fh:
        fh.write(f"semigroup {s.order}\n")
        for row in s.table:
            fh.write(" ".join(str(v) for v in row) + "\n")
        if s.names:
            fh.write("names " + " ".join(s.names) + "\n")
