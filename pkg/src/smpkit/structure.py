"""
Structural analysis of finite semigroups: Clifford decomposition, Rees
quotients, nilpotency, the four equivalent ideal-extension conditions, and
the P / NP-complete verdict for commutative semigroups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import Semigroup, idempotent_power, make_semigroup, restrict

__all__ = [
    "ClassificationReport",
    "CliffordDecomposition",
    "EmbeddingWitness",
    "NotCliffordError",
    "Violates3b",
    "classify",
    "clifford_decompose",
    "natural_preorder",
    "gamma",
    "rees_quotient",
    "build_embedding",
    "is_clifford",
    "generates_group",
    "idempotent_ideal",
    "nilpotency_degree",
]


class NotCliffordError(ValueError):
    """Input is not a Clifford semigroup; message names the violated condition."""


class Violates3b(ValueError):
    """Carries an idempotent e and element a with ea = a but <a> not a group."""

    def __init__(self, e, a):
        super().__init__(
            f"idempotent {e} and element {a} satisfy e*a = a, but a does not generate a group"
        )
        self.e = e
        self.a = a


def generates_group(s: Semigroup, a: int) -> bool:
    """<a> is a group iff a^t = a for some t >= 2 (index/period criterion)."""
    y = s.mul(a, a)
    for _ in range(s.order + 1):
        if y == a:
            return True
        y = s.mul(y, a)
    return False


def is_completely_regular(s: Semigroup) -> bool:
    return all(generates_group(s, a) for a in s.elements)


def idempotents_central(s: Semigroup) -> bool:
    return all(
        s.mul(e, x) == s.mul(x, e) for e in s.idempotents() for x in s.elements
    )


def is_clifford(s: Semigroup) -> bool:
    return is_completely_regular(s) and idempotents_central(s)


def idempotent_ideal(s: Semigroup) -> frozenset:
    """The two-sided ideal generated by the idempotents: closure of E under S*x and x*S."""
    ideal = set(s.idempotents())
    frontier = list(ideal)
    while frontier:
        x = frontier.pop()
        for y in s.elements:
            for z in (s.mul(x, y), s.mul(y, x)):
                if z not in ideal:
                    ideal.add(z)
                    frontier.append(z)
    return frozenset(ideal)


def nilpotency_degree(s: Semigroup) -> int | None:
    """Smallest d with all length-d products equal, or None if there is none."""
    values = set(s.elements)
    for d in range(1, s.order + 2):
        if len(values) == 1:
            return d
        values = {s.mul(x, y) for x in s.elements for y in values}
    return None


def _is_ideal(s: Semigroup, subset) -> tuple[int, int] | None:
    """None if subset is a two-sided ideal, else a violating (x, y) with x in subset."""
    sub = set(subset)
    for x in sub:
        for y in s.elements:
            if s.mul(x, y) not in sub:
                return (x, y)
            if s.mul(y, x) not in sub:
                return (x, y)
    return None


def rees_quotient(s: Semigroup, ideal) -> Semigroup:
    """Collapse a two-sided ideal to a single zero; order |S| - |ideal| + 1."""
    quotient, _ = _rees(s, ideal)
    return quotient


def _rees(s: Semigroup, ideal) -> tuple[Semigroup, dict]:
    """Rees quotient plus the projection map old element -> new index (zero is 1)."""
    ideal = set(ideal)
    if not ideal:
        raise ValueError("Rees quotient needs a nonempty ideal")
    bad = _is_ideal(s, ideal)
    if bad is not None:
        x, y = bad
        raise ValueError(f"subset is not an ideal: products of {x} and {y} escape it")
    rest = [x for x in s.elements if x not in ideal]
    proj = {x: 1 for x in ideal}
    proj.update({x: i + 2 for i, x in enumerate(rest)})
    q = len(rest) + 1
    table = [[1] * q for _ in range(q)]
    for x in rest:
        for y in rest:
            table[proj[x] - 1][proj[y] - 1] = proj[s.mul(x, y)]
    names = ["0"] + [s.name_of(x) for x in rest]
    return make_semigroup(table, names), proj


# ---------------------------------------------------------------------------
# Clifford decomposition (strong semilattice of groups)


@dataclass(frozen=True)
class CliffordDecomposition:
    """Semilattice of idempotents, maximal subgroups, and structure maps.

    group_of[x] is the idempotent power of x; groups[i] lists G_i; the
    structure map from G_i to G_j (i >= j in the semilattice) is x -> x*j.
    """

    semigroup: Semigroup
    semilattice: tuple  # idempotents, ascending element index
    group_of: dict
    groups: dict

    def meet(self, i: int, j: int) -> int:
        return self.semigroup.mul(i, j)

    def leq(self, i: int, j: int) -> bool:
        return self.semigroup.mul(i, j) == i

    def phi(self, i: int, j: int, x: int) -> int:
        if not self.leq(j, i):
            raise ValueError(f"phi needs i >= j in the semilattice, got {i}, {j}")
        if self.group_of[x] != i:
            raise ValueError(f"element {x} is not in the group at {i}")
        return self.semigroup.mul(x, j)


def clifford_decompose(s: Semigroup) -> CliffordDecomposition:
    for a in s.elements:
        if not generates_group(s, a):
            raise NotCliffordError(
                f"not completely regular: element {a} does not generate a group"
            )
    for e in s.idempotents():
        for x in s.elements:
            if s.mul(e, x) != s.mul(x, e):
                raise NotCliffordError(
                    f"idempotent {e} is not central: {e}*{x} != {x}*{e}"
                )
    idems = tuple(sorted(s.idempotents()))
    group_of = {x: idempotent_power(s, x) for x in s.elements}
    groups = {i: tuple(x for x in s.elements if group_of[x] == i) for i in idems}
    return CliffordDecomposition(s, idems, group_of, groups)


def natural_preorder(dec: CliffordDecomposition, x: int, y: int) -> bool:
    """x <= y iff the group of x sits below the group of y in the semilattice."""
    return dec.leq(dec.group_of[x], dec.group_of[y])


def gamma(dec: CliffordDecomposition, x: int) -> tuple:
    """Spread x over the product of the maximal subgroups.

    Component at i is x itself when x lies in G_i and the identity of G_i
    (the idempotent i) otherwise.
    """
    home = dec.group_of[x]
    return tuple(x if i == home else i for i in dec.semilattice)


def product_of_groups(dec: CliffordDecomposition) -> tuple[Semigroup, dict]:
    """The direct product of the maximal subgroups, plus tuple -> index map."""
    s = dec.semigroup
    combos = list(itertools.product(*(dec.groups[i] for i in dec.semilattice)))
    pos = {c: i + 1 for i, c in enumerate(combos)}
    low = {i: {} for i in dec.semilattice}  # per-component multiplication within G_i
    for idx, i in enumerate(dec.semilattice):
        for x in dec.groups[i]:
            for y in dec.groups[i]:
                low[i][(x, y)] = s.mul(x, y)
    table = [
        [
            pos[tuple(low[i][(u[c], v[c])] for c, i in enumerate(dec.semilattice))]
            for v in combos
        ]
        for u in combos
    ]
    names = ["(" + ",".join(s.name_of(x) for x in c) + ")" for c in combos]
    return make_semigroup(table, names), pos


# ---------------------------------------------------------------------------
# embedding into Clifford x nilpotent


@dataclass(frozen=True)
class EmbeddingWitness:
    """x -> (x^{k+1}, class of x mod the image ideal), verified injective."""

    semigroup: Semigroup
    k: int
    alpha: dict
    clifford_part: frozenset
    quotient: Semigroup
    quotient_class: dict

    def beta(self, x: int) -> tuple:
        return (self.alpha[x], self.quotient_class[x])


def _index_and_period(s: Semigroup, x: int) -> tuple[int, int]:
    """Index i and period p of the cyclic subsemigroup: x^(i+p) = x^i, minimal."""
    seen = {}
    y, t = x, 1
    while y not in seen:
        seen[y] = t
        y = s.mul(y, x)
        t += 1
    return seen[y], t - seen[y]


def _least_common_idempotent_exponent(s: Semigroup) -> int:
    """Least k with x^k idempotent for every x: the smallest common multiple of
    all periods that is at least every index."""
    lcm, max_index = 1, 1
    for x in s.elements:
        i, p = _index_and_period(s, x)
        lcm = math.lcm(lcm, p)
        max_index = max(max_index, i)
    k = lcm * ((max_index + lcm - 1) // lcm)
    for x in s.elements:  # sanity: x^k really is idempotent
        xk = s.power(x, k)
        assert s.mul(xk, xk) == xk
    return k


def build_embedding(s: Semigroup) -> EmbeddingWitness:
    """Split S into a Clifford image and a nilpotent quotient when possible.

    Raises Violates3b carrying the offending (e, a) pair when some idempotent
    e and element a have ea = a without a generating a group, or ValueError
    when idempotents fail to be central.
    """
    if not idempotents_central(s):
        raise ValueError("idempotents are not central")
    for e in sorted(s.idempotents()):
        for a in s.elements:
            if s.mul(e, a) == a and not generates_group(s, a):
                raise Violates3b(e, a)

    k = _least_common_idempotent_exponent(s)
    alpha = {x: s.power(x, k + 1) for x in s.elements}
    for x in s.elements:  # alpha is an idempotent endomorphism
        assert alpha[alpha[x]] == alpha[x]
        for y in s.elements:
            assert alpha[s.mul(x, y)] == s.mul(alpha[x], alpha[y])
    image = frozenset(alpha.values())
    quotient, proj = _rees(s, image)
    deg = nilpotency_degree(quotient)
    assert deg is not None and deg <= quotient.order

    witness = EmbeddingWitness(s, k, alpha, image, quotient, proj)
    betas = [witness.beta(x) for x in s.elements]
    assert len(set(betas)) == s.order, "beta is not injective"
    return witness


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassificationReport:
    is_commutative: bool
    is_group: bool
    idempotents: frozenset
    idempotents_central: bool
    is_completely_regular: bool
    is_clifford: bool
    nilpotency_degree: int | None
    ideal_of_idempotents: frozenset
    cond1: bool
    cond2: bool
    cond3: bool
    cond4: bool
    dichotomy: str  # "P", "NP-complete", or "not-applicable"

    def to_json(self) -> dict:
        return {
            "is_commutative": self.is_commutative,
            "is_group": self.is_group,
            "idempotents": sorted(self.idempotents),
            "idempotents_central": self.idempotents_central,
            "is_completely_regular": self.is_completely_regular,
            "is_clifford": self.is_clifford,
            "nilpotency_degree": self.nilpotency_degree,
            "ideal_of_idempotents": sorted(self.ideal_of_idempotents),
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond3": self.cond3,
            "cond4": self.cond4,
            "dichotomy": self.dichotomy,
        }


def classify(s: Semigroup) -> ClassificationReport:
    """All structural predicates plus the commutative P / NP-complete verdict."""
    commutative = s.is_commutative()
    central = idempotents_central(s)
    regular = is_completely_regular(s)
    clifford = regular and central
    ideal = idempotent_ideal(s)

    ideal_sub, _ = restrict(s, ideal)
    ideal_clifford = is_clifford(ideal_sub)

    # cond1: the idempotent ideal is Clifford and the quotient by it is nilpotent
    cond1 = ideal_clifford and nilpotency_degree(rees_quotient(s, ideal)) is not None
    cond2 = ideal_clifford
    cond3 = central and all(
        generates_group(s, a)
        for e in s.idempotents()
        for a in s.elements
        if s.mul(e, a) == a
    )
    try:
        build_embedding(s)
        cond4 = True
    except (Violates3b, ValueError):
        cond4 = False

    if not commutative:
        dichotomy = "not-applicable"
    elif cond1:
        dichotomy = "P"
    else:
        dichotomy = "NP-complete"

    return ClassificationReport(
        is_commutative=commutative,
        is_group=s.is_group(),
        idempotents=s.idempotents(),
        idempotents_central=central,
        is_completely_regular=regular,
        is_clifford=clifford,
        nilpotency_degree=nilpotency_degree(s),
        ideal_of_idempotents=ideal,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        cond4=cond4,
        dichotomy=dichotomy,
    )
