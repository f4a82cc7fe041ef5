"""
Exact finite-group arithmetic over dense multiplication tables.

Elements are indices 0..n-1 with the identity pinned to 0. Permutation
groups multiply left to right: (a·b)(i) = b(a(i)).
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Literal, Optional, Sequence

import numpy as np
from sympy import multiplicity
from sympy.core.intfunc import igcdex
from sympy.combinatorics import Permutation as SympyPermutation

from grouplens.config import get_settings
from grouplens.core.types import IDENTITY, Element, Permutation, Table
from grouplens.errors import (
    ContainmentError,
    CoprimalityError,
    ElementRangeError,
    GroupValidationError,
    InvalidOrderError,
    InvariantViolationError,
    ShapeError,
    SizeLimitError,
)

logger = logging.getLogger(__name__)

# Above this degree the radix encoding of permutations overflows int64.
_RADIX_DEGREE_LIMIT = 15


class Group:
    """
    A finite group stored as its Cayley table.

    Equality is structural: two groups are equal when their tables are.
    Labels, names and permutations are presentation only.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | Table,
        *,
        labels: Optional[Sequence[str]] = None,
        name: str = "group",
        permutations: Optional[Sequence[Permutation]] = None,
        check_associativity: bool = False,
    ):
        arr = np.array(table, dtype=np.int64)
        _validate_table(arr, check_associativity)
        inverse = np.argmax(arr == IDENTITY, axis=1)
        bad = np.flatnonzero(arr[inverse, np.arange(len(arr))] != IDENTITY)
        if bad.size:
            raise GroupValidationError(
                "Left and right inverses differ", {"element": int(bad[0])}
            )
        arr.setflags(write=False)
        inverse.setflags(write=False)
        self.table: Table = arr
        self.inverse: Table = inverse
        self.name = name
        if labels is None:
            labels = [str(i) for i in range(len(arr))]
        if len(labels) != len(arr):
            raise GroupValidationError(
                "Label count does not match order",
                {"labels": len(labels), "order": len(arr)},
            )
        self.labels: tuple[str, ...] = tuple(labels)
        self.permutations: Optional[tuple[Permutation, ...]] = (
            tuple(tuple(p) for p in permutations) if permutations is not None else None
        )
        # Plain lists are several times faster than numpy scalars in hot loops.
        self.rows: list[list[int]] = arr.tolist()
        self.inverses: list[int] = inverse.tolist()

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def elements(self) -> range:
        return range(len(self.rows))

    def check(self, *elements: Element) -> None:
        """Raise ElementRangeError unless every element is a valid index."""
        n = len(self.rows)
        for a in elements:
            if not isinstance(a, (int, np.integer)) or not 0 <= a < n:
                raise ElementRangeError(
                    f"Element {a!r} out of range for {self.name}",
                    {"element": int(a) if isinstance(a, (int, np.integer)) else str(a), "order": n},
                )

    def mul(self, a: Element, b: Element) -> Element:
        self.check(a, b)
        return self.rows[a][b]

    def inv(self, a: Element) -> Element:
        self.check(a)
        return self.inverses[a]

    def product(self, elements: Iterable[Element]) -> Element:
        rows = self.rows
        acc = IDENTITY
        for x in elements:
            acc = rows[acc][x]
        return acc

    def power(self, a: Element, k: int) -> Element:
        """a^k by repeated squaring; negative k uses the inverse."""
        self.check(a)
        rows = self.rows
        if k < 0:
            a, k = self.inverses[a], -k
        result = IDENTITY
        while k:
            if k & 1:
                result = rows[result][a]
            a = rows[a][a]
            k >>= 1
        return result

    def element_order(self, a: Element) -> int:
        self.check(a)
        rows = self.rows
        x, k = a, 1
        while x != IDENTITY:
            x = rows[x][a]
            k += 1
        return k

    def conjugate(self, u: Element, b: Element) -> Element:
        """u^b = b⁻¹ u b."""
        rows = self.rows
        return rows[rows[self.inverses[b]][u]][b]

    def commutator(self, x: Element, y: Element) -> Element:
        """[x, y] = x⁻¹ y⁻¹ x y."""
        rows, inv = self.rows, self.inverses
        return rows[rows[rows[inv[x]][inv[y]]][x]][y]

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """Canonical generating set: ascending indices not already generated."""
        return _greedy_generators(self, self.elements)

    @cached_property
    def _label_index(self) -> dict[str, Element]:
        return {label: i for i, label in enumerate(self.labels)}

    def element(self, label: str) -> Element:
        try:
            return self._label_index[label]
        except KeyError:
            raise ElementRangeError(
                f"No element labelled {label!r} in {self.name}", {"label": label}
            ) from None

    def label(self, a: Element) -> str:
        self.check(a)
        return self.labels[a]

    def order_statistics(self) -> dict[int, int]:
        """Multiset of element orders, the isomorphism heuristic."""
        counts = Counter(self.element_order(a) for a in self.elements)
        return dict(sorted(counts.items()))

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Group):
            return NotImplemented
        return self.order == other.order and bool(np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.order})"


def _validate_table(arr: np.ndarray, check_associativity: bool) -> None:
    """Check shape, identity at 0, the latin property and optionally associativity."""
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise GroupValidationError("Cayley table must be square", {"shape": list(arr.shape)})
    n = arr.shape[0]
    if n == 0:
        raise InvalidOrderError("Group order must be positive")
    if arr.min() < 0 or arr.max() >= n:
        row, col = np.argwhere((arr < 0) | (arr >= n))[0]
        raise GroupValidationError(
            "Table entry out of range", {"row": int(row), "column": int(col)}
        )
    expected = np.arange(n)
    if not np.array_equal(arr[0], expected) or not np.array_equal(arr[:, 0], expected):
        raise GroupValidationError("Index 0 is not the identity", {"row": 0})
    rows_ok = (np.sort(arr, axis=1) == expected).all(axis=1)
    if not rows_ok.all():
        raise GroupValidationError(
            "Row is not a permutation", {"row": int(np.flatnonzero(~rows_ok)[0])}
        )
    cols_ok = (np.sort(arr, axis=0) == expected[:, None]).all(axis=0)
    if not cols_ok.all():
        raise GroupValidationError(
            "Column is not a permutation", {"column": int(np.flatnonzero(~cols_ok)[0])}
        )
    if check_associativity:
        for a in range(n):
            # left[b, c] = (a·b)·c, right[b, c] = a·(b·c)
            left = arr[arr[a]]
            right = arr[a][arr]
            bad = np.argwhere(left != right)
            if bad.size:
                b, c = bad[0]
                raise GroupValidationError(
                    "Table is not associative", {"triple": [a, int(b), int(c)]}
                )


def mul(g: Group, a: Element, b: Element) -> Element:
    return g.mul(a, b)


def inv(g: Group, a: Element) -> Element:
    return g.inv(a)


def element_order(g: Group, a: Element) -> int:
    return g.element_order(a)


# Constructors


def make_cyclic(n: int) -> Group:
    if n < 1:
        raise InvalidOrderError(f"Cyclic group order must be positive, got {n}")
    r = np.arange(n)
    table = np.add.outer(r, r) % n
    return Group(table, labels=[str(i) for i in range(n)], name=f"Z{n}")


def make_dihedral(n: int) -> Group:
    """D_n of order 2n; element k + n·e stands for r^k s^e."""
    if n < 1:
        raise InvalidOrderError(f"Dihedral parameter must be positive, got {n}")
    k = np.arange(2 * n) % n
    e = np.arange(2 * n) // n
    sign = np.where(e == 1, -1, 1)
    rot = (k[:, None] + sign[:, None] * k[None, :]) % n
    refl = (e[:, None] + e[None, :]) % 2
    table = rot + n * refl
    labels = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
    return Group(table, labels=labels, name=f"D{n}")


def make_symmetric(n: int, degree_cap: Optional[int] = None) -> Group:
    cap = degree_cap if degree_cap is not None else get_settings().SYMMETRIC_DEGREE_CAP
    if n < 1:
        raise InvalidOrderError(f"Symmetric degree must be positive, got {n}")
    if n > cap:
        raise SizeLimitError(f"Symmetric degree {n} exceeds cap {cap}", {"degree": n, "cap": cap})
    perms = list(itertools.permutations(range(n)))
    return _permutation_group(perms, name=f"S{n}")


def make_alternating(n: int, degree_cap: Optional[int] = None) -> Group:
    cap = degree_cap if degree_cap is not None else get_settings().SYMMETRIC_DEGREE_CAP
    if n < 1:
        raise InvalidOrderError(f"Alternating degree must be positive, got {n}")
    if n > cap:
        raise SizeLimitError(f"Alternating degree {n} exceeds cap {cap}", {"degree": n, "cap": cap})
    perms = [p for p in itertools.permutations(range(n)) if SympyPermutation(list(p)).is_even]
    return _permutation_group(perms, name=f"A{n}")


def make_direct_product(g1: Group, g2: Group) -> Group:
    """Element i·|g2| + j stands for the pair (i, j)."""
    n1, n2 = g1.order, g2.order
    t1, t2 = g1.table, g2.table
    table = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    labels = [f"({a},{b})" for a in g1.labels for b in g2.labels]
    return Group(table, labels=labels, name=f"{g1.name}x{g2.name}")


def from_permutations(
    degree: int,
    generators: Sequence[Sequence[int]],
    cap: Optional[int] = None,
) -> Group:
    """
    Close a set of permutations under products.

    The identity gets index 0; further indices follow BFS discovery order
    with generators applied in input order.
    """
    cap = cap if cap is not None else get_settings().ELEMENT_CAP
    if degree < 1:
        raise InvalidOrderError(f"Permutation degree must be positive, got {degree}")
    gens: list[Permutation] = []
    for position, gen in enumerate(generators):
        perm = tuple(int(x) for x in gen)
        if len(perm) != degree or sorted(perm) != list(range(degree)):
            raise GroupValidationError(
                "Generator is not a permutation of the degree",
                {"generator": position, "degree": degree},
            )
        gens.append(perm)

    identity = tuple(range(degree))
    elements: list[Permutation] = [identity]
    seen = {identity}
    for x in elements:
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                if len(elements) >= cap:
                    raise SizeLimitError(
                        f"Permutation closure exceeds element cap {cap}", {"cap": cap}
                    )
                seen.add(y)
                elements.append(y)
    logger.debug("Closed %d generators of degree %d to %d elements", len(gens), degree, len(elements))
    return _permutation_group(elements, name=f"Perm{degree}")


def from_cayley_table(
    table: Sequence[Sequence[int]],
    labels: Optional[Sequence[str]] = None,
    name: str = "cayley",
) -> Group:
    """Import a table, validating every group axiom."""
    return Group(table, labels=labels, name=name, check_associativity=True)


def _permutation_label(perm: Permutation) -> str:
    if len(perm) <= 10:
        return "".join(str(x) for x in perm)
    return ",".join(str(x) for x in perm)


def _permutation_group(perms: Sequence[Permutation], name: str) -> Group:
    """Build the table of a closed list of permutations, identity first."""
    P = np.array(perms, dtype=np.int64)
    n, degree = P.shape
    if degree <= _RADIX_DEGREE_LIMIT:
        weights = degree ** np.arange(degree, dtype=np.int64)
        keys = P @ weights
        sorter = np.argsort(keys)
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            # (a·b)(i) = b(a(i)) for every b at once
            row_keys = P[:, P[a]] @ weights
            pos = np.searchsorted(keys, row_keys, sorter=sorter)
            pos = np.minimum(pos, n - 1)
            idx = sorter[pos]
            if not np.array_equal(keys[idx], row_keys):
                raise GroupValidationError("Permutation set is not closed", {"row": a})
            table[a] = idx
    else:
        index = {tuple(p): i for i, p in enumerate(perms)}
        table = np.empty((n, n), dtype=np.int64)
        for a, pa in enumerate(perms):
            for b, pb in enumerate(perms):
                table[a, b] = index[tuple(pb[i] for i in pa)]
    return Group(
        table,
        labels=[_permutation_label(tuple(p)) for p in perms],
        name=name,
        permutations=perms,
    )


# Subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    """An element subset of a parent group closed under its table."""

    parent: Group
    members: tuple[Element, ...]
    generators: tuple[Element, ...]

    def __post_init__(self):
        if not self.members or self.members[0] != IDENTITY:
            raise InvariantViolationError("Subgroup must contain the identity")
        if self.parent.order % len(self.members):
            raise InvariantViolationError(
                "Subgroup order does not divide group order",
                {"subgroup": len(self.members), "group": self.parent.order},
            )
        if len(self.members) < self.parent.order:
            members = np.asarray(self.members, dtype=np.int64)
            outside = ~np.isin(self.parent.table[np.ix_(members, members)], members)
            if outside.any():
                i, j = np.argwhere(outside)[0]
                raise InvariantViolationError(
                    "Member set is not closed",
                    {"pair": [int(members[i]), int(members[j])]},
                )

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def member_set(self) -> frozenset[Element]:
        return frozenset(self.members)

    def __contains__(self, x: object) -> bool:
        return x in self.member_set

    def __iter__(self) -> Iterator[Element]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.members == other.members and self.parent == other.parent

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, of={self.parent.name})"

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set

    @property
    def is_trivial(self) -> bool:
        return len(self.members) == 1

    @cached_property
    def is_abelian(self) -> bool:
        rows = self.parent.rows
        return all(rows[a][b] == rows[b][a] for a, b in itertools.combinations(self.members, 2))

    @cached_property
    def local_index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.members)}

    @cached_property
    def as_group(self) -> Group:
        """The subgroup as a group in its own right; local index i is members[i]."""
        rows = self.parent.rows
        local = self.local_index
        table = [[local[rows[a][b]] for b in self.members] for a in self.members]
        return Group(
            table,
            labels=[self.parent.labels[x] for x in self.members],
            name=f"{self.parent.name}[{self.order}]",
        )

    def to_local(self, x: Element) -> int:
        try:
            return self.local_index[x]
        except KeyError:
            raise ContainmentError(
                f"Element {x} is not in the subgroup", {"element": x}
            ) from None

    def to_parent(self, i: int) -> Element:
        return self.members[i]


def require_parent(g: Group, s: Subgroup) -> None:
    if s.parent != g:
        raise ShapeError(f"Subgroup does not belong to {g.name}")


def subgroup_closure(g: Group, generators: Iterable[Element]) -> Subgroup:
    gens = tuple(int(x) for x in generators)
    g.check(*gens)
    rows = g.rows
    found = [IDENTITY]
    seen = {IDENTITY}
    for x in found:
        for s in gens:
            y = rows[x][s]
            if y not in seen:
                seen.add(y)
                found.append(y)
    return Subgroup(g, tuple(sorted(seen)), gens)


def subgroup_from_members(g: Group, members: Iterable[Element]) -> Subgroup:
    """Wrap a member set already known to be closed; Subgroup asserts closure."""
    ordered = tuple(sorted(set(members)))
    g.check(*ordered)
    return Subgroup(g, ordered, _greedy_generators(g, ordered))


def _greedy_generators(g: Group, members: Iterable[Element]) -> tuple[Element, ...]:
    gens: list[Element] = []
    generated = {IDENTITY}
    for x in members:
        if x not in generated:
            gens.append(x)
            generated = set(subgroup_closure(g, gens).members)
    return tuple(gens)


def whole_group(g: Group) -> Subgroup:
    return Subgroup(g, tuple(g.elements), g.generators)


def trivial_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, (IDENTITY,), ())


def index(g: Group, s: Subgroup) -> int:
    require_parent(g, s)
    return g.order // s.order


def _conjugates(g: Group, xs: Sequence[Element], s: Subgroup) -> np.ndarray:
    """out[i, j] = xs[i] · s_j · xs[i]⁻¹."""
    T = g.table
    X = np.asarray(xs, dtype=np.int64)
    S = np.asarray(s.members, dtype=np.int64)
    return T[T[X[:, None], S[None, :]], g.inverse[X][:, None]]


def is_normal(g: Group, s: Subgroup, within: Optional[Subgroup] = None) -> bool:
    """x·s·x⁻¹ ⊆ s for every x of g (or of `within`)."""
    require_parent(g, s)
    ambient = within.members if within is not None else tuple(g.elements)
    conj = _conjugates(g, ambient, s)
    return bool(np.isin(conj, s.members).all())


def normalizer(g: Group, s: Subgroup) -> Subgroup:
    require_parent(g, s)
    conj = _conjugates(g, tuple(g.elements), s)
    mask = np.isin(conj, s.members).all(axis=1)
    return subgroup_from_members(g, np.flatnonzero(mask).tolist())


def normal_closure(g: Group, elements: Iterable[Element]) -> Subgroup:
    sub = subgroup_closure(g, elements)
    while not is_normal(g, sub):
        conj = _conjugates(g, tuple(g.elements), sub)
        sub = subgroup_closure(g, np.unique(conj).tolist())
    return sub


def normal_subgroups(g: Group) -> list[Subgroup]:
    """All normal subgroups: joins of normal closures of single elements."""
    found: dict[tuple[Element, ...], Subgroup] = {}
    for x in g.elements:
        sub = normal_closure(g, [x])
        found.setdefault(sub.members, sub)
    changed = True
    while changed:
        changed = False
        current = list(found.values())
        for a, b in itertools.combinations(current, 2):
            join = subgroup_closure(g, a.members + b.members)
            if join.members not in found:
                found[join.members] = join
                changed = True
    return sorted(found.values(), key=lambda sub: (sub.order, sub.members))


# Cosets


@dataclass(frozen=True)
class CosetSystem:
    """
    Cosets of a subgroup with one representative each.

    Canonical representatives are the minimal index in each coset, listed in
    increasing order, so the subgroup itself comes first with representative 0.
    Left cosets are r·S, right cosets are S·r.
    """

    subgroup: Subgroup
    representatives: tuple[Element, ...]
    coset_of: tuple[int, ...]
    side: Literal["left", "right"] = "left"

    def __post_init__(self):
        parent = self.subgroup.parent
        if len(self.representatives) * self.subgroup.order != parent.order:
            raise InvariantViolationError("Coset count does not match the index")
        if self.representatives[0] != IDENTITY:
            raise InvariantViolationError("The subgroup's own coset must be represented by 0")
        for i, r in enumerate(self.representatives):
            if self.coset_of[r] != i:
                raise InvariantViolationError(
                    "Representative does not lie in its coset", {"position": i, "representative": r}
                )

    @property
    def parent(self) -> Group:
        return self.subgroup.parent

    @property
    def index(self) -> int:
        return len(self.representatives)

    def coset(self, i: int) -> tuple[Element, ...]:
        return tuple(x for x, c in enumerate(self.coset_of) if c == i)

    def representative_of(self, x: Element) -> Element:
        return self.representatives[self.coset_of[x]]

    def decompose(self, x: Element) -> tuple[Element, Element]:
        """Split x as (h, t) with x = t·h (left) or x = h·t (right), t the representative."""
        g = self.parent
        t = self.representative_of(x)
        if self.side == "left":
            h = g.rows[g.inverses[t]][x]
        else:
            h = g.rows[x][g.inverses[t]]
        if h not in self.subgroup:
            raise InvariantViolationError(
                "Coset decomposition left the subgroup", {"element": x, "representative": t}
            )
        return h, t

    def with_representatives(self, representatives: Sequence[Element]) -> "CosetSystem":
        """The same cosets with another transversal, aligned to canonical coset order."""
        if len(representatives) != self.index:
            raise ContainmentError(
                "Need exactly one representative per coset",
                {"given": len(representatives), "index": self.index},
            )
        self.parent.check(*representatives)
        aligned: list[Optional[Element]] = [None] * self.index
        for r in representatives:
            pos = self.coset_of[r]
            if aligned[pos] is not None:
                raise ContainmentError("Two representatives share a coset", {"representative": r})
            aligned[pos] = r
        if aligned[0] != IDENTITY:
            raise ContainmentError("The subgroup's own coset must be represented by 0")
        return CosetSystem(self.subgroup, tuple(aligned), self.coset_of, self.side)  # type: ignore[arg-type]

    def rotated(self) -> "CosetSystem":
        """Second canonical transversal: the largest member of every other coset."""
        reps = [IDENTITY] + [max(self.coset(i)) for i in range(1, self.index)]
        return self.with_representatives(reps)


def _build_cosets(g: Group, s: Subgroup, side: Literal["left", "right"]) -> CosetSystem:
    require_parent(g, s)
    rows = g.rows
    coset_of = [-1] * g.order
    reps: list[Element] = []
    for x in g.elements:
        if coset_of[x] == -1:
            pos = len(reps)
            reps.append(x)
            for h in s.members:
                y = rows[x][h] if side == "left" else rows[h][x]
                coset_of[y] = pos
    return CosetSystem(s, tuple(reps), tuple(coset_of), side)


def left_cosets(g: Group, s: Subgroup) -> CosetSystem:
    return _build_cosets(g, s, "left")


def right_cosets(g: Group, s: Subgroup) -> CosetSystem:
    return _build_cosets(g, s, "right")


# Derived series


def derived_subgroup(g: Group, s: Subgroup) -> Subgroup:
    require_parent(g, s)
    T, inv = g.table, g.inverse
    S = np.asarray(s.members, dtype=np.int64)
    X, Y = S[:, None], S[None, :]
    commutators = T[T[T[inv[X], inv[Y]], X], Y]
    return subgroup_closure(g, np.unique(commutators).tolist())


def derived_series(g: Group, s: Subgroup) -> list[Subgroup]:
    """s = N⁽⁰⁾ ⊇ N⁽¹⁾ ⊇ … until the series stabilizes."""
    series = [s]
    limit = max(1, int(np.ceil(np.log2(max(g.order, 2))))) + 1
    while True:
        nxt = derived_subgroup(g, series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
        if len(series) > limit + 1:
            raise InvariantViolationError("Derived series failed to stabilize", {"length": len(series)})
    return series


def is_soluble(g: Group, s: Subgroup) -> bool:
    return derived_series(g, s)[-1].is_trivial


# Arithmetic


def mod_inverse(n: int, modulus: int) -> int:
    """Least positive m with m·n ≡ 1 (mod modulus)."""
    if n < 1 or modulus < 1:
        raise InvalidOrderError("mod_inverse needs positive arguments", {"n": n, "modulus": modulus})
    x, _, d = igcdex(n, modulus)
    if d != 1:
        raise CoprimalityError(
            f"{n} is not invertible modulo {modulus}", {"n": n, "modulus": modulus, "gcd": int(d)}
        )
    if modulus == 1:
        return 1
    return int(x) % modulus


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    return p ** multiplicity(p, n)
