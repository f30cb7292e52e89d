"""Satiated collections of finite exhaustive families and their closure.

A collection is satiated when it is closed under supersets (S1), extension
transport (S2), truncation (S3), and grafting (S4).  The satiation of a
collection is computed as the least fixed point of the composite map
sigma4 . sigma3 . sigma2 . sigma1 over a finite universe of candidate
families; results are exact when the universe is the full finite-exhaustive
universe of an acyclic graph, and windowed (three-valued membership)
otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .degree import Degree
from .errors import (
    BudgetExceeded,
    FixpointBudgetExceeded,
    UniverseTooLarge,
)
from .kgraph import KGraph, Path, compose, segment
from .alignment import PathFamily, ext_family, has_prefix_in
from .exhaustive import fe_enumerate, is_exhaustive


class Membership(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class FamilyCollection:
    """A set of verified finite exhaustive families over a finite universe.

    The universe is the per-vertex window vLambda^{<=depth} minus the vertex,
    optionally capped in family size.  ``exact`` means the universe equals
    the full finite-exhaustive universe: acyclic graph, depth at least the
    maximum path degree, no size cap.
    """

    def __init__(
        self,
        graph: KGraph,
        members: Iterable[PathFamily] = (),
        depth: Degree | None = None,
        max_family_size: int | None = None,
        budget: int = 200_000,
    ):
        if depth is None:
            depth = graph.max_degree  # raises on cyclic graphs
        self.graph = graph
        self.depth = depth
        self.max_family_size = max_family_size
        self.budget = budget
        self.exact = (
            graph.is_acyclic
            and graph.max_degree <= depth
            and max_family_size is None
        )
        self.members = frozenset(members)
        self._universe: dict[str, tuple[PathFamily, ...]] = {}
        self._universe_sets: dict[str, frozenset] = {}
        self._sorted: tuple[PathFamily, ...] | None = None
        self._at: dict[str, tuple[PathFamily, ...]] | None = None
        for fam in self.members:
            self._validate_member(fam)

    def _validate_member(self, fam: PathFamily) -> None:
        if fam.graph is not self.graph:
            raise ValueError("family belongs to a different graph")
        if not fam.members:
            raise ValueError("empty families are never exhaustive")
        if not fam.is_vertex_free():
            raise ValueError(f"{fam!r} contains a vertex path")
        if fam not in self.universe_set(fam.vertex):
            raise ValueError(f"{fam!r} is not in the family universe")

    # -- universe --

    def universe(self, v: str) -> tuple[PathFamily, ...]:
        """All candidate exhaustive families at v within the window."""
        if v not in self._universe:
            cap = self.max_family_size
            if cap is None:
                cap = len(self.graph.paths_up_to(v, self.depth))
            try:
                self._universe[v] = fe_enumerate(
                    self.graph, v, self.depth, cap, budget=self.budget
                )
            except BudgetExceeded as exc:
                raise UniverseTooLarge(str(exc)) from exc
            self._universe_sets[v] = frozenset(self._universe[v])
        return self._universe[v]

    def universe_set(self, v: str) -> frozenset:
        self.universe(v)
        return self._universe_sets[v]

    def in_window(self, fam: PathFamily) -> bool:
        if self.max_family_size is not None and len(fam.members) > self.max_family_size:
            return False
        return all(p.degree <= self.depth for p in fam.members)

    def universe_all(self) -> tuple[PathFamily, ...]:
        out = []
        for v in self.graph.vertices:
            out.extend(self.universe(v))
        return tuple(out)

    # -- collection protocol --

    def __contains__(self, fam: PathFamily) -> bool:
        return fam in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FamilyCollection)
            and self.graph is other.graph
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash(self.members)

    def sorted_members(self) -> tuple[PathFamily, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.members, key=lambda f: f.sort_key()))
        return self._sorted

    def at(self, v: str) -> tuple[PathFamily, ...]:
        if self._at is None:
            groups: dict[str, list[PathFamily]] = {}
            for f in self.sorted_members():
                groups.setdefault(f.vertex, []).append(f)
            self._at = {u: tuple(fs) for u, fs in groups.items()}
        return self._at.get(v, ())

    def minimal_at(self, v: str) -> tuple[PathFamily, ...]:
        fams = self.at(v)
        return tuple(
            f for f in fams if not any(g.members < f.members for g in fams)
        )

    def with_members(self, members: Iterable[PathFamily]) -> "FamilyCollection":
        out = FamilyCollection.__new__(FamilyCollection)
        out.graph = self.graph
        out.depth = self.depth
        out.max_family_size = self.max_family_size
        out.budget = self.budget
        out.exact = self.exact
        out._universe = self._universe  # share the cached universe
        out._universe_sets = self._universe_sets
        out._sorted = None
        out._at = None
        out.members = frozenset(members)
        for fam in out.members:
            out._validate_member(fam)
        return out

    def window_paths(self, v: str) -> tuple[Path, ...]:
        return self.graph.paths_up_to(v, self.depth)


def full_fe_collection(graph: KGraph, budget: int = 200_000) -> FamilyCollection:
    """The full finite-exhaustive universe of an acyclic graph, as members."""
    empty = FamilyCollection(graph, (), budget=budget)
    return empty.with_members(empty.universe_all())


# -- membership ---------------------------------------------------------------


def member(fam: PathFamily, collection: FamilyCollection) -> Membership:
    """Three-valued membership of ``fam`` in the collection.

    Exact universes give definite answers; windowed universes answer YES for
    present members and UNKNOWN otherwise (the windowed satiation only
    under-approximates the true one).
    """
    if fam in collection.members:
        return Membership.YES
    if collection.exact:
        return Membership.NO
    return Membership.UNKNOWN


# -- the four closure maps -----------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    detail: str


def _check_family(collection: FamilyCollection, fam: PathFamily) -> PathFamily | None:
    """Re-verify that a closure map produced an exhaustive universe family.

    The universe was materialized by checking exhaustiveness of every
    candidate subset, so membership is the verification; an in-window miss
    means the map produced a non-exhaustive family, contradicting the
    supporting closure lemmas.  On windowed universes the maps may escape
    the window (graftings add degrees); those families are dropped, keeping
    the windowed satiation an under-approximation.
    """
    if fam in collection.universe_set(fam.vertex):
        return fam
    if collection.in_window(fam):
        verdict = is_exhaustive(fam)
        raise AssertionError(
            f"closure map produced {fam!r} inside the window but outside the "
            f"universe (exhaustive={verdict.status.value})"
        )
    assert not collection.exact, "exact universes contain every closure output"
    return None


def _window_mus(collection: FamilyCollection, fam: PathFamily):
    """Candidate mu in r(E).Lambda \\ E.Lambda within the window."""
    for mu in collection.window_paths(fam.vertex):
        if not has_prefix_in(mu, fam.members):
            yield mu


def _truncation_choices(fam: PathFamily, budget: int | None = None):
    """All choice vectors 0 < n_lam <= d(lam) over the members."""
    members = fam.sorted_members()
    per_member = [
        [n for n in p.degree.below() if not n.is_zero()] for p in members
    ]
    count = 1
    for opts in per_member:
        count *= len(opts)
    if budget is not None and count > budget:
        raise UniverseTooLarge(
            f"{count} truncation vectors for {fam!r} exceed the budget {budget}"
        )
    for choice in itertools.product(*per_member):
        yield tuple(zip(members, choice))


def _truncate(fam: PathFamily, choice) -> PathFamily:
    zero = Degree.zero(fam.graph.rank)
    cut = {segment(p, zero, n) for p, n in choice}
    return PathFamily(fam.graph, fam.vertex, cut)


def _graftings(collection: FamilyCollection, fam: PathFamily, budget: int | None = None):
    """All (E \\ F) u U_{lam in F} lam.F_lam with F_lam drawn from members."""
    members = fam.sorted_members()
    produced = 0
    for r in range(len(members) + 1):
        for subset in itertools.combinations(members, r):
            pools = [collection.at(p.source) for p in subset]
            if any(not pool for pool in pools):
                continue
            count = 1
            for pool in pools:
                count *= len(pool)
            produced += count
            if budget is not None and produced > budget:
                raise UniverseTooLarge(
                    f"grafting enumeration for {fam!r} exceeds the budget {budget}"
                )
            for assignment in itertools.product(*pools):
                grafted = set(fam.members) - set(subset)
                for lam, sub in zip(subset, assignment):
                    grafted.update(compose(lam, q) for q in sub.members)
                yield PathFamily(fam.graph, fam.vertex, grafted)


def _add(out: set, fam: PathFamily | None) -> None:
    if fam is not None:
        out.add(fam)


def sigma1(collection: FamilyCollection) -> FamilyCollection:
    """All universe families containing some member (finite supersets)."""
    out = set(collection.members)
    for fam in collection.members:
        for cand in collection.universe(fam.vertex):
            if fam.members <= cand.members:
                _add(out, _check_family(collection, cand))
    return collection.with_members(out)


def sigma2(collection: FamilyCollection) -> FamilyCollection:
    """Extension transport: Ext(mu; E) for mu at r(E) with no prefix in E."""
    out = set(collection.members)
    for fam in collection.members:
        for mu in _window_mus(collection, fam):
            _add(out, _check_family(collection, ext_family(mu, fam)))
    return collection.with_members(out)


def sigma3(collection: FamilyCollection) -> FamilyCollection:
    """Truncations of each member family along positive degree choices."""
    out = set(collection.members)
    for fam in collection.members:
        for choice in _truncation_choices(fam, budget=collection.budget):
            _add(out, _check_family(collection, _truncate(fam, choice)))
    return collection.with_members(out)


def sigma4(collection: FamilyCollection) -> FamilyCollection:
    """Graftings of member families onto subsets of members."""
    out = set(collection.members)
    for fam in collection.members:
        for grafted in _graftings(collection, fam, budget=collection.budget):
            _add(out, _check_family(collection, grafted))
    return collection.with_members(out)


# -- satiation ------------------------------------------------------------------


def is_satiated(collection: FamilyCollection) -> tuple[bool, list[Violation]]:
    """Check axioms S1-S4 within the universe; report every violation.

    On windowed universes, closure targets escaping the window are skipped,
    mirroring the under-approximation semantics of the closure maps.
    """
    violations: list[Violation] = []
    members = collection.members

    for fam in collection.sorted_members():
        for cand in collection.universe(fam.vertex):
            if fam.members <= cand.members and cand not in members:
                violations.append(
                    Violation("S1", f"{fam!r} subset of {cand!r} not in collection")
                )

    for fam in collection.sorted_members():
        for mu in _window_mus(collection, fam):
            target = ext_family(mu, fam)
            if target not in members and collection.in_window(target):
                violations.append(
                    Violation(
                        "S2",
                        f"Ext({mu.token()}; {fam!r}) = {target!r} not in collection",
                    )
                )

    for fam in collection.sorted_members():
        for choice in _truncation_choices(fam, budget=collection.budget):
            target = _truncate(fam, choice)
            if target not in members and collection.in_window(target):
                violations.append(
                    Violation("S3", f"truncation {target!r} of {fam!r} missing")
                )

    for fam in collection.sorted_members():
        for grafted in _graftings(collection, fam, budget=collection.budget):
            if grafted not in members and collection.in_window(grafted):
                violations.append(
                    Violation("S4", f"grafting {grafted!r} of {fam!r} missing")
                )

    return (not violations, violations)


def satiate(
    collection: FamilyCollection, max_rounds: int = 1_000
) -> FamilyCollection:
    """Least satiated collection containing the input, over its universe.

    Iterates the composite map sigma4 . sigma3 . sigma2 . sigma1 to its
    fixed point; the universe is finite so this terminates, with the round
    budget guarding against bugs.
    """
    current = collection
    for _ in range(max_rounds):
        stepped = sigma4(sigma3(sigma2(sigma1(current))))
        if stepped.members == current.members:
            return current
        current = stepped
    raise FixpointBudgetExceeded(f"satiation did not stabilize in {max_rounds} rounds")
