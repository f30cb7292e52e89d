"""Minimal common extensions, extension sets, and the grid closure.

mce(mu, nu) enumerates the degree-(d(mu) v d(nu)) paths extending both
arguments; finiteness is automatic for finite skeletons.  pi_closure is the
least set containing its input and closed under transporting extensions
across equal-degree, equal-source pairs; it indexes the matrix-unit grids
used by the representation module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .degree import Degree
from .errors import ClosureBudgetExceeded, RangeMismatch
from .kgraph import KGraph, Path, compose, path_sort_key, segment, _split


@dataclass(frozen=True)
class MinPair:
    """A pair (alpha, beta) with mu.alpha = nu.beta a minimal common extension."""

    alpha: Path
    beta: Path


class PathFamily:
    """A finite set of paths sharing a common range vertex.

    Used both for exhaustive-set candidates (where members must avoid the
    vertex path itself) and for plain finite path sets at a vertex.
    """

    __slots__ = ("graph", "vertex", "members", "_sorted", "_key")

    def __init__(self, graph: KGraph, vertex: str, members: Iterable[Path]):
        members = frozenset(members)
        for p in members:
            if p.range != vertex:
                raise RangeMismatch(
                    f"member {p.token()} has range {p.range}, expected {vertex}"
                )
        self.graph = graph
        self.vertex = vertex
        self.members = members
        self._sorted = None
        self._key = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members())

    def __contains__(self, p: Path) -> bool:
        return p in self.members

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PathFamily)
            and self.vertex == other.vertex
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.vertex, self.members))

    def __repr__(self) -> str:
        return f"PathFamily({self.vertex}: {{{', '.join(p.token() for p in self)}}})"

    def sorted_members(self) -> tuple[Path, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.members, key=path_sort_key))
        return self._sorted

    def is_vertex_free(self) -> bool:
        return all(not p.is_vertex() for p in self.members)

    def sort_key(self):
        if self._key is None:
            self._key = (
                self.vertex,
                len(self.members),
                tuple(p.sort_key() for p in self.sorted_members()),
            )
        return self._key


def family(graph: KGraph, members: Iterable[Path], vertex: str | None = None) -> PathFamily:
    members = list(members)
    if vertex is None:
        if not members:
            raise ValueError("empty family needs an explicit range vertex")
        vertex = members[0].range
    return PathFamily(graph, vertex, members)


# -- minimal common extensions ------------------------------------------------


def mce(mu: Path, nu: Path) -> tuple[Path, ...]:
    """All minimal common extensions of mu and nu (empty if ranges differ)."""
    if mu.graph is not nu.graph or mu.range != nu.range:
        return ()
    g = mu.graph
    hit = g._mce_cache.get((mu, nu))
    if hit is not None:
        return hit
    top = mu.degree | nu.degree
    zero = Degree.zero(g.rank)
    out = tuple(
        lam
        for lam in g.paths(mu.range, top)
        if segment(lam, zero, mu.degree) == mu
        and segment(lam, zero, nu.degree) == nu
    )
    g._mce_cache[(mu, nu)] = out
    return out


def lambda_min(mu: Path, nu: Path) -> tuple[MinPair, ...]:
    """The pairs (alpha, beta) with mu.alpha = nu.beta in mce(mu, nu)."""
    out = []
    for lam in mce(mu, nu):
        alpha = _split(lam, mu.degree)[1]
        beta = _split(lam, nu.degree)[1]
        out.append(MinPair(alpha, beta))
    return tuple(out)


def ext(mu: Path, members: Iterable[Path] | PathFamily) -> tuple[Path, ...]:
    """Ext(mu; E): tails alpha at s(mu) with mu.alpha refining some member.

    Members must share mu's range; deduplicates alpha across witnesses.
    """
    if isinstance(members, PathFamily):
        if members.vertex != mu.range:
            raise RangeMismatch(
                f"family at {members.vertex} but mu has range {mu.range}"
            )
        members = members.members
    out = set()
    for nu in members:
        if nu.range != mu.range:
            raise RangeMismatch(
                f"member {nu.token()} has range {nu.range}, expected {mu.range}"
            )
        for pair in lambda_min(mu, nu):
            out.add(pair.alpha)
    return tuple(sorted(out, key=path_sort_key))


def ext_family(mu: Path, members: Iterable[Path] | PathFamily) -> PathFamily:
    """Ext(mu; E) packaged as a family at s(mu)."""
    return PathFamily(mu.graph, mu.source, ext(mu, members))


def has_prefix_in(p: Path, members: Iterable[Path]) -> bool:
    """Whether p = mu.tail for some mu among members (p in E.Lambda)."""
    zero = Degree.zero(p.graph.rank)
    for mu in members:
        if mu.range == p.range and mu.degree <= p.degree:
            if segment(p, zero, mu.degree) == mu:
                return True
    return False


# -- grid closure --------------------------------------------------------------


def pairs_ds(paths: Iterable[Path]) -> tuple[tuple[Path, Path], ...]:
    """All ordered pairs from the set with equal degree and equal source."""
    items = sorted(set(paths), key=path_sort_key)
    return tuple(
        (lam, mu)
        for lam in items
        for mu in items
        if lam.degree == mu.degree and lam.source == mu.source
    )


def pi_closure(members: Iterable[Path], budget: int = 100_000) -> tuple[Path, ...]:
    """Least superset closed under lam.Ext(mu; {sigma}) for matched pairs.

    The closure rule: lam, mu, sigma in G with d(lam) = d(mu) and
    s(lam) = s(mu) implies lam.Ext(mu; {sigma}) is contained in G.  Degrees
    never exceed the join of the input degrees, so the result is finite even
    on cyclic skeletons; the step budget guards against library bugs.
    """
    closed: set[Path] = set(members)
    work = True
    steps = 0
    while work:
        work = False
        snapshot = sorted(closed, key=path_sort_key)
        for lam, mu in pairs_ds(snapshot):
            for sigma in snapshot:
                for alpha in ext(mu, [s for s in (sigma,) if s.range == mu.range]):
                    steps += 1
                    if steps > budget:
                        raise ClosureBudgetExceeded(
                            f"pi_closure exceeded {budget} steps"
                        )
                    cand = compose(lam, alpha)
                    if cand not in closed:
                        closed.add(cand)
                        work = True
    return tuple(sorted(closed, key=path_sort_key))
