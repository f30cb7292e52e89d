"""Deciding exhaustiveness and enumerating finite exhaustive families.

A family E at v is exhaustive when every path at v has a common refinement
with some member.  Exhaustive verdicts are three-valued: the decision is
exact when the path category is finite (acyclic skeleton) or when every
vertex reachable from v supports continuations of every color (then the
degree-N prefix criterion below is complete); otherwise a bounded witness
search may return Unknown.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

from .degree import Degree, join_all
from .errors import BudgetExceeded
from .kgraph import KGraph, Path, segment
from .alignment import PathFamily, ext


class Status(Enum):
    EXHAUSTIVE = "exhaustive"
    NOT_EXHAUSTIVE = "not-exhaustive"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ExhaustiveVerdict:
    status: Status
    witness: Path | None
    searched_depth: Degree

    def __bool__(self) -> bool:
        return self.status is Status.EXHAUSTIVE


def _reachable_vertices(graph: KGraph, v: str) -> set[str]:
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for c in range(1, graph.rank + 1):
            for e in graph.edges_from(u, c):
                if e.source not in seen:
                    seen.add(e.source)
                    stack.append(e.source)
    return seen


def _source_free_from(graph: KGraph, v: str) -> bool:
    """Every vertex reachable from v continues in every color."""
    return all(
        graph.edges_from(u, c)
        for u in _reachable_vertices(graph, v)
        for c in range(1, graph.rank + 1)
    )


def is_exhaustive(E: PathFamily, depth: Degree | None = None) -> ExhaustiveVerdict:
    """Decide whether E is exhaustive at its range vertex.

    Exact on acyclic graphs (full check over vLambda) and on source-free
    reachable regions (prefix criterion at degree N, the join of member
    degrees: a degree-N path misses E exactly when no member is a prefix).
    Otherwise searches vLambda up to ``depth`` for a witness with empty
    extension set and returns Unknown if none is found.
    """
    g = E.graph
    v = E.vertex
    if not E.members:
        return ExhaustiveVerdict(Status.NOT_EXHAUSTIVE, g.vertex_path(v), Degree.zero(g.rank))

    if g.is_acyclic:
        for lam in g.paths_at(v):
            if not ext(lam, E):
                return ExhaustiveVerdict(Status.NOT_EXHAUSTIVE, lam, g.max_degree)
        return ExhaustiveVerdict(Status.EXHAUSTIVE, None, g.max_degree)

    N = join_all((p.degree for p in E.members), g.rank)
    zero = Degree.zero(g.rank)
    if _source_free_from(g, v):
        for x in g.paths(v, N):
            if not any(segment(x, zero, mu.degree) == mu for mu in E.members):
                return ExhaustiveVerdict(Status.NOT_EXHAUSTIVE, x, N)
        return ExhaustiveVerdict(Status.EXHAUSTIVE, None, N)

    if depth is None:
        depth = N + Degree(*([1] * g.rank))
    for lam in g.paths_up_to(v, depth):
        if not ext(lam, E):
            return ExhaustiveVerdict(Status.NOT_EXHAUSTIVE, lam, depth)
    return ExhaustiveVerdict(Status.UNKNOWN, None, depth)


def _subset_count(n: int, max_size: int) -> int:
    return sum(math.comb(n, s) for s in range(1, min(n, max_size) + 1))


def fe_enumerate(
    graph: KGraph,
    v: str,
    depth: Degree,
    max_size: int,
    budget: int = 200_000,
) -> tuple[PathFamily, ...]:
    """All exhaustive E in vLambda^{<=depth} minus the vertex, |E| <= max_size.

    For acyclic graphs with depth at or above the maximum degree this is
    exactly the v-ranged part of the finite-exhaustive universe, up to the
    size cap.  Output is deduplicated and canonically sorted.
    """
    candidates = [p for p in graph.paths_up_to(v, depth) if not p.is_vertex()]
    if _subset_count(len(candidates), max_size) > budget:
        raise BudgetExceeded(
            f"{len(candidates)} candidate paths exceed the subset budget {budget}"
        )
    out = []
    for size in range(1, min(len(candidates), max_size) + 1):
        for combo in itertools.combinations(candidates, size):
            fam = PathFamily(graph, v, combo)
            if is_exhaustive(fam).status is Status.EXHAUSTIVE:
                out.append(fam)
    out.sort(key=lambda f: f.sort_key())
    return tuple(out)


def minimal_exhaustive(
    graph: KGraph,
    v: str,
    depth: Degree,
    max_size: int,
    budget: int = 200_000,
) -> tuple[PathFamily, ...]:
    """The inclusion-minimal families among fe_enumerate's output."""
    families = fe_enumerate(graph, v, depth, max_size, budget)
    out = [
        f
        for f in families
        if not any(g is not f and g.members < f.members for g in families)
    ]
    return tuple(out)
