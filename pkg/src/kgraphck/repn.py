"""Concrete Cuntz-Krieger families as sparse matrices, and their checks.

The boundary-path representation acts on the span of boundary paths by
prepending; all defining relations hold exactly there with 0/1 rational
entries.  Matrix-unit grids realize the finite-dimensional pieces of the
degree-fixed subalgebra; the faithfulness checks compare the combinatorial
nonzero pattern of the universal grid against a concrete family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .degree import Degree
from .errors import (
    HypothesisNotMet,
    IncompleteFamily,
    InexactUniverse,
    PairNotInGrid,
    PreconditionFailed,
)
from .kgraph import KGraph, Path, compose, path_sort_key, _split
from .alignment import PathFamily, ext, lambda_min, pairs_ds, pi_closure
from .satiation import FamilyCollection, Membership, member
from .boundary import boundary_paths, condition_c
from .formal import FormalElement, gauge_expectation
from .matrices import SparseMatrix


class CKFamily:
    """An assignment of sparse matrices to every path of a finite category.

    ``basis`` optionally labels the carrier's coordinates (for instance by
    boundary paths), which the gauge checks require.  Use
    :func:`verify_family` for the full relation check; construction only
    validates shapes.
    """

    def __init__(
        self,
        graph: KGraph,
        dim: int,
        ops: dict[Path, SparseMatrix],
        basis: tuple[Path, ...] | None = None,
        backend: str = "exact",
    ):
        for lam, mat in ops.items():
            if (mat.rows, mat.cols) != (dim, dim):
                raise ValueError(f"operator for {lam.token()} has wrong shape")
        self.graph = graph
        self.dim = dim
        self.ops = dict(ops)
        self.basis = basis
        self.backend = backend

    def op(self, lam: Path) -> SparseMatrix:
        mat = self.ops.get(lam)
        if mat is None:
            raise IncompleteFamily(f"no operator assigned to {lam.token()}")
        return mat

    def vertex_op(self, v: str) -> SparseMatrix:
        return self.op(self.graph.vertex_path(v))

    def range_projection(self, lam: Path) -> SparseMatrix:
        m = self.op(lam)
        return m @ m.adjoint()

    def is_degenerate(self) -> bool:
        return all(self.vertex_op(v).is_zero() for v in self.graph.vertices)

    @classmethod
    def zero_family(cls, graph: KGraph, dim: int = 1) -> "CKFamily":
        return cls(graph, dim, {lam: SparseMatrix.zero(dim) for lam in graph.all_paths()})

    def to_complex(self) -> "CKFamily":
        """The same family over complex floats (for the analytic checks)."""
        ops = {
            lam: SparseMatrix(
                mat.rows, mat.cols, {k: complex(v) for k, v in mat.data.items()}
            )
            for lam, mat in self.ops.items()
        }
        return CKFamily(self.graph, self.dim, ops, basis=self.basis, backend="float")


def evaluate(a: FormalElement, T: CKFamily) -> SparseMatrix:
    """The *-homomorphic evaluation of a formal element in the family."""
    out = SparseMatrix.zero(T.dim)
    for (lam, mu), coeff in a.terms.items():
        out = out + (T.op(lam) @ T.op(mu).adjoint()) * coeff
    return out


def gap_product(T: CKFamily, members: Iterable[Path], v: str) -> SparseMatrix:
    """prod over E of (t_v - t_lam t_lam*); the empty product is the unit."""
    out = SparseMatrix.identity(T.dim)
    tv = T.vertex_op(v)
    for lam in sorted(set(members), key=path_sort_key):
        out = out @ (tv - T.range_projection(lam))
    return out


# -- relation checks ------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    ok: bool
    deviation: float
    detail: str = ""


@dataclass
class FamilyReport:
    results: list[CheckResult] = field(default_factory=list)
    degenerate: bool = False

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def max_deviation(self) -> float:
        return max((r.deviation for r in self.results), default=0.0)

    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]


def _dev(diff: SparseMatrix) -> float:
    return diff.max_abs()


def verify_family(
    T: CKFamily, generators: Iterable[PathFamily] | FamilyCollection = ()
) -> FamilyReport:
    """Check the partial-isometry relations and the gap relation.

    The four checks: vertex operators are mutually orthogonal projections;
    composition is multiplicative; adjoint cross-terms expand over minimal
    common extensions; and the gap product vanishes for every generator
    family.  Exact for rational entries.
    """
    g = T.graph
    paths = g.all_paths()
    report = FamilyReport(degenerate=T.is_degenerate())

    worst = 0.0
    bad = ""
    for v in g.vertices:
        tv = T.vertex_op(v)
        d = max(_dev(tv @ tv - tv), _dev(tv.adjoint() - tv))
        if d > worst:
            worst, bad = d, f"projection defect at {v}"
        for w in g.vertices:
            if w > v:
                d = _dev(tv @ T.vertex_op(w))
                if d > worst:
                    worst, bad = d, f"overlap of {v} and {w}"
    report.results.append(CheckResult("TCK1", worst == 0.0, worst, bad))

    worst = 0.0
    bad = ""
    for lam in paths:
        for mu in paths:
            if lam.source != mu.range:
                continue
            d = _dev(T.op(lam) @ T.op(mu) - T.op(compose(lam, mu)))
            if d > worst:
                worst, bad = d, f"({lam.token()}, {mu.token()})"
    report.results.append(CheckResult("TCK2", worst == 0.0, worst, bad))

    worst = 0.0
    bad = ""
    for lam in paths:
        for mu in paths:
            lhs = T.op(lam).adjoint() @ T.op(mu)
            rhs = SparseMatrix.zero(T.dim)
            for pair in lambda_min(lam, mu):
                rhs = rhs + T.op(pair.alpha) @ T.op(pair.beta).adjoint()
            d = _dev(lhs - rhs)
            if d > worst:
                worst, bad = d, f"({lam.token()}, {mu.token()})"
    report.results.append(CheckResult("TCK3", worst == 0.0, worst, bad))

    members = generators.members if isinstance(generators, FamilyCollection) else generators
    worst = 0.0
    bad = ""
    for fam in members:
        d = _dev(gap_product(T, fam.members, fam.vertex))
        if d > worst:
            worst, bad = d, f"gap product of {fam!r}"
    report.results.append(CheckResult("CK", worst == 0.0, worst, bad))
    return report


# -- the boundary-path representation ----------------------------------------------


def boundary_rep(graph: KGraph, S: FamilyCollection, verify: bool = True) -> CKFamily:
    """The family acting on the span of boundary paths by prepending.

    Basis vectors are the boundary paths for S; the operator of lam sends
    e_x to e_{lam.x} when s(lam) = r(x) and kills it otherwise.  The result
    passes every relation exactly, with the members of S as generators.
    """
    basis: list[Path] = []
    for v in graph.vertices:
        basis.extend(bp.path for bp in boundary_paths(v, S))
    basis.sort(key=path_sort_key)
    index = {x: i for i, x in enumerate(basis)}
    dim = len(basis)
    ops = {}
    one = Fraction(1)
    for lam in graph.all_paths():
        data = {}
        for x, col in index.items():
            if lam.source == x.range:
                data[(index[compose(lam, x)], col)] = one
        ops[lam] = SparseMatrix(dim, dim, data)
    T = CKFamily(graph, dim, ops, basis=tuple(basis))
    if verify:
        report = verify_family(T, S)
        assert report.ok, f"boundary representation failed: {report.failed()}"
        assert all(not T.vertex_op(v).is_zero() for v in graph.vertices)
    return T


# -- matrix-unit grids ---------------------------------------------------------------


def grid_tails(PiE: Sequence[Path], lam: Path) -> tuple[Path, ...]:
    """The positive-degree nu with lam.nu in the grid set."""
    out = []
    for rho in PiE:
        if rho != lam and rho.range == lam.range and lam.degree <= rho.degree:
            pre, tail = _split(rho, lam.degree)
            if pre == lam:
                out.append(tail)
    return tuple(sorted(out, key=path_sort_key))


def _require_pair(PiE: Sequence[Path], lam: Path, mu: Path) -> None:
    pis = set(PiE)
    if (
        lam not in pis
        or mu not in pis
        or lam.degree != mu.degree
        or lam.source != mu.source
    ):
        raise PairNotInGrid(f"({lam.token()}, {mu.token()})")


def theta(T: CKFamily, PiE: Sequence[Path], lam: Path, mu: Path) -> SparseMatrix:
    """The matrix unit t_lam (prod of gaps over grid tails) t_mu*."""
    _require_pair(PiE, lam, mu)
    mid = gap_product(T, grid_tails(PiE, lam), lam.source)
    return T.op(lam) @ mid @ T.op(mu).adjoint()


def formal_theta(PiE: Sequence[Path], lam: Path, mu: Path) -> FormalElement:
    """The same matrix unit expanded symbolically in the formal algebra."""
    _require_pair(PiE, lam, mu)
    g = lam.graph
    sv = g.vertex_path(lam.source)
    word = FormalElement.generator(sv, sv)
    for nu in grid_tails(PiE, lam):
        gap = FormalElement.generator(sv, sv) - FormalElement.generator(nu, nu)
        word = _formal_mul(word, gap)
    left = FormalElement.generator(lam, sv)
    right = FormalElement.generator(sv, mu)
    return _formal_mul(_formal_mul(left, word), right)


def _formal_mul(a: FormalElement, b: FormalElement) -> FormalElement:
    from .formal import formal_mul

    return formal_mul(a, b)


@dataclass
class MatrixUnitGrid:
    """A grid set with its matched pairs and their matrix units in T."""

    paths: tuple[Path, ...]
    pairs: tuple[tuple[Path, Path], ...]
    thetas: dict

    @classmethod
    def over(cls, T: CKFamily, window: Sequence[Path]) -> "MatrixUnitGrid":
        PiE = pi_closure(window)
        pairs = pairs_ds(PiE)
        return cls(PiE, pairs, {(l, m): theta(T, PiE, l, m) for l, m in pairs})


@dataclass
class MatrixUnitReport:
    adjoint_dev: float
    product_dev: float
    span_dev: float
    pairs: int

    @property
    def ok(self) -> bool:
        return self.adjoint_dev == 0.0 and self.product_dev == 0.0 and self.span_dev == 0.0

    def max_deviation(self) -> float:
        return max(self.adjoint_dev, self.product_dev, self.span_dev)


def matrix_unit_check(T: CKFamily, PiE: Sequence[Path]) -> MatrixUnitReport:
    """Verify the adjoint/product matrix-unit identities and the span identity.

    The grid elements must satisfy theta* = theta with swapped indices,
    multiply like matrix units, and sum back to t_lam t_mu* along tails.
    """
    grid = pairs_ds(PiE)
    thetas = {(lam, mu): theta(T, PiE, lam, mu) for lam, mu in grid}

    adjoint_dev = 0.0
    for (lam, mu), mat in thetas.items():
        adjoint_dev = max(adjoint_dev, _dev(mat.adjoint() - thetas[(mu, lam)]))

    product_dev = 0.0
    for (lam, mu), m1 in thetas.items():
        for (sig, tau), m2 in thetas.items():
            expected = (
                thetas[(lam, tau)]
                if mu == sig
                else SparseMatrix.zero(T.dim)
            )
            product_dev = max(product_dev, _dev(m1 @ m2 - expected))

    span_dev = 0.0
    for lam, mu in grid:
        rhs = SparseMatrix.zero(T.dim)
        # nu ranges over all tails with lam.nu in the grid set, the vertex
        # path included (lam itself is a grid element)
        tails = (lam.graph.vertex_path(lam.source),) + grid_tails(PiE, lam)
        for nu in tails:
            rhs = rhs + thetas[(compose(lam, nu), compose(mu, nu))]
        span_dev = max(span_dev, _dev(T.op(lam) @ T.op(mu).adjoint() - rhs))

    return MatrixUnitReport(adjoint_dev, product_dev, span_dev, len(grid))


def tails_family(PiE: Sequence[Path], lam: Path) -> PathFamily:
    """T(lam): positive-degree tails of lam inside the grid, at s(lam)."""
    return PathFamily(lam.graph, lam.source, grid_tails(PiE, lam))


def nonzero_theta_pattern(
    S: FamilyCollection, PiE: Sequence[Path]
) -> frozenset[tuple[Path, Path]]:
    """Grid pairs whose universal matrix unit is nonzero.

    A grid element vanishes universally exactly when the tail family of its
    row index belongs to the collection; empty or non-exhaustive tail
    families never do.  Needs an exact universe for definite membership.
    """
    if not S.exact:
        raise InexactUniverse("the vanishing pattern needs an exact universe")
    out = set()
    for lam, mu in pairs_ds(PiE):
        if member(tails_family(PiE, lam), S) is not Membership.YES:
            out.add((lam, mu))
    return frozenset(out)


# -- faithfulness --------------------------------------------------------------------


@dataclass
class FaithfulnessVerdict:
    route_a_ok: bool
    route_b_ok: bool
    route_a_violations: list[str]
    route_b_violations: list[str]

    @property
    def faithful(self) -> bool:
        return self.route_a_ok and self.route_b_ok

    @property
    def routes_agree(self) -> bool:
        return self.route_a_ok == self.route_b_ok


def faithful_on_core_check(
    T: CKFamily,
    S: FamilyCollection,
    windows: Iterable[Sequence[Path]] = (),
) -> FaithfulnessVerdict:
    """Two routes to injectivity on the degree-fixed subalgebra.

    Route (a): over each window's grid, every universally nonzero matrix
    unit is nonzero in T.  Route (b): every vertex operator is nonzero and
    every gap product over a universe family outside S is nonzero.  The
    supplied windows are augmented with one window per family outside S (the
    family plus its range vertex), which makes route (a) complete whenever
    route (b) fails; disagreement therefore indicates a library bug.
    """
    g = T.graph
    windows = [tuple(w) for w in windows]
    for F in S.universe_all():
        if F not in S.members:
            windows.append((g.vertex_path(F.vertex),) + F.sorted_members())

    a_viol: list[str] = []
    for window in windows:
        PiE = pi_closure(window)
        for lam, mu in sorted(nonzero_theta_pattern(S, PiE), key=lambda p: (p[0].sort_key(), p[1].sort_key())):
            if theta(T, PiE, lam, mu).is_zero():
                a_viol.append(
                    f"theta({lam.token()},{mu.token()}) vanished in grid of size {len(PiE)}"
                )

    b_viol: list[str] = []
    for v in g.vertices:
        if T.vertex_op(v).is_zero():
            b_viol.append(f"vertex operator {v} is zero")
    for F in S.universe_all():
        if F not in S.members and gap_product(T, F.members, F.vertex).is_zero():
            b_viol.append(f"gap product of {F!r} vanished")

    return FaithfulnessVerdict(not a_viol, not b_viol, a_viol, b_viol)


def shift_gaps_check(T: CKFamily, members: Iterable[Path], mu: Path):
    """Deviation of the gap-shift identity for (E, mu); zero for any family.

    Compares prod(t_v - t_lam t_lam*) t_mu t_mu* against
    t_mu prod over Ext(mu;E) of (t_s - t_alpha t_alpha*) t_mu*, with empty
    products equal to the unit.
    """
    members = list(members)
    v = mu.range
    lhs = gap_product(T, members, v) @ T.range_projection(mu)
    tails = ext(mu, [p for p in members if p.range == v])
    rhs = T.op(mu) @ gap_product(T, tails, mu.source) @ T.op(mu).adjoint()
    return _dev(lhs - rhs)


# -- uniqueness-theorem hypotheses ----------------------------------------------------


@dataclass
class UniquenessHypotheses:
    relations_ok: bool
    vertices_nonzero: bool
    gaps_ok: bool
    condition_c_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.relations_ok
            and self.vertices_nonzero
            and self.gaps_ok
            and self.condition_c_ok
        )


def check_uniqueness_hypotheses(T: CKFamily, S: FamilyCollection) -> UniquenessHypotheses:
    report = verify_family(T, S)
    vertices = all(not T.vertex_op(v).is_zero() for v in T.graph.vertices)
    gaps = all(
        not gap_product(T, F.members, F.vertex).is_zero()
        for F in S.universe_all()
        if F not in S.members
    )
    cond = condition_c(S).ok
    return UniquenessHypotheses(report.ok, vertices, gaps, cond)


def expectation_contraction_check(
    T: CKFamily, a: FormalElement, hypotheses: UniquenessHypotheses
) -> tuple[float, float]:
    """Operator norms of the expected and the full element; lhs <= rhs.

    Requires verified relations, nonzero vertices and gaps, and a clean
    aperiodicity report, mirroring the uniqueness theorem's hypotheses.
    """
    if not hypotheses.all_ok:
        raise HypothesisNotMet("uniqueness hypotheses not verified for this family")
    lhs = evaluate(gauge_expectation(a), T).norm2()
    rhs = evaluate(a, T).norm2()
    return lhs, rhs


# -- gauge checks ----------------------------------------------------------------------


def _z_power(z: Sequence[complex], n: Degree) -> complex:
    out = 1 + 0j
    for zi, ni in zip(z, n):
        out *= zi**ni
    return out


def gauge_unitary(T: CKFamily, z: Sequence[complex]) -> np.ndarray:
    if T.basis is None:
        raise PreconditionFailed("gauge checks need a basis-labeled family")
    return np.diag([_z_power(z, x.degree) for x in T.basis])


def gauge_unitary_check(T: CKFamily, zs: Iterable[Sequence[complex]]) -> float:
    """max over z, lam of || U_z t_lam U_z* - z^{d(lam)} t_lam ||."""
    worst = 0.0
    for z in zs:
        U = gauge_unitary(T, z)
        for lam in T.graph.all_paths():
            mat = T.op(lam).to_dense()
            dev = np.linalg.norm(
                U @ mat @ U.conj().T - _z_power(z, lam.degree) * mat, 2
            )
            worst = max(worst, float(dev))
    return worst


def gauge_grid(graph: KGraph) -> list[tuple[complex, ...]]:
    """Roots-of-unity grid fine enough to average to the exact expectation.

    Coordinate i runs over the (D_i + 1)-th roots of unity where D is the
    maximum path degree, so discrete averaging kills every skew term.
    """
    D = graph.max_degree
    axes = [
        [np.exp(2j * np.pi * t / (d + 1)) for t in range(d + 1)] for d in D
    ]
    return [tuple(z) for z in itertools.product(*axes)]


def sampled_gauge_average(
    T: CKFamily, a: FormalElement, zs: Sequence[Sequence[complex]]
) -> np.ndarray:
    """Average of U_z eval(a) U_z* over the samples."""
    acc = np.zeros((T.dim, T.dim), dtype=complex)
    mat = evaluate(a, T).to_dense()
    for z in zs:
        U = gauge_unitary(T, z)
        acc += U @ mat @ U.conj().T
    return acc / len(zs)
