"""Multi-erasure repair of GRM codewords: grouping of failures, the
distributed scheme (one replacement per failure, no sharing), and the
centralized scheme driven by a multiple-repair matrix.

Failures are partitioned along an axis: nodes agreeing on every non-axis
coordinate form a group and live on one line of q nodes.  The distributed
scheme repairs each failed node independently with polynomials that exclude
the other failures through a blocking product H_u; the centralized scheme
folds the whole blocking product into the subspace polynomial's argument,

    L_V(xi_e * H_i(x) * x_1^(u-1)) / H_i(x),

so that all l_i * t column values at a helper stay inside one coset of the
image of L_V, and the helper is charged only t - s_i symbols once.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .fields import (
    FieldElement,
    FieldSpec,
    Subspace,
    linearized_coeffs,
    rank_fp,
    solve_fp,
    span_ranks,
    uni_pow,
)
from .grm import Codeword, ErasedCodeword, GrmParams, evaluate_on_nodes, random_codeword
from .repair_single import (
    BandwidthReport,
    InfeasibleSchemeError,
    LineRecovery,
    LineRepairPoly,
    build_line_recovery,
    subspace_quotient_terms,
)


class MatrixPropertyViolation(ValueError):
    """A multiple-repair matrix failed one of its defining properties."""


# ---------------------------------------------------------------------------
# erasure patterns and grouping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErasurePattern:
    """A set of failed nodes, kept in the order given for reproducibility."""

    params: GrmParams
    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) == 0:
            raise ValueError("at least one erasure is required")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("erased nodes must be distinct")
        for j in self.nodes:
            if not 0 <= j < self.params.n:
                raise ValueError(f"node rank {j} out of range")
        d = self.params.d
        if len(self.nodes) > d - 1:
            raise ValueError(
                f"{len(self.nodes)} erasures exceed the repairability limit d-1 = {d - 1}"
            )

    @property
    def l(self) -> int:
        return len(self.nodes)


def make_pattern(params: GrmParams, nodes: Sequence) -> ErasurePattern:
    ranks = tuple(
        j if isinstance(j, int) else params.node_rank(j) for j in nodes
    )
    return ErasurePattern(params, ranks)


@dataclass(frozen=True)
class Group:
    """Failures sharing all non-axis coordinates (one line of the grid)."""

    suffix: tuple[tuple[int, int], ...]   # (0-based coord, pinned rank)
    axis_ranks: tuple[int, ...]           # distinct axis coordinates, sorted

    @property
    def size(self) -> int:
        return len(self.axis_ranks)


@dataclass(frozen=True)
class Grouping:
    params: GrmParams
    axis: int
    groups: tuple[Group, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(g.size for g in self.groups)

    @property
    def w(self) -> int:
        return len(self.groups)

    @property
    def l(self) -> int:
        return sum(self.sizes)

    def line_node(self, group: Group, x: int) -> int:
        q = self.params.q
        rank = x * q ** (self.axis - 1)
        for pos, beta in group.suffix:
            rank += beta * q ** pos
        return rank

    def failed_nodes(self) -> tuple[int, ...]:
        """Failed node ranks in (group, ascending axis coordinate) order."""
        out = []
        for g in self.groups:
            out.extend(self.line_node(g, x) for x in g.axis_ranks)
        return tuple(out)


def group_erasures(pattern: ErasurePattern, axis: int = 1) -> Grouping:
    """Partition failures by equality of the non-axis coordinates.

    Groups appear in order of first appearance in the pattern; axis
    coordinates within a group are sorted.
    """
    params = pattern.params
    if not 1 <= axis <= params.m:
        raise ValueError(f"axis {axis} out of range [1, {params.m}]")
    ax = axis - 1
    order: list[tuple] = []
    members: dict[tuple, list[int]] = {}
    for j in pattern.nodes:
        coords = params.node_coords(j)
        key = tuple((pos, coords[pos]) for pos in range(params.m) if pos != ax)
        if key not in members:
            members[key] = []
            order.append(key)
        members[key].append(coords[ax])
    groups = tuple(
        Group(suffix=key, axis_ranks=tuple(sorted(members[key]))) for key in order
    )
    return Grouping(params=params, axis=axis, groups=groups)


# ---------------------------------------------------------------------------
# per-group subspace dimensions
# ---------------------------------------------------------------------------

def distributed_subspace_dim(p: int, t: int, mu: int, li: int) -> int:
    """Largest s with p^s <= p^t - mu - l_i."""
    room = p ** t - mu - li
    if room < 1:
        raise InfeasibleSchemeError(
            f"group of size {li} infeasible for distributed repair: "
            f"p^t - mu - l_i = {room} < 1"
        )
    s = 0
    while p ** (s + 1) <= room:
        s += 1
    return s


def centralized_subspace_dim(p: int, t: int, mu: int, li: int) -> int:
    """Largest s with p^s * (2*l_i - 1) <= p^t + l_i - mu - 2."""
    num = p ** t + li - mu - 2
    den = 2 * li - 1
    if num < den:
        raise InfeasibleSchemeError(
            f"group of size {li} infeasible for centralized repair: "
            f"(p^t + l_i - mu - 2)/(2 l_i - 1) = {num}/{den} < 1"
        )
    s = 0
    while p ** (s + 1) * den <= num:
        s += 1
    return s


def choose_axis(pattern: ErasurePattern, model: str) -> int:
    """Axis minimizing the model's bound formula (ties: smallest axis)."""
    params = pattern.params
    p, t, mu = params.field.p, params.field.t, params.mu
    best_axis, best_bound = None, None
    for axis in range(1, params.m + 1):
        grouping = group_erasures(pattern, axis)
        try:
            bound = 0
            for li in grouping.sizes:
                if model == "distributed":
                    s = distributed_subspace_dim(p, t, mu, li)
                    bound += li * (params.q - li) * (t - s)
                else:
                    s = centralized_subspace_dim(p, t, mu, li)
                    bound += (params.q - li) * (t - s)
        except InfeasibleSchemeError:
            continue
        if best_bound is None or bound < best_bound:
            best_axis, best_bound = axis, bound
    if best_axis is None:
        raise InfeasibleSchemeError("no axis yields a feasible grouping")
    return best_axis


# ---------------------------------------------------------------------------
# distributed scheme
# ---------------------------------------------------------------------------

@dataclass
class DistributedPlan:
    params: GrmParams
    grouping: Grouping
    s_list: tuple[int, ...]
    subspaces: tuple[Subspace, ...]
    polys: dict  # (group index, u) -> tuple[LineRepairPoly, ...]
    recoveries: dict  # (group index, u) -> LineRecovery
    failed: dict  # (group index, u) -> node rank
    bound: int


def build_distributed_plan(
    params: GrmParams,
    grouping: Grouping,
    subspaces: Sequence[Subspace] | None = None,
) -> DistributedPlan:
    f = params.field
    p, t, q = f.p, f.t, params.q
    s_list = []
    chosen: list[Subspace] = []
    for i, g in enumerate(grouping.groups):
        s = distributed_subspace_dim(p, t, params.mu, g.size)
        if subspaces is not None:
            V = subspaces[i]
            if V.dim > s:
                raise InfeasibleSchemeError(
                    f"group {i}: subspace dimension {V.dim} exceeds feasible {s}"
                )
            s = V.dim
        else:
            V = Subspace.canonical(f, s)
        s_list.append(s)
        chosen.append(V)

    polys = {}
    recoveries = {}
    failed = {}
    bound = 0
    xi_ranks = f.basis_ranks()
    for i, g in enumerate(grouping.groups):
        V = chosen[i]
        bound += g.size * (q - g.size) * (t - s_list[i])
        helper_xs = [x for x in range(q) if x not in g.axis_ranks]
        for u, alpha in enumerate(g.axis_ranks):
            blocking = tuple(a for a in g.axis_ranks if a != alpha)
            ps = tuple(
                LineRepairPoly(
                    field=f,
                    m=params.m,
                    axis=grouping.axis,
                    suffix=g.suffix,
                    shift=alpha,
                    terms=subspace_quotient_terms(f, V, xr),
                    extra_roots=blocking,
                )
                for xr in xi_ranks
            )
            polys[(i, u)] = ps
            recoveries[(i, u)] = build_line_recovery(
                f, ps, alpha, helper_xs, lambda x, g=g: grouping.line_node(g, x)
            )
            failed[(i, u)] = grouping.line_node(g, alpha)
    return DistributedPlan(
        params=params,
        grouping=grouping,
        s_list=tuple(s_list),
        subspaces=tuple(chosen),
        polys=polys,
        recoveries=recoveries,
        failed=failed,
        bound=bound,
    )


def run_distributed_repair(plan: DistributedPlan, codeword) -> tuple[dict, BandwidthReport]:
    """Repair every failure independently; downloads are not shared."""
    params = plan.params
    f = params.field
    all_failed = set(plan.failed.values())
    erased = (
        codeword
        if isinstance(codeword, ErasedCodeword)
        else codeword.erase(all_failed)
    )
    if not all_failed <= erased.erased:
        raise ValueError("plan's failed nodes are not all erased")
    recovered = {}
    per_helper: dict[int, int] = {}
    for key, rec in plan.recoveries.items():
        downloads = {}
        for node, (basis, *_) in rec.helpers.items():
            if not basis:
                continue
            downloads[node] = rec.respond(node, erased.rank_at(node))
            per_helper[node] = per_helper.get(node, 0) + len(basis)
        recovered[plan.failed[key]] = FieldElement(f, rec.recover(downloads))
    report = BandwidthReport(
        downloaded_fp_symbols=sum(per_helper.values()),
        per_helper=per_helper,
        bound=plan.bound,
        model="distributed",
    )
    return recovered, report


# ---------------------------------------------------------------------------
# centralized scheme: the multiple-repair matrix
# ---------------------------------------------------------------------------

def _centralized_column_poly(
    f: FieldSpec,
    m: int,
    axis: int,
    suffix,
    group_roots: Sequence[int],
    V: Subspace,
    xi_rank: int,
    u: int,
) -> LineRepairPoly:
    """L_V(xi_e * H(x) * x^(u-1)) / H(x) as a dense polynomial in x.

    Termwise: sum over k of c_k * xi_e^(p^k) * H(x)^(p^k - 1) * x^((u-1) p^k).
    """
    cs = linearized_coeffs(V)
    H = [f.neg(group_roots[0]), 1] if group_roots else [1]
    for r in group_roots[1:]:
        Hn = [0] * (len(H) + 1)
        nr = f.neg(r)
        for i, c in enumerate(H):
            if c:
                Hn[i] = f.add(Hn[i], f.mul(c, nr))
                Hn[i + 1] = f.add(Hn[i + 1], c)
        H = Hn
    terms: dict[int, int] = {}
    for k, ck in enumerate(cs):
        if ck == 0:
            continue
        scalar = f.mul(ck, f.pow(xi_rank, f.p ** k))
        hk = uni_pow(H, f.p ** k - 1, f)
        off = (u - 1) * f.p ** k
        for e, hc in enumerate(hk):
            if hc:
                key = off + e
                val = f.add(terms.get(key, 0), f.mul(scalar, hc))
                if val:
                    terms[key] = val
                elif key in terms:
                    del terms[key]
    return LineRepairPoly(
        field=f,
        m=m,
        axis=axis,
        suffix=tuple(suffix),
        shift=0,
        terms=tuple(sorted(terms.items())),
    )


@dataclass
class RepairMatrix:
    """n x (l*t) matrix of dual-codeword columns for a centralized repair.

    Column (i, u, e) holds the evaluations of the group-i polynomial built
    from basis element xi_e and power u; columns are ordered group-major,
    then u, then e.  Rows follow the canonical node order.
    """

    params: GrmParams
    grouping: Grouping
    failed: tuple[int, ...]
    column_meta: tuple[tuple[int, int, int], ...]   # (group, u, e) 0-based
    column_polys: tuple[LineRepairPoly, ...]
    entries: np.ndarray
    s_list: tuple[int, ...]
    subspaces: tuple[Subspace, ...]

    @property
    def l(self) -> int:
        return len(self.failed)

    @property
    def bound(self) -> int:
        t = self.params.field.t
        return sum(
            (self.params.q - g.size) * (t - s)
            for g, s in zip(self.grouping.groups, self.s_list)
        )

    def to_csv_rows(self):
        for j in range(self.params.n):
            yield [j] + [int(v) for v in self.entries[j]]


def build_repair_matrix(
    params: GrmParams,
    grouping: Grouping,
    subspaces: Sequence[Subspace] | None = None,
) -> RepairMatrix:
    f = params.field
    p, t, q = f.p, f.t, params.q
    l = grouping.l
    s_list = []
    chosen: list[Subspace] = []
    for i, g in enumerate(grouping.groups):
        s = centralized_subspace_dim(p, t, params.mu, g.size)
        if subspaces is not None:
            V = subspaces[i]
            if V.dim > s:
                raise InfeasibleSchemeError(
                    f"group {i}: subspace dimension {V.dim} exceeds feasible {s}"
                )
            s = V.dim
        else:
            V = Subspace.canonical(f, s)
        s_list.append(s)
        chosen.append(V)

    xi_ranks = f.basis_ranks()
    metas = []
    polys = []
    entries = np.zeros((params.n, l * t), dtype=np.int32)
    col = 0
    mu_dual = params.mu_dual
    for i, g in enumerate(grouping.groups):
        roots = list(g.axis_ranks)
        for u in range(1, g.size + 1):
            for e, xr in enumerate(xi_ranks):
                poly = _centralized_column_poly(
                    f, params.m, grouping.axis, g.suffix, roots, chosen[i], xr, u
                )
                max_deg = max((ex for ex, _ in poly.terms), default=0)
                line_deg = (params.m - 1) * (q - 1) + max_deg
                if line_deg > mu_dual:
                    raise AssertionError(
                        f"column degree {line_deg} exceeds mu_dual {mu_dual}"
                    )
                metas.append((i, u - 1, e))
                polys.append(poly)
                for x in range(q):
                    entries[grouping.line_node(g, x), col] = poly.value_on_line(x)
                col += 1
    return RepairMatrix(
        params=params,
        grouping=grouping,
        failed=grouping.failed_nodes(),
        column_meta=tuple(metas),
        column_polys=tuple(polys),
        entries=entries,
        s_list=tuple(s_list),
        subspaces=tuple(chosen),
    )


@dataclass
class MatrixVerification:
    columns_dual: bool
    max_column_degree: int
    orthogonality_codewords: int
    failed_rank: int
    full_rank: bool
    bandwidth: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.columns_dual and self.full_rank and self.bandwidth <= self.bound


EXHAUSTIVE_CODEWORD_LIMIT = 4096


def verify_repair_matrix(
    matrix: RepairMatrix,
    samples: int = 50,
    seed: int = 0,
    exhaustive: str | bool = "auto",
) -> MatrixVerification:
    """Check the three defining properties; raise MatrixPropertyViolation.

    Property 1 combines a degree audit of each column polynomial with
    orthogonality against primal codewords (every codeword when the code is
    small enough, otherwise `samples` random ones).  Property 2 is full
    F_p-rank of the failed-row block.  Property 3 recomputes the bandwidth
    from the row spans.
    """
    params = matrix.params
    f = params.field
    p, t = f.p, f.t

    # property 1a: degree audit
    max_deg = 0
    for h, poly in enumerate(matrix.column_polys):
        deg = poly.to_multipoly().total_degree()
        max_deg = max(max_deg, deg)
        if deg > params.mu_dual:
            raise MatrixPropertyViolation(
                f"columns-not-dual: column {h} has degree {deg} > {params.mu_dual}"
            )

    # property 1b: orthogonality against primal codewords
    if exhaustive == "auto":
        exhaustive = params.q ** params.k_grm <= EXHAUSTIVE_CODEWORD_LIMIT
    if exhaustive:
        vectors = _all_codeword_vectors(params)
    else:
        vectors = [random_codeword(params, seed + i)[1].ranks for i in range(samples)]
    checked = 0
    for vec in vectors:
        prods = f.np_mul[np.asarray(vec, dtype=np.int32)[:, None], matrix.entries]
        sums = f.np_digits[prods].sum(axis=0) % p
        bad = np.nonzero(sums.any(axis=1))[0]
        if bad.size:
            raise MatrixPropertyViolation(
                f"columns-not-dual: column {int(bad[0])} not orthogonal to a codeword"
            )
        checked += 1

    # property 2: full F_p rank of M[I, :]
    coords = []
    for j in matrix.failed:
        for c in range(t):
            coords.append([f.digits(int(v))[c] for v in matrix.entries[j]])
    r = rank_fp(coords, p)
    if r < matrix.l * t:
        raise MatrixPropertyViolation(
            f"rank-deficient: failed-row block has rank {r} < {matrix.l * t}"
        )

    # property 3: bandwidth from row spans
    bandwidth = 0
    failed_set = set(matrix.failed)
    nonzero_rows = np.nonzero(matrix.entries.any(axis=1))[0]
    for j in nonzero_rows:
        if int(j) in failed_set:
            continue
        dim, _, _ = span_ranks(f, [int(v) for v in matrix.entries[j]])
        bandwidth += dim
    return MatrixVerification(
        columns_dual=True,
        max_column_degree=max_deg,
        orthogonality_codewords=checked,
        failed_rank=r,
        full_rank=True,
        bandwidth=bandwidth,
        bound=matrix.bound,
    )


def _all_codeword_vectors(params: GrmParams):
    monos = params.monomials()
    tables = [evaluate_on_nodes(params, {e: 1}) for e in monos]
    f = params.field
    weights = np.array([f.p ** i for i in range(f.t)], dtype=np.int64)
    out = []
    for counter in range(params.q ** len(monos)):
        acc = np.zeros((params.n, f.t), dtype=np.int64)
        c = counter
        for tab in tables:
            lam = c % params.q
            c //= params.q
            if lam:
                acc += f.np_digits[f.np_mul[tab, lam]]
        out.append(((acc % f.p) @ weights).astype(np.int32))
    return out


def run_centralized_repair(matrix: RepairMatrix, codeword) -> tuple[dict, BandwidthReport]:
    """One repair center downloads row-span traces and inverts the trace map."""
    params = matrix.params
    f = params.field
    p, t = f.p, f.t
    lt = matrix.l * t
    failed_set = set(matrix.failed)
    erased = (
        codeword
        if isinstance(codeword, ErasedCodeword)
        else codeword.erase(failed_set)
    )
    if not failed_set <= erased.erased:
        raise ValueError("matrix's failed nodes are not all erased")

    rhs = [0] * lt
    per_helper: dict[int, int] = {}
    nonzero_rows = np.nonzero(matrix.entries.any(axis=1))[0]
    for j in nonzero_rows:
        j = int(j)
        if j in failed_set:
            continue
        row = [int(v) for v in matrix.entries[j]]
        dim, basis, coords = span_ranks(f, row)
        if dim == 0:
            continue
        sym = erased.rank_at(j)
        downloads = [f.trace(f.mul(sym, b)) for b in basis]
        per_helper[j] = dim
        for h in range(lt):
            acc = sum(c * d for c, d in zip(coords[h], downloads)) % p
            rhs[h] = (rhs[h] - acc) % p

    # invert the trace map phi over F_p
    powers = f.basis_ranks()
    phi = [
        [
            f.trace(f.mul(powers[e], int(matrix.entries[matrix.failed[r], h])))
            for r in range(matrix.l)
            for e in range(t)
        ]
        for h in range(lt)
    ]
    z = solve_fp(phi, rhs, p)
    recovered = {}
    for r, node in enumerate(matrix.failed):
        recovered[node] = f.element(z[r * t:(r + 1) * t])
    report = BandwidthReport(
        downloaded_fp_symbols=sum(per_helper.values()),
        per_helper=per_helper,
        bound=matrix.bound,
        model="centralized",
    )
    return recovered, report
