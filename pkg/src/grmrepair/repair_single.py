"""Single-erasure repair of GRM codewords over the prime subfield.

The scheme downloads F_p traces instead of whole F_q symbols.  For a failed
node alpha* and a chosen axis coordinate, t dual codewords are built as

    p_i(x) = prod_{j != axis} (1 - (x_j - alpha*_j)^(q-1))
             * L_V(xi_i * (x_axis - alpha*_axis)) / (x_axis - alpha*_axis)

where L_V is the subspace polynomial of an s-dimensional subspace V and the
division is exact term by term on the linearized expansion.  The p_i vanish
off the axis line through alpha*, take the basis values {c0 * xi_i} at the
target, and span at most t-s dimensions at each of the q-1 helpers, giving
bandwidth at most (q-1)(t-s) symbols of F_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield
from typing import Mapping, Sequence

from .fields import (
    FieldElement,
    FieldSpec,
    Subspace,
    dual_basis,
    linearized_coeffs,
    span_ranks,
    subspace_c0,
    uni_mul,
    uni_trim,
)
from .grm import Codeword, ErasedCodeword, GrmParams, MultiPoly


class InfeasibleSchemeError(ValueError):
    """The requested repair scheme violates its degree feasibility condition."""


class IncompleteDownloadError(RuntimeError):
    """A helper with a nonzero span did not contribute a response."""


def single_subspace_dim(p: int, t: int, mu: int) -> int:
    """s = floor(log_p(p^t - mu - 1)), integer arithmetic only."""
    room = p ** t - mu - 1
    if room < 1:
        raise InfeasibleSchemeError(
            f"mu = {mu} > q - 2 = {p ** t - 2}: no single-erasure scheme"
        )
    s = 0
    while p ** (s + 1) <= room:
        s += 1
    return s


# ---------------------------------------------------------------------------
# structured repair polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineRepairPoly:
    """Dual codeword of the form  suffix-indicator * U(x_axis).

    suffix pins every non-axis coordinate to a value; off the resulting line
    the polynomial is zero.  U is stored as sparse terms in y = x_axis - shift
    times an optional product of linear root factors.
    """

    field: FieldSpec
    m: int
    axis: int                                  # 1-based
    suffix: tuple[tuple[int, int], ...]        # (0-based coord, pinned rank)
    shift: int                                 # rank of the y-origin
    terms: tuple[tuple[int, int], ...]         # (exponent, coeff rank) in y
    extra_roots: tuple[int, ...] = ()

    def value_on_line(self, x: int) -> int:
        f = self.field
        y = f.sub(x, self.shift)
        acc = 0
        for e, c in self.terms:
            acc = f.add(acc, f.mul(c, f.pow(y, e)) if e else c)
        for r in self.extra_roots:
            acc = f.mul(acc, f.sub(x, r))
        return acc

    def evaluate_coords(self, coords: Sequence[int]) -> int:
        for pos, beta in self.suffix:
            if coords[pos] != beta:
                return 0
        return self.value_on_line(coords[self.axis - 1])

    def evaluate(self, params: GrmParams, node) -> FieldElement:
        if isinstance(node, int):
            coords = params.node_coords(node)
        else:
            coords = [c.rank if isinstance(c, FieldElement) else int(c) for c in node]
        return FieldElement(self.field, self.evaluate_coords(coords))

    def to_multipoly(self) -> MultiPoly:
        """Expanded reduced form, for degree audits and duality checks."""
        f, q, m = self.field, self.field.q, self.m
        # dense univariate in x_axis: expand (x - shift)^e binomially
        dense = [0] * (max((e for e, _ in self.terms), default=0) + 1)
        for e, c in self.terms:
            if self.shift == 0:
                dense[e] = f.add(dense[e], c)
                continue
            neg = f.neg(self.shift)
            for k in range(e + 1):
                b = math.comb(e, k) % f.p
                if b:
                    term = f.mul(c, f.mul(b, f.pow(neg, e - k)))
                    dense[k] = f.add(dense[k], term)
        dense = uni_trim(dense)
        for r in self.extra_roots:
            dense = uni_mul(dense, [f.neg(r), 1], f)
        ax = self.axis - 1
        poly = MultiPoly(f, m, {
            tuple(e if i == ax else 0 for i in range(m)): c
            for e, c in enumerate(dense) if c
        })
        for pos, beta in self.suffix:
            poly = poly * _one_minus_power_factor(f, m, pos, beta)
        return poly


def _one_minus_power_factor(f: FieldSpec, m: int, pos: int, beta: int) -> MultiPoly:
    """1 - (x_pos - beta)^(q-1): the indicator of x_pos == beta."""
    q = f.q
    terms: dict[tuple[int, ...], int] = {}

    def put(e, c):
        key = tuple(e if i == pos else 0 for i in range(m))
        s = f.add(terms.get(key, 0), c)
        if s:
            terms[key] = s
        elif key in terms:
            del terms[key]

    put(0, 1)
    neg = f.neg(beta)
    for k in range(q):
        b = math.comb(q - 1, k) % f.p
        if b:
            put(k, f.neg(f.mul(b, f.pow(neg, q - 1 - k))))
    return MultiPoly(f, m, terms)


def subspace_quotient_terms(field: FieldSpec, V: Subspace, xi_rank: int):
    """Sparse terms of L_V(xi * y) / y in y.

    Every term of the linearized expansion is divisible by y, so the quotient
    is c0*xi + sum_k c_k * xi^(p^k) * y^(p^k - 1).
    """
    cs = linearized_coeffs(V)
    terms = []
    for k, c in enumerate(cs):
        if c == 0:
            continue
        coeff = field.mul(c, field.pow(xi_rank, field.p ** k))
        exp = field.p ** k - 1
        terms.append((exp, coeff))
    return tuple(terms)


# ---------------------------------------------------------------------------
# download / recovery core shared with the multi-erasure schemes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LineRecovery:
    """Per-replacement recipe: helper span bases and the reconstruction data.

    helpers maps node rank -> (span basis ranks, combination rows, columns);
    row i of the combination expresses the i-th repair polynomial's value at
    that helper over the span basis (columns hold the transpose).
    recovery_basis is dual to target_basis.
    """

    field: FieldSpec
    target_basis: tuple[int, ...]
    recovery_basis: tuple[int, ...]
    helpers: Mapping[int, tuple]

    def respond(self, node: int, symbol_rank: int):
        basis = self.helpers[node][0]
        f = self.field
        return tuple(f.trace(f.mul(symbol_rank, b)) for b in basis)

    def recover(self, downloads: Mapping[int, Sequence[int]]) -> int:
        f, p = self.field, self.field.p
        t = len(self.target_basis)
        taus = [0] * t
        for node, (basis, _, cols) in self.helpers.items():
            if not basis:
                continue
            if node not in downloads:
                raise IncompleteDownloadError(f"missing response from helper {node}")
            for col, v in zip(cols, downloads[node]):
                if v:
                    for i in range(t):
                        c = col[i]
                        if c:
                            taus[i] -= c * v
        acc = 0
        for tau, eta in zip(taus, self.recovery_basis):
            tau %= p
            if tau:
                acc = f.add(acc, f.mul(tau, eta))
        return acc

    def download_dims(self) -> dict[int, int]:
        return {node: len(h[0]) for node, h in self.helpers.items() if h[0]}


def build_line_recovery(field: FieldSpec, polys, target_x: int, helper_xs, node_of_x) -> LineRecovery:
    """Assemble a LineRecovery from line polynomials and line coordinates."""
    target_basis = tuple(p.value_on_line(target_x) for p in polys)
    eta = dual_basis([FieldElement(field, r) for r in target_basis])
    helpers = {}
    for x in helper_xs:
        vals = [p.value_on_line(x) for p in polys]
        dim, basis, rows = span_ranks(field, vals)
        cols = tuple(tuple(row[s] for row in rows) for s in range(dim))
        helpers[node_of_x(x)] = (tuple(basis), tuple(rows), cols)
    return LineRecovery(
        field=field,
        target_basis=target_basis,
        recovery_basis=tuple(e.rank for e in eta),
        helpers=helpers,
    )


# ---------------------------------------------------------------------------
# plans, responses, reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HelperResponse:
    helper: int
    basis_sent: tuple[FieldElement, ...]
    traces: tuple[int, ...]


@dataclass
class BandwidthReport:
    """Exact count of downloaded F_p symbols, against the scheme's bound."""

    downloaded_fp_symbols: int
    per_helper: dict[int, int]
    bound: int
    model: str
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        total = sum(self.per_helper.values())
        if total != self.downloaded_fp_symbols:
            raise ValueError("per-helper counts do not add up to the total")
        if self.downloaded_fp_symbols > self.bound:
            raise ValueError(
                f"downloaded {self.downloaded_fp_symbols} exceeds bound {self.bound}"
            )

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "bandwidth_fp_symbols": self.downloaded_fp_symbols,
            "bound": self.bound,
            "per_helper": [
                {"node": n, "dim": d} for n, d in sorted(self.per_helper.items())
            ],
            "notes": list(self.notes),
        }


@dataclass
class SingleRepairPlan:
    params: GrmParams
    target: int
    axis: int
    s: int
    V: Subspace
    xi: tuple[FieldElement, ...]
    c0: FieldElement
    repair_polys: tuple[LineRepairPoly, ...]
    helper_set: tuple[int, ...]
    dual_recovery_basis: tuple[FieldElement, ...]
    line: LineRecovery

    @property
    def bound(self) -> int:
        return (self.params.q - 1) * (self.params.field.t - self.s)

    @property
    def degenerate(self) -> bool:
        return self.params.field.t == 1


def build_single_plan(
    params: GrmParams,
    target,
    axis: int | None = None,
    subspace: Subspace | None = None,
) -> SingleRepairPlan:
    """Repair plan for one failed node along the given axis (default: m)."""
    f = params.field
    m, q = params.m, params.q
    if axis is None:
        axis = m
    if not 1 <= axis <= m:
        raise ValueError(f"axis {axis} out of range [1, {m}]")
    target = target if isinstance(target, int) else params.node_rank(target)
    if not 0 <= target < params.n:
        raise ValueError(f"target rank {target} out of range")

    s_max = single_subspace_dim(f.p, f.t, params.mu)
    if subspace is None:
        subspace = Subspace.canonical(f, s_max)
    elif subspace.dim > s_max:
        raise InfeasibleSchemeError(
            f"subspace dimension {subspace.dim} exceeds the feasible {s_max}"
        )
    s = subspace.dim

    coords = params.node_coords(target)
    ax = axis - 1
    suffix = tuple((j, coords[j]) for j in range(m) if j != ax)
    alpha = coords[ax]
    xi = f.basis()
    c0 = subspace_c0(subspace)

    polys = tuple(
        LineRepairPoly(
            field=f,
            m=m,
            axis=axis,
            suffix=suffix,
            shift=alpha,
            terms=subspace_quotient_terms(f, subspace, x.rank),
        )
        for x in xi
    )

    stride = q ** ax
    base = target - alpha * stride

    def node_of_x(x: int) -> int:
        return base + x * stride

    helper_xs = [x for x in range(q) if x != alpha]
    line = build_line_recovery(f, polys, alpha, helper_xs, node_of_x)
    return SingleRepairPlan(
        params=params,
        target=target,
        axis=axis,
        s=s,
        V=subspace,
        xi=tuple(xi),
        c0=c0,
        repair_polys=polys,
        helper_set=tuple(sorted(node_of_x(x) for x in helper_xs)),
        dual_recovery_basis=tuple(
            FieldElement(f, r) for r in line.recovery_basis
        ),
        line=line,
    )


def eval_repair_poly(plan: SingleRepairPlan, i: int, node) -> FieldElement:
    """Value of the i-th (1-based) repair polynomial at a node."""
    if not 1 <= i <= len(plan.repair_polys):
        raise ValueError(f"index {i} out of range [1, {len(plan.repair_polys)}]")
    return plan.repair_polys[i - 1].evaluate(plan.params, node)


def helper_respond(plan: SingleRepairPlan, helper, symbol: FieldElement) -> HelperResponse:
    """Traces of the helper's symbol against its span basis.

    Helpers off the repair line hold only zero polynomial values and answer
    with an empty response.
    """
    f = plan.params.field
    helper = helper if isinstance(helper, int) else plan.params.node_rank(helper)
    if helper == plan.target:
        raise ValueError("the failed node cannot respond")
    if helper not in plan.line.helpers:
        return HelperResponse(helper, (), ())
    basis = plan.line.helpers[helper][0]
    rank = symbol.rank if isinstance(symbol, FieldElement) else int(symbol)
    traces = plan.line.respond(helper, rank)
    return HelperResponse(helper, tuple(FieldElement(f, b) for b in basis), traces)


def recover_single(plan: SingleRepairPlan, responses: Sequence[HelperResponse]) -> FieldElement:
    """Reconstruct the erased symbol from helper responses."""
    downloads = {r.helper: r.traces for r in responses if r.traces}
    rank = plan.line.recover(downloads)
    return FieldElement(plan.params.field, rank)


def repair_codeword(plan: SingleRepairPlan, codeword) -> tuple[FieldElement, BandwidthReport]:
    """Run the full protocol against a codeword; never reads the target."""
    erased = codeword if isinstance(codeword, ErasedCodeword) else codeword.erase([plan.target])
    if plan.target not in erased.erased:
        raise ValueError("target symbol is not erased")
    line = plan.line
    downloads = {}
    per_helper = {}
    for node, (basis, *_) in line.helpers.items():
        if basis:
            downloads[node] = line.respond(node, erased.rank_at(node))
            per_helper[node] = len(basis)
    recovered = FieldElement(plan.params.field, line.recover(downloads))
    notes = ("degenerate: t=1, full-symbol downloads",) if plan.degenerate else ()
    report = BandwidthReport(
        downloaded_fp_symbols=sum(per_helper.values()),
        per_helper=per_helper,
        bound=plan.bound,
        model="single",
        notes=notes,
    )
    return recovered, report


def disjoint_repair_sets(params: GrmParams, target) -> list[SingleRepairPlan]:
    """One plan per axis; their helper sets are pairwise disjoint."""
    return [build_single_plan(params, target, axis=j) for j in range(1, params.m + 1)]


# ---------------------------------------------------------------------------
# trivial baselines and the lower bound
# ---------------------------------------------------------------------------

def trivial_repair_all(params: GrmParams, codeword, target) -> tuple[FieldElement, BandwidthReport]:
    """Sum all n-1 survivors using the all-ones dual codeword; (n-1)t symbols."""
    if params.mu_dual < 0:
        raise ValueError("no all-ones dual codeword: mu = m(q-1)")
    f = params.field
    target = target if isinstance(target, int) else params.node_rank(target)
    erased = codeword if isinstance(codeword, ErasedCodeword) else codeword.erase([target])
    acc = 0
    per_helper = {}
    for j in range(params.n):
        if j == target:
            continue
        acc = f.add(acc, erased.rank_at(j))
        per_helper[j] = f.t
    bound = (params.n - 1) * f.t
    report = BandwidthReport(
        downloaded_fp_symbols=bound,
        per_helper=per_helper,
        bound=bound,
        model="trivial-all",
    )
    return FieldElement(f, f.neg(acc)), report


def trivial_k_bandwidth(params: GrmParams) -> int:
    """Bandwidth (n - d + 1) * t of the read-any-k baseline (formula only)."""
    return (params.n - params.d + 1) * params.field.t


def lower_bound_formula(n: int, d_dual: int, q: int, p: int) -> float:
    """(n-1) * log_p((n-1) / (n - d_dual + (d_dual - 1)/q))."""
    denom = n - d_dual + (d_dual - 1) / q
    return (n - 1) * math.log((n - 1) / denom, p)


def lower_bound(params: GrmParams) -> float:
    """Bandwidth floor for any linear repair scheme over F_p."""
    return lower_bound_formula(
        params.n, params.d_dual, params.q, params.field.p
    )
