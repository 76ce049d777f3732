"""Generalized Reed-Muller codes over F_q: parameters, reduced multivariate
polynomials, evaluation-vector codewords, distance formulas, duality checks,
and brute-force oracles.

GRM(mu, m) is the set of evaluation vectors over all of F_q^m of m-variate
polynomials of total degree <= mu, with exponents reduced via x^q = x.  Nodes
are indexed canonically: node j has coordinates given by the base-q digits of
j, little-endian, coordinate 1 least significant; each digit names a field
element by rank.
"""

from __future__ import annotations

import math
import random
from typing import Mapping, Sequence

import numpy as np

from .fields import FieldElement, FieldSpec

# enumeration guard for the exhaustive minimum-weight oracle
BRUTE_MAX_DIM = 12
BRUTE_MAX_CODEWORDS = 2 ** 24


class ErasedSymbolError(LookupError):
    """Raised on any read of an erased symbol."""


def _reduce_exp(e: int, q: int) -> int:
    # x^q = x collapses exponents onto [1, q-1] (0 stays 0)
    if e <= 0:
        return 0
    return (e - 1) % (q - 1) + 1


class MultiPoly:
    """Reduced m-variate polynomial over F_q (per-variable degree < q).

    terms maps exponent tuples to nonzero coefficient ranks.
    """

    __slots__ = ("field", "m", "terms")

    def __init__(self, field: FieldSpec, m: int, terms: Mapping[tuple, int]):
        q = field.q
        reduced: dict[tuple[int, ...], int] = {}
        for exps, coeff in terms.items():
            c = coeff.rank if isinstance(coeff, FieldElement) else int(coeff)
            if c == 0:
                continue
            if len(exps) != m:
                raise ValueError(f"exponent vector {exps} has wrong arity (m={m})")
            key = tuple(_reduce_exp(int(e), q) for e in exps)
            prev = reduced.get(key, 0)
            c = field.add(prev, c)
            if c:
                reduced[key] = c
            elif key in reduced:
                del reduced[key]
        self.field = field
        self.m = m
        self.terms = reduced

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, m: int) -> "MultiPoly":
        return cls(field, m, {})

    @classmethod
    def constant(cls, field: FieldSpec, m: int, c: int) -> "MultiPoly":
        return cls(field, m, {(0,) * m: c})

    @classmethod
    def monomial(cls, field: FieldSpec, m: int, exps: Sequence[int], c: int = 1) -> "MultiPoly":
        return cls(field, m, {tuple(exps): c})

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        f = self.field
        for e, c in other.terms.items():
            s = f.add(out.get(e, 0), c)
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return MultiPoly(f, self.m, out)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        f = self.field
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            row = f._mul[c1]
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = row[c2]
                key = e
                prev = out.get(key, 0)
                s = f.add(prev, c) if prev else c
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return MultiPoly(f, self.m, out)

    def scale(self, c: int) -> "MultiPoly":
        c = c.rank if isinstance(c, FieldElement) else int(c)
        f = self.field
        return MultiPoly(f, self.m, {e: f.mul(cc, c) for e, cc in self.terms.items()})

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def evaluate(self, point: Sequence) -> FieldElement:
        """Evaluate at a point given as FieldElements or ranks."""
        f = self.field
        ranks = [p.rank if isinstance(p, FieldElement) else int(p) for p in point]
        if len(ranks) != self.m:
            raise ValueError(f"point has arity {len(ranks)}, expected {self.m}")
        acc = 0
        for exps, coeff in self.terms.items():
            v = coeff
            for x, e in zip(ranks, exps):
                if e:
                    v = f.mul(v, f.pow(x, e))
                    if v == 0:
                        break
            acc = f.add(acc, v)
        return FieldElement(f, acc)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.m == other.m
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"MultiPoly(m={self.m}, terms={len(self.terms)})"


class GrmParams:
    """Parameters of GRM(mu, m) over a FieldSpec, with derived quantities."""

    def __init__(self, field: FieldSpec, m: int, mu: int):
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        q = field.q
        if not 0 <= mu <= m * (q - 1):
            raise ValueError(f"mu must lie in [0, {m * (q - 1)}], got {mu}")
        self.field = field
        self.m = m
        self.mu = mu
        self.q = q
        self.n = q ** m
        self.mu_dual = m * (q - 1) - mu - 1
        self._monomials: list[tuple[int, ...]] | None = None
        self._node_digits: np.ndarray | None = None

    # -- distances --------------------------------------------------------------

    @property
    def d(self) -> int:
        return min_distance(self)

    @property
    def d_dual(self) -> int:
        return dual_min_distance(self)

    @property
    def k_grm(self) -> int:
        return len(self.monomials())

    def dual(self) -> "GrmParams":
        if self.mu_dual < 0:
            raise ValueError("dual code is degenerate (mu = m(q-1))")
        return GrmParams(self.field, self.m, self.mu_dual)

    # -- node indexing ------------------------------------------------------------

    def node_digits(self) -> np.ndarray:
        """(n, m) array: row j holds the coordinate ranks of node j."""
        if self._node_digits is None:
            idx = np.arange(self.n, dtype=np.int64)
            cols = [(idx // self.q ** i) % self.q for i in range(self.m)]
            self._node_digits = np.stack(cols, axis=1).astype(np.int32)
        return self._node_digits

    def node_coords(self, j: int) -> tuple[int, ...]:
        return tuple((j // self.q ** i) % self.q for i in range(self.m))

    def node_vector(self, j: int) -> tuple[FieldElement, ...]:
        return tuple(self.field.from_rank(r) for r in self.node_coords(j))

    def node_rank(self, coords: Sequence) -> int:
        ranks = [c.rank if isinstance(c, FieldElement) else int(c) for c in coords]
        if len(ranks) != self.m:
            raise ValueError(f"node has arity {len(ranks)}, expected {self.m}")
        if any(not 0 <= r < self.q for r in ranks):
            raise ValueError(f"coordinate rank out of range in {ranks}")
        return sum(r * self.q ** i for i, r in enumerate(ranks))

    def monomials(self) -> list[tuple[int, ...]]:
        if self._monomials is None:
            self._monomials = monomials(self)
        return self._monomials

    def __eq__(self, other):
        return (
            isinstance(other, GrmParams)
            and self.field == other.field
            and self.m == other.m
            and self.mu == other.mu
        )

    def __repr__(self):
        return f"GrmParams(q={self.q}, m={self.m}, mu={self.mu})"


def monomials(params: GrmParams) -> list[tuple[int, ...]]:
    """Exponent vectors in [0, q-1]^m with total degree <= mu, lex order."""
    q, m, mu = params.q, params.m, params.mu
    out: list[tuple[int, ...]] = []

    def rec(prefix, remaining):
        if len(prefix) == m:
            out.append(tuple(prefix))
            return
        for e in range(min(q - 1, remaining) + 1):
            rec(prefix + [e], remaining - e)

    rec([], mu)
    out.sort()
    return out


def min_distance(params: GrmParams) -> int:
    """d = (q - theta) * q^(m-u-1) with mu = u(q-1) + theta, 0 <= theta < q-1."""
    q, m, mu = params.q, params.m, params.mu
    u, theta = divmod(mu, q - 1)
    if u == m:
        # mu = m(q-1): full space, distance 1
        return 1
    return (q - theta) * q ** (m - u - 1)


def dual_min_distance(params: GrmParams) -> int:
    """d_dual = (theta + 2) * q^u, from mu's decomposition."""
    if params.mu_dual < 0:
        raise ValueError("dual code is degenerate (mu = m(q-1))")
    q = params.q
    u, theta = divmod(params.mu, q - 1)
    return (theta + 2) * q ** u


def evaluate_on_nodes(params: GrmParams, poly: MultiPoly | Mapping) -> np.ndarray:
    """Evaluation of a polynomial at every node, as an (n,) rank array.

    Contracts one variable at a time: each exponent axis of the coefficient
    grid is replaced by a value axis of length q, so the cost is O(q^(m+1))
    table lookups regardless of how dense the polynomial is.
    """
    f = params.field
    q, m = params.q, params.m
    terms = poly.terms if isinstance(poly, MultiPoly) else poly
    if not isinstance(poly, MultiPoly):
        terms = MultiPoly(f, m, terms).terms
    if not terms:
        return np.zeros(params.n, dtype=np.int32)
    degs = [max(e[i] for e in terms) for i in range(m)]
    grid = np.zeros(tuple(d + 1 for d in degs), dtype=np.int32)
    for exps, coeff in terms.items():
        grid[exps] = coeff
    np_mul, np_pow, np_digits = f.np_mul, f.np_pow, f.np_digits
    weights = np.array([f.p ** i for i in range(f.t)], dtype=np.int64)
    V = grid
    for i in range(m):
        moved = np.moveaxis(V, 0, -1)          # exponent axis of x_{i+1} last
        acc = np.zeros(moved.shape[:-1] + (q, f.t), dtype=np.int64)
        for e in range(moved.shape[-1]):
            vals = np_mul[moved[..., e, None], np_pow[:, e]]
            acc += np_digits[vals]
        V = ((acc % f.p) @ weights).astype(np.int32)
    # V axes are (x_1, ..., x_m); Fortran ravel matches the node rank layout
    return np.ravel(V, order="F").astype(np.int32)


class Codeword:
    """Length-n evaluation vector in canonical node order."""

    __slots__ = ("params", "ranks")

    def __init__(self, params: GrmParams, ranks):
        arr = np.asarray(ranks, dtype=np.int32)
        if arr.shape != (params.n,):
            raise ValueError(f"codeword must have length {params.n}")
        arr = arr.copy()
        arr.flags.writeable = False
        self.params = params
        self.ranks = arr

    def __len__(self):
        return self.params.n

    def __getitem__(self, j: int) -> FieldElement:
        return self.params.field.from_rank(int(self.ranks[j]))

    @property
    def symbols(self) -> tuple[FieldElement, ...]:
        f = self.params.field
        return tuple(f.from_rank(int(r)) for r in self.ranks)

    def weight(self) -> int:
        return int(np.count_nonzero(self.ranks))

    def erase(self, nodes) -> "ErasedCodeword":
        return ErasedCodeword(self, frozenset(int(j) for j in nodes))

    def __eq__(self, other):
        return (
            isinstance(other, Codeword)
            and self.params == other.params
            and bool(np.array_equal(self.ranks, other.ranks))
        )

    def __repr__(self):
        return f"Codeword(n={self.params.n})"


class ErasedCodeword:
    """Codeword view that refuses to reveal erased symbols.

    Repair routines read survivor data through this wrapper, so any attempt
    to peek at lost symbols fails loudly.
    """

    __slots__ = ("codeword", "erased")

    def __init__(self, codeword: Codeword, erased: frozenset[int]):
        self.codeword = codeword
        self.erased = erased

    @property
    def params(self) -> GrmParams:
        return self.codeword.params

    def rank_at(self, j: int) -> int:
        if j in self.erased:
            raise ErasedSymbolError(f"symbol at node {j} is erased")
        return int(self.codeword.ranks[j])

    def __getitem__(self, j: int) -> FieldElement:
        return self.params.field.from_rank(self.rank_at(j))


def encode(params: GrmParams, coeffs: Mapping) -> Codeword:
    """Evaluation vector of the polynomial given by monomial coefficients.

    Raises ValueError if any (reduced) monomial leaves GRM(mu, m).
    """
    poly = coeffs if isinstance(coeffs, MultiPoly) else MultiPoly(params.field, params.m, coeffs)
    deg = poly.total_degree()
    if deg > params.mu:
        raise ValueError(
            f"degree violation: polynomial has degree {deg} > mu = {params.mu}"
        )
    return Codeword(params, evaluate_on_nodes(params, poly))


def is_dual_pair(params: GrmParams, f: MultiPoly, g: MultiPoly) -> bool:
    """True iff the evaluation vectors of f and g are orthogonal over F_q^m."""
    fld = params.field
    vf = evaluate_on_nodes(params, f)
    vg = evaluate_on_nodes(params, g)
    prod = fld.np_mul[vf, vg]
    digs = fld.np_digits[prod].sum(axis=0) % fld.p
    return not digs.any()


def brute_feasible(params: GrmParams) -> bool:
    k = params.k_grm
    return k <= BRUTE_MAX_DIM and params.q ** k <= BRUTE_MAX_CODEWORDS


def brute_min_distance(params: GrmParams) -> int:
    """True minimum weight by exhaustive codeword enumeration (guarded)."""
    k = params.k_grm
    total = params.q ** k
    if k > BRUTE_MAX_DIM or total > BRUTE_MAX_CODEWORDS:
        raise ValueError(
            f"instance too large for brute force (k={k}, q^k={total})"
        )
    monos = params.monomials()
    # evaluation vector of each monomial, combined per coefficient counter
    tables = [evaluate_on_nodes(params, {e: 1}) for e in monos]
    f = params.field
    np_mul, np_digits = f.np_mul, f.np_digits
    weights = np.array([f.p ** i for i in range(f.t)], dtype=np.int64)
    best = params.n + 1
    for counter in range(1, total):
        acc = np.zeros((params.n, f.t), dtype=np.int64)
        c = counter
        for tab in tables:
            lam = c % params.q
            c //= params.q
            if lam:
                acc += np_digits[np_mul[tab, lam]]
        ranks = (acc % f.p) @ weights
        w = int(np.count_nonzero(ranks))
        if 0 < w < best:
            best = w
    return best


def random_codeword(params: GrmParams, seed: int):
    """Uniform random codeword; returns (coefficient dict, Codeword)."""
    rng = random.Random(seed)
    coeffs: dict[tuple[int, ...], int] = {}
    for e in params.monomials():
        c = rng.randrange(params.q)
        if c:
            coeffs[e] = c
    return coeffs, encode(params, coeffs)
