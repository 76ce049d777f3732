"""Erasure-pattern statistics: partition probabilities, exact and Monte Carlo
expected repair bandwidth, and bound curves.

Everything here is formula-level arithmetic on the code shape (p, t, m, mu),
so it also covers parameter regimes far beyond table-backed field sizes, and
p is not required to be prime.  Probabilities are exact rationals; floats
appear only at the reporting boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from typing import Iterable, Sequence

import numpy as np

from .grm import GrmParams


@dataclass(frozen=True)
class CodeShape:
    """Arithmetic view of GRM(mu, m) over a field of size q = p^t."""

    p: int
    t: int
    m: int
    mu: int

    def __post_init__(self):
        if self.p < 2 or self.t < 1 or self.m < 1:
            raise ValueError("need p >= 2, t >= 1, m >= 1")
        if not 0 <= self.mu <= self.m * (self.q - 1):
            raise ValueError(f"mu must lie in [0, {self.m * (self.q - 1)}]")

    @property
    def q(self) -> int:
        return self.p ** self.t

    @property
    def n(self) -> int:
        return self.q ** self.m

    @property
    def d(self) -> int:
        u, theta = divmod(self.mu, self.q - 1)
        if u == self.m:
            return 1
        return (self.q - theta) * self.q ** (self.m - u - 1)

    @property
    def k(self) -> int:
        """Dimension n - d + 1 of the smallest MDS supercode."""
        return self.n - self.d + 1

    @classmethod
    def of(cls, params) -> "CodeShape":
        if isinstance(params, CodeShape):
            return params
        if isinstance(params, GrmParams):
            return cls(params.field.p, params.field.t, params.m, params.mu)
        raise TypeError(f"cannot derive a code shape from {params!r}")


@dataclass(frozen=True)
class RegimeParams:
    """Common subspace dimension s and the per-model caps on l.

    Within the caps every group size l_i <= l yields the same per-group
    dimension s, so the bound formulas factor through (t - s).
    """

    s: int
    distributed_cap: int
    centralized_cap: Fraction

    def cap(self, model: str) -> Fraction:
        return Fraction(self.distributed_cap) if model == "distributed" else self.centralized_cap


def regime(shape) -> RegimeParams:
    shape = CodeShape.of(shape)
    p, t, mu = shape.p, shape.t, shape.mu
    room = p ** t - mu - 1
    if room < 1:
        raise ValueError(f"mu = {mu} leaves no subspace room (mu > p^t - 2)")
    s = 0
    while p ** (s + 1) <= room:
        s += 1
    return RegimeParams(
        s=s,
        distributed_cap=p ** t - p ** s - mu - 1,
        centralized_cap=Fraction(p ** t + p ** s - mu - 2, 2 * p ** s - 1),
    )


def check_regime(shape, l: int, model: str) -> RegimeParams:
    reg = regime(shape)
    cap = reg.cap(model)
    if l > cap:
        raise ValueError(
            f"regime violated for {model} model: l = {l} > cap = {cap} "
            f"(need l <= {'p^t - p^s - mu - 1' if model == 'distributed' else '(p^t + p^s - mu - 2)/(2 p^s - 1)'})"
        )
    return reg


# ---------------------------------------------------------------------------
# partition types and their probabilities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionType:
    """Multiset of group sizes: parts ((l_1, g_1), ...), sizes distinct."""

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        sizes = [s for s, _ in self.parts]
        if len(set(sizes)) != len(sizes):
            raise ValueError("part sizes must be distinct")
        if any(s < 1 or g < 1 for s, g in self.parts):
            raise ValueError("sizes and multiplicities must be positive")

    @property
    def l(self) -> int:
        return sum(s * g for s, g in self.parts)

    @property
    def w(self) -> int:
        return sum(g for _, g in self.parts)

    @property
    def nu(self) -> int:
        return len(self.parts)

    def __repr__(self):
        return "+".join(f"{s}x{g}" for s, g in self.parts)


def partition_types(l: int) -> list[PartitionType]:
    """All integer partitions of l, as PartitionTypes (descending sizes)."""
    out: list[PartitionType] = []

    def rec(remaining: int, maxpart: int, acc: list[int]):
        if remaining == 0:
            counts: dict[int, int] = {}
            for s in acc:
                counts[s] = counts.get(s, 0) + 1
            out.append(PartitionType(tuple(sorted(counts.items(), reverse=True))))
            return
        for s in range(min(maxpart, remaining), 0, -1):
            rec(remaining - s, s, acc + [s])

    rec(l, l, [])
    return out


def partition_probability(params, ptype: PartitionType) -> Fraction:
    """Probability that a uniform l-subset of nodes groups as ptype.

    Counts patterns with w distinct suffixes weighted by the axis-coordinate
    choices per group, over all C(q^m, l) patterns.
    """
    shape = CodeShape.of(params)
    q, m, l, w = shape.q, shape.m, ptype.l, ptype.w
    if l > shape.n:
        raise ValueError(f"l = {l} exceeds the number of nodes {shape.n}")
    numerator = comb(q ** (m - 1), w) * _factorial(w)
    denom = comb(shape.n, l)
    for size, g in ptype.parts:
        numerator *= comb(q, size) ** g
        denom *= _factorial(g)
    return Fraction(numerator, denom)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def bandwidth_for_sizes(shape, sizes: Iterable[int], s: int, model: str) -> int:
    """Bound formula for a concrete grouping, with the common dimension s."""
    shape = CodeShape.of(shape)
    q, t = shape.q, shape.t
    if model == "distributed":
        return (t - s) * sum(li * (q - li) for li in sizes)
    if model == "centralized":
        return (t - s) * sum(q - li for li in sizes)
    raise ValueError(f"unknown model {model!r}")


def bandwidth_for_type(shape, ptype: PartitionType, s: int, model: str) -> int:
    sizes = [size for size, g in ptype.parts for _ in range(g)]
    return bandwidth_for_sizes(shape, sizes, s, model)


def exact_expected_bandwidth(params, l: int, model: str, strict: bool = False):
    """Expected bound-formula bandwidth over uniform l-subsets, exact.

    Uses the common regime dimension s in every b_w.  With strict=True the
    per-model cap on l is enforced; otherwise cap violations are tolerated so
    the formula identities can be exercised on any shape.
    """
    shape = CodeShape.of(params)
    reg = check_regime(shape, l, model) if strict else regime(shape)
    total = Fraction(0)
    psum = Fraction(0)
    for ptype in partition_types(l):
        prob = partition_probability(shape, ptype)
        psum += prob
        total += prob * bandwidth_for_type(shape, ptype, reg.s, model)
    if psum != 1:
        raise AssertionError("partition probabilities do not sum to 1")
    return total


def monte_carlo_expectation(
    params, l: int, model: str, samples: int, seed: int, strict: bool = False
) -> tuple[float, float]:
    """Seeded Monte Carlo estimate of the expected bound-formula bandwidth.

    Samples uniform l-subsets of the q^m nodes, groups them along axis 1, and
    applies the model's bound with the common regime s.  Returns (mean,
    standard error).
    """
    shape = CodeShape.of(params)
    if samples <= 0:
        raise ValueError("samples must be positive")
    if l > shape.n:
        raise ValueError(f"l = {l} exceeds the number of nodes {shape.n}")
    reg = check_regime(shape, l, model) if strict else regime(shape)
    values = _sample_bandwidths(shape, l, model, reg.s, samples, seed)
    mean = float(values.mean())
    if samples == 1:
        return mean, 0.0
    stderr = float(values.std(ddof=1) / sqrt(samples))
    return mean, stderr


def _sample_bandwidths(shape: CodeShape, l: int, model: str, s: int, samples: int, seed: int) -> np.ndarray:
    """Vectorized sampling core; returns the per-sample bandwidth values.

    Uses sum(l_i * (q - l_i)) = q*l - (number of same-group ordered pairs)
    and sum(q - l_i) = q*w - l, which need only pairwise suffix equality.
    """
    q, t, n = shape.q, shape.t, shape.n
    rng = np.random.default_rng(seed)
    if l == 1:
        picks = rng.integers(0, n, size=(samples, 1))
    else:
        picks = rng.integers(0, n, size=(samples, l))
        while True:
            srt = np.sort(picks, axis=1)
            dup = (srt[:, 1:] == srt[:, :-1]).any(axis=1)
            bad = np.nonzero(dup)[0]
            if bad.size == 0:
                break
            picks[bad] = rng.integers(0, n, size=(bad.size, l))
    suffix = picks // q
    pair_count = (suffix[:, :, None] == suffix[:, None, :]).sum(axis=(1, 2))
    if model == "distributed":
        vals = (t - s) * (q * l - pair_count)
    elif model == "centralized":
        w = np.ones(samples, dtype=np.int64)
        srt = np.sort(suffix, axis=1)
        if l > 1:
            w += (srt[:, 1:] != srt[:, :-1]).sum(axis=1)
        vals = (t - s) * (q * w - l)
    else:
        raise ValueError(f"unknown model {model!r}")
    return vals.astype(np.float64)


def exhaustive_partition_counts(shape, l: int, budget: int = 10_000_000) -> dict[PartitionType, int]:
    """Count every l-subset of nodes by partition type (oracle, guarded)."""
    shape = CodeShape.of(shape)
    n, q = shape.n, shape.q
    total = comb(n, l)
    if total > budget:
        raise ValueError(f"enumeration of C({n},{l}) = {total} exceeds budget {budget}")
    from itertools import combinations

    counts: dict[PartitionType, int] = {}
    for pattern in combinations(range(n), l):
        sizes: dict[int, int] = {}
        for node in pattern:
            sfx = node // q
            sizes[sfx] = sizes.get(sfx, 0) + 1
        mult: dict[int, int] = {}
        for c in sizes.values():
            mult[c] = mult.get(c, 0) + 1
        ptype = PartitionType(tuple(sorted(mult.items(), reverse=True)))
        counts[ptype] = counts.get(ptype, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# bound curves
# ---------------------------------------------------------------------------

def bound_curves(params, l_values: Sequence[int]) -> list[dict]:
    """Rows (l, trivial kt, worst, best-distributed, best-centralized).

    worst = l(q-1)(t-s) covers both models with l singleton groups; the best
    cases put all failures in one group.  Every requested l must respect both
    model caps and the repairability limit l <= d - 1.
    """
    shape = CodeShape.of(params)
    reg = regime(shape)
    q, t, s = shape.q, shape.t, reg.s
    kt = shape.k * t
    rows = []
    for l in l_values:
        if l < 1:
            raise ValueError("l must be >= 1")
        if l > shape.d - 1:
            raise ValueError(f"l = {l} exceeds the repairability limit {shape.d - 1}")
        if l > reg.distributed_cap:
            raise ValueError(
                f"l = {l} > distributed cap {reg.distributed_cap}"
            )
        if l > reg.centralized_cap:
            raise ValueError(
                f"l = {l} > centralized cap {reg.centralized_cap}"
            )
        rows.append(
            {
                "l": l,
                "trivial_kt": kt,
                "worst": l * (q - 1) * (t - s),
                "best_distributed": l * (q - l) * (t - s),
                "best_centralized": (q - l) * (t - s),
            }
        )
    return rows
