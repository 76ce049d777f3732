"""Arithmetic in F_p and F_q = F_p[x]/(f(x)), plus the F_p-linear machinery
used by trace-based repair schemes: traces, dual bases, subspaces and their
linearized polynomials, span computations, and Gaussian elimination mod p.

An element of F_q is identified with its *rank*, the integer
``sum(c[i] * p**i)`` where ``(c[0], ..., c[t-1])`` are its coordinates in the
polynomial basis ``{1, xi, ..., xi^(t-1)}`` and xi is the chosen root of the
modulus.  FieldSpec methods take and return ranks (plain ints) so hot loops
stay cheap; FieldElement is a thin wrapper adding operator syntax.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Monic irreducible moduli (ascending coefficients) for common (p, t).
# The (2, 4) entry is pinned to x^4 + x^3 + 1: downstream reference tables
# depend on that exact modulus.  Pairs not listed here fall back to a
# deterministic search for the lexicographically smallest irreducible.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),            # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),         # x^3 + x + 1
    (2, 4): (1, 0, 0, 1, 1),      # x^4 + x^3 + 1
    (2, 5): (1, 0, 1, 0, 0, 1),   # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 1, 0, 1, 1, 0, 0, 0, 1),  # x^8 + x^4 + x^3 + x + 1
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),            # x^2 + 1
    (3, 3): (1, 2, 0, 1),         # x^3 + 2x + 1
    (3, 4): (2, 1, 0, 0, 1),      # x^4 + x + 2
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),            # x^2 + 2
    (5, 3): (1, 1, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (1, 0, 1),            # x^2 + 1 (-1 is a non-residue mod 7)
}

# Table-backed arithmetic keeps every operation O(1); the q*q tables cap the
# supported field size.
MAX_Q = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# dense polynomials over F_p (coefficient lists, ascending degree) -- used for
# modulus validation only
# ---------------------------------------------------------------------------

def _fp_poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _fp_poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce modulo mod (monic)
    d = len(mod) - 1
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for i in range(d):
                out[k - d + i] = (out[k - d + i] - c * mod[i]) % p
    return _fp_poly_trim(out[:d] if len(out) > d else out)


def _fp_poly_powmod(a, e, mod, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _fp_poly_mulmod(result, base, mod, p)
        base = _fp_poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _fp_poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while any(b):
        # a mod b
        a = _fp_poly_trim(a)
        b = _fp_poly_trim(b)
        if len(a) < len(b):
            a, b = b, a
            continue
        inv_lead = pow(b[-1], -1, p)
        r = list(a)
        for k in range(len(r) - 1, len(b) - 2, -1):
            c = (r[k] * inv_lead) % p
            if c:
                for i in range(len(b)):
                    r[k - len(b) + 1 + i] = (r[k - len(b) + 1 + i] - c * b[i]) % p
        a, b = b, _fp_poly_trim(r)
    return _fp_poly_trim(a)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """gcd test against x^(p^i) - x for i <= t/2.

    x^(p^i) - x is the product of all irreducibles of degree dividing i, so a
    nontrivial gcd witnesses a factor of degree <= t/2.
    """
    t = len(modulus) - 1
    if t < 1 or modulus[-1] % p != 1:
        return False
    if t == 1:
        return True
    xq = [0, 1]
    for i in range(1, t // 2 + 1):
        xq = _fp_poly_powmod(xq, p, modulus, p)
        diff = list(xq) + [0] * (2 - len(xq))
        diff[1] = (diff[1] - 1) % p
        g = _fp_poly_gcd(list(modulus), diff, p)
        if len(g) > 1:
            return False
    return True


def default_modulus(p: int, t: int) -> tuple[int, ...]:
    """Built-in modulus for (p, t), else smallest monic irreducible."""
    if (p, t) in DEFAULT_MODULI:
        return DEFAULT_MODULI[(p, t)]
    if t == 1:
        return (0, 1)
    # deterministic fallback: scan constant-first integer encodings
    for code in range(p ** t):
        coeffs = tuple((code // p ** i) % p for i in range(t)) + (1,)
        if coeffs[0] != 0 and is_irreducible(coeffs, p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {t} over F_{p}")


# ---------------------------------------------------------------------------
# field construction
# ---------------------------------------------------------------------------

def _vec_pow(vec: np.ndarray, e: int, mul: np.ndarray) -> np.ndarray:
    out = np.ones(len(vec), dtype=vec.dtype)
    base = vec
    while e:
        if e & 1:
            out = mul[out, base]
        base = mul[base, base]
        e >>= 1
    return out


class FieldSpec:
    """F_q = F_p[x]/(modulus), q = p^t, with precomputed operation tables.

    Rank-level methods (add, sub, mul, inv, pow, trace, ...) operate on plain
    ints.  ``np_add``/``np_mul``/``np_digits``/``np_trace``/``np_pow`` expose
    the same tables as numpy arrays for vectorized work.
    """

    def __init__(self, p: int, t: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if t < 1:
            raise ValueError(f"extension degree must be >= 1, got {t}")
        q = p ** t
        if q > MAX_Q:
            raise ValueError(f"q = p^t = {q} exceeds supported size {MAX_Q}")
        if modulus is None:
            modulus = default_modulus(p, t)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != t + 1:
            raise ValueError(f"modulus must have degree {t} (got {len(modulus) - 1})")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")

        self.p = p
        self.t = t
        self.q = q
        self.modulus = modulus
        self._ppow = tuple(p ** i for i in range(t))
        self._build_tables()
        self._np_pow = None

    # -- construction of tables --------------------------------------------

    def _build_tables(self):
        p, t, q = self.p, self.t, self.q
        ranks = np.arange(q, dtype=np.int64)
        digits = (ranks[:, None] // np.array(self._ppow, dtype=np.int64)) % p

        # addition: digit-wise mod p
        add_digits = (digits[:, None, :] + digits[None, :, :]) % p
        ppow = np.array(self._ppow, dtype=np.int64)
        np_add = add_digits @ ppow

        # multiplication: convolve coefficient vectors, reduce via x^(t+k) rows
        conv = np.zeros((q, q, 2 * t - 1), dtype=np.int64)
        for i in range(t):
            di = digits[:, i]
            for j in range(t):
                conv[:, :, i + j] += np.multiply.outer(di, digits[:, j])
        red = self._reduction_rows()
        res = conv[:, :, :t].copy()
        for k in range(t - 1):
            res += conv[:, :, t + k, None] * np.array(red[k], dtype=np.int64)[None, None, :]
        res %= p
        np_mul = res @ ppow

        np_neg = ((-digits) % p) @ ppow

        np_inv = np.zeros(q, dtype=np.int64)
        pairs = np.argwhere(np_mul == 1)
        np_inv[pairs[:, 0]] = pairs[:, 1]

        # trace(a) = sum of a^(p^i); the result must be a constant
        fr = ranks.copy()
        acc = digits.copy()
        for _ in range(t - 1):
            fr = _vec_pow(fr, p, np_mul)
            acc = acc + digits[fr]
        tr = acc % p
        if tr[:, 1:].any():
            raise AssertionError("trace values escaped the prime subfield")

        self.np_add = np_add.astype(np.int32)
        self.np_mul = np_mul.astype(np.int32)
        self.np_digits = digits.astype(np.int32)
        self.np_trace = tr[:, 0].astype(np.int32)
        self._add = np_add.tolist()
        self._mul = np_mul.tolist()
        self._neg = np_neg.tolist()
        self._inv = np_inv.tolist()
        self._trace = tr[:, 0].tolist()
        self._digits = [tuple(row) for row in digits.tolist()]

    def _reduction_rows(self):
        # rows[k] = coefficients of x^(t+k) mod modulus
        p, t = self.p, self.t
        base = [(-c) % p for c in self.modulus[:t]]
        rows = [base]
        for _ in range(t - 2):
            prev = rows[-1]
            nxt = [0] + prev[:-1]
            carry = prev[-1]
            if carry:
                nxt = [(nxt[i] + carry * base[i]) % p for i in range(t)]
            rows.append(nxt)
        return rows

    # -- rank-level operations ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        mul = self._mul
        while e:
            if e & 1:
                out = mul[out][base]
            base = mul[base][base]
            e >>= 1
        return out

    def trace(self, a: int) -> int:
        return self._trace[a]

    def digits(self, a: int) -> tuple[int, ...]:
        return self._digits[a]

    def rank(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.t:
            raise ValueError(f"expected {self.t} coefficients, got {len(coeffs)}")
        return sum((c % self.p) * w for c, w in zip(coeffs, self._ppow))

    @property
    def np_pow(self) -> np.ndarray:
        """np_pow[a, e] = a**e (lazily built; pow(0, 0) = 1)."""
        if self._np_pow is None:
            q = self.q
            tab = np.ones((q, q), dtype=np.int32)
            ranks = np.arange(q, dtype=np.int32)
            for e in range(1, q):
                tab[:, e] = self.np_mul[tab[:, e - 1], ranks]
            self._np_pow = tab
        return self._np_pow

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        return FieldElement(self, self.rank(coeffs))

    def from_rank(self, rank: int) -> "FieldElement":
        if not 0 <= rank < self.q:
            raise ValueError(f"rank {rank} out of range for q={self.q}")
        return FieldElement(self, rank)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def xi(self) -> "FieldElement":
        """The chosen root of the modulus (for t = 1, the root of x - c)."""
        if self.t == 1:
            return FieldElement(self, (-self.modulus[0]) % self.p)
        return FieldElement(self, self.p)

    def basis_ranks(self) -> tuple[int, ...]:
        """Canonical basis {1, xi, ..., xi^(t-1)}: rank of xi^i is p^i."""
        return self._ppow

    def basis(self) -> list["FieldElement"]:
        return [FieldElement(self, r) for r in self._ppow]

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, r) for r in range(self.q)]

    # -- misc -----------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.t == other.t
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.t, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, t={self.t}, modulus={list(self.modulus)})"

    def to_dict(self) -> dict:
        return {"p": self.p, "t": self.t, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return field(int(d["p"]), int(d["t"]), tuple(int(c) for c in d["modulus"]))


@lru_cache(maxsize=None)
def _cached_field(p: int, t: int, modulus: tuple[int, ...] | None) -> FieldSpec:
    return FieldSpec(p, t, modulus)


def field(p: int, t: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Shared FieldSpec instances (table construction is done once)."""
    key = tuple(int(c) for c in modulus) if modulus is not None else None
    return _cached_field(p, t, key)


class FieldElement:
    """An element of a FieldSpec; wraps a rank and supports operators."""

    __slots__ = ("field", "rank")

    def __init__(self, field: FieldSpec, rank: int):
        self.field = field
        self.rank = rank

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.rank)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("operands from different fields")
            return other.rank
        if isinstance(other, int):
            # small ints embed as prime-subfield constants
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        r = self._other(other)
        return FieldElement(self.field, self.field.add(self.rank, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._other(other)
        return FieldElement(self.field, self.field.sub(self.rank, r))

    def __rsub__(self, other):
        r = self._other(other)
        return FieldElement(self.field, self.field.sub(r, self.rank))

    def __mul__(self, other):
        r = self._other(other)
        return FieldElement(self.field, self.field.mul(self.rank, r))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rank))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.rank, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.rank))

    def __truediv__(self, other):
        r = self._other(other)
        return FieldElement(self.field, self.field.mul(self.rank, self.field.inv(r)))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.rank == other.rank and self.field == other.field
        if isinstance(other, int):
            return self.rank == other % self.field.p if other < self.field.p else self.rank == other
        return NotImplemented

    def __hash__(self):
        return hash((self.rank, self.field.p, self.field.t))

    def __bool__(self):
        return self.rank != 0

    def __repr__(self):
        return f"F{self.field.q}({self.rank})"


def trace(a: FieldElement) -> int:
    """Tr(a) = a + a^p + ... + a^(p^(t-1)), an element of F_p (as an int)."""
    return a.field.trace(a.rank)


# ---------------------------------------------------------------------------
# Gaussian elimination over F_p
# ---------------------------------------------------------------------------

def rank_fp(matrix: Sequence[Sequence[int]], p: int) -> int:
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col] % p, -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col] % p:
                lam = rows[r][col] % p
                rows[r] = [(a - lam * b) % p for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def solve_fp(matrix: Sequence[Sequence[int]], rhs: Sequence[int], p: int) -> list[int]:
    """Solve A x = b over F_p for square invertible A.

    Raises ValueError reporting the rank when A is singular.
    """
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ValueError(
                f"singular matrix over F_{p} (rank {rank_fp(matrix, p)} < {n})"
            )
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col] % p, -1, p)
        aug[col] = [(v * inv) % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] % p:
                lam = aug[r][col] % p
                aug[r] = [(a - lam * b) % p for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] % p for i in range(n)]


def inv_fp(matrix: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    n = len(matrix)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] % p), None)
        if piv is None:
            raise ValueError(
                f"singular matrix over F_{p} (rank {rank_fp(matrix, p)} < {n})"
            )
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col] % p, -1, p)
        aug[col] = [(v * inv) % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] % p:
                lam = aug[r][col] % p
                aug[r] = [(a - lam * b) % p for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# spans over F_p
# ---------------------------------------------------------------------------

def span_ranks(field: FieldSpec, ranks: Sequence[int]):
    """F_p-span of field elements given by rank.

    Returns (dim, basis_ranks, coords): basis_ranks is the first linearly
    independent subsequence of the input, and coords[i] expresses input i as
    an F_p-combination of the basis (padded to the final dimension).
    """
    p, t = field.p, field.t
    basis: list[int] = []
    pivots: list[tuple[list[int], list[int], int]] = []  # (vec, rep, pivot col)
    coords: list[list[int]] = []
    for r in ranks:
        vec = list(field.digits(r))
        rep = [0] * len(basis)
        for pv, prep, pc in pivots:
            lam = vec[pc]
            if lam:
                for k in range(t):
                    vec[k] = (vec[k] - lam * pv[k]) % p
                for k in range(len(prep)):
                    rep[k] = (rep[k] + lam * prep[k]) % p
        lead = next((k for k in range(t) if vec[k]), None)
        if lead is None:
            coords.append(rep)
        else:
            inv = pow(vec[lead], -1, p)
            newvec = [(v * inv) % p for v in vec]
            newrep = [(-c * inv) % p for c in rep] + [inv % p]
            basis.append(r)
            pivots.append((newvec, newrep, lead))
            coords.append([0] * (len(basis) - 1) + [1])
    dim = len(basis)
    out = [tuple(c + [0] * (dim - len(c))) for c in coords]
    return dim, basis, out


def span_basis(elems: Sequence[FieldElement]):
    """Public wrapper of span_ranks on FieldElements."""
    if not elems:
        return 0, [], []
    f = elems[0].field
    dim, basis, coords = span_ranks(f, [e.rank for e in elems])
    return dim, [FieldElement(f, r) for r in basis], coords


def dual_basis(basis: Sequence[FieldElement]) -> list[FieldElement]:
    """The unique {eta_j} with Tr(basis_i * eta_j) = delta_ij."""
    if not basis:
        raise ValueError("empty basis")
    f = basis[0].field
    t, p = f.t, f.p
    if len(basis) != t:
        raise ValueError(f"need {t} elements for a basis, got {len(basis)}")
    powers = f.basis_ranks()
    gram = [[f.trace(f.mul(b.rank, powers[k])) for k in range(t)] for b in basis]
    try:
        ginv = inv_fp(gram, p)
    except ValueError as exc:
        raise ValueError(f"input is not a basis: {exc}") from exc
    out = []
    for j in range(t):
        out.append(f.element([ginv[k][j] for k in range(t)]))
    return out


# ---------------------------------------------------------------------------
# dense univariate polynomials over F_q (coefficient rank lists, ascending)
# ---------------------------------------------------------------------------

def uni_trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def uni_mul(a: Sequence[int], b: Sequence[int], f: FieldSpec) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            row = f._mul[ai]
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = f.add(out[i + j], row[bj])
    return uni_trim(out)


def uni_pow(a: Sequence[int], e: int, f: FieldSpec) -> list[int]:
    out, base = [1], list(a)
    while e:
        if e & 1:
            out = uni_mul(out, base, f)
        base = uni_mul(base, base, f)
        e >>= 1
    return out


def uni_from_roots(roots: Iterable[int], f: FieldSpec) -> list[int]:
    out = [1]
    for r in roots:
        out = uni_mul(out, [f.neg(r), 1], f)
    return out


def uni_eval(a: Sequence[int], x: int, f: FieldSpec) -> int:
    acc = 0
    for c in reversed(a):
        acc = f.add(f.mul(acc, x), c)
    return acc


# ---------------------------------------------------------------------------
# subspaces and their linearized polynomials
# ---------------------------------------------------------------------------

class Subspace:
    """An F_p-subspace of F_q given by an independent basis."""

    def __init__(self, field: FieldSpec, basis: Sequence[FieldElement]):
        ranks = [b.rank for b in basis]
        dim, _, _ = span_ranks(field, ranks)
        if dim != len(ranks):
            raise ValueError("basis is not linearly independent")
        if dim > field.t:
            raise ValueError("dimension exceeds field degree")
        self.field = field
        self.basis = tuple(FieldElement(field, r) for r in ranks)
        self.dim = dim
        self._element_ranks: tuple[int, ...] | None = None

    @classmethod
    def canonical(cls, field: FieldSpec, s: int) -> "Subspace":
        """Span of {1, xi, ..., xi^(s-1)}."""
        if not 0 <= s <= field.t:
            raise ValueError(f"dimension {s} out of range [0, {field.t}]")
        return cls(field, field.basis()[:s])

    @classmethod
    def subfield(cls, field: FieldSpec, s: int) -> "Subspace":
        """The subfield F_{p^s} as a subspace (requires s | t)."""
        if s == 0:
            return cls(field, [])
        if field.t % s != 0:
            raise ValueError(f"F_{field.p}^{s} is not a subfield of F_{field.q}")
        fixed = [r for r in range(field.q) if field.pow(r, field.p ** s) == r]
        _, basis, _ = span_ranks(field, [r for r in fixed if r])
        sub = cls(field, [FieldElement(field, r) for r in basis])
        if sub.dim != s:
            raise AssertionError("subfield extraction produced wrong dimension")
        return sub

    def element_ranks(self) -> tuple[int, ...]:
        """All p^s elements, ordered by coefficient counter over the basis."""
        if self._element_ranks is None:
            f, p = self.field, self.field.p
            out = []
            for counter in range(p ** self.dim):
                acc, c = 0, counter
                for b in self.basis:
                    lam = c % p
                    c //= p
                    if lam:
                        acc = f.add(acc, f.mul(lam, b.rank))
                out.append(acc)
            self._element_ranks = tuple(out)
        return self._element_ranks

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, r) for r in self.element_ranks()]

    def __contains__(self, elem: FieldElement) -> bool:
        dim, _, _ = span_ranks(self.field, [b.rank for b in self.basis] + [elem.rank])
        return dim == self.dim

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={[b.rank for b in self.basis]})"


def subspace_poly_eval(V: Subspace, y: FieldElement) -> FieldElement:
    """L_V(y) = prod over v in V of (y - v); zero exactly on V."""
    f = V.field
    acc = 1
    for v in V.element_ranks():
        acc = f.mul(acc, f.sub(y.rank, v))
        if acc == 0:
            break
    return FieldElement(f, acc)


def subspace_c0(V: Subspace) -> FieldElement:
    """Product of the nonzero elements of V (1 for the zero subspace)."""
    f = V.field
    acc = 1
    for v in V.element_ranks():
        if v:
            acc = f.mul(acc, v)
    return FieldElement(f, acc)


def linearized_coeffs(V: Subspace) -> list[int]:
    """Ranks (c_0, ..., c_s) with L_V(x) = sum of c_k * x^(p^k).

    Expands the root product and checks that only p-power exponents carry
    nonzero coefficients.
    """
    f = V.field
    poly = uni_from_roots(V.element_ranks(), f)
    exps = {f.p ** k: k for k in range(V.dim + 1)}
    out = [0] * (V.dim + 1)
    for e, c in enumerate(poly):
        if c == 0:
            continue
        if e not in exps:
            raise AssertionError("subspace polynomial is not linearized")
        out[exps[e]] = c
    return out
