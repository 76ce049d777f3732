import random

import pytest

from grmrepair.fields import (
    DEFAULT_MODULI,
    FieldSpec,
    Subspace,
    dual_basis,
    field,
    inv_fp,
    is_irreducible,
    linearized_coeffs,
    rank_fp,
    solve_fp,
    span_basis,
    span_ranks,
    subspace_c0,
    subspace_poly_eval,
    trace,
    uni_eval,
    uni_from_roots,
)

FIELDS = [(2, 2), (2, 4), (3, 2), (2, 3), (5, 1)]


@pytest.mark.parametrize("p,t", sorted(DEFAULT_MODULI))
def test_default_moduli_are_irreducible(p, t):
    f = field(p, t)
    assert f.q == p ** t
    assert is_irreducible(f.modulus, p)


def test_construction_errors():
    with pytest.raises(ValueError, match="prime"):
        FieldSpec(4, 2)
    with pytest.raises(ValueError, match="degree"):
        FieldSpec(2, 0)
    with pytest.raises(ValueError, match="monic"):
        FieldSpec(2, 2, (1, 1, 0))
    with pytest.raises(ValueError, match="reducible"):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x+1)^2 over F_2
    with pytest.raises(ValueError, match="degree"):
        FieldSpec(2, 3, (1, 1, 1))
    with pytest.raises(ValueError, match="exceeds"):
        FieldSpec(2, 12)


def test_pinned_f16_modulus(f16):
    # downstream reference tables rely on x^4 + x^3 + 1 exactly
    assert f16.modulus == (1, 0, 0, 1, 1)
    xi = f16.xi
    assert (xi ** 4).coeffs == (1, 0, 0, 1)
    assert len({(xi ** k).rank for k in range(15)}) == 15  # primitive


def test_basic_op_examples(f4, f16):
    assert f16.one.inverse() == f16.one
    w = f4.xi
    assert (w * w).coeffs == (1, 1)  # forced by x^2 = x + 1
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        f16.zero.inverse()


@pytest.mark.parametrize("p,t", FIELDS)
def test_field_axioms_random(p, t):
    f = field(p, t)
    rng = random.Random(100 * p + t)
    for _ in range(80):
        a, b, c = (rng.randrange(f.q) for _ in range(3))
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, 3) == f.mul(a, f.mul(a, a))


def test_rank_coeff_round_trip(f16):
    for r in range(f16.q):
        assert f16.rank(f16.digits(r)) == r
    assert f16.element((1, 0, 0, 1)).rank == 9


def _trace_oracle(f, a):
    # independent power sum: a^(p^i) by repeated exponentiation
    total = 0
    for i in range(f.t):
        v = a
        for _ in range((f.p ** i) - 1):
            v = f.mul(v, a)
        total = f.add(total, v)
    return total


@pytest.mark.parametrize("p,t", FIELDS)
def test_trace_against_power_sum_oracle(p, t):
    f = field(p, t)
    for a in range(f.q):
        assert f.trace(a) == _trace_oracle(f, a)


def test_trace_examples(f4, f16):
    assert trace(f4.zero) == 0
    assert trace(f4.xi) == 1  # w + w^2 = w + (w+1) = 1
    assert f16.trace(f16.xi.rank) == _trace_oracle(f16, f16.xi.rank)


@pytest.mark.parametrize("p,t", [(2, 2), (2, 4), (2, 8), (3, 2), (2, 3)])
def test_trace_linear_onto_balanced(p, t):
    f = field(p, t)
    counts = [0] * p
    for a in range(f.q):
        counts[f.trace(a)] += 1
    assert counts == [f.q // p] * p  # balanced, hence onto
    rng = random.Random(7)
    for _ in range(50):
        a, b, lam = rng.randrange(f.q), rng.randrange(f.q), rng.randrange(p)
        assert f.trace(f.add(a, b)) == (f.trace(a) + f.trace(b)) % p
        assert f.trace(f.mul(lam, a)) == (lam * f.trace(a)) % p


class TestDualBasis:
    def test_t1_identity(self):
        f = field(5, 1)
        assert dual_basis([f.one]) == [f.one]

    def test_f4_delta_table(self, f4):
        basis = [f4.one, f4.xi]
        eta = dual_basis(basis)
        for i in range(2):
            for j in range(2):
                assert trace(basis[i] * eta[j]) == (1 if i == j else 0)

    def test_reconstruction_identity(self, f16):
        rng = random.Random(3)
        basis = f16.basis()
        eta = dual_basis(basis)
        for _ in range(20):
            c = f16.from_rank(rng.randrange(16))
            total = f16.zero
            for j in range(4):
                total = total + trace(basis[j] * c) * eta[j]
            assert total == c

    def test_not_a_basis(self, f16):
        dependent = [f16.one, f16.xi, f16.one + f16.xi, f16.from_rank(5)]
        with pytest.raises(ValueError, match="rank"):
            dual_basis(dependent)


class TestSpan:
    def test_all_zero(self, f16):
        dim, basis, coords = span_basis([f16.zero, f16.zero])
        assert dim == 0 and basis == [] and coords == [(), ()]

    def test_dependent_triple(self, f16):
        dim, basis, coords = span_basis([f16.one, f16.xi, f16.one + f16.xi])
        assert dim == 2
        assert coords == [(1, 0), (0, 1), (1, 1)]

    @pytest.mark.parametrize("p,t", FIELDS)
    def test_coords_reconstruct_inputs(self, p, t):
        f = field(p, t)
        rng = random.Random(p * t)
        for _ in range(10):
            ranks = [rng.randrange(f.q) for _ in range(6)]
            dim, basis, coords = span_ranks(f, ranks)
            assert dim <= f.t
            for r, co in zip(ranks, coords):
                acc = 0
                for lam, b in zip(co, basis):
                    acc = f.add(acc, f.mul(lam, b))
                assert acc == r

    def test_subspace_image_dimension(self, f16):
        # image of L_V over the whole field has dimension t - dim(V)
        for s in range(4):
            V = Subspace.canonical(f16, s)
            image = sorted({subspace_poly_eval(V, f16.from_rank(y)).rank for y in range(16)})
            dim, _, _ = span_ranks(f16, image)
            assert dim == 4 - s


class TestSubspace:
    def test_canonical_and_trivial(self, f16):
        V = Subspace.canonical(f16, 2)
        assert [b.rank for b in V.basis] == [1, 2]
        assert Subspace.canonical(f16, 0).element_ranks() == (0,)

    def test_dependent_basis_rejected(self, f16):
        with pytest.raises(ValueError, match="independent"):
            Subspace(f16, [f16.one, f16.one])

    def test_subfield_f4_in_f16(self, f16):
        V = Subspace.subfield(f16, 2)
        xi = f16.xi
        assert set(V.element_ranks()) == {0, 1, (xi ** 5).rank, (xi ** 10).rank}
        # L_V(x) = x^4 - x on the whole field
        for y in range(16):
            got = subspace_poly_eval(V, f16.from_rank(y)).rank
            assert got == f16.add(f16.pow(y, 4), f16.neg(y))
        assert subspace_c0(V) == f16.one  # 1 * xi^5 * xi^10 = xi^15 = 1
        with pytest.raises(ValueError, match="subfield"):
            Subspace.subfield(f16, 3)

    def test_kernel_is_exactly_v(self, f16, f9):
        for f, s in [(f16, 2), (f16, 3), (f9, 1)]:
            V = Subspace.canonical(f, s)
            members = set(V.element_ranks())
            for y in range(f.q):
                val = subspace_poly_eval(V, f.from_rank(y)).rank
                assert (val == 0) == (y in members)
                assert (f.from_rank(y) in V) == (y in members)

    def test_c0_nonzero_and_matches_linearized_coeff(self, f16, f9):
        rng = random.Random(11)
        for f in (f16, f9):
            for _ in range(8):
                ranks = {rng.randrange(1, f.q) for _ in range(2)}
                dim, basis, _ = span_ranks(f, sorted(ranks))
                V = Subspace(f, [f.from_rank(r) for r in basis])
                c0 = subspace_c0(V)
                assert c0.rank != 0
                assert linearized_coeffs(V)[0] == c0.rank

    def test_linearized_coeffs_reproduce_eval(self, f16):
        V = Subspace.canonical(f16, 2)
        cs = linearized_coeffs(V)
        for y in range(16):
            acc = 0
            for k, c in enumerate(cs):
                acc = f16.add(acc, f16.mul(c, f16.pow(y, 2 ** k)))
            assert acc == subspace_poly_eval(V, f16.from_rank(y)).rank

    def test_subspace_poly_is_fp_linear(self, f16):
        V = Subspace.canonical(f16, 2)
        rng = random.Random(5)
        for _ in range(30):
            a, b = rng.randrange(16), rng.randrange(16)
            la = subspace_poly_eval(V, f16.from_rank(a)).rank
            lb = subspace_poly_eval(V, f16.from_rank(b)).rank
            lab = subspace_poly_eval(V, f16.from_rank(f16.add(a, b))).rank
            assert lab == f16.add(la, lb)


class TestFpLinalg:
    def test_solve_known_system(self):
        A = [[1, 2], [3, 4]]
        b = [3, 1]
        x = solve_fp(A, b, 5)
        assert [(A[i][0] * x[0] + A[i][1] * x[1]) % 5 for i in range(2)] == b

    def test_random_round_trip(self):
        rng = random.Random(0)
        for p in (2, 3, 5):
            for _ in range(10):
                n = rng.randrange(1, 6)
                while True:
                    A = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
                    if rank_fp(A, p) == n:
                        break
                x = [rng.randrange(p) for _ in range(n)]
                b = [sum(A[i][j] * x[j] for j in range(n)) % p for i in range(n)]
                assert solve_fp(A, b, p) == x
                Ainv = inv_fp(A, p)
                prod = [
                    [sum(A[i][k] * Ainv[k][j] for k in range(n)) % p for j in range(n)]
                    for i in range(n)
                ]
                assert prod == [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def test_singular_reports_rank(self):
        with pytest.raises(ValueError, match=r"rank 1 < 2"):
            solve_fp([[1, 1], [1, 1]], [0, 1], 2)


def test_uni_helpers(f16):
    roots = [3, 7]
    poly = uni_from_roots(roots, f16)
    for x in range(16):
        expect = f16.mul(f16.sub(x, 3), f16.sub(x, 7))
        assert uni_eval(poly, x, f16) == expect


def test_field_spec_serialization_round_trip(f16):
    assert FieldSpec.from_dict(f16.to_dict()) == f16
