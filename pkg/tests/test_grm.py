import random

import numpy as np
import pytest

from grmrepair.fields import field
from grmrepair.grm import (
    Codeword,
    ErasedSymbolError,
    GrmParams,
    MultiPoly,
    brute_feasible,
    brute_min_distance,
    dual_min_distance,
    encode,
    evaluate_on_nodes,
    is_dual_pair,
    min_distance,
    monomials,
    random_codeword,
)
from conftest import make_params


class TestParams:
    def test_derived_quantities(self, f16):
        P = GrmParams(f16, 2, 11)
        assert (P.q, P.n, P.mu_dual) == (16, 256, 18)
        assert P.k_grm == sum(1 for a in range(16) for b in range(16) if a + b <= 11)

    def test_mu_range(self, f16):
        with pytest.raises(ValueError):
            GrmParams(f16, 2, 31)
        with pytest.raises(ValueError):
            GrmParams(f16, 2, -1)
        GrmParams(f16, 2, 30)  # mu = m(q-1) is allowed

    def test_dual_round_trip(self, f16):
        P = GrmParams(f16, 2, 11)
        assert P.dual().mu == 18
        assert P.dual().dual() == P
        with pytest.raises(ValueError, match="degenerate"):
            GrmParams(f16, 2, 30).dual()

    def test_node_indexing(self, f16):
        P = GrmParams(f16, 3, 4)
        for j in (0, 1, 16, 4095, 777):
            assert P.node_rank(P.node_coords(j)) == j
        # coordinate 1 is the least significant digit
        assert P.node_coords(1) == (1, 0, 0)
        assert P.node_coords(16) == (0, 1, 0)
        digits = P.node_digits()
        assert tuple(int(v) for v in digits[777]) == P.node_coords(777)


class TestMonomials:
    def test_mu_zero(self, f16):
        P = GrmParams(f16, 2, 0)
        assert monomials(P) == [(0, 0)]
        assert P.k_grm == 1

    def test_rm12_dimension(self):
        P = make_params(2, 1, 2, 1)
        assert set(monomials(P)) == {(0, 0), (1, 0), (0, 1)}
        assert P.k_grm == 3

    def test_count_matches_double_loop(self, f16):
        P = GrmParams(f16, 2, 11)
        count = sum(1 for a in range(16) for b in range(16) if a + b <= 11)
        assert len(monomials(P)) == count

    def test_lexicographic_order(self, f16):
        ms = monomials(GrmParams(f16, 2, 5))
        assert ms == sorted(ms)


class TestMultiPoly:
    def test_reduction(self, f4):
        # x^q = x: exponent 4 collapses to 1 over F_4
        p = MultiPoly(f4, 1, {(4,): 1, (1,): 1})
        assert p.terms == {}  # x + x = 0
        p = MultiPoly(f4, 1, {(5,): 1})
        assert p.terms == {(2,): 1}

    def test_evaluate_examples(self, f16):
        one = MultiPoly.constant(f16, 2, 1)
        assert one.evaluate((5, 9)).rank == 1
        x1 = MultiPoly.monomial(f16, 2, (1, 0))
        assert x1.evaluate((7, 3)).rank == 7

    def test_evaluate_against_term_oracle(self, f16):
        P = GrmParams(f16, 2, 9)
        rng = random.Random(2)
        for seed in range(5):
            coeffs, _ = random_codeword(P, seed)
            poly = MultiPoly(f16, 2, coeffs)
            pt = (rng.randrange(16), rng.randrange(16))
            expect = 0
            for (e1, e2), c in coeffs.items():
                v = f16.mul(c, f16.mul(f16.pow(pt[0], e1), f16.pow(pt[1], e2)))
                expect = f16.add(expect, v)
            assert poly.evaluate(pt).rank == expect

    def test_arity_check(self, f16):
        with pytest.raises(ValueError, match="arity"):
            MultiPoly(f16, 2, {(1,): 1})
        with pytest.raises(ValueError, match="arity"):
            MultiPoly.constant(f16, 2, 1).evaluate((1,))


class TestEncode:
    def test_zero_and_ones(self, f16):
        P = GrmParams(f16, 2, 11)
        assert encode(P, {}).weight() == 0
        ones = encode(P, {(0, 0): 1})
        assert ones.weight() == P.n and set(ones.ranks.tolist()) == {1}

    def test_x1_plus_x2_over_f2(self):
        P = make_params(2, 1, 2, 1)
        cw = encode(P, {(1, 0): 1, (0, 1): 1})
        assert cw.ranks.tolist() == [0, 1, 1, 0]

    def test_degree_violation(self, f16):
        P = GrmParams(f16, 2, 11)
        with pytest.raises(ValueError, match="degree violation"):
            encode(P, {(8, 4): 1})
        # a reducible exponent that lands inside the bound is fine
        encode(P, {(16, 0): 1})  # x^16 == x

    def test_linearity(self, matrix_params):
        P = matrix_params
        f = P.field
        rng = random.Random(13)
        for _ in range(5):
            ca, cwa = random_codeword(P, rng.randrange(10 ** 6))
            cb, cwb = random_codeword(P, rng.randrange(10 ** 6))
            lam = rng.randrange(P.q)
            combo = {
                e: f.add(f.mul(lam, ca.get(e, 0)), cb.get(e, 0))
                for e in set(ca) | set(cb)
            }
            cwc = encode(P, combo)
            expect = f.np_add[f.np_mul[cwa.ranks, lam], cwb.ranks]
            assert (cwc.ranks == expect).all()

    def test_tensor_eval_matches_scalar(self, matrix_params):
        P = matrix_params
        coeffs, cw = random_codeword(P, 99)
        poly = MultiPoly(P.field, P.m, coeffs)
        for j in (0, P.n // 2, P.n - 1):
            assert int(cw.ranks[j]) == poly.evaluate(P.node_vector(j)).rank


class TestDistances:
    def test_formula_examples(self, f16):
        assert min_distance(GrmParams(f16, 2, 11)) == 80
        assert min_distance(GrmParams(f16, 2, 0)) == 256  # repetition-like
        assert min_distance(GrmParams(f16, 2, 30)) == 1
        assert dual_min_distance(GrmParams(f16, 2, 11)) == 13

    def test_dual_full_length_m1(self):
        # m = 1, mu = q - 2: theta = q - 2, so d_dual = q = n
        P = make_params(2, 2, 1, 2)
        assert dual_min_distance(P) == 4 == P.n

    @pytest.mark.parametrize("inst", [(2, 1, 2, 1), (3, 1, 2, 2), (3, 1, 2, 3), (2, 2, 1, 2)])
    def test_brute_force_agrees(self, inst):
        P = make_params(*inst)
        assert brute_feasible(P)
        assert brute_min_distance(P) == P.d
        assert brute_min_distance(P.dual()) == P.d_dual

    def test_brute_guard(self, f16):
        P = GrmParams(f16, 2, 11)
        with pytest.raises(ValueError, match="too large"):
            brute_min_distance(P)


class TestDuality:
    def test_zero_poly(self, f16):
        P = GrmParams(f16, 2, 11)
        z = MultiPoly.zero(f16, 2)
        g = MultiPoly.constant(f16, 2, 1)
        assert is_dual_pair(P, z, g)

    @pytest.mark.parametrize("pairs", [200])
    def test_random_pairs_orthogonal(self, matrix_params, pairs):
        P = matrix_params
        if P.mu_dual < 0:
            pytest.skip("degenerate dual")
        D = P.dual()
        rng = random.Random(17)
        for _ in range(pairs):
            ca, _ = random_codeword(P, rng.randrange(10 ** 6))
            cb, _ = random_codeword(D, rng.randrange(10 ** 6))
            f = MultiPoly(P.field, P.m, ca)
            g = MultiPoly(P.field, P.m, cb)
            assert is_dual_pair(P, f, g)

    @pytest.mark.parametrize("p,t,m", [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 2, 3)])
    def test_full_monomial_not_orthogonal_to_one(self, p, t, m):
        # g = x_1^(q-1) ... x_m^(q-1) has degree mu_dual + 1 for mu = 0
        P = make_params(p, t, m, 0)
        q = P.q
        g = MultiPoly.monomial(P.field, m, (q - 1,) * m)
        one = MultiPoly.constant(P.field, m, 1)
        assert not is_dual_pair(P, one, g)

    def test_all_ones_in_code_and_dual(self, matrix_params):
        P = matrix_params
        one = MultiPoly.constant(P.field, P.m, 1)
        _, cw = random_codeword(P, 4)
        coeffs, _ = random_codeword(P, 4)
        assert is_dual_pair(P, MultiPoly(P.field, P.m, coeffs), one)
        if P.mu_dual >= 0:
            dual_coeffs, _ = random_codeword(P.dual(), 5)
            assert is_dual_pair(P, one, MultiPoly(P.field, P.m, dual_coeffs))


class TestCodeword:
    def test_random_codeword_deterministic(self, f16):
        P = GrmParams(f16, 2, 11)
        c1, cw1 = random_codeword(P, 42)
        c2, cw2 = random_codeword(P, 42)
        c3, cw3 = random_codeword(P, 43)
        assert c1 == c2 and cw1 == cw2
        assert cw1 != cw3

    def test_erasure_wrapper(self, f16):
        P = GrmParams(f16, 2, 11)
        _, cw = random_codeword(P, 0)
        view = cw.erase([3, 7])
        assert view.rank_at(0) == int(cw.ranks[0])
        with pytest.raises(ErasedSymbolError):
            view.rank_at(3)
        with pytest.raises(ErasedSymbolError):
            view[7]

    def test_length_check(self, f16):
        P = GrmParams(f16, 2, 11)
        with pytest.raises(ValueError, match="length"):
            Codeword(P, [0, 1, 2])

    def test_symbols_view(self):
        P = make_params(2, 1, 2, 1)
        cw = encode(P, {(1, 0): 1})
        assert [s.rank for s in cw.symbols] == [0, 1, 0, 1]
        assert cw[1] == P.field.one


def test_evaluate_on_nodes_zero(f16):
    P = GrmParams(f16, 2, 3)
    assert evaluate_on_nodes(P, MultiPoly.zero(f16, 2)).tolist() == [0] * 256
