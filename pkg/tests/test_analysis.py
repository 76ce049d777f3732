from fractions import Fraction
from math import comb

import numpy as np
import pytest

from grmrepair.analysis import (
    CodeShape,
    PartitionType,
    bandwidth_for_sizes,
    bandwidth_for_type,
    bound_curves,
    check_regime,
    exact_expected_bandwidth,
    exhaustive_partition_counts,
    monte_carlo_expectation,
    partition_probability,
    partition_types,
    regime,
    _sample_bandwidths,
)
from grmrepair.grm import GrmParams
from grmrepair.repair_multi import group_erasures, make_pattern
from conftest import make_params

SHAPE16 = CodeShape(2, 4, 2, 11)
SHAPE8 = CodeShape(2, 3, 2, 3)


def closed_form(shape, l, model):
    """Closed-form expectations for l = 2, 3.

    The l = 3 centralized bracket carries (q-2)(q-3); the (q-2)^2 variant
    fails the exhaustive enumeration oracle for every q > 2.
    """
    q, t, m = shape.q, shape.t, shape.m
    s = regime(shape).s
    Q = Fraction(q) ** m
    if l == 2:
        if model == "distributed":
            return 2 * (q - 1) * (t - s) * Fraction(Q - 2, Q - 1)
        return 2 * (q - 1) * (t - s) * Fraction(2 * Q - q - 2, 2 * (Q - 1))
    if model == "distributed":
        return 3 * (q - 1) * (t - s) * (
            Fraction(Q - 4, Q - 2) + Fraction(2, (Q - 1) * (Q - 2))
        )
    return 3 * (q - 1) * (t - s) * (
        Fraction((Q - q) * (Q - 3), (Q - 1) * (Q - 2))
        + Fraction((q - 2) * (q - 3), 3 * (Q - 1) * (Q - 2))
    )


class TestShapesAndRegime:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            CodeShape(2, 4, 2, 31)
        with pytest.raises(ValueError):
            CodeShape(1, 1, 1, 0)

    def test_from_params(self, f16):
        P = GrmParams(f16, 2, 11)
        shape = CodeShape.of(P)
        assert shape == SHAPE16 and shape.q == 16 and shape.n == 256

    def test_fig2_shape(self):
        shape = CodeShape(16, 4, 2, 16 ** 4 - 16 ** 3)
        assert shape.d == 16 ** 7
        assert shape.k == 16 ** 8 - 16 ** 7 + 1
        assert regime(shape).s == 2

    def test_regime_values(self):
        reg = regime(SHAPE16)
        assert reg.s == 2
        assert reg.distributed_cap == 0
        assert reg.centralized_cap == Fraction(16 + 4 - 11 - 2, 7)

    def test_strict_violation_names_inequality(self):
        with pytest.raises(ValueError, match="p\\^t - p\\^s - mu - 1"):
            check_regime(SHAPE16, 2, "distributed")
        with pytest.raises(ValueError, match="2 p\\^s - 1"):
            check_regime(SHAPE16, 2, "centralized")
        # a roomy shape passes
        check_regime(CodeShape(2, 4, 2, 4), 3, "distributed")


class TestPartitions:
    def test_partition_type_counts(self):
        assert len(partition_types(5)) == 7
        assert len(partition_types(1)) == 1

    def test_partition_type_validation(self):
        with pytest.raises(ValueError):
            PartitionType(((2, 1), (2, 1)))
        with pytest.raises(ValueError):
            PartitionType(((0, 1),))

    def test_l1_certain(self):
        (pt,) = partition_types(1)
        assert partition_probability(SHAPE16, pt) == 1

    def test_l2_exact_values(self):
        same, split = None, None
        for pt in partition_types(2):
            if pt.w == 1:
                same = partition_probability(SHAPE16, pt)
            else:
                split = partition_probability(SHAPE16, pt)
        assert same == Fraction(16 * comb(16, 2), comb(256, 2))
        assert same + split == 1

    @pytest.mark.parametrize("l", range(1, 6))
    @pytest.mark.parametrize("shape", [SHAPE16, SHAPE8, CodeShape(3, 2, 2, 3), CodeShape(2, 4, 3, 4)])
    def test_probabilities_sum_to_one(self, shape, l):
        assert sum(partition_probability(shape, pt) for pt in partition_types(l)) == 1

    @pytest.mark.parametrize("shape,l", [
        (CodeShape(2, 2, 2, 1), 2),
        (CodeShape(2, 2, 2, 1), 3),
        (CodeShape(2, 3, 2, 3), 2),
        (CodeShape(2, 3, 2, 3), 3),
        (SHAPE16, 2),
    ])
    def test_exhaustive_enumeration_oracle(self, shape, l):
        counts = exhaustive_partition_counts(shape, l)
        total = comb(shape.n, l)
        assert sum(counts.values()) == total
        for pt in partition_types(l):
            expect = Fraction(counts.get(pt, 0), total)
            assert partition_probability(shape, pt) == expect

    def test_enumeration_budget_guard(self):
        with pytest.raises(ValueError, match="budget"):
            exhaustive_partition_counts(CodeShape(2, 4, 3, 4), 3)


class TestExactExpectation:
    @pytest.mark.parametrize("shape", [SHAPE16, SHAPE8])
    @pytest.mark.parametrize("l", [2, 3])
    @pytest.mark.parametrize("model", ["distributed", "centralized"])
    def test_matches_closed_forms(self, shape, l, model):
        exact = exact_expected_bandwidth(shape, l, model)
        form = closed_form(shape, l, model)
        assert exact == form
        assert abs(float(exact) - float(form)) <= 1e-12 * float(form)

    def test_enumeration_is_the_deciding_oracle(self):
        # average the per-pattern bound over every pattern and compare
        shape = CodeShape(2, 2, 2, 1)
        s = regime(shape).s
        for l in (2, 3):
            for model in ("distributed", "centralized"):
                counts = exhaustive_partition_counts(shape, l)
                total = comb(shape.n, l)
                expect = sum(
                    Fraction(cnt, total) * bandwidth_for_type(shape, pt, s, model)
                    for pt, cnt in counts.items()
                )
                assert exact_expected_bandwidth(shape, l, model) == expect

    def test_strict_mode(self):
        with pytest.raises(ValueError, match="regime violated"):
            exact_expected_bandwidth(SHAPE16, 2, "distributed", strict=True)
        roomy = CodeShape(2, 4, 2, 4)
        assert exact_expected_bandwidth(roomy, 2, "distributed", strict=True) > 0

    def test_unknown_model(self):
        with pytest.raises(ValueError, match="model"):
            exact_expected_bandwidth(SHAPE16, 2, "sideways")


class TestMonteCarlo:
    def test_requires_samples(self):
        with pytest.raises(ValueError, match="samples"):
            monte_carlo_expectation(SHAPE16, 2, "distributed", 0, 1)

    def test_l1_constant(self):
        mean, err = monte_carlo_expectation(SHAPE16, 1, "distributed", 500, 9)
        assert mean == 30.0 and err == 0.0

    def test_deterministic_per_seed(self):
        a = monte_carlo_expectation(SHAPE16, 2, "centralized", 3000, 5)
        b = monte_carlo_expectation(SHAPE16, 2, "centralized", 3000, 5)
        c = monte_carlo_expectation(SHAPE16, 2, "centralized", 3000, 6)
        assert a == b and a != c

    @pytest.mark.parametrize("model", ["distributed", "centralized"])
    @pytest.mark.parametrize("l", [2, 3])
    def test_three_sigma_agreement(self, model, l):
        exact = float(exact_expected_bandwidth(SHAPE16, l, model))
        misses = 0
        for seed in range(20):
            mean, err = monte_carlo_expectation(SHAPE16, l, model, 10000, seed)
            if abs(mean - exact) > 3 * err:
                misses += 1
        assert misses == 0

    def test_sample_values_match_grouping_formula(self, f16):
        # the vectorized sampler must agree with explicit grouping per pattern
        P = GrmParams(f16, 2, 11)
        shape = CodeShape.of(P)
        s = regime(shape).s
        rng = np.random.default_rng(0)
        for model in ("distributed", "centralized"):
            vals = _sample_bandwidths(shape, 3, model, s, 40, 12)
            picks = np.random.default_rng(12).integers(0, shape.n, size=(40, 3))
            # _sample_bandwidths redraws duplicates from the same stream, so
            # only compare rows that were collision-free on the first draw
            for row, v in zip(picks, vals):
                if len(set(row.tolist())) < 3:
                    continue
                grouping = group_erasures(make_pattern(P, [int(x) for x in row]), axis=1)
                assert v == bandwidth_for_sizes(shape, grouping.sizes, s, model)


class TestCurves:
    def test_fig2_rows_exact(self):
        shape = CodeShape(16, 4, 2, 16 ** 4 - 16 ** 3)
        rows = bound_curves(shape, range(1, 9))
        q = 16 ** 4
        for i, row in enumerate(rows, start=1):
            assert row["l"] == i
            assert row["trivial_kt"] == (16 ** 8 - 16 ** 7 + 1) * 4
            assert row["worst"] == i * (q - 1) * 2
            assert row["best_distributed"] == i * (q - i) * 2
            assert row["best_centralized"] == (q - i) * 2
        worst = [r["worst"] for r in rows]
        assert worst == sorted(worst)
        assert rows[0]["best_centralized"] == rows[0]["worst"]

    def test_cap_enforcement(self):
        shape = CodeShape(16, 4, 2, 16 ** 4 - 16 ** 3)
        with pytest.raises(ValueError, match="centralized cap"):
            bound_curves(shape, [9])
        with pytest.raises(ValueError, match=">= 1"):
            bound_curves(shape, [0])

    def test_no_subspace_room(self):
        tiny = CodeShape(2, 1, 2, 1)  # mu = q - 1 leaves no subspace room
        with pytest.raises(ValueError, match="room"):
            bound_curves(tiny, [1])
