"""Full decomposition pipeline, condensation order, and report certificates."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import (
    chain_digraph_matrix,
    clearing_fixture,
    f2,
    join_pair_matrix,
    obstruction_matrix,
)
from mpdec.decomposer import (
    condensation_order,
    decompose,
    strongly_connected_components,
    summand_signature,
)
from mpdec.generators import gen_intervals, gen_random_er, mix
from mpdec.grading import GradedMatrix

STRATS = ("exhaustive", "aida")


class TestSccAndOrder:
    def test_acyclic_graph_singletons(self):
        comps = strongly_connected_components([1, 2, 3], {1: [2], 2: [3]})
        assert sorted(comps) == [[1], [2], [3]]

    def test_two_cycle_merged(self):
        comps = strongly_connected_components([1, 2, 3], {1: [2], 2: [1, 3]})
        assert sorted(comps) == [[1, 2], [3]]

    def test_condensation_respects_edges(self):
        edges = {3: [1], 4: [3], 2: [1]}
        order = condensation_order([1, 2, 3, 4], edges)
        pos = {}
        for idx, comp in enumerate(order):
            for v in comp:
                pos[v] = idx
        for src, dsts in edges.items():
            for dst in dsts:
                assert pos[src] < pos[dst]

    def test_deterministic(self):
        edges = {2: [1], 3: [1], 4: [2, 3]}
        a = condensation_order([1, 2, 3, 4], edges)
        b = condensation_order([4, 3, 2, 1], {4: [3, 2], 3: [1], 2: [1]})
        assert a == b


class TestDecomposeFixtures:
    @pytest.mark.parametrize("strategy", STRATS)
    def test_disjoint_free_generators(self, strategy):
        m = GradedMatrix([(0, 1), (1, 0)], [], field=f2())
        report = decompose(m, strategy=strategy, verify=True)
        assert report.num_summands == 2

    @pytest.mark.parametrize("strategy", STRATS)
    def test_join_pair_indecomposable(self, strategy):
        report = decompose(join_pair_matrix(), strategy=strategy, verify=True)
        assert report.num_summands == 1
        s = report.summands[0]
        assert (s.num_rows, s.num_cols) == (2, 1)

    @pytest.mark.parametrize("strategy", STRATS)
    def test_obstruction_splits(self, strategy):
        report = decompose(obstruction_matrix(), strategy=strategy, verify=True)
        sizes = sorted((s.num_rows, s.num_cols) for s in report.summands)
        assert sizes == [(1, 1), (2, 1)]

    @pytest.mark.parametrize("strategy", STRATS)
    def test_chain_digraph_block_partition(self, strategy):
        report = decompose(chain_digraph_matrix(), strategy=strategy, verify=True)
        assert report.num_summands == 2
        by_size = {
            (s.num_rows, s.num_cols): (sorted(rows), sorted(cols))
            for s, rows, cols in zip(
                report.summands, report.block_rows, report.block_cols
            )
        }
        assert set(by_size) == {(3, 3), (1, 1)}
        # rows split as the first three generators against the free one;
        # the two batch columns at (2, 2) split one to each side
        assert by_size[(3, 3)][0] == [0, 1, 2]
        assert by_size[(1, 1)][0] == [3]
        big_cols, small_cols = by_size[(3, 3)][1], by_size[(1, 1)][1]
        assert big_cols[:2] == [0, 1]
        assert sorted(big_cols[2:] + small_cols) == [2, 3]

    @pytest.mark.parametrize("strategy", STRATS)
    def test_clearing_fixture(self, strategy):
        report = decompose(clearing_fixture()[0], strategy=strategy, verify=True)
        sizes = sorted((s.num_rows, s.num_cols) for s in report.summands)
        assert sizes == [(2, 2), (2, 3)]

    def test_summands_are_indecomposable(self):
        for src in (chain_digraph_matrix(), clearing_fixture()[0],
                    obstruction_matrix()):
            report = decompose(src, strategy="exhaustive")
            for s in report.summands:
                again = decompose(s.copy(), strategy="exhaustive", verify=True)
                assert again.num_summands == 1


class TestCountersAndConservation:
    def test_distinctly_graded_skips_subspace_search(self):
        m = gen_intervals(20, seed=4, mixed=True)[0]
        report = decompose(m, strategy="exhaustive")
        assert report.counters["subspace_iterations"] == 0

    def test_generator_and_relation_conservation(self):
        for seed in range(5):
            m = gen_random_er(8, 6, 0.35, seed=seed)
            report = decompose(m.copy(), strategy="aida", verify=True)
            assert sum(s.num_rows for s in report.summands) == m.num_rows
            assert sum(s.num_cols for s in report.summands) == m.num_cols

    @settings(deadline=None, max_examples=15)
    @given(st.integers(0, 10 ** 6))
    def test_strategies_agree_on_random_input(self, seed):
        m = gen_random_er(7, 6, 0.4, seed=seed)
        mixed, _ = mix(m.copy(), op_count=60, seed=seed + 1,
                       return_transform=True)
        reports = [
            decompose(mixed.copy(), strategy=s, verify=True) for s in STRATS
        ]
        assert reports[0].signature_multiset() == reports[1].signature_multiset()

    def test_certificate_on_every_report(self):
        for seed in range(3):
            m = gen_random_er(6, 6, 0.4, seed=100 + seed)
            for s in STRATS:
                report = decompose(m.copy(), strategy=s, verify=False)
                assert report.verify()


class TestSignatures:
    def test_signature_separates_fixtures(self):
        assert summand_signature(join_pair_matrix()) != summand_signature(
            obstruction_matrix()
        )

    def test_signature_invariant_under_mixing(self):
        m = gen_random_er(6, 5, 0.4, seed=77)
        mixed, _ = mix(m.copy(), op_count=50, seed=78, return_transform=True)
        ra = decompose(m, strategy="exhaustive")
        rb = decompose(mixed, strategy="exhaustive")
        assert ra.signature_multiset() == rb.signature_multiset()

    def test_unknown_strategy_rejected(self):
        with pytest.raises(ValueError):
            decompose(join_pair_matrix(), strategy="nope")
