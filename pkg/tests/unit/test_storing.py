"""Unit tests for the point-cell Storing structure."""
import itertools
import math
from collections import Counter

import numpy as np
import pytest

from dskm.core.errors import DomainError
from dskm.core.geometry import GridHierarchy
from dskm.core.storing import SharedStorings, StoringStructure
from dskm.models.instance_models import ClusteringInstance
from dskm.models.outcome_models import FailCause, is_fail


@pytest.fixture
def grid8():
    return GridHierarchy(ClusteringInstance(d=2, delta_exp=3, k=1, epsilon=0.25), (0, 0))


@pytest.mark.unit
class TestStoringConstruction:
    """Test Storing construction."""

    def test_row_count(self, grid8):
        """Test alpha=4, delta=0.1 gives r = ceil(log2(160)) = 8 cell hashes."""
        storing = StoringStructure(grid8, 1, alpha=4, beta=2, delta=0.1, seed=0)

        assert storing.rows == 8
        assert len(storing.cell_hashes) == 8
        assert all(h.size == 8 for h in storing.cell_hashes)
        assert storing.copy_delta == pytest.approx(0.1 / 8)
        assert storing.copy_rows == math.ceil(math.log2(2 / (0.1 / 8))) + 2

    def test_empty_query(self, grid8):
        """Test an empty structure recovers no cells and no items."""
        output = StoringStructure(grid8, 2, alpha=4, beta=2, delta=0.1, seed=0).query()

        assert output.cells == {}
        assert output.items == frozenset()

    def test_same_seed_same_hashes(self, grid8):
        """Test one seed fixes the cell hash assignment."""
        a = StoringStructure(grid8, 2, alpha=4, beta=2, delta=0.1, seed=9)
        b = StoringStructure(grid8, 2, alpha=4, beta=2, delta=0.1, seed=9)

        assert a.cell_hashes == b.cell_hashes

    def test_rejects_bad_parameters(self, grid8):
        """Test invalid capacities, budgets and levels raise DomainError."""
        with pytest.raises(DomainError):
            StoringStructure(grid8, 1, alpha=0, beta=1, delta=0.1, seed=0)
        with pytest.raises(DomainError):
            StoringStructure(grid8, 1, alpha=1, beta=1, delta=0.7, seed=0)
        with pytest.raises(DomainError):
            StoringStructure(grid8, 4, alpha=1, beta=1, delta=0.1, seed=0)

    def test_rejects_label_out_of_range(self, grid8):
        """Test labels outside [1, max_label] raise DomainError."""
        storing = StoringStructure(grid8, 1, alpha=4, beta=2, delta=0.1, seed=0, max_label=3)

        with pytest.raises(DomainError):
            storing.update((1, 1), 4, 1)
        with pytest.raises(DomainError):
            storing.update((1, 1), 0, 1)


@pytest.mark.unit
class TestStoringRecovery:
    """Test cell and item recovery."""

    def test_insert_delete_restores_state(self, grid8):
        """Test +(p,1) then -(p,1) restores every sub-sketch."""
        storing = StoringStructure(grid8, 2, alpha=4, beta=2, delta=0.1, seed=1)
        storing.update((3, 3), 1, 1)
        before = storing.state()
        storing.update((6, 1), 1, 1)
        storing.update((6, 1), 1, -1)

        assert storing.state() == before

    def test_cell_counts(self, grid8):
        """Test two points in one cell give that cell count 2."""
        storing = StoringStructure(grid8, 1, alpha=4, beta=2, delta=0.1, seed=1)
        storing.update((1, 1), 1, 1)
        storing.update((2, 3), 1, 1)
        output = storing.query()

        assert output.cells == {grid8.cell_of((1, 1), 1): 2}
        assert output.items == frozenset({((1, 1), 1), ((2, 3), 1)})

    def test_mixed_stream_three_cells(self, grid8):
        """Test a churned stream netting three cells recovers exactly those cells and items."""
        storing = StoringStructure(grid8, 2, alpha=8, beta=4, delta=0.05, seed=2, max_label=2)
        ops = [
            ((2, 3), 1, 1), ((8, 8), 2, 1), ((5, 5), 1, 1), ((3, 2), 2, 1), ((5, 5), 1, -1),
            ((6, 7), 1, 1), ((8, 8), 2, -1), ((4, 5), 2, 1), ((1, 1), 1, 1), ((1, 1), 1, -1),
        ]
        for point, label, sign in ops:
            storing.update(point, label, sign)
        live = {((2, 3), 1), ((3, 2), 2), ((6, 7), 1), ((4, 5), 2)}
        output = storing.query()

        expected = Counter(grid8.cell_of(p, 2) for p, _ in live)
        assert output.cells == dict(expected)
        assert len(output.cells) == 3
        assert output.items == frozenset(live)

    def test_too_many_cells_fail(self, grid8):
        """Test more than alpha non-empty cells FAIL."""
        storing = StoringStructure(grid8, 3, alpha=2, beta=1, delta=0.1, seed=3)
        for p in [(1, 1), (3, 3), (5, 5), (7, 7)]:
            storing.update(p, 1, 1)
        result = storing.query()

        assert is_fail(result)
        assert result.cause is FailCause.STORING

    def test_oversized_cell_excluded(self, grid8):
        """Test a cell with beta + 1 points is counted but its points are not returned."""
        storing = StoringStructure(grid8, 1, alpha=4, beta=2, delta=0.05, seed=4)
        crowded = [(1, 1), (2, 2), (3, 3)]
        for p in crowded + [(8, 8), (5, 1)]:
            storing.update(p, 1, 1)
        output = storing.query()

        assert output.cells[grid8.cell_of((1, 1), 1)] == 3
        assert output.items == frozenset({((8, 8), 1), ((5, 1), 1)})

    def test_row_disagreement_fails(self, grid8):
        """Test a row sketch contradicting the cell count is reported, not arbitrated."""
        storing = StoringStructure(grid8, 1, alpha=2, beta=4, delta=0.1, seed=5)
        storing.update((1, 1), 1, 1)
        key = grid8.encode_cell(grid8.cell_of((1, 1), 1))
        storing._copy(0, storing.cell_hashes[0](key)).update(storing.encode_item((2, 2), 1), 1)
        result = storing.query()

        assert is_fail(result)
        assert result.cause is FailCause.STORING_DISAGREEMENT

    def test_encode_decode_items(self, grid8):
        """Test (point, label) items encode injectively."""
        storing = StoringStructure(grid8, 1, alpha=1, beta=1, delta=0.1, seed=0, max_label=3)
        codes = set()
        for p in itertools.product(range(1, 9), repeat=2):
            for label in (1, 2, 3):
                code = storing.encode_item(p, label)
                assert storing.decode_item(code) == (p, label)
                codes.add(code)

        assert len(codes) == 64 * 3

    def test_query_reused_until_update(self, grid8):
        """Test a repeated query returns the cached answer and an update refreshes it."""
        storing = StoringStructure(grid8, 1, alpha=4, beta=2, delta=0.1, seed=7)
        storing.update((1, 1), 1, 1)
        first = storing.query()

        assert storing.query() is first
        storing.update((8, 8), 1, 1)
        assert storing.query().cells == {grid8.cell_of((1, 1), 1): 1, grid8.cell_of((8, 8), 1): 1}

    def test_bucket_accounting(self, grid8):
        """Test allocated buckets grow with updates and stay below the nominal count."""
        storing = StoringStructure(grid8, 2, alpha=4, beta=2, delta=0.1, seed=6)
        assert storing.allocated_buckets == 0
        storing.update((2, 6), 1, 1)

        assert 0 < storing.allocated_buckets <= storing.nominal_buckets


@pytest.mark.unit
@pytest.mark.slow
class TestStoringContract:
    """Test exact recovery against a reference multiset."""

    def test_exact_with_small_cells(self):
        """Test <= alpha cells of <= beta points recover exactly in >= 1 - delta of 500 seeds."""
        instance = ClusteringInstance(d=2, delta_exp=4, k=1, epsilon=0.25)
        rng = np.random.default_rng(11)
        exact, trials = 0, 500
        for seed in range(trials):
            grid = GridHierarchy.random(instance, rng)
            storing = StoringStructure(grid, 2, alpha=8, beta=4, delta=0.1, seed=seed)
            candidates = list(itertools.product(range(1, 17), repeat=2))
            chosen = rng.choice(len(candidates), size=40, replace=False)
            live: dict = {}
            for index in chosen:
                p = candidates[int(index)]
                cell = grid.cell_of(p, 2)
                points = live.get(cell)
                if points is None:
                    if len(live) == 8:
                        continue
                    points = live[cell] = []
                if len(points) < 4:
                    points.append(p)
            for cell_points in live.values():
                for p in cell_points:
                    storing.update(p, 1, 1)
            output = storing.query()
            if is_fail(output):
                continue
            assert output.cells == {cell: len(points) for cell, points in live.items()}
            assert output.items == frozenset((p, 1) for points in live.values() for p in points)
            exact += 1

        assert exact >= 0.9 * trials


@pytest.mark.unit
class TestSharedStorings:
    """Test the pool of Storing structures fed with every point."""

    def test_get_reuses_matching_structure(self, grid8):
        """Test one request key maps to one structure and another key to a new one."""
        pool = SharedStorings(grid8, seed=1)
        a = pool.get(1, 4, 2, 0.1)

        assert pool.get(1, 4, 2, 0.1) is a
        assert pool.get(1, 4, 2, 0.1, labels=3) is not a
        assert pool.get(2, 4, 2, 0.1) is not a
        assert len(pool) == 3

    def test_update_feeds_every_label(self, grid8):
        """Test an update reaches every label of a multi-label structure."""
        pool = SharedStorings(grid8, seed=2)
        storing = pool.get(1, 4, 4, 0.1, labels=2)
        pool.update((1, 1), 1)
        pool.update((8, 8), 1)
        pool.update((8, 8), -1)

        assert storing.max_label == 2
        assert storing.query().items == frozenset({((1, 1), 1), ((1, 1), 2)})

    def test_matches_private_structure(self, grid8):
        """Test a pooled structure ends in the state of a private one with the pool's seed."""
        pool = SharedStorings(grid8, seed=3)
        pooled = pool.get(2, 4, 2, 0.1)
        private = StoringStructure(grid8, 2, 4, 2, 0.1, pooled.seed)
        for p in [(1, 1), (3, 4), (7, 2)]:
            pool.update(p, 1)
            private.update(p, 1, 1)

        assert pool.state() == (private.state(),)
        assert pool.nominal_buckets == private.nominal_buckets
        assert pool.allocated_buckets == private.allocated_buckets
