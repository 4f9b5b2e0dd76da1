"""Hand-built presentations shared across the test modules.

Every builder returns fresh objects, so tests may mutate them freely. All
fixtures are over F_2 unless a field is passed in.
"""

from __future__ import annotations

import numpy as np

from mpdec.fields import FieldConfig
from mpdec.grading import GradedMatrix


def f2() -> FieldConfig:
    return FieldConfig(2)


def join_pair_matrix(field: FieldConfig | None = None) -> GradedMatrix:
    """Two incomparable generators tied by one relation at their join.

    Indecomposable but not an interval: the pointwise dimension is 2 on
    the strict overlap of the two upper sets below the join.
    """
    fq = field if field is not None else f2()
    m = GradedMatrix([(0, 1), (1, 0)], [(2, 2)], field=fq)
    m.columns[0] = {0: 1, 1: (fq.q - 1) or 1}
    return m


def antidiagonal_batch_matrix() -> GradedMatrix:
    """Six antidiagonally graded generators, one batch of four relations.

    All generator degrees are pairwise incomparable, so no row operation is
    admissible and only the four same-degree columns can be combined. The
    unique splitting needs a genuine change of basis on the batch: it is
    invisible to single-column clearing.
    """
    dense = np.array(
        [
            [0, 1, 0, 1],
            [1, 0, 1, 0],
            [1, 1, 1, 1],
            [0, 1, 1, 0],
            [1, 1, 0, 1],
            [1, 0, 1, 1],
        ],
        dtype=np.int64,
    )
    gens = [(0, 5), (1, 4), (2, 3), (3, 2), (4, 1), (5, 0)]
    rels = [(5, 5)] * 4
    return GradedMatrix.from_dense(dense, gens, rels, field=f2())


def chain_digraph_matrix() -> GradedMatrix:
    """Three-block start state plus a two-column batch at (1,3).

    Columns 0 and 1 sit at (2,2) and belong to the initial blocks b (the
    free generator at (1,2)), c (the single generator at (1,1)) and d (the
    two-generator join block). Resolving the batch merges c and d with one
    column and leaves b with the other: summand sizes (3, 3) and (1, 1).
    """
    dense = np.array(
        [
            [1, 0, 0, 1],
            [1, 0, 0, 0],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
        ],
        dtype=np.int64,
    )
    gens = [(0, 1), (1, 0), (1, 1), (1, 2)]
    rels = [(2, 2), (2, 2), (1, 3), (1, 3)]
    return GradedMatrix.from_dense(dense, gens, rels, field=f2())


def chain_blocks():
    """The three blocks of chain_digraph_matrix before its batch.

    Returns:
        (b, c, d): b the free generator at (1,2), c a single generator
        truncated at (2,2), d the two-generator join block. The nonzero
        morphism spaces flow b -> c -> d.
    """
    b = GradedMatrix([(1, 2)], [], field=f2())
    c = GradedMatrix([(1, 1)], [(2, 2)], field=f2())
    c.columns[0] = {0: 1}
    d = GradedMatrix([(0, 1), (1, 0)], [(2, 2)], field=f2())
    d.columns[0] = {0: 1, 1: 1}
    return b, c, d


def staircase_pair():
    """Two staircase intervals with a 2-dimensional Hom space.

    Returns:
        (x, y, alpha): hom_space(x, y) has dimension 2 and exactly one
        basis overlap survives localisation at alpha = (6, 2).
    """
    y = GradedMatrix(
        [(1, 3), (2, 0)],
        [(2, 3), (8, 0), (4, 3), (2, 5)],
        field=f2(),
    )
    y.columns[0] = {0: 1, 1: 1}
    y.columns[1] = {1: 1}
    y.columns[2] = {0: 1}
    y.columns[3] = {0: 1}
    x = GradedMatrix(
        [(0, 7), (3, 4), (5, 1)],
        [(3, 7), (5, 4), (9, 1), (7, 6)],
        field=f2(),
    )
    x.columns[0] = {0: 1, 1: 1}
    x.columns[1] = {1: 1, 2: 1}
    x.columns[2] = {2: 1}
    x.columns[3] = {1: 1}
    return x, y, (6, 2)


def clearing_fixture():
    """Two-block state with one pending column whose upper slice is clearable.

    Returns:
        (m, b_rows, b_cols, c_rows, c_cols): columns 0-3 form the two
        blocks, column 4 at (4,3) is pending. Zeroing the upper slice needs
        a row addition from the lower block compensated by two column
        additions from upper-block columns into lower-block columns.
    """
    dense = np.array(
        [
            [1, 0, 0, 0, 1],
            [1, 1, 0, 0, 0],
            [0, 0, 1, 0, 1],
            [0, 0, 1, 1, 0],
        ],
        dtype=np.int64,
    )
    gens = [(0, 1), (1, 0), (1, 2), (3, 1)]
    rels = [(1, 1), (5, 0), (3, 2), (5, 1), (4, 3)]
    m = GradedMatrix.from_dense(dense, gens, rels, field=f2())
    return m, [0, 1], [0, 1], [2, 3], [2, 3]


def obstruction_matrix() -> GradedMatrix:
    """Batch fixture where greedy single-column clearing goes wrong.

    Clearing the first batch column's top entry first leads to a dead end;
    combining the two same-degree columns before clearing splits the
    presentation into summands of sizes (1, 1) and (2, 1).
    """
    dense = np.array([[0, 1], [1, 1], [1, 0]], dtype=np.int64)
    gens = [(0, 1), (1, 1), (2, 0)]
    rels = [(2, 2), (2, 2)]
    return GradedMatrix.from_dense(dense, gens, rels, field=f2())
