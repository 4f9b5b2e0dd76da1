"""Random presentation generators and an admissible-operation mixer.

Three processes: direct sums of random interval modules with known
decomposition, relation subsets over uniformly graded generators (each
generator joins a relation independently with probability p), and the same
process with degrees on a small integer grid so that relation degrees
collide and batches get large. Interval and free-square degrees live on a
10^4-quantized unit square.

The PRNG is xorshift64* so fixtures are reproducible from the seed alone,
independent of the host language's random module.
"""

from __future__ import annotations

import numpy as np

from .decomposer import summand_signature
from .fields import FieldConfig
from .grading import (
    GradedMatrix,
    InadmissibleOperation,
    TransformPair,
    admissible_col_add,
    admissible_row_add,
    minimize,
)

QUANT = 10 ** 4

_MASK = (1 << 64) - 1
_MULT = 2685821657736338717


class Rng:
    """xorshift64* generator; the full stream is a function of the seed."""

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & _MASK

    def random(self) -> float:
        return self.next_u64() / 2.0 ** 64

    def randrange(self, n: int) -> int:
        return self.next_u64() % n

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b] inclusive."""
        return a + self.randrange(b - a + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]


def _quantized_degree(rng: Rng):
    return (rng.randrange(QUANT), rng.randrange(QUANT))


def _interval_block(rng: Rng, field: FieldConfig):
    """One random interval: free with probability 0.1, else an L-shape.

    The L-shape keeps one generator (a, b) and truncates it with a single
    relation strictly above in one coordinate.
    """
    a, b = _quantized_degree(rng)
    if rng.random() < 0.1:
        return GradedMatrix([(a, b)], [], field=field)
    if rng.randrange(2) == 0:
        rel = (rng.randint(a + 1, QUANT), b)
    else:
        rel = (a, rng.randint(b + 1, QUANT))
    m = GradedMatrix([(a, b)], [rel], field=field)
    m.columns[0] = {0: 1}
    return m


def _direct_sum(blocks, field: FieldConfig) -> GradedMatrix:
    rows = [g for blk in blocks for g in blk.row_degrees]
    cols = [r for blk in blocks for r in blk.col_degrees]
    out = GradedMatrix(rows, cols, field=field)
    roff = coff = 0
    for blk in blocks:
        for j, col in enumerate(blk.columns):
            out.columns[coff + j] = {roff + i: v for i, v in col.items()}
        roff += blk.num_rows
        coff += blk.num_cols
    return out


def gen_intervals(n: int, seed: int, field: FieldConfig | None = None,
                  mixed: bool = True):
    """Direct sum of n random intervals with its known decomposition.

    Args:
        n: number of interval summands.
        seed: PRNG seed.
        field: coefficient field (default F_2).
        mixed: scramble the direct sum with random admissible operations.

    Returns:
        (matrix, signatures): the presentation and the sorted list of
        summand signatures recorded before mixing.
    """
    fq = field if field is not None else FieldConfig(2)
    rng = Rng(seed)
    blocks = [_interval_block(rng, fq) for _ in range(n)]
    signatures = sorted(summand_signature(blk) for blk in blocks)
    m = _direct_sum(blocks, fq)
    if mixed:
        m = mix(m, seed=rng.next_u64())
    return m, signatures


def mix(m: GradedMatrix, op_count: int | None = None, seed: int = 0,
        return_transform: bool = False):
    """Scramble a presentation with random admissible row/column additions.

    Proposals (kind, src, dst, coefficient) are drawn uniformly and
    rejected if inadmissible; the attempt budget is capped at 50x op_count
    so fully rigid gradings terminate. The presented module is unchanged up
    to isomorphism.

    Returns:
        the mixed matrix, or (matrix, TransformPair) with
        return_transform=True; the pair maps the input to the output.
    """
    out = m.copy()
    q = out.field.q
    if op_count is None:
        op_count = 10 * (out.num_rows + out.num_cols)
    tp = TransformPair(out.num_rows, out.num_cols, out.field)
    rng = Rng(seed)
    done = 0
    attempts = 0
    cap = 50 * max(op_count, 1)
    while done < op_count and attempts < cap:
        attempts += 1
        use_rows = rng.randrange(2) == 0 and out.num_rows > 1
        if not use_rows and out.num_cols < 2:
            continue
        size = out.num_rows if use_rows else out.num_cols
        src = rng.randrange(size)
        dst = rng.randrange(size)
        if src == dst:
            continue
        coeff = 1 if q == 2 else rng.randint(1, q - 1)
        try:
            if use_rows:
                admissible_row_add(out, src, dst, coeff, tp=tp)
            else:
                admissible_col_add(out, src, dst, coeff, tp=tp)
        except InadmissibleOperation:
            continue
        done += 1
    if return_transform:
        return out, tp
    return out


def _relation_columns(rng: Rng, gens, n: int, p: float, q: int,
                      degree_draw):
    """Draw n relation degrees and p-Bernoulli generator subsets below them.

    The Bernoulli trials over the dominated generators are realized by
    geometric skip lengths, so the work per relation is proportional to the
    number of successes instead of the generator count.
    """
    import math

    gx = np.array([g[0] for g in gens], dtype=np.int64)
    gy = np.array([g[1] for g in gens], dtype=np.int64)
    log1p = math.log1p(-p)
    cols = []
    for _ in range(n):
        for _ in range(10 ** 4):
            alpha = degree_draw()
            below = np.flatnonzero((gx <= alpha[0]) & (gy <= alpha[1]))
            chosen = []
            pos = 0
            while pos < len(below):
                u = rng.random()
                pos += int(math.log1p(-u) / log1p) if u > 0 else 0
                if pos >= len(below):
                    break
                chosen.append(int(below[pos]))
                pos += 1
            if chosen:
                break
        else:
            # fully dominating degree with one forced entry
            alpha = (int(gx.max()), int(gy.max()))
            chosen = [rng.randrange(len(gens))]
        entries = {
            i: (1 if q == 2 else rng.randint(1, q - 1)) for i in chosen
        }
        cols.append((alpha, entries))
    return cols


def _assemble(gens, cols, field: FieldConfig) -> GradedMatrix:
    m = GradedMatrix(list(gens), [a for a, _ in cols], field=field)
    for j, (_, entries) in enumerate(cols):
        m.columns[j] = dict(entries)
    return m


def gen_random_er(m: int, n: int, p: float, seed: int,
                  field: FieldConfig | None = None) -> GradedMatrix:
    """Random presentation with independent p-Bernoulli relation supports.

    m generators at uniform degrees on the quantized unit square; each of
    the n relations sits at a uniform degree and relates each dominated
    generator independently with probability p (degrees with an empty draw
    are resampled). The result is minimized.
    """
    fq = field if field is not None else FieldConfig(2)
    rng = Rng(seed)
    gens = [_quantized_degree(rng) for _ in range(m)]
    cols = _relation_columns(rng, gens, n, p, fq.q,
                             lambda: _quantized_degree(rng))
    out, _ = minimize(_assemble(gens, cols, fq))
    return out


def gen_grid(m: int, n: int, grid_size: int, p: float, seed: int,
             field: FieldConfig | None = None):
    """Random presentation with degrees on an N x N integer grid.

    Small grids force relation-degree collisions and hence large batches.

    Returns:
        (matrix, k_max): the minimized presentation and its largest batch
        size (maximal number of relations sharing a degree).
    """
    fq = field if field is not None else FieldConfig(2)
    rng = Rng(seed)
    gens = [
        (rng.randrange(grid_size), rng.randrange(grid_size)) for _ in range(m)
    ]
    cols = _relation_columns(
        rng, gens, n, p, fq.q,
        lambda: (rng.randrange(grid_size), rng.randrange(grid_size)),
    )
    out, _ = minimize(_assemble(gens, cols, fq))
    counts: dict = {}
    for r in out.col_degrees:
        counts[r] = counts.get(r, 0) + 1
    k_max = max(counts.values()) if counts else 0
    return out, k_max
