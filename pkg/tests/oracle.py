"""Independent brute-force summand counter for tiny F_2 presentations.

For a fixed degree template (generator and relation degrees) every graded
0/1 matrix is a bitmask over the admissible entry positions. Admissible
elementary row and column additions act on these bitmasks and generate
exactly the invertible graded transformation pairs over F_2, so the orbit
of a mask is the set of presentations isomorphic to it. The number of
indecomposable summands of a minimal presentation is the maximum, over the
orbit, of the number of connected components of the row/column incidence
graph; a presentation is minimal iff no orbit member has a zero column
(templates are chosen so no generator degree equals a relation degree).
"""

from __future__ import annotations

from mpdec.grading import GradedMatrix, leq


class TemplateOrbits:
    """All orbits of graded 0/1 matrices for one degree template over F_2."""

    def __init__(self, row_degrees, col_degrees):
        self.rows = list(row_degrees)
        self.cols = list(col_degrees)
        self.positions = [
            (i, j)
            for i in range(len(self.rows))
            for j in range(len(self.cols))
            if leq(self.rows[i], self.cols[j])
        ]
        self.bit = {p: n for n, p in enumerate(self.positions)}
        self.ops = self._elementary_ops()
        # orbit id per mask, and per-orbit (max_components, has_zero_col)
        self.orbit_of = {}
        self.orbit_info = []
        for seed in range(1 << len(self.positions)):
            if seed in self.orbit_of:
                continue
            self._explore(seed)

    def _elementary_ops(self):
        """Bit-pair lists: applying an op toggles dst bits under set src bits."""
        ops = []
        nr, nc = len(self.rows), len(self.cols)
        for src in range(nr):
            for dst in range(nr):
                if src != dst and leq(self.rows[dst], self.rows[src]):
                    pairs = [
                        (self.bit[(src, j)], self.bit[(dst, j)])
                        for j in range(nc)
                        if (src, j) in self.bit and (dst, j) in self.bit
                    ]
                    if pairs:
                        ops.append(pairs)
        for src in range(nc):
            for dst in range(nc):
                if src != dst and leq(self.cols[src], self.cols[dst]):
                    pairs = [
                        (self.bit[(i, src)], self.bit[(i, dst)])
                        for i in range(nr)
                        if (i, src) in self.bit and (i, dst) in self.bit
                    ]
                    if pairs:
                        ops.append(pairs)
        return ops

    def _apply(self, mask: int, pairs) -> int:
        out = mask
        for sb, db in pairs:
            if mask >> sb & 1:
                out ^= 1 << db
        return out

    def _components(self, mask: int) -> int:
        """Connected components of the incidence graph, isolated rows included."""
        nr, nc = len(self.rows), len(self.cols)
        parent = list(range(nr + nc))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for n, (i, j) in enumerate(self.positions):
            if mask >> n & 1:
                ri, cj = find(i), find(nr + j)
                if ri != cj:
                    parent[ri] = cj
        return len({find(v) for v in range(nr + nc)})

    def _has_zero_col(self, mask: int) -> bool:
        for j in range(len(self.cols)):
            if not any(
                mask >> self.bit[(i, j)] & 1
                for i in range(len(self.rows))
                if (i, j) in self.bit
            ):
                return True
        return False

    def _explore(self, seed: int):
        oid = len(self.orbit_info)
        stack = [seed]
        self.orbit_of[seed] = oid
        best = 0
        zero_col = False
        while stack:
            cur = stack.pop()
            best = max(best, self._components(cur))
            zero_col = zero_col or self._has_zero_col(cur)
            for pairs in self.ops:
                nxt = self._apply(cur, pairs)
                if nxt not in self.orbit_of:
                    self.orbit_of[nxt] = oid
                    stack.append(nxt)
        self.orbit_info.append((best, zero_col))

    def minimal_masks(self):
        """All masks whose orbit never shows a zero column."""
        return [
            m
            for m, oid in sorted(self.orbit_of.items())
            if not self.orbit_info[oid][1]
        ]

    def num_summands(self, mask: int) -> int:
        return self.orbit_info[self.orbit_of[mask]][0]

    def matrix(self, mask: int) -> GradedMatrix:
        m = GradedMatrix(list(self.rows), list(self.cols))
        for n, (i, j) in enumerate(self.positions):
            if mask >> n & 1:
                m.columns[j][i] = 1
        return m


# Degree templates: no generator degree equals a relation degree, covering
# full batches of same-degree relations, incomparable generators, chains,
# and mixed batch sizes.
TEMPLATES = [
    # four incomparable generators, one batch of three relations
    ([(0, 3), (1, 2), (2, 1), (3, 0)], [(3, 3), (3, 3), (3, 3)]),
    # three incomparable generators, one batch of two
    ([(0, 2), (1, 1), (2, 0)], [(2, 2), (2, 2)]),
    # greedy-clearing counterexample shape: one comparable generator pair
    ([(0, 1), (1, 1), (2, 0)], [(2, 2), (2, 2)]),
    # generator chain lattice, distinct relation degrees
    ([(0, 0), (1, 0), (0, 1), (1, 1)], [(2, 1), (1, 2), (2, 2)]),
    # mixed: batch of two plus one later relation
    ([(0, 1), (1, 0), (1, 1)], [(2, 2), (2, 2), (3, 3)]),
    # fully comparable generators, three distinct relation degrees
    ([(0, 0), (0, 1), (1, 0), (1, 1)], [(2, 2), (3, 2), (2, 3)]),
]
