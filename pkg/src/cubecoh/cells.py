"""Canonical cells of the complete cubical complex on a finite vertex set.

A d-cell on the vertex set {0, ..., n-1} is a set of 2^d vertices carrying
the graph structure of the d-dimensional cube.  Cells are plain tuples of
vertex ids:

* d=0: ``(i,)``
* d=1: ``(i, j)`` with ``i < j``
* d=2: ``(i, j, k, l)``, the 4-cycle with edges ij, jk, kl, li; canonical
  form is the lexicographically least tuple among the 8 dihedral
  relabelings of the cycle
* d=3: ``(v0, ..., v7)``, assigning vertices to the corners of {0,1}^3
  (corner index c = x + 2y + 4z); canonical form is the lexicographically
  least tuple among the 48 relabelings by cube-graph automorphisms

Every 4-element vertex set carries exactly 3 distinct squares and every
8-element set exactly 840 distinct cubes, so the complete complex on n
vertices has C(n,2) edges, 3*C(n,4) squares and 840*C(n,8) cubes.  Cells
are indexed densely by

    index = (lexicographic rank of the sorted vertex set) * (cells per set)
            + (rank of the relabeling pattern)

which makes cochains storable as flat vectors without hash maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

__all__ = [
    "CELL_SIZE",
    "PATTERNS_PER_SET",
    "CellIndex",
    "ComplexTooLargeError",
    "EmptyComplexError",
    "InvalidCellError",
    "canonical_cube",
    "canonical_square",
    "cell_count",
    "cube_index",
    "cube_patterns",
    "cube_symmetries",
    "distinct_tuple_count",
    "edge_index",
    "enumerate_cells",
    "enumerate_distinct_tuples",
    "face_positions",
    "sample_cells",
    "sample_tuple",
    "sample_tuples",
    "square_index",
    "subset_rank",
    "subset_unrank",
    "walls",
    "wall_index_table",
]


class EmptyComplexError(ValueError):
    """The vertex set is too small to carry a cell of the requested dimension."""


class InvalidCellError(ValueError):
    """A cell labeling repeats a vertex or has the wrong arity."""


class ComplexTooLargeError(ValueError):
    """A dense enumeration would exceed the materialization guard."""


CELL_SIZE = (1, 2, 4, 8)
PATTERNS_PER_SET = (1, 1, 3, 840)

# Dense cell enumerations and wall tables are only materialized up to this
# many cells; everything beyond is handled by sampling.
MAX_DENSE_CELLS = 3_000_000

# Relabeling patterns of a sorted 4-set giving its three squares, in
# lexicographic order.  Pattern p puts sorted vertex s0 diagonally opposite
# s2, s3, s1 respectively.
SQUARE_PATTERNS = np.array([(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)], dtype=np.int64)

# Corner positions of each wall of the 3-cube, in cyclic order.
CUBE_FACE_POSITIONS = np.array(
    [
        (0, 1, 3, 2),
        (4, 5, 7, 6),
        (0, 1, 5, 4),
        (2, 3, 7, 6),
        (0, 2, 6, 4),
        (1, 3, 7, 5),
    ],
    dtype=np.int64,
)

CUBE_EDGE_POSITIONS = np.array(
    [(a, b) for a in range(8) for b in range(a + 1, 8) if bin(a ^ b).count("1") == 1],
    dtype=np.int64,
)

SQUARE_EDGE_POSITIONS = np.array([(0, 1), (1, 2), (2, 3), (3, 0)], dtype=np.int64)


@lru_cache(maxsize=None)
def cube_symmetries() -> np.ndarray:
    """The 48 corner permutations induced by automorphisms of the 3-cube graph.

    Returns an array of shape (48, 8); row s maps corner c to sigma[s, c].
    Generated as signed coordinate permutations: permute the three axes,
    then flip any subset of them.
    """
    perms = set()
    for axes in permutations(range(3)):
        for flips in range(8):
            sigma = []
            for c in range(8):
                image = 0
                for axis in range(3):
                    bit = (c >> axes[axis]) & 1
                    image |= (bit ^ ((flips >> axis) & 1)) << axis
                sigma.append(image)
            perms.add(tuple(sigma))
    assert len(perms) == 48
    return np.array(sorted(perms), dtype=np.int64)


def _canonical_rows(labelings: np.ndarray, syms: np.ndarray, base: int) -> np.ndarray:
    """Lexicographic minimum of each labeling's orbit under position permutations."""
    width = labelings.shape[1]
    images = labelings[:, syms]  # (m, |syms|, width)
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    keys = images @ weights
    pick = np.argmin(keys, axis=1)
    return images[np.arange(len(labelings)), pick]


@lru_cache(maxsize=None)
def cube_patterns() -> np.ndarray:
    """The 840 canonical labelings of the corners by {0..7}, sorted rows."""
    labelings = np.array(list(permutations(range(8))), dtype=np.int64)
    canon = _canonical_rows(labelings, cube_symmetries(), 8)
    pats = np.unique(canon, axis=0)
    assert len(pats) == 840
    return pats


@lru_cache(maxsize=None)
def _cube_pattern_keys() -> np.ndarray:
    weights = 8 ** np.arange(7, -1, -1, dtype=np.int64)
    return cube_patterns() @ weights


def _check_labeling(cell, size):
    cell = tuple(int(v) for v in cell)
    if len(cell) != size or len(set(cell)) != size:
        raise InvalidCellError(f"need {size} distinct vertex ids, got {cell}")
    if min(cell) < 0:
        raise InvalidCellError(f"negative vertex id in {cell}")
    return cell


def canonical_square(i, j, k, l) -> tuple:
    """Least dihedral relabeling of the 4-cycle with edges ij, jk, kl, li."""
    cyc = _check_labeling((i, j, k, l), 4)
    rots = [cyc[r:] + cyc[:r] for r in range(4)]
    return min(rots + [t[::-1] for t in rots])


def canonical_cube(labeling) -> tuple:
    """Least relabeling of a corner assignment under the 48 cube automorphisms."""
    lab = _check_labeling(labeling, 8)
    return min(tuple(lab[c] for c in sigma) for sigma in cube_symmetries().tolist())


def canonicalize(cell) -> tuple:
    """Canonical form of a cell given as a labeling tuple (any dimension)."""
    cell = tuple(int(v) for v in cell)
    if len(cell) == 1:
        return cell
    if len(cell) == 2:
        return _check_labeling((min(cell), max(cell)), 2)
    if len(cell) == 4:
        return canonical_square(*cell)
    if len(cell) == 8:
        return canonical_cube(cell)
    raise InvalidCellError(f"cell arity {len(cell)} is not one of 1, 2, 4, 8")


def walls(cell) -> list:
    """The 2d walls (codimension-1 faces) of a d-cell, d >= 1, canonical forms."""
    cell = tuple(int(v) for v in cell)
    if len(cell) == 2:
        return [(cell[0],), (cell[1],)]
    if len(cell) == 4:
        return [
            (min(cell[a], cell[b]), max(cell[a], cell[b]))
            for a, b in SQUARE_EDGE_POSITIONS.tolist()
        ]
    if len(cell) == 8:
        return [
            canonical_square(*(cell[p] for p in face))
            for face in CUBE_FACE_POSITIONS.tolist()
        ]
    raise InvalidCellError(f"walls are defined for cells of arity 2, 4, 8; got {cell}")


def cell_count(n: int, d: int) -> int:
    """Number of canonical d-cells of the complete complex on n vertices."""
    if d not in (0, 1, 2, 3):
        raise ValueError(f"dimension {d} out of range")
    return math.comb(n, CELL_SIZE[d]) * PATTERNS_PER_SET[d]


@lru_cache(maxsize=None)
def _comb_table(n: int, k: int) -> np.ndarray:
    table = np.zeros((n + 1, k + 1), dtype=np.int64)
    for m in range(n + 1):
        for r in range(k + 1):
            table[m, r] = math.comb(m, r)
    return table


def subset_rank(subsets: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic ranks of sorted k-subsets of {0..n-1}; shape (m, k) -> (m,)."""
    s = np.asarray(subsets, dtype=np.int64)
    k = s.shape[1]
    table = _comb_table(n, k)
    acc = np.zeros(len(s), dtype=np.int64)
    for i in range(k):
        acc += table[n - 1 - s[:, i], k - i]
    return table[n, k] - 1 - acc


def subset_unrank(rank: int, n: int, k: int) -> tuple:
    """Sorted k-subset of {0..n-1} with the given lexicographic rank."""
    if not 0 <= rank < math.comb(n, k):
        raise ValueError(f"rank {rank} out of range for C({n},{k})")
    out = []
    r = rank
    prev = -1
    for i in range(k):
        for v in range(prev + 1, n):
            block = math.comb(n - 1 - v, k - 1 - i)
            if r < block:
                out.append(v)
                prev = v
                break
            r -= block
    return tuple(out)


def edge_index(pairs: np.ndarray, n: int) -> np.ndarray:
    """Cell indices of edges given as (m, 2) vertex pairs in any order."""
    p = np.asarray(pairs, dtype=np.int64)
    return subset_rank(np.sort(p, axis=1), n)


def square_index(tuples: np.ndarray, n: int) -> np.ndarray:
    """Cell indices of squares given as (m, 4) cycle labelings in any order."""
    t = np.asarray(tuples, dtype=np.int64)
    s = np.sort(t, axis=1)
    low = s[:, 0]
    # diagonal partner of the least vertex: the cycle pairs slots {0,2} and {1,3}
    in02 = (t[:, 0] == low[:]) | (t[:, 2] == low[:])
    partner = np.where(
        in02,
        np.where(t[:, 0] == low, t[:, 2], t[:, 0]),
        np.where(t[:, 1] == low, t[:, 3], t[:, 1]),
    )
    pattern = np.where(partner == s[:, 2], 0, np.where(partner == s[:, 3], 1, 2))
    return subset_rank(s, n) * 3 + pattern


def cube_index(labelings: np.ndarray, n: int) -> np.ndarray:
    """Cell indices of cubes given as (m, 8) corner labelings in any order."""
    lab = np.asarray(labelings, dtype=np.int64)
    canon = _canonical_rows(lab, cube_symmetries(), max(n, 8))
    support = np.sort(canon, axis=1)
    order = np.argsort(lab, axis=1)
    # position of each canonical entry within the sorted support
    pattern = np.searchsorted(support[0:1].repeat(0, axis=0), 0) if False else None
    pattern = np.empty_like(canon)
    for col in range(8):
        pattern[:, col] = np.searchsorted_along = 0
    # vectorized per-row searchsorted: support rows are sorted, use broadcasting
    pattern = (canon[:, :, None] > support[:, None, :]).sum(axis=2)
    weights = 8 ** np.arange(7, -1, -1, dtype=np.int64)
    keys = pattern @ weights
    ranks = np.searchsorted(_cube_pattern_keys(), keys)
    return subset_rank(support, n) * 840 + ranks


def enumerate_cells(n: int, d: int) -> np.ndarray:
    """All canonical d-cells in index order, as an (M, 2^d) array of vertex ids."""
    if d not in (0, 1, 2, 3):
        raise ValueError(f"dimension {d} out of range")
    size = CELL_SIZE[d]
    if n < size:
        raise EmptyComplexError(f"no {d}-cells on {n} vertices (need at least {size})")
    count = cell_count(n, d)
    if count > MAX_DENSE_CELLS:
        raise ComplexTooLargeError(
            f"{count} cells at n={n}, d={d} exceeds the dense guard of {MAX_DENSE_CELLS}"
        )
    if d == 0:
        return np.arange(n, dtype=np.int64).reshape(-1, 1)
    subs = np.array(list(combinations(range(n), size)), dtype=np.int64)
    if d == 1:
        return subs
    pats = SQUARE_PATTERNS if d == 2 else cube_patterns()
    return subs[:, pats].reshape(-1, size)


@dataclass(frozen=True)
class CellIndex:
    """Bijection between canonical d-cells on n vertices and [0, M)."""

    n: int
    d: int

    @property
    def count(self) -> int:
        return cell_count(self.n, self.d)

    def index(self, cell) -> int:
        cell = canonicalize(cell)
        if max(cell) >= self.n:
            raise InvalidCellError(f"vertex id out of range in {cell}")
        return int(self.index_array(np.array([cell], dtype=np.int64))[0])

    def index_array(self, cells: np.ndarray) -> np.ndarray:
        cells = np.asarray(cells, dtype=np.int64)
        if self.d == 0:
            return cells.reshape(-1)
        if self.d == 1:
            return edge_index(cells, self.n)
        if self.d == 2:
            return square_index(cells, self.n)
        return cube_index(cells, self.n)

    def cell(self, idx: int) -> tuple:
        if not 0 <= idx < self.count:
            raise ValueError(f"cell index {idx} out of range")
        if self.d == 0:
            return (idx,)
        per = PATTERNS_PER_SET[self.d]
        sub = subset_unrank(idx // per, self.n, CELL_SIZE[self.d])
        if self.d == 1:
            return sub
        pats = SQUARE_PATTERNS if self.d == 2 else cube_patterns()
        return tuple(sub[p] for p in pats[idx % per])


def face_positions(d_high: int, d_low: int) -> np.ndarray:
    """Corner-position table of the d_low-dimensional faces of a d_high-cube."""
    if d_high == 1 and d_low == 0:
        return np.array([(0,), (1,)], dtype=np.int64)
    if d_high == 2 and d_low == 0:
        return np.arange(4, dtype=np.int64).reshape(-1, 1)
    if d_high == 2 and d_low == 1:
        return SQUARE_EDGE_POSITIONS
    if d_high == 3 and d_low == 0:
        return np.arange(8, dtype=np.int64).reshape(-1, 1)
    if d_high == 3 and d_low == 1:
        return CUBE_EDGE_POSITIONS
    if d_high == 3 and d_low == 2:
        return CUBE_FACE_POSITIONS
    raise ValueError(f"no face table for dimensions {d_low} < {d_high}")


@lru_cache(maxsize=None)
def face_index_table(n: int, d_high: int, d_low: int) -> np.ndarray:
    """Cell indices of all d_low-faces of every d_high-cell; shape (M, faces)."""
    cells = enumerate_cells(n, d_high)
    pos = face_positions(d_high, d_low)
    faces = cells[:, pos]  # (M, nfaces, CELL_SIZE[d_low])
    m, nfaces, width = faces.shape
    flat = faces.reshape(-1, width)
    idx = CellIndex(n, d_low).index_array(flat)
    out = idx.reshape(m, nfaces)
    out.setflags(write=False)
    return out


def wall_index_table(n: int, d: int) -> np.ndarray:
    """Indices of the 2d walls of every d-cell, shape (M, 2d)."""
    if d < 1:
        raise ValueError("walls require dimension >= 1")
    return face_index_table(n, d, d - 1)


def distinct_tuple_count(n: int, k: int) -> int:
    """Number of k-tuples with distinct entries from an n-element set."""
    count = 1
    for i in range(k):
        count *= n - i
    return count


def sample_tuples(n: int, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform distinct-entry k-tuples over {0..n-1}; shape (size, k)."""
    if k > n:
        raise ValueError(f"cannot draw {k} distinct entries from {n} vertices")
    out = np.empty((size, k), dtype=np.int64)
    pos = 0
    block = max(1, (1 << 22) // max(n, 1))
    while pos < size:
        m = min(block, size - pos)
        keys = rng.random((m, n))
        out[pos : pos + m] = np.argsort(keys, axis=1)[:, :k]
        pos += m
    return out


def sample_tuple(n: int, k: int, rng: np.random.Generator) -> tuple:
    """One uniform distinct-entry k-tuple; deterministic given the generator."""
    return tuple(int(v) for v in sample_tuples(n, k, 1, rng)[0])


def sample_cells(n: int, d: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform canonical d-cells, as (size, 2^d) labelings.

    Uniformity over canonical cells follows from drawing the vertex set
    uniformly and the relabeling pattern uniformly; all orbits have equal
    size.
    """
    if n < CELL_SIZE[d]:
        raise EmptyComplexError(f"no {d}-cells on {n} vertices")
    if d == 0:
        return rng.integers(0, n, (size, 1)).astype(np.int64)
    t = np.sort(sample_tuples(n, CELL_SIZE[d], size, rng), axis=1)
    if d == 1:
        return t
    pats = SQUARE_PATTERNS if d == 2 else cube_patterns()
    choice = rng.integers(0, len(pats), size)
    return np.take_along_axis(t, pats[choice], axis=1)


def enumerate_distinct_tuples(n: int, k: int, fixed: dict | None = None) -> np.ndarray:
    """All distinct-entry k-tuples, optionally with some slots pinned.

    ``fixed`` maps slot positions to vertex ids; free slots range over the
    remaining vertices.  Rows are emitted in lexicographic order of the
    free slots.
    """
    fixed = dict(fixed or {})
    if len(set(fixed.values())) != len(fixed):
        raise ValueError("fixed slots repeat a vertex")
    free_slots = [s for s in range(k) if s not in fixed]
    allowed = np.setdiff1d(np.arange(n, dtype=np.int64), np.array(list(fixed.values()), dtype=np.int64))
    a = len(allowed)
    r = len(free_slots)
    if r > a:
        raise ValueError("not enough vertices for the free slots")
    rows = np.zeros((1, 0), dtype=np.int64)
    for _ in range(r):
        m = len(rows)
        expanded = np.repeat(rows, a, axis=0)
        newcol = np.tile(np.arange(a, dtype=np.int64), m).reshape(-1, 1)
        rows = np.hstack([expanded, newcol])
        if rows.shape[1] > 1:
            distinct = (rows[:, :-1] != rows[:, -1:]).all(axis=1)
            rows = rows[distinct]
    out = np.empty((len(rows), k), dtype=np.int64)
    for slot, v in fixed.items():
        out[:, slot] = v
    for col, slot in enumerate(free_slots):
        out[:, slot] = allowed[rows[:, col]]
    return out


def sample_distinct_tuples(
    n: int, k: int, size: int, rng: np.random.Generator, fixed: dict | None = None
) -> np.ndarray:
    """Uniform distinct-entry k-tuples with some slots pinned to fixed vertices."""
    fixed = dict(fixed or {})
    if not fixed:
        return sample_tuples(n, k, size, rng)
    free_slots = [s for s in range(k) if s not in fixed]
    allowed = np.setdiff1d(np.arange(n, dtype=np.int64), np.array(list(fixed.values()), dtype=np.int64))
    draw = sample_tuples(len(allowed), len(free_slots), size, rng)
    out = np.empty((size, k), dtype=np.int64)
    for slot, v in fixed.items():
        out[:, slot] = v
    for col, slot in enumerate(free_slots):
        out[:, slot] = allowed[draw[:, col]]
    return out
