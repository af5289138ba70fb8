"""Shared fixtures-in-spirit: brute-force oracles and tiny builders.

Everything here is deliberately naive. The oracles recompute what the
production code computes, using a visibly different algorithm, so the
two can be compared in tests.
"""

from __future__ import annotations

import functools
import math

import numpy as np

import terrapath as tp

GOLDEN_TERRAIN_PARAMS = tp.TerrainParams(
    base_rci=80.0, valley_depth=70.0, valley_count=3, smoothness=6.0
)


@functools.lru_cache(maxsize=1)
def golden_terrain() -> tp.TerrainGrid:
    return tp.generate_synthetic_terrain(0, 100, 100, 100.0, GOLDEN_TERRAIN_PARAMS)


def golden_terrain_spec() -> tp.SyntheticTerrainSpec:
    return tp.SyntheticTerrainSpec(0, 100, 100, 100.0, GOLDEN_TERRAIN_PARAMS)


def make_grid(n_rows: int, n_cols: int, nodata: np.ndarray | None = None,
              cell_size: float = 100.0, rci_value: float = 100.0,
              rci: np.ndarray | None = None) -> tp.TerrainGrid:
    if rci is None:
        rci = np.full((n_rows, n_cols), rci_value, dtype=np.float64)
    if nodata is None:
        nodata = np.zeros((n_rows, n_cols), dtype=bool)
    return tp.TerrainGrid(
        n_rows=n_rows,
        n_cols=n_cols,
        cell_size=cell_size,
        origin=(0.0, 0.0),
        rci=rci,
        nodata_mask=nodata,
    )


def make_cost_field(total: np.ndarray, mu: float = 0.1) -> tp.CostField:
    """Wrap an arbitrary positive cell-cost array as a CostField.

    Component fields are filled so that soil + history + enemy + mu
    still equals total; only tests that care purely about routing use
    this.
    """
    total = np.asarray(total, dtype=np.float64)
    zeros = np.zeros_like(total)
    inf = np.full_like(total, np.inf)
    return tp.CostField(
        soil=total - mu,
        history=zeros,
        enemy=zeros,
        floor_cost=mu,
        total=total.copy(),
        history_distance=inf,
        enemy_distance=inf,
    )


def brute_distance(n_rows: int, n_cols: int, sources) -> np.ndarray:
    """O(cells * sources) reference for distance_to_nearest."""
    sources = list(sources)
    out = np.full((n_rows, n_cols), np.inf)
    for r in range(n_rows):
        for c in range(n_cols):
            for sr, sc in sources:
                d2 = (r - sr) * (r - sr) + (c - sc) * (c - sc)
                d = np.sqrt(np.float64(d2))
                if d < out[r, c]:
                    out[r, c] = d
    return out


def enumerate_min_cost(total: np.ndarray, passable: np.ndarray,
                       start: tuple[int, int], end: tuple[int, int]) -> float:
    """Exhaustive minimum over all simple start-to-end paths.

    Depth-first with branch-and-bound. A partial path is abandoned
    when its cost plus an admissible remaining-cost bound (remaining
    Chebyshev steps times the cheapest passable cell) reaches the best
    known total; the bound never overestimates, so no optimal path is
    ever cut. Charged cells are all but the first, matching the
    entering-node convention. Returns +inf if no path.
    """
    n_rows, n_cols = total.shape
    if not (passable[start] and passable[end]):
        return math.inf
    floor = float(total[passable].min())
    end_r, end_c = end

    # Plain-Python mirrors of the arrays; the DFS below touches them
    # millions of times and numpy scalar indexing would dominate.
    cost = [float(v) for v in total.ravel()]
    bound = [
        max(abs(r - end_r), abs(c - end_c)) * floor
        for r in range(n_rows) for c in range(n_cols)
    ]
    adjacency: list[list[int]] = []
    for r in range(n_rows):
        for c in range(n_cols):
            nbrs = []
            for dr, dc in tp.NEIGHBOR_OFFSETS:
                nr, nc = r + dr, c + dc
                if 0 <= nr < n_rows and 0 <= nc < n_cols and passable[nr, nc]:
                    nbrs.append(nr * n_cols + nc)
            adjacency.append(nbrs)

    end_id = end_r * n_cols + end_c
    on_path = [False] * (n_rows * n_cols)
    best = [math.inf]

    def extend(node, acc):
        if node == end_id:
            if acc < best[0]:
                best[0] = acc
            return
        on_path[node] = True
        moves = []
        for nxt_node in adjacency[node]:
            if on_path[nxt_node]:
                continue
            nxt = acc + cost[nxt_node]
            # Completing the path is free to evaluate and seeds the
            # incumbent as early as possible; if the end cell merely
            # sorted with the rest, an expensive end cell would sort
            # last and nothing would prune until its siblings' whole
            # subtrees were exhausted.
            if nxt_node == end_id:
                extend(nxt_node, nxt)
                continue
            guess = nxt + bound[nxt_node]
            if guess < best[0]:
                moves.append((guess, nxt, nxt_node))
        # Promising moves first, so a near-optimal incumbent appears
        # early and the bound starts cutting.
        moves.sort()
        for guess, nxt, nxt_node in moves:
            if guess >= best[0]:
                continue
            extend(nxt_node, nxt)
        on_path[node] = False

    extend(start[0] * n_cols + start[1], 0.0)
    return best[0]


def random_problem(rng: np.random.Generator, max_dim: int = 20,
                   allow_nodata: bool = True):
    """A random grid, cost field, and endpoint pair for oracle duels."""
    n_rows = int(rng.integers(2, max_dim + 1))
    n_cols = int(rng.integers(2, max_dim + 1))
    mu = 0.1
    base = rng.uniform(mu, 40.0, size=(n_rows, n_cols))
    spikes = rng.random((n_rows, n_cols)) < 0.15
    base = np.where(spikes, base * rng.uniform(5, 50), base)

    nodata = np.zeros((n_rows, n_cols), dtype=bool)
    if allow_nodata and rng.random() < 0.5:
        nodata = rng.random((n_rows, n_cols)) < 0.12

    open_cells = np.argwhere(~nodata)
    picks = rng.choice(len(open_cells), size=2, replace=False)
    start = tuple(int(v) for v in open_cells[picks[0]])
    end = tuple(int(v) for v in open_cells[picks[1]])

    grid = make_grid(n_rows, n_cols, nodata=nodata)
    field = make_cost_field(base, mu=mu)
    return grid, field, start, end


def resum_route(total: np.ndarray, cells) -> float:
    """Right-fold recomputation of a route's objective.

    Accumulates from the end backwards, one cell cost at a time, which
    is the same association order the solver's labels use.
    """
    acc = 0.0
    for cell in reversed(list(cells)[1:]):
        acc = float(total[cell[0], cell[1]]) + acc
    return acc
