"""Graphs derived from the 2-locations of bounded trifferent codes.

A 2-bounded code induces a simple graph on coordinates (one edge per word's
pair of twos); a 3-bounded code induces a bipartite graph between coordinates
and coordinate pairs.  Trifference caps the forbidden complete bipartite
subgraphs these can contain, which is what the bounds module cashes in.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from random import Random

from .core import Code

__all__ = [
    "DerivedGraph",
    "KstWitness",
    "BipartitionStats",
    "simple_graph",
    "bipartite_graph",
    "build_graph_r2",
    "build_graph_r3",
    "contains_kst",
    "witness_is_valid",
    "random_bipartition_check",
    "edge_list_text",
    "graph_summary",
]

SIMPLE = "simple"
BIPARTITE = "bipartite"


@dataclass(frozen=True, eq=False)
class DerivedGraph:
    """Vertices 0..n-1 on the left; edges annotated with originating codeword indices.

    Simple graphs key edges as (i, j) with i < j.  Bipartite graphs key them
    as (i, (j, k)) with j < k; right vertices exist only as far as edges
    mention them.  Synthetic graphs may carry empty annotation tuples.
    """

    kind: str
    n: int
    edges: dict

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def right_vertices(self) -> list:
        if self.kind != BIPARTITE:
            raise ValueError("only bipartite graphs have a right side")
        return sorted({right for (_, right) in self.edges})


def simple_graph(n: int, edges) -> DerivedGraph:
    """Build a simple graph from (i, j) pairs; origins default to empty."""
    table: dict = {}
    items = edges.items() if isinstance(edges, dict) else ((e, ()) for e in edges)
    for (i, j), origins in items:
        if i == j:
            raise ValueError("loops are not allowed")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range")
        key = (i, j) if i < j else (j, i)
        table[key] = table.get(key, ()) + tuple(origins)
    return DerivedGraph(kind=SIMPLE, n=n, edges=table)


def bipartite_graph(n: int, edges) -> DerivedGraph:
    """Build a bipartite graph from (i, (j, k)) pairs between [n] and 2-subsets of [n]."""
    table: dict = {}
    items = edges.items() if isinstance(edges, dict) else ((e, ()) for e in edges)
    for (i, right), origins in items:
        j, k = right
        if j == k:
            raise ValueError("right vertices are 2-subsets, got a repeated index")
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise ValueError(f"edge ({i}, {right}) out of range")
        key = (i, (j, k) if j < k else (k, j))
        table[key] = table.get(key, ()) + tuple(origins)
    return DerivedGraph(kind=BIPARTITE, n=n, edges=table)


def build_graph_r2(code: Code) -> DerivedGraph:
    """One edge per codeword, joining its two 2-locations.

    Two codewords may share an edge; a third sharing it would break
    trifference, so annotation multiplicity stays at most 2 on verified codes.
    """
    if code.r_bound != 2:
        raise ValueError("build_graph_r2 requires an exactly 2-bounded code")
    table: dict = {}
    for idx, w in enumerate(code):
        i, j = w.two_locations()
        table[(i, j)] = table.get((i, j), ()) + (idx,)
    return DerivedGraph(kind=SIMPLE, n=code.n, edges=table)


def build_graph_r3(code: Code) -> DerivedGraph:
    """One edge per codeword: smallest 2-location against the pair of the other two."""
    if code.r_bound != 3:
        raise ValueError("build_graph_r3 requires an exactly 3-bounded code")
    table: dict = {}
    for idx, w in enumerate(code):
        i, j, k = w.two_locations()
        key = (i, (j, k))
        table[key] = table.get(key, ()) + (idx,)
    return DerivedGraph(kind=BIPARTITE, n=code.n, edges=table)


@dataclass(frozen=True)
class KstWitness:
    """A complete bipartite K_{s,t}: every left vertex adjacent to every right vertex."""

    left: tuple
    right: tuple


def _neighbor_masks_simple(g: DerivedGraph) -> list[int]:
    nbr = [0] * g.n
    for (i, j) in g.edges:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    return nbr


def _neighbor_masks_bipartite(g: DerivedGraph):
    rights = g.right_vertices()
    index = {right: pos for pos, right in enumerate(rights)}
    nbr = [0] * g.n
    for (i, right) in g.edges:
        nbr[i] |= 1 << index[right]
    return nbr, rights


def _mask_bits(mask: int):
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


def contains_kst(g: DerivedGraph, s: int, t: int) -> KstWitness | None:
    """Search for K_{s,t}; left sets are enumerated lexicographically.

    For each s-subset of left vertices the common neighborhood is a bitset
    intersection; the witness keeps the first t common neighbors.  Simple
    graphs treat 'left' as any s vertices and 'right' as t common neighbors,
    which catches the subgraph in either orientation.
    """
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    if g.kind == SIMPLE:
        nbr = _neighbor_masks_simple(g)
        candidates = [v for v in range(g.n) if nbr[v].bit_count() >= t]
        for left in itertools.combinations(candidates, s):
            common = nbr[left[0]]
            for v in left[1:]:
                common &= nbr[v]
                if common.bit_count() < t:
                    break
            else:
                if common.bit_count() >= t:
                    right = tuple(itertools.islice(_mask_bits(common), t))
                    witness = KstWitness(left=left, right=right)
                    if not witness_is_valid(g, witness):
                        raise RuntimeError("detector produced an invalid witness")
                    return witness
        return None
    nbr, rights = _neighbor_masks_bipartite(g)
    if len(rights) < t:
        return None  # not enough right vertices for any K_{s,t}
    candidates = [v for v in range(g.n) if nbr[v].bit_count() >= t]
    for left in itertools.combinations(candidates, s):
        common = nbr[left[0]]
        for v in left[1:]:
            common &= nbr[v]
            if common.bit_count() < t:
                break
        else:
            if common.bit_count() >= t:
                right = tuple(
                    rights[pos] for pos in itertools.islice(_mask_bits(common), t)
                )
                witness = KstWitness(left=left, right=right)
                if not witness_is_valid(g, witness):
                    raise RuntimeError("detector produced an invalid witness")
                return witness
    return None


def witness_is_valid(g: DerivedGraph, witness: KstWitness) -> bool:
    """Re-check every claimed edge directly against the edge table."""
    if g.kind == SIMPLE:
        for u in witness.left:
            for v in witness.right:
                key = (u, v) if u < v else (v, u)
                if key not in g.edges:
                    return False
        return True
    for u in witness.left:
        for right in witness.right:
            if (u, right) not in g.edges:
                return False
    return True


@dataclass(frozen=True)
class BipartitionStats:
    """Edge-crossing fractions of random (or all) balanced vertex bipartitions."""

    n: int
    edge_count: int
    trials: int
    seed: int | None
    exhaustive: bool
    mean_crossing_fraction: float | None
    expected_edge_crossing: float | None

    @property
    def applicable(self) -> bool:
        return self.mean_crossing_fraction is not None


def random_bipartition_check(
    g: DerivedGraph,
    seed: int | None = None,
    trials: int = 1000,
    exhaustive: bool = False,
) -> BipartitionStats:
    """Average fraction of edges crossing a balanced random bipartition.

    A uniformly random pair of distinct vertices is split with probability
    2*ceil(n/2)*floor(n/2) / (n*(n-1)), slightly above 1/2, and the sampled
    means sit near that.  Graphs without edges yield a not-applicable result.
    """
    if g.kind != SIMPLE:
        raise ValueError("bipartition check applies to simple graphs only")
    n = g.n
    edges = list(g.edges)
    if not edges or n < 2:
        return BipartitionStats(
            n=n,
            edge_count=len(edges),
            trials=0,
            seed=seed,
            exhaustive=exhaustive,
            mean_crossing_fraction=None,
            expected_edge_crossing=None,
        )
    half = math.ceil(n / 2)
    expected = 2 * half * (n - half) / (n * (n - 1))

    def crossing_fraction(side_a: set) -> float:
        crossing = sum(1 for (u, v) in edges if (u in side_a) != (v in side_a))
        return crossing / len(edges)

    if exhaustive:
        fractions = [
            crossing_fraction(set(a)) for a in itertools.combinations(range(n), half)
        ]
    else:
        if seed is None:
            raise ValueError("sampling mode requires an explicit seed")
        if trials < 1:
            raise ValueError("trials must be positive")
        rng = Random(seed)
        fractions = [
            crossing_fraction(set(rng.sample(range(n), half))) for _ in range(trials)
        ]
    return BipartitionStats(
        n=n,
        edge_count=len(edges),
        trials=len(fractions),
        seed=None if exhaustive else seed,
        exhaustive=exhaustive,
        mean_crossing_fraction=sum(fractions) / len(fractions),
        expected_edge_crossing=expected,
    )


def edge_list_text(g: DerivedGraph) -> str:
    """One edge per line: 'u v' for simple graphs, 'u j,k' for bipartite ones."""
    lines = []
    for key in sorted(g.edges):
        if g.kind == SIMPLE:
            u, v = key
            lines.append(f"{u} {v}")
        else:
            u, (j, k) = key
            lines.append(f"{u} {j},{k}")
    return "\n".join(lines) + ("\n" if lines else "")


def graph_summary(g: DerivedGraph, checks=None) -> dict:
    """JSON-ready counts, annotation histogram, and K_{s,t}-freeness results."""
    if checks is None:
        checks = [(3, 9)] if g.kind == SIMPLE else [(5, 2**21)]
    histogram: dict = {}
    for origins in g.edges.values():
        histogram[len(origins)] = histogram.get(len(origins), 0) + 1
    freeness = []
    for s, t in checks:
        witness = contains_kst(g, s, t)
        freeness.append({"s": s, "t": t, "free": witness is None})
    return {
        "schema": 1,
        "kind": g.kind,
        "n_left": g.n,
        "n_right": len(g.right_vertices()) if g.kind == BIPARTITE else None,
        "edge_count": g.edge_count,
        "multiplicity_histogram": {str(k): v for k, v in sorted(histogram.items())},
        "freeness": freeness,
    }
