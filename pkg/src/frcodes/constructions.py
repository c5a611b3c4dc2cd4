"""FR code constructions: complete graphs, regular graphs, Steiner systems, the 3x3 grid."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .designs import SteinerSystem, validate_steiner
from .errors import InvalidDesignError, ParameterError
from .frcore import FrCode

DEFAULT_MAX_RESTARTS = 10**4
_MAX_ROUNDS = 64


@dataclass(frozen=True)
class RegularGraph:
    """Simple d-regular graph on vertices 1..n; edge j (1-based) is ``edges[j-1]``."""

    n: int
    d: int
    edges: tuple[tuple[int, int], ...]

    def is_valid(self) -> bool:
        degree = [0] * (self.n + 1)
        seen = set()
        for u, w in self.edges:
            if u == w or (u, w) in seen or not (1 <= u <= self.n and 1 <= w <= self.n):
                return False
            seen.add((u, w))
            degree[u] += 1
            degree[w] += 1
        return all(deg == self.d for deg in degree[1:])


def _graph_code(graph: RegularGraph) -> FrCode:
    incident: list[list[int]] = [[] for _ in range(graph.n + 1)]
    for j, (u, w) in enumerate(graph.edges, start=1):
        incident[u].append(j)
        incident[w].append(j)
    return FrCode(
        n=graph.n,
        d=graph.d,
        rho=2,
        theta=len(graph.edges),
        node_sets=tuple(tuple(s) for s in incident[1:]),
    )


def _lex_edges(pairs) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((min(u, w), max(u, w)) for u, w in pairs))


def complete_graph_code(n: int) -> FrCode:
    """Node i stores the (lexicographically indexed) edges of K_n at vertex i."""
    if n < 3:
        raise ParameterError(f"complete graph code needs n >= 3, got {n}")
    graph = RegularGraph(n, n - 1, tuple(combinations(range(1, n + 1), 2)))
    return _graph_code(graph)


def circulant_graph(n: int, d: int) -> RegularGraph:
    """Vertex i joined to i +- 1..floor(d/2), plus the antipode when d is odd."""
    _check_regular_params(n, d)
    offsets = list(range(1, d // 2 + 1)) + ([n // 2] if d % 2 else [])
    pairs = {(i + 1, (i + off) % n + 1) for i in range(n) for off in offsets}
    return RegularGraph(n, d, tuple(sorted(set(_lex_edges(pairs)))))


def random_regular_graph(n: int, d: int, rng: random.Random, max_restarts: int = DEFAULT_MAX_RESTARTS) -> RegularGraph:
    """Uniform-ish random d-regular graph from the pairing model.

    Stubs are shuffled and paired; pairs that would form a loop or a parallel
    edge are rejected and their stubs re-paired in the next round. A pairing
    that gets stuck is restarted from scratch. For d above n/2
    the complement of a random (n-1-d)-regular graph is returned instead,
    which keeps restarts rare.
    """
    _check_regular_params(n, d)
    if d == n - 1:
        return RegularGraph(n, d, tuple(combinations(range(1, n + 1), 2)))
    if d > (n - 1) // 2:
        sparse = random_regular_graph(n, n - 1 - d, rng, max_restarts)
        taken = set(sparse.edges)
        return RegularGraph(n, d, tuple(e for e in combinations(range(1, n + 1), 2) if e not in taken))
    if d == 0:
        return RegularGraph(n, 0, ())
    for _ in range(max_restarts):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            return RegularGraph(n, d, _lex_edges(edges))
    raise ParameterError(f"pairing model failed {max_restarts} times for n={n}, d={d}")


def _try_pairing(n: int, d: int, rng: random.Random) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = [v for v in range(1, n + 1) for _ in range(d)]
    for _ in range(_MAX_ROUNDS):
        if not stubs:
            return edges
        remaining = {}
        rng.shuffle(stubs)
        it = iter(stubs)
        for u, w in zip(it, it):
            if u > w:
                u, w = w, u
            if u != w and (u, w) not in edges:
                edges.add((u, w))
            else:
                remaining[u] = remaining.get(u, 0) + 1
                remaining[w] = remaining.get(w, 0) + 1
        if not remaining:
            return edges
        if not _has_suitable_pair(remaining, edges):
            return None
        stubs = [v for v, c in remaining.items() for _ in range(c)]
    return None


def _has_suitable_pair(remaining: dict[int, int], edges: set[tuple[int, int]]) -> bool:
    nodes = sorted(remaining)
    for u, w in combinations(nodes, 2):
        if (u, w) not in edges:
            return True
    return False


def _check_regular_params(n: int, d: int) -> None:
    if n < 2 or d < 1:
        raise ParameterError(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if d >= n:
        raise ParameterError(f"d >= n: d={d}, n={n}")
    if (n * d) % 2:
        raise ParameterError(f"nd odd: n={n}, d={d}")


def regular_graph_code(n: int, d: int, seed: int | None = None) -> FrCode:
    """FR code with rho=2 from a d-regular graph on n vertices.

    Without a seed the graph is the circulant one; with a seed it is drawn
    from the pairing model using a private ``random.Random(seed)``.
    """
    if seed is None:
        graph = circulant_graph(n, d)
    else:
        graph = random_regular_graph(n, d, random.Random(seed))
    return _graph_code(graph)


def _require_valid(system: SteinerSystem) -> None:
    report = validate_steiner(system)
    if not report.ok:
        raise InvalidDesignError("; ".join(v.message for v in report.violations[:5]))


def direct_code(system: SteinerSystem) -> FrCode:
    """Blocks become node sets: n=b, d=alpha, rho=r, theta=v."""
    _require_valid(system)
    return FrCode(n=system.b, d=system.alpha, rho=system.r, theta=system.v, node_sets=system.blocks)


def transpose_code(system: SteinerSystem) -> FrCode:
    """Node i stores the indices of the blocks through point i: n=v, d=r, rho=alpha, theta=b."""
    _require_valid(system)
    incident: list[list[int]] = [[] for _ in range(system.v + 1)]
    for j, block in enumerate(system.blocks, start=1):
        for p in block:
            incident[p].append(j)
    return FrCode(
        n=system.v,
        d=system.r,
        rho=system.alpha,
        theta=system.b,
        node_sets=tuple(tuple(s) for s in incident[1:]),
    )


def grid_code() -> FrCode:
    """Rows and columns of a 3x3 grid of packets; rate 7 at k=3."""
    lines = ((1, 2, 3), (4, 5, 6), (7, 8, 9), (1, 4, 7), (2, 5, 8), (3, 6, 9))
    return FrCode(n=6, d=3, rho=2, theta=9, node_sets=lines)
