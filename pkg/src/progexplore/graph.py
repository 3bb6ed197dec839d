"""Simple undirected graphs: capped BFS, powers, half-squares, parsing, generators.

Vertices are dense 0-based integers.  ``INF`` marks a distance beyond the
BFS cap.  Graphs are immutable after construction and safe to share.
"""
from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .errors import InputError, ParseError

INF = math.inf

GENERATOR_FAMILIES = (
    "grid",
    "path",
    "cycle",
    "star",
    "tree",
    "bounded_degree_random",
    "complete_bipartite",
    "ktt_free_random",
    "power_of",
    "half_square_of_planar_bipartite",
)

# Generated instances up to this size are re-checked against their family
# predicate, so tests that trust the generators stay honest.
_REVALIDATE_LIMIT = 14


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with sorted adjacency lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        if n < 0:
            raise InputError(f"negative vertex count {n}")
        adj = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError(f"duplicate edge ({u},{v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        return Graph(n, tuple(tuple(sorted(a)) for a in adj))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def size(self) -> int:
        """n + m, the total size used in cost accounting."""
        return self.n + self.m

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self):
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)


def bfs_capped(g: Graph, source: int, cap, allowed=None):
    """Distances from ``source``, exact up to ``cap``, INF beyond.

    ``allowed`` optionally restricts the search to an induced subgraph
    (a set of vertex ids containing ``source``).
    """
    if not (0 <= source < g.n):
        raise InputError(f"invalid source vertex {source}")
    if cap < 0:
        raise InputError(f"negative BFS cap {cap}")
    if allowed is not None and source not in allowed:
        raise InputError(f"source {source} not in allowed set")
    dist = [INF] * g.n
    dist[source] = 0
    if cap == 0:
        return dist
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == cap:
            continue
        for w in g.adjacency[u]:
            if dist[w] is INF or dist[w] > du + 1:
                if allowed is not None and w not in allowed:
                    continue
                dist[w] = du + 1
                queue.append(w)
    return dist


def ball(g: Graph, source: int, radius, allowed=None):
    """Vertices within distance ``radius`` of ``source`` (induced arena)."""
    dist = bfs_capped(g, source, radius, allowed=allowed)
    return {v for v in range(g.n) if dist[v] is not INF}


def graph_power(g: Graph, s: int) -> Graph:
    """G^s: edge {u,v} iff 1 <= dist_G(u,v) <= s."""
    if s < 1:
        raise InputError(f"graph power exponent must be >= 1, got {s}")
    if s == 1:
        return g
    edges = []
    for u in range(g.n):
        dist = bfs_capped(g, u, s)
        for v in range(u + 1, g.n):
            if dist[v] is not INF and dist[v] >= 1:
                edges.append((u, v))
    return Graph.from_edges(g.n, edges)


def half_square(h: Graph, bipartition_side) -> Graph:
    """Subgraph of H^2 induced by one side of a bipartition of H.

    Vertex ``i`` of the result corresponds to ``sorted(bipartition_side)[i]``.
    """
    side = sorted(set(bipartition_side))
    side_set = set(side)
    for u in side:
        if not (0 <= u < h.n):
            raise InputError(f"side vertex {u} out of range")
    for u, v in h.edges():
        if (u in side_set) == (v in side_set):
            raise InputError(
                f"edge ({u},{v}) does not cross the given bipartition"
            )
    index = {u: i for i, u in enumerate(side)}
    edges = set()
    for w in range(h.n):
        if w in side_set:
            continue
        nbrs = [x for x in h.adjacency[w] if x in side_set]
        for a, b in combinations(sorted(nbrs), 2):
            edges.add((index[a], index[b]))
    return Graph.from_edges(len(side), sorted(edges))


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: header "n m", then m lines "u v"."""
    lines = text.splitlines()
    header = None
    header_line = 0
    body = []
    for i, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if header is None:
            header = stripped
            header_line = i
        else:
            body.append((i, stripped))
    if header is None:
        raise ParseError("empty graph file")
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("header must be 'n m'", line=header_line)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError("header must contain two integers", line=header_line)
    if n < 0 or m < 0:
        raise ParseError("negative counts in header", line=header_line)
    if len(body) != m:
        raise ParseError(
            f"expected {m} edge lines, found {len(body)}", line=header_line
        )
    edges = []
    seen = set()
    for lineno, stripped in body:
        toks = stripped.split()
        if len(toks) != 2:
            raise ParseError("edge line must be 'u v'", line=lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", line=lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex id out of range in ({u},{v})", line=lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate or reversed edge ({u},{v})", line=lineno)
        seen.add(key)
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS .col: 'p edge n m' header, 'e u v' 1-based edges."""
    n = None
    m = None
    edges = []
    seen = set()
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        toks = stripped.split()
        if toks[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", line=lineno)
            if len(toks) != 4 or toks[1] != "edge":
                raise ParseError("problem line must be 'p edge n m'", line=lineno)
            try:
                n, m = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError("non-integer counts in problem line", line=lineno)
        elif toks[0] == "e":
            if n is None:
                raise ParseError("edge before problem line", line=lineno)
            if len(toks) != 3:
                raise ParseError("edge line must be 'e u v'", line=lineno)
            try:
                u, v = int(toks[1]) - 1, int(toks[2]) - 1
            except ValueError:
                raise ParseError("non-integer edge endpoints", line=lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex id out of range", line=lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u + 1}", line=lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError("duplicate or reversed edge", line=lineno)
            seen.add(key)
            edges.append((u, v))
            count += 1
        else:
            raise ParseError(f"unknown line type '{toks[0]}'", line=lineno)
    if n is None:
        raise ParseError("missing problem line")
    if m is not None and count != m:
        raise ParseError(f"expected {m} edges, found {count}")
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def has_ktt(g: Graph, t: int) -> bool:
    """Exhaustive check for a K_{t,t} subgraph (intended for small graphs)."""
    if t < 1:
        raise InputError(f"t must be >= 1, got {t}")
    nbr_sets = [set(a) for a in g.adjacency]
    for left in combinations(range(g.n), t):
        common = set(range(g.n))
        for u in left:
            common &= nbr_sets[u]
        common -= set(left)
        if len(common) >= t:
            return True
    return False


def _require(params, *keys):
    for key in keys:
        if key not in params:
            raise InputError(f"generator params missing '{key}'")
    return [params[k] for k in keys]


def _gen_grid(params, rng):
    rows, cols = _require(params, "rows", "cols")
    if rows < 1 or cols < 1:
        raise InputError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def _gen_path(params, rng):
    (n,) = _require(params, "n")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _gen_cycle(params, rng):
    (n,) = _require(params, "n")
    if n < 3:
        raise InputError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def _gen_star(params, rng):
    (n,) = _require(params, "n")
    if n < 1:
        raise InputError("star needs n >= 1")
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def _gen_tree(params, rng):
    (n,) = _require(params, "n")
    max_depth = params.get("max_depth")
    if n < 1:
        raise InputError("tree needs n >= 1")
    depth = [0] * n
    edges = []
    for v in range(1, n):
        choices = range(v)
        if max_depth is not None:
            choices = [u for u in choices if depth[u] < max_depth]
            if not choices:
                raise InputError("max_depth too small for requested n")
        parent = rng.choice(list(choices))
        depth[v] = depth[parent] + 1
        edges.append((parent, v))
    return Graph.from_edges(n, edges)


def _gen_bounded_degree_random(params, rng):
    n, max_degree = _require(params, "n", "max_degree")
    target = params.get("m", n)
    if max_degree < 0:
        raise InputError("max_degree must be >= 0")
    candidates = list(combinations(range(n), 2))
    rng.shuffle(candidates)
    deg = [0] * n
    edges = []
    for u, v in candidates:
        if len(edges) >= target:
            break
        if deg[u] < max_degree and deg[v] < max_degree:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph.from_edges(n, edges)


def _gen_complete_bipartite(params, rng):
    a, b = _require(params, "a", "b")
    if a < 0 or b < 0:
        raise InputError("sides must be non-negative")
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return Graph.from_edges(a + b, edges)


def _gen_ktt_free_random(params, rng):
    n, t = _require(params, "n", "t")
    target = params.get("m", 2 * n)
    candidates = list(combinations(range(n), 2))
    rng.shuffle(candidates)
    adj = [[] for _ in range(n)]
    edges = []
    for u, v in candidates:
        if len(edges) >= target:
            break
        adj[u].append(v)
        adj[v].append(u)
        trial = Graph(n, tuple(tuple(sorted(a)) for a in adj))
        if has_ktt(trial, t):
            adj[u].remove(v)
            adj[v].remove(u)
        else:
            edges.append((u, v))
    return Graph.from_edges(n, edges)


def _gen_power_of(params, rng):
    family, inner, s = _require(params, "family", "params", "s")
    base = generate(family, inner, seed=params.get("seed", 0))
    return graph_power(base, s)


def _gen_half_square_of_planar_bipartite(params, rng):
    rows, cols = _require(params, "rows", "cols")
    h = _gen_grid({"rows": rows, "cols": cols}, rng)
    side = [r * cols + c for r in range(rows) for c in range(cols)
            if (r + c) % 2 == 0]
    return half_square(h, side)


_GENERATORS = {
    "grid": _gen_grid,
    "path": _gen_path,
    "cycle": _gen_cycle,
    "star": _gen_star,
    "tree": _gen_tree,
    "bounded_degree_random": _gen_bounded_degree_random,
    "complete_bipartite": _gen_complete_bipartite,
    "ktt_free_random": _gen_ktt_free_random,
    "power_of": _gen_power_of,
    "half_square_of_planar_bipartite": _gen_half_square_of_planar_bipartite,
}


def _validate_family(g: Graph, family: str, params) -> None:
    if family == "grid":
        rows, cols = params["rows"], params["cols"]
        expected = _gen_grid(params, None)
        assert g.adjacency == expected.adjacency
    elif family == "path":
        assert g.m == max(g.n - 1, 0)
        assert all(g.degree(v) <= 2 for v in range(g.n))
    elif family == "cycle":
        assert g.m == g.n and all(g.degree(v) == 2 for v in range(g.n))
    elif family == "star":
        assert g.m == g.n - 1
        assert all(g.degree(v) == 1 for v in range(1, g.n))
    elif family == "tree":
        assert g.m == g.n - 1
        assert all(d is not INF for d in bfs_capped(g, 0, g.n))
    elif family == "bounded_degree_random":
        assert all(g.degree(v) <= params["max_degree"] for v in range(g.n))
    elif family == "complete_bipartite":
        a, b = params["a"], params["b"]
        assert g.m == a * b
    elif family == "ktt_free_random":
        assert not has_ktt(g, params["t"])


def generate(family: str, params, seed: int = 0) -> Graph:
    """Build a graph from a named family; deterministic for a fixed seed."""
    if family not in _GENERATORS:
        raise InputError(f"unknown family '{family}'")
    rng = random.Random(seed)
    g = _GENERATORS[family](dict(params), rng)
    if g.n <= _REVALIDATE_LIMIT:
        _validate_family(g, family, params)
    return g
