"""Explicit bipartite graphs and the small-scale exact machinery built on them.

This module is the correctness oracle for the rest of the package: exact
co-matching / ladder / semi-ladder indices, Helly-property checks with
counterexamples, brute-force coverage, the constructive Ramsey extraction,
and explicit materialization of the candidate/witness graph of a formula.
Everything here is exponential and intended for graphs of desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InputError, ParseError, ResourceBudgetError
from .formulas import DistanceFormula, DistanceMatrix, evaluate
from .graph import Graph, bfs_capped

COMATCHING = "comatching"
LADDER = "ladder"
SEMILADDER = "semiladder"
OBSTRUCTION_KINDS = (COMATCHING, LADDER, SEMILADDER)


@dataclass(frozen=True)
class BipartiteGraph:
    left_size: int
    right_size: int
    left_adj: tuple  # per left vertex, bitmask over right vertices

    @classmethod
    def from_edges(cls, left_size, right_size, edges) -> "BipartiteGraph":
        if left_size < 0 or right_size < 0:
            raise InputError("sizes must be >= 0")
        adj = [0] * left_size
        for l, r in edges:
            if not (0 <= l < left_size and 0 <= r < right_size):
                raise InputError(f"edge ({l},{r}) out of range")
            if adj[l] >> r & 1:
                raise InputError(f"duplicate edge ({l},{r})")
            adj[l] |= 1 << r
        return cls(left_size, right_size, tuple(adj))

    def has_edge(self, l: int, r: int) -> bool:
        return bool(self.left_adj[l] >> r & 1)

    @property
    def m(self) -> int:
        return sum(mask.bit_count() for mask in self.left_adj)

    def edges(self):
        for l, mask in enumerate(self.left_adj):
            while mask:
                low = mask & -mask
                yield (l, low.bit_length() - 1)
                mask ^= low

    def right_adj(self) -> tuple:
        """Per right vertex, bitmask over left vertices."""
        out = [0] * self.right_size
        for l, mask in enumerate(self.left_adj):
            while mask:
                low = mask & -mask
                out[low.bit_length() - 1] |= 1 << l
                mask ^= low
        return tuple(out)


@dataclass(frozen=True)
class Obstruction:
    kind: str
    a_seq: tuple  # left vertices
    b_seq: tuple  # right vertices

    @property
    def order(self) -> int:
        return len(self.a_seq)

    def verify(self, h: BipartiteGraph) -> bool:
        if self.kind not in OBSTRUCTION_KINDS:
            return False
        if len(self.a_seq) != len(self.b_seq):
            return False
        n = len(self.a_seq)
        for i in range(n):
            for j in range(n):
                edge = h.has_edge(self.a_seq[i], self.b_seq[j])
                if self.kind == COMATCHING:
                    if edge != (i != j):
                        return False
                elif self.kind == LADDER:
                    if edge != (i > j):
                        return False
                else:  # semi-ladder: only i > j and the diagonal are pinned
                    if i > j and not edge:
                        return False
                    if i == j and edge:
                        return False
        return True


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def index_of(h: BipartiteGraph, kind: str,
             node_budget: int = 2_000_000) -> tuple:
    """Exact maximum obstruction order plus a witnessing obstruction.

    Exhaustive search over extension states; states are memoized on the
    pools of still-usable vertices, which fully determine the remaining
    depth.  Exceeding the node budget raises, never returns a wrong answer.
    """
    if kind not in OBSTRUCTION_KINDS:
        raise InputError(f"unknown obstruction kind '{kind}'")
    full_l = (1 << h.left_size) - 1
    full_r = (1 << h.right_size) - 1
    radj = h.right_adj()
    visits = [0]

    def spend():
        visits[0] += 1
        if visits[0] > node_budget:
            raise ResourceBudgetError(
                f"obstruction search exceeded {node_budget} states")

    memo = {}

    if kind == SEMILADDER:
        # State: left vertices adjacent to every witness chosen so far.
        # Only the chosen witness matters for the future; the candidate
        # merely needs to exist (it never constrains later steps).
        def best(a_pool):
            hit = memo.get(a_pool)
            if hit is not None:
                return hit
            spend()
            depth, choice = 0, None
            for b in range(h.right_size):
                if a_pool & ~radj[b] & full_l:
                    sub, _ = best(a_pool & radj[b])
                    if sub + 1 > depth:
                        depth, choice = sub + 1, b
            memo[a_pool] = (depth, choice)
            return depth, choice

        order, _ = best(full_l)
        a_seq, b_seq = [], []
        a_pool = full_l
        for _ in range(order):
            _, b = memo[a_pool]
            a = next(a for a in _bits(a_pool & ~radj[b]))
            a_seq.append(a)
            b_seq.append(b)
            a_pool &= radj[b]
        return order, Obstruction(SEMILADDER, tuple(a_seq), tuple(b_seq))

    if kind == LADDER:
        # a_pool: left vertices adjacent to all chosen witnesses;
        # b_pool: right vertices non-adjacent to all chosen candidates.
        def best(a_pool, b_pool):
            key = (a_pool, b_pool)
            hit = memo.get(key)
            if hit is not None:
                return hit
            spend()
            depth, choice = 0, None
            for a in _bits(a_pool):
                for b in _bits(b_pool & ~h.left_adj[a]):
                    sub, _ = best(a_pool & radj[b],
                                  b_pool & ~h.left_adj[a] & full_r)
                    if sub + 1 > depth:
                        depth, choice = sub + 1, (a, b)
            memo[key] = (depth, choice)
            return depth, choice

        order, _ = best(full_l, full_r)
        a_seq, b_seq = [], []
        a_pool, b_pool = full_l, full_r
        for _ in range(order):
            _, (a, b) = memo[(a_pool, b_pool)]
            a_seq.append(a)
            b_seq.append(b)
            a_pool, b_pool = a_pool & radj[b], b_pool & ~h.left_adj[a] & full_r
        return order, Obstruction(LADDER, tuple(a_seq), tuple(b_seq))

    # Co-matching: both pools shrink to common neighborhoods; the pattern is
    # permutation-invariant, so sequential construction loses nothing.
    def best(a_pool, b_pool):
        key = (a_pool, b_pool)
        hit = memo.get(key)
        if hit is not None:
            return hit
        spend()
        depth, choice = 0, None
        for a in _bits(a_pool):
            for b in _bits(b_pool & ~h.left_adj[a]):
                sub, _ = best(a_pool & radj[b], b_pool & h.left_adj[a])
                if sub + 1 > depth:
                    depth, choice = sub + 1, (a, b)
        memo[key] = (depth, choice)
        return depth, choice

    order, _ = best(full_l, full_r)
    a_seq, b_seq = [], []
    a_pool, b_pool = full_l, full_r
    for _ in range(order):
        _, (a, b) = memo[(a_pool, b_pool)]
        a_seq.append(a)
        b_seq.append(b)
        a_pool, b_pool = a_pool & radj[b], b_pool & h.left_adj[a]
    return order, Obstruction(COMATCHING, tuple(a_seq), tuple(b_seq))


# --- Helly-property checks --------------------------------------------------

WEAK = "weak"
FULL = "full"
STRONG = "strong"


def _cover_table(h: BipartiteGraph):
    """cov[B] = bitmask of left vertices adjacent to every right vertex in B.

    cov[empty] = all of L (the empty set is covered iff L is nonempty).
    """
    full_l = (1 << h.left_size) - 1
    radj = h.right_adj()
    cov = [0] * (1 << h.right_size)
    cov[0] = full_l
    for mask in range(1, 1 << h.right_size):
        low = mask & -mask
        cov[mask] = cov[mask ^ low] & radj[low.bit_length() - 1]
    return cov


def _mask_to_set(mask):
    return tuple(_bits(mask))


@dataclass(frozen=True)
class HellyResult:
    holds: bool
    counterexample: tuple | None  # (A as left set, B as right set) on failure


def check_p_helly(h: BipartiteGraph, p: int, variant: str,
                  size_budget: int = 16) -> HellyResult:
    """p-Helly check: an uncovered right set must have an uncovered subset
    of size <= p.  weak = the (L, R) pair only; full = all B subsets of R;
    strong = all A subsets of L too (checked via worst-case A per B).

    Only the right side is enumerated (2^R subsets); the left side lives in
    bitmasks, so it may be large.
    """
    if p < 0:
        raise InputError("p must be >= 0")
    if variant not in (WEAK, FULL, STRONG):
        raise InputError(f"unknown variant '{variant}'")
    if h.right_size > size_budget:
        raise ResourceBudgetError(
            f"helly check limited to {size_budget} right vertices")
    cov = _cover_table(h)
    full_l = (1 << h.left_size) - 1
    full_r = (1 << h.right_size) - 1
    left_all = tuple(range(h.left_size))

    if variant == WEAK:
        if cov[full_r]:
            return HellyResult(True, None)
        if any(cov[m] == 0 and m.bit_count() <= p
               for m in range(1 << h.right_size)):
            return HellyResult(True, None)
        return HellyResult(False, (left_all, _mask_to_set(full_r)))

    if variant == FULL:
        # small_uncov[B]: B contains an uncovered subset of size <= p
        small_uncov = [False] * (1 << h.right_size)
        for mask in range(1 << h.right_size):
            if cov[mask] == 0 and mask.bit_count() <= p:
                small_uncov[mask] = True
                continue
            m = mask
            while m and not small_uncov[mask]:
                low = m & -m
                small_uncov[mask] = small_uncov[mask ^ low]
                m ^= low
        for mask in range(1 << h.right_size):
            if cov[mask] == 0 and not small_uncov[mask]:
                return HellyResult(False, (left_all, _mask_to_set(mask)))
        return HellyResult(True, None)

    # strong: for fixed B the worst A is L minus cov[B]; (A, B) violates iff
    # every subset B' of B with |B'| <= p has cov[B'] strictly larger than
    # cov[B].  eq[B] below is the complement of that condition, computed by
    # peeling one element (sound because cov is antitone under inclusion).
    eq = [False] * (1 << h.right_size)
    for mask in range(1 << h.right_size):
        if mask.bit_count() <= p:
            eq[mask] = True
            continue
        m = mask
        while m and not eq[mask]:
            low = m & -m
            sub = mask ^ low
            if cov[sub] == cov[mask]:
                eq[mask] = eq[sub]
            m ^= low
    for mask in range(1 << h.right_size):
        if not eq[mask]:
            a_set = _mask_to_set(full_l & ~cov[mask])
            return HellyResult(False, (a_set, _mask_to_set(mask)))
    return HellyResult(True, None)


def coverage_bruteforce(h: BipartiteGraph):
    """Lowest-index left vertex adjacent to all of R, else None.

    An empty right side is vacuously covered by any left vertex.
    """
    if h.left_size == 0:
        return None
    full_r = (1 << h.right_size) - 1
    for l in range(h.left_size):
        if h.left_adj[l] == full_r:
            return l
    return None


# --- constructive Ramsey ----------------------------------------------------


def ramsey_bound(c: int, ell: int) -> int:
    if c < 2:
        raise InputError("need at least 2 colors")
    if ell < 1:
        raise InputError("need ell >= 1")
    return c ** (c * ell - 1)


def find_monochromatic(n: int, c: int, coloring, ell: int):
    """Extract an ell-vertex monochromatic set from a c-colored K_n.

    ``coloring(u, v)`` returns the color (0..c-1) of edge {u, v}.  Greedy:
    repeatedly take the lowest remaining vertex and keep its largest color
    class, then apply pigeonhole to the recorded back-colors.  Guaranteed
    for n >= ramsey_bound(c, ell); smaller n is attempted anyway and may
    return None.
    """
    if c < 1 or ell < 1:
        raise InputError("need c >= 1 and ell >= 1")
    if n < 0:
        raise InputError("need n >= 0")
    if ell == 1:
        return (0,) if n >= 1 else None
    alive = list(range(n))
    seq = []  # (vertex, back-color towards everything chosen later)
    while alive:
        v = alive[0]
        rest = alive[1:]
        if not rest:
            seq.append((v, None))
            break
        classes = {}
        for u in rest:
            classes.setdefault(coloring(v, u), []).append(u)
        color = max(sorted(classes), key=lambda col: len(classes[col]))
        seq.append((v, color))
        alive = classes[color]
    for color in range(c):
        picked = [v for v, col in seq if col == color][: ell - 1]
        if len(picked) < ell - 1:
            continue
        last_idx = max(i for i, (v, _) in enumerate(seq) if v == picked[-1])
        if last_idx + 1 >= len(seq):
            continue
        result = tuple(sorted(picked + [seq[last_idx + 1][0]]))
        for i in range(ell):
            for j in range(i + 1, ell):
                if coloring(result[i], result[j]) != color:
                    raise InputError("coloring is not symmetric/consistent")
        return result
    return None


# --- materialization of the candidate/witness graph -------------------------


def materialize(g: Graph, f: DistanceFormula,
                pair_budget: int = 1_000_000) -> BipartiteGraph:
    """Explicit bipartite graph: left = candidate tuples (lexicographic),
    right = witness tuples, edge iff the formula holds on the pair."""
    n = g.n
    pairs = n ** (f.c + f.d)
    if pairs > pair_budget:
        raise ResourceBudgetError(
            f"{pairs} candidate/witness pairs exceed budget {pair_budget}")
    r = f.radius()
    dist = [bfs_capped(g, v, r) for v in range(n)]
    left = list(product(range(n), repeat=f.c))
    right = list(product(range(n), repeat=f.d))
    adj = []
    for a in left:
        mask = 0
        for idx, b in enumerate(right):
            m = DistanceMatrix(r, tuple(
                tuple(dist[ai][bj] for bj in b) for ai in a))
            if evaluate(f, m):
                mask |= 1 << idx
        adj.append(mask)
    return BipartiteGraph(len(left), len(right), tuple(adj))


def tuple_index(n: int, vertex_tuple) -> int:
    """Lexicographic rank of a vertex tuple among all tuples of its length."""
    idx = 0
    for v in vertex_tuple:
        if not (0 <= v < n):
            raise InputError(f"invalid vertex {v}")
        idx = idx * n + v
    return idx


# --- serialization ----------------------------------------------------------


def serialize_bipartite(h: BipartiteGraph) -> str:
    lines = [f"{h.left_size} {h.right_size} {h.m}"]
    lines.extend(f"{l} {r}" for l, r in h.edges())
    return "\n".join(lines) + "\n"


def parse_bipartite(text: str) -> BipartiteGraph:
    lines = text.splitlines()
    header_idx = None
    for i, line in enumerate(lines):
        if line.strip():
            header_idx = i
            break
    if header_idx is None:
        raise ParseError("empty input", line=1)
    parts = lines[header_idx].split()
    if len(parts) != 3:
        raise ParseError("header must be 'L R m'", line=header_idx + 1)
    try:
        left_size, right_size, m = map(int, parts)
    except ValueError:
        raise ParseError("header must be three integers",
                         line=header_idx + 1) from None
    edges = []
    for i in range(header_idx + 1, len(lines)):
        line = lines[i].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("edge line must be 'l r'", line=i + 1)
        try:
            l, r = map(int, parts)
        except ValueError:
            raise ParseError("edge endpoints must be integers",
                             line=i + 1) from None
        if not (0 <= l < left_size and 0 <= r < right_size):
            raise ParseError(f"edge ({l},{r}) out of range", line=i + 1)
        if (l, r) in edges:
            raise ParseError(f"duplicate edge ({l},{r})", line=i + 1)
        edges.append((l, r))
    if len(edges) != m:
        raise ParseError(f"expected {m} edges, found {len(edges)}",
                         line=header_idx + 1)
    return BipartiteGraph.from_edges(left_size, right_size, edges)
