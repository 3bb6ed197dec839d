"""Progressive solvers, the coverage core, the localization game, and the
distance-r independent set pipeline, plus brute-force reference solvers.

All tie-breaking is lowest-id / lexicographic-first so that transcripts are
reproducible run to run.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import (ContractViolationError, InputError,
                     InternalInvariantError, ResourceBudgetError,
                     SplitterBudgetError)
from .graph import Graph, INF, ball, bfs_capped
from .oracles import (ImplicitBipartite, candidate_oracle,
                      semiladder_extension_oracle, strong_witness_oracle,
                      weak_witness_oracle)
from .profiles import build_profile_table

SOLUTION = "SOLUTION"
NO_SOLUTION = "NO_SOLUTION"
EXISTS = "EXISTS"
NOT_EXISTS = "NOT_EXISTS"


@dataclass
class RunTranscript:
    rounds: int = 0  # completed full rounds (a new witness was added)
    candidates: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    oracle_calls: dict = field(default_factory=dict)
    outcome: str | None = None

    def count(self, oracle_name: str):
        self.oracle_calls[oracle_name] = self.oracle_calls.get(oracle_name, 0) + 1


@dataclass(frozen=True)
class Decision:
    kind: str
    payload: object  # solution tuple / defeating witness list / core set
    transcript: RunTranscript | None = None


def semi_ladder_solve(ib: ImplicitBipartite, max_rounds: int = 10 ** 6) -> Decision:
    """Alternate candidate and weak-witness calls, accumulating witnesses,
    until a candidate survives (SOLUTION) or none agrees with all collected
    witnesses (NO_SOLUTION).  The collected pairs form a semi-ladder, so the
    round count never exceeds the semi-ladder index of the implicit graph."""
    if max_rounds < 1:
        raise InputError("max_rounds must be >= 1")
    t = RunTranscript()
    B = []
    while True:
        t.count("candidate")
        a = candidate_oracle(ib, B)
        if a is None:
            t.outcome = NO_SOLUTION
            return Decision(NO_SOLUTION, list(B), t)
        t.count("weak_witness")
        b = weak_witness_oracle(ib, a)
        if b is None:
            t.outcome = SOLUTION
            t.candidates.append(a)
            return Decision(SOLUTION, a, t)
        t.candidates.append(a)
        t.witnesses.append(b)
        B.append(b)
        t.rounds += 1
        if t.rounds >= max_rounds:
            raise ResourceBudgetError(
                f"no decision after {max_rounds} full rounds "
                f"(transcript: {len(B)} witnesses)")


def ladder_solve(ib: ImplicitBipartite, p: int,
                 max_rounds: int = 10 ** 6) -> Decision:
    """Existence-only variant: candidates accumulate and each round asks for
    at most p witnesses jointly defeating all of them.  Correct whenever the
    implicit graph has the weak p-Helly property; never produces a tuple for
    the EXISTS outcome."""
    if max_rounds < 1:
        raise InputError("max_rounds must be >= 1")
    t = RunTranscript()
    A: list = []
    B: list = []
    while True:
        t.count("candidate")
        a = candidate_oracle(ib, B)
        if a is None:
            t.outcome = NOT_EXISTS
            return Decision(NOT_EXISTS, list(B), t)
        A.append(a)
        t.candidates.append(a)
        t.count("strong_witness")
        P = strong_witness_oracle(ib, A, p)
        if P is None:
            t.outcome = EXISTS
            return Decision(EXISTS, None, t)
        t.witnesses.append(list(P))
        B.extend(P)
        t.rounds += 1
        if t.rounds >= max_rounds:
            raise ResourceBudgetError(
                f"no decision after {max_rounds} full rounds "
                f"(transcript: {len(B)} witnesses)")


def coverage_core(ib: ImplicitBipartite, max_rounds: int = 10 ** 6):
    """Witness set B such that any candidate agreeing with all of B agrees
    with every witness tuple.  Grows B through the extension oracle until it
    reports that no further disagreement outside B is reachable."""
    B: list = []
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise ResourceBudgetError(
                f"core construction still running after {max_rounds} rounds")
        ext = semiladder_extension_oracle(ib, B)
        if ext is None:
            return B
        _, b = ext
        B.append(b)


@dataclass(frozen=True)
class Dichotomy:
    kind: str  # "independent" or "covering"
    vertices: tuple


def greedy_dichotomy(g: Graph, X, r: int, k: int, allowed=None) -> Dichotomy:
    """Scan X in ascending order keeping vertices at pairwise distance > 2r.
    Either k+1 such vertices turn up (an independent certificate) or the
    kept set Z has everything in X within distance 2r (a covering set)."""
    if k < 0:
        raise InputError("k must be >= 0")
    X = sorted(set(X))
    for v in X:
        if not (0 <= v < g.n):
            raise InputError(f"invalid vertex {v}")
        if allowed is not None and v not in allowed:
            raise InputError(f"vertex {v} outside the arena")
    Y: list = []
    covered: set = set()
    for v in X:
        if v in covered:
            continue
        Y.append(v)
        if len(Y) == k + 1:
            return Dichotomy("independent", tuple(Y))
        covered.update(ball(g, v, 2 * r, allowed=allowed))
    return Dichotomy("covering", tuple(Y))


# --- splitter strategies ----------------------------------------------------


def connector_echo(g: Graph, active, v: int, r: int) -> int:
    return v


def ball_max_degree(g: Graph, active, v: int, r: int) -> int:
    bl = sorted(ball(g, v, r, allowed=active))

    def deg(u):
        if active is None:
            return g.degree(u)
        return sum(1 for w in g.neighbors(u) if w in active)

    return max(bl, key=lambda u: (deg(u), -u))


def bfs_center(g: Graph, active, v: int, r: int) -> int:
    bl = sorted(ball(g, v, r, allowed=active))
    big = g.n + 1

    def ecc(u):
        dist = bfs_capped(g, u, g.n, allowed=active)
        return max((dist[w] if dist[w] != INF else big) for w in bl)

    return min(bl, key=lambda u: (ecc(u), u))


STRATEGIES = {
    "connector_echo": connector_echo,
    "ball_max_degree": ball_max_degree,
    "bfs_center": bfs_center,
}
DEFAULT_STRATEGY = "ball_max_degree"


def resolve_strategy(strategy):
    if callable(strategy):
        return strategy
    if strategy in STRATEGIES:
        return STRATEGIES[strategy]
    raise InputError(f"unknown splitter strategy '{strategy}'")


def splitter_game_round(g: Graph, v: int, r: int, strategy=DEFAULT_STRATEGY,
                        active=None, excluded=()):
    """One localization round: the ball around the chosen vertex, minus the
    strategy's pick and any excluded vertices, becomes the next arena."""
    strat = resolve_strategy(strategy)
    if active is not None and v not in active:
        raise InputError(f"vertex {v} outside the arena")
    if not (0 <= v < g.n):
        raise InputError(f"invalid vertex {v}")
    bl = ball(g, v, r, allowed=active)
    w = strat(g, active, v, r)
    if w not in bl:
        raise ContractViolationError(
            f"strategy returned {w}, outside the radius-{r} ball of {v}")
    next_active = frozenset(bl) - {w} - set(excluded)
    return w, next_active


# --- dependence pre-core ----------------------------------------------------


def compute_precore(g: Graph, A, k: int, r: int, strategy=DEFAULT_STRATEGY,
                    depth_budget: int = 20):
    """Vertex set Q such that whenever at most k vertices distance-r
    dominate A, every a in A has a path of length <= r to the dominating
    set passing through Q.

    Recursive construction: vertices of A are grouped by their capped
    distance vector on the accumulated separator S; the greedy dichotomy
    localizes every pair that still needs capturing near a small set Z of
    anchors; each anchor spawns a shrunken arena (its radius-3r ball plus
    S) with the strategy's pick added to S, and the recursion handles every
    way the dominating set can sit relative to S.
    """
    strat = resolve_strategy(strategy)
    if k < 0 or r < 0:
        raise InputError("k and r must be >= 0")
    if depth_budget < 0:
        raise InputError("depth_budget must be >= 0")
    A = frozenset(A)
    for a in A:
        if not (0 <= a < g.n):
            raise InputError(f"invalid vertex {a}")
    memo: dict = {}
    value_choices = tuple(range(r + 1)) + (INF,)

    def rec(active, S, A_set, budget):
        key = (active, S, A_set)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if active <= S:
            result = frozenset(active)
            memo[key] = result
            return result
        if not A_set:
            result = frozenset(S)
            memo[key] = result
            return result
        if budget == 0:
            raise SplitterBudgetError(
                "localization depth budget exhausted before the arena "
                "emptied; a deeper budget or another strategy may help")
        s_list = sorted(S)
        dists = [bfs_capped(g, s, r, allowed=active) for s in s_list]
        arena_minus_s = active - S
        classes: dict = {}
        for a in sorted(A_set - S):
            prof = tuple(d[a] for d in dists)
            classes.setdefault(prof, []).append(a)
        anchors: set = set()
        for prof in sorted(classes):
            out = greedy_dichotomy(g, classes[prof], r, k,
                                   allowed=arena_minus_s)
            if out.kind == "covering":
                anchors.update(out.vertices)
            # independent branch: more than k pairwise-far members of this
            # class exist, so no k-element set dominates them all and the
            # class never produces a pair that needs capturing here
        result = set(S)
        a_profiles = {}
        for a in A_set:
            a_profiles[a] = tuple(d[a] for d in dists)
        for z in sorted(anchors):
            ball3 = ball(g, z, 3 * r, allowed=arena_minus_s)
            w = strat(g, arena_minus_s, z, 3 * r)
            if w not in ball3:
                raise ContractViolationError(
                    f"strategy returned {w}, outside the radius-{3 * r} "
                    f"ball of {z}")
            ball2 = ball(g, z, 2 * r, allowed=arena_minus_s)
            new_active = frozenset(ball3) | S
            new_S = S | {w}
            base = [a for a in sorted(A_set) if a in ball2]
            seen = set()
            # every placement profile of the dominating set on S spawns a
            # subproblem; distinct filtered A-sets only, the rest coincide
            for pvals in product(value_choices, repeat=len(s_list)):
                filtered = frozenset(
                    a for a in base
                    if all(a_profiles[a][i] + pvals[i] > r
                           for i in range(len(s_list))))
                if filtered in seen:
                    continue
                seen.add(filtered)
                result |= rec(new_active, new_S, filtered, budget - 1)
        result = frozenset(result)
        memo[key] = result
        return result

    return sorted(rec(frozenset(range(g.n)), frozenset(), A, depth_budget))


# --- distance-r independent set ---------------------------------------------


def _saturating(a, b):
    return a + b  # math.inf propagates; plain ints add


def independent_set_solve(g: Graph, k: int, r: int,
                          strategy=DEFAULT_STRATEGY,
                          depth_budget: int = 20) -> Decision:
    """Find k vertices at pairwise distance > r, or certify none exist.

    The capture set Q for (G, V, k-1) reduces the decision to profile
    multisets on Q: a size-k multiset is free when every pair of its
    profiles keeps min over Q of the summed capped distances above r.  A
    free multiset is instantiated from representatives and repaired by the
    exchange loop, which strictly shrinks the number of close vertices.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    if r < 0:
        raise InputError("r must be >= 0")
    if g.n == 0:
        return Decision(NO_SOLUTION, [])
    if k == 1:
        return Decision(SOLUTION, (0,))
    Q = compute_precore(g, range(g.n), k - 1, r, strategy=strategy,
                        depth_budget=depth_budget)
    table = build_profile_table(g, Q, r)
    profs = [e.profile.values for e in table.entries]
    counts = [e.count for e in table.entries]
    np = len(profs)
    compat = [[min((_saturating(profs[i][t], profs[j][t])
                    for t in range(len(Q))), default=INF) > r
               for j in range(np)] for i in range(np)]

    def dfs(start, chosen):
        if len(chosen) == k:
            return chosen
        for i in range(start, np):
            mult = chosen.count(i)
            if mult >= counts[i]:
                continue
            if mult and not compat[i][i]:
                continue
            if all(compat[j][i] for j in chosen):
                got = dfs(i, chosen + (i,))
                if got is not None:
                    return got
        return None

    pick = dfs(0, ())
    if pick is None:
        return Decision(NO_SOLUTION, list(Q))
    # distinct lowest-id realizers per chosen profile
    realizers: dict = {}
    X = []
    for i in pick:
        skip = realizers.get(i, 0)
        realizers[i] = skip + 1
        found = 0
        for v in range(g.n):
            if table.vertex_to_profile[v] == i:
                if found == skip:
                    X.append(v)
                    break
                found += 1
    X = sorted(X)
    if len(set(X)) != k:
        raise InternalInvariantError("representative instantiation collided")

    def close_pairs(members):
        out = []
        for u, v in combinations(sorted(members), 2):
            if bfs_capped(g, u, r)[v] <= r:
                out.append((u, v))
        return out

    def f_value(members):
        close = set()
        for u, v in close_pairs(members):
            close.add(u)
            close.add(v)
        return len(close)

    guard = k + 1
    while True:
        pairs = close_pairs(X)
        if not pairs:
            break
        guard -= 1
        if guard < 0:
            raise InternalInvariantError(
                "exchange loop failed to terminate; capture set invalid")
        before = f_value(X)
        w = pairs[0][1]
        rest = [x for x in X if x != w]
        u = None
        for cand in range(g.n):
            dist = bfs_capped(g, cand, r)
            if all(dist[x] == INF for x in rest):
                u = cand
                break
        if u is None:
            raise InternalInvariantError(
                "remainder dominates the graph; capture set was not a "
                "valid capture certificate")
        X = sorted(rest + [u])
        if f_value(X) >= before:
            raise InternalInvariantError("exchange loop made no progress")
    return Decision(SOLUTION, tuple(X))


# --- brute-force reference solvers ------------------------------------------


def brute_force_dominating(g: Graph, k: int, r: int,
                           subset_budget: int = 5_000_000):
    """Lexicographically first distance-r dominating set of size <= k, or
    None.  Sizes are tried in increasing order, so the result is also a
    smallest one."""
    if k < 0 or r < 0:
        raise InputError("k and r must be >= 0")
    total = sum(_ncr(g.n, size) for size in range(min(k, g.n) + 1))
    if total > subset_budget:
        raise ResourceBudgetError(f"{total} subsets exceed budget")
    dist = [bfs_capped(g, v, r) for v in range(g.n)]
    for size in range(min(k, g.n) + 1):
        for cand in combinations(range(g.n), size):
            if all(any(dist[c][v] <= r for c in cand)
                   for v in range(g.n)):
                return cand
    return None


def brute_force_independent(g: Graph, k: int, r: int,
                            subset_budget: int = 5_000_000):
    """Lexicographically first set of k vertices at pairwise distance > r,
    or None."""
    if k < 0 or r < 0:
        raise InputError("k and r must be >= 0")
    if k > g.n:
        return None
    if _ncr(g.n, k) > subset_budget:
        raise ResourceBudgetError("too many subsets")
    dist = [bfs_capped(g, v, r) for v in range(g.n)]
    for cand in combinations(range(g.n), k):
        if all(dist[u][v] == INF for u, v in combinations(cand, 2)):
            return cand
    return None


def _ncr(n, k):
    from math import comb
    return comb(n, k)
