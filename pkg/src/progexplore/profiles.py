"""Distance-r profiles on a pivot set and deduplicated profile tables."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import InputError
from .graph import Graph, INF, bfs_capped


@dataclass(frozen=True)
class DistanceProfile:
    """Capped distance vector of a vertex over a sorted pivot set."""

    radius: int
    values: tuple  # entries in {0..radius} or INF, aligned with sorted pivot

    @property
    def pivot_size(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ProfileEntry:
    profile: DistanceProfile
    representative: int
    count: int


@dataclass(frozen=True)
class ProfileTable:
    """Deduplicated profiles of all vertices on a pivot set.

    Entry order is first-occurrence scanning vertices in increasing id, so
    representatives are the lowest-id realizers and results are deterministic.
    """

    pivot: tuple[int, ...]
    radius: int
    entries: tuple[ProfileEntry, ...]
    vertex_to_profile: tuple  # vertex id -> entry index (None if excluded)

    def pivot_position(self, vertex: int) -> int:
        return self.pivot.index(vertex)

    def profile_of(self, vertex: int) -> DistanceProfile:
        idx = self.vertex_to_profile[vertex]
        if idx is None:
            raise InputError(f"vertex {vertex} not covered by this table")
        return self.entries[idx].profile


def profile_of_vertex(g: Graph, pivot, r: int, v: int) -> DistanceProfile:
    """profile of v on the pivot set: capped distance to each pivot vertex."""
    pivot = sorted(set(pivot))
    if not (0 <= v < g.n):
        raise InputError(f"invalid vertex {v}")
    if not pivot:
        return DistanceProfile(r, ())
    dist = bfs_capped(g, v, r)
    return DistanceProfile(r, tuple(dist[s] for s in pivot))


def profile_of_set(g: Graph, pivot, r: int, members) -> DistanceProfile:
    """Pointwise minimum of member profiles (INF is the top element)."""
    members = sorted(set(members))
    if not members:
        raise InputError("profile of the empty set is ambiguous; refusing")
    profiles = [profile_of_vertex(g, pivot, r, u) for u in members]
    values = tuple(min(p.values[i] for p in profiles)
                   for i in range(len(profiles[0].values)))
    return DistanceProfile(r, values)


def build_profile_table(g: Graph, pivot, r: int, allowed=None) -> ProfileTable:
    """One capped BFS per pivot vertex, then deduplication by profile value.

    ``allowed`` restricts both the BFS arena and the set of profiled
    vertices (used by the pre-core recursion); default is the whole graph.
    """
    pivot = tuple(sorted(set(pivot)))
    for s in pivot:
        if not (0 <= s < g.n):
            raise InputError(f"invalid pivot vertex {s}")
    dists = [bfs_capped(g, s, r, allowed=allowed) for s in pivot]
    seen = {}
    entries = []
    counts = []
    vertex_to_profile = [None] * g.n
    domain = range(g.n) if allowed is None else sorted(allowed)
    for v in domain:
        key = tuple(d[v] for d in dists)
        idx = seen.get(key)
        if idx is None:
            idx = len(entries)
            seen[key] = idx
            entries.append(ProfileEntry(DistanceProfile(r, key), v, 0))
            counts.append(0)
        counts[idx] += 1
        vertex_to_profile[v] = idx
    entries = tuple(
        ProfileEntry(e.profile, e.representative, c)
        for e, c in zip(entries, counts)
    )
    return ProfileTable(pivot, r, entries, tuple(vertex_to_profile))


@dataclass(frozen=True)
class ComplexityMeasurement:
    count: int
    exact: bool  # exact maximum vs sampled lower bound


def _realized_count(g: Graph, pivot, r: int) -> int:
    dists = [bfs_capped(g, s, r) for s in pivot]
    return len({tuple(d[v] for d in dists) for v in range(g.n)})


def measure_profile_complexity(
    g: Graph, r: int, m: int, trials: int = 1000, seed: int = 0,
    enumeration_budget: int = 100_000,
) -> ComplexityMeasurement:
    """Max number of realized distance-r profiles over pivot sets of size <= m.

    Exhaustive when C(n, m) fits the budget, otherwise a sampled lower
    bound over ``trials`` random pivot sets.  Adding pivot vertices never
    merges profiles, so only size-m pivot sets need to be inspected.
    """
    if m > g.n:
        raise InputError(f"pivot size {m} exceeds vertex count {g.n}")
    if m < 0:
        raise InputError("pivot size must be >= 0")
    if m == 0 or g.n == 0:
        return ComplexityMeasurement(1 if g.n else 0, True)
    if comb(g.n, m) <= enumeration_budget:
        best = max(_realized_count(g, pivot, r)
                   for pivot in combinations(range(g.n), m))
        return ComplexityMeasurement(best, True)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        pivot = sorted(rng.sample(range(g.n), m))
        best = max(best, _realized_count(g, pivot, r))
    return ComplexityMeasurement(best, False)
