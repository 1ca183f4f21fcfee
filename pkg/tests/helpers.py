"""Independent reference implementations used to cross-check the package.

Everything here favours clarity over speed: adjacency lives in dicts of
sets, distances come from a queue BFS, components from union-find, and
minima from exhaustive enumeration.  None of it shares code with the
bitmask machinery in ``hoptree`` beyond the public data types.
"""

from collections import deque
from itertools import combinations

import numpy as np

from hoptree.certifier import HopTree
from hoptree.graph_model import Instance


def all_ones(n: int) -> Instance:
    return Instance(n, [1] * (n * (n + 1) // 2))


def all_twos(n: int) -> Instance:
    return Instance(n, [2] * (n * (n + 1) // 2))


# --- plain-graph views of an edge bitmask ------------------------------------


def edge_list(inst: Instance, bits: int) -> list[tuple[int, int]]:
    return [inst.pairs[i] for i in range(inst.m) if bits >> i & 1]


def neighbor_sets(inst: Instance, bits: int) -> dict[int, set[int]]:
    nbr: dict[int, set[int]] = {v: set() for v in range(inst.n + 1)}
    for u, v in edge_list(inst, bits):
        nbr[u].add(v)
        nbr[v].add(u)
    return nbr


def bfs_distances(inst: Instance, bits: int) -> list[int]:
    """Hop distances from the root; unreachable vertices get n + 1."""
    nbr = neighbor_sets(inst, bits)
    dist = [None] * (inst.n + 1)
    dist[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in nbr[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return [inst.n + 1 if d is None else d for d in dist]


def component_count(inst: Instance, bits: int) -> int:
    parent = list(range(inst.n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edge_list(inst, bits):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in range(inst.n + 1)})


def solution_cost(inst: Instance, bits: int) -> int:
    return sum(inst.weight(u, v) for u, v in edge_list(inst, bits))


def deep_count(inst: Instance, bits: int, bound: int = 2) -> int:
    return sum(1 for d in bfs_distances(inst, bits)[1:] if d > bound)


def feasible(inst: Instance, bits: int) -> bool:
    return bin(bits).count("1") == inst.n and deep_count(inst, bits) == 0


def min_root_attachments(inst: Instance, bits: int) -> int:
    """Smallest D such that adding every root-D edge clears 2 < dist <= n.

    Works straight from the definition: try every vertex subset in
    ascending size and re-run the BFS on the augmented graph.
    """
    n = inst.n

    def mid_free(mask: int) -> bool:
        augmented = bits
        for v in range(1, n + 1):
            if mask >> v & 1:
                augmented |= 1 << inst.edge_index(0, v)
        return all(not 2 < d <= n for d in bfs_distances(inst, augmented)[1:])

    if mid_free(0):
        return 0
    for size in range(1, n + 1):
        for combo in combinations(range(1, n + 1), size):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if mid_free(mask):
                return size
    raise AssertionError("attaching every vertex always clears the middle band")


# --- exhaustive optimum -------------------------------------------------------


def brute_optimum(inst: Instance) -> tuple[int, frozenset[int]]:
    """Minimum two-hop tree cost with the lexicographically least child set."""
    best_cost = None
    best_set = None
    for size in range(1, inst.n + 1):
        for combo in combinations(range(1, inst.n + 1), size):
            total = sum(inst.weight(0, v) for v in combo)
            chosen = set(combo)
            for u in range(1, inst.n + 1):
                if u not in chosen:
                    total += min(inst.weight(u, v) for v in combo)
            key = (total, combo)
            if best_cost is None or key < (best_cost, tuple(sorted(best_set))):
                best_cost, best_set = total, frozenset(combo)
    return best_cost, best_set


# --- random structures --------------------------------------------------------


def random_solution_bits(rng: np.random.Generator, m: int) -> int:
    return int.from_bytes(rng.bytes((m + 7) // 8), "little") & ((1 << m) - 1)


def random_tree(inst: Instance, rng: np.random.Generator) -> HopTree:
    """Uniformly messy two-hop tree: random child set, random attachments."""
    n = inst.n
    k = int(rng.integers(1, n + 1))
    kids = [int(v) for v in rng.choice(np.arange(1, n + 1), size=k, replace=False)]
    parent = [0] * (n + 1)
    kid_set = set(kids)
    for v in range(1, n + 1):
        if v not in kid_set:
            parent[v] = kids[int(rng.integers(len(kids)))]
    return HopTree(tuple(parent))


# --- exhaustive rewrite-applicability scans -----------------------------------
#
# Each scan re-derives the vertex roles from the parent map and enumerates
# every candidate tuple, answering only "does a matching pattern exist?".


def _roles(t: HopTree) -> tuple[list[int], list[int], list[int]]:
    n = t.n
    kids = [v for v in range(1, n + 1) if t.parent[v] == 0]
    gkids = [v for v in range(1, n + 1) if t.parent[v] != 0]
    occupied = {t.parent[v] for v in gkids}
    leaves = [v for v in range(1, n + 1) if v not in occupied]
    return kids, gkids, leaves


def rewrite_exists(inst: Instance, t: HopTree, op: int) -> bool:
    kids, gkids, leaves = _roles(t)
    w = inst.weight
    if op == 1:
        return any(w(v, t.parent[v]) == 2 and w(0, v) == 1 for v in gkids)
    if op == 2:
        return any(
            t.parent[v2] != v1 and w(v2, t.parent[v2]) == 2 and w(v1, v2) == 1
            for v1 in kids
            for v2 in gkids
        )
    if op == 3:
        childless = [v for v in kids if v in leaves]
        return any(
            w(0, v1) == 2 and w(v1, v2) == 1
            for v1 in childless
            for v2 in kids
            if v2 != v1
        )
    if op == 4:
        return any(
            w(v1, t.parent[v1]) == w(0, v1)
            and v2 != v1
            and w(v2, t.parent[v2]) == 2
            and w(v1, v2) == 1
            for v1 in gkids
            for v2 in leaves
        )
    if op in (5, 6):
        for v1 in gkids:
            if op == 5 and not (w(v1, t.parent[v1]) == 1 and w(0, v1) == 2):
                continue
            hooks = [
                v
                for v in leaves
                if v != v1 and w(v, t.parent[v]) == 2 and w(v1, v) == 1
            ]
            if len(hooks) >= 2:
                return True
        return False
    raise ValueError(f"no rewrite scan for op {op}")


# --- algorithm-state structure checks -----------------------------------------


def check_population_invariant(state) -> None:
    """Assert the population shape promised for the state's algorithm."""
    n = state.inst.n
    algo = state.algo
    if algo in ("ea-edge", "ea-vertex"):
        assert isinstance(state.f, int)
        return
    if algo == "gsemo":
        if state.over is not None:
            assert not state.slots, "weight slots must be empty while over-budget"
            assert state.over[0] > n
            assert state.over[1].bit_count() == state.over[0]
        else:
            assert state.slots
            assert len(state.slots) <= n + 1
            assert sorted(state.slot_keys) == sorted(state.slots)
            assert len(set(state.slot_keys)) == len(state.slot_keys)
            for h, entry in state.slots.items():
                assert 0 <= h <= n
                assert entry[0].bit_count() == h
        return
    assert 1 <= len(state.members) <= 2
    firsts = sorted(z[0] for z in state.members)
    if algo == "gsemo1":
        for z in state.members:
            assert z[2].bit_count() == z[0]
        if len(firsts) == 2:
            assert firsts == [n, n + 1]
    else:  # gsemo2
        assert all(a >= 0 for a in firsts)
        if len(firsts) == 2:
            assert firsts == [0, 1]
