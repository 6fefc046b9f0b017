"""Definition-level enumeration oracles, for tests only.

Everything here works on frozensets with no bitmask tricks, no complement
encoding, no pool filtering and no symmetry reduction, so the results are
an independent check on the optimized search path.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .search import InstanceTooLarge

_G_MAX_N = 5
_G_MAX_R = 3
_PROFILE_MAX_N = 6


def _comparable(a: frozenset, b: frozenset) -> bool:
    return a <= b or b <= a


def g_by_enumeration(n: int, r: int) -> int:
    """max |{sizes}| over all antichains with every occurring size count >= r.

    Walks every antichain of the power set of {1..n} once (members taken in
    a fixed order), evaluating the multiplicity condition from scratch on
    each; exponential and only meant for n <= 5.
    """
    if n > _G_MAX_N or r > _G_MAX_R:
        raise InstanceTooLarge(f"enumeration oracle capped at n <= {_G_MAX_N}, r <= {_G_MAX_R}")
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    subsets = [frozenset(c)
               for s in range(n + 1)
               for c in combinations(range(1, n + 1), s)]
    best = 0

    def walk(start: int, chain: list[frozenset]) -> None:
        nonlocal best
        counts: dict[int, int] = {}
        for a in chain:
            counts[len(a)] = counts.get(len(a), 0) + 1
        if counts and all(v >= r for v in counts.values()):
            best = max(best, len(counts))
        for i in range(start, len(subsets)):
            s = subsets[i]
            if any(_comparable(s, a) for a in chain):
                continue
            chain.append(s)
            walk(i + 1, chain)
            chain.pop()

    walk(0, [])
    return best


def profile_feasible_by_enumeration(n: int, r: int, levels: Iterable[int]) -> bool:
    """Does an antichain exist with exactly r sets of each size in `levels`
    and none elsewhere?  Plain nested choice over raw size classes."""
    if n > _PROFILE_MAX_N:
        raise InstanceTooLarge(f"profile oracle capped at n <= {_PROFILE_MAX_N}")
    lv = sorted(set(levels))
    if any(t < 0 or t > n for t in lv):
        raise ValueError("levels must lie in 0..n")
    pools = [[frozenset(c) for c in combinations(range(1, n + 1), t)] for t in lv]

    def place(level_idx: int, start: int, need: int, chosen: list[frozenset]) -> bool:
        if need == 0:
            if level_idx + 1 == len(pools):
                return True
            return place(level_idx + 1, 0, r, chosen)
        pool = pools[level_idx]
        for i in range(start, len(pool)):
            cand = pool[i]
            if any(_comparable(cand, a) for a in chosen):
                continue
            chosen.append(cand)
            if place(level_idx, i + 1, need - 1, chosen):
                return True
            chosen.pop()
        return False

    if not pools:
        return True
    return place(0, 0, r, [])
