"""Exhaustive backtracking decision procedures for exact-profile instances.

An exact-profile instance asks whether an antichain on {1..n} exists with
exactly r sets of every size in a target level set T and none elsewhere.
Sizes above n/2 are represented by complements, so each pairwise constraint
collapses to a one-word subset or disjointness test between small sets.
Candidate pools are pruned by forward checking, and the first processed
level may be restricted to one representative per relabelling orbit; both
prunes are sound, so Infeasible verdicts are valid for the original
instance and are only ever reported after full exhaustion.
"""
from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb
from typing import Iterator, Sequence

from .bounds import g_upper_bound
from .construct import colex_subsets
from .family import Family, check_ground, is_antichain

_POOL_CAP = 4_000_000


class InvalidInstance(ValueError):
    """The target level set leaves {0..n} or the parameters are malformed."""


class InstanceTooLarge(ValueError):
    """Candidate pools would not fit in memory at desk scale."""


@dataclass(frozen=True)
class ProfileInstance:
    """Ground size, multiplicity, and the exact set of target sizes."""

    n: int
    r: int
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        check_ground(self.n)
        if self.r < 1:
            raise InvalidInstance(f"multiplicity must be >= 1, got {self.r}")
        lv = tuple(sorted(set(self.levels)))
        if lv != tuple(self.levels):
            raise InvalidInstance("levels must be strictly increasing and distinct")
        for t in lv:
            if not 0 <= t <= self.n:
                raise InvalidInstance(f"level {t} outside 0..{self.n}")


@dataclass(frozen=True)
class SearchBudget:
    """Node and wall-clock limits plus a worker-count hint; None = unlimited."""

    max_nodes: int | None = None
    wall_time: float | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.wall_time is not None and self.wall_time <= 0:
            raise ValueError("wall_time must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass(frozen=True)
class SearchConfig:
    """Prune toggles.  Disabling any prune never changes a verdict.

    canonical_support_cap bounds the support size for which first-level
    orbit filtering is attempted; larger supports are kept unfiltered,
    which is sound (extra branches, never missing ones).
    """

    symmetry: bool = True
    forward_check: bool = True
    canonical_support_cap: int = 8


def symmetry_prune_config(enable: bool) -> SearchConfig:
    return SearchConfig(symmetry=enable)


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    max_depth: int
    prunes: dict[str, int]
    elapsed: float

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "max_depth": self.max_depth,
            "prunes": dict(self.prunes),
            "elapsed": self.elapsed,
        }


@dataclass(frozen=True)
class Feasible:
    witness: Family
    stats: SearchStats


@dataclass(frozen=True)
class Infeasible:
    stats: SearchStats


@dataclass(frozen=True)
class Unknown:
    stats: SearchStats


SearchOutcome = Feasible | Infeasible | Unknown


def is_canonical_level_family(masks: Sequence[int], support_cap: int = 8) -> bool:
    """True iff the mask family is the lexicographic minimum of its orbit
    under relabelling of ground elements.

    A minimum necessarily uses elements 1..v for v the support size, so
    only bijections of that prefix are tried.  Families whose support
    exceeds support_cap are accepted unfiltered.
    """
    union = 0
    for m in masks:
        union |= m
    v = union.bit_count()
    if union != (1 << v) - 1:
        return False
    if v > support_cap:
        return True
    base = sorted(masks)
    for perm in permutations(range(v)):
        img = []
        for m in base:
            x = 0
            while m:
                low = m & -m
                m ^= low
                x |= 1 << perm[low.bit_length() - 1]
            img.append(x)
        img.sort()
        if img < base:
            return False
    return True


class _Expired(Exception):
    pass


# Pairwise constraint modes between a mask x at level i and a mask y at
# level j (masks are the encoded representatives):
#   mode 0: conflict iff x & y == x
#   mode 1: conflict iff x & y == 0
#   mode 2: conflict iff x & y == y
def _mode_for(ti: int, tj: int, ei: bool, ej: bool) -> int:
    if ti < tj:
        if not ei and not ej:
            return 0
        if not ei and ej:
            return 1
        if ei and ej:
            return 2
    else:
        if not ei and not ej:
            return 2
        if ei and not ej:
            return 1
        if ei and ej:
            return 0
    raise AssertionError("a complemented level cannot be smaller than a plain one")


class _Engine:
    """Backtracking kernel for one instance; counts nodes and prunes."""

    def __init__(self, inst: ProfileInstance, config: SearchConfig,
                 deadline: float | None = None, node_cap: int | None = None):
        n = inst.n
        self.inst = inst
        self.cfg = config
        self.deadline = deadline
        self.node_cap = node_cap
        if sum(comb(n, min(t, n - t)) for t in inst.levels) > _POOL_CAP:
            raise InstanceTooLarge(f"candidate pools exceed {_POOL_CAP} sets")
        # Levels are processed in ascending pool size (ties by size t), so
        # the tightest levels bind first.
        order = sorted(inst.levels, key=lambda t: (comb(n, min(t, n - t)), t))
        self.tsize = tuple(order)
        self.enc = tuple(2 * t > n for t in order)
        self.pools: list[list[int]] = []
        for t in order:
            e = min(t, n - t)
            pool = sorted(sum(1 << p for p in c) for c in combinations(range(n), e))
            self.pools.append(pool)
        self.L = len(order)
        self.n = n
        self.r = inst.r
        self.modes = [
            [0 if i == j else _mode_for(self.tsize[i], self.tsize[j],
                                        self.enc[i], self.enc[j])
             for j in range(self.L)]
            for i in range(self.L)
        ]
        self._rows: list[list[list[int | None] | None]] = [
            [None] * self.L for _ in range(self.L)]
        self.placed: list[list[int]] = [[] for _ in order]
        self.nodes = 0
        self.max_depth = 0
        self._depth = 0
        self.prunes = {"pool_deficit": 0, "level_deficit": 0,
                       "symmetry": 0, "conflict": 0}
        self._t0 = time.perf_counter()

    # -- bookkeeping ----------------------------------------------------

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_cap is not None and self.nodes > self.node_cap:
            raise _Expired
        if self.deadline is not None and self.nodes & 1023 == 0 \
                and time.perf_counter() > self.deadline:
            raise _Expired

    def stats(self) -> SearchStats:
        return SearchStats(self.nodes, self.max_depth, dict(self.prunes),
                           time.perf_counter() - self._t0)

    # -- constraint rows ------------------------------------------------

    def _row(self, i: int, a: int, j: int) -> int:
        """Bitset over pool j of candidates compatible with pools[i][a]."""
        rows = self._rows[i][j]
        if rows is None:
            rows = [None] * len(self.pools[i])
            self._rows[i][j] = rows
        row = rows[a]
        if row is None:
            x = self.pools[i][a]
            mode = self.modes[i][j]
            bits = 0
            if mode == 0:
                for idx, y in enumerate(self.pools[j]):
                    if x & y != x:
                        bits |= 1 << idx
            elif mode == 1:
                for idx, y in enumerate(self.pools[j]):
                    if x & y:
                        bits |= 1 << idx
            else:
                for idx, y in enumerate(self.pools[j]):
                    if x & y != y:
                        bits |= 1 << idx
            rows[a] = bits
            row = bits
        return row

    def _conflicts_placed(self, li: int, idx: int) -> bool:
        x = self.pools[li][idx]
        for j in range(self.L):
            if j == li or not self.placed[j]:
                continue
            mode = self.modes[j][li]
            pool_j = self.pools[j]
            for jidx in self.placed[j]:
                y = pool_j[jidx]
                if mode == 0:
                    if y & x == y:
                        return True
                elif mode == 1:
                    if y & x == 0:
                        return True
                else:
                    if y & x == x:
                        return True
        return False

    def _place(self, li: int, idx: int, lives: list[int],
               unfilled: tuple[int, ...]) -> list[int] | None:
        """Account for one placement; returns filtered lives or None on a prune."""
        if not self.cfg.forward_check:
            if self._conflicts_placed(li, idx):
                self.prunes["conflict"] += 1
                return None
            return lives
        new = lives[:]
        for j in unfilled:
            nl = new[j] & self._row(li, idx, j)
            if nl.bit_count() < self.r:
                self.prunes["pool_deficit"] += 1
                return None
            new[j] = nl
        return new

    # -- search ----------------------------------------------------------

    def level0_combos(self, lives: list[int]) -> Iterator[tuple[tuple[int, ...], list[int]]]:
        """Complete first-level choices surviving pruning, in ascending order."""
        sel: list[int] = []
        rest = tuple(range(1, self.L))

        def rec(picked: int, min_idx: int,
                lives: list[int]) -> Iterator[tuple[tuple[int, ...], list[int]]]:
            if picked == self.r:
                if self.cfg.symmetry:
                    masks = tuple(self.pools[0][i] for i in sel)
                    if not is_canonical_level_family(
                            masks, self.cfg.canonical_support_cap):
                        self.prunes["symmetry"] += 1
                        return
                yield tuple(sel), lives
                return
            avail = lives[0] >> min_idx << min_idx if min_idx else lives[0]
            while avail:
                low = avail & -avail
                idx = low.bit_length() - 1
                avail ^= low
                self._tick()
                new_lives = self._place(0, idx, lives, rest)
                if new_lives is None:
                    continue
                if self.cfg.forward_check and picked + 1 < self.r:
                    if (lives[0] >> (idx + 1)).bit_count() < self.r - picked - 1:
                        self.prunes["level_deficit"] += 1
                        continue
                sel.append(idx)
                self._depth += 1
                if self._depth > self.max_depth:
                    self.max_depth = self._depth
                yield from rec(picked + 1, idx + 1, new_lives)
                self._depth -= 1
                sel.pop()

        yield from rec(0, 0, lives)

    def search_levels(self, remaining: tuple[int, ...], lives: list[int]) -> bool:
        """Fill the remaining levels, tightest live pool first (fail-first)."""
        if not remaining:
            return True
        if self.cfg.forward_check and len(remaining) > 1:
            li = min(remaining,
                     key=lambda j: (lives[j].bit_count(), j))
        else:
            li = remaining[0]
        rest = tuple(j for j in remaining if j != li)
        return self._fill_level(li, 0, 0, lives, rest)

    def _fill_level(self, li: int, picked: int, min_idx: int,
                    lives: list[int], rest: tuple[int, ...]) -> bool:
        if picked == self.r:
            return self.search_levels(rest, lives)
        r = self.r
        avail = lives[li] >> min_idx << min_idx if min_idx else lives[li]
        while avail:
            low = avail & -avail
            idx = low.bit_length() - 1
            avail ^= low
            self._tick()
            new_lives = self._place(li, idx, lives, rest)
            if new_lives is None:
                continue
            if self.cfg.forward_check and picked + 1 < r:
                if (lives[li] >> (idx + 1)).bit_count() < r - picked - 1:
                    self.prunes["level_deficit"] += 1
                    continue
            self.placed[li].append(idx)
            self._depth += 1
            if self._depth > self.max_depth:
                self.max_depth = self._depth
            if self._fill_level(li, picked + 1, idx + 1, new_lives, rest):
                return True
            self._depth -= 1
            self.placed[li].pop()
        return False

    def run(self) -> SearchOutcome:
        try:
            if self.L == 0:
                return Feasible(Family(self.n, ()), self.stats())
            for pool in self.pools:
                if len(pool) < self.r:
                    self.prunes["pool_deficit"] += 1
                    return Infeasible(self.stats())
            lives = [(1 << len(p)) - 1 for p in self.pools]
            rest = tuple(range(1, self.L))
            for combo, combo_lives in self.level0_combos(lives):
                self.placed[0] = list(combo)
                if self.search_levels(rest, combo_lives):
                    return Feasible(self.witness(), self.stats())
            self.placed[0] = []
            return Infeasible(self.stats())
        except _Expired:
            return Unknown(self.stats())

    def witness_masks(self) -> list[int]:
        full = (1 << self.n) - 1
        out = []
        for i in range(self.L):
            for idx in self.placed[i]:
                m = self.pools[i][idx]
                out.append(full ^ m if self.enc[i] else m)
        return out

    def witness(self) -> Family:
        fam = Family.from_masks(self.n, self.witness_masks())
        _verify_witness(fam, self.inst)
        return fam


def _verify_witness(fam: Family, inst: ProfileInstance) -> None:
    prof = fam.profile
    ok = (is_antichain(fam)
          and prof.occurring == frozenset(inst.levels)
          and all(prof.counts[t] == inst.r for t in inst.levels))
    if not ok:
        raise AssertionError("witness failed re-verification; search invariant broken")
    if inst.r >= 2 and inst.n >= 4 and len(inst.levels) > inst.n - 3:
        raise AssertionError(
            "witness realizes more than n-3 sizes; this contradicts a proven bound")


# -- parallel fan-out ------------------------------------------------------

def _subtree_task(args) -> tuple[str, list[int] | None, dict]:
    (n, r, levels, combo, lives, cfg, deadline, node_cap) = args
    inst = ProfileInstance(n, r, levels)
    eng = _Engine(inst, cfg, deadline, node_cap)
    eng.placed[0] = list(combo)
    try:
        found = eng.search_levels(tuple(range(1, eng.L)), list(lives))
    except _Expired:
        return ("unknown", None, eng.stats().to_dict())
    if found:
        return ("feasible", eng.witness_masks(), eng.stats().to_dict())
    return ("infeasible", None, eng.stats().to_dict())


def _run_parallel(inst: ProfileInstance, config: SearchConfig,
                  deadline: float | None, node_cap: int | None,
                  threads: int) -> SearchOutcome:
    t0 = time.perf_counter()
    eng = _Engine(inst, config, deadline, node_cap)
    if eng.L == 0:
        return eng.run()
    for pool in eng.pools:
        if len(pool) < eng.r:
            eng.prunes["pool_deficit"] += 1
            return Infeasible(eng.stats())
    lives = [(1 << len(p)) - 1 for p in eng.pools]
    gen = eng.level0_combos(lives)
    agg_nodes = 0
    agg_prunes: dict[str, int] = {}
    agg_depth = 0
    exhausted = True
    witness_masks: list[int] | None = None
    task_args = (inst.n, inst.r, inst.levels)
    with ProcessPoolExecutor(max_workers=threads) as ex:
        pending: set = set()
        gen_done = False
        while True:
            while not gen_done and len(pending) < threads * 2:
                try:
                    combo, combo_lives = next(gen)
                except StopIteration:
                    gen_done = True
                    break
                except _Expired:
                    gen_done = True
                    exhausted = False
                    break
                pending.add(ex.submit(_subtree_task, task_args + (
                    combo, combo_lives, config, deadline, node_cap)))
            if not pending:
                break
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                verdict, masks, st = fut.result()
                agg_nodes += st["nodes"]
                agg_depth = max(agg_depth, st["max_depth"])
                for k, v in st["prunes"].items():
                    agg_prunes[k] = agg_prunes.get(k, 0) + v
                if verdict == "unknown":
                    exhausted = False
                elif verdict == "feasible" and witness_masks is None:
                    witness_masks = masks
            if witness_masks is not None:
                for fut in pending:
                    fut.cancel()
                break
    master = eng.stats()
    prunes = dict(master.prunes)
    for k, v in agg_prunes.items():
        prunes[k] = prunes.get(k, 0) + v
    stats = SearchStats(master.nodes + agg_nodes,
                        max(master.max_depth, agg_depth + eng.r),
                        prunes, time.perf_counter() - t0)
    if witness_masks is not None:
        fam = Family.from_masks(inst.n, witness_masks)
        _verify_witness(fam, inst)
        return Feasible(fam, stats)
    if exhausted:
        return Infeasible(stats)
    return Unknown(stats)


def feasible_exact_profile(inst: ProfileInstance,
                           budget: SearchBudget | None = None,
                           config: SearchConfig | None = None) -> SearchOutcome:
    """Decide an exact-profile instance.

    Feasible carries a re-verified witness; Infeasible is reported only
    after the (pruned but complete) space is exhausted; Unknown means the
    budget expired first.
    """
    budget = budget or SearchBudget()
    config = config or SearchConfig()
    deadline = (time.perf_counter() + budget.wall_time
                if budget.wall_time is not None else None)
    if budget.threads > 1:
        return _run_parallel(inst, config, deadline, budget.max_nodes,
                             budget.threads)
    return _Engine(inst, config, deadline, budget.max_nodes).run()


# -- maximizing the number of occurring sizes -------------------------------

@dataclass(frozen=True)
class Exact:
    value: int
    witness: Family
    stats: SearchStats


@dataclass(frozen=True)
class LowerBound:
    value: int
    witness: Family
    stats: SearchStats


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int
    stats: SearchStats


GMaxOutcome = Exact | LowerBound | Interval


def _level_count_cap(n: int, r: int) -> int:
    """Sound closed-form cap on the number of occurring sizes."""
    if r == 1:
        # sizes 0 and n cannot co-occur with anything else
        return 1 if n == 1 else n - 1
    if n >= 4:
        return g_upper_bound(n, r)
    return max(0, n - 1)


class _StatsAgg:
    def __init__(self):
        self.nodes = 0
        self.max_depth = 0
        self.prunes: dict[str, int] = {}
        self.t0 = time.perf_counter()

    def add(self, st: SearchStats) -> None:
        self.nodes += st.nodes
        self.max_depth = max(self.max_depth, st.max_depth)
        for k, v in st.prunes.items():
            self.prunes[k] = self.prunes.get(k, 0) + v

    def stats(self) -> SearchStats:
        return SearchStats(self.nodes, self.max_depth, dict(self.prunes),
                           time.perf_counter() - self.t0)


def g_exact(n: int, r: int, budget: SearchBudget | None = None,
            config: SearchConfig | None = None) -> GMaxOutcome:
    """Maximize the number of occurring sizes by exhausting level sets.

    Level sets of each cardinality are tried in colexicographic order from
    the closed-form cap downward; the first feasible one gives Exact when
    every larger cardinality was fully refuted and LowerBound otherwise.
    Interval(lo, hi) reports honest partial knowledge on budget expiry.
    """
    check_ground(n)
    if r < 1:
        raise InvalidInstance(f"multiplicity must be >= 1, got {r}")
    budget = budget or SearchBudget()
    config = config or SearchConfig()
    deadline = (time.perf_counter() + budget.wall_time
                if budget.wall_time is not None else None)
    nodes_left = budget.max_nodes
    allowed = list(range(1, n)) if r >= 2 else list(range(0, n + 1))
    cap = _level_count_cap(n, r)
    agg = _StatsAgg()
    trivial_lo = 1 if any(comb(n, t) >= r for t in allowed) else 0
    all_refuted_above = True
    hi = cap
    for s in range(cap, 0, -1):
        unknown_here = False
        for T in colex_subsets(allowed, s):
            wall = None
            if deadline is not None:
                wall = deadline - time.perf_counter()
                if wall <= 0:
                    return Interval(trivial_lo, hi, agg.stats())
            sub = SearchBudget(max_nodes=nodes_left, wall_time=wall,
                               threads=budget.threads)
            out = feasible_exact_profile(ProfileInstance(n, r, T), sub, config)
            agg.add(out.stats)
            if nodes_left is not None:
                nodes_left -= out.stats.nodes
                if nodes_left <= 0 and not isinstance(out, Feasible):
                    return Interval(trivial_lo, hi, agg.stats())
                nodes_left = max(nodes_left, 1)
            if isinstance(out, Feasible):
                if all_refuted_above:
                    return Exact(s, out.witness, agg.stats())
                return LowerBound(s, out.witness, agg.stats())
            if isinstance(out, Unknown):
                unknown_here = True
        if unknown_here:
            all_refuted_above = False
        else:
            hi = s - 1
    if all_refuted_above:
        return Exact(0, Family(n, ()), agg.stats())
    return Interval(trivial_lo, hi, agg.stats())


# -- threshold certification -------------------------------------------------

@dataclass(frozen=True)
class ThresholdReport:
    """Per-n outcome of the n-3 target: achieved, refuted, or unknown."""

    n: int
    r: int
    status: str
    method: str
    witness: Family | None
    stats: SearchStats | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "status": self.status,
            "method": self.method,
            "witness_sets": None if self.witness is None else self.witness.sets(),
            "stats": None if self.stats is None else self.stats.to_dict(),
        }


def certify_threshold_range(r: int, n_from: int, n_to: int,
                            budget: SearchBudget | None = None,
                            config: SearchConfig | None = None) -> list[ThresholdReport]:
    """For each n in the range, decide whether n-3 occurring sizes are achievable.

    The contiguous level set {2..n-2} is tried first (every known extremal
    family uses it); on Infeasible the full maximizer runs as a fallback.
    When the closed-form bound already rules out n-3, no search is run.
    The budget applies per instance.
    """
    if r < 2:
        raise InvalidInstance("threshold certification needs r >= 2")
    if not 4 <= n_from <= n_to <= 64:
        raise InvalidInstance("range must satisfy 4 <= n_from <= n_to <= 64")
    reports = []
    for n in range(n_from, n_to + 1):
        target = n - 3
        if target > g_upper_bound(n, r):
            reports.append(ThresholdReport(n, r, "refuted", "bound", None, None))
            continue
        inst = ProfileInstance(n, r, tuple(range(2, n - 1)))
        out = feasible_exact_profile(inst, budget, config)
        if isinstance(out, Feasible):
            _verify_witness(out.witness, inst)
            reports.append(ThresholdReport(n, r, "achieved", "search",
                                           out.witness, out.stats))
        elif isinstance(out, Unknown):
            reports.append(ThresholdReport(n, r, "unknown", "search", None,
                                           out.stats))
        else:
            got = g_exact(n, r, budget, config)
            if isinstance(got, Exact) and got.value == target:
                reports.append(ThresholdReport(n, r, "achieved", "g_exact",
                                               got.witness, got.stats))
            elif isinstance(got, Exact):
                reports.append(ThresholdReport(n, r, "refuted", "g_exact",
                                               None, got.stats))
            else:
                st = got.stats
                reports.append(ThresholdReport(n, r, "unknown", "g_exact",
                                               None, st))
    return reports
