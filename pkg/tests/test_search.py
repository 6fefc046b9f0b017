import time
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmac.family import Family, complement_family, is_antichain, is_r_multiplicity_antichain
from rmac.oracle import profile_feasible_by_enumeration
from rmac.search import (Exact, Feasible, Infeasible, Interval, InvalidInstance,
                         LowerBound, ProfileInstance, SearchBudget, SearchConfig,
                         Unknown, certify_threshold_range, feasible_exact_profile,
                         g_exact, is_canonical_level_family, symmetry_prune_config)


def solve(n, r, levels, **kw):
    return feasible_exact_profile(ProfileInstance(n, r, tuple(levels)), **kw)


# -- instance validation -------------------------------------------------------

def test_instance_validation():
    with pytest.raises(InvalidInstance):
        ProfileInstance(4, 2, (5,))
    with pytest.raises(InvalidInstance):
        ProfileInstance(4, 0, (2,))
    with pytest.raises(InvalidInstance):
        ProfileInstance(4, 2, (2, 2))
    with pytest.raises(ValueError):
        SearchBudget(max_nodes=0)
    with pytest.raises(ValueError):
        SearchBudget(threads=0)


def test_symmetry_prune_config():
    assert symmetry_prune_config(False) == SearchConfig(symmetry=False)
    assert symmetry_prune_config(True).symmetry


# -- basic verdicts ---------------------------------------------------------------

def test_single_level_feasible():
    out = solve(4, 2, [2])
    assert isinstance(out, Feasible)
    assert out.witness.profile.counts == {2: 2}


def test_small_infeasible():
    assert isinstance(solve(3, 2, [1, 2]), Infeasible)


def test_empty_level_set_is_vacuously_feasible():
    out = solve(5, 2, [])
    assert isinstance(out, Feasible)
    assert len(out.witness) == 0


def test_levels_zero_and_n_impossible_for_r_ge_2():
    assert isinstance(solve(5, 2, [0]), Infeasible)
    assert isinstance(solve(5, 2, [5]), Infeasible)
    assert isinstance(solve(6, 3, [0, 3]), Infeasible)


def test_level_one_and_top_exclude_each_other():
    for n in (5, 6):
        assert isinstance(solve(n, 2, [1, n - 1]), Infeasible)


def test_r1_empty_set_level():
    out = solve(3, 1, [0])
    assert isinstance(out, Feasible)
    assert out.witness.members == (0,)


def test_witness_is_verified_and_exact():
    out = solve(8, 2, [2, 3, 4, 5, 6])
    assert isinstance(out, Feasible)
    prof = out.witness.profile
    assert prof.occurring == frozenset({2, 3, 4, 5, 6})
    assert all(c == 2 for c in prof.counts.values())
    assert is_antichain(out.witness)


# -- budget semantics ---------------------------------------------------------------

def test_budget_expiry_returns_unknown_never_infeasible():
    out = solve(8, 3, [2, 3, 4, 5, 6], budget=SearchBudget(max_nodes=5))
    assert isinstance(out, Unknown)
    assert out.stats.nodes >= 5


def test_stats_fields():
    out = solve(6, 2, [2, 3])
    st_ = out.stats
    assert st_.nodes > 0 and st_.elapsed >= 0
    assert set(st_.prunes) == {"pool_deficit", "level_deficit", "symmetry", "conflict"}
    assert st_.to_dict()["nodes"] == st_.nodes


# -- determinism ------------------------------------------------------------------------

def test_witness_deterministic_across_runs():
    a = solve(9, 3, range(2, 8))
    b = solve(9, 3, range(2, 8))
    assert isinstance(a, Feasible) and a.witness == b.witness


def test_parallel_same_verdict():
    for n, r, T in [(6, 3, (2, 3, 4)), (7, 2, (2, 3, 4, 5)), (8, 3, (2, 3, 4, 5, 6))]:
        seq = solve(n, r, T)
        par = solve(n, r, T, budget=SearchBudget(threads=2))
        assert type(seq).__name__ == type(par).__name__


# -- oracle agreement and prune soundness (reduced regression suite) ----------------------

def _all_level_sets(n):
    allowed = list(range(1, n))
    for size in range(0, len(allowed) + 1):
        yield from combinations(allowed, size)


@pytest.mark.parametrize("n", [4, 5])
def test_verdicts_match_definition_enumerator(n):
    for T in _all_level_sets(n):
        for r in (1, 2, 3):
            got = isinstance(solve(n, r, T), Feasible)
            assert got == profile_feasible_by_enumeration(n, r, T), (n, r, T)


@pytest.mark.parametrize("config", [
    SearchConfig(symmetry=False, forward_check=True),
    SearchConfig(symmetry=True, forward_check=False),
    SearchConfig(symmetry=False, forward_check=False),
])
def test_prune_rules_never_change_verdicts(config):
    for n in (4, 5, 6):
        for T in _all_level_sets(n):
            for r in (2, 3):
                base = solve(n, r, T)
                alt = solve(n, r, T, config=config)
                assert type(base).__name__ == type(alt).__name__, (n, r, T)


def test_complement_symmetry_of_verdicts():
    for n in (5, 6):
        for T in _all_level_sets(n):
            for r in (2, 3):
                a = solve(n, r, T)
                b = solve(n, r, tuple(sorted(n - t for t in T)))
                assert type(a).__name__ == type(b).__name__, (n, r, T)
                if isinstance(a, Feasible):
                    assert complement_family(a.witness).profile.occurring == \
                        b.witness.profile.occurring


# -- symmetry machinery ----------------------------------------------------------------------

def test_canonical_filter_counts_orbits_exactly():
    # one representative per relabelling orbit of 3 edges on 8 points
    masks = sorted(sum(1 << p for p in c) for c in combinations(range(8), 2))
    combos = list(combinations(range(len(masks)), 3))
    reps = [c for c in combos
            if is_canonical_level_family(tuple(masks[i] for i in c))]

    def apply_perm(perm, m):
        x = 0
        while m:
            low = m & -m
            m ^= low
            x |= 1 << perm[low.bit_length() - 1]
        return x

    gens = [tuple([1, 0] + list(range(2, 8))), tuple(list(range(1, 8)) + [0])]
    seen, orbits = set(), 0
    for combo in combos:
        fam = frozenset(masks[i] for i in combo)
        if fam in seen:
            continue
        orbits += 1
        stack = [fam]
        seen.add(fam)
        while stack:
            cur = stack.pop()
            for g in gens:
                img = frozenset(apply_perm(g, m) for m in cur)
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
    assert len(reps) == orbits == 5


def test_star_and_triangle_are_distinct_representatives():
    star = (0b11, 0b101, 0b1001)          # {1,2},{1,3},{1,4}
    triangle = (0b11, 0b101, 0b110)       # {1,2},{1,3},{2,3}
    assert is_canonical_level_family(star)
    assert is_canonical_level_family(triangle)


def test_large_support_bypasses_canonical_filter():
    spread = (0b11, 0b1100, 0b110000, 0b11000000, 0b1100000000)
    assert is_canonical_level_family(spread, support_cap=8)


# -- g_exact -------------------------------------------------------------------------------------

def test_g_exact_paper_values():
    out = g_exact(3, 2)
    assert isinstance(out, Exact) and out.value == 1
    assert out.witness.profile.num_levels == 1
    assert isinstance(g_exact(4, 2), Exact) and g_exact(4, 2).value == 1
    assert g_exact(5, 2).value == 2


def test_g_exact_r1():
    assert g_exact(4, 1).value == 2
    assert g_exact(3, 1).value == 2


def test_g_exact_degenerate():
    out = g_exact(1, 2)
    assert isinstance(out, Exact) and out.value == 0 and len(out.witness) == 0


def test_g_exact_budget_interval():
    out = g_exact(8, 3, budget=SearchBudget(max_nodes=10))
    assert isinstance(out, Interval)
    assert 0 <= out.lo <= out.hi <= 5


def test_g_exact_8_3_resolves_open_value():
    out = g_exact(8, 3)
    assert isinstance(out, Exact)
    assert out.value == 4
    assert is_r_multiplicity_antichain(out.witness, 3)


def test_g_exact_never_exceeds_bound_guard():
    for n in range(4, 7):
        for r in (2, 3):
            out = g_exact(n, r)
            assert isinstance(out, Exact)
            assert out.value <= n - 3


# -- certify_threshold_range -----------------------------------------------------------------------

def test_certify_r2_small_slice():
    reports = certify_threshold_range(2, 4, 7)
    assert [rep.status for rep in reports] == ["achieved"] * 4
    for rep in reports:
        assert rep.witness is not None
        assert rep.witness.profile.num_levels == rep.n - 3
        assert is_r_multiplicity_antichain(rep.witness, 2)


def test_certify_refuted_by_bound_in_window():
    rep = certify_threshold_range(4, 10, 10)[0]
    assert rep.status == "refuted" and rep.method == "bound"


def test_certify_validation():
    with pytest.raises(InvalidInstance):
        certify_threshold_range(1, 4, 6)
    with pytest.raises(InvalidInstance):
        certify_threshold_range(2, 3, 6)


def test_certify_unknown_under_tiny_budget():
    rep = certify_threshold_range(3, 9, 9, budget=SearchBudget(max_nodes=3))[0]
    assert rep.status == "unknown"
