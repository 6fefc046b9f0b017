"""Deterministic construction of antichains realizing n-3 occurring sizes.

The construction builds a "half" family of sets that all contain a fixed
apex element and have sizes 2..floor(n/2), with a label gadget telling the
levels apart, then closes it under complementation.  Every free choice is
resolved colexicographically over ascending elements, so identical inputs
give bit-identical families on every run.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .bounds import Inapplicable, binomial, construction_applicability
from .family import Family, is_r_multiplicity_antichain, mask_of


class GadgetPreconditionViolated(ValueError):
    """A label-gadget inequality fails; the message names it."""


class LayoutInfeasible(ValueError):
    """No valid element partition exists for these (n, r)."""


class ConstructionPostconditionFailed(RuntimeError):
    """The built family failed verification; this indicates an internal bug."""


def colex_subsets(elements: Sequence[int], k: int) -> Iterator[tuple[int, ...]]:
    """Yield the k-subsets of an ascending sequence in colexicographic order."""
    elems = tuple(elements)
    if k < 0 or k > len(elems):
        return iter(())

    def rec(limit: int, kk: int) -> Iterator[tuple[int, ...]]:
        if kk == 0:
            yield ()
            return
        for top in range(kk - 1, limit):
            for rest in rec(top, kk - 1):
                yield rest + (elems[top],)

    return rec(len(elems), k)


@dataclass(frozen=True)
class LabelGadget:
    """Antichain of per-level label sets over pool + hub.

    Levels 4..ell+1 get distinct 2-element labels {hub, v}; levels
    ell+2..top get distinct ell-subsets of the pool, colex-first.  No label
    contains another: the small ones hold the hub, the large ones do not.
    """

    pool: tuple[int, ...]
    hub: int
    top: int
    labels: dict[int, frozenset[int]]

    @property
    def m(self) -> int:
        return len(self.pool)

    @property
    def ell(self) -> int:
        return len(self.pool) // 2


def build_label_gadget(m: int, top: int, pool: Sequence[int], hub: int) -> LabelGadget:
    if m < 4:
        raise GadgetPreconditionViolated(f"m >= 4 required, got m={m}")
    pool = tuple(sorted(pool))
    if len(pool) != m or len(set(pool)) != m:
        raise GadgetPreconditionViolated(f"pool must hold exactly m={m} distinct elements")
    if hub in pool:
        raise GadgetPreconditionViolated("hub element must not lie in the pool")
    ell = m // 2
    if top < ell + 1:
        raise GadgetPreconditionViolated(f"top >= ell+1 required: {top} < {ell + 1}")
    room = binomial(m, ell)
    if top - (ell + 1) > room:
        raise GadgetPreconditionViolated(
            f"top-(ell+1) <= C(m,ell) required: {top - (ell + 1)} > {room}")
    labels: dict[int, frozenset[int]] = {}
    for t in range(4, ell + 2):
        labels[t] = frozenset((hub, pool[t - 4]))
    gen = colex_subsets(pool, ell)
    for t in range(ell + 2, top + 1):
        labels[t] = frozenset(next(gen))
    return LabelGadget(pool, hub, top, labels)


@dataclass(frozen=True)
class ConstructionLayout:
    """Disjoint element blocks, assigned in ascending order from 1.

    apex sits in every half-family set; each pair_tail completes one
    size-2 set; triple_anchor sits in every size-3 set; label_pool and
    label_hub feed the gadget; filler and spare together form the ballast
    pool the per-level subsets are drawn from.
    """

    n: int
    r: int
    k: int
    apex: int
    pair_tails: tuple[int, ...]
    triple_anchor: int
    label_pool: tuple[int, ...]
    label_hub: int
    filler: tuple[int, ...]
    spare: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = [(self.apex,), self.pair_tails, (self.triple_anchor,),
                 self.label_pool, (self.label_hub,), self.filler, self.spare]
        flat = [e for part in parts for e in part]
        if sorted(flat) != list(range(1, self.n + 1)):
            raise LayoutInfeasible("blocks do not partition the ground set")
        if len(self.pair_tails) != self.r:
            raise LayoutInfeasible("pair tail block must hold r elements")
        if len(self.filler) != self.k - 2:
            raise LayoutInfeasible("filler block must hold k-2 elements")
        if len(self.ballast_pool) < self.r:
            raise LayoutInfeasible("ballast pool smaller than r")

    @property
    def m(self) -> int:
        return len(self.label_pool)

    @property
    def ballast_pool(self) -> tuple[int, ...]:
        return self.filler + self.spare


def build_layout(n: int, r: int) -> ConstructionLayout:
    """Assign the construction blocks for (n, r), ascending from the apex 1."""
    app = construction_applicability(n, r)
    if isinstance(app, Inapplicable):
        raise LayoutInfeasible(f"(n={n}, r={r}) not constructible: {app.reason}")
    k, m = app.facts["k"], app.facts["m"]
    return ConstructionLayout(
        n=n,
        r=r,
        k=k,
        apex=1,
        pair_tails=tuple(range(2, r + 2)),
        triple_anchor=r + 2,
        label_pool=tuple(range(r + 3, r + m + 3)),
        label_hub=r + m + 3,
        filler=tuple(range(r + m + 4, r + m + 2 + k)),
        spare=tuple(range(r + m + 2 + k, n + 1)),
    )


def build_half_family(layout: ConstructionLayout) -> Family:
    """The r sets per size from 2 up to k, all containing the apex."""
    n, r, k = layout.n, layout.r, layout.k
    gadget = build_label_gadget(layout.m, k, layout.label_pool, layout.label_hub)
    ballast = layout.ballast_pool
    apex_bit = 1 << (layout.apex - 1)
    masks = [apex_bit | 1 << (tail - 1) for tail in layout.pair_tails]
    anchor_bit = 1 << (layout.triple_anchor - 1)
    for x in ballast[:r]:
        masks.append(apex_bit | anchor_bit | 1 << (x - 1))
    for t in range(4, k + 1):
        label_mask = mask_of(gadget.labels[t], n)
        s = t - 1 - len(gadget.labels[t])
        if not 1 <= s <= len(ballast) - 1:
            raise ConstructionPostconditionFailed(
                f"ballast subset size {s} out of range at level {t}")
        gen = colex_subsets(ballast, s)
        for _ in range(r):
            try:
                picked = next(gen)
            except StopIteration:  # pragma: no cover - excluded by s <= |ballast|-1
                raise ConstructionPostconditionFailed(
                    f"fewer than {r} ballast subsets at level {t}") from None
            masks.append(apex_bit | label_mask | mask_of(picked, n))
    return Family.from_masks(n, masks)


def build_construction(n: int, r: int) -> Family:
    """Half family united with its complements: r sets on every size 2..n-2.

    The result is re-verified before returning; a failure raises
    ConstructionPostconditionFailed and must never happen.
    """
    half = build_half_family(build_layout(n, r))
    full = (1 << n) - 1
    combined = list(half.members) + [full ^ m for m in half.members]
    if len(set(combined)) != len(combined):
        raise ConstructionPostconditionFailed("half family overlaps its complements")
    fam = Family.from_masks(n, combined)
    if not is_r_multiplicity_antichain(fam, r):
        raise ConstructionPostconditionFailed("built family failed verification")
    if fam.profile.occurring != frozenset(range(2, n - 1)):
        raise ConstructionPostconditionFailed("built family misses target sizes")
    return fam
