"""Bitmask set families over a small ground set.

Subsets of the ground set {1..n} are plain ints: bit i-1 encodes element i.
A Family stores distinct member masks in canonical (size, value) order, so
two families built from the same members compare equal regardless of input
order.  All types are immutable values and safe to share between workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

MAX_GROUND = 64


class MultiplicityDeficit(ValueError):
    """An occurring level has fewer members than the requested multiplicity."""


class SizeViolation(ValueError):
    """A member set has a size the operation does not accept."""


def check_ground(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_GROUND:
        raise ValueError(f"ground size must be an int in 1..{MAX_GROUND}, got {n!r}")
    return n


def mask_of(elements: Iterable[int], n: int) -> int:
    """Encode one-based elements as a bitmask, validating range and distinctness."""
    mask = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set 1..{n}")
        bit = 1 << (e - 1)
        if mask & bit:
            raise ValueError(f"repeated element {e}")
        mask |= bit
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    """Decode a bitmask to its ascending one-based elements."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def canonical_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


@dataclass(frozen=True)
class LevelProfile:
    """Per-size member counts and the set of occurring sizes."""

    counts: dict[int, int]
    occurring: frozenset[int]

    @property
    def num_levels(self) -> int:
        return len(self.occurring)


@dataclass(frozen=True)
class Family:
    """A set family over {1..n}: distinct masks, ascending in (size, value)."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        check_ground(self.n)
        limit = 1 << self.n
        prev = None
        for m in self.members:
            if not 0 <= m < limit:
                raise ValueError(f"member {m:#x} does not fit ground set 1..{self.n}")
            key = canonical_key(m)
            if prev is not None and key <= prev:
                raise ValueError("members must be strictly increasing in (size, value) order")
            prev = key

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        ms = sorted(masks, key=canonical_key)
        for a, b in zip(ms, ms[1:]):
            if a == b:
                raise ValueError(f"duplicate member {elements_of(a)}")
        return cls(n, tuple(ms))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls.from_masks(n, (mask_of(s, n) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def sets(self) -> tuple[tuple[int, ...], ...]:
        """Members as ascending element tuples, in canonical order."""
        return tuple(elements_of(m) for m in self.members)

    @cached_property
    def profile(self) -> LevelProfile:
        counts: dict[int, int] = {}
        for m in self.members:
            t = m.bit_count()
            counts[t] = counts.get(t, 0) + 1
        return LevelProfile(counts, frozenset(counts))


def level_profile(f: Family) -> LevelProfile:
    return f.profile


def is_antichain(f: Family) -> bool:
    """True iff no member is a proper subset of another.

    Members are bucketed by size and only (smaller, larger) pairs are
    compared, one AND per pair; equal-size distinct sets never nest.
    """
    by_size: dict[int, list[int]] = {}
    for m in f.members:
        by_size.setdefault(m.bit_count(), []).append(m)
    sizes = sorted(by_size)
    for i, t in enumerate(sizes):
        small_bucket = by_size[t]
        for tt in sizes[i + 1:]:
            for big in by_size[tt]:
                for small in small_bucket:
                    if small & big == small:
                        return False
    return True


def is_r_multiplicity_antichain(f: Family, r: int) -> bool:
    """Antichain whose every occurring size class holds at least r members."""
    if r < 1:
        raise ValueError("multiplicity must be >= 1")
    return all(c >= r for c in f.profile.counts.values()) and is_antichain(f)


def complement_family(f: Family) -> Family:
    full = (1 << f.n) - 1
    return Family.from_masks(f.n, (full ^ m for m in f.members))


def trim_to_exact(f: Family, r: int) -> Family:
    """Keep exactly the r canonically-first members of every occurring level.

    Preserves the occurring size set and the antichain property; raises
    MultiplicityDeficit if some occurring level has fewer than r members.
    """
    if r < 1:
        raise ValueError("multiplicity must be >= 1")
    deficit = sorted(t for t, c in f.profile.counts.items() if c < r)
    if deficit:
        raise MultiplicityDeficit(f"levels {deficit} have fewer than {r} members")
    kept = []
    taken: dict[int, int] = {}
    for m in f.members:
        t = m.bit_count()
        c = taken.get(t, 0)
        if c < r:
            kept.append(m)
            taken[t] = c + 1
    return Family(f.n, tuple(kept))


@dataclass(frozen=True)
class Star:
    center: int


@dataclass(frozen=True)
class Triangle:
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class NotIntersecting:
    first: tuple[int, ...]
    second: tuple[int, ...]


@dataclass(frozen=True)
class Empty:
    pass


TwoSetShape = Star | Triangle | NotIntersecting | Empty


def classify_two_sets(f: Family) -> TwoSetShape:
    """Classify a family of 2-sets by its pairwise-intersection structure.

    Pairwise-intersecting families of 2-sets are either a star (a common
    element) or the triangle on three points; otherwise a disjoint witness
    pair is reported.  The star center is the smallest common element.
    """
    for m in f.members:
        if m.bit_count() != 2:
            raise SizeViolation(f"member {elements_of(m)} is not a 2-set")
    ms = f.members
    if not ms:
        return Empty()
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if a & b == 0:
                return NotIntersecting(elements_of(a), elements_of(b))
    common = ms[0]
    for m in ms[1:]:
        common &= m
    if common:
        return Star((common & -common).bit_length())
    union = 0
    for m in ms:
        union |= m
    pts = elements_of(union)
    if len(ms) != 3 or len(pts) != 3:
        raise AssertionError("pairwise-intersecting 2-sets must form a star or a triangle")
    return Triangle(*pts)
