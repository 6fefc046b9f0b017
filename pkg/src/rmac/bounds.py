"""Closed-form bounds and thresholds, evaluated in exact integer arithmetic.

The quantities bounded here: g(n, r), the maximum number of distinct sizes
an antichain on {1..n} can realize while keeping at least r members on
every occurring size; and the threshold n0(r), the least n0 with
g(n, r) = n - 3 for every n > n0.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Arguments outside the range a bound formula covers."""


def binomial(m: int, k: int) -> int:
    """C(m, k), zero when k < 0 or k > m."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if k < 0 or k > m:
        return 0
    return math.comb(m, k)


def central_binomial_inequality_holds(m: int) -> bool:
    """Decide C(m, m//2) >= 2**m / (2*sqrt(m)) exactly.

    The inequality is squared to (2*C)**2 * m >= 4**m so the test never
    touches floating point.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    c = binomial(m, m // 2)
    return (2 * c) ** 2 * m >= 4 ** m


# Central binomial coefficients C(m, m//2) for m = 1, 2, ...; strictly
# increasing, extended on demand.
_CENTRAL: list[int] = [1]


def min_m_for(K: int) -> int:
    """Least m >= 1 with C(m, m//2) >= K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    while _CENTRAL[-1] < K:
        m = len(_CENTRAL) + 1
        _CENTRAL.append(binomial(m, m // 2))
    return bisect_left(_CENTRAL, K) + 1


def g_upper_bound(n: int, r: int) -> int:
    """Best closed-form upper bound on g(n, r).

    Inside the window r >= 4, r+3 <= n <= 2r+2 the bound sharpens to n-4;
    everywhere else (n >= 4, r >= 2) it is the universal n-3.
    """
    if n < 4 or r < 2:
        raise DomainError(f"bound needs n >= 4 and r >= 2, got n={n}, r={r}")
    if r >= 4 and r + 3 <= n <= 2 * r + 2:
        return n - 4
    return n - 3


def construction_threshold(r: int) -> float:
    """Real-valued threshold 2r + 2*log2(r) + log2(log2(r)) + 15.

    Above it the explicit construction always realizes n-3 occurring
    sizes.  For r = 2 the nested log term is log2(1) = 0.
    """
    if r < 2:
        raise DomainError("threshold formula needs r >= 2")
    lr = math.log2(r)
    return 2 * r + 2 * lr + math.log2(lr) + 15.0


def _threshold_is_integral(r: int) -> bool:
    # 2*log2(r) + log2(log2(r)) is an integer only for r = 2**(2**j).
    a = r.bit_length() - 1
    return r == 1 << a and a >= 1 and a & (a - 1) == 0


def _guarded_floor(x: float, exact: bool) -> int:
    if exact:
        return round(x)
    fl = math.floor(x)
    if min(x - fl, fl + 1 - x) < 1e-6:
        raise ArithmeticError(f"cannot certify floor({x!r}) from float arithmetic alone")
    return fl


def threshold_floor(r: int) -> int:
    """floor of construction_threshold(r), guarded against float error."""
    return _guarded_floor(construction_threshold(r), _threshold_is_integral(r))


def threshold_ceil(r: int) -> int:
    """Least integer n satisfying n >= construction_threshold(r)."""
    fl = threshold_floor(r)
    return fl if _threshold_is_integral(r) else fl + 1


@dataclass(frozen=True)
class BoundsReport:
    """Every closed-form bound evaluated at (n, r); n and g_upper optional."""

    r: int
    n: int | None
    g_upper: int | None
    n0_lower: int
    n0_upper: int
    n0_exact: int | None
    notes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n0_lower > self.n0_upper:
            raise ValueError("n0_lower must not exceed n0_upper")
        if self.n0_exact is not None and not self.n0_lower <= self.n0_exact <= self.n0_upper:
            raise ValueError("n0_exact must lie in [n0_lower, n0_upper]")

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "g_upper": self.g_upper,
            "n0_lower": self.n0_lower,
            "n0_upper": self.n0_upper,
            "n0_exact": self.n0_exact,
            "notes": dict(self.notes),
        }


_EXACT_THRESHOLDS = {2: 3, 3: 8}


def n0_bounds(r: int, n: int | None = None) -> BoundsReport:
    """Bounds on the threshold n0(r); includes g_upper_bound(n, r) when n given."""
    if r < 2:
        raise DomainError("n0 is defined for r >= 2")
    notes: dict[str, str] = {}
    exact = _EXACT_THRESHOLDS.get(r)
    if r in _EXACT_THRESHOLDS:
        lower = _EXACT_THRESHOLDS[r]
        notes["n0_lower"] = "known exact threshold for this multiplicity"
        notes["n0_exact"] = "known exact threshold for this multiplicity"
    else:
        lower = 2 * r + 2
        notes["n0_lower"] = (
            "no family with n-3 occurring sizes exists on 2r+2 ground elements"
        )
    upper = threshold_floor(r)
    notes["n0_upper"] = (
        "floor of the construction threshold 2r + 2*log2(r) + log2(log2(r)) + 15"
    )
    g_upper = None
    if n is not None:
        g_upper = g_upper_bound(n, r)
        notes["g_upper"] = (
            "window bound n-4" if g_upper == n - 4 else "universal bound n-3"
        )
    return BoundsReport(r, n, g_upper, lower, upper, exact, notes)


@dataclass(frozen=True)
class Strict:
    """The threshold inequality holds; the construction is guaranteed."""

    facts: dict[str, int]


@dataclass(frozen=True)
class Relaxed:
    """Below the threshold, but every prerequisite the construction actually
    uses holds, so it may still run; outputs are verified a posteriori."""

    facts: dict[str, int]


@dataclass(frozen=True)
class Inapplicable:
    reason: str


Applicability = Strict | Relaxed | Inapplicable


def construction_applicability(n: int, r: int) -> Applicability:
    """Decide whether the explicit construction can run at (n, r)."""
    if r < 2:
        raise DomainError("construction needs r >= 2")
    if n < 1:
        raise DomainError("n must be >= 1")
    k = n // 2
    if k < 1:
        return Inapplicable("k = floor(n/2) is zero")
    m = min_m_for(k)
    ell = m // 2
    facts = {"k": k, "m": m, "ell": ell, "reserve": n - r - m - 3}
    checks = (
        ("m >= 4", m >= 4),
        (f"k >= r+m+1 ({k} >= {r + m + 1})", k >= r + m + 1),
        (f"k >= ell+1 ({k} >= {ell + 1})", k >= ell + 1),
        (f"k-(ell+1) <= C(m,ell) ({k - (ell + 1)} <= {binomial(m, ell)})",
         k - (ell + 1) <= binomial(m, ell)),
        (f"reserve >= r ({n - r - m - 3} >= {r})", n - r - m - 3 >= r),
    )
    failed = next((name for name, ok in checks if not ok), None)
    if n >= threshold_ceil(r):
        if failed is not None:
            raise AssertionError(f"threshold case violates prerequisite: {failed}")
        return Strict(facts)
    if failed is None:
        return Relaxed(facts)
    return Inapplicable(failed)
