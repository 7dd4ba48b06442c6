"""Exact density profiles and the three density notions.

Layer density d(n) = |S ∩ F(n)| / q**n is computed with big integers and
held as a Fraction; the asymptotic and Banach values over a finite horizon
are honest estimates unless the profile is backed by an automaton and an
eventually periodic pattern was detected, in which case the limit is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .sets import (
    Dfa,
    LayerCount,
    LayeredSet,
    dfa_layer_counts,
    dfa_prefix_excluded_count,
    explicit_prefix_excluded,
)

DEFAULT_REGULAR_HORIZON = 64
DEFAULT_MIN_WINDOW = 8


@dataclass(frozen=True)
class WindowSpec:
    """A closed integer interval [start, end] of layer indices."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 1 or self.end < self.start:
            raise ValueError(f"bad window [{self.start}, {self.end}]")

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass(frozen=True)
class PeriodReport:
    preperiod: int
    period: int
    holds: bool


@dataclass(frozen=True)
class DensityProfile:
    """d(1..horizon) as exact rationals, plus the underlying counts.

    extendable marks profiles backed by an automaton, whose layer counts
    are determined at every length; explicit truncations are not, so no
    limit claimed from them is ever flagged exact.
    """

    horizon: int
    counts: tuple[LayerCount, ...]
    extendable: bool

    def __post_init__(self) -> None:
        if self.horizon < 1 or len(self.counts) != self.horizon:
            raise ValueError("profile must cover layers 1..horizon")

    def density(self, n: int) -> Fraction:
        if not 1 <= n <= self.horizon:
            raise ValueError(f"layer {n} outside profile horizon {self.horizon}")
        return self.counts[n - 1].density

    @property
    def densities(self) -> tuple[Fraction, ...]:
        return tuple(c.density for c in self.counts)


@dataclass(frozen=True)
class DensityLimit:
    """Result of an asymptotic/Banach evaluation over a finite profile.

    value is the exact limit when exact is set, and otherwise the best
    finite-horizon estimate; window is the window attaining that estimate.
    """

    value: Fraction
    exact: bool
    finite_max: Fraction
    window: WindowSpec
    period: PeriodReport


def profile(s: LayeredSet | Dfa, horizon: int | None = None) -> DensityProfile:
    """Exact density profile of s up to the horizon."""
    if isinstance(s, LayeredSet):
        if horizon is None:
            horizon = s.horizon
        if horizon > s.horizon:
            raise ValueError(
                f"profile horizon {horizon} exceeds explicit horizon {s.horizon}"
            )
        counts = tuple(
            LayerCount(n, s.layer_count(n), s.alphabet.layer_size(n))
            for n in range(1, horizon + 1)
        )
        return DensityProfile(horizon, counts, extendable=False)
    if horizon is None:
        horizon = DEFAULT_REGULAR_HORIZON
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    raw = dfa_layer_counts(s, horizon)
    counts = tuple(
        LayerCount(n, raw[n - 1], s.alphabet.layer_size(n))
        for n in range(1, horizon + 1)
    )
    return DensityProfile(horizon, counts, extendable=True)


def refined_density(
    s: LayeredSet | Dfa, n: int, ells: Iterable[int]
) -> Fraction:
    """d(n; l1,...,lk) = |S(n; l1,...,lk)| / q**n."""
    ells = tuple(ells)
    if isinstance(s, LayeredSet):
        restricted = explicit_prefix_excluded(s, n, ells)
        return Fraction(restricted.layer_count(n), s.alphabet.layer_size(n))
    return Fraction(dfa_prefix_excluded_count(s, n, ells), s.alphabet.layer_size(n))


def ball_density(s: LayeredSet | Dfa, n: int) -> Fraction:
    """|S ∩ F_<=(n)| / |F_<=(n)| with exact big-integer counts."""
    if isinstance(s, LayeredSet):
        if n > s.horizon:
            raise ValueError(f"ball radius {n} exceeds horizon {s.horizon}")
        member = sum(s.layer_count(i) for i in range(1, n + 1))
        q = s.alphabet.q
    else:
        member = sum(dfa_layer_counts(s, n))
        q = s.alphabet.q
    total = sum(q**i for i in range(1, n + 1))
    return Fraction(member, total)


def detect_period(p: DensityProfile) -> PeriodReport:
    """Smallest eventually-periodic pattern with two full periods of evidence."""
    h = p.horizon
    if h < 4:
        raise ValueError(f"period detection needs horizon >= 4, got {h}")
    d = p.densities
    for period in range(1, h // 3 + 1):
        bad = 0
        for n in range(h - period, 0, -1):
            if d[n - 1] != d[n - 1 + period]:
                bad = n
                break
        preperiod = bad + 1
        if h - preperiod + 1 >= 2 * period:
            return PeriodReport(preperiod, period, True)
    return PeriodReport(0, 0, False)


def _period_mean(p: DensityProfile, report: PeriodReport) -> Fraction:
    start = report.preperiod
    return Fraction(
        sum(p.densities[start - 1 : start - 1 + report.period], Fraction(0)),
        report.period,
    )


def upper_asymptotic(p: DensityProfile) -> DensityLimit:
    """limsup of prefix averages: exact under detected periodicity."""
    best = Fraction(-1)
    best_n = 1
    acc = Fraction(0)
    for n in range(1, p.horizon + 1):
        acc += p.densities[n - 1]
        mean = acc / n
        if mean > best:
            best = mean
            best_n = n
    window = WindowSpec(1, best_n)
    report = detect_period(p) if p.horizon >= 4 else PeriodReport(0, 0, False)
    if p.extendable and report.holds:
        return DensityLimit(_period_mean(p, report), True, best, window, report)
    return DensityLimit(best, False, best, window, report)


def upper_banach(p: DensityProfile, min_window: int = DEFAULT_MIN_WINDOW) -> DensityLimit:
    """limsup of window means over windows of length >= min_window."""
    if not 1 <= min_window <= p.horizon:
        raise ValueError(
            f"min window {min_window} outside 1..{p.horizon}"
        )
    prefix = [Fraction(0)]
    for d in p.densities:
        prefix.append(prefix[-1] + d)
    best = Fraction(-1)
    best_w = WindowSpec(1, min_window)
    for m in range(1, p.horizon - min_window + 2):
        for n in range(m + min_window - 1, p.horizon + 1):
            mean = (prefix[n] - prefix[m - 1]) / (n - m + 1)
            if mean > best:
                best = mean
                best_w = WindowSpec(m, n)
    report = detect_period(p) if p.horizon >= 4 else PeriodReport(0, 0, False)
    if p.extendable and report.holds:
        return DensityLimit(_period_mean(p, report), True, best, best_w, report)
    return DensityLimit(best, False, best, best_w, report)


# ---------------------------------------------------------------------------
# Report emitters


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def profile_csv(p: DensityProfile) -> str:
    lines = ["n,count,total,density_num,density_den"]
    for c in p.counts:
        d = c.density
        lines.append(f"{c.n},{c.count},{c.total},{d.numerator},{d.denominator}")
    return "\n".join(lines) + "\n"


def limit_dict(limit: DensityLimit) -> dict:
    return {
        "value": frac_str(limit.value),
        "exact": limit.exact,
        "finite_max": frac_str(limit.finite_max),
        "window": [limit.window.start, limit.window.end],
        "period": {
            "holds": limit.period.holds,
            "preperiod": limit.period.preperiod,
            "period": limit.period.period,
        },
    }


def limits_report(p: DensityProfile, min_window: int = DEFAULT_MIN_WINDOW) -> dict:
    return {
        "horizon": p.horizon,
        "extendable": p.extendable,
        "asymptotic": limit_dict(upper_asymptotic(p)),
        "banach": dict(limit_dict(upper_banach(p, min_window)), min_window=min_window),
    }


def limits_json(p: DensityProfile, min_window: int = DEFAULT_MIN_WINDOW) -> str:
    return json.dumps(limits_report(p, min_window), indent=2) + "\n"
