"""Inequality certificates for product-free sets.

Implements the chained refined-density inequality, the greedy extraction of
an increasing length sequence whose refined densities accumulate toward 1,
the resulting window bound, and the golden-ratio level-set argument.  The
threshold phi = (sqrt(5)-1)/2 is never touched as a float: comparisons of a
rational d against phi use the algebraic rule d > phi <=> (2d+1)^2 > 5, and
quantities mixing phi are carried symbolically as a + b*sqrt(5).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .density import WindowSpec, profile, refined_density
from .sets import Dfa, LayeredSet, validate_ell_sequence

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# Exact arithmetic in Q[sqrt(5)]


@dataclass(frozen=True)
class Surd:
    """The real number a + b*sqrt(5) with rational a, b."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(x: "Surd | Fraction | int") -> "Surd":
        if isinstance(x, Surd):
            return x
        return Surd(Fraction(x), Fraction(0))

    def __add__(self, other: "Surd | Fraction | int") -> "Surd":
        o = Surd.of(other)
        return Surd(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b)

    def __sub__(self, other: "Surd | Fraction | int") -> "Surd":
        return self + (-Surd.of(other))

    def __rsub__(self, other: "Surd | Fraction | int") -> "Surd":
        return Surd.of(other) + (-self)

    def __mul__(self, other: "Surd | Fraction | int") -> "Surd":
        o = Surd.of(other)
        return Surd(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other: "Fraction | int") -> "Surd":
        return Surd(self.a / other, self.b / other)

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(5)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare a^2 with 5 b^2 on the side of the larger term.
        lhs, rhs = a * a, 5 * b * b
        if a > 0:  # b < 0: positive iff a^2 > 5 b^2
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def __lt__(self, other) -> bool:
        return (self - Surd.of(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - Surd.of(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - Surd.of(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - Surd.of(other)).sign() >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5 ** 0.5

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt(5)"


#: (sqrt(5) - 1) / 2, the positive root of x^2 + x = 1.
PHI = Surd(Fraction(-1, 2), Fraction(1, 2))

#: (1 + PHI) / 2 = (1 + sqrt(5)) / 4.
PHI_BOUND_CONSTANT = Surd(Fraction(1, 4), Fraction(1, 4))


def exceeds_phi(d: Fraction) -> bool:
    """d > phi for rational d >= 0, decided as (2d+1)^2 > 5."""
    if d < 0:
        raise ValueError(f"density must be nonnegative, got {d}")
    t = 2 * d + 1
    return t * t > 5


# ---------------------------------------------------------------------------
# The chained inequality


@dataclass(frozen=True)
class ChainedInequalityReport:
    """Both sides of the chained inequality at (n; l1,...,lk).

    lhs sums refined densities times complementary layer densities plus
    d(n); mid sums the refined densities plus the fully refined d(n; ls).
    For a product-free set, lhs <= mid <= 1.
    """

    n: int
    lengths: tuple[int, ...]
    refined_terms: tuple[Fraction, ...]
    lhs: Fraction
    mid: Fraction
    ok: bool


def chained_inequality_check(
    s: LayeredSet | Dfa, lengths: Sequence[int], n: int
) -> ChainedInequalityReport:
    lengths = tuple(lengths)
    validate_ell_sequence(lengths, n)
    terms = tuple(
        refined_density(s, ell, lengths[:i]) for i, ell in enumerate(lengths)
    )
    prof = profile(s, n)
    lhs = sum(
        (t * prof.density(n - ell) for t, ell in zip(terms, lengths)),
        prof.density(n),
    )
    mid = sum(terms, refined_density(s, n, lengths))
    return ChainedInequalityReport(
        n, lengths, terms, lhs, mid, ok=(lhs <= mid <= 1)
    )


# ---------------------------------------------------------------------------
# Greedy length-sequence extraction


@dataclass(frozen=True)
class LSequence:
    """Increasing lengths with their refined densities and partial sums."""

    lengths: tuple[int, ...]
    terms: tuple[Fraction, ...]
    cumulative: tuple[Fraction, ...]

    @property
    def k(self) -> int:
        return len(self.lengths)

    @property
    def total(self) -> Fraction:
        return self.cumulative[-1] if self.cumulative else Fraction(0)


@dataclass(frozen=True)
class WindowProbe:
    """One inspected window during extraction."""

    stage: int
    window: WindowSpec
    mean: Fraction
    qualifies: bool
    chosen: int | None


@dataclass(frozen=True)
class ExtractionTrace:
    policy: str
    probes: tuple[WindowProbe, ...]
    stop_reason: str


def _doubling_windows(lo: int, horizon: int, min_window: int):
    """Candidate windows: lengths doubling from min_window, starts ascending."""
    length = min_window
    while lo + length - 1 <= horizon:
        for start in range(lo, horizon - length + 2):
            yield WindowSpec(start, start + length - 1)
        length *= 2


def extract_lsequence(
    s: LayeredSet | Dfa,
    eps: Fraction,
    horizon: int,
    min_window: int = 8,
) -> tuple[LSequence, ExtractionTrace]:
    """Greedily build lengths l1 < l2 < ... with cumulative refined densities
    reaching 1 - 1/2^k at every stage.

    Starts from the smallest l1 with d(l1) >= 1/2; each later stage scans
    windows above the current l for one with mean > 1/2 + eps and picks the
    smallest qualifying n inside it.  Running out of windows or candidates
    is a result (recorded in the trace), not an error.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    prof = profile(s, horizon)
    dens = prof.densities
    prefix = [Fraction(0)]
    for d in dens:
        prefix.append(prefix[-1] + d)

    policy = f"doubling windows, min length {min_window}, starts ascending"
    probes: list[WindowProbe] = []
    lengths: list[int] = []
    terms: list[Fraction] = []
    cumulative: list[Fraction] = []

    first = next((n for n in range(1, horizon + 1) if dens[n - 1] >= HALF), None)
    if first is None:
        return (
            LSequence((), (), ()),
            ExtractionTrace(policy, tuple(probes), "no_first_length"),
        )
    lengths.append(first)
    terms.append(dens[first - 1])
    cumulative.append(dens[first - 1])

    while True:
        k = len(lengths)
        if cumulative[-1] >= 1:
            return (
                LSequence(tuple(lengths), tuple(terms), tuple(cumulative)),
                ExtractionTrace(policy, tuple(probes), "complete"),
            )
        target = 1 - Fraction(1, 2 ** (k + 1))
        threshold = HALF + eps
        chosen: int | None = None
        chosen_term = Fraction(0)
        for window in _doubling_windows(lengths[-1] + 1, horizon, min_window):
            mean = (prefix[window.end] - prefix[window.start - 1]) / window.length
            qualifies = mean > threshold
            picked: int | None = None
            if qualifies:
                for n in range(window.start, window.end + 1):
                    t = refined_density(s, n, lengths)
                    if cumulative[-1] + t >= target:
                        picked = n
                        chosen_term = t
                        break
            probes.append(WindowProbe(k, window, mean, qualifies, picked))
            if picked is not None:
                chosen = picked
                break
        if chosen is None:
            return (
                LSequence(tuple(lengths), tuple(terms), tuple(cumulative)),
                ExtractionTrace(policy, tuple(probes), "exhausted"),
            )
        lengths.append(chosen)
        terms.append(chosen_term)
        cumulative.append(cumulative[-1] + chosen_term)


# ---------------------------------------------------------------------------
# Window bound


@dataclass(frozen=True)
class WindowCertificate:
    window: WindowSpec
    k: int
    last_length: int
    bound: Fraction
    mean: Fraction
    holds: bool


def window_bound_certificate(
    s: LayeredSet | Dfa, window: WindowSpec, lseq: LSequence
) -> WindowCertificate:
    """Certified window bound 2^k/(2^(k+1)-1) + 2(l_k+1)/|I|.

    Requires the sequence's cumulative sum to have reached 1 - 1/2^k and the
    window to sit entirely above l_k; the verdict asserts the window's mean
    layer density stays at or below the bound.
    """
    k = lseq.k
    if k < 1:
        raise ValueError("window bound needs a nonempty length sequence")
    if lseq.total < 1 - Fraction(1, 2**k):
        raise ValueError(
            f"cumulative refined density {lseq.total} below 1 - 1/2^{k}"
        )
    lk = lseq.lengths[-1]
    if window.start <= lk:
        raise ValueError(f"window must start above l_k = {lk}")
    prof = profile(s, window.end)
    mean = Fraction(
        sum(prof.density(n) for n in range(window.start, window.end + 1)),
        1,
    ) / window.length
    bound = Fraction(2**k, 2 ** (k + 1) - 1) + Fraction(2 * (lk + 1), window.length)
    return WindowCertificate(window, k, lk, bound, mean, mean <= bound)


# ---------------------------------------------------------------------------
# Level-set argument


@dataclass(frozen=True)
class LevelSetReport:
    """Layers whose density exceeds phi, with the sum-free verdict."""

    horizon: int
    level_set: tuple[int, ...]
    sum_free: bool
    violation: tuple[int, int, int] | None


def phi_level_set(s: LayeredSet | Dfa, horizon: int) -> LevelSetReport:
    prof = profile(s, horizon)
    level = tuple(n for n in range(1, horizon + 1) if exceeds_phi(prof.density(n)))
    members = set(level)
    for a in level:
        for b in level:
            if b < a:
                continue
            if a + b in members:
                return LevelSetReport(horizon, level, False, (a, b, a + b))
    return LevelSetReport(horizon, level, True, None)


@dataclass(frozen=True)
class SimpleBoundReport:
    """Finite-scale form of the level-set density bound.

    implied_bound is (t + (H - t) * phi) / H where t counts layers <= H
    with density above phi; the limiting constant is (1 + phi)/2.
    """

    horizon: int
    level_set: tuple[int, ...]
    implied_bound: Surd
    raw_estimate: Fraction
    bound_constant: Surd


def simple_bound_estimate(s: LayeredSet | Dfa, horizon: int) -> SimpleBoundReport:
    from .density import upper_asymptotic

    report = phi_level_set(s, horizon)
    t = len(report.level_set)
    implied = (Surd.of(Fraction(t)) + PHI * Fraction(horizon - t)) / horizon
    raw = upper_asymptotic(profile(s, horizon))
    return SimpleBoundReport(
        horizon, report.level_set, implied, raw.value, PHI_BOUND_CONSTANT
    )
