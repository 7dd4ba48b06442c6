"""Named set constructions and randomized product-free fixtures.

Builds the odd-occurrence parity sets, the counting-measure block set whose
ball density approaches 1, the asymmetric prefix/suffix/complement triple
with densities near phi, and seeded greedy product-free sets used as test
fixtures throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .proofkit import PHI, Surd
from .sets import (
    DEFAULT_STATE_CAP,
    Dfa,
    LayeredSet,
    _minimized,
    dfa_complement,
    dfa_concat,
)
from .words import Alphabet, ENUMERATION_BUDGET, reversed_rank


def odd_occurrence(alphabet: Alphabet, gamma: str) -> Dfa:
    """Words in which symbols from gamma occur an odd number of times in total.

    A two-state parity automaton; product-free for every nonempty gamma.
    """
    if not gamma:
        raise ValueError("gamma must be a nonempty set of symbols")
    if len(set(gamma)) != len(gamma):
        raise ValueError(f"gamma has repeated symbols: {gamma!r}")
    marked = {alphabet.index(ch) for ch in gamma}
    q = alphabet.q
    delta = tuple(
        tuple(s ^ (1 if c in marked else 0) for c in range(q)) for s in (0, 1)
    )
    return _minimized(Dfa(alphabet, 2, 0, frozenset({1}), delta))


def pathology_lengths(c: int, horizon: int) -> list[int]:
    """Lengths in the union of blocks (2**n, 2**n + c] for n >= c, capped."""
    out = []
    n = c
    while 2**n < horizon:
        out.extend(range(2**n + 1, min(2**n + c, horizon) + 1))
        n += 1
    return out


def counting_pathology(
    alphabet: Alphabet, c: int, horizon: int | None = None
) -> LayeredSet:
    """Full layers at lengths in the blocks (2**n, 2**n + c], n >= c.

    Under the counting (ball) measure this set has density at least 1 - 1/c
    at radius 2**c + c while every product of two members at that horizon is
    longer than the horizon.  Only occupied layers carry nonzero bitsets.
    """
    if c < 2:
        raise ValueError(f"c must be >= 2, got {c}")
    if alphabet.q < 2:
        raise ValueError("the block construction needs at least two symbols")
    if horizon is None:
        horizon = 2**c + c
    if horizon < 2**c + c:
        raise ValueError(f"horizon {horizon} below the first block end {2**c + c}")
    if alphabet.q**horizon > ENUMERATION_BUDGET:
        raise ValueError(f"horizon {horizon} over the enumeration budget")
    layers = [0] * (horizon + 1)
    for n in pathology_lengths(c, horizon):
        layers[n] = (1 << alphabet.layer_size(n)) - 1
    return LayeredSet(alphabet, horizon, tuple(layers))


# ---------------------------------------------------------------------------
# Asymmetric triple


@dataclass(frozen=True)
class AsymmetricTriple:
    """W on one layer plus the derived prefix set X, suffix set Y and
    product complement Z = F \\ (X.Y)."""

    n: int
    eps: Fraction
    w_set: LayeredSet
    x: Dfa
    y: Dfa
    z: Dfa


def phi_floor(total: int) -> int:
    """floor(phi * total) by exact integer square root."""
    return (isqrt(5 * total * total) - total) // 2


def _surd_floor(x: Surd) -> int:
    k = int(float(x))
    while Surd.of(k + 1) <= x:
        k += 1
    while Surd.of(k) > x:
        k -= 1
    return k


def asymmetric_triple(
    alphabet: Alphabet,
    n: int,
    eps: Fraction,
    state_cap: int = DEFAULT_STATE_CAP,
) -> AsymmetricTriple:
    """The no-solution triple for x.y = z with x in X, y in Y, z in Z.

    W is the lexicographically first floor(phi * q**n) words of F(n); X is
    every word with a prefix in W (the word itself counts), Y mirrors with
    suffixes, and Z is the complement of X.Y.  Errors when q**n is too small
    for any member count within eps/3 of phi.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    total = alphabet.layer_size(n)
    # Existence of an integer count within the open interval (phi +- eps/3) * total.
    upper = (PHI + eps / 3) * Fraction(total)
    lower = (PHI - eps / 3) * Fraction(total)
    candidate = _surd_floor(upper)
    if not Surd.of(candidate) > lower:
        raise ValueError(
            f"no member count within eps/3 = {eps / 3} of phi at layer size {total}"
        )
    size = phi_floor(total)

    layers = [0] * (n + 1)
    layers[n] = (1 << size) - 1
    w_set = LayeredSet(alphabet, n, tuple(layers))

    x = _prefix_set_dfa(alphabet, n, size)
    y = _suffix_set_dfa(alphabet, n, size)
    xy = dfa_concat(x, y, state_cap)
    z = dfa_complement(xy)
    return AsymmetricTriple(n, eps, w_set, x, y, z)


def _prefix_set_dfa(alphabet: Alphabet, n: int, size: int) -> Dfa:
    """Words whose length-n prefix has rank < size (non-strict prefix)."""
    q = alphabet.q
    # States: one per proper prefix, identified by (depth, rank), plus an
    # accepting sink and a dead sink.
    index: dict[tuple[int, int], int] = {(0, 0): 0}
    order = [(0, 0)]
    for depth in range(1, n):
        for r in range(q**depth):
            index[(depth, r)] = len(order)
            order.append((depth, r))
    accept_sink = len(order)
    dead_sink = accept_sink + 1
    rows = []
    for depth, r in order:
        row = []
        for c in range(q):
            nr = r * q + c
            if depth + 1 < n:
                row.append(index[(depth + 1, nr)])
            else:
                row.append(accept_sink if nr < size else dead_sink)
        rows.append(tuple(row))
    rows.append((accept_sink,) * q)
    rows.append((dead_sink,) * q)
    return _minimized(
        Dfa(alphabet, dead_sink + 1, 0, frozenset({accept_sink}), tuple(rows))
    )


def _suffix_set_dfa(alphabet: Alphabet, n: int, size: int) -> Dfa:
    """Words whose final n symbols form a word of rank < size."""
    q = alphabet.q
    # States track the last min(len, n) symbols read.
    index: dict[tuple[int, int], int] = {(0, 0): 0}
    order = [(0, 0)]
    rows = []
    for depth, r in order:
        row = []
        for c in range(q):
            if depth < n:
                t = (depth + 1, r * q + c)
            else:
                t = (n, (r % q ** (n - 1)) * q + c)
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        rows.append(tuple(row))
    accepting = frozenset(
        i for i, (depth, r) in enumerate(order) if depth == n and r < size
    )
    return _minimized(
        Dfa(alphabet, len(order), 0, accepting, tuple(rows))
    )


# ---------------------------------------------------------------------------
# Seeded greedy fixtures


def greedy_random_productfree(
    alphabet: Alphabet,
    max_len: int,
    seed: int,
    schedule: str = "uniform",
) -> LayeredSet:
    """Deterministic seeded greedy product-free subset of F_<=(max_len).

    Scans the ball in a seeded order and inserts each word unless that
    would complete a product; only products touching the new word are
    rechecked.  schedule picks the scan order: "uniform" shuffles the whole
    ball, "odd-first" shuffles odd lengths ahead of even lengths (with all
    odd lengths available the greedy pass then recovers exactly the
    odd-length truncation).
    """
    q = alphabet.q
    items = [(n, r) for n in range(1, max_len + 1) for r in range(q**n)]
    rng = random.Random(seed)
    if schedule == "uniform":
        rng.shuffle(items)
    elif schedule == "odd-first":
        odd = [it for it in items if it[0] % 2 == 1]
        even = [it for it in items if it[0] % 2 == 0]
        rng.shuffle(odd)
        rng.shuffle(even)
        items = odd + even
    else:
        raise ValueError(f"unknown schedule {schedule!r}")

    fwd = [0] * (max_len + 1)
    rev = [0] * (max_len + 1)
    for n, r in items:
        if not _insertion_safe(alphabet, fwd, rev, max_len, n, r):
            continue
        fwd[n] |= 1 << r
        rev[n] |= 1 << reversed_rank(alphabet, n, r)
    return LayeredSet(alphabet, max_len, tuple(fwd))


def _insertion_safe(
    alphabet: Alphabet, fwd: list[int], rev: list[int], max_len: int, n: int, r: int
) -> bool:
    q = alphabet.q
    # w = x.y with both factors already in.
    for m in range(1, n):
        tail = q ** (n - m)
        if (fwd[m] >> (r // tail)) & 1 and (fwd[n - m] >> (r % tail)) & 1:
            return False
    # w.w already in.
    if 2 * n <= max_len and (fwd[2 * n] >> (r * q**n + r)) & 1:
        return False
    rr = reversed_rank(alphabet, n, r)
    for m in range(1, max_len - n + 1):
        width = q**m
        mask = (1 << width) - 1
        # w.y in S for some member y: ranks of w.y form one contiguous block.
        if (fwd[n + m] >> (r * width)) & mask & fwd[m]:
            return False
        # y.w in S for some member y: same test on the reversed sets.
        if (rev[n + m] >> (rr * width)) & mask & rev[m]:
            return False
    return True
