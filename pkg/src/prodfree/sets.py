"""Word-set carriers and their exact algebra.

Two representations: LayeredSet holds an explicit subset of the ball
F_<=(N) as one membership bitset per layer (a Python int, bit r = word of
rank r), and Dfa holds a regular set of nonempty words as a complete
deterministic automaton.  Every DFA-producing operation returns a minimized,
canonically numbered machine, so two constructions of the same language
compare equal.

Acceptance of the empty run is ignored throughout: the set represented by a
DFA is { w : |w| >= 1 and run(start, w) is accepting }.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, TextIO

from .words import (
    Alphabet,
    ENUMERATION_BUDGET,
    FormatError,
    Word,
    rank,
    unrank,
)

DEFAULT_STATE_CAP = 100_000
DEFAULT_EXPLICIT_HORIZON = 16


class StateBudgetError(RuntimeError):
    """An automaton construction exceeded the configured state cap."""


@dataclass(frozen=True)
class LayerCount:
    """Exact member count of one layer."""

    n: int
    count: int
    total: int

    def __post_init__(self) -> None:
        if not 0 <= self.count <= self.total:
            raise ValueError(f"layer {self.n}: count {self.count} > total {self.total}")

    @property
    def density(self) -> Fraction:
        return Fraction(self.count, self.total)


# ---------------------------------------------------------------------------
# Explicit truncated sets


@dataclass(frozen=True)
class LayeredSet:
    """Explicit subset of F_<=(horizon); layers[n] is the bitset of layer n."""

    alphabet: Alphabet
    horizon: int
    layers: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.alphabet.q**self.horizon > ENUMERATION_BUDGET:
            raise ValueError(
                f"explicit horizon {self.horizon} over the enumeration budget"
            )
        if len(self.layers) != self.horizon + 1 or self.layers[0] != 0:
            raise ValueError("layers must be indexed 1..horizon with layers[0] == 0")
        for n in range(1, self.horizon + 1):
            if self.layers[n] >> self.alphabet.layer_size(n):
                raise ValueError(f"layer {n} bitset wider than q**{n}")

    def contains_rank(self, n: int, r: int) -> bool:
        return 1 <= n <= self.horizon and (self.layers[n] >> r) & 1 == 1

    def contains(self, w: Word) -> bool:
        if w.alphabet != self.alphabet:
            raise ValueError("alphabet mismatch")
        return self.contains_rank(len(w), rank(w))

    def layer_count(self, n: int) -> int:
        if not 1 <= n <= self.horizon:
            raise ValueError(f"layer {n} outside horizon {self.horizon}")
        return bin(self.layers[n]).count("1")

    def total_count(self) -> int:
        return sum(self.layer_count(n) for n in range(1, self.horizon + 1))

    def words(self) -> Iterator[Word]:
        """Members in (length, rank) order."""
        for n in range(1, self.horizon + 1):
            bits = self.layers[n]
            while bits:
                low = bits & -bits
                yield unrank(self.alphabet, n, low.bit_length() - 1)
                bits ^= low

    def is_empty(self) -> bool:
        return all(b == 0 for b in self.layers)


def _layer_mask(alphabet: Alphabet, n: int) -> int:
    return (1 << alphabet.layer_size(n)) - 1


def _iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def explicit_from_words(words: Iterable[Word], horizon: int) -> LayeredSet:
    """Build the explicit set with exactly the given members."""
    words = list(words)
    if not words:
        raise ValueError("cannot infer the alphabet from an empty word list; "
                         "use explicit_empty instead")
    alphabet = words[0].alphabet
    layers = [0] * (horizon + 1)
    for w in words:
        if w.alphabet != alphabet:
            raise ValueError("alphabet mismatch in word list")
        if len(w) > horizon:
            raise ValueError(f"word {w.text!r} longer than horizon {horizon}")
        layers[len(w)] |= 1 << rank(w)
    return LayeredSet(alphabet, horizon, tuple(layers))


def explicit_empty(alphabet: Alphabet, horizon: int) -> LayeredSet:
    return LayeredSet(alphabet, horizon, tuple([0] * (horizon + 1)))


def explicit_full(alphabet: Alphabet, horizon: int) -> LayeredSet:
    layers = [0] + [_layer_mask(alphabet, n) for n in range(1, horizon + 1)]
    return LayeredSet(alphabet, horizon, tuple(layers))


def _check_compatible(s1: LayeredSet, s2: LayeredSet) -> None:
    if s1.alphabet != s2.alphabet:
        raise ValueError("alphabet mismatch")
    if s1.horizon != s2.horizon:
        raise ValueError(f"horizon mismatch: {s1.horizon} vs {s2.horizon}")


def explicit_union(s1: LayeredSet, s2: LayeredSet) -> LayeredSet:
    _check_compatible(s1, s2)
    return LayeredSet(
        s1.alphabet, s1.horizon,
        tuple(a | b for a, b in zip(s1.layers, s2.layers)),
    )


def explicit_intersect(s1: LayeredSet, s2: LayeredSet) -> LayeredSet:
    _check_compatible(s1, s2)
    return LayeredSet(
        s1.alphabet, s1.horizon,
        tuple(a & b for a, b in zip(s1.layers, s2.layers)),
    )


def explicit_difference(s1: LayeredSet, s2: LayeredSet) -> LayeredSet:
    _check_compatible(s1, s2)
    return LayeredSet(
        s1.alphabet, s1.horizon,
        tuple(a & ~b for a, b in zip(s1.layers, s2.layers)),
    )


def explicit_complement(s: LayeredSet) -> LayeredSet:
    """Complement relative to F_<=(horizon)."""
    layers = [0] + [
        _layer_mask(s.alphabet, n) & ~s.layers[n] for n in range(1, s.horizon + 1)
    ]
    return LayeredSet(s.alphabet, s.horizon, tuple(layers))


def explicit_layer_slice(s: LayeredSet, n: int) -> LayeredSet:
    """Just layer n of s, as a set with the same horizon."""
    if not 1 <= n <= s.horizon:
        raise ValueError(f"layer {n} outside horizon {s.horizon}")
    layers = [0] * (s.horizon + 1)
    layers[n] = s.layers[n]
    return LayeredSet(s.alphabet, s.horizon, tuple(layers))


def minkowski_product(s1: LayeredSet, s2: LayeredSet, horizon: int) -> LayeredSet:
    """{ w1.w2 : w1 in s1, w2 in s2, |w1|+|w2| <= horizon }."""
    if s1.alphabet != s2.alphabet:
        raise ValueError("alphabet mismatch")
    q = s1.alphabet.q
    layers = [0] * (horizon + 1)
    for m in range(1, min(s1.horizon, horizon - 1) + 1):
        if not s1.layers[m]:
            continue
        for k in range(1, min(s2.horizon, horizon - m) + 1):
            right = s2.layers[k]
            if not right:
                continue
            width = q**k
            for x in _iter_bits(s1.layers[m]):
                # rank(x.y) = rank(x)*q**|y| + rank(y): a contiguous block.
                layers[m + k] |= right << (x * width)
    return LayeredSet(s1.alphabet, horizon, tuple(layers))


def prefix_spread(s: LayeredSet, ell: int, n: int) -> int:
    """Bitset of layer n covered by S(ell) . F(n-ell)."""
    q = s.alphabet.q
    width = q ** (n - ell)
    block = (1 << width) - 1
    out = 0
    for x in _iter_bits(s.layers[ell]):
        out |= block << (x * width)
    return out


def validate_ell_sequence(ells: tuple[int, ...], n: int) -> None:
    if any(l < 1 for l in ells):
        raise ValueError(f"lengths must be positive: {ells}")
    if list(ells) != sorted(set(ells)):
        raise ValueError(f"lengths must be strictly increasing: {ells}")
    if ells and ells[-1] >= n:
        raise ValueError(f"lengths must be below n={n}: {ells}")


def explicit_prefix_excluded(s: LayeredSet, n: int, ells: Iterable[int]) -> LayeredSet:
    """S(n; l1,...,lk): members of layer n with no prefix in any S(li)."""
    ells = tuple(ells)
    validate_ell_sequence(ells, n)
    if n > s.horizon:
        raise ValueError(f"layer {n} outside horizon {s.horizon}")
    bits = s.layers[n]
    for ell in ells:
        bits &= ~prefix_spread(s, ell, n)
    layers = [0] * (n + 1)
    layers[n] = bits
    return LayeredSet(s.alphabet, n, tuple(layers))


# ---------------------------------------------------------------------------
# Complete DFAs over nonempty words


@dataclass(frozen=True)
class Dfa:
    """Complete DFA; represents { w : |w| >= 1, run ends accepting }."""

    alphabet: Alphabet
    num_states: int
    start: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_states < 1:
            raise ValueError("a DFA needs at least one state")
        if not 0 <= self.start < self.num_states:
            raise ValueError(f"start state {self.start} out of range")
        if any(not 0 <= s < self.num_states for s in self.accepting):
            raise ValueError("accepting state out of range")
        if len(self.delta) != self.num_states:
            raise ValueError("delta must have one row per state")
        q = self.alphabet.q
        for row in self.delta:
            if len(row) != q:
                raise ValueError("delta rows must cover every symbol")
            if any(not 0 <= t < self.num_states for t in row):
                raise ValueError("transition target out of range")

    def run(self, w: Word) -> int:
        if w.alphabet != self.alphabet:
            raise ValueError("alphabet mismatch")
        s = self.start
        for c in w.indices:
            s = self.delta[s][c]
        return s

    def accepts(self, w: Word) -> bool:
        return self.run(w) in self.accepting


def dfa_empty(alphabet: Alphabet) -> Dfa:
    q = alphabet.q
    return Dfa(alphabet, 1, 0, frozenset(), ((0,) * q,))


def dfa_full(alphabet: Alphabet) -> Dfa:
    """All nonempty words (acceptance of the empty run is ignored anyway)."""
    q = alphabet.q
    return Dfa(alphabet, 2, 0, frozenset({1}), ((1,) * q, (1,) * q))


def dfa_layer(alphabet: Alphabet, n: int) -> Dfa:
    """Exactly the layer F(n)."""
    if n < 1:
        raise ValueError(f"layer index must be >= 1, got {n}")
    q = alphabet.q
    # States 0..n count consumed symbols; n+1 is the overflow sink.
    delta = tuple(
        tuple(min(k + 1, n + 1) for _ in range(q)) for k in range(n + 2)
    )
    return _minimized(Dfa(alphabet, n + 2, 0, frozenset({n}), delta))


def _start_normalized(d: Dfa) -> Dfa:
    """Equivalent DFA whose start state is not accepting.

    The represented set never contains the empty word, so cloning the start
    leaves the language unchanged while making run-acceptance from the start
    honest for zero-step runs.
    """
    if d.start not in d.accepting:
        return d
    clone = d.num_states
    delta = d.delta + (d.delta[d.start],)
    return Dfa(d.alphabet, d.num_states + 1, clone, d.accepting, delta)


def _reachable(d: Dfa) -> Dfa:
    """Restrict to states reachable from the start (keeps completeness)."""
    order: list[int] = [d.start]
    index = {d.start: 0}
    for s in order:
        for t in d.delta[s]:
            if t not in index:
                index[t] = len(order)
                order.append(t)
    delta = tuple(
        tuple(index[d.delta[s][c]] for c in range(d.alphabet.q)) for s in order
    )
    accepting = frozenset(index[s] for s in d.accepting if s in index)
    return Dfa(d.alphabet, len(order), 0, accepting, delta)


def _moore_blocks(d: Dfa) -> list[int]:
    """Partition-refinement equivalence classes (accepting split first)."""
    block = [1 if s in d.accepting else 0 for s in range(d.num_states)]
    q = d.alphabet.q
    while True:
        sigs: dict[tuple[int, ...], int] = {}
        nxt = [0] * d.num_states
        for s in range(d.num_states):
            sig = (block[s],) + tuple(block[d.delta[s][c]] for c in range(q))
            nxt[s] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == len(set(block)):
            return nxt
        block = nxt


def _minimized(d: Dfa) -> Dfa:
    """Canonical minimal DFA: trimmed, minimized, BFS-renumbered.

    Equal languages of nonempty words yield structurally equal values.
    """
    d = _reachable(_start_normalized(d))
    block = _moore_blocks(d)
    q = d.alphabet.q
    # Quotient automaton on blocks.
    nblocks = max(block) + 1
    qdelta: list[tuple[int, ...] | None] = [None] * nblocks
    qacc = set()
    for s in range(d.num_states):
        b = block[s]
        if qdelta[b] is None:
            qdelta[b] = tuple(block[d.delta[s][c]] for c in range(q))
        if s in d.accepting:
            qacc.add(b)
    # Canonical numbering by BFS in symbol order.
    start = block[d.start]
    order = [start]
    number = {start: 0}
    for b in order:
        row = qdelta[b]
        assert row is not None
        for t in row:
            if t not in number:
                number[t] = len(order)
                order.append(t)
    delta = tuple(
        tuple(number[qdelta[b][c]] for c in range(q))  # type: ignore[index]
        for b in order
    )
    accepting = frozenset(number[b] for b in qacc if b in number)
    return Dfa(d.alphabet, len(order), 0, accepting, delta)


def _product(d1: Dfa, d2: Dfa, accept) -> Dfa:
    if d1.alphabet != d2.alphabet:
        raise ValueError("alphabet mismatch")
    q = d1.alphabet.q
    start = (d1.start, d2.start)
    index = {start: 0}
    order = [start]
    delta_rows: list[tuple[int, ...]] = []
    for s1, s2 in order:
        row = []
        for c in range(q):
            t = (d1.delta[s1][c], d2.delta[s2][c])
            if t not in index:
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        delta_rows.append(tuple(row))
    accepting = frozenset(
        i
        for i, (s1, s2) in enumerate(order)
        if accept(s1 in d1.accepting, s2 in d2.accepting)
    )
    return _minimized(Dfa(d1.alphabet, len(order), 0, accepting, tuple(delta_rows)))


def dfa_union(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda a, b: a or b)


def dfa_intersect(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda a, b: a and b)


def dfa_difference(d1: Dfa, d2: Dfa) -> Dfa:
    return _product(d1, d2, lambda a, b: a and not b)


def dfa_complement(d: Dfa) -> Dfa:
    """Complement relative to the set of all nonempty words."""
    flipped = frozenset(range(d.num_states)) - d.accepting
    return _minimized(Dfa(d.alphabet, d.num_states, d.start, flipped, d.delta))


def dfa_concat(d1: Dfa, d2: Dfa, state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Exact concatenation { w1.w2 : w1 in L(d1), w2 in L(d2) }.

    Epsilon-bridges accepting states of d1 into d2's start and determinises
    on the fly; both factors are forced nonempty by the run semantics.
    """
    if d1.alphabet != d2.alphabet:
        raise ValueError("alphabet mismatch")
    d2 = _start_normalized(d2)
    q = d1.alphabet.q
    start = (d1.start, frozenset())
    index: dict[tuple[int, frozenset[int]], int] = {start: 0}
    order = [start]
    delta_rows: list[tuple[int, ...]] = []
    for s1, part in order:
        row = []
        for c in range(q):
            t1 = d1.delta[s1][c]
            tpart = frozenset(d2.delta[s][c] for s in part)
            if t1 in d1.accepting:
                tpart |= {d2.start}
            t = (t1, tpart)
            if t not in index:
                if len(order) >= state_cap:
                    raise StateBudgetError(
                        f"concatenation exceeded the state cap {state_cap}"
                    )
                index[t] = len(order)
                order.append(t)
            row.append(index[t])
        delta_rows.append(tuple(row))
    accepting = frozenset(
        i for i, (_, part) in enumerate(order) if part & d2.accepting
    )
    return _minimized(Dfa(d1.alphabet, len(order), 0, accepting, tuple(delta_rows)))


def dfa_length_slice(d: Dfa, n: int) -> Dfa:
    """L(d) intersected with the layer F(n)."""
    if n < 1:
        raise ValueError(f"layer index must be >= 1, got {n}")
    return dfa_intersect(d, dfa_layer(d.alphabet, n))


def dfa_is_empty(d: Dfa) -> tuple[bool, Word | None]:
    """Emptiness plus a shortest witness (lex-least among the shortest)."""
    q = d.alphabet.q
    # Per level, the lex-least word reaching each state.
    current: dict[int, tuple[int, ...]] = {}
    for c in range(q):
        t = d.delta[d.start][c]
        if t not in current:
            current[t] = (c,)
    for _ in range(d.num_states):
        hits = [w for s, w in current.items() if s in d.accepting]
        if hits:
            return False, Word(d.alphabet, min(hits))
        nxt: dict[int, tuple[int, ...]] = {}
        for s, w in current.items():
            for c in range(q):
                t = d.delta[s][c]
                cand = w + (c,)
                if t not in nxt or cand < nxt[t]:
                    nxt[t] = cand
        current = nxt
    return True, None


def dfa_layer_count(d: Dfa, n: int) -> LayerCount:
    """|L(d) ∩ F(n)| by iterating the per-state path-count vector."""
    if n < 1:
        raise ValueError(f"layer index must be >= 1, got {n}")
    return LayerCount(n, dfa_layer_counts(d, n)[-1], d.alphabet.layer_size(n))


def dfa_layer_counts(d: Dfa, horizon: int) -> list[int]:
    """[|L(d) ∩ F(n)| for n = 1..horizon] in one transfer-matrix sweep."""
    q = d.alphabet.q
    vec = [0] * d.num_states
    vec[d.start] = 1
    out = []
    for _ in range(horizon):
        nxt = [0] * d.num_states
        for s, cnt in enumerate(vec):
            if cnt:
                for c in range(q):
                    nxt[d.delta[s][c]] += cnt
        vec = nxt
        out.append(sum(vec[s] for s in d.accepting))
    return out


def dfa_prefix_excluded_count(d: Dfa, n: int, ells: Iterable[int]) -> int:
    """|S(n; l1,...,lk)| for S = L(d), without building the automaton.

    Runs the layer-count sweep but zeroes accepting components at each
    depth li, which kills exactly the words whose length-li prefix lies
    in S.
    """
    ells = tuple(ells)
    validate_ell_sequence(ells, n)
    forbidden = set(ells)
    q = d.alphabet.q
    vec = [0] * d.num_states
    vec[d.start] = 1
    for depth in range(1, n + 1):
        nxt = [0] * d.num_states
        for s, cnt in enumerate(vec):
            if cnt:
                for c in range(q):
                    nxt[d.delta[s][c]] += cnt
        if depth in forbidden:
            for s in d.accepting:
                nxt[s] = 0
        vec = nxt
    return sum(vec[s] for s in d.accepting)


def dfa_prefix_excluded(d: Dfa, n: int, ells: Iterable[int],
                        state_cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """S(n; l1,...,lk) as an automaton: slice minus Union S(li).F(n-li)."""
    ells = tuple(ells)
    validate_ell_sequence(ells, n)
    result = dfa_length_slice(d, n)
    for ell in ells:
        covered = dfa_concat(
            dfa_length_slice(d, ell), dfa_layer(d.alphabet, n - ell), state_cap
        )
        result = dfa_difference(result, covered)
    return result


def dfa_truncate(d: Dfa, horizon: int) -> LayeredSet:
    """Explicit membership of L(d) within the ball F_<=(horizon)."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    q = d.alphabet.q
    if q**horizon > ENUMERATION_BUDGET:
        raise ValueError(f"truncation horizon {horizon} over the enumeration budget")
    layers = [0] * (horizon + 1)
    states = [d.start]
    for n in range(1, horizon + 1):
        nxt = [0] * (len(states) * q)
        for r, s in enumerate(states):
            base = r * q
            row = d.delta[s]
            for c in range(q):
                nxt[base + c] = row[c]
        states = nxt
        bits = 0
        accepting = d.accepting
        for r, s in enumerate(states):
            if s in accepting:
                bits |= 1 << r
        layers[n] = bits
    return LayeredSet(d.alphabet, horizon, tuple(layers))


def prefix_excluded(
    s: LayeredSet | Dfa, n: int, ells: Iterable[int]
) -> LayeredSet | Dfa:
    """S(n; l1,...,lk) for either representation (layer-n restriction)."""
    if isinstance(s, LayeredSet):
        return explicit_prefix_excluded(s, n, ells)
    return dfa_prefix_excluded(s, n, ells)


def same_language(d1: Dfa, d2: Dfa) -> bool:
    return _minimized(d1) == _minimized(d2)


# ---------------------------------------------------------------------------
# DFA text format


def write_dfa(d: Dfa) -> str:
    lines = [
        f"alphabet: {d.alphabet.symbols}",
        f"states: {d.num_states}",
        f"start: {d.start}",
        "accept: " + " ".join(str(s) for s in sorted(d.accepting)),
    ]
    for s in range(d.num_states):
        for c, symbol in enumerate(d.alphabet.symbols):
            lines.append(f"trans: {s} {symbol} {d.delta[s][c]}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def read_dfa(source: str | TextIO) -> Dfa:
    """Parse the line-oriented DFA format; completeness is enforced."""
    text = source if isinstance(source, str) else source.read()
    alphabet: Alphabet | None = None
    num_states: int | None = None
    start: int | None = None
    accepting: frozenset[int] | None = None
    trans: dict[tuple[int, int], int] = {}

    def fail(lineno: int, msg: str) -> FormatError:
        return FormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key == "alphabet":
            try:
                alphabet = Alphabet(rest)
            except ValueError as exc:
                raise fail(lineno, str(exc)) from exc
        elif key == "states":
            if not rest.isdigit():
                raise fail(lineno, f"bad state count {rest!r}")
            num_states = int(rest)
        elif key == "start":
            if not rest.isdigit():
                raise fail(lineno, f"bad start state {rest!r}")
            start = int(rest)
        elif key == "accept":
            try:
                accepting = frozenset(int(tok) for tok in rest.split())
            except ValueError as exc:
                raise fail(lineno, f"bad accept list {rest!r}") from exc
        elif key == "trans":
            toks = rest.split()
            if len(toks) != 3:
                raise fail(lineno, f"expected 'trans: STATE SYMBOL TARGET', got {raw!r}")
            if alphabet is None:
                raise fail(lineno, "trans before alphabet header")
            try:
                s, t = int(toks[0]), int(toks[2])
                c = alphabet.index(toks[1])
            except ValueError as exc:
                raise fail(lineno, str(exc)) from exc
            if (s, c) in trans:
                raise fail(lineno, f"duplicate transition for state {s} symbol {toks[1]}")
            trans[(s, c)] = t
        else:
            raise fail(lineno, f"unknown directive {key!r}")

    if alphabet is None or num_states is None or start is None or accepting is None:
        raise FormatError("missing header line (alphabet/states/start/accept)")
    delta_rows = []
    for s in range(num_states):
        row = []
        for c in range(alphabet.q):
            if (s, c) not in trans:
                raise FormatError(
                    f"incomplete DFA: no transition for state {s} "
                    f"symbol {alphabet.symbols[c]!r}"
                )
            row.append(trans[(s, c)])
        delta_rows.append(tuple(row))
    if len(trans) != num_states * alphabet.q:
        raise FormatError("transitions reference states outside 0..states-1")
    try:
        return Dfa(alphabet, num_states, start, accepting, tuple(delta_rows))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
