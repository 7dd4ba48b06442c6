"""Alphabets and words: the elements of the free semigroup.

Words are nonempty and immutable.  Within a layer (fixed length) words are
ordered lexicographically by an integer rank, which is just the base-q value
of the symbol indices; most of the package works on (length, rank) pairs and
only materialises Word objects at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

DEFAULT_ALPHABET = "ab"
MAX_SYMBOLS = 16

# Hard cap on q**n wherever a whole layer is enumerated or stored explicitly.
ENUMERATION_BUDGET = 1 << 22


class FormatError(ValueError):
    """Malformed input file; message carries the offending line number."""


@dataclass(frozen=True)
class Alphabet:
    """An ordered list of distinct single-character symbols.

    The symbol order is fixed at construction and defines the lexicographic
    order on words of equal length.
    """

    symbols: str = DEFAULT_ALPHABET

    def __post_init__(self) -> None:
        if not 1 <= len(self.symbols) <= MAX_SYMBOLS:
            raise ValueError(
                f"alphabet needs 1..{MAX_SYMBOLS} symbols, got {len(self.symbols)}"
            )
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"alphabet symbols must be distinct: {self.symbols!r}")

    @property
    def q(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        i = self.symbols.find(symbol)
        if i < 0 or len(symbol) != 1:
            raise ValueError(f"symbol {symbol!r} not in alphabet {self.symbols!r}")
        return i

    def word(self, text: str) -> Word:
        """Parse a word from its textual form."""
        return Word(self, tuple(self.index(ch) for ch in text))

    def layer_size(self, n: int) -> int:
        """|F(n)| = q**n."""
        if n < 1:
            raise ValueError(f"layer index must be >= 1, got {n}")
        return self.q**n


@dataclass(frozen=True)
class Word:
    """A nonempty word, stored as a tuple of symbol indices."""

    alphabet: Alphabet
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        # The free semigroup has no identity: length 0 is rejected everywhere.
        if len(self.indices) == 0:
            raise ValueError("the empty word is not an element of the free semigroup")
        q = self.alphabet.q
        if any(not 0 <= i < q for i in self.indices):
            raise ValueError(f"symbol index out of range for q={q}: {self.indices}")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def text(self) -> str:
        return "".join(self.alphabet.symbols[i] for i in self.indices)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Word({self.text!r})"


def _require_same_alphabet(x: Word, y: Word) -> None:
    if x.alphabet != y.alphabet:
        raise ValueError(
            f"alphabet mismatch: {x.alphabet.symbols!r} vs {y.alphabet.symbols!r}"
        )


def concat(x: Word, y: Word) -> Word:
    """x followed by y; |x.y| = |x| + |y|."""
    _require_same_alphabet(x, y)
    return Word(x.alphabet, x.indices + y.indices)


def is_prefix(x: Word, w: Word) -> bool:
    """True iff w = x.y for some word y, i.e. x is a *proper* prefix of w.

    Equality does not count: the decompositions this package cares about all
    take prefixes strictly shorter than the word.
    """
    _require_same_alphabet(x, w)
    return len(x) < len(w) and w.indices[: len(x)] == x.indices


def is_suffix(x: Word, w: Word) -> bool:
    """True iff w = y.x for some word y (proper suffix, mirror of is_prefix)."""
    _require_same_alphabet(x, w)
    return len(x) < len(w) and w.indices[len(w) - len(x) :] == x.indices


def rank(w: Word) -> int:
    """Position of w in the lexicographic enumeration of its layer."""
    r = 0
    q = w.alphabet.q
    for i in w.indices:
        r = r * q + i
    return r


def unrank(alphabet: Alphabet, n: int, r: int) -> Word:
    """Inverse of rank on F(n): the word of length n with rank r."""
    if n < 1:
        raise ValueError(f"word length must be >= 1, got {n}")
    q = alphabet.q
    if not 0 <= r < q**n:
        raise ValueError(f"rank {r} out of range [0, {q**n}) for n={n}")
    digits = [0] * n
    for pos in range(n - 1, -1, -1):
        digits[pos] = r % q
        r //= q
    return Word(alphabet, tuple(digits))


def layer_words(alphabet: Alphabet, n: int) -> list[Word]:
    """All q**n words of length n in lexicographic order."""
    size = alphabet.layer_size(n)
    if size > ENUMERATION_BUDGET:
        raise ValueError(f"layer F({n}) has {size} words, over the enumeration budget")
    return [unrank(alphabet, n, r) for r in range(size)]


def reversed_rank(alphabet: Alphabet, n: int, r: int) -> int:
    """Rank of the reversal of the length-n word of rank r."""
    q = alphabet.q
    out = 0
    for _ in range(n):
        out = out * q + r % q
        r //= q
    return out


# ---------------------------------------------------------------------------
# Word-list file format: '#' comments, a header 'alphabet: ab', an optional
# 'horizon: N' header, then one word per line.


def write_word_list(words: Iterable[Word], alphabet: Alphabet, horizon: int) -> str:
    lines = [f"alphabet: {alphabet.symbols}", f"horizon: {horizon}"]
    lines.extend(w.text for w in words)
    return "\n".join(lines) + "\n"


def read_word_list(source: str | TextIO) -> tuple[Alphabet, int | None, list[Word]]:
    """Parse a word list; returns (alphabet, declared horizon or None, words)."""
    text = source if isinstance(source, str) else source.read()
    alphabet: Alphabet | None = None
    horizon: int | None = None
    words: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            if alphabet is not None:
                raise FormatError(f"line {lineno}: duplicate alphabet header")
            try:
                alphabet = Alphabet(line.split(":", 1)[1].strip())
            except ValueError as exc:
                raise FormatError(f"line {lineno}: {exc}") from exc
            continue
        if line.startswith("horizon:"):
            try:
                horizon = int(line.split(":", 1)[1].strip())
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad horizon") from exc
            continue
        if alphabet is None:
            raise FormatError(f"line {lineno}: word before 'alphabet:' header")
        try:
            words.append(alphabet.word(line))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if alphabet is None:
        raise FormatError("missing 'alphabet:' header")
    return alphabet, horizon, words
