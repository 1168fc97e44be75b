"""Eventually periodic infinite words in canonical form."""

from __future__ import annotations

from math import gcd
from typing import Any, Callable, Hashable, Iterable, Sequence

from .errors import InputError


def letter_key(x: Any):
    """Total order on letters: sets by their sorted contents, everything else by repr."""
    if isinstance(x, (frozenset, set)):
        return (1, tuple(sorted(map(str, x))))
    if isinstance(x, tuple):
        return (2, tuple(letter_key(y) for y in x))
    return (0, str(x))


def _primitive_root(cycle: tuple) -> tuple:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class EPWord:
    """``prefix`` followed by ``cycle`` repeated forever.

    Construction canonicalises: the cycle is replaced by its primitive root and
    the prefix is shortened as far as possible by rotating the cycle.  Two words
    are equal as infinite words iff their canonical forms are equal.
    """

    __slots__ = ("prefix", "cycle")

    def __init__(self, prefix: Iterable[Hashable], cycle: Iterable[Hashable]):
        pre = tuple(prefix)
        cyc = tuple(cycle)
        if not cyc:
            raise InputError("cycle of an eventually periodic word must be nonempty")
        cyc = _primitive_root(cyc)
        while pre and pre[-1] == cyc[-1]:
            pre = pre[:-1]
            cyc = (cyc[-1],) + cyc[:-1]
        self.prefix = pre
        self.cycle = cyc

    @classmethod
    def constant(cls, letter: Hashable) -> "EPWord":
        return cls((), (letter,))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EPWord):
            return NotImplemented
        return self.prefix == other.prefix and self.cycle == other.cycle

    def __hash__(self) -> int:
        return hash((self.prefix, self.cycle))

    def __repr__(self) -> str:
        return f"EPWord({list(self.prefix)!r}, {list(self.cycle)!r})"

    def __str__(self) -> str:
        def show(x):
            if isinstance(x, (frozenset, set)):
                return "{" + ",".join(sorted(map(str, x))) + "}"
            return str(x)

        pre = "".join(show(x) for x in self.prefix)
        cyc = "".join(show(x) for x in self.cycle)
        return f"{pre}({cyc})^w"

    def __getitem__(self, i: int):
        if i < 0:
            raise IndexError(i)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def take(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def map(self, f: Callable[[Any], Hashable]) -> "EPWord":
        return EPWord((f(x) for x in self.prefix), (f(x) for x in self.cycle))

    def shift(self, n: int) -> "EPWord":
        """Drop the first ``n`` letters."""
        if n <= len(self.prefix):
            return EPWord(self.prefix[n:], self.cycle)
        k = (n - len(self.prefix)) % len(self.cycle)
        return EPWord((), self.cycle[k:] + self.cycle[:k])

    def prepend(self, letters: Sequence[Hashable]) -> "EPWord":
        return EPWord(tuple(letters) + self.prefix, self.cycle)

    def replace(self, i: int, letter: Hashable) -> "EPWord":
        """Change a single letter (a finite change)."""
        n = max(i + 1, len(self.prefix))
        head = list(self.take(n))
        head[i] = letter
        rest = self.shift(n)
        return EPWord(tuple(head) + rest.prefix, rest.cycle)

    def horizon(self, *others: "EPWord") -> tuple[int, int]:
        """(start, period) after which all words are jointly periodic."""
        start = max([len(self.prefix)] + [len(o.prefix) for o in others])
        period = len(self.cycle)
        for o in others:
            period = lcm(period, len(o.cycle))
        return start, period

    def zip_with(self, other: "EPWord", f: Callable[[Any, Any], Hashable]) -> "EPWord":
        start, period = self.horizon(other)
        pre = [f(self[i], other[i]) for i in range(start)]
        cyc = [f(self[i], other[i]) for i in range(start, start + period)]
        return EPWord(pre, cyc)

    def eventually_equal(self, other: "EPWord") -> bool:
        """Positionwise agreement from some index on."""
        return self.eventually_all(other, lambda x, y: x == y)

    def same_tail_class(self, other: "EPWord") -> bool:
        """Equal after dropping finite prefixes of possibly different lengths."""
        return self.tail_key() == other.tail_key()

    def eventually_all(self, other: "EPWord", pred: Callable[[Any, Any], bool]) -> bool:
        """Whether ``pred`` holds at every position from some point on."""
        start, period = self.horizon(other)
        return all(pred(self[i], other[i]) for i in range(start, start + period))

    def differs_at(self, other: "EPWord") -> list[int]:
        """Positions where the words differ; raises if there are infinitely many."""
        start, period = self.horizon(other)
        if any(self[i] != other[i] for i in range(start, start + period)):
            raise InputError("the words differ at infinitely many positions")
        return [i for i in range(start) if self[i] != other[i]]

    def tail_key(self) -> tuple:
        """Least rotation of the primitive cycle; equal for words that agree up to shifts."""
        cyc = self.cycle
        rots = [cyc[i:] + cyc[:i] for i in range(len(cyc))]
        return min(rots, key=lambda r: tuple(letter_key(x) for x in r))

    def tail_word(self) -> "EPWord":
        return EPWord((), self.tail_key())


def parse_binary(text: str) -> EPWord:
    """Parse ``prefix(cycle)`` notation such as ``01(10)`` or ``(0)``."""
    s = text.strip()
    if s.endswith("^w"):
        s = s[:-2]
    if "(" not in s or not s.endswith(")"):
        raise InputError(f"expected prefix(cycle) notation, got {text!r}")
    pre, cyc = s[:-1].split("(", 1)
    return EPWord(tuple(pre), tuple(cyc))
