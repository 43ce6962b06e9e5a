"""Integer partitions: conjugation, dominance order and enumeration."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate, zip_longest
from typing import Iterable, Iterator

from .errors import InvalidComparisonError, InvalidInputError, ParseError, ResourceLimitError

MAX_ENUMERATE_N = 60


@dataclass(frozen=True, init=False)
class Partition:
    """Weakly decreasing tuple of positive parts."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int]) -> None:
        parts = tuple(int(x) for x in parts)
        if not parts:
            raise InvalidInputError("a partition needs at least one part")
        if any(x < 1 for x in parts):
            raise InvalidInputError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidInputError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def rectangle(cls, rows: int, cols: int) -> "Partition":
        """The ``rows x cols`` rectangle, i.e. ``rows`` parts equal to ``cols``."""
        if rows < 1 or cols < 1:
            raise InvalidInputError("rectangle sides must be positive")
        return cls((cols,) * rows)

    @classmethod
    def hook(cls, n: int, leg: int) -> "Partition":
        """The hook ``(n - leg, 1^leg)``."""
        if not 0 <= leg < n:
            raise InvalidInputError(f"hook leg {leg} out of range for N={n}")
        return cls((n - leg,) + (1,) * leg)

    @property
    def n_total(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    @property
    def is_rectangle(self) -> bool:
        return len(set(self.parts)) == 1

    @property
    def is_hook(self) -> bool:
        return all(x == 1 for x in self.parts[1:])

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for x in self.parts:
            out[x] = out.get(x, 0) + 1
        return out

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"

    def __repr__(self) -> str:
        return f"Partition({self.parts})"


def conjugate(p: Partition) -> Partition:
    """Transpose of the Young diagram.

    >>> conjugate(Partition((6, 2, 2, 1, 1)))
    Partition((5, 3, 1, 1, 1, 1))
    """
    return Partition(sum(1 for x in p.parts if x >= j) for j in range(1, p.parts[0] + 1))


def dominates(p: Partition, q: Partition) -> bool:
    """True iff every prefix sum of ``p`` is at least that of ``q``."""
    if p.n_total != q.n_total:
        raise InvalidComparisonError(
            f"cannot compare partitions of {p.n_total} and {q.n_total}")
    a, b = zip(*zip_longest(p.parts, q.parts, fillvalue=0))
    return all(x >= y for x, y in zip(accumulate(a), accumulate(b)))


def _gen(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _gen(n - first, first):
            yield (first,) + rest


def enumerate_partitions(n: int, *, limit: int = MAX_ENUMERATE_N) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order.

    >>> [str(p) for p in enumerate_partitions(4)]
    ['[4]', '[3,1]', '[2,2]', '[2,1,1]', '[1,1,1,1]']
    """
    if n < 1:
        raise InvalidInputError("N must be positive")
    if n > limit:
        raise ResourceLimitError("partition enumeration", n, limit)
    return [Partition(t) for t in _gen(n, n)]


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) via Euler's pentagonal number recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


_RECT = re.compile(r"\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def parse_partition(text: str) -> Partition:
    """Parse ``"[6,2,2,1,1]"`` or the rectangle sugar ``"2x5"`` (2 rows of 5)."""
    m = _RECT.match(text)
    if m:
        rows, cols = int(m.group(1)), int(m.group(2))
        if rows < 1 or cols < 1:
            raise ParseError(text, 0, "rectangle sides must be positive")
        return Partition.rectangle(rows, cols)
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    if not s.startswith("["):
        raise ParseError(text, offset, "expected '['")
    if not s.endswith("]"):
        raise ParseError(text, offset + len(s), "expected ']'")
    parts: list[int] = []
    pos = offset + 1
    for chunk in s[1:-1].split(","):
        tok = chunk.strip()
        if not tok.isdigit():
            raise ParseError(text, pos, f"expected a positive integer, got {tok!r}")
        parts.append(int(tok))
        pos += len(chunk) + 1
    try:
        return Partition(parts)
    except InvalidInputError as exc:
        raise ParseError(text, offset, str(exc)) from None
