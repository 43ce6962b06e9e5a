"""Horizontal and vertical tableaux as canonical set partitions.

A block is an ``int`` bit set over the ground set ``{1..N}``: element ``e``
is bit ``e - 1``.  A tableau is the tuple of its blocks in canonical order
(size descending, then minimum element ascending), which is what makes two
equivalent fillings compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial, prod
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInputError, ParseError, ResourceLimitError
from .partitions import Partition, conjugate

MAX_GROUND = 64
DEFAULT_MAX_ENUM = 10**7


def bit(e: int) -> int:
    return 1 << (e - 1)


def block_from(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        e = int(e)
        if e < 1:
            raise InvalidInputError(f"elements start at 1, got {e}")
        if mask & bit(e):
            raise InvalidInputError(f"repeated element {e}")
        mask |= bit(e)
    return mask


def elements(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def block_min(mask: int) -> int:
    return (mask & -mask).bit_length()


def canonical_blocks(blocks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(blocks, key=lambda b: (-b.bit_count(), block_min(b))))


def format_blocks(blocks: Sequence[int]) -> str:
    return "|".join(",".join(map(str, elements(b))) for b in blocks)


def parse_blocks(text: str) -> tuple[int, ...]:
    """Parse ``"1,2,3|4,5,6"`` into block masks (not yet canonicalised)."""
    out = []
    pos = 0
    for chunk in text.split("|"):
        members = []
        for tok in chunk.split(","):
            t = tok.strip()
            if not t.isdigit() or int(t) < 1:
                raise ParseError(text, pos, f"expected a positive integer, got {t!r}")
            members.append(int(t))
            pos += len(tok) + 1
        try:
            out.append(block_from(members))
        except InvalidInputError as exc:
            raise ParseError(text, pos - 1, str(exc)) from None
    return tuple(out)


def _check_cover(blocks: Sequence[int], sizes: Sequence[int], n: int) -> None:
    union = 0
    for b in blocks:
        if b == 0:
            raise InvalidInputError("empty block")
        if union & b:
            raise InvalidInputError("blocks are not pairwise disjoint")
        union |= b
    if union != (1 << n) - 1:
        raise InvalidInputError(f"blocks do not cover {{1..{n}}}")
    if sorted((b.bit_count() for b in blocks), reverse=True) != list(sizes):
        raise InvalidInputError(
            f"block sizes {sorted((b.bit_count() for b in blocks), reverse=True)} "
            f"do not match {list(sizes)}")


@dataclass(frozen=True)
class _Tableau:
    shape: Partition
    blocks: tuple[int, ...]

    kind = ""

    def _sizes(self) -> tuple[int, ...]:
        raise NotImplementedError

    def __post_init__(self) -> None:
        n = self.shape.n_total
        if n > MAX_GROUND:
            raise ResourceLimitError("ground set", n, MAX_GROUND)
        canon = canonical_blocks(self.blocks)
        _check_cover(canon, self._sizes(), n)
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def _trusted(cls, shape: Partition, blocks: tuple[int, ...]):
        # Enumerators emit canonical covers already; skip revalidation.
        obj = object.__new__(cls)
        object.__setattr__(obj, "shape", shape)
        object.__setattr__(obj, "blocks", blocks)
        return obj

    @property
    def n(self) -> int:
        return self.shape.n_total

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(elements(b) for b in self.blocks)

    def __str__(self) -> str:
        return format_blocks(self.blocks)

    @classmethod
    def parse(cls, text: str, shape: Partition | None = None):
        blocks = parse_blocks(text)
        if shape is None:
            sizes = sorted((b.bit_count() for b in blocks), reverse=True)
            shape = Partition(sizes) if cls is HorizontalTableau else conjugate(Partition(sizes))
        return cls(shape, blocks)


class HorizontalTableau(_Tableau):
    """An h-equivalence class: the rows, as an unordered set partition."""

    kind = "horizontal"

    def _sizes(self):
        return self.shape.parts

    @property
    def rows(self) -> tuple[int, ...]:
        return self.blocks


class VerticalTableau(_Tableau):
    """A v-equivalence class: the columns of ``shape``, sizes from its conjugate."""

    kind = "vertical"

    def _sizes(self):
        return conjugate(self.shape).parts

    @property
    def columns(self) -> tuple[int, ...]:
        return self.blocks


def count_set_partitions(sizes: Sequence[int]) -> int:
    """N! / (prod of block-size factorials * prod of size multiplicity factorials)."""
    n = sum(sizes)
    mult: dict[int, int] = {}
    for s in sizes:
        mult[s] = mult.get(s, 0) + 1
    return factorial(n) // (prod(factorial(s) for s in sizes)
                            * prod(factorial(m) for m in mult.values()))


def count_horizontal(shape: Partition) -> int:
    """|H_shape|.

    >>> count_horizontal(Partition((6, 2, 2, 1, 1)))
    41580
    """
    return count_set_partitions(shape.parts)


def count_vertical(shape: Partition) -> int:
    return count_horizontal(conjugate(shape))


def count_dissections(m: int, n: int) -> int:
    """Number of ways to cut ``{1..mn}`` into ``n`` blocks of size ``m``."""
    if m < 1 or n < 1:
        raise InvalidInputError("m and n must be positive")
    return factorial(m * n) // (factorial(m) ** n * factorial(n))


def iter_set_partitions(sizes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Canonical set partitions of ``{1..sum(sizes)}`` with the given block sizes.

    Output is in lexicographic order of canonical forms.  Blocks of equal size
    are generated with increasing minima, so every class appears exactly once
    without any deduplication pass.
    """
    sizes = sorted(sizes, reverse=True)
    if any(s < 1 for s in sizes):
        raise InvalidInputError("block sizes must be positive")
    n = sum(sizes)
    if n > MAX_GROUND:
        raise ResourceLimitError("ground set", n, MAX_GROUND)
    k = len(sizes)
    # remaining[i]: blocks of size sizes[i] at positions >= i
    remaining = [0] * k
    for i in range(k - 1, -1, -1):
        same = i + 1 < k and sizes[i + 1] == sizes[i]
        remaining[i] = 1 + (remaining[i + 1] if same else 0)
    blocks: list[int] = [0] * k

    def rec(i: int, used: int, prev_min: int) -> Iterator[tuple[int, ...]]:
        if i == k:
            yield tuple(blocks)
            return
        size = sizes[i]
        lo = prev_min + 1 if i > 0 and sizes[i - 1] == size else 1
        free = [e for e in range(lo, n + 1) if not used & bit(e)]
        later = (remaining[i] - 1) * size
        for j, x in enumerate(free):
            above = free[j + 1:]
            if len(above) - (size - 1) < later:
                break
            head = bit(x)
            for rest in combinations(above, size - 1):
                b = head
                for e in rest:
                    b |= bit(e)
                blocks[i] = b
                yield from rec(i + 1, used | b, x)

    yield from rec(0, 0, 0)


def _guard(count: int, max_enum: int, what: str) -> None:
    if count > max_enum:
        raise ResourceLimitError(what, count, max_enum)


def enumerate_horizontal(shape: Partition, *, max_enum: int = DEFAULT_MAX_ENUM
                         ) -> list[HorizontalTableau]:
    _guard(count_horizontal(shape), max_enum, f"horizontal tableaux of {shape}")
    return [HorizontalTableau._trusted(shape, b) for b in iter_set_partitions(shape.parts)]


def enumerate_vertical(shape: Partition, *, max_enum: int = DEFAULT_MAX_ENUM
                       ) -> list[VerticalTableau]:
    conj = conjugate(shape)
    _guard(count_horizontal(conj), max_enum, f"vertical tableaux of {shape}")
    return [VerticalTableau._trusted(shape, b) for b in iter_set_partitions(conj.parts)]


def enumerate_dissections(m: int, n: int, *, max_enum: int = DEFAULT_MAX_ENUM
                          ) -> list[tuple[int, ...]]:
    """The dissections of ``{1..mn}`` into ``n`` blocks of size ``m``."""
    _guard(count_dissections(m, n), max_enum, f"dissections I_{{{m},{n}}}")
    return list(iter_set_partitions([m] * n))
