"""Orthogonality of tableaux and the 0/1 matrices K_shape and M^{m,n}.

Two tableaux are orthogonal when no row block shares two elements with a
column block.  Equivalently, no pair of elements lies together in a row of
the horizontal tableau and in a column of the vertical one.  The fast path
builds K from that second form: one pair-incidence matrix per side and a
single matrix product.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidInputError, PlethysmError
from .partitions import Partition
from .tableaux import (
    DEFAULT_MAX_ENUM,
    HorizontalTableau,
    VerticalTableau,
    enumerate_dissections,
    enumerate_horizontal,
    enumerate_vertical,
)

ROW_CHUNK = 256


def is_orthogonal(mu: HorizontalTableau, nu: VerticalTableau) -> bool:
    """Every row of ``mu`` meets every column of ``nu`` in at most one element.

    >>> is_orthogonal(HorizontalTableau.parse("1,2|3,4"), VerticalTableau.parse("1,3|2,4"))
    True
    """
    if mu.n != nu.n:
        raise InvalidInputError(f"ground sets differ: {mu.n} vs {nu.n}")
    for r in mu.blocks:
        for c in nu.blocks:
            x = r & c
            if x & (x - 1):
                return False
    return True


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def block_labels(blocks_list: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """``lab[t, e-1]`` = index of the block of tableau ``t`` containing ``e``."""
    lab = np.empty((len(blocks_list), n), dtype=np.int16)
    bits = np.array([1 << e for e in range(n)], dtype=object)
    for t, blocks in enumerate(blocks_list):
        for j, b in enumerate(blocks):
            lab[t, (b & bits) != 0] = j
    return lab


def pair_incidence(blocks_list: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """Row ``t`` marks every pair ``{e, f}`` lying in one block of tableau ``t``."""
    i, j = _pair_index(n)
    lab = block_labels(blocks_list, n)
    return (lab[:, i] == lab[:, j]).astype(np.float32)


@dataclass
class OrthMatrix:
    """A 0/1 matrix with its tableau labels; entries are bit-packed by row."""

    row_labels: list[HorizontalTableau]
    col_labels: list[VerticalTableau]
    packed: np.ndarray
    shape_tag: object
    kind: str = "K"

    @classmethod
    def from_dense(cls, rows, cols, dense: np.ndarray, shape_tag, kind="K") -> "OrthMatrix":
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.shape != (len(rows), len(cols)):
            raise InvalidInputError("entry matrix does not match label counts")
        return cls(list(rows), list(cols), np.packbits(dense, axis=1), shape_tag, kind)

    @property
    def n_rows(self) -> int:
        return len(self.row_labels)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def to_array(self) -> np.ndarray:
        if not self.n_cols:
            return np.zeros((self.n_rows, 0), dtype=np.uint8)
        return np.unpackbits(self.packed, axis=1, count=self.n_cols)

    def entry(self, i: int, j: int) -> int:
        return int((self.packed[i, j >> 3] >> (7 - (j & 7))) & 1)

    def row_chunks(self, size: int) -> Iterator[np.ndarray]:
        for start in range(0, self.n_rows, size):
            yield np.unpackbits(self.packed[start:start + size], axis=1, count=self.n_cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrthMatrix):
            return NotImplemented
        return (self.row_labels == other.row_labels
                and self.col_labels == other.col_labels
                and np.array_equal(self.packed, other.packed))


@dataclass
class KRowStream:
    """Rows of K_shape produced on demand, in horizontal enumeration order.

    Only the column-side pair incidence is held in memory, which is what lets
    the rank engine consume matrices whose dense form would not fit.
    """

    shape: Partition
    max_enum: int = DEFAULT_MAX_ENUM
    row_labels: list[HorizontalTableau] = field(init=False)
    col_labels: list[VerticalTableau] = field(init=False)

    def __post_init__(self) -> None:
        self.row_labels = enumerate_horizontal(self.shape, max_enum=self.max_enum)
        self.col_labels = enumerate_vertical(self.shape, max_enum=self.max_enum)
        n = self.shape.n_total
        self._col_pairs = pair_incidence([v.blocks for v in self.col_labels], n)
        self.entries_computed = 0

    @property
    def n_rows(self) -> int:
        return len(self.row_labels)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    def row_chunks(self, size: int = ROW_CHUNK) -> Iterator[np.ndarray]:
        n = self.shape.n_total
        for start in range(0, self.n_rows, size):
            rows = self.row_labels[start:start + size]
            hp = pair_incidence([h.blocks for h in rows], n)
            block = (hp @ self._col_pairs.T == 0).astype(np.uint8)
            self.entries_computed += block.size
            yield block

    def to_array(self) -> np.ndarray:
        if not self.n_rows:
            return np.zeros((0, self.n_cols), dtype=np.uint8)
        return np.vstack(list(self.row_chunks()))

    def materialize(self) -> OrthMatrix:
        return OrthMatrix.from_dense(self.row_labels, self.col_labels, self.to_array(), self.shape)


def build_K(shape: Partition, *, max_enum: int = DEFAULT_MAX_ENUM) -> OrthMatrix:
    """K_shape: rows are horizontal tableaux, columns vertical ones."""
    return KRowStream(shape, max_enum=max_enum).materialize()


def build_M(m: int, n: int, *, max_enum: int = DEFAULT_MAX_ENUM) -> OrthMatrix:
    """Black-List matrix: rows t in I_{n,m}, columns s in I_{m,n}.

    The entry is 1 iff every block of ``t`` meets every block of ``s`` in
    exactly one element.  Computed directly from the definition, independently
    of :func:`build_K`, so the two can be compared.
    """
    rect = Partition.rectangle(m, n)
    ts = enumerate_dissections(n, m, max_enum=max_enum)
    ss = enumerate_dissections(m, n, max_enum=max_enum)
    dense = np.zeros((len(ts), len(ss)), dtype=np.uint8)
    for i, t in enumerate(ts):
        for j, s in enumerate(ss):
            dense[i, j] = all((a & b).bit_count() == 1 for a in t for b in s)
    rows = [HorizontalTableau._trusted(rect, t) for t in ts]
    cols = [VerticalTableau._trusted(rect, s) for s in ss]
    return OrthMatrix.from_dense(rows, cols, dense, (m, n), kind="M")


EXPORT_FORMATS = ("mm", "dense")


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="ascii", newline="\n")
    except OSError as exc:
        raise PlethysmError(f"cannot write {path}: {exc.strerror or exc}") from exc


def labels_path(path: str | os.PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".labels")


def export_matrix(mat: OrthMatrix, path: str | os.PathLike, format: str = "mm") -> Path:
    """Write ``mat`` as MatrixMarket pattern or dense 0/1 text, plus a label file.

    Returns the path of the label side-file.
    """
    path = Path(path)
    dense = mat.to_array()
    if format == "mm":
        ii, jj = np.nonzero(dense)
        lines = ["%%MatrixMarket matrix coordinate pattern general",
                 f"{mat.n_rows} {mat.n_cols} {len(ii)}"]
        lines += [f"{i + 1} {j + 1}" for i, j in zip(ii.tolist(), jj.tolist())]
    elif format == "dense":
        lines = ["".join("1" if x else "0" for x in row) for row in dense.tolist()]
    else:
        raise InvalidInputError(f"unknown export format {format!r}; expected one of {EXPORT_FORMATS}")
    _write(path, "\n".join(lines) + "\n")
    side = labels_path(path)
    label_lines = [str(t) for t in mat.row_labels] + [""] + [str(t) for t in mat.col_labels]
    _write(side, "\n".join(label_lines) + "\n")
    return side


def read_matrix_market(path: str | os.PathLike) -> np.ndarray:
    """Read back a pattern MatrixMarket file written by :func:`export_matrix`."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("%%MatrixMarket matrix coordinate pattern"):
        raise InvalidInputError(f"{path}: not a MatrixMarket coordinate pattern file")
    body = [ln for ln in lines[1:] if ln and not ln.startswith("%")]
    rows, cols, nnz = map(int, body[0].split())
    out = np.zeros((rows, cols), dtype=np.uint8)
    for ln in body[1:1 + nnz]:
        i, j = map(int, ln.split())
        out[i - 1, j - 1] = 1
    return out
