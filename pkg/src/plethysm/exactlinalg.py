"""Exact rank of integer (mostly 0/1) matrices.

Two engines live here:

* :func:`rank_mod_p` folds a stream of rows into an echelon basis over the
  field with ``p`` elements.  Incoming rows are batched; each batch is
  reduced against the retained basis with one modular matrix product, so the
  hot loop runs in BLAS rather than in Python.
* :func:`rank_exact` is Bareiss fraction-free elimination over the integers,
  which gives the rank over the rationals.

:func:`certified_rank` combines them.  A mod-p rank is a lower bound for the
rational rank, so a prime that reaches ``min(rows, cols)`` certifies full
rank.  A deficiency is only ever certified by exact arithmetic.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Protocol, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError

DEFAULT_PRIMES: tuple[int, ...] = (2147483647, 2147483629, 2147483587)
DEFAULT_MAX_EXACT = 2000
DEFAULT_CHUNK = 32

_LIMB = 16
_LIMB_MASK = (1 << _LIMB) - 1
# float64 matmul stays exact while inner_dim * 2**32 < 2**53.
_MAX_INNER = 1 << 20


class Certification(str, enum.Enum):
    CERTIFIED_FULL = "CERTIFIED_FULL"
    CERTIFIED_EXACT = "CERTIFIED_EXACT"
    MOD_P_EVIDENCE = "MOD_P_EVIDENCE"


class RankMethod(str, enum.Enum):
    MOD_P = "mod_p"
    FRACTION_FREE = "fraction_free"


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, exact for all ``p < 3.3e24``."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _check_modulus(p: int) -> int:
    p = int(p)
    if not 2 <= p < 2**31 or not is_prime(p):
        raise InvalidInputError(f"modulus must be a prime below 2**31, got {p}")
    return p


def _as_residues(block, p: int) -> np.ndarray:
    arr = np.asarray(block)
    if arr.dtype == object:
        arr = np.array([[int(x) % p for x in row] for row in arr], dtype=np.int64)
        return arr.reshape(np.asarray(block).shape)
    if not np.issubdtype(arr.dtype, np.integer) and arr.dtype != bool:
        raise InvalidInputError(f"expected an integer matrix, got dtype {arr.dtype}")
    return np.mod(arr.astype(np.int64), p)


def matmul_mod(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """``x @ y mod p`` for residue matrices with ``p < 2**31``.

    Both operands are split into 16-bit limbs so every partial product sum is
    an integer below ``2**53`` and float64 BLAS computes it exactly.
    """
    if x.shape[1] >= _MAX_INNER:
        raise InvalidInputError("inner dimension too large for exact float matmul")
    xl = (x & _LIMB_MASK).astype(np.float64)
    xh = (x >> _LIMB).astype(np.float64)
    yl = (y & _LIMB_MASK).astype(np.float64)
    yh = (y >> _LIMB).astype(np.float64)
    hi = (xh @ yh).astype(np.int64) % p
    mid = (xl @ yh).astype(np.int64) + (xh @ yl).astype(np.int64)
    lo = (xl @ yl).astype(np.int64) % p
    acc = hi * (1 << _LIMB) % p
    acc = (acc + mid % p) * (1 << _LIMB) % p
    return (acc + lo) % p


class ModPEchelon:
    """Incremental row-echelon basis over GF(p).

    Basis rows are kept in insertion order; row ``i`` is 1 at its pivot and 0
    at the pivots of rows ``0..i-1``.  Memory is ``rank * n_cols`` words.
    """

    def __init__(self, p: int, n_cols: int) -> None:
        self.p = _check_modulus(p)
        self.n_cols = n_cols
        self.pivots: list[int] = []
        self._blocks: list[np.ndarray] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.n_cols

    def _basis(self) -> np.ndarray:
        if len(self._blocks) > 1:
            self._blocks = [np.vstack(self._blocks)]
        return self._blocks[0]

    def _reduce(self, chunk: np.ndarray) -> np.ndarray:
        """Subtract the basis combination that clears every known pivot."""
        p = self.p
        basis = self._basis()
        # Solve x @ U = chunk[:, pivots] with U = basis[:, pivots] unit upper triangular.
        x = chunk[:, self.pivots].copy()
        u = basis[:, self.pivots]
        r = len(self.pivots)
        for i in range(r - 1):
            xi = x[:, i]
            if xi.any():
                x[:, i + 1:] = (x[:, i + 1:] - np.outer(xi, u[i, i + 1:])) % p
        return (chunk - matmul_mod(x, basis, p)) % p

    def add(self, chunk) -> None:
        """Fold a 2-d block of rows into the basis."""
        p = self.p
        c = _as_residues(chunk, p)
        if c.ndim != 2 or c.shape[1] != self.n_cols:
            raise InvalidInputError(
                f"row length {c.shape[-1] if c.ndim else 0} does not match {self.n_cols} columns")
        c = c[c.any(axis=1)]
        if not len(c) or self.full:
            return
        if self.pivots:
            c = self._reduce(c)
            c = c[c.any(axis=1)]
        new_rows: list[np.ndarray] = []
        while len(c):
            nz = c != 0
            lead = np.where(nz.any(axis=1), nz.argmax(axis=1), self.n_cols)
            i = int(lead.argmin())
            col = int(lead[i])
            if col == self.n_cols:
                break
            row = c[i] * pow(int(c[i, col]), -1, p) % p
            rest = np.delete(c, i, axis=0)
            hit = np.flatnonzero(rest[:, col])
            if hit.size:
                rest[hit] = (rest[hit] - np.outer(rest[hit, col], row)) % p
            new_rows.append(row)
            self.pivots.append(col)
            c = rest[rest.any(axis=1)]
        if new_rows:
            self._blocks.append(np.vstack(new_rows))


def _iter_chunks(rows, chunk: int) -> Iterator[np.ndarray]:
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2:
            raise InvalidInputError("expected a 2-d matrix")
        for start in range(0, rows.shape[0], chunk):
            yield rows[start:start + chunk]
        return
    buf: list = []
    width = None
    for vec in rows:
        vec = list(vec) if not isinstance(vec, np.ndarray) else vec
        if width is None:
            width = len(vec)
        elif len(vec) != width:
            raise InvalidInputError(f"inconsistent vector lengths {width} and {len(vec)}")
        buf.append(vec)
        if len(buf) == chunk:
            yield np.array(buf)
            buf = []
    if buf:
        yield np.array(buf)


def rank_mod_p(rows: Iterable[Sequence[int]] | np.ndarray, p: int, *,
               chunk: int = DEFAULT_CHUNK) -> int:
    """Rank over GF(p) of a matrix given as a 2-d array or a stream of rows.

    >>> rank_mod_p([[0, 1, 1], [1, 0, 1], [1, 1, 0]], 2)
    2
    >>> rank_mod_p([[0, 1, 1], [1, 0, 1], [1, 1, 0]], 3)
    3
    """
    p = _check_modulus(p)
    ech: ModPEchelon | None = None
    for block in _iter_chunks(rows, chunk):
        if ech is None:
            ech = ModPEchelon(p, block.shape[1])
        elif block.shape[1] != ech.n_cols:
            raise InvalidInputError(
                f"inconsistent vector lengths {ech.n_cols} and {block.shape[1]}")
        ech.add(block)
    return 0 if ech is None else ech.rank


def rank_exact(matrix, *, max_dim: int = DEFAULT_MAX_EXACT) -> int:
    """Rank over the rationals by Bareiss single-step fraction-free elimination.

    Every intermediate entry is a minor of the input, so the division by the
    previous pivot is exact and integers never become fractions.
    """
    if hasattr(matrix, "to_array"):
        matrix = matrix.to_array()
    a = np.array(matrix, dtype=object)
    if a.size == 0:
        return 0
    if a.ndim != 2:
        raise InvalidInputError("expected a 2-d matrix")
    m, n = a.shape
    if max(m, n) > max_dim:
        raise ResourceLimitError("exact rank", max(m, n), max_dim)
    a = np.vectorize(int, otypes=[object])(a)
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = [i for i in range(r, m) if a[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        if r + 1 < m:
            below = a[r + 1:, c].copy()
            a[r + 1:, c + 1:] = (piv * a[r + 1:, c + 1:]
                                 - np.outer(below, a[r, c + 1:])) // prev
            a[r + 1:, c] = 0
        prev = piv
        r += 1
    return r


class RowSource(Protocol):
    """Anything that can stream its rows in order, possibly repeatedly."""

    n_rows: int
    n_cols: int

    def row_chunks(self, size: int) -> Iterator[np.ndarray]: ...

    def to_array(self) -> np.ndarray: ...


@dataclass
class ArraySource:
    array: np.ndarray

    def __post_init__(self) -> None:
        self.array = np.asarray(self.array)
        if self.array.ndim != 2:
            raise InvalidInputError("expected a 2-d matrix")
        self.n_rows, self.n_cols = self.array.shape

    def row_chunks(self, size: int) -> Iterator[np.ndarray]:
        for start in range(0, self.n_rows, size):
            yield self.array[start:start + size]

    def to_array(self) -> np.ndarray:
        return self.array


@dataclass(frozen=True)
class CertPolicy:
    primes: tuple[int, ...] = DEFAULT_PRIMES
    max_exact: int = DEFAULT_MAX_EXACT
    chunk: int = DEFAULT_CHUNK

    def __post_init__(self) -> None:
        if not self.primes:
            raise InvalidInputError("policy needs at least one prime")
        for p in self.primes:
            _check_modulus(p)


@dataclass(frozen=True)
class RankReport:
    rank: int
    n_rows: int
    n_cols: int
    certification: Certification
    moduli_used: tuple[int, ...] = ()
    method: RankMethod = RankMethod.MOD_P
    elapsed_ms: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if self.rank > min(self.n_rows, self.n_cols):
            raise InvalidInputError("rank exceeds matrix dimensions")
        if (self.certification is Certification.CERTIFIED_FULL
                and self.rank != min(self.n_rows, self.n_cols)):
            raise InvalidInputError("CERTIFIED_FULL requires full rank")

    @property
    def is_full(self) -> bool:
        return self.rank == min(self.n_rows, self.n_cols)

    @property
    def certified(self) -> bool:
        return self.certification is not Certification.MOD_P_EVIDENCE

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "rank": self.rank,
            "rows": self.n_rows,
            "cols": self.n_cols,
            "certification": self.certification.value,
            "moduli_used": list(self.moduli_used),
            "method": self.method.value,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing else 0,
        }


def certified_rank(source, policy: CertPolicy | None = None) -> RankReport:
    """Rank with an explicit certification level.

    ``source`` is a :class:`RowSource` or anything :class:`ArraySource` accepts.
    """
    policy = policy or CertPolicy()
    if not hasattr(source, "row_chunks"):
        source = ArraySource(source)
    start = time.perf_counter()
    n_rows, n_cols = source.n_rows, source.n_cols
    bound = min(n_rows, n_cols)
    used: list[int] = []
    best = 0

    def report(rank, cert, method):
        return RankReport(rank, n_rows, n_cols, cert, tuple(used), method,
                          (time.perf_counter() - start) * 1e3)

    for p in policy.primes:
        ech = ModPEchelon(p, n_cols)
        for block in source.row_chunks(policy.chunk):
            ech.add(block)
            if ech.rank == bound:
                break
        used.append(p)
        best = max(best, ech.rank)
        if best == bound:
            return report(best, Certification.CERTIFIED_FULL, RankMethod.MOD_P)
    if max(n_rows, n_cols) <= policy.max_exact:
        r = rank_exact(source.to_array(), max_dim=policy.max_exact)
        return report(r, Certification.CERTIFIED_EXACT, RankMethod.FRACTION_FREE)
    return report(best, Certification.MOD_P_EVIDENCE, RankMethod.MOD_P)


class PrimeFieldMatrix:
    """Dense residue matrix over GF(p)."""

    def __init__(self, rows, modulus: int) -> None:
        self.modulus = _check_modulus(modulus)
        arr = _as_residues(rows, self.modulus)
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1)
        self.rows = arr

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape

    def rank(self) -> int:
        return rank_mod_p(self.rows, self.modulus)
