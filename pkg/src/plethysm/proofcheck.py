"""Machine checks of the combinatorial identities behind full rank of K_{2 x n}.

Everything here works on the rectangle with two rows of length ``n``.
Horizontal tableaux are splits of ``{1..2n}`` into two ``n``-sets.  Vertical
tableaux are perfect matchings of ``{1..2n}``.  A partial tableau is a set of
``k < n`` disjoint pairs.

Brute-force oracles (``extensions``, ``count_extensions``,
``orthogonal_to_partial_bruteforce``) deliberately go through
:func:`plethysm.ortho.is_orthogonal` one tableau at a time and never touch the
vectorised matrix builder they are used to validate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial, lcm
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .exactlinalg import CertPolicy, certified_rank
from .ortho import KRowStream, is_orthogonal
from .partitions import Partition
from .tableaux import HorizontalTableau, VerticalTableau, bit, block_from

MAX_N_FULL = 5
MAX_N_RESTRICTED = 6
FULL = "full"
RESTRICTED = "restricted"


@dataclass(frozen=True)
class PartialTableau:
    """``k`` disjoint columns of height two, drawn from ``{1..2n}``."""

    n: int
    columns: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        cols = tuple(sorted(tuple(sorted(c)) for c in self.columns))
        seen: set[int] = set()
        for c in cols:
            if len(c) != 2 or c[0] == c[1]:
                raise InvalidInputError(f"column {c} must hold two distinct elements")
            if not (1 <= c[0] and c[1] <= 2 * self.n):
                raise InvalidInputError(f"column {c} outside {{1..{2 * self.n}}}")
            if seen & set(c):
                raise InvalidInputError("columns of a partial tableau must be disjoint")
            seen.update(c)
        if len(cols) >= self.n:
            raise InvalidInputError(f"a partial tableau has k < n columns, got k={len(cols)}")
        object.__setattr__(self, "columns", cols)

    @property
    def k(self) -> int:
        return len(self.columns)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(bit(a) | bit(b) for a, b in self.columns)

    @property
    def support(self) -> int:
        out = 0
        for m in self.masks:
            out |= m
        return out

    def __str__(self) -> str:
        return "|".join(f"{a},{b}" for a, b in self.columns) or "-"


@dataclass(frozen=True)
class TypeStat:
    a: int
    b: int
    reference_size: int

    def __post_init__(self) -> None:
        if self.a + self.b != self.reference_size or not self.a >= self.b >= 0:
            raise InvalidInputError(f"invalid type statistic {self}")


@dataclass
class CheckRecord:
    """One verified identity, as emitted in JSON reports."""

    check: str
    inputs: dict
    expected: object
    observed: object
    passed: bool

    def to_dict(self, timing: bool = True) -> dict:
        return {"check": self.check, "inputs": self.inputs, "expected": self.expected,
                "observed": self.observed, "pass": self.passed}


def two_row(n: int) -> Partition:
    return Partition.rectangle(2, n)


def mu0(n: int) -> HorizontalTableau:
    """The horizontal tableau with rows ``{1..n}`` and ``{n+1..2n}``."""
    return HorizontalTableau(two_row(n), (block_from(range(1, n + 1)),
                                          block_from(range(n + 1, 2 * n + 1))))


def _half(mu: HorizontalTableau) -> int:
    parts = mu.shape.parts
    if len(parts) != 2 or parts[0] != parts[1]:
        raise InvalidInputError(f"expected a 2 x n horizontal tableau, got shape {mu.shape}")
    return parts[0]


def _check_n(mu: HorizontalTableau, nu_p: PartialTableau) -> None:
    if _half(mu) != nu_p.n:
        raise InvalidInputError(f"partial tableau for n={nu_p.n} used with a 2 x {_half(mu)} tableau")


def orthogonal_to_partial(mu: HorizontalTableau, nu_p: PartialTableau) -> bool:
    """Every column of ``nu_p`` has its two entries in different rows of ``mu``."""
    _check_n(mu, nu_p)
    top = mu.blocks[0]
    return all(bool(top & bit(a)) != bool(top & bit(b)) for a, b in nu_p.columns)


def _matchings(free: Sequence[int]) -> Iterator[list[tuple[int, int]]]:
    if not free:
        yield []
        return
    first, rest = free[0], free[1:]
    for i, partner in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + tail


def extensions(nu_p: PartialTableau) -> Iterator[VerticalTableau]:
    """Every vertical tableau of 2 x n having ``nu_p`` as a subtableau."""
    n = nu_p.n
    used = nu_p.support
    free = [e for e in range(1, 2 * n + 1) if not used & bit(e)]
    shape = two_row(n)
    for tail in _matchings(free):
        yield VerticalTableau(shape, nu_p.masks + tuple(bit(a) | bit(b) for a, b in tail))


def orthogonal_to_partial_bruteforce(mu: HorizontalTableau, nu_p: PartialTableau) -> bool:
    _check_n(mu, nu_p)
    return any(is_orthogonal(mu, nu) for nu in extensions(nu_p))


def count_extensions(mu: HorizontalTableau, nu_p: PartialTableau) -> int:
    """Number of vertical ``nu`` containing ``nu_p`` with ``mu`` orthogonal to ``nu``."""
    _check_n(mu, nu_p)
    return sum(is_orthogonal(mu, nu) for nu in extensions(nu_p))


def _partial_matchings(alphabet: Sequence[int], k: int) -> Iterator[tuple[tuple[int, int], ...]]:
    # First elements increase from pair to pair, which is the canonical order.
    if k == 0:
        yield ()
        return
    for i, x in enumerate(alphabet):
        if len(alphabet) - i < 2 * k:
            break
        after = alphabet[i + 1:]
        for j, y in enumerate(after):
            for tail in _partial_matchings(after[:j] + after[j + 1:], k - 1):
                yield ((x, y),) + tail


def enumerate_partials(n: int, k: int, alphabet: str = FULL) -> list[PartialTableau]:
    """Partial tableaux with ``k`` columns over ``{1..2n}`` (full) or ``{1..n}`` (restricted)."""
    if alphabet == FULL:
        letters = range(1, 2 * n + 1)
        if not 0 <= k < n:
            raise InvalidInputError(f"k must satisfy 0 <= k < n, got k={k}, n={n}")
    elif alphabet == RESTRICTED:
        letters = range(1, n + 1)
        if not 0 <= k <= n // 2:
            raise InvalidInputError(f"k must satisfy 0 <= k <= n//2, got k={k}, n={n}")
    else:
        raise InvalidInputError(f"unknown alphabet {alphabet!r}")
    return [PartialTableau(n, cols) for cols in _partial_matchings(list(letters), k)]


def enumerate_restricted_partials(n: int, k: int) -> list[PartialTableau]:
    """The set P_k: partial tableaux with all ``2k`` entries in ``{1..n}``."""
    return enumerate_partials(n, k, RESTRICTED)


def type_of(mu: HorizontalTableau, reference: Iterable[int] | None = None) -> TypeStat:
    """Split of the reference set (default ``{1..n}``) between the rows of ``mu``."""
    n = _half(mu)
    ref = block_from(range(1, n + 1) if reference is None else reference)
    if ref.bit_count() != n:
        raise InvalidInputError("reference set must have n elements")
    x = (mu.blocks[0] & ref).bit_count()
    y = (mu.blocks[1] & ref).bit_count()
    return TypeStat(max(x, y), min(x, y), n)


def coefficient_c(n: int, a: int, k: int) -> int:
    """Count of ``P_k`` members orthogonal to a fixed tableau of type ``a``; 0 off range."""
    if not 0 <= a <= n or not 0 <= k <= min(a, n - a):
        return 0
    return (factorial(n - a) * factorial(a)
            // (factorial(k) * factorial(n - a - k) * factorial(a - k)))


class TwoRowContext:
    """Cached H, V and dense K for the 2 x n rectangle."""

    def __init__(self, n: int, *, max_n: int = MAX_N_FULL) -> None:
        if n < 1:
            raise InvalidInputError("n must be positive")
        if n > max_n:
            raise ResourceLimitError("2 x n proof check", n, max_n)
        self.n = n
        self.shape = two_row(n)
        stream = KRowStream(self.shape)
        self.H = stream.row_labels
        self.V = stream.col_labels
        self._stream = stream

    @cached_property
    def K(self) -> np.ndarray:
        return self._stream.to_array().astype(np.int64)

    @cached_property
    def _column_incidence(self) -> tuple[np.ndarray, dict[int, int]]:
        index: dict[int, int] = {}
        for nu in self.V:
            for c in nu.blocks:
                index.setdefault(c, len(index))
        inc = np.zeros((len(self.V), len(index)), dtype=bool)
        for j, nu in enumerate(self.V):
            for c in nu.blocks:
                inc[j, index[c]] = True
        return inc, index

    def family(self, nu_p: PartialTableau) -> np.ndarray:
        """Column indices of F(nu_p): the vertical tableaux containing ``nu_p``."""
        inc, index = self._column_incidence
        if not nu_p.columns:
            return np.arange(len(self.V))
        cols = [index[m] for m in nu_p.masks]
        return np.flatnonzero(inc[:, cols].all(axis=1))

    def partial_indicator(self, nu_p: PartialTableau) -> np.ndarray:
        return np.array([orthogonal_to_partial(mu, nu_p) for mu in self.H], dtype=np.int64)

    @cached_property
    def types(self) -> list[int]:
        return [type_of(mu).a for mu in self.H]


def _context(n: int, context: TwoRowContext | None, max_n: int = MAX_N_FULL) -> TwoRowContext:
    if context is not None:
        if context.n != n:
            raise InvalidInputError("context built for a different n")
        return context
    return TwoRowContext(n, max_n=max_n)


def check_zero_filter(n: int, nu_p: PartialTableau, context: TwoRowContext | None = None
                      ) -> CheckRecord:
    """Column sum of K over F(nu_p) against (n-k)! times the orthogonality indicator."""
    if nu_p.n != n:
        raise InvalidInputError("partial tableau built for a different n")
    ctx = _context(n, context)
    colsum = ctx.K[:, ctx.family(nu_p)].sum(axis=1)
    expected = factorial(n - nu_p.k) * ctx.partial_indicator(nu_p)
    ok = bool(np.array_equal(colsum, expected))
    return CheckRecord("zero_filter_identity", {"n": n, "k": nu_p.k, "partial": str(nu_p)},
                       expected.tolist(), colsum.tolist(), ok)


def zero_filter_identity(n: int, k: int, nu_p: PartialTableau,
                         context: TwoRowContext | None = None) -> bool:
    if nu_p.k != k:
        raise InvalidInputError(f"partial tableau has {nu_p.k} columns, expected {k}")
    return check_zero_filter(n, nu_p, context).passed


def check_extension_count(mu: HorizontalTableau, nu_p: PartialTableau) -> CheckRecord:
    ortho = orthogonal_to_partial(mu, nu_p)
    brute = orthogonal_to_partial_bruteforce(mu, nu_p)
    count = count_extensions(mu, nu_p)
    expected = factorial(nu_p.n - nu_p.k) if ortho else 0
    return CheckRecord("extension_count",
                       {"n": nu_p.n, "k": nu_p.k, "mu": str(mu), "partial": str(nu_p)},
                       {"orthogonal": ortho, "count": expected},
                       {"orthogonal": brute, "count": count},
                       ortho == brute and count == expected)


def coefficient_records(n: int, k: int, context: TwoRowContext | None = None
                        ) -> list[CheckRecord]:
    if not 0 <= k <= n // 2:
        raise InvalidInputError(f"k must satisfy 0 <= k <= n//2, got k={k}, n={n}")
    ctx = _context(n, context, MAX_N_RESTRICTED)
    partials = enumerate_restricted_partials(n, k)
    out = []
    for mu, a in zip(ctx.H, ctx.types):
        count = sum(orthogonal_to_partial(mu, p) for p in partials)
        expected = coefficient_c(n, a, k)
        ok = count == expected and (a <= n - k or count == 0)
        out.append(CheckRecord("coefficient_count", {"n": n, "k": k, "mu": str(mu), "type": a},
                               expected, count, ok))
    return out


def verify_coefficient_count(n: int, k: int, context: TwoRowContext | None = None) -> bool:
    """Brute-force count of orthogonal ``P_k`` members equals ``coefficient_c`` for every tableau."""
    return all(r.passed for r in coefficient_records(n, k, context))


@dataclass
class InductionStep:
    a: int
    k: int
    pivot: int
    decomposition_ok: bool
    combination_ok: bool
    kernel_lift_ok: bool
    coefficients: dict[int, Fraction] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.pivot != 0 and self.decomposition_ok and self.combination_ok and self.kernel_lift_ok

    def to_record(self, n: int) -> CheckRecord:
        return CheckRecord(
            "induction_step",
            {"n": n, "a": self.a, "k": self.k,
             "coefficients": {str(k): str(v) for k, v in sorted(self.coefficients.items())}},
            {"pivot_nonzero": True, "decomposition": True, "combination": True, "kernel_lift": True},
            {"pivot_nonzero": self.pivot != 0, "decomposition": self.decomposition_ok,
             "combination": self.combination_ok, "kernel_lift": self.kernel_lift_ok},
            self.passed)


@dataclass
class InductionReport:
    n: int
    steps: list[InductionStep]
    isolates_mu0: bool

    @property
    def passed(self) -> bool:
        return bool(self.steps) and all(s.passed for s in self.steps) and self.isolates_mu0

    def records(self) -> list[CheckRecord]:
        out = [s.to_record(self.n) for s in self.steps]
        out.append(CheckRecord("isolates_mu0", {"n": self.n, "mu0": str(mu0(self.n))},
                               True, self.isolates_mu0, self.isolates_mu0))
        return out


def _combine(vectors: dict[int, np.ndarray], coefs: dict[int, Fraction]) -> list[Fraction]:
    size = len(next(iter(vectors.values())))
    out = [Fraction(0)] * size
    for k, c in coefs.items():
        v = vectors[k]
        for i in range(size):
            if v[i]:
                out[i] += c * int(v[i])
    return out


def verify_induction_chain(n: int, context: TwoRowContext | None = None) -> InductionReport:
    """Rebuild each type indicator from restricted partial-tableau sums.

    For ``a`` from ``n - n//2`` up to ``n`` (so ``k = n - a``), checks that

    * the sum over ``P_k`` of orthogonality indicators equals
      ``sum_{a'' <= a} c(n, a'', k) * [type == a'']``,
    * the type-``a`` indicator is the explicit rational combination of these
      sums obtained by dividing out ``c(n, a, k)``,
    * lifting through the per-partial column-sum identity gives a rational
      vector ``x`` over vertical tableaux with ``K x`` equal to that indicator.

    The last step (``a = n``) is the unit vector at ``mu0``.
    """
    ctx = _context(n, context, MAX_N_FULL)
    types = np.array(ctx.types)
    a_min = n - n // 2
    partials = {k: enumerate_restricted_partials(n, k) for k in range(0, n // 2 + 1)}
    sums = {k: sum((ctx.partial_indicator(p) for p in ps), np.zeros(len(ctx.H), dtype=np.int64))
            for k, ps in partials.items()}
    # cover[k][j] = number of nu' in P_k that are subtableaux of V[j]
    cover: dict[int, np.ndarray] = {}
    for k, ps in partials.items():
        c = np.zeros(len(ctx.V), dtype=np.int64)
        for p in ps:
            c[ctx.family(p)] += 1
        cover[k] = c

    established: dict[int, dict[int, Fraction]] = {}
    steps = []
    for a in range(a_min, n + 1):
        k = n - a
        pivot = coefficient_c(n, a, k)
        predicted = sum((coefficient_c(n, t, k) * (types == t).astype(np.int64)
                         for t in range(a_min, a + 1)), np.zeros(len(ctx.H), dtype=np.int64))
        decomposition_ok = bool(np.array_equal(sums[k], predicted))
        coefs: dict[int, Fraction] = {k: Fraction(1)}
        for t in range(a_min, a):
            for kk, v in established[t].items():
                coefs[kk] = coefs.get(kk, Fraction(0)) - coefficient_c(n, t, k) * v
        if pivot:
            coefs = {kk: v / pivot for kk, v in coefs.items() if v}
        target = (types == a).astype(np.int64)
        combination_ok = pivot != 0 and _combine(sums, coefs) == [Fraction(int(x)) for x in target]
        # x[nu] = sum_k coef_k / (n-k)! * #{nu' in P_k, nu' subtableau of nu}
        xs = {kk: v / factorial(n - kk) for kk, v in coefs.items()}
        denom = lcm(*(v.denominator for v in xs.values())) if xs else 1
        x = np.zeros(len(ctx.V), dtype=object)
        for kk, v in xs.items():
            x = x + cover[kk].astype(object) * int(v * denom)
        lifted = ctx.K.astype(object).dot(x)
        kernel_lift_ok = pivot != 0 and all(int(lifted[i]) == denom * int(target[i])
                                            for i in range(len(target)))
        established[a] = coefs
        steps.append(InductionStep(a, k, pivot, decomposition_ok, combination_ok,
                                   kernel_lift_ok, coefs))
    top = [i for i, t in enumerate(ctx.types) if t == n]
    isolates = len(top) == 1 and ctx.H[top[0]] == mu0(n)
    return InductionReport(n, steps, isolates)


def left_kernel_trivial(n: int, policy: CertPolicy | None = None) -> CheckRecord:
    """Rows of K_{2 x n} are independent, with a certified rank."""
    stream = KRowStream(two_row(n))
    rep = certified_rank(stream, policy)
    ok = rep.rank == stream.n_rows and rep.certified
    return CheckRecord("left_kernel_trivial", {"n": n}, stream.n_rows,
                       {"rank": rep.rank, "certification": rep.certification.value}, ok)


def _sample(items: list, limit: int | None) -> list:
    if limit is None or len(items) <= limit:
        return items
    step = len(items) / limit
    return [items[int(i * step)] for i in range(limit)]


@dataclass
class ProofReport:
    n: int
    records: list[CheckRecord]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            s = out.setdefault(r.check, {"checked": 0, "passed": 0})
            s["checked"] += 1
            s["passed"] += r.passed
        return out


def verify_proof(n: int, *, max_full: int = MAX_N_FULL, max_restricted: int = MAX_N_RESTRICTED,
                 extension_sample: int | None = None,
                 policy: CertPolicy | None = None) -> ProofReport:
    """Run every check for one ``n`` and collect the records.

    Full-alphabet identities need ``n <= max_full``; the restricted ``P_k``
    coefficient checks need ``n <= max_restricted``.  Brute-force extension
    counting is exhaustive for ``n <= 4`` and sampled (200 partials, evenly
    spaced) above that unless ``extension_sample`` says otherwise.
    """
    if n < 2:
        raise InvalidInputError("the 2 x n checks need n >= 2")
    if n > max(max_full, max_restricted):
        raise ResourceLimitError("verify-proof", n, max(max_full, max_restricted))
    records: list[CheckRecord] = []
    if n <= max_full:
        ctx = TwoRowContext(n, max_n=max_full)
        partials = [p for k in range(1, n) for p in enumerate_partials(n, k)]
        records += [check_zero_filter(n, p, ctx) for p in partials]
        limit = extension_sample if extension_sample is not None else (None if n <= 4 else 200)
        for p in _sample(partials, limit):
            records += [check_extension_count(mu, p) for mu in ctx.H]
    else:
        ctx = TwoRowContext(n, max_n=max_restricted)
    for k in range(0, n // 2 + 1):
        records += coefficient_records(n, k, ctx)
    if n <= max_full:
        records += verify_induction_chain(n, ctx).records()
    records.append(left_kernel_trivial(n, policy))
    return ProofReport(n, records)
