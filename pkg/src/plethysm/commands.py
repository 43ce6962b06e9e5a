"""Library entry points behind the CLI subcommands.

Each ``cmd_*`` function returns plain JSON-ready dictionaries (or objects with
``to_dict``); formatting, files and exit codes are the CLI's business.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence


from .errors import InvalidInputError, PlethysmError, ResourceLimitError
from .exactlinalg import CertPolicy, Certification, RankReport, certified_rank
from .ortho import KRowStream, OrthMatrix, build_K, build_M, export_matrix
from .partitions import Partition, conjugate, dominates, enumerate_partitions
from .proofcheck import ProofReport, verify_proof
from .tableaux import DEFAULT_MAX_ENUM, count_dissections, count_horizontal, count_vertical

CONJECTURE1 = "conjecture1"
CONJECTURE2 = "conjecture2"
MODES = (CONJECTURE1, CONJECTURE2)


class Verdict(str, enum.Enum):
    ROWS_INDEPENDENT = "ROWS_INDEPENDENT"
    FAILS_BY_COUNTING = "FAILS_BY_COUNTING"
    FULL_RANK = "FULL_RANK"
    NOT_FULL_RANK_CERTIFIED = "NOT_FULL_RANK_CERTIFIED"
    UNDETERMINED = "UNDETERMINED"


FAILURES = (Verdict.FAILS_BY_COUNTING, Verdict.NOT_FULL_RANK_CERTIFIED)


@dataclass
class ConjectureVerdict:
    shape: Partition
    mode: str
    dominance_holds: bool
    h_count: int
    v_count: int
    rank_report: RankReport | None
    verdict: Verdict
    reason: str = ""
    matrix_built: bool = False
    entries_computed: int = 0
    resource_limited: bool = False

    def __post_init__(self) -> None:
        if self.verdict is Verdict.FAILS_BY_COUNTING and not self.h_count > self.v_count:
            raise InvalidInputError("FAILS_BY_COUNTING needs more rows than columns")
        if self.verdict is Verdict.ROWS_INDEPENDENT:
            rep = self.rank_report
            if rep is None or rep.rank != self.h_count or not rep.certified:
                raise InvalidInputError("ROWS_INDEPENDENT needs a certified rank equal to h_count")

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "shape": str(self.shape),
            "mode": self.mode,
            "dominance_holds": self.dominance_holds,
            "h_count": self.h_count,
            "v_count": self.v_count,
            "rank_report": self.rank_report.to_dict(timing) if self.rank_report else None,
            "verdict": self.verdict.value,
            "reason": self.reason,
            "matrix_built": self.matrix_built,
            "entries_computed": self.entries_computed,
        }


def cmd_count(shape: Partition) -> dict:
    conj = conjugate(shape)
    h, v = count_horizontal(shape), count_vertical(shape)
    return {
        "shape": str(shape),
        "conjugate": str(conj),
        "h_count": h,
        "v_count": v,
        "dominance_holds": dominates(shape, conj),
        "comparison": "h > v" if h > v else ("h = v" if h == v else "h < v"),
    }


def _rank_verdict(rep: RankReport, target: int, ok: Verdict) -> tuple[Verdict, str]:
    if rep.rank == target and rep.certified:
        return ok, f"rank {rep.rank} = {target}"
    if rep.certification is Certification.CERTIFIED_EXACT:
        return Verdict.NOT_FULL_RANK_CERTIFIED, f"exact rank {rep.rank} < {target}"
    return Verdict.UNDETERMINED, (f"mod-p rank {rep.rank} < {target}; matrix too large "
                                  "for exact elimination")


def cmd_check(shape: Partition, mode: str = CONJECTURE2, *, policy: CertPolicy | None = None,
              max_enum: int = DEFAULT_MAX_ENUM) -> ConjectureVerdict:
    """Decide one conjecture for one shape, building K only when counting cannot."""
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}, got {mode!r}")
    conj = conjugate(shape)
    dom = dominates(shape, conj)
    h, v = count_horizontal(shape), count_vertical(shape)

    def verdict(kind, reason, rep=None, stream=None, limited=False):
        return ConjectureVerdict(shape, mode, dom, h, v, rep, kind, reason,
                                 matrix_built=stream is not None,
                                 entries_computed=stream.entries_computed if stream else 0,
                                 resource_limited=limited)

    if mode == CONJECTURE1:
        if not dom:
            return verdict(Verdict.UNDETERMINED, "hypothesis not met: shape does not dominate its conjugate")
        if h > v:
            return verdict(Verdict.FAILS_BY_COUNTING,
                           f"{h} rows > {v} columns, rows cannot be independent")
    try:
        stream = KRowStream(shape, max_enum=max_enum)
        rep = certified_rank(stream, policy)
    except ResourceLimitError as exc:
        return verdict(Verdict.UNDETERMINED, f"resource limit: {exc}", limited=True)
    if mode == CONJECTURE1:
        kind, reason = _rank_verdict(rep, h, Verdict.ROWS_INDEPENDENT)
    else:
        kind, reason = _rank_verdict(rep, min(h, v), Verdict.FULL_RANK)
    return verdict(kind, reason, rep, stream, limited=kind is Verdict.UNDETERMINED)


def scan_shapes(n: int, hooks_only: bool = False) -> list[Partition]:
    shapes = enumerate_partitions(n)
    return [p for p in shapes if p.is_hook] if hooks_only else shapes


def cmd_scan(n: int, mode: str = CONJECTURE2, *, hooks_only: bool = False,
             policy: CertPolicy | None = None, max_enum: int = DEFAULT_MAX_ENUM,
             threads: int = 1) -> list[ConjectureVerdict]:
    """One verdict per partition of ``n`` (or per hook), in enumeration order."""
    shapes = scan_shapes(n, hooks_only)

    def run(p: Partition) -> ConjectureVerdict:
        return cmd_check(p, mode, policy=policy, max_enum=max_enum)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, shapes))
    return [run(p) for p in shapes]


def cmd_blacklist(m: int, n: int, *, policy: CertPolicy | None = None,
                  max_enum: int = DEFAULT_MAX_ENUM) -> dict:
    """Rank of M^{m,n} against |I_{n,m}|, plus the entrywise comparison with K."""
    if not 1 <= m <= n:
        raise InvalidInputError(f"need 1 <= m <= n, got m={m}, n={n}")
    mat = build_M(m, n, max_enum=max_enum)
    rep = certified_rank(mat, policy)
    target = count_dissections(n, m)
    k_mat = build_K(Partition.rectangle(m, n), max_enum=max_enum)
    rank_ok = rep.rank == target and rep.certified
    return {
        "m": m,
        "n": n,
        "rows": mat.n_rows,
        "cols": mat.n_cols,
        "I_nm": target,
        "rank_report": rep,
        "rank_equals_I_nm": rank_ok,
        "equals_K_rectangle": mat == k_mat,
        "note": ("Black-List sufficient condition met: Foulkes' conjecture follows for "
                 f"(n, r) = ({n}, r), 1 <= r <= {m}") if rank_ok and m > 1 else
                "Black-List sufficient condition not established",
    }


def cmd_matrix(path, fmt: str, *, shape: Partition | None = None,
               mn: tuple[int, int] | None = None,
               max_enum: int = DEFAULT_MAX_ENUM) -> tuple[OrthMatrix, dict]:
    if (shape is None) == (mn is None):
        raise InvalidInputError("give either a shape (K) or m and n (M)")
    mat = build_K(shape, max_enum=max_enum) if shape is not None else build_M(*mn, max_enum=max_enum)
    side = export_matrix(mat, path, fmt)
    info = {
        "kind": mat.kind,
        "shape": str(shape) if shape is not None else f"M^{{{mn[0]},{mn[1]}}}",
        "rows": mat.n_rows,
        "cols": mat.n_cols,
        "nnz": int(mat.to_array().sum()),
        "format": fmt,
        "path": str(path),
        "labels_path": str(side),
    }
    return mat, info


def cmd_verify_proof(n: int, *, policy: CertPolicy | None = None, max_full: int = 5,
                     max_restricted: int = 6) -> ProofReport:
    return verify_proof(n, max_full=max_full, max_restricted=max_restricted, policy=policy)


def exit_code(verdicts: Sequence[ConjectureVerdict]) -> int:
    if any(v.verdict in FAILURES for v in verdicts):
        return 2
    if any(v.verdict is Verdict.UNDETERMINED and v.resource_limited for v in verdicts):
        return 3
    return 0


__all__ = [
    "CONJECTURE1", "CONJECTURE2", "ConjectureVerdict", "Verdict", "cmd_blacklist", "cmd_check",
    "cmd_count", "cmd_matrix", "cmd_scan", "cmd_verify_proof", "exit_code", "PlethysmError",
]
