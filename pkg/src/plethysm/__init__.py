"""Exact rank checks for tableau orthogonality matrices and the 2 x n proof.

Enumerates horizontal and vertical tableaux, builds the orthogonality matrix
K_shape and the Black-List matrix M^{m,n}, certifies their ranks exactly and
verifies the identities behind full rank of K for two-row rectangles.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    InvalidComparisonError,
    InvalidInputError,
    ParseError,
    PlethysmError,
    ResourceLimitError,
)
from .partitions import Partition, conjugate, dominates, enumerate_partitions, parse_partition  # noqa: E402
from .tableaux import (  # noqa: E402
    HorizontalTableau,
    VerticalTableau,
    count_dissections,
    count_horizontal,
    count_vertical,
    enumerate_horizontal,
    enumerate_vertical,
)
from .ortho import OrthMatrix, build_K, build_M, export_matrix, is_orthogonal  # noqa: E402
from .exactlinalg import (  # noqa: E402
    CertPolicy,
    Certification,
    RankReport,
    certified_rank,
    rank_exact,
    rank_mod_p,
)

__all__ = [
    "CertPolicy", "Certification", "HorizontalTableau", "InvalidComparisonError",
    "InvalidInputError", "OrthMatrix", "ParseError", "Partition", "PlethysmError", "RankReport",
    "ResourceLimitError", "VerticalTableau", "build_K", "build_M", "certified_rank", "conjugate",
    "count_dissections", "count_horizontal", "count_vertical", "dominates", "enumerate_horizontal",
    "enumerate_partitions", "enumerate_vertical", "export_matrix", "is_orthogonal",
    "parse_partition", "rank_exact", "rank_mod_p",
]
