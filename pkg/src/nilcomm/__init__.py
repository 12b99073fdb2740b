"""Generic Jordan types of nilpotent matrices commuting with a nilpotent Jordan matrix."""

__version__ = "0.1.0"

from .exactmat import DEFAULT_PRIME, ExactMatrix, PrimeField, jordan_type, rank  # noqa: E402
from .partition import (  # noqa: E402
    HilbertFunction,
    Order,
    Partition,
    ar_count,
    conjugate,
    d_closed_form,
    dominance_compare,
    has_gaps_ge_two,
    lambda_of_H,
    macaulay_admissible,
    oblak_index,
    partitions_of,
)

__all__ = [
    "DEFAULT_PRIME",
    "ExactMatrix",
    "HilbertFunction",
    "Order",
    "Partition",
    "PrimeField",
    "ar_count",
    "conjugate",
    "d_closed_form",
    "dominance_compare",
    "has_gaps_ge_two",
    "jordan_type",
    "lambda_of_H",
    "macaulay_admissible",
    "oblak_index",
    "partitions_of",
    "rank",
]
