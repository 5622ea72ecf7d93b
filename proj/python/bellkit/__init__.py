"""Bell-scenario analysis.

Functionals and behaviors are NumPy arrays indexed ``[x][y][a][b]``.
"""

from ._core import (
    GuardExceeded,
    UndefinedQuantity,
    banach_norm,
    chsh,
    classical_value,
    classical_value_incomplete,
    comm_lower_bound,
    complete_behavior,
    functional_document,
    functional_from_json,
    is_local,
    magic_square,
    max_violation,
    noise_robustness,
    random_functional,
    seesaw,
)

__version__ = "0.1.0"

__all__ = [
    "GuardExceeded",
    "UndefinedQuantity",
    "banach_norm",
    "chsh",
    "classical_value",
    "classical_value_incomplete",
    "comm_lower_bound",
    "complete_behavior",
    "functional_document",
    "functional_from_json",
    "is_local",
    "magic_square",
    "max_violation",
    "noise_robustness",
    "random_functional",
    "seesaw",
]
