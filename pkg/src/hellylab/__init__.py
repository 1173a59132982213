"""Computational Helly-type machinery at desk scale.

Nerve hypergraphs of finite geometric families, (p,q)-condition checks,
exact piercing and fractional transversal numbers, forbidden-pattern
detection and finite Ramsey homogenization.
"""

from hellylab.errors import (
    HellyLabError,
    InfeasibleError,
    PreconditionError,
    SchemaError,
    ShortfallError,
    SizeLimitError,
)

__version__ = "0.1.0"

__all__ = [
    "HellyLabError",
    "InfeasibleError",
    "PreconditionError",
    "SchemaError",
    "ShortfallError",
    "SizeLimitError",
    "__version__",
]
