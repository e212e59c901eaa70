"""cohoma: exact bigraded algebra for descent and QK-structure checks."""
from ._backend import BACKEND
from .core import (
    FIRST,
    MIXED,
    SECOND,
    Algebra,
    Bidegree,
    Derivation,
    Generator,
    Polynomial,
    apply,
    commutator,
    convert_convention,
    exp_derivation,
    mul,
    normalize,
    substitute,
)

__version__ = "0.1.0"
