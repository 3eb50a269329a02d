"""Finite permutation groups: local structure analysis and verification sweeps."""

from .caps import Caps, CapExceeded, DEFAULT_CAPS
from .perm import Permutation
from .group import PermGroup, SubgroupRef, QuotientHandle, build_group, is_quaternion8

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "CapExceeded",
    "DEFAULT_CAPS",
    "Permutation",
    "PermGroup",
    "SubgroupRef",
    "QuotientHandle",
    "build_group",
    "is_quaternion8",
    "__version__",
]
