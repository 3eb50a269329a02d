"""Resource limits shared by every layer of the package.

All expensive operations check one of these limits up front and raise
``CapExceeded`` instead of silently degrading, so a sweep can skip and log
the offending group.
"""

from __future__ import annotations

from dataclasses import dataclass


class CapExceeded(RuntimeError):
    """An operation would exceed a configured resource cap."""


@dataclass(frozen=True)
class Caps:
    """Tunable limits. The defaults suit interactive desk-scale work."""

    element_cap: int = 20000        # largest group order we will enumerate
    bsgs_order_cap: int = 10_000_000  # largest group order build_group accepts
    quotient_degree_cap: int = 4096   # largest coset-space degree for quotients
    lattice_cap: int = 100_000        # largest subgroup count per lattice
    table_cap: int = 2048             # largest order for a multiplication table


DEFAULT_CAPS = Caps()
