"""Game comonads over finite relational structures.

Builds the Ehrenfeucht-Fraisse, pebbling and modal comonads explicitly,
solves the matching model-comparison games, computes tree-depth and
tree-width as coalgebra numbers, and cross-checks every game-level answer
against brute-force logical oracles and homomorphism counting.
"""

from gckit.structures import (
    Signature,
    Structure,
    PointedStructure,
    Hom,
    InputError,
    GuardExceeded,
)

__all__ = [
    "Signature",
    "Structure",
    "PointedStructure",
    "Hom",
    "InputError",
    "GuardExceeded",
]

__version__ = "0.1.0"
