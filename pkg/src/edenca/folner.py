"""Følner sequences for the built-in spaces and their boundary diagnostics.

The built-in sequence for a lattice is the net of centred boxes; finite spaces
are Følner-trivial (every index yields the whole cell set).  Defects and
boundary ratios are returned as exact rationals so tests can compare without
tolerances.  Only sequences indexed by the naturals are provided; all built-in
spaces are countable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import geometry
from .geometry import CellSet
from .spaces import CellSpace, Coset


@dataclass(frozen=True)
class FolnerSequence:
    """An index -> non-empty finite cell set generator, reproducible by index."""

    description: str
    generator: Callable[[int], CellSet] = field(compare=False)

    def __call__(self, i: int) -> CellSet:
        return self.generator(i)


def folner_box(space: CellSpace, i: int) -> CellSet:
    """The i-th member of the built-in sequence: a centred i-box, or all of a
    finite space."""
    if i < 1:
        raise ValueError("index must be >= 1")
    if space.finite:
        return CellSet(space.cells())
    if space.kind not in ("zd", "p4m"):
        raise ValueError(f"no built-in Følner sequence for space kind {space.kind!r}")
    return geometry.box(space, i)


def folner_sequence(space: CellSpace) -> FolnerSequence:
    if space.finite:
        desc = f"constant whole-space sequence on {space.kind}"
    else:
        desc = f"centred boxes on {space.kind}"
    return FolnerSequence(desc, lambda i: folner_box(space, i))


def folner_defect(space: CellSpace, F: CellSet, c: Coset,
                  region: Optional[CellSet] = None) -> Fraction:
    """|F \\ preimage(F, c)| / |F|, exactly.

    With ``region`` the preimage is computed by scanning it (the region must
    contain every preimage cell that lies in F for the value to be the true
    defect); without it the exact preimage construction is used.
    """
    if not F:
        raise ValueError("F must be non-empty")
    if region is None:
        pre = geometry.preimage_cells(space, F, c)
    else:
        pre = geometry.semi_preimage(space, F, c, region)
    stay = len(F.intersection(pre))
    return Fraction(len(F) - stay, len(F))


def boundary_ratio(space: CellSpace, F: CellSet, E,
                   region: Optional[CellSet] = None) -> Fraction:
    """|E-boundary of F| / |F|, exactly."""
    if not F:
        raise ValueError("F must be non-empty")
    if region is None:
        bnd = geometry.boundary_cells(space, F, E) if len(E) else CellSet()
    else:
        bnd = geometry.boundary(space, F, E, region)
    return Fraction(len(bnd), len(F))
