"""Tilings: disjoint small-image centers whose enlarged images cover a region.

A tiling for a pair of coset sets (E, E') is a set of centers whose E-images
are pairwise disjoint while their E'-images cover everything far enough from
the region edge.  ``derive_cover_set`` builds the canonical E' that makes a
maximal disjoint family covering; ``greedy_tiling`` realises maximality by a
deterministic scan in canonical cell order, which is all the existence
argument needs on a finite region.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import geometry
from .geometry import CellSet, CosetSet, make_coset_set
from .spaces import CellSpace


@dataclass(frozen=True)
class Tiling:
    centers: CellSet
    small: CosetSet       # images required pairwise disjoint
    cover: CosetSet       # images required to cover the region's cover-interior
    region: CellSet


@dataclass(frozen=True)
class TilingReport:
    ok: bool
    disjoint_ok: bool
    cover_ok: bool
    failure: Optional[tuple] = None   # ("overlap", cell, t1, t2) | ("uncovered", cell)

    def __str__(self):
        if self.ok:
            return "tiling ok"
        kind = self.failure[0]
        if kind == "overlap":
            _, cell, t1, t2 = self.failure
            return f"overlap at {cell!r} between centers {t1!r} and {t2!r}"
        return f"uncovered cell {self.failure[1]!r}"


def derive_cover_set(space: CellSpace, E) -> CosetSet:
    """The coset set of pairwise quotients g * g'^-1 over all members of all
    cosets of E; at most (|stabiliser| * |E|)^2 cosets before dedup."""
    if not len(E):
        raise ValueError("E must be non-empty")
    reps = [e.rep for e in E]
    stab = space.stabiliser
    members = [space.mul(r, g0) for r in reps for g0 in stab]
    out = set()
    for g in members:
        for h in members:
            out.add(space.coset(space.mul(g, space.inv(h))))
    return make_coset_set(space, out)


def greedy_tiling(space: CellSpace, region: CellSet, E,
                  cover: Optional[CosetSet] = None) -> Tiling:
    """Scan the region in canonical order, accepting a center whenever its
    E-image stays inside the region and misses all previously accepted images.

    The result is maximal among center sets whose E-images lie in the region,
    so its cover-images reach every cell of interior(region, cover).
    """
    if not len(E):
        raise ValueError("E must be non-empty")
    if cover is None:
        cover = derive_cover_set(space, E)
    used = set()
    centers = []
    for m in region:
        img = [space.semi_act(m, e) for e in E]
        if all(c in region for c in img) and not any(c in used for c in img):
            centers.append(m)
            used.update(img)
    small = E if isinstance(E, CosetSet) else make_coset_set(space, E)
    return Tiling(CellSet(centers), small, cover, region)


def verify_tiling(space: CellSpace, t: Tiling) -> TilingReport:
    """Check both tiling invariants exactly; never raises, reports the first
    violation in scan order."""
    owner = {}
    for center in t.centers:
        for cell in geometry.semi_image(space, center, t.small):
            if cell in owner:
                return TilingReport(False, False, False,
                                    ("overlap", cell, owner[cell], center))
            owner[cell] = center
    covered = set()
    for center in t.centers:
        covered.update(geometry.semi_image(space, center, t.cover))
    must_cover = geometry.interior(space, t.region, t.cover, t.region)
    for cell in must_cover:
        if cell not in covered:
            return TilingReport(False, True, False, ("uncovered", cell))
    return TilingReport(True, True, True)


def tiling_density(space: CellSpace, t: Tiling, F: CellSet) -> Fraction:
    """|centers inside the E-interior of F| / |F|, exactly."""
    if not F:
        raise ValueError("F must be non-empty")
    inside = geometry.interior_cells(space, F, t.small)
    hits = sum(1 for c in t.centers if c in inside)
    return Fraction(hits, len(F))
