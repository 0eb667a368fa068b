"""Finite cell sets, coset sets, and the interior/closure/boundary calculus.

Each operator exists in two routes:

* the region-scan form (``interior``, ``closure``, ``boundary``,
  ``semi_preimage``) decides membership for every cell of an explicit finite
  region, exactly;
* the region-free exact form (``interior_cells`` etc.) assembles the same sets
  from analytic semi-action preimages, with no scan region to get wrong.

The two routes cross-check each other in the test suite; the exact forms also
supply safe margins for windowed computations on infinite lattices.
"""

from __future__ import annotations

from typing import Iterable

from .spaces import CellSpace, Coset


class CellSet:
    """An immutable finite set of cells, iterated in canonical order."""

    __slots__ = ("cells", "_set", "_pos")

    def __init__(self, cells: Iterable = ()):
        self.cells = tuple(sorted(set(cells)))
        self._set = frozenset(self.cells)
        self._pos = None

    def position(self, cell) -> int:
        """Index of ``cell`` in canonical order (KeyError if absent)."""
        if self._pos is None:
            self._pos = {c: i for i, c in enumerate(self.cells)}
        return self._pos[cell]

    def __contains__(self, cell):
        return cell in self._set

    def __iter__(self):
        return iter(self.cells)

    def __len__(self):
        return len(self.cells)

    def __bool__(self):
        return bool(self.cells)

    def __eq__(self, other):
        return isinstance(other, CellSet) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"CellSet({list(self.cells)!r})"

    def union(self, other) -> "CellSet":
        return CellSet(self._set | _as_set(other))

    def difference(self, other) -> "CellSet":
        return CellSet(self._set - _as_set(other))

    def intersection(self, other) -> "CellSet":
        return CellSet(self._set & _as_set(other))

    def issubset(self, other) -> bool:
        return self._set <= _as_set(other)


def _as_set(other) -> frozenset:
    if isinstance(other, CellSet):
        return other._set
    return frozenset(other)


class CosetSet:
    """An immutable finite set of cosets in canonical order.

    ``g0_closed`` records whether the set is closed under left multiplication
    by the stabiliser; neighbourhood constructions require that.
    """

    __slots__ = ("cosets", "g0_closed")

    def __init__(self, cosets: tuple, g0_closed: bool):
        self.cosets = cosets
        self.g0_closed = g0_closed

    def __iter__(self):
        return iter(self.cosets)

    def __len__(self):
        return len(self.cosets)

    def __contains__(self, c):
        return c in self.cosets

    def __eq__(self, other):
        return isinstance(other, CosetSet) and self.cosets == other.cosets

    def __hash__(self):
        return hash(self.cosets)

    def __repr__(self):
        return f"CosetSet({list(self.cosets)!r}, g0_closed={self.g0_closed})"


def make_coset_set(space: CellSpace, cosets: Iterable[Coset]) -> CosetSet:
    items = tuple(sorted(set(cosets)))
    pool = set(items)
    closed = all(
        space.coset_mul(g0, c) in pool for g0 in space.stabiliser for c in items
    )
    return CosetSet(items, closed)


def close_coset_set(space: CellSpace, cosets: Iterable[Coset]):
    """Close a coset set under the stabiliser; returns (closed set, added)."""
    pool = set(cosets)
    frontier = list(pool)
    added = []
    while frontier:
        c = frontier.pop()
        for g0 in space.stabiliser:
            d = space.coset_mul(g0, c)
            if d not in pool:
                pool.add(d)
                added.append(d)
                frontier.append(d)
    return CosetSet(tuple(sorted(pool)), True), tuple(sorted(added))


def coset_set_from_offsets(space: CellSpace, offsets: Iterable) -> CosetSet:
    return make_coset_set(space, space.cosets_of_offsets(offsets))


def semi_image(space: CellSpace, m, E) -> list:
    """The cells ``m`` reaches through every coset of ``E`` (freeness keeps
    them distinct)."""
    return [space.semi_act(m, e) for e in E]


# ---------------------------------------------------------------------- scans


def interior(space: CellSpace, A: CellSet, E, region: CellSet) -> CellSet:
    """Cells of ``region`` whose whole E-image lies in ``A``."""
    return CellSet(
        m for m in region
        if all(space.semi_act(m, e) in A for e in E)
    )


def closure(space: CellSpace, A: CellSet, E, region: CellSet) -> CellSet:
    """Cells of ``region`` whose E-image meets ``A``."""
    return CellSet(
        m for m in region
        if any(space.semi_act(m, e) in A for e in E)
    )


def boundary(space: CellSpace, A: CellSet, E, region: CellSet) -> CellSet:
    """closure minus interior, in one scan over ``region``."""
    out = []
    for m in region:
        hit = miss = False
        for e in E:
            if space.semi_act(m, e) in A:
                hit = True
            else:
                miss = True
        if hit and miss:
            out.append(m)
    return CellSet(out)


def semi_preimage(space: CellSpace, A: CellSet, c: Coset, region: CellSet) -> CellSet:
    """Cells of ``region`` that the semi-action by ``c`` maps into ``A``."""
    return CellSet(m for m in region if space.semi_act(m, c) in A)


# ------------------------------------------------------------ exact, no region


def preimage_cells(space: CellSpace, A, c: Coset) -> CellSet:
    return CellSet(space.preimage_cells(A, c))


def closure_cells(space: CellSpace, A, E) -> CellSet:
    out = set()
    for e in E:
        out.update(space.preimage_cells(A, e))
    return CellSet(out)


def interior_cells(space: CellSpace, A, E) -> CellSet:
    """Exact E-interior as the intersection of per-coset preimages.

    Requires a non-empty ``E``: with no cosets the interior is the whole
    space, which is not materialisable on infinite lattices.
    """
    it = iter(E)
    try:
        first = next(it)
    except StopIteration:
        raise ValueError("interior_cells needs a non-empty coset set") from None
    acc = set(space.preimage_cells(A, first))
    for e in it:
        if not acc:
            break
        acc &= set(space.preimage_cells(A, e))
    return CellSet(acc)


def boundary_cells(space: CellSpace, A, E) -> CellSet:
    return closure_cells(space, A, E).difference(interior_cells(space, A, E))


def box(space: CellSpace, size: int) -> CellSet:
    """A size^d box centred at the origin (whole cell set on finite spaces)."""
    if size < 1:
        raise ValueError("size must be >= 1")
    if space.finite:
        return CellSet(space.cells())
    lo = -(size // 2)
    dims = space.dims if hasattr(space, "dims") else 2
    ranges = [range(lo, lo + size)] * dims
    out = []
    _fill_box(ranges, (), out)
    cells = [tuple(c) for c in out]
    for c in cells[:1] + cells[-1:]:
        if not space.is_cell(c):
            from .errors import RegionOverflowError

            raise RegionOverflowError(c, space.extent)
    return CellSet(cells)


def _fill_box(ranges, prefix, out):
    if not ranges:
        out.append(prefix)
        return
    for x in ranges[0]:
        _fill_box(ranges[1:], prefix + (x,), out)
