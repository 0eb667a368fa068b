"""Cell spaces: transitive group actions on cell sets, with chosen coordinates.

A cell space couples a group ``G`` acting transitively on a set of cells ``M``
with an origin cell and, for every cell ``m``, a *transporter*: a group element
carrying the origin to ``m``.  The stabiliser of the origin is finite and
explicitly enumerable.  These data induce a right semi-action of the coset
space ``G / G0`` on the cells::

    semi_act(m, c)  =  act(transporter(m) * rep(c), origin)

which is the single primitive behind every neighbourhood computation in this
package.  Cosets are held by canonical representative (the minimum of the
coset under the element total order), so coset equality is plain equality.

Built-in spaces:

* :class:`GridSpace` -- the integer lattice Z^d acting on itself by translation
  (trivial stabiliser).
* :class:`SquareSymmetrySpace` -- Z^2 with translations plus the eight point
  symmetries of the square lattice; stabiliser of the origin has order 8.
* :class:`DihedralSpace` -- vertices of a regular n-gon under rotations and
  reflections; stabiliser order 2.
* :class:`PermutationSpace` -- a finite transitive permutation group given by
  generators.

Group elements and cells are plain hashable tuples / ints, totally ordered by
their natural comparison; the space object owns all structure.  Infinite
lattices carry an explicit coordinate window (``extent``): any operation that
would produce a cell outside the window raises :class:`RegionOverflowError`
rather than wrapping around.  All spaces are immutable after construction and
every operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

from .errors import RegionOverflowError

Cell = Any
Element = Any

DEFAULT_EXTENT = 1 << 20


@dataclass(frozen=True, order=True)
class Coset:
    """A left coset of the origin stabiliser, held by canonical representative."""

    rep: Element

    def __repr__(self):
        return f"Coset({self.rep!r})"


class CellSpace:
    """Base class; subclasses provide the group, the action, and coordinates."""

    kind: str = "abstract"
    finite: bool = False

    # subclasses set these in __init__
    origin: Cell
    identity: Element
    stabiliser: tuple[Element, ...]

    # ------------------------------------------------------------------ group
    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def act(self, g: Element, m: Cell) -> Cell:
        raise NotImplementedError

    def is_cell(self, m) -> bool:
        raise NotImplementedError

    def transporter(self, m: Cell) -> Element:
        """The chosen group element carrying the origin to ``m``."""
        raise NotImplementedError

    def cells(self) -> tuple[Cell, ...]:
        """All cells, in canonical order (finite spaces only)."""
        raise NotImplementedError(f"{self.kind} space is not finite")

    def describe(self) -> dict:
        """JSON-serialisable space descriptor (see :func:`space_from_json`)."""
        raise NotImplementedError

    # ------------------------------------------------------------------ cosets
    def canonical_rep(self, g: Element) -> Element:
        return min(self.mul(g, g0) for g0 in self.stabiliser)

    def coset(self, g: Element) -> Coset:
        return Coset(self.canonical_rep(g))

    def stabiliser_coset(self) -> Coset:
        """The coset of the identity (the stabiliser itself)."""
        return Coset(self.canonical_rep(self.identity))

    def coset_mul(self, g: Element, c: Coset) -> Coset:
        """Left-multiply a coset by a group element, canonicalised."""
        return self.coset(self.mul(g, c.rep))

    def cell_to_coset(self, m: Cell) -> Coset:
        """The coset of transporters of ``m``; inverse of :meth:`coset_to_cell`."""
        return self.coset(self.transporter(m))

    def coset_to_cell(self, c: Coset) -> Cell:
        return self.act(c.rep, self.origin)

    # ------------------------------------------------------------- semi-action
    def semi_act(self, m: Cell, c: Coset) -> Cell:
        return self.act(self.mul(self.transporter(m), c.rep), self.origin)

    def undo_element(self, m: Cell, c: Coset) -> Element:
        """An element ``g`` of ``c`` undoing the semi-action step taken at ``m``.

        For every coset ``c'``: ``semi_act(semi_act(m, c), c') ==
        semi_act(m, coset(g * rep(c')))``; in particular stepping by the coset
        of ``inv(g)`` returns to ``m``.
        """
        target = self.semi_act(m, c)
        return self.mul(self.inv(self.transporter(m)), self.transporter(target))

    def preimage_cells(self, cells: Iterable[Cell], c: Coset) -> list[Cell]:
        """All cells that the semi-action by ``c`` sends into ``cells``.

        Exact and region-free: for each target the candidates are the
        ``|stabiliser|`` transporter variants, so the result has at most
        ``|stabiliser| * len(cells)`` members.
        """
        b = self.coset_to_cell(c)
        tb = self.transporter(b)
        tb_inv = self.inv(tb)
        stab_b = [self.mul(tb, self.mul(g0, tb_inv)) for g0 in self.stabiliser]
        out = set()
        for a in cells:
            h0 = self.mul(self.transporter(a), tb_inv)
            for s in stab_b:
                m = self.act(self.mul(h0, s), self.origin)
                if self.semi_act(m, c) == a:
                    out.add(m)
        return sorted(out)

    def cosets_of_offsets(self, offsets: Iterable[Cell]) -> list[Coset]:
        """Cosets corresponding to offset cells (via ``cell_to_coset``), sorted."""
        return sorted({self.cell_to_coset(o) for o in offsets})


# ---------------------------------------------------------------------------
# Z^d under translation
# ---------------------------------------------------------------------------


class GridSpace(CellSpace):
    """The lattice Z^d acting on itself by translation.

    Cells and group elements are both d-tuples of ints.  The action is free,
    so the transporter of a cell is forced: the translation by the cell
    itself.  Cosets are in natural bijection with cells.
    """

    kind = "zd"
    finite = False

    def __init__(self, dims: int = 1, extent: int = DEFAULT_EXTENT):
        if dims < 1:
            raise ValueError("dims must be >= 1")
        if extent < 1:
            raise ValueError("extent must be >= 1")
        self.dims = dims
        self.extent = extent
        self.origin = (0,) * dims
        self.identity = (0,) * dims
        self.stabiliser = (self.identity,)

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def is_cell(self, m):
        return (
            isinstance(m, tuple)
            and len(m) == self.dims
            and all(isinstance(x, int) and abs(x) <= self.extent for x in m)
        )

    def act(self, g, m):
        out = tuple(a + b for a, b in zip(g, m))
        if any(abs(x) > self.extent for x in out):
            raise RegionOverflowError(out, self.extent)
        return out

    def transporter(self, m):
        return m

    # trivial stabiliser: cosets are the elements themselves
    def canonical_rep(self, g):
        return g

    def semi_act(self, m, c):
        out = tuple(a + b for a, b in zip(m, c.rep))
        if any(abs(x) > self.extent for x in out):
            raise RegionOverflowError(out, self.extent)
        return out

    def preimage_cells(self, cells, c):
        v = c.rep
        out = []
        for a in cells:
            m = tuple(x - y for x, y in zip(a, v))
            if any(abs(x) > self.extent for x in m):
                raise RegionOverflowError(m, self.extent)
            out.append(m)
        return sorted(set(out))

    def describe(self):
        return {"kind": "zd", "dims": self.dims, "extent": self.extent}


# ---------------------------------------------------------------------------
# Z^2 with the point symmetries of the square lattice (wallpaper group p4m)
# ---------------------------------------------------------------------------

def _mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_apply(mat, v):
    return (mat[0][0] * v[0] + mat[0][1] * v[1], mat[1][0] * v[0] + mat[1][1] * v[1])


_ROT90 = ((0, -1), (1, 0))      # quarter turn, counter-clockwise
_FLIPX = ((1, 0), (0, -1))      # reflection across the x-axis
_IDMAT = ((1, 0), (0, 1))


def _build_point_group():
    mats = []
    r = _IDMAT
    for _ in range(4):
        mats.append(r)
        r = _mat_mul(_ROT90, r)
    for i in range(4):
        mats.append(_mat_mul(mats[i], _FLIPX))
    index = {mat: i for i, mat in enumerate(mats)}
    mul = tuple(tuple(index[_mat_mul(mats[i], mats[j])] for j in range(8)) for i in range(8))
    inv = []
    for i in range(8):
        inv.append(next(j for j in range(8) if mul[i][j] == 0))
    return tuple(mats), mul, tuple(inv)


_D4_MATS, _D4_MUL, _D4_INV = _build_point_group()


class SquareSymmetrySpace(CellSpace):
    """Z^2 acted on by translations composed with the 8 square symmetries.

    Group elements are ``(tx, ty, r)`` with ``r`` indexing the point part
    (0 = identity, 1..3 = quarter turns, 4..7 = those composed with the x-axis
    reflection).  The stabiliser of the origin is the full point group.  The
    default transporter of a cell is the pure translation by it, so every
    coset's canonical representative is a pure translation and the semi-action
    moves cells by that translation.  ``point_part`` optionally twists the
    coordinate system: ``transporter(m) = (mx, my, point_part(m))``.
    """

    kind = "p4m"
    finite = False

    def __init__(self, extent: int = DEFAULT_EXTENT,
                 point_part: Optional[Callable[[Cell], int]] = None):
        if extent < 1:
            raise ValueError("extent must be >= 1")
        self.extent = extent
        self.origin = (0, 0)
        self.identity = (0, 0, 0)
        self.stabiliser = tuple((0, 0, r) for r in range(8))
        self._point_part = point_part

    def mul(self, g, h):
        tx, ty = _mat_apply(_D4_MATS[g[2]], (h[0], h[1]))
        return (g[0] + tx, g[1] + ty, _D4_MUL[g[2]][h[2]])

    def inv(self, g):
        r = _D4_INV[g[2]]
        tx, ty = _mat_apply(_D4_MATS[r], (g[0], g[1]))
        return (-tx, -ty, r)

    def is_cell(self, m):
        return (
            isinstance(m, tuple)
            and len(m) == 2
            and all(isinstance(x, int) and abs(x) <= self.extent for x in m)
        )

    def act(self, g, m):
        px, py = _mat_apply(_D4_MATS[g[2]], m)
        out = (g[0] + px, g[1] + py)
        if abs(out[0]) > self.extent or abs(out[1]) > self.extent:
            raise RegionOverflowError(out, self.extent)
        return out

    def transporter(self, m):
        r = self._point_part(m) if self._point_part is not None else 0
        return (m[0], m[1], r)

    def semi_act(self, m, c):
        if self._point_part is None:
            # transporter is a pure translation and rep(c) is (vx, vy, 0)
            out = (m[0] + c.rep[0], m[1] + c.rep[1])
            if abs(out[0]) > self.extent or abs(out[1]) > self.extent:
                raise RegionOverflowError(out, self.extent)
            return out
        return super().semi_act(m, c)

    def describe(self):
        if self._point_part is not None:
            raise ValueError("custom point_part coordinates are not JSON-serialisable")
        return {"kind": "p4m", "extent": self.extent}


# ---------------------------------------------------------------------------
# Vertices of a regular n-gon under the dihedral group
# ---------------------------------------------------------------------------


class DihedralSpace(CellSpace):
    """The n vertices of a regular polygon under rotations and reflections.

    Elements are ``(k, f)``: rotate by ``k`` steps after optionally reflecting
    (``f`` = 1 negates).  A vertex ``m`` maps to ``(k + (-1)^f * m) mod n``.
    The stabiliser of vertex 0 is {identity, reflection}, order 2.  Default
    transporter of vertex ``k`` is the rotation by ``k`` steps; ``flips`` may
    choose the reflected transporter per vertex instead.
    """

    kind = "dihedral"
    finite = True

    def __init__(self, n: int, flips: Optional[Iterable[int]] = None):
        if n < 3:
            raise ValueError("need n >= 3 vertices")
        self.n = n
        self.origin = 0
        self.identity = (0, 0)
        self.stabiliser = ((0, 0), (0, 1))
        if flips is None:
            self._flips = (0,) * n
        else:
            self._flips = tuple(flips)
            if len(self._flips) != n or any(f not in (0, 1) for f in self._flips):
                raise ValueError("flips must be n values in {0, 1}")
        self._cells = tuple(range(n))

    def mul(self, g, h):
        k1, f1 = g
        k2, f2 = h
        k = (k1 - k2) % self.n if f1 else (k1 + k2) % self.n
        return (k, f1 ^ f2)

    def inv(self, g):
        k, f = g
        return (k, 1) if f else ((-k) % self.n, 0)

    def is_cell(self, m):
        return isinstance(m, int) and 0 <= m < self.n

    def act(self, g, m):
        k, f = g
        return (k - m) % self.n if f else (k + m) % self.n

    def transporter(self, m):
        return (m, self._flips[m])

    def cells(self):
        return self._cells

    def describe(self):
        doc = {"kind": "dihedral", "n": self.n}
        if any(self._flips):
            doc["flips"] = list(self._flips)
        return doc


# ---------------------------------------------------------------------------
# Finite transitive permutation groups
# ---------------------------------------------------------------------------


class PermutationSpace(CellSpace):
    """A finite group of permutations of {0, ..., degree-1}, acting naturally.

    The group is the closure of the given generators (each a tuple of images);
    the action must be transitive.  Elements are image tuples; composition
    ``mul(g, h)`` applies ``h`` first.  The transporter of a cell ``m`` is by
    default the least element sending 0 to ``m``; ``transporter_map`` overrides
    it per cell.
    """

    kind = "finite-perm"
    finite = True

    def __init__(self, degree: int, generators: Iterable[Iterable[int]],
                 transporter_map: Optional[dict] = None, max_order: int = 100000):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        self.degree = degree
        gens = [tuple(g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"{g!r} is not a permutation of range({degree})")
        self.origin = 0
        self.identity = tuple(range(degree))
        self._generators = tuple(gens)
        self.elements = self._closure(gens, max_order)
        orbit = {g[0] for g in self.elements}
        if orbit != set(range(degree)):
            raise ValueError("the generated group does not act transitively")
        self.stabiliser = tuple(sorted(g for g in self.elements if g[0] == 0))
        self._cells = tuple(range(degree))
        if transporter_map is None:
            trans = {}
            for g in sorted(self.elements):
                trans.setdefault(g[0], g)
            self._transporters = trans
        else:
            for m, g in transporter_map.items():
                if tuple(g)[0] != m:
                    raise ValueError(f"transporter for {m} does not map 0 to it")
            self._transporters = {m: tuple(g) for m, g in transporter_map.items()}
            if set(self._transporters) != set(range(degree)):
                raise ValueError("transporter_map must cover every cell")

    def _closure(self, gens, max_order):
        els = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for h in frontier:
                for g in gens:
                    prod = tuple(g[h[i]] for i in range(self.degree))
                    if prod not in els:
                        els.add(prod)
                        new.append(prod)
                        if len(els) > max_order:
                            raise ValueError("group closure exceeds max_order")
            frontier = new
        return tuple(sorted(els))

    def mul(self, g, h):
        return tuple(g[h[i]] for i in range(self.degree))

    def inv(self, g):
        out = [0] * self.degree
        for i, gi in enumerate(g):
            out[gi] = i
        return tuple(out)

    def is_cell(self, m):
        return isinstance(m, int) and 0 <= m < self.degree

    def act(self, g, m):
        return g[m]

    def transporter(self, m):
        return self._transporters[m]

    def cells(self):
        return self._cells

    def describe(self):
        doc = {"kind": "finite-perm", "degree": self.degree,
               "generators": [list(g) for g in self._generators]}
        if any(self._transporters[m] != min(g for g in self.elements if g[0] == m)
               for m in range(self.degree)):
            doc["transporters"] = [list(self._transporters[m]) for m in range(self.degree)]
        return doc


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------


def normalize_cell(space: CellSpace, raw) -> Cell:
    """Convert a JSON cell (int or array) to the space's native cell form.

    Dihedral vertices are reduced mod n, so relative offsets like -1 denote
    the expected neighbour.
    """
    if isinstance(space, DihedralSpace):
        if not isinstance(raw, int):
            raise ValueError(f"cell {raw!r}: expected an int for {space.kind}")
        return raw % space.n
    if isinstance(space, PermutationSpace):
        if not isinstance(raw, int) or not space.is_cell(raw):
            raise ValueError(f"cell {raw!r} is not valid for this {space.kind} space")
        return raw
    if isinstance(raw, int):
        raw = [raw]
    cell = tuple(int(x) for x in raw)
    if not space.is_cell(cell):
        raise ValueError(f"cell {raw!r} is not valid for this {space.kind} space")
    return cell


def cell_to_json(space: CellSpace, m: Cell):
    return m if isinstance(m, int) else list(m)


def space_from_json(doc: dict) -> CellSpace:
    """Build a space from its JSON descriptor (see each class's ``describe``)."""
    kind = doc.get("kind")
    if kind == "zd":
        return GridSpace(dims=int(doc.get("dims", 1)),
                         extent=int(doc.get("extent", DEFAULT_EXTENT)))
    if kind == "p4m":
        return SquareSymmetrySpace(extent=int(doc.get("extent", DEFAULT_EXTENT)))
    if kind == "dihedral":
        return DihedralSpace(int(doc["n"]), flips=doc.get("flips"))
    if kind == "finite-perm":
        trans = doc.get("transporters")
        tmap = {i: tuple(t) for i, t in enumerate(trans)} if trans else None
        return PermutationSpace(int(doc["degree"]), doc["generators"], transporter_map=tmap)
    raise ValueError(f"unsupported space kind: {kind!r}")
