"""Interior/closure/boundary calculus and its exact-route cross-checks."""

import pytest

from edenca.errors import RegionOverflowError
from edenca.geometry import (
    CellSet,
    boundary,
    boundary_cells,
    box,
    close_coset_set,
    closure,
    closure_cells,
    coset_set_from_offsets,
    interior,
    interior_cells,
    make_coset_set,
    preimage_cells,
    semi_preimage,
)
from edenca.spaces import GridSpace

from conftest import MOORE, random_cell


def test_cellset_basics():
    cs = CellSet([(3,), (1,), (2,), (1,)])
    assert cs.cells == ((1,), (2,), (3,))
    assert (2,) in cs and (5,) not in cs
    assert cs.position((2,)) == 1
    assert cs.union([(0,)]).cells == ((0,), (1,), (2,), (3,))
    assert cs.difference([(2,)]).cells == ((1,), (3,))
    assert cs.intersection([(2,), (9,)]).cells == ((2,),)
    assert CellSet([(1,)]).issubset(cs)
    assert not cs.issubset(CellSet([(1,)]))
    assert len(CellSet()) == 0 and not CellSet()


def test_coset_set_closure_flag(p4m, dihedral8):
    moore = coset_set_from_offsets(p4m, MOORE)
    assert moore.g0_closed and len(moore) == 9
    east = coset_set_from_offsets(p4m, [(1, 0)])
    assert not east.g0_closed
    closed, added = close_coset_set(p4m, east.cosets)
    assert closed.g0_closed and len(closed) == 4 and len(added) == 3
    win = coset_set_from_offsets(dihedral8, [7, 0, 1])
    assert win.g0_closed
    asym = coset_set_from_offsets(dihedral8, [0, 1])
    assert not asym.g0_closed


def test_stabiliser_only_is_identity_operator(plane, moore_plane):
    a = box(plane, 5)
    region = box(plane, 9)
    e0 = make_coset_set(plane, [plane.stabiliser_coset()])
    assert interior(plane, a, e0, region) == a
    assert closure(plane, a, e0, region) == a
    assert len(boundary(plane, a, e0, region)) == 0


def test_moore_box_counts(plane, moore_plane):
    for n in (4, 7, 10):
        a = box(plane, n)
        region = box(plane, n + 6)
        inner = interior(plane, a, moore_plane, region)
        outer = closure(plane, a, moore_plane, region)
        rim = boundary(plane, a, moore_plane, region)
        assert len(inner) == (n - 2) ** 2
        assert len(outer) == (n + 2) ** 2
        assert len(rim) == 8 * n
        assert rim == outer.difference(inner)


def test_empty_set_yields_empty(plane, moore_plane):
    region = box(plane, 8)
    empty = CellSet()
    assert len(interior(plane, empty, moore_plane, region)) == 0
    assert len(closure(plane, empty, moore_plane, region)) == 0


def test_semi_preimage_translation(plane):
    a = CellSet([(0, 0), (4, 2)])
    region = box(plane, 13)
    c = plane.coset((1, -1))
    pre = semi_preimage(plane, a, c, region)
    assert pre.cells == ((-1, 1), (3, 3))
    assert preimage_cells(plane, a, c) == pre


def test_preimage_bound_p4m(p4m, rng):
    for _ in range(20):
        a = CellSet([random_cell(p4m, rng, 5)])
        c = p4m.coset((rng.randint(-3, 3), rng.randint(-3, 3), rng.randrange(8)))
        pre = preimage_cells(p4m, a, c)
        assert len(pre) <= 8 * len(a)


def _random_cellset(space, rng, size, radius=5):
    return CellSet({random_cell(space, rng, radius) for _ in range(size)})


def _random_coset_set(space, rng, size, radius=2, closed=True):
    from conftest import random_element

    cosets = {space.coset(random_element(space, rng, radius)) for _ in range(size)}
    if closed:
        return close_coset_set(space, cosets)[0]
    return make_coset_set(space, cosets)


def _probe_region(space, rng):
    if space.finite:
        return CellSet(space.cells())
    return box(space, 17)


def test_interior_closure_calculus_randomized(plane, p4m, dihedral8, rng):
    """Items 1-5 of the calculus plus the preimage cardinality bound."""
    for trial in range(60):
        space = (plane, p4m, dihedral8)[trial % 3]
        region = _probe_region(space, rng)
        a = _random_cellset(space, rng, rng.randint(0, 12))
        e = _random_coset_set(space, rng, rng.randint(1, 4), closed=False)
        g0c = space.stabiliser_coset()

        # item 2: {G0, e} interiors and closures are intersections/unions
        e_single = space.coset(e.cosets[0].rep)
        both = make_coset_set(space, [g0c, e_single])
        pre = semi_preimage(space, a, e_single, region)
        a_in_region = a.intersection(region)
        assert interior(space, a, both, region) == a_in_region.intersection(pre)
        assert closure(space, a, both, region) == a_in_region.union(pre)
        assert boundary(space, a, both, region) == (
            a_in_region.difference(pre).union(pre.difference(a_in_region)))

        # item 4: monotonicity under enlarging E
        bigger = make_coset_set(space, set(e.cosets)
                                | {space.coset(space.mul(e.cosets[0].rep, g0))
                                   for g0 in space.stabiliser})
        assert interior(space, a, bigger, region).issubset(interior(space, a, e, region))
        assert closure(space, a, e, region).issubset(closure(space, a, bigger, region))
        assert boundary(space, a, e, region).issubset(boundary(space, a, bigger, region))

        # item 5: with the stabiliser coset present, interior <= A <= closure
        with_g0 = make_coset_set(space, set(e.cosets) | {g0c})
        assert interior(space, a, with_g0, region).issubset(a)
        assert a_in_region.issubset(closure(space, a, with_g0, region))

        # item 7 out of curiosity is the closure bound
        assert len(closure_cells(space, a, e)) <= len(space.stabiliser) * len(a) * len(e)

        # preimage cardinality bound
        c = e.cosets[0]
        assert len(preimage_cells(space, a, c)) <= len(space.stabiliser) * len(a)


def test_complement_duality(plane, moore_plane, rng):
    # inside a window: interior of the complement = window minus closure,
    # restricted to cells whose E-image stays in the window
    w = box(plane, 13)
    for _ in range(10):
        a = _random_cellset(plane, rng, 10, radius=5)
        safe = interior(plane, w, moore_plane, w)
        comp = w.difference(a)
        lhs = interior(plane, comp, moore_plane, safe)
        rhs = safe.difference(closure(plane, a, moore_plane, safe))
        assert lhs == rhs


def test_left_action_commutation(plane, p4m, dihedral8, rng):
    # for a stabiliser-closed E the operators commute with the action
    from edenca.automaton import act_on_pattern  # noqa: F401  (same transport idea)
    from conftest import random_element

    for space in (plane, p4m, dihedral8):
        e = _random_coset_set(space, rng, 3, closed=True)
        for _ in range(8):
            a = _random_cellset(space, rng, 8, radius=4)
            g = random_element(space, rng, 3)
            moved_a = CellSet(space.act(g, m) for m in a)
            for op in (interior_cells, closure_cells, boundary_cells):
                lhs = CellSet(space.act(g, m) for m in op(space, a, e))
                assert lhs == op(space, moved_a, e)


def test_semi_action_commutation(plane, p4m, dihedral8, rng):
    # transporting a set through iota commutes with the operators
    for space in (plane, p4m, dihedral8):
        e = _random_coset_set(space, rng, 3, closed=True)
        for _ in range(8):
            a = _random_cellset(space, rng, 8, radius=4)
            m = random_cell(space, rng, 3)

            def transport(cells):
                return CellSet(space.semi_act(m, space.cell_to_coset(x)) for x in cells)

            for op in (interior_cells, closure_cells, boundary_cells):
                assert transport(op(space, a, e)) == op(space, transport(a), e)


def test_scan_and_exact_routes_agree(plane, p4m, dihedral8, perm_s4, rng):
    for space in (plane, p4m, dihedral8, perm_s4):
        region = _probe_region(space, rng)
        for _ in range(8):
            a = _random_cellset(space, rng, 8, radius=4)
            e = _random_coset_set(space, rng, 3, closed=False)
            exact_int = interior_cells(space, a, e)
            exact_clo = closure_cells(space, a, e)
            assert interior(space, a, e, region) == exact_int.intersection(region)
            assert closure(space, a, e, region) == exact_clo.intersection(region)
            assert boundary(space, a, e, region) == (
                boundary_cells(space, a, e).intersection(region))


def test_region_overflow_propagates():
    tight = GridSpace(2, extent=6)
    a = box(tight, 5)
    e = coset_set_from_offsets(tight, MOORE)
    with pytest.raises(RegionOverflowError):
        # scanning a region whose E-image leaves the declared window
        closure(tight, a, e, box(tight, 13))
    with pytest.raises(RegionOverflowError):
        box(tight, 31)


def test_interior_cells_requires_cosets(plane):
    with pytest.raises(ValueError):
        interior_cells(plane, box(plane, 3), make_coset_set(plane, []))
