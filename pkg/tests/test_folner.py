"""Følner boxes, defects, boundary ratios, and the two-way characterisation."""

from fractions import Fraction

import pytest

from edenca.folner import boundary_ratio, folner_box, folner_defect, folner_sequence
from edenca.geometry import (
    CellSet,
    box,
    coset_set_from_offsets,
    make_coset_set,
    preimage_cells,
    boundary_cells,
)

from conftest import MOORE


def test_folner_boxes(line, plane, dihedral8):
    assert folner_box(line, 5).cells == ((-2,), (-1,), (0,), (1,), (2,))
    assert len(folner_box(plane, 3)) == 9
    assert folner_box(dihedral8, 1) == CellSet(dihedral8.cells())
    assert folner_box(dihedral8, 99) == CellSet(dihedral8.cells())
    seq = folner_sequence(plane)
    assert seq(4) == folner_box(plane, 4)
    with pytest.raises(ValueError):
        folner_box(plane, 0)


def test_defect_examples(line, plane, dihedral8):
    for n in (5, 10, 40):
        F = folner_box(line, n)
        assert folner_defect(line, F, line.coset((1,))) == Fraction(1, n)
        F2 = folner_box(plane, n)
        assert folner_defect(plane, F2, plane.coset((1, 0))) == Fraction(1, n)
    # stabiliser coset never escapes
    F = folner_box(plane, 6)
    assert folner_defect(plane, F, plane.stabiliser_coset()) == 0
    assert folner_defect(dihedral8, folner_box(dihedral8, 3),
                         dihedral8.coset((2, 0))) == 0


def test_boundary_ratio_examples(plane, moore_plane, dihedral8):
    for n in (4, 10, 100):
        F = folner_box(plane, n)
        assert boundary_ratio(plane, F, moore_plane) == Fraction(8 * n, n * n)
    e0 = make_coset_set(plane, [plane.stabiliser_coset()])
    assert boundary_ratio(plane, folner_box(plane, 7), e0) == 0
    win = coset_set_from_offsets(dihedral8, [7, 0, 1])
    assert boundary_ratio(dihedral8, folner_box(dihedral8, 2), win) == 0


def test_region_and_exact_defects_agree(plane, rng):
    region = box(plane, 20)
    F = folner_box(plane, 8)
    for _ in range(10):
        c = plane.coset((rng.randint(-2, 2), rng.randint(-2, 2)))
        assert folner_defect(plane, F, c) == folner_defect(plane, F, c, region)


def test_escape_set_inside_small_boundary(plane, rng):
    # F minus its preimage sits inside the {G0, e}-boundary of F
    for _ in range(15):
        n = rng.randint(3, 12)
        F = folner_box(plane, n)
        c = plane.coset((rng.randint(-2, 2), rng.randint(-2, 2)))
        pre = preimage_cells(plane, F, c)
        escaped = F.difference(pre)
        e_pair = make_coset_set(plane, [plane.stabiliser_coset(), c])
        assert escaped.issubset(boundary_cells(plane, F, e_pair))


def test_characterisation_both_directions(plane, moore_plane):
    """Defects for all sampled cosets and boundary ratios for E fall below any
    threshold from some common index onward (both directions exercised on the
    same index range)."""
    cosets = [plane.coset(v) for v in ((1, 0), (0, 1), (1, 1), (-1, 0))]
    threshold = Fraction(1, 10)
    first_defect_ok = None
    first_ratio_ok = None
    for n in range(3, 101):
        F = folner_box(plane, n)
        defects_ok = all(folner_defect(plane, F, c) < threshold for c in cosets)
        ratio_ok = boundary_ratio(plane, F, moore_plane) < threshold
        if defects_ok and first_defect_ok is None:
            first_defect_ok = n
        if ratio_ok and first_ratio_ok is None:
            first_ratio_ok = n
    onset = max(first_defect_ok, first_ratio_ok)
    for n in range(onset, 121, 7):
        F = folner_box(plane, n)
        assert boundary_ratio(plane, F, moore_plane) < threshold
        assert all(folner_defect(plane, F, c) < threshold for c in cosets)


def test_ratios_eventually_decreasing(plane, moore_plane):
    values = [boundary_ratio(plane, folner_box(plane, n), moore_plane)
              for n in range(4, 40)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < Fraction(1, 4)


def test_finite_space_is_folner_trivial(dihedral8):
    win = coset_set_from_offsets(dihedral8, [7, 0, 1])
    for i in (1, 2, 5):
        F = folner_box(dihedral8, i)
        assert boundary_ratio(dihedral8, F, win) == 0
        for v in range(8):
            assert folner_defect(dihedral8, F, dihedral8.coset((v, 0))) == 0
