import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from arrowhead import curve
from arrowhead.errors import ConsistencyError, DepthLimitError, DomainError

levels = st.integers(min_value=1, max_value=7)


def complex_turtle(m):
    """Plain float turtle, rewriting by hand, as an oracle for the lattice walk."""
    s = "XF"
    for _ in range(m):
        s = "".join({"X": "YF+XF+Y", "Y": "XF-YF-X"}.get(ch, ch) for ch in s)
    heading = cmath.exp(1j * math.pi / 3) if m % 2 else 1.0
    turn = cmath.exp(-1j * math.pi / 3)
    z, out = 0j, [0j]
    for ch in s:
        if ch == "F":
            z += heading * 2.0**-m
            out.append(z)
        elif ch == "+":
            heading *= turn
        elif ch == "-":
            heading /= turn
    return np.array([[p.real, p.imag] for p in out])


@pytest.mark.parametrize("m", range(1, 8))
def test_lattice_walk_matches_float_turtle(m):
    assert np.max(np.abs(curve.build_level(m).vertices - complex_turtle(m))) < 1e-12


def test_level_zero_is_rejected():
    with pytest.raises(DomainError):
        curve.build_level(0)


@given(levels)
def test_chain_runs_from_a_to_d_with_unit_steps(m):
    lv = curve.build_level(m)
    assert lv.point(1) == curve.START
    assert np.allclose(lv.point(len(lv)), curve.END, atol=1e-15)
    steps = np.hypot(*np.diff(lv.vertices, axis=0).T)
    assert np.allclose(steps, 2.0**-m, rtol=0, atol=1e-15)


@given(st.integers(min_value=1, max_value=6))
def test_each_third_is_a_half_size_copy(m):
    """V_(m+1) splits into three similar copies of V_m with ratio 1/2."""
    fine = curve.build_level(m + 1).vertices
    coarse = curve.build_level(m).vertices
    zc = coarse[:, 0] + 1j * coarse[:, 1]
    n = 3**m
    for k in range(3):
        part = fine[k * n:(k + 1) * n + 1]
        zp = part[:, 0] + 1j * part[:, 1]
        # z -> a z + b or a conj(z) + b, fixed by the two endpoints
        fitted = []
        for src in (zc, np.conj(zc)):
            a = (zp[-1] - zp[0]) / (src[-1] - src[0])
            fitted.append(np.max(np.abs(a * (src - src[0]) + zp[0] - zp)))
            assert abs(abs(a) - 0.5) < 1e-12
        assert min(fitted) < 1e-12


@given(levels)
def test_nested_every_third_vertex(m):
    if m == 7:
        return
    assert np.array_equal(curve.build_level(m + 1).vertices[::3], curve.build_level(m).vertices)


def test_vertices_lie_on_the_triangular_lattice():
    lv = curve.build_level(5)
    a, b = lv.lattice.T
    scale = 2.0**-6
    assert np.allclose(lv.vertices[:, 0], (2 * a + b) * scale)
    assert np.allclose(lv.vertices[:, 1], b * math.sqrt(3) * scale)


def test_arrays_are_read_only():
    lv = curve.build_level(3)
    with pytest.raises(ValueError):
        lv.vertices[0, 0] = 1.0


@given(levels)
def test_v1_positions_carry_the_level_one_points(m):
    lv = curve.build_level(m)
    assert np.allclose(lv.vertices[curve.v1_indices(m)], curve.build_level(1).vertices, atol=1e-15)


@given(st.integers(min_value=0, max_value=9))
def test_vertex_count_round_trip(m):
    assert curve.level_from_size(curve.vertex_count(m)) == m


def test_level_from_size_rejects_other_sizes():
    with pytest.raises(DomainError):
        curve.level_from_size(11)


def test_depth_limit(monkeypatch):
    with pytest.raises(DepthLimitError):
        curve.build_level(13)
    monkeypatch.setenv("ARROWHEAD_MAX_DEPTH", "3")
    with pytest.raises(DepthLimitError):
        curve.build_level(4)


def test_arc_coordinate_and_index_checks():
    assert curve.arc_coordinate(2, 4) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        curve.arc_coordinate(2, 11)
    with pytest.raises(DomainError):
        curve.build_level(2).point(0)


def test_lsystem_lengths():
    # each F begets three Fs
    for m in range(5):
        assert curve.lsystem_string(m).count("F") == 3**m
        assert (curve.turtle_program(m) == 0).sum() == 3**m


def test_similarity_maps():
    assert curve.apply_similarity(curve.HOMOTHECIES[1], curve.START) == pytest.approx((0.5, 0.0))
    rot = curve.SimilarityMap(curve.START, 1.0, math.pi / 2)
    assert rot((1.0, 0.0)) == pytest.approx((0.0, 1.0), abs=1e-15)
    with pytest.raises(DomainError):
        curve.SimilarityMap(curve.START, 0.0)


@pytest.mark.parametrize("m", range(1, 7))
def test_trapezes_tile_with_equal_area(m):
    cells = curve.trapeze_decomposition(m)
    assert len(cells) == 3 ** (m - 1)
    assert cells.total_area == pytest.approx(3 ** (m - 1) * curve.expected_trapeze_area(m), rel=1e-13)
    assert cells.trapezes[-1].vertex_indices == (3**m - 2, 3**m - 1, 3**m, 3**m + 1)


def test_expected_area_shrinks_by_four():
    assert curve.expected_trapeze_area(1) == pytest.approx(3 * math.sqrt(3) / 16)
    assert curve.expected_trapeze_area(3) == pytest.approx(curve.expected_trapeze_area(2) / 4)


def test_trapeze_defects_are_reported():
    bad = [(0, 0), (0.3, 0.4), (0.7, 0.4), (1, 0)]
    t = curve.Trapeze(1, 1, (1, 2, 3, 4), tuple(curve.Point2(*p) for p in bad), 0.0)
    assert curve.trapeze_area(t) > 0
    assert curve._trapeze_defects(bad, 0.5, 1e-12)
    flat = curve.Trapeze(1, 1, (1, 2, 3, 4), ((0, 0), (1, 0), (2, 0), (3, 0)), 0.0)
    with pytest.raises(ConsistencyError):
        curve.trapeze_area(flat)


def test_gasket_vertex_counts():
    # (3**(m+1) + 3) / 2 distinct vertices at level m
    for m in range(5):
        assert len(curve.gasket_vertices(m)) == (3 ** (m + 1) + 3) // 2


@pytest.mark.parametrize("m", range(1, 6))
def test_curve_is_strictly_inside_the_gasket(m):
    rep = curve.subset_checks(m)
    assert rep.ok, rep
    assert rep.nested_witness is None and rep.gasket_witness is None


def test_dedupe_keeps_first_occurrence():
    pts = [(0, 0), (1, 0), (0, 1e-12), (1, 0)]
    assert curve.dedupe_points(pts).tolist() == [[0, 0], [1, 0]]


def test_fine_levels_fill_in_the_coarse_ones():
    gaps = [curve.max_gap(m + 2, m) for m in range(1, 5)]
    assert all(g <= 2 * 2.0**-m for m, g in zip(range(1, 5), gaps))
    assert gaps == sorted(gaps, reverse=True)
