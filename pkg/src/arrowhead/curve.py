"""Vertex chains of the arrowhead graphs and their trapezoidal cells.

Level ``m`` has ``3**m + 1`` vertices joined consecutively by segments of
length ``2**-m``; the chain runs from A = (0, 0) to D = (1, 0). Chain
indices are 1-based in the public API (index 1 is A) and 0-based when
slicing arrays.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from . import kernels
from .errors import ConsistencyError, DepthLimitError, DomainError

DEFAULT_MAX_DEPTH = 12
POINT_TOL = 1e-9
SQRT3 = math.sqrt(3.0)


def max_depth() -> int:
    """Depth limit; ``ARROWHEAD_MAX_DEPTH`` overrides the default of 12."""
    value = os.environ.get("ARROWHEAD_MAX_DEPTH")
    return int(value) if value else DEFAULT_MAX_DEPTH


class Point2(NamedTuple):
    x: float
    y: float


# corners of the unit triangle: the chain runs START -> END
START = Point2(0.0, 0.0)
END = Point2(1.0, 0.0)
APEX = Point2(0.5, SQRT3 / 2)


@dataclass(frozen=True)
class SimilarityMap:
    center: Point2
    ratio: float
    angle: float = 0.0

    def __post_init__(self):
        if not self.ratio > 0:
            raise DomainError(f"similarity ratio must be positive, got {self.ratio}")

    def __call__(self, p):
        return apply_similarity(self, p)


def apply_similarity(sim: SimilarityMap, p) -> Point2:
    cx, cy = sim.center
    dx, dy = p[0] - cx, p[1] - cy
    c, s = math.cos(sim.angle), math.sin(sim.angle)
    return Point2(cx + sim.ratio * (c * dx - s * dy), cy + sim.ratio * (s * dx + c * dy))


# ratio-1/2 homothecies fixing the three corners
HOMOTHECIES = (SimilarityMap(START, 0.5), SimilarityMap(END, 0.5), SimilarityMap(APEX, 0.5))


def vertex_count(m: int) -> int:
    if m < 0:
        raise DomainError(f"level must be non-negative, got {m}")
    return 3**m + 1


def level_from_size(n: int) -> int:
    """Inverse of :func:`vertex_count`; raises DomainError if ``n`` is not ``3**m + 1``."""
    m, k = 0, 1
    while k + 1 < n:
        k *= 3
        m += 1
    if k + 1 != n:
        raise DomainError(f"{n} is not a vertex count 3**m + 1")
    return m


def check_depth(m: int) -> None:
    if m < 1:
        raise DomainError(f"level must be >= 1, got {m}")
    limit = max_depth()
    if m > limit:
        raise DepthLimitError(f"level {m} exceeds the depth limit {limit}")


_PRODUCTIONS = str.maketrans({"X": "YF+XF+Y", "Y": "XF-YF-X"})
_OPCODES = bytes.maketrans(b"F+-", b"\x00\x01\x02")


def lsystem_string(m: int) -> str:
    """The m-fold production of the axiom ``XF``."""
    s = "XF"
    for _ in range(m):
        s = s.translate(_PRODUCTIONS)
    return s


def turtle_program(m: int) -> np.ndarray:
    """Opcode array for the turtle: 0 = step, 1 = '+', 2 = '-' (X, Y dropped)."""
    raw = lsystem_string(m).replace("X", "").replace("Y", "").encode("ascii")
    return np.frombuffer(raw.translate(_OPCODES), dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class GraphLevel:
    level: int
    vertices: np.ndarray = field(repr=False)
    lattice: np.ndarray = field(repr=False)

    @property
    def arc_step(self) -> float:
        return 3.0**-self.level

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def arc_coordinates(self) -> np.ndarray:
        return np.arange(self.n_vertices) / 3**self.level

    def point(self, chain_index: int) -> Point2:
        _check_index(self, chain_index)
        x, y = self.vertices[chain_index - 1]
        return Point2(float(x), float(y))

    def __len__(self):
        return self.n_vertices


def _check_index(level: GraphLevel, chain_index: int) -> None:
    if not 1 <= chain_index <= level.n_vertices:
        raise DomainError(f"chain index {chain_index} out of range 1..{level.n_vertices}")


@lru_cache(maxsize=None)
def _build(m: int) -> GraphLevel:
    # '+' turns clockwise in this frame; odd levels start at 60 degrees so
    # the chain ends at D instead of being mirrored
    start = 1 if m % 2 else 0
    lat = kernels.turtle_walk(turtle_program(m), start)
    a, b = lat[:, 0].astype(np.float64), lat[:, 1].astype(np.float64)
    scale = 2.0 ** -(m + 1)
    pts = np.column_stack(((2 * a + b) * scale, b * SQRT3 * scale))
    pts.flags.writeable = False
    lat.flags.writeable = False
    return GraphLevel(m, pts, lat)


def build_level(m: int) -> GraphLevel:
    """Vertex chain V_m from the arrowhead L-system (cached; arrays are read-only)."""
    check_depth(m)
    return _build(m)


def as_level(level) -> GraphLevel:
    return level if isinstance(level, GraphLevel) else build_level(int(level))


def arc_coordinate(level, chain_index: int) -> float:
    level = as_level(level)
    _check_index(level, chain_index)
    return (chain_index - 1) / 3**level.level


def v1_indices(m: int) -> np.ndarray:
    """0-based chain positions of A, B, C, D inside V_m."""
    step = 3 ** (m - 1)
    return np.array([0, step, 2 * step, 3 * step])


# -- trapezes --------------------------------------------------------------

@dataclass(frozen=True)
class Trapeze:
    level: int
    index: int
    vertex_indices: tuple
    corners: tuple
    area: float


@dataclass(frozen=True)
class TrapezeSet:
    level: int
    trapezes: tuple

    def __len__(self):
        return len(self.trapezes)

    def __iter__(self):
        return iter(self.trapezes)

    @property
    def total_area(self) -> float:
        return math.fsum(t.area for t in self.trapezes)


def shoelace_area(corners) -> float:
    pts = np.asarray(corners, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def trapeze_area(t: Trapeze) -> float:
    area = shoelace_area(t.corners)
    if area <= 0:
        raise ConsistencyError(f"degenerate trapeze {t.index} at level {t.level}")
    return area


def expected_trapeze_area(m: int) -> float:
    return 3 * SQRT3 / 16 * 4.0 ** (1 - m)


def _trapeze_defects(p, h, tol):
    v1, v2, v3, v4 = (np.asarray(q) for q in p)
    problems = []
    base, top = v4 - v1, v3 - v2
    if abs(base[0] * top[1] - base[1] * top[0]) > tol:
        problems.append("bases not parallel")
    if abs(np.hypot(*base) - 2 * np.hypot(*top)) > tol:
        problems.append("long base is not twice the short base")
    legs = (np.hypot(*(v2 - v1)), np.hypot(*(v4 - v3)), np.hypot(*top))
    if max(legs) - min(legs) > tol or abs(legs[0] - h) > tol:
        problems.append("legs differ from short base")
    return problems


def trapeze_decomposition(level, tol: float = 1e-12) -> TrapezeSet:
    """The 3**(m-1) cells; cell j owns chain vertices 3(j-1)+1 .. 3(j-1)+4."""
    level = as_level(level)
    m = level.level
    h = 2.0**-m
    target = expected_trapeze_area(m)
    cells = []
    for j in range(1, 3 ** (m - 1) + 1):
        idx = tuple(range(3 * (j - 1) + 1, 3 * (j - 1) + 5))
        corners = tuple(Point2(*map(float, level.vertices[i - 1])) for i in idx)
        problems = _trapeze_defects(corners, h, tol)
        area = shoelace_area(corners)
        if abs(area - target) > tol:
            problems.append(f"area {area!r} != {target!r}")
        if problems:
            raise ConsistencyError(f"trapeze T_{m},{j}: " + "; ".join(problems))
        cells.append(Trapeze(m, j, idx, corners, area))
    return TrapezeSet(m, tuple(cells))


# -- reference gasket and inclusion checks -----------------------------------

def dedupe_points(points, tol: float = POINT_TOL) -> np.ndarray:
    """Drop points closer than ``tol`` to an earlier point (order preserving)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    tree = cKDTree(pts)
    keep = np.ones(len(pts), dtype=bool)
    for i, j in sorted(tree.query_pairs(tol)):
        if keep[i]:
            keep[j] = False
    return pts[keep]


def gasket_vertices(m: int) -> np.ndarray:
    """Union over words w of length m in the three homothecies of w(triangle corners)."""
    if m < 0:
        raise DomainError(f"level must be non-negative, got {m}")
    pts = np.array([START, END, APEX], dtype=float)
    centers = np.array([START, END, APEX], dtype=float)
    for _ in range(m):
        # apply each homothecy to the current set: c + (p - c) / 2
        pts = (0.5 * (pts[None, :, :] + centers[:, None, :])).reshape(-1, 2)
        pts = dedupe_points(pts)
    return pts


def _missing(points, reference, tol):
    dist, _ = cKDTree(reference).query(points)
    bad = np.flatnonzero(dist > tol)
    return None if bad.size == 0 else Point2(*map(float, points[bad[0]]))


@dataclass(frozen=True)
class SubsetReport:
    level: int
    nested: bool
    nested_witness: Point2 | None
    in_gasket: bool
    gasket_witness: Point2 | None
    strict: bool
    n_curve: int
    n_gasket: int

    @property
    def ok(self) -> bool:
        return self.nested and self.in_gasket and self.strict


def subset_checks(m: int, tol: float = POINT_TOL) -> SubsetReport:
    """V_m within V_(m+1), and V_m strictly inside the level-m gasket vertex set."""
    vm = build_level(m).vertices
    vnext = build_level(m + 1).vertices
    gasket = gasket_vertices(m)
    nested_w = _missing(vm, vnext, tol)
    gasket_w = _missing(vm, gasket, tol)
    return SubsetReport(
        level=m,
        nested=nested_w is None,
        nested_witness=nested_w,
        in_gasket=gasket_w is None,
        gasket_witness=gasket_w,
        strict=len(vm) < len(gasket),
        n_curve=len(vm),
        n_gasket=len(gasket),
    )


def max_gap(fine, coarse) -> float:
    """Largest distance from a vertex of ``fine`` to its nearest vertex of ``coarse``."""
    fine, coarse = as_level(fine), as_level(coarse)
    dist, _ = cKDTree(coarse.vertices).query(fine.vertices)
    return float(dist.max())
