"""Dirichlet spectra of the order-m Laplacians and spectral decimation.

With zero boundary data on V_1 = {A, B, C, D}, ``-Delta_m`` splits into
three identical path blocks of ``3**(m-1) - 1`` vertices. Eigenvalues
are computed by Sturm bisection (``dirichlet_spectrum_numeric``) and
checked against the closed form ``2 - 2 cos(k pi / 3**(m-1))``
(``dirichlet_spectrum_exact``).

Writing an eigenvalue as ``2 - 2 cos(theta)``, decimation from level m
to level m - 1 is ``theta -> 3 theta``, i.e. the cubic
``L -> 2 + 3 (2 - L) - (2 - L)**3``; on ``]4, inf[`` this is the relation
``phi(L') = phi(L)**3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .curve import check_depth, v1_indices
from .energy import DELTA
from .errors import (
    ConsistencyError,
    DomainError,
    FitError,
    NumericError,
    SingularExtensionError,
    ValidationError,
)
from .laplacian import second_difference

BOUNDARIES = ("V1", "V0")


def _boundary_positions(m: int, boundary: str) -> np.ndarray:
    if boundary == "V1":
        return v1_indices(m)
    if boundary == "V0":
        return np.array([0, 3**m])
    raise ValidationError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")


def group_eigenvalues(values, tol: float = 1e-8):
    """Collapse a sorted eigenvalue list into ``(value, multiplicity)`` pairs."""
    groups = []
    for lam in values:
        if groups and abs(lam - groups[-1][0]) <= tol:
            groups[-1][1] += 1
        else:
            groups.append([float(lam), 1])
    return [tuple(g) for g in groups]


@dataclass(frozen=True, eq=False)
class Spectrum:
    level: int
    eigenvalues: np.ndarray
    boundary: str = "V1"
    method: str = "numeric"

    def __len__(self):
        return self.eigenvalues.shape[0]

    def grouped(self, tol: float = 1e-8):
        return group_eigenvalues(self.eigenvalues, tol)


@dataclass(frozen=True, eq=False)
class DirichletBlock:
    """One connected run of free vertices; ``positions`` are 0-based chain positions."""

    positions: np.ndarray
    diag: np.ndarray
    off: np.ndarray


def dirichlet_blocks(m: int, boundary: str = "V1"):
    """Tridiagonal blocks of ``-Delta_m`` restricted to the free vertices.

    Built from chain adjacency: each free vertex has degree 2 in the full
    chain, and consecutive free vertices are coupled by -1.
    """
    check_depth(m)
    fixed = _boundary_positions(m, boundary)
    blocks = []
    for lo, hi in zip(fixed[:-1], fixed[1:]):
        pos = np.arange(lo + 1, hi)
        if pos.size:
            blocks.append(DirichletBlock(pos, np.full(pos.size, 2.0), np.full(pos.size - 1, -1.0)))
    return blocks


def dirichlet_spectrum_numeric(m: int, boundary: str = "V1", backend: str | None = None) -> Spectrum:
    if m < 2 and boundary == "V1":
        raise DomainError("the V_1 Dirichlet problem needs m >= 2")
    impl = kernels.get_backend(backend)
    parts = []
    for block_id, blk in enumerate(dirichlet_blocks(m, boundary)):
        try:
            ev = impl.tridiag_eigvalsh(blk.diag, blk.off)
        except ArithmeticError as exc:
            raise NumericError(f"eigenvalue bisection failed on block {block_id}: {exc}") from exc
        ev = np.asarray(ev)
        if ev.shape != blk.diag.shape or not np.all(np.isfinite(ev)):
            raise NumericError(f"block {block_id} returned {ev.shape[0]} eigenvalues for size {blk.diag.size}")
        parts.append(ev)
    values = np.sort(np.concatenate(parts), kind="stable")
    return Spectrum(m, values, boundary, "numeric")


def dirichlet_spectrum_exact(m: int, boundary: str = "V1") -> Spectrum:
    """Closed form: each path block of n edges contributes 2 - 2 cos(k pi / n), 0 < k < n."""
    if boundary == "V1":
        if m < 2:
            raise DomainError("the V_1 Dirichlet problem needs m >= 2")
        n, copies = 3 ** (m - 1), 3
    elif boundary == "V0":
        n, copies = 3**m, 1
    else:
        raise ValidationError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")
    k = np.arange(1, n)
    values = np.sort(np.tile(2 - 2 * np.cos(k * np.pi / n), copies), kind="stable")
    return Spectrum(m, values, boundary, "exact")


def dirichlet_eigenpairs(m: int, boundary: str = "V1"):
    """Eigenvalues and eigenvectors (as full vertex functions, zero on the boundary).

    Returns ``(values, vectors)`` with ``vectors[:, i]`` paired to ``values[i]``,
    sorted by value then block.
    """
    pairs = []
    n_vertices = 3**m + 1
    for blk in dirichlet_blocks(m, boundary):
        mat = np.diag(blk.diag) + np.diag(blk.off, 1) + np.diag(blk.off, -1)
        w, q = np.linalg.eigh(mat)
        for lam, vec in zip(w, q.T):
            full = np.zeros(n_vertices)
            full[blk.positions] = vec
            pairs.append((float(lam), full))
    pairs.sort(key=lambda p: p[0])
    values = np.array([p[0] for p in pairs])
    vectors = np.column_stack([p[1] for p in pairs]) if pairs else np.zeros((n_vertices, 0))
    return values, vectors


def eigen_residual(u, lam: float, boundary: str = "V1") -> float:
    """max |-Delta_m u - lam u| over the free vertices."""
    u = np.asarray(u, dtype=float)
    m = round(math.log(u.shape[0] - 1, 3))
    free = np.ones(u.shape[0], dtype=bool)
    free[_boundary_positions(m, boundary)] = False
    res = -second_difference(u) - lam * u[1:-1]
    return float(np.max(np.abs(res[free[1:-1]]), initial=0.0))


# -- decimation maps ---------------------------------------------------------

def phi(x: float, branch: int | None = None) -> float:
    """Root in (0, 1) of r**2 - (x - 2) r + 1 = 0, for x > 4.

    ``branch`` is the sign epsilon in (x - 2 - eps*sqrt((x-2)**2 - 4)) / 2;
    by default the branch landing in (0, 1) is chosen.
    """
    if not x > 4:
        raise DomainError(f"phi is defined on ]4, inf[, got {x}")
    t = x - 2
    root = math.sqrt(t * t - 4)
    if branch is None or branch == 1:
        value = 2 / (t + root)  # = (t - root) / 2 without cancellation
    elif branch == -1:
        value = (t + root) / 2
    else:
        raise DomainError(f"branch must be +1 or -1, got {branch}")
    if not 0 < value < 1:
        raise DomainError(f"branch {branch} of phi({x}) = {value} is outside (0, 1)")
    return value


def phi_inverse(y: float) -> float:
    if not 0 < y <= 1:
        raise DomainError(f"phi inverse is defined on ]0, 1], got {y}")
    return (y + 1) ** 2 / y


def decimate_down(lam):
    """Level-(m-1) eigenvalue reached from a level-m eigenvalue (accepts arrays)."""
    t = 2 - np.asarray(lam, dtype=float)
    out = 2 + 3 * t - t**3
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DecimationBranches:
    parent: float
    children: tuple

    def residuals(self):
        return tuple(abs(decimate_down(c) - self.parent) for c in self.children)


def decimate_up(parent: float) -> DecimationBranches:
    """The three level-m eigenvalues 2 - 2 cos((theta' + 2 pi n) / 3), n = 0, 1, 2."""
    if not 0 <= parent <= 4:
        raise DomainError(f"decimate_up needs a parent in [0, 4], got {parent}")
    theta = math.acos(min(1.0, max(-1.0, (2 - parent) / 2)))
    children = tuple(2 - 2 * math.cos((theta + 2 * math.pi * n) / 3) for n in range(3))
    return DecimationBranches(float(parent), children)


def extend_eigenfunction(u, parent: float, child: float, tol: float = 1e-9) -> np.ndarray:
    """Extend a level-(m-1) eigenfunction to level m for eigenvalue ``child``.

    On each edge with end values (a, b) the new interior values are
    ((t a + b), (a + t b)) / (t**2 - 1) with t = 2 - child.
    """
    u = np.asarray(u, dtype=float)
    t = 2 - child
    denom = t * t - 1
    if abs(denom) <= tol:
        raise SingularExtensionError(f"extension is singular at eigenvalue {child} (1 and 3 are excluded)")
    if abs(decimate_down(child) - parent) > tol:
        raise ConsistencyError(f"{child} is not a decimation branch of {parent}")
    m_prev = round(math.log(u.shape[0] - 1, 3))
    check_depth(m_prev + 1)
    a, b = u[:-1], u[1:]
    out = np.empty(3 * (u.shape[0] - 1) + 1)
    out[::3] = u
    out[1::3] = (t * a + b) / denom
    out[2::3] = (a + t * b) / denom
    return out


@dataclass(frozen=True)
class ForbiddenReport:
    level: int
    ok: bool
    margin: float


def forbidden_check(m: int, value: float = 2.0, spectrum: Spectrum | None = None) -> ForbiddenReport:
    """Is ``value`` (default 2) absent from the Dirichlet spectrum at level m?"""
    spec = spectrum if spectrum is not None else dirichlet_spectrum_numeric(m)
    margin = float(np.min(np.abs(spec.eigenvalues - value)))
    return ForbiddenReport(m, margin > 1e-9, margin)


# -- counting function -------------------------------------------------------

SCALINGS = ("geometric", "arclength")


def renormalization(scaling: str, m: int, delta: float = DELTA) -> float:
    """(4**delta / 3)**m for ``geometric`` (= (5/3)**m), 9**m for ``arclength``."""
    if scaling == "geometric":
        return 4.0 ** (m * delta) / 3.0**m
    if scaling == "arclength":
        return 9.0**m
    raise ValidationError(f"scaling must be one of {SCALINGS}, got {scaling!r}")


@dataclass(frozen=True, eq=False)
class CountingSeries:
    scaling: str
    delta: float
    spectra: dict = field(repr=False)
    level_points: tuple = ()
    samples: tuple = ()

    @property
    def levels(self):
        return tuple(sorted(self.spectra))

    def count(self, x: float, m: int | None = None) -> int:
        """N(x) from the renormalized level-m spectrum (deepest level by default)."""
        vals = self.spectra[self.levels[-1] if m is None else m]
        return int(np.searchsorted(vals, x, side="right"))


def counting_function(
    m_max: int,
    scaling: str = "geometric",
    m_min: int = 2,
    spectra=None,
    grid_size: int = 200,
    delta: float = DELTA,
) -> CountingSeries:
    """Counting data for levels m_min .. m_max.

    ``level_points`` holds (m, x_m, N_m(x_m)) with x_m = 4 * scale**m and N_m
    counting the renormalized level-m spectrum; ``samples`` holds (x, N(x))
    for the deepest level on a log-spaced grid.
    """
    if m_min < 2 or m_max < m_min:
        raise DomainError(f"need 2 <= m_min <= m_max, got {m_min}, {m_max}")
    renorm = {}
    points = []
    for m in range(m_min, m_max + 1):
        spec = spectra[m] if spectra is not None else dirichlet_spectrum_numeric(m)
        scale = renormalization(scaling, m, delta)
        vals = np.sort(np.asarray(spec.eigenvalues) * scale)
        renorm[m] = vals
        x = 4 * scale
        points.append((m, x, int(np.searchsorted(vals, x, side="right"))))
    deepest = renorm[m_max]
    grid = np.geomspace(deepest[0] / 2, deepest[-1] * 1.01, grid_size)
    counts = np.searchsorted(deepest, grid, side="right")
    samples = tuple((float(x), int(n)) for x, n in zip(grid, counts))
    return CountingSeries(scaling, delta, renorm, tuple(points), samples)


def reference_exponents(delta: float = DELTA) -> dict:
    return {
        "identity_geometric": math.log(3) / math.log(4**delta / 3),
        "arclength": 0.5,
        "gasket": math.log(3) / math.log(5),
        "printed_formula": math.log(3) / (delta * math.log(4 / 3)),
    }


@dataclass(frozen=True)
class WeylFit:
    alpha: float
    intercept: float
    residual: float
    levels: tuple
    reference: dict


def weyl_fit(series: CountingSeries, levels=None) -> WeylFit:
    """Least-squares slope of log N(x_m) against log x_m."""
    pts = [p for p in series.level_points if levels is None or p[0] in levels]
    if len(pts) < 3:
        raise FitError(f"a Weyl fit needs at least 3 levels, got {len(pts)}")
    lx = np.log([p[1] for p in pts])
    ly = np.log([p[2] for p in pts])
    design = np.column_stack((lx, np.ones_like(lx)))
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = float(np.sqrt(np.mean((design @ coef - ly) ** 2)))
    return WeylFit(float(coef[0]), float(coef[1]), resid, tuple(p[0] for p in pts), reference_exponents(series.delta))


def ratio_periodicity_probe(series: CountingSeries, c_values=(1.0, 2.0, 3.0, 4.0), alpha: float | None = None):
    """Rows (c, m, x, N(x), N(x) / x**alpha) at x = c * scale**m.

    Observational only. ``alpha`` defaults to the series' Weyl fit.
    """
    if alpha is None:
        alpha = weyl_fit(series).alpha
    rows = []
    for c in c_values:
        for m in series.levels:
            x = c * renormalization(series.scaling, m, series.delta)
            n = series.count(x, m)
            rows.append((float(c), m, x, n, n / x**alpha))
    return rows
