"""Discrete Laplacians of order m and the renormalized pointwise estimator.

The order-m Laplacian at an interior chain vertex is the second
difference ``u[i-1] + u[i+1] - 2 u[i]``. The pointwise estimator

    f_m(X) = c_m / (integral of the spline at X) * Delta_m u(X)

tends to the Laplacian of the limit function; under the renormalized
scheme and the uniform measure the prefactor is ``(4/3) * 9**m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import as_level, check_depth, v1_indices
from .energy import RENORMALIZED, as_scheme, conductance, energy, vertex_values
from .errors import ConsistencyError, DomainError, PreconditionError
from .measure import DEFAULT_MODEL, MeasureModel, spline_integral, spline_integrals


@dataclass(frozen=True, eq=False)
class LaplacianField:
    """Values on the interior chain vertices 2 .. 3**m (1-based)."""

    level: int
    values: np.ndarray
    scheme: str | None = None

    @property
    def chain_indices(self) -> np.ndarray:
        return np.arange(2, self.values.shape[0] + 2)

    def at(self, chain_index: int) -> float:
        if not 2 <= chain_index <= self.values.shape[0] + 1:
            raise DomainError(f"chain index {chain_index} is not an interior vertex")
        return float(self.values[chain_index - 2])

    def without_v1(self):
        """(chain_indices, values) with the V_1 vertices B and C removed."""
        keep = np.ones(self.values.shape[0], dtype=bool)
        keep[v1_indices(self.level)[1:3] - 1] = False
        return self.chain_indices[keep], self.values[keep]


def second_difference(u: np.ndarray) -> np.ndarray:
    return u[:-2] + u[2:] - 2 * u[1:-1]


def graph_laplacian_apply(level, u) -> LaplacianField:
    m = getattr(level, "level", level)
    u, m = vertex_values(u, m)
    return LaplacianField(m, second_difference(u))


def is_harmonic(level, u, tol: float = 1e-12, exclude_v1: bool = False) -> bool:
    field_ = graph_laplacian_apply(level, u)
    values = field_.without_v1()[1] if exclude_v1 else field_.values
    return bool(np.max(np.abs(values), initial=0.0) <= tol)


@dataclass(frozen=True, eq=False)
class SplineFunction:
    level: int
    center: int
    values: np.ndarray
    integral: float


def spline_function(level, center: int, model: MeasureModel = DEFAULT_MODEL) -> SplineFunction:
    level = as_level(level)
    integral = spline_integral(level, center, model)
    values = np.zeros(level.n_vertices)
    values[center - 1] = 1.0
    return SplineFunction(level.level, center, values, integral)


def pointwise_laplacian(level, u, scheme=RENORMALIZED, model: MeasureModel = DEFAULT_MODEL) -> LaplacianField:
    scheme = as_scheme(scheme)
    lap = graph_laplacian_apply(level, u)
    weights = spline_integrals(lap.level, model)
    if np.any(weights <= 0):
        raise ConsistencyError("non-positive spline integral")
    values = conductance(scheme, lap.level) / weights * lap.values
    return LaplacianField(lap.level, values, scheme.kind)


def sample(func, m: int) -> np.ndarray:
    """Values of ``func`` (a function of arc coordinate) on V_m."""
    check_depth(m)
    s = np.arange(3**m + 1) / 3**m
    return np.asarray(func(s), dtype=float)


@dataclass(frozen=True)
class ProbeRow:
    level: int
    sup_deviation: float | None
    ratio: float | None


def convergence_probe(func, m_range, scheme=RENORMALIZED, model: MeasureModel = DEFAULT_MODEL):
    """Sup-distance between f_m and f_(m+1) on the vertices of V_m outside V_1.

    Row ``m`` compares levels m and m + 1 (the last level has no row);
    ``ratio`` is the deviation divided by the previous row's deviation.
    """
    levels = list(m_range)
    fields = {m: pointwise_laplacian(m, sample(func, m), scheme, model) for m in levels}
    rows, prev = [], None
    for m, nxt in zip(levels[:-1], levels[1:]):
        if nxt != m + 1:
            raise DomainError("convergence probe needs consecutive levels")
        idx, vals = fields[m].without_v1()
        # V_m sits at every third position of V_(m+1)
        fine = fields[nxt].values[3 * (idx - 1) - 1]
        dev = float(np.max(np.abs(fine - vals), initial=0.0))
        ratio = dev / prev if prev else None
        rows.append(ProbeRow(m, dev, ratio))
        prev = dev
    return rows


def summation_by_parts_check(level, u, v, scheme=RENORMALIZED, tol: float = 0.0) -> float:
    """Residual |E_m(u, v) + c_m sum_(X in V_m minus V_1) v(X) Delta_m u(X)|.

    ``v`` must vanish on V_1 (absolute tolerance ``tol``).
    """
    m = getattr(level, "level", level)
    u, m = vertex_values(u, m)
    v, _ = vertex_values(v, m)
    if np.max(np.abs(v[v1_indices(m)])) > tol:
        raise PreconditionError("v must vanish on V_1")
    lap = second_difference(u)
    c = conductance(scheme, m)
    # B and C carry v = 0, so summing over all interior vertices is the same set
    rhs = c * math.fsum(v[1:-1] * lap)
    return abs(energy(m, u, v, scheme) + rhs)
