"""Self-similar measure on the trapezoidal domain and vertex quadrature.

Trapeze ``j`` at level ``m`` has ternary address ``j - 1`` written with
``m - 1`` digits, most significant first; its mass is the product of the
branch weights along that address. Total mass is normalized to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import as_level
from .errors import DomainError, ValidationError

SHARED_RULES = ("halved", "additive")


@dataclass(frozen=True)
class MeasureModel:
    """Branch weights of the self-similar measure.

    ``shared_rule`` selects the spline integral at a vertex common to two
    trapezes: ``"halved"`` uses (mu + mu') / 8, ``"additive"`` uses
    (mu + mu') / 4.
    """

    weights: tuple = (1 / 3, 1 / 3, 1 / 3)
    shared_rule: str = "halved"

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != 3:
            raise ValidationError(f"expected three weights, got {len(w)}")
        if not all(0.0 < x < 1.0 for x in w):
            raise ValidationError(f"weights must lie in (0, 1): {w}")
        if not math.isclose(math.fsum(w), 1.0, rel_tol=0.0, abs_tol=1e-12):
            raise ValidationError(f"weights must sum to 1, got {math.fsum(w)!r}")
        if self.shared_rule not in SHARED_RULES:
            raise ValidationError(f"shared_rule must be one of {SHARED_RULES}")
        object.__setattr__(self, "weights", w)

    @property
    def total_mass(self) -> float:
        return 1.0

    @property
    def is_uniform(self) -> bool:
        return all(w == self.weights[0] for w in self.weights)


DEFAULT_MODEL = MeasureModel()


def measure_weights(model: MeasureModel = DEFAULT_MODEL) -> tuple:
    return model.weights


def trapeze_measures(model: MeasureModel, m: int) -> np.ndarray:
    """Masses of all 3**(m-1) trapezes at level m, in index order."""
    if m < 1:
        raise DomainError(f"level must be >= 1, got {m}")
    w = np.asarray(model.weights)
    mu = np.ones(1)
    for _ in range(m - 1):
        mu = np.kron(mu, w)
    return mu


def trapeze_measure(model: MeasureModel, m: int, j: int) -> float:
    n = 3 ** (m - 1)
    if not 1 <= j <= n:
        raise DomainError(f"trapeze index {j} out of range 1..{n}")
    mass = 1.0
    address = j - 1
    for k in range(m - 2, -1, -1):
        digit, address = divmod(address, 3**k)
        mass *= model.weights[digit]
    return mass


def _values(level, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (level.n_vertices,):
        raise ValidationError(
            f"vertex function has shape {u.shape}, level {level.level} needs ({level.n_vertices},)"
        )
    return u


def integrate(level, u, model: MeasureModel = DEFAULT_MODEL) -> float:
    """Sum over trapezes of mu(T) times the average of u over T's four vertices."""
    level = as_level(level)
    u = _values(level, u)
    mu = trapeze_measures(model, level.level)
    n = mu.shape[0]
    corners = u[:-1].reshape(n, 3).sum(axis=1) + u[3::3]
    return math.fsum(mu * corners / 4)


def spline_integrals(level, model: MeasureModel = DEFAULT_MODEL) -> np.ndarray:
    """Integral of every interior spline function, chain indices 2 .. 3**m."""
    level = as_level(level)
    mu = trapeze_measures(model, level.level)
    out = np.repeat(mu / 4, 3)[1:]
    shared = mu[:-1] + mu[1:]
    out[2::3] = shared / 8 if model.shared_rule == "halved" else shared / 4
    return out


def spline_integral(level, chain_index: int, model: MeasureModel = DEFAULT_MODEL) -> float:
    level = as_level(level)
    last = level.n_vertices
    if chain_index in (1, last):
        raise DomainError("spline integral is undefined at the chain endpoints")
    if not 1 < chain_index < last:
        raise DomainError(f"chain index {chain_index} out of range 1..{last}")
    m = level.level
    j, r = divmod(chain_index - 1, 3)
    if r:
        return trapeze_measure(model, m, j + 1) / 4
    shared = trapeze_measure(model, m, j) + trapeze_measure(model, m, j + 1)
    return shared / 8 if model.shared_rule == "halved" else shared / 4
