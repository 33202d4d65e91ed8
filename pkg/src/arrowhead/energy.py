"""Graph energy forms on the arrowhead chains and harmonic extension.

Vertex functions are 1-D arrays of length ``3**m + 1`` indexed by chain
position. Edges are consecutive chain vertices, so the level-m energy is

    E_m(u, v) = c_m * sum_i (u[i] - u[i+1]) * (v[i] - v[i+1])

with the conductance ``c_m`` fixed by a :class:`ConductanceScheme`:

========== ============== ===============================================
kind       c_m            ratio E_(m+1)(ext u) / E_m(u)
========== ============== ===============================================
raw        1              1/3 (the ramification constant)
geometric  4**(m*delta)   4**delta / 3 (= 5/3 for delta = ln 5 / ln 4)
renormal.  3**m           1
========== ============== ===============================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import check_depth, level_from_size
from .errors import DomainError, ValidationError

DELTA = math.log(5) / math.log(4)
KINDS = ("raw", "geometric", "renormalized")


@dataclass(frozen=True)
class ConductanceScheme:
    kind: str = "renormalized"
    delta: float = DELTA

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown conductance scheme {self.kind!r}; choose from {KINDS}")
        if not self.delta > 0:
            raise ValidationError("delta must be positive")

    def __str__(self):
        return self.kind


RAW = ConductanceScheme("raw")
GEOMETRIC = ConductanceScheme("geometric")
RENORMALIZED = ConductanceScheme("renormalized")
SCHEMES = (RAW, GEOMETRIC, RENORMALIZED)


def as_scheme(scheme) -> ConductanceScheme:
    if isinstance(scheme, ConductanceScheme):
        return scheme
    return ConductanceScheme(str(scheme))


def conductance(scheme, m: int) -> float:
    scheme = as_scheme(scheme)
    if m < 1:
        raise DomainError(f"level must be >= 1, got {m}")
    if scheme.kind == "raw":
        return 1.0
    if scheme.kind == "geometric":
        return 4.0 ** (m * scheme.delta)
    return float(3**m)


def scale_factor(scheme) -> float:
    """Per-level factor rho with E_(m+1)(harmonic ext. of u) = rho * E_m(u)."""
    return conductance(scheme, 2) / conductance(scheme, 1) / 3


def vertex_values(u, level: int | None = None) -> tuple[np.ndarray, int]:
    """Validate ``u`` as a vertex function; return it as floats with its level."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1:
        raise ValidationError(f"vertex function must be 1-D, got shape {u.shape}")
    try:
        m = level_from_size(u.shape[0])
    except DomainError:
        raise ValidationError(f"{u.shape[0]} values do not fit any level (need 3**m + 1)") from None
    if m < 1:
        raise ValidationError("vertex functions live on levels m >= 1")
    if level is not None and m != level:
        raise ValidationError(f"vertex function has level {m}, expected level {level}")
    return u, m


def _level_number(level) -> int | None:
    if level is None:
        return None
    return getattr(level, "level", level)


def energy(level, u, v=None, scheme=RAW) -> float:
    """Bilinear energy E_m(u, v); ``v`` defaults to ``u``."""
    u, m = vertex_values(u, _level_number(level))
    v = u if v is None else vertex_values(v, m)[0]
    return conductance(scheme, m) * math.fsum(np.diff(u) * np.diff(v))


def harmonic_extension_step(u) -> np.ndarray:
    """Energy-minimizing extension to the next level.

    Each edge (a, b) gets the interior values (2a + b)/3 and (a + 2b)/3.
    The minimizer does not depend on the scheme since the conductance is
    uniform within a level.
    """
    u, m = vertex_values(u)
    check_depth(m + 1)
    a, b = u[:-1], u[1:]
    out = np.empty(3 * (u.shape[0] - 1) + 1)
    out[::3] = u
    out[1::3] = (2 * a + b) / 3
    out[2::3] = (a + 2 * b) / 3
    return out


def harmonic_extension(u, target: int) -> np.ndarray:
    u, m = vertex_values(u)
    if target < m:
        raise DomainError(f"cannot extend level {m} data down to level {target}")
    check_depth(max(target, 1))
    for _ in range(target - m):
        u = harmonic_extension_step(u)
    return u


def energy_ratio(u, scheme=RAW) -> float:
    u, m = vertex_values(u)
    base = energy(m, u, scheme=scheme)
    if base == 0.0:
        raise DomainError("energy ratio is undefined for a constant function")
    return energy(m + 1, harmonic_extension_step(u), scheme=scheme) / base


@dataclass(frozen=True)
class EnergySequenceReport:
    scheme: ConductanceScheme
    levels: tuple
    energies: tuple
    ratios: tuple = field(default=())

    def rows(self):
        """``(level, scheme, energy, ratio)`` tuples; the first ratio is None."""
        ratios = (None,) + tuple(self.ratios)
        return [(m, self.scheme.kind, e, r) for m, e, r in zip(self.levels, self.energies, ratios)]


def normalized_energy_sequence(boundary, m_max: int, scheme=RENORMALIZED) -> EnergySequenceReport:
    """Energies of the successive harmonic extensions of V_1 data up to m_max."""
    scheme = as_scheme(scheme)
    u, m0 = vertex_values(boundary, 1)
    check_depth(m_max)
    levels, energies = [], []
    for m in range(m0, m_max + 1):
        levels.append(m)
        energies.append(energy(m, u, scheme=scheme))
        if m < m_max:
            u = harmonic_extension_step(u)
    ratios = tuple(
        (b / a if a != 0 else math.nan) for a, b in zip(energies[:-1], energies[1:])
    )
    return EnergySequenceReport(scheme, tuple(levels), tuple(energies), ratios)


def markov_cut(u) -> np.ndarray:
    """Unit contraction u -> min(max(u, 0), 1)."""
    return np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
