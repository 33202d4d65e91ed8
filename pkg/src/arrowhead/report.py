"""Consolidated reproduction report.

Every entry is a small record ``{value, expected, tolerance, status}``
grouped by section. Random inputs come from fixed seeds, so two runs
produce byte-identical output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import curve, energy, laplacian, measure, spectral
from .errors import ArrowheadError

SQRT3 = math.sqrt(3.0)
V1_FIXTURE = np.array([[0, 0], [1 / 4, SQRT3 / 4], [3 / 4, SQRT3 / 4], [1, 0]])
V2_FIXTURE = np.array(
    [
        [0, 0], [1 / 4, 0], [3 / 8, SQRT3 / 8], [1 / 4, SQRT3 / 4], [3 / 8, 3 * SQRT3 / 8],
        [5 / 8, 3 * SQRT3 / 8], [3 / 4, SQRT3 / 4], [5 / 8, SQRT3 / 8], [3 / 4, 0], [1, 0],
    ]
)
WEYL_LEVELS = (4, 5, 6, 7)
WEYL_TOL = 0.02


def _py(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_py(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_py(v) for v in x]
    return x


def entry(value, ok=None, tolerance=None, expected=None) -> dict:
    status = "info" if ok is None else ("pass" if ok else "fail")
    return {"value": _py(value), "expected": _py(expected), "tolerance": tolerance, "status": status}


def close(value, expected, tol) -> dict:
    return entry(value, abs(value - expected) <= tol, tol, expected)


def bound(value, tol) -> dict:
    """``value`` is an error measure that must not exceed ``tol``."""
    return entry(value, value <= tol, tol, 0.0)


@dataclass
class Report:
    depth: int
    sections: dict = field(default_factory=dict)

    def add(self, section: str, key: str, record: dict) -> None:
        self.sections.setdefault(section, {})[key] = record

    def records(self):
        for section, items in self.sections.items():
            for key, rec in items.items():
                yield section, key, rec

    @property
    def ok(self) -> bool:
        return all(rec["status"] in ("pass", "info") for _, _, rec in self.records())

    def to_json(self) -> str:
        doc = {"depth": self.depth, "status": "pass" if self.ok else "fail", **self.sections}
        return json.dumps(doc, indent=1, sort_keys=True, allow_nan=True) + "\n"

    def to_text(self) -> str:
        out = [f"depth: {self.depth}", f"status: {'pass' if self.ok else 'fail'}"]
        for section, key, rec in sorted(self.records(), key=lambda r: (r[0], r[1])):
            val = rec["value"]
            val = "%.17g" % val if isinstance(val, float) else json.dumps(val)
            tol = rec["tolerance"]
            if isinstance(tol, list):
                tol = " (range " + ", ".join(f"{t:g}" for t in tol) + ")"
            else:
                tol = "" if tol is None else f" (tol {tol:g})"
            out.append(f"{section}.{key}: {val} {rec['status']}{tol}")
        return "\n".join(out) + "\n"


# -- sections ----------------------------------------------------------------

def _curve(rep: Report, depth: int) -> None:
    for m in range(1, depth + 1):
        lv = curve.build_level(m)
        rep.add("curve", f"vertex_count_level_{m}", entry(len(lv), len(lv) == 3**m + 1, 0, 3**m + 1))
        steps = np.hypot(*np.diff(lv.vertices, axis=0).T)
        rep.add("curve", f"edge_length_max_error_level_{m}", bound(float(np.max(np.abs(steps - 2.0**-m))), 1e-12))
    for m, fixture in ((1, V1_FIXTURE), (2, V2_FIXTURE)):
        err = float(np.max(np.abs(curve.build_level(m).vertices - fixture)))
        rep.add("curve", f"fixture_level_{m}_max_error", bound(err, 1e-12))
    for m in range(1, depth):
        sub = curve.subset_checks(m) if m <= 5 else None
        nested = sub.nested if sub else bool(
            np.max(np.abs(curve.build_level(m + 1).vertices[::3] - curve.build_level(m).vertices)) <= 1e-9
        )
        rep.add("curve", f"nested_level_{m}", entry(nested, nested, 1e-9, True))
        if sub:
            rep.add("curve", f"gasket_strict_subset_level_{m}",
                    entry([sub.n_curve, sub.n_gasket], sub.in_gasket and sub.strict, 1e-9))
    for m in range(1, min(depth, 6) + 1):
        cells = curve.trapeze_decomposition(m)
        rep.add("curve", f"trapeze_count_level_{m}", entry(len(cells), len(cells) == 3 ** (m - 1), 0, 3 ** (m - 1)))
        err = max(abs(curve.trapeze_area(t) - curve.expected_trapeze_area(m)) for t in cells)
        rep.add("curve", f"trapeze_area_max_error_level_{m}", bound(err, 1e-12))
    fine = min(depth, 7)
    gap = curve.max_gap(fine, fine - 2)
    rep.add("curve", f"density_gap_level_{fine}_to_{fine - 2}", entry(gap, gap <= 2 * 2.0 ** -(fine - 2), 2 * 2.0 ** -(fine - 2)))


def _measure(rep: Report, depth: int) -> None:
    model = measure.DEFAULT_MODEL
    rep.add("measure", "weights", entry(list(measure.measure_weights(model))))
    for m in range(1, depth + 1):
        total = math.fsum(measure.trapeze_measures(model, m))
        rep.add("measure", f"total_mass_level_{m}", close(total, 1.0, 1e-12))
        ones = measure.integrate(m, np.ones(3**m + 1), model)
        rep.add("measure", f"integral_of_one_level_{m}", close(ones, 1.0, 1e-12))
        si = measure.spline_integrals(m, model)
        err = float(np.max(np.abs(si - 3.0 ** (1 - m) / 4)))
        rep.add("measure", f"spline_integral_max_error_level_{m}", bound(err, 1e-12))


def _energy(rep: Report, depth: int) -> None:
    rng = np.random.default_rng(20240601)
    ratios = {s.kind: [] for s in energy.SCHEMES}
    rule_err = 0.0
    for _ in range(100):
        u = rng.uniform(-1, 1, 4)
        ext = energy.harmonic_extension_step(u)
        a, b = u[:-1], u[1:]
        rule_err = max(rule_err, float(np.max(np.abs(ext[1::3] - (2 * a + b) / 3))),
                       float(np.max(np.abs(ext[2::3] - (a + 2 * b) / 3))))
        for s in energy.SCHEMES:
            ratios[s.kind].append(energy.energy_ratio(u, s))
    rep.add("energy", "extension_rule_max_error", bound(rule_err, 0.0))
    for kind, target in (("raw", 1 / 3), ("geometric", 5 / 3), ("renormalized", 1.0)):
        worst = max(ratios[kind], key=lambda r: abs(r - target))
        rep.add("energy", f"energy_ratio_{kind}", close(worst, target, 1e-12))
    for name, boundary in (("ramp", [0, 1 / 3, 2 / 3, 1]), ("corner", [1, 0, 0, 0])):
        seq = energy.normalized_energy_sequence(boundary, max(depth, 6), energy.RENORMALIZED)
        spread = max(abs(e - seq.energies[0]) for e in seq.energies)
        rep.add("energy", f"renormalized_sequence_{name}", entry(seq.energies[0], spread <= 1e-10, 1e-10))
    violations = 0
    for _ in range(100):
        u = rng.uniform(-1, 2, 3**3 + 1)
        cut = energy.markov_cut(u)
        for s in energy.SCHEMES:
            violations += energy.energy(3, cut, scheme=s) > energy.energy(3, u, scheme=s)
    rep.add("energy", "markov_violations", entry(violations, violations == 0, 0, 0))


def _laplacian(rep: Report, depth: int) -> None:
    for m in range(2, min(depth, 6) + 1):
        f = laplacian.pointwise_laplacian(m, laplacian.sample(lambda s: s * (1 - s), m))
        err = float(np.max(np.abs(f.without_v1()[1] + 8 / 3)))
        rep.add("laplacian", f"quadratic_max_error_level_{m}", bound(err, 1e-9))
    m = min(depth, 5)
    u = laplacian.sample(lambda s: np.sin(np.pi * s), m)
    idx, vals = laplacian.pointwise_laplacian(m, u).without_v1()
    target = -(4 / 3) * np.pi**2 * u[idx - 1]
    rel = float(np.max(np.abs(vals - target) / np.abs(target)))
    rep.add("laplacian", f"sine_relative_error_level_{m}", bound(rel, 1e-3))
    for row in laplacian.convergence_probe(lambda s: np.sin(np.pi * s), range(2, max(depth, 5) + 1)):
        if row.ratio is not None and row.level >= 3:
            rep.add("laplacian", f"sine_decay_ratio_level_{row.level}",
                    entry(row.ratio, 1 / 11 <= row.ratio <= 1 / 7, [1 / 11, 1 / 7], 1 / 9))
    rng = np.random.default_rng(7)
    worst = 0.0
    for m in range(2, min(depth, 5) + 1):
        for _ in range(50):
            u = rng.uniform(-1, 1, 3**m + 1)
            v = rng.uniform(-1, 1, 3**m + 1)
            v[curve.v1_indices(m)] = 0.0
            for s in energy.SCHEMES:
                worst = max(worst, laplacian.summation_by_parts_check(m, u, v, s))
    rep.add("laplacian", "summation_by_parts_max_residual", bound(worst, 1e-10))


def _spectrum(rep: Report, depth: int) -> None:
    spectra = {m: spectral.dirichlet_spectrum_numeric(m) for m in range(2, max(depth, 7) + 1)}
    g = spectra[2].grouped()
    ok = [(round(v, 9), k) for v, k in g] == [(1.0, 3), (3.0, 3)]
    rep.add("spectrum", "delta2_spectrum", entry([[v, k] for v, k in g], ok, 1e-9, [[1.0, 3], [3.0, 3]]))
    for m in range(2, depth + 1):
        n = len(spectra[m])
        rep.add("spectrum", f"dirichlet_count_level_{m}", entry(n, n == 3**m - 3, 0, 3**m - 3))
        err = float(np.max(np.abs(spectra[m].eigenvalues - spectral.dirichlet_spectrum_exact(m).eigenvalues)))
        rep.add("spectrum", f"oracle_max_error_level_{m}", bound(err, 1e-9))
    for m in range(3, depth + 1):
        prev = np.concatenate((spectra[m - 1].eigenvalues, [0.0, 4.0]))
        down = spectral.decimate_down(spectra[m].eigenvalues)
        d_err = float(np.max(np.min(np.abs(down[:, None] - prev[None, :]), axis=1)))
        kids = np.array([spectral.decimate_up(p).children for p in spectra[m - 1].eigenvalues]).ravel()
        u_err = float(np.max(np.min(np.abs(kids[:, None] - spectra[m].eigenvalues[None, :]), axis=1)))
        rep.add("spectrum", f"down_closure_residual_level_{m}", bound(d_err, 1e-9))
        rep.add("spectrum", f"up_closure_residual_level_{m}", bound(u_err, 1e-9))
    rng = np.random.default_rng(11)
    theta = rng.uniform(0, np.pi, 1000)
    tri = float(np.max(np.abs(spectral.decimate_down(2 - 2 * np.cos(theta)) - (2 - 2 * np.cos(3 * theta)))))
    rep.add("spectrum", "triple_angle_max_error", bound(tri, 1e-12))
    xs = rng.uniform(4.01, 50, 100)
    rt = max(abs(spectral.phi_inverse(spectral.phi(x)) - x) for x in xs)
    rep.add("spectrum", "phi_round_trip_max_error", bound(rt, 1e-10))
    conj = max(abs(spectral.phi(spectral.decimate_down(x)) - spectral.phi(x) ** 3) for x in xs)
    rep.add("spectrum", "phi_conjugacy_max_error", bound(conj, 1e-10))
    vals, vecs = spectral.dirichlet_eigenpairs(2)
    worst = 0.0
    for lam, vec in zip(vals, vecs.T):
        for child in spectral.decimate_up(lam).children:
            ext = spectral.extend_eigenfunction(vec, lam, child)
            worst = max(worst, spectral.eigen_residual(ext, child))
    rep.add("spectrum", "eigen_extension_max_residual_2_to_3", bound(worst, 1e-10))
    for m in range(2, max(depth, 7) + 1):
        fc = spectral.forbidden_check(m, spectrum=spectra[m])
        rep.add("spectrum", f"forbidden_margin_level_{m}", entry(fc.margin, fc.ok and fc.margin > 1e-3, 1e-3))


def _counting(rep: Report, depth: int) -> None:
    lo, hi = min(WEYL_LEVELS), max(WEYL_LEVELS)
    geo = spectral.counting_function(hi, "geometric", m_min=2)
    for m, x, n in geo.level_points:
        rep.add("counting", f"identity_count_level_{m}", entry(n, n == 3**m - 3, 0, 3**m - 3))
    ref = spectral.reference_exponents()
    fit = spectral.weyl_fit(geo, levels=WEYL_LEVELS)
    rep.add("counting", "alpha_geometric_fit",
            entry(fit.alpha, abs(fit.alpha / ref["identity_geometric"] - 1) <= WEYL_TOL, WEYL_TOL, ref["identity_geometric"]))
    arc = spectral.counting_function(hi, "arclength", m_min=lo)
    fit_arc = spectral.weyl_fit(arc)
    rep.add("counting", "alpha_arclength_fit",
            entry(fit_arc.alpha, abs(fit_arc.alpha / 0.5 - 1) <= WEYL_TOL, WEYL_TOL, 0.5))
    rep.add("counting", "alpha_geometric_fit_levels_3_to_7",
            entry(spectral.weyl_fit(geo, levels=range(3, 8)).alpha))
    rep.add("counting", "alpha_printed_formula", entry(ref["printed_formula"]))
    rep.add("counting", "alpha_gasket", entry(ref["gasket"]))
    probe = spectral.ratio_periodicity_probe(spectral.counting_function(hi, "geometric", m_min=3), (1.0, 2.0, 3.0, 4.0), fit.alpha)
    for c in (1.0, 2.0, 3.0, 4.0):
        r = [row[4] for row in probe if row[0] == c]
        rep.add("counting", f"ratio_band_c{int(c)}", entry(max(r) / min(r) - 1))


def _constants(rep: Report) -> None:
    d = energy.DELTA
    rep.add("constants", "delta", entry(d))
    rep.add("constants", "box_dimension", entry(math.log(3) / math.log(2)))
    rep.add("constants", "energy_scaling_rho", entry(4**d / 3))
    rep.add("constants", "ramification_ratio", entry(1 / 3))
    ref = spectral.reference_exponents(d)
    rep.add("constants", "alpha_identity", entry(ref["identity_geometric"]))
    rep.add("constants", "alpha_gasket", entry(ref["gasket"]))
    rep.add("constants", "alpha_printed_formula", entry(ref["printed_formula"]))


SECTIONS = (("curve", _curve), ("measure", _measure), ("energy", _energy),
            ("laplacian", _laplacian), ("spectrum", _spectrum), ("counting", _counting))


def export_report(depth: int = 5) -> Report:
    """Run the sweep up to ``depth`` (>= 4). Section failures are recorded, not raised."""
    if depth < 4:
        raise ValueError("report depth must be at least 4")
    curve.check_depth(depth)
    rep = Report(depth)
    _constants(rep)
    for name, run in SECTIONS:
        try:
            run(rep, depth)
        except ArrowheadError as exc:
            rep.add(name, "error", {"value": f"{type(exc).__name__}: {exc}", "expected": None,
                                    "tolerance": None, "status": "error"})
    return rep
