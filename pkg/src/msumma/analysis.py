"""Gevrey-order estimation, Borel-plane singularities, direction verdicts.

Everything here is numerical evidence, not proof: the estimators report
windows and standard errors, the singularity detector reports confidence
radii, and "inconclusive" is a first-class verdict whenever the numerics
do not support a definite claim.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characteristic import newton_polygon_roots, summability_levels
from .errors import SemanticError
from .moments import MomentFunction
from .operators import borel
from .pade import diagonal_pade, ratio_radius, stable_poles
from .series import RamifiedSeries

ANGULAR_TOL = math.radians(2.0)
SCHEMA_ID = "summability_report.v1"


# ---------------------------------------------------------------------------
# Gevrey order

@dataclass(frozen=True)
class GevreyEstimate:
    order_hat: float
    stderr: float
    window: tuple
    method: str


def _log_window(a: RamifiedSeries, window):
    logs = a.log10_abs() / math.log10(math.e)  # natural logs
    j0, j1 = (2, a.trunc) if window is None else window
    j0 = max(j0, 2)
    idx = np.array([j for j in range(j0, j1 + 1) if math.isfinite(logs[j])])
    if len(idx) == 0:
        raise SemanticError("all coefficients vanish in the requested window")
    if len(idx) < 8:
        raise SemanticError(
            f"need at least 8 nonzero coefficients in the window, got {len(idx)}")
    return idx, logs[idx], (j0, j1)


def estimate_gevrey(a: RamifiedSeries, window=None) -> GevreyEstimate:
    """Gevrey order sigma of |c_j| ~ C^j Gamma(1 + sigma j).

    Regression of log|c_j| on (j log j, j, log j, 1) gives the estimate;
    the ratio method sigma_j = (L_{j+1}-L_j)/log j, extrapolated linearly
    in 1/log j, is the consistency check folded into the stderr.  Zero
    coefficients are thinned out of the window automatically.
    """
    idx, L, win = _log_window(a, window)
    jj = idx.astype(float)
    X = np.stack([jj * np.log(jj), jj, np.log(jj), np.ones_like(jj)], axis=1)
    coef, res, _, _ = np.linalg.lstsq(X, L, rcond=None)
    sigma_reg = float(coef[0])
    dof = max(1, len(idx) - 4)
    resid = L - X @ coef
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    stderr_reg = math.sqrt(max(cov[0, 0], 0.0))

    # ratio method on consecutive indices present in the window
    pairs = [(j, k) for j, k in zip(idx, idx[1:]) if k == j + 1]
    sigma_ratio = sigma_reg
    if len(pairs) >= 4:
        js = np.array([j for j, _ in pairs], dtype=float)
        Ld = np.array([L[np.searchsorted(idx, k)] - L[np.searchsorted(idx, j)]
                       for j, k in pairs])
        sj = Ld / np.log(js)
        A = np.stack([np.ones_like(js), 1.0 / np.log(js)], axis=1)
        c2, _, _, _ = np.linalg.lstsq(A, sj, rcond=None)
        sigma_ratio = float(c2[0])
    stderr = max(stderr_reg, abs(sigma_ratio - sigma_reg) / 2.0)
    return GevreyEstimate(order_hat=sigma_reg, stderr=stderr, window=win,
                          method="regression")


# ---------------------------------------------------------------------------
# Borel-plane singularities

@dataclass(frozen=True)
class SingularPoint:
    location: complex
    radius: float


@dataclass(frozen=True)
class SingularitySet:
    points: tuple
    method: str
    trunc: int
    inconclusive: bool = False
    note: str = ""
    ratio_modulus: float = math.inf

    def nearest_modulus(self) -> float:
        if self.points:
            return abs(self.points[0].location)
        return math.inf


def borel_singularities(a: RamifiedSeries, method: str = "pade_poles"
                        ) -> SingularitySet:
    """Singularities of the analytic continuation of a finite-radius series.

    Diagonal Pade pole clusters stable across three consecutive orders are
    reported; the ratio-test radius corroborates.  With no stable pole the
    result is flagged inconclusive unless the coefficients decay (entire-
    type growth), which is a no-singularity finding.
    """
    if method not in ("pade_poles", "ratio_test"):
        raise ValueError(f"unknown method {method!r}")
    rr = ratio_radius(a)
    if method == "ratio_test":
        if math.isfinite(rr):
            pts = (SingularPoint(location=complex(rr), radius=0.5 * rr),)
            return SingularitySet(pts, method, a.trunc, ratio_modulus=rr,
                                  note="modulus only; phase unknown")
        return SingularitySet((), method, a.trunc, inconclusive=True,
                              ratio_modulus=rr, note="no finite ratio limit")
    try:
        entire = estimate_gevrey(a).order_hat < -0.25
    except SemanticError:
        entire = False
    if entire or not math.isfinite(rr):
        return SingularitySet((), method, a.trunc, inconclusive=False,
                              ratio_modulus=rr,
                              note="coefficients decay; entire-type growth, "
                                   "no singularity detected")
    try:
        clusters = stable_poles(a)
    except (ValueError, np.linalg.LinAlgError):
        clusters = []
    if clusters:
        pts = tuple(SingularPoint(location=c, radius=r) for c, r in clusters)
        return SingularitySet(pts, method, a.trunc, ratio_modulus=rr)
    return SingularitySet((), method, a.trunc, inconclusive=True,
                          ratio_modulus=rr,
                          note="finite ratio radius but no stable Pade pole")


# ---------------------------------------------------------------------------
# Directions and verdicts

def _mod_2pi(d: float) -> float:
    out = math.fmod(d, 2.0 * math.pi)
    if out < 0:
        out += 2.0 * math.pi
    return out


def singular_directions_for_root(points, q: Fraction, lam: complex,
                                 kappa: int) -> list[float]:
    """Directions d = q(arg xi + 2 pi k) - arg lam hit by singularities xi.

    k runs over 0..q*kappa-1 branch rotations; results reduced mod 2 pi
    and deduplicated.
    """
    qf = float(q)
    n_branches = max(1, int(math.ceil(qf * kappa)))
    out = []
    for pt in points:
        base = math.atan2(pt.location.imag, pt.location.real)
        for k in range(n_branches):
            d = _mod_2pi(qf * (base + 2.0 * math.pi * k) - np.angle(lam))
            if all(abs(d - o) > 1e-9 and abs(abs(d - o) - 2 * math.pi) > 1e-9
                   for o in out):
                out.append(d)
    return sorted(out)


def fitted_growth_order(a: RamifiedSeries, expected_rho: float) -> float:
    """Exponential-growth order of the continuation of a finite-radius series.

    The level-1/rho Borel transform of a radius-R series has entire order
    rho; measuring that order through the Gevrey estimator (order -1/rho)
    at the expected level returns the achieved rho.
    """
    w = borel(MomentFunction.gamma(Fraction(1) / Fraction(expected_rho)), a)
    est = estimate_gevrey(w)
    if est.order_hat >= -1e-3:
        return math.inf
    return -1.0 / est.order_hat


def ray_growth_fit(a: RamifiedSeries, direction: float, rho: float,
                   singular_set: SingularitySet, samples: int = 24):
    """Fit log|V(x e^{i d})| ~ log A + B x^rho along a pole-free ray.

    V is the Pade representative; x runs to 3x the nearest-singularity
    modulus (extrapolated past the proven disc, and said so).
    """
    m = len(a) // 2
    rep = diagonal_pade(a, m)
    r0 = singular_set.nearest_modulus()
    if not math.isfinite(r0):
        r0 = 1.0
    xs = np.linspace(0.05 * r0, 3.0 * r0, samples)
    pts = xs * np.exp(1j * direction)
    vals = np.abs(rep(pts))
    good = vals > 0
    if good.sum() < 4:
        return math.nan, math.nan
    y = np.log(vals[good])
    X = np.stack([np.ones(good.sum()), xs[good] ** rho], axis=1)
    c, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    return float(math.exp(c[0])), float(c[1])


@dataclass(frozen=True)
class DirectionVerdict:
    direction: float
    verdict: str  # summable | singular | inconclusive
    witness: complex | None = None
    evidence: dict = field(default_factory=dict)


def _angular_gap(d1: float, d2: float) -> float:
    g = abs(_mod_2pi(d1) - _mod_2pi(d2))
    return min(g, 2.0 * math.pi - g)


def direction_verdict(d: float, sing_dirs, cone_radii, growth_order: float,
                      qK: float, singular_set: SingularitySet
                      ) -> DirectionVerdict:
    for sd, (witness, cone) in zip(sing_dirs, cone_radii):
        gap = _angular_gap(d, sd)
        if gap <= ANGULAR_TOL:
            return DirectionVerdict(d, "singular", witness,
                                    {"singular_direction": sd,
                                     "angular_gap": gap})
        if gap <= ANGULAR_TOL + cone:
            return DirectionVerdict(d, "inconclusive", witness,
                                    {"singular_direction": sd,
                                     "angular_gap": gap,
                                     "confidence_cone": cone})
    if singular_set.inconclusive:
        return DirectionVerdict(d, "inconclusive", None,
                                {"note": singular_set.note})
    ev = {"growth_order": growth_order, "expected_qK": qK}
    if math.isfinite(growth_order) and growth_order > qK * 1.25:
        return DirectionVerdict(d, "inconclusive", None,
                                {**ev, "note": "growth order exceeds budget"})
    return DirectionVerdict(d, "summable", None, ev)


def multidirection_admissible(levels, directions):
    """|d_j - d_{j-1}| <= pi (1/K_j - 1/K_{j-1}) / 2 for K descending."""
    flags = []
    for (q1, K1), (q2, K2), d1, d2 in zip(levels, levels[1:], directions,
                                          directions[1:]):
        bound = math.pi * (1.0 / float(K2) - 1.0 / float(K1)) / 2.0
        flags.append(_angular_gap(d1, d2) <= bound + 1e-12)
    return flags


@dataclass(frozen=True)
class SummabilityReport:
    levels: tuple          # ((q, K) Fractions, K descending)
    singular_directions: tuple  # per level: sorted direction angles
    verdicts: tuple        # DirectionVerdict per (level, queried direction)
    multidirection: dict | None
    tolerances: dict
    singularities: tuple   # per level SingularitySet

    def to_dict(self) -> dict:
        def cx(z):
            return None if z is None else [z.real, z.imag]

        return {
            "schema": SCHEMA_ID,
            "levels": [[str(q), str(K)] for q, K in self.levels],
            "singular_directions": [list(ds) for ds in self.singular_directions],
            "verdicts": [
                [{"direction": v.direction, "verdict": v.verdict,
                  "witness": cx(v.witness),
                  "evidence": _jsonable(v.evidence)} for v in per_level]
                for per_level in self.verdicts],
            "multidirection": _jsonable(self.multidirection),
            "tolerances": _jsonable(self.tolerances),
            "singularities": [
                {"method": s.method, "trunc": s.trunc,
                 "inconclusive": s.inconclusive, "note": s.note,
                 "ratio_modulus": _jsonable(s.ratio_modulus),
                 "points": [{"location": cx(p.location), "radius": p.radius}
                            for p in s.points]}
                for s in self.singularities],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["level_q", "level_K", "direction", "verdict", "witness"])
        for (q, K), per_level in zip(self.levels, self.verdicts):
            for v in per_level:
                wit = "" if v.witness is None else repr(v.witness)
                w.writerow([str(q), str(K), f"{v.direction:.12g}",
                            v.verdict, wit])
        return buf.getvalue()

    def overall(self) -> str:
        vs = [v.verdict for per in self.verdicts for v in per]
        if "singular" in vs:
            return "singular"
        if vs and all(v == "summable" for v in vs):
            return "summable"
        return "inconclusive"


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
    return x


def summability_verdict(source, directions, levels=None) -> SummabilityReport:
    """Direction verdicts for a PdeProblem or a bare formal t-series.

    For a PdeProblem the levels come from the Newton polygon and the
    obstruction geometry maps data singularities through each root branch;
    a bare RamifiedSeries is analyzed through its own level-K Borel
    transform (levels then required).
    """
    from .solver import PdeProblem

    directions = [float(d) for d in directions]
    if isinstance(source, PdeProblem):
        return _verdict_problem(source, directions)
    if levels is None:
        raise SemanticError("explicit levels are required for a bare series")
    return _verdict_series(source, directions, levels)


def _verdict_series(a: RamifiedSeries, directions, levels) -> SummabilityReport:
    levels = tuple((Fraction(q), Fraction(K)) for q, K in levels)
    all_dirs, all_verdicts, sets = [], [], []
    for q, K in levels:
        bor = borel(MomentFunction.gamma(1 / K), a)
        sing = borel_singularities(bor)
        dirs = singular_directions_for_root(sing.points, Fraction(1), 1.0,
                                            a.kappa)
        cones = [(p.location, p.radius / max(abs(p.location), 1e-300))
                 for p in sing.points for _ in (0,)]
        qK = float(q * K)
        growth = (fitted_growth_order(bor, qK)
                  if sing.points or not sing.inconclusive else math.inf)
        per = [direction_verdict(d, dirs, cones, growth, qK, sing)
               for d in directions]
        all_dirs.append(tuple(dirs))
        all_verdicts.append(tuple(per))
        sets.append(sing)
    return _assemble(levels, all_dirs, all_verdicts, sets, directions)


def _verdict_problem(prob, directions) -> SummabilityReport:
    roots = newton_polygon_roots(prob.P)
    s1, s2 = prob.m1.order(), prob.m2.order()
    levels = tuple(summability_levels(roots, s1, s2, prob.gevrey_s))
    s = Fraction(prob.gevrey_s)
    bs = MomentFunction.gamma(s) if s != 0 else None
    data_borel = []
    for phi in prob.data:
        if np.all(phi.mant == 0):
            continue
        data_borel.append(borel(bs, phi) if bs is not None else phi)
    all_dirs, all_verdicts, sets = [], [], []
    for q, K in levels:
        level_roots = [r for r in roots if r.q == q]
        dirs, cones = [], []
        level_set = None
        growth = math.inf
        for phi_b in data_borel:
            sing = borel_singularities(phi_b)
            if level_set is None or (level_set.inconclusive
                                     and not sing.inconclusive):
                level_set = sing
            for r in level_roots:
                ds = singular_directions_for_root(sing.points, q, r.leading,
                                                 prob.kappa)
                for d in ds:
                    if all(_angular_gap(d, o) > 1e-9 for o in dirs):
                        dirs.append(d)
                cones.extend(
                    (p.location, p.radius / max(abs(p.location), 1e-300))
                    for p in sing.points for _ in range(len(ds) or 1))
            qK = float(q * K)
            try:
                g = fitted_growth_order(phi_b, qK)
            except SemanticError:
                # series too short for a growth fit; leave the budget check
                # to the singularity evidence alone
                g = math.inf
            growth = min(growth, g) if math.isfinite(g) else growth
        if level_set is None:
            level_set = SingularitySet((), "pade_poles", 0, inconclusive=True,
                                       note="no nonzero data rows")
        dirs = sorted(dirs)
        cone_pairs = list(zip([p.location for p in level_set.points]
                              * max(1, len(dirs)),
                              [p.radius / max(abs(p.location), 1e-300)
                               for p in level_set.points]
                              * max(1, len(dirs))))
        # align witness cones with directions; conservative: widest cone
        wide = max((c for _, c in cone_pairs), default=0.0)
        witness = level_set.points[0].location if level_set.points else None
        cones = [(witness, wide) for _ in dirs]
        per = [direction_verdict(d, dirs, cones, growth, float(q * K),
                                 level_set) for d in directions]
        all_dirs.append(tuple(dirs))
        all_verdicts.append(tuple(per))
        sets.append(level_set)
    return _assemble(levels, all_dirs, all_verdicts, sets, directions)


def _assemble(levels, all_dirs, all_verdicts, sets, directions
              ) -> SummabilityReport:
    multi = None
    if len(levels) >= 2 and len(directions) == len(levels):
        flags = multidirection_admissible(levels, directions)
        bounds = [math.pi * (1.0 / float(K2) - 1.0 / float(K1)) / 2.0
                  for (_, K1), (_, K2) in zip(levels, levels[1:])]
        multi = {"directions": directions, "admissible": flags,
                 "bounds": bounds}
    return SummabilityReport(
        levels=tuple(levels),
        singular_directions=tuple(all_dirs),
        verdicts=tuple(all_verdicts),
        multidirection=multi,
        tolerances={"angular_tol_rad": ANGULAR_TOL,
                    "pade_stability": 1e-2},
        singularities=tuple(sets))
