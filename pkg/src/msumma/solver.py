"""Formal-solution solvers for P(d_{m1,t}, d_{m2,z}) u = 0.

Two independent solvers are provided on purpose:

* solve_constant_leading: the exact shift recurrence in doubly
  moment-normalized coordinates; works for any P whose leading lambda
  coefficient P_0 is a nonzero constant.
* decompose + solve_simple: factorization into simple first-order-in-
  lambda pieces (d_{m1,t} - lam zeta^q)^beta, each solved in closed form;
  works when the Newton-polygon leading terms are exact monomial roots.

Their overlap is the main cross-validation surface of the package.

Normalized coordinates: u = sum c_{jn} t^j z^(n/kappa) / (m1(j) m2(n/kappa)).
In these coordinates d_{m1,t} is the row shift c_{jn} -> c_{j+1,n} and
d_{m2,z} is the column shift c_{jn} -> c_{j,n+kappa}, both exact, so the
recurrence below has no floating-point moment evaluations inside the loop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .characteristic import (CharPolynomial, CharRoot, newton_polygon_roots,
                             reconstruct_from_roots)
from .errors import (DecompositionError, GridError, SemanticError,
                     TruncationError)
from .moments import MomentFunction
from .operators import monomial_pseudo
from .scaled import ScaledComplex
from .series import BiSeries, RamifiedSeries

RECONSTRUCT_TOL = 1e-9  # relative; monomial-exactness of the factorization


@dataclass(frozen=True)
class PdeProblem:
    """P(d_{m1,t}, d_{m2,z}) u = 0 with Cauchy data d^j_{m1,t} u(0,z) = phi_j."""

    P: CharPolynomial
    m1: MomentFunction
    m2: MomentFunction
    data: tuple = field(default_factory=tuple)  # RamifiedSeries phi_0..phi_{n-1}
    gevrey_s: Fraction = Fraction(0)
    trunc_t: int = 20

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.data))
        object.__setattr__(self, "gevrey_s", Fraction(self.gevrey_s))
        self.P.validate()
        n = self.P.lam_degree
        if len(self.data) != n:
            raise SemanticError(
                f"equation has lambda-degree {n} but {len(self.data)} data "
                f"series were given; provide exactly {n} Cauchy rows")
        kappas = {d.kappa for d in self.data}
        if len(kappas) > 1:
            raise SemanticError(f"data series disagree on kappa: {kappas}")

    @property
    def kappa(self) -> int:
        return self.data[0].kappa

    @property
    def trunc_z(self) -> int:
        return min(d.trunc for d in self.data)


def _normalized_data_row(phi: RamifiedSeries, m1: MomentFunction,
                         m2: MomentFunction) -> RamifiedSeries:
    """c_{jn} = phi_n * m1(0) * m2(n/kappa) for a Cauchy row."""
    kappa = phi.kappa
    out = [phi[n] * m2.eval_scaled(n / kappa) for n in range(len(phi))]
    m10 = m1.eval_scaled(0.0)
    return RamifiedSeries.from_scaled(kappa, [c * m10 for c in out])


def _denormalize(c: BiSeries, m1: MomentFunction, m2: MomentFunction
                 ) -> BiSeries:
    """u_{jn} = c_{jn} / (m1(j) m2(n/kappa))."""
    kappa = c.kappa_z
    mant = np.array(c.mant)
    exp = np.array(c.exp10)
    for j in range(c.trunc_t + 1):
        f1 = m1.log_eval(float(j))
        for n in range(c.trunc_z + 1):
            sc = ScaledComplex(complex(mant[j, n]), int(exp[j, n]))
            f = ScaledComplex.from_log10(
                -(f1 + m2.log_eval(n / kappa)) * math.log10(math.e))
            sc = sc * f
            mant[j, n], exp[j, n] = sc.mantissa, sc.exp10
    return BiSeries(1, kappa, mant, exp, normalized=True)


def required_z_truncation(P: CharPolynomial, kappa: int, trunc_t: int) -> int:
    """Minimal data z-truncation for the recurrence to reach trunc_t rows."""
    n_lam = P.lam_degree
    max_b = max(b for _, b in P.coeffs)
    blocks = max(0, -(-(trunc_t + 1 - n_lam) // n_lam))  # ceil division
    return blocks * max_b * kappa


def solve_constant_leading(prob: PdeProblem) -> BiSeries:
    """Exact shift recurrence; requires constant leading coefficient P_0.

    Row j + n_lam is solved from rows j..j+n_lam-1; every block of n_lam
    t-steps consumes max_b * kappa z-orders of the data, so the output is
    the rectangle trunc_z - required_z_truncation wide.
    """
    P, m1, m2 = prob.P, prob.m1, prob.m2
    p0 = P.leading_constant()
    if p0 is None:
        raise SemanticError(
            "leading lambda coefficient P_0(zeta) is not constant; the shift "
            "recurrence needs the normalized (factorized) operator")
    kappa = prob.kappa
    n_lam = P.lam_degree
    max_b = max(b for _, b in P.coeffs)
    nt = prob.trunc_t
    nz_in = prob.trunc_z

    cm = np.zeros((nt + 1, nz_in + 1), dtype=np.complex128)
    ce = np.zeros((nt + 1, nz_in + 1), dtype=np.int64)
    valid = np.zeros(nt + 1, dtype=np.int64)  # per-row valid length
    for j in range(min(n_lam, nt + 1)):
        row = _normalized_data_row(prob.data[j], m1, m2)
        cm[j, :len(row)] = row.mant
        ce[j, :len(row)] = row.exp10
        valid[j] = nz_in + 1

    lower = [((a, b), c) for (a, b), c in P.coeffs.items() if a < n_lam]
    inv_p0 = ScaledComplex.from_complex(-1.0 / p0)
    for j2 in range(n_lam, nt + 1):
        j = j2 - n_lam
        # each term (a, b) reads row j+a shifted by b*kappa columns
        width = min(valid[j + a] - b * kappa for (a, b), _ in lower)
        if width <= 0:
            raise TruncationError(
                f"z-truncation exhausted at t-row {j2}; the recurrence needs "
                f"data trunc_z >= {required_z_truncation(P, kappa, nt)} "
                f"(got {nz_in})")
        acc_m = np.zeros(width, dtype=np.complex128)
        acc_e = np.zeros(width, dtype=np.int64)
        for (a, b), p_ab in lower:
            s = inv_p0 * p_ab
            shift = b * kappa
            rm, re = K.axpy_shift(acc_m, acc_e,
                                  cm[j + a, shift:shift + width],
                                  ce[j + a, shift:shift + width],
                                  s.mantissa, s.exp10, 0)
            acc_m, acc_e = rm, re
        cm[j2, :width] = acc_m
        ce[j2, :width] = acc_e
        valid[j2] = width

    nz_out = int(valid[:nt + 1].min()) - 1
    c = BiSeries(1, kappa, cm[:, :nz_out + 1], ce[:, :nz_out + 1],
                 normalized=True)
    return _denormalize(c, m1, m2)


def solve_simple(lam: complex, q, beta: int, m1: MomentFunction,
                 m2: MomentFunction, phi: RamifiedSeries,
                 trunc_t: int) -> BiSeries:
    """Closed-form solution of (d_{m1,t} - lam zeta^q symbol)^beta u = 0.

    Coefficient of t^j is m1(0) * C(j, beta-1) * (lam zeta^q)(d_{m2,z})^j
    applied to phi, divided by m1(j).  Rows 0..beta-2 vanish and the row
    beta-1 initial derivative equals (lam zeta^q)(d)^(beta-1) phi; for
    beta = 1 the Cauchy datum is phi itself.
    """
    if beta < 1:
        raise ValueError("beta must be a positive integer")
    q = Fraction(q)
    kappa = phi.kappa
    p_f = q * kappa
    if p_f.denominator != 1:
        raise GridError(
            f"q={q} needs ramification kappa divisible by {q.denominator} "
            f"(got kappa={kappa})")
    p = int(p_f)
    nz_out = phi.trunc - trunc_t * p
    if nz_out < 0:
        raise TruncationError(
            f"phi truncation {phi.trunc} too short: row {trunc_t} shifts by "
            f"{trunc_t * p} z-orders")
    rows = []
    for j in range(trunc_t + 1):
        cb = math.comb(j, beta - 1)
        if cb == 0:
            rows.append(RamifiedSeries.zero(kappa, nz_out))
            continue
        row = monomial_pseudo(lam, q, m2, phi, power=j)
        f = m1.ratio_scaled(0.0, float(j)) * cb
        rows.append(row.truncate_to(nz_out).scale(f))
    return BiSeries.from_rows(1, rows)


def _check_monomial_exact(P: CharPolynomial, roots, kappa: int):
    p0 = P.leading_constant()
    if p0 is None:
        raise SemanticError(
            "leading lambda coefficient P_0(zeta) is not constant; only "
            "normalized (P_0 removed) operators are decomposed")
    for r in roots:
        if (r.q * kappa).denominator != 1:
            raise DecompositionError(
                f"root exponent q={r.q} is off the 1/{kappa} grid; ramify the "
                f"data to kappa divisible by {r.q.denominator} first")
        if r.q < 0:
            raise DecompositionError(
                f"negative root exponent q={r.q} is outside the supported "
                f"class")
    rec = reconstruct_from_roots(roots, p0, kappa)
    given = {(a, b * kappa): c for (a, b), c in P.coeffs.items()}
    scale = max(abs(c) for c in given.values())
    for key in set(rec) | set(given):
        if abs(rec.get(key, 0) - given.get(key, 0)) > RECONSTRUCT_TOL * scale:
            raise DecompositionError(
                "Newton-polygon leading terms are not exact roots of P; the "
                "equation is not monomial-factorizable "
                "(use solve_constant_leading instead)")


@dataclass(frozen=True)
class SimplePiece:
    """One (d_{m1,t} - lam zeta^q)^beta factor solution inside a decomposition."""

    root: CharRoot
    beta: int
    psi: RamifiedSeries  # its Cauchy-type datum
    solution: BiSeries


def decompose(prob: PdeProblem) -> list[SimplePiece]:
    """Split the problem into simple pieces whose sum matches the Cauchy data.

    The data mixers psi_{alpha,beta} solve the matching system
    sum_{alpha,beta} C(a, beta-1) lam_alpha^a S^(a q_alpha kappa)
    psi_{alpha,beta} = phi_a in moment-normalized coordinates, where S is
    the column shift.  On a finite window each shift power has a kernel,
    so the system is consistent but underdetermined; it is solved as one
    dense minimum-norm least-squares problem.  Unknowns are pre-divided by
    m2(n/kappa) and each equation by its largest moment weight, so every
    matrix entry is O(1) and no factorial cancellation occurs.
    """
    roots = newton_polygon_roots(prob.P)
    kappa = prob.kappa
    _check_monomial_exact(prob.P, roots, kappa)
    n = prob.P.lam_degree
    cols = [(r, beta) for r in roots for beta in range(1, r.multiplicity + 1)]
    if len(cols) != n:
        raise DecompositionError(
            f"root multiplicities sum to {len(cols)}, expected {n}")

    nw = len(prob.data[0])
    lw = np.array([prob.m2.log_eval(j / kappa) for j in range(nw)])
    log10e = math.log10(math.e)
    a_rows = []
    b_vals = []
    for a in range(n):
        terms = []
        for u, (r, beta) in enumerate(cols):
            cb = math.comb(a, beta - 1)
            if cb:
                terms.append((u, a * int(r.q * kappa), cb * r.leading ** a))
        h = max(s for _, s, _ in terms)
        # equations reading past the window constrain unseen tail entries
        # of the mixers and are dropped
        for j in range(nw - h):
            row = np.zeros(n * nw, dtype=np.complex128)
            for u, s, c in terms:
                row[u * nw + j + s] = c * math.exp(lw[j + s] - lw[j + h])
            a_rows.append(row)
            w = ScaledComplex.from_log10((lw[j] - lw[j + h]) * log10e)
            b_vals.append((prob.data[a][j] * w).to_complex())
    mat = np.array(a_rows)
    b = np.array(b_vals)
    # column equilibration: low-shift pieces otherwise carry tiny moment
    # ratios and their mixer entries come out weakly determined
    cn = np.linalg.norm(mat, axis=0)
    cn[cn == 0] = 1.0
    mat_e = mat / cn
    x, _, _, _ = np.linalg.lstsq(mat_e, b, rcond=None)
    dx, _, _, _ = np.linalg.lstsq(mat_e, b - mat_e @ x, rcond=None)
    x = (x + dx) / cn
    resid = np.abs(mat @ x - b).max()
    if not resid <= 1e-8 * max(1.0, np.abs(b).max()):
        raise DecompositionError(
            f"data-mixing system left residual {resid:.3e}; the matching "
            f"equations are inconsistent on this window")

    pieces = []
    for u, (r, beta) in enumerate(cols):
        psi = RamifiedSeries.from_complex(kappa, x[u * nw:(u + 1) * nw])
        sol = solve_simple(r.leading, r.q, beta, prob.m1, prob.m2, psi,
                           prob.trunc_t)
        pieces.append(SimplePiece(root=r, beta=beta, psi=psi, solution=sol))
    return pieces


def sum_pieces(pieces) -> BiSeries:
    """Sum the decomposition back into one BiSeries (min-rule truncations)."""
    nt = min(p.solution.trunc_t for p in pieces)
    nz = min(p.solution.trunc_z for p in pieces)
    acc = pieces[0].solution.truncate_to(nt, nz)
    for p in pieces[1:]:
        b = p.solution.truncate_to(nt, nz)
        rm, re = K.add(acc.mant.ravel(), acc.exp10.ravel(),
                       b.mant.ravel(), b.exp10.ravel())
        acc = BiSeries(acc.kappa_t, acc.kappa_z,
                       rm.reshape(acc.mant.shape), re.reshape(acc.mant.shape),
                       normalized=True)
    return acc
