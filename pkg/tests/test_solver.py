import math
from fractions import Fraction

import numpy as np
import pytest

import msumma as ms
from msumma import (CharPolynomial, GAMMA_1, MomentFunction, PdeProblem,
                    RamifiedSeries, decompose, solve_constant_leading,
                    solve_simple, sum_pieces)
from msumma.solver import required_z_truncation

from conftest import biseries_to_array, cross_solver_deviation

L = CharPolynomial.lam()
Z = CharPolynomial.zeta()


def geometric_data(n_rows, nz, kappa=1):
    return tuple(RamifiedSeries.from_complex(kappa, np.ones(nz))
                 for _ in range(n_rows))


def test_heat_diagonal_coefficients():
    # P = L - Z^2, phi = 1/(1-z): u(t,0) has coefficients (2j)!/j!
    prob = PdeProblem(P=L - Z**2, m1=GAMMA_1, m2=GAMMA_1,
                      data=geometric_data(1, 41), trunc_t=19)
    u = solve_constant_leading(prob)
    diag = u.extract_col(0)
    for j in range(12):
        expect = math.factorial(2 * j) / math.factorial(j)
        got = abs(diag.coeff_complex(j))
        assert abs(got - expect) <= 1e-13 * expect


def test_heat_full_grid():
    # coefficient of t^j z^n is (2j+n)! / (j! n!)
    prob = PdeProblem(P=L - Z**2, m1=GAMMA_1, m2=GAMMA_1,
                      data=geometric_data(1, 30), trunc_t=8)
    u = solve_constant_leading(prob)
    for j in range(6):
        for n in range(8):
            expect = (math.factorial(2 * j + n)
                      / math.factorial(j) / math.factorial(n))
            got = u.coeff(j, n).to_complex().real
            assert abs(got - expect) <= 1e-12 * expect


def test_data_rows_are_reproduced():
    rng = np.random.default_rng(0)
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=25))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z) * (L + Z), m1=GAMMA_1, m2=GAMMA_1,
                      data=data, trunc_t=6)
    u = solve_constant_leading(prob)
    for j in range(2):
        row = u.extract_row(j)
        for n in range(len(row)):
            assert abs(row.coeff_complex(n)
                       - data[j].coeff_complex(n)) < 1e-13


def test_residual_of_solution_vanishes():
    rng = np.random.default_rng(1)
    P = (L - Z) * (L + Z.scale(2.0))
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=30))
                 for _ in range(2))
    prob = PdeProblem(P=P, m1=GAMMA_1, m2=MomentFunction.gamma(1),
                      data=data, trunc_t=8)
    u = solve_constant_leading(prob)
    res = ms.operators.apply_char_polynomial(P.coeffs, prob.m1, prob.m2, u)
    arr = biseries_to_array(res)
    scale = np.abs(biseries_to_array(u)).max()
    assert np.abs(arr).max() <= 1e-12 * scale


def test_wrong_data_count():
    with pytest.raises(ms.SemanticError):
        PdeProblem(P=(L - Z) * (L + Z), m1=GAMMA_1, m2=GAMMA_1,
                   data=geometric_data(1, 10), trunc_t=4)


def test_nonconstant_leading_rejected():
    P = CharPolynomial({(1, 1): 1.0, (0, 0): 1.0})  # zeta * lambda + 1
    prob = PdeProblem(P=P, m1=GAMMA_1, m2=GAMMA_1,
                      data=geometric_data(1, 10), trunc_t=4)
    with pytest.raises(ms.SemanticError):
        solve_constant_leading(prob)


def test_truncation_exhaustion():
    prob = PdeProblem(P=L - Z**2, m1=GAMMA_1, m2=GAMMA_1,
                      data=geometric_data(1, 5), trunc_t=10)
    with pytest.raises(ms.TruncationError):
        solve_constant_leading(prob)
    need = required_z_truncation(L - Z**2, 1, 10)
    assert need == 20


def test_solve_simple_closed_form():
    # (d_t - lam zeta) u = 0 with phi = 1/(1-z):
    # row j = lam^j (d/dz-type op)^j phi / j! in moment-normalized form
    phi = RamifiedSeries.from_complex(1, np.ones(30))
    lam = 2.0
    u = solve_simple(lam, 1, 1, GAMMA_1, GAMMA_1, phi, 6)
    # with m1 = m2 = Gamma_1 the coefficient of t^j z^n is
    # lam^j C(j+n, j) ... for geometric data: (j+n)!/(j! n!) * lam^j
    for j in range(5):
        for n in range(6):
            expect = lam**j * math.comb(j + n, j)
            got = u.coeff(j, n).to_complex().real
            assert abs(got - expect) <= 1e-12 * expect


def test_solve_simple_multiplicity_rows_vanish():
    phi = RamifiedSeries.from_complex(1, np.ones(30))
    u = solve_simple(1.0, 1, 3, GAMMA_1, GAMMA_1, phi, 8)
    for j in range(2):
        row = biseries_to_array(u)[j]
        assert np.abs(row).max() == 0.0


def test_decompose_piece_data_sums_to_input():
    rng = np.random.default_rng(2)
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=24))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z) * (L + Z), m1=GAMMA_1, m2=GAMMA_1,
                      data=data, trunc_t=5)
    pieces = decompose(prob)
    s = pieces[0].psi + pieces[1].psi
    for n in range(len(s)):
        assert abs(s.coeff_complex(n) - data[0].coeff_complex(n)) < 1e-12


def test_cross_solver_dalembert(rng):
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=30))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z) * (L + Z), m1=GAMMA_1, m2=GAMMA_1,
                      data=data, trunc_t=6)
    assert cross_solver_deviation(prob) < 1e-12


def test_cross_solver_double_root(rng):
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=30))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z**2) ** 2, m1=GAMMA_1, m2=GAMMA_1,
                      data=data, trunc_t=5)
    assert cross_solver_deviation(prob) < 1e-12


def test_cross_solver_mixed_orders(rng):
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=30))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z**3) * (L + Z), m1=GAMMA_1, m2=GAMMA_1,
                      data=data, trunc_t=5)
    assert cross_solver_deviation(prob) < 1e-12


def test_cross_solver_gamma_half_moments(rng):
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=30))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z**2) * (L + Z),
                      m1=MomentFunction.gamma(Fraction(1, 2)),
                      m2=MomentFunction.gamma(1),
                      data=data, trunc_t=5)
    assert cross_solver_deviation(prob) < 1e-12


def test_decompose_rejects_nonfactorizable():
    # lambda^2 - zeta^2 - 1 has non-monomial roots
    P = CharPolynomial({(2, 0): 1.0, (0, 2): -1.0, (0, 0): -1.0})
    prob = PdeProblem(P=P, m1=GAMMA_1, m2=GAMMA_1,
                      data=geometric_data(2, 20), trunc_t=4)
    with pytest.raises(ms.DecompositionError):
        decompose(prob)


def test_sum_pieces_min_rule():
    rng = np.random.default_rng(3)
    data = tuple(RamifiedSeries.from_complex(1, rng.normal(size=30))
                 for _ in range(2))
    prob = PdeProblem(P=(L - Z**3) * (L + Z), m1=GAMMA_1, m2=GAMMA_1,
                      data=data, trunc_t=5)
    pieces = decompose(prob)
    s = sum_pieces(pieces)
    assert s.trunc_t == min(p.solution.trunc_t for p in pieces)
    assert s.trunc_z == min(p.solution.trunc_z for p in pieces)
