import math
from fractions import Fraction

import numpy as np
import pytest

from hookium import hooke, qes


@pytest.fixture(scope="module")
def exact_sector():
    alpha = qes.qes_condition(2, 0, Fraction(4, 9))
    return qes.SexticParams(alpha=alpha, gamma=Fraction(4, 9), m=0)


@pytest.fixture(scope="module")
def mapped_sector():
    # the sextic image of the repulsive two-particle ground branch
    return qes.SexticParams(alpha=-8.0, gamma=1.0, m=-0.5)


def test_params_validation():
    with pytest.raises(ValueError):
        qes.SexticParams(alpha=1.0, gamma=-2.0, m=0)
    p = qes.SexticParams(alpha=-6, gamma=Fraction(4, 9), m=0)
    assert p.sqrt_gamma == Fraction(2, 3)
    assert p.A == Fraction(-4, 3)


def test_condition_closes_sector(exact_sector):
    p = exact_sector
    assert p.alpha == Fraction(-6)
    assert p.A == -2 * p.sqrt_gamma
    assert qes.condition_residual(p, 2) == 0
    assert qes.sector_degree(p) == 1


def test_condition_open_for_odd_shift():
    p = qes.SexticParams(alpha=qes.qes_condition(1, 0, 1.0), gamma=1.0, m=0)
    assert qes.sector_degree(p) is None
    with pytest.raises(ValueError):
        qes.sector_energies(p)


def test_sector_energies_symmetric_pair(exact_sector):
    es = qes.sector_energies(exact_sector)
    assert es == [-2.0, 2.0]
    want = math.sqrt(2.0 * float(exact_sector.sqrt_gamma) * 3.0)
    assert es[1] == pytest.approx(want, rel=1e-15)


def test_series_leading_coefficients():
    p = qes.SexticParams(alpha=-3.0, gamma=1.0, m=0)
    E = 1.7
    s = qes.qes_series(E, p, 8)
    A = float(p.A)
    c2 = -E / 6.0
    c4 = A / 20.0 + E * E / 120.0
    assert s.coefficient(0) == 1
    assert s.coefficient(2) == pytest.approx(c2, abs=1e-15)
    assert s.coefficient(4) == pytest.approx(c4, abs=1e-15)
    # the eigen-equation series carries twice the energy and twice A
    se = qes.qes_eigen_series(E, p, 8)
    assert se.coefficient(2) == pytest.approx(2 * c2, abs=1e-15)


def test_eigen_series_annihilated_below_truncation():
    p = qes.SexticParams(alpha=-3.0, gamma=1.0, m=0)
    N = 20
    u = qes.qes_eigen_series(1.7, p, N)
    F, P = qes._series_system(p, 1.7, doubled=True)
    tail = F.to_monomial().apply(u) + P.apply(u)
    low = max((abs(float(tail.coefficient(e))) for e in tail.exponents() if e <= N),
              default=0.0)
    high = max(abs(float(tail.coefficient(e))) for e in tail.exponents() if e > N)
    assert low < 1e-14
    assert high > 1e-4


def test_exact_sector_states(mapped_sector):
    p = mapped_sector
    assert qes.sector_degree(p) == 1
    es = qes.sector_energies(p)
    assert es[0] == pytest.approx(-2.0, abs=1e-12)
    assert es[1] == pytest.approx(2.0, abs=1e-12)
    u_plus = qes.qes_eigen_series(2.0, p, 12)
    u_minus = qes.qes_eigen_series(-2.0, p, 12)
    assert u_plus.coefficient(2) == pytest.approx(-1.0, abs=1e-15)
    assert abs(u_plus.coefficient(4)) < 1e-15
    assert qes.node_count(u_plus, (0.0, 4.0)) == 1
    assert qes.node_count(u_minus, (0.0, 4.0)) == 0


def test_node_count_exact_rational_path(exact_sector):
    u = qes.qes_eigen_series(Fraction(2), exact_sector, 12)
    assert u.coefficient_kind == "exact-rational"
    assert qes.node_count(u, (0.0, 4.0)) == 1


def test_residual_functional_discriminates(mapped_sector):
    x_max = qes._x_max(mapped_sector)
    r_exact, _, _ = qes._residual_functional(mapped_sector, 2.0, 12, x_max)
    r_off, _, _ = qes._residual_functional(mapped_sector, 2.3, 12, x_max)
    assert r_exact <= 1e-12
    assert r_off > 1e-6


def test_rayleigh_quotient_crosses_zero(mapped_sector):
    rq_lo = qes.rayleigh_quotient(mapped_sector, 1.9, 16)
    rq_hi = qes.rayleigh_quotient(mapped_sector, 2.1, 16)
    assert rq_lo * rq_hi < 0


def test_variational_recovers_exact_state(mapped_sector):
    vs = qes.variational_state(mapped_sector, 1, 16)
    assert vs.E_star == pytest.approx(2.0, abs=1e-8)
    assert vs.residual_norm <= 1e-12
    assert vs.node_count == 1
    vs2 = qes.variational_state(mapped_sector, 1, 20)
    assert abs(vs2.E_star - vs.E_star) < 1e-4


def test_variational_ground_state(mapped_sector):
    vs = qes.variational_state(mapped_sector, 0, 16, E_bracket=(-6.0, 0.0))
    assert vs.E_star == pytest.approx(-2.0, abs=1e-8)
    assert vs.node_count == 0


def test_variational_unreachable_nodes(mapped_sector):
    with pytest.raises(qes.NodeCountUnreachable):
        qes.variational_state(mapped_sector, 6, 10)


def test_variational_bracket_excludes_minimum(mapped_sector):
    with pytest.raises(qes.BracketError):
        qes.variational_state(mapped_sector, 1, 16, E_bracket=(0.5, 1.9),
                              scan_points=9)


def test_dictionary_round_trip():
    br = hooke.solve_frequencies(2, 0, -1)[0]
    inv = qes.map_from_hooke(br)
    assert inv.params.gamma == pytest.approx(1.0, abs=1e-15)
    assert inv.E == pytest.approx(2.0, abs=1e-15)
    assert inv.params.alpha == pytest.approx(-8.0, abs=1e-15)
    assert inv.params.m == -0.5
    assert not inv.integer_sextic_m
    eq = qes.map_to_hooke(inv.params, inv.E)
    assert eq.omega_tilde == pytest.approx(br.omega_tilde, abs=1e-14)
    assert eq.Z == pytest.approx(br.Z, abs=1e-14)
    assert eq.eps_rel == pytest.approx(br.eps_rel, abs=1e-14)
    assert eq.m_tilde == pytest.approx(abs(br.m), abs=1e-14)


def test_sextic_state_maps_to_valid_trap_state(exact_sector):
    for Ev in (2.0, -2.0):
        useries = qes.qes_eigen_series(Ev, exact_sector, 12)
        wf = qes.sextic_state_to_hooke(exact_sector, Ev, useries)
        res = hooke.verify_branch(wf, grid=np.linspace(1e-3, 12.0, 600))
        assert res < 1e-9, Ev


def test_trap_state_maps_to_valid_sextic_state():
    for Z in (-1, 1):
        br = hooke.solve_frequencies(2, 0, Z)[0]
        inv = qes.map_from_hooke(br)
        sw = qes.hooke_state_to_sextic(hooke.build_wavefunction(br))
        res = qes.sextic_residual(inv.params, inv.E, sw)
        assert res < 1e-9, Z


def test_variable_change_identity():
    # the sextic image evaluates as x^{-1/2} u(x^2) pointwise
    br = hooke.solve_frequencies(2, 0, -1)[0]
    wf = hooke.build_wavefunction(br)
    sw = qes.hooke_state_to_sextic(wf)
    xs = np.linspace(0.3, 2.2, 7)
    lhs = np.array([sw.psi(x) for x in xs])
    rhs = np.array([wf.u(x * x) / np.sqrt(x) for x in xs])
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-14)
