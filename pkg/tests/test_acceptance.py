"""Acceptance battery: one test per shipped criterion.

Each test prints a single machine-greppable line
    [criterion NN] PASS|FAIL  <label>  <measured figure>
before asserting, so a full run with `pytest tests/test_acceptance.py -s`
shows the verdict for every criterion even when one fails.
"""

import math
import random
from fractions import Fraction
from pathlib import Path

import numpy as np

from hookium import cli, hooke, observables, qes
from hookium.series import series_solve

GOLDEN_DIR = Path(__file__).parent / "goldens"


def report(num, label, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {tag}  {label}  {detail}".rstrip())
    assert ok, f"criterion {num}: {label}: {detail}"


def test_criterion_01_closed_form_frequencies():
    ok = True
    worst4 = 0.0
    for m in range(0, 9):
        for Z in (1, -1, 3, -3):
            b2 = hooke.solve_frequencies(2, m, Z)[0]
            ok = ok and b2.omega_exact == Fraction(Z * Z, 2 * (2 * m + 1))
            b3 = hooke.solve_frequencies(3, m, Z)[0]
            ok = ok and b3.omega_exact == Fraction(Z * Z, 4 * (4 * m + 3))
            roots = hooke.solve_frequencies(4, m, Z)
            disc = math.sqrt(73 + 128 * m + 64 * m * m)
            for br, sign in zip(roots, (1, -1)):
                want = Z * Z * (10 * (1 + m) + sign * disc) / (18 * (4 * m * m + 8 * m + 3))
                worst4 = max(worst4, abs(float(br.omega_tilde) - want))
    ok = ok and worst4 <= 1e-12
    report(1, "closed-form frequencies n=2,3 exact; n=4 quadratic",
           ok, f"max n=4 deviation {worst4:.2e}")


def test_criterion_02_eigen_residual_suite():
    worst = 0.0
    count = 0
    law_ok = True
    for n in range(2, 7):
        for m in range(0, 4):
            for Z in (1, -1):
                for br in hooke.solve_frequencies(n, m, Z):
                    wf = hooke.build_wavefunction(br)
                    worst = max(worst, hooke.verify_branch(wf))
                    law_ok = law_ok and abs(
                        br.eps_rel - float(br.omega_tilde) * (n + m)) <= 1e-12
                    count += 1
    ref = hooke.solve_frequencies(2, 0, 1)[0]
    ref_ok = abs(ref.eps_rel - 1.0) <= 1e-10
    ok = worst <= 1e-9 and law_ok and ref_ok
    report(2, f"eigen residuals over {count} branches",
           ok, f"max residual {worst:.2e}, reference eps_rel {ref.eps_rel!r}")


def test_criterion_03_engine_matches_recurrence():
    rng = random.Random(60)
    ok = True
    for _ in range(12):
        m = rng.randrange(0, 5)
        kappa = Fraction(rng.randrange(-9, 10) or 1, rng.randrange(1, 7))
        e_tilde = Fraction(rng.randrange(-8, 9), rng.randrange(1, 5))
        F, P = hooke.hooke_series_operator(m, kappa, e_tilde)
        y = series_solve(F, P, 0, 59)
        a = hooke.recurrence_coefficients(kappa, e_tilde, m, 60)
        ok = ok and all(y.coefficient(j) == a[j] for j in range(60))
    report(3, "series engine equals three-term recurrence (60 exact coefficients, 12 tuples)", ok)


def test_criterion_04_density_routes():
    worst_dev = 0.0
    worst_norm = 0.0
    fitted = []
    for case_id in sorted(observables.CATALOG):
        case = observables.CATALOG[case_id]
        cmp = observables.compare_density_routes(case, fit_width=True)
        worst_dev = max(worst_dev, cmp.max_rel_deviation)
        fitted.append(f"{case_id}:{cmp.fit.beta:.6f}")
        # normalized closed profile re-integrated on an independent dense
        # trapezoid grid; the quadrature route's raw convolution of two
        # normalized factors must already carry integral 2 (scale ~ 1)
        closed = observables.closed_form_density(case, np.array([0.0, 1.0]))
        rr = np.linspace(0.0, math.sqrt(140.0 / case.gauss), 40001)
        vals = closed.scale_applied * np.array([case.raw(float(r)) for r in rr])
        total = float(np.trapezoid(2.0 * math.pi * rr * vals, rr))
        worst_norm = max(worst_norm, abs(total - 2.0))
        wf = hooke.build_wavefunction(case.branch())
        quad = observables.density_quadrature(
            wf, hooke.CenterOfMassState(beta=float(case.omega)), np.array([0.0, 1.0]))
        worst_norm = max(worst_norm, abs(2.0 / quad.scale_applied - 2.0))
    ok = worst_dev <= 1e-5 and worst_norm <= 1e-6
    report(4, "density routes agree, integral is 2",
           ok, f"max rel dev {worst_dev:.2e}, max norm error {worst_norm:.2e}, "
               f"fitted widths {', '.join(fitted)}")


def test_criterion_05_entropy_analytic():
    worst = 0.0
    for om in (0.1, 0.5, 2.0):
        wf = hooke.build_wavefunction(hooke.oscillator_branch(0, om))
        worst = max(worst, abs(observables.total_entropy(wf) - (1.0 + math.log(math.pi / om))))
    ok = worst <= 1e-8
    report(5, "Coulomb-free entropy equals 1 + ln(pi/omega)", ok, f"max deviation {worst:.2e}")


def test_criterion_06_entropy_scan_monotone():
    rows = observables.entropy_scan(3, range(0, 5), (1, -1))
    by_z = {1: {}, -1: {}}
    for row in rows:
        by_z[int(row.Z)][row.m] = row.entropy
    inc = all(all(by_z[Z][m] < by_z[Z][m + 1] for m in range(0, 4)) for Z in (1, -1))
    attr = all(by_z[-1][m] > by_z[1][m] for m in range(0, 5))
    report(6, "n=3 entropy increases with m, attractive above repulsive", inc and attr,
           f"S ranges {by_z[1][0]:.4f}..{by_z[-1][4]:.4f}")


def test_criterion_07_entropy_origin_signs():
    origin = np.array([1e-10, 1.0])

    def s0(n, m, Z):
        wf = hooke.build_wavefunction(hooke.solve_frequencies(n, m, Z)[0])
        return observables.entropy_density(wf, origin).values[0]

    neg = s0(2, 0, -1)
    pos = s0(3, 0, -1)
    flat = max(abs(s0(2, 1, -1)), abs(s0(2, 2, 1)), abs(s0(3, 1, -1)))
    ok = neg < 0 and pos > 0 and flat < 1e-12
    report(7, "entropy density origin signs", ok,
           f"S(0): n2 {neg:.4f}, n3 {pos:.4f}, m>=1 {flat:.1e}")


def test_criterion_08_qes_dictionary():
    worst_rt = 0.0
    worst_cond = 0.0
    worst_res = 0.0
    for Z in (-1, 1):
        br = hooke.solve_frequencies(2, 0, Z)[0]
        inv = qes.map_from_hooke(br)
        eq = qes.map_to_hooke(inv.params, inv.E)
        worst_rt = max(worst_rt,
                       abs(eq.omega_tilde - br.omega_tilde), abs(eq.Z - br.Z),
                       abs(eq.eps_rel - br.eps_rel), abs(eq.m_tilde - abs(br.m)))
        worst_cond = max(worst_cond, qes.condition_residual(inv.params, 2))
        sw = qes.hooke_state_to_sextic(hooke.build_wavefunction(br))
        worst_res = max(worst_res, qes.sextic_residual(inv.params, inv.E, sw))
    p = qes.SexticParams(alpha=qes.qes_condition(2, 0, Fraction(4, 9)),
                         gamma=Fraction(4, 9), m=0)
    for E in qes.sector_energies(p):
        wf = qes.sextic_state_to_hooke(p, E, qes.qes_eigen_series(E, p, 12))
        worst_res = max(worst_res, hooke.verify_branch(wf))
    ok = worst_rt <= 1e-14 and worst_cond < 1e-12 and worst_res <= 1e-9
    report(8, "sextic dictionary round trip and mapped residuals", ok,
           f"round trip {worst_rt:.2e}, condition {worst_cond:.2e}, residual {worst_res:.2e}")


def test_criterion_09_variational():
    p = qes.SexticParams(alpha=-8.0, gamma=1.0, m=-0.5)
    vs_hi = qes.variational_state(p, 1, 16, E_bracket=(1.0, 3.0))
    vs_lo = qes.variational_state(p, 0, 16, E_bracket=(-3.0, -1.0))
    err = max(abs(vs_hi.E_star - 2.0), abs(vs_lo.E_star + 2.0))
    res = max(vs_hi.residual_norm, vs_lo.residual_norm)
    vs_grow = qes.variational_state(p, 1, 20, E_bracket=(1.0, 3.0))
    drift = abs(vs_grow.E_star - vs_hi.E_star)
    ok = err <= 1e-8 and res <= 1e-12 and vs_hi.node_count == 1 and drift <= 1e-4
    report(9, "variational recovery of exact sector", ok,
           f"energy error {err:.2e}, residual {res:.2e}, N growth drift {drift:.2e}")


def test_criterion_10_bessel_oracle():
    def series(order, x, terms=30):
        total = Fraction(0)
        for k in range(terms):
            total += (x / 2) ** (2 * k + order) / (
                Fraction(math.factorial(k)) * math.factorial(k + order))
        return float(total)

    worst = 0.0
    for xf in (Fraction(1, 2), Fraction(1), Fraction(5), Fraction(20)):
        x = float(xf)
        for order in (0, 1):
            want = series(order, xf)
            worst = max(worst, abs(observables.bessel_i(order, x) - want) / want)
    h = 1e-6
    worst_d = 0.0
    for x in (0.5, 1.0, 5.0):
        diff = (observables.bessel_i(0, x + h) - observables.bessel_i(0, x - h)) / (2 * h)
        worst_d = max(worst_d, abs(diff - observables.bessel_i(1, x))
                      / observables.bessel_i(1, x))
    ok = worst <= 1e-10 and worst_d <= 1e-6
    report(10, "Bessel values match 30-term series, derivative identity", ok,
           f"value rel {worst:.2e}, derivative rel {worst_d:.2e}")


def test_criterion_11_cli_goldens_and_exit_codes(capsys):
    goldens = {
        "solve_n4.csv": ["solve", "--n", "4", "--m", "0", "--Z", "1"],
        "entropy_scan_n3.csv": ["entropy", "--scan", "--n", "3",
                                "--m", "0:2", "--Z", "1,-1"],
        "qes_condition.txt": ["qes", "condition", "--n", "2", "--m", "0",
                              "--gamma", "4/9"],
    }
    byte_ok = True
    for name, argv in goldens.items():
        rc = cli.main(argv)
        live = capsys.readouterr().out.encode()
        want = (GOLDEN_DIR / name).read_bytes()
        byte_ok = byte_ok and rc == 0 and live == want

    exercised = {}
    for want_code, argv in (
            (1, ["verify", "--detune", "1e-3"]),
            (2, ["entropy", "--n", "2", "--m", "0", "--Z", "1", "--omega", "0.5"]),
            (3, ["solve", "--n", "2", "--m", "0", "--Z", "0"]),
            (4, ["density", "--case", "n2m0Zp1", "--method", "quadrature",
                 "--grid", "0:4:3", "--quad-tol", "1e-30"]),
            (5, ["qes", "variational", "--nodes", "6", "--N", "10"])):
        exercised[want_code] = cli.main(argv)
        capsys.readouterr()
    codes_ok = all(got == want for want, got in exercised.items())
    ok = byte_ok and codes_ok
    with capsys.disabled():
        report(11, "CLI goldens byte-identical, exit codes 1-5 exercised", ok,
               f"codes {exercised}")
