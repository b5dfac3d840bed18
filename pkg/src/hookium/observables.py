"""Pair correlation, single-particle density, and information entropy.

The relative-motion profile u fixes the pair correlation G = u^2/(2 pi r).
Folding G with the Gaussian center-of-mass cloud gives the single-particle
density n(r), computed here two independent ways: a closed catalog of
exponential-Bessel expressions, and direct convolution by adaptive quadrature
(with the angular integral done analytically or numerically). Entropy
profiles and totals are Shannon functionals of these densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _sciint
from scipy import optimize as _sciopt
from scipy import special as _sf

from .hooke import (
    CenterOfMassState,
    QuantizationBranch,
    RadialWavefunction,
    build_wavefunction,
    solve_frequencies,
)
from .integrate import QuadratureNonConvergence, adaptive_quad
from .polyops import real_roots

__all__ = [
    "CATALOG",
    "ClosedFormDensityCase",
    "CmWidthFit",
    "DensityComparison",
    "DensityProfile",
    "EntropyProfile",
    "EntropySurface",
    "PairCorrelation",
    "bessel_i",
    "closed_form_density",
    "compare_density_routes",
    "default_grid",
    "density_quadrature",
    "entropy_density",
    "entropy_scan",
    "entropy_surface",
    "pair_correlation",
    "total_entropy",
]


def bessel_i(order: int, x, scaled: bool = False):
    """Modified Bessel function I_0 or I_1, optionally exponentially scaled.

    The scaled form e^(-x) I_nu(x) stays finite for the r^2-sized arguments
    the density expressions produce.
    """
    if order == 0:
        return _sf.i0e(x) if scaled else _sf.i0(x)
    if order == 1:
        return _sf.i1e(x) if scaled else _sf.i1(x)
    raise ValueError("order must be 0 or 1")


def default_grid(omega: float, points: int = 512, r_min: float = 1e-4, span: float = 12.0):
    """Log-spaced radial grid on [r_min, span/sqrt(omega)]."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    return np.geomspace(r_min, span / math.sqrt(omega), points)


@dataclass(frozen=True)
class PairCorrelation:
    """Separation distribution G(r) = u(r)^2 / (2 pi r), normalized over the plane."""

    wf: RadialWavefunction

    def __call__(self, r):
        return self.wf.density_radial(r) / (2.0 * math.pi)

    def radial(self, r):
        """The 2 pi-free form u^2/r used by the entropy profiles."""
        return self.wf.density_radial(r)

    def total_probability(self) -> float:
        """Integral of G over the plane (= integral of u^2 dr); 1 for a normalized state."""
        rmax = self.wf.support_radius(120.0)
        val, _ = adaptive_quad(self.wf.u_squared, 0.0, rmax,
                               tol_abs=1e-12, tol_rel=1e-11,
                               points=[1.0 / math.sqrt(self.wf.omega)])
        return val


def pair_correlation(wf: RadialWavefunction) -> PairCorrelation:
    return PairCorrelation(wf)


@dataclass(frozen=True)
class DensityProfile:
    """Sampled radial density with its normalization bookkeeping."""

    grid: np.ndarray
    values: np.ndarray
    normalization_target: float
    method: str
    beta: float | None = None
    scale_applied: float = 1.0

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or g.size < 2 or np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")

    def integral_2d(self) -> float:
        """Trapezoid integral of the profile against the planar measure 2 pi r dr."""
        return float(np.trapezoid(2.0 * math.pi * self.grid * self.values, self.grid))

    def normalize(self) -> "DensityProfile":
        scale = self.normalization_target / self.integral_2d()
        return DensityProfile(grid=self.grid, values=self.values * scale,
                              normalization_target=self.normalization_target,
                              method=self.method, beta=self.beta,
                              scale_applied=self.scale_applied * scale)


def _angular_kernel_numeric(z: float) -> float:
    """(1/2pi) integral of exp(-z (1 - cos t)) dt over a full turn.

    Equals the scaled Bessel i0e(z); evaluated by quadrature to give the
    density pipeline a route that never touches the Bessel implementation.
    """
    val, _ = _sciint.quad(lambda t: math.exp(-z * (1.0 - math.cos(t))), 0.0, math.pi,
                          epsabs=1e-13, epsrel=1e-12, limit=200)
    return val / math.pi


def _density_point(wf: RadialWavefunction, beta: float, r: float, angular: str,
                   tol_abs: float, tol_rel: float) -> float:
    rmax = wf.support_radius(160.0) + 2.0 * r + math.sqrt(160.0 / beta)
    if angular == "bessel":
        def f(rp):
            return wf.u_squared(rp) * math.exp(-beta * (r - 0.5 * rp) ** 2) * _sf.i0e(beta * r * rp)
    elif angular == "numeric":
        def f(rp):
            return (wf.u_squared(rp) * math.exp(-beta * (r - 0.5 * rp) ** 2)
                    * _angular_kernel_numeric(beta * r * rp))
    else:
        raise ValueError("angular must be 'bessel' or 'numeric'")
    hints = [2.0 * r, math.sqrt((wf.m_abs + 0.5) / wf.omega)]
    val, _ = adaptive_quad(f, 0.0, rmax, tol_abs=tol_abs, tol_rel=tol_rel,
                           limit=400, points=hints)
    return (2.0 * beta / math.pi) * val


def density_quadrature(wf: RadialWavefunction, cm: CenterOfMassState, grid=None, *,
                       angular: str = "bessel", tol_abs: float = 1e-15,
                       tol_rel: float = 1e-12, normalize: bool = True) -> DensityProfile:
    """Single-particle density n(r) = 2 int |xi(R)|^2 |phi(r')|^2, by convolution.

    Reduces to n(r) = (2 beta/pi) int u(r')^2 exp(-beta (r - r'/2)^2) i0e(beta r r') dr'
    after the angular integral; `angular="numeric"` does that inner integral by
    quadrature instead of the Bessel identity. Raises QuadratureNonConvergence
    when the requested tolerance cannot be met.
    """
    if grid is None:
        grid = default_grid(wf.omega)
    grid = np.asarray(grid, dtype=float)
    values = np.array([_density_point(wf, cm.beta, float(r), angular, tol_abs, tol_rel)
                       for r in grid])
    profile = DensityProfile(grid=grid, values=values, normalization_target=2.0,
                             method=f"quadrature-{angular}", beta=cm.beta)
    if not normalize:
        return profile
    rmax = wf.support_radius(160.0) + 2.0 * math.sqrt(160.0 / cm.beta)
    total, _ = adaptive_quad(
        lambda r: 2.0 * math.pi * r * _density_point(wf, cm.beta, r, angular, tol_abs, tol_rel),
        0.0, rmax, tol_abs=1e-9, tol_rel=1e-8, limit=200,
        points=[1.0 / math.sqrt(wf.omega)])
    scale = 2.0 / total
    return DensityProfile(grid=grid, values=values * scale, normalization_target=2.0,
                          method=profile.method, beta=cm.beta, scale_applied=scale)


@dataclass(frozen=True)
class ClosedFormDensityCase:
    """One cataloged density expression.

    value(r) = exp(-gauss r^2) * [Pe(r^2) + sign sqrt(root_factor pi)
               (P0(r^2) i0e(bessel_scale r^2) + P1(r^2) i1e(bessel_scale r^2))],
    already rewritten with scaled Bessels sharing one Gaussian, so it is finite
    for every r. Prefactors are unnormalized; normalization is applied on
    evaluation. branch_Z records the Coulomb sign of the wavefunction whose
    convolved density the expression reproduces; for n3m0Zp1 that is Z = -1
    even though the case id carries the conventional +1 label (the id is kept
    verbatim; the comparison pipeline pairs it with the matching branch).
    """

    case_id: str
    n: int
    m: int
    branch_Z: int
    gauss: float
    bessel_scale: float
    root_factor: float
    pe: tuple
    p0: tuple
    p1: tuple
    sign: int

    def raw(self, r):
        r = np.asarray(r, dtype=float)
        r2 = r * r
        pe = np.polynomial.polynomial.polyval(r2, self.pe)
        p0 = np.polynomial.polynomial.polyval(r2, self.p0)
        p1 = np.polynomial.polynomial.polyval(r2, self.p1)
        root = math.sqrt(self.root_factor * math.pi)
        z = self.bessel_scale * r2
        out = np.exp(-self.gauss * r2) * (
            pe + self.sign * root * (p0 * _sf.i0e(z) + p1 * _sf.i1e(z)))
        return out if out.ndim else float(out)

    @property
    def omega(self) -> float:
        """Trap frequency of the matching branch."""
        if self.n == 2:
            return 1.0 / (2 * (2 * self.m + 1))
        return 1.0 / (4 * (4 * self.m + 3))

    def branch(self) -> QuantizationBranch:
        return solve_frequencies(self.n, self.m, self.branch_Z)[0]


CATALOG: dict[str, ClosedFormDensityCase] = {
    c.case_id: c for c in (
        ClosedFormDensityCase(
            case_id="n2m0Zp1", n=2, m=0, branch_Z=+1,
            gauss=2 / 5, bessel_scale=1 / 20, root_factor=10.0,
            pe=(65.0, 4.0), p0=(10.0, 1.0), p1=(0.0, 1.0), sign=+1),
        ClosedFormDensityCase(
            case_id="n2m0Zm1", n=2, m=0, branch_Z=-1,
            gauss=2 / 5, bessel_scale=1 / 20, root_factor=10.0,
            pe=(65.0, 4.0), p0=(10.0, 1.0), p1=(0.0, 1.0), sign=-1),
        ClosedFormDensityCase(
            case_id="n2m1Zp1", n=2, m=1, branch_Z=+1,
            gauss=2 / 15, bessel_scale=1 / 60, root_factor=30.0,
            pe=(13950.0, 705.0, 4.0), p0=(1350.0, 90.0, 1.0), p1=(0.0, 60.0, 1.0), sign=+1),
        ClosedFormDensityCase(
            case_id="n3m0Zp1", n=3, m=0, branch_Z=-1,
            gauss=1 / 15, bessel_scale=1 / 120, root_factor=15.0,
            pe=(106425.0, 2160.0, 4.0), p0=(15300.0, 435.0, 2.0), p1=(0.0, 315.0, 2.0), sign=-1),
    )
}


def closed_form_density(case, grid=None) -> DensityProfile:
    """Evaluate a cataloged expression on the grid, normalized to 2 particles."""
    if isinstance(case, str):
        try:
            case = CATALOG[case]
        except KeyError:
            raise KeyError(f"unknown density case {case!r}; have {sorted(CATALOG)}") from None
    if grid is None:
        grid = default_grid(case.omega)
    grid = np.asarray(grid, dtype=float)
    rmax = math.sqrt(140.0 / case.gauss)
    total, _ = adaptive_quad(lambda r: 2.0 * math.pi * r * case.raw(r), 0.0, rmax,
                             tol_abs=1e-12, tol_rel=1e-11, limit=300)
    scale = 2.0 / total
    return DensityProfile(grid=grid, values=case.raw(grid) * scale,
                          normalization_target=2.0, method="closed-form",
                          beta=None, scale_applied=scale)


@dataclass(frozen=True)
class CmWidthFit:
    """Fitted center-of-mass Gaussian width against a reference profile."""

    beta: float
    beta_convention: float
    objective: float

    @property
    def matches_convention(self) -> bool:
        return abs(self.beta - self.beta_convention) <= 1e-3 * self.beta_convention


def fit_cm_width(wf: RadialWavefunction, reference, *, r_max: float = 6.0,
                 n_points: int = 25, bounds: tuple | None = None) -> CmWidthFit:
    """Width beta that best matches `reference(r)` (a normalized density callable).

    The convolved density at the fitted beta is compared on a coarse grid by
    relative RMS deviation; the convention value beta = 4 omega_tilde (the
    trap's CM ground-state width at zero field) is reported alongside.
    """
    pts = np.linspace(0.0, r_max, n_points)
    ref = np.asarray([reference(float(r)) for r in pts])
    mask = ref >= 1e-6 * ref.max()
    if bounds is None:
        bounds = (wf.omega / 10.0, 10.0 * wf.omega)

    def objective(beta: float) -> float:
        q = np.array([_density_point(wf, beta, float(r), "bessel", 1e-13, 1e-10)
                      for r in pts])
        rel = (q[mask] - ref[mask]) / ref[mask]
        return float(np.sqrt(np.mean(rel * rel)))

    res = _sciopt.minimize_scalar(objective, bounds=bounds, method="bounded",
                                  options={"xatol": 1e-7 * wf.omega})
    return CmWidthFit(beta=float(res.x), beta_convention=4.0 * wf.omega,
                      objective=float(res.fun))


@dataclass(frozen=True)
class DensityComparison:
    """Closed-form vs quadrature densities for one cataloged case."""

    case_id: str
    grid: np.ndarray
    closed_values: np.ndarray
    quadrature_values: np.ndarray
    max_rel_deviation: float
    fit: CmWidthFit | None
    beta_used: float


def compare_density_routes(case, grid=None, *, fit_width: bool = True,
                           angular: str = "bessel") -> DensityComparison:
    """Evaluate both density routes for a cataloged case and measure agreement.

    Deviation is the max relative difference where the density is at least
    1e-8 of its peak. With fit_width the CM width is fitted to the closed
    form; otherwise beta = omega_tilde (the width the catalog profiles carry).
    """
    if isinstance(case, str):
        case = CATALOG[case]
    if grid is None:
        grid = np.linspace(0.0, 8.0, 81)
    grid = np.asarray(grid, dtype=float)
    wf = build_wavefunction(case.branch())
    closed = closed_form_density(case, grid)
    scale = closed.scale_applied

    fit = None
    if fit_width:
        fit = fit_cm_width(wf, lambda r: case.raw(r) * scale)
        beta = fit.beta
    else:
        beta = wf.omega
    quad_vals = np.array([_density_point(wf, beta, float(r), angular, 1e-15, 1e-12)
                          for r in grid])
    peak = quad_vals.max()
    mask = quad_vals >= 1e-8 * peak
    dev = float(np.max(np.abs(quad_vals[mask] - closed.values[mask]) / quad_vals[mask]))
    return DensityComparison(case_id=case.case_id, grid=grid,
                             closed_values=closed.values, quadrature_values=quad_vals,
                             max_rel_deviation=dev, fit=fit, beta_used=beta)


@dataclass(frozen=True)
class EntropyProfile:
    """Radial entropy-density samples and the state's total position entropy.

    values hold S_G(r) = -G ln G in the radial convention G = u^2/r (the form
    whose origin value distinguishes the cataloged states); total is the
    planar Shannon entropy -int G ln G d^2r of the normalized G = u^2/(2 pi r).
    """

    grid: np.ndarray
    values: np.ndarray
    total: float


def _entropy_pointwise(g):
    g = np.asarray(g, dtype=float)
    safe = np.where(g > 0.0, g, 1.0)
    out = -safe * np.log(safe)
    out = np.where(g > 0.0, out, 0.0)
    return out if out.ndim else float(out)


def entropy_density(source, grid=None) -> EntropyProfile:
    """Entropy-density profile S_G(r) = -G ln G with 0 ln 0 = 0.

    Accepts a PairCorrelation or a RadialWavefunction.
    """
    wf = source.wf if isinstance(source, PairCorrelation) else source
    if grid is None:
        grid = default_grid(wf.omega)
    grid = np.asarray(grid, dtype=float)
    vals = _entropy_pointwise(wf.density_radial(grid))
    return EntropyProfile(grid=grid, values=vals, total=total_entropy(wf))


@dataclass(frozen=True)
class EntropySurface:
    """Cartesian grid of S_G values for surface plots."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray


def entropy_surface(wf: RadialWavefunction, extent: float | None = None,
                    points: int = 201) -> EntropySurface:
    """S_G on a points x points Cartesian grid over [-extent, extent]^2."""
    if extent is None:
        extent = 12.0 / math.sqrt(wf.omega)
    axis = np.linspace(-extent, extent, points)
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    R = np.hypot(X, Y)
    vals = _entropy_pointwise(wf.density_radial(R))
    return EntropySurface(x=axis, y=axis, values=vals)


def _polynomial_node_hints(wf: RadialWavefunction) -> list[float]:
    if wf.poly.degree < 1:
        return []
    rational, irrational = real_roots(wf.poly)
    return [float(r) for r in rational if r > 0] + [r for r in irrational if r > 0]


def total_entropy(wf: RadialWavefunction, *, tol_abs: float = 1e-10,
                  tol_rel: float = 1e-9) -> float:
    """Position-space Shannon entropy S = -int u^2 ln(u^2/(2 pi r)) dr.

    This is the planar integral -int G ln G d^2r reduced to the radius. The
    ln(1/r) factor at the origin is integrable; the piece below r0 is taken in
    the variable t = ln r where the integrand decays exponentially.
    """
    w = wf.omega

    def f(r: float) -> float:
        g_rad = wf.density_radial(r)
        if g_rad <= 0.0:
            return 0.0
        return -g_rad * r * math.log(g_rad / (2.0 * math.pi))

    r0 = 0.05 / math.sqrt(w)
    t_lo = -60.0 / (2.0 * wf.m_abs + 1.0)
    near, _ = adaptive_quad(lambda t: f(math.exp(t)) * math.exp(t),
                            t_lo + math.log(r0), math.log(r0),
                            tol_abs=tol_abs / 2, tol_rel=tol_rel)
    rmax = wf.support_radius(140.0)
    hints = [h for h in _polynomial_node_hints(wf) if r0 < h < rmax]
    far, _ = adaptive_quad(f, r0, rmax, tol_abs=tol_abs / 2, tol_rel=tol_rel,
                           limit=400, points=hints + [1.0 / math.sqrt(w)])
    return near + far


@dataclass(frozen=True)
class EntropyScanRow:
    m: int
    omega: float
    Z: float
    entropy: float


def entropy_scan(n: int, m_values, Z_values) -> list[EntropyScanRow]:
    """Total entropy for every branch over the (m, Z) lattice, sorted by omega.

    One row per branch (n >= 4 contributes several rows per pair); ties in
    omega are broken by Z then m so the table order is reproducible.
    """
    rows = []
    for m in m_values:
        for Z in Z_values:
            for branch in solve_frequencies(n, m, Z):
                wf = build_wavefunction(branch)
                rows.append(EntropyScanRow(m=m, omega=branch.omega_tilde, Z=float(Z),
                                           entropy=total_entropy(wf)))
    rows.sort(key=lambda r: (r.omega, r.Z, r.m))
    return rows
