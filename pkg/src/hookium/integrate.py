"""Adaptive quadrature with an enforced error budget."""

from __future__ import annotations

import warnings

import scipy.integrate

__all__ = ["QuadratureNonConvergence", "adaptive_quad"]


class QuadratureNonConvergence(RuntimeError):
    """The integrator could not certify the requested tolerance."""


def adaptive_quad(f, a, b, *, tol_abs=1e-12, tol_rel=1e-10, limit=300, points=None):
    """Integrate f on [a, b]; returns (value, error_estimate).

    Raises QuadratureNonConvergence when the reported error estimate exceeds
    max(tol_abs, tol_rel * |value|). Interior breakpoints may be passed via
    points to help the subdivision.
    """
    kwargs = dict(limit=limit, epsabs=tol_abs, epsrel=tol_rel)
    if points is not None:
        kwargs["points"] = [p for p in points if a < p < b]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        value, err = scipy.integrate.quad(f, a, b, **kwargs)
    if err > max(tol_abs, tol_rel * abs(value)):
        raise QuadratureNonConvergence(
            f"integral error estimate {err:.3e} exceeds budget "
            f"(tol_abs={tol_abs:.3e}, tol_rel={tol_rel:.3e}, value={value:.6e})"
        )
    return value, err
