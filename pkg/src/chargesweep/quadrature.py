"""Thin wrapper over QUADPACK that turns non-convergence into an exception."""

from __future__ import annotations

import warnings

from scipy import integrate

from .errors import QuadratureError

DEFAULT_EPSABS = 1e-10
SUBDIVISION_CAP = 500


def adaptive_quad(f, a, b, points=None, epsabs=DEFAULT_EPSABS, epsrel=1e-10, limit=SUBDIVISION_CAP):
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    ``points`` (finite intervals only) are forced subdivision points.  A run
    that exhausts ``limit`` subdivisions or misses the tolerance raises
    :class:`QuadratureError` instead of returning the partial result.
    """
    if points is not None:
        points = sorted(p for p in points if a < p < b) or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, points=points, epsabs=epsabs, epsrel=epsrel,
                             limit=limit, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3:
        raise QuadratureError(
            "adaptive quadrature did not converge",
            achieved_error=float(err), value=float(val), a=float(a), b=float(b),
            detail=str(out[3]).splitlines()[0],
        )
    return val
