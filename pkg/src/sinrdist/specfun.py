"""Special functions and adaptive quadrature used by the closed forms.

Everything here is pure and reentrant. Only the special-function shapes
actually needed by the SINR closed forms are exposed; in particular the
Gauss hypergeometric function is restricted to the first-parameter-1 shape
2F1(1, b; b+1; -x), which is the only one the interference integrals
produce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import scipy.integrate
import scipy.special

__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "AccuracyError",
    "ln_gamma",
    "regularized_upper_gamma",
    "hyp2f1_first_unit",
    "integrate_radial",
]

# Branch point for regularized_upper_gamma: below both limits the value is a
# short Poisson sum evaluated in the log domain; above, the continued-fraction
# implementation in scipy.special.gammaincc takes over.
POISSON_SUM_MAX_L = 64
POISSON_SUM_MAX_X = 700.0


class AccuracyError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and its error bound so callers can
    decide whether to proceed anyway.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature.

    The defaults are tight enough that quadrature results can serve as the
    reference for validating the closed forms.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.abs_tol < 0:
            raise ValueError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )


DEFAULT_QUADRATURE = QuadratureSpec()


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if x <= 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def regularized_upper_gamma(L: int, x: float) -> float:
    """Upper regularized gamma Q(L, x) = Gamma(L, x) / Gamma(L) for integer L.

    For integer first argument this equals the Poisson CDF identity
    sum_{k<L} exp(-x) x^k / k!, which is evaluated as a log-domain sum for
    small (L, x); larger arguments go through scipy's continued-fraction
    implementation. The two branches agree to well below 1e-12 (covered by a
    cross-branch test).
    """
    if not isinstance(L, (int,)) or isinstance(L, bool):
        if isinstance(L, float) and L.is_integer():
            L = int(L)
        else:
            raise ValueError(f"antenna count L must be a positive integer, got {L!r}")
    if L < 1:
        raise ValueError(f"antenna count L must be >= 1, got {L}")
    if x < 0:
        raise ValueError(f"regularized_upper_gamma requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if L <= POISSON_SUM_MAX_L and x <= POISSON_SUM_MAX_X:
        log_x = math.log(x)
        log_terms = [-x + k * log_x - math.lgamma(k + 1) for k in range(L)]
        m = max(log_terms)
        s = math.fsum(math.exp(t - m) for t in log_terms)
        return min(1.0, math.exp(m) * s)
    return float(scipy.special.gammaincc(L, x))


def hyp2f1_first_unit(b: float, x: float) -> float:
    """Gauss hypergeometric 2F1(1, b; b+1; -x) for b > 0, x >= 0.

    This is the only hypergeometric shape the interference closed forms need.
    Backed by scipy.special.hyp2f1, which converges for all x >= 0 here; the
    degenerate b = 1 case (where scipy loses precision for very large x) is
    the elementary identity 2F1(1, 1; 2; -x) = log(1+x)/x.
    """
    if b <= 0:
        raise ValueError(f"hyp2f1_first_unit requires b > 0, got {b}")
    if x < 0:
        raise ValueError(f"hyp2f1_first_unit requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if b == 1.0:
        return math.log1p(x) / x
    return float(scipy.special.hyp2f1(1.0, b, b + 1.0, -x))


def integrate_radial(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Adaptive quadrature of f over [lower, upper], upper may be math.inf.

    Semi-infinite ranges are mapped onto [0, 1) with the fixed substitution
    r = lower + t/(1-t) (endpoints are never evaluated, so integrable endpoint
    singularities are fine). Raises AccuracyError when the reported error
    bound exceeds max(abs_tol, rel_tol * |result|) within max_subdivisions.
    """
    if lower < 0:
        raise ValueError(f"integrate_radial requires lower >= 0, got {lower}")
    if upper < lower:
        raise ValueError(f"upper ({upper}) must be >= lower ({lower})")
    if upper == lower:
        return 0.0

    if math.isinf(upper):
        a = lower

        def transformed(t: float) -> float:
            u = 1.0 - t
            return f(a + t / u) / (u * u)

        integrand, lo, hi = transformed, 0.0, 1.0
    else:
        integrand, lo, hi = f, lower, upper

    out = scipy.integrate.quad(
        integrand,
        lo,
        hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    result, abserr = out[0], out[1]
    tol = max(spec.abs_tol, spec.rel_tol * abs(result))
    if abserr > tol:
        raise AccuracyError(
            f"quadrature did not converge on [{lower}, {upper}]: "
            f"estimate {result!r} with error bound {abserr!r} exceeds {tol!r}",
            estimate=result,
            error_bound=abserr,
        )
    return result
