"""The scalar interference functional that drives the SINR distribution.

For a radially symmetric intensity Lambda and path-loss exponent alpha, the
functional is

    psi(gamma) = integral over the plane of Lambda(r) * gamma / (r^alpha + gamma)

written in polar form as int_0^inf 2*pi*Lambda(r)*r * gamma/(r^alpha+gamma) dr.
It is the only way the spatial model enters the SINR law, so this module
provides it two independent ways: fast closed forms per model family
(hypergeometric / cosecant expressions) and generic adaptive quadrature. The
closed forms are treated as accelerations that must match quadrature; the test
suite enforces the agreement.

All closed-form helpers take raw nominal parameters (not model objects), so
workflows that produce coefficient sets directly, like the polynomial-fit
pipeline, can call them without building a model. PsiEvaluator wraps a model
object, applies its beta scale, and picks the route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .intensity import (
    TWO_PI,
    DivergenceError,
    GaussianCluster,
    IntensityModel,
    PiecewisePowerLaw,
    PolynomialWithTail,
    PowerLaw,
)
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, hyp2f1_first_unit, integrate_radial

__all__ = [
    "PsiEvaluator",
    "psi_power_law",
    "psi_piecewise",
    "psi_polynomial",
    "psi_gaussian",
    "psi_quadrature",
    "psi_quadrature_radial",
    "psi_derivative",
]

# Split radius (in units of v) separating the Gaussian bulk from its
# exponential tail during quadrature.
GAUSSIAN_SPLIT_FACTOR = 6.0
# Piecewise segments closer than this to the outer-form pole at eps = alpha-2
# are evaluated with the disk form instead.
_POLE_MARGIN = 0.01
# Above this value of alpha*log(r), r**alpha is treated as dominating gamma.
_LOG_HUGE = 700.0


def _check_alpha(alpha: float) -> None:
    if not alpha > 2:
        raise ValueError(f"path-loss exponent alpha must exceed 2, got {alpha}")


def _check_gamma(gamma: float) -> None:
    if not gamma >= 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")


def _sinr_kernel(r: float, alpha: float, gamma: float) -> float:
    """gamma / (r**alpha + gamma), stable against r**alpha overflow."""
    if r == 0.0:
        return 1.0
    log_ra = alpha * math.log(r)
    if log_ra > _LOG_HUGE:
        # r^alpha dwarfs gamma; drop it from the denominator
        return gamma * math.exp(-log_ra)
    return gamma / (math.exp(log_ra) + gamma)


def _sinr_kernel_derivative(r: float, alpha: float, gamma: float) -> float:
    """r**alpha / (r**alpha + gamma)**2, the gamma-derivative of the kernel."""
    if r == 0.0:
        return 0.0
    log_ra = alpha * math.log(r)
    if log_ra > 0.0:
        y = math.exp(-log_ra)  # <= 1, no overflow anywhere below
        return y / (1.0 + gamma * y) ** 2
    x = math.exp(log_ra)
    return x / (x + gamma) ** 2


def psi_quadrature_radial(
    radial_fn: Callable[[float], float],
    alpha: float,
    gamma: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    breakpoints: Sequence[float] = (),
    upper: float = math.inf,
) -> float:
    """Interference functional of an arbitrary radial intensity profile.

    Integrates 2*pi*radial_fn(r)*r*gamma/(r^alpha+gamma) over (0, upper),
    splitting at the supplied breakpoints and at the kernel knee gamma^(1/alpha)
    where the integrand changes character.
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    if gamma == 0.0:
        return 0.0

    def integrand(r: float) -> float:
        k = _sinr_kernel(r, alpha, gamma)
        if k == 0.0:
            return 0.0
        return TWO_PI * float(radial_fn(r)) * r * k

    return _integrate_split(integrand, alpha, gamma, spec, breakpoints, upper)


def _integrate_split(integrand, alpha, gamma, spec, breakpoints, upper) -> float:
    knee = gamma ** (1.0 / alpha)
    pts = sorted({p for p in (*breakpoints, knee) if 0.0 < p < upper})
    edges = [0.0, *pts, upper]
    return math.fsum(
        integrate_radial(integrand, lo, hi, spec)
        for lo, hi in zip(edges[:-1], edges[1:])
    )


def _model_breakpoints(model: IntensityModel):
    """Natural integration split points and the support bound for a model."""
    if isinstance(model, PiecewisePowerLaw):
        edges = [s[2] for s in model.segments[:-1]]
        return edges, model.support_radius
    if isinstance(model, PolynomialWithTail):
        return [model.R0], math.inf
    if isinstance(model, GaussianCluster):
        return [GAUSSIAN_SPLIT_FACTOR * model.v], math.inf
    return [], math.inf


def psi_quadrature(
    model: IntensityModel,
    alpha: float,
    gamma: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Interference functional of a model by adaptive quadrature.

    The reference route: every closed form below is validated against this.
    Raises DivergenceError when the integral cannot converge (power law with
    eps >= alpha - 2).
    """
    _check_alpha(alpha)
    if isinstance(model, PowerLaw) and not model.eps < alpha - 2:
        raise DivergenceError(
            f"power-law interference diverges unless eps < alpha - 2 "
            f"(eps={model.eps}, alpha={alpha})"
        )
    breakpoints, upper = _model_breakpoints(model)
    return psi_quadrature_radial(
        model.radial_intensity, alpha, gamma, spec, breakpoints, upper
    )


def psi_power_law(rho: float, eps: float, alpha: float, gamma: float) -> float:
    """Closed form for the unbounded power law rho * r**eps.

    psi(gamma) = (2 pi^2 rho / alpha) * gamma^((eps+2)/alpha) / sin(pi (eps+2)/alpha),
    valid for -2 < eps < alpha - 2 (the open constraint keeps the cosecant
    away from its poles).
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    if not rho >= 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    if not -2.0 < eps < alpha - 2.0:
        raise DivergenceError(
            f"power-law interference requires -2 < eps < alpha - 2, got eps={eps}"
        )
    if gamma == 0.0:
        return 0.0
    c = (eps + 2.0) / alpha
    return (2.0 * math.pi**2 * rho / alpha) * gamma**c / math.sin(math.pi * c)


def _disk_term(rho: float, eps: float, alpha: float, gamma: float, radius: float) -> float:
    """Contribution of rho*r**eps over the disk (0, radius]; needs eps > -2."""
    b = (2.0 + eps) / alpha
    return (
        TWO_PI
        * rho
        * radius ** (2.0 + eps)
        / (2.0 + eps)
        * hyp2f1_first_unit(b, radius**alpha / gamma)
    )


def _outer_term(rho: float, eps: float, alpha: float, gamma: float, radius: float) -> float:
    """Contribution of rho*r**eps over (radius, inf); needs eps < alpha - 2."""
    c = (alpha - 2.0 - eps) / alpha
    return (
        TWO_PI
        * rho
        * gamma
        * radius ** (2.0 + eps - alpha)
        / (alpha - 2.0 - eps)
        * hyp2f1_first_unit(c, gamma * radius ** (-alpha))
    )


def psi_polynomial(
    coeffs: Sequence[float],
    R0: float,
    rho0: float,
    eps_tail: float,
    alpha: float,
    gamma: float,
) -> float:
    """Closed form for a polynomial profile on [0, R0] plus a power-law tail.

    The disk part contributes one hypergeometric term per coefficient,
    2*pi*a_k*R0^(2+k)/(2+k) * 2F1(1,(2+k)/alpha;(2+k)/alpha+1;-R0^alpha/gamma),
    and the tail rho0*r**eps_tail over (R0, inf) contributes the outer-region
    term. rho0 = 0 is allowed and drops the tail (a purely disk-supported
    profile).
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    if not R0 > 0:
        raise ValueError(f"R0 must be > 0, got {R0}")
    if not rho0 >= 0:
        raise ValueError(f"rho0 must be >= 0, got {rho0}")
    if rho0 > 0 and not -2.0 < eps_tail < -1.0:
        raise ValueError(
            f"eps_tail must lie strictly inside (-2, -1), got {eps_tail}"
        )
    if gamma == 0.0:
        return 0.0
    x = R0**alpha / gamma
    disk = 0.0
    for k, a in enumerate(coeffs):
        if a == 0.0:
            continue
        b = (2.0 + k) / alpha
        disk += a * R0 ** (2.0 + k) / (2.0 + k) * hyp2f1_first_unit(b, x)
    disk *= TWO_PI
    tail = 0.0
    if rho0 > 0:
        tail = _outer_term(rho0, eps_tail, alpha, gamma, R0)
    return disk + tail


def psi_piecewise(segments, alpha: float, gamma: float) -> float:
    """Closed form for concentric power-law annuli (zero beyond the support).

    Accepts a PiecewisePowerLaw or a raw sequence of (rho, eps, R) triples.
    Each annulus (a, b] is expressed as a difference of two hypergeometric
    terms, using the disk form when the exponent sits near or above the
    outer form's pole at eps = alpha - 2 and the outer form elsewhere; the
    two assemblies are algebraically identical where both converge.
    """
    _check_alpha(alpha)
    _check_gamma(gamma)
    if isinstance(segments, PiecewisePowerLaw):
        if segments.beta != 1.0:
            raise ValueError(
                "psi_piecewise takes nominal segments; apply beta via PsiEvaluator"
            )
        segs = segments.segments
    else:
        segs = PiecewisePowerLaw(tuple(segments)).segments
    if gamma == 0.0:
        return 0.0
    total = 0.0
    inner = 0.0
    for k, (rho, eps, outer) in enumerate(segs):
        if k == 0 or eps >= alpha - 2.0 - _POLE_MARGIN:
            term = _disk_term(rho, eps, alpha, gamma, outer)
            if inner > 0.0:
                term -= _disk_term(rho, eps, alpha, gamma, inner)
        else:
            term = _outer_term(rho, eps, alpha, gamma, inner) - _outer_term(
                rho, eps, alpha, gamma, outer
            )
        total += term
        inner = outer
    return total


def psi_gaussian(
    rho: float,
    v: float,
    alpha: float,
    gamma: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Interference functional of a Gaussian cluster, by split quadrature.

    No closed form is used here: adaptive quadrature with a split at 6v (to
    tame the exponential tail) is the designated evaluator for this family.
    """
    model = GaussianCluster(rho=rho, v=v)
    return psi_quadrature(model, alpha, gamma, spec)


@dataclass(frozen=True)
class PsiEvaluator:
    """Bundles a model with alpha and an evaluation route.

    method is one of "auto", "closed_form", "quadrature". Auto picks the
    closed form where one exists (power law, piecewise, polynomial) and
    quadrature otherwise; for the Gaussian cluster the designated closed-form
    route IS the split quadrature, so all three methods agree there.

    Immutable and shareable across threads; evaluations are pure.
    """

    model: IntensityModel
    alpha: float
    spec: QuadratureSpec = DEFAULT_QUADRATURE
    method: str = "auto"

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.method not in ("auto", "closed_form", "quadrature"):
            raise ValueError(
                f"method must be auto, closed_form or quadrature, got {self.method!r}"
            )
        if isinstance(self.model, PowerLaw) and not self.model.eps < self.alpha - 2:
            raise DivergenceError(
                "power-law interference requires eps < alpha - 2, got "
                f"eps={self.model.eps}, alpha={self.alpha}"
            )

    def value(self, gamma: float) -> float:
        """psi(gamma) via the configured route (includes the model's beta)."""
        _check_gamma(gamma)
        if gamma == 0.0:
            return 0.0
        m = self.model
        if self.method == "quadrature":
            return psi_quadrature(m, self.alpha, gamma, self.spec)
        if isinstance(m, PowerLaw):
            return m.beta * psi_power_law(m.rho, m.eps, self.alpha, gamma)
        if isinstance(m, PiecewisePowerLaw):
            return m.beta * psi_piecewise(m.segments, self.alpha, gamma)
        if isinstance(m, PolynomialWithTail):
            return m.beta * psi_polynomial(
                m.coeffs, m.R0, m.rho0, m.eps_tail, self.alpha, gamma
            )
        return psi_quadrature(m, self.alpha, gamma, self.spec)

    __call__ = value

    def derivative(self, gamma: float) -> float:
        """d psi / d gamma, analytic for the power law, quadrature otherwise.

        The quadrature route integrates the gamma-differentiated kernel
        2*pi*Lambda(r)*r*r^alpha/(r^alpha+gamma)^2 (differentiation under the
        integral sign; dominated convergence applies under the same
        constraints that make psi finite).
        """
        if not gamma > 0:
            raise ValueError(f"derivative requires gamma > 0, got {gamma}")
        m = self.model
        if isinstance(m, PowerLaw) and self.method != "quadrature":
            return self.value(gamma) * (m.eps + 2.0) / (self.alpha * gamma)

        def integrand(r: float) -> float:
            k = _sinr_kernel_derivative(r, self.alpha, gamma)
            if k == 0.0:
                return 0.0
            return TWO_PI * float(m.radial_intensity(r)) * r * k

        breakpoints, upper = _model_breakpoints(m)
        return _integrate_split(
            integrand, self.alpha, gamma, self.spec, breakpoints, upper
        )


def psi_derivative(evaluator: PsiEvaluator, gamma: float) -> float:
    """Derivative of the interference functional at gamma (> 0)."""
    return evaluator.derivative(gamma)
