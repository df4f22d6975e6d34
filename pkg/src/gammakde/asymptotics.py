"""Leading-order accuracy theory for the derivative estimator.

Everything in this module is phrased against a reference density with
closed-form first and second derivatives (see refdens). The pointwise
mean-squared-error expansion drives a per-point bandwidth; integrating it
gives a global mean-integrated-squared-error expansion and three global
bandwidth selectors:

* a plug-in rule from the two leading MISE terms (closed form),
* a refined rule keeping the next-order variance correction (root of a
  transcendental residual),
* a density-oriented reference rule built from the squared second moment
  of x f''(x) (for comparison; it targets the density, not its slope).

Bandwidth powers follow from balancing squared bias O(b^2) against variance
O(n^-1 b^-3/2): the optimum scales as n^(-2/7) and the MSE there as n^(-4/7).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numerics
from .refdens import ReferenceDensity
from .specfun import log_gamma, stirling_ratio

__all__ = [
    "curvature_term",
    "bias_interior",
    "bias_boundary",
    "variance_leading",
    "squared_kernel_constant",
    "squared_kernel_constant_stirling",
    "mse_leading",
    "PointwiseBandwidth",
    "pointwise_optimal",
    "MiseIntegrals",
    "mise_integrals",
    "mise_leading",
    "global_bandwidth_plugin",
    "RefinedBandwidth",
    "refined_bandwidth",
    "chen_constants",
    "chen_bandwidth",
    "BandwidthConstants",
    "BandwidthReport",
    "bandwidth_report",
]

_SQRT_PI = math.sqrt(math.pi)
_ROOT_SCAN_EDGES = 201  # 200 log-spaced brackets over the scan interval
_ROOT_SCAN_LO = 1e-4
_ROOT_SCAN_HI = 1.0


def _check_n(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"sample size must be a positive integer, got {n!r}")
    return n


def _check_bandwidth(b: float) -> float:
    b = float(b)
    if not (math.isfinite(b) and b > 0.0):
        raise ValueError(f"bandwidth must be finite and > 0, got {b!r}")
    return b


def curvature_term(ref: ReferenceDensity, x) -> float | np.ndarray:
    """Squared curvature factor (f(x)/(3 x^2) + f''(x))^2 driving the bias.

    Accepts scalars or arrays with x > 0.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("curvature_term requires finite x > 0")
    term = ref.pdf(arr) / (3.0 * arr * arr) + ref.d2(arr)
    out = term * term
    if arr.ndim == 0:
        return float(out)
    return out


def bias_interior(ref: ReferenceDensity, x: float, b: float) -> float:
    """Leading bias of the derivative estimate away from the origin.

    bias = b (f(x) / (12 x^2) + f''(x) / 4), valid on x >= 2 b.

    Notes
    -----
    Monte Carlo moment checks show this expression misses the estimator's
    actual O(b) bias, which exact gamma-moment algebra puts at
    b (f''(x)/2 + x f'''(x)/2): the expression above drops the kernel's
    third central moment (2 x b^2), which survives at O(b) through the
    derivative kernel's 1/b prefactor. It is kept as the prediction under
    test, and the gap is surfaced rather than silently corrected; see
    asymptotic_moment_check and the acceptance suite.
    """
    b = _check_bandwidth(b)
    x = float(x)
    if not (math.isfinite(x) and x >= 2.0 * b):
        raise ValueError(f"interior bias requires x >= 2 b, got x={x!r}, b={b!r}")
    return b * (float(ref.pdf(x)) / (12.0 * x * x) + float(ref.d2(x)) / 4.0)


def bias_boundary(ref: ReferenceDensity, b: float, kappa: float) -> float:
    """Leading bias in the boundary regime x = kappa * b with kappa in (0, 2].

    bias = f'(kappa b) (3 kappa^2 - 6 kappa - 1) / (6 kappa)
           + b f''(kappa b) (7 kappa / 48 + kappa^2 / 2)

    At kappa = 2 the derivative coefficient is exactly -1/12.
    """
    b = _check_bandwidth(b)
    kappa = float(kappa)
    if not (math.isfinite(kappa) and 0.0 < kappa <= 2.0):
        raise ValueError(f"boundary regime requires kappa in (0, 2], got {kappa!r}")
    x = kappa * b
    slope_coef = (3.0 * kappa * kappa - 6.0 * kappa - 1.0) / (6.0 * kappa)
    curve_coef = 7.0 * kappa / 48.0 + kappa * kappa / 2.0
    return float(ref.d1(x)) * slope_coef + b * float(ref.d2(x)) * curve_coef


def variance_leading(ref: ReferenceDensity, x: float, b: float, n: int) -> float:
    """Leading variance of the derivative estimate away from the origin.

    var = (b^{-3/2} x^{-1/2} / (2 sqrt(pi) n))
          * (f(x) / (2 x) + b (f(x) / (4 x^2) - f'(x) / (4 x)))
    """
    b = _check_bandwidth(b)
    n = _check_n(n)
    x = float(x)
    if not (math.isfinite(x) and x >= 2.0 * b):
        raise ValueError(f"interior variance requires x >= 2 b, got x={x!r}, b={b!r}")
    f = float(ref.pdf(x))
    d1 = float(ref.d1(x))
    bracket = f / (2.0 * x) + b * (f / (4.0 * x * x) - d1 / (4.0 * x))
    return bracket / (2.0 * _SQRT_PI * n * b ** 1.5 * math.sqrt(x))


def squared_kernel_constant(x: float, b: float) -> float:
    """Normalization constant B(x, b) of the squared interior kernel.

    Squaring the interior gamma kernel with shape x/b and renormalizing to
    a gamma density with doubled rate yields

        B(x, b) = b^-5 x^2 Gamma(2 x / b - 1)
                  / (2^{2 x / b - 2} Gamma(x / b + 1)^2),

    equivalently (2 / b^2) * integral of the squared kernel. Evaluated in
    log space; requires x > b / 2 so the gamma arguments stay positive.
    """
    b = _check_bandwidth(b)
    x = float(x)
    if not (math.isfinite(x) and x > b / 2.0):
        raise ValueError(f"squared kernel constant requires x > b / 2, got {x!r}")
    rho = x / b
    log_value = (
        -5.0 * math.log(b)
        + 2.0 * math.log(x)
        + log_gamma(2.0 * rho - 1.0)
        - (2.0 * rho - 2.0) * math.log(2.0)
        - 2.0 * log_gamma(rho + 1.0)
    )
    return math.exp(log_value)


def squared_kernel_constant_stirling(x: float, b: float) -> float:
    """B(x, b) through Stirling ratios; an independent route for checking.

    B(x, b) = b^{-5/2} x^{-1/2} R(x/b)^2
              / (sqrt(pi) R(2 x / b) (1 - b / (2 x)))

    with R the stirling_ratio. The ratio factors tend to 1 as x/b grows, so
    B approaches b^{-5/2} x^{-1/2} / sqrt(pi); the variance-facing quantity
    B / 2 approaches b^{-5/2} x^{-1/2} / (2 sqrt(pi)), the constant seen in
    variance_leading.
    """
    b = _check_bandwidth(b)
    x = float(x)
    if not (math.isfinite(x) and x > b / 2.0):
        raise ValueError(f"squared kernel constant requires x > b / 2, got {x!r}")
    rho = x / b
    ratio = stirling_ratio(rho) ** 2 / stirling_ratio(2.0 * rho)
    return ratio / (_SQRT_PI * b ** 2.5 * math.sqrt(x) * (1.0 - b / (2.0 * x)))


def mse_leading(ref: ReferenceDensity, x: float, b: float, n: int) -> float:
    """Pointwise leading MSE: (b^2 / 16) curvature + leading variance."""
    return (b * b / 16.0) * float(curvature_term(ref, x)) + variance_leading(
        ref, x, b, n
    )


@dataclass(frozen=True)
class PointwiseBandwidth:
    """Optimal local bandwidth and the MSE value it achieves."""

    b_opt: float
    mse_opt: float


def pointwise_optimal(ref: ReferenceDensity, x: float, n: int) -> PointwiseBandwidth:
    """Minimize the two-term pointwise MSE in b at a fixed interior point.

    Balancing (b^2/16) P(x) against the leading variance term gives

        b_opt = (3 f(x) x^{-3/2} / (sqrt(pi) P(x)))^{2/7} n^{-2/7}

    and mse_opt = (A^2 P(x) / 16 + f(x) x^{-3/2} A^{-3/2} / (4 sqrt(pi)))
    n^{-4/7} where A is the n-free factor of b_opt.
    """
    n = _check_n(n)
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"pointwise_optimal requires x > 0, got {x!r}")
    p = float(curvature_term(ref, x))
    f = float(ref.pdf(x))
    if p <= 0.0 or f <= 0.0:
        raise ValueError(
            f"degenerate curvature or density at x={x!r}: P={p!r}, f={f!r}"
        )
    x_m32 = x ** -1.5
    a = (3.0 * f * x_m32 / (_SQRT_PI * p)) ** (2.0 / 7.0)
    b_opt = a * n ** (-2.0 / 7.0)
    mse_opt = (
        a * a * p / 16.0 + f * x_m32 * a ** -1.5 / (4.0 * _SQRT_PI)
    ) * n ** (-4.0 / 7.0)
    return PointwiseBandwidth(b_opt=b_opt, mse_opt=mse_opt)


@dataclass(frozen=True)
class MiseIntegrals:
    """The three reference-density integrals the global rules consume.

    curvature:  integral of the squared curvature factor
    mass:       integral of x^{-3/2} f(x)
    correction: integral of x^{-3/2} (f(x)/x - f'(x))
    """

    curvature: float
    mass: float
    correction: float


def mise_integrals(ref: ReferenceDensity, rel_tol: float = 1e-10) -> MiseIntegrals:
    """Evaluate the global integrals; diverging ones raise IntegrationError."""
    curvature = numerics.integrate_semi_infinite(
        lambda t: curvature_term(ref, t), rel_tol
    ).value
    mass = numerics.integrate_semi_infinite(
        lambda t: t ** -1.5 * ref.pdf(t), rel_tol
    ).value
    correction = numerics.integrate_semi_infinite(
        lambda t: t ** -1.5 * (ref.pdf(t) / t - ref.d1(t)), rel_tol
    ).value
    return MiseIntegrals(curvature=curvature, mass=mass, correction=correction)


def mise_leading(
    ref: ReferenceDensity,
    b: float,
    n: int,
    *,
    integrals: MiseIntegrals | None = None,
) -> float:
    """Leading MISE of the derivative estimate at bandwidth b.

    mise = (b^2 / 16) * curvature
           + (b^{-3/2} / (4 sqrt(pi) n)) * (mass + (b/2) * correction)
    """
    b = _check_bandwidth(b)
    n = _check_n(n)
    ints = integrals if integrals is not None else mise_integrals(ref)
    variance_part = ints.mass + 0.5 * b * ints.correction
    return (b * b / 16.0) * ints.curvature + variance_part / (
        4.0 * _SQRT_PI * n * b ** 1.5
    )


def global_bandwidth_plugin(
    ref: ReferenceDensity,
    n: int,
    *,
    integrals: MiseIntegrals | None = None,
) -> float:
    """Closed-form minimizer of the two leading MISE terms.

    b0 = (3 mass / (sqrt(pi) curvature))^{2/7} n^{-2/7}
    """
    n = _check_n(n)
    ints = integrals if integrals is not None else mise_integrals(ref)
    if ints.curvature <= 0.0:
        raise ValueError("degenerate curvature integral; no plug-in bandwidth")
    ratio = 3.0 * ints.mass / (_SQRT_PI * ints.curvature)
    return ratio ** (2.0 / 7.0) * n ** (-2.0 / 7.0)


@dataclass(frozen=True)
class RefinedBandwidth:
    """Root-based refinement of the plug-in bandwidth.

    residual is the stationarity function whose roots are candidate
    bandwidths; roots lists every sign-change root found on the scan
    interval and b_refined is the one with the lowest leading MISE.
    """

    b_refined: float
    residual: Callable[[float], float]
    roots: tuple[float, ...]


def refined_bandwidth(
    ref: ReferenceDensity,
    n: int,
    *,
    integrals: MiseIntegrals | None = None,
) -> RefinedBandwidth:
    """Keep the next-order variance correction and solve for stationarity.

    The residual whose root is sought is

        (b / 8) curvature - (3 / (8 sqrt(pi) n)) b^{-5/2} mass
                          + (1 / (16 sqrt(pi) n)) b^{-3/2} correction

    solved on (1e-4, 1) by scanning 200 log-spaced brackets and bisecting
    each sign change.
    """
    n = _check_n(n)
    ints = integrals if integrals is not None else mise_integrals(ref)
    coef_b = ints.curvature / 8.0
    coef_bm52 = 3.0 * ints.mass / (8.0 * _SQRT_PI * n)
    coef_bm32 = ints.correction / (16.0 * _SQRT_PI * n)

    def residual(b: float) -> float:
        return coef_b * b - coef_bm52 * b ** -2.5 + coef_bm32 * b ** -1.5

    edges = np.logspace(
        math.log10(_ROOT_SCAN_LO), math.log10(_ROOT_SCAN_HI), _ROOT_SCAN_EDGES
    )
    values = np.array([residual(e) for e in edges])
    roots: list[float] = []
    for lo, hi, v_lo, v_hi in zip(edges[:-1], edges[1:], values[:-1], values[1:]):
        if v_lo == 0.0:
            roots.append(float(lo))
        elif v_lo * v_hi < 0.0:
            roots.append(numerics.find_root(residual, float(lo), float(hi), 1e-13))
    if values[-1] == 0.0:
        roots.append(float(edges[-1]))
    if not roots:
        raise numerics.NoRootError(
            "stationarity residual has no sign change on "
            f"({_ROOT_SCAN_LO:g}, {_ROOT_SCAN_HI:g}): endpoints "
            f"{values[0]:.6e} and {values[-1]:.6e}"
        )
    best = min(roots, key=lambda r: mise_leading(ref, r, n, integrals=ints))
    return RefinedBandwidth(b_refined=best, residual=residual, roots=tuple(roots))


def chen_constants(
    ref: ReferenceDensity, rel_tol: float = 1e-10
) -> tuple[float, float]:
    """Constants (V, beta) of the density-oriented reference rule.

    V = (1 / (2 sqrt(pi))) integral of x^{-1/2} f(x)
    beta = integral of (x f''(x))^2
    """
    v = numerics.integrate_semi_infinite(
        lambda t: np.sqrt(1.0 / t) * ref.pdf(t), rel_tol
    ).value / (2.0 * _SQRT_PI)
    beta = numerics.integrate_semi_infinite(
        lambda t: (t * ref.d2(t)) ** 2, rel_tol
    ).value
    return v, beta


def chen_bandwidth(ref: ReferenceDensity, n: int) -> float:
    """Density-oriented reference bandwidth b = (V / beta)^{2/5} n^{-2/5}."""
    n = _check_n(n)
    v, beta = chen_constants(ref)
    if beta <= 0.0:
        raise ValueError("degenerate curvature (beta = 0); no reference bandwidth")
    return (v / beta) ** 0.4 * n ** -0.4


@dataclass(frozen=True)
class BandwidthConstants:
    """Audit constants behind a bandwidth report.

    numerator_27 and denominator_27 rebuild the plug-in bandwidth as
    (numerator_27 / denominator_27) * n_pow; the coef_* fields are the
    refinement-residual coefficients and (V, beta) the reference-rule pair.
    """

    numerator_27: float
    denominator_27: float
    n_pow: float
    coef_b: float
    coef_bm52: float
    coef_bm32: float
    V: float
    beta: float


@dataclass(frozen=True)
class BandwidthReport:
    """All three global bandwidths for one (density, n) pair."""

    n: int
    b_plugin: float
    b_refined: float
    b_chen: float
    constants: BandwidthConstants


def bandwidth_report(
    ref: ReferenceDensity, n: int, *, rel_tol: float = 1e-10
) -> BandwidthReport:
    """Compute all selectors and the constants needed to audit them."""
    n = _check_n(n)
    ints = mise_integrals(ref, rel_tol)
    v, beta = chen_constants(ref, rel_tol)
    b_plugin = global_bandwidth_plugin(ref, n, integrals=ints)
    refined = refined_bandwidth(ref, n, integrals=ints)
    if beta <= 0.0:
        raise ValueError("degenerate curvature (beta = 0); no reference bandwidth")
    b_chen = (v / beta) ** 0.4 * n ** -0.4
    constants = BandwidthConstants(
        numerator_27=(3.0 * ints.mass / _SQRT_PI) ** (2.0 / 7.0),
        denominator_27=ints.curvature ** (2.0 / 7.0),
        n_pow=n ** (-2.0 / 7.0),
        coef_b=ints.curvature / 8.0,
        coef_bm52=3.0 * ints.mass / (8.0 * _SQRT_PI * n),
        coef_bm32=ints.correction / (16.0 * _SQRT_PI * n),
        V=v,
        beta=beta,
    )
    return BandwidthReport(
        n=n,
        b_plugin=b_plugin,
        b_refined=refined.b_refined,
        b_chen=b_chen,
        constants=constants,
    )
