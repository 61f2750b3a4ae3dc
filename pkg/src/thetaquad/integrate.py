"""Reference integration, composite rules with budgets, sharpness harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import bounds
from .errors import CapabilityError, ConvergenceError, ValidationError
from .kernel import RuleSpec, build_kernel, kernel_stats_brute, kernel_stats_closed
from .poly import PiecewisePolynomial
from .rules import Integrand, apply_rule

__all__ = [
    "DEFAULT_ORACLE_TOL",
    "MAX_ORACLE_PANELS",
    "CompositeResult",
    "SharpnessReport",
    "reference_integral",
    "true_error",
    "composite_integrate",
    "sharpness_check",
    "extremal_integrand",
]

#: Default stopping tolerance of the reference oracle.
DEFAULT_ORACLE_TOL = 1e-12

#: Panel cap of the reference oracle; exceeding it raises ConvergenceError.
MAX_ORACLE_PANELS = 4096

_GL_ORDER = 15
_GL_NODES, _GL_WEIGHTS = (arr.tolist() for arr in np.polynomial.legendre.leggauss(_GL_ORDER))

#: Composite certificate kinds accepted by composite_integrate.
COMPOSITE_CERTIFICATES = ("l1", "l2", "linf", "band", "sharp")


def _gl_panel(f: Integrand, lo: float, hi: float) -> float:
    half = 0.5 * (hi - lo)
    center = 0.5 * (hi + lo)
    return half * math.fsum(
        w * f.eval_derivative(0, center + half * x)
        for x, w in zip(_GL_NODES, _GL_WEIGHTS)
    )


def _panel_edges(a: float, b: float, panels: int) -> list[float]:
    h = (b - a) / panels
    edges = [a + i * h for i in range(panels)]
    edges.append(b)
    return edges


def reference_integral(
    f: Integrand, a: float, b: float, tol: float = DEFAULT_ORACLE_TOL
) -> float:
    """Adaptive panel-halving Gauss-Legendre reference value of int_a^b f.

    Fixed 15-node panels on a uniform grid that is halved until two
    successive refinements differ by less than ``tol * (1 + |result|)``.
    The refinement order is deterministic, so identical inputs give
    bit-identical output.  Hitting MAX_ORACLE_PANELS without meeting the
    criterion raises ConvergenceError.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValidationError("integration bounds must be finite")
    if b < a:
        raise ValidationError(f"need a <= b, got a={a!r}, b={b!r}")
    if b == a:
        return 0.0
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValidationError(f"tol must be positive, got {tol!r}")

    previous = _gl_panel(f, a, b)
    panels = 2
    while panels <= MAX_ORACLE_PANELS:
        edges = _panel_edges(a, b, panels)
        value = math.fsum(_gl_panel(f, lo, hi) for lo, hi in zip(edges, edges[1:]))
        if abs(value - previous) < tol * (1.0 + abs(value)):
            return value
        previous = value
        panels *= 2
    raise ConvergenceError(
        f"reference integral did not stabilize to tol={tol!r} within "
        f"{MAX_ORACLE_PANELS} panels"
    )


def true_error(
    f: Integrand,
    spec: RuleSpec,
    perturbed: bool = False,
    tol: float = DEFAULT_ORACLE_TOL,
) -> float:
    """|I - F_n| against the reference oracle; optionally the perturbed rule.

    With ``perturbed`` (even n only) the perturbation term joins the rule
    value, matching what perturbed-rule certificates bound.
    """
    if perturbed and spec.n % 2 != 0:
        raise ValidationError("perturbed=True requires even n")
    reference = reference_integral(f, spec.a, spec.b, tol=tol)
    result = apply_rule(f, spec)
    value = result.f_n_value
    if perturbed:
        value += result.perturbation_term or 0.0
    return abs(reference - value)


@dataclass(frozen=True)
class CompositeResult:
    """Composite rule value plus its per-panel certificate budgets.

    The certified statement is always |int_a^b f - value| <= total_bound:
    when the chosen certificate covers the perturbed rule, each panel's
    perturbation term is already folded into value.
    """

    value: float
    panels: int
    per_panel_bound: tuple[float, ...]
    total_bound: float
    certificate_kind: str


def _panel_certificate(
    f: Integrand,
    pspec: RuleSpec,
    certificate: str,
    norms: bounds.NormData | None,
    band: bounds.DerivativeBand | None,
) -> bounds.ErrorCertificate:
    def need_norm(field: str) -> float:
        if norms is None or getattr(norms, field) is None:
            raise ValidationError(
                f"certificate {certificate!r} needs NormData.{field}"
            )
        return getattr(norms, field)

    provenance = norms.provenance if norms is not None else "user-supplied"
    if certificate == "l1":
        return bounds.bound_l1(pspec, need_norm("l1"), provenance=provenance)
    if certificate == "l2":
        return bounds.bound_l2(pspec, need_norm("l2"), provenance=provenance)
    if certificate == "linf":
        return bounds.bound_linf(pspec, need_norm("linf"), provenance=provenance)
    if certificate == "sharp":
        return bounds.bound_sharp(pspec, need_norm("sigma"), provenance=provenance)
    if certificate == "band":
        if band is None:
            raise ValidationError("certificate 'band' needs a DerivativeBand")
        if pspec.n % 2 == 1:
            return bounds.bound_band_odd(pspec, band)
        # Even n: one-sided perturbed certificates; take the tighter valid side.
        order = pspec.n - 1
        if f.max_order is not None and f.max_order < order:
            raise CapabilityError(
                f"even-n band certificate needs derivative order {order}"
            )
        rate = (
            f.eval_derivative(order, pspec.b) - f.eval_derivative(order, pspec.a)
        ) / pspec.width
        candidates = []
        if math.isfinite(band.gamma) and rate >= band.gamma:
            candidates.append(
                bounds.bound_perturbed_even(pspec, "lower", band.gamma, rate)
            )
        if math.isfinite(band.Gamma) and band.Gamma >= rate:
            candidates.append(
                bounds.bound_perturbed_even(pspec, "upper", band.Gamma, rate)
            )
        if not candidates:
            raise ValidationError(
                "no valid side for the even-n band certificate: the rate "
                f"{rate!r} violates the supplied band"
            )
        return min(candidates, key=lambda cert: cert.bound)
    raise ValidationError(
        f"unknown certificate kind {certificate!r}; "
        f"expected one of {COMPOSITE_CERTIFICATES}"
    )


def composite_integrate(
    f: Integrand,
    spec: RuleSpec,
    panels: int,
    certificate: str = "linf",
    *,
    norms: bounds.NormData | None = None,
    band: bounds.DerivativeBand | None = None,
) -> CompositeResult:
    """Apply the rule on a uniform partition and budget each panel.

    Norm inputs are global for [a, b] and reused on every panel; that is
    conservative because every norm a certificate consumes can only shrink
    on a subinterval (sigma included: the panel-centred variance is at most
    the interval variance).  The endpoint rates that one-sided even-n
    certificates need are computed exactly per panel from f's derivative
    closures.  Panel values and budgets are reduced in ascending panel order
    with compensated summation.
    """
    if not isinstance(panels, int) or isinstance(panels, bool) or panels < 1:
        raise ValidationError(f"panels must be an int >= 1, got {panels!r}")
    edges = _panel_edges(spec.a, spec.b, panels)
    values: list[float] = []
    budgets: list[float] = []
    for lo, hi in zip(edges, edges[1:]):
        pspec = replace(spec, a=lo, b=hi)
        result = apply_rule(f, pspec)
        cert = _panel_certificate(f, pspec, certificate, norms, band)
        value = result.f_n_value
        if cert.covers_perturbed_rule:
            value += result.perturbation_term or 0.0
        values.append(value)
        budgets.append(cert.bound)
    return CompositeResult(
        value=math.fsum(values),
        panels=panels,
        per_panel_bound=tuple(budgets),
        total_bound=math.fsum(budgets),
        certificate_kind=certificate,
    )


@dataclass(frozen=True)
class SharpnessReport:
    """Did the sharp bound attain equality on its extremal integrand?

    lhs is the attained error measure computed by brute force from the
    kernel polynomial, rhs the closed-form sharp bound evaluated at
    sigma(K); ratio = lhs / rhs should be 1 up to roundoff.  When the
    end-to-end reconstruction runs, end_to_end_error is the oracle-measured
    rule error of the reconstructed integrand (also equal to rhs in exact
    arithmetic), otherwise None.
    """

    n: int
    theta: float
    a: float
    b: float
    lhs: float
    rhs: float
    ratio: float
    end_to_end_error: float | None = None


def extremal_integrand(spec: RuleSpec) -> Integrand:
    """The integrand on which the sharp bound is attained.

    Its n-th derivative IS the kernel of ``spec``.  Construction: f^(n-1) is
    the order-(n+1) kernel (same theta), shifted for even n by the constant
    -+ (b-a)^(n+1) (1/(n+1) - theta) / (n! 2^(n+1)) on the left/right
    segment so that f^(n) picks up no mean offset; lower derivatives follow
    by repeated continuous antidifferentiation.
    """
    n = spec.n
    upper = build_kernel(replace(spec, n=n + 1))
    if n % 2 == 0:
        s = (
            spec.width ** (n + 1)
            / (math.factorial(n) * 2.0 ** (n + 1))
            * (1.0 / (n + 1) - spec.theta)
        )
        left, right = upper.segments
        upper = PiecewisePolynomial(
            upper.breakpoints,
            ((left[0] - s,) + left[1:], (right[0] + s,) + right[1:]),
        )

    by_order: list[PiecewisePolynomial] = [upper]  # starts at order n-1
    for _ in range(n - 1):
        by_order.insert(0, by_order[0].antiderivative(0.0))
    by_order.append(by_order[-1].derivative())  # order n: the kernel itself

    def derivative_fn(order: int, x: float) -> float:
        return by_order[order].eval(x)

    return Integrand(derivative_fn=derivative_fn, domain=(spec.a, spec.b), max_order=n)


def sharpness_check(
    spec: RuleSpec,
    end_to_end: bool = False,
    tol: float = DEFAULT_ORACLE_TOL,
) -> SharpnessReport:
    """Verify the sharp bound attains equality for the kernel-shaped integrand.

    The attained error measure is int K^2 for odd n and
    int K^2 - (1/(b-a))(int K)^2 for even n, both evaluated by brute force
    from the kernel polynomial; the closed-form sharp bound at sigma(K)
    (taken from the closed kernel stats) must match it.  With ``end_to_end``
    (n <= 4 only) the extremal integrand is reconstructed by repeated
    antidifferentiation and pushed through apply_rule and the oracle, and
    the measured rule error is reported as well.
    """
    brute = kernel_stats_brute(spec)
    closed = kernel_stats_closed(spec)
    if spec.n % 2 == 1:
        lhs = brute.l2_sq
        sigma_closed = closed.l2_sq
    else:
        lhs = abs(brute.l2_sq - brute.integral**2 / spec.width)
        sigma_closed = max(closed.l2_sq - closed.integral**2 / spec.width, 0.0)
    rhs = bounds.bound_sharp(spec, sigma_closed, provenance="exact").bound

    e2e: float | None = None
    if end_to_end:
        if spec.n > 4:
            raise ValidationError(
                "end-to-end sharpness reconstruction is supported for n <= 4"
            )
        f = extremal_integrand(spec)
        e2e = true_error(f, spec, perturbed=(spec.n % 2 == 0), tol=tol)

    return SharpnessReport(
        n=spec.n,
        theta=spec.theta,
        a=spec.a,
        b=spec.b,
        lhs=lhs,
        rhs=rhs,
        ratio=lhs / rhs,
        end_to_end_error=e2e,
    )
