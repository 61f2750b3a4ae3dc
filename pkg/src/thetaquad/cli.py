"""Command-line interface.

Subcommands: ``integrate`` (composite rule + optional certificate + true
error), ``bound`` (certificate only), ``kernel`` (closed-form kernel stats,
optionally cross-checked by brute force), ``sweep`` (plot-ready CSV over a
theta grid) and ``sharpness`` (attainment check of the sharp bound).

Output is a JSON record {schema_version, command, inputs, results} (CSV on
request, and always CSV for sweep).  Numbers are emitted through Python's
shortest round-trip repr, so every value parses back to the identical float
and identical invocations produce byte-identical output.  Exit codes:
0 success, 2 validation/usage error, 3 oracle non-convergence.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys

import argparse

from . import bounds as bounds_mod
from .errors import ConvergenceError, ThetaQuadError, ValidationError
from .functions import AnalyticFunction, parse_function
from .integrate import (
    DEFAULT_ORACLE_TOL,
    composite_integrate,
    reference_integral,
    sharpness_check,
    true_error,
)
from .kernel import RuleSpec, kernel_stats_brute, kernel_stats_closed
from .rules import apply_rule, preset

__all__ = ["run_cli", "main"]

SCHEMA_VERSION = "1"

ORACLE_TOL_ENV = "THETAQUAD_ORACLE_TOL"

BOUND_CHOICES = ("l1", "l2", "linf", "band", "sharp")


def _oracle_tol() -> float:
    raw = os.environ.get(ORACLE_TOL_ENV)
    if raw is None:
        return DEFAULT_ORACLE_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValidationError(f"{ORACLE_TOL_ENV} must be a float, got {raw!r}") from None
    if not math.isfinite(tol) or tol <= 0.0:
        raise ValidationError(f"{ORACLE_TOL_ENV} must be positive, got {raw!r}")
    return tol


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetaquad",
        description="Blended midpoint/trapezoid/Simpson quadrature with error certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_interval(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, required=True, help="derivative order of the rule")
        p.add_argument("--a", type=float, required=True, help="left endpoint")
        p.add_argument("--b", type=float, required=True, help="right endpoint")

    def add_theta(p: argparse.ArgumentParser, with_rule: bool = False) -> None:
        p.add_argument("--theta", type=float, help="blend parameter in [0, 1]")
        if with_rule:
            p.add_argument(
                "--rule",
                help="named preset: midpoint | trapezoid | simpson | averaged",
            )

    def add_norm_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--l1", type=float, help="||f^(n)||_1 override")
        p.add_argument("--l2", type=float, help="||f^(n)||_2 override")
        p.add_argument("--linf", type=float, help="||f^(n)||_inf override")
        p.add_argument("--gamma", type=float, help="lower band edge of f^(n)")
        p.add_argument("--Gamma", dest="Gamma", type=float, help="upper band edge of f^(n)")
        p.add_argument("--sigma", type=float, help="sigma(f^(n)) override")
        p.add_argument(
            "--rate", type=float, help="endpoint difference rate of f^(n-1) override"
        )

    p_int = sub.add_parser("integrate", help="composite rule value, certificate, true error")
    p_int.add_argument("--f", required=True, help="integrand: exp | sin | runge | poly:c0,c1,...")
    add_interval(p_int)
    add_theta(p_int, with_rule=True)
    p_int.add_argument("--panels", type=int, default=1, help="uniform panel count")
    p_int.add_argument(
        "--perturbed",
        action="store_true",
        help="include the even-n perturbation term in the rule value",
    )
    p_int.add_argument("--bound", choices=BOUND_CHOICES, help="certificate kind")
    add_norm_flags(p_int)
    p_int.add_argument("--format", choices=("json", "csv"), default="json")

    p_bnd = sub.add_parser("bound", help="emit a certificate without integrating")
    p_bnd.add_argument("--f", help="integrand supplying exact norms when flags are absent")
    add_interval(p_bnd)
    add_theta(p_bnd, with_rule=True)
    p_bnd.add_argument("--bound", choices=BOUND_CHOICES, required=True)
    add_norm_flags(p_bnd)

    p_ker = sub.add_parser("kernel", help="closed-form kernel statistics")
    add_interval(p_ker)
    add_theta(p_ker)
    p_ker.add_argument(
        "--brute-force",
        action="store_true",
        help="add brute-force cross-check values computed from the kernel polynomial",
    )

    p_swp = sub.add_parser("sweep", help="CSV sweep of value/error/bounds over a theta grid")
    p_swp.add_argument("--f", required=True, help="integrand: exp | sin | runge | poly:c0,c1,...")
    add_interval(p_swp)
    p_swp.add_argument(
        "--theta-grid",
        required=True,
        help="start:step:end inclusive grid of blend parameters",
    )

    p_shp = sub.add_parser("sharpness", help="attainment check of the sharp bound")
    add_interval(p_shp)
    add_theta(p_shp)
    p_shp.add_argument(
        "--end-to-end",
        action="store_true",
        help="also reconstruct the extremal integrand (n <= 4) and measure its error",
    )

    return parser


def _resolve_theta(args: argparse.Namespace) -> float:
    rule = getattr(args, "rule", None)
    if rule is not None and args.theta is not None:
        raise ValidationError("pass either --theta or --rule, not both")
    if rule is not None:
        return preset(rule)
    if args.theta is None:
        raise ValidationError("one of --theta or --rule is required")
    return args.theta


def _record(command: str, inputs: dict, results: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
    }


def _print_json(record: dict) -> None:
    sys.stdout.write(json.dumps(record, indent=2) + "\n")


def _csv_text(header: list[str], rows: list[list[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _certificate_payload(cert: bounds_mod.ErrorCertificate) -> dict:
    out: dict = {
        "bound": cert.bound,
        "theorem": cert.theorem.value,
        "covers_perturbed_rule": cert.covers_perturbed_rule,
        "rigor": cert.rigor,
    }
    kind = cert.theorem
    if kind is bounds_mod.CertificateKind.BAND_ODD:
        out["gamma"] = cert.band.gamma
        out["Gamma"] = cert.band.Gamma
    elif kind.value.startswith(("OneSided", "PerturbedEven")):
        side = "lower" if kind.value.endswith("Lower") else "upper"
        edge = cert.band.gamma if side == "lower" else cert.band.Gamma
        out["side"] = side
        out["band_edge"] = edge
        out["endpoint_diff_rate"] = cert.norms.endpoint_diff_rate
    elif kind is bounds_mod.CertificateKind.L1:
        out["l1"] = cert.norms.l1
    elif kind is bounds_mod.CertificateKind.L2:
        out["l2"] = cert.norms.l2
    elif kind is bounds_mod.CertificateKind.LINF:
        out["linf"] = cert.norms.linf
    else:
        out["sigma"] = cert.norms.sigma
    return out


def _assemble_inputs(
    args: argparse.Namespace,
    fn: AnalyticFunction | None,
    spec: RuleSpec,
    kind: str,
) -> tuple[bounds_mod.NormData | None, bounds_mod.DerivativeBand | None]:
    """Norm/band inputs for a certificate: explicit flags beat exact metadata."""
    n, a, b = spec.n, spec.a, spec.b

    def exact_norms() -> bounds_mod.NormData:
        if fn is None:
            raise ValidationError(
                f"certificate {kind!r} needs an explicit norm flag or --f"
            )
        return fn.norm_data(n, a, b)

    if kind == "band":
        if args.gamma is not None and args.Gamma is not None:
            return None, bounds_mod.DerivativeBand(args.gamma, args.Gamma, order=n)
        if args.gamma is not None or args.Gamma is not None:
            raise ValidationError("band certificates need both --gamma and --Gamma")
        if fn is None:
            raise ValidationError("certificate 'band' needs --gamma/--Gamma or --f")
        return None, fn.band(n, a, b)

    flag = {"l1": args.l1, "l2": args.l2, "linf": args.linf, "sharp": args.sigma}[kind]
    if flag is not None:
        field = {"l1": "l1", "l2": "l2", "linf": "linf", "sharp": "sigma"}[kind]
        return bounds_mod.NormData(**{field: flag}, provenance="user-supplied"), None
    return exact_norms(), None


def _cmd_integrate(args: argparse.Namespace) -> None:
    fn = parse_function(args.f)
    theta = _resolve_theta(args)
    spec = RuleSpec(theta=theta, n=args.n, a=args.a, b=args.b)
    integrand = fn.integrand(args.a, args.b)
    tol = _oracle_tol()

    perturbed = args.perturbed
    inputs: dict = {
        "f": args.f,
        "n": args.n,
        "theta": theta,
        "a": spec.a,
        "b": spec.b,
        "panels": args.panels,
        "oracle_tol": tol,
    }

    if args.bound is not None:
        norms, band = _assemble_inputs(args, fn, spec, args.bound)
        composite = composite_integrate(
            integrand, spec, args.panels, certificate=args.bound, norms=norms, band=band
        )
        covers = args.bound in ("band", "sharp") and spec.n % 2 == 0
        if perturbed and not covers:
            raise ValidationError(
                f"--perturbed is not covered by --bound {args.bound}; "
                "the certificate bounds the plain rule error"
            )
        perturbed = covers  # composite already folded the perturbation in
        value = composite.value
        reference = reference_integral(integrand, spec.a, spec.b, tol=tol)
        results = {
            "value": value,
            "true_error": abs(reference - value),
            "bound": composite.total_bound,
            "certificate": args.bound,
        }
    else:
        if perturbed and spec.n % 2 != 0:
            raise ValidationError("--perturbed requires even n")
        from .integrate import _panel_edges  # shared uniform grid helper

        edges = _panel_edges(spec.a, spec.b, args.panels)
        values = []
        for lo, hi in zip(edges, edges[1:]):
            from dataclasses import replace

            result = apply_rule(integrand, replace(spec, a=lo, b=hi))
            v = result.f_n_value
            if perturbed:
                v += result.perturbation_term or 0.0
            values.append(v)
        value = math.fsum(values)
        reference = reference_integral(integrand, spec.a, spec.b, tol=tol)
        results = {"value": value, "true_error": abs(reference - value)}

    inputs["perturbed"] = perturbed
    if args.bound is not None:
        inputs["bound"] = args.bound
    record = _record("integrate", inputs, results)
    if args.format == "csv":
        sys.stdout.write(
            _csv_text(list(results.keys()), [list(results.values())])
        )
    else:
        _print_json(record)


def _cmd_bound(args: argparse.Namespace) -> None:
    fn = parse_function(args.f) if args.f is not None else None
    theta = _resolve_theta(args)
    spec = RuleSpec(theta=theta, n=args.n, a=args.a, b=args.b)
    kind = args.bound

    if kind == "band":
        _, band = _assemble_inputs(args, fn, spec, kind)
        if spec.n % 2 == 1:
            cert = bounds_mod.bound_band_odd(spec, band)
        else:
            if args.rate is not None:
                rate = args.rate
            elif fn is not None:
                rate = fn.endpoint_diff_rate(spec.n, spec.a, spec.b)
            else:
                raise ValidationError("even-n band certificates need --rate or --f")
            candidates = []
            if math.isfinite(band.gamma) and rate >= band.gamma:
                candidates.append(
                    bounds_mod.bound_perturbed_even(spec, "lower", band.gamma, rate)
                )
            if math.isfinite(band.Gamma) and band.Gamma >= rate:
                candidates.append(
                    bounds_mod.bound_perturbed_even(spec, "upper", band.Gamma, rate)
                )
            if not candidates:
                raise ValidationError(
                    f"the rate {rate!r} violates the supplied band; no valid side"
                )
            cert = min(candidates, key=lambda c: c.bound)
    else:
        norms, _ = _assemble_inputs(args, fn, spec, kind)
        provenance = norms.provenance
        if kind == "l1":
            cert = bounds_mod.bound_l1(spec, norms.l1, provenance=provenance)
        elif kind == "l2":
            cert = bounds_mod.bound_l2(spec, norms.l2, provenance=provenance)
        elif kind == "linf":
            cert = bounds_mod.bound_linf(spec, norms.linf, provenance=provenance)
        else:
            cert = bounds_mod.bound_sharp(spec, norms.sigma, provenance=provenance)

    inputs = {
        "n": args.n,
        "theta": theta,
        "a": spec.a,
        "b": spec.b,
        "bound": kind,
    }
    if args.f is not None:
        inputs["f"] = args.f
    _print_json(_record("bound", inputs, _certificate_payload(cert)))


def _cmd_kernel(args: argparse.Namespace) -> None:
    theta = _resolve_theta(args)
    spec = RuleSpec(theta=theta, n=args.n, a=args.a, b=args.b)
    closed = kernel_stats_closed(spec)
    results: dict = {
        "integral": closed.integral,
        "abs_integral": closed.abs_integral,
        "max_abs": closed.max_abs,
        "l2_sq": closed.l2_sq,
    }
    if closed.centered_max_abs is not None:
        results["centered_max"] = closed.centered_max_abs
    if args.brute_force:
        brute = kernel_stats_brute(spec)
        brute_out: dict = {
            "integral": brute.integral,
            "abs_integral": brute.abs_integral,
            "max_abs": brute.max_abs,
            "l2_sq": brute.l2_sq,
        }
        if brute.centered_max_abs is not None:
            brute_out["centered_max"] = brute.centered_max_abs
        results["brute"] = brute_out
    inputs = {
        "n": args.n,
        "theta": theta,
        "a": spec.a,
        "b": spec.b,
        "brute_force": bool(args.brute_force),
    }
    _print_json(_record("kernel", inputs, results))


def _parse_theta_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"--theta-grid expects start:step:end, got {text!r}")
    try:
        start, step, end = (float(p) for p in parts)
    except ValueError:
        raise ValidationError(f"--theta-grid expects floats, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(step) and math.isfinite(end)):
        raise ValidationError("--theta-grid values must be finite")
    if step <= 0.0 or end < start:
        raise ValidationError("--theta-grid needs step > 0 and end >= start")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    grid = [min(start + i * step, end) for i in range(count)]
    if any(not 0.0 <= t <= 1.0 for t in grid):
        raise ValidationError("--theta-grid must stay inside [0, 1]")
    return grid


def _cmd_sweep(args: argparse.Namespace) -> None:
    fn = parse_function(args.f)
    grid = _parse_theta_grid(args.theta_grid)
    integrand = fn.integrand(args.a, args.b)
    tol = _oracle_tol()
    even = args.n % 2 == 0

    header = ["theta", "f_n", "true_error", "bound_l1", "bound_l2", "bound_linf",
              "bound_band", "bound_sharp"]
    if even:
        header += ["perturbation", "perturbed_error"]

    first_spec = RuleSpec(theta=grid[0], n=args.n, a=args.a, b=args.b)
    reference = reference_integral(integrand, first_spec.a, first_spec.b, tol=tol)
    norms = fn.norm_data(args.n, first_spec.a, first_spec.b)
    band = fn.band(args.n, first_spec.a, first_spec.b)

    rows = []
    for theta in grid:
        spec = RuleSpec(theta=theta, n=args.n, a=args.a, b=args.b)
        result = apply_rule(integrand, spec)
        row: list[object] = [theta, result.f_n_value, abs(reference - result.f_n_value)]
        row.append(bounds_mod.bound_l1(spec, norms.l1, provenance="exact").bound)
        row.append(bounds_mod.bound_l2(spec, norms.l2, provenance="exact").bound)
        row.append(bounds_mod.bound_linf(spec, norms.linf, provenance="exact").bound)
        if even:
            rate = norms.endpoint_diff_rate
            sides = []
            if rate >= band.gamma:
                sides.append(bounds_mod.bound_perturbed_even(spec, "lower", band.gamma, rate))
            if band.Gamma >= rate:
                sides.append(bounds_mod.bound_perturbed_even(spec, "upper", band.Gamma, rate))
            row.append(min(c.bound for c in sides))
        else:
            row.append(bounds_mod.bound_band_odd(spec, band).bound)
        row.append(bounds_mod.bound_sharp(spec, norms.sigma, provenance="exact").bound)
        if even:
            perturbation = result.perturbation_term or 0.0
            row.append(perturbation)
            row.append(abs(reference - result.f_n_value - perturbation))
        rows.append(row)
    sys.stdout.write(_csv_text(header, rows))


def _cmd_sharpness(args: argparse.Namespace) -> None:
    theta = _resolve_theta(args)
    spec = RuleSpec(theta=theta, n=args.n, a=args.a, b=args.b)
    report = sharpness_check(spec, end_to_end=args.end_to_end, tol=_oracle_tol())
    results = {"lhs": report.lhs, "rhs": report.rhs, "ratio": report.ratio}
    if report.end_to_end_error is not None:
        results["end_to_end_error"] = report.end_to_end_error
    inputs = {
        "n": args.n,
        "theta": theta,
        "a": spec.a,
        "b": spec.b,
        "end_to_end": bool(args.end_to_end),
    }
    _print_json(_record("sharpness", inputs, results))


_DISPATCH = {
    "integrate": _cmd_integrate,
    "bound": _cmd_bound,
    "kernel": _cmd_kernel,
    "sweep": _cmd_sweep,
    "sharpness": _cmd_sharpness,
}


def run_cli(argv: list[str]) -> int:
    """Parse and execute one invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own message
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        _DISPATCH[args.command](args)
    except ConvergenceError as exc:
        sys.stderr.write(f"thetaquad: convergence error: {exc}\n")
        return 3
    except (ThetaQuadError, ValueError) as exc:
        sys.stderr.write(f"thetaquad: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
