"""Command-line entry point.

Every subcommand prints an aligned human-readable table followed by a machine
report in JSON syntax; the machine report is the contract.  `--output FILE`
additionally writes the exact same report bytes to FILE.

Report document: {"tool", "version", "command" (argv echo), "params"
(resolved parameter echo), "payload" (subcommand result)}.  Re-running the
echoed command reproduces the payload byte-for-byte: the exact subcommands
are deterministic and the numeric ones draw all randomness from --seed.

Exit codes: 0 success, 2 usage (argparse), 3 input data, 4 numeric domain,
5 internal.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, jetpoly, reparam
from .curvature import (MetricParams, sym_coeffs_to_doc,
                        sym_power_metric_coeffs, tensor_from_doc)
from .errors import (DegreeError, InputDataError, NumericDomainError,
                     OrderOverflowError, SingularJetError)

_INPUT_ERRORS = (InputDataError, DegreeError, SingularJetError,
                 OrderOverflowError)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", metavar="FILE",
                   help="also write the machine report to FILE")


def _add_mc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True,
                   help="base dimension (must match the curvature file)")
    p.add_argument("--r", type=int, required=True,
                   help="fiber rank (must match the curvature file)")
    p.add_argument("--curvature", required=True, metavar="FILE",
                   help="curvature tensor document")
    p.add_argument("--samples", type=int, required=True,
                   help="Monte Carlo sample count")
    p.add_argument("--seed", type=int, required=True,
                   help="master RNG seed (all randomness flows from it)")
    p.add_argument("--p", type=int, default=None,
                   help="metric exponent (default: 2*lcm(1..k))")
    p.add_argument("--eps", default=None, metavar="LIST",
                   help="comma-separated level weights (default: 0.2^s)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker count; never changes numeric output")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None,
                   help="kernel backend override (default: JETCALC_BACKEND "
                        "environment variable, else numba)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetcalc",
        description="Exact jet-differential calculus and Monte Carlo "
                    "curvature volume integrals.")
    parser.add_argument("--version", action="version",
                        version=f"jetcalc {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("dim", help="fiber basis dimension by weighted degree")
    p.add_argument("--k", type=int, required=True, help="jet order")
    p.add_argument("--r", type=int, required=True, help="fiber rank")
    p.add_argument("--m", type=int, required=True, help="weighted degree")
    _add_output(p)

    p = sub.add_parser("delta", help="apply the formal derivative")
    p.add_argument("--poly", required=True, metavar="FILE",
                   help="polynomial document")
    _add_output(p)

    p = sub.add_parser("invariant-check",
                       help="decide reparametrization invariance exactly")
    p.add_argument("--poly", required=True, metavar="FILE",
                   help="polynomial document")
    _add_output(p)

    p = sub.add_parser("gen", help="invariant generator families")
    gen = p.add_subparsers(dest="family", required=True)

    g = gen.add_parser("wronskian", help="determinant of formal derivatives")
    g.add_argument("--components", nargs="+", required=True, metavar="FILE",
                   help="component polynomials in the base symbols z_i only")
    g.add_argument("--max-order", type=int, default=None,
                   help="jet-order budget (error if exceeded)")
    _add_output(g)

    g = gen.add_parser("bracket", help="weighted bracket of two invariants")
    g.add_argument("--p", required=True, metavar="FILE",
                   help="first polynomial document")
    g.add_argument("--q", required=True, metavar="FILE",
                   help="second polynomial document")
    _add_output(g)

    g = gen.add_parser("qk", help="bracket tower members at level k")
    g.add_argument("--k", type=int, required=True, help="tower level (>= 2)")
    g.add_argument("--r", type=int, required=True, help="fiber rank")
    _add_output(g)

    g = gen.add_parser("coords",
                       help="coordinate-change derivative numerators")
    g.add_argument("--k", type=int, required=True, help="jet order")
    g.add_argument("--r", type=int, required=True, help="fiber rank (>= 2)")
    _add_output(g)

    p = sub.add_parser("sym-coeffs",
                       help="curvature coefficients on a symmetric power")
    p.add_argument("--curvature", required=True, metavar="FILE",
                   help="curvature tensor document")
    p.add_argument("--l", type=int, required=True, help="symmetric power")
    _add_output(p)

    p = sub.add_parser("integrate",
                       help="Monte Carlo per-index curvature integrals")
    p.add_argument("--variant", choices=("gg", "inv"), required=True,
                   help="metric variant")
    p.add_argument("--k", type=int, required=True, help="jet order")
    _add_mc_flags(p)
    _add_output(p)

    p = sub.add_parser("scaling-report",
                       help="invariant-variant integrals for k = 1..kmax "
                            "with normalized ratios (diagnostic)")
    p.add_argument("--kmax", type=int, required=True,
                   help="largest jet order (>= 2)")
    _add_mc_flags(p)
    _add_output(p)
    return parser


def parse_request(argv) -> argparse.Namespace:
    request = build_parser().parse_args(argv)
    request.argv = list(argv)
    return request


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputDataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputDataError(f"{path} is not valid JSON: {exc}") from exc


def _load_poly(path: str) -> jetpoly.JetPolynomial:
    doc = _load_json(path)
    # accept a document produced by --output of a polynomial-valued
    # subcommand, so tool output can feed tool input directly
    if isinstance(doc, dict) and "terms" not in doc:
        payload = doc.get("payload")
        if isinstance(payload, dict) and isinstance(payload.get("poly"), dict):
            doc = payload["poly"]
    return jetpoly.from_doc(doc)


def _load_tensor(path: str, n: int | None = None, r: int | None = None):
    t = tensor_from_doc(_load_json(path))
    if n is not None and t.n != n:
        raise InputDataError(
            f"curvature file {path} has n={t.n} but --n is {n}")
    if r is not None and t.r != r:
        raise InputDataError(
            f"curvature file {path} has r={t.r} but --r is {r}")
    return t


def _parse_eps(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise InputDataError(
            f"--eps must be a comma-separated float list, got {text!r}"
        ) from exc
    if not values:
        raise InputDataError("--eps must not be empty")
    return values


def _metric_params(request, k: int) -> MetricParams:
    if request.p is None and request.eps is None:
        return MetricParams.default_for(k)
    default = MetricParams.default_for(k)
    p = request.p if request.p is not None else default.p
    eps = _parse_eps(request.eps) if request.eps is not None else default.eps
    params = MetricParams(p=p, eps=eps)
    params.validate_for(k)
    return params


def _table(headers: list, rows: list) -> list:
    """Aligned plain-text table lines."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row]
                                           for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines


def _poly_summary(P: jetpoly.JetPolynomial) -> str:
    text = repr(P)
    return text if len(text) <= 120 else text[:117] + "..."


def _witness_doc(w: reparam.InvarianceWitness) -> dict:
    return {
        "jet": w.jet.to_doc(),
        "xi": [[s, alpha, v.to_quad()]
               for (s, alpha), v in sorted(w.xi_values.items())],
        "z": [[i, v.to_quad()] for i, v in sorted(w.z_values.items())],
        "pullback_value": w.pullback_value.to_quad(),
        "scaled_value": w.scaled_value.to_quad(),
    }


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (params_echo, payload, human_lines)
# ---------------------------------------------------------------------------

def _run_dim(request):
    if request.k < 1 or request.r < 1 or request.m < 0:
        raise InputDataError(
            f"need k >= 1, r >= 1, m >= 0 (got k={request.k}, r={request.r}, "
            f"m={request.m})")
    value = jetpoly.dim_fiber(request.k, request.r, request.m)
    params = {"k": request.k, "r": request.r, "m": request.m}
    lines = _table(["k", "r", "m", "dim"],
                   [[request.k, request.r, request.m, value]])
    return params, {"dim": value}, lines


def _run_delta(request):
    P = _load_poly(request.poly)
    D = jetpoly.delta(P)
    payload = {"poly": jetpoly.to_doc(D)}
    lines = _table(
        ["", "order", "terms", "degrees"],
        [["input", P.order, len(P.terms),
          sorted(jetpoly.weighted_degree(P))],
         ["derivative", D.order, len(D.terms),
          sorted(jetpoly.weighted_degree(D))]])
    lines.append(f"derivative = {_poly_summary(D)}")
    return {"poly": request.poly}, payload, lines


def _run_invariant_check(request):
    P = _load_poly(request.poly)
    if P.is_zero():
        raise InputDataError(
            "invariance of the zero polynomial is undefined")
    report = reparam.invariance_weight(P)
    if report.invariant:
        payload = {"invariant": True, "weight": report.weight}
        lines = [f"invariant: yes    weight: {report.weight}"]
    else:
        w = report.witness
        payload = {"invariant": False, "witness": _witness_doc(w)}
        jet_text = ", ".join(f"a_{i}={c!r}"
                             for i, c in enumerate(w.jet.a, start=1))
        point = ", ".join(
            [f"xi({s},{al})={v!r}" for (s, al), v in sorted(w.xi_values.items())]
            + [f"z_{i}={v!r}" for i, v in sorted(w.z_values.items())])
        lines = [
            "invariant: no",
            f"witness jet: {jet_text}",
            f"witness point: {point or '(empty)'}",
            f"pullback value {w.pullback_value!r} != scaled value "
            f"{w.scaled_value!r}",
        ]
    return {"poly": request.poly}, payload, lines


def _generator_rows(pairs):
    """pairs: (label, polynomial) -> (payload list, table lines)."""
    payload = []
    rows = []
    for label, poly in pairs:
        weight = jetpoly.homogeneous_degree(poly)
        payload.append({"label": label, "weight": weight,
                        "poly": jetpoly.to_doc(poly)})
        rows.append([label, weight, len(poly.terms), _poly_summary(poly)])
    return payload, _table(["generator", "weight", "terms", "polynomial"],
                           rows)


def _run_gen(request):
    if request.family == "wronskian":
        comps = [_load_poly(path) for path in request.components]
        for path, comp in zip(request.components, comps):
            if any(m.xi or m.a for m in comp.terms):
                raise InputDataError(
                    f"wronskian component {path} must use the base symbols "
                    "z_i only")
        W = reparam.wronskian(comps, max_order=request.max_order)
        params = {"family": "wronskian", "components": list(request.components),
                  "max_order": request.max_order}
        if W.is_zero():
            payload = {"weight": None, "poly": jetpoly.to_doc(W)}
            lines = ["wronskian vanishes identically "
                     "(linearly dependent components)"]
        else:
            payload = {"weight": jetpoly.homogeneous_degree(W),
                       "poly": jetpoly.to_doc(W)}
            lines = _table(["entries", "weight", "terms", "polynomial"],
                           [[len(comps), payload["weight"], len(W.terms),
                             _poly_summary(W)]])
        return params, payload, lines

    if request.family == "bracket":
        P = _load_poly(request.p)
        Q = _load_poly(request.q)
        B = reparam.bracket(P, Q)
        params = {"family": "bracket", "p": request.p, "q": request.q}
        if B.is_zero():
            payload = {"weight": None, "poly": jetpoly.to_doc(B)}
            lines = ["bracket vanishes identically"]
        else:
            payload = {"weight": jetpoly.homogeneous_degree(B),
                       "poly": jetpoly.to_doc(B)}
            lines = _table(["weight", "terms", "polynomial"],
                           [[payload["weight"], len(B.terms),
                             _poly_summary(B)]])
        return params, payload, lines

    if request.family == "qk":
        if request.k < 2:
            raise InputDataError(
                f"the bracket tower starts at level 2, got k={request.k}")
        if request.r < 1:
            raise InputDataError(f"rank must be >= 1, got r={request.r}")
        members = reparam.qk_family(request.k, request.r)
        params = {"family": "qk", "k": request.k, "r": request.r}
        payload_rows, lines = _generator_rows(members)
        if not members:
            lines = [f"bracket tower is empty at k={request.k}, r={request.r}"]
        return params, {"members": payload_rows}, lines

    # coords
    if request.k < 1:
        raise InputDataError(f"jet order must be >= 1, got k={request.k}")
    if request.r < 2:
        raise InputDataError(
            f"coordinate numerators need rank >= 2, got r={request.r}")
    rows = reparam.invariant_coords(request.k, request.r)
    params = {"family": "coords", "k": request.k, "r": request.r}
    payload = {"rows": [{
        "j": row.j, "s": row.s, "weight": row.weight,
        "den_exponent": row.den_exponent,
        "numerator": jetpoly.to_doc(row.numerator),
    } for row in rows]}
    lines = _table(
        ["j", "s", "weight", "den_exp", "terms", "numerator"],
        [[row.j, row.s, row.weight, row.den_exponent,
          len(row.numerator.terms), _poly_summary(row.numerator)]
         for row in rows])
    return params, payload, lines


def _run_sym_coeffs(request):
    t = _load_tensor(request.curvature)
    if request.l < 1:
        raise InputDataError(
            f"symmetric power must be >= 1, got {request.l}")
    sp = sym_power_metric_coeffs(t, request.l)
    payload = sym_coeffs_to_doc(sp, t.n, t.r)
    lines = _table(
        ["l", "basis size", "nonzero entries"],
        [[sp.l, len(sp.basis), len(payload["C"])]])
    lines += _table(
        ["basis index", "multi-index", "scaling"],
        [[A + 1, alpha, f"{scale:.12g}"]
         for A, (alpha, scale) in enumerate(zip(sp.basis, sp.scalings))])
    return ({"curvature": request.curvature, "l": request.l},
            payload, lines)


def _mc_param_echo(request, k: int, params: MetricParams) -> dict:
    from .morse import backend as _backend
    return {
        "k": k, "n": request.n, "r": request.r,
        "curvature": request.curvature, "samples": request.samples,
        "seed": request.seed, "p": params.p, "eps": list(params.eps),
        "threads": request.threads,
        "backend": _backend.backend_name(request.backend),
    }


def _estimate_lines(est) -> list:
    rows = [[b.q, f"{b.value:+.9e}", f"{b.stderr:.3e}", b.count]
            for b in est.buckets]
    lines = _table(["q", "I_q", "stderr", "count"], rows)
    lines.append(f"degenerate samples: {est.degenerate}    "
                 f"prefactor: {est.prefactor}")
    lines.append(f"alternating sum:    {est.alternating:+.9e} "
                 f"(stderr {est.alternating_stderr:.3e})")
    lines.append(f"seed: {est.seed}    samples: {est.samples}")
    return lines


def _run_integrate(request):
    if request.k < 1:
        raise InputDataError(f"jet order must be >= 1, got k={request.k}")
    t = _load_tensor(request.curvature, request.n, request.r)
    params = _metric_params(request, request.k)
    from .morse.integrate import mc_integrate
    est = mc_integrate(t, request.k, params, request.variant,
                       request.samples, request.seed,
                       threads=request.threads, backend=request.backend)
    echo = _mc_param_echo(request, request.k, params)
    echo["variant"] = request.variant
    return echo, est.to_doc(), _estimate_lines(est)


def _run_scaling_report(request):
    if request.kmax < 2:
        raise InputDataError(
            f"scaling report needs kmax >= 2, got {request.kmax}")
    t = _load_tensor(request.curvature, request.n, request.r)
    params = _metric_params(request, request.kmax)
    from .morse.integrate import scaling_report, scaling_rows_to_doc
    rows = scaling_report(t, request.kmax, params, request.samples,
                          request.seed, threads=request.threads,
                          backend=request.backend)
    echo = _mc_param_echo(request, request.kmax, params)
    echo["kmax"] = request.kmax
    del echo["k"]
    table = _table(
        ["k", "I(k)", "stderr", "normalized ratio", "ratio stderr"],
        [[row.k, f"{row.alternating:+.9e}", f"{row.stderr:.3e}",
          "-" if row.ratio is None else f"{row.ratio:+.9e}",
          "-" if row.ratio_stderr is None else f"{row.ratio_stderr:.3e}"]
         for row in rows])
    table.append("diagnostic only: the normalized ratio tracks an asymptotic "
                 "statement; no pass/fail claim is made")
    return echo, scaling_rows_to_doc(rows), table


_HANDLERS = {
    "dim": _run_dim,
    "delta": _run_delta,
    "invariant-check": _run_invariant_check,
    "gen": _run_gen,
    "sym-coeffs": _run_sym_coeffs,
    "integrate": _run_integrate,
    "scaling-report": _run_scaling_report,
}


def run(request) -> tuple:
    """Dispatch a parsed request; returns (report_document, human_lines)."""
    params, payload, lines = _HANDLERS[request.subcommand](request)
    doc = {
        "tool": "jetcalc",
        "version": __version__,
        "command": getattr(request, "argv", []),
        "params": params,
        "payload": payload,
    }
    return doc, lines


def main(argv=None) -> int:
    request = parse_request(sys.argv[1:] if argv is None else list(argv))
    try:
        doc, lines = run(request)
    except _INPUT_ERRORS as exc:
        _emit_error(request, "input-data", exc)
        return 3
    except NumericDomainError as exc:
        _emit_error(request, "numeric-domain", exc)
        return 4
    except Exception as exc:  # noqa: BLE001 -- last-resort exit-code mapping
        _emit_error(request, "internal", exc)
        return 5
    for line in lines:
        print(line)
    text = json.dumps(doc, indent=2)
    print(text)
    if request.output:
        try:
            with open(request.output, "wb") as fh:
                fh.write((text + "\n").encode("utf-8"))
        except OSError as exc:
            _emit_error(request, "input-data", exc)
            return 3
    return 0


def _emit_error(request, kind: str, exc: Exception) -> None:
    doc = {
        "tool": "jetcalc",
        "version": __version__,
        "command": getattr(request, "argv", []),
        "error": {"kind": kind, "subcommand": request.subcommand,
                  "message": str(exc)},
    }
    print(json.dumps(doc, indent=2), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
