"""Command-line front end.

    qcluster estimate --preset tfim --graph path:3 --beta 0.009
    qcluster compare --model model.json --beta 0.01,0.002 --epsilon 1e-4
    qcluster sweep --preset random_hermitian --graph cycle:5 --beta 0.009 --steps 10 --format csv

Exit codes: 0 success, 1 invalid input or region violation, 2 resource or
numerical failure, 3 ``compare`` exceeded the requested tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .cluster import METHODS, choose_truncation_order, estimate, evaluate_polynomial, expansion_coefficients
from .errors import ModelError, NumericError, RegionError, ResourceError
from .model import GRAPHS, PRESETS, load_model, preset, validate_beta
from .oracle import MAX_ORACLE_DIM, compare, exact_partition, relative_error, spectrum

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE, EXIT_COMPARE = 0, 1, 2, 3
SWEEP_COLUMNS = ["beta_re", "beta_im", "m", "t_m_re", "t_m_im", "apriori_error", "exact_available", "rel_error"]


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}") from None
    return complex(re, im)


def parse_graph(text: str) -> dict:
    """``path:N``, ``cycle:N``, ``grid:RxC`` or ``random_regular:N:K``."""
    kind, _, rest = text.partition(":")
    if kind not in GRAPHS:
        raise ModelError(f"unknown graph family {kind!r}; choose from {', '.join(GRAPHS)}")
    try:
        if kind == "grid":
            rows, _, cols = rest.partition("x")
            return {"graph": kind, "rows": int(rows), "cols": int(cols or rows)}
        if kind == "random_regular":
            n, _, k = rest.partition(":")
            return {"graph": kind, "n": int(n), "k": int(k or 3)}
        return {"graph": kind, "n": int(rest)}
    except ValueError:
        raise ModelError(f"malformed graph spec {text!r}") from None


def parse_params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or key not in ("J", "h", "jxy", "jz", "d"):
            raise ModelError(f"bad --param {item!r}; use J=, h=, jxy=, jz= or d=")
        out[key] = int(value) if key == "d" else float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcluster", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--model", metavar="PATH", help="model JSON file ('-' for stdin)")
    src.add_argument("--preset", choices=PRESETS)
    common.add_argument("--graph", default="path:2", help="path:N | cycle:N | grid:RxC | random_regular:N:K")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--param", action="append", metavar="KEY=VALUE", help="preset parameter (repeatable)")
    common.add_argument("--rescale", action="store_true", help="divide interactions by their largest norm")
    common.add_argument("--beta", type=parse_complex, default=complex(0.0), metavar="RE[,IM]")
    common.add_argument("--epsilon", type=float, default=1e-3)
    common.add_argument("--order", type=int, metavar="M", help="fix the truncation order")
    common.add_argument("--force-region", action="store_true", help="allow |beta| beyond 1/(e^4 Delta)")
    common.add_argument("--method", choices=METHODS, default="auto")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", metavar="PATH", help="write here instead of stdout")

    sub.add_parser("estimate", parents=[common], help="truncated cluster expansion")
    sub.add_parser("exact", parents=[common], help="exact diagonalization")
    sub.add_parser("compare", parents=[common], help="expansion versus exact result")
    sweep = sub.add_parser("sweep", parents=[common], help="expansion on the grid beta*k/steps, k=1..steps")
    sweep.add_argument("--steps", type=int, default=10)
    sub.add_parser("presets", help="list presets and graph families")
    return parser


def _model_from_args(args):
    if args.model:
        if args.model == "-":
            text = sys.stdin.read()
        else:
            with open(args.model) as fh:
                text = fh.read()
        return load_model(text, rescale=True if args.rescale else None)
    if not args.preset:
        raise ModelError("give either --model PATH or --preset NAME")
    kwargs = parse_graph(args.graph)
    kwargs.update(parse_params(args.param))
    return preset(args.preset, seed=args.seed, **kwargs)


def _c(z: complex) -> dict:
    return {"re": _finite(z.real), "im": _finite(z.imag)}


def _finite(x: float):
    return float(x) if math.isfinite(x) else None


def _model_summary(model) -> dict:
    return {
        "num_vertices": model.num_vertices,
        "num_edges": model.num_edges,
        "max_degree": model.max_degree,
        "d": model.d,
        "scale": model.scale,
    }


def _estimate_doc(res) -> dict:
    diag = {k: v for k, v in res.diagnostics.items() if k != "seconds"}
    return {
        "beta": _c(res.beta),
        "order": res.order,
        "t_m": _c(res.t_m),
        "apriori_error": res.apriori_error,
        "log_z": _c(res.log_z),
        "z_estimate": _c(res.z_estimate),
        "rigorous": res.rigorous,
        "diagnostics": diag,
    }


def _exact_doc(ex) -> dict:
    return {
        "beta": _c(ex.beta),
        "dim": ex.dim,
        "z": _c(ex.z),
        "log_z": _c(ex.log_z),
        "log_z_principal": _c(ex.log_z_principal),
        "eigenvalues": [float(x) for x in ex.eigenvalues],
    }


def _json_safe(value):
    # strict JSON has no inf/nan; they are written as null
    if isinstance(value, float):
        return _finite(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def _flatten(doc: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in doc.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "_"))
        elif isinstance(value, list):
            out[name] = " ".join(repr(x) for x in value)
        else:
            out[name] = value
    return out


def _render(doc, fmt: str, rows=None) -> str:
    if fmt == "json":
        return json.dumps(_json_safe(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"
    buf = io.StringIO()
    if rows is None:
        flat = _flatten(doc)
        rows, columns = [flat], list(flat)
    else:
        columns = SWEEP_COLUMNS
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _sweep(model, args):
    if args.steps < 1:
        raise ModelError("--steps must be >= 1")
    m = args.order or choose_truncation_order(model.num_vertices, args.epsilon)
    betas = [args.beta * k / args.steps for k in range(1, args.steps + 1)]
    for b in betas:
        spec = validate_beta(model, b)
        if not spec.in_region and not args.force_region:
            raise RegionError(
                f"|beta| = {abs(b):.6g} exceeds 1/(e^4 Delta) = {spec.radius_bound:.6g}; use --force-region"
            )
    coeffs, _ = expansion_coefficients(model, m, method=args.method, threads=args.threads)
    exact_ok = model.d ** model.num_vertices <= MAX_ORACLE_DIM
    lam = spectrum(model) if exact_ok else None
    rows = []
    for b in betas:
        t_m = evaluate_polynomial(coeffs, b)
        rel = None
        if exact_ok:
            log_z = model.num_vertices * math.log(model.d) + t_m
            rel = relative_error(log_z, exact_partition(model, b, eigenvalues=lam).log_z)
        rows.append({
            "beta_re": b.real, "beta_im": b.imag, "m": m,
            "t_m_re": t_m.real, "t_m_im": t_m.imag,
            "apriori_error": model.num_vertices * math.exp(-m),
            "exact_available": exact_ok, "rel_error": rel,
        })
    return {"order": m, "records": rows}, rows


def run(args) -> tuple[int, str]:
    """Execute parsed arguments; returns (exit status, rendered document)."""
    if args.command == "presets":
        doc = {"presets": list(PRESETS), "graphs": list(GRAPHS),
               "params": {"tfim": ["J", "h"], "xxz": ["jxy", "jz"], "random_hermitian": ["d"]}}
        return EXIT_OK, _render(doc, "json")
    if args.threads < 1:
        raise ModelError("--threads must be >= 1")
    if not args.epsilon > 0:
        raise ModelError("--epsilon must be positive")
    model = _model_from_args(args)
    doc = {"command": args.command, "model": _model_summary(model)}
    status = EXIT_OK
    rows = None
    if args.command == "estimate":
        res = estimate(model, args.beta, args.epsilon, override_region=args.force_region,
                       order=args.order, method=args.method, threads=args.threads)
        doc.update(_estimate_doc(res), epsilon=args.epsilon,
                   order_source="user" if args.order else "epsilon")
    elif args.command == "exact":
        doc.update(_exact_doc(exact_partition(model, args.beta)))
    elif args.command == "compare":
        cmp = compare(model, args.beta, args.epsilon, override_region=args.force_region,
                      order=args.order, method=args.method, threads=args.threads)
        doc.update(
            estimate=_estimate_doc(cmp.estimate),
            exact={k: v for k, v in _exact_doc(cmp.exact).items() if k != "eigenvalues"},
            relative_error=cmp.relative_error,
            epsilon=args.epsilon,
            passed=cmp.passed,
        )
        status = EXIT_OK if cmp.passed else EXIT_COMPARE
    elif args.command == "sweep":
        payload, rows = _sweep(model, args)
        doc.update(payload)
    if args.format == "csv" and args.command != "sweep":
        rows = None
    return status, _render(doc, args.format, rows)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        status, text = run(args)
    except (ModelError, RegionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ResourceError, NumericError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
