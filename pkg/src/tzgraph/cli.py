"""Command line interface: graph files in, machine-readable reports out.

Graph file format (line oriented, ``#`` starts a comment):

    vertex <label> <mu> <h1> <h2>
    edge <labelA> <labelB> <weight>

Equation kind and the exponents A, B are experiment parameters and travel
as flags; the coefficient fields live with the graph.  Reports serialize
canonically: keys sorted, floats at 17 significant digits, so identical
invocations produce byte-identical output (timestamps can be suppressed
with ``--no-timestamp``).

Exit codes: 0 success, 1 usage error, 2 validation error, 3 numerical
failure.  Every failure prints a single machine-parsable line to stderr:
``error: <category>: <detail>``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .degree import estimate_degree
from .errors import (
    InputError,
    NoSolutionError,
    NumericalError,
    ParseError,
    SolveFailedError,
)
from .estimates import AprioriBox, bounds_classic, bounds_generalized, elliptic_constant
from .graphs import (
    WeightedGraph,
    graph_constants,
    gradient_norm_sq,
    integrate,
    laplacian,
)
from .model import (
    Kind,
    ProblemSpec,
    energy,
    energy_gradient,
    jacobian,
    residual,
)
from .solvers import (
    SolverConfig,
    choose_barriers,
    continuation,
    default_t_grid,
    find_two_solutions,
    newton,
)
from . import degree as degree_mod

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Raised instead of argparse's SystemExit so main() can return 1."""


# ---------------------------------------------------------------------------
# graph file ingestion


@dataclass
class GraphDocument:
    """Parsed form of the on-disk graph format."""

    vertices: list[tuple[str, float, float, float]]
    edges: list[tuple[str, str, float]]

    def labels(self) -> list[str]:
        return [v[0] for v in self.vertices]

    def to_graph(self) -> tuple[WeightedGraph, np.ndarray, np.ndarray]:
        g = WeightedGraph(
            self.labels(),
            [v[1] for v in self.vertices],
            self.edges,
        )
        h1 = np.array([v[2] for v in self.vertices])
        h2 = np.array([v[3] for v in self.vertices])
        return g, h1, h2


def _parse_number(token: str, line: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"{what} must be finite, got {token!r}", line)
    return value


def parse_graph(path: str | Path) -> GraphDocument:
    """Parse and validate a graph file; errors carry the offending line."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("file is not valid UTF-8") from None

    vertices: list[tuple[str, float, float, float]] = []
    seen: dict[str, int] = {}
    pending_edges: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        tokens = body.split()
        if not tokens:
            continue
        kind = tokens[0]
        if kind == "vertex":
            if len(tokens) != 5:
                raise ParseError(
                    f"vertex record needs 'vertex <label> <mu> <h1> <h2>', got {len(tokens) - 1} fields",
                    lineno,
                )
            label = tokens[1]
            if label in seen:
                raise ParseError(f"duplicate vertex {label!r} (first declared on line {seen[label]})", lineno)
            mu = _parse_number(tokens[2], lineno, "vertex measure")
            if mu <= 0.0:
                raise ParseError(f"vertex measure must be positive, got {mu:g}", lineno)
            h1 = _parse_number(tokens[3], lineno, "h1 value")
            h2 = _parse_number(tokens[4], lineno, "h2 value")
            seen[label] = lineno
            vertices.append((label, mu, h1, h2))
        elif kind == "edge":
            if len(tokens) != 4:
                raise ParseError(
                    f"edge record needs 'edge <labelA> <labelB> <weight>', got {len(tokens) - 1} fields",
                    lineno,
                )
            pending_edges.append((lineno, tokens[1:]))
        else:
            raise ParseError(f"unknown record type {kind!r}", lineno)

    if not vertices:
        raise ParseError("file declares no vertices")

    edges: list[tuple[str, str, float]] = []
    used: set[frozenset[str]] = set()
    for lineno, (a, b, w_token) in ((ln, tuple(t)) for ln, t in pending_edges):
        for endpoint in (a, b):
            if endpoint not in seen:
                raise ParseError(f"edge endpoint {endpoint!r} is not a declared vertex", lineno)
        if a == b:
            raise ParseError(f"self-loop at vertex {a!r}", lineno)
        key = frozenset((a, b))
        if key in used:
            raise ParseError(f"duplicate edge {a!r}-{b!r}", lineno)
        used.add(key)
        w = _parse_number(w_token, lineno, "edge weight")
        if w <= 0.0:
            raise ParseError(f"edge weight must be positive, got {w:g}", lineno)
        edges.append((a, b, w))
    return GraphDocument(vertices, edges)


def format_graph(doc: GraphDocument) -> str:
    """Serialize a document back to the on-disk format."""
    lines = [
        f"vertex {label} {_float_token(mu)} {_float_token(h1)} {_float_token(h2)}"
        for label, mu, h1, h2 in doc.vertices
    ]
    lines += [f"edge {a} {b} {_float_token(w)}" for a, b, w in doc.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# canonical report rendering


def _float_token(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(float(x), ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _canonical(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _float_token(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in value) + "]"
    if isinstance(value, np.ndarray):
        return _canonical(value.tolist())
    if isinstance(value, dict):
        items = sorted(value.items())
        return "{" + ",".join(json.dumps(str(k)) + ":" + _canonical(v) for k, v in items) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(doc: dict) -> str:
    return _canonical(doc) + "\n"


def _flatten(doc, prefix: str, out: list[tuple[str, str]]) -> None:
    if isinstance(doc, dict):
        for key, value in doc.items():
            _flatten(value, f"{prefix}.{key}" if prefix else str(key), out)
    else:
        out.append((prefix, _canonical(doc)))


def canonical_text(doc: dict) -> str:
    pairs: list[tuple[str, str]] = []
    _flatten(doc, "", pairs)
    return "".join(f"{key} = {value}\n" for key, value in sorted(pairs))


def _box_payload(box: AprioriBox | None):
    if box is None:
        return None
    return {
        "lower": box.lower,
        "upper": box.upper,
        "radius": box.radius,
        "margin": box.margin,
    }


def _graph_payload(path: str, g: WeightedGraph) -> dict:
    constants = graph_constants(g)
    return {
        "path": str(path),
        "n_vertices": g.n,
        "n_edges": g.m,
        "vertex_ids": list(g.vertex_ids),
        "constants": {
            "volume": constants.volume,
            "w0": constants.w0,
            "mu0": constants.mu0,
            "ell": constants.ell,
            "lambda1": constants.lambda1,
            "elliptic_constant": elliptic_constant(g),
        },
    }


def _solution_list(u: np.ndarray) -> list[float]:
    return [float(x) for x in u]


# ---------------------------------------------------------------------------
# commands


def _applicable_box(spec: ProblemSpec, g: WeightedGraph) -> AprioriBox | None:
    if spec.kind is Kind.CLASSIC and float(spec.h2.max()) < 0.0:
        return bounds_classic(spec)
    if spec.kind is Kind.GENERALIZED and float(spec.h2.min()) > 0.0:
        return bounds_generalized(spec, g)
    return None


def _cmd_solve(spec, g, cfg, args):
    box = _applicable_box(spec, g)
    if spec.kind is Kind.CLASSIC:
        if float(spec.h2.min()) >= 0.0:
            raise NoSolutionError("integral obstruction: no solution exists")
        if box is not None:
            reports = continuation(spec, g, default_t_grid(), None, cfg)
            report, method, stages = reports[-1], "continuation+newton", len(reports)
        else:
            report, method, stages = newton(spec, g, np.zeros(g.n), cfg), "newton", 1
    else:
        report, method, stages = newton(spec, g, np.zeros(g.n), cfg), "newton", 1
    if not report.converged:
        raise SolveFailedError(
            f"solver did not converge (residual {report.residual_norm:.3e} after "
            f"{report.iterations} iterations)"
        )
    result = {
        "method": method,
        "stages": stages,
        "converged": report.converged,
        "iterations": report.iterations,
        "jac_sign": report.jac_sign,
        "residual_norm": report.residual_norm,
        "solution": _solution_list(report.solution),
    }
    return result, box, 0


def _cmd_degree(spec, g, cfg, args):
    report = estimate_degree(spec, g, cfg, n_starts=args.starts, radius=args.radius)
    result = {
        "degree": report.degree,
        "signs": list(report.signs),
        "solutions": [_solution_list(u) for u in report.solutions],
        "radius": report.radius,
        "starts_used": report.starts_used,
        "exhaustive_confidence": report.exhaustive_confidence.value,
    }
    return result, _applicable_box(spec, g), 0


def _cmd_bounds(spec, g, cfg, args):
    if spec.kind is Kind.CLASSIC:
        box = bounds_classic(spec)
    else:
        box = bounds_generalized(spec, g)
    result = {"box": _box_payload(box), "elliptic_constant": elliptic_constant(g)}
    return result, box, 0


def _cmd_multiplicity(spec, g, cfg, args):
    barriers = choose_barriers(spec, g)
    reports = find_two_solutions(spec, g, cfg)
    separation = float(np.max(np.abs(reports[0].solution - reports[1].solution)))
    result = {
        "barrier": {"delta": barriers.delta, "beta": barriers.beta, "side": barriers.side},
        "solutions": [_solution_list(r.solution) for r in reports],
        "jac_signs": [r.jac_sign for r in reports],
        "residual_norms": [r.residual_norm for r in reports],
        "separation_sup": separation,
    }
    return result, bounds_generalized(spec, g), 0


def _cmd_check(spec, g, cfg, args):
    checks = _run_checks(spec, g, cfg, args)
    all_passed = all(c["passed"] for c in checks)
    result = {"checks": checks, "all_passed": all_passed}
    return result, _applicable_box(spec, g), 0 if all_passed else 3


def _run_checks(spec, g, cfg, args) -> list[dict]:
    rng = np.random.default_rng(args.seed)
    n = g.n
    total_weight = float(g.edge_weight.sum())
    checks: list[dict] = []

    def record(name: str, passed: bool, detail: str) -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    worst = 0.0
    for _ in range(20):
        u = rng.normal(0.0, 0.75, n)
        bound = 1e-10 * (1.0 + float(np.max(np.abs(u))) * total_weight)
        worst = max(worst, abs(integrate(g, laplacian(g, u))) / bound)
    record("divergence_identity", worst <= 1.0, f"worst ratio {worst:.3e}")

    worst = 0.0
    for _ in range(20):
        u = rng.normal(0.0, 0.75, n)
        lhs = integrate(g, gradient_norm_sq(g, u))
        rhs = -integrate(g, u * laplacian(g, u))
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-30))
    record("integration_by_parts", worst <= 1e-10, f"worst relative gap {worst:.3e}")

    c_elliptic = elliptic_constant(g)
    violations = 0
    for _ in range(50):
        u = rng.normal(0.0, 1.0, n)
        spread = float(u.max() - u.min())
        if spread > c_elliptic * float(np.max(np.abs(laplacian(g, u)))) + 1e-12:
            violations += 1
    record("elliptic_estimate", violations == 0, f"{violations} violations over 50 fields")

    tau = 1e-6
    worst = 0.0
    for _ in range(2):
        u = rng.normal(0.0, 0.4, n)
        jac = jacobian(spec, g, u)
        for x in range(n):
            bump = np.zeros(n)
            bump[x] = tau
            column = (residual(spec, g, u + bump) - residual(spec, g, u - bump)) / (2 * tau)
            scale = max(float(np.max(np.abs(jac[:, x]))), 1.0)
            worst = max(worst, float(np.max(np.abs(column - jac[:, x]))) / scale)
    record("jacobian_fd", worst <= 5e-5, f"worst relative error {worst:.3e}")

    if spec.kind is Kind.CLASSIC and float(spec.h2.min()) >= 0.0:
        worst_integral = math.inf
        for _ in range(100):
            u = rng.normal(0.0, 1.0, n)
            worst_integral = min(worst_integral, integrate(g, residual(spec, g, u)))
        record(
            "integral_obstruction",
            worst_integral > 0.0,
            f"smallest residual integral {worst_integral:.3e}",
        )

    if spec.kind is Kind.CLASSIC and float(spec.h2.max()) < 0.0:
        final = continuation(spec, g, default_t_grid(), None, cfg)[-1]
        direct = newton(spec, g, np.zeros(n), cfg)
        gap = float(np.max(np.abs(final.solution - direct.solution)))
        record(
            "continuation_matches_newton",
            direct.converged and gap <= 1e-8,
            f"sup gap {gap:.3e}",
        )
        d = estimate_degree(spec, g, cfg, n_starts=min(args.starts, 32)).degree
        record("degree_value", d == 1, f"estimated degree {d}")
        invariant = degree_mod.verify_homotopy_invariance(
            spec, g, cfg, n_starts=min(args.starts, 32)
        )
        record("homotopy_invariance", invariant, "degrees agree across t in {0, 0.5, 1}")

    if spec.kind is Kind.GENERALIZED and float(spec.h2.min()) > 0.0:
        worst = 0.0
        for _ in range(20):
            u = rng.normal(0.0, 0.4, n)
            grad = energy_gradient(spec, g, u)
            fd = np.zeros(n)
            for x in range(n):
                bump = np.zeros(n)
                bump[x] = tau
                fd[x] = (energy(spec, g, u + bump) - energy(spec, g, u - bump)) / (2 * tau)
            fd /= g.mu
            worst = max(
                worst,
                float(np.max(np.abs(fd - grad))) / max(float(np.max(np.abs(grad))), 1e-8),
            )
        record("energy_gradient_fd", worst <= 1e-5, f"worst relative error {worst:.3e}")
        d = estimate_degree(spec, g, cfg, n_starts=min(args.starts, 48)).degree
        record("degree_value", d == 0, f"estimated degree {d}")
        invariant = degree_mod.verify_homotopy_invariance(
            spec, g, cfg, n_starts=min(args.starts, 48)
        )
        record("homotopy_invariance", invariant, "degrees agree across t in {0, 0.5, 1}")

    return checks


_COMMANDS = {
    "solve": _cmd_solve,
    "degree": _cmd_degree,
    "bounds": _cmd_bounds,
    "multiplicity": _cmd_multiplicity,
    "check": _cmd_check,
}


# ---------------------------------------------------------------------------
# argument parsing and entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="tzgraph",
        description="Solve, bound, and count solutions of Tzitzeica-type equations on weighted graphs.",
    )
    common = _Parser(add_help=False)
    common.add_argument("graph", help="path to a graph file")
    common.add_argument(
        "--equation",
        required=True,
        choices=[k.value for k in Kind],
        help="equation kind",
    )
    common.add_argument("--A", type=float, required=True, help="exponent A > 0")
    common.add_argument("--B", type=float, required=True, help="exponent B > 0")
    common.add_argument("--tol", type=float, default=1e-10, help="residual sup-norm target")
    common.add_argument("--max-iter", type=int, default=200, help="Newton iteration cap")
    common.add_argument("--starts", type=int, default=64, help="multi-start count for degree estimation")
    common.add_argument("--seed", type=int, default=0, help="start-point sampling seed")
    common.add_argument("--radius", type=float, default=None, help="override the search ball radius")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json", help="report format")
    common.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit timestamp and wall time for reproducible diffs",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subparsers.add_parser("solve", parents=[common], help="find one solution")
    subparsers.add_parser("degree", parents=[common], help="estimate the topological degree")
    subparsers.add_parser("bounds", parents=[common], help="report a priori bounds and graph constants")
    subparsers.add_parser("multiplicity", parents=[common], help="find two distinct solutions")
    subparsers.add_parser("check", parents=[common], help="run the invariant audit")
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 1

    start_time = time.perf_counter()
    try:
        doc = parse_graph(args.graph)
        g, h1, h2 = doc.to_graph()
        spec = ProblemSpec(Kind(args.equation), h1, h2, args.A, args.B)
        cfg = SolverConfig(tol=args.tol, max_iter=args.max_iter, seed=args.seed)
        result, box, exit_code = _COMMANDS[args.command](spec, g, cfg, args)
    except InputError as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return 3

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "argv": argv,
        "config": {
            "equation": args.equation,
            "A": args.A,
            "B": args.B,
            "tol": args.tol,
            "max_iter": args.max_iter,
            "starts": args.starts,
            "seed": args.seed,
            "radius": args.radius,
            "format": args.format,
        },
        "graph": _graph_payload(args.graph, g),
        "box": _box_payload(box),
        "result": result,
    }
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
        report["wall_time_s"] = time.perf_counter() - start_time

    rendered = canonical_json(report) if args.format == "json" else canonical_text(report)
    try:
        if args.output:
            Path(args.output).write_text(rendered, encoding="utf-8")
        else:
            sys.stdout.write(rendered)
    except OSError as exc:
        print(f"error: usage: cannot write output: {exc}", file=sys.stderr)
        return 1

    if exit_code:
        failed = [c["name"] for c in result.get("checks", []) if not c["passed"]]
        print(f"error: numerical: invariant checks failed: {','.join(failed)}", file=sys.stderr)
    return exit_code


def entrypoint() -> None:
    raise SystemExit(main())
