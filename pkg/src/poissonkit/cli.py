"""Command-line front end.

Exit codes: 0 ok, 1 property violation, 2 parse error, 3 contract violation
(non-closed truncation, bad chart, unmet hypothesis, unverified structure).
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

from .checks import structure_suites
from .errors import (
    ChartError,
    HypothesisError,
    ParseError,
    TruncationError,
    UnverifiedStructureError,
)
from .exterior import DiffForm, parse_form, parse_multivector
from .files import fraction_str, load_chart, load_structure
from .homology import (
    casimir_distributions,
    casimir_space,
    h0_canonical,
    homology,
    star_matrix_identity,
)
from .numeric import FlowSpec, compile_poly, flow, leaf_distribution_check, leaf_integrate
from .poisson import bracket
from .calculus import schouten
from .ring import parse_poly

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_CONTRACT = 0, 1, 2, 3
SCHEMA = 1


@dataclass
class RunConfig:
    command: str
    structure: str = None
    json: bool = False
    seed: int = 0
    degree: int = None
    nodes: tuple = None
    options: dict = field(default_factory=dict)


def fmt_float(x):
    return format(float(x), ".17g")


def _nodes(text):
    try:
        parts = tuple(int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected AxB, got {text!r}") from None
    if not parts or any(k < 1 for k in parts):
        raise argparse.ArgumentTypeError(f"node counts must be positive, got {text!r}")
    return parts


def _point(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _names(p):
    return list(p.names) if p.names else None


def _require_verified(p):
    if not p.verified:
        triple, value = p.witness
        raise UnverifiedStructureError(
            f"structure fails the Jacobi identity on variables {list(triple)} "
            f"([p, p] component {value.to_str(_names(p))})"
        )


# commands


def cmd_bracket(cfg, p):
    names = p.names
    f = parse_poly(cfg.options["f"], names)
    g = parse_poly(cfg.options["g"], names)
    _require_verified(p)
    value = bracket(p, f, g)
    return EXIT_OK, {"command": "bracket", "result": value.to_str(names)}, value.to_str(names)


def cmd_schouten(cfg, p):
    names = p.names
    u = parse_multivector(cfg.options["u"], names) if cfg.options.get("u") else p.bivector
    v = parse_multivector(cfg.options["v"], names) if cfg.options.get("v") else u
    value = schouten(u, v)
    return EXIT_OK, {"command": "schouten", "result": value.to_str(names)}, value.to_str(names)


def cmd_jacobi(cfg, p):
    report = {"command": "jacobi", "verified": p.verified}
    if p.verified:
        return EXIT_OK, report, "jacobi: ok"
    triple, value = p.witness
    report["witness"] = {"triple": list(triple), "value": value.to_str(_names(p))}
    text = f"jacobi: FAILED on variables {list(triple)}, [p, p] component = {value.to_str(_names(p))}"
    return EXIT_VIOLATION, report, text


def cmd_verify(cfg, p):
    code, report, text = cmd_jacobi(cfg, p)
    report["command"] = "verify"
    report["seed"] = cfg.seed
    if code != EXIT_OK:
        return code, report, text
    bound = 2 if cfg.degree is None else cfg.degree
    suites = structure_suites(p, seed=cfg.seed, bound=bound, cases=cfg.options.get("cases", 20))
    report["degree"] = bound
    report["suites"] = [s.as_dict() for s in suites]
    lines = [text]
    failed = None
    for s in suites:
        status = "skipped" if s.skipped else ("ok" if s.ok else "FAILED")
        line = f"{s.name}: {status} ({s.cases} cases)"
        if s.skipped:
            line += f": {s.skipped}"
        lines.append(line)
        if not s.ok and failed is None:
            failed = s
    if failed is not None:
        lines.append(f"counterexample ({failed.name}, seed {cfg.seed}):")
        lines += [f"  {k} = {v}" for k, v in failed.counterexample.items()]
        return EXIT_VIOLATION, report, "\n".join(lines)
    return EXIT_OK, report, "\n".join(lines)


def cmd_homology(cfg, p):
    flavor = cfg.options["flavor"]
    k = cfg.options["k"]
    op = cfg.options.get("operator")
    if op is None:
        op = "delta" if flavor == "form" else "lichnerowicz"
    if flavor == "function" and k != 0:
        raise ParseError("function flavor has object degree 0")
    if flavor != "form" and op != "lichnerowicz":
        raise ParseError(f"operator {op} acts on forms")
    if flavor == "form" and op == "lichnerowicz":
        raise ParseError("the Lichnerowicz differential acts on multivectors and functions")
    if op != "d":
        _require_verified(p)
    bound = 2 if cfg.degree is None else cfg.degree
    rep = homology(op, p, flavor, k, bound, cfg.options.get("target_degree"))
    report = rep.as_dict(p.names)
    report.pop("schema")
    report["command"] = "homology"
    lines = [
        f"{op} on {rep.domain.describe()}",
        f"rank {rep.rank}, kernel {rep.kernel_dim}, incoming rank {rep.incoming_rank}, "
        f"homology {rep.homology_dim}",
    ] + [f"  {s}" for s in report["representatives"]]
    return EXIT_OK, report, "\n".join(lines)


def cmd_casimir(cfg, p):
    _require_verified(p)
    bound = 2 if cfg.degree is None else cfg.degree
    basis = [f.to_str(p.names) for f in casimir_space(p, bound)]
    report = {"command": "casimir", "degree": bound, "dimension": len(basis), "basis": basis}
    return EXIT_OK, report, "\n".join([f"casimir functions of degree <= {bound}: {len(basis)}"] + basis)


def cmd_distributions(cfg, p):
    _require_verified(p)
    bound = 2 if cfg.degree is None else cfg.degree
    h0 = h0_canonical(p, bound)
    dists = casimir_distributions(p, bound)
    monomials = [h0.codomain.basis_element(i).to_str(p.names) for i in range(h0.codomain.size)]
    funcs = [[fraction_str(c) for c in phi.coeffs] for phi in dists]
    report = {
        "command": "distributions",
        "degree": bound,
        "h0_dimension": h0.dimension,
        "h0_representatives": [r.to_str(p.names) for r in h0.representatives],
        "monomials": monomials,
        "functionals": funcs,
    }
    lines = [
        f"H0 truncated at degree {bound}: dimension {h0.dimension}",
        *(f"  {r}" for r in report["h0_representatives"]),
        f"casimir distributions: dimension {len(dists)} (values on {', '.join(monomials)})",
        *(f"  [{', '.join(f)}]" for f in funcs),
    ]
    code = EXIT_OK if len(dists) == h0.dimension else EXIT_VIOLATION
    return code, report, "\n".join(lines)


def cmd_star_check(cfg, p):
    _require_verified(p)
    n = p.num_vars
    top_text = cfg.options.get("top")
    top = parse_form(top_text, p.names) if top_text else DiffForm.basis(n, tuple(range(n)))
    bound = 2 if cfg.degree is None else cfg.degree
    degrees = [cfg.options["k"]] if cfg.options.get("k") is not None else list(range(n + 1))
    results = [star_matrix_identity(p, top, k, bound) for k in degrees]
    report = {
        "command": "star-check",
        "top": top.to_str(p.names),
        "degree": bound,
        "results": [
            {"k": r.degree, "holds": r.holds, "shape": list(r.shape), "mismatched_columns": r.mismatches}
            for r in results
        ],
    }
    lines = [f"k={r.degree}: {'holds' if r.holds else 'FAILS'} on a {r.shape[0]}x{r.shape[1]} matrix"
             for r in results]
    code = EXIT_OK if all(r.holds for r in results) else EXIT_VIOLATION
    return code, report, "\n".join(lines)


def cmd_flow(cfg, p):
    _require_verified(p)
    h = parse_poly(cfg.options["hamiltonian"], p.names)
    start = [parse_poly(t, p.names) for t in cfg.options["start"]]
    if len(start) != p.num_vars or not all(s.is_constant() for s in start):
        raise ParseError(f"start needs {p.num_vars} numeric coordinates")
    spec = FlowSpec(h, tuple(s.constant_term() for s in start), cfg.options["time"], cfg.options["steps"])
    traj = flow(p, spec)
    bound = 2 if cfg.degree is None else cfg.degree
    drifts = []
    for c in casimir_space(p, bound):
        if c.is_constant():
            continue
        vals = compile_poly(c)(traj)
        drifts.append((c.to_str(p.names), float(abs(vals - vals[0]).max())))
    final = [fmt_float(v) for v in traj[-1]]
    report = {
        "command": "flow",
        "hamiltonian": h.to_str(p.names),
        "time": fmt_float(spec.duration),
        "steps": spec.steps,
        "final": final,
        "casimir_drift": [{"casimir": c, "max_drift": fmt_float(d)} for c, d in drifts],
    }
    lines = [f"final point: ({', '.join(final)})"] + [f"drift of {c}: {fmt_float(d)}" for c, d in drifts]
    return EXIT_OK, report, "\n".join(lines)


def cmd_leaf(cfg, p):
    _require_verified(p)
    chart = load_chart(cfg.options["chart"])
    if cfg.nodes is not None:
        if len(cfg.nodes) != len(chart.params):
            raise ParseError(f"--nodes needs {len(chart.params)} counts")
        chart = chart.with_nodes(cfg.nodes)
    report = {"command": "leaf", "nodes": list(chart.nodes)}
    pair = cfg.options.get("pair")
    if pair:
        phi, psi = (parse_poly(t, p.names) for t in pair)
        value = leaf_distribution_check(p, chart, phi, psi)
        tol = cfg.options.get("tol", 1e-8)
        report.update(pair=[phi.to_str(p.names), psi.to_str(p.names)], residual=fmt_float(value), tol=fmt_float(tol))
        code = EXIT_OK if value < tol else EXIT_VIOLATION
        return code, report, f"|<delta_N, {{phi, psi}}>| = {fmt_float(value)}"
    f = parse_poly(cfg.options.get("integrand") or "1", p.names)
    value = leaf_integrate(p, chart, f)
    report.update(integrand=f.to_str(p.names), value=fmt_float(value))
    return EXIT_OK, report, f"<delta_N, {f.to_str(p.names)}> = {fmt_float(value)}"


COMMANDS = {
    "bracket": cmd_bracket,
    "schouten": cmd_schouten,
    "jacobi": cmd_jacobi,
    "verify": cmd_verify,
    "homology": cmd_homology,
    "casimir": cmd_casimir,
    "distributions": cmd_distributions,
    "star-check": cmd_star_check,
    "flow": cmd_flow,
    "leaf": cmd_leaf,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--degree", type=int, default=None, help="coefficient degree bound")
    common.add_argument("--nodes", type=_nodes, default=None, help="quadrature nodes per axis, AxB")

    parser = _Parser(prog="poissonkit", description="Exact Poisson calculus on polynomial structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("structure", help="structure JSON file")
        return sp

    sp = add("bracket", "print {f, g}")
    sp.add_argument("f")
    sp.add_argument("g")
    sp = add("schouten", "print [u, v] (default [p, p])")
    sp.add_argument("u", nargs="?")
    sp.add_argument("v", nargs="?")
    add("jacobi", "check [p, p] = 0")
    sp = add("verify", "run every identity suite")
    sp.add_argument("--cases", type=int, default=20)
    sp = add("homology", "truncated (co)homology at one degree")
    sp.add_argument("--flavor", choices=["form", "multivector", "function"], default="function")
    sp.add_argument("--k", type=int, default=0, help="object degree")
    sp.add_argument("--operator", choices=["d", "delta", "lichnerowicz"], default=None)
    sp.add_argument("--target-degree", type=int, default=None, help="codomain coefficient bound")
    add("casimir", "Casimir functions up to --degree")
    add("distributions", "truncated H0 and Casimir distributions")
    sp = add("star-check", "compare the star-conjugated boundary with d")
    sp.add_argument("--top", default=None, help="top-degree form (default dx(1,...,n))")
    sp.add_argument("--k", type=int, default=None)
    sp = add("flow", "RK4 Hamiltonian flow")
    sp.add_argument("--hamiltonian", required=True)
    sp.add_argument("--start", type=_point, required=True, help="comma-separated coordinates")
    sp.add_argument("--time", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=1000)
    sp = add("leaf", "integrate over a symplectic leaf chart")
    sp.add_argument("chart", help="chart JSON file")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--integrand", default=None)
    group.add_argument("--pair", nargs=2, metavar=("PHI", "PSI"))
    sp.add_argument("--tol", type=float, default=1e-8)
    return parser


def config_from_args(args):
    base = {"command", "structure", "json", "seed", "degree", "nodes"}
    opts = {k: v for k, v in vars(args).items() if k not in base}
    return RunConfig(args.command, args.structure, args.json, args.seed, args.degree, args.nodes, opts)


def _emit(cfg, code, report, text, out):
    if cfg.json:
        report = {"schema": SCHEMA, **report, "exit_code": code}
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(text + "\n")


def run(cfg, out=None, err=None):
    """Execute one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        p = load_structure(cfg.structure)
        code, report, text = COMMANDS[cfg.command](cfg, p)
    except ParseError as exc:
        code, report, text = EXIT_PARSE, {"command": cfg.command, "error": str(exc)}, None
    except (TruncationError, ChartError, HypothesisError, UnverifiedStructureError) as exc:
        report = {"command": cfg.command, "error": str(exc), "kind": type(exc).__name__}
        if isinstance(exc, ChartError) and exc.residual is not None:
            report["max_residual"] = fmt_float(exc.residual)
        code, text = EXIT_CONTRACT, None
    if text is None:
        msg = f"error: {report['error']}"
        if cfg.json:
            _emit(cfg, code, report, msg, out)
        err.write(msg + "\n")
        return code
    _emit(cfg, code, report, text, out)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
