"""Command-line front end.

Exit status is 0 on success, 2 for malformed input or domain errors and 1
when the solver fails to converge.  Results go to stdout, diagnostics to
stderr.  Machine formats (json, csv) print floats with 17 significant
digits; ``human`` rounds to 6.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import binary_dist as bd
from . import qubit_dichotomy as qd
from . import solver as sv

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

SUBCOMMANDS = ("tradeoff", "monotonicity", "counterexample", "accinfo", "lorenz", "scan", "check-bounds")


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # single-line diagnostic instead of usage dump
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


# -- formatting ------------------------------------------------------------------


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def to_json(obj: Any) -> str:
    """JSON text with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float) or (hasattr(obj, "dtype") and getattr(obj, "ndim", 1) == 0):
        v = float(obj)
        return fmt(v) if math.isfinite(v) else "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _human(lines: Sequence[tuple[str, Any, str]]) -> str:
    out = []
    for label, value, note in lines:
        if isinstance(value, float):
            value = f"{value:.6g}"
        elif isinstance(value, (list, tuple)):
            value = "[" + ", ".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in value) + "]"
        out.append(f"{label:<24} {value}" + (f"   # {note}" if note else ""))
    return "\n".join(out) + "\n"


# -- parsing ---------------------------------------------------------------------


def parse_reals(text: str, name: str) -> list[float]:
    try:
        vals = [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise InputError(f"--{name}: expected comma-separated reals, got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise InputError(f"--{name}: values must be finite")
    return vals


def parse_joint(values: Sequence[float]) -> bd.JointDist:
    if len(values) != 4:
        raise InputError(f"joint needs 4 reals (row-major), got {len(values)}")
    return bd.JointDist(tuple(values))


def parse_state(values: Sequence[float], name: str) -> qd.QubitState:
    """Bloch triple, or 8 reals: row-major [re, im] pairs of the 2x2 matrix."""
    if len(values) == 3:
        return qd.QubitState(tuple(values))
    if len(values) == 8:
        m = [[complex(values[0], values[1]), complex(values[2], values[3])],
             [complex(values[4], values[5]), complex(values[6], values[7])]]
        return qd.QubitState.from_matrix(m)
    raise InputError(f"--{name}: expected 3 (Bloch) or 8 (matrix) reals, got {len(values)}")


def parse_prior(values: Sequence[float] | None) -> tuple[float, float]:
    if not values:
        return (0.5, 0.5)
    if len(values) == 1:
        return (values[0], 1.0 - values[0])
    if len(values) == 2:
        return (values[0], values[1])
    raise InputError(f"--prior: expected 1 or 2 reals, got {len(values)}")


def _load_input(args: argparse.Namespace) -> None:
    """Fill missing options from a JSON ``--input`` file."""
    if not args.input:
        return
    try:
        data = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"--input: cannot read {args.input}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("--input: expected a JSON object")
    for key in ("rho", "sigma", "prior", "joint"):
        if key in data and getattr(args, key, None) is None:
            text = ",".join(str(x) for x in _flatten(data[key]))
            setattr(args, key, [text] if key == "joint" else text)
    for key in ("p0", "cap", "lam", "n", "count", "seed"):
        if key in data and getattr(args, key, None) is None:
            setattr(args, key, data[key])


def _flatten(val) -> list:
    if isinstance(val, (list, tuple)):
        return [x for v in val for x in _flatten(v)]
    return [val]


def _dichotomy(args: argparse.Namespace) -> qd.Dichotomy:
    if args.rho is None or args.sigma is None:
        raise InputError("--rho and --sigma are required")
    rho = parse_state(parse_reals(args.rho, "rho"), "rho")
    sigma = parse_state(parse_reals(args.sigma, "sigma"), "sigma")
    prior = parse_prior(parse_reals(args.prior, "prior") if args.prior else None)
    return qd.Dichotomy(rho, sigma, prior)


def _solver_config(args: argparse.Namespace) -> sv.SolverConfig:
    kw = {}
    if getattr(args, "tol", None) is not None:
        kw["tol_lambda"] = args.tol
    if getattr(args, "fd_step", None) is not None:
        kw["fd_step"] = args.fd_step
    return sv.SolverConfig(**kw)


def _joint_summary(p: bd.JointDist) -> dict:
    c = bd.coords_from_joint(p)
    return {
        "joint": p.to_list(),
        "coords": {"a": c.a, "b": c.b, "lambda": c.lam},
        "info": bd.mutual_information(p),
        "guess": bd.guessing_probability(p),
    }


_JOINT_HEADER = ["p00", "p01", "p10", "p11", "a", "b", "lambda", "info", "guess"]


def _joint_row(p: bd.JointDist) -> list:
    s = _joint_summary(p)
    return s["joint"] + [s["coords"]["a"], s["coords"]["b"], s["coords"]["lambda"], s["info"], s["guess"]]


# -- subcommands -----------------------------------------------------------------


def cmd_tradeoff(args: argparse.Namespace) -> str:
    if args.p0 is None or args.cap is None:
        raise InputError("--p0 and --cap are required")
    p = bd.tradeoff_max(bd.MarginalX.from_p0(args.p0), args.cap)
    s = _joint_summary(p)
    if args.format == "json":
        return to_json({"subcommand": "tradeoff", "p0": args.p0, "cap": args.cap, **s}) + "\n"
    if args.format == "csv":
        return to_csv(_JOINT_HEADER, [_joint_row(p)])
    c = s["coords"]
    return _human([
        ("optimal joint", s["joint"], "maximises I at this X-marginal and guessing cap"),
        ("a*", c["a"], "2 p0 - 1"),
        ("b*", c["b"], "lambda* + a* - 1, on the boundary"),
        ("lambda*", c["lambda"], "2 cap - 1"),
        ("I(X:Y) [bits]", s["info"], "tradeoff optimum"),
        ("P_guess", s["guess"], "equals the cap"),
    ])


def _mono_payload(p: bd.JointDist) -> dict:
    res = bd.monotonicity_holds(p)
    out = {
        "input": _joint_summary(p),
        "holds": res.holds,
        "vacuous": res.vacuous,
        "trace_condition": res.trace_condition,
        "guessing_condition": res.guessing_condition,
    }
    if res.witness is not None:
        out["witness"] = _joint_summary(res.witness)
    return out


def cmd_monotonicity(args: argparse.Namespace) -> str:
    p = _single_joint(args)
    out = _mono_payload(p)
    if args.format == "json":
        return to_json({"subcommand": "monotonicity", **out}) + "\n"
    if args.format == "csv":
        return to_csv(
            ["holds", "vacuous", "trace_condition", "guessing_condition"],
            [[out["holds"], out["vacuous"], out["trace_condition"], out["guessing_condition"]]],
        )
    lines = [
        ("I(X:Y) [bits]", out["input"]["info"], ""),
        ("P_guess", out["input"]["guess"], ""),
        ("trace >= p_X0", out["trace_condition"], "first monotonicity condition"),
        ("P = p_Y0 + p_X1", out["guessing_condition"], "second monotonicity condition"),
        ("monotone", out["holds"], "vacuous: P equals max p_X" if out["vacuous"] else ""),
    ]
    return _human(lines)


def cmd_counterexample(args: argparse.Namespace) -> str:
    p = _single_joint(args)
    out = _mono_payload(p)
    if out["vacuous"]:
        status = "vacuous"
    elif out["holds"]:
        status = "certificate"
    else:
        status = "violation"
    if args.format == "json":
        return to_json({"subcommand": "counterexample", "status": status, **out}) + "\n"
    if args.format == "csv":
        rows = [["input"] + _joint_row(p)]
        if "witness" in out:
            rows.append(["witness"] + _joint_row(bd.JointDist(tuple(out["witness"]["joint"]))))
        return to_csv(["role"] + _JOINT_HEADER, rows)
    src = out["input"]
    lines = [("I(X:Y) [bits]", src["info"], "given joint"), ("P_{X|Y}", src["guess"], "given joint")]
    if status == "vacuous":
        lines.append(("status", "vacuous", "P_{X|Y} = max p_X: trivially monotone"))
    elif status == "certificate":
        lines.append(("status", "monotone", "both conditions hold; no competitor carries more information"))
    else:
        wit = out["witness"]
        lines += [
            ("witness joint", wit["joint"], "same X-marginal, tradeoff optimum at this P"),
            ("I(X:Z) [bits]", wit["info"], "exceeds I(X:Y)"),
            ("P_{X|Z}", wit["guess"], "does not exceed P_{X|Y}"),
            ("status", "violation", "P_{X|Y} >= P_{X|Z} but I(X:Y) < I(X:Z)"),
        ]
    return _human(lines)


def _bounds_payload(p: bd.JointDist) -> dict:
    P = bd.guessing_probability(p)
    H = bd.conditional_entropy(p)
    fano = bd.fano_upper_bound(P, 2)
    fano_s = bd.fano_upper_bound(P, 2, strengthened=True)
    hr = bd.hellman_raviv_lower_bound(P)
    return {
        "joint": p.to_list(),
        "guess": P,
        "cond_entropy": H,
        "fano_upper": fano,
        "fano_upper_strengthened": fano_s,
        "hellman_raviv_lower": hr,
        "sandwich_ok": hr <= H + 1e-12 and H <= fano + 1e-12,
    }


def cmd_check_bounds(args: argparse.Namespace) -> str:
    joints = [parse_joint(parse_reals(j, "joint")) for j in (args.joint or [])]
    if not 1 <= len(joints) <= 2:
        raise InputError("check-bounds takes one or two --joint values")
    payload = {"subcommand": "check-bounds", "bounds": [_bounds_payload(p) for p in joints]}
    if len(joints) == 2:
        Py, Pz = (b["guess"] for b in payload["bounds"])
        Iy, Iz = (bd.mutual_information(p) for p in joints)
        payload["comparison"] = {
            "same_x_marginal": abs(joints[0].marginal_x.p0 - joints[1].marginal_x.p0) <= 1e-12,
            "sufficient_premise": bd.sufficient_condition(Py, Pz),
            "necessary_condition": bd.necessary_condition(Py, Pz),
            "info_y": Iy,
            "info_z": Iz,
            "info_y_ge_info_z": Iy >= Iz,
        }
    if args.format == "json":
        return to_json(payload) + "\n"
    if args.format == "csv":
        keys = ["guess", "cond_entropy", "fano_upper", "fano_upper_strengthened", "hellman_raviv_lower", "sandwich_ok"]
        return to_csv(keys, [[b[k] for k in keys] for b in payload["bounds"]])
    lines = []
    for i, b in enumerate(payload["bounds"]):
        lines += [
            (f"[{i}] P_guess", b["guess"], ""),
            (f"[{i}] H(X|Y) [bits]", b["cond_entropy"], ""),
            (f"[{i}] Fano upper", b["fano_upper"], "h(P) + (1 - P) log2|X|"),
            (f"[{i}] Hellman-Raviv lower", b["hellman_raviv_lower"], "2 (1 - P)"),
            (f"[{i}] sandwich holds", b["sandwich_ok"], ""),
        ]
    if "comparison" in payload:
        c = payload["comparison"]
        lines += [
            ("same X-marginal", c["same_x_marginal"], "the two conditions below assume it"),
            ("sufficient premise", c["sufficient_premise"], "if true, I(X:Y) >= I(X:Z) is guaranteed"),
            ("necessary condition", c["necessary_condition"], "must hold whenever I(X:Y) >= I(X:Z)"),
            ("I(X:Y) >= I(X:Z)", c["info_y_ge_info_z"], ""),
        ]
    return _human(lines)


def cmd_accinfo(args: argparse.Namespace) -> str:
    d = _dichotomy(args)
    cfg = _solver_config(args)
    rep = sv.bisect_accessible_info(d, cfg)
    if args.oracle:
        rep.oracle_gap = sv.brute_force_accessible_info(d).value - rep.acc_info
    payload = {
        "subcommand": "accinfo",
        "seed": args.seed,
        "config": {"tol_lambda": cfg.tol_lambda, "fd_step": cfg.fd_step, "max_iter": cfg.max_iter},
        "rho": list(d.rho.bloch),
        "sigma": list(d.sigma.bloch),
        "prior": list(d.prior),
        "lambda_opt": rep.lambda_opt,
        "acc_info": rep.acc_info,
        "iterations": rep.iterations,
        "lambda_star": rep.lambda_star,
        "oracle_gap": rep.oracle_gap,
        "one_sided_steps": rep.one_sided_steps,
        "derivative_trace": [list(t) for t in rep.derivative_trace],
    }
    try:
        payload["lambda_helstrom"] = qd.lambda_helstrom(d)
    except qd.DegenerateError:
        payload["lambda_helstrom"] = None
    if args.lam is not None:
        payload["info_at_lambda"] = {"lambda": args.lam, "info": sv.info_of_lambda(d, args.lam)}
    if args.format == "json":
        return to_json(payload) + "\n"
    if args.format == "csv":
        return to_csv(
            ["lambda_opt", "acc_info", "iterations", "lambda_star", "oracle_gap",
             "seed", "tol_lambda", "fd_step", "max_iter"],
            [[rep.lambda_opt, rep.acc_info, rep.iterations, rep.lambda_star, rep.oracle_gap,
              args.seed, cfg.tol_lambda, cfg.fd_step, cfg.max_iter]],
        )
    lines = [
        ("accessible info [bits]", rep.acc_info, "bisection on dI/dlambda"),
        ("lambda_opt", rep.lambda_opt, "optimal measurement parameter"),
        ("lambda_star", rep.lambda_star, "window half-width"),
        ("lambda_H", payload["lambda_helstrom"], "Helstrom measurement; optimal for pure states"),
        ("iterations", rep.iterations, ""),
    ]
    if rep.oracle_gap is not None:
        lines.append(("oracle gap [bits]", rep.oracle_gap, "brute force minus bisection"))
    return _human(lines)


def cmd_lorenz(args: argparse.Namespace) -> str:
    d = _dichotomy(args)
    n = args.n if args.n is not None else 101
    pts = qd.lorenz_boundary(d, n) if args.branch == "both" else qd.lorenz_curve(d, n)
    rows = [[p.lam, p.q_rho, p.q_sigma] for p in pts]
    if args.format == "json":
        return to_json({"subcommand": "lorenz", "lambda_star": qd.lambda_star(d), "points": rows}) + "\n"
    if args.format == "human":
        return _human([(f"lambda={r[0]:.6g}", [r[1], r[2]], "") for r in rows])
    return to_csv(["lambda", "q_rho", "q_sigma"], rows)


SCAN_HEADER = ["seed", "index", "lambda_opt", "acc_info", "oracle_gap", "quasi", "pseudo"]


def cmd_scan(args: argparse.Namespace) -> str:
    count = args.count if args.count is not None else 100
    if count < 1:
        raise InputError("--count must be at least 1")
    cfg = _solver_config(args)
    res = sv.probe_conjectures(count, args.seed, cfg, n_grid=args.n or 200, workers=args.workers)
    summary = {
        "count": count,
        "seed": args.seed,
        "quasi_violations": res.quasi_violations,
        "pseudo_violations": res.pseudo_violations,
        "gap_violations": res.gap_violations,
        "max_gap": max(r.oracle_gap for r in res.rows),
    }
    config = {"tol_lambda": cfg.tol_lambda, "fd_step": cfg.fd_step, "max_iter": cfg.max_iter, "n_grid": res.n_grid}
    if args.format == "json":
        return to_json({"subcommand": "scan", "config": config, "summary": summary,
                        "rows": [dict(zip(SCAN_HEADER, r)) for r in res.rows]}) + "\n"
    if args.format == "human":
        return _human([
            ("dichotomies", count, f"seed {args.seed}"),
            ("quasi-concavity fails", res.quasi_violations, "expected 0"),
            ("pseudo-concavity fails", res.pseudo_violations, "expected 0"),
            ("oracle gap > 1e-6", res.gap_violations, "expected 0"),
            ("max oracle gap", summary["max_gap"], ""),
        ])
    head = f"# config: {to_json(config)}\n"
    tail = (
        f"# violations: quasi={res.quasi_violations} pseudo={res.pseudo_violations} "
        f"gap={res.gap_violations} count={count} seed={args.seed}\n"
    )
    return head + to_csv(SCAN_HEADER, res.rows) + tail


def _single_joint(args: argparse.Namespace) -> bd.JointDist:
    if not args.joint or len(args.joint) != 1:
        raise InputError("exactly one --joint is required")
    return parse_joint(parse_reals(args.joint[0], "joint"))


HANDLERS = {
    "tradeoff": cmd_tradeoff,
    "monotonicity": cmd_monotonicity,
    "counterexample": cmd_counterexample,
    "accinfo": cmd_accinfo,
    "lorenz": cmd_lorenz,
    "scan": cmd_scan,
    "check-bounds": cmd_check_bounds,
}


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="accinfo", description="Information-guessing tradeoffs and accessible information of qubit dichotomies.")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True
    default_format = {"lorenz": "csv", "scan": "csv"}
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--format", choices=("json", "csv", "human"), default=default_format.get(name, "json"))
        p.add_argument("--input", help="JSON file supplying any of rho, sigma, prior, joint, p0, cap")
        p.add_argument("--seed", type=_seed, default=0)
        if name == "tradeoff":
            p.add_argument("--p0", type=float)
            p.add_argument("--cap", type=float)
        if name in ("monotonicity", "counterexample", "check-bounds"):
            p.add_argument("--joint", action="append", help="4 comma-separated reals, row-major")
        if name in ("accinfo", "lorenz"):
            p.add_argument("--rho", help="Bloch triple or 8 reals (matrix as [re, im] pairs)")
            p.add_argument("--sigma")
            p.add_argument("--prior", help="p0 or p0,p1")
        if name in ("accinfo", "scan"):
            p.add_argument("--tol", type=float)
            p.add_argument("--fd-step", type=float, dest="fd_step")
        if name == "accinfo":
            p.add_argument("--oracle", action="store_true")
            p.add_argument("--lambda", type=float, dest="lam")
        if name == "lorenz":
            p.add_argument("--n", type=int)
            p.add_argument("--branch", choices=("both", "positive"), default="both")
        if name == "scan":
            p.add_argument("--count", type=int)
            p.add_argument("--n", type=int, help="grid size for the oracle and concavity scan")
            p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _load_input(args)
        out = HANDLERS[args.subcommand](args)
    except sv.SolverError as exc:
        sys.stderr.write(f"accinfo: error: {exc}\n")
        return EXIT_FAILED
    except (ValueError, ArithmeticError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"accinfo {args.subcommand}: error: {msg}\n")
        return EXIT_INPUT
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
