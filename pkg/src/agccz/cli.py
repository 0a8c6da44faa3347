"""Command-line entry point: ``agccz <command> [options]``.

Exit codes: 0 ok, 2 usage or domain error, 3 internal assertion failure,
4 disagreement with the bundled reference values.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_MISMATCH = 0, 2, 3, 4


class Mismatch(Exception):
    """Computed values disagree with the reference fixture."""

    def __init__(self, message: str, payload: str = ""):
        super().__init__(message)
        self.payload = payload


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, newline="")
    else:
        sys.stdout.write(text)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerows(rows)
    return buf.getvalue()


# --- construct ------------------------------------------------------------------------


def construct_report(r: int, seed: int, samples: int | None = None):
    from .classical_codes import base_code_parameters, construct_base_code, distance_certificate, is_triorthogonal

    code = construct_base_code(r)
    exhaustive = samples is None and code.k**3 <= 10**5
    tri = is_triorthogonal(code, samples=None if exhaustive else (samples or 10**4), seed=seed)
    cert = distance_certificate(code)
    n0, k0, d0 = base_code_parameters(r)
    report = {
        "r": r,
        "q": code.q,
        "n": code.n,
        "k": code.k,
        "d": cert.lower if cert.exact else None,
        "formula": {"n": n0, "k": k0, "d": d0},
        "deg_g": code.deg_g,
        "triorthogonal": {
            "ok": tri.ok,
            "exhaustive": tri.exhaustive,
            "contains_all_ones": tri.contains_all_ones,
            "triples_checked": tri.triples_checked,
            "pairs_checked": tri.pairs_checked,
            "witness": list(tri.witness) if tri.witness else None,
            "seed": None if tri.exhaustive else seed,
        },
        "distance": {
            "lower": cert.lower,
            "upper": cert.upper,
            "singleton": cert.singleton,
            "exact": cert.exact,
            "witness": [format(int(v), "x") for v in cert.witness],
        },
    }
    return code, report


def cmd_construct(args) -> int:
    code, report = construct_report(args.r, args.seed, args.samples)
    if not report["triorthogonal"]["ok"]:
        raise AssertionError(f"base code r={args.r} failed the triorthogonality check")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"generator_r{args.r}.csv").write_text(code.to_csv(), newline="")
        (out / f"generator_r{args.r}.bin").write_bytes(code.to_bytes())
        (out / f"report_r{args.r}.json").write_text(_dumps(report))
    if args.format == "csv":
        if not args.out:
            sys.stdout.write(code.to_csv())
    else:
        if not args.out:
            sys.stdout.write(_dumps(report))
    return EXIT_OK


# --- quantum --------------------------------------------------------------------------------


def _grid(args):
    from .tower_calculus import REFERENCE_JS, REFERENCE_RS

    rs = [args.r] if args.r is not None else list(REFERENCE_RS)
    js = [args.j] if args.j is not None else list(REFERENCE_JS)
    return rs, js


def cmd_quantum(args) -> int:
    from .tower_calculus import (
        TowerLevel,
        classical_params,
        compare_table3,
        load_reference,
        optimize_k,
        quantum_params,
        table3,
        table3_csv,
        table3_json,
    )

    if args.table3 or args.verify_table3 or args.r is None or args.j is None:
        if args.k is not None:
            raise ValueError("--k needs a single --r and --j")
        rs, js = _grid(args)
        rows = table3(rs, js)
        text = table3_csv(rows) if args.format == "csv" else _dumps(table3_json(rows))
        _emit(text, args.out)
        if args.verify_table3:
            problems = compare_table3(rows, load_reference(args.reference))
            if problems:
                raise Mismatch("table mismatch:\n  " + "\n  ".join(problems))
        return EXIT_OK

    level = TowerLevel(args.r, args.j)
    qp = quantum_params(level, args.k) if args.k is not None else optimize_k(level)
    if qp is None:
        raise ValueError(f"no valid K at r={args.r}, j={args.j}")
    cp = classical_params(level)
    payload = {
        "r": qp.r,
        "j": qp.j,
        "code": qp.label(),
        "N": qp.n_phys,
        "K": qp.k_log,
        "D_lower": qp.d_lower,
        "D_x_lower": qp.d_x_lower,
        "rate": f"{qp.rate:.6f}",
        "gamma": f"{qp.gamma_max:.6f}",
        "x1": str(qp.x1),
        "x2": str(qp.x2),
        "classical": {"n": cp.n, "k": cp.k, "d_lower": cp.d_lower, "deg_g": cp.deg_g, "genus": cp.genus},
    }
    if args.emit_stabilizers:
        if args.j != 0:
            raise ValueError("stabilizer matrices are only built for the base level j = 0")
        from .classical_codes import construct_base_code
        from .css_builder import build_css, heuristic_distance_sides

        code = construct_base_code(args.r)
        css = build_css(code, qp.k_log, cp.deg_g, cp.genus)
        payload = css.to_json()
        payload["code"] = qp.label()
        if args.trials:
            dx, dz = heuristic_distance_sides(css, args.trials, args.seed)
            payload["heuristic_upper"] = {"x": dx, "z": dz, "trials": args.trials, "seed": args.seed}
    if args.format == "csv":
        flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
        _emit(_csv([list(flat), list(flat.values())]), args.out)
    else:
        _emit(_dumps(payload), args.out)
    return EXIT_OK


# --- verify-all ------------------------------------------------------------------------------


def _check(name, fn, category="internal"):
    try:
        ok, detail = fn()
    except AssertionError as exc:
        ok, detail, category = False, f"assertion: {exc}", "internal"
    return {"name": name, "ok": bool(ok), "category": category, "detail": detail}


def verify_all(seed: int, reference_path=None) -> list[dict]:
    from fractions import Fraction

    from .classical_codes import construct_base_code, is_triorthogonal
    from .function_field import (
        Divisor,
        base_geometry,
        check_triorthogonality_condition,
        divisor_of_differential,
        eta0_differential,
    )
    from .state_reduction import (
        ProtocolViolation,
        gate_counts,
        multiplier_is_clifford,
        plan_reduction,
        reduction_circuit,
        simulate_reduction,
        trace_identity_check,
    )
    from .tower_calculus import compare_table3, load_reference, table3, tvz_check

    ref = load_reference(reference_path)
    checks = []

    def divisor_check():
        detail = {}
        ok = True
        for r in (8, 16, 32):
            geo = base_geometry(r)
            eta = divisor_of_differential(eta0_differential(r))
            expected = -geo.d0 + Divisor.sum_of(geo.v_places) * (r - 2)
            good = eta == expected and eta.degree == -2
            cond = check_triorthogonality_condition(geo.g0, geo.d0, eta)
            detail[str(r)] = {"divisor": good, "degree": eta.degree, "condition": cond}
            ok &= good and cond
        return ok, detail

    checks.append(_check("differential divisor and triorthogonality condition", divisor_check))

    def base_codes():
        detail, ok = [], True
        for cell in ref["base_codes"]:
            code = construct_base_code(cell["r"])
            from .classical_codes import distance_certificate

            cert = distance_certificate(code)
            got = {"r": cell["r"], "n": code.n, "k": code.k, "d": cert.lower if cert.exact else None}
            detail.append(got)
            ok &= got == {k: cell[k] for k in ("r", "n", "k", "d")}
        return ok, detail

    checks.append(_check("base code parameters", base_codes, "reference"))

    def tri8():
        rep = is_triorthogonal(construct_base_code(8))
        return rep.ok and rep.exhaustive, {"triples": rep.triples_checked, "witness": rep.witness}

    checks.append(_check("exhaustive triorthogonality r=8", tri8))

    def table():
        problems = compare_table3(table3(), ref)
        return not problems, problems

    checks.append(_check("table of quantum parameters", table, "reference"))

    def tvz():
        detail, ok = {}, True
        for r in (8, 16, 32):
            comps = tvz_check(r).comparisons
            detail[str(r)] = {
                name: {"holds": c["holds"], "margin": str(c["margin"]) if isinstance(c["margin"], Fraction) else f"{c['margin']:.6f}"}
                for name, c in comps.items()
            }
            ok &= all(c["holds"] for c in comps.values())
        return ok, detail

    checks.append(_check("asymptotic TVZ / GV comparison", tvz, "reference"))

    def trace():
        detail, ok = {}, True
        for r in (2, 4, 8):
            res = trace_identity_check(r, exhaustive=True)
            detail[str(r)] = res.ok
            ok &= res.ok
        for r in (16, 32):
            res = trace_identity_check(r, exhaustive=False, samples=10**5, seed=seed)
            detail[str(r)] = res.ok
            ok &= res.ok
        return ok, detail

    checks.append(_check("trace decomposition identity", trace))

    def clifford():
        res = {str(r): multiplier_is_clifford(r) for r in (2, 4, 8)}
        return all(res.values()), res

    checks.append(_check("multiplier gates are Clifford", clifford))

    def reduction():
        detail, ok = {}, True
        for r in (2, 4, 8):
            rep = simulate_reduction(r, "all", strict=False)
            try:
                counts = gate_counts(reduction_circuit(r, (1, 1, 1)))
            except ProtocolViolation as exc:
                counts = {"error": str(exc)}
            good_counts = (counts.get("single_qudit"), counts.get("two_qudit")) == (
                ref["reduction_gates"]["single_qudit"],
                ref["reduction_gates"]["two_qudit"],
            )
            detail[str(r)] = {
                "gamma": format(rep.gamma, "x"),
                "outcomes": len(rep.outcomes),
                "min_fidelity": None if rep.min_fidelity != rep.min_fidelity else round(rep.min_fidelity, 12),
                "gate_counts": counts,
                "violations": rep.violations[:3],
            }
            ok &= rep.ok and good_counts
        return ok, detail

    checks.append(_check("state reduction simulation", reduction, "reference"))

    def budgets():
        budget = ref["reduction_budget"]
        worst = {k: max(plan_reduction(n).totals[k] for n in range(1, 65)) for k in budget}
        n1 = plan_reduction(1).totals
        return all(worst[k] <= budget[k] for k in budget) and n1 == budget, {"worst": worst, "n=1": n1}

    checks.append(_check("reduction budgets n=1..64", budgets, "reference"))
    return checks


def cmd_verify_all(args) -> int:
    checks = verify_all(args.seed, args.reference)
    report = {"version": __version__, "seed": args.seed, "checks": checks, "ok": all(c["ok"] for c in checks)}
    text = _dumps(report)
    if not report["ok"]:
        failed = [c for c in checks if not c["ok"]]
        msg = "failed: " + ", ".join(c["name"] for c in failed)
        if any(c["category"] == "internal" for c in failed):
            _emit(text, args.out)
            raise AssertionError(msg)
        raise Mismatch(msg, text)
    _emit(text, args.out)
    return EXIT_OK


# --- reduce-sim / plan --------------------------------------------------------------------------


def _parse_outcomes(text: str, seed: int):
    if text == "all":
        return "all"
    if text.startswith("sample"):
        count = int(text.split(":", 1)[1]) if ":" in text else 1
        return ("sample", seed, count)
    return tuple(int(v) for v in text.split(","))


def cmd_reduce_sim(args) -> int:
    from .state_reduction import simulate_reduction

    rep = simulate_reduction(args.r, _parse_outcomes(args.outcomes, args.seed), strict=False)
    body = rep.to_json()
    if args.format == "csv":
        rows = [["a", "b", "c", "probability", "fidelity_gamma", "fidelity_final", "factorizes"]]
        rows += [[*o.outcome, repr(o.probability), repr(o.fidelity_gamma), repr(o.fidelity_final), int(o.factorizes)] for o in rep.outcomes]
        text = _csv(rows)
    else:
        text = _dumps(body)
    if not rep.ok:
        raise Mismatch("reduction failed: " + "; ".join(rep.violations[:3]), text)
    _emit(text, args.out)
    return EXIT_OK


def cmd_plan(args) -> int:
    from .state_reduction import plan_reduction

    plans = [plan_reduction(n) for n in args.n]
    if args.format == "csv":
        rows = [["n", "distill_dim", "reductions", "chain", "measurements", "single_qudit", "two_qudit"]]
        for p in plans:
            s, t = p.steps[0], p.totals
            rows.append([p.n, s.distill_dim, s.reductions, "->".join(map(str, s.chain)), t["measurements"], t["single_qudit"], t["two_qudit"]])
        text = _csv(rows)
    else:
        body = plans[0].to_json() if len(plans) == 1 else [p.to_json() for p in plans]
        text = _dumps(body)
    _emit(text, args.out)
    return EXIT_OK


# --- parser --------------------------------------------------------------------------------------


def _n_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="agccz", description="Triorthogonal AG codes and |CCZ> state reduction.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="output file (directory for construct)")

    sp = sub.add_parser("construct", help="build a base code and certify it")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--samples", type=int, default=None, help="sampled triorthogonality check size")
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("quantum", help="quantum code parameters and stabilizers")
    sp.add_argument("--r", type=int)
    sp.add_argument("--j", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--table3", action="store_true", help="emit the full parameter table")
    sp.add_argument("--verify-table3", action="store_true", help="compare against the reference table")
    sp.add_argument("--emit-stabilizers", action="store_true")
    sp.add_argument("--trials", type=int, default=0, help="information-set trials for a distance upper bound")
    sp.add_argument("--reference", default=None, help="reference values JSON (defaults to the bundled file)")
    common(sp)
    sp.set_defaults(func=cmd_quantum)

    sp = sub.add_parser("verify-all", help="run the full invariant suite")
    sp.add_argument("--reference", default=None)
    common(sp)
    sp.set_defaults(func=cmd_verify_all)

    sp = sub.add_parser("reduce-sim", help="simulate |CCZ> reduction from GF(r^2) to GF(r)")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--outcomes", default="all", help="all | a,b,c | sample[:count]")
    common(sp)
    sp.set_defaults(func=cmd_reduce_sim)

    sp = sub.add_parser("plan", help="reduction plan for |CCZ> over GF(2^n)")
    sp.add_argument("--n", type=_n_list, required=True, help="n, a list 1,2,3 or a range 1-64")
    common(sp)
    sp.set_defaults(func=cmd_plan)
    return p


def main(argv=None) -> int:
    from .state_reduction import ProtocolViolation

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (Mismatch, ProtocolViolation) as exc:
        payload = getattr(exc, "payload", "")
        if payload:
            _emit(payload, getattr(args, "out", None))
        print(f"agccz: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except AssertionError as exc:
        print(f"agccz: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, MemoryError, OSError) as exc:
        print(f"agccz: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
