"""Command-line entry point: ``eisenzeta {eval, verify, scan} TARGET [--name value ...]``.

Exit codes: 0 success, 1 threshold breach or failed scan row, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import classical as cl
from . import coeffs as cf
from . import eisenstein as es
from . import hypergeom as hg
from . import lerch as lz
from . import qseries as qs
from .numkernel import MINUS, PLUS, CoverPoint, EisenzetaError, EvalResult, Truncation
from .targets import TARGETS, Target, get_target, passed

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- value parsing

def parse_complex(text: str) -> complex:
    """``"re,im"``, ``"mod@argdeg"`` or a plain real number."""
    text = str(text).strip()
    try:
        if "@" in text:
            mod, deg = text.split("@")
            return float(mod) * cmath.exp(1j * math.radians(float(deg)))
        if "," in text:
            re_, im_ = text.split(",")
            return complex(float(re_), float(im_))
        return complex(float(text))
    except ValueError:
        raise UsageError(f"cannot parse complex value {text!r}; use 're,im' or 'mod@argdeg'") from None


def parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"cannot parse boolean {text!r}")


def coerce(kind: str, value):
    """Convert a CLI string or JSON value to the declared parameter kind."""
    if kind == "complex":
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, (int, float, complex)):
            return complex(value)
        return parse_complex(value)
    try:
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
    except (TypeError, ValueError):
        raise UsageError(f"cannot parse {kind} value {value!r}") from None
    if kind == "bool":
        return value if isinstance(value, bool) else parse_bool(value)
    return str(value)


def split_list(kind: str, text: str) -> list[str]:
    """Inline scan lists: ``;`` always separates, ``,`` too unless the kind is complex."""
    if ";" in text:
        return [x for x in text.split(";") if x]
    if kind != "complex" and "," in text:
        return [x for x in text.split(",") if x]
    return [text]


def to_json(x):
    """Complex numbers become ``[re, im]``; non-finite floats become strings."""
    if isinstance(x, complex):
        return [to_json(x.real), to_json(x.imag)]
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, dict):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if hasattr(x, "item"):
        return to_json(x.item())
    return str(x)


# ---------------------------------------------------------------- evaluators

@dataclass(frozen=True)
class Evaluator:
    name: str
    params: dict[str, tuple[str, object]]
    fn: Callable[[dict, Truncation], object]

    def with_defaults(self, given: dict) -> dict:
        unknown = set(given) - set(self.params)
        if unknown:
            raise UsageError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        return {k: given.get(k, d) for k, (_, d) in self.params.items()}


EIS = {"s": ("complex", 6.0 + 0j), "alpha": ("float", 0.3), "beta": ("float", 0.7), "mu": ("float", 0.1),
       "nu": ("float", 0.2), "tau": ("complex", 1.0 + 0j)}
TAU_SMALL = 0.3 * cmath.exp(0.25j * math.pi)
LAT = {"alpha": ("float", 0.3), "beta": ("float", 0.4), "z": ("complex", 1j)}


def _ep(p) -> es.EisensteinParams:
    return es.EisensteinParams(p["s"], p["alpha"], p["beta"], p["mu"], p["nu"], p["tau"])


def _branch(name: str):
    table = {"mean": None, "plus": PLUS, "minus": MINUS}
    if name not in table:
        raise UsageError("branch must be mean, plus or minus")
    return table[name]


def _refined(p, t):
    rr = es.remainder_refined(_ep(p), es.ExpansionOrder(p["J"], p["K"]), t)
    return EvalResult(rr.rstar.value, rr.rstar.error, rr.rstar.terms,
                      [f"qhat_part={rr.qhat_part!r}", f"sstar_part={rr.sstar_part!r}",
                       f"sstar_series={rr.sstar_series!r}"])


def _sj(p, t):
    main, series = es.asymptotic_SJ(_ep(p), es.ExpansionOrder(p["J"]), t)
    return [main, series]


def _wsigma(p, t):
    lf, pf = cl.wsigma(cl.LatticePoint(p["alpha"], p["beta"], p["z"]), t)
    return [lf, pf]


EVALUATORS: dict[str, Evaluator] = {ev.name: ev for ev in [
    Evaluator("f_qform", EIS, lambda p, t: es.f_qform(_ep(p), t)),
    Evaluator("f_brute", {**EIS, "radius": ("int", 1500), "branch": ("str", "mean")},
              lambda p, t: es.f_brute(_ep(p), _branch(p["branch"]), p["radius"])),
    Evaluator("psi_lerch", {"r": ("complex", 2.0 + 0j), "gamma": ("float", 1.0), "kappa": ("float", 0.0),
                            "route": ("str", "auto")},
              lambda p, t: lz.psi_lerch(lz.LerchArgs(p["r"], p["gamma"], p["kappa"]), t, p["route"])),
    Evaluator("hurwitz_zeta", {"r": ("complex", 2.0 + 0j), "a": ("float", 1.0)},
              lambda p, t: lz.hurwitz_zeta(p["r"], p["a"], t)),
    Evaluator("psi_bilateral", {"r": ("complex", 4.0 + 0j), "gamma": ("float", 0.2), "kappa": ("float", 0.0),
                                "branch": ("str", "plus")},
              lambda p, t: lz.psi_bilateral(p["r"], p["gamma"], p["kappa"], _branch(p["branch"]) or PLUS, t)),
    Evaluator("s_eval", {"r": ("complex", 3.0 + 0j), "gamma": ("float", 0.3), "delta": ("float", 0.1),
                         "kappa": ("float", 0.2), "lam": ("float", 0.7), "z": ("complex", 1j),
                         "dual": ("bool", False)},
              lambda p, t: qs.s_eval(qs.SArgs(p["r"], p["gamma"], p["delta"], p["kappa"], p["lam"], p["z"],
                                              p["dual"]), t)),
    Evaluator("coeff_C", {"K": ("int", 6), "X": ("complex", 0j), "Ymod": ("float", 1.0),
                          "Yarg": ("float", math.pi)},
              lambda p, t: list(cf.coeff_C(p["K"], p["X"], CoverPoint(p["Ymod"], p["Yarg"])).entries)),
    Evaluator("upper_incomplete_gamma", {"a": ("complex", 0.5 + 0j), "Z": ("complex", 1.0 + 0j)},
              lambda p, t: hg.upper_incomplete_gamma(p["a"], p["Z"], t)),
    Evaluator("kummer_u", {"a": ("complex", 1.0 + 0j), "c": ("complex", 1.0 + 0j), "Z": ("complex", 1.0 + 0j)},
              lambda p, t: hg.kummer_u(p["a"], p["c"], p["Z"], t)),
    Evaluator("kummer_1f1", {"a": ("complex", 1.0 + 0j), "c": ("complex", 1.0 + 0j), "Z": ("complex", 1.0 + 0j)},
              lambda p, t: hg.kummer_1f1(p["a"], p["c"], p["Z"], t)),
    Evaluator("asymptotic_SJ", {**EIS, "s": ("complex", 2.5 + 0j), "tau": ("complex", TAU_SMALL),
                                "J": ("int", 2)}, _sj),
    Evaluator("remainder_subtraction", {**EIS, "s": ("complex", 2.5 + 0j), "tau": ("complex", TAU_SMALL),
                                        "J": ("int", 2)},
              lambda p, t: es.remainder_subtraction(_ep(p), es.ExpansionOrder(p["J"]), t)),
    Evaluator("remainder_mellin_barnes", {**EIS, "s": ("complex", 3.2 + 0j), "tau": ("complex", TAU_SMALL),
                                          "J": ("int", 1)},
              lambda p, t: es.remainder_mellin_barnes(_ep(p), es.ExpansionOrder(p["J"]), t)),
    Evaluator("remainder_refined", {**EIS, "s": ("complex", 2.5 + 0j), "tau": ("complex", TAU_SMALL),
                                    "J": ("int", 2), "K": ("int", 1)}, _refined),
    Evaluator("E", {"weight": ("int", 4), "z": ("complex", 1j)}, lambda p, t: cl.E(p["weight"], p["z"], t)),
    Evaluator("wp", {**LAT, "route": ("str", "qform"), "radius": ("int", 1500)},
              lambda p, t: cl.wp(cl.LatticePoint(p["alpha"], p["beta"], p["z"]), p["route"], t, p["radius"])),
    Evaluator("wzeta", LAT, lambda p, t: cl.wzeta(cl.LatticePoint(p["alpha"], p["beta"], p["z"]), t)),
    Evaluator("wsigma", LAT, _wsigma),
    Evaluator("invariants_e", {"z": ("complex", 1j)}, lambda p, t: list(cl.invariants_e(p["z"], t))),
]}


# ---------------------------------------------------------------- rows

@dataclass
class Job:
    verb: str
    target: str
    params: dict
    tol: float
    max_terms: int
    threshold: float | None = None
    index: int = 0
    extra: dict = field(default_factory=dict)


def _truncation(job: Job) -> Truncation:
    return Truncation(max_terms=job.max_terms, tol=job.tol)


def _eval_row(job: Job) -> dict:
    ev = EVALUATORS[job.target]
    p = ev.with_defaults(job.params)
    out = ev.fn(p, _truncation(job))
    row = {"params": p}
    if isinstance(out, EvalResult):
        row.update(value=out.value, error_estimate=out.error, terms_used=out.terms, notes=list(out.notes))
    else:
        row.update(value=out, error_estimate=None, terms_used=None, notes=[])
    return row


def _verify_row(job: Job) -> dict:
    tg = get_target(job.target)
    p = tg.with_defaults(job.params)
    out = tg.run(p, _truncation(job))
    limit = job.threshold if job.threshold is not None else (
        out.threshold if out.threshold is not None else tg.threshold)
    ok = passed(tg, out, limit)
    return {"params": p, "report": {"lhs": out.lhs, "rhs": out.rhs, "residual": out.residual,
                                     "measure": out.measure, "threshold": limit, "passed": ok,
                                     "notes": out.notes, "extra": out.extra}}


def run_job(job: Job) -> dict:
    """One row; never raises for package errors."""
    t0 = time.perf_counter()
    head = {"index": job.index, "verb": job.verb, "target": job.target}
    try:
        body = _eval_row(job) if job.verb == "eval" else _verify_row(job)
        status = "ok" if job.verb == "eval" or body["report"]["passed"] else "fail"
        row = {**head, "status": status, **body}
    except (EisenzetaError, UsageError, ValueError, ZeroDivisionError, OverflowError) as exc:
        row = {**head, "status": "error", "params": job.params,
               "error": {"type": type(exc).__name__, "message": str(exc)}}
    row["wall_time"] = time.perf_counter() - t0
    return row


def default_workers() -> int:
    env = os.environ.get("EISENZETA_WORKERS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"EISENZETA_WORKERS must be an integer, got {env!r}") from None


def run_jobs(jobs: list[Job], workers: int) -> list[dict]:
    """Rows in job order regardless of completion order."""
    if workers <= 1 or len(jobs) <= 1:
        return [run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_job, jobs, chunksize=1))


# ---------------------------------------------------------------- argument handling

def _extra_params(tokens: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) <= 2:
            raise UsageError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise UsageError(f"missing value for --{key}")
            val = tokens[i + 1]
            i += 2
        out[key] = val
    return out


def _spec_for(verb: str, target: str) -> dict[str, tuple[str, object]]:
    if verb == "eval":
        if target not in EVALUATORS:
            raise UsageError(f"unknown evaluator {target!r}; known: {', '.join(EVALUATORS)}")
        return EVALUATORS[target].params
    if target not in TARGETS:
        raise UsageError(f"unknown verify target {target!r}; known: {', '.join(TARGETS)}")
    return TARGETS[target].params


def _coerce_all(spec, raw: dict) -> dict:
    unknown = set(raw) - set(spec)
    if unknown:
        raise UsageError(f"unknown parameter(s) {sorted(unknown)}; accepted: {sorted(spec)}")
    return {k: coerce(spec[k][0], v) for k, v in raw.items()}


def _grid_rows(spec, grid: str | None, raw: dict, target: Target | None) -> list[dict]:
    """Cartesian product from a JSON grid file and/or inline lists, or the default grid."""
    if grid in (None, "default") and not raw:
        if target is None:
            raise UsageError("scan eval needs --grid FILE or inline parameter lists")
        return [dict(p) for p in target.grid()]
    lists: dict[str, list] = {}
    if grid not in (None, "default"):
        try:
            with open(grid) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read grid file {grid!r}: {exc}") from None
        if not isinstance(data, dict) or not all(isinstance(v, list) for v in data.values()):
            raise UsageError("grid file must be a JSON object of lists")
        lists.update(data)
    for k, v in raw.items():
        lists[k] = split_list(spec[k][0], v) if k in spec else v
    unknown = set(lists) - set(spec)
    if unknown:
        raise UsageError(f"unknown parameter(s) {sorted(unknown)}; accepted: {sorted(spec)}")
    keys = list(lists)
    return [{k: coerce(spec[k][0], v) for k, v in zip(keys, combo)}
            for combo in itertools.product(*(lists[k] for k in keys))]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv", help="one CSV row per result")
    fmt.add_argument("--text", dest="output", action="store_const", const="text", help="human-readable lines")
    common.add_argument("--tol", type=float, default=1e-15, help="per-evaluation truncation tolerance")
    common.add_argument("--max-terms", type=int, default=400_000, help="per-evaluation term budget")
    common.add_argument("--threshold", type=float, default=None, help="override the verify pass threshold")
    common.add_argument("--workers", type=int, default=None, help="scan concurrency (env EISENZETA_WORKERS)")

    parser = argparse.ArgumentParser(prog="eisenzeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a function at one point")
    p_eval.add_argument("target", help=f"one of: {', '.join(EVALUATORS)}")
    p_ver = sub.add_parser("verify", parents=[common], help="check a named identity at one point")
    p_ver.add_argument("target", help=f"one of: {', '.join(TARGETS)}")
    p_scan = sub.add_parser("scan", parents=[common], help="run eval or verify over a grid")
    p_scan.add_argument("mode", choices=["eval", "verify"])
    p_scan.add_argument("target", nargs="?", default=None)
    p_scan.add_argument("--grid", default=None, help="JSON file of parameter lists, or 'default'")
    p_scan.add_argument("--all", action="store_true", help="every acceptance target on its default grid")
    return parser


def plan(args, raw: dict) -> tuple[dict, list[Job]]:
    """Validate everything and build the job list before any computation."""
    if args.tol < 2.0 ** -50 or args.max_terms < 8:
        raise UsageError("--tol must be >= 2**-50 and --max-terms >= 8")
    base = dict(tol=args.tol, max_terms=args.max_terms, threshold=args.threshold)
    if args.verb in ("eval", "verify"):
        spec = _spec_for(args.verb, args.target)
        params = _coerce_all(spec, raw)
        return params, [Job(args.verb, args.target, params, **base)]
    verb = args.mode
    if args.all:
        if verb != "verify" or args.target is not None or raw:
            raise UsageError("--all takes no target or parameters and only works with 'scan verify'")
        names = [n for n, tg in TARGETS.items() if tg.acceptance]
    else:
        if args.target is None:
            raise UsageError("scan needs a target (or --all)")
        names = [args.target]
    jobs: list[Job] = []
    for name in names:
        spec = _spec_for(verb, name)
        rows = _grid_rows(spec, args.grid, raw, TARGETS.get(name) if verb == "verify" else None)
        for p in rows:
            jobs.append(Job(verb, name, p, index=len(jobs), **base))
    return raw, jobs


def _summary(rows: list[dict]) -> dict:
    res = [r["report"]["residual"] for r in rows if "report" in r]
    finite = [x for x in res if math.isfinite(x)]
    return {"count": len(rows),
            "ok": sum(r["status"] == "ok" for r in rows),
            "failed": sum(r["status"] == "fail" for r in rows),
            "errors": sum(r["status"] == "error" for r in rows),
            "max_residual": max(finite) if finite else None}


def render(report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(to_json(report), indent=2)
    rows = report["results"]
    if output == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "target", "status", "value_re", "value_im", "residual", "threshold", "params"])
        for r in rows:
            v = r.get("value", r.get("report", {}).get("lhs"))
            v = to_json(v) if isinstance(v, complex) else [to_json(v), ""]
            rep = r.get("report", {})
            w.writerow([r["index"], r["target"], r["status"], v[0] if isinstance(v, list) else v,
                        v[1] if isinstance(v, list) else "", to_json(rep.get("residual", "")),
                        to_json(rep.get("threshold", "")), json.dumps(to_json(r["params"]), sort_keys=True)])
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in rows:
        if r["status"] == "error":
            lines.append(f"[{r['index']}] {r['target']}: ERROR {r['error']['type']}: {r['error']['message']}")
        elif "report" in r:
            rep = r["report"]
            lines.append(f"[{r['index']}] {r['target']}: {'PASS' if rep['passed'] else 'FAIL'} "
                         f"residual={rep['residual']:.3e} threshold={rep['threshold']:.1e} ({rep['measure']})")
        else:
            err = r["error_estimate"]
            tail = f" +- {err:.2e}" if err is not None else ""
            lines.append(f"[{r['index']}] {r['target']}: {r['value']}{tail}")
    s = report["summary"]
    lines.append(f"summary: {s['count']} rows, {s['ok']} ok, {s['failed']} failed, {s['errors']} errors, "
                 f"max residual {s['max_residual']}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, rest = parser.parse_known_args(argv)
    output = args.output or "json"
    try:
        raw = _extra_params(rest)
        params, jobs = plan(args, raw)
        workers = args.workers if args.workers is not None else default_workers()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"eisenzeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = run_jobs(jobs, workers)
    command = {"verb": args.verb, "target": getattr(args, "target", None),
               "mode": getattr(args, "mode", None), "all": getattr(args, "all", False),
               "grid": getattr(args, "grid", None), "params": params, "output": output,
               "tol": args.tol, "max_terms": args.max_terms, "threshold": args.threshold}
    report = {"schema_version": SCHEMA_VERSION, "command": command, "results": rows, "summary": _summary(rows)}
    print(render(report, output))
    if args.verb == "scan":
        return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_FAIL
    status = rows[0]["status"]
    if status == "error":
        return EXIT_USAGE
    return EXIT_OK if status == "ok" else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
