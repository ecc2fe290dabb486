"""Command-line front end.

    dyadlab <constants|verify|search|bench> --config PATH [--threads N] [--mode float|exact] [--out DIR]

Exit status: 0 on success, 1 when a verification check fails, 2 on a config error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import verifier as V
from .config import ConfigError, ExperimentConfig, load_config
from .dyadic_model import EXACT, DyadicModel, aggregate
from .exponents import ExponentSequence, conjugate_product, harmonic_sum, regularity_constants
from .function_vectors import WeightVector
from .norm_search import STRONG, WEAK, NormSpec, SearchBudget, estimate_norm
from .operators import maximal
from .sampling import make_rng, random_function, random_weight_vector, to_float_weights
from .weight_constants import (
    a_star_from_weights,
    ap_product_constant,
    rh_constant,
    sp_testing_constant,
)

SCHEMA = 1
COMMANDS = ("constants", "verify", "search", "bench")


# ---------------------------------------------------------------------------
# verify


def _budget(cfg: ExperimentConfig) -> SearchBudget:
    return SearchBudget(cfg.search.restarts, cfg.search.sweeps, cfg.search.step)


def suite_jobs(cfg: ExperimentConfig, model: DyadicModel, W: WeightVector) -> list:
    """One zero-argument callable per report, in config order."""
    seq = W.seq
    Wf = to_float_weights(W)
    s, tol, seed = cfg.samples, cfg.tol, cfg.seed
    jobs = []
    for name in cfg.suites:
        if name == "holder":
            jobs.append(lambda: V.verify_holder(model, seq, s, seed, tol))
        elif name == "theorem_ap":
            jobs.append(lambda: V.verify_theorem_ap(model, W, s, cfg.lambda_grid, seed, tol))
        elif name == "classical":
            omega = Wf.omega[0] if Wf.omega else Wf.v
            for p in cfg.classical_p:
                def job(p=p):
                    rep = V.verify_classical(model, omega, Fraction(p), s, seed, tol, _budget(cfg))
                    rep.suite = f"classical[p={p}]"
                    return rep
                jobs.append(job)
        elif name == "universal":
            jobs.append(lambda: V.verify_universal(model, s, seed, tol))
        elif name == "carleson":
            jobs.append(lambda: V.verify_carleson(model, Wf, s, seed, tol))
        elif name == "sp":
            jobs.append(lambda: V.verify_sp(model, Wf, s, seed, tol, _budget(cfg)))
        elif name == "corollary_astar":
            jobs.append(lambda: V.verify_corollary_astar(model, Wf, s, seed, tol, cfg.corollary_v))
    return jobs


def run_verify(cfg: ExperimentConfig, threads: int) -> list[V.VerificationReport]:
    model = cfg.build_model()
    W = cfg.build_weights(model)
    jobs = suite_jobs(cfg, model, W)
    if threads <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job(), jobs))


# ---------------------------------------------------------------------------
# constants


def _safe(name: str, fn) -> dict:
    try:
        return fn()
    except (ValueError, TypeError, ArithmeticError) as exc:
        return {"name": name, "error": str(exc)}


def run_constants(cfg: ExperimentConfig) -> list[dict]:
    model = cfg.build_model()
    W = cfg.build_weights(model)
    seq = W.seq
    out = []
    hs = harmonic_sum(seq)
    out.append({"name": "harmonic_sum", "value": float(hs.p), "exact": str(hs.p),
                "tail_bound": float(hs.tail_bound), "attaining_cube": None})
    cp = conjugate_product(seq)
    out.append({"name": "conjugate_product", "value": cp.value, "remainder_bound": cp.remainder_bound,
                "attaining_cube": None})
    reg = regularity_constants(seq)
    out.append({"name": "regularity", "log_sum": reg.log_sum.value, "log_sum_status": reg.log_sum.status,
                "value": reg.grafakos_product, "remainder_bound": reg.remainder_bound, "attaining_cube": None})
    out.append(_safe("A_p_vector", lambda: ap_product_constant(model, W).to_dict()))
    out.append(_safe("RH_p_vector", lambda: rh_constant(model, W).to_dict()))
    out.append(_safe("S_p_vector", lambda: sp_testing_constant(model, W).to_dict()))

    def astar():
        value, reports = a_star_from_weights(model, W)
        d = {"name": "A_star", "value": float(value), "attaining_cube": None,
             "coordinates": [r.to_dict() for r in reports]}
        if W.mode == EXACT:
            d["exact"] = repr(value)
        return d
    out.append(_safe("A_star", astar))
    return out


# ---------------------------------------------------------------------------
# search


def run_search(cfg: ExperimentConfig) -> list[dict]:
    model = cfg.build_model()
    W = cfg.build_weights(model)
    Wf = to_float_weights(W)
    out = []
    weak = estimate_norm(model, NormSpec(WEAK, W), _budget(cfg), cfg.seed)
    d = weak.to_dict()
    d["upper_bound"] = float(ap_product_constant(model, W).value)
    out.append(d)
    strong = estimate_norm(model, NormSpec(STRONG, Wf), _budget(cfg), cfg.seed)
    d = strong.to_dict()
    seq = W.seq
    d["upper_bound"] = (float(sp_testing_constant(model, Wf).value)
                        * float(rh_constant(model, Wf).value) ** float(seq.inv_p)
                        * (lambda e: e.value + e.remainder_bound)(conjugate_product(seq)))
    out.append(d)
    return out


# ---------------------------------------------------------------------------
# bench


def _best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def run_bench(cfg: ExperimentConfig) -> list[dict]:
    """Timings of the tree sweeps; ratio = (time ratio) / (cube-count ratio) between consecutive K."""
    seq = ExponentSequence((Fraction(2), Fraction(2)))
    rows = []
    prev: dict = {}
    for K in cfg.bench.K:
        model = DyadicModel(cfg.bench.n, K)
        rng = make_rng(cfg.seed, 9, K)
        f = random_function(rng, model)
        W = random_weight_vector(rng, model, seq)
        ops = {"aggregate": lambda: aggregate(model, f),
               "maximal": lambda: maximal(model, f),
               "sp_testing": lambda: sp_testing_constant(model, W)}
        for op, fn in ops.items():
            t = _best_time(fn, cfg.bench.repeats)
            row = {"op": op, "n": model.n, "K": K, "cubes": model.cube_count,
                   "seconds": t, "ns_per_cube": 1e9 * t / model.cube_count, "ratio": None}
            if op in prev:
                p = prev[op]
                row["ratio"] = (t / p["seconds"]) / (model.cube_count / p["cubes"])
            row["within_2x"] = None if row["ratio"] is None else 0.5 <= row["ratio"] <= 2.0
            prev[op] = row
            rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# output


def report_json(command: str, cfg: ExperimentConfig, body, timestamp: str | None = None) -> str:
    doc = {"schema": SCHEMA, "command": command,
           "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(),
           "config": cfg.to_dict(), "results": body}
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def checks_csv(reports: list[V.VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check", "lhs", "rhs", "margin", "pass"])
    for rep in reports:
        for c in rep.checks:
            w.writerow([rep.suite, c.description, repr(c.lhs), repr(c.rhs), repr(c.margin),
                        "true" if c.passed else "false"])
    return buf.getvalue()


def rows_csv(rows: list[dict]) -> str:
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys and not isinstance(r[k], (dict, list))]
    buf = io.StringIO()
    w = csv.DictWriter(buf, keys, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def verify_text(reports: list[V.VerificationReport], witness_files: dict[str, str]) -> str:
    lines = []
    for rep in reports:
        status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
        lines.append(f"[{status}] {rep.suite} (seed {rep.seed})")
        if rep.skipped:
            lines.append(f"    skipped: {rep.skipped}")
        for c in rep.checks:
            tag = "info" if c.informative else ("ok" if c.passed else "FAIL")
            lines.append(f"    {tag:4s} {c.description}: lhs={c.lhs:.10g} rhs={c.rhs:.10g} "
                         f"n={c.samples} failures={c.failures}")
        if rep.suite in witness_files:
            lines.append(f"    witness file: {witness_files[rep.suite]}")
    return "\n".join(lines) + "\n"


def rows_text(rows: list[dict]) -> str:
    lines = []
    for r in rows:
        parts = [f"{k}={v}" for k, v in r.items() if not isinstance(v, (dict, list))]
        lines.append("  ".join(parts))
    return "\n".join(lines) + "\n"


def emit_report(command: str, cfg: ExperimentConfig, body, out_dir: Path, formats,
                text: str, csv_text: str) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    payloads = {"json": report_json(command, cfg, body), "csv": csv_text, "text": text}
    suffix = {"json": ".json", "csv": ".csv", "text": ".txt"}
    for fmt in formats:
        path = out_dir / f"{command}{suffix[fmt]}"
        path.write_text(payloads[fmt])
        written[fmt] = path
    return written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="dyadlab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--mode", choices=("float", "exact"))
    parser.add_argument("--out")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.mode:
            cfg.mode = args.mode
        out_dir = Path(args.out) if args.out else cfg.resolve(cfg.output.get("dir", "out"))
        formats = cfg.output.get("formats", ["json", "csv", "text"])
        if args.command == "verify":
            reports = run_verify(cfg, args.threads)
        elif args.command == "constants":
            rows = run_constants(cfg)
        elif args.command == "search":
            rows = run_search(cfg)
        else:
            rows = run_bench(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command != "verify":
        text = rows_text(rows)
        emit_report(args.command, cfg, rows, out_dir, formats, text, rows_csv(rows))
        sys.stdout.write(text)
        return 0

    witness_files = {}
    out_dir.mkdir(parents=True, exist_ok=True)
    for rep in reports:
        if not rep.passed:
            path = out_dir / f"witness_{rep.suite}.json"
            path.write_text(json.dumps(rep.witnesses, indent=2, sort_keys=True, default=_json_default) + "\n")
            witness_files[rep.suite] = str(path)
    text = verify_text(reports, witness_files)
    emit_report("verify", cfg, [r.to_dict() for r in reports], out_dir, formats, text, checks_csv(reports))
    sys.stdout.write(text)
    failed = [(r, c) for r in reports for c in r.failing()]
    for rep, c in failed:
        print(f"FAILED {rep.suite}: {c.description} (lhs={c.lhs:.10g}, rhs={c.rhs:.10g}); "
              f"witness file: {witness_files[rep.suite]}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
