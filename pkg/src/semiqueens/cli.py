"""Command-line surface.

Subcommands: count, fourier, sparseval, majorarcs, bounds, verify,
asymptotics, montecarlo, reproduce-3003, bench.  Every command emits a
deterministic document as json (default), csv, or text; timing fields
(``timing_ms``, ``elapsed_ms``) are excluded from the determinism
contract.  Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource or precision exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import EvenOrderError, LimitExceeded, MemoCapacityExceeded, PrecisionExhausted

CACHE_ENV = "SEMIQUEENS_CACHE_DIR"

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    """Parsed options shared across subcommands."""

    subcommand: str
    n: int | None
    n_range: list[int] | None
    char: str | None
    method: str
    precision: int
    threads: int
    seed: int
    epsilon: float | None
    entropy_cut: float | None
    series_terms: int | None
    long: bool
    cache: str | None
    fmt: str
    out: str | None

    def __post_init__(self) -> None:
        if self.precision < 64:
            raise LimitExceeded("precision must be at least 64 bits")
        if self.threads < 1:
            raise LimitExceeded("threads must be positive")


def _parse_range(text: str, odd_only: bool = False) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("ranges look like a:b or a:b:s")
    a, b = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else (2 if odd_only else 1)
    values = list(range(a, b + 1, step))
    if odd_only:
        values = [v for v in values if v % 2 == 1]
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--n-range", type=str, default=None, metavar="A:B:S")
    common.add_argument("--char", type=str, default=None, help='canonical form, e.g. "n=7;(0^3,1/7^2,3/7^2)"')
    common.add_argument("--method", type=str, default="auto")
    common.add_argument("--precision", type=int, default=256)
    common.add_argument("--threads", type=int, default=max(1, os.cpu_count() or 1))
    common.add_argument("--seed", type=int, default=2024)
    common.add_argument("--epsilon", type=float, default=None)
    common.add_argument("--R", dest="entropy_cut", type=float, default=None)
    common.add_argument("--M", dest="series_terms", type=int, default=None)
    common.add_argument("--long", action="store_true")
    common.add_argument("--cache", type=str, default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", type=str, default=None)

    parser = argparse.ArgumentParser(prog="semiqueens", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("count", parents=[common], help="orthomorphism / additive-triple counts")
    p.add_argument("--mode", choices=("backtrack", "direct"), default="backtrack")
    p.add_argument("--group", type=str, default=None, help="cyclic factors, e.g. 3x3")
    p.add_argument("--symmetry", action="store_true", help="fix pi(0)=0 and multiply by n")

    sub.add_parser("fourier", parents=[common], help="one coefficient by a chosen method")

    p = sub.add_parser("sparseval", parents=[common], help="sparse second moments by all routes")
    p.add_argument("--all-m", action="store_true")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--routes", type=str, default="exact,series,recurrence")
    p.add_argument("--check-bound", action="store_true")

    p = sub.add_parser("majorarcs", parents=[common], help="main-term checks and the singular series")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--singular-series", action="store_true")
    p.add_argument("--report", choices=("json", "csv", "text"), default=None)

    p = sub.add_parser("bounds", parents=[common], help="bound suites at one order")
    p.add_argument("--suite", type=str, default="all")
    p.add_argument("--json", dest="json_out", type=str, default=None)
    p.add_argument("--config", type=str, default=None, help="pinned-constant overrides (JSON)")

    sub.add_parser("verify", parents=[common], help="all suites; exit 0 iff everything passes")
    sub.add_parser("asymptotics", parents=[common], help="count ratios toward the limiting constant")

    p = sub.add_parser("montecarlo", parents=[common], help="random bijection-pair collision estimate")
    p.add_argument("--samples", type=int, default=10**6)

    sub.add_parser("reproduce-3003", parents=[common], help="the large structured reproduction (long mode)")
    sub.add_parser("bench", parents=[common], help="quick kernel timings")
    return parser


def _config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        n=args.n,
        n_range=_parse_range(args.n_range) if args.n_range else None,
        char=args.char,
        method=args.method,
        precision=args.precision,
        threads=args.threads,
        seed=args.seed,
        epsilon=args.epsilon,
        entropy_cut=args.entropy_cut,
        series_terms=args.series_terms,
        long=args.long,
        cache=args.cache,
        fmt=args.fmt,
        out=args.out,
    )


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _rows_for_csv(doc: dict) -> list[dict]:
    if "rows" in doc:
        return doc["rows"]
    if "suites" in doc:
        return [
            {"suite": s["name"], "status": s["status"], "checks": len(s["checks"])}
            for s in doc["suites"]
        ]
    if "reports" in doc:
        return doc["reports"]
    return [{"key": k, "value": json.dumps(v, sort_keys=True)} for k, v in sorted(doc.items())]


def emit(doc: dict, fmt: str, out: str | None) -> str:
    if fmt == "json":
        text = json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"
    elif fmt == "csv":
        rows = _rows_for_csv(doc)
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=sorted({k for r in rows for k in r}))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _json_default(v) if isinstance(v, Fraction) else v for k, v in row.items()})
        text = buf.getvalue()
    else:
        lines = []
        for key, value in sorted(doc.items()):
            lines.append(f"{key}: {json.dumps(value, sort_keys=True, default=_json_default)}")
        text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return text


def _json_default(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    import mpmath as mp

    if isinstance(value, mp.mpf):
        return mp.nstr(value, 15)
    raise TypeError(f"not JSON serializable: {type(value)}")


def _cache_path(cfg: RunConfig, n: int) -> Path | None:
    if cfg.cache:
        return Path(cfg.cache)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env) / f"coeffs-n{n}.jsonl"
    return None


# ---------------------------------------------------------------------------
# Command bodies
# ---------------------------------------------------------------------------


def _cmd_count(cfg: RunConfig, args) -> tuple[dict, int]:
    from .oracles import GroupSpec, count_general_group, count_orthomorphisms, count_triples_direct

    if args.group:
        spec = GroupSpec.parse(args.group)
        t0 = time.perf_counter()
        s_value = count_general_group(spec)
        doc = {
            "group": spec.text(),
            "order": spec.order,
            "s": str(s_value),
            "elapsed_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        }
        return doc, EXIT_OK
    n = cfg.n if cfg.n is not None else 7
    if args.mode == "direct":
        t0 = time.perf_counter()
        s_n = count_triples_direct(n)
        from math import factorial

        doc = {
            "n": n,
            "mode": "direct",
            "orthomorphisms": s_n // factorial(n),
            "s_n": str(s_n),
            "elapsed_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        }
    else:
        result = count_orthomorphisms(n, use_shift_symmetry=args.symmetry)
        doc = {
            "n": n,
            "mode": "backtrack",
            "orthomorphisms": result.orthomorphisms,
            "s_n": str(result.s_n),
            "elapsed_ms": round(result.elapsed_ms, 3),
        }
    return doc, EXIT_OK


def _cmd_fourier(cfg: RunConfig) -> tuple[dict, int]:
    from .cache import CoefficientCache
    from .characters import CharacterMultiset
    from .fourier import FourierRecursion, FourierValue, fourier_by_partitions
    from .oracles import fourier_brute
    from .structured import structured_coefficient

    if not cfg.char:
        raise LimitExceeded("fourier needs --char")
    chi = CharacterMultiset.parse(cfg.char)
    method = cfg.method
    if method == "auto":
        method = "partition" if chi.sparsity <= 12 else "recursion"
    t0 = time.perf_counter()
    cache = None
    path = _cache_path(cfg, chi.n)
    if path is not None:
        cache = CoefficientCache(path, chi.n)
    if method == "brute":
        scaled = fourier_brute(chi)
        as_int = scaled.to_int()
        value = FourierValue(chi, "brute", scaled=as_int if as_int is not None else scaled)
    elif method == "partition":
        value = fourier_by_partitions(chi)
    elif method == "recursion":
        value = FourierRecursion(chi.n, cache=cache).coefficient(chi)
    elif method in ("dp", "dft"):
        value = structured_coefficient(chi, strategy=method, precision=cfg.precision, threads=cfg.threads)
    else:
        raise LimitExceeded(f"unknown method {cfg.method!r}")
    if cache is not None and isinstance(value.scaled, int):
        cache.put(chi.text(), value.method, value.scaled)
    doc = value.to_dict()
    doc["timing_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    return doc, EXIT_OK


def _cmd_sparseval(cfg: RunConfig, args) -> tuple[dict, int]:
    from .sparseval import sweep_rows

    n = cfg.n if cfg.n is not None else 30
    routes = tuple(r.strip() for r in args.routes.split(",") if r.strip())
    rows = sweep_rows(n, routes, args.check_bound)
    if args.m is not None and not args.all_m:
        rows = [r for r in rows if r["m"] == args.m]
    ok = all(r.get("bound_pass", True) and r.get("series_equal", True) and r.get("recurrence_equal", True) for r in rows)
    return {"schema": "semiqueens-sparseval/1", "n": n, "routes": list(routes), "rows": rows, "passed": ok}, (
        EXIT_OK if ok else EXIT_VERIFY_FAIL
    )


def _cmd_majorarcs(cfg: RunConfig, args) -> tuple[dict, int]:
    from .majorarcs import main_vs_exact, singular_series

    if args.singular_series:
        terms = cfg.series_terms if cfg.series_terms is not None else 12
        import mpmath as mp

        with mp.workdps(30):
            value = singular_series(terms)
            target = mp.e ** mp.mpf("-0.5")
            doc = {
                "schema": "semiqueens-majorarcs/1",
                "terms": terms,
                "value": mp.nstr(value, 12),
                "e_minus_half": mp.nstr(target, 12),
                "abs_delta": float(abs(value - target)),
            }
        return doc, EXIT_OK
    ns = cfg.n_range or ([cfg.n] if cfg.n else [5, 7, 9, 11])
    ns = [n for n in ns if n % 2 == 1]
    rows = []
    ok = True
    for n in sorted(ns):
        report = main_vs_exact(args.m, n, cfg.long)
        ratio = report.error_ratio
        rows.append(
            {
                "n": n,
                "m": args.m,
                "exact_sum": report.exact_sum,
                "main_term": report.main_value,
                "error_ratio": ratio,
            }
        )
    return {"schema": "semiqueens-majorarcs/1", "m": args.m, "rows": rows, "passed": ok}, EXIT_OK


def _cmd_bounds(cfg: RunConfig, args) -> tuple[dict, int]:
    from . import bounds as bounds_mod
    from .config import load_config

    n = cfg.n if cfg.n is not None else 7
    pins = load_config(args.config)
    use_long = cfg.long and n > 7
    wanted = args.suite.split(",") if args.suite != "all" else [
        "entropy", "srh", "tail", "um", "linfty", "matrix", "census", "region",
    ]
    reports = []
    if "entropy" in wanted:
        reports += [r.to_dict() | {"suite": "entropy"} for r in bounds_mod.entropy_bound_reports(n, use_long)]
    if "srh" in wanted:
        reports += [r.to_dict() | {"suite": "srh"} for r in bounds_mod.sqrt_cancellation_reports(n, use_long)]
    if "tail" in wanted:
        reports += [
            bounds_mod.tail_bound_report(n, t, use_long).to_dict() | {"suite": "tail"} for t in (1, 2, 3, 10)
        ]
    if "um" in wanted:
        reports += [
            r.to_dict() | {"suite": "um"} for r in bounds_mod.sparse_max_domination_reports(n, max(2, n // 3), use_long)
        ]
    if "linfty" in wanted:
        reports += [
            r.to_dict() | {"suite": "linfty"}
            for r in bounds_mod.linfty_ratio_reports(n, pins["linfty_c"], use_long)
        ]
    if "matrix" in wanted:
        reports += [
            bounds_mod.matrix_identity_report(m, nn).to_dict() | {"suite": "matrix"}
            for nn in sorted({n, 30, 60})
            for m in range(3, nn // 3 + 1)
        ]
    doc = {"schema": "semiqueens-bounds/1", "n": n, "reports": reports}
    if "census" in wanted:
        doc["census"] = bounds_mod.entropy_census(n, (1e-9, 0.5, 1.0, 2.0))
    if "region" in wanted and n <= 7 and n % 2 == 1:
        region = bounds_mod.region_decomposition(
            n,
            cfg.epsilon if cfg.epsilon is not None else pins["epsilon"],
            cfg.entropy_cut if cfg.entropy_cut is not None else pins["entropy_cut"],
            cfg.series_terms,
        )
        doc["region"] = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in region.items()}
    passed = all(r["passed"] for r in reports)
    doc["passed"] = passed
    if args.json_out:
        cfg.out = args.json_out
        cfg.fmt = "json"
    return doc, EXIT_OK if passed else EXIT_VERIFY_FAIL


def _cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    from .verify import run_verify

    n = cfg.n if cfg.n is not None else 5
    doc = run_verify(
        n,
        long=cfg.long,
        threads=cfg.threads,
        epsilon=cfg.epsilon,
        cut=cfg.entropy_cut,
        series_terms=cfg.series_terms,
    )
    return doc, EXIT_OK if doc["passed"] else EXIT_VERIFY_FAIL


def _cmd_asymptotics(cfg: RunConfig) -> tuple[dict, int]:
    from .verify import run_asymptotics

    ns = cfg.n_range or [3, 5, 7, 9, 11, 13]
    ns = [n for n in ns if n % 2 == 1]
    return run_asymptotics(ns, cfg.threads), EXIT_OK


def _cmd_montecarlo(cfg: RunConfig, args) -> tuple[dict, int]:
    from math import factorial

    from .oracles import count_orthomorphisms, monte_carlo_collision

    n = cfg.n if cfg.n is not None else 9
    t0 = time.perf_counter()
    p_hat, stderr = monte_carlo_collision(n, args.samples, cfg.seed, cfg.threads)
    doc = {
        "schema": "semiqueens-montecarlo/1",
        "n": n,
        "samples": args.samples,
        "seed": cfg.seed,
        "p_hat": p_hat,
        "stderr": stderr,
        "timing_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }
    if n <= 15 and n % 2 == 1:
        exact = Fraction(count_orthomorphisms(n).orthomorphisms, factorial(n))
        doc["p_exact"] = f"{exact.numerator}/{exact.denominator}"
        doc["within_3_sigma"] = bool(abs(p_hat - float(exact)) <= 3 * stderr) if stderr else p_hat == float(exact)
    if n % 2 == 0:
        doc["p_exact"] = "0"
        doc["within_3_sigma"] = p_hat == 0.0
    ok = doc.get("within_3_sigma", True)
    return doc, EXIT_OK if ok else EXIT_VERIFY_FAIL


def _cmd_reproduce(cfg: RunConfig) -> tuple[dict, int]:
    from .verify import run_reproduction

    doc = run_reproduction(precision=cfg.precision if cfg.long else 8192, threads=cfg.threads, sibling_only=not cfg.long)
    return doc, EXIT_OK if doc["passed"] else EXIT_VERIFY_FAIL


def _cmd_bench(cfg: RunConfig) -> tuple[dict, int]:
    from .characters import CharacterMultiset
    from .fourier import fourier_by_partitions, parseval_sum
    from .oracles import count_orthomorphisms, fourier_brute
    from .sparseval import sparse_moment_exact
    from .structured import structured_coefficient, third_division_character

    rows = []

    def timed(name: str, fn) -> None:
        t0 = time.perf_counter()
        fn()
        rows.append({"kernel": name, "timing_ms": round((time.perf_counter() - t0) * 1000.0, 3)})

    timed("orthomorphisms n=9", lambda: count_orthomorphisms(9))
    timed("parseval n=5", lambda: parseval_sum(5))
    chi = CharacterMultiset.parse("n=7;(0^4,1/7^1,2/7^1,4/7^1)")
    timed("brute coefficient n=7 m=3", lambda: fourier_brute(chi))
    timed("partition coefficient n=7 m=3", lambda: fourier_by_partitions(chi))
    timed("sparse moment n=30 all m", lambda: [sparse_moment_exact(m, 30) for m in range(31)])
    timed("structured dp n=33", lambda: structured_coefficient(third_division_character(33), strategy="dp"))
    return {"schema": "semiqueens-bench/1", "rows": rows}, EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        if cfg.subcommand == "count":
            doc, code = _cmd_count(cfg, args)
        elif cfg.subcommand == "fourier":
            doc, code = _cmd_fourier(cfg)
        elif cfg.subcommand == "sparseval":
            doc, code = _cmd_sparseval(cfg, args)
        elif cfg.subcommand == "majorarcs":
            doc, code = _cmd_majorarcs(cfg, args)
        elif cfg.subcommand == "bounds":
            doc, code = _cmd_bounds(cfg, args)
        elif cfg.subcommand == "verify":
            doc, code = _cmd_verify(cfg)
        elif cfg.subcommand == "asymptotics":
            doc, code = _cmd_asymptotics(cfg)
        elif cfg.subcommand == "montecarlo":
            doc, code = _cmd_montecarlo(cfg, args)
        elif cfg.subcommand == "reproduce-3003":
            doc, code = _cmd_reproduce(cfg)
        elif cfg.subcommand == "bench":
            doc, code = _cmd_bench(cfg)
        else:  # pragma: no cover - argparse guards this
            return EXIT_USAGE
    except (LimitExceeded, EvenOrderError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionExhausted, MemoCapacityExceeded) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    fmt = args.report if getattr(args, "report", None) else cfg.fmt
    emit(doc, fmt, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
