"""Command-line entry point: lint, run, score, stats, ensemble.

Exit codes: 0 success, 1 domain failure (violations found, empty data,
incomplete run), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from umwelt_lab import __version__
from umwelt_lab.errors import AuthenticationError, BudgetExceededError, ConfigError, DataError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240601


def _emit(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
    if path and path != "-":
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _lint_inputs(paths: list[str]) -> list[tuple[str, str]]:
    if not paths or paths == ["-"]:
        return [("<stdin>", sys.stdin.read())]
    out = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            files = sorted(f for f in path.rglob("*") if f.is_file() and f.suffix in (".txt", ".md", ""))
        elif path.is_file():
            files = [path]
        else:
            raise ConfigError(f"no such file or directory: {p}")
        out += [(str(f), f.read_text("utf-8")) for f in files]
    return out


def cmd_lint(args) -> int:
    from umwelt_lab.constraints.checkers import CheckerConfig, validate

    config = CheckerConfig(quote_exempt=args.quote_exempt, flag_have_to=not args.allow_have_to)
    reports, total = [], 0
    for name, text in _lint_inputs(args.paths):
        rep = validate(args.constraint, text, config)
        total += rep.count
        reports.append({"file": name, **rep.to_dict()})
        if not args.json:
            print(f"{name}: {rep.count} violation(s) [{args.constraint}]")
            for v in rep.violations:
                line = text.count("\n", 0, v.span[0]) + 1
                col = v.span[0] - (text.rfind("\n", 0, v.span[0]) + 1) + 1
                print(f"  {line}:{col}  {text[v.span[0]:v.span[1]]!r}  ({v.rule})")
    summary = {"constraint": args.constraint, "total": total, "files": reports}
    if args.json or args.output:
        _emit(summary, args.output)
    return EXIT_OK if total == 0 else EXIT_FAIL


def cmd_run(args) -> int:
    from umwelt_lab.runner.run import load_config, run_experiment

    config = load_config(args.config)
    overrides = {}
    if args.no_requeue:
        overrides["requeue_errors"] = False
    if args.concurrency is not None:
        if args.concurrency < 1:
            raise ConfigError("--concurrency must be at least 1")
        overrides["concurrency"] = args.concurrency
    if args.seed is not None:
        overrides["seed"] = args.seed
    config = replace(config, **overrides)

    def progress(done: int, total: int) -> None:
        if not args.quiet:
            print(f"\r{done}/{total} trials", end="", file=sys.stderr, flush=True)

    summary = run_experiment(config, progress=progress)
    if not args.quiet and summary.executed:
        print(file=sys.stderr)
    _emit(summary.to_dict(), args.output)
    return EXIT_OK if summary.completed == summary.planned else EXIT_FAIL


def _load_records(path: str):
    from umwelt_lab.runner.ledger import read_ledger

    if not Path(path).exists():
        raise ConfigError(f"ledger not found: {path}")
    contents = read_ledger(path)
    if contents.quarantined:
        print(f"warning: {contents.quarantined} corrupt ledger line(s) quarantined", file=sys.stderr)
    return contents.records


def cmd_score(args) -> int:
    from umwelt_lab.constraints.registry import load_registry
    from umwelt_lab.runner.ledger import write_records
    from umwelt_lab.runner.models import load_bank
    from umwelt_lab.runner.run import score_response

    records = _load_records(args.ledger)
    if not records:
        print("ledger holds no records", file=sys.stderr)
        return EXIT_FAIL
    out = Path(args.out)
    if out.resolve() == Path(args.ledger).resolve():
        raise ConfigError("--out must differ from the input ledger; ledgers are append-only")
    if out.exists():
        raise ConfigError(f"refusing to overwrite existing file {out}")
    items = {it.id: it for it in load_bank(args.bank)}
    registry = load_registry(args.registry)
    rescored = []
    for rec in records:
        if rec.ok:
            item = items.get(rec.key.item_id)
            if item is None:
                raise DataError(f"ledger item {rec.key.item_id!r} missing from the bank")
            rec = score_response(rec, item, registry.condition(rec.key.condition))
        rescored.append(rec)
    write_records(out, rescored, durable=True)
    print(f"re-scored {len(rescored)} record(s) into {out}", file=sys.stderr)
    return EXIT_OK


def cmd_stats(args) -> int:
    from umwelt_lab.stats.report import build_report, render_text
    from umwelt_lab.stats.tables import compliance_filter

    records = _load_records(args.ledger)
    if not records:
        print("ledger holds no records", file=sys.stderr)
        return EXIT_FAIL
    if args.compliance_filter:
        kept = compliance_filter(records, args.compliance_filter)
        print(f"compliance filter {args.compliance_filter}: N retained = {len(kept)}", file=sys.stderr)
        records = [r for r in records if r.key.condition != args.compliance_filter] + kept
    report = build_report(
        records, resamples=args.resamples, seed=args.seed, standardizer=args.d_standardizer
    )
    if not report["accuracy"]:
        print("no scoreable trials in ledger", file=sys.stderr)
        _emit(report, args.report)
        return EXIT_FAIL
    _emit(report, args.report)
    if args.text:
        Path(args.text).write_text(render_text(report), encoding="utf-8")
    elif args.report and args.report != "-":
        sys.stdout.write(render_text(report))
    return EXIT_OK


def _matrix_from_claims(args):
    from umwelt_lab.ensemble.judge import Finding, build_coverage, divergence_map, endpoint_judge
    from umwelt_lab.runner.models import ModelEndpoint

    if not (args.findings and args.judge):
        raise ConfigError("--claims needs --findings and --judge")
    outputs = {}
    for line in Path(args.claims).read_text("utf-8").splitlines():
        if line.strip():
            row = json.loads(line)
            outputs[(row["agent"], row["problem_id"])] = row["output"]
    findings = [
        Finding(**json.loads(line)) for line in Path(args.findings).read_text("utf-8").splitlines() if line.strip()
    ]
    judge = endpoint_judge(ModelEndpoint(**json.loads(Path(args.judge).read_text("utf-8"))))
    result = build_coverage(outputs, findings, judge, max_workers=args.concurrency or 8)
    extra = {"judge_failures": result.failures}
    if args.jaccard_basis == "clusters":
        dmap = divergence_map(result.claims, judge)
        extra["divergence"] = dmap.to_dict()
        extra["cluster_matrix"] = dmap.as_matrix()
    return result.matrix, extra


def cmd_ensemble(args) -> int:
    from umwelt_lab.ensemble.coverage import load_matrix, synthetic_matrix
    from umwelt_lab.ensemble.report import analyze, render_text
    from umwelt_lab.ensemble.selection import jaccard_pairs

    extra = {}
    if args.claims:
        matrix, extra = _matrix_from_claims(args)
    elif args.matrix:
        matrix = load_matrix(args.matrix)
    else:
        matrix = synthetic_matrix()
    if not 1 <= args.k <= matrix.n_agents:
        raise ConfigError(f"-k must lie in 1..{matrix.n_agents}")
    report = analyze(matrix, args.k)
    cluster_matrix = extra.pop("cluster_matrix", None)
    if cluster_matrix is not None:
        report["jaccard"] = jaccard_pairs(cluster_matrix).to_dict()
        report["jaccard_basis"] = "clusters"
    else:
        report["jaccard_basis"] = "findings"
    report.update(extra)
    if args.export_csv:
        Path(args.export_csv).write_text(matrix.to_csv(), encoding="utf-8")
    _emit(report, args.report)
    if args.report and args.report != "-":
        sys.stdout.write(render_text(report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="umwelt-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="check text for E-Prime / No-Have violations")
    lint.add_argument("paths", nargs="*", help="files or directories; '-' or none reads stdin")
    lint.add_argument("-c", "--constraint", choices=("e_prime", "no_have"), default="e_prime")
    lint.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    lint.add_argument("--quote-exempt", action="store_true", help="skip violations inside double quotes")
    lint.add_argument("--allow-have-to", action="store_true", help="do not flag obligation 'have to'")
    lint.add_argument("-o", "--output", help="also write the JSON report here")
    lint.set_defaults(func=cmd_lint)

    run = sub.add_parser("run", help="execute or resume a trial grid")
    run.add_argument("config", help="run config JSON")
    run.add_argument("--no-requeue", action="store_true", help="leave failed trials failed on resume")
    run.add_argument("--concurrency", type=int, help="max in-flight requests (default from config, else 8)")
    run.add_argument("--seed", type=int, help="seed for retry jitter")
    run.add_argument("-o", "--output", help="write the run summary JSON here (default stdout)")
    run.add_argument("-q", "--quiet", action="store_true")
    run.set_defaults(func=cmd_run)

    score = sub.add_parser("score", help="re-extract and re-score a ledger into a new ledger")
    score.add_argument("ledger")
    score.add_argument("--bank", required=True, help="task bank JSON used for ground truth")
    score.add_argument("--out", required=True, help="new ledger path (must not exist)")
    score.add_argument("--registry", help="registry JSON (default: shipped registry)")
    score.set_defaults(func=cmd_score)

    stats = sub.add_parser("stats", help="accuracy, effects, word counts, correlations")
    stats.add_argument("ledger")
    stats.add_argument("-r", "--report", help="JSON report path (default stdout)")
    stats.add_argument("--text", help="also write aligned-text tables here")
    stats.add_argument("--seed", type=int, default=DEFAULT_SEED)
    stats.add_argument("--resamples", type=int, default=10_000)
    stats.add_argument("--compliance-filter", choices=("e_prime", "no_have"), help="keep only zero-violation trials of this condition")
    stats.add_argument("--d-standardizer", choices=("pooled", "average"), default="pooled")
    stats.set_defaults(func=cmd_stats)

    ens = sub.add_parser("ensemble", help="Shapley, Jaccard, greedy minimal ensemble, k-subset test")
    src = ens.add_mutually_exclusive_group()
    src.add_argument("--matrix", help="coverage matrix (.json or .csv); default: shipped synthetic matrix")
    src.add_argument("--claims", help="JSON-Lines {agent, problem_id, output} to judge into a matrix")
    ens.add_argument("--findings", help="JSON-Lines findings {id, problem_id, description}")
    ens.add_argument("--judge", help="judge endpoint JSON")
    ens.add_argument("-k", type=int, default=3)
    ens.add_argument("--jaccard-basis", choices=("findings", "clusters"), default="findings")
    ens.add_argument("--concurrency", type=int)
    ens.add_argument("--seed", type=int, default=DEFAULT_SEED, help="accepted for uniformity; analysis is exact")
    ens.add_argument("--export-csv", help="write the coverage matrix as CSV")
    ens.add_argument("-r", "--report", help="JSON report path (default stdout)")
    ens.set_defaults(func=cmd_ensemble)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, AuthenticationError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
