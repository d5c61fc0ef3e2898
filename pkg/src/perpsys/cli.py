"""Command-line entry point: ``perpsys pipeline | verify | polarity-search | check-witness``."""
import argparse
import json
import logging
import sys

from . import __version__, _kernels, pipeline as pl, verify
from .errors import PerpsysError, WitnessNotFoundError
from .forms import QuadraticForm, QuadricType, classify_quadric, verify_perp_system
from .gf import Matrix

log = logging.getLogger("perpsys")

STAGE_HELP = "1 (Gram family on the seed lines), 4 (L), 5 (F5 and <C,D>), 6 (F6), 15 (F15)"


def _seed_index(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= k < 24:
        raise argparse.ArgumentTypeError(f"seed index must be in 0..23, got {k}")
    return k


def _nonneg(text):
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return k


def _positive(text):
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return k


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed-index", type=_seed_index, default=0,
                        help="which of the 24 lines of L completes F5 (default 0)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--jobs", type=_positive, default=1,
                        help="threads for the fixed-line scans; never changes output")
    common.add_argument("--quiet", action="store_true", help="no report on stdout, only the exit code")
    common.add_argument("--timings", action="store_true",
                        help="fill timings_ms (makes JSON output run-dependent)")

    parser = argparse.ArgumentParser(prog="perpsys",
                                     description="Mathon's perp-system of PG(5,3), built and verified.")
    parser.add_argument("--version", action="version", version=f"perpsys {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("pipeline", parents=[common], help="run every stage and check")
    v = sub.add_parser("verify", parents=[common], help="run the checks of one stage")
    v.add_argument("lemma", type=int, choices=sorted(verify.STAGE_SECTIONS), help=STAGE_HELP)
    s = sub.add_parser("polarity-search", parents=[common],
                       help="find hyperbolic and elliptic quadrics making M a perp-system")
    s.add_argument("--budget", type=_nonneg, default=100_000, help="random fallback samples")
    s.add_argument("--search-seed", type=int, default=1)
    s.add_argument("--search-group", choices=("cyclic", "full"), default="cyclic",
                   help="invariant forms of each cyclic subgroup, or of the whole group")
    s.add_argument("--max-dim", type=_nonneg, default=9,
                   help="largest invariant space enumerated exhaustively")
    c = sub.add_parser("check-witness", parents=[common],
                       help="re-verify witnesses from a polarity-search JSON report")
    c.add_argument("path")
    return parser


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    elif not args.quiet:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def render_sections(report, secs):
    lines = [f"perpsys {report['command']}  seed_index={report['seed_index']}  backend={_kernels.BACKEND}"]
    for sec in secs:
        lines.append("")
        lines.append(f"[{'PASS' if sec.passed else 'FAIL'}] {sec.title}")
        for c in sec.checks:
            mark = "ok " if c.passed else "BAD"
            val = "" if c.value is None or len(str(c.value)) > 80 else f"  ({c.value})"
            lines.append(f"  {mark} {c.name}{val}")
    if report.get("assumptions"):
        lines.append("")
        lines.append("assumed, not verified:")
        lines.extend(f"  - {a}" for a in report["assumptions"])
    if report.get("timings_ms"):
        lines.append("")
        lines.append("timings (ms): " + ", ".join(f"{k}={v}" for k, v in report["timings_ms"].items()))
    lines.append("")
    lines.append("RESULT: " + ("all checks passed" if report["ok"] else "FAILED"))
    return "\n".join(lines) + "\n"


def cmd_pipeline(args, sections=verify.SECTIONS, command="pipeline"):
    report, secs = verify.full_report(args.seed_index, args.jobs, args.timings, sections, command)
    if command == "verify":
        report["lemma"] = args.lemma
    _emit(args, _dump(report) if args.format == "json" else render_sections(report, secs))
    return 0 if report["ok"] else 1


def cmd_verify(args):
    return cmd_pipeline(args, verify.STAGE_SECTIONS[args.lemma], "verify")


def reverify_witness(entry, M21):
    """Rebuild a witness from its JSON and recheck type, point count and perp-system."""
    qf = QuadraticForm(Matrix(entry["sym"], 3))
    kind, count = classify_quadric(qf)
    rep = verify_perp_system(M21, qf)
    ok = (kind.value == entry["type"] and count == entry["singular_points"]
          and rep.is_partial_perp_system and rep.is_maximal)
    return ok, {"type": kind.value, "singular_points": count, "perp_system": rep.to_json()}


def _polarity_report(args, result, M21):
    witnesses = json.loads(json.dumps(result.to_json()["witnesses"]))
    rever = {k: reverify_witness(w, M21) for k, w in witnesses.items()}
    ok = (set(witnesses) == {QuadricType.HYPERBOLIC.value, QuadricType.ELLIPTIC.value}
          and all(r[0] for r in rever.values()))
    return {
        "schema_version": verify.SCHEMA_VERSION,
        "command": "polarity-search",
        "seed_index": args.seed_index,
        "ok": ok,
        "search": {"budget": args.budget, "search_seed": args.search_seed,
                   "subgroups": args.search_group, "max_dim": args.max_dim,
                   "invariant_candidates": result.invariant_candidates,
                   "random_candidates": result.random_candidates,
                   "subgroups_scanned": result.subgroups_scanned},
        "M21": M21.to_json(),
        "witnesses": witnesses,
        "reverified": {k: {"pass": r[0], **r[1]} for k, r in rever.items()},
    }


def _polarity_text(rep):
    lines = [f"perpsys polarity-search  seed_index={rep['seed_index']}"]
    s = rep["search"]
    lines.append(f"searched {s['invariant_candidates']} invariant forms in {s['subgroups_scanned']} "
                 f"subgroup spaces and {s['random_candidates']} random matrices")
    for kind, w in rep["witnesses"].items():
        r = rep["reverified"][kind]
        lines.append("")
        lines.append(f"[{'PASS' if r['pass'] else 'FAIL'}] {kind}: {w['singular_points']} singular points")
        lines.append(f"  source: {w['source']}")
        lines.extend("  " + " ".join(str(x) for x in row) for row in w["sym"])
        lines.append(f"  re-verified from JSON: type={r['type']} points={r['singular_points']} "
                     f"perp-system={r['perp_system']['is_maximal']}")
    if rep.get("error"):
        lines.append("")
        lines.append(f"error: {rep['error']}")
    lines.append("")
    lines.append("RESULT: " + ("both witnesses verified" if rep["ok"] else "FAILED"))
    return "\n".join(lines) + "\n"


def cmd_polarity_search(args):
    c = pl.construct(args.seed_index, args.jobs)
    try:
        result = pl.find_epsilon_polarities(c.M21, c.group, budget=args.budget,
                                            seed=args.search_seed, max_dim=args.max_dim,
                                            subgroups=args.search_group)
        error = None
    except WitnessNotFoundError as e:
        result, error = e.result, str(e)
        log.error("%s", e)
    rep = _polarity_report(args, result, c.M21)
    if error:
        rep["ok"] = False
        rep["error"] = error
    _emit(args, _dump(rep) if args.format == "json" else _polarity_text(rep))
    return 0 if rep["ok"] else 1


def cmd_check_witness(args):
    with open(args.path) as fh:
        data = json.load(fh)
    M21 = pl.LineSet.from_json("M21", data["M21"])
    c = pl.construct(data.get("seed_index", 0), args.jobs)
    same = M21.as_set() == c.M21.as_set()
    rever = {k: reverify_witness(w, M21) for k, w in data.get("witnesses", {}).items()}
    ok = same and len(rever) == 2 and all(r[0] for r in rever.values())
    rep = {"schema_version": verify.SCHEMA_VERSION, "command": "check-witness",
           "seed_index": data.get("seed_index", 0), "ok": ok, "M21_matches_construction": same,
           "reverified": {k: {"pass": r[0], **r[1]} for k, r in rever.items()}}
    if args.format == "json":
        text = _dump(rep)
    else:
        text = "".join(f"[{'PASS' if r[0] else 'FAIL'}] {k}: {r[1]['singular_points']} singular points\n"
                       for k, r in rever.items())
        text += f"M matches construction: {same}\nRESULT: {'ok' if ok else 'FAILED'}\n"
    _emit(args, text)
    return 0 if ok else 1


COMMANDS = {"pipeline": cmd_pipeline, "verify": cmd_verify,
            "polarity-search": cmd_polarity_search, "check-witness": cmd_check_witness}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (OSError, json.JSONDecodeError, KeyError) as e:
        log.error("%s", e)
        return 2
    except PerpsysError as e:
        log.error("%s: %s", type(e).__name__, e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
