"""Command-line entry point: generate, measure, synthesize, verify, search.

Every subcommand prints a single JSON document on standard output, except
``gen`` and ``export-dot`` which emit automaton text or DOT when asked.
Exit codes: 0 on success, 1 when the queried property fails to hold (no
reset word, digraph not strongly connected, check came back false), 2 on
usage errors — and nothing is printed to standard output on exit 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .core import Dfa, dfa_to_json_dict, format_dfa_text, loads_dfa
from .families import build_family, cb, f
from .monoid import generates_symmetric_group, has_full_transition_monoid
from .pairgraph import (
    build_pair_digraph,
    diameter,
    pair_certificate,
    pair_digraph_dot,
    pair_distance,
    verify_certificate,
)
from .search import (
    SearchConfig,
    SearchMode,
    max_reset_threshold_exhaustive,
    random_pair_diameter_experiment,
    random_rt_experiment,
    record_to_json_dict,
    summarize_results,
)
from .sync import (
    EXACT_CAP,
    NOT_SYNCHRONIZING,
    cb_reset_word,
    extension_reset_word,
    pairchase_reset_word,
    reset_threshold_exact,
)

_FAMILIES = ("cerny", "cb", "v", "rystsov", "f")


class _UsageError(Exception):
    pass


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="ascii")


def _default_workers() -> int:
    raw = os.environ.get("SYNCHROKIT_WORKERS")
    if raw is None:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise _UsageError(f"SYNCHROKIT_WORKERS must be an integer, got {raw!r}")
    if workers < 1:
        raise _UsageError("SYNCHROKIT_WORKERS must be positive")
    return workers


def _build_family(family: str, n: int | None, k: int) -> Dfa:
    if n is None:
        raise _UsageError("--family requires --n")
    try:
        return build_family(family, n, k if family == "cb" else None)
    except ValueError as exc:
        raise _UsageError(str(exc))


def _load_input(args: argparse.Namespace) -> Dfa:
    """One automaton from a positional path/stdin or ``--family``."""
    has_file = getattr(args, "input", None) is not None
    if has_file and args.family is not None:
        raise _UsageError("give either an input file or --family, not both")
    if has_file:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            path = Path(args.input)
            if not path.exists():
                raise _UsageError(f"no such file: {args.input}")
            text = path.read_text(encoding="utf-8")
        try:
            return loads_dfa(text)
        except ValueError as exc:
            raise _UsageError(f"cannot parse automaton: {exc}")
    if args.family is not None:
        return _build_family(args.family, args.n, getattr(args, "k", 1))
    raise _UsageError("expected an input file (or '-') or --family/--n")


def _add_input_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("input", nargs="?", help="automaton file (text or JSON), '-' for stdin")
    sub.add_argument("--family", choices=_FAMILIES, help="generate the input instead")
    sub.add_argument("--n", type=int, help="state count for --family")
    sub.add_argument("--k", type=int, default=1, help="second parameter of the cb family")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.family is None:
        raise _UsageError("gen requires --family")
    d = _build_family(args.family, args.n, args.k)
    if args.format == "json":
        _write_output(json.dumps(dfa_to_json_dict(d), indent=2, sort_keys=True) + "\n", args.output)
    else:
        _write_output(format_dfa_text(d), args.output)
    return 0


def _cmd_rt(args: argparse.Namespace) -> int:
    d = _load_input(args)
    try:
        result = reset_threshold_exact(d, cap=args.cap)
    except ValueError as exc:
        raise _UsageError(str(exc))
    if result is NOT_SYNCHRONIZING:
        _print_json({"n": d.n, "synchronizing": False, "rt": None, "word": None})
        print("automaton is not synchronizing", file=sys.stderr)
        return 1
    rt, word = result
    _print_json(
        {
            "n": d.n,
            "synchronizing": True,
            "rt": rt,
            "word": list(word.names(d)),
            "method": "exact_bfs",
        }
    )
    return 0


def _cmd_word(args: argparse.Namespace) -> int:
    if args.method == "cb":
        if args.input is not None:
            raise _UsageError("--method cb synthesizes from --n/--k, not from an input file")
        if args.family not in (None, "cb"):
            raise _UsageError("--method cb works only with the cb family")
        if args.n is None:
            raise _UsageError("--method cb requires --n (and optionally --k)")
        try:
            result = cb_reset_word(args.n, args.k)
        except ValueError as exc:
            raise _UsageError(str(exc))
        d = cb(args.n, args.k)
    else:
        d = _load_input(args)
        try:
            if args.method == "exact":
                exact = reset_threshold_exact(d, cap=args.cap)
                if exact is NOT_SYNCHRONIZING:
                    _print_json({"n": d.n, "synchronizing": False, "word": None})
                    print("automaton is not synchronizing", file=sys.stderr)
                    return 1
                rt, word = exact
                _print_json(
                    {
                        "n": d.n,
                        "synchronizing": True,
                        "length": rt,
                        "word": list(word.names(d)),
                        "method": "exact_bfs",
                        "verified": True,
                    }
                )
                return 0
            if args.method == "pairchase":
                result = pairchase_reset_word(d)
            else:
                result = extension_reset_word(d)
        except ValueError as exc:
            _print_json({"n": d.n, "error": str(exc)})
            print(str(exc), file=sys.stderr)
            return 1
    _print_json(
        {
            "n": d.n,
            "synchronizing": True,
            "length": result.length,
            "word": list(result.word.names(d)),
            "method": result.method.value,
            "verified": result.verified,
        }
    )
    return 0


def _cmd_monoid_check(args: argparse.Namespace) -> int:
    d = _load_input(args)
    perm_letters = d.permutation_letters()
    perms = [d.transformation(i) for i in perm_letters]
    names = d.letter_names()
    generates = bool(perms) and generates_symmetric_group(perms, d.n)
    full = has_full_transition_monoid(d)
    _print_json(
        {
            "n": d.n,
            "permutation_letters": [names[i] for i in perm_letters],
            "rank_n_minus_one_letters": [names[i] for i in d.rank_n_minus_one_letters()],
            "permutations_generate_symmetric_group": generates,
            "full_transition_monoid": full,
        }
    )
    return 0 if full else 1


def _cmd_pair_diam(args: argparse.Namespace) -> int:
    if args.experiment is not None:
        if args.n is None:
            raise _UsageError("--experiment requires --n")
        mode = SearchMode.RANDOM if args.experiment == "random" else SearchMode.EXHAUSTIVE
        try:
            cfg = SearchConfig(
                n=args.n,
                mode=mode,
                trials=args.trials,
                seed=args.seed,
                output_path=args.out,
                allow_large=mode is SearchMode.EXHAUSTIVE and args.n > 7,
            )
            summary = random_pair_diameter_experiment(cfg)
        except ValueError as exc:
            raise _UsageError(str(exc))
        _print_json(summary)
        return 0
    d = _load_input(args)
    p = build_pair_digraph(d)
    result = diameter(p)
    if not result.strongly_connected:
        _print_json(
            {
                "n": d.n,
                "vertices": p.num_vertices,
                "strongly_connected": False,
                "diameter": None,
                "unreachable": {"source": list(result.source), "target": list(result.target)},
            }
        )
        print("pair digraph is not strongly connected", file=sys.stderr)
        return 1
    _print_json(
        {
            "n": d.n,
            "vertices": p.num_vertices,
            "strongly_connected": True,
            "diameter": result.value,
            "source": list(result.source),
            "target": list(result.target),
            "word": list(result.word.names(d)),
            "argmax_count": len(result.argmax),
        }
    )
    return 0


def _cmd_certify(args: argparse.Namespace) -> int:
    if args.family != "f":
        raise _UsageError("certificates exist for the f family only")
    if args.n is None:
        raise _UsageError("certify requires --n")
    try:
        cert = pair_certificate(args.n)
        d = f(args.n)
    except ValueError as exc:
        raise _UsageError(str(exc))
    p = build_pair_digraph(d)
    check = verify_certificate(p, cert)
    reached = pair_distance(p, cert.start, cert.target)
    bfs_distance = reached[0] if reached is not None else None
    payload = {
        "n": args.n,
        "valid": check.valid,
        "bound": cert.bound(),
        "bfs_distance": bfs_distance,
        "tight": check.valid and bfs_distance == cert.bound(),
        "start_pair": list(cert.start),
        "target_pair": list(cert.target),
    }
    if check.counterexample is not None:
        pair, letter, image = check.counterexample
        payload["counterexample"] = {"pair": list(pair), "letter": letter, "image": list(image)}
    _print_json(payload)
    return 0 if check.valid else 1


def _cmd_search(args: argparse.Namespace) -> int:
    if args.action == "summarize":
        if args.file is None:
            raise _UsageError("search summarize needs a results file")
        try:
            _print_json(summarize_results(args.file))
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise _UsageError(str(exc))
        return 0
    if args.file is not None:
        raise _UsageError("unexpected positional argument; did you mean 'search summarize FILE'?")
    if args.n is None or args.mode is None:
        raise _UsageError("search needs --n and --mode")
    workers = args.workers if args.workers is not None else _default_workers()
    try:
        if args.mode == "exhaustive":
            max_rt, record = max_reset_threshold_exhaustive(
                args.n,
                workers=workers,
                output_path=args.out,
                resume=not args.no_resume,
                allow_large=args.allow_large,
            )
            payload = {"n": args.n, "mode": "exhaustive", "max_rt": max_rt}
            payload["record"] = {
                key: value
                for key, value in record_to_json_dict(record).items()
                if key != "type"
            }
            _print_json(payload)
        else:
            cfg = SearchConfig(
                n=args.n,
                mode=SearchMode.RANDOM,
                trials=args.trials,
                seed=args.seed,
                workers=workers,
                output_path=args.out,
            )
            _print_json(
                random_rt_experiment(
                    cfg,
                    sample_nonperm=args.sample_nonperm,
                    require_symmetric=not args.unconditioned,
                )
            )
    except ValueError as exc:
        raise _UsageError(str(exc))
    return 0


def _dfa_dot(d: Dfa, zero_based: bool) -> str:
    if zero_based or d.state_labels is None:
        labels = [str(i) for i in range(d.n)]
    else:
        labels = list(d.state_labels)
    lines = ["digraph dfa {", "  rankdir=LR;"]
    for i, label in enumerate(labels):
        lines.append(f'  {i} [label="{label}"];')
    for src in range(d.n):
        grouped: dict[int, list[str]] = {}
        for name, t in d.letters:
            grouped.setdefault(t.images[src], []).append(name)
        for dst, names in sorted(grouped.items()):
            lines.append(f'  {src} -> {dst} [label="{",".join(names)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_export_dot(args: argparse.Namespace) -> int:
    d = _load_input(args)
    if args.certificate and not args.pair_digraph:
        raise _UsageError("--certificate only applies with --pair-digraph")
    if args.pair_digraph:
        values = None
        if args.certificate:
            if args.family != "f":
                raise _UsageError("--certificate requires --family f")
            try:
                values = pair_certificate(args.n)
            except ValueError as exc:
                raise _UsageError(str(exc))
        text = pair_digraph_dot(build_pair_digraph(d), values)
    else:
        text = _dfa_dot(d, args.zero_based_labels)
    _write_output(text, args.output)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synchrokit",
        description="Synchronizing automata: families, reset words, monoid and diameter tools.",
    )
    parser.add_argument("--version", action="version", version=f"synchrokit {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = commands.add_parser("gen", help="emit a benchmark family automaton")
    gen.add_argument("--family", choices=_FAMILIES, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--format", choices=("text", "json"), default="text")
    gen.add_argument("-o", "--output", help="write here instead of stdout")
    gen.set_defaults(handler=_cmd_gen)

    rt = commands.add_parser("rt", help="exact reset threshold by subset BFS")
    _add_input_options(rt)
    rt.add_argument("--cap", type=int, default=EXACT_CAP, help="largest n accepted")
    rt.set_defaults(handler=_cmd_rt)

    word = commands.add_parser("word", help="synthesize a verified reset word")
    _add_input_options(word)
    word.add_argument(
        "--method",
        choices=("exact", "pairchase", "extension", "cb"),
        default="pairchase",
    )
    word.add_argument("--cap", type=int, default=EXACT_CAP, help="largest n for --method exact")
    word.set_defaults(handler=_cmd_word)

    mon = commands.add_parser("monoid-check", help="full-transition-monoid test")
    _add_input_options(mon)
    mon.set_defaults(handler=_cmd_monoid_check)

    pd = commands.add_parser("pair-diam", help="pair-digraph diameter (one automaton or an experiment)")
    _add_input_options(pd)
    pd.add_argument("--experiment", choices=("random", "exhaustive"))
    pd.add_argument("--trials", type=int, default=100)
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("--out", help="JSON-lines output file for experiments")
    pd.set_defaults(handler=_cmd_pair_diam)

    cert = commands.add_parser("certify", help="verify the descent certificate and its tightness")
    cert.add_argument("--family", choices=_FAMILIES, required=True)
    cert.add_argument("--n", type=int)
    cert.set_defaults(handler=_cmd_certify)

    search = commands.add_parser("search", help="reset-threshold census and random experiments")
    search.add_argument("action", nargs="?", choices=("summarize",), help="'summarize' digests a results file")
    search.add_argument("file", nargs="?", help="results file for summarize")
    search.add_argument("--n", type=int)
    search.add_argument("--mode", choices=("exhaustive", "random"))
    search.add_argument("--trials", type=int, default=1000)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--workers", type=int, help="defaults to SYNCHROKIT_WORKERS or 1")
    search.add_argument("--out", help="JSON-lines journal / results file")
    search.add_argument("--allow-large", action="store_true", help="lift the exhaustive n cap")
    search.add_argument("--no-resume", action="store_true", help="ignore an existing journal")
    search.add_argument("--sample-nonperm", action="store_true", help="sample the non-permutation letter too")
    search.add_argument(
        "--unconditioned",
        action="store_true",
        help="keep permutation pairs that do not generate the symmetric group",
    )
    search.set_defaults(handler=_cmd_search)

    dot = commands.add_parser("export-dot", help="DOT rendering of the automaton or its pair digraph")
    _add_input_options(dot)
    dot.add_argument("--pair-digraph", action="store_true")
    dot.add_argument("--certificate", action="store_true", help="annotate pairs with certificate values")
    dot.add_argument("--zero-based-labels", action="store_true")
    dot.add_argument("-o", "--output", help="write here instead of stdout")
    dot.set_defaults(handler=_cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"synchrokit: error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    sys.exit(main())
