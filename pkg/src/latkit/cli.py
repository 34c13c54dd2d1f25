"""Command-line front end.

Four subcommands: ``check`` runs analyzers over a lattice, ``build`` runs an
extension construction and writes the result, ``eval`` decides a
quasi-identity by exhaustive search, ``corpus`` sweeps enumerated lattices
through a property suite.  Reports go to stdout as JSON and are byte-identical
across runs on identical inputs; progress and timings go to stderr.

Exit codes: 0 success (for ``eval``: the quasi-identity holds; for ``corpus``:
no violation), 1 a quasi-identity failed or a corpus suite found a violation,
2 input parse or validation failure, 3 a construction precondition failed
(``build`` only), with the error name in the report.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import combinations

from . import __version__
from .core import FiniteLattice, LatticeError
from .analysis import (
    biatomicity_problems,
    is_atomistic,
    is_biatomic,
    is_join_semidistributive,
    is_lower_bounded,
    jsd_violation,
)
from .generators import boolean, chain, co_chain, enumerate_lattices, sub_meet_semilattice
from .geometry import PointConfiguration, co_points, five_point_configuration
from .qid import BUILTINS, QidSyntaxError, evaluate, format_qid, parse_qid
from .extend import (
    biatomic_completion,
    jsd_extension_criteria,
    make_extension_pair,
    one_atom_extension,
    partial_biatomization,
    solve_one_problem,
)

GEN_GRAMMAR = "boolean:n | chain:n | co-chain:n | co-points:<file|paper5> | subsemi:<file> | enum:n"

PRECONDITION_ERRORS = (
    "PreconditionFailed",
    "BadApex",
    "NotMeetClosed",
    "MissingFilter",
    "SeparationFailed",
    "MinimalityFailed",
    "NotJsdBase",
    "BadTriple",
    "ReValidationFailed",
    "NoLeastDecomposition",
)


class _InputError(Exception):
    """Input could not be parsed or validated (exit code 2)."""


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _int_arg(spec: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise _InputError(f"bad generator spec {spec!r}: {text!r} is not an integer") from None


def load_lattices(gen: str | None, file: str | None) -> list[tuple[str, FiniteLattice]]:
    """Resolve a lattice source to a list of (name, lattice).

    Most sources give one lattice; ``enum:n`` gives every lattice with
    exactly n elements, one name per index.
    """
    if (gen is None) == (file is None):
        raise _InputError("exactly one of --gen and --file is required")
    if file is not None:
        try:
            return [(file, FiniteLattice.from_json(_read_text(file)))]
        except LatticeError as exc:
            raise _InputError(str(exc)) from None
    head, sep, tail = gen.partition(":")
    if not sep:
        raise _InputError(f"bad generator spec {gen!r}; grammar: {GEN_GRAMMAR}")
    try:
        if head == "boolean":
            return [(gen, boolean(_int_arg(gen, tail)))]
        if head == "chain":
            return [(gen, chain(_int_arg(gen, tail)))]
        if head == "co-chain":
            return [(gen, co_chain(_int_arg(gen, tail)))]
        if head == "co-points":
            if tail == "paper5":
                cfg = five_point_configuration()
            else:
                cfg = PointConfiguration.from_json(_read_text(tail))
            return [(gen, co_points(cfg))]
        if head == "subsemi":
            base = FiniteLattice.from_json(_read_text(tail))
            return [(gen, sub_meet_semilattice(base))]
        if head == "enum":
            n = _int_arg(gen, tail)
            return [
                (f"enum:{n}:{i}", L) for i, L in enumerate(enumerate_lattices(n))
            ]
    except LatticeError as exc:
        raise _InputError(str(exc)) from None
    raise _InputError(f"unknown generator {head!r}; grammar: {GEN_GRAMMAR}")


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _note(message: str) -> None:
    sys.stderr.write(message + "\n")


def _error_report(command: str, args, kind: str, message: str) -> dict:
    return {
        "command": command,
        "error": {"type": kind, "message": message},
        "inputs": _inputs(args),
        "version": __version__,
    }


def _inputs(args) -> dict:
    skip = {"func", "command"}
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and value is not None
    }


def _lattice_json(L: FiniteLattice) -> dict:
    return json.loads(L.to_json())


# -- check ----------------------------------------------------------------------

ALL_PROPS = ("atomistic", "biatomic", "jsd", "lower-bounded", "problems")


def _run_props(L: FiniteLattice, props) -> dict:
    out: dict = {"size": L.n}
    for prop in props:
        if prop == "atomistic":
            out["atomistic"] = is_atomistic(L)
        elif prop == "biatomic":
            out["biatomic"] = is_biatomic(L)
        elif prop == "jsd":
            verdict = is_join_semidistributive(L)
            out["jsd"] = verdict
            if not verdict:
                x, y, z = jsd_violation(L)
                out["jsd_witness"] = {
                    "x": L.labels[x],
                    "y": L.labels[y],
                    "z": L.labels[z],
                }
        elif prop == "lower-bounded":
            out["lower-bounded"] = is_lower_bounded(L)
        elif prop == "problems":
            rows = []
            for item in biatomicity_problems(L):
                row = {
                    "p": L.labels[item.p],
                    "a": L.labels[item.a],
                    "b": L.labels[item.b],
                    "solved": item.solved,
                }
                if item.solution is not None:
                    row["solution"] = [L.labels[x] for x in item.solution]
                rows.append(row)
            out["problems"] = rows
            out["unsolved_problems"] = sum(1 for r in rows if not r["solved"])
        else:
            raise _InputError(
                f"unknown property {prop!r}; choose from {', '.join(ALL_PROPS)}"
            )
    return out


def cmd_check(args) -> int:
    t0 = time.monotonic()
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    lattices = load_lattices(args.gen, args.file)
    results = {}
    for name, L in lattices:
        results[name] = _run_props(L, props)
        _note(f"check {name}: n={L.n}")
    _emit(
        {
            "command": "check",
            "inputs": _inputs(args),
            "results": results,
            "version": __version__,
        }
    )
    _note(f"checked {len(lattices)} lattice(s) in {time.monotonic() - t0:.2f}s")
    return 0


# -- build ----------------------------------------------------------------------


def _split_labels(text: str) -> list[str]:
    # commas inside {...} or [...] belong to the label, not the list
    out, depth, current = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(current).strip())
            current = []
            continue
        if ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
        current.append(ch)
    out.append("".join(current).strip())
    return [x for x in out if x]


def _parse_label_list(L: FiniteLattice, text: str) -> list[int]:
    out = []
    for label in _split_labels(text):
        try:
            out.append(L.index(label))
        except LatticeError:
            raise _InputError(f"no element labelled {label!r}") from None
    return out


def cmd_build(args) -> int:
    t0 = time.monotonic()
    lattices = load_lattices(args.gen, args.file)
    if len(lattices) != 1:
        raise _InputError("build needs a source naming exactly one lattice")
    name, L = lattices[0]

    results: dict = {"source": name, "input_size": L.n}
    trace_rows: list[dict] = []
    if args.op == "biatomic-completion":
        result, emb = biatomic_completion(L)
        results["doubled"] = (result.n - L.n) // 2
    elif args.op == "one-atom":
        if args.apex is None or args.subsemilattice is None:
            raise _InputError("one-atom needs --apex and --subsemilattice")
        try:
            apex = L.index(args.apex.strip())
        except LatticeError:
            raise _InputError(f"no element labelled {args.apex!r}") from None
        members = _parse_label_list(L, args.subsemilattice)
        pair = make_extension_pair(L, apex, members)
        ext = one_atom_extension(pair)
        result, emb = ext.result, ext.embedding
        results["new_atom"] = result.labels[ext.new_atom]
        # invariants enforced by the constructor, re-stated for the report
        results["checks"] = {
            "every_element_original_or_fresh_join": True,
            "fresh_atom_below_exactly_apex_filter": True,
            "joins_with_fresh_atom_realize_closure": True,
        }
        verdict, witness = jsd_extension_criteria(pair)
        results["jsd_preserving"] = verdict
        if witness is not None:
            results["jsd_witness"] = [
                witness[0],
                *[L.labels[x] for x in witness[1:]],
            ]
    elif args.op == "biatomize":
        result, emb, steps = partial_biatomization(L)
        trace_rows = [step.as_dict() for step in steps]
        results["steps"] = len(steps)
    else:  # pragma: no cover - argparse restricts choices
        raise _InputError(f"unknown construction {args.op!r}")

    results["output_size"] = result.n
    results["embedding_preserves"] = emb.preserved.as_dict()
    results["output"] = {
        "atomistic": is_atomistic(result),
        "biatomic": is_biatomic(result),
        "jsd": is_join_semidistributive(result),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(result.to_json() + "\n")
        results["out"] = args.out
    else:
        results["lattice"] = _lattice_json(result)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as handle:
            for row in trace_rows:
                handle.write(json.dumps(row, sort_keys=True) + "\n")
        results["trace"] = args.trace
    elif trace_rows:
        results["trace_rows"] = trace_rows

    _emit(
        {
            "command": "build",
            "inputs": _inputs(args),
            "results": results,
            "version": __version__,
        }
    )
    _note(
        f"build {args.op} on {name}: {L.n} -> {result.n} elements "
        f"in {time.monotonic() - t0:.2f}s"
    )
    return 0


# -- eval -----------------------------------------------------------------------


def _load_qid(spec: str):
    head, sep, tail = spec.partition(":")
    if head == "builtin" and sep:
        try:
            return BUILTINS[tail]()
        except KeyError:
            raise _InputError(
                f"unknown builtin {tail!r}; have {', '.join(sorted(BUILTINS))}"
            ) from None
    if head == "file" and sep:
        try:
            return parse_qid(_read_text(tail))
        except QidSyntaxError as exc:
            raise _InputError(f"{tail}: {exc}") from None
    raise _InputError(f"bad qid spec {spec!r}; use builtin:<name> or file:<path>")


def cmd_eval(args) -> int:
    t0 = time.monotonic()
    qid = _load_qid(args.qid)
    lattices = load_lattices(args.gen, args.file)
    results = {}
    all_hold = True
    for name, L in lattices:
        verdict = evaluate(L, qid)
        row: dict = {
            "holds": verdict.holds,
            "assignments_checked": verdict.assignments_checked,
        }
        if not verdict.holds:
            all_hold = False
            row["counterexample"] = {
                var: L.labels[idx] for var, idx in verdict.counterexample.items()
            }
        results[name] = row
        _note(f"eval {name}: {'holds' if verdict.holds else 'fails'}")
    _emit(
        {
            "command": "eval",
            "inputs": _inputs(args),
            "qid": format_qid(qid),
            "results": results,
            "version": __version__,
        }
    )
    _note(f"evaluated on {len(lattices)} lattice(s) in {time.monotonic() - t0:.2f}s")
    return 0 if all_hold else 1


# -- corpus ---------------------------------------------------------------------


def _atomistic_jsd(max_size: int):
    for n in range(1, max_size + 1):
        for L in enumerate_lattices(n):
            if is_atomistic(L) and is_join_semidistributive(L):
                yield n, L


def _suite_completion(max_size: int, found: dict) -> dict | None:
    checked = 0
    for n in range(1, max_size + 1):
        for L in enumerate_lattices(n):
            atoms = len(L.atoms())
            doubled = L.n - 1 - atoms if L.n > 1 else 0
            result, emb = biatomic_completion(L)
            checked += 1
            ok = (
                result.n == L.n + 2 * doubled
                and emb.preserved.all_flags()
                and is_atomistic(result)
                and is_biatomic(result)
            )
            if not ok:
                return {"lattice": _lattice_json(L), "detail": "completion contract failed"}
    found["lattices_checked"] = checked
    return None


def _extension_pairs(L: FiniteLattice):
    atom_set = set(L.atoms())
    for apex in range(L.n):
        if apex == L.bottom or apex in atom_set:
            continue
        must = set(L.filter(apex)) | {L.bottom}
        optional = [x for x in range(L.n) if x not in must]
        for r in range(len(optional) + 1):
            for extra in combinations(optional, r):
                members = must | set(extra)
                if L.is_meet_subsemilattice(members):
                    yield make_extension_pair(L, apex, members)


def _suite_extension_jsd(max_size: int, found: dict) -> dict | None:
    lattices = pairs = 0
    for n, L in _atomistic_jsd(max_size):
        lattices += 1
        for pair in _extension_pairs(L):
            pairs += 1
            verdict, witness = jsd_extension_criteria(pair)
            actual = is_join_semidistributive(one_atom_extension(pair).result)
            if verdict != actual:
                return {
                    "lattice": _lattice_json(L),
                    "detail": {
                        "apex": L.labels[pair.apex],
                        "subsemilattice": [
                            L.labels[x] for x in sorted(pair.subsemilattice)
                        ],
                        "criteria": verdict,
                        "extension_jsd": actual,
                    },
                }
    found["lattices_checked"] = lattices
    found["pairs_checked"] = pairs
    return None


def _suite_theta_bi(max_size: int, found: dict) -> dict | None:
    from .qid import theta

    qid = theta()
    lattices = biatomic_count = 0
    for n, L in _atomistic_jsd(max_size):
        lattices += 1
        if not is_biatomic(L):
            continue
        biatomic_count += 1
        verdict = evaluate(L, qid)
        if not verdict.holds:
            return {
                "lattice": _lattice_json(L),
                "detail": {
                    "counterexample": {
                        var: L.labels[idx]
                        for var, idx in verdict.counterexample.items()
                    }
                },
            }
    found["lattices_checked"] = lattices
    found["biatomic_checked"] = biatomic_count
    return None


SUITES = {
    "completion": _suite_completion,
    "extension-jsd": _suite_extension_jsd,
    "theta-bi": _suite_theta_bi,
}


def cmd_corpus(args) -> int:
    t0 = time.monotonic()
    if args.max > 7:
        raise _InputError("--max above 7 is not supported")
    if args.max < 1:
        raise _InputError("--max must be at least 1")
    stats: dict = {}
    violation = SUITES[args.suite](args.max, stats)
    report = {
        "command": "corpus",
        "inputs": _inputs(args),
        "results": {"suite": args.suite, **stats},
        "version": __version__,
    }
    if violation is not None:
        report["results"]["violation"] = violation
    _emit(report)
    _note(
        f"corpus {args.suite} max={args.max}: "
        f"{'violation found' if violation else 'all pass'} "
        f"in {time.monotonic() - t0:.2f}s"
    )
    return 1 if violation else 0


# -- entry point ------------------------------------------------------------------


def _add_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gen", help=f"generator spec: {GEN_GRAMMAR}")
    parser.add_argument("--file", help="lattice JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latkit",
        description="Finite lattice analysis, extension, and quasi-identity checking.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run analyzers over a lattice")
    _add_source(p_check)
    p_check.add_argument(
        "--props",
        default=",".join(ALL_PROPS),
        help=f"comma list from: {', '.join(ALL_PROPS)}",
    )
    p_check.set_defaults(func=cmd_check)

    p_build = sub.add_parser("build", help="run an extension construction")
    _add_source(p_build)
    p_build.add_argument(
        "--op",
        required=True,
        choices=["biatomic-completion", "one-atom", "biatomize"],
    )
    p_build.add_argument("--apex", help="element label (one-atom)")
    p_build.add_argument(
        "--subsemilattice", help="comma list of element labels (one-atom)"
    )
    p_build.add_argument("--out", help="write the result lattice JSON here")
    p_build.add_argument("--trace", help="write construction steps here, one JSON per line")
    p_build.set_defaults(func=cmd_build)

    p_eval = sub.add_parser("eval", help="decide a quasi-identity exhaustively")
    _add_source(p_eval)
    p_eval.add_argument(
        "--qid", required=True, help="builtin:<name> or file:<path>"
    )
    p_eval.set_defaults(func=cmd_eval)

    p_corpus = sub.add_parser("corpus", help="sweep enumerated lattices through a suite")
    p_corpus.add_argument("--suite", required=True, choices=sorted(SUITES))
    p_corpus.add_argument("--max", type=int, default=6, help="largest lattice size")
    p_corpus.set_defaults(func=cmd_corpus)

    for p in (p_check, p_build, p_eval, p_corpus):
        p.add_argument("--seed", type=int, default=0, help="recorded in the report")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        _emit(_error_report(args.command, args, "InputError", str(exc)))
        _note(f"error: {exc}")
        return 2
    except LatticeError as exc:
        kind = type(exc).__name__
        _emit(_error_report(args.command, args, kind, str(exc)))
        _note(f"error ({kind}): {exc}")
        if args.command == "build" and kind in PRECONDITION_ERRORS:
            return 3
        return 2


if __name__ == "__main__":
    sys.exit(main())
