"""Command-line surface: analyze gates, decide feasibility, synthesize
circuits, tabulate signatures, export matrices.

Successful JSON commands write exactly one result envelope to stdout;
diagnostics go to stderr.  Exit codes: 0 success/feasible, 1 proven
infeasible, 2 usage or input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import gates, group, parity, synth
from .permutation import MatrixConvention, cycle_decomposition, to_matrix

SCHEMA_VERSION = 1

ENV_POINT_CEILING = "QGF_POINT_CEILING"
ENV_ENUM_CAP = "QGF_ENUM_CAP"
ENV_CACHE_DIR = "QGF_CACHE_DIR"

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_CAP = 3

_CYCLE_LISTING_LIMIT = 64


def _resolve_int(flag_value: int | None, env_name: str, default: int) -> int:
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(env_name)
    if raw is not None:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{env_name} must be an integer, got {raw!r}")
    return default


def _resolve_cache_dir(flag_value: str | None) -> str | None:
    if flag_value is not None:
        return flag_value
    return os.environ.get(ENV_CACHE_DIR)


def _emit(command: str, inputs: dict, result: dict, started: float) -> None:
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "timing": {"wall_seconds": round(time.perf_counter() - started, 6)},
    }
    json.dump(envelope, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _parity_payload(verdict: parity.ParityVerdict) -> dict:
    return {
        "target_signature": verdict.target_signature,
        "generator_signatures": list(verdict.generator_signatures),
        "obstructed": verdict.obstructed,
    }


def _stats_payload(stats: parity.GateStats) -> dict:
    return {
        "d": stats.d,
        "gate": stats.gate,
        "fixed_points": stats.fixed_points,
        "cycle_count_by_length": {
            str(length): count
            for length, count in sorted(stats.cycle_count_by_length.items())
        },
        "transposition_count": stats.transposition_count,
        "signature": stats.signature,
        "source": stats.source,
    }


def _parse_generators(text: str) -> list[gates.GateId]:
    specs = [part.strip() for part in text.split(",") if part.strip()]
    # embed specs contain commas inside parentheses; re-join split fragments
    merged: list[str] = []
    for part in specs:
        if merged and merged[-1].count("(") > merged[-1].count(")"):
            merged[-1] += "," + part
        else:
            merged.append(part)
    if not merged:
        raise ValueError("at least one generator spec is required")
    return [gates.parse_gate_spec(s) for s in merged]


def _generator_set(
    gate_ids: list[gates.GateId], d: int, n: int | None, point_ceiling: int
) -> group.GeneratorSet:
    pairs = []
    for gid in gate_ids:
        perm, _ = gates.build_gate(gid, d, n, point_ceiling)
        pairs.append((gid.spec(), perm))
    return group.GeneratorSet.from_named(pairs)


def _membership_handle(
    gens: group.GeneratorSet, method: str, enum_cap: int, cache_dir: str | None
) -> group.GroupHandle:
    wanted = None if method == "auto" else method
    if cache_dir is not None:
        cached = group.load_group(gens, cache_dir, method=wanted)
        if cached is not None:
            print(f"cache hit: {group.generator_digest(gens)[:12]}", file=sys.stderr)
            return cached
    if method == "enumerate":
        handle = group.enumerate_group(gens, cap=enum_cap)
    elif method == "chain":
        handle = group.build_chain(gens)
    else:
        handle = group.build_group(gens, cap=enum_cap)
    if cache_dir is not None:
        group.save_group(handle, gens, cache_dir)
    return handle


def cmd_analyze(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    point_ceiling = _resolve_int(
        args.point_ceiling, ENV_POINT_CEILING, gates.DEFAULT_POINT_CEILING
    )
    gate_id = gates.parse_gate_spec(args.gate)
    perm, system = gates.build_gate(gate_id, args.d, args.n, point_ceiling)
    data = cycle_decomposition(perm)
    stats = parity.stats_from_permutation(perm, args.d, gate_id.spec())
    closed = parity.closed_form_stats(gate_id, args.d, args.n)
    if closed is None:
        check = "not-applicable"
    elif (
        closed.cycle_count_by_length == stats.cycle_count_by_length
        and closed.signature == stats.signature
    ):
        check = "match"
    else:
        check = "mismatch"

    result = _stats_payload(stats)
    result["n"] = system.n
    result["degree"] = system.point_count
    if len(data.cycle_type) <= _CYCLE_LISTING_LIMIT or args.full:
        result["cycle_type"] = list(data.cycle_type)
    else:
        result["cycle_type"] = None
    result["closed_form_check"] = check

    inputs = {
        "gate": gate_id.spec(),
        "d": args.d,
        "n": args.n,
        "point_ceiling": point_ceiling,
        "full": bool(args.full),
    }
    _emit("analyze", inputs, result, started)
    return EXIT_OK


def cmd_feasible(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    point_ceiling = _resolve_int(
        args.point_ceiling, ENV_POINT_CEILING, gates.DEFAULT_POINT_CEILING
    )
    enum_cap = _resolve_int(args.enum_cap, ENV_ENUM_CAP, group.DEFAULT_ENUM_CAP)
    cache_dir = _resolve_cache_dir(args.cache_dir)

    target_id = gates.parse_gate_spec(args.target)
    target, _ = gates.build_gate(target_id, args.d, args.n, point_ceiling)
    gens = _generator_set(
        _parse_generators(args.generators), args.d, args.n, point_ceiling
    )
    inputs = {
        "target": target_id.spec(),
        "generators": list(gens.names),
        "d": args.d,
        "n": args.n,
        "method": args.method,
        "enum_cap": enum_cap,
        "point_ceiling": point_ceiling,
    }

    verdict = parity.parity_feasible(target, gens)
    if verdict.obstructed:
        result = {
            "outcome": synth.PARITY_OBSTRUCTED,
            "parity": _parity_payload(verdict),
            "membership": {"checked": False},
        }
        _emit("feasible", inputs, result, started)
        return EXIT_INFEASIBLE

    handle = _membership_handle(gens, args.method, enum_cap, cache_dir)
    contained = handle.contains(target)
    result = {
        "outcome": "realizable" if contained else synth.NOT_IN_GROUP,
        "parity": _parity_payload(verdict),
        "membership": {
            "checked": True,
            "contains": contained,
            "method": handle.method,
            "group_order": handle.order,
        },
    }
    _emit("feasible", inputs, result, started)
    return EXIT_OK if contained else EXIT_INFEASIBLE


def cmd_synthesize(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    point_ceiling = _resolve_int(
        args.point_ceiling, ENV_POINT_CEILING, gates.DEFAULT_POINT_CEILING
    )
    enum_cap = _resolve_int(args.enum_cap, ENV_ENUM_CAP, group.DEFAULT_ENUM_CAP)

    target_id = gates.parse_gate_spec(args.target)
    target, system = gates.build_gate(target_id, args.d, args.n, point_ceiling)
    gate_ids = _parse_generators(args.generators)
    gens = _generator_set(gate_ids, args.d, args.n, point_ceiling)
    inputs = {
        "target": target_id.spec(),
        "generators": list(gens.names),
        "d": args.d,
        "n": args.n,
        "max_depth": args.max_depth,
        "check_parity": not args.no_parity_check,
        "check_membership": not args.no_membership_check,
        "enum_cap": enum_cap,
        "point_ceiling": point_ceiling,
    }

    outcome = synth.synthesize(
        gens,
        target,
        args.max_depth,
        check_parity=not args.no_parity_check,
        check_membership=not args.no_membership_check,
        enum_cap=enum_cap,
    )
    result: dict = {"outcome": outcome.outcome}
    if outcome.parity is not None:
        result["parity"] = _parity_payload(outcome.parity)
    if outcome.group_order is not None:
        result["group_order"] = outcome.group_order
    if outcome.detail is not None:
        result["detail"] = outcome.detail
    if outcome.word is not None:
        symbols = {
            gid.spec(): gates.wire_symbols(gid, system.n) for gid in gate_ids
        }
        diagram = synth.render_circuit(outcome.word, symbols, system.n)
        result["word"] = list(outcome.word.letters)
        result["word_text"] = outcome.word.to_text()
        result["length"] = outcome.word.length
        result["diagram"] = diagram
        result["verified"] = True
        print(diagram, file=sys.stderr)
    _emit("synthesize", inputs, result, started)
    if outcome.outcome == synth.SYNTHESIZED:
        return EXIT_OK
    if outcome.outcome == synth.DEPTH_EXCEEDED:
        return EXIT_CAP
    return EXIT_INFEASIBLE


def _parse_d_range(text: str) -> range:
    parts = text.split("..")
    if len(parts) != 2:
        raise ValueError(f"range must look like 2..9, got {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    if lo < 2 or hi < lo:
        raise ValueError(f"range bounds must be ascending and >= 2, got {text!r}")
    return range(lo, hi + 1)


def cmd_table(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    point_ceiling = _resolve_int(
        args.point_ceiling, ENV_POINT_CEILING, gates.DEFAULT_POINT_CEILING
    )
    gate_id = gates.parse_gate_spec(args.gate)
    d_values = _parse_d_range(args.d_range)
    rows = parity.stats_table_rows(gate_id, d_values, args.n, point_ceiling)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["d", "gate", "fixed_points", "transpositions", "signature", "d_mod_4", "source"]
    )
    payload = []
    for stats in rows:
        writer.writerow(
            [
                stats.d,
                stats.gate,
                stats.fixed_points,
                stats.transposition_count,
                stats.signature,
                stats.d % 4,
                stats.source,
            ]
        )
        entry = _stats_payload(stats)
        entry["d_mod_4"] = stats.d % 4
        payload.append(entry)

    if args.json:
        inputs = {
            "gate": gate_id.spec(),
            "d_range": args.d_range,
            "n": args.n,
            "point_ceiling": point_ceiling,
        }
        _emit("table", inputs, {"rows": payload}, started)
    else:
        sys.stdout.write(buffer.getvalue())
    return EXIT_OK


def cmd_export_matrix(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    point_ceiling = _resolve_int(
        args.point_ceiling, ENV_POINT_CEILING, gates.DEFAULT_POINT_CEILING
    )
    gate_id = gates.parse_gate_spec(args.gate)
    perm, system = gates.build_gate(gate_id, args.d, args.n, point_ceiling)
    convention = MatrixConvention(args.convention)
    matrix = to_matrix(perm, convention)
    if args.format == "dense":
        lines = gates.matrix_dense_rows(matrix)
    else:
        lines = gates.matrix_sparse_lines(matrix)
    text = "\n".join(lines) + "\n"

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.format} matrix to {args.output}", file=sys.stderr)
    elif args.json:
        inputs = {
            "gate": gate_id.spec(),
            "d": args.d,
            "n": args.n,
            "convention": convention.value,
            "format": args.format,
            "point_ceiling": point_ceiling,
        }
        result = {
            "degree": system.point_count,
            "convention": convention.value,
            "format": args.format,
            "lines": lines,
        }
        _emit("export-matrix", inputs, result, started)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgf",
        description=(
            "Qudit gate feasibility: gates as basis-state permutations, "
            "parity obstructions, exact group membership, shortest-word "
            "synthesis."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="subsystem count")
    common.add_argument(
        "--point-ceiling",
        type=int,
        default=None,
        help=f"max basis states (default {gates.DEFAULT_POINT_CEILING}, env {ENV_POINT_CEILING})",
    )
    common.add_argument("--json", action="store_true", help="emit a JSON result envelope")

    dimension = argparse.ArgumentParser(add_help=False)
    dimension.add_argument("--d", type=int, required=True, help="qudit dimension (>= 2)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "analyze", parents=[common, dimension], help="cycle statistics of one gate"
    )
    p.add_argument("--gate", required=True, help="gate spec, e.g. cnot1 or embed(cnot1;positions=0,2)")
    p.add_argument("--full", action="store_true", help="list the full cycle type even when large")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser(
        "feasible",
        parents=[common, dimension],
        help="is the target a composition of the generators?",
    )
    p.add_argument("--target", required=True, help="target gate spec")
    p.add_argument("--generators", required=True, help="comma-separated generator specs")
    p.add_argument(
        "--method",
        choices=["auto", "enumerate", "chain"],
        default="auto",
        help="membership engine (default auto: enumerate, chain beyond the cap)",
    )
    p.add_argument(
        "--enum-cap",
        type=int,
        default=None,
        help=f"enumeration element cap (default {group.DEFAULT_ENUM_CAP}, env {ENV_ENUM_CAP})",
    )
    p.add_argument(
        "--cache-dir",
        default=None,
        help=f"directory for group caches (opt-in; env {ENV_CACHE_DIR})",
    )
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser(
        "synthesize",
        parents=[common, dimension],
        help="shortest generator word for the target",
    )
    p.add_argument("--target", required=True, help="target gate spec")
    p.add_argument("--generators", required=True, help="comma-separated generator specs")
    p.add_argument("--max-depth", type=int, default=64, help="word length limit")
    p.add_argument(
        "--enum-cap",
        type=int,
        default=None,
        help=f"search frontier cap (default {group.DEFAULT_ENUM_CAP}, env {ENV_ENUM_CAP})",
    )
    p.add_argument(
        "--no-parity-check",
        action="store_true",
        help="skip the parity obstruction step (benchmarking)",
    )
    p.add_argument(
        "--no-membership-check",
        action="store_true",
        help="skip the exact membership step (benchmarking)",
    )
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("table", parents=[common], help="signature table over a dimension range")
    p.add_argument("--gate", required=True, help="gate spec")
    p.add_argument("--d-range", required=True, help="inclusive range, e.g. 2..9")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser(
        "export-matrix",
        parents=[common, dimension],
        help="0/1 matrix of a gate as dense CSV or sparse pairs",
    )
    p.add_argument("--gate", required=True, help="gate spec")
    p.add_argument(
        "--convention",
        required=True,
        choices=[c.value for c in MatrixConvention],
        help="which axis indexes the input point (mandatory, no default)",
    )
    p.add_argument("--format", choices=["dense", "sparse"], default="dense")
    p.add_argument("--output", default=None, help="write to a file instead of stdout")
    p.set_defaults(func=cmd_export_matrix)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except group.EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
