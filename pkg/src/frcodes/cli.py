"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 integrity failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Any, Callable

from . import bounds, constructions, designs, dsssim
from .errors import (
    BudgetExceededError,
    EnumerationCapError,
    FrCodesError,
    InsufficientPacketsError,
    InvalidCodeError,
    InvalidDesignError,
    ParameterError,
    RepairInfeasibleError,
    ScenarioError,
    ToleranceExceededError,
)
from .frcore import DEFAULT_ENUMERATION_CAP, FrCode, c_mbr, is_universally_good, rate, validate_fr
from .mds import SourceFile, mds_decode, mds_encode, read_packets, write_codeword

log = logging.getLogger("frcodes")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _emit(args: argparse.Namespace, doc: Any, text: str | None = None) -> None:
    rendered = text if args.format == "text" and text is not None else json.dumps(doc, indent=2)
    if args.out:
        Path(args.out).write_text(rendered + "\n")
    if not args.quiet and not args.out:
        print(rendered)


def _load_json(path: str) -> Any:
    raw = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from exc


def _load_code(path: str) -> FrCode:
    return FrCode.from_dict(_load_json(path))


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(f"--type {args.type} requires {', '.join(missing)}")


def cmd_construct(args: argparse.Namespace) -> int:
    kind = args.type
    if kind == "complete":
        _need(args, "n")
        code = constructions.complete_graph_code(args.n)
    elif kind == "regular":
        _need(args, "n", "d")
        code = constructions.regular_graph_code(args.n, args.d, seed=args.seed)
    elif kind in ("steiner-direct", "steiner-transpose"):
        system = designs.fano_plane() if args.fano else _steiner(args)
        build = constructions.direct_code if kind == "steiner-direct" else constructions.transpose_code
        code = build(system)
    elif kind == "grid":
        code = constructions.grid_code()
    elif kind == "fano":
        code = constructions.direct_code(designs.fano_plane())
    else:  # argparse choices make this unreachable
        raise CliError(f"unknown construction {kind}")
    _emit(args, code.to_dict(), "\n".join(" ".join(map(str, s)) for s in code.node_sets))
    return EXIT_OK


def _steiner(args: argparse.Namespace) -> designs.SteinerSystem:
    if args.steiner_file:
        return designs.SteinerSystem.from_dict(_load_json(args.steiner_file))
    _need(args, "v")
    if args.v % 6 not in (1, 3) or args.v < 7:
        raise CliError(f"v={args.v}: v must be >= 7 and v = 1 or 3 (mod 6)")
    return designs.steiner_triple_system(args.v)


def cmd_steiner(args: argparse.Namespace) -> int:
    system = designs.fano_plane() if args.fano else _steiner(args)
    _emit(args, system.to_dict(), "\n".join(" ".join(map(str, b)) for b in system.blocks))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    report = validate_fr(code)
    doc: dict[str, Any] = {
        "valid": report.ok,
        "violations": [{"kind": v.kind, "index": v.index, "message": v.message} for v in report.violations],
    }
    lines = ["valid" if report.ok else "INVALID"] + [f"  {v.message}" for v in report.violations]
    if report.ok:
        goodness = is_universally_good(code, cap=args.cap)
        rows = []
        for k, margin in enumerate(goodness.margins, start=1):
            cap_k = c_mbr(code.n, k, code.d)
            rows.append({"k": k, "rate": cap_k + margin, "c_mbr": cap_k, "margin": margin})
        doc["rates"] = rows
        doc["universally_good"] = goodness.good
        lines.append(f"{'k':>3} {'rate':>6} {'c_mbr':>6} {'margin':>7}")
        lines += [f"{r['k']:>3} {r['rate']:>6} {r['c_mbr']:>6} {r['margin']:>+7}" for r in rows]
        lines.append("universally good" if goodness.good else "NOT universally good")
    ok = report.ok and doc.get("universally_good", False)
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds.capacity_report(args.n, args.k, args.d, args.rho)
    text = f"averaging {report.averaging}\nrecursive {report.recursive}"
    _emit(args, report.to_dict(), text)
    return EXIT_OK


def cmd_capacity_search(args: argparse.Namespace) -> int:
    report = bounds.capacity_report(
        args.n,
        args.k,
        args.d,
        args.rho,
        search=True,
        budget_seconds=args.budget_seconds,
        max_cells=args.max_cells,
    )
    s = report.search
    text = f"averaging {report.averaging}\nrecursive {report.recursive}\n"
    text += f"search {'exact' if s.exact else 'lower bound'} {s.value}"
    _emit(args, report.to_dict(), text)
    return EXIT_OK


def _node_dir(root: Path, node: int) -> Path:
    return root / f"node_{node}"


def cmd_encode(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    if not validate_fr(code).ok:
        raise CliError("code fails FR validation", EXIT_VERIFY)
    data = Path(args.input).read_bytes()
    m = args.m if args.m is not None else rate(code, args.k).value
    guaranteed = rate(code, args.k).value
    if m > guaranteed:
        raise CliError(f"m={m} exceeds rate {guaranteed} at k={args.k}")
    source = SourceFile.from_bytes(data, m)
    coded = {p.index: p for p in mds_encode(source, code.theta)}
    root = Path(args.out_dir)
    for i, node_set in enumerate(code.node_sets, start=1):
        write_codeword(_node_dir(root, i), [coded[p] for p in node_set], m, code.theta)
    manifest = {
        "m": m,
        "k": args.k,
        "theta": code.theta,
        "packet_len": source.packet_len,
        "file_len": len(data),
        "code": code.to_dict(),
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2))
    _emit(args, manifest, f"wrote {code.n} node directories to {root}")
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    root = Path(args.dir)
    manifest = _load_json(str(root / "manifest.json"))
    m, theta = manifest["m"], manifest["theta"]
    nodes = args.nodes or sorted(int(p.name.split("_")[1]) for p in root.glob("node_*"))
    seen = {}
    for v in nodes:
        d = _node_dir(root, v)
        if not d.is_dir():
            raise CliError(f"missing node directory {d}")
        for packet, _meta in read_packets(d):
            seen[packet.index] = packet
    try:
        source = mds_decode(seen.values(), m, theta)
    except InsufficientPacketsError as exc:
        raise CliError(f"insufficient packets: {exc}") from exc
    data = source.to_bytes(manifest["file_len"])
    Path(args.output).write_bytes(data)
    _emit(args, {"nodes": nodes, "distinct_packets": len(seen), "bytes": len(data)}, f"recovered {len(data)} bytes")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    m = args.m if args.m is not None else rate(code, args.k).value
    if args.input:
        source = SourceFile.from_bytes(Path(args.input).read_bytes(), m)
    else:
        rng = random.Random(args.seed)
        source = SourceFile(tuple(rng.randbytes(args.packet_len) for _ in range(m)))
    if args.script:
        script = _load_json(args.script)
    elif args.random_failures is not None:
        script = dsssim.random_script(code, args.k, args.random_failures, args.seed)
    else:
        raise CliError("simulate needs --script or --random-failures")
    try:
        report = dsssim.run_scenario(code, source, args.k, script)
    except ScenarioError as exc:
        cause = exc.cause
        if isinstance(cause, (ParameterError, ToleranceExceededError, InsufficientPacketsError)):
            raise CliError(str(exc)) from exc
        raise CliError(str(exc), EXIT_INTEGRITY) from exc
    doc = report.to_dict()
    text = (
        f"events {len(report.events)}  transferred {report.total_transferred}  "
        f"reads ok {report.reads_ok} failed {report.reads_failed}  "
        f"integrity {'ok' if report.integrity_ok else 'FAILED'}"
    )
    _emit(args, doc, text)
    return EXIT_OK if report.ok else EXIT_INTEGRITY


def cmd_repair_table(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    table = dsssim.build_repair_table(code, args.max_failures)
    _emit(args, table.to_dict(), f"{len(table.entries)} failure patterns")
    return EXIT_OK


def _add_globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--out", default=default(None), help="write the result here instead of stdout")
    parser.add_argument("--format", choices=("json", "text"), default=default("json"))
    parser.add_argument("--seed", type=int, default=default(None), help="seed for randomized operations")
    parser.add_argument("--quiet", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frcodes", description=__doc__.splitlines()[0])
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, Callable[[argparse.Namespace], int]] = {}

    def add(name: str, func: Callable[[argparse.Namespace], int], help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _add_globals(p, suppress=True)
        p.set_defaults(func=func)
        commands[name] = func
        return p

    p = add("construct", cmd_construct, "build an FR code")
    p.add_argument(
        "--type",
        required=True,
        choices=("complete", "regular", "steiner-direct", "steiner-transpose", "grid", "fano"),
    )
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--fano", action="store_true", help="with --v 7, use the fixed Fano plane")
    p.add_argument("--steiner-file", help="Steiner system JSON to use instead of the generator")

    p = add("steiner", cmd_steiner, "emit a Steiner triple system")
    p.add_argument("--v", type=int)
    p.add_argument("--fano", action="store_true")
    p.add_argument("--steiner-file", help=argparse.SUPPRESS)

    p = add("verify", cmd_verify, "validate a code and tabulate rate against C_MBR")
    p.add_argument("code", help="FR code JSON file, or - for stdin")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP, help="max k-subsets to enumerate")

    for name, func in (("bounds", cmd_bounds), ("capacity-search", cmd_capacity_search)):
        p = add(name, func, "FR capacity bounds" + (" and exhaustive search" if func is cmd_capacity_search else ""))
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--rho", type=int, required=True)
        if func is cmd_capacity_search:
            p.add_argument("--budget-seconds", type=float, default=60.0)
            p.add_argument("--max-cells", type=int, default=bounds.DEFAULT_MAX_CELLS)

    p = add("encode", cmd_encode, "encode a file onto per-node packet directories")
    p.add_argument("--code", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, help="source packets (default: rate at k)")
    p.add_argument("--out-dir", required=True)

    p = add("decode", cmd_decode, "rebuild a file from node directories")
    p.add_argument("--dir", required=True)
    p.add_argument("--nodes", type=int, nargs="*", help="node indices to read (default: all present)")
    p.add_argument("--output", required=True)

    p = add("simulate", cmd_simulate, "run a fail/repair/read scenario")
    p.add_argument("--code", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--input", help="file to store (default: random packets)")
    p.add_argument("--packet-len", type=int, default=64)
    p.add_argument("--script", help="scenario script JSON")
    p.add_argument("--random-failures", type=int, metavar="T", help="T random fail/repair/read cycles")

    p = add("repair-table", cmd_repair_table, "emit the repair table of a code")
    p.add_argument("--code", required=True)
    p.add_argument("--max-failures", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        log.error("error: %s", exc)
        return exc.code
    except (InvalidCodeError, InvalidDesignError) as exc:
        log.error("error: %s", exc)
        return EXIT_VERIFY
    except RepairInfeasibleError as exc:
        log.error("error: %s", exc)
        return EXIT_INTEGRITY
    except (ParameterError, EnumerationCapError, BudgetExceededError, FrCodesError, OSError, KeyError) as exc:
        log.error("error: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
