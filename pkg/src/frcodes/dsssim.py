"""In-memory storage system with table-based exact uncoded repair.

Each node stores the coded packets its node set prescribes. A repair table,
precomputed for every failure pattern of at most rho-1 nodes, says which
helper sends which packet to each replacement node. Every helper reads and
forwards a single stored packet, so the lost data is copied back exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    ConsistencyError,
    FileTooLargeError,
    InsufficientPacketsError,
    InvalidCodeError,
    MissingTableEntryError,
    NodeFailedError,
    ParameterError,
    RepairInfeasibleError,
    ScenarioError,
    ToleranceExceededError,
)
from .frcore import FrCode, rate, validate_fr
from .mds import SourceFile, mds_decode, mds_encode


class Transfer(NamedTuple):
    helper: int
    packet: int


class RepairPlan(NamedTuple):
    node: int
    transfers: tuple[Transfer, ...]


@dataclass(frozen=True)
class RepairTable:
    max_failures: int
    entries: Mapping[frozenset[int], tuple[RepairPlan, ...]]

    def plans(self, failed: Iterable[int]) -> tuple[RepairPlan, ...]:
        key = frozenset(failed)
        try:
            return self.entries[key]
        except KeyError:
            raise MissingTableEntryError(f"no repair table entry for failure set {sorted(key)}") from None

    def to_dict(self) -> dict[str, Any]:
        rows = sorted(self.entries.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        return {
            "max_failures": self.max_failures,
            "entries": [
                {
                    "failed": sorted(failed),
                    "plans": [{"node": p.node, "transfers": [list(t) for t in p.transfers]} for p in plans],
                }
                for failed, plans in rows
            ],
        }


def _augment(packet: int, candidates: Mapping[int, Sequence[int]], owner: dict[int, int], seen: set[int]) -> bool:
    for helper in candidates[packet]:
        if helper in seen:
            continue
        seen.add(helper)
        if helper not in owner or _augment(owner[helper], candidates, owner, seen):
            owner[helper] = packet
            return True
    return False


def match_packets(candidates: Mapping[int, Sequence[int]]) -> dict[int, int] | None:
    """Perfect matching of packets to distinct helpers, or None.

    Augmenting paths, packets and helpers scanned in ascending order, so the
    result is deterministic.
    """
    owner: dict[int, int] = {}
    for packet in sorted(candidates):
        if not _augment(packet, candidates, owner, set()):
            return None
    return {packet: helper for helper, packet in owner.items()}


def find_assignment(code: FrCode, node: int, helpers: Iterable[int]) -> dict[int, int] | None:
    """Packet -> helper assignment restoring ``node`` from ``helpers`` alone, if one exists."""
    allowed = sorted(set(helpers) - {node})
    sets = [set(s) for s in code.node_sets]
    candidates = {p: [h for h in allowed if p in sets[h - 1]] for p in code.node_sets[node - 1]}
    return match_packets(candidates)


def plan_repair(code: FrCode, failed: Iterable[int]) -> tuple[RepairPlan, ...]:
    """Repair plans for one failure pattern, failed nodes in ascending order.

    A node repaired earlier in the same event may serve later ones.
    """
    failed = sorted(set(failed))
    for v in failed:
        if not 1 <= v <= code.n:
            raise ParameterError(f"node {v} outside 1..{code.n}")
    sets = [set(s) for s in code.node_sets]
    available = [v for v in range(1, code.n + 1) if v not in failed]
    plans = []
    for node in failed:
        candidates = {p: [h for h in available if p in sets[h - 1]] for p in code.node_sets[node - 1]}
        matching = match_packets(candidates)
        if matching is None:
            raise RepairInfeasibleError(frozenset(failed), node)
        transfers = tuple(Transfer(matching[p], p) for p in code.node_sets[node - 1])
        plans.append(RepairPlan(node, transfers))
        available = sorted(available + [node])
    return tuple(plans)


def build_repair_table(code: FrCode, max_failures: int | None = None) -> RepairTable:
    """Plans for every failure set of size 1..max_failures (default rho-1)."""
    report = validate_fr(code)
    if not report.ok:
        raise InvalidCodeError("; ".join(v.message for v in report.violations))
    limit = code.rho - 1 if max_failures is None else max_failures
    if not 0 <= limit <= code.rho - 1:
        raise ParameterError(f"max_failures={limit} outside 0..rho-1={code.rho - 1}")
    entries = {}
    for size in range(1, limit + 1):
        for failed in combinations(range(1, code.n + 1), size):
            entries[frozenset(failed)] = plan_repair(code, failed)
    return RepairTable(limit, entries)


@dataclass
class Node:
    alive: bool = True
    store: dict[int, bytes] = field(default_factory=dict)


@dataclass
class SystemState:
    code: FrCode
    k: int
    m: int
    packet_len: int
    nodes: list[Node]
    reference: dict[int, bytes]  # original codeword; used only for integrity checks
    event_log: list[dict[str, Any]] = field(default_factory=list)

    @property
    def failed(self) -> frozenset[int]:
        return frozenset(i for i, node in enumerate(self.nodes, start=1) if not node.alive)


class RepairRecord(NamedTuple):
    node: int
    transfers: tuple[Transfer, ...]


@dataclass(frozen=True)
class TransferReport:
    repaired: tuple[RepairRecord, ...] = ()

    @property
    def total_packets(self) -> int:
        return sum(len(r.transfers) for r in self.repaired)

    def to_dict(self) -> dict[str, Any]:
        return {
            "total_packets": self.total_packets,
            "repaired": [{"node": r.node, "transfers": [list(t) for t in r.transfers]} for r in self.repaired],
        }


def init_system(code: FrCode, file: SourceFile, k: int) -> SystemState:
    """Encode ``file`` with the outer code and place replicas per the node sets."""
    report = validate_fr(code)
    if not report.ok:
        raise InvalidCodeError("; ".join(v.message for v in report.violations))
    guaranteed = rate(code, k).value
    if file.m > guaranteed:
        raise FileTooLargeError(f"file of {file.m} packets exceeds rate {guaranteed} at k={k}")
    coded = {p.index: p.payload for p in mds_encode(file, code.theta)}
    nodes = [Node(True, {p: coded[p] for p in s}) for s in code.node_sets]
    return SystemState(code, k, file.m, file.packet_len, nodes, coded)


def _check_nodes(state: SystemState, nodes: Iterable[int]) -> list[int]:
    nodes = sorted(set(nodes))
    for v in nodes:
        if not 1 <= v <= state.code.n:
            raise ParameterError(f"node {v} outside 1..{state.code.n}")
    return nodes


def fail_nodes(state: SystemState, nodes: Iterable[int]) -> SystemState:
    nodes = _check_nodes(state, nodes)
    after = state.failed | set(nodes)
    if len(after) > state.code.rho - 1:
        raise ToleranceExceededError(
            f"{len(after)} failed nodes exceed the tolerance rho-1={state.code.rho - 1}"
        )
    for v in nodes:
        state.nodes[v - 1] = Node(False, {})
    state.event_log.append({"op": "fail", "nodes": nodes})
    return state


def repair(state: SystemState, table: RepairTable) -> TransferReport:
    """Restore every failed node from its table entry.

    Raises:
        ConsistencyError: a helper does not hold its assigned packet.
    """
    failed = state.failed
    if not failed:
        return TransferReport()
    plans = table.plans(failed)
    restored: dict[int, dict[int, bytes]] = {}
    records = []
    for plan in plans:
        if plan.node not in failed:
            raise ConsistencyError(f"table entry repairs node {plan.node}, which has not failed")
        helpers = [t.helper for t in plan.transfers]
        if len(set(helpers)) != len(helpers):
            raise ConsistencyError(f"node {plan.node}: a helper is asked for more than one packet")
        store: dict[int, bytes] = {}
        for helper, packet in plan.transfers:
            source = restored.get(helper)
            if source is None:
                if helper in failed:
                    raise ConsistencyError(f"helper {helper} has failed and is not yet repaired")
                source = state.nodes[helper - 1].store
            if packet not in source:
                raise ConsistencyError(f"helper {helper} does not hold packet {packet}")
            store[packet] = source[packet]
        if set(store) != set(state.code.node_sets[plan.node - 1]):
            raise ConsistencyError(f"node {plan.node}: plan does not cover its node set")
        restored[plan.node] = store
        records.append(RepairRecord(plan.node, plan.transfers))
    if set(restored) != set(failed):
        raise ConsistencyError(f"table entry leaves nodes {sorted(set(failed) - set(restored))} unrepaired")
    for v, store in restored.items():
        state.nodes[v - 1] = Node(True, store)
    report = TransferReport(tuple(records))
    state.event_log.append({"op": "repair", "nodes": sorted(failed), "transferred": report.total_packets})
    return report


def collect(state: SystemState, nodes: Iterable[int]) -> dict[int, bytes]:
    nodes = _check_nodes(state, nodes)
    seen: dict[int, bytes] = {}
    for v in nodes:
        node = state.nodes[v - 1]
        if not node.alive:
            raise NodeFailedError(f"node {v} has failed")
        seen.update(node.store)
    return seen


def user_read(state: SystemState, nodes: Iterable[int], *, record: bool = True) -> SourceFile:
    """Decode the file from the union of packets stored on ``k`` alive nodes.

    ``record=False`` leaves the event log untouched (bulk read sweeps).
    """
    nodes = _check_nodes(state, nodes)
    if len(nodes) != state.k:
        raise ParameterError(f"a read contacts k={state.k} nodes, got {len(nodes)}")
    seen = collect(state, nodes)
    if len(seen) < state.m:
        raise InsufficientPacketsError(f"nodes {nodes} hold {len(seen)} distinct packets, need {state.m}")
    if record:
        state.event_log.append({"op": "read", "nodes": nodes, "distinct_packets": len(seen)})
    return mds_decode(seen.items(), state.m, state.code.theta)


def integrity_mismatches(state: SystemState) -> list[int]:
    """Nodes whose content differs from their prescription (failed nodes included)."""
    bad = []
    for i, (node, s) in enumerate(zip(state.nodes, state.code.node_sets), start=1):
        if not node.alive or node.store != {p: state.reference[p] for p in s}:
            bad.append(i)
    return bad


def random_script(code: FrCode, k: int, cycles: int, seed: int | None) -> list[dict[str, Any]]:
    """``cycles`` rounds of fail, repair, read.

    Failure sets are uniform over all sets of 1..rho-1 nodes; reads are
    uniform over k-subsets.
    """
    rng = random.Random(seed)
    sizes = list(range(1, code.rho))
    weights = [comb(code.n, s) for s in sizes]
    nodes = list(range(1, code.n + 1))
    script = []
    for _ in range(cycles):
        size = rng.choices(sizes, weights)[0]
        script.append({"op": "fail", "nodes": sorted(rng.sample(nodes, size))})
        script.append({"op": "repair"})
        script.append({"op": "read", "nodes": sorted(rng.sample(nodes, k))})
    return script


@dataclass
class ScenarioReport:
    events: list[dict[str, Any]] = field(default_factory=list)
    reads_ok: int = 0
    reads_failed: int = 0
    integrity_ok: bool = True
    mismatched_nodes: list[int] = field(default_factory=list)

    @property
    def total_transferred(self) -> int:
        return sum(e.get("transferred", 0) for e in self.events)

    @property
    def ok(self) -> bool:
        return self.integrity_ok and self.reads_failed == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "events": self.events,
            "total_transferred": self.total_transferred,
            "reads_ok": self.reads_ok,
            "reads_failed": self.reads_failed,
            "integrity_ok": self.integrity_ok,
            "mismatched_nodes": self.mismatched_nodes,
        }


def run_scenario(
    code: FrCode,
    file: SourceFile,
    k: int,
    script: Sequence[Mapping[str, Any]],
    *,
    table: RepairTable | None = None,
) -> ScenarioReport:
    """Execute fail/repair/read events in order, then check every node's content."""
    state = init_system(code, file, k)
    if table is None:
        table = build_repair_table(code)
    report = ScenarioReport()
    for index, event in enumerate(script):
        try:
            op = event["op"]
            if op == "fail":
                fail_nodes(state, event["nodes"])
                report.events.append({"op": "fail", "nodes": sorted(event["nodes"])})
            elif op == "repair":
                transfer = repair(state, table)
                report.events.append({"op": "repair", **transfer.to_dict(), "transferred": transfer.total_packets})
            elif op == "read":
                got = user_read(state, event["nodes"])
                ok = got == file
                report.reads_ok += ok
                report.reads_failed += not ok
                report.events.append({"op": "read", "nodes": sorted(event["nodes"]), "ok": ok})
            else:
                raise ParameterError(f"unknown op {op!r}")
        except KeyError as exc:
            raise ScenarioError(index, ParameterError(f"event missing field {exc}")) from exc
        except Exception as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(index, exc) from exc
    report.mismatched_nodes = integrity_mismatches(state)
    report.integrity_ok = not report.mismatched_nodes
    return report
