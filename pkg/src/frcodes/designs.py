"""Steiner systems S(2, alpha, v): feasibility, generation and validation."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, NamedTuple

from .errors import ParameterError


@dataclass(frozen=True)
class SteinerSystem:
    alpha: int
    v: int
    blocks: tuple[tuple[int, ...], ...]
    t: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        """Replication number (v-1)/(alpha-1); blocks through each point."""
        if self.alpha < 2:
            return self.b
        return (self.v - 1) // (self.alpha - 1)

    def to_dict(self) -> dict[str, Any]:
        return {"t": self.t, "alpha": self.alpha, "v": self.v, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> SteinerSystem:
        try:
            t = int(doc.get("t", 2))
            if t != 2:
                raise ParameterError(f"only t=2 designs are supported, got t={t}")
            return cls(
                alpha=int(doc["alpha"]),
                v=int(doc["v"]),
                blocks=tuple(tuple(int(p) for p in b) for b in doc["blocks"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"malformed Steiner document: {exc}") from exc

    def to_json(self, **kwargs: Any) -> str:
        return json.dumps(self.to_dict(), **kwargs)


class SteinerParams(NamedTuple):
    feasible: bool
    b: int | None
    r: int | None
    reason: str = ""


def steiner_params(alpha: int, v: int) -> SteinerParams:
    """Block count and replication number forced by the counting relations.

    b*alpha = v*r and v-1 = r*(alpha-1). Integrality is necessary for an
    S(2, alpha, v) to exist and, for large enough v, sufficient (Wilson).
    """
    if alpha < 2 or v < alpha:
        raise ParameterError(f"need alpha >= 2 and v >= alpha, got alpha={alpha}, v={v}")
    if (v - 1) % (alpha - 1):
        return SteinerParams(False, None, None, f"v-1={v - 1} not divisible by alpha-1={alpha - 1}")
    r = (v - 1) // (alpha - 1)
    if (v * r) % alpha:
        return SteinerParams(False, None, r, f"v*r={v * r} not divisible by alpha={alpha}")
    return SteinerParams(True, v * r // alpha, r)


def transpose_code_exists(n: int, rho: int) -> bool:
    """Existence of transpose codes for repetition degree 2..5.

    Holds iff n-1 = 0 mod (rho-1) and n(n-1) = 0 mod rho(rho-1), because
    S(2, alpha, v) exist for every admissible v when alpha <= 5.
    """
    if not 2 <= rho <= 5:
        raise ParameterError(f"existence is only settled for rho in 2..5, got {rho}")
    return n >= rho and (n - 1) % (rho - 1) == 0 and (n * (n - 1)) % (rho * (rho - 1)) == 0


def fano_plane() -> SteinerSystem:
    """The Fano plane with lines 123, 345, 156, 147, 257, 367, 246."""
    lines = ((1, 2, 3), (3, 4, 5), (1, 5, 6), (1, 4, 7), (2, 5, 7), (3, 6, 7), (2, 4, 6))
    return SteinerSystem(alpha=3, v=7, blocks=lines)


def _relabel(blocks: Iterable[Iterable[object]]) -> tuple[tuple[int, ...], ...]:
    blocks = [tuple(b) for b in blocks]
    points = sorted({p for b in blocks for p in b})
    label = {p: i for i, p in enumerate(points, start=1)}
    return tuple(sorted(tuple(sorted(label[p] for p in b)) for b in blocks))


def _bose(v: int) -> SteinerSystem:
    # Points Z_{2t+1} x Z_3; x o y = (x+y)/2 is idempotent and commutative.
    order = v // 3
    half = (order + 1) // 2
    blocks: list[tuple[tuple[int, int], ...]] = []
    for x in range(order):
        blocks.append(((x, 0), (x, 1), (x, 2)))
    for x, y in combinations(range(order), 2):
        z = ((x + y) * half) % order
        for i in range(3):
            blocks.append(((x, i), (y, i), (z, (i + 1) % 3)))
    return SteinerSystem(alpha=3, v=v, blocks=_relabel(blocks))


def _skolem(v: int) -> SteinerSystem:
    # Points {inf} + Z_{2n} x Z_3 with a half-idempotent commutative quasigroup.
    n = (v - 1) // 6
    order = 2 * n

    def op(x: int, y: int) -> int:
        s = (x + y) % order
        return s // 2 if s % 2 == 0 else (s - 1) // 2 + n

    inf = (-1, -1)
    blocks: list[tuple[tuple[int, int], ...]] = []
    for x in range(n):
        blocks.append(((x, 0), (x, 1), (x, 2)))
        for i in range(3):
            blocks.append((inf, (x + n, i), (x, (i + 1) % 3)))
    for x, y in combinations(range(order), 2):
        z = op(x, y)
        for i in range(3):
            blocks.append(((x, i), (y, i), (z, (i + 1) % 3)))
    return SteinerSystem(alpha=3, v=v, blocks=_relabel(blocks))


def steiner_triple_system(v: int) -> SteinerSystem:
    """An S(2, 3, v): Bose construction for v = 3 mod 6, Skolem for v = 1 mod 6."""
    if v < 7 or v % 6 not in (1, 3):
        raise ParameterError(f"no Steiner triple system generated for v={v}: need v >= 7 and v = 1 or 3 mod 6")
    return _bose(v) if v % 6 == 3 else _skolem(v)


class DesignViolation(NamedTuple):
    kind: str
    subject: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class DesignReport:
    violations: tuple[DesignViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_steiner(system: SteinerSystem) -> DesignReport:
    """Every pair of points in exactly one block, plus the counting relations."""
    found: list[DesignViolation] = []
    if system.t != 2:
        found.append(DesignViolation("order", (), f"only t=2 is supported, got t={system.t}"))
    pair_count: Counter[tuple[int, int]] = Counter()
    point_count: Counter[int] = Counter()
    for j, block in enumerate(system.blocks, start=1):
        distinct = set(block)
        if len(distinct) != system.alpha or len(block) != system.alpha:
            found.append(
                DesignViolation("block_size", (j,), f"block {j} has {len(distinct)} distinct points, expected {system.alpha}")
            )
        outside = sorted(p for p in distinct if not 1 <= p <= system.v)
        if outside:
            found.append(DesignViolation("out_of_range", (j,), f"block {j} has points {outside} outside 1..{system.v}"))
        point_count.update(distinct)
        pair_count.update(combinations(sorted(distinct), 2))
    for pair in combinations(range(1, system.v + 1), 2):
        c = pair_count[pair]
        if c == 0:
            found.append(DesignViolation("uncovered_pair", pair, f"pair {set(pair)} is in no block"))
        elif c > 1:
            found.append(DesignViolation("repeated_pair", pair, f"pair {set(pair)} is in {c} blocks"))
    if system.alpha >= 2:
        if (system.v - 1) % (system.alpha - 1):
            found.append(DesignViolation("counting", (), f"v-1={system.v - 1} not divisible by alpha-1={system.alpha - 1}"))
        else:
            r = system.r
            if system.b * system.alpha != system.v * r:
                found.append(DesignViolation("counting", (), f"b*alpha={system.b * system.alpha} differs from v*r={system.v * r}"))
            for p in range(1, system.v + 1):
                if point_count[p] != r:
                    found.append(DesignViolation("replication", (p,), f"point {p} is in {point_count[p]} blocks, expected r={r}"))
    return DesignReport(tuple(found))
