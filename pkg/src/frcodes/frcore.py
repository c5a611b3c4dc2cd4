"""FR code data model, validation, rate and the MBR capacity formula."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Any, Iterable, NamedTuple, Sequence

from . import kernels
from .errors import EnumerationCapError, InvalidCodeError, ParameterError

DEFAULT_ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class DssParams:
    """System triplet (n, k, d) with repetition degree ``rho``.

    ``theta`` (number of distinct packets) is derived as n*d/rho.
    """

    n: int
    k: int
    d: int
    rho: int
    theta: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"n must be positive, got {self.n}")
        if not 1 <= self.k <= self.d < self.n:
            raise ParameterError(f"need 1 <= k <= d < n, got k={self.k}, d={self.d}, n={self.n}")
        if self.rho < 2:
            raise ParameterError(f"rho must be >= 2, got {self.rho}")
        if (self.n * self.d) % self.rho:
            raise ParameterError(f"n*d={self.n * self.d} not divisible by rho={self.rho}")
        object.__setattr__(self, "theta", self.n * self.d // self.rho)


@dataclass(frozen=True)
class FrCode:
    """``n`` node sets over packets 1..theta.

    Node order is significant; each node set is kept sorted. Construction does
    not validate, so arbitrary candidates can be passed to :func:`validate_fr`.
    """

    n: int
    d: int
    rho: int
    theta: int
    node_sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_sets", tuple(tuple(sorted(s)) for s in self.node_sets))

    @classmethod
    def from_sets(
        cls,
        node_sets: Iterable[Iterable[int]],
        *,
        d: int | None = None,
        rho: int | None = None,
        theta: int | None = None,
    ) -> FrCode:
        """Build a code, inferring any parameter that is not given.

        ``d`` defaults to the size of the first set, ``theta`` to the largest
        packet label and ``rho`` to n*d/theta.
        """
        sets = tuple(tuple(sorted(s)) for s in node_sets)
        if not sets:
            raise ParameterError("an FR code needs at least one node")
        n = len(sets)
        if d is None:
            d = len(sets[0])
        if theta is None:
            theta = max((p for s in sets for p in s), default=0)
        if rho is None:
            rho = (n * d) // theta if theta else 0
        return cls(n=n, d=d, rho=rho, theta=theta, node_sets=sets)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Node sets as integer bitsets (bit p set for packet p)."""
        out = []
        for s in self.node_sets:
            m = 0
            for p in s:
                m |= 1 << p
            out.append(m)
        return tuple(out)

    def params(self, k: int) -> DssParams:
        return DssParams(n=self.n, k=k, d=self.d, rho=self.rho)

    def holders(self, packet: int) -> tuple[int, ...]:
        """1-based indices of the nodes storing ``packet``."""
        return tuple(i for i, s in enumerate(self.node_sets, start=1) if packet in s)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "rho": self.rho,
            "theta": self.theta,
            "nodes": [list(s) for s in self.node_sets],
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> FrCode:
        try:
            nodes = doc["nodes"]
            n = int(doc["n"])
            code = cls(
                n=n,
                d=int(doc["d"]),
                rho=int(doc["rho"]),
                theta=int(doc["theta"]),
                node_sets=tuple(tuple(int(p) for p in s) for s in nodes),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed FR code document: {exc}") from exc
        return code

    def to_json(self, **kwargs: Any) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> FrCode:
        return cls.from_dict(json.loads(text))


class Rate(NamedTuple):
    k: int
    value: int


class Violation(NamedTuple):
    kind: str
    index: int | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


class Goodness(NamedTuple):
    good: bool
    margins: tuple[int, ...]  # rate - c_mbr for k = 1..d


def validate_fr(code: FrCode) -> ValidationReport:
    """Check the FR-code conditions; every problem found is reported."""
    found: list[Violation] = []
    if len(code.node_sets) != code.n:
        found.append(Violation("node_count", None, f"{len(code.node_sets)} node sets, expected n={code.n}"))
    if code.theta * code.rho != code.n * code.d:
        found.append(
            Violation(
                "repetition_identity",
                None,
                f"theta*rho={code.theta * code.rho} differs from n*d={code.n * code.d}",
            )
        )
    counts: Counter[int] = Counter()
    for node, s in enumerate(code.node_sets, start=1):
        distinct = set(s)
        if len(distinct) != len(s):
            found.append(Violation("duplicate_packet", node, f"node {node} lists a packet more than once"))
        if len(distinct) != code.d:
            found.append(Violation("node_size", node, f"node {node} stores {len(distinct)} packets, expected d={code.d}"))
        outside = sorted(p for p in distinct if not 1 <= p <= code.theta)
        if outside:
            found.append(Violation("out_of_range", node, f"node {node} stores packets {outside} outside 1..{code.theta}"))
        counts.update(distinct)
    for packet in range(1, code.theta + 1):
        if counts[packet] != code.rho:
            found.append(
                Violation(
                    "multiplicity",
                    packet,
                    f"packet {packet} appears {counts[packet]} times, expected rho={code.rho}",
                )
            )
    return ValidationReport(tuple(found))


def c_mbr(n: int, k: int, d: int) -> int:
    """Storage capacity at the minimum-bandwidth point: k*d - C(k, 2)."""
    if not 1 <= k <= d < n:
        raise ParameterError(f"need 1 <= k <= d < n, got n={n}, k={k}, d={d}")
    return k * d - k * (k - 1) // 2


def rate(code: FrCode, k: int, *, cap: int = DEFAULT_ENUMERATION_CAP) -> Rate:
    """Exact minimum number of distinct packets over all k-node subsets."""
    if not 1 <= k <= code.n:
        raise ParameterError(f"k={k} outside 1..n={code.n}")
    count = comb(code.n, k)
    if count > cap:
        raise EnumerationCapError(count, cap)
    return Rate(k, kernels.min_union_size(list(code.masks), k))


def rate_profile(code: FrCode, ks: Sequence[int] | None = None, *, cap: int = DEFAULT_ENUMERATION_CAP) -> dict[int, int]:
    ks = range(1, code.d + 1) if ks is None else ks
    return {k: rate(code, k, cap=cap).value for k in ks}


def is_universally_good(code: FrCode, *, cap: int = DEFAULT_ENUMERATION_CAP) -> Goodness:
    """True iff the rate reaches C_MBR for every k in 1..d."""
    report = validate_fr(code)
    if not report.ok:
        raise InvalidCodeError("; ".join(v.message for v in report.violations))
    margins = tuple(
        rate(code, k, cap=cap).value - c_mbr(code.n, k, code.d) for k in range(1, code.d + 1)
    )
    return Goodness(all(m >= 0 for m in margins), margins)


def pairwise_intersections(code: FrCode) -> list[int]:
    """Sorted multiset of |V_i & V_j| over all node pairs."""
    sets = [set(s) for s in code.node_sets]
    return sorted(len(a & b) for a, b in combinations(sets, 2))
