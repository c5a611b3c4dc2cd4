"""Upper bounds on FR capacity and an exhaustive capacity search for tiny systems."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, floor
from typing import Any

from . import kernels
from .errors import BudgetExceededError, ParameterError
from .frcore import FrCode, rate

DEFAULT_MAX_CELLS = 64


def _check_divisible(n: int, d: int, rho: int) -> None:
    if rho < 1:
        raise ParameterError(f"rho must be positive, got {rho}")
    if (n * d) % rho:
        raise ParameterError(f"n*d={n * d} not divisible by rho={rho}")


def averaging_bound(n: int, k: int, d: int, rho: int) -> int:
    """floor((n*d/rho) * (1 - C(n-rho, k)/C(n, k))), exactly.

    This is the mean number of distinct packets seen by a uniformly random
    k-subset of nodes; C(n-rho, k) is taken as 0 when n-rho < k.
    """
    _check_divisible(n, d, rho)
    if not 1 <= k <= n:
        raise ParameterError(f"k={k} outside 1..n={n}")
    missing = comb(n - rho, k) if n - rho >= k else 0
    return floor(Fraction(n * d, rho) * (1 - Fraction(missing, comb(n, k))))


def recursive_bound(n: int, k: int, d: int, rho: int) -> int:
    """g(k) with g(1) = d and g(j+1) = g(j) + d - ceil((rho*g(j) - j*d) / (n-j))."""
    _check_divisible(n, d, rho)
    if not 1 <= k < n:
        raise ParameterError(f"need 1 <= k < n, got k={k}, n={n}")
    g = d
    for j in range(1, k):
        g = g + d - -((j * d - rho * g) // (n - j))
    return g


def recursive_sequence(n: int, k: int, d: int, rho: int) -> list[int]:
    """[g(1), ..., g(k)]."""
    return [recursive_bound(n, j, d, rho) for j in range(1, k + 1)]


@dataclass(frozen=True)
class SearchResult:
    value: int
    exact: bool
    witness: FrCode | None
    nodes_visited: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "exact": self.exact,
            "value": self.value,
            "witness": [list(s) for s in self.witness.node_sets] if self.witness else None,
        }


class _Search:
    def __init__(self, n: int, d: int, rho: int, k: int, ceiling: int, deadline: float | None):
        self.n, self.d, self.rho, self.k = n, d, rho, k
        self.theta = n * d // rho
        self.ceiling = ceiling
        self.deadline = deadline
        self.best = -1
        self.witness: tuple[tuple[int, ...], ...] | None = None
        self.visited = 0
        self.counts = [0] * (self.theta + 1)
        self.sets: list[tuple[int, ...]] = []
        self.masks: list[int] = []

    def run(self) -> None:
        self._extend(next_fresh=1)

    def _candidates(self, next_fresh: int):
        top = min(self.theta, next_fresh + self.d - 1)
        prev = self.sets[-1] if self.sets else None
        for cand in combinations(range(1, top + 1), self.d):
            if prev is not None and cand < prev:
                continue
            fresh = [p for p in cand if p >= next_fresh]
            # fresh labels must be introduced in order: next_fresh, next_fresh+1, ...
            if fresh and fresh[-1] != next_fresh + len(fresh) - 1:
                continue
            if any(self.counts[p] >= self.rho for p in cand if p < next_fresh):
                continue
            yield cand, next_fresh + len(fresh)

    def _feasible(self, next_fresh: int) -> bool:
        left = self.n - len(self.sets)
        if next_fresh <= self.theta and left < self.rho:
            return False
        return all(self.rho - self.counts[p] <= left for p in range(1, next_fresh))

    def _extend(self, next_fresh: int) -> bool:
        self.visited += 1
        if self.deadline is not None and self.visited % 256 == 0 and time.monotonic() > self.deadline:
            raise TimeoutError
        placed = len(self.sets)
        if placed >= self.k:
            partial = kernels.min_union_size(self.masks, self.k)
            # more nodes only add k-subsets, so the final rate is <= partial
            if partial <= self.best:
                return False
            if placed == self.n:
                self.best = partial
                self.witness = tuple(self.sets)
                return self.best >= self.ceiling
        for cand, nxt in self._candidates(next_fresh):
            mask = 0
            for p in cand:
                self.counts[p] += 1
                mask |= 1 << p
            self.sets.append(cand)
            self.masks.append(mask)
            done = self._feasible(nxt) and self._extend(nxt)
            self.masks.pop()
            self.sets.pop()
            for p in cand:
                self.counts[p] -= 1
            if done:
                return True
        return False


def fr_capacity_search(
    n: int,
    d: int,
    rho: int,
    k: int,
    *,
    budget_seconds: float | None = 60.0,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> SearchResult:
    """Maximum rate at ``k`` over every FR code with these parameters.

    Backtracking over node sets in lexicographically nondecreasing order with
    packet labels introduced in first-use order; every isomorphism class has a
    representative of that form. Branches whose partial rate cannot beat the
    incumbent are cut, and the search stops once the averaging bound is met.

    Raises:
        BudgetExceededError: on timeout; carries the best rate found so far,
            which is only a lower bound on the capacity.
    """
    _check_divisible(n, d, rho)
    theta = n * d // rho
    if not 1 <= k <= n:
        raise ParameterError(f"k={k} outside 1..n={n}")
    if not (1 <= d <= theta and 1 <= rho <= n):
        raise ParameterError(f"no FR code with n={n}, d={d}, rho={rho}")
    if n * theta > max_cells:
        raise ParameterError(f"search space n*theta={n * theta} exceeds max_cells={max_cells}")
    ceiling = min(averaging_bound(n, k, d, rho), theta, k * d)
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    search = _Search(n, d, rho, k, ceiling, deadline)

    def witness() -> FrCode | None:
        if search.witness is None:
            return None
        return FrCode(n=n, d=d, rho=rho, theta=theta, node_sets=search.witness)

    try:
        search.run()
    except TimeoutError:
        best = search.best if search.best >= 0 else None
        raise BudgetExceededError(
            f"budget of {budget_seconds}s exhausted after {search.visited} nodes; best so far {best}",
            best,
            witness(),
        ) from None
    if search.witness is None:
        raise ParameterError(f"no FR code exists with n={n}, d={d}, rho={rho}")
    return SearchResult(search.best, True, witness(), search.visited)


def best_known_code(n: int, d: int, rho: int, k: int) -> FrCode | None:
    """Highest-rate code among this package's constructions for (n, d, rho)."""
    from . import constructions as cons
    from .designs import fano_plane, steiner_triple_system

    found: list[FrCode] = []
    if rho == 2 and (n * d) % 2 == 0 and 1 <= d < n:
        found.append(cons.regular_graph_code(n, d))
    if (n, d, rho) == (6, 3, 2):
        found.append(cons.grid_code())
    if rho == 3 and n >= 7 and n % 6 in (1, 3) and d == (n - 1) // 2:
        found.append(cons.transpose_code(steiner_triple_system(n)))
    if d == 3:
        for v in range(7, 200, 2):
            if v % 6 in (1, 3) and v * (v - 1) // 6 == n and (v - 1) // 2 == rho:
                found.append(cons.direct_code(steiner_triple_system(v)))
    if (n, d, rho) == (7, 3, 3):
        found.append(cons.direct_code(fano_plane()))
    found = [c for c in found if k <= c.n]
    if not found:
        return None
    return max(found, key=lambda c: rate(c, k).value)


@dataclass(frozen=True)
class CapacityReport:
    n: int
    k: int
    d: int
    rho: int
    averaging: int
    recursive: int | None
    best_known_rate: int | None = None
    best_known_code: FrCode | None = None
    search: SearchResult | None = None
    search_error: str | None = None

    @property
    def exact_capacity(self) -> int | None:
        if self.search is not None and self.search.exact:
            return self.search.value
        return None

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "rho": self.rho,
            "averaging": self.averaging,
            "recursive": self.recursive,
        }
        if self.best_known_rate is not None:
            doc["best_known"] = {"value": self.best_known_rate, "code": self.best_known_code.to_dict()}
        if self.search is not None:
            doc["search"] = self.search.to_dict()
        if self.search_error is not None:
            doc["search_error"] = self.search_error
        return doc


def capacity_report(
    n: int,
    k: int,
    d: int,
    rho: int,
    *,
    search: bool = False,
    budget_seconds: float | None = 60.0,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> CapacityReport:
    avg = averaging_bound(n, k, d, rho)
    rec = recursive_bound(n, k, d, rho) if k < n else None
    code = best_known_code(n, d, rho, k)
    known = rate(code, k).value if code is not None else None
    result = None
    error = None
    if search:
        try:
            result = fr_capacity_search(n, d, rho, k, budget_seconds=budget_seconds, max_cells=max_cells)
        except BudgetExceededError as exc:
            result = SearchResult(exc.best if exc.best is not None else 0, False, exc.witness)
            error = str(exc)
    return CapacityReport(n, k, d, rho, avg, rec, known, code, result, error)
