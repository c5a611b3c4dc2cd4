from __future__ import annotations

import time
from contextlib import contextmanager
from itertools import combinations

import pytest

from frcodes.constructions import complete_graph_code, direct_code, grid_code, regular_graph_code, transpose_code
from frcodes.designs import fano_plane, steiner_triple_system
from frcodes.kernels import available_backends

_RESULTS = pytest.StashKey[list]()


def brute_rate(code, k):
    """Independent oracle: smallest union over all k-subsets, via Python sets."""
    sets = [set(s) for s in code.node_sets]
    return min(len(set().union(*(sets[i] for i in idx))) for idx in combinations(range(code.n), k))


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def fano():
    return direct_code(fano_plane())


@pytest.fixture
def grid():
    return grid_code()


@pytest.fixture
def k5():
    return complete_graph_code(5)


def constructed_codes(max_n=None):
    """(label, code) for every construction family used in the sweeps."""
    out = [("grid", grid_code()), ("fano", direct_code(fano_plane()))]
    out += [(f"complete({n})", complete_graph_code(n)) for n in range(3, 11)]
    out += [
        (f"circulant({n},{d})", regular_graph_code(n, d))
        for n in range(2, 11)
        for d in range(1, n)
        if n * d % 2 == 0
    ]
    for v in (7, 9, 13, 15):
        sts = steiner_triple_system(v)
        out.append((f"direct(S(2,3,{v}))", direct_code(sts)))
        out.append((f"transpose(S(2,3,{v}))", transpose_code(sts)))
    if max_n is not None:
        out = [(label, c) for label, c in out if c.n <= max_n]
    return out


@pytest.fixture
def criterion(request):
    results = request.config.stash.setdefault(_RESULTS, [])

    @contextmanager
    def check(label: str):
        start = time.perf_counter()
        note: list[str] = []
        try:
            yield note
        except BaseException:
            results.append((label, "FAIL", time.perf_counter() - start, note))
            raise
        results.append((label, "PASS", time.perf_counter() - start, note))

    return check


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, elapsed, note in sorted(results, key=lambda r: int(r[0].split(".")[0])):
        terminalreporter.write_line(f"{status}  {label}  ({elapsed:.2f}s)")
        for line in note:
            terminalreporter.write_line(f"        {line}")
