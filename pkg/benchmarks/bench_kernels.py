"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the k-subset minimum-union kernel on constructed codes and the GF(256)
matrix product used by the outer code, once per available backend.
"""

from __future__ import annotations

import argparse
import random
import timeit

from frcodes.constructions import complete_graph_code, direct_code, regular_graph_code, transpose_code
from frcodes.designs import steiner_triple_system
from frcodes.kernels import available_backends


def union_cases():
    sts15 = steiner_triple_system(15)
    return [
        ("transpose S(2,3,15), k=7", transpose_code(sts15), 7),
        ("direct S(2,3,15), k=3", direct_code(sts15), 3),
        ("complete K10, k=5", complete_graph_code(10), 5),
        ("regular(16,6), k=6", regular_graph_code(16, 6), 6),
    ]


def matmul_cases(rng: random.Random):
    out = []
    for m, r, size in ((6, 1, 4096), (32, 16, 4096), (64, 64, 1024)):
        matrix = [[rng.randrange(256) for _ in range(m)] for _ in range(r)]
        rows = [rng.randbytes(size) for _ in range(m)]
        out.append((f"{r}x{m} by {m}x{size}B", matrix, rows))
    return out


def best_of(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=loops)) / loops


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = available_backends()
    names = list(backends)
    print(f"backends: {', '.join(names)}")
    header = f"{'case':<32}" + "".join(f"{n:>14}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"

    def report(label, timings):
        line = f"{label:<32}" + "".join(f"{t * 1e3:>12.3f}ms" for t in timings)
        if len(timings) > 1:
            line += f"{timings[0] / timings[-1]:>9.1f}x"
        print(line)

    print("\nmin_union_size")
    print(header)
    for label, code, k in union_cases():
        masks = code.masks
        timings = [best_of(lambda b=backends[n]: b.min_union_size(masks, k), args.repeat) for n in names]
        values = {backends[n].min_union_size(masks, k) for n in names}
        assert len(values) == 1, values
        report(label, timings)

    print("\ngf_matmul")
    print(header)
    for label, matrix, rows in matmul_cases(random.Random(0)):
        timings = [best_of(lambda b=backends[n]: b.gf_matmul(matrix, rows), args.repeat) for n in names]
        outputs = {tuple(backends[n].gf_matmul(matrix, rows)) for n in names}
        assert len(outputs) == 1
        report(label, timings)


if __name__ == "__main__":
    main()
