"""Pure-Python kernels. Reference backend and fallback for the compiled one."""

from __future__ import annotations

from .gf256 import MUL_TABLES


def min_union_size(masks: list[int], k: int) -> int:
    """Smallest popcount of the OR of any ``k`` of ``masks``.

    Depth-first over k-subsets in index order; a branch is dropped as soon as
    its partial union is no smaller than the best complete one, since unions
    only grow.
    """
    n = len(masks)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    floor = min(m.bit_count() for m in masks)  # no union is smaller
    first = 0
    for m in masks[:k]:
        first |= m
    best = first.bit_count()
    if best <= floor:
        return best

    def visit(start: int, depth: int, union: int) -> bool:
        nonlocal best
        last = n - (k - depth)
        for i in range(start, last + 1):
            u = union | masks[i]
            size = u.bit_count()
            if size >= best:
                continue
            if depth + 1 == k:
                best = size
                if best <= floor:
                    return True
            elif visit(i + 1, depth + 1, u):
                return True
        return False

    visit(0, 0, 0)
    return best


def gf_matmul(matrix: list[list[int]], rows: list[bytes]) -> list[bytes]:
    """Multiply an r x m GF(256) matrix by m equal-length byte rows."""
    length = len(rows[0]) if rows else 0
    out = []
    for coeffs in matrix:
        acc = 0
        for c, row in zip(coeffs, rows):
            if c == 0:
                continue
            term = row if c == 1 else row.translate(MUL_TABLES[c])
            acc ^= int.from_bytes(term, "little")
        out.append(acc.to_bytes(length, "little"))
    return out
