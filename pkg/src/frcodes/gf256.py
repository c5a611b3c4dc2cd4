"""Arithmetic in GF(2^8) modulo the AES polynomial x^8 + x^4 + x^3 + x + 1."""

from __future__ import annotations

POLY = 0x11B
GENERATOR = 0x03  # 0x02 is not primitive for this polynomial

EXP = [0] * 510
LOG = [0] * 256

_x = 1
for _i in range(255):
    EXP[_i] = _x
    LOG[_x] = _i
    _x2 = _x << 1
    if _x2 & 0x100:
        _x2 ^= POLY
    _x ^= _x2
for _i in range(255, 510):
    EXP[_i] = EXP[_i - 255]
del _x, _x2, _i


def mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return EXP[255 - LOG[a]]


def div(a: int, b: int) -> int:
    return mul(a, inv(b))


# MUL_TABLES[c] maps every byte x to c*x; usable with bytes.translate.
MUL_TABLES: tuple[bytes, ...] = tuple(bytes(mul(c, x) for x in range(256)) for c in range(256))


def invert_matrix(matrix: list[list[int]]) -> list[list[int]]:
    """Gauss-Jordan inverse of a square matrix over GF(256).

    Raises:
        ValueError: if the matrix is singular.
    """
    size = len(matrix)
    work = [list(row) + [int(i == j) for j in range(size)] for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if work[r][col]), None)
        if pivot is None:
            raise ValueError("singular matrix")
        work[col], work[pivot] = work[pivot], work[col]
        scale = inv(work[col][col])
        table = MUL_TABLES[scale]
        work[col] = [table[x] for x in work[col]]
        for r in range(size):
            factor = work[r][col]
            if r != col and factor:
                ftable = MUL_TABLES[factor]
                work[r] = [a ^ ftable[b] for a, b in zip(work[r], work[col])]
    return [row[size:] for row in work]
