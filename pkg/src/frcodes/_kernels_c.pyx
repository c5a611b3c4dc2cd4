# cython: language_level=3
"""Compiled kernels; same contract as ``frcodes._kernels_py``."""

from libc.stdint cimport uint64_t, uint8_t
from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

from .gf256 import MUL_TABLES

cdef extern from *:
    int __builtin_popcountll(unsigned long long)

cdef uint8_t _MUL[65536]
cdef int _c, _x
for _c in range(256):
    for _x in range(256):
        _MUL[_c * 256 + _x] = MUL_TABLES[_c][_x]

cdef uint64_t WORD_MASK = 0xFFFFFFFFFFFFFFFF


def min_union_size(masks, int k):
    cdef int n = len(masks)
    if k < 1 or k > n:
        raise ValueError(f"k={k} outside 1..{n}")
    cdef int width = max(m.bit_length() for m in masks)
    cdef int W = (width + 63) // 64
    if W == 0:
        W = 1
    cdef uint64_t* words = <uint64_t*> calloc(n * W, sizeof(uint64_t))
    cdef uint64_t* stack = <uint64_t*> calloc((k + 1) * W, sizeof(uint64_t))
    cdef int* idx = <int*> calloc(k + 1, sizeof(int))
    if words == NULL or stack == NULL or idx == NULL:
        free(words); free(stack); free(idx)
        raise MemoryError()
    cdef int i, w, depth, cnt, best, floor = 1 << 30
    try:
        for i in range(n):
            m = masks[i]
            for w in range(W):
                words[i * W + w] = <uint64_t> (m & WORD_MASK)
                m >>= 64
            cnt = 0
            for w in range(W):
                cnt += __builtin_popcountll(words[i * W + w])
            if cnt < floor:
                floor = cnt
        # union of the first k members seeds the bound
        for i in range(k):
            for w in range(W):
                stack[w] |= words[i * W + w]
        best = 0
        for w in range(W):
            best += __builtin_popcountll(stack[w])
            stack[w] = 0
        if best <= floor:
            return best

        depth = 0
        idx[0] = 0
        while depth >= 0:
            i = idx[depth]
            if i > n - (k - depth):
                depth -= 1
                if depth >= 0:
                    idx[depth] += 1
                continue
            cnt = 0
            for w in range(W):
                stack[(depth + 1) * W + w] = stack[depth * W + w] | words[i * W + w]
                cnt += __builtin_popcountll(stack[(depth + 1) * W + w])
            if cnt >= best:
                idx[depth] += 1
                continue
            if depth + 1 == k:
                best = cnt
                if best <= floor:
                    break
                idx[depth] += 1
                continue
            depth += 1
            idx[depth] = i + 1
        return best
    finally:
        free(words)
        free(stack)
        free(idx)


def gf_matmul(matrix, rows):
    cdef Py_ssize_t r_count = len(matrix)
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t length = len(rows[0]) if m else 0
    cdef Py_ssize_t j, i, b
    cdef const uint8_t[::1] src_view
    cdef uint8_t[::1] dst_view
    cdef const uint8_t* src
    cdef uint8_t* dst
    cdef const uint8_t* table
    cdef int c
    out = []
    for j in range(r_count):
        acc = bytearray(length)
        if length == 0:
            out.append(bytes(acc))
            continue
        dst_view = acc
        dst = &dst_view[0]
        coeffs = matrix[j]
        for i in range(m):
            c = coeffs[i]
            if c == 0:
                continue
            src_view = rows[i]
            src = &src_view[0]
            if c == 1:
                for b in range(length):
                    dst[b] ^= src[b]
                continue
            table = &_MUL[c * 256]
            for b in range(length):
                dst[b] ^= table[src[b]]
        out.append(bytes(acc))
    return out
