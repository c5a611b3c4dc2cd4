"""Systematic MDS outer code over GF(256), coding each byte column independently.

Parity rows come from a Cauchy matrix normalised so that its first row and
first column are all ones. Row and column scaling keep every square
submatrix nonsingular, so any ``m`` of the ``theta`` packets decode, and with a
single parity packet that packet is the XOR of the sources.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from . import kernels
from .errors import FieldCapacityError, InsufficientPacketsError, ParameterError
from .gf256 import inv, invert_matrix, mul

MAX_THETA = 255


@dataclass(frozen=True)
class SourceFile:
    packets: tuple[bytes, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "packets", tuple(bytes(p) for p in self.packets))
        if not self.packets:
            raise ParameterError("a source file needs at least one packet")
        if len({len(p) for p in self.packets}) != 1:
            raise ParameterError("source packets differ in length")

    @property
    def m(self) -> int:
        return len(self.packets)

    @property
    def packet_len(self) -> int:
        return len(self.packets[0])

    @classmethod
    def from_bytes(cls, data: bytes, m: int) -> SourceFile:
        """Split into ``m`` equal packets, zero-padding the tail.

        The caller keeps ``len(data)`` to undo the padding.
        """
        if m < 1:
            raise ParameterError(f"m must be positive, got {m}")
        size = max(1, -(-len(data) // m))
        padded = data.ljust(size * m, b"\0")
        return cls(tuple(padded[i * size : (i + 1) * size] for i in range(m)))

    def to_bytes(self, length: int | None = None) -> bytes:
        blob = b"".join(self.packets)
        return blob if length is None else blob[:length]


class CodedPacket(NamedTuple):
    index: int  # 1-based position in the codeword
    payload: bytes


@lru_cache(maxsize=None)
def parity_matrix(m: int, theta: int) -> tuple[tuple[int, ...], ...]:
    """(theta-m) x m coefficients of the redundant packets."""
    _check_dims(m, theta)
    r = theta - m
    if r == 0:
        return ()
    cauchy = [[inv(j ^ (r + i)) for i in range(m)] for j in range(r)]
    col_scale = [inv(cauchy[0][i]) for i in range(m)]
    cauchy = [[mul(c, s) for c, s in zip(row, col_scale)] for row in cauchy]
    cauchy = [[mul(c, inv(row[0])) for c in row] for row in cauchy]
    return tuple(tuple(row) for row in cauchy)


def generator_row(index: int, m: int, theta: int) -> tuple[int, ...]:
    """Coefficients mapping the source packets to coded packet ``index`` (1-based)."""
    if index <= m:
        return tuple(int(i == index - 1) for i in range(m))
    return parity_matrix(m, theta)[index - m - 1]


def _check_dims(m: int, theta: int) -> None:
    if theta > MAX_THETA:
        raise FieldCapacityError(f"theta={theta} exceeds the GF(256) limit of {MAX_THETA}")
    if not 1 <= m <= theta:
        raise ParameterError(f"need 1 <= m <= theta, got m={m}, theta={theta}")


def mds_encode(file: SourceFile, theta: int) -> list[CodedPacket]:
    _check_dims(file.m, theta)
    parity = kernels.gf_matmul([list(r) for r in parity_matrix(file.m, theta)], list(file.packets))
    coded = list(file.packets) + parity
    return [CodedPacket(i, p) for i, p in enumerate(coded, start=1)]


@lru_cache(maxsize=4096)
def _decoding_matrix(m: int, theta: int, indices: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    sub = [list(generator_row(i, m, theta)) for i in indices]
    return tuple(tuple(row) for row in invert_matrix(sub))


def mds_decode(packets: Iterable[CodedPacket], m: int, theta: int) -> SourceFile:
    """Recover the source from any ``m`` packets with distinct indices."""
    _check_dims(m, theta)
    by_index: dict[int, bytes] = {}
    for index, payload in packets:
        if not 1 <= index <= theta:
            raise ParameterError(f"packet index {index} outside 1..{theta}")
        by_index.setdefault(index, bytes(payload))
    if len(by_index) < m:
        raise InsufficientPacketsError(f"{len(by_index)} distinct packets, need m={m}")
    chosen = tuple(sorted(by_index)[:m])
    if len({len(by_index[i]) for i in chosen}) != 1:
        raise ParameterError("coded packets differ in length")
    if chosen[-1] == m:
        return SourceFile(tuple(by_index[i] for i in chosen))
    matrix = _decoding_matrix(m, theta, chosen)
    rows = kernels.gf_matmul([list(r) for r in matrix], [by_index[i] for i in chosen])
    return SourceFile(tuple(rows))


def write_packet(directory: Path, packet: CodedPacket, m: int, theta: int) -> Path:
    """Write ``packet_<j>.bin`` with its ``packet_<j>.json`` sidecar."""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"packet_{packet.index}.bin"
    path.write_bytes(packet.payload)
    sidecar = {"index": packet.index, "m": m, "theta": theta, "packet_len": len(packet.payload)}
    (directory / f"packet_{packet.index}.json").write_text(json.dumps(sidecar))
    return path


def read_packets(directory: Path) -> list[tuple[CodedPacket, dict]]:
    """All packets in ``directory`` together with their sidecars."""
    found = []
    for sidecar_path in sorted(directory.glob("packet_*.json")):
        meta = json.loads(sidecar_path.read_text())
        payload = (directory / f"packet_{meta['index']}.bin").read_bytes()
        if len(payload) != meta["packet_len"]:
            raise ParameterError(f"{sidecar_path.name}: payload length {len(payload)} != {meta['packet_len']}")
        found.append((CodedPacket(int(meta["index"]), payload), meta))
    return found


def write_codeword(directory: Path, packets: Sequence[CodedPacket], m: int, theta: int) -> Path:
    """Write every packet plus a ``manifest.json`` listing them."""
    for packet in packets:
        write_packet(directory, packet, m, theta)
    manifest = {
        "m": m,
        "theta": theta,
        "packet_len": len(packets[0].payload) if packets else 0,
        "packets": [f"packet_{p.index}.bin" for p in packets],
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2))
    return path
