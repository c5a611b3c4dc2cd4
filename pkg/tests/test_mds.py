import json
import random
from functools import reduce
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frcodes.errors import FieldCapacityError, InsufficientPacketsError, ParameterError
from frcodes.mds import (
    CodedPacket,
    SourceFile,
    generator_row,
    mds_decode,
    mds_encode,
    parity_matrix,
    read_packets,
    write_codeword,
)


def xor_bytes(*chunks):
    return bytes(reduce(lambda a, b: a ^ b, col) for col in zip(*chunks))


def random_file(m, length, seed):
    rng = random.Random(seed)
    return SourceFile(tuple(rng.randbytes(length) for _ in range(m)))


def test_single_parity_is_xor():
    f = random_file(9, 32, 1)
    coded = mds_encode(f, 10)
    assert [p.payload for p in coded[:9]] == list(f.packets)
    assert coded[9].payload == xor_bytes(*f.packets)


def test_recover_missing_systematic_packet_by_parity():
    f = random_file(9, 32, 2)
    coded = {p.index: p.payload for p in mds_encode(f, 10)}
    present = [CodedPacket(i, coded[i]) for i in range(1, 11) if i != 3]
    got = mds_decode(present, 9, 10)
    assert got.packets[2] == xor_bytes(coded[10], *(coded[i] for i in range(1, 10) if i != 3))
    assert got == f


def test_zero_redundancy_is_identity():
    f = random_file(5, 8, 3)
    assert [p.payload for p in mds_encode(f, 5)] == list(f.packets)
    assert parity_matrix(5, 5) == ()


def test_all_zero_file():
    f = SourceFile((bytes(16),) * 6)
    assert all(p.payload == bytes(16) for p in mds_encode(f, 7))


def test_fano_outer_code_any_six_of_seven():
    f = random_file(6, 64, 4)
    coded = mds_encode(f, 7)
    for subset in combinations(coded, 6):
        assert mds_decode(subset, 6, 7) == f


def test_every_square_submatrix_invertible_small():
    # MDS <=> every m x m submatrix of the generator is nonsingular
    from frcodes.gf256 import invert_matrix

    for m, theta in [(3, 7), (4, 8), (2, 9)]:
        for idx in combinations(range(1, theta + 1), m):
            invert_matrix([list(generator_row(i, m, theta)) for i in idx])


@settings(max_examples=40, deadline=None)
@given(m=st.integers(1, 8), extra=st.integers(0, 6), length=st.integers(1, 24), seed=st.integers(0, 2**32), data=st.data())
def test_roundtrip_random_subsets(m, extra, length, seed, data):
    theta = m + extra
    f = random_file(m, length, seed)
    coded = mds_encode(f, theta)
    chosen = data.draw(st.permutations(coded))[:m]
    assert mds_decode(chosen, m, theta) == f


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), m=st.integers(1, 6), extra=st.integers(0, 4))
def test_linearity(seed, m, extra):
    a, b = random_file(m, 12, seed), random_file(m, 12, seed + 1)
    both = SourceFile(tuple(xor_bytes(x, y) for x, y in zip(a.packets, b.packets)))
    theta = m + extra
    for pa, pb, pab in zip(mds_encode(a, theta), mds_encode(b, theta), mds_encode(both, theta)):
        assert pab.payload == xor_bytes(pa.payload, pb.payload)


def test_field_limit():
    f = random_file(3, 4, 5)
    with pytest.raises(FieldCapacityError):
        mds_encode(f, 256)
    coded = mds_encode(random_file(200, 4, 6), 255)
    assert mds_decode(coded[55:], 200, 255).packets == random_file(200, 4, 6).packets


def test_decode_errors():
    f = random_file(4, 8, 7)
    coded = mds_encode(f, 6)
    with pytest.raises(InsufficientPacketsError):
        mds_decode(coded[:3], 4, 6)
    with pytest.raises(InsufficientPacketsError):
        mds_decode([coded[0]] * 5, 4, 6)  # duplicates do not count
    with pytest.raises(ParameterError):
        mds_decode(coded[:3] + [CodedPacket(9, coded[0].payload)], 4, 6)
    with pytest.raises(ParameterError):
        SourceFile((b"ab", b"abc"))
    with pytest.raises(ParameterError):
        mds_encode(f, 3)


def test_from_bytes_padding():
    data = bytes(range(10))
    f = SourceFile.from_bytes(data, 3)
    assert f.m == 3 and f.packet_len == 4
    assert f.to_bytes(len(data)) == data
    assert SourceFile.from_bytes(b"", 2).packets == (b"\0", b"\0")


def test_packet_files(tmp_path):
    f = random_file(3, 10, 8)
    coded = mds_encode(f, 5)
    write_codeword(tmp_path, coded, 3, 5)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["packets"] == [f"packet_{i}.bin" for i in range(1, 6)]
    sidecar = json.loads((tmp_path / "packet_4.json").read_text())
    assert sidecar == {"index": 4, "m": 3, "theta": 5, "packet_len": 10}
    back = read_packets(tmp_path)
    assert sorted(p for p, _ in back) == sorted(coded)
    (tmp_path / "packet_2.bin").write_bytes(b"short")
    with pytest.raises(ParameterError):
        read_packets(tmp_path)
