"""Fractional repetition codes for distributed storage.

Constructions from regular graphs and Steiner systems, exact rate and
capacity bounds, a GF(256) outer MDS code, and an in-memory simulator of
table-based exact uncoded repair.
"""

from .bounds import averaging_bound, capacity_report, fr_capacity_search, recursive_bound
from .constructions import (
    complete_graph_code,
    direct_code,
    grid_code,
    regular_graph_code,
    transpose_code,
)
from .designs import SteinerSystem, fano_plane, steiner_params, steiner_triple_system, validate_steiner
from .dsssim import build_repair_table, fail_nodes, init_system, repair, run_scenario, user_read
from .frcore import DssParams, FrCode, c_mbr, is_universally_good, rate, validate_fr
from .kernels import BACKEND
from .mds import CodedPacket, SourceFile, mds_decode, mds_encode

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CodedPacket",
    "DssParams",
    "FrCode",
    "SourceFile",
    "SteinerSystem",
    "averaging_bound",
    "build_repair_table",
    "c_mbr",
    "capacity_report",
    "complete_graph_code",
    "direct_code",
    "fail_nodes",
    "fano_plane",
    "fr_capacity_search",
    "grid_code",
    "init_system",
    "is_universally_good",
    "mds_decode",
    "mds_encode",
    "rate",
    "recursive_bound",
    "regular_graph_code",
    "repair",
    "run_scenario",
    "steiner_params",
    "steiner_triple_system",
    "transpose_code",
    "user_read",
    "validate_fr",
    "validate_steiner",
]
