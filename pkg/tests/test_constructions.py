
import pytest

from frcodes.constructions import (
    circulant_graph,
    complete_graph_code,
    direct_code,
    grid_code,
    random_regular_graph,
    regular_graph_code,
    transpose_code,
)
from frcodes.designs import SteinerSystem, fano_plane, steiner_triple_system
from frcodes.errors import InvalidDesignError, ParameterError
from frcodes.frcore import is_universally_good, pairwise_intersections, rate, validate_fr

from .conftest import brute_rate, constructed_codes


def test_k5_lexicographic_edge_placement():
    code = complete_graph_code(5)
    assert code.theta == 10 and code.d == 4 and code.rho == 2
    assert code.node_sets == ((1, 2, 3, 4), (1, 5, 6, 7), (2, 5, 8, 9), (3, 6, 8, 10), (4, 7, 9, 10))
    assert pairwise_intersections(code) == [1] * 10


def test_triangle():
    assert complete_graph_code(3).node_sets == ((1, 2), (1, 3), (2, 3))
    with pytest.raises(ParameterError):
        complete_graph_code(2)


def test_complete_graph_seven_validates():
    code = complete_graph_code(7)
    assert validate_fr(code).ok and code.rho == 2


def test_regular_six_three():
    code = regular_graph_code(6, 3)
    assert code.theta == 9
    assert all(len(s) == 3 for s in code.node_sets)
    assert validate_fr(code).ok


@pytest.mark.parametrize("n", range(3, 10))
def test_regular_full_degree_is_complete(n):
    assert regular_graph_code(n, n - 1) == complete_graph_code(n)
    assert regular_graph_code(n, n - 1, seed=4) == complete_graph_code(n)


@pytest.mark.parametrize("n,d,msg", [(5, 3, "nd odd"), (4, 4, "d >= n"), (4, 5, "d >= n")])
def test_regular_parameter_errors(n, d, msg):
    with pytest.raises(ParameterError, match=msg):
        regular_graph_code(n, d)


@pytest.mark.parametrize("n,d", [(n, d) for n in range(2, 21) for d in range(1, n) if n * d % 2 == 0])
def test_graphs_are_simple_and_regular(n, d):
    import random

    assert circulant_graph(n, d).is_valid()
    assert random_regular_graph(n, d, random.Random(n * 100 + d)).is_valid()


def test_seeded_regular_code_is_reproducible():
    assert regular_graph_code(10, 4, seed=11) == regular_graph_code(10, 4, seed=11)
    seen = {regular_graph_code(12, 3, seed=s).node_sets for s in range(8)}
    assert len(seen) > 1


def test_direct_and_transpose_parameter_maps():
    s9 = steiner_triple_system(9)
    d = direct_code(s9)
    t = transpose_code(s9)
    assert (d.n, d.d, d.rho, d.theta) == (12, 3, 4, 9)
    assert (t.n, t.d, t.rho, t.theta) == (9, 4, 3, 12)
    assert rate(t, 2).value == 7 == brute_rate(t, 2)


def test_fano_direct_is_the_example_code():
    code = direct_code(fano_plane())
    assert (code.n, code.d, code.rho) == (7, 3, 3)
    assert code.node_sets[0] == (1, 2, 3) and code.node_sets[6] == (2, 4, 6)


def test_fano_transpose_matches_direct_up_to_relabeling():
    fano = fano_plane()
    a, b = direct_code(fano), transpose_code(fano)
    assert (a.n, a.d, a.rho) == (b.n, b.d, b.rho) == (7, 3, 3)
    assert pairwise_intersections(a) == pairwise_intersections(b) == [1] * 21


def test_invalid_design_rejected():
    broken = SteinerSystem(alpha=3, v=7, blocks=list(fano_plane().blocks[:6]) + [(2, 4, 5)])
    with pytest.raises(InvalidDesignError):
        direct_code(broken)
    with pytest.raises(InvalidDesignError):
        transpose_code(broken)


def test_grid():
    g = grid_code()
    assert validate_fr(g).ok
    assert (g.n, g.d, g.rho, g.theta) == (6, 3, 2, 9)
    assert rate(g, 3).value == 7


def test_direct_thirteen_universally_good():
    assert is_universally_good(direct_code(steiner_triple_system(13))).good


@pytest.mark.parametrize("label,code", constructed_codes(), ids=lambda x: x if isinstance(x, str) else "")
def test_constructions_valid_with_small_intersections(label, code):
    assert validate_fr(code).ok
    inter = pairwise_intersections(code)
    assert max(inter) <= 1
    if label.startswith(("complete", "transpose")) or label == "fano":
        assert set(inter) == {1}


def test_seeded_codes_universally_good():
    for seed in range(5):
        for n, d in [(8, 3), (10, 4), (12, 5), (9, 6)]:
            code = regular_graph_code(n, d, seed=seed)
            assert validate_fr(code).ok
            assert is_universally_good(code).good
