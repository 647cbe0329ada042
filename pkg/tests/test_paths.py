import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boxball.config import BoxBallConfig, carrier_update, is_stable, runs, stabilize
from boxball.diagram import YoungDiagram, transpose
from boxball.errors import DomainError, InvariantViolation
from boxball.paths import (
    HillInterval,
    LatticePath,
    backward_path,
    column_lengths,
    config_of_path,
    excursion,
    excursion_array,
    hill_flatten,
    hill_intervals,
    motzkin_heights,
    next_config_of_path,
    parse_path,
    path_of_config,
    pivot_excursion,
    rightmost_argmax,
    row_lengths,
    rows_by_peak_contraction,
    serialize_path,
    young_columns,
    young_diagram,
    young_rows,
)

from conftest import SPLIT, GOLDEN, configs, dense_configs

GOLDEN_PATH = [0, 0, 1, 2, 1, 2, 3, 4, 3, 2, 1, 2, 1, 0]
SPLIT_PATH = [0, 1, 0, 1, 2, 3, 2, 3, 4, 3, 2, 1, 0]
ZERO = LatticePath([0, 0, 0])


def heights_of(bits):
    """Literal recursion: up at a ball, down at an empty box above 0, flat at 0."""
    h = [0]
    for b in bits:
        h.append(h[-1] + 1 if b else max(h[-1] - 1, 0))
    while h[-1] > 0:
        h.append(h[-1] - 1)
    return h


def test_path_examples():
    assert path_of_config(BoxBallConfig(GOLDEN[0])).heights.tolist() == GOLDEN_PATH
    assert path_of_config(BoxBallConfig(SPLIT)).heights.tolist() == SPLIT_PATH
    assert path_of_config(BoxBallConfig()) == ZERO


@given(configs(max_boxes=200))
def test_scan_matches_recursion(cfg):
    assert path_of_config(cfg).heights.tolist() == heights_of(cfg.bits())


def test_path_equality_ignores_tail():
    assert LatticePath([0, 1, 0]) == LatticePath([0, 1, 0, 0, 0])
    assert hash(LatticePath([0, 1, 0])) == hash(LatticePath([0, 1, 0, 0]))
    assert LatticePath([0, 1, 0]) != LatticePath([0, 1, 1])
    assert LatticePath([0, 1, 2]).at(10) == 2


def test_path_validation():
    with pytest.raises(DomainError):
        LatticePath([0, 2, 1])
    assert LatticePath(GOLDEN_PATH).is_h_restricted
    assert not LatticePath([0, 1, 1, 0]).is_h_restricted
    assert LatticePath([0, 1, 1, 0]).is_motzkin
    assert parse_path(serialize_path(LatticePath(SPLIT_PATH))) == LatticePath(SPLIT_PATH)


def test_config_of_path_examples():
    assert config_of_path(LatticePath([0, 1, 0])) == {1}
    assert config_of_path(LatticePath(GOLDEN_PATH)) == set(GOLDEN[0])
    with pytest.raises(DomainError):
        config_of_path(LatticePath([0, 1, 1, 0]))


@given(configs(max_boxes=200))
def test_round_trip(cfg):
    assert config_of_path(path_of_config(cfg)) == cfg


def test_next_config_examples():
    assert next_config_of_path(path_of_config(BoxBallConfig(GOLDEN[0]))) == set(GOLDEN[1])
    assert next_config_of_path(ZERO) == BoxBallConfig()
    assert next_config_of_path(path_of_config(BoxBallConfig(SPLIT))) == {2, 6, 9, 10, 11, 12}


@given(configs(max_boxes=200))
def test_downstrokes_give_next_sweep(cfg):
    assert next_config_of_path(path_of_config(cfg)) == carrier_update(cfg)


def test_backward_path_examples():
    g = BoxBallConfig(GOLDEN[0])
    assert backward_path(carrier_update(g)) == path_of_config(g)
    assert backward_path(BoxBallConfig()) == ZERO
    last = BoxBallConfig(GOLDEN[3])
    assert backward_path(last) == path_of_config(BoxBallConfig(GOLDEN[2]))
    # staircase descending from the length-4 soliton at boxes 18..21
    assert backward_path(last).heights[14:].tolist() == [1, 2, 3, 4, 3, 2, 1, 0]


@given(dense_configs())
def test_backward_path_of_next_is_forward_path(cfg):
    assert backward_path(carrier_update(cfg)) == path_of_config(cfg)


def test_hill_examples():
    assert hill_intervals(path_of_config(BoxBallConfig(GOLDEN[0]))) == [(3, 3), (7, 7), (11, 11)]
    assert hill_intervals(path_of_config(BoxBallConfig(SPLIT))) == [(1, 1), (5, 5), (8, 8)]
    assert hill_intervals(ZERO) == []


def test_hill_boundary_conventions():
    # the height before index 0 counts as 0, so a leading plateau at 1 is a hill
    assert hill_intervals(np.array([1, 1, 0])) == [HillInterval(0, 1)]
    # a plateau running into the tail is never a hill
    assert hill_intervals(np.array([0, 1, 1])) == []
    assert 4 in HillInterval(3, 5) and 6 not in HillInterval(3, 5)


def test_flatten_examples():
    split = path_of_config(BoxBallConfig(SPLIT))
    assert hill_flatten(split).heights.tolist() == [0, 0, 0, 1, 2, 2, 2, 3, 3, 3, 2, 1, 0]
    assert hill_flatten(ZERO) == ZERO
    flat = hill_flatten(np.array(SPLIT_PATH))
    assert isinstance(flat, np.ndarray)


@given(dense_configs())
def test_flatten_max_times_gives_zero(cfg):
    path = path_of_config(cfg)
    for _ in range(path.max):
        path = hill_flatten(path)
    assert path == ZERO


def test_excursion_examples():
    assert pivot_excursion(LatticePath([0, 1, 2, 1, 0]), 2) == LatticePath([0])
    assert pivot_excursion(ZERO, 1) == ZERO
    g = path_of_config(BoxBallConfig(GOLDEN[0]))
    assert pivot_excursion(g, 8).max == 1
    assert rightmost_argmax([0, 1, 0, 1, 0]) == 3
    assert rightmost_argmax([0, 0, 0]) == 2
    assert rightmost_argmax(g) == 7
    e1 = excursion(g)
    e2 = excursion(e1)
    assert (e1.max, e2.max) == (1, 1)
    assert excursion(e2) == ZERO
    assert excursion(LatticePath([0, 1, 0])) == ZERO
    with pytest.raises(DomainError):
        pivot_excursion(g, 99)


def test_excursion_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(200):
        f = np.cumsum(rng.normal(size=int(rng.integers(1, 30))))
        b = int(rng.integers(f.size))
        expect = [f[t] - f[min(b, t):max(b, t) + 1].min() for t in range(f.size)]
        assert np.allclose(excursion_array(f, b), expect)


def test_young_examples():
    split = path_of_config(BoxBallConfig(SPLIT))
    g = path_of_config(BoxBallConfig(GOLDEN[0]))
    assert young_rows(split) == [3, 1, 1, 1]
    assert young_rows(g) == [3, 1, 1, 1]
    assert young_columns(g) == [4, 1, 1]
    assert young_columns(split) == [4, 1, 1]
    assert young_rows(ZERO) == [] and young_columns(ZERO) == []
    assert young_diagram(g) == YoungDiagram((4, 1, 1), (3, 1, 1, 1))
    assert young_diagram(ZERO) == YoungDiagram((), ())


@given(dense_configs())
def test_diagram_matches_stabilization(cfg):
    stable, _ = stabilize(cfg)
    lengths = [l for _, l in runs(stable)]
    assert young_diagram(path_of_config(cfg)) == YoungDiagram.from_columns(lengths)


@given(dense_configs())
def test_transpose_and_mass(cfg):
    d = young_diagram(path_of_config(cfg))
    assert transpose(d.columns) == d.rows
    assert sum(d.columns) == cfg.ball_count


@given(dense_configs())
def test_diagram_constant_over_sweeps(cfg):
    expect = young_diagram(path_of_config(cfg))
    while not is_stable(cfg):
        cfg = carrier_update(cfg)
        assert young_diagram(path_of_config(cfg)) == expect


@given(dense_configs())
def test_excursion_commutes_with_flattening(cfg):
    path = path_of_config(cfg)
    assert excursion(hill_flatten(path)) == hill_flatten(excursion(path))


@given(dense_configs())
def test_excursion_removes_the_hill_at_the_maximum(cfg):
    cur = path_of_config(cfg)
    hills = hill_intervals(cur)
    for _ in range(len(hills)):
        assert cur.max >= 1
        m = rightmost_argmax(cur)
        nxt = excursion(cur)
        assert hill_intervals(nxt) == [h for h in hills if m not in h]
        cur, hills = nxt, hill_intervals(nxt)
    assert cur == LatticePath([0])


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=40), st.data())
def test_pivot_on_a_plateau(steps, data):
    f = np.concatenate(([0], np.cumsum(steps)))
    x = data.draw(st.integers(0, f.size - 1))
    y = x
    while y + 1 < f.size and f[y + 1] == f[x]:
        y += 1
    assert np.array_equal(excursion_array(f, x), excursion_array(f, y))


@given(st.integers(0, 2**32 - 1))
def test_lipschitz_bounds(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 80))
    f = np.cumsum(rng.normal(size=n))
    g = f + rng.normal(scale=rng.random() * 2, size=n)
    d = np.abs(f - g).max()
    b = int(rng.integers(n))
    assert np.abs(excursion_array(f, b) - excursion_array(g, b)).max() <= 2 * d + 1e-9
    cf, cg = f, g
    for _ in range(5):
        assert abs(cf.max() - cg.max()) <= 2 * d + 1e-9
        cf = excursion_array(cf, rightmost_argmax(cf))
        cg = excursion_array(cg, rightmost_argmax(cg))


@given(dense_configs(max_boxes=100), dense_configs(max_boxes=100))
def test_lipschitz_on_motzkin_pairs(a, b):
    fa, fb = path_of_config(a).heights, path_of_config(b).heights
    m = max(fa.size, fb.size)
    f = np.pad(fa, (0, m - fa.size))
    g = np.pad(fb, (0, m - fb.size))
    d = np.abs(f - g).max()
    assert np.abs(hill_flatten(f) - hill_flatten(g)).max() <= d
    assert abs(max(column_lengths(f, 5) + [0]) - max(column_lengths(g, 5) + [0])) <= 2 * d
    cf, cg = f, g
    for _ in range(5):
        assert abs(int(cf.max()) - int(cg.max())) <= 2 * d
        cf, cg = excursion(cf), excursion(cg)


@given(dense_configs())
def test_peak_contraction_rows(cfg):
    assert rows_by_peak_contraction(cfg) == young_rows(path_of_config(cfg))


@given(dense_configs())
def test_fast_kernels_match_checked_diagram(cfg):
    h = motzkin_heights(cfg.bits())
    d = young_diagram(h)
    assert tuple(row_lengths(h)) == d.rows
    assert tuple(column_lengths(h)) == d.columns
    assert column_lengths(h, 2) == list(d.columns[:2])


def test_young_columns_detects_broken_bookkeeping():
    # a path that is not nearest-neighbour Motzkin can break the hill accounting
    with pytest.raises(InvariantViolation):
        young_columns(np.array([0, 2, 0, 2, 2, 1, 0]))
