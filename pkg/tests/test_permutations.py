import itertools
import math

import numpy as np
import pytest
from hypothesis import given

from boxball.config import BoxBallConfig
from boxball.diagram import YoungDiagram
from boxball.errors import DomainError, ParseError
from boxball.forests import forest_of_path, parse_forest
from boxball.paths import LatticePath, config_of_path, path_of_config, young_diagram
from boxball.permutations import (
    Permutation,
    avoids,
    greedy_lambda_rho,
    inverse,
    parse_permutation,
    rs_shape,
    sigma_of_config,
    sigma_of_forest,
    sigma_of_path,
)

from conftest import SPLIT, dense_configs


def dyck_paths(n):
    """All Dyck paths with n upsteps, as height lists."""
    def rec(h, ups, downs):
        if ups == n and downs == n:
            yield list(h)
            return
        if ups < n:
            h.append(h[-1] + 1)
            yield from rec(h, ups + 1, downs)
            h.pop()
        if downs < ups:
            h.append(h[-1] - 1)
            yield from rec(h, ups, downs + 1)
            h.pop()
    yield from rec([0], 0, 0)


def shape_by_greene(perm):
    """Row lengths from Greene's theorem, by brute force over subsets."""
    m = len(perm)
    best = [0] * (m + 1)
    for mask in range(1 << m):
        sub = [perm[i] for i in range(m) if mask >> i & 1]
        lds = _longest(sub, decreasing=True)
        for k in range(lds, m + 1):
            best[k] = max(best[k], len(sub))
    rows = [best[k] - best[k - 1] for k in range(1, m + 1)]
    return tuple(r for r in rows if r)


def _longest(vals, decreasing):
    best = []
    for i, v in enumerate(vals):
        prev = [best[j] for j in range(i) if (vals[j] > v if decreasing else vals[j] < v)]
        best.append(1 + max(prev, default=0))
    return max(best, default=0)


def test_split_example_permutations():
    cfg = BoxBallConfig(SPLIT)
    path = path_of_config(cfg)
    sigma = sigma_of_config(cfg)
    assert str(sigma) == "1 4 6 5 3 2"
    assert str(sigma_of_path(path)) == "1 6 5 2 4 3"
    assert str(sigma_of_forest(forest_of_path(path))) == "1 6 5 2 4 3"
    assert sigma_of_path(path)[3 - 1] == 5
    assert sigma.inverse() == sigma_of_path(path)


def test_small_examples():
    assert sigma_of_config(BoxBallConfig({1})) == (1,)
    # ball 2 is dropped first (box 3), then ball 1 (box 4)
    assert str(sigma_of_config(BoxBallConfig({1, 2}))) == "2 1"
    assert sigma_of_config(BoxBallConfig()) == ()
    assert sigma_of_path(LatticePath([0, 1, 2, 1, 0])) == (2, 1)
    assert sigma_of_path(LatticePath([0, 1, 0])) == (1,)
    assert sigma_of_forest(parse_forest("(())")) == (1,)


def test_permutation_type():
    p = parse_permutation("3 1 2")
    assert p == (3, 1, 2) and str(p) == "3 1 2"
    assert inverse(p) == (2, 3, 1)
    with pytest.raises(DomainError):
        Permutation([1, 1])
    with pytest.raises(ParseError):
        parse_permutation("1 x")


def test_rs_shape_examples():
    assert rs_shape((1, 4, 6, 5, 3, 2)) == YoungDiagram((4, 1, 1), (3, 1, 1, 1))
    assert rs_shape(tuple(range(1, 8))).rows == (7,)
    assert rs_shape(tuple(range(7, 0, -1))).columns == (7,)
    assert rs_shape(()) == YoungDiagram((), ())


def test_rs_shape_matches_greene():
    rng = np.random.default_rng(3)
    for _ in range(150):
        m = int(rng.integers(1, 10))
        perm = tuple(int(x) + 1 for x in rng.permutation(m))
        assert rs_shape(perm).rows == shape_by_greene(perm)


def test_avoids_examples():
    assert avoids((1, 4, 6, 5, 3, 2), (3, 1, 2))
    assert avoids((1, 6, 5, 2, 4, 3), (2, 3, 1))
    assert not avoids((2, 3, 1), (2, 3, 1))
    with pytest.raises(DomainError):
        avoids((1, 2), (1,))


def test_avoids_matches_brute_force():
    for m in range(1, 7):
        for perm in itertools.permutations(range(1, m + 1)):
            for pattern in itertools.permutations((1, 2, 3)):
                brute = not any(
                    tuple(np.argsort(sub)) == tuple(np.argsort(pattern))
                    for sub in itertools.combinations(perm, 3)
                )
                assert avoids(perm, pattern) == brute
    assert not avoids((2, 4, 1, 3), (2, 4, 1, 3))
    assert avoids((1, 2, 3, 4), (2, 1, 4, 3))


@given(dense_configs())
def test_inverse_law_and_patterns(cfg):
    if cfg.ball_count == 0:
        return
    path = path_of_config(cfg)
    sigma = sigma_of_config(cfg)
    assert sigma_of_path(path) == sigma.inverse()
    assert sigma_of_forest(forest_of_path(path)) == sigma.inverse()
    assert avoids(sigma, (3, 1, 2))
    assert avoids(sigma.inverse(), (2, 3, 1))


@given(dense_configs())
def test_rs_shape_is_the_soliton_diagram(cfg):
    assert rs_shape(sigma_of_config(cfg)) == young_diagram(path_of_config(cfg))


def test_path_to_permutation_is_a_bijection_onto_231_avoiders():
    for n, catalan in zip(range(1, 7), (1, 2, 5, 14, 42, 132)):
        images = {sigma_of_path(LatticePath(h)) for h in dyck_paths(n)}
        assert len(images) == catalan == math.comb(2 * n, n) // (n + 1)
        avoiders = {
            Permutation(p) for p in itertools.permutations(range(1, n + 1))
            if n < 3 or avoids(p, (2, 3, 1))
        }
        assert images == avoiders


def test_dyck_paths_are_h_restricted_configs():
    for h in dyck_paths(4):
        path = LatticePath(h)
        assert path_of_config(config_of_path(path)) == path


def test_greedy_examples():
    assert greedy_lambda_rho((1, 4, 6, 5, 3, 2)) == ([4, 1, 1], [3, 1, 1, 1], True)
    assert greedy_lambda_rho(tuple(range(1, 6)))[0] == [1] * 5


def test_greedy_can_disagree_for_general_permutations():
    lam, rho, agrees = greedy_lambda_rho((2, 5, 1, 3, 4))
    assert (lam, rho, agrees) == ([2, 2, 1], [3, 1, 1], False)
    assert rs_shape((2, 5, 1, 3, 4)).rows == (3, 2)


def test_greedy_agrees_on_stack_sortable():
    # exhaustive up to 9, random Dyck paths up to 12
    for n in range(1, 10):
        for h in dyck_paths(n):
            assert greedy_lambda_rho(sigma_of_path(LatticePath(h)))[2]
    rng = np.random.default_rng(5)
    for _ in range(300):
        n = int(rng.integers(10, 13))
        steps = rng.permutation(np.r_[np.ones(n), -np.ones(n + 1)].astype(int))
        k = int(np.argmin(np.cumsum(steps))) + 1
        h = np.r_[0, np.cumsum(np.r_[steps[k:], steps[:k]][:-1])]
        assert greedy_lambda_rho(sigma_of_path(LatticePath(h)))[2]
