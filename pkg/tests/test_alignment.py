"""Lattice accumulation, backtrace, projection, and the diagonal walk."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from alignsum import (
    AlignParams,
    ValidationError,
    accumulate,
    backtrace,
    diagonal_path,
    project_to_segments,
)
from alignsum.alignment import FROM_LEFT, FROM_TOP, ORIGIN

# Hand-checked 4x3 grid: accumulation and best path verified by enumerating
# all ten monotone paths by hand.
KNOWN_S = np.array(
    [
        [5.0, 5.0, 3.0],
        [3.0, 7.0, 4.0],
        [8.0, 6.0, 7.0],
        [9.0, 2.0, 5.0],
    ]
)
KNOWN_A = np.array(
    [
        [5.0, 10.0, 13.0],
        [8.0, 17.0, 21.0],
        [16.0, 23.0, 30.0],
        [25.0, 27.0, 35.0],
    ]
)
KNOWN_PATH = [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2), (3, 2)]

# Long dominant interior row: without decay the path runs straight through
# row 1; a tiny vertical decay compounds along that run and reroutes the
# prefix onto the undamped first row.
REROUTE_S = np.zeros((3, 8))
REROUTE_S[0, 0] = 1.0
REROUTE_S[0, 1:] = 1.0 - 1e-5
REROUTE_S[1, :] = 1.0
REROUTE_S[2, 7] = 1.0
REROUTE_VD = 1e-4
REROUTE_PLAIN = [(0, 0), (1, 0)] + [(1, j) for j in range(1, 8)] + [(2, 7)]
REROUTE_DECAYED = [(0, j) for j in range(7)] + [(1, 6), (1, 7), (2, 7)]


def random_similarity(rng: np.random.Generator) -> np.ndarray:
    m = int(rng.integers(1, 7))
    n = int(rng.integers(1, 7))
    return rng.uniform(0.0, 1.0, size=(m, n))


class TestAccumulate:
    def test_known_grid_values(self) -> None:
        tableau = accumulate(KNOWN_S)
        assert np.array_equal(tableau.a, KNOWN_A)

    def test_known_grid_path(self) -> None:
        assert backtrace(accumulate(KNOWN_S)) == KNOWN_PATH

    def test_first_row_and_column_are_prefix_sums(self) -> None:
        rng = np.random.default_rng(3)
        s = rng.uniform(size=(5, 4))
        tableau = accumulate(s)
        assert np.allclose(tableau.a[0, :], np.cumsum(s[0, :]))
        assert np.allclose(tableau.a[:, 0], np.cumsum(s[:, 0]))
        assert tableau.h[0, 0] == ORIGIN
        assert (tableau.h[0, 1:] == FROM_TOP).all()
        assert (tableau.h[1:, 0] == FROM_LEFT).all()

    def test_corner_matches_exhaustive_best(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(60):
            s = random_similarity(rng)
            for p in (1.0, 2.0):
                corner = accumulate(s, AlignParams(p=p)).a[-1, -1]
                best = oracles.best_plain_path_value(s.tolist(), p)
                assert corner == pytest.approx(best, abs=1e-12)

    def test_backtraced_value_no_worse_than_sampled_paths(self) -> None:
        rng = np.random.default_rng(5)
        s = rng.uniform(size=(5, 5))
        corner = accumulate(s).a[-1, -1]
        for path in oracles.all_monotone_paths(5, 5):
            assert corner >= oracles.plain_path_value(s.tolist(), 1.0, path) - 1e-12

    def test_power_squares_before_accumulating(self) -> None:
        rng = np.random.default_rng(9)
        s = rng.uniform(size=(4, 6))
        squared = accumulate(s, AlignParams(p=2.0))
        plain = accumulate(s**2)
        assert np.array_equal(squared.a, plain.a)
        assert np.array_equal(squared.h, plain.h)

    def test_tie_prefers_report_advance(self) -> None:
        tableau = accumulate(np.ones((2, 2)))
        assert tableau.h[1, 1] == FROM_TOP
        assert backtrace(tableau) == [(0, 0), (1, 0), (1, 1)]

    def test_single_cell(self) -> None:
        tableau = accumulate(np.array([[0.25]]))
        assert tableau.a[0, 0] == 0.25
        assert backtrace(tableau) == [(0, 0)]

    def test_rejects_bad_input(self) -> None:
        with pytest.raises(ValidationError):
            accumulate(np.array([1.0, 2.0]))
        with pytest.raises(ValidationError):
            accumulate(np.zeros((0, 3)))
        with pytest.raises(ValidationError):
            accumulate(np.array([[1.0, -0.5]]))
        with pytest.raises(ValidationError):
            accumulate(np.array([[1.0, np.nan]]))

    def test_rejects_bad_params(self) -> None:
        with pytest.raises(ValidationError):
            AlignParams(p=0.5)
        with pytest.raises(ValidationError):
            AlignParams(hd=-0.1)
        with pytest.raises(ValidationError):
            AlignParams(vd=1.5)


class TestDecay:
    def test_zero_decay_is_bitwise_plain(self) -> None:
        rng = np.random.default_rng(21)
        s = rng.uniform(size=(6, 5))
        decayed = accumulate(s, AlignParams(p=2.0, hd=0.0, vd=0.0))
        plain = accumulate(s, AlignParams(p=2.0))
        assert np.array_equal(decayed.a, plain.a)
        assert (decayed.d == 1.0).all()

    def test_borders_never_decay(self) -> None:
        tableau = accumulate(np.ones((4, 4)), AlignParams(hd=0.5, vd=0.5))
        assert (tableau.d[0, :] == 1.0).all()
        assert (tableau.d[:, 0] == 1.0).all()

    def test_corner_matches_recursive_path_value(self) -> None:
        rng = np.random.default_rng(13)
        for _ in range(40):
            s = random_similarity(rng)
            params = AlignParams(
                p=float(rng.choice([1.0, 2.0])),
                hd=float(rng.uniform(0.0, 0.3)),
                vd=float(rng.uniform(0.0, 0.3)),
            )
            tableau = accumulate(s, params)
            path = backtrace(tableau)
            value = oracles.decayed_path_value(
                s.tolist(), params.p, params.hd, params.vd, path
            )
            assert tableau.a[-1, -1] == pytest.approx(value, rel=1e-12, abs=1e-12)

    def test_tiny_vertical_decay_reroutes_dominant_row(self) -> None:
        assert backtrace(accumulate(REROUTE_S)) == REROUTE_PLAIN
        rerouted = backtrace(accumulate(REROUTE_S, AlignParams(vd=REROUTE_VD)))
        assert rerouted == REROUTE_DECAYED
        assert rerouted != REROUTE_PLAIN

    def test_run_decay_compounds_per_step(self) -> None:
        # Third consecutive rightward move in an interior row must see the
        # squared keep factor.  Row 1 dominates so the run is never broken.
        s = np.full((2, 4), 0.01)
        s[1, :] = 1.0
        tableau = accumulate(s, AlignParams(vd=0.5))
        assert tableau.d[1, 1] == 1.0
        assert tableau.d[1, 2] == 0.5
        assert tableau.d[1, 3] == 0.25


class TestScaleInvariance:
    @pytest.mark.parametrize("c", [0.1, 3.0, 100.0])
    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    def test_positive_scaling_keeps_path(self, c: float, p: float) -> None:
        rng = np.random.default_rng(17)
        s = rng.uniform(size=(6, 6))
        params = AlignParams(p=p)
        assert backtrace(accumulate(c * s, params)) == backtrace(
            accumulate(s, params)
        )

    def test_scaling_scales_values_linearly_in_power(self) -> None:
        rng = np.random.default_rng(19)
        s = rng.uniform(size=(4, 5))
        a1 = accumulate(s, AlignParams(p=2.0)).a
        a2 = accumulate(3.0 * s, AlignParams(p=2.0)).a
        assert np.allclose(a2, 9.0 * a1, rtol=1e-12)


class TestBacktracePaths:
    @given(
        st.integers(min_value=1, max_value=8),
        st.integers(min_value=1, max_value=8),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_path_is_monotone_unit_step(self, m: int, n: int, seed: int) -> None:
        rng = np.random.default_rng(seed)
        s = rng.uniform(size=(m, n))
        path = backtrace(accumulate(s))
        assert path[0] == (0, 0)
        assert path[-1] == (m - 1, n - 1)
        assert len(path) == m + n - 1
        for (i0, j0), (i1, j1) in zip(path, path[1:]):
            assert (i1 - i0, j1 - j0) in ((1, 0), (0, 1))


class TestDiagonal:
    def test_wide_report_example(self) -> None:
        assert diagonal_path(4, 2) == [(0, 0), (1, 0), (1, 1), (2, 1), (3, 1)]

    def test_square_staircase(self) -> None:
        assert diagonal_path(3, 3) == [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]

    def test_degenerate_shapes(self) -> None:
        assert diagonal_path(1, 1) == [(0, 0)]
        assert diagonal_path(3, 1) == [(0, 0), (1, 0), (2, 0)]
        assert diagonal_path(1, 4) == [(0, 0), (0, 1), (0, 2), (0, 3)]

    def test_rejects_empty(self) -> None:
        with pytest.raises(ValidationError):
            diagonal_path(0, 3)

    @given(
        st.integers(min_value=1, max_value=40),
        st.integers(min_value=1, max_value=40),
    )
    @settings(max_examples=80, deadline=None)
    def test_path_shape(self, m: int, n: int) -> None:
        path = diagonal_path(m, n)
        assert path[0] == (0, 0)
        assert path[-1] == (m - 1, n - 1)
        assert len(path) == m + n - 1
        for (i0, j0), (i1, j1) in zip(path, path[1:]):
            assert (i1 - i0, j1 - j0) in ((1, 0), (0, 1))

    def test_stays_near_proportional_line(self) -> None:
        # The 1-based walk keeps i*n - j*m inside [-m, n]: it advances i
        # only while i/j < m/n and advances j otherwise.
        for m, n in ((12, 5), (5, 12), (9, 9), (30, 7), (1, 9)):
            for i0, j0 in diagonal_path(m, n):
                assert -m <= (i0 + 1) * n - (j0 + 1) * m <= n


class TestProjection:
    def test_known_grid_projection(self) -> None:
        alignment = project_to_segments(
            KNOWN_PATH,
            KNOWN_A,
            ((0,), (1, 2), (3,)),
            ((0, 1), (2,)),
            meeting_id="known",
        )
        assert alignment.mapping() == [0, 0, 1]

    def test_tie_prefers_earliest_report_segment(self) -> None:
        a = np.ones((2, 2))
        path = [(0, 0), (0, 1), (1, 1)]
        alignment = project_to_segments(path, a, ((0,), (1,)), ((0,), (1,)))
        # t-sentence 0 touches both report segments with equal weight.
        assert alignment.mapping()[0] == 0

    def test_result_is_monotone(self) -> None:
        rng = np.random.default_rng(23)
        for _ in range(50):
            m = int(rng.integers(2, 9))
            n = int(rng.integers(2, 7))
            s = rng.uniform(size=(m, n))
            tableau = accumulate(s)
            t_segments = random_partition(rng, m)
            r_segments = random_partition(rng, n)
            mapping = project_to_segments(
                backtrace(tableau), tableau.a, t_segments, r_segments
            ).mapping()
            assert all(a <= b for a, b in zip(mapping, mapping[1:]))

    def test_rejects_non_partition(self) -> None:
        with pytest.raises(ValidationError):
            project_to_segments(
                [(0, 0)], np.ones((1, 1)), ((0, 0),), ((0,),)
            )

    def test_rejects_path_outside_documents(self) -> None:
        with pytest.raises(ValidationError):
            project_to_segments(
                [(0, 0), (5, 0)], np.ones((6, 1)), ((0,),), ((0,),)
            )


def random_partition(rng: np.random.Generator, total: int):
    cuts = sorted(
        rng.choice(range(1, total), size=int(rng.integers(0, total - 1)), replace=False)
    )
    bounds = [0, *cuts, total]
    return tuple(
        tuple(range(lo, hi)) for lo, hi in zip(bounds, bounds[1:])
    )
