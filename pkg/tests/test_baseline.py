"""Classical references: exhaustive scan and zoom refinement."""

import math

import numpy as np
import pytest

from grovermin.baseline import MAX_BRUTE_QUBITS, grid_brute_min, refine_min
from grovermin.encoding import GridLayout, VariableSpec, square_layout
from grovermin.objectives import GOLDSTEIN_PRICE, LJ_TRIMER, Objective

GP_LAYOUT = square_layout(["x", "y"], -3.2, 3.0, 5)
TRIMER_LAYOUT = GridLayout(
    [VariableSpec("B", 0.0001, 2.0, 5), VariableSpec("A", 0.0001, math.pi, 4)]
)


def test_gp_grid_minimum_exact():
    out = grid_brute_min(GOLDSTEIN_PRICE, GP_LAYOUT)
    assert out.index == 523
    assert out.point == (0.0, -1.0)
    assert out.value == 3.0
    assert out.num_evaluations == 1024


def test_trimer_grid_minimum_frozen():
    out = grid_brute_min(LJ_TRIMER, TRIMER_LAYOUT)
    assert out.index == 261
    assert out.value == pytest.approx(-2.909406055942051, abs=1e-12)
    assert out.point == (1.0323064516129032, 1.0472642178632643)
    assert out.num_evaluations == 512


def test_grid_ties_break_to_first_index():
    layout = GridLayout([VariableSpec("t", 0.0, 3.0, 2)])
    table = [3.0, 1.0, 1.0, 2.0]
    objective = Objective("lookup", 1, lambda t: table[int(round(t))])
    out = grid_brute_min(objective, layout)
    assert out.index == 1
    assert out.value == 1.0


def test_grid_accepts_precomputed_values():
    values = GOLDSTEIN_PRICE.batch(GP_LAYOUT.all_points())
    out = grid_brute_min(GOLDSTEIN_PRICE, GP_LAYOUT, values=values)
    assert out == grid_brute_min(GOLDSTEIN_PRICE, GP_LAYOUT)
    with pytest.raises(ValueError, match="values must have shape"):
        grid_brute_min(GOLDSTEIN_PRICE, GP_LAYOUT, values=values[:-1])


def test_grid_refuses_oversized_register():
    wide = GridLayout(
        [VariableSpec("a", 0.0, 1.0, 13), VariableSpec("b", 0.0, 1.0, 12)]
    )
    assert wide.total_qubits == MAX_BRUTE_QUBITS + 1
    with pytest.raises(ValueError, match="exceeds the exhaustive cap"):
        grid_brute_min(GOLDSTEIN_PRICE, wide)


def test_refine_gp_reaches_global_minimum():
    out = refine_min(GOLDSTEIN_PRICE, [(-2.0, 2.0), (-2.0, 2.0)])
    assert out.value == pytest.approx(3.0, abs=1e-9)
    assert out.point[0] == pytest.approx(0.0, abs=1e-6)
    assert out.point[1] == pytest.approx(-1.0, abs=1e-6)
    assert out.num_evaluations == 5 * 15 * 15
    assert out.levels == 5


def test_refine_trimer_reaches_pair_limit():
    out = refine_min(LJ_TRIMER, [(0.5, 1.5), (0.5, math.pi)])
    assert out.value == pytest.approx(-3.0, abs=1e-3)


def test_refine_value_monotone_in_levels():
    prev = np.inf
    for levels in range(1, 6):
        out = refine_min(GOLDSTEIN_PRICE, [(-2.0, 2.0), (-2.0, 2.0)], levels=levels)
        assert out.value <= prev + 1e-15
        prev = out.value


def test_refine_respects_original_box():
    # global minimum sits on the corner of this box
    box = [(-1.0, 0.0), (-1.0, 0.0)]
    out = refine_min(GOLDSTEIN_PRICE, box)
    for (lo, hi), x in zip(box, out.point):
        assert lo <= x <= hi
    assert out.value == pytest.approx(GOLDSTEIN_PRICE(0.0, -1.0), abs=1e-9)


def test_refine_counts_evaluations():
    out = refine_min(
        GOLDSTEIN_PRICE, [(-2.0, 2.0), (-2.0, 2.0)], levels=3, points_per_axis=7
    )
    assert out.num_evaluations == 3 * 7 * 7


def test_refine_one_dimensional():
    objective = Objective("parabola", 1, lambda t: (t - 0.3) ** 2)
    out = refine_min(objective, [(0.0, 1.0)])
    assert out.value == pytest.approx(0.0, abs=1e-6)
    assert out.point[0] == pytest.approx(0.3, abs=1e-3)


def test_refine_validation():
    box = [(-1.0, 1.0), (-1.0, 1.0)]
    with pytest.raises(ValueError, match="levels"):
        refine_min(GOLDSTEIN_PRICE, box, levels=0)
    with pytest.raises(ValueError, match="points_per_axis"):
        refine_min(GOLDSTEIN_PRICE, box, points_per_axis=1)
    with pytest.raises(ValueError, match="zoom"):
        refine_min(GOLDSTEIN_PRICE, box, zoom=1.0)
    with pytest.raises(ValueError, match="axes"):
        refine_min(GOLDSTEIN_PRICE, [(-1.0, 1.0)])
    with pytest.raises(ValueError, match="degenerate"):
        refine_min(GOLDSTEIN_PRICE, [(-1.0, 1.0), (2.0, 2.0)])
