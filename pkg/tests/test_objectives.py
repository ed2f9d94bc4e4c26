"""Objective families: polynomial, cosine product, and LJ cluster energies."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grovermin.objectives import (
    CONTACT_EPS,
    ENERGY_CAP,
    GOLDSTEIN_PRICE,
    LJ_TRIMER,
    SHUBERT,
    ClusterGeometry,
    Objective,
    build_fixed_core,
    cluster_energy,
    free_atom_objective,
    get_objective,
    gp_eval,
    lj_pair,
    shubert_eval,
    trimer_energy,
)


@pytest.mark.parametrize(
    "point, value",
    [
        ((0.0, -1.0), 3.0),
        ((-0.6, -0.4), 30.0),
        ((1.8, 0.2), 84.0),
        ((1.2, 0.8), 840.0),
    ],
)
def test_gp_known_values(point, value):
    assert gp_eval(*point) == pytest.approx(value, rel=1e-9)


def test_gp_minimum_is_exact():
    assert gp_eval(0.0, -1.0) == 3.0


def test_shubert_origin_frozen():
    assert shubert_eval(0.0, 0.0) == pytest.approx(19.875836249802127, abs=1e-12)


def test_shubert_global_minimum_value():
    # one of the 18 equivalent minimizers
    assert shubert_eval(-1.42512843, -0.8003211) == pytest.approx(
        -186.73090883102387, abs=1e-6
    )


def test_shubert_is_symmetric():
    for x, y in [(0.3, -1.7), (2.0, 5.5), (-9.1, 4.2)]:
        assert shubert_eval(x, y) == pytest.approx(shubert_eval(y, x), rel=1e-12)


def test_lj_pair_exact_values():
    assert lj_pair(1.0) == -1.0
    assert lj_pair(2.0) == -127.0 / 4096.0
    assert lj_pair(2.0) == -0.031005859375


def test_lj_pair_minimum_at_one():
    rs = np.linspace(0.8, 1.3, 2001)
    vals = np.array([lj_pair(r) for r in rs])
    assert vals.min() >= -1.0
    assert abs(rs[vals.argmin()] - 1.0) < 1e-3


def test_lj_pair_rejects_nonpositive():
    with pytest.raises(ValueError, match="positive"):
        lj_pair(0.0)
    with pytest.raises(ValueError, match="positive"):
        lj_pair(-1.0)


def test_trimer_equilateral_unit():
    assert trimer_energy(1.0, 1.0, math.pi / 3) == pytest.approx(-3.0, abs=1e-12)


@pytest.mark.parametrize("b", [0.7, 0.9, 1.0, 1.2, 1.6])
def test_trimer_equilateral_identity(b):
    # angle pi/3 with equal bonds closes an equilateral triangle
    assert trimer_energy(b, b, math.pi / 3) == pytest.approx(3 * lj_pair(b), abs=1e-10)


def test_trimer_bond_swap_symmetry():
    for b1, b2, a in [(0.9, 1.3, 1.1), (1.0, 2.0, 2.9), (0.5, 0.6, math.pi)]:
        assert trimer_energy(b1, b2, a) == trimer_energy(b2, b1, a)


def test_trimer_grid_minimum_frozen():
    value = LJ_TRIMER(1.0323064516129032, 1.0472642178632643)
    assert value == pytest.approx(-2.909406055942051, abs=1e-12)


def test_trimer_collinear_angle_allowed():
    # a1 = pi is valid: third distance is b1 + b2
    value = trimer_energy(1.0, 1.0, math.pi)
    expected = 2 * lj_pair(1.0) + lj_pair(2.0)
    assert value == pytest.approx(expected, abs=1e-12)


def test_trimer_domain_errors():
    with pytest.raises(ValueError, match="bond lengths"):
        trimer_energy(0.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="bond lengths"):
        trimer_energy(1.0, -1.0, 1.0)
    with pytest.raises(ValueError, match="bond angle"):
        trimer_energy(1.0, 1.0, 0.0)
    with pytest.raises(ValueError, match="bond angle"):
        trimer_energy(1.0, 1.0, math.pi + 0.01)


def test_trimer_coincidence_capped():
    # tiny angle between equal bonds puts atoms 1 and 2 on top of each other
    assert trimer_energy(1.0, 1.0, 1e-9) == ENERGY_CAP
    # just above the contact threshold the raw (huge but finite) value is kept
    near = trimer_energy(1.0, 1.0, 1e-7)
    assert math.isfinite(near) and near != ENERGY_CAP


def test_cluster_energy_tetrahedron():
    core = build_fixed_core(3, 1.0)
    assert core.fixed_energy == pytest.approx(-3.0, abs=1e-12)
    apex = (0.0, math.sqrt(3.0) / 6.0, math.sqrt(2.0 / 3.0))
    assert cluster_energy(core, apex) == pytest.approx(-6.0, abs=1e-10)


def test_build_fixed_core_distances():
    core = build_fixed_core(4, 1.0)
    atoms = core.fixed_atoms
    assert atoms.shape == (4, 3)
    for i in range(4):
        for j in range(i + 1, 4):
            assert np.linalg.norm(atoms[i] - atoms[j]) == pytest.approx(1.0, abs=1e-12)
    assert core.fixed_energy == pytest.approx(-6.0, abs=1e-10)


def test_build_fixed_core_scales_with_bond():
    core = build_fixed_core(3, 1.1)
    d = np.linalg.norm(core.fixed_atoms[0] - core.fixed_atoms[1])
    assert d == pytest.approx(1.1, abs=1e-12)
    assert core.fixed_energy == pytest.approx(3 * lj_pair(1.1), abs=1e-10)


def test_build_fixed_core_validation():
    with pytest.raises(ValueError, match="bond"):
        build_fixed_core(3, 0.0)
    with pytest.raises(ValueError, match="num_fixed"):
        build_fixed_core(5, 1.0)


def test_cluster_energy_rigid_motion_invariance():
    rng = np.random.default_rng(11)
    core = build_fixed_core(4, 1.0)
    free = np.array([0.2, 0.5, 0.9])
    reference = cluster_energy(core, free)
    for _ in range(5):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        shift = rng.normal(size=3)
        moved = ClusterGeometry(core.fixed_atoms @ q.T + shift)
        assert cluster_energy(moved, q @ free + shift) == pytest.approx(
            reference, rel=1e-9
        )


def test_cluster_energy_receding_limit():
    core = build_fixed_core(3, 1.0)
    far = cluster_energy(core, (0.0, 0.0, 1e6))
    assert far == pytest.approx(core.fixed_energy, abs=1e-12)


def test_cluster_energy_coincidence_capped():
    core = build_fixed_core(3, 1.0)
    assert cluster_energy(core, core.fixed_atoms[0]) == ENERGY_CAP
    nearly = core.fixed_atoms[0] + np.array([CONTACT_EPS / 2, 0.0, 0.0])
    assert cluster_energy(core, nearly) == ENERGY_CAP


def test_cluster_energy_validation():
    core = build_fixed_core(3, 1.0)
    with pytest.raises(ValueError, match="3-vector"):
        cluster_energy(core, (1.0, 2.0))
    with pytest.raises(ValueError, match="finite"):
        cluster_energy(core, (np.nan, 0.0, 0.0))


def test_cluster_geometry_rejects_coincident_atoms():
    with pytest.raises(ValueError, match="coincide"):
        ClusterGeometry(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="shape"):
        ClusterGeometry(np.zeros((2, 2)))


def test_free_atom_objective_arities():
    core = build_fixed_core(3, 1.0)
    full = free_atom_objective(core)
    assert (full.name, full.arity) == ("lj-grow-xyz", 3)
    pinned = free_atom_objective(core, pin_x=0.0)
    assert (pinned.name, pinned.arity) == ("lj-grow-yz", 2)
    apex = (0.0, math.sqrt(3.0) / 6.0, math.sqrt(2.0 / 3.0))
    assert full(*apex) == pytest.approx(-6.0, abs=1e-10)
    assert pinned(apex[1], apex[2]) == pytest.approx(-6.0, abs=1e-10)


def test_free_atom_batch_matches_scalar():
    core = build_fixed_core(4, 1.0)
    obj = free_atom_objective(core)
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1.5, 1.5, size=(64, 3))
    batch = obj.batch(pts)
    scalar = np.array([obj(*row) for row in pts])
    np.testing.assert_allclose(batch, scalar, rtol=1e-12, atol=1e-9)


@pytest.mark.parametrize("obj", [GOLDSTEIN_PRICE, SHUBERT])
def test_grid_objective_batch_matches_scalar(obj):
    rng = np.random.default_rng(17)
    pts = rng.uniform(-2.0, 2.0, size=(128, 2))
    np.testing.assert_allclose(
        obj.batch(pts), [obj(*row) for row in pts], rtol=1e-12
    )


def test_trimer_batch_matches_scalar():
    rng = np.random.default_rng(23)
    pts = np.column_stack(
        [rng.uniform(0.5, 2.0, size=128), rng.uniform(0.2, math.pi, size=128)]
    )
    np.testing.assert_allclose(
        LJ_TRIMER.batch(pts), [LJ_TRIMER(*row) for row in pts], rtol=1e-10
    )


def test_objective_call_checks_arity():
    with pytest.raises(ValueError, match="takes 2 coordinates"):
        GOLDSTEIN_PRICE(1.0)


def test_objective_batch_checks_shape():
    with pytest.raises(ValueError, match="expected shape"):
        GOLDSTEIN_PRICE.batch(np.zeros((4, 3)))


def test_objective_without_batch_fn_falls_back():
    obj = Objective("sum", 2, lambda a, b: a + b)
    np.testing.assert_array_equal(obj.batch([[1.0, 2.0], [3.0, 4.0]]), [3.0, 7.0])


def test_registry_lookup():
    assert get_objective("gp") is GOLDSTEIN_PRICE
    assert get_objective("shubert") is SHUBERT
    assert get_objective("lj-trimer") is LJ_TRIMER
    with pytest.raises(ValueError, match="unknown objective"):
        get_objective("rosenbrock")


@given(
    b1=st.floats(min_value=0.3, max_value=3.0),
    b2=st.floats(min_value=0.3, max_value=3.0),
    a=st.floats(min_value=0.05, max_value=math.pi),
)
@settings(max_examples=80, deadline=None)
def test_trimer_matches_explicit_geometry(b1, b2, a):
    # place the three atoms explicitly and sum the pairs
    p0 = np.zeros(3)
    p1 = np.array([b1, 0.0, 0.0])
    p2 = np.array([b2 * math.cos(a), b2 * math.sin(a), 0.0])
    r12 = np.linalg.norm(p1 - p2)
    expected = lj_pair(b1) + lj_pair(b2) + lj_pair(max(r12, 1e-300))
    if r12 > CONTACT_EPS:
        assert trimer_energy(b1, b2, a) == pytest.approx(expected, rel=1e-7, abs=1e-9)
