import numpy as np
import pytest

from confmod.geometry import (CausalRelation, DoubleCone, FutureCone,
                              PoincareMap, Wedge, causal_relation,
                              minkowski_norm, region_contains, sample_region,
                              spacelike_complement, standard_wedge,
                              timelike_complement, transform_region,
                              unit_double_cone)

DIMS = (2, 3, 4)


def test_minkowski_norm_examples():
    assert minkowski_norm([1, 0, 0, 0]) == 1
    assert minkowski_norm([0, 1, 0, 0]) == -1
    assert minkowski_norm([3, 1, 2, 2]) == 0   # 9 - 1 - 4 - 4


def test_causal_relation_examples():
    z = np.zeros(4)
    assert causal_relation(z, [1, 0, 0, 0]) is CausalRelation.TIMELIKE_FUTURE
    assert causal_relation(z, [0, 1, 0, 0]) is CausalRelation.SPACELIKE
    assert causal_relation(z, z) is CausalRelation.EQUAL
    assert causal_relation(z, [-1, 0, 0, 0]) is CausalRelation.TIMELIKE_PAST
    assert causal_relation(z, [1, 1, 0, 0]) is CausalRelation.LIGHTLIKE


def test_causal_relation_sign_consistency():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x, y = rng.normal(size=4), rng.normal(size=4)
        rel = causal_relation(x, y)
        spacelike = minkowski_norm(y - x) < 0
        assert (rel is CausalRelation.SPACELIKE) == spacelike


def test_region_membership_examples():
    w1 = standard_wedge(4)
    assert region_contains(w1, [0, 1, 0, 0])
    assert not region_contains(w1, [0, -1, 0, 0])
    assert not region_contains(w1, [2, 1, 0, 0])
    o1 = unit_double_cone(4)
    assert region_contains(o1, np.zeros(4))
    assert not region_contains(o1, [0, 1.5, 0, 0])
    vplus = FutureCone(np.zeros(4))
    assert not region_contains(vplus, [-1, 0, 0, 0])
    assert region_contains(vplus, [1, 0.2, 0, 0])


def test_unit_double_cone_is_l1_ball():
    # |x0| + |vec x| < 1 should match the two-tip characterization
    rng = np.random.default_rng(0)
    o1 = unit_double_cone(4)
    pts = rng.uniform(-1.5, 1.5, size=(5000, 4))
    direct = np.abs(pts[:, 0]) + np.linalg.norm(pts[:, 1:], axis=1) < 1.0
    via_tips = np.array([o1.contains(p) for p in pts])
    assert np.array_equal(direct, via_tips)


@pytest.mark.parametrize("d", DIMS)
def test_wedge_complement_formula(d):
    # sampling oracle: the complement predicate must match x1 < -|x0|
    rng = np.random.default_rng(5)
    comp = spacelike_complement(standard_wedge(d))
    pts = rng.uniform(-10, 10, size=(10_000, d))
    formula = pts[:, 1] < -np.abs(pts[:, 0])
    assert all(comp.contains(p) == f for p, f in zip(pts, formula))


def test_wedge_complement_against_spacelike_definition():
    # stronger oracle: membership implies spacelike separation from wedge samples
    d = 4
    w1 = standard_wedge(d)
    comp = spacelike_complement(w1)
    wpts = sample_region(w1, 500, seed=3)
    cpts = sample_region(comp, 200, seed=4)
    diff = cpts[:, None, :] - wpts[None, :, :]
    norms = diff[..., 0] ** 2 - np.sum(diff[..., 1:] ** 2, axis=-1)
    assert np.all(norms < 0)


@pytest.mark.parametrize("d", DIMS)
def test_double_cone_complement_formula(d):
    # sampling oracle: for the unit cone the complement is |vec x| > |x0| + 1
    rng = np.random.default_rng(6)
    comp = spacelike_complement(unit_double_cone(d))
    pts = rng.uniform(-4, 4, size=(10_000, d))
    formula = np.linalg.norm(pts[:, 1:], axis=1) > np.abs(pts[:, 0]) + 1.0
    assert all(comp.contains(p) == f for p, f in zip(pts, formula))


@pytest.mark.parametrize("d", DIMS)
def test_double_complement_identity(d):
    rng = np.random.default_rng(7)
    for region in (standard_wedge(d), unit_double_cone(d)):
        twice = spacelike_complement(spacelike_complement(region))
        pts = rng.uniform(-5, 5, size=(10_000, d))
        assert all(region.contains(p) == twice.contains(p) for p in pts)


def test_wedge_double_complement_is_involution():
    w1 = standard_wedge(4)
    back = spacelike_complement(spacelike_complement(w1))
    rng = np.random.default_rng(8)
    pts = rng.uniform(-10, 10, size=(2000, 4))
    assert all(w1.contains(p) == back.contains(p) for p in pts)


def test_timelike_complement_examples():
    o1 = unit_double_cone(4)
    tc = timelike_complement(o1)
    assert tc.contains([2, 0, 0, 0])
    assert not tc.contains([0, 2, 0, 0])
    # point checked against 10^4 sampled cone points
    x = np.array([1.5, 0.6, 0, 0])
    opts = sample_region(o1, 10_000, seed=9)
    diff = x[None, :] - opts
    norms = diff[:, 0] ** 2 - np.sum(diff[:, 1:] ** 2, axis=1)
    timelike_to_all = bool(np.all(norms > 0))
    assert tc.contains(x) == timelike_to_all
    assert not tc.contains(x)


def test_complements_are_disjoint():
    o1 = unit_double_cone(3)
    sc, tc = spacelike_complement(o1), timelike_complement(o1)
    rng = np.random.default_rng(10)
    for p in rng.uniform(-5, 5, size=(5000, 3)):
        assert not (sc.contains(p) and tc.contains(p))


def test_unsupported_complements_raise():
    with pytest.raises(ValueError):
        spacelike_complement(FutureCone(np.zeros(3)))
    with pytest.raises(ValueError):
        timelike_complement(standard_wedge(3))


def test_sample_region_postconditions():
    o1 = unit_double_cone(4)
    pts = sample_region(o1, 3, seed=42)
    assert pts.shape == (3, 4)
    assert all(o1.contains(p) for p in pts)
    again = sample_region(o1, 3, seed=42)
    np.testing.assert_array_equal(pts, again)
    wpts = sample_region(standard_wedge(4), 10_000, seed=7)
    assert np.all(wpts[:, 1] > np.abs(wpts[:, 0]))
    with pytest.raises(ValueError):
        sample_region(o1, 0, seed=1)


def test_sample_region_reports_exhaustion():
    # region pushed outside the sampling box: rejection must give up loudly
    from confmod.geometry import TransformedRegion
    far = TransformedRegion(PoincareMap.from_translation([0.0, 100.0, 0.0]),
                            unit_double_cone(3))
    with pytest.raises(RuntimeError):
        sample_region(far, 5, seed=1, box=10.0, max_tries=50_000)


@pytest.mark.parametrize("d", DIMS)
def test_poincare_covariance_of_membership(d):
    rng = np.random.default_rng(12)
    g = PoincareMap.from_boost(d, 1, 0.6).compose(
        PoincareMap.from_translation(rng.normal(size=d)))
    if d >= 3:
        g = g.compose(PoincareMap.from_rotation(d, 1, 2, 0.8))
    for region in (unit_double_cone(d), standard_wedge(d), FutureCone(np.zeros(d))):
        moved = transform_region(g, region)
        pts = sample_region(region, 300, seed=13)
        outside = rng.uniform(-3, 3, size=(300, d))
        for p in np.vstack([pts, outside]):
            assert moved.contains(g.act(p)) == region.contains(p)


def test_transformed_region_by_group_element():
    from confmod.confgroup import dilation
    o1 = unit_double_cone(4)
    doubled = transform_region(PoincareMap.identity(4), o1)
    assert isinstance(doubled, DoubleCone)
    from confmod.geometry import TransformedRegion
    g = dilation(4, 2.0)
    big = TransformedRegion(g, o1)
    assert big.contains([0, 1.5, 0, 0])
    assert not big.contains([0, 2.5, 0, 0])


def test_one_dimensional_space():
    # d = 1: double cones are intervals, future cones half-lines, and every
    # pair of distinct points is timelike separated
    o = DoubleCone(np.array([-1.0]), np.array([1.0]))
    assert o.contains([0.0]) and not o.contains([1.5])
    tc = timelike_complement(o)
    assert tc.contains([2.0]) and tc.contains([-3.0]) and not tc.contains([0.5])
    sc = spacelike_complement(o)
    assert not sc.contains([5.0])
    pts = sample_region(o, 50, seed=1)
    assert all(o.contains(p) for p in pts)
    assert causal_relation([0.0], [3.0]) is CausalRelation.TIMELIKE_FUTURE


def test_wedge_needs_two_dimensions():
    with pytest.raises(ValueError):
        Wedge(1)


def test_double_cone_tip_validation():
    with pytest.raises(ValueError):
        DoubleCone(np.zeros(3), np.array([0.0, 1.0, 0.0]))   # spacelike tips
    with pytest.raises(ValueError):
        DoubleCone(np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]))  # past-directed
