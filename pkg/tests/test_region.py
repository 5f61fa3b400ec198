import math
import random
from fractions import Fraction

import numpy as np
import pytest

from parrondo_ring.region import (
    CubePoint,
    MeanEvaluator,
    Region,
    boundary_n4,
    classify_point,
    exact_volume_n3,
    interval_n3,
    parrondo_interval,
    surface_grid,
    symmetry_map,
    volume_monte_carlo,
    volume_riemann,
)

from helpers import trunc6


def test_interval_n3_table_rows():
    iv = interval_n3(Fraction(1), Fraction(7, 10))
    assert not iv.empty
    assert iv.lower == Fraction(9, 46)
    assert iv.upper == Fraction(3, 13)
    assert trunc6(iv.upper) == 230769
    iv = interval_n3(Fraction(1, 10), Fraction(3, 4))
    assert trunc6(iv.lower) == 611111
    assert trunc6(iv.upper) == 714285


def test_interval_n3_empty_cases():
    assert interval_n3(0.5, 0.5).empty
    assert interval_n3(Fraction(7, 10), Fraction(0)).empty
    # nonempty exactly when p3 lies strictly between p0 and 1 - p0
    rng = random.Random(51)
    for _ in range(300):
        p0, p3 = rng.random(), rng.random()
        lo, hi = min(p0, 1 - p0), max(p0, 1 - p0)
        assert interval_n3(p0, p3).empty == (not lo < p3 < hi)


def test_boundary_n4_table_row():
    iv = boundary_n4(0.7, 0.0)
    assert trunc6(iv.lower) == 672790
    assert trunc6(iv.upper) == 807540
    assert boundary_n4(0.5, 0.6).empty
    assert boundary_n4(0.3, 0.7).empty


def test_boundary_n4_intervals_sit_above_half():
    rng = random.Random(52)
    for _ in range(200):
        p0 = rng.random()
        p3 = rng.random() * (1 - p0) * 0.999
        iv = boundary_n4(p0, p3)
        if not iv.empty:
            assert 0.5 < iv.lower < iv.upper <= 1.0


@pytest.mark.parametrize("n,closed", [(3, interval_n3), (4, boundary_n4)])
def test_scan_agrees_with_closed_forms(n, closed):
    rng = random.Random(60 + n)
    checked = 0
    while checked < 12:
        p0 = rng.uniform(0.02, 0.98)
        p3 = rng.uniform(0.02, 0.98)
        if n == 4 and p0 + p3 >= 1:
            continue
        ref = closed(p0, p3)
        got = parrondo_interval(n, p0, p3, tol=1e-11)
        assert got.empty == ref.empty, (p0, p3)
        if not ref.empty:
            assert abs(float(ref.lower) - got.lower) < 1e-9
            assert abs(float(ref.upper) - got.upper) < 1e-9
        checked += 1


def test_parrondo_interval_table_rows():
    iv = parrondo_interval(7, 1.0, 0.7)
    assert trunc6(iv.lower) == 148884 and trunc6(iv.upper) == 155594
    assert parrondo_interval(4, 1.0, 0.7).empty
    iv = parrondo_interval(10, 0.1, 0.75)
    assert trunc6(iv.lower) == 579389 and trunc6(iv.upper) == 601097


def test_interval_midpoint_classifies_parrondo():
    for n, p0, p3 in ((5, 0.55, 0.62), (6, 0.3, 0.52)):
        iv = parrondo_interval(n, p0, p3)
        if iv.empty:
            continue
        mid = 0.5 * (iv.lower + iv.upper)
        assert classify_point(n, (p0, mid, p3)) is Region.PARRONDO
        outside = iv.upper + 1e-6
        if outside < 1:
            assert classify_point(n, (p0, outside, p3)) is not Region.PARRONDO
        below = iv.lower - 1e-6
        if below > 0:
            assert classify_point(n, (p0, below, p3)) is not Region.PARRONDO


def test_classify_examples():
    assert classify_point(3, (0.5, 0.5, 0.5)) is Region.NEITHER
    assert classify_point(6, (1 - 1e-6, 4 / 25, 7 / 10)) is Region.PARRONDO
    with pytest.raises(ValueError):
        classify_point(3, (1.0, 0.5, 0.5))


def test_classify_exact_agrees_with_float():
    rng = random.Random(53)
    for _ in range(10):
        pt = (
            Fraction(rng.randint(1, 19), 20),
            Fraction(rng.randint(1, 19), 20),
            Fraction(rng.randint(1, 19), 20),
        )
        assert classify_point(4, pt) is classify_point(4, pt, exact=True)


def test_symmetry_map_involution_and_mirror():
    assert symmetry_map((1.0, 4 / 25, 7 / 10)) == CubePoint(
        pytest.approx(0.3), pytest.approx(0.84), pytest.approx(0.0))
    rng = random.Random(54)
    mirror = {Region.PARRONDO: Region.ANTI_PARRONDO,
              Region.ANTI_PARRONDO: Region.PARRONDO,
              Region.NEITHER: Region.NEITHER}
    for _ in range(200):
        pt = CubePoint(rng.random(), rng.random(), rng.random())
        image = symmetry_map(pt)
        assert symmetry_map(image) == pt
        assert classify_point(4, image) is mirror[classify_point(4, pt)]


def test_exact_volume_value():
    v = exact_volume_n3()
    assert v == pytest.approx((9 * math.log(9) - 8 * math.log(8) - 3) / 8)
    assert f"{v:.6g}" == "0.0174361"


def test_riemann_coarse_grid_near_exact_volume():
    est = volume_riemann(3, grid=50)
    assert est.method == "riemann" and est.points == 125_000
    assert abs(est.volume - exact_volume_n3()) < 5e-4


def test_riemann_deterministic():
    a = volume_riemann(4, grid=12)
    b = volume_riemann(4, grid=12, threads=2)
    assert a.volume == b.volume


def test_monte_carlo_seeded():
    a = volume_monte_carlo(3, samples=20_000, seed=5)
    b = volume_monte_carlo(3, samples=20_000, seed=5)
    c = volume_monte_carlo(3, samples=20_000, seed=6)
    assert a.volume == b.volume and a.seed == 5
    assert a.volume != c.volume  # different stream
    assert a.stderr == pytest.approx(math.sqrt(a.volume * (1 - a.volume) / 20_000))
    assert abs(a.volume - exact_volume_n3()) < 4 * a.stderr


def test_monte_carlo_degenerate():
    est = volume_monte_carlo(3, samples=10, seed=1)
    if est.volume == 0:
        assert est.stderr == 0


@pytest.mark.parametrize("n", [5, 6])
def test_riemann_and_monte_carlo_agree(n):
    grid = volume_riemann(n, grid=40)
    mc = volume_monte_carlo(n, samples=200_000, seed=77)
    # the coarse grid adds its own discretization wobble on top of 4 sigma
    assert abs(grid.volume - mc.volume) <= 4 * mc.stderr + 5e-4


def test_theorem_volume_symmetry_same_sample():
    # mapping the sample through the involution swaps the two hit counts
    ev = MeanEvaluator(4)
    rng = np.random.Generator(np.random.Philox(key=123))
    pts = rng.random((20_000, 3))
    mapped = np.column_stack([1 - pts[:, 2], 1 - pts[:, 1], 1 - pts[:, 0]])
    codes = ev.classify(pts)
    codes_mapped = ev.classify(mapped)
    assert np.count_nonzero(codes == 1) == np.count_nonzero(codes_mapped == -1)
    assert np.count_nonzero(codes == -1) == np.count_nonzero(codes_mapped == 1)


def test_surface_grid_structure():
    rows = surface_grid(3, 3, "muB")
    assert rows.shape == (27, 4)
    center = rows[(rows[:, 0] == 0.5) & (rows[:, 1] == 0.5) & (rows[:, 2] == 0.5)]
    assert len(center) == 1 and abs(center[0, 3]) < 1e-12
    with pytest.raises(ValueError):
        surface_grid(3, 3, "sigma")


def test_surface_sign_change_matches_interval():
    grid = 40
    rows = surface_grid(3, grid, "muB")
    line = rows[(np.isclose(rows[:, 0], (2 * 39 + 1) / 80)) & (np.isclose(rows[:, 1], 0.7125))]
    # along p1 at p0 ~ 1, p3 ~ 0.7 the rate crosses zero near 9/46..3/13
    signs = np.sign(line[:, 3])
    flips = np.flatnonzero(np.diff(signs))
    assert len(flips) == 1
    crossing = line[flips[0], 2]
    assert 0.19 < crossing < 0.24
