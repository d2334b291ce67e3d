import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from ergodic_lattice.bump import (BumpSpec, ProductPoint, Realization, bump_eval, bump_moments,
                                  equicontinuity_modulus, evaluate_many, floor_decompose,
                                  h_forward, h_inverse, naive_lattice_sum, realization_eval)
from ergodic_lattice.seqcore import PatternStream, SequenceStream, shift_seq, spawn_seeds

B = BumpSpec()


@pytest.mark.parametrize("t, expected", [(2.25, (2, 0.25)), (-0.25, (-1, 0.75)), (5.0, (5, 0.0))])
def test_floor_decompose_examples(t, expected):
    assert floor_decompose(t) == expected


def test_floor_decompose_wraps_theta_one():
    k, theta = floor_decompose(-1e-20)
    assert 0.0 <= theta < 1.0
    assert (k, theta) == (0, 0.0)
    ks, thetas = floor_decompose(np.array([-1e-20, -0.5, 3.75]))
    assert ks.tolist() == [0, -1, 3] and thetas.tolist() == [0.0, 0.5, 0.75]


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_floor_decompose_rejects_nonfinite(bad):
    with pytest.raises(ValueError):
        floor_decompose(bad)


@given(st.floats(-1e9, 1e9, allow_nan=False), st.integers(-1000, 1000))
def test_floor_decompose_invariants(t, shift):
    k, theta = floor_decompose(t)
    assert 0.0 <= theta < 1.0
    assert abs((k + theta) - t) <= np.spacing(abs(t)) + np.spacing(1.0)
    if float(t + shift) - shift == t:
        assert floor_decompose(float(t + shift))[0] == k + shift


def test_bump_examples():
    assert bump_eval(B, 0.0) == 1.0
    assert bump_eval(B, 0.3) == 0.0
    assert bump_eval(B, 1 / 8) == 0.5


@pytest.mark.parametrize("a", [0.0, 0.5, 0.7, -0.1])
def test_bump_width_validation(a):
    with pytest.raises(ValueError):
        BumpSpec(a=a)


def test_unknown_shape_rejected():
    with pytest.raises(ValueError):
        BumpSpec(shape="gaussian")


@pytest.mark.parametrize("a", [0.1, 0.25, 0.4])
def test_moments_against_quadrature(a):
    b = BumpSpec(a=a)
    c1, c2, L, ft = bump_moments(b)
    assert c1 == pytest.approx(integrate.quad(b, -a, a, points=[0])[0], abs=1e-12)
    assert c2 == pytest.approx(integrate.quad(lambda x: b(x) ** 2, -a, a, points=[0])[0], abs=1e-12)
    assert L == 1 / a
    for lam in (0.0, 1.0, 2 * math.pi, 17.3):
        num = integrate.quad(lambda x: b(x) * math.cos(lam * x), -a, a, points=[0])[0]
        assert ft(lam) == pytest.approx(num, abs=1e-12)


def test_moment_examples():
    c1, c2, _, ft = bump_moments(B)
    assert c1 == 0.25
    assert c2 == pytest.approx(1 / 6, abs=1e-15)
    assert ft(2 * math.pi) == pytest.approx(2 / math.pi ** 2, abs=1e-12)
    assert ft(0.0) == c1
    assert ft(1e-9) == pytest.approx(c1, abs=1e-12)


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_bump_range_support_lipschitz(x, y):
    vx, vy = bump_eval(B, x), bump_eval(B, y)
    assert 0.0 <= vx <= 1.0
    if abs(x) >= B.a:
        assert vx == 0.0
    if x == 0.0:
        assert vx == 1.0
    if abs(x) > 1e-15:
        assert vx < 1.0
    assert abs(vx - vy) <= B.lipschitz * abs(x - y) + 1e-15


def test_realization_at_lattice_points_and_midpoints():
    s = SequenceStream(7, 0.5)
    omega = Realization(s, 0.0)
    for m in range(-5, 6):
        assert omega(float(m)) == s.site(m)
        assert omega(m + 0.5) == 0.0
    shifted = Realization(s, 0.3)
    assert shifted(1.7) == s.site(2)


def test_realization_matches_naive_sum_example():
    omega = Realization(SequenceStream(7, 0.5), 0.25)
    assert realization_eval(omega, 1.0) == naive_lattice_sum(omega, 1.0)
    t = np.linspace(-3, 3, 601)
    assert np.array_equal(omega(t), naive_lattice_sum(omega, t))


def test_single_site_identity_random():
    seeds = spawn_seeds(2, 300)
    t = np.linspace(-30, 30, 2001)
    for i, sd in enumerate(seeds):
        omega = Realization(SequenceStream(int(sd), 0.4), -10 + 20 * i / 300)
        a, b = omega(t), naive_lattice_sum(omega, t)
        # same value up to rounding of t + delta, amplified by the slope 1/a
        tol = 4 * B.lipschitz * np.spacing(np.abs(t) + abs(omega.delta) + 1)
        assert np.all(np.abs(a - b) <= tol)
        assert np.all(np.abs(a) <= 1.0)


def test_h_forward_examples():
    s = SequenceStream(3, 0.5)
    assert h_forward(Realization(s, 0.0)) == ProductPoint(s, 0.0)
    assert h_forward(Realization(s, 2.25)) == ProductPoint(shift_seq(s, 2), 0.25)
    assert h_forward(Realization(s, -0.25)) == ProductPoint(shift_seq(s, -1), 0.75)


def test_h_inverse_examples():
    s = SequenceStream(3, 0.5)
    assert h_inverse(ProductPoint(s, 0.0)) == Realization(s, 0.0)
    back = h_inverse(ProductPoint(shift_seq(s, 2), 0.25))
    t = np.linspace(-10, 10, 1001)
    assert np.array_equal(back(t), Realization(s, 2.25)(t))


def test_product_point_theta_validation():
    with pytest.raises(ValueError):
        ProductPoint(SequenceStream(1), 1.0)
    with pytest.raises(ValueError):
        ProductPoint(SequenceStream(1), -0.1)


@given(st.integers(0, 2 ** 64 - 1), st.floats(-10, 10), st.integers(-100, 100))
@settings(max_examples=200, deadline=None)
def test_h_canonicality(seed, delta, k):
    s = SequenceStream(seed, 0.5)
    a, b = Realization(s, delta), Realization(shift_seq(s, k), delta - k)
    if (delta - k) + k != delta:
        return
    assert h_forward(a).stream == h_forward(b).stream
    assert h_forward(a).theta == pytest.approx(h_forward(b).theta, abs=1e-12)
    t = np.linspace(-5, 5, 201)
    assert np.allclose(a(t), b(t), atol=1e-12)


@given(st.integers(0, 2 ** 64 - 1), st.floats(0, 1, exclude_max=True), st.integers(-50, 50))
@settings(max_examples=200, deadline=None)
def test_bijection_roundtrips(seed, theta, k):
    p = ProductPoint(SequenceStream(seed, 0.3, k), theta)
    assert h_forward(h_inverse(p)) == p
    omega = Realization(SequenceStream(seed, 0.3), theta - 3.0 + k)
    t = np.linspace(-20, 20, 401)
    assert np.array_equal(h_inverse(h_forward(omega))(t), omega(t))


def test_same_function():
    s = SequenceStream(5, 0.5)
    assert Realization(s, 3.5).same_function(Realization(shift_seq(s, 3), 0.5))
    assert not Realization(s, 3.5).same_function(Realization(s, 0.5))


def test_evaluate_many_matches_objects():
    t = np.linspace(-15, 15, 997)
    rows = [Realization(SequenceStream(int(sd), q, k), d)
            for sd, q, k, d in zip(spawn_seeds(4, 40), np.linspace(0, 1, 40), range(-20, 20),
                                   np.linspace(-9, 9, 40))]
    rows.append(Realization(PatternStream((1, -1, -1)), 0.4))
    out = evaluate_many(rows, t)
    for r, row in zip(rows, out):
        assert np.array_equal(row, r(t))


def test_equicontinuity_modulus_examples():
    assert equicontinuity_modulus(B, 0.0) == 0.0
    assert equicontinuity_modulus(B, 0.1) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        equicontinuity_modulus(B, -1.0)


def test_equicontinuity_bound_holds_when_adjacent_sites_flip():
    # +1 at site 0 and -1 at site 1: |w(0) - w(1)| = 2 at gap 1
    omega = Realization(PatternStream((1, -1)), 0.0)
    assert abs(omega(0.0) - omega(1.0)) == 2.0
    assert equicontinuity_modulus(B, 1.0) == 2.0
    # below 1 - 2a no two supports can both be active
    assert equicontinuity_modulus(B, 0.49) == 1.0


def test_equicontinuity_sampled():
    seeds = spawn_seeds(6, 1000)
    rng = np.random.default_rng(0)
    ts = rng.uniform(-50, 50, 1000)
    for s in (0.01, 0.05, 0.1, 0.3, 0.6, 1.0):
        bound = equicontinuity_modulus(B, s)
        worst = 0.0
        for sd in seeds[:200]:
            omega = Realization(SequenceStream(int(sd), 0.5), float(rng.uniform(-5, 5)))
            gap = (ts + s) - ts
            diff = np.abs(omega(ts + s) - omega(ts))
            assert np.all(diff <= np.minimum(bound, B.lipschitz * gap) + 1e-12)
            worst = max(worst, diff.max())
        assert worst <= bound + 1e-12
    assert worst > 0.5


def test_realization_json_roundtrip():
    omega = Realization(SequenceStream(7, 0.3), -1.25, BumpSpec(a=0.2))
    d = json.loads(omega.to_json())
    assert d == {"kind": "bernoulli", "seed": 7, "q": 0.3, "shift_offset": 0, "delta": -1.25,
                 "bump": {"shape": "triangular", "a": 0.2}}
    assert Realization.from_dict(d) == omega
