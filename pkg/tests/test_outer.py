import math

import numpy as np
import pytest

from innerlab.bc_sets import TAU, BCSet
from innerlab.outer import (
    OuterSpec,
    bump_psi,
    decay_profile,
    profile_phi,
    subdivide,
    weights,
)


def two_point_set():
    return BCSet.from_points([0.0, math.pi])


class TestSubdivide:
    def test_middle_third_and_sides(self):
        e = BCSet.from_points([0.0])  # one gap of full length
        js = subdivide(e, depth=3)
        by_k = {j.k: j for j in js}
        assert by_k[0].length == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert by_k[-1].length == pytest.approx(1.0 / 6.0, abs=1e-15)
        assert by_k[1].length == pytest.approx(1.0 / 6.0, abs=1e-15)

    def test_pieces_disjoint_and_fill(self):
        e = two_point_set()
        for depth in (5, 12):
            js = sorted(
                (j for j in subdivide(e, depth) if j.gap_index == 0),
                key=lambda j: j.start,
            )
            for a, b in zip(js[:-1], js[1:]):
                assert a.start + a.rad_length <= b.start + 1e-12
            total = sum(j.length for j in js)
            gap_len = e.gaps[0].length
            tail = 2.0 * gap_len / (3.0 * 2.0 ** depth)
            assert total == pytest.approx(gap_len - tail, abs=1e-13)

    def test_distance_to_set_equals_length(self):
        e = two_point_set()
        for j in subdivide(e, 8):
            if j.k == 0:
                continue
            d_left = (j.start - 0.0) % TAU
            d_right = (math.pi - (j.start + j.rad_length)) % TAU
            d = min(d_left % math.pi, d_right % math.pi) / TAU
            assert d == pytest.approx(j.length, rel=1e-9)


class TestWeights:
    def test_profile_clamps(self):
        assert profile_phi(0.5) == 1.0
        assert profile_phi(5.0) == 5.0
        assert bump_psi(0.5) == 1.0
        assert bump_psi(2.5) == 0.0

    def test_lambda_values(self):
        e = two_point_set()
        js = subdivide(e, 25)
        _, lam = weights(js)
        for j, l in zip(js, lam):
            if j.length > math.exp(-1):
                assert l == 1.0
            if j.length < math.exp(-2):
                assert l == pytest.approx(math.log(1 / j.length), rel=1e-12)
        assert np.all(lam >= 1.0)

    def test_tail_bound_shape(self):
        # pieces with small cumulative entropy h carry geometrically small
        # weighted mass, mirroring the uniform tail estimate
        e = two_point_set()
        js = subdivide(e, 30)
        h, lam = weights(js)
        ent = np.array([lam_i * j.length * math.log(1 / j.length) for j, lam_i in zip(js, lam)])
        for k in (3, 6, 9):
            lhs = ent[h <= math.exp(-k)].sum()
            rhs = sum((j + 1) * math.exp(-j) for j in range(k, 200))
            assert lhs <= 6.0 * rhs


class TestPhi:
    def test_modulus_bounded_by_one(self):
        spec = OuterSpec(two_point_set(), depth=20)
        rng = np.random.default_rng(17)
        z = rng.uniform(0, 0.999, 400) * np.exp(1j * rng.uniform(0, TAU, 400))
        assert np.all(np.abs(spec(z)) <= 1.0 + 1e-14)

    def test_vanishes_fast_near_set(self):
        spec = OuterSpec(two_point_set(), depth=20)
        prof = decay_profile(spec, orders=(1, 2, 3))
        assert all(np.isfinite(v) for v in prof.values())
        # farther from E the function recovers: vanishing is localized
        assert abs(spec(0.0)) > 1e-4

    def test_truncation_stability(self):
        e = two_point_set()
        s20, s30 = OuterSpec(e, 20), OuterSpec(e, 30)
        rng = np.random.default_rng(3)
        z = rng.uniform(0, 0.99, 300) * np.exp(1j * rng.uniform(0, TAU, 300))
        assert float(np.max(np.abs(s20(z) - s30(z)))) < 1e-8

    def test_continuity_in_the_set(self):
        base = BCSet.from_points([0.0, math.pi])
        spec0 = OuterSpec(base, 20)
        probes = np.array([0.2 + 0.1j, -0.4j, 0.5 * np.exp(2.3j)])
        prev = None
        for eps in (0.1, 0.02, 0.004):
            spec = OuterSpec(BCSet.from_points([0.0, math.pi + eps]), 20)
            diff = float(np.max(np.abs(spec(probes) - spec0(probes))))
            if prev is not None:
                assert diff < prev
            prev = diff
        assert prev < 5e-3

    def test_log_domain_stability(self):
        spec = OuterSpec(two_point_set(), depth=20)
        z = (1 - 1e-6) * np.exp(1j * 1e-6)  # close to the set point at angle 0
        la = spec.log_abs(z)
        assert np.isfinite(la)
        assert la < -10.0  # deep vanishing yet representable in logs


def test_high_order_decay_stable_under_refinement():
    e = two_point_set()
    prof20 = decay_profile(OuterSpec(e, 20), orders=(5,))[5]
    prof30 = decay_profile(OuterSpec(e, 30), orders=(5,))[5]
    assert np.isfinite(prof20)
    assert prof20 == pytest.approx(prof30, rel=1e-6)
