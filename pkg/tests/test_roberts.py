import math

import numpy as np
import pytest

from innerlab.bc_sets import TAU, StarSpec, star_contains
from innerlab.measures import DiskMeasure
from innerlab.roberts import (
    InvariantViolation,
    RobertsParams,
    decompose,
    local_entropy_bounds,
    verify,
)

LOG2 = math.log(2.0)


def random_measure(rng, n_interior=4, n_boundary=4):
    interior = [
        (r * np.exp(1j * a), m)
        for r, a, m in zip(
            rng.uniform(0, 0.999, n_interior),
            rng.uniform(0, TAU, n_interior),
            rng.uniform(0.05, 1.0, n_interior),
        )
    ]
    boundary = [
        (a, m)
        for a, m in zip(rng.uniform(0, TAU, n_boundary), rng.uniform(0.05, 1.0, n_boundary))
    ]
    return DiskMeasure(interior, boundary)


class TestParams:
    def test_scaling_rule(self):
        p = RobertsParams(n2=16, max_generation=4)
        assert p.n_arcs(2) == 16
        assert p.n_arcs(3) == 256
        assert p.n_arcs(4) == 65536
        assert p.radius(1) == 1 - 0.25
        assert p.radius(2) == 1 - 1 / 16

    def test_validation(self):
        with pytest.raises(ValueError):
            RobertsParams(c=0.0)
        with pytest.raises(ValueError):
            RobertsParams(n2=12)
        with pytest.raises(ValueError):
            RobertsParams(max_generation=1)
        with pytest.raises(ValueError):
            RobertsParams(n2=65536, max_generation=6)


class TestHandTrace:
    def test_delta_one(self):
        om = DiskMeasure(boundary=[(0.0, 1.0)])
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        masses = {j: m.blaschke_mass() for j, m in d.layers}
        assert masses[2] == pytest.approx(LOG2 / 4, abs=1e-15)
        assert masses[3] == pytest.approx(LOG2 / 32, abs=1e-15)
        assert d.cone.blaschke_mass() == pytest.approx(1 - 9 * LOG2 / 32, abs=1e-13)
        assert verify(d, om, p).ok
        # both thresholds hit exactly via the H2 top-up
        acts = [(e.generation, e.action) for e in d.audit]
        assert acts == [(2, "H2"), (3, "H2")]

    def test_mass_inside_step_one_ball(self):
        om = DiskMeasure(interior=[(0.3 + 0.2j, 1.0), (0.5j, 2.0)])
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        assert all(m.is_empty for _, m in d.layers)
        assert d.cone.blaschke_mass() == pytest.approx(om.blaschke_mass(), abs=1e-15)

    def test_tiny_atom_goes_light(self):
        om = DiskMeasure(boundary=[(0.1, 1e-4)])
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        layer2 = dict(d.layers)[2]
        assert layer2.blaschke_mass() == pytest.approx(1e-4, abs=1e-18)
        assert d.cone.is_empty


class TestVerifyCorpus:
    def test_seeded_corpus_passes(self):
        rng = np.random.default_rng(1234)
        p = RobertsParams(c=0.7, n2=16, max_generation=3)
        for _ in range(30):
            om = random_measure(rng, int(rng.integers(0, 6)), int(rng.integers(0, 6)))
            if om.is_empty:
                continue
            d = decompose(om, p)
            rep = verify(d, om, p)
            assert rep.ok, rep.failures

    def test_negative_control_moved_atom(self):
        om = DiskMeasure(boundary=[(0.0, 1.0)])
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        # corrupt: push a layer atom inside the forbidden annulus
        j, layer = d.layers[1]
        bad = DiskMeasure(interior=[(0.5, layer.blaschke_mass() / 0.5)])
        d.layers[1] = (j, bad)
        rep = verify(d, om, p)
        assert not rep.ok
        assert any("radius" in f for f in rep.failures)

    def test_negative_control_displaced_cone_atom(self):
        om = DiskMeasure(boundary=[(0.0, 1.0)])
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        # move the cone's boundary mass to an uncovered angle deep inside a gap
        d.cone = DiskMeasure(boundary=[(0.0 + TAU * 3.5 / 16, d.cone.blaschke_mass())])
        rep = verify(d, om, p)
        assert not rep.ok
        assert any("E_cone" in f or "star" in f for f in rep.failures)


class TestStructure:
    def test_cone_monotone_in_c(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            om = random_measure(rng, 3, 3)
            masses = []
            for c in (0.25, 0.5, 1.0, 2.0, 4.0):
                d = decompose(om, RobertsParams(c=c, n2=16, max_generation=3))
                masses.append(d.cone.blaschke_mass())
            assert all(a >= b - 1e-12 for a, b in zip(masses, masses[1:]))

    def test_determinism(self):
        rng = np.random.default_rng(9)
        om = random_measure(rng, 5, 5)
        p = RobertsParams(c=0.8, n2=16, max_generation=3)
        d1, d2 = decompose(om, p), decompose(om, p)
        assert d1.audit == d2.audit
        assert d1.cone.interior == d2.cone.interior
        assert d1.cone.boundary == d2.cone.boundary
        assert d1.cone_set == d2.cone_set

    def test_partition_points_always_present(self):
        # every generation-2 partition point survives into E*_cone
        rng = np.random.default_rng(21)
        om = random_measure(rng, 2, 2)
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        for k in range(16):
            assert d.star_core_set.contains_angle(TAU * k / 16, tol=1e-12)

    def test_local_entropy_bounds(self):
        om = DiskMeasure(boundary=[(0.0, 1.0)])
        vals = []
        for c in (0.5, 1.0, 2.0):
            d = decompose(om, RobertsParams(c=c, n2=16, max_generation=3))
            vals.append(local_entropy_bounds(d))
        # both entropies finite and decreasing as c grows
        stars, cones = zip(*vals)
        assert all(s >= 0 for s in stars)
        assert stars[0] >= stars[-1] - 1e-12
        assert cones[0] >= cones[-1] - 1e-12

    def test_local_entropy_empty_measure(self):
        d = decompose(DiskMeasure(), RobertsParams(c=1.0, n2=16, max_generation=2))
        assert local_entropy_bounds(d) == (0.0, 0.0)

    def test_spread_light_measure_keeps_cone_empty(self):
        # mass spread thinly over every arc: all light, E* has no short gaps
        om = DiskMeasure(boundary=[(TAU * (k + 0.31) / 16, 1e-3) for k in range(16)])
        p = RobertsParams(c=1.0, n2=16, max_generation=3)
        d = decompose(om, p)
        assert d.cone.is_empty
        assert local_entropy_bounds(d) == (0.0, 0.0)

    def test_eq44_sliding_bound_via_verify(self):
        rng = np.random.default_rng(4321)
        p = RobertsParams(c=0.3, n2=16, max_generation=3)
        for _ in range(10):
            om = random_measure(rng, 6, 6)
            d = decompose(om, p)
            assert verify(d, om, p).ok

    def test_heavy_boxes_inside_star(self):
        # H1 cone boxes land in the genuine star over E_cone
        om = DiskMeasure(
            boundary=[(0.05, 0.5)],
            interior=[(0.94 * np.exp(0.05j), 60.0)],  # heavy annulus box at gen 2
        )
        p = RobertsParams(c=0.5, n2=16, max_generation=3)
        d = decompose(om, p)
        acts = {e.action for e in d.audit}
        assert "H1" in acts
        spec = StarSpec(d.cone_set, include_core=True)
        for a, _ in d.cone.interior:
            assert star_contains(spec, a, tol=1e-9)
