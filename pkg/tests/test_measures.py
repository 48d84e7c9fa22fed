import math

import numpy as np
import pytest

from innerlab import kernels
from innerlab.bc_sets import TAU, BCSet, StarSpec
from innerlab.measures import (
    DiskMeasure,
    SequenceDiagnostics,
    ThetaUnsolvableError,
    classify_sequence,
    diffuse_family,
    max_star_mass,
    star_mass,
    theta_for,
)

LOG2 = math.log(2.0)


class TestMasses:
    def test_empty(self):
        om = DiskMeasure()
        assert om.total_mass() == 0.0
        assert om.blaschke_mass() == 0.0

    def test_atom_at_origin(self):
        om = DiskMeasure(interior=[(0j, 1.0)])
        assert om.total_mass() == 1.0
        assert om.blaschke_mass() == 1.0

    def test_mixed(self):
        om = DiskMeasure(interior=[(0.9, 2.0)], boundary=[(0.0, 0.5)])
        assert om.total_mass() == pytest.approx(2.5, abs=1e-15)
        assert om.blaschke_mass() == pytest.approx(0.7, abs=1e-12)

    def test_duplicate_atoms_merge(self):
        om = DiskMeasure(interior=[(0.5j, 1.0), (0.5j, 2.0)])
        assert len(om.interior) == 1
        assert om.interior[0][1] == 3.0

    def test_validation(self):
        with pytest.raises(ValueError):
            DiskMeasure(interior=[(1.0 + 0j, 1.0)])
        with pytest.raises(ValueError):
            DiskMeasure(boundary=[(0.0, -1.0)])


class TestStarMass:
    def test_supported_in_star(self):
        e = BCSet.from_points([0.0, math.pi])
        spec = StarSpec(e)
        om = DiskMeasure(boundary=[(0.0, 0.4), (math.pi, 0.6)])
        assert star_mass(om, spec) == pytest.approx(om.blaschke_mass(), abs=1e-15)

    def test_boundary_atom_on_base_set_counts(self):
        e = BCSet.from_points([1.0])
        om = DiskMeasure(boundary=[(1.0, 2.0)])
        assert star_mass(om, StarSpec(e)) == 2.0

    def test_excludes_only_outside_atom(self):
        e = BCSet.from_points([0.0])
        spec = StarSpec(e)
        om = DiskMeasure(
            boundary=[(0.0, 1.0), (math.pi, 0.25)], interior=[(0.2, 3.0)]
        )
        # the pi-atom is off the set; the interior atom sits in the core
        want = 1.0 + (1.0 - 0.2) * 3.0
        assert star_mass(om, spec) == pytest.approx(want, abs=1e-12)
        assert star_mass(om, spec) <= om.blaschke_mass()


class TestMaxStarMass:
    def test_both_atoms_fit(self):
        om = DiskMeasure(boundary=[(0.0, 0.3), (math.pi, 0.7)])
        val, wit = max_star_mass(om, LOG2 + 1e-9, mode="exact")
        assert val == pytest.approx(1.0, abs=1e-15)
        assert wit == BCSet.from_points([0.0, math.pi])

    def test_budget_forces_singleton(self):
        om = DiskMeasure(boundary=[(0.0, 0.3), (math.pi, 0.7)])
        val, wit = max_star_mass(om, 0.5, mode="exact")
        assert val == pytest.approx(0.7, abs=1e-15)
        assert wit == BCSet.from_points([math.pi])

    def test_empty(self):
        assert max_star_mass(DiskMeasure(), 1.0, mode="exact") == (0.0, None)

    def test_exact_beats_greedy_and_monotone_in_budget(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            k = int(rng.integers(2, 10))
            om = DiskMeasure(
                boundary=[(a, m) for a, m in zip(rng.uniform(0, TAU, k), rng.uniform(0.1, 1, k))]
            )
            prev = 0.0
            for budget in (0.1, 0.5, 1.2, math.log(k) + 0.1):
                ex, _ = max_star_mass(om, budget, mode="exact")
                gr, _ = max_star_mass(om, budget, mode="greedy")
                assert ex >= gr - 1e-12
                assert ex >= prev - 1e-12
                prev = ex

    def test_exact_mode_cap(self):
        om = DiskMeasure(boundary=[(0.01 * k, 1.0) for k in range(19)])
        with pytest.raises(ValueError):
            max_star_mass(om, 1.0, mode="exact")

    def test_kernel_flavours_agree(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            k = int(rng.integers(1, 11))
            ang = np.sort(rng.uniform(0, TAU, k))
            mas = rng.uniform(0.1, 1.0, k)
            budget = float(rng.uniform(0.0, math.log(max(k, 2))))
            got_nb = kernels.subset_entropy_scan_nb(ang, mas, budget)
            got_np = kernels.subset_entropy_scan_np(ang, mas, budget)
            assert got_nb[1] == got_np[1]
            assert got_nb[0] == pytest.approx(got_np[0], abs=1e-12)


class TestTheta:
    def test_identity(self):
        for n, m in ((64, 10.0), (64, 0.1), (32, 10.0), (8, 2.0)):
            th = theta_for(n, m)
            assert 0 < th < 1 / math.e
            assert n * th * math.log(1 / th) == pytest.approx(m, rel=1e-12)

    def test_unsolvable(self):
        with pytest.raises(ThetaUnsolvableError):
            theta_for(8, 10.0)
        with pytest.raises(ThetaUnsolvableError):
            theta_for(16, 10.0)

    def test_family_masses(self):
        om = diffuse_family(16, 2.0)
        assert len(om.boundary) == 16
        assert om.blaschke_mass() == pytest.approx(1.0, abs=1e-12)

    def test_arc_bound_of_the_construction(self):
        # an arc of radian length theta_n/2 holds at most one atom, and
        # 1/n = (1/M) * theta_n log(1/theta_n) <= (3/M) |I| log(1/|I|)
        # with |I| = theta_n/2 in radians
        for n, m in ((64, 10.0), (32, 4.0), (16, 2.0)):
            th = theta_for(n, m)
            om = diffuse_family(n, m)
            width = th / 2
            for ang0, _ in om.boundary:
                inside = [mm for a, mm in om.boundary if (a - ang0) % TAU < width]
                assert math.fsum(inside) <= 1.0 / n + 1e-15
            ell = width
            assert 1.0 / n <= (3.0 / m) * ell * math.log(1.0 / ell) + 1e-12


class TestClassify:
    def test_constant_delta_is_concentrating(self):
        seq = [DiskMeasure(boundary=[(0.0, 1.0)])] * 4
        diag = classify_sequence(seq)
        assert diag.tag == "concentrating"
        assert all(0 <= f <= 1 for row in diag.cone_fractions for f in row)

    def test_diffuse_family_is_diffuse(self):
        # M=10 needs n > 10e (theta unsolvable below); use the feasible range
        seq = [diffuse_family(n, 10.0) for n in (32, 64, 128)]
        assert classify_sequence(seq).tag == "diffuse"

    def test_mixture_is_mixed(self):
        seq = [
            DiskMeasure(boundary=[(0.0, 0.5)]) + diffuse_family(n, 10.0).scaled(0.5)
            for n in (32, 64, 128)
        ]
        assert classify_sequence(seq).tag == "mixed"

    def test_deterministic(self):
        seq = [diffuse_family(n, 10.0) for n in (32, 64)]
        d1 = classify_sequence(seq)
        d2 = classify_sequence(seq)
        assert d1 == d2


class TestStarMassProperties:
    from hypothesis import given, settings
    from hypothesis import strategies as st

    angles = st.lists(st.floats(0, TAU - 1e-9), min_size=1, max_size=6)

    @given(angles, st.floats(1.0, 3.0), st.floats(0.1, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_capture_never_exceeds_total(self, angs, order, aperture):
        om = DiskMeasure(
            interior=[(0.4 + 0.2j, 1.3)],
            boundary=[(a, 0.5) for a in angs],
        )
        spec = StarSpec(BCSet.from_points(angs), order, aperture, True)
        got = star_mass(om, spec)
        assert -1e-12 <= got <= om.blaschke_mass() + 1e-12
