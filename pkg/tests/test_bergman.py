import math

import numpy as np
import pytest

from conftest import random_blaschke
from innerlab import frozen
from innerlab.bc_sets import BCSet
from innerlab.bergman import (
    BergmanSpaceSpec,
    SubspaceProbe,
    admissible_beta,
    bergman_norm,
    d_recursion,
    distance_to_one,
    divide,
    h2_norm_and_lp,
)
from innerlab.inner import FiniteBlaschke, InnerFunctionRep
from innerlab.measures import diffuse_family

SQRT_PI = math.sqrt(math.pi)


class TestNorms:
    def test_constant(self):
        spec = BergmanSpaceSpec()
        assert bergman_norm(lambda z: np.ones_like(z), spec) == pytest.approx(
            SQRT_PI, abs=1e-12
        )

    def test_monomial(self):
        spec = BergmanSpaceSpec()
        assert bergman_norm(lambda z: z, spec) == pytest.approx(
            math.sqrt(math.pi / 2), abs=1e-12
        )

    def test_modulus_invariance(self):
        spec = BergmanSpaceSpec(n_r=120, n_theta=128)
        f = FiniteBlaschke([(0.3 + 0.2j, 1)])
        n1 = bergman_norm(f, spec)
        n2 = bergman_norm(lambda z: np.exp(0.7j) * f(z), spec)
        assert n1 == pytest.approx(n2, rel=1e-14)

    def test_weighted_monomial_closed_form(self):
        # ||z^n||^2 = 2 pi B(2n+2, alpha+1) for p = 2
        from scipy.special import betaln

        for alpha in (0.0, 1.0, -0.5):
            spec = BergmanSpaceSpec(alpha=alpha, n_r=220)
            got = bergman_norm(lambda z: z**3, spec)
            want = math.sqrt(2 * math.pi * math.exp(betaln(8.0, alpha + 1.0)))
            assert got == pytest.approx(want, rel=1e-10)


class TestLittlewoodPaley:
    def test_identity_map(self):
        h2, lp = h2_norm_and_lp(FiniteBlaschke([(0j, 1)]))
        assert h2 == pytest.approx(1.0, abs=1e-12)
        assert lp == pytest.approx(1.0, abs=1e-9)

    def test_square(self):
        h2, lp = h2_norm_and_lp(FiniteBlaschke.monomial(2))
        assert h2 == pytest.approx(1.0, abs=1e-12)
        assert lp == pytest.approx(1.0, abs=1e-9)

    def test_random_corpus(self):
        rng = np.random.default_rng(2718)
        for _ in range(5):
            f = random_blaschke(rng, int(rng.integers(2, 6)), origin_zero=True)
            h2, lp = h2_norm_and_lp(f)
            assert h2 == pytest.approx(lp, abs=1e-6)

    def test_requires_origin_zero(self):
        with pytest.raises(ValueError):
            h2_norm_and_lp(FiniteBlaschke([(0.5, 1)]))


class TestDistanceToOne:
    def test_monomial_generator(self):
        spec = BergmanSpaceSpec()
        for m in (5, 20):
            d, rep = distance_to_one(SubspaceProbe(lambda z: z, m), spec)
            assert d == pytest.approx(SQRT_PI, abs=1e-10)
            assert not rep["regularized"]

    def test_constant_generator(self):
        spec = BergmanSpaceSpec()
        d, _ = distance_to_one(SubspaceProbe(lambda z: np.ones_like(z), 10), spec)
        assert d == pytest.approx(0.0, abs=1e-7)

    def test_trend_nonincreasing_and_rotation_invariant(self):
        spec = BergmanSpaceSpec(n_r=160, n_theta=256)
        gen = InnerFunctionRep(singular_atoms=[(0.0, 1.0)])
        d, rep = distance_to_one(SubspaceProbe(gen, 24), spec)
        caps, vals = zip(*rep["trend"])
        assert list(vals) == sorted(vals, reverse=True)
        # unimodular prefactor leaves |I| and hence the Gram unchanged
        rot = InnerFunctionRep(singular_atoms=[(0.0, 1.0)], rotation=np.exp(1.3j))
        d_rot, _ = distance_to_one(SubspaceProbe(rot, 24), spec)
        assert d_rot == pytest.approx(d, rel=1e-12)
        # moving the atom is exact in the continuum, quadrature-limited here
        moved = InnerFunctionRep(singular_atoms=[(2.2, 1.0)])
        d_mv, _ = distance_to_one(SubspaceProbe(moved, 24), spec)
        assert d_mv == pytest.approx(d, rel=2e-3)

    def test_prototype_singular_floor_vs_diffuse_ladder(self):
        spec = BergmanSpaceSpec(n_r=160, n_theta=512)
        d_sing, _ = distance_to_one(
            SubspaceProbe(InnerFunctionRep(singular_atoms=[(0.0, 1.0)]), 20), spec
        )
        assert d_sing > 0.3
        prev = None
        for n in (32, 64):
            mu = diffuse_family(n, 10.0)
            gen = InnerFunctionRep(singular_atoms=mu.boundary)
            d, _ = distance_to_one(SubspaceProbe(gen, 20), spec)
            if prev is not None:
                assert d < prev
            prev = d
        assert prev < d_sing

    def test_semicontinuity_concentrating_ladder(self):
        # atoms at +-eps merging into one: subspace distances converge to
        # the limit generator's distance
        spec = BergmanSpaceSpec(n_r=160, n_theta=512)
        d_lim, _ = distance_to_one(
            SubspaceProbe(InnerFunctionRep(singular_atoms=[(0.0, 1.0)]), 20), spec
        )
        diffs = []
        for eps in (0.5, 0.1, 0.02, 0.004):
            gen = InnerFunctionRep(
                singular_atoms=[(eps, 0.5), (2 * math.pi - eps, 0.5)]
            )
            d, _ = distance_to_one(SubspaceProbe(gen, 20), spec)
            diffs.append(abs(d - d_lim))
        assert diffs == sorted(diffs, reverse=True)
        assert diffs[-1] < 1e-3

    def test_requires_hilbert_case(self):
        with pytest.raises(ValueError):
            distance_to_one(
                SubspaceProbe(lambda z: z, 5), BergmanSpaceSpec(p=3.0)
            )


class TestDivide:
    def setup_method(self):
        self.e = BCSet.from_points([0.0, math.pi])
        self.spec = BergmanSpaceSpec(n_r=120, n_theta=128)

    def test_trivial_inner_part(self):
        rep = InnerFunctionRep()
        _, info = divide(lambda z: np.ones_like(z), rep, self.e, 0.5, self.spec)
        assert info["ratio"] <= 1.0 + 1e-12  # |Phi^delta| <= 1

    def test_f_equals_inner(self):
        rep = InnerFunctionRep(zeros=[(0.3, 1)])
        inner_fn = FiniteBlaschke([(0.3, 1)])
        _, info = divide(inner_fn, rep, self.e, 0.5, self.spec)
        # f^delta = Phi^delta has norm <= ||1||
        assert info["norm_f_delta"] <= SQRT_PI + 1e-9

    def test_ratio_bounded_on_pairs(self):
        rng = np.random.default_rng(5)
        ratios = []
        for _ in range(4):
            a = 0.85 * np.exp(1j * rng.uniform(0, 2 * math.pi))
            # zero near the set: within the order-1 star over E
            a = abs(a) * np.exp(1j * rng.choice([0.0, math.pi]) + 1j * rng.uniform(-0.05, 0.05))
            rep = InnerFunctionRep(zeros=[(complex(a), 1)])
            inner_fn = FiniteBlaschke([(complex(a), 1)])
            q = lambda z: 1.0 + 0.5 * z
            f = lambda z: q(z) * inner_fn(z)
            for delta in (0.5, 0.25):
                _, info = divide(f, rep, self.e, delta, self.spec)
                ratios.append(info["ratio"])
        assert all(np.isfinite(r) for r in ratios)
        assert max(ratios) <= frozen.DIVISION_RATIO_BOUND * 1.05


class TestRecursion:
    def test_base_case(self):
        assert d_recursion([], 1.0) == 0.0

    def test_single_entry(self):
        assert d_recursion([256], 1.0) == pytest.approx(256.0 ** (-2 / 3), rel=1e-15)
        assert d_recursion([256], 1.0) == pytest.approx(0.024803, abs=1e-6)

    def test_sparse_sequences_small(self):
        beta = 1.0
        vals = []
        for n in (4, 16, 256):
            ns = [n ** (2**j) for j in range(3)]
            vals.append(d_recursion(ns, beta))
        assert vals == sorted(vals, reverse=True)
        # dominated by the n^(-2 beta/3) head term
        assert vals[-1] < 0.05
        assert vals[-1] == pytest.approx(256.0 ** (-2 / 3), abs=5e-3)

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            d_recursion([10**300] * 3, 6.0)

    def test_admissible_beta(self):
        beta = admissible_beta(2.0, 0.0)
        assert 0.45 < beta <= 0.5
        # certified: normalized norms decay at least this fast
        from scipy.special import betaln

        log_one = betaln(2.0, 1.0) / 2.0
        for n in (2, 3, 7, 50, 999):
            log_norm = betaln(2.0 * n + 2.0, 1.0) / 2.0
            assert log_one - log_norm >= beta * math.log(n) - 1e-9
