"""Atomic positive measures on the closed disk.

A DiskMeasure carries interior atoms (a, mt) with |a| < 1 — the measure
nu-tilde — and boundary atoms (angle, m) — the measure mu. The combined
finite measure on the closed disk weights interior atoms by (1-|a|)*mt
("blaschke mass"), the weighting under which star capture, Roberts
decompositions and diffusion diagnostics operate.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bc_sets import BCSet, StarSpec, _norm_angle, star_contains


class ThetaUnsolvableError(ValueError):
    """n*theta*log(1/theta) = M has no root in (0, 1/e) when M >= n/e."""


class DiskMeasure:
    """Finite positive atomic measure, interior + boundary parts."""

    __slots__ = ("interior", "boundary")

    def __init__(self, interior=(), boundary=()):
        by_loc = {}
        for a, m in interior:
            a = complex(a)
            if abs(a) >= 1.0:
                raise ValueError(f"interior atom at |a| = {abs(a)} >= 1")
            if m <= 0.0:
                raise ValueError("masses must be positive")
            by_loc[a] = by_loc.get(a, 0.0) + float(m)
        self.interior = tuple(sorted(by_loc.items(), key=lambda t: (t[0].real, t[0].imag)))
        by_ang = {}
        for ang, m in boundary:
            ang = _norm_angle(float(ang))
            if m <= 0.0:
                raise ValueError("masses must be positive")
            by_ang[ang] = by_ang.get(ang, 0.0) + float(m)
        self.boundary = tuple(sorted(by_ang.items()))

    # -- masses -------------------------------------------------------------

    def total_mass(self) -> float:
        return math.fsum(m for _, m in self.interior) + math.fsum(
            m for _, m in self.boundary
        )

    def blaschke_mass(self) -> float:
        """Mass of the combined measure: sum m + sum (1-|a|)*mt."""
        return math.fsum((1.0 - abs(a)) * m for a, m in self.interior) + math.fsum(
            m for _, m in self.boundary
        )

    @property
    def is_empty(self) -> bool:
        return not self.interior and not self.boundary

    def scaled(self, k: float) -> "DiskMeasure":
        if k <= 0.0:
            raise ValueError("scale must be positive")
        return DiskMeasure(
            [(a, k * m) for a, m in self.interior],
            [(t, k * m) for t, m in self.boundary],
        )

    def __add__(self, other: "DiskMeasure") -> "DiskMeasure":
        return DiskMeasure(
            list(self.interior) + list(other.interior),
            list(self.boundary) + list(other.boundary),
        )

    def __le__(self, other: "DiskMeasure") -> bool:
        """Atomwise domination: every atom of self appears in other with
        at least the same mass."""
        oth_i = dict(other.interior)
        oth_b = dict(other.boundary)
        return all(oth_i.get(a, 0.0) >= m - 1e-15 for a, m in self.interior) and all(
            oth_b.get(t, 0.0) >= m - 1e-15 for t, m in self.boundary
        )

    def __repr__(self):
        return (
            f"DiskMeasure({len(self.interior)} interior, "
            f"{len(self.boundary)} boundary, |omega|={self.blaschke_mass():.6g})"
        )


def star_mass(omega: DiskMeasure, spec: StarSpec, tol: float = 0.0) -> float:
    """Combined mass of atoms inside the star (boundary m, interior (1-|a|)mt)."""
    total = 0.0
    for ang, m in omega.boundary:
        if star_contains(spec, complex(math.cos(ang), math.sin(ang)), tol=tol):
            total += m
    for a, m in omega.interior:
        if star_contains(spec, a, tol=tol):
            total += (1.0 - abs(a)) * m
    return total


def max_star_mass(omega: DiskMeasure, budget: float, mode: str = "exact"):
    """Best boundary mass captured by a point set of entropy <= budget.

    Witness sets are built from subsets of the boundary-atom angles
    (adding non-atom points only spends entropy). Exact mode enumerates
    all subsets (<= 18 atoms); greedy adds atoms in decreasing-mass order
    while the budget permits. Returns (mass, witness BCSet or None).
    """
    if budget < 0.0:
        raise ValueError("entropy budget must be >= 0")
    atoms = omega.boundary
    if not atoms:
        return 0.0, None
    angles = np.array([t for t, _ in atoms])
    masses = np.array([m for _, m in atoms])
    if mode == "exact":
        if len(atoms) > 18:
            raise ValueError("exact mode supports at most 18 boundary atoms")
        best_mass, best_mask = kernels.subset_entropy_scan(angles, masses, budget)
        if best_mask == 0:
            return 0.0, None
        chosen = [angles[i] for i in range(len(atoms)) if (best_mask >> i) & 1]
        return float(best_mass), BCSet.from_points(chosen)
    if mode == "greedy":
        order = sorted(range(len(atoms)), key=lambda i: (-masses[i], angles[i]))
        chosen: list[float] = []
        got = 0.0
        for i in order:
            trial = chosen + [angles[i]]
            if BCSet.from_points(trial).entropy() <= budget + 1e-12:
                chosen = trial
                got += masses[i]
        if not chosen:
            return 0.0, None
        return got, BCSet.from_points(chosen)
    raise ValueError(f"mode must be 'exact' or 'greedy', got {mode!r}")


# ---------------------------------------------------------------------------
# the n-atom families with prescribed spread


def theta_for(n: int, big_m: float) -> float:
    """Solve n * theta * log(1/theta) = M for theta in (0, 1/e).

    The left side is increasing on (0, 1/e) with supremum n/e, so the
    equation is solvable iff M < n/e; otherwise ThetaUnsolvableError.
    Bisection to 1e-14 relative tolerance.
    """
    if n < 1 or big_m <= 0.0:
        raise ValueError("need n >= 1 and M > 0")
    emax = n / math.e
    if big_m >= emax:
        raise ThetaUnsolvableError(
            f"n*theta*log(1/theta) has supremum n/e = {emax:.6g} < M = {big_m}"
        )

    def f(t):
        return n * t * math.log(1.0 / t)

    lo, hi = 1e-300, 1.0 / math.e
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if f(mid) < big_m:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


def diffuse_family(n: int, big_m: float) -> DiskMeasure:
    """mu_{n,M}: n equal boundary atoms of mass 1/n at angles k*theta_n."""
    th = theta_for(n, big_m)
    return DiskMeasure(boundary=[(k * th, 1.0 / n) for k in range(1, n + 1)])


# ---------------------------------------------------------------------------
# concentrating / diffuse classification


@dataclass(frozen=True)
class SequenceDiagnostics:
    c_ladder: tuple
    cone_fractions: tuple  # per measure, per c
    local_entropy_budgets: tuple  # per measure, at the middle c
    tag: str  # concentrating | diffuse | mixed

    def __post_init__(self):
        for row in self.cone_fractions:
            for f in row:
                if not (-1e-12 <= f <= 1.0 + 1e-12):
                    raise ValueError("cone fractions must lie in [0,1]")


def classify_sequence(
    measures,
    c_ladder=(0.5, 1.0, 2.0),
    n2: int = 16,
    max_generation: int = 3,
) -> SequenceDiagnostics:
    """Cone-mass fractions of layered decompositions along a c ladder.

    Heuristic tag from the fractions at the largest c: a sequence whose
    cone keeps holding most of its mass concentrates; one whose cone
    empties diffuses; a persistent intermediate fraction is mixed.
    Deterministic for fixed parameters.
    """
    from .roberts import RobertsParams, decompose, local_entropy_bounds

    if not measures:
        raise ValueError("need at least one measure")
    fractions = []
    budgets = []
    mid_c = c_ladder[len(c_ladder) // 2]
    for om in measures:
        total = om.blaschke_mass()
        row = []
        for c in c_ladder:
            d = decompose(om, RobertsParams(c=c, n2=n2, max_generation=max_generation))
            row.append(d.cone.blaschke_mass() / total if total > 0 else 0.0)
        fractions.append(tuple(row))
        d_mid = decompose(om, RobertsParams(c=mid_c, n2=n2, max_generation=max_generation))
        budgets.append(local_entropy_bounds(d_mid)[1])
    f_first = fractions[0][-1]
    f_last = fractions[-1][-1]
    if f_last >= 0.5:
        tag = "concentrating"
    elif f_last < 0.1 or (f_last <= 0.5 * f_first and f_last < 0.25):
        tag = "diffuse"
    else:
        tag = "mixed"
    return SequenceDiagnostics(tuple(c_ladder), tuple(fractions), tuple(budgets), tag)
