"""Layered decomposition of a measure on the closed disk.

The input measure (combined weight: boundary mass m, interior mass
(1-|a|)*mt) is sorted generation by generation into thin near-boundary
layers mu_j with per-arc mass caps, plus a cone measure supported on a
star over a finite-entropy set E_cone:

  Step 1   everything inside B(0, r_1) goes to the cone.
  Step j   the circle splits into n_j equal arcs; an arc is light when
           its remaining column mass is <= (c/n_j) log n_j, else heavy.
           L: a light column moves wholesale into mu_j. Heavy arcs look
           at the annulus box [r_{j-1}, r_j): H1 moves a box of at least
           threshold mass to the cone; H2 moves a lighter box into mu_j
           and tops mu_j up to the threshold from the outer part of the
           column (atoms ordered by decreasing radius then increasing
           angle, one atom split exactly).
  residue  whatever survives the last generation goes to the cone.

Generations scale by n_{j+1} = n_j^2 from a configurable n2 (the doubly
exponential literal sequence overflows immediately); r_j = 1 - 1/n_j and
r_1 = 1 - 1/sqrt(n2). E*_cone is the complement of the interiors of the
maximal light arcs; E_cone adds eight equally spaced anchor points inside
every heavy arc, which places every heavy box inside the genuine star.
All interval bookkeeping is exact (integer arc indices, Fractions for
anchor points); floats appear only in the emitted BCSets.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .bc_sets import TAU, BCSet, CircleArc, StarSpec, star_contains
from .measures import DiskMeasure

# frozen corpus constant for the local-entropy budget ||E_cone||_{BC_eta} <= K * mass / c
K_LOCAL_ENTROPY = 6.0


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class RobertsParams:
    c: float = 1.0
    n2: int = 16
    max_generation: int = 3

    def __post_init__(self):
        if self.c <= 0.0:
            raise ValueError("c must be positive")
        if self.n2 < 4 or (self.n2 & (self.n2 - 1)) != 0:
            raise ValueError("n2 must be a power of 2, at least 4")
        if self.max_generation < 2:
            raise ValueError("max_generation must be >= 2")
        if self.n_arcs(self.max_generation) > 1 << 62:
            raise ValueError("n_j overflows machine integers at this depth")

    def n_arcs(self, j: int) -> int:
        """n_j = n2^(2^(j-2)) for j >= 2."""
        return self.n2 ** (1 << (j - 2))

    def radius(self, j: int) -> float:
        """r_j = 1 - 1/n_j; r_1 = 1 - 1/sqrt(n2)."""
        if j == 1:
            return 1.0 - 1.0 / math.sqrt(self.n2)
        return 1.0 - 1.0 / self.n_arcs(j)

    def threshold(self, j: int) -> float:
        n = self.n_arcs(j)
        return (self.c / n) * math.log(n)


@dataclass
class _Atom:
    phi: float  # angle in [0, 2pi)
    rho: float  # radius, 1.0 for boundary atoms
    w: float  # combined (omega) weight
    loc: object  # original location: complex (interior) or float angle


def _atoms_of(omega: DiskMeasure):
    out = []
    for ang, m in omega.boundary:
        out.append(_Atom(ang, 1.0, m, ang))
    for a, mt in omega.interior:
        out.append(_Atom(math.atan2(a.imag, a.real) % TAU, abs(a), (1.0 - abs(a)) * mt, a))
    out.sort(key=lambda t: (t.phi, t.rho))
    return out


def _measure_of(pieces) -> DiskMeasure:
    interior, boundary = [], []
    for at in pieces:
        if isinstance(at.loc, complex):
            interior.append((at.loc, at.w / (1.0 - at.rho)))
        else:
            boundary.append((at.loc, at.w))
    return DiskMeasure(interior, boundary)


@dataclass(frozen=True)
class AuditEntry:
    generation: int
    arc_index: int
    column_mass: float
    classification: str  # "light" | "heavy"
    action: str  # "L" | "H1" | "H2"
    moved_to_layer: float
    moved_to_cone: float


@dataclass
class RobertsDecomposition:
    params: RobertsParams
    layers: list  # [(generation, DiskMeasure)]
    cone: DiskMeasure
    star_core_set: BCSet  # E*_cone
    cone_set: BCSet  # E_cone
    audit: list = field(default_factory=list)
    heavy_intervals: list = field(default_factory=list)  # [(j, k)]


def _arc_index(phi: float, n: int) -> int:
    k = int(phi / TAU * n)
    return min(max(k, 0), n - 1)


def decompose(omega: DiskMeasure, p: RobertsParams) -> RobertsDecomposition:
    atoms = _atoms_of(omega)
    layers = {j: [] for j in range(2, p.max_generation + 1)}
    cone: list = []
    audit: list = []
    heavy: list = []  # (j, k)
    light_maximal: list = []  # (j, k)

    r1 = p.radius(1)
    remaining = []
    for at in atoms:
        (cone if at.rho < r1 else remaining).append(at)

    # arcs that survived the previous generation as heavy; gen 2 inspects all
    active = None
    for j in range(2, p.max_generation + 1):
        n = p.n_arcs(j)
        thr = p.threshold(j)
        r_lo, r_hi = p.radius(j - 1), p.radius(j)
        buckets: dict[int, list] = {}
        for at in remaining:
            buckets.setdefault(_arc_index(at.phi, n), []).append(at)
        if active is None:
            candidates = range(n)
        else:
            scale = n // p.n_arcs(j - 1)
            candidates = sorted(
                k0 * scale + i for k0 in active for i in range(scale)
            )
        next_active = []
        next_remaining = []
        for k in candidates:
            col = buckets.pop(k, [])
            col_mass = math.fsum(at.w for at in col)
            if col_mass <= thr:
                light_maximal.append((j, k))
                if col:
                    layers[j].extend(col)
                    audit.append(AuditEntry(j, k, col_mass, "light", "L", col_mass, 0.0))
                continue
            heavy.append((j, k))
            next_active.append(k)
            box = [at for at in col if r_lo <= at.rho < r_hi]
            outer = [at for at in col if at.rho >= r_hi]
            box_mass = math.fsum(at.w for at in box)
            if box_mass >= thr:
                cone.extend(box)
                audit.append(AuditEntry(j, k, col_mass, "heavy", "H1", 0.0, box_mass))
                next_remaining.extend(outer)
                continue
            # H2: box into the layer, top up to thr from the outer column
            layers[j].extend(box)
            need = thr - box_mass
            outer.sort(key=lambda t: (-t.rho, t.phi))
            moved = 0.0
            rest_start = len(outer)
            for idx, at in enumerate(outer):
                if need <= 0.0:
                    rest_start = idx
                    break
                if at.w <= need:
                    layers[j].append(at)
                    moved += at.w
                    need -= at.w
                    rest_start = idx + 1
                else:
                    layers[j].append(_Atom(at.phi, at.rho, need, at.loc))
                    keep = _Atom(at.phi, at.rho, at.w - need, at.loc)
                    moved += need
                    need = 0.0
                    next_remaining.append(keep)
                    rest_start = idx + 1
                    break
            next_remaining.extend(outer[rest_start:])
            audit.append(
                AuditEntry(j, k, col_mass, "heavy", "H2", box_mass + moved, 0.0)
            )
        # columns outside the candidate set were emptied in earlier generations
        for leftovers in buckets.values():
            next_remaining.extend(leftovers)
        remaining = next_remaining
        active = next_active

    cone.extend(remaining)

    rational_gaps = [
        (Fraction(k, p.n_arcs(j)), Fraction(1, p.n_arcs(j))) for j, k in light_maximal
    ]
    star_core = _gaps_to_bcset(rational_gaps)
    cone_set = _insert_anchor_points(rational_gaps, heavy, p)
    return RobertsDecomposition(
        params=p,
        layers=[(j, _measure_of(layers[j])) for j in sorted(layers)],
        cone=_measure_of(cone),
        star_core_set=star_core,
        cone_set=cone_set,
        audit=audit,
        heavy_intervals=heavy,
    )


def _gaps_to_bcset(rational_gaps) -> BCSet:
    """Rational (start, span) circle fractions -> float BCSet."""
    return BCSet(
        [CircleArc(TAU * float(lo), float(span)) for lo, span in rational_gaps]
    )


def _insert_anchor_points(rational_gaps, heavy, p: RobertsParams) -> BCSet:
    """E_cone: E*_cone plus the eight interior anchor points of each heavy arc."""
    points = []
    for j, k in heavy:
        n = p.n_arcs(j)
        for i in range(1, 9):
            points.append(Fraction(10 * k + i, 10 * n))
    points.sort()
    new_gaps = []
    for lo, span in rational_gaps:
        inside = [q for q in points if lo < q < lo + span]
        cuts = [lo] + inside + [lo + span]
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b > a:
                new_gaps.append((a, b - a))
    return _gaps_to_bcset(new_gaps)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    ok: bool
    failures: list
    metrics: dict


def verify(
    d: RobertsDecomposition,
    omega: DiskMeasure,
    p: RobertsParams,
    atol: float = 1e-12,
    star_tol: float = 1e-9,
) -> VerifyReport:
    failures = []
    metrics = {}

    total_in = omega.blaschke_mass()
    total_out = math.fsum(m.blaschke_mass() for _, m in d.layers) + d.cone.blaschke_mass()
    metrics["mass_error"] = abs(total_in - total_out)
    if metrics["mass_error"] > atol * max(1.0, total_in):
        failures.append(f"mass conservation off by {metrics['mass_error']:.3e}")

    # layer supports and sliding-arc bounds
    for j, layer in d.layers:
        r_lo = p.radius(j - 1)
        n = p.n_arcs(j)
        cap = 2.0 * p.threshold(j)
        pts = [(ang, m) for ang, m in layer.boundary]
        pts += [
            (math.atan2(a.imag, a.real) % TAU, (1.0 - abs(a)) * mt)
            for a, mt in layer.interior
        ]
        for a, mt in layer.interior:
            if abs(a) < r_lo - 1e-12:
                failures.append(f"layer {j}: atom at radius {abs(a):.6f} < r_(j-1)")
        width = TAU / n
        for ang0, _ in pts:
            s = math.fsum(m for ang, m in pts if (ang - ang0) % TAU < width)
            if s > cap + atol:
                failures.append(
                    f"layer {j}: sliding arc at {ang0:.4f} carries {s:.6g} > {cap:.6g}"
                )
                break

    # cone containment in the star over E_cone
    spec = StarSpec(d.cone_set, order=1.0, aperture=1.0, include_core=True)
    for ang, _ in d.cone.boundary:
        if not d.cone_set.contains_angle(ang, tol=star_tol):
            failures.append(f"cone boundary atom at angle {ang:.6f} outside E_cone")
    for a, _ in d.cone.interior:
        if not star_contains(spec, a, tol=star_tol):
            failures.append(f"cone interior atom at {a:.6f} outside the star")

    metrics["cone_entropy"] = d.cone_set.entropy()
    metrics["entropy_reference"] = math.log2(math.log2(p.n2)) + omega.blaschke_mass()
    return VerifyReport(not failures, failures, metrics)


def local_entropy_bounds(d: RobertsDecomposition, eta: float | None = None):
    """Local entropies of (E*_cone, E_cone) at threshold eta = 1/(2 n2).

    Enforces the frozen budget K * mass / c on both values.
    """
    p = d.params
    if eta is None:
        eta = 1.0 / (2.0 * p.n2)
    mass = math.fsum(m.blaschke_mass() for _, m in d.layers) + d.cone.blaschke_mass()
    star_val = d.star_core_set.local_entropy(eta)
    cone_val = d.cone_set.local_entropy(eta)
    bound = K_LOCAL_ENTROPY * mass / p.c
    if star_val > bound + 1e-12 or cone_val > bound + 1e-12:
        raise InvariantViolation(
            f"local entropies ({star_val:.6g}, {cone_val:.6g}) exceed {bound:.6g}"
        )
    return star_val, cone_val
