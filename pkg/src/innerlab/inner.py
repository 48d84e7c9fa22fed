"""Blaschke products, singular inner functions, disk potentials.

Green's function G(z,a) = log|1 - z*conj(a)| - log|z - a|, Poisson
kernel P(z,zeta) = (1-|z|^2)/|zeta - z|^2, hyperbolic metric of
curvature -4 (density 1/(1-|z|^2), so d(0,r) = artanh r).

log|I_omega(z)| = -sum mt*G(z,a) - sum m*P(z,zeta) for a zero structure
omega with interior atoms (a, mt) and boundary atoms (zeta, m); finite
Blaschke products additionally evaluate as complex functions, with
derivatives, critical points (Aberth on the numerator of F'), Frostman
shifts, the Mobius-deviation characteristic, and the entropy identities
relating critical points, zeros and circle averages of log|F'|.
"""

import math

import numpy as np

from . import kernels
from .measures import DiskMeasure
from .roots import (
    RootFindingError,
    all_roots,
    cluster_roots,
    polyadd,
    polyder,
    polymul,
    polyval,
)

TAU = 2.0 * math.pi


class QuadratureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# potentials and hyperbolic geometry


def green(z, a):
    """Green's function of the unit disk; +inf signalled at z == a."""
    z = np.asarray(z, dtype=np.complex128)
    a_ = np.asarray(a, dtype=np.complex128)
    with np.errstate(divide="ignore"):
        g = np.log(np.abs(1.0 - z * np.conj(a_))) - np.log(np.abs(z - a_))
    if g.ndim == 0:
        g = float(g)
        if not math.isfinite(g):
            raise ValueError("Green's function is infinite at z == a")
    return g


def green_truncated(z, a):
    """min(G, 1), the truncated Green's function in [0, 1]."""
    return np.minimum(green(z, a), 1.0)


def poisson(z, angle):
    """Poisson kernel (1-|z|^2)/|e^{i*angle} - z|^2."""
    z = np.asarray(z, dtype=np.complex128)
    zeta = np.exp(1j * np.asarray(angle, dtype=np.float64))
    out = (1.0 - np.abs(z) ** 2) / np.abs(zeta - z) ** 2
    return float(out) if out.ndim == 0 else out


def hyperbolic_dist(x, y):
    """Distance in the curvature -4 metric: artanh |x-y|/|1-x*conj(y)|."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    rho = np.abs(x - y) / np.abs(1.0 - x * np.conj(y))
    out = np.arctanh(np.minimum(rho, 1.0 - 1e-16))
    return float(out) if out.ndim == 0 else out


def log_abs_inner(omega: DiskMeasure, z):
    """log|I_omega(z)| <= 0; -inf is signalled for scalar z at an atom."""
    z_arr = np.asarray(z, dtype=np.complex128)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    ia = np.array([a for a, _ in omega.interior], dtype=np.complex128)
    im = np.array([m for _, m in omega.interior], dtype=np.float64)
    ba = np.array([t for t, _ in omega.boundary], dtype=np.float64)
    bm = np.array([m for _, m in omega.boundary], dtype=np.float64)
    out = -(kernels.green_sum(z_arr, ia, im) + kernels.poisson_sum(z_arr, ba, bm))
    if scalar:
        val = float(out[0])
        if not math.isfinite(val):
            raise ValueError("log|I| is -infinite at an atom of the zero structure")
        return val
    return out


# ---------------------------------------------------------------------------
# function representations


class InnerFunctionRep:
    """B*S_mu with integer zero multiplicities plus singular boundary atoms."""

    __slots__ = ("zeros", "singular_atoms", "rotation")

    def __init__(self, zeros=(), singular_atoms=(), rotation=1.0 + 0j):
        zs = []
        for a, m in zeros:
            a = complex(a)
            m = int(m)
            if abs(a) >= 1.0:
                raise ValueError("zeros must lie strictly inside the disk")
            if m < 1:
                raise ValueError("multiplicities must be >= 1")
            zs.append((a, m))
        self.zeros = tuple(zs)
        self.singular_atoms = tuple(
            (float(t) % TAU, float(m)) for t, m in singular_atoms
        )
        if any(m <= 0 for _, m in self.singular_atoms):
            raise ValueError("singular masses must be positive")
        r = complex(rotation)
        if abs(abs(r) - 1.0) > 1e-9:
            raise ValueError("rotation must be unimodular")
        self.rotation = r / abs(r)

    @property
    def zero_structure(self) -> DiskMeasure:
        """The measure carrying this function's zero data."""
        return DiskMeasure(
            interior=[(a, float(m)) for a, m in self.zeros],
            boundary=self.singular_atoms,
        )

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, self.rotation, dtype=np.complex128)
        for a, m in self.zeros:
            out = out * ((z - a) / (1.0 - np.conj(a) * z)) ** m
        for t, m in self.singular_atoms:
            zeta = np.exp(1j * t)
            out = out * np.exp(-m * (zeta + z) / (zeta - z))
        return complex(out) if out.ndim == 0 else out

    def log_abs(self, z):
        return log_abs_inner(self.zero_structure, z)

    def singular_mass(self) -> float:
        return math.fsum(m for _, m in self.singular_atoms)


class FiniteBlaschke:
    """rot * prod ((z - a)/(1 - conj(a) z))^m, finitely many zeros."""

    __slots__ = ("zeros", "rotation", "_numden")

    def __init__(self, zeros=(), rotation=1.0 + 0j):
        zs = []
        for a, m in zeros:
            a = complex(a)
            m = int(m)
            if abs(a) >= 1.0:
                raise ValueError("zeros must lie strictly inside the disk")
            if m < 1:
                raise ValueError("multiplicities must be >= 1")
            zs.append((a, m))
        self.zeros = tuple(zs)
        r = complex(rotation)
        if abs(abs(r) - 1.0) > 1e-9:
            raise ValueError("rotation must be unimodular")
        self.rotation = r / abs(r)
        self._numden = None

    @classmethod
    def from_zero_list(cls, zero_list, rotation=1.0 + 0j) -> "FiniteBlaschke":
        return cls(cluster_roots(zero_list, radius=1e-7), rotation)

    @classmethod
    def monomial(cls, d: int) -> "FiniteBlaschke":
        return cls([(0j, d)])

    @classmethod
    def mobius(cls, x: complex, rotation=1.0 + 0j) -> "FiniteBlaschke":
        """T_x = (z - x)/(1 - conj(x) z)."""
        return cls([(complex(x), 1)], rotation)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def numden(self):
        """(N, D) ascending coefficient arrays with F = N/D, rotation in N."""
        if self._numden is None:
            num = np.array([self.rotation], dtype=np.complex128)
            den = np.array([1.0 + 0j], dtype=np.complex128)
            for a, m in self.zeros:
                for _ in range(m):
                    num = polymul(num, [-a, 1.0])
                    den = polymul(den, [1.0, -np.conj(a)])
            self._numden = (num, den)
        return self._numden

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, self.rotation, dtype=np.complex128)
        for a, m in self.zeros:
            out = out * ((z - a) / (1.0 - np.conj(a) * z)) ** m
        return complex(out) if out.ndim == 0 else out

    def deriv_poly(self):
        """Numerator P of F' = P/D^2 (ascending coefficients)."""
        num, den = self.numden()
        return polyadd(polymul(polyder(num), den), -polymul(num, polyder(den)))

    def deriv(self, z):
        z = np.asarray(z, dtype=np.complex128)
        _, den = self.numden()
        out = polyval(self.deriv_poly(), z) / polyval(den, z) ** 2
        return complex(out) if out.ndim == 0 else out

    def log_abs(self, z):
        zs = DiskMeasure(interior=[(a, float(m)) for a, m in self.zeros])
        return log_abs_inner(zs, z)

    def compose_mobius(self, x: complex, rotation=1.0 + 0j) -> "FiniteBlaschke":
        """T_x o F as a finite Blaschke product (the Frostman shift)."""
        return frostman_shift(self, x, rotation)

    def __repr__(self):
        return f"FiniteBlaschke(degree={self.degree})"


def critical_points(f: FiniteBlaschke):
    """Zeros of F' in the open disk as (point, multiplicity); count d-1."""
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    if f.degree == 1:
        return []
    p = f.deriv_poly()
    roots = all_roots(p)
    inside = [complex(r) for r in roots if abs(r) < 1.0]
    clustered = cluster_roots(inside)
    found = sum(m for _, m in clustered)
    if found != f.degree - 1:
        raise RootFindingError(
            f"expected {f.degree - 1} interior critical points, found {found}"
        )
    return clustered


def frostman_shift(f: FiniteBlaschke, x: complex, rotation=1.0 + 0j) -> FiniteBlaschke:
    """T_x o F: zeros are the d preimages of x, found by the root solver."""
    x = complex(x)
    if abs(x) >= 1.0:
        raise ValueError("shift target must lie inside the disk")
    if x == 0:
        return FiniteBlaschke(f.zeros, rotation * f.rotation)
    num, den = f.numden()
    pre = all_roots(polyadd(num, -x * np.asarray(den)))
    if pre.size != f.degree or np.any(np.abs(pre) >= 1.0):
        raise RootFindingError("preimage solving lost roots or left the disk")
    zeros = cluster_roots([complex(r) for r in pre])
    shifted = FiniteBlaschke(zeros, 1.0)
    # fix the unimodular factor by matching values at a probe point
    for probe in (0.0, 0.371 + 0.219j, -0.42 + 0.13j):
        ref = shifted(probe)
        if abs(ref) > 1e-6:
            tgt = (f(probe) - x) / (1.0 - np.conj(x) * f(probe))
            c = tgt / ref
            break
    else:
        raise RootFindingError("no usable probe point for the rotation")
    if abs(abs(c) - 1.0) > 1e-6:
        raise RootFindingError(f"rotation match has modulus {abs(c)}")
    return FiniteBlaschke(zeros, complex(rotation) * c / abs(c))


def gamma(f: FiniteBlaschke, z):
    """Mobius-deviation characteristic: sum of G(z, c) over critical points."""
    crits = critical_points(f)
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.zeros(z_arr.shape)
    for c, m in crits:
        out = out + m * np.asarray(green(z_arr, c))
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        val = float(out[0])
        if not math.isfinite(val):
            raise ValueError("gamma is infinite at a critical point")
        return val
    return out


# ---------------------------------------------------------------------------
# entropy identities


def _zero_at_origin_mult(f: FiniteBlaschke) -> int:
    return sum(m for a, m in f.zeros if abs(a) < 1e-13)


def jensen_entropy(f: FiniteBlaschke) -> float:
    """sum_crit log(1/|c|) - sum_{zeros != 0} log(1/|z_i|).

    Requires F(0) = 0 and F'(0) != 0 (simple zero at the origin, no
    critical point there).
    """
    if _zero_at_origin_mult(f) != 1:
        raise ValueError("entropy formula needs a simple zero at the origin")
    crit = critical_points(f)
    if any(abs(c) < 1e-13 for c, _ in crit):
        raise ValueError("entropy formula needs F'(0) != 0")
    s_crit = math.fsum(m * math.log(1.0 / abs(c)) for c, m in crit)
    s_zero = math.fsum(
        m * math.log(1.0 / abs(a)) for a, m in f.zeros if abs(a) >= 1e-13
    )
    return s_crit - s_zero


def _doubling_circle_mean(fn, tol: float, cap: int = 1 << 20, start: int = 64):
    """Trapezoid mean of a smooth periodic function with doubling control."""
    n = start
    prev = None
    hits = 0
    while n <= cap:
        theta = (np.arange(n) + 0.318) * (TAU / n)
        val = float(np.mean(fn(theta)))
        if prev is not None and abs(val - prev) <= tol * (1.0 + abs(val)):
            hits += 1
            if hits >= 2:
                return val
        else:
            hits = 0
        prev = val
        n *= 2
    raise QuadratureError(f"circle quadrature did not settle below {tol} within {cap} nodes")


def circle_entropy_quadrature(f: FiniteBlaschke, tol: float = 1e-9, cap: int = 1 << 20) -> float:
    """(1/2pi) integral of log|F'| over the circle; the entropy oracle."""
    p = f.deriv_poly()
    _, den = f.numden()

    def fn(theta):
        z = np.exp(1j * theta)
        return np.log(np.abs(polyval(p, z))) - 2.0 * np.log(np.abs(polyval(den, z)))

    return _doubling_circle_mean(fn, tol, cap)


def nevanlinna_gap(
    f: FiniteBlaschke,
    singular_atoms=(),
    ladder=(4, 5, 6, 7, 8, 9, 10),
    tol: float = 1e-6,
) -> float:
    """Circle average of log|f| at r=1 minus its extrapolated r->1 limit.

    f = (finite Blaschke) * (atomic singular inner); the average at r=1
    is 0 (unimodular radial limits), so the gap is -lim_r avg log|f|,
    which equals the total singular mass. Averages are quadratures; the
    limit is a Richardson extrapolation in 1-r.
    """
    atoms = tuple((float(t) % TAU, float(m)) for t, m in singular_atoms)

    def avg(r):
        def fn(theta):
            z = r * np.exp(1j * theta)
            la = np.asarray(f.log_abs(z)) if f.degree else np.zeros_like(theta)
            for t, m in atoms:
                la = la - m * poisson(z, t)
            return la

        return _doubling_circle_mean(fn, 1e-11)

    vals = [avg(1.0 - 2.0 ** (-k)) for k in ladder]
    # A(r) = A_inf + c1 (1-r) + c2 (1-r)^2 + ...: two Richardson levels
    ext = [2.0 * b - a for a, b in zip(vals[:-1], vals[1:])]
    ext2 = [(4.0 * b - a) / 3.0 for a, b in zip(ext[:-1], ext[1:])]
    if len(ext2) >= 2 and abs(ext2[-1] - ext2[-2]) > tol:
        raise QuadratureError(
            f"Nevanlinna average extrapolation moved {abs(ext2[-1] - ext2[-2]):.3g}"
        )
    return -ext2[-1]
