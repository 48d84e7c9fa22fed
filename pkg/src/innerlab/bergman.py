"""Weighted Bergman norms, subspace distances, division, D-recursion.

Norms use a tensor polar rule: Gauss-Legendre in a graded radial variable
(rho = 1 - (1-t)^q with q matched to the weight exponent so the factor
(1-rho)^alpha folds into a polynomial) times a uniform angular grid.

distance_to_one computes the exact A^2_alpha distance from the constant 1
to span{I, zI, ..., z^m I} through Gram matrices; the angular reductions
are DFTs, so the Gram assembly is O(n_r n_theta log n_theta + m^2 n_r).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.special import betaln

from .bc_sets import BCSet
from .inner import InnerFunctionRep, log_abs_inner
from .outer import OuterSpec

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class BergmanSpaceSpec:
    p: float = 2.0
    alpha: float = 0.0
    n_r: int = 200
    n_theta: int = 512

    def __post_init__(self):
        if not (1.0 <= self.p < math.inf):
            raise ValueError("p must lie in [1, infinity)")
        if self.alpha <= -1.0:
            raise ValueError("alpha must exceed -1")
        if self.n_r < 8 or self.n_theta < 16:
            raise ValueError("resolution too small")

    def radial_rule(self):
        """(rho, W) with sum W_i g(rho_i) ~ int_0^1 g(r) (1-r)^alpha r dr."""
        q = max(2, math.ceil(2.0 / (1.0 + self.alpha)))
        x, w = np.polynomial.legendre.leggauss(self.n_r)
        t = 0.5 * (x + 1.0)
        w = 0.5 * w
        one_minus = (1.0 - t) ** (q - 1 + q * self.alpha)
        rho = 1.0 - (1.0 - t) ** q
        return rho, w * q * one_minus * rho

    def nodes(self):
        rho, wr = self.radial_rule()
        theta = np.arange(self.n_theta) * (TAU / self.n_theta)
        return rho, wr, theta


def bergman_norm(f, spec: BergmanSpaceSpec) -> float:
    """||f||_{A^p_alpha} by the tensor polar rule; f maps complex arrays."""
    rho, wr, theta = spec.nodes()
    z = rho[:, None] * np.exp(1j * theta)[None, :]
    vals = np.abs(np.asarray(f(z))) ** spec.p
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is not finite on the quadrature grid")
    total = float((wr @ vals.mean(axis=1)) * TAU)
    return total ** (1.0 / spec.p)


def _doubling_circle_mean(fn, tol=1e-12, cap=1 << 19, start=64):
    n = start
    prev, hits = None, 0
    while n <= cap:
        theta = (np.arange(n) + 0.23) * (TAU / n)
        val = float(np.mean(fn(theta)))
        if prev is not None and abs(val - prev) <= tol * (1.0 + abs(val)):
            hits += 1
            if hits >= 2:
                return val
        else:
            hits = 0
        prev = val
        n *= 2
    raise RuntimeError("circle mean did not converge")


def _radial_log_integral(fn, levels=40, order=16):
    """int_0^1 fn(rho) rho log(1/rho) drho on dyadic panels toward 0."""
    nodes, wts = np.polynomial.legendre.leggauss(order)
    total = 0.0
    hi = 1.0
    for _ in range(levels):
        lo = hi * 0.5
        mid, rad = 0.5 * (hi + lo), 0.5 * (hi - lo)
        r = mid + rad * nodes
        total += rad * float(np.dot(wts, fn(r) * r * np.log(1.0 / r)))
        hi = lo
    mid, rad = 0.5 * hi, 0.5 * hi
    r = mid + rad * nodes
    total += rad * float(np.dot(wts, fn(r) * r * np.log(1.0 / r)))
    return total


def h2_norm_and_lp(f) -> tuple:
    """(||F||_{H^2}^2 by circle quadrature, the area log-weight integral).

    For F(0) = 0 the two agree: the mean square of |F| on the circle
    equals (1/pi) int |F'|^2 log(1/|z|^2) over the disk.
    """
    zero_mult = sum(m for a, m in f.zeros if abs(a) < 1e-13)
    if zero_mult < 1:
        raise ValueError("the identity needs F(0) = 0")

    def circ(theta):
        return np.abs(f(np.exp(1j * theta))) ** 2

    h2_sq = _doubling_circle_mean(circ)

    def radial(r):
        out = np.empty_like(r)
        theta = np.arange(256) * (TAU / 256)
        for i, rr in enumerate(r):
            out[i] = float(np.mean(np.abs(f.deriv(rr * np.exp(1j * theta))) ** 2))
        return out

    lp = 4.0 * _radial_log_integral(radial)
    return h2_sq, lp


# ---------------------------------------------------------------------------
# subspace distances


@dataclass(frozen=True)
class SubspaceProbe:
    generator: object  # evaluable on complex arrays (inner function)
    m: int = 20

    def __post_init__(self):
        if self.m < 0 or self.m > 60:
            raise ValueError("polynomial degree cap must lie in [0, 60]")


def _gram_pieces(gen, spec: BergmanSpaceSpec, m: int):
    rho, wr, theta = spec.nodes()
    if spec.n_theta < 2 * m + 4:
        raise ValueError("angular resolution must exceed twice the degree cap")
    z = rho[:, None] * np.exp(1j * theta)[None, :]
    vals = np.asarray(gen(z), dtype=np.complex128)
    dth = TAU / spec.n_theta
    f_abs = np.fft.fft(np.abs(vals) ** 2, axis=1) * dth  # A_d = conj at -d
    f_conj = np.fft.fft(np.conj(vals), axis=1) * dth
    powers = rho[:, None] ** np.arange(2 * m + 1)[None, :]
    gram = np.empty((m + 1, m + 1), dtype=np.complex128)
    for j in range(m + 1):
        for k in range(m + 1):
            a_d = f_abs[:, (-(k - j)) % spec.n_theta]
            gram[j, k] = np.dot(wr * powers[:, j + k], a_d)
    b = np.array(
        [np.dot(wr * powers[:, j], f_conj[:, j % spec.n_theta]) for j in range(m + 1)]
    )
    one_sq = TAU * float(np.sum(wr))
    return gram, b, one_sq


def distance_to_one(probe: SubspaceProbe, spec: BergmanSpaceSpec):
    """Distance in A^2_alpha from 1 to span{I, zI, ..., z^m I}.

    Hilbert-space projection through the Gram matrix; returns
    (distance, report) where the report carries the nonincreasing trend
    over nested degree caps and a conditioning flag.
    """
    if spec.p != 2.0:
        raise ValueError("subspace distances need the Hilbert case p = 2")
    m = probe.m
    gram, b, one_sq = _gram_pieces(probe.generator, spec, m)
    caps = sorted({m // 4, m // 2, (3 * m) // 4, m} - {0}) if m else [0]
    trend = []
    regularized = False
    for cap in caps:
        g_sub = gram[: cap + 1, : cap + 1]
        b_sub = b[: cap + 1]
        g_sub = 0.5 * (g_sub + g_sub.conj().T)
        try:
            sol = cho_solve(cho_factor(g_sub), b_sub)
        except np.linalg.LinAlgError:
            regularized = True
            eps = 1e-12 * float(np.trace(g_sub).real) / (cap + 1)
            sol = np.linalg.solve(g_sub + eps * np.eye(cap + 1), b_sub)
        d_sq = one_sq - float(np.real(np.vdot(b_sub, sol)))
        trend.append((cap, math.sqrt(max(d_sq, 0.0))))
    report = {"trend": trend, "regularized": regularized}
    return trend[-1][1], report


def division_evaluator(f, rep: InnerFunctionRep, e_set: BCSet, delta: float, depth: int = 20):
    """Pointwise log-modulus of f^delta = (Phi_E^delta / I) f."""
    phi = OuterSpec(e_set, depth)
    zeros = rep.zero_structure

    def log_abs(z):
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide="ignore", invalid="ignore"):
            lf = np.log(np.abs(np.asarray(f(z))))
        return delta * phi.log_abs(z) + lf - log_abs_inner(zeros, z)

    return log_abs


def divide(f, rep: InnerFunctionRep, e_set: BCSet, delta: float, spec: BergmanSpaceSpec,
           depth: int = 20, atom_clearance: float = 1e-9):
    """Korenblum division: f^delta = (Phi_E^delta / I) f with a norm report.

    The caller supplies f in the subspace generated by I (f = q*I by
    construction); quadrature nodes closer than `atom_clearance` to a zero
    of I are skipped and counted.
    """
    log_abs = division_evaluator(f, rep, e_set, delta, depth)
    rho, wr, theta = spec.nodes()
    z = rho[:, None] * np.exp(1j * theta)[None, :]
    keep = np.ones(z.shape, dtype=bool)
    for a, _ in rep.zeros:
        keep &= np.abs(z - a) > atom_clearance
    la = np.where(keep, log_abs(z), -np.inf)
    vals = np.exp(spec.p * la)
    norm_div = float((wr @ vals.mean(axis=1)) * TAU) ** (1.0 / spec.p)
    norm_f = bergman_norm(f, spec)
    return log_abs, {
        "norm_f_delta": norm_div,
        "norm_f": norm_f,
        "ratio": norm_div / norm_f if norm_f > 0 else math.inf,
        "skipped_nodes": int(np.sum(~keep)),
    }


# ---------------------------------------------------------------------------
# the D-recursion


def d_recursion(ns, beta: float) -> float:
    """D[{n1,...,nk}] = n1^(beta/3) D[{n2,...}] + n1^(-2beta/3), D[[]] = 0."""
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if any(n < 1 for n in ns):
        raise ValueError("entries must be positive integers")
    d = 0.0
    for n in reversed(list(ns)):
        d = n ** (beta / 3.0) * d + n ** (-2.0 * beta / 3.0)
        if d > 1e300:
            raise OverflowError("recursion value overflows")
    return d


def admissible_beta(p: float = 2.0, alpha: float = 0.0, n_max: int = 4096) -> float:
    """Largest safe beta with ||z^n|| / ||1|| <= n^-beta for 2 <= n <= n_max.

    Monomial norms are exact Beta-function values. The raw (unnormalized)
    norms exceed 1 at small n for e.g. (p, alpha) = (2, 0), so no raw-norm
    exponent exists; normalizing by ||1|| gives the scale-free decay the
    recursion needs.
    """
    log_one = betaln(2.0, alpha + 1.0) / p
    worst = (1.0 + alpha) / p  # the n -> infinity exponent, approached from above
    n = 2
    while n <= n_max:
        log_norm = betaln(n * p + 2.0, alpha + 1.0) / p
        worst = min(worst, (log_one - log_norm) / math.log(n))
        n = n + 1 if n < 256 else n * 2
    return worst - 1e-9
