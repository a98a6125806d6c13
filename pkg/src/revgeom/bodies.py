"""Convex bodies of revolution and spherical pushforwards of their area measures.

A body with axis e_n is encoded by its profile ``R`` (a
:class:`~revgeom.bv0.BV0Function`), the length ``ell`` of a vertical segment
summand, and the radii ``rho_plus``/``rho_minus`` of the flat faces at the
poles.  Support functions are restricted to the axis direction:
``hbar(t) = h(sqrt(1-t^2) * e_1 + t * e_n)``.
"""

import math

import numpy as np

from . import bv0
from .bv0 import BV0Function
from .constants import kappa, omega
from .errors import NotConvex
from .measures import Cumulative, Piece, ZonalMeasure

_FD_STEP = 1e-5
_FD_STEP2 = 1e-4


class RevolutionBody:
    def __init__(self, name, R, ell=0.0, rho_plus=0.0, rho_minus=0.0,
                 hbar=None, hbar_d1=None, hbar_d2=None, params=None):
        if ell < 0.0:
            raise ValueError("segment length must be non-negative")
        self.name = name
        self.R = R
        self.ell = float(ell)
        self.rho_plus = float(rho_plus)
        self.rho_minus = float(rho_minus)
        self.hbar = hbar
        self.hbar_d1 = hbar_d1
        self.hbar_d2 = hbar_d2
        self.params = dict(params or {})

    def is_smooth(self):
        return self.hbar_d2 is not None and self.ell == 0.0

    def __repr__(self):
        ps = ", ".join("%s=%.4g" % kv for kv in sorted(self.params.items()))
        return "%s(%s)" % (self.name, ps)


# ---------------------------------------------------------------------------
# catalog


def ball():
    def fn(ts):
        ts = np.asarray(ts, dtype=float)
        return np.sqrt(np.maximum(1.0 - ts * ts, 0.0))

    def dfn(ts):
        ts = np.asarray(ts, dtype=float)
        return -ts / np.sqrt(np.maximum(1.0 - ts * ts, 1e-300))

    R = bv0.from_smooth(fn, dfn, d2_at_zero=-1.0, alpha=(-0.5, -0.5),
                        support=(-1.0, 1.0), label="ball")
    return RevolutionBody("ball", R,
                          hbar=lambda ts: np.ones_like(np.asarray(ts, dtype=float)),
                          hbar_d1=lambda ts: np.zeros_like(np.asarray(ts, dtype=float)),
                          hbar_d2=lambda ts: np.zeros_like(np.asarray(ts, dtype=float)))


def disk(rho=1.0):
    if rho <= 0.0:
        raise ValueError("disk radius must be positive")
    R = bv0.constant(rho)
    sq = lambda ts: np.sqrt(np.maximum(1.0 - np.asarray(ts, dtype=float) ** 2, 0.0))
    return RevolutionBody(
        "disk", R, rho_plus=rho, rho_minus=rho,
        hbar=lambda ts, _r=rho: _r * sq(ts),
        hbar_d1=lambda ts, _r=rho: -_r * np.asarray(ts, dtype=float)
            / np.sqrt(np.maximum(1.0 - np.asarray(ts, dtype=float) ** 2, 1e-300)),
        hbar_d2=lambda ts, _r=rho: -_r
            * np.maximum(1.0 - np.asarray(ts, dtype=float) ** 2, 1e-300) ** -1.5,
        params={"rho": rho})


def cone(s):
    """Cone over the unit disk with apex (sqrt(1-s^2)/s) e_n; profile drops at s."""
    if not 0.0 < s < 1.0:
        raise ValueError("cone parameter must lie in (0,1)")
    R = bv0.indicator(-1.0, s)
    slope = math.sqrt(1.0 - s * s) / s

    def hbar(ts, _s=s, _m=slope):
        ts = np.asarray(ts, dtype=float)
        return np.where(ts <= _s,
                        np.sqrt(np.maximum(1.0 - ts * ts, 0.0)), _m * ts)

    return RevolutionBody("cone", R, rho_plus=0.0, rho_minus=1.0, hbar=hbar,
                          params={"s": s})


def cylinder(rho=1.0, ell=1.0):
    if rho <= 0.0 or ell <= 0.0:
        raise ValueError("cylinder needs positive radius and height")
    R = bv0.constant(rho)
    def hbar(ts, _r=rho, _l=ell):
        ts = np.asarray(ts, dtype=float)
        return _r * np.sqrt(np.maximum(1.0 - ts * ts, 0.0)) + _l * np.maximum(ts, 0.0)
    return RevolutionBody("cylinder", R, ell=ell, rho_plus=rho, rho_minus=rho,
                          hbar=hbar, params={"rho": rho, "ell": ell})


def spheroid(a=1.0, b=1.0):
    """Ellipsoid of revolution: equatorial radius a, polar semi-axis b."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("spheroid semi-axes must be positive")
    d = b * b - a * a

    def h(ts):
        ts = np.asarray(ts, dtype=float)
        return np.sqrt(a * a + d * ts * ts)

    def h1(ts):
        ts = np.asarray(ts, dtype=float)
        return d * ts / h(ts)

    def h2(ts):
        return d * a * a / h(ts) ** 3

    def fn(ts):
        ts = np.asarray(ts, dtype=float)
        return a * a * np.sqrt(np.maximum(1.0 - ts * ts, 0.0)) / h(ts)

    def dfn(ts):
        ts = np.asarray(ts, dtype=float)
        s2 = np.maximum(1.0 - ts * ts, 1e-300)
        return -a * a * ts * (1.0 / (np.sqrt(s2) * h(ts))
                              + np.sqrt(s2) * d / h(ts) ** 3)

    R = bv0.from_smooth(fn, dfn, d2_at_zero=-b * b / a,
                        alpha=(-0.5, -0.5), support=(-1.0, 1.0), label="spheroid")
    return RevolutionBody("spheroid", R, hbar=h, hbar_d1=h1, hbar_d2=h2,
                          params={"a": a, "b": b})


def cone_segment(s, ell=1.0):
    """Cone as in :func:`cone` plus a vertical segment of length ell."""
    base = cone(s)
    def hbar(ts, _h=base.hbar, _l=ell):
        ts = np.asarray(ts, dtype=float)
        return _h(ts) + _l * np.maximum(ts, 0.0)
    return RevolutionBody("cone+segment", base.R, ell=ell, rho_plus=0.0,
                          rho_minus=1.0, hbar=hbar, params={"s": s, "ell": ell})


CATALOG = {
    "ball": ball,
    "disk": disk,
    "cone": cone,
    "cylinder": cylinder,
    "spheroid": spheroid,
    "cone+segment": cone_segment,
}


# ---------------------------------------------------------------------------
# profile <-> support


def support_from_profile(R, ell=0.0, z0=0.0):
    """Support function values hbar(t) of the body with profile R and segment ell.

    The meridian anchor is z(0) = z0.  Returns a vectorized callable; jumps of
    R at atoms of nu cancel against the anchor curve, so the result is
    continuous on [-1,1].
    """
    zfun = Cumulative(R.nu, smooth_weight=True,
                      weight=lambda s: np.sqrt(np.maximum(1.0 - np.asarray(s, dtype=float) ** 2, 0.0)))

    def hbar(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty_like(ts)
        for idx, t in enumerate(ts):
            z = z0 + zfun(float(t))
            out[idx] = (t * z
                        + math.sqrt(max(1.0 - t * t, 0.0)) * R.value_x(float(t))
                        + ell * max(t, 0.0))
        return out if out.size > 1 else float(out[0])

    return hbar


def _d_plus(h, t, step=_FD_STEP):
    return (-3.0 * _f(h, t) + 4.0 * _f(h, t + step) - _f(h, t + 2 * step)) / (2 * step)


def _d_minus(h, t, step=_FD_STEP):
    return -(-3.0 * _f(h, t) + 4.0 * _f(h, t - step) - _f(h, t - 2 * step)) / (2 * step)


def _f(h, t):
    return float(h(np.asarray([t], dtype=float))[0]) if _is_vec(h) else float(h(t))


def _is_vec(h):
    return True  # all catalog/support callables accept arrays


def profile_from_support(hbar, kinks=(), alpha=(0.0, 0.0), tol=1e-8):
    """Recover (R, ell) from support values; `kinks` lists known non-smooth t.

    Raises NotConvex when a fitted atom mass or density value is negative
    beyond tolerance.
    """
    kinks = sorted(k for k in kinks if k != 0.0)
    special = sorted(set(kinks) | {-1.0, 0.0, 1.0})

    def Rplus(t):
        return math.sqrt(max(1.0 - t * t, 0.0)) * (_f(hbar, t) - t * _d_plus(hbar, t))

    def Rminus(t):
        return math.sqrt(max(1.0 - t * t, 0.0)) * (_f(hbar, t) - t * _d_minus(hbar, t))

    ell = _d_plus(hbar, 0.0) - _d_minus(hbar, 0.0)
    if ell < -tol:
        raise NotConvex("negative fitted segment length %.3g" % ell)
    ell = max(ell, 0.0)

    atoms = []
    for t0 in kinks:
        m = (Rminus(t0) - Rplus(t0)) / t0
        if m < -tol:
            raise NotConvex("negative fitted atom %.3g at t=%.6g" % (m, t0))
        if abs(m) > tol:
            atoms.append((t0, m))

    def rho(ts):
        # -R'(s)/s rewritten as A1/sqrt(1-t^2) + sqrt(1-t^2) h''; stencils
        # are kept strictly between the nearest special points
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty_like(ts)
        for idx, t in enumerate(ts):
            above = min((k for k in special if k > t), default=1.0)
            below = max((k for k in special if k < t), default=-1.0)
            d = min(_FD_STEP2, (above - below) / 8.0)
            if t - 1.5 * d > below and t + 1.5 * d < above:
                h2 = (_f(hbar, t + d) - 2 * _f(hbar, t) + _f(hbar, t - d)) / d ** 2
                d1 = (_f(hbar, t + d) - _f(hbar, t - d)) / (2 * d)
            elif t + 3.5 * d < above:
                h2 = (2 * _f(hbar, t) - 5 * _f(hbar, t + d)
                      + 4 * _f(hbar, t + 2 * d) - _f(hbar, t + 3 * d)) / d ** 2
                d1 = _d_plus(hbar, t, d)
            else:
                h2 = (2 * _f(hbar, t) - 5 * _f(hbar, t - d)
                      + 4 * _f(hbar, t - 2 * d) - _f(hbar, t - 3 * d)) / d ** 2
                d1 = _d_minus(hbar, t, d)
            s2 = max(1.0 - t * t, 1e-12)
            a1 = _f(hbar, t) - t * d1
            out[idx] = a1 / math.sqrt(s2) + math.sqrt(s2) * h2
        return out if out.size > 1 else float(out[0])

    samples = np.linspace(-0.97, 0.97, 97)
    vals = rho(samples)
    if float(np.min(vals)) < -1e-6:
        raise NotConvex("negative fitted profile density")

    nu = ZonalMeasure(atoms, [Piece(-1.0, 1.0, rho, alpha[0], alpha[1])])

    def fn(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.array([Rplus(float(t)) if t >= 0 else Rminus(float(t))
                        for t in ts])
        return out if out.size > 1 else float(out[0])

    base = _f(hbar, 0.0)
    return BV0Function(nu, base, fn=fn, support=None), ell


def positivity_interval(R, eps=1e-13, tol=1e-12):
    """Largest interval (a-, a+) around 0 on which R stays above eps, by bisection."""
    def edge(sign):
        lo, hi = 0.0, 1.0
        if R.value_x(sign * (1.0 - 1e-9)) > eps:
            return sign * 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if R.value_x(sign * mid) > eps:
                lo = mid
            else:
                hi = mid
        return sign * 0.5 * (lo + hi)
    return edge(-1.0), edge(+1.0)


# ---------------------------------------------------------------------------
# reference families


class FamilyData:
    """Precomputed data for a reference family of bodies of revolution."""

    def __init__(self, bodies):
        if not bodies:
            raise ValueError("family must contain at least one body")
        self.bodies = tuple(bodies)
        j = len(bodies)
        R = bodies[0].R
        for b in bodies[1:]:
            R = R.product(b.R)
        self.R = R
        r0 = [b.R.base for b in bodies]
        w = 0.0
        for k, b in enumerate(bodies):
            prod = 1.0
            for m, r in enumerate(r0):
                if m != k:
                    prod *= r
            w += b.ell * prod
        self.W = omega(j) / j * w
        self.c_hat = j * self.W / (2.0 * omega(j))   # = W / (2 kappa_j)
        if R.support is not None:
            self.interval = (max(R.support[0], -1.0), min(R.support[1], 1.0))
        else:
            self.interval = positivity_interval(R)
        self.pole_plus = 1.0
        self.pole_minus = 1.0
        for b in bodies:
            self.pole_plus *= b.rho_plus
            self.pole_minus *= b.rho_minus

    def __len__(self):
        return len(self.bodies)

    def __repr__(self):
        return "FamilyData(%s)" % ", ".join(b.name for b in self.bodies)


def unit_balls(j):
    return FamilyData([ball() for _ in range(j)])


def unit_disks(j):
    return FamilyData([disk(1.0) for _ in range(j)])


# ---------------------------------------------------------------------------
# pushforwards of mixed area measures


def _pow0(x, k):
    # x**k with the 0**0 == 1 convention used by polarized products
    return 1.0 if k == 0 else x ** k


def mixed_area_pushforward(body, i, family, n):
    """Pushforward to [-1,1] of the mixed area measure of (body^[i], family).

    The family must contain n-1-i bodies.  Result: the measure
    kappa_{n-1} nu_{R_K^i R_C} away from 0, an equator atom carrying the
    polarized segment terms, and pole atoms from the flat faces.
    """
    j = len(family)
    if j != n - 1 - i:
        raise ValueError("family size %d does not match n-1-i = %d" % (j, n - 1 - i))
    if not 1 <= i < n - 1:
        raise ValueError("need 1 <= i < n-1")
    kn = kappa(n - 1)
    prod = body.R.power(i).product(family.R)
    mu = prod.nu * kn
    r0 = body.R.base
    w_eq = kn * (j / omega(j) * _pow0(r0, i) * family.W
                 + i * body.ell * _pow0(r0, i - 1) * family.R.base)
    atoms = [(0.0, w_eq)]
    atoms.append((1.0, kn * _pow0(body.rho_plus, i) * family.pole_plus))
    atoms.append((-1.0, kn * _pow0(body.rho_minus, i) * family.pole_minus))
    return mu + ZonalMeasure(atoms)


def disk_mixed_pushforward(body, i, n):
    """Pushforward of the mixed area measure with n-1-i unit-disk references.

    Valid for 1 <= i <= n-1; with i = n-1 this is the plain surface area
    measure of the body (no reference factors left).
    """
    if not 1 <= i <= n - 1:
        raise ValueError("need 1 <= i <= n-1")
    kn = kappa(n - 1)
    mu = body.R.power(i).nu * kn
    r0 = body.R.base
    atoms = [(0.0, i * kn * _pow0(r0, i - 1) * body.ell),
             (1.0, kn * _pow0(body.rho_plus, i)),
             (-1.0, kn * _pow0(body.rho_minus, i))]
    return mu + ZonalMeasure(atoms)


def smooth_density_oracle(bodies, n):
    """Density of the area-measure pushforward for n-1 smooth bodies.

    Independent reference formula: with A1 = hbar - t hbar' and
    A2 = (1-t^2) hbar'' + A1 per body,

        density(t) = (omega_{n-1}/(n-1)) (1-t^2)^{(n-3)/2}
                     * sum_j A2_j(t) prod_{k != j} A1_k(t).
    """
    if len(bodies) != n - 1:
        raise ValueError("need n-1 bodies")
    for b in bodies:
        if not b.is_smooth():
            raise ValueError("oracle requires smooth bodies")

    def dens(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        a1 = []
        a2 = []
        for b in bodies:
            h, h1, h2 = b.hbar(ts), b.hbar_d1(ts), b.hbar_d2(ts)
            a1.append(h - ts * h1)
            a2.append((1.0 - ts * ts) * h2 + (h - ts * h1))
        total = np.zeros_like(ts)
        for jj in range(len(bodies)):
            term = a2[jj].copy()
            for kk in range(len(bodies)):
                if kk != jj:
                    term = term * a1[kk]
            total += term
        out = (omega(n - 1) / (n - 1)
               * np.maximum(1.0 - ts * ts, 0.0) ** ((n - 3) / 2.0) * total)
        return out if out.size > 1 else float(out[0])

    return dens
