"""Cap-mass estimates, pole density limits, and principal-value valuations."""

import math

import numpy as np

from .bodies import FamilyData, disk_mixed_pushforward, mixed_area_pushforward, unit_balls
from .constants import kappa
from .errors import ExtrapolationFailed, NotInDomain
from .measures import _evalv
from .transform import _geometric_tail, d_membership, t_hat_apply

_LEVELS = 12
_PV_LEVELS = 16


def _family(C):
    return C if isinstance(C, FamilyData) else FamilyData(list(C))


def _pole_limit(R, sign):
    """Inner limit of the profile at sign*1, via the first moment of nu."""
    ident = lambda s: np.asarray(s, dtype=float)
    if sign > 0:
        m = R.nu.restrict(0.0, 1.0, closed_lo=False, closed_hi=False).integrate(ident)
        return R.base - m
    m = R.nu.restrict(-1.0, 0.0, closed_lo=False, closed_hi=False).integrate(ident)
    return R.base + m


def _aitken_pass(s, floor):
    d2 = s[2:] - 2.0 * s[1:-1] + s[:-2]
    out = s[2:].copy()
    mask = np.abs(d2) > floor
    out[mask] -= (s[2:] - s[1:-1])[mask] ** 2 / d2[mask]
    return out


def _refine_limit(seq, monotone=False, rtol=1e-7):
    """Limit of a dyadic refinement sequence.

    Iterated Aitken acceleration first (handles slowly drifting ratios),
    geometric-tail extrapolation as fallback.  With ``monotone`` the
    significant part of the tail must be one-sided (sub-noise sign flips are
    ignored).  Raises ExtrapolationFailed when the sequence neither
    stabilizes nor shows a usable tail.
    """
    s = np.asarray([float(x) for x in seq])
    d = np.diff(s)
    scale = max(1e-300, float(np.max(np.abs(s))))
    if not d.size or np.all(np.abs(d) <= 1e-13 * scale):
        return float(s[-1])
    if monotone:
        sig = d[np.abs(d) > 1e-11 * scale]
        if sig.size and not (np.all(sig > 0.0) or np.all(sig < 0.0)):
            raise ExtrapolationFailed("refinement tail is not monotone")
    a = s
    for _ in range(2):
        if a.size < 4:
            break
        a = _aitken_pass(a, 1e-13 * scale)
    if a.size >= 2 and np.all(np.isfinite(a[-2:])):
        if abs(a[-1] - a[-2]) <= rtol * scale:
            return float(a[-1])
    geo = _geometric_tail(list(s))
    if geo is not None:
        return float(geo)
    if abs(d[-1]) <= rtol * scale:
        return float(s[-1])
    raise ExtrapolationFailed("refinement sequence did not stabilize")


# ---------------------------------------------------------------------------
# cap estimates


class CapCurve:
    """Cap masses of a mixed-measure pushforward next to their upper bound."""

    def __init__(self, grid, measured, bound):
        self.grid = np.asarray(grid, dtype=float)
        self.measured = np.asarray(measured, dtype=float)
        self.bound = np.asarray(bound, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            self.ratio = np.where(self.bound != 0.0,
                                  self.measured / self.bound, np.nan)

    def __len__(self):
        return self.grid.size

    def rows(self):
        return list(zip(self.grid, self.measured, self.bound, self.ratio))


def firey_bound(K, C, i, t, pole=1):
    """Mass of the closed cap {s : pole*s >= t} against its sharp bound.

    Returns (measured, bound) with bound = kappa_{n-1} R_K(0)^i R_C(t)/t,
    R_C taken as the limit from inside the cap line so that references with
    a profile jump at t are still covered.
    """
    fam = _family(C)
    t = float(t)
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if pole not in (1, -1):
        raise ValueError("pole must be +1 or -1")
    n = i + len(fam) + 1
    mu = mixed_area_pushforward(K, i, fam, n)
    measured = mu.cap_mass(t, pole=pole)
    rc = fam.R.value_minus(t) if pole == 1 else fam.R.value_plus(-t)
    bound = kappa(n - 1) * K.R.base ** i * rc / t
    return measured, bound


def firey_curve(K, C, i, grid=None, pole=1):
    """CapCurve of measured cap masses and bounds over a grid of t in (0,1]."""
    fam = _family(C)
    n = i + len(fam) + 1
    if grid is None:
        grid = np.linspace(0.02, 1.0, 50)
    grid = np.asarray(grid, dtype=float)
    mu = mixed_area_pushforward(K, i, fam, n)
    kn = kappa(n - 1) * K.R.base ** i
    measured, bound = [], []
    for t in grid:
        t = float(t)
        measured.append(mu.cap_mass(t, pole=pole))
        rc = fam.R.value_minus(t) if pole == 1 else fam.R.value_plus(-t)
        bound.append(kn * rc / t)
    return CapCurve(grid, measured, bound)


# ---------------------------------------------------------------------------
# density limit at the poles


def density_limit(K, i, n, pole=1, levels=_LEVELS):
    """Limit of the normalized cap density at a pole, with its predicted value.

    Returns (limit_estimate, predicted) where predicted = rho^i
    kappa_{n-1}/kappa_{n-1-i} for the pole face radius rho, and the estimate
    extrapolates cap_mass / (kappa_j (1-t^2)^{j/2}), j = n-1-i, on the dyadic
    mesh t = 1 - 2^-m.
    """
    if K.R.base <= 0.0:
        raise ValueError("K must have a positive waist (not a segment)")
    j = n - 1 - i
    mu = mixed_area_pushforward(K, i, unit_balls(j), n)
    rho = K.rho_plus if pole == 1 else K.rho_minus
    predicted = rho ** i * kappa(n - 1) / kappa(j)
    seq = []
    for m in range(1, levels + 1):
        t = 1.0 - 0.5 ** m
        cap = mu.cap_mass(t, pole=pole)
        seq.append(cap / (kappa(j) * (1.0 - t * t) ** (0.5 * j)))
    return _refine_limit(seq, monotone=True), predicted


# ---------------------------------------------------------------------------
# principal-value valuations


def valuation_pv(f, K, C, n, i, levels=_PV_LEVELS):
    """Valuation value of f at K via the truncation route and the disk route.

    Returns (pv_value, disk_value).  The truncations cut caps of dyadic width
    around any end of the positivity interval where the reference profile
    does not stay positive; a boundary atom sitting exactly at a cut end is
    kept with the linearly-extended weight f(cut) * a / cut, matching the
    cut-and-extend functional whose limit the disk route computes.  The two
    values agree up to quadrature error.
    """
    fam = _family(C)
    if len(fam) != n - 1 - i:
        raise ValueError("family size %d does not match n-1-i = %d"
                         % (len(fam), n - 1 - i))
    dm = d_membership(fam.R, f)
    if dm["member"] is not True:
        raise NotInDomain("endpoint-limit conditions fail: %r" % (dm["ends"],))

    g = t_hat_apply(fam, f)
    disk_value = disk_mixed_pushforward(K, i, n).integrate(g)

    mu = mixed_area_pushforward(K, i, fam, n)
    am, ap = fam.interval
    floor = 1e-8 * max(fam.R.base, 1.0)
    cut_minus = not (am == -1.0 and _pole_limit(fam.R, -1) > floor)
    cut_plus = not (ap == 1.0 and _pole_limit(fam.R, +1) > floor)
    if not (cut_minus or cut_plus):
        return mu.integrate(f), disk_value

    atom_p = mu.atom_mass(ap) if cut_plus else 0.0
    atom_m = mu.atom_mass(am) if cut_minus else 0.0
    seq = []
    for m in range(1, levels + 1):
        eps = 0.5 ** m
        lo = am + eps if cut_minus else -1.0
        hi = ap - eps if cut_plus else 1.0
        if lo >= hi:
            continue
        part = mu.restrict(lo, hi, closed_lo=not cut_minus,
                           closed_hi=not cut_plus)
        val = part.integrate(f)
        if atom_p != 0.0:
            val += float(f(hi)) * (ap / hi) * atom_p
        if atom_m != 0.0:
            val += float(f(lo)) * (am / lo) * atom_m
        seq.append(val)
    return _refine_limit(seq), disk_value


def cone_valuation_exact(gbar, s, n):
    """Closed form of the disk-route valuation for the cone with drop at s."""
    return kappa(n - 1) * (float(gbar(-math.copysign(1.0, s)))
                           + float(gbar(s)) / abs(s))


# ---------------------------------------------------------------------------
# support of the induced valuation


def support_check(g, interval, tol=1e-10, m=641):
    """True iff g extends zonal-linearly outside the interval.

    Outside each end a of the interval the comparison line is t * g(a)/a,
    the unique linear zonal function matching g at that end.
    """
    a, b = float(interval[0]), float(interval[1])
    if not -1.0 <= a < b <= 1.0:
        raise ValueError("need -1 <= a < b <= 1")
    for end, lo, hi in ((a, -1.0, a), (b, b, 1.0)):
        if hi - lo <= 1e-12:
            continue
        if end == 0.0:
            raise ValueError("interval ends at 0; the linear extension is "
                             "not determined by the endpoint value")
        slope = float(g(end)) / end
        ts = np.linspace(lo, hi, m)
        vals = np.asarray(_evalv(g, ts), dtype=float)
        if float(np.max(np.abs(vals - slope * ts))) > tol:
            return False
    return True
