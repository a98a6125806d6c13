"""Signed measures on [-1,1] stored as point atoms plus piecewise densities.

Densities carry declared endpoint exponents: a piece on (a, b) with
``alpha_a`` behaves like ``C*(t-a)**alpha_a`` near ``a`` (mirrored at ``b``).
Quadrature substitutes ``t = a + u**2`` at singular ends, which turns any
half-integer exponent ``alpha >= -1/2`` into a smooth integrand.  Ends with
``alpha <= -1`` are integrated by dyadic refinement toward the endpoint and
raise :class:`~revgeom.errors.NonIntegrable` when the increments do not decay.

Atoms are exact bookkeeping data; they are never detected numerically.
"""

import bisect
import math

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy import integrate as _sint

from .errors import NonIntegrable

REL_TOL = 1e-10
_ABS_FLOOR = 1e-14
_DYADIC_LEVELS = 48
_MAX_DEPTH = 13

_GL_CACHE = {}


def _leggauss(m):
    try:
        return _GL_CACHE[m]
    except KeyError:
        xw = np.polynomial.legendre.leggauss(m)
        _GL_CACHE[m] = xw
        return xw


def _evalv(fn, xs):
    """Evaluate fn on a 1d array, falling back to a scalar loop."""
    try:
        out = np.asarray(fn(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except Exception:
        pass
    return np.array([float(fn(float(x))) for x in xs])


def _gl_estimates(fn, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x1, w1 = _leggauss(16)
    x2, w2 = _leggauss(32)
    f2 = _evalv(fn, mid + half * x2)
    f1 = _evalv(fn, mid + half * x1)
    return half * float(w1 @ f1), half * float(w2 @ f2)


def _adaptive(fn, a, b, tol_abs, depth=0):
    if b <= a:
        return 0.0
    coarse, fine = _gl_estimates(fn, a, b)
    err = abs(fine - coarse)
    if err <= max(tol_abs, 1e-15 * abs(fine)) or depth >= _MAX_DEPTH:
        return fine
    mid = 0.5 * (a + b)
    return (_adaptive(fn, a, mid, 0.5 * tol_abs, depth + 1)
            + _adaptive(fn, mid, b, 0.5 * tol_abs, depth + 1))


def _integrate_smooth(fn, a, b, tol_rel):
    if b <= a:
        return 0.0
    _, rough = _gl_estimates(fn, a, b)
    tol_abs = max(_ABS_FLOOR, tol_rel * abs(rough))
    return _adaptive(fn, a, b, tol_abs)


def _integrate_sub(fn, end, other, alpha, tol_rel):
    """Integral of fn from the singular end toward `other`, -1 < alpha."""
    width = abs(other - end)
    if width <= 0.0:
        return 0.0
    sgn = 1.0 if other > end else -1.0

    def g(us):
        us = np.asarray(us, dtype=float)
        ts = end + sgn * us * us
        return 2.0 * us * _evalv(fn, ts)

    umax = math.sqrt(width)
    # below u_lo the shift u^2 drops out of `end` in floating point and fn
    # would be evaluated on its singularity; close the gap with the local
    # power-law model g ~ c u^(2 alpha + 1) sampled at a representable point
    u_lo = 1e-7
    g_ref = float(g(np.array([u_lo]))[0])
    patch_top = min(u_lo, umax)
    patch = g_ref * patch_top ** (2.0 * alpha + 2.0) / (
        (2.0 * alpha + 2.0) * u_lo ** (2.0 * alpha + 1.0))
    if umax <= u_lo:
        return patch
    if alpha >= -0.5:
        return patch + _integrate_smooth(g, u_lo, umax, tol_rel)
    # integrand still has u**(2*alpha+1) with exponent in (-1, 0); QAGS
    val, _ = _sint.quad(lambda u: float(g(np.array([u]))[0]), u_lo, umax,
                        epsabs=_ABS_FLOOR, epsrel=max(tol_rel, 1e-12), limit=200)
    return patch + val


def _integrate_dyadic(fn, end, other, tol_rel):
    """Integral from a declared non-integrable end; diverging tails raise."""
    width = abs(other - end)
    sgn = 1.0 if other > end else -1.0
    acc = 0.0
    prev = None
    grow = 0
    for k in range(_DYADIC_LEVELS):
        far = end + sgn * width * 0.5 ** k
        near = end + sgn * width * 0.5 ** (k + 1)
        lo, hi = (near, far) if sgn > 0 else (far, near)
        inc = _integrate_smooth(fn, lo, hi, tol_rel)
        acc += inc
        floor = max(1e-13, tol_rel * abs(acc))
        if prev is not None:
            if abs(inc) <= floor and abs(prev) <= floor:
                return acc
            grow = grow + 1 if abs(inc) >= 0.98 * abs(prev) and abs(inc) > floor else 0
            if grow >= 4:
                raise NonIntegrable(
                    "integral does not converge at endpoint %.6g" % end)
        prev = inc
    if abs(prev) > max(1e-11, 100.0 * tol_rel * abs(acc)):
        raise NonIntegrable("integral does not converge at endpoint %.6g" % end)
    return acc


class Piece:
    """Density ``rho`` on the open interval (a, b) with declared endpoint exponents."""

    __slots__ = ("a", "b", "rho", "alpha_a", "alpha_b")

    def __init__(self, a, b, rho, alpha_a=0.0, alpha_b=0.0):
        if not (-1.0 <= a < b <= 1.0):
            raise ValueError("piece interval must satisfy -1 <= a < b <= 1")
        self.a = float(a)
        self.b = float(b)
        self.rho = rho
        self.alpha_a = float(alpha_a)
        self.alpha_b = float(alpha_b)

    def clipped(self, lo, hi):
        """Restriction to (lo, hi); interior cuts get exponent 0."""
        lo = max(self.a, lo)
        hi = min(self.b, hi)
        if hi <= lo:
            return None
        aa = self.alpha_a if lo == self.a else 0.0
        ab = self.alpha_b if hi == self.b else 0.0
        return Piece(lo, hi, self.rho, aa, ab)

    def integrate(self, f, tol_rel=REL_TOL):
        rho = self.rho
        if f is None:
            fn = rho
        else:
            def fn(ts):
                ts = np.asarray(ts, dtype=float)
                return _evalv(f, ts) * _evalv(rho, ts)
        mid = 0.5 * (self.a + self.b)
        if mid <= self.a or mid >= self.b:
            # interval too narrow to split; hand the whole of it to the
            # endpoint handler of the more singular side
            end, other, alpha = self.b, self.a, self.alpha_b
            if self.alpha_a < self.alpha_b:
                end, other, alpha = self.a, self.b, self.alpha_a
            if alpha > -1.0:
                return _integrate_sub(fn, end, other, alpha, tol_rel)
            return _integrate_dyadic(fn, end, other, tol_rel)
        out = 0.0
        for end, other, alpha in ((self.a, mid, self.alpha_a),
                                  (self.b, mid, self.alpha_b)):
            if alpha == 0.0:
                lo, hi = (end, other) if end < other else (other, end)
                out += _integrate_smooth(fn, lo, hi, tol_rel)
            elif alpha > -1.0:
                out += _integrate_sub(fn, end, other, alpha, tol_rel)
            else:
                out += _integrate_dyadic(fn, end, other, tol_rel)
        return out

    def __repr__(self):
        return "Piece(%.6g, %.6g, alpha=(%g, %g))" % (
            self.a, self.b, self.alpha_a, self.alpha_b)


def _merge_atoms(atoms):
    acc = {}
    for t, m in atoms:
        t = float(t)
        if not -1.0 <= t <= 1.0:
            raise ValueError("atom location outside [-1,1]: %r" % t)
        acc[t] = acc.get(t, 0.0) + float(m)
    return tuple(sorted((t, m) for t, m in acc.items() if m != 0.0))


class ZonalMeasure:
    """Finite signed measure on [-1,1]: atoms plus piecewise densities.

    Parameters
    ----------
    atoms : sequence of (t, mass)
        Point masses; duplicates are merged, exact zeros dropped.
    pieces : sequence of Piece
        Disjoint density pieces (they may share endpoints).

    Instances are treated as immutable; all operations return new measures.
    """

    def __init__(self, atoms=(), pieces=()):
        self.atoms = _merge_atoms(atoms)
        pieces = sorted(pieces, key=lambda p: p.a)
        for p, q in zip(pieces, pieces[1:]):
            if q.a < p.b - 1e-15:
                raise ValueError("overlapping pieces %r and %r" % (p, q))
        self.pieces = tuple(pieces)
        self._atom_ts = [t for t, _ in self.atoms]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def delta(t, mass=1.0):
        return ZonalMeasure(atoms=[(t, mass)])

    @staticmethod
    def zero():
        return ZonalMeasure()

    @staticmethod
    def from_density(rho, a=-1.0, b=1.0, alpha_a=0.0, alpha_b=0.0):
        return ZonalMeasure(pieces=[Piece(a, b, rho, alpha_a, alpha_b)])

    # -- basic queries -----------------------------------------------------

    def atom_mass(self, t):
        i = bisect.bisect_left(self._atom_ts, t)
        if i < len(self.atoms) and self._atom_ts[i] == t:
            return self.atoms[i][1]
        return 0.0

    def is_zero(self):
        return not self.atoms and not self.pieces

    def density(self, t):
        """Pointwise density at t (0 off the pieces; atoms not included)."""
        out = 0.0
        for p in self.pieces:
            if p.a < t < p.b:
                out += float(p.rho(t))
        return out

    def breakpoints(self):
        pts = set()
        for p in self.pieces:
            pts.add(p.a)
            pts.add(p.b)
        pts.update(self._atom_ts)
        return sorted(pts)

    def support_bounds(self):
        """(lo, hi) hull of atoms and pieces; (0.0, 0.0) for the zero measure."""
        lo, hi = math.inf, -math.inf
        for p in self.pieces:
            lo, hi = min(lo, p.a), max(hi, p.b)
        for t, _ in self.atoms:
            lo, hi = min(lo, t), max(hi, t)
        if lo > hi:
            return 0.0, 0.0
        return lo, hi

    # -- integration -------------------------------------------------------

    def integrate(self, f=None, tol=REL_TOL):
        """Integral of f against the measure (f=None integrates 1).

        Parameters
        ----------
        f : callable or None
            Integrand; may accept numpy arrays (scalar fallback otherwise).
        tol : float
            Relative quadrature tolerance per piece.

        Raises
        ------
        NonIntegrable
            If a piece with a declared exponent <= -1 actually diverges
            against f.
        """
        out = 0.0
        for p in self.pieces:
            out += p.integrate(f, tol)
        for t, m in self.atoms:
            out += m if f is None else float(f(t)) * m
        return out

    def total(self, tol=REL_TOL):
        return self.integrate(None, tol)

    def first_moment(self, tol=REL_TOL):
        return self.integrate(lambda s: s, tol)

    def pos_first_moment(self, tol=REL_TOL):
        """Integral of max(s, 0)."""
        return self.restrict(0.0, 1.0, closed_lo=False).first_moment(tol)

    def abs_moment(self, tol=REL_TOL):
        return self.integrate(np.abs, tol)

    def cap_mass(self, t, pole=1, tol=REL_TOL):
        """Mass of the closed polar cap {s : pole*s >= t}."""
        if pole not in (1, -1):
            raise ValueError("pole must be +1 or -1")
        if pole == 1:
            return self.restrict(t, 1.0).total(tol)
        return self.restrict(-1.0, -t).total(tol)

    # -- restriction and algebra -------------------------------------------

    def restrict(self, lo, hi, closed_lo=True, closed_hi=True):
        atoms = []
        for t, m in self.atoms:
            ok_lo = t > lo or (closed_lo and t == lo)
            ok_hi = t < hi or (closed_hi and t == hi)
            if ok_lo and ok_hi:
                atoms.append((t, m))
        pieces = []
        for p in self.pieces:
            q = p.clipped(lo, hi)
            if q is not None:
                pieces.append(q)
        return ZonalMeasure(atoms, pieces)

    def split_at(self, points):
        """Same measure with pieces split at the given interior points."""
        pieces = []
        for p in self.pieces:
            cuts = sorted({x for x in points if p.a < x < p.b})
            lo, aa = p.a, p.alpha_a
            for c in cuts:
                pieces.append(Piece(lo, c, p.rho, aa, 0.0))
                lo, aa = c, 0.0
            pieces.append(Piece(lo, p.b, p.rho, aa, p.alpha_b))
        return ZonalMeasure(self.atoms, pieces)

    def __add__(self, other):
        if not isinstance(other, ZonalMeasure):
            return NotImplemented
        cuts = set(self.breakpoints()) | set(other.breakpoints())
        a = self.split_at(cuts)
        b = other.split_at(cuts)
        merged = {}
        for p in a.pieces + b.pieces:
            merged.setdefault((p.a, p.b), []).append(p)
        pieces = []
        for (lo, hi), ps in sorted(merged.items()):
            if len(ps) == 1:
                pieces.append(ps[0])
            else:
                fns = [p.rho for p in ps]
                def rho(ts, _fns=tuple(fns)):
                    ts = np.asarray(ts, dtype=float)
                    return sum(_evalv(g, ts) for g in _fns)
                aa = min(p.alpha_a for p in ps)
                ab = min(p.alpha_b for p in ps)
                pieces.append(Piece(lo, hi, rho, aa, ab))
        return ZonalMeasure(self.atoms + other.atoms, pieces)

    def __mul__(self, c):
        c = float(c)
        if c == 0.0:
            return ZonalMeasure()
        atoms = [(t, c * m) for t, m in self.atoms]
        pieces = []
        for p in self.pieces:
            def rho(ts, _r=p.rho, _c=c):
                return _c * np.asarray(_evalv(_r, np.asarray(ts, dtype=float)))
            pieces.append(Piece(p.a, p.b, rho, p.alpha_a, p.alpha_b))
        return ZonalMeasure(atoms, pieces)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def mapped(self, phi, phi_inv, slope):
        """Pushforward under a strictly increasing piecewise-linear map phi.

        ``slope(t)`` is phi'(t) on the source pieces; an atom at t moves to
        phi(t) with unchanged mass, a density transforms as
        rho_new(x) = rho(phi_inv(x)) / slope(phi_inv(x)).
        """
        atoms = [(phi(t), m) for t, m in self.atoms]
        pieces = []
        for p in self.pieces:
            def rho(xs, _r=p.rho):
                xs = np.asarray(xs, dtype=float)
                ts = np.asarray([phi_inv(float(x)) for x in xs])
                return _evalv(_r, ts) / np.asarray([slope(float(t)) for t in ts])
            pieces.append(Piece(phi(p.a), phi(p.b), rho, p.alpha_a, p.alpha_b))
        return ZonalMeasure(atoms, pieces)

    def min_density_on_grid(self, m=512):
        """Smallest sampled density value (sign check helper)."""
        worst = math.inf
        for p in self.pieces:
            ts = np.linspace(p.a, p.b, m + 2)[1:-1]
            vals = _evalv(p.rho, ts)
            worst = min(worst, float(np.min(vals)))
        return 0.0 if worst is math.inf else worst

    def __repr__(self):
        return "ZonalMeasure(atoms=%r, pieces=%r)" % (list(self.atoms),
                                                      list(self.pieces))


class Cumulative:
    """Cached evaluator of the signed running integral of ``w`` against a measure.

    The convention matches the calculus used throughout the package::

        C(t) =  integral over (0, t]  of w dmu      for t >= 0,
        C(t) = -integral over [t, 0)  of w dmu      for t < 0.

    Prefix values at piece breakpoints and atom positions are computed once;
    within a segment only a short local quadrature remains.
    """

    def __init__(self, measure, weight=None, tol=REL_TOL, smooth_weight=False):
        self.mu = measure
        self.w = weight
        self.tol = tol
        self.smooth_weight = smooth_weight or weight is None
        bps = set(measure.breakpoints()) | {0.0}
        self._bp_pos = sorted(x for x in bps if x > 0.0)
        self._bp_neg = sorted((x for x in bps if x < 0.0), reverse=True)
        self._prefix_pos = {}
        self._prefix_neg = {}
        # every evaluated point becomes an anchor, so sweeps towards a
        # singular end only ever integrate the short remaining gap
        self._anchor_pos = {}
        self._anchor_neg = {}
        self._akey_pos = []
        self._akey_neg = []
        self._anti = {}

    def _watom(self, t, m):
        return m if self.w is None else float(self.w(t)) * m

    _ZONE = 1e-6
    _ANTI_DEG = 140

    def _density_between(self, lo, hi):
        out = 0.0
        for p in self.mu.pieces:
            out += self._piece_part(p, lo, hi)
        return out

    def _anti_model(self, p):
        """Antiderivative of w*rho over p as a Chebyshev series in sine-mapped
        coordinates, where half-integer endpoint exponents become analytic.

        Built once per piece and validated against the adaptive integrator;
        None when the weight is not declared smooth or validation fails.
        """
        key = id(p)
        if key in self._anti:
            return self._anti[key]
        model = None
        if (self.smooth_weight and p.b - p.a > 1e-9
                and min(p.alpha_a, p.alpha_b) > -1.0):
            c, h = 0.5 * (p.a + p.b), 0.5 * (p.b - p.a)
            deg = self._ANTI_DEG
            xi = np.cos(np.pi * (2.0 * np.arange(deg + 1) + 1.0)
                        / (2.0 * deg + 2.0))
            th = 0.5 * np.pi * xi
            ts = c + h * np.sin(th)
            vals = _evalv(p.rho, ts) * (0.5 * np.pi * h * np.cos(th))
            if self.w is not None:
                vals = vals * _evalv(self.w, ts)
            if np.all(np.isfinite(vals)):
                G = _cheb.chebint(_cheb.chebfit(xi, vals, deg))
                full = float(_cheb.chebval(1.0, G) - _cheb.chebval(-1.0, G))
                try:
                    ref = p.integrate(self.w, self.tol)
                except NonIntegrable:
                    ref = math.inf
                if abs(full - ref) <= 1e-9 * max(1.0, abs(ref)):
                    model = (c, h, G)
        self._anti[key] = model
        return model

    def _piece_part(self, p, lo, hi):
        """Integral of w against p over (lo, hi), stable near singular ends.

        Without an antiderivative model, a cut landing within `_ZONE` of a
        singular original endpoint is integrated as a tail difference, so the
        endpoint exponent is never lost to an interior cut with huge
        gradients next to it.
        """
        qa, qb = max(p.a, lo), min(p.b, hi)
        if qb <= qa:
            return 0.0
        model = self._anti_model(p)
        if model is not None:
            c, h, G = model
            xa = (2.0 / np.pi) * math.asin(min(1.0, max(-1.0, (qa - c) / h)))
            xb = (2.0 / np.pi) * math.asin(min(1.0, max(-1.0, (qb - c) / h)))
            return float(_cheb.chebval(xb, G) - _cheb.chebval(xa, G))
        q = p.clipped(lo, hi)
        if q is None:
            return 0.0
        out = 0.0
        a_, b_ = q.a, q.b
        if p.alpha_b != 0.0 and b_ < p.b and (p.b - b_) < self._ZONE:
            out -= Piece(b_, p.b, p.rho, 0.0, p.alpha_b).integrate(self.w, self.tol)
            b_ = p.b
        if p.alpha_a != 0.0 and a_ > p.a and (a_ - p.a) < self._ZONE:
            out -= Piece(p.a, a_, p.rho, p.alpha_a, 0.0).integrate(self.w, self.tol)
            a_ = p.a
        aa = p.alpha_a if a_ == p.a else 0.0
        ab = p.alpha_b if b_ == p.b else 0.0
        out += Piece(a_, b_, p.rho, aa, ab).integrate(self.w, self.tol)
        return out

    def _prefix(self, side, k):
        """Density integral from 0 out to the k-th breakpoint (1-based)."""
        cache = self._prefix_pos if side > 0 else self._prefix_neg
        if k in cache:
            return cache[k]
        bps = self._bp_pos if side > 0 else self._bp_neg
        val = 0.0 if k == 1 else self._prefix(side, k - 1)
        lo = 0.0 if k == 1 else bps[k - 2]
        hi = bps[k - 1]
        if side > 0:
            val += self._density_between(lo, hi)
        else:
            val += self._density_between(hi, lo)
        cache[k] = val
        return cache[k]

    def __call__(self, t):
        t = float(t)
        if t == 0.0:
            return 0.0
        if t > 0.0:
            if t in self._anchor_pos:
                dens = self._anchor_pos[t]
            else:
                k = bisect.bisect_left(self._bp_pos, t)
                dens = self._prefix(1, k) if k >= 1 else 0.0
                lo = self._bp_pos[k - 1] if k >= 1 else 0.0
                j = bisect.bisect_right(self._akey_pos, t) - 1
                if j >= 0 and self._akey_pos[j] > lo:
                    lo = self._akey_pos[j]
                    dens = self._anchor_pos[lo]
                if t > lo:
                    dens += self._density_between(lo, t)
                bisect.insort(self._akey_pos, t)
                self._anchor_pos[t] = dens
            out = dens
            for s, m in self.mu.atoms:
                if 0.0 < s <= t:
                    out += self._watom(s, m)
            return out
        if t in self._anchor_neg:
            dens = self._anchor_neg[t]
        else:
            k = bisect.bisect_left([-x for x in self._bp_neg], -t)
            dens = self._prefix(-1, k) if k >= 1 else 0.0
            hi = self._bp_neg[k - 1] if k >= 1 else 0.0
            j = bisect.bisect_right(self._akey_neg, -t) - 1
            if j >= 0 and -self._akey_neg[j] < hi:
                hi = -self._akey_neg[j]
                dens = self._anchor_neg[hi]
            if t < hi:
                dens += self._density_between(t, hi)
            bisect.insort(self._akey_neg, -t)
            self._anchor_neg[t] = dens
        out = dens
        for s, m in self.mu.atoms:
            if t <= s < 0.0:
                out += self._watom(s, m)
        return -out
