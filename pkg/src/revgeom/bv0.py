"""Calculus for functions of bounded variation normalized at 0.

A function R in this class is determined by its value at 0 and a finite
signed measure ``nu`` on (-1,1) without an atom at 0, through

    R(t^x) = R(0) - int_{(0,t]} s dnu(s),      t >= 0,
    R(t^x) = R(0) + int_{[t,0)} s dnu(s),      t < 0,

where t^x denotes the one-sided limit taken away from 0 (right limit for
t >= 0, left limit for t < 0).  Jumps satisfy R(t+) - R(t-) = -t*nu({t}),
so R is automatically continuous at 0 with R'(0) = 0 whenever smooth there.

The measure is the primary datum; an optional closed form ``fn`` (evaluating
the t^x representative) is threaded through the algebra so that downstream
quadratures never nest.
"""

import math

import numpy as np

from .errors import NonIntegrable
from .measures import Cumulative, Piece, ZonalMeasure, _evalv

_ZERO_LIM = 1e-12


def _ident(s):
    return np.asarray(s, dtype=float)


class BV0Function:
    """See module docstring.  Treated as immutable."""

    def __init__(self, nu, base, fn=None, support=None, label=None):
        if nu.atom_mass(0.0) != 0.0:
            raise ValueError("nu must not have an atom at 0")
        for t, _ in nu.atoms:
            if not -1.0 < t < 1.0:
                raise ValueError("nu atoms must lie in (-1,1)")
        self.nu = nu
        self.base = float(base)
        self.fn = fn
        self.support = support  # declared open interval of positivity, or None
        self.label = label
        self._G = None

    # -- evaluation ----------------------------------------------------------

    def _cumulative(self):
        if self._G is None:
            self._G = Cumulative(self.nu, weight=_ident, smooth_weight=True)
        return self._G

    def value_x(self, t):
        """R at t in the t^x (away-from-0 one-sided limit) convention."""
        if self.fn is not None:
            return float(self.fn(t))
        return self.base - self._cumulative()(t)

    __call__ = value_x

    def values(self, ts):
        if self.fn is not None:
            return _evalv(self.fn, np.asarray(ts, dtype=float))
        return np.array([self.value_x(float(t)) for t in ts])

    def value_plus(self, t):
        if t >= 0.0:
            return self.value_x(t)
        return self.value_x(t) - t * self.nu.atom_mass(t)

    def value_minus(self, t):
        if t >= 0.0:
            return self.value_x(t) + t * self.nu.atom_mass(t)
        return self.value_x(t)

    def limit_inner(self, a):
        """One-sided limit of R at a, taken from the side of 0."""
        if a > 0.0:
            return self.value_minus(a)
        if a < 0.0:
            return self.value_plus(a)
        return self.base

    # -- diagnostics ---------------------------------------------------------

    def nu_is_finite(self):
        try:
            self.nu.integrate(np.abs)
        except NonIntegrable:
            return False
        return True

    def is_bv_plus(self, interval, grid=256, tol=1e-12):
        """Strict positivity on the open interval, finite one-signed nu."""
        a, b = interval
        ts = np.linspace(a, b, grid + 2)[1:-1]
        if any(self.value_x(float(t)) <= tol for t in ts):
            return False
        if min(self.limit_inner(a), self.limit_inner(b)) < -tol:
            return False
        if not self.nu_is_finite():
            return False
        masses = [m for _, m in self.nu.atoms]
        dens = self.nu.min_density_on_grid()
        neg_ok = all(m <= tol for m in masses) and self._max_density() <= tol
        pos_ok = all(m >= -tol for m in masses) and dens >= -tol
        return pos_ok or neg_ok

    def _max_density(self, m=512):
        worst = -math.inf
        for p in self.nu.pieces:
            ts = np.linspace(p.a, p.b, m + 2)[1:-1]
            worst = max(worst, float(np.max(_evalv(p.rho, ts))))
        return 0.0 if worst == -math.inf else worst

    # -- algebra -------------------------------------------------------------

    def product(self, other):
        cuts = set(self.nu.breakpoints()) | set(other.nu.breakpoints())
        atom_ts = sorted({t for t, _ in self.nu.atoms}
                         | {t for t, _ in other.nu.atoms})
        atoms = []
        for t in atom_ts:
            lo = self.value_minus(t) * other.value_minus(t)
            hi = self.value_plus(t) * other.value_plus(t)
            atoms.append((t, (lo - hi) / t))
        pieces = (_scaled_pieces(self.nu.split_at(cuts), other, self)
                  + _scaled_pieces(other.nu.split_at(cuts), self, other))
        dens = _sum_pieces(pieces)
        fn = None
        if self.fn is not None and other.fn is not None:
            f1, f2 = self.fn, other.fn
            def fn(ts, _f1=f1, _f2=f2):
                ts = np.asarray(ts, dtype=float)
                return _evalv(_f1, ts) * _evalv(_f2, ts)
        return BV0Function(ZonalMeasure(atoms, dens.pieces),
                           self.base * other.base, fn=fn,
                           support=_isect(self.support, other.support))

    def power(self, k):
        if k == 1:
            return self
        if not (isinstance(k, int) and k >= 1):
            raise ValueError("power expects a positive integer")
        atoms = []
        for t, _ in self.nu.atoms:
            lo = self.value_minus(t) ** k
            hi = self.value_plus(t) ** k
            atoms.append((t, (lo - hi) / t))
        split = self.nu.split_at({t for t, _ in self.nu.atoms})
        pieces = []
        for p in split.pieces:
            def rho(ts, _r=p.rho, _R=self, _k=k):
                ts = np.asarray(ts, dtype=float)
                return _k * _R.values(ts) ** (_k - 1) * _evalv(_r, ts)
            aa = self._pow_exp(p.a, p.alpha_a, k, side=+1)
            ab = self._pow_exp(p.b, p.alpha_b, k, side=-1)
            pieces.append(Piece(p.a, p.b, rho, aa, ab))
        fn = None
        if self.fn is not None:
            def fn(ts, _f=self.fn, _k=k):
                return _evalv(_f, np.asarray(ts, dtype=float)) ** _k
        return BV0Function(ZonalMeasure(atoms, pieces), self.base ** k,
                           fn=fn, support=self.support)

    def _pow_exp(self, end, alpha, k, side):
        # density k R^(k-1) rho: if R vanishes at the end like (e-t)^(alpha+1)
        # the exponent grows accordingly, else it is unchanged
        lim = self.value_plus(end) if side > 0 else self.value_minus(end)
        if abs(lim) < _ZERO_LIM:
            return alpha + (k - 1) * (alpha + 1.0)
        return alpha

    def reciprocal(self, interval=None):
        """1/R on the open interval where R stays positive."""
        interval = interval or self.support
        if interval is None:
            raise ValueError("reciprocal needs a positivity interval")
        a, b = interval
        atoms = []
        for t, _ in self.nu.atoms:
            if a < t < b:
                lo, hi = self.value_minus(t), self.value_plus(t)
                atoms.append((t, (1.0 / lo - 1.0 / hi) / t))
        split = self.nu.split_at({t for t, _ in self.nu.atoms})
        pieces = []
        for p in split.pieces:
            q = p.clipped(a, b)
            if q is None:
                continue
            def rho(ts, _r=q.rho, _R=self):
                ts = np.asarray(ts, dtype=float)
                return -_evalv(_r, ts) / _R.values(ts) ** 2
            aa = self._recip_exp(q.a, q.alpha_a, side=+1)
            ab = self._recip_exp(q.b, q.alpha_b, side=-1)
            pieces.append(Piece(q.a, q.b, rho, aa, ab))
        fn = None
        if self.fn is not None:
            def fn(ts, _f=self.fn):
                return 1.0 / _evalv(_f, np.asarray(ts, dtype=float))
        return BV0Function(ZonalMeasure(atoms, pieces), 1.0 / self.base,
                           fn=fn, support=interval)

    def _recip_exp(self, end, alpha, side):
        lim = self.value_plus(end) if side > 0 else self.value_minus(end)
        if abs(lim) < _ZERO_LIM:
            return -alpha - 2.0
        return alpha

    def dilate(self, a_minus, a_plus):
        """R(z(t)) for the piecewise-linear z with z(-1) = a_minus, z(1) = a_plus."""
        if not (-1.0 <= a_minus < 0.0 < a_plus <= 1.0):
            raise ValueError("need -1 <= a_minus < 0 < a_plus <= 1")
        pos = self.nu.restrict(0.0, a_plus, closed_lo=False, closed_hi=False)
        neg = self.nu.restrict(a_minus, 0.0, closed_lo=False, closed_hi=False)
        new = (pos.mapped(lambda t: t / a_plus, lambda x: x * a_plus,
                          lambda t: 1.0 / a_plus) * a_plus
               + neg.mapped(lambda t: t / abs(a_minus),
                            lambda x: x * abs(a_minus),
                            lambda t: 1.0 / abs(a_minus)) * abs(a_minus))
        fn = None
        if self.fn is not None:
            def fn(ts, _f=self.fn, _am=a_minus, _ap=a_plus):
                ts = np.asarray(ts, dtype=float)
                zs = np.where(ts >= 0.0, _ap * ts, abs(_am) * ts)
                return _evalv(_f, zs)
        sup = None
        if self.support is not None:
            lo, hi = self.support
            sup = (max(-1.0, lo / abs(a_minus)), min(1.0, hi / a_plus))
        return BV0Function(new, self.base, fn=fn, support=sup)

    def reflect(self):
        atoms = [(-t, m) for t, m in self.nu.atoms]
        pieces = []
        for p in self.nu.pieces:
            def rho(ts, _r=p.rho):
                return _evalv(_r, -np.asarray(ts, dtype=float))
            pieces.append(Piece(-p.b, -p.a, rho, p.alpha_b, p.alpha_a))
        fn = None
        if self.fn is not None:
            def fn(ts, _f=self.fn):
                return _evalv(_f, -np.asarray(ts, dtype=float))
        sup = None
        if self.support is not None:
            sup = (-self.support[1], -self.support[0])
        return BV0Function(ZonalMeasure(atoms, pieces), self.base, fn=fn,
                           support=sup)

    def __repr__(self):
        tag = self.label or "BV0Function"
        return "%s(base=%.6g, %d atoms, %d pieces)" % (
            tag, self.base, len(self.nu.atoms), len(self.nu.pieces))


def _isect(s1, s2):
    if s1 is None or s2 is None:
        return s1 or s2
    return (max(s1[0], s2[0]), min(s1[1], s2[1]))


def _sum_pieces(pieces):
    out = ZonalMeasure()
    for p in pieces:
        out = out + ZonalMeasure((), [p])
    return out


def _scaled_pieces(measure, factor, owner):
    """Pieces of `measure` multiplied by the continuous values of `factor`.

    `measure` must already be split at every jump of `factor`; `owner` is the
    BV0Function the pieces came from (only used for exponent bookkeeping).
    """
    orig_ends = _exp_table(factor)
    pieces = []
    for p in measure.pieces:
        def rho(ts, _r=p.rho, _F=factor):
            ts = np.asarray(ts, dtype=float)
            return _F.values(ts) * _evalv(_r, ts)
        aa = p.alpha_a + _vanish_order(factor, orig_ends, p.a, side=+1)
        ab = p.alpha_b + _vanish_order(factor, orig_ends, p.b, side=-1)
        pieces.append(Piece(p.a, p.b, rho, aa, ab))
    return pieces


def _exp_table(fun):
    table = {}
    for p in fun.nu.pieces:
        table.setdefault(p.a, {})[+1] = p.alpha_a
        table.setdefault(p.b, {})[-1] = p.alpha_b
    return table


def _vanish_order(factor, table, end, side):
    lim = factor.value_plus(end) if side > 0 else factor.value_minus(end)
    if abs(lim) >= _ZERO_LIM:
        return 0.0
    alpha = table.get(end, {}).get(side)
    if alpha is None:
        return 0.0
    return alpha + 1.0


def from_smooth(fn, dfn, d2_at_zero=None, interval=(-1.0, 1.0),
                alpha=(0.0, 0.0), support=None, label=None):
    """Build a BV0Function from a C^1 profile.

    The density of nu is -fn'(s)/s with the removable singularity at 0 filled
    by -fn''(0) (finite differences if `d2_at_zero` is not given).  `alpha`
    declares the density exponents at the ends of `interval`.
    """
    if d2_at_zero is None:
        h = 1e-5
        d2_at_zero = (float(fn(h)) - 2.0 * float(fn(0.0)) + float(fn(-h))) / h ** 2

    def rho(ts):
        ts = np.asarray(ts, dtype=float)
        out = np.empty_like(ts)
        small = np.abs(ts) < 1e-8
        safe = np.where(small, 1.0, ts)
        out = -_evalv(dfn, ts) / safe
        if np.any(small):
            out = np.where(small, -d2_at_zero, out)
        return out

    a, b = interval
    nu = ZonalMeasure((), [Piece(a, b, rho, alpha[0], alpha[1])])
    return BV0Function(nu, float(fn(0.0)), fn=fn,
                       support=support or (a, b), label=label)


def constant(c):
    """The constant profile R == c (empty measure)."""
    def fn(ts):
        return np.full_like(np.asarray(ts, dtype=float), float(c))
    return BV0Function(ZonalMeasure(), c, fn=fn, support=(-1.0, 1.0),
                       label="const")


def indicator(r_minus, r_plus, height=1.0):
    """height on (r_minus, r_plus), 0 outside; jump atoms at the cut points."""
    if not (-1.0 <= r_minus < 0.0 < r_plus <= 1.0):
        raise ValueError("indicator interval must contain 0")
    atoms = []
    if r_plus < 1.0:
        atoms.append((r_plus, height / r_plus))
    if r_minus > -1.0:
        atoms.append((r_minus, height / (-r_minus)))
    def fn(ts, _h=height, _a=r_minus, _b=r_plus):
        ts = np.asarray(ts, dtype=float)
        inside = np.where(ts >= 0.0, ts < _b, ts > _a)
        return np.where(inside, _h, 0.0)
    return BV0Function(ZonalMeasure(atoms), height, fn=fn,
                       support=(r_minus, r_plus), label="indicator")
