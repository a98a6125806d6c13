"""Constructive solver for the zonal mixed Christoffel-Minkowski problem.

Given a target measure on [-1,1] and a reference family, ``check_conditions``
evaluates the five solvability clauses (support band, equator concentration,
sign and finiteness of the transformed measure, endpoint limits, equator
inequality).  ``solve_disk`` inverts the disk-reference pushforward directly:
the i-th power of the profile is read off the measure by integration, the
segment length from the equator atom, and the flat faces from the pole atoms.
``solve`` chains the adjoint preimage with the disk solver and verifies the
candidate by pushing it forward again.
"""

import math

import numpy as np

from .bodies import RevolutionBody, mixed_area_pushforward, \
    positivity_interval, support_from_profile
from .bv0 import BV0Function
from .constants import kappa
from .errors import EquatorMassWithZeroWaist, Infeasible, NotCentered, \
    NotNonnegative
from .measures import Piece, ZonalMeasure, _evalv
from .transform import _ChebCurve, adjoint_preimage

_CENTER_RTOL = 1e-9
_SOUTH_TOL = 1e-8
_NEG_FLOOR = -1e-10
_MASS_RTOL = 1e-7
_CHEB_DEG = 16

UNIQUE_NOTE = "unique-up-to-vertical-translation"
NON_UNIQUE_NOTE = "non-unique-patchable"


class SolveReport:
    """Outcome of a solvability check or full solve.

    ``conditions`` maps clause labels "(i)".."(v)" to dicts with keys
    ``passed``, ``margin`` (signed slack, non-negative iff the clause holds)
    and ``detail``.  ``body`` is present iff every clause passed and a
    reconstruction was requested; ``residual`` is the forward-verification
    sup-discrepancy, computed iff a body is present.
    """

    def __init__(self, n, i, conditions, sigma=None, body=None,
                 residual=None, uniqueness_note=None, case=None):
        self.n = n
        self.i = i
        self.conditions = conditions
        self.sigma = sigma
        self.body = body
        self.residual = residual
        self.uniqueness_note = uniqueness_note
        self.case = case

    @property
    def all_passed(self):
        return all(c["passed"] for c in self.conditions.values())

    def __repr__(self):
        flags = ", ".join("%s:%s" % (k, "ok" if c["passed"] else "FAIL")
                          for k, c in sorted(self.conditions.items()))
        return "SolveReport(n=%d, i=%d, %s, body=%s)" % (
            self.n, self.i, flags, self.body is not None)


def _clause(passed, margin, detail):
    return {"passed": bool(passed), "margin": float(margin), "detail": detail}


def check_conditions(mu_bar, family, n, i):
    """Evaluate the five solvability clauses; no body is constructed.

    Non-negativity and centering of the input are preconditions and raise
    NotNonnegative / NotCentered instead of showing up as clause verdicts.
    """
    j = len(family)
    if j != n - 1 - i:
        raise ValueError("family size %d does not match n-1-i = %d"
                         % (j, n - 1 - i))
    if not 1 <= i < n - 1:
        raise ValueError("need 1 <= i < n-1")

    total = mu_bar.integrate(np.abs)
    scale = max(1.0, total)
    neg = min([m for _, m in mu_bar.atoms] + [0.0])
    neg = min(neg, mu_bar.min_density_on_grid())
    if neg < -_CENTER_RTOL * scale:
        # positivity of the transformed measure can only fail harder: the
        # forward transform preserves non-negativity, so a signed input
        # never has a non-negative preimage
        raise NotNonnegative("measure has negative part (%.3g)" % neg,
                             clause="(iii)")
    m1 = mu_bar.first_moment()
    if abs(m1) > _CENTER_RTOL * scale:
        raise NotCentered("first moment %.3g exceeds tolerance" % m1)

    am, ap = family.interval
    conditions = {}

    out_mass = total - mu_bar.restrict(am, ap).integrate(np.abs)
    conditions["(i)"] = _clause(
        out_mass <= 1e-12 * scale, -out_mass,
        "mass outside the support band [%.6g, %.6g]" % (am, ap))

    # the |s|-moment vanishes iff every bit of mass sits at the equator
    conditions["(ii)"] = _clause(
        total > 1e-12 * scale, total, "mass off the equator")

    sigma0, prep = adjoint_preimage(family.R, mu_bar, c_hat=0.0)
    inner = prep["interior"]
    # sign is judged by mass: atoms exactly, the density through the mass of
    # its sampled negative part, so cancellation noise near the band ends
    # (pointwise visible, measure-zero) does not fail a feasible input
    neg = inner["neg_mass"]
    ok_iii = (inner["finite"] and neg <= _MASS_RTOL * scale
              and inner["min_atom"] >= _NEG_FLOOR * scale)
    conditions["(iii)"] = _clause(
        ok_iii, -neg if inner["finite"] else -math.inf,
        "transformed measure non-negative and finite on (a-, a+)")

    ends = [prep.get("endpoint_plus"), prep.get("endpoint_minus")]
    ok_iv = all(e is not None and e["verdict"] == "exists" for e in ends)
    vals = [e["value"] for e in ends if e is not None and e["value"] is not None]
    conditions["(iv)"] = _clause(
        ok_iv, min(vals) if ok_iv and vals else -math.inf,
        "cap-mass / profile limits at the band endpoints")

    margin_v = (family.R.base * mu_bar.atom_mass(0.0)
                - 2.0 * family.c_hat * mu_bar.pos_first_moment())
    conditions["(v)"] = _clause(
        margin_v >= -_CENTER_RTOL * scale, margin_v,
        "equator atom covers the polarized segment share")

    note = UNIQUE_NOTE if (am, ap) == (-1.0, 1.0) else NON_UNIQUE_NOTE
    return SolveReport(n, i, conditions, sigma=sigma0, uniqueness_note=note)


# ---------------------------------------------------------------------------
# disk references: direct reconstruction


def _root_profile(nu, A, i):
    """Profile R with R^i having base value A and derivative measure nu.

    Values go through a per-segment Chebyshev model of R^i (exact at the
    knots, so jump conventions survive); the cumulative behind it is only
    sampled once per segment.  The support is detected on the R^i scale,
    where reconstruction noise is additive and tiny, and everything outside
    it is dropped: the i-th root would otherwise blow the noise up to
    noise^(1/i) and pollute the dead segments of the profile.
    """
    scale = max(1.0, A)
    ri = BV0Function(nu, A)
    inv = 1.0 / i
    knots = set(nu.breakpoints()) | {t for t, _ in nu.atoms} | {-1.0, 0.0, 1.0}

    lo, hi = -1.0, 1.0
    if A > 0.0:
        lo, hi = positivity_interval(ri, eps=1e-8 * scale)
        for k in knots:
            if abs(k - lo) <= 1e-5:
                lo = k
            if abs(k - hi) <= 1e-5:
                hi = k
        if (lo, hi) != (-1.0, 1.0):
            nu = nu.restrict(lo, hi)
    curve = _ChebCurve(lambda t: ri.value_x(float(t)), knots)

    def fn(ts, _c=curve, _e=inv, _lo=lo, _hi=hi):
        ts = np.asarray(ts, dtype=float)
        if ts.ndim == 0:
            if not _lo <= float(ts) <= _hi:
                return 0.0
            return max(float(_c(float(ts))), 0.0) ** _e
        out = np.maximum(_c.vec(ts), 0.0) ** _e
        out[(ts < _lo) | (ts > _hi)] = 0.0
        return out

    if i == 1:
        R = BV0Function(nu, A, fn=fn)
    else:
        atoms = []
        for t, _ in nu.atoms:
            rlo = max(ri.value_minus(t), 0.0) ** inv
            rhi = max(ri.value_plus(t), 0.0) ** inv
            atoms.append((t, (rlo - rhi) / t))
        pieces = []
        for p in nu.split_at({t for t, _ in nu.atoms}).pieces:
            def rho(ts, _r=p.rho, _fn=fn, _k=i):
                ts = np.asarray(ts, dtype=float)
                den = np.maximum(_k * _evalv(_fn, ts) ** (_k - 1), 1e-300)
                return _evalv(_r, ts) / den
            va = max(ri.value_plus(p.a), 0.0)
            vb = max(ri.value_minus(p.b), 0.0)
            aa = (p.alpha_a + 1.0) * inv - 1.0 if va <= 1e-12 * scale else p.alpha_a
            ab = (p.alpha_b + 1.0) * inv - 1.0 if vb <= 1e-12 * scale else p.alpha_b
            pieces.append(Piece(p.a, p.b, rho, aa, ab))
        R = BV0Function(ZonalMeasure(atoms, pieces), A ** inv, fn=fn)
    if A > 0.0:
        R = BV0Function(R.nu, R.base, fn=R.fn, support=(lo, hi),
                        label="reconstructed")
    return R


def solve_disk(sigma_bar, n, i):
    """Body of revolution whose i-th area measure with disk references is sigma_bar.

    The interior of the measure fixes nu_{R^i}, the pole atoms fix the flat
    faces, the equator atom the segment length.  The waist value R(0)^i is
    integrated from the north side and cross-checked against the south side
    (this is centering in disguise).
    """
    if not 1 <= i <= n - 1:
        raise ValueError("need 1 <= i <= n-1")
    kn = kappa(n - 1)
    w_plus = sigma_bar.atom_mass(1.0)
    w_minus = sigma_bar.atom_mass(-1.0)
    w_eq = sigma_bar.atom_mass(0.0)
    if min(w_plus, w_minus, w_eq) < -_MASS_RTOL * kn:
        raise NotNonnegative("negative pole or equator atom")
    w_plus, w_minus, w_eq = (max(w, 0.0) for w in (w_plus, w_minus, w_eq))

    interior = sigma_bar.restrict(-1.0, 1.0, closed_lo=False, closed_hi=False)
    nu = ZonalMeasure([(t, m) for t, m in interior.atoms if t != 0.0],
                      interior.pieces) * (1.0 / kn)

    a_north = w_plus / kn + nu.restrict(0.0, 1.0, closed_lo=False).first_moment()
    a_south = w_minus / kn - nu.restrict(-1.0, 0.0, closed_hi=False).first_moment()
    scale = max(1.0, a_north, a_south)
    if abs(a_north - a_south) > _SOUTH_TOL * scale:
        raise NotCentered("pole consistency: north %.10g vs south %.10g"
                          % (a_north, a_south))
    A = 0.5 * (a_north + a_south)

    if A <= 1e-12 * scale and w_eq > 1e-12 * kn * scale:
        raise EquatorMassWithZeroWaist(
            "equator atom %.3g with zero waist radius" % w_eq)
    if A <= 1e-12 * scale and nu.is_zero() and max(w_plus, w_minus) <= 0.0:
        raise Infeasible("measure vanishes; no body to reconstruct")

    neg = min([m for _, m in nu.atoms] + [0.0, nu.min_density_on_grid()])
    if neg < _NEG_FLOOR * scale:
        # signed data slipped in: verify R^i stays non-negative anyway
        # (floor sized for reconstruction noise, violations are O(scale))
        ri = BV0Function(nu, A)
        ts = np.linspace(-1.0 + 1e-9, 1.0 - 1e-9, 257)
        if min(ri.value_x(float(t)) for t in ts) < -_MASS_RTOL * scale:
            raise Infeasible("running integral exceeds the waist value; "
                             "R^%d would go negative" % i)

    R = _root_profile(nu, A, i)
    rho_plus = max(w_plus / kn, 0.0) ** (1.0 / i)
    rho_minus = max(w_minus / kn, 0.0) ** (1.0 / i)
    ell = 0.0
    if w_eq > 0.0 and A > 0.0:
        ell = w_eq / (i * kn * A ** ((i - 1.0) / i))
    return RevolutionBody("reconstructed", R, ell=ell, rho_plus=rho_plus,
                          rho_minus=rho_minus,
                          hbar=support_from_profile(R, ell),
                          params={"i": i, "n": n})


# ---------------------------------------------------------------------------
# general references: preimage, disk solve, forward verification


def _test_family(deg=_CHEB_DEG):
    fams = [np.polynomial.chebyshev.Chebyshev.basis(k) for k in range(deg + 1)]

    def cap(a, w=0.08):
        def f(ts, _a=a, _w=w):
            x = np.clip((np.asarray(ts, dtype=float) - _a) / _w, 0.0, 1.0)
            return x * x * (3.0 - 2.0 * x)
        return f

    for a in (-0.75, -0.45, -0.15, 0.15, 0.45, 0.75):
        fams.append(cap(a))
    return fams


def solve(mu_bar, family, n, i):
    """Reconstruct a body of revolution with prescribed mixed area measure.

    Runs check_conditions; on pass, the preimage measure is handed to the
    disk solver and the result verified by re-applying the forward map over
    a fixed test-function family.  The report's uniqueness note only depends
    on whether the family's Gauss image covers the whole sphere.
    """
    report = check_conditions(mu_bar, family, n, i)
    if not report.all_passed:
        return report

    sigma = report.sigma
    if family.c_hat > 0.0:
        adj = family.c_hat * mu_bar.abs_moment() / family.R.base ** 2
        w0 = sigma.atom_mass(0.0) - adj
        scale = max(1.0, sigma.integrate(np.abs))
        if w0 < 0.0:
            if w0 < _NEG_FLOOR * scale:
                raise Infeasible("segment share exceeds the equator atom",
                                 clause="(v)")
            w0 = 0.0
        sigma = ZonalMeasure([(t, m) for t, m in sigma.atoms if t != 0.0]
                             + [(0.0, w0)], sigma.pieces)
    report.sigma = sigma

    body = solve_disk(sigma, n, i)
    interior_mass = sigma.restrict(
        -1.0, 1.0, closed_lo=False, closed_hi=False).integrate(np.abs)
    report.case = ("full-dimensional"
                   if interior_mass > 1e-12 * max(1.0, sigma.integrate(np.abs))
                   else "disk")

    mu_rec = mixed_area_pushforward(body, i, family, n)
    residual = 0.0
    for f in _test_family():
        residual = max(residual, abs(mu_bar.integrate(f) - mu_rec.integrate(f)))
    report.body = body
    report.residual = residual
    return report
