"""Critical points of finite Blaschke products and weighted sums over them.

A degree-n product has exactly n-1 critical points in the open disk, counted
with multiplicity. A zero repeated m times pins a critical point of
multiplicity m-1 at itself exactly; the remaining u-1 "free" critical points
(u = number of distinct zeros) are the interior zeros of the logarithmic
derivative B'/B, a rational function whose numerator W also carries the
reflected exterior critical points.

The solver runs simultaneous (Aberth-style) iteration on W, but never forms
W's monomial coefficients: for zeros clustered near the circle those expand
catastrophically, while the Newton ratio W/W' is available to machine
accuracy through factor-wise logarithmic-derivative sums. A final Newton
polish on B'/B itself brings each simple root to the evaluation noise floor.
The expanded numerator/denominator form is kept separately (`to_rational`)
as an independent differentiation cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContourError, DomainError, RootFindingError
from .products import BlaschkeProduct, ZeroSequence

_INTERIOR_EDGE = 1e-12  # |root| < 1 - this counts as interior
_RESIDUAL_MAX = 1e-8
_PARK_RADIUS = 1e6  # estimates beyond this are chasing roots at infinity


# ---------------------------------------------------------------------------
# expanded rational form (independent cross-check path)


@dataclass(frozen=True)
class RationalForm:
    """B = unimodular_prefactor * P / Q in expanded monomial coefficients.

    P(z) = prod (z_n - z) and Q(z) = prod (1 - conj(z_n) z), coefficients
    ascending. The expansion loses accuracy for high degrees with zeros
    packed near the circle; it exists as a cross-check on the factor-wise
    evaluation, not as the working representation.
    """

    p_coeffs: np.ndarray
    q_coeffs: np.ndarray
    unimodular_prefactor: complex

    @property
    def degree(self):
        return len(self.p_coeffs) - 1

    def eval_p(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), self.p_coeffs)

    def eval_q(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), self.q_coeffs)

    def eval(self, z):
        return self.unimodular_prefactor * self.eval_p(z) / self.eval_q(z)

    def derivative_eval(self, z):
        """B' from the quotient rule on the expanded coefficients."""
        w = np.asarray(z, dtype=np.complex128)
        pv = np.polynomial.polynomial
        p, q = self.p_coeffs, self.q_coeffs
        dp, dq = pv.polyder(p), pv.polyder(q)
        num = pv.polyval(w, dp) * pv.polyval(w, q) - pv.polyval(w, p) * pv.polyval(w, dq)
        return self.unimodular_prefactor * num / pv.polyval(w, q) ** 2


def to_rational(product):
    """Expand a product into numerator/denominator coefficients (degree >= 1)."""
    if not isinstance(product, BlaschkeProduct):
        product = BlaschkeProduct(product)
    zs = product.zeros.zeros
    p = np.asarray([1.0 + 0.0j])
    q = np.asarray([1.0 + 0.0j])
    for a in zs:
        p = np.convolve(p, np.asarray([a, -1.0], dtype=np.complex128))
        q = np.convolve(q, np.asarray([1.0, -np.conj(a)]))
    pref = complex(np.prod(np.conj(zs) / np.abs(zs)))
    return RationalForm(p, q, pref)


# ---------------------------------------------------------------------------
# stable log-derivative building blocks


def _group_exact(zs):
    """Distinct zeros with multiplicities; repetition means identical values."""
    seen = {}
    order = []
    for v in zs:
        key = complex(v)
        if key in seen:
            seen[key] += 1
        else:
            seen[key] = 1
            order.append(key)
    unique = np.asarray(order, dtype=np.complex128)
    mult = np.asarray([seen[k] for k in order], dtype=np.float64)
    return unique, mult


def _h_and_prime(unique, mult, z):
    """H = B'/B and H' at the points z, as multiplicity-weighted pole sums."""
    zc = np.conj(unique)[:, None]
    zu = unique[:, None]
    mm = mult[:, None]
    pts = np.asarray(z, dtype=np.complex128)[None, :]
    fac = (np.abs(unique) ** 2 - 1.0)[:, None]
    da = 1.0 - zc * pts
    db = zu - pts
    g = fac / (da * db)
    gp = fac * (zc * db + da) / (da * db) ** 2
    return (mm * g).sum(axis=0), (mm * gp).sum(axis=0)


def _ratio_w(unique, mult, z):
    """W'/W at the points z, where W = (numerator of B'/B) * prod of pole factors.

    W'/W = H'/H + sum_j d/dz log[(1 - conj(z_j) z)(z_j - z)] over distinct j.
    """
    h, hp = _h_and_prime(unique, mult, z)
    zc = np.conj(unique)[:, None]
    zu = unique[:, None]
    pts = np.asarray(z, dtype=np.complex128)[None, :]
    polelog = (-zc / (1.0 - zc * pts) - 1.0 / (zu - pts)).sum(axis=0)
    return hp / h + polelog


# ---------------------------------------------------------------------------
# solver


def _aberth_free_points(unique, mult, max_iter=500, step_tol=1e-12):
    """All finite roots of the free-critical-point numerator, by simultaneous iteration.

    Starts the 2u-2 estimates on a circle of radius 0.5 about the zero
    centroid (a fixed angular offset breaks symmetric stalls). Estimates whose
    growth shows they chase a root at infinity (the numerator's degree drops
    for special configurations) are parked and excluded from the convergence
    test.
    """
    u = len(unique)
    m = 2 * u - 2
    center = complex(np.mean(unique))
    ks = np.arange(m)
    w = center + 0.5 * np.exp(2j * np.pi * (ks + 0.37) / max(m, 1))
    parked = np.zeros(m, dtype=bool)
    converged = False
    for _ in range(max_iter):
        active = ~parked
        if not active.any():
            converged = True
            break
        z = w[active]
        idx = np.flatnonzero(active)
        with np.errstate(all="ignore"):
            t_ratio = _ratio_w(unique, mult, z)
            diff = z[:, None] - w[None, :]
            diff[np.arange(idx.size), idx] = np.inf  # drop self-repulsion
            inv = 1.0 / diff
        inv[~np.isfinite(inv)] = 0.0
        rep = inv.sum(axis=1)
        with np.errstate(all="ignore"):
            step = 1.0 / (t_ratio - rep)
        cap = 10.0 * (1.0 + np.abs(z))
        bad = ~np.isfinite(step)
        step[bad] = 0.0  # exactly on a root, or a transient stall: hold position
        big = np.abs(step) > cap
        step[big] = step[big] / np.abs(step[big]) * cap[big]
        w[active] = z - step
        newly = np.abs(w - center) > _PARK_RADIUS
        parked |= newly
        still = active & ~newly
        if not still.any() or np.max(np.abs(step[~newly[active]])) < step_tol:
            converged = True
            break
    return w[~parked], converged


def _newton_on_h(unique, mult, points, max_iter=60):
    """Polish free critical points on H = B'/B, which evaluates stably."""
    pts = np.array(points, dtype=np.complex128)
    for _ in range(max_iter):
        h, hp = _h_and_prime(unique, mult, pts)
        with np.errstate(all="ignore"):
            step = h / hp
        step[~np.isfinite(step)] = 0.0
        nxt = pts - step
        # a refined point must stay inside the closed disk; freeze any escapee
        escaped = np.abs(nxt) >= 1.0
        nxt[escaped] = pts[escaped]
        pts = nxt
        if np.all(np.abs(step) < 1e-15 * (1.0 + np.abs(pts))):
            break
    return pts


@dataclass(frozen=True)
class CriticalSet:
    """Interior critical points (multiplicity by repetition) with residuals |B'|."""

    points: np.ndarray
    residuals: np.ndarray
    degree: int

    @property
    def count(self):
        return int(self.points.size)

    def __iter__(self):
        return (complex(v) for v in self.points)


def _sorted_critical(points):
    pts = np.asarray(points, dtype=np.complex128)
    order = np.lexsort((np.angle(pts), -np.abs(pts)))
    return pts[order]


def critical_points(product, max_iter=500):
    """All n-1 interior critical points of a degree-n product.

    Repeated zeros contribute themselves exactly; the free points come from
    simultaneous iteration plus a Newton polish. The count is certified
    against n-1, with a winding-number recount as fallback diagnostic, and
    every residual |B'| must stay below 1e-8 when re-evaluated through the
    factor expansion (independent of the root-finding representation).
    """
    if not isinstance(product, BlaschkeProduct):
        product = BlaschkeProduct(product)
    zs = product.zeros.zeros
    n = product.degree
    unique, mult = _group_exact(zs)
    fixed = np.repeat(unique, (mult - 1).astype(int))
    if len(unique) == 1:
        free = np.asarray([], dtype=np.complex128)
    else:
        raw, converged = _aberth_free_points(unique, mult, max_iter=max_iter)
        inside = raw[np.abs(raw) < 1.0 - _INTERIOR_EDGE]
        free = _newton_on_h(unique, mult, inside)
        free = free[np.abs(free) < 1.0 - _INTERIOR_EDGE]
        if not converged and free.size != len(unique) - 1:
            raise RootFindingError(
                f"simultaneous iteration did not converge within {max_iter} sweeps",
                partial=_sorted_critical(np.concatenate([fixed, free])),
            )
    points = _sorted_critical(np.concatenate([fixed, free]))
    if points.size != n - 1:
        try:
            recount = argument_principle_count(product, 1.0 - 1e-7)
        except ContourError:
            recount = None
        raise RootFindingError(
            f"found {points.size} interior critical points, expected {n - 1}"
            + (f"; winding recount gives {recount}" if recount is not None else ""),
            partial=points,
        )
    residuals = np.abs(product.derivative(points)) if points.size else np.asarray([])
    if points.size and np.max(residuals) >= _RESIDUAL_MAX:
        raise RootFindingError(
            f"worst residual |B'| = {np.max(residuals):g} exceeds {_RESIDUAL_MAX:g}",
            partial=points,
        )
    return CriticalSet(points, residuals, n)


def argument_principle_count(product, r, nodes=None):
    """Zeros of B' strictly inside |z| = r, by winding of B' around the circle.

    Trapezoidal phase accumulation: principal-value increments of arg B'
    summed over the closed loop. If the total fails to round to an integer
    within 0.1, a critical point sits too close to the contour (or the node
    count is too small) and the caller should retry with a different r.
    """
    if not isinstance(product, BlaschkeProduct):
        product = BlaschkeProduct(product)
    r = float(r)
    if not 0.0 < r < 1.0:
        raise DomainError("contour radius must lie in (0, 1)")
    if nodes is None:
        nodes = max(2048, 64 * product.degree)
    nodes = int(nodes)
    theta = np.linspace(0.0, 2.0 * np.pi, nodes + 1)
    vals = product.derivative(r * np.exp(1j * theta))
    if np.any(vals == 0.0):
        raise ContourError("critical point on the contour")
    steps = np.angle(vals[1:] / vals[:-1])
    raw = float(steps.sum() / (2.0 * np.pi))
    rounded = round(raw)
    if abs(raw - rounded) >= 0.1:
        raise ContourError(
            f"winding total {raw:.6f} does not round cleanly; "
            "retry with a different radius or more nodes"
        )
    return int(rounded)


# ---------------------------------------------------------------------------
# weighted sums


@dataclass(frozen=True)
class SumSeries:
    """Terms of a positive series with cached partial sums."""

    terms: np.ndarray
    partial_sums: np.ndarray = field(init=False)

    def __post_init__(self):
        terms = np.asarray(self.terms, dtype=np.float64)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "partial_sums", np.cumsum(terms))

    @property
    def total(self):
        return float(self.partial_sums[-1]) if self.terms.size else 0.0

    def rows(self):
        """(index, term, partial_sum) triples, 1-based."""
        return [
            (k + 1, float(self.terms[k]), float(self.partial_sums[k]))
            for k in range(self.terms.size)
        ]


def _point_array(points):
    if isinstance(points, CriticalSet):
        return points.points
    if isinstance(points, ZeroSequence):
        return points.zeros
    return np.asarray(points, dtype=np.complex128)


def critical_sum(cs, boundary_set, rho, beta, eps):
    """Series sum (1 - |z'|) d(z', E)^max(rho - beta + eps, 0) over critical points."""
    pts = _point_array(cs)
    rho, beta, eps = float(rho), float(beta), float(eps)
    if rho <= 0.0 or eps <= 0.0:
        raise DomainError("rho and eps must be positive")
    expo = max(rho - beta + eps, 0.0)
    gaps = 1.0 - np.abs(pts)
    d = boundary_set.distance(pts) if pts.size else np.asarray([])
    terms = gaps * np.power(d, expo) if pts.size else np.asarray([])
    return SumSeries(terms)


def log_weighted_sum(cs, eps):
    """Series sum (1 - |z'|) / log(1/(1 - |z'|))^(1 + eps), log floored at 1.

    The floor kicks in exactly when 1 - |z'| >= 1/e, where log 1/(1-|z'|)
    would dip below 1; only the boundary-clustered tail carries asymptotic
    meaning, so the convention is harmless and keeps every term positive.
    """
    pts = _point_array(cs)
    eps = float(eps)
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    gaps = 1.0 - np.abs(pts)
    logs = np.maximum(np.log(1.0 / gaps), 1.0)
    return SumSeries(gaps / logs ** (1.0 + eps))


def protas_sum(zeros, r):
    """Sum (1 - |z_n|)^r over a zero sequence, 0 < r <= 1 (r = 1: plain gap sum)."""
    pts = _point_array(zeros)
    r = float(r)
    if not 0.0 < r <= 1.0:
        raise DomainError("power must lie in (0, 1]")
    return float(np.sum((1.0 - np.abs(pts)) ** r))
