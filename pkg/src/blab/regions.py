"""Disk geometry: model functions, boundary sets on the circle, Stolz-type regions.

A model function phi is nonnegative, continuous, increasing, and linearly
bounded: phi(x) <= C x for the variant's constant C. A region with vertex t
on the circle collects the points lam with phi(|t - lam|) <= K (1 - |lam|);
for a closed boundary set E the chordal distance d(lam, E) replaces |t - lam|,
which is the same as the union of the vertex regions over t in E.

All distances here are chordal (straight-line), never arclength.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyRegionError, SamplingError
from .products import ZeroSequence

TWO_PI = 2.0 * math.pi

# Relative slack for region membership, so that points constructed exactly on
# the region boundary (measure-zero regions exist for slope-one variants at
# K = 1) are not lost to rounding.
MEMBERSHIP_TOL = 1e-12


def _norm_angle(theta):
    return float(theta) % TWO_PI


# ---------------------------------------------------------------------------
# model functions


@dataclass(frozen=True)
class ModelFunction:
    """One of the three admissible gauge variants.

    linear          phi(x) = x,                        C = 1
    power(gamma)    phi(x) = x^gamma on [0, 2],        C = 2^(gamma-1)
                    completed linearly as 2^(gamma-1) x beyond 2
    exp(rho)        phi(x) = exp(-x^-rho),             C = exp(-1/rho) rho^(-1/rho)
    """

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind == "linear":
            pass
        elif self.kind == "power":
            if not self.param >= 1.0:
                raise DomainError(f"power variant needs gamma >= 1, got {self.param}")
        elif self.kind == "exp":
            if not self.param > 0.0:
                raise DomainError(f"exp variant needs rho > 0, got {self.param}")
        else:
            raise DomainError(f"unknown model function kind {self.kind!r}")

    @classmethod
    def linear(cls):
        return cls("linear")

    @classmethod
    def truncated_power(cls, gamma):
        return cls("power", float(gamma))

    @classmethod
    def exp_tangential(cls, rho):
        return cls("exp", float(rho))

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        scalar = arr.ndim == 0
        if np.any(arr < 0.0):
            raise DomainError("model functions are defined for x >= 0 only")
        if self.kind == "linear":
            vals = arr.copy()
        elif self.kind == "power":
            g = self.param
            vals = np.where(arr <= 2.0, arr**g, 2.0 ** (g - 1.0) * arr)
        else:
            # subnormal x: x**-rho overflows to +inf and exp(-inf) = 0, the
            # honest limit value
            with np.errstate(divide="ignore", over="ignore"):
                vals = np.exp(-np.power(arr, -self.param, where=arr > 0,
                                        out=np.full_like(arr, np.inf)))
        return float(np.asarray(vals)[()]) if scalar else vals

    @property
    def constant(self):
        """Smallest C with phi(x) <= C x for all x >= 0."""
        if self.kind == "linear":
            return 1.0
        if self.kind == "power":
            return 2.0 ** (self.param - 1.0)
        rho = self.param
        return math.exp(-1.0 / rho) * rho ** (-1.0 / rho)

    def inverse(self, y):
        """Inverse on the range of phi; +inf where exp variants saturate (y >= 1)."""
        arr = np.asarray(y, dtype=np.float64)
        scalar = arr.ndim == 0
        if np.any(arr < 0.0):
            raise DomainError("inverse needs y >= 0")
        if self.kind == "linear":
            vals = arr.copy()
        elif self.kind == "power":
            g = self.param
            vals = np.where(arr <= 2.0**g, arr ** (1.0 / g), arr / 2.0 ** (g - 1.0))
        else:
            rho = self.param
            with np.errstate(divide="ignore"):
                logs = -np.log(arr, where=arr > 0, out=np.full_like(arr, np.inf))
            vals = np.where(arr >= 1.0, np.inf,
                            np.power(logs, -1.0 / rho, where=logs > 0,
                                     out=np.zeros_like(arr)))
            vals = np.where(arr == 0.0, 0.0, vals)
        return float(np.asarray(vals)[()]) if scalar else vals


def model_eval(phi, x):
    return phi(x)


def model_constant(phi):
    return phi.constant


# ---------------------------------------------------------------------------
# boundary sets


def _expand_cantor(base, ratio, depth):
    """Depth-d generator: keep the two end subarcs, ratio of the parent, d times."""
    a, b = float(base[0]), float(base[1])
    length = TWO_PI if b - a >= TWO_PI else (b - a) % TWO_PI
    if length == 0.0:
        raise DomainError("cantor base arc is degenerate")
    if not 0.0 < ratio <= 0.5:
        raise DomainError(f"cantor ratio must lie in (0, 1/2], got {ratio}")
    depth = int(depth)
    if not 0 <= depth <= 20:
        raise DomainError(f"cantor depth must lie in [0, 20], got {depth}")
    pieces = [(a, length)]
    for _ in range(depth):
        nxt = []
        for start, ln in pieces:
            keep = ln * ratio
            nxt.append((start, keep))
            nxt.append((start + ln - keep, keep))
        pieces = nxt
    return [(s, s + ln) for s, ln in pieces]


def _to_segments(arcs):
    """Normalize raw arcs into sorted disjoint segments within [0, 2pi]."""
    segs = []
    full = False
    for raw in arcs:
        a, b = float(raw[0]), float(raw[1])
        if b - a >= TWO_PI:
            full = True
            continue
        length = (b - a) % TWO_PI
        if length == 0.0:
            continue
        start = _norm_angle(a)
        end = start + length
        if end <= TWO_PI:
            segs.append([start, end])
        else:
            segs.append([start, TWO_PI])
            segs.append([0.0, end - TWO_PI])
    if full:
        return [[0.0, TWO_PI]], True
    segs.sort()
    merged = []
    for s in segs:
        if merged and s[0] <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], s[1])
        else:
            merged.append(list(s))
    if len(merged) >= 2 and merged[0][0] == 0.0 and merged[-1][1] == TWO_PI:
        # adjacent across zero; fine to keep split, the set is the same
        pass
    if merged and merged[0][0] == 0.0 and merged[-1][1] == TWO_PI and len(merged) == 1:
        return merged, True
    return merged, False


class BoundarySet:
    """Closed nonempty subset of the unit circle.

    Built from closed arcs, isolated points, and at most one Cantor-style
    generator (base arc, ratio, depth), which expands into 2^depth closed
    arcs. Angles are radians; arcs run counterclockwise from their first
    endpoint.
    """

    def __init__(self, arcs=(), points=(), cantor=None):
        self._raw_arcs = [(float(a), float(b)) for a, b in arcs]
        self._raw_points = [float(p) for p in points]
        self._cantor = None
        expanded = list(self._raw_arcs)
        if cantor is not None:
            base, ratio, depth = cantor
            self._cantor = ((float(base[0]), float(base[1])), float(ratio), int(depth))
            expanded.extend(_expand_cantor(base, float(ratio), int(depth)))
        self._segments, self._full = _to_segments(expanded)
        pts = sorted({_norm_angle(p) for p in self._raw_points})
        self._point_angles = np.asarray(
            [p for p in pts if not self._angle_in_segments(p)], dtype=np.float64
        )
        if self._full:
            self._segments = [[0.0, TWO_PI]]
            self._point_angles = np.asarray([], dtype=np.float64)
        if not self._segments and self._point_angles.size == 0:
            raise DomainError("boundary set must be nonempty")
        self._seg_a = np.asarray([s[0] for s in self._segments], dtype=np.float64)
        self._seg_b = np.asarray([s[1] for s in self._segments], dtype=np.float64)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_points(cls, angles):
        return cls(points=list(angles))

    @classmethod
    def from_arcs(cls, arcs):
        return cls(arcs=list(arcs))

    @classmethod
    def cantor(cls, base, ratio, depth):
        return cls(cantor=(tuple(base), ratio, depth))

    @classmethod
    def full_circle(cls):
        return cls(arcs=[(0.0, TWO_PI)])

    # -- payload ------------------------------------------------------------

    def to_payload(self):
        payload = {}
        if self._raw_arcs:
            payload["arcs"] = [[a, b] for a, b in self._raw_arcs]
        if self._raw_points:
            payload["points"] = list(self._raw_points)
        if self._cantor is not None:
            base, ratio, depth = self._cantor
            payload["cantor"] = {"base": [base[0], base[1]], "ratio": ratio, "depth": depth}
        return payload

    @classmethod
    def from_payload(cls, payload):
        if not isinstance(payload, dict):
            raise DomainError("boundary-set payload must be an object")
        unknown = set(payload) - {"arcs", "points", "cantor"}
        if unknown:
            raise DomainError(f"unknown boundary-set fields: {sorted(unknown)}")
        cantor = None
        if "cantor" in payload:
            spec = payload["cantor"]
            miss = {"base", "ratio", "depth"} - set(spec)
            extra = set(spec) - {"base", "ratio", "depth"}
            if miss or extra:
                raise DomainError(f"cantor generator needs base/ratio/depth, got {sorted(spec)}")
            cantor = (tuple(spec["base"]), spec["ratio"], spec["depth"])
        return cls(arcs=payload.get("arcs", ()), points=payload.get("points", ()), cantor=cantor)

    # -- geometry -----------------------------------------------------------

    @property
    def segments(self):
        return [tuple(s) for s in self._segments]

    @property
    def point_angles(self):
        return self._point_angles

    @property
    def cantor_depth(self):
        return None if self._cantor is None else self._cantor[2]

    @property
    def is_full_circle(self):
        return self._full

    def _angle_in_segments(self, ang):
        return any(a <= ang <= b for a, b in self._segments)

    def measure(self):
        """Normalized arclength of the set itself."""
        return float(sum(b - a for a, b in self._segments)) / TWO_PI

    def distance(self, z):
        """Chordal distance from z (scalar or array) to the set."""
        arr = np.asarray(z, dtype=np.complex128)
        scalar = arr.ndim == 0
        flat = arr.reshape(-1)
        out = np.full(flat.shape, np.inf)
        ang = np.mod(np.angle(flat), TWO_PI)
        radial = np.abs(np.abs(flat) - 1.0)
        for a, b in self._segments:
            inside = (ang >= a) & (ang <= b)
            if b >= TWO_PI:
                inside |= ang == 0.0
            d = np.where(
                inside,
                radial,
                np.minimum(np.abs(flat - np.exp(1j * a)), np.abs(flat - np.exp(1j * b))),
            )
            np.minimum(out, d, out=out)
        if self._point_angles.size:
            d = np.min(np.abs(flat[:, None] - np.exp(1j * self._point_angles)[None, :]), axis=1)
            np.minimum(out, d, out=out)
        out = out.reshape(arr.shape)
        return float(np.asarray(out)[()]) if scalar else out

    def nearest_point(self, z):
        """A circle point of the set realizing the chordal distance to z."""
        zc = complex(z)
        ang = _norm_angle(np.angle(zc))
        best = None
        best_d = np.inf
        for a, b in self._segments:
            if a <= ang <= b or (b >= TWO_PI and ang == 0.0):
                cands = [ang]
            else:
                cands = [a, b]
            for c in cands:
                p = complex(np.exp(1j * c))
                d = abs(zc - p)
                if d < best_d:
                    best, best_d = p, d
        for c in self._point_angles:
            p = complex(np.exp(1j * c))
            d = abs(zc - p)
            if d < best_d:
                best, best_d = p, d
        return best

    def neighborhood_measure(self, x):
        """Normalized arclength of the open chordal x-neighborhood on the circle."""
        x = float(x)
        if x <= 0.0:
            raise DomainError("neighborhood radius must be positive")
        if x >= 2.0 or self._full:
            return 1.0
        delta = 2.0 * math.asin(x / 2.0)
        intervals = [(a - delta, b + delta) for a, b in self._segments]
        intervals += [(p - delta, p + delta) for p in self._point_angles]
        segs, full = _to_segments(intervals)
        if full:
            return 1.0
        total = sum(b - a for a, b in segs)
        return min(1.0, total / TWO_PI)


def neighborhood_measure(boundary_set, x):
    return boundary_set.neighborhood_measure(x)


def default_beta_grid():
    return np.ldexp(1.0, -np.arange(4, 15))


def type_beta(boundary_set, x_grid=None):
    """Least-squares slope of log |E_x| against log x over the grid.

    Estimates the growth exponent of the neighborhood measure: 1 for finite
    point sets, 0 for sets of positive measure, strictly between for
    Cantor-style sets. A generator of depth d resolves structure only down to
    scales around ratio^d, so the grid must not probe deeper: the dyadic
    depth of the smallest x must stay at or below d.
    """
    grid = default_beta_grid() if x_grid is None else np.asarray(x_grid, dtype=np.float64)
    if grid.size < 4:
        raise DomainError("beta estimation needs at least 4 grid values")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError("beta grid values must lie in (0, 1)")
    if np.any(np.diff(grid) >= 0.0):
        raise DomainError("beta grid must be strictly decreasing")
    depth = boundary_set.cantor_depth
    if depth is not None:
        needed = int(math.ceil(-math.log2(float(grid.min()))))
        if depth < needed:
            raise DomainError(
                f"generator depth {depth} cannot resolve x = {grid.min():g}; "
                f"need depth >= {needed} or a coarser grid"
            )
    meas = np.asarray([boundary_set.neighborhood_measure(float(x)) for x in grid])
    slope = np.polyfit(np.log(grid), np.log(meas), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# Stolz-type regions


@dataclass(frozen=True)
class StolzSpec:
    """Region specification: gauge phi, boundary set E, aperture constant K."""

    phi: ModelFunction
    boundary: BoundarySet
    k_const: float

    def __post_init__(self):
        if not self.k_const > 0.0:
            raise DomainError(f"aperture constant must be positive, got {self.k_const}")

    @classmethod
    def at_vertex(cls, phi, angle, k_const):
        return cls(phi, BoundarySet.from_points([angle]), float(k_const))

    def contains(self, lam, tol=MEMBERSHIP_TOL):
        return in_stolz(lam, self, tol)


def in_stolz(lam, spec, tol=MEMBERSHIP_TOL):
    """Membership test phi(d(lam, E)) <= K (1 - |lam|), with relative slack tol."""
    arr = np.asarray(lam, dtype=np.complex128)
    scalar = arr.ndim == 0
    r = np.abs(arr)
    if np.any(r >= 1.0):
        raise DomainError("membership is defined strictly inside the unit disk")
    lhs = spec.phi(spec.boundary.distance(arr))
    rhs = spec.k_const * (1.0 - r)
    ok = lhs <= rhs + tol * np.maximum(lhs, rhs)
    return bool(np.asarray(ok)[()]) if scalar else ok


def region_is_empty(phi, k_const):
    """True iff no interior point satisfies the vertex-region inequality.

    Only the slope-one variants (linear, power with gamma = 1) can die: they
    force phi(u)/u = 1 while the reverse triangle inequality already gives
    |t - lam| >= 1 - |lam|, so K < 1 leaves nothing.
    """
    slope_one = phi.kind == "linear" or (phi.kind == "power" and phi.param == 1.0)
    return bool(slope_one and k_const < 1.0)


def angular_halfwidth(phi, k_const, u):
    """Largest |psi| with (1-u) e^{i psi} inside the vertex region at angle 0.

    Zero when only the radial point itself qualifies; requires that the
    radius is admissible at all (phi(u) <= K u). Scalar or array u.
    """
    arr = np.asarray(u, dtype=np.float64)
    scalar = arr.ndim == 0
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise DomainError("radial gap must lie in (0, 1)")
    x_max = np.minimum(phi.inverse(k_const * arr), 2.0)
    c = (1.0 + (1.0 - arr) ** 2 - x_max * x_max) / (2.0 * (1.0 - arr))
    vals = np.arccos(np.clip(c, -1.0, 1.0))
    return float(np.asarray(vals)[()]) if scalar else vals


# ---------------------------------------------------------------------------
# zero sampling


@dataclass(frozen=True)
class GeometricLaw:
    """Radial gaps 1 - |z_n| = ratio^n."""

    ratio: float

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise DomainError(f"geometric ratio must lie in (0, 1), got {self.ratio}")

    def gap(self, n):
        return self.ratio**n


@dataclass(frozen=True)
class PowerLaw:
    """Radial gaps 1 - |z_n| = scale * n^(-exponent); exponent > 1 keeps the sum finite."""

    exponent: float
    scale: float = 0.5

    def __post_init__(self):
        if not self.exponent > 1.0:
            raise DomainError(f"power-law exponent must exceed 1, got {self.exponent}")
        if not 0.0 < self.scale < 1.0:
            raise DomainError(f"power-law scale must lie in (0, 1), got {self.scale}")

    def gap(self, n):
        return self.scale * float(n) ** (-self.exponent)


def _draw_anchor(boundary_set, rng):
    """Uniform anchor angle on E: by arclength over arcs, else over the points."""
    segs = boundary_set.segments
    if segs:
        lengths = np.asarray([b - a for a, b in segs])
        k = int(rng.choice(len(segs), p=lengths / lengths.sum()))
        a, b = segs[k]
        return float(rng.uniform(a, b))
    pts = boundary_set.point_angles
    return float(pts[int(rng.integers(pts.size))])


def sample_zeros(spec, n, seed, law=GeometricLaw(0.5)):
    """Deterministic zero sequence inside the region given by `spec`.

    Radii follow the law exactly (gap of zero #i is law.gap(i), i from 1), so
    the Blaschke sum is a property of the law alone. Angles are drawn near a
    uniformly chosen anchor of E, restricted to the admissible window at that
    radius, and re-checked by membership with up to 1000 retries. Each index
    has its own RNG stream, so prefixes agree across different n.
    """
    n = int(n)
    if n < 0:
        raise DomainError("sample size must be nonnegative")
    if region_is_empty(spec.phi, spec.k_const):
        raise EmptyRegionError(
            f"region is empty: slope-one gauge with K = {spec.k_const} < 1"
        )
    base = [int(s) for s in seed] if isinstance(seed, (tuple, list)) else [int(seed)]
    out = np.empty(n, dtype=np.complex128)
    for i in range(1, n + 1):
        u = float(law.gap(i))
        if not 0.0 < u < 1.0:
            raise SamplingError(f"radial law gives gap {u} at index {i}, outside (0, 1)")
        if spec.phi(u) > spec.k_const * u * (1.0 + MEMBERSHIP_TOL):
            raise SamplingError(
                f"region too thin to place zero #{i}: gap {u:g} inadmissible for "
                f"phi({u:g}) = {spec.phi(u):g} > K u = {spec.k_const * u:g}"
            )
        rng = np.random.default_rng(base + [i])
        placed = False
        for _ in range(1000):
            anchor = _draw_anchor(spec.boundary, rng)
            half = angular_halfwidth(spec.phi, spec.k_const, u)
            psi = float(rng.uniform(-half, half)) if half > 0.0 else 0.0
            cand = (1.0 - u) * np.exp(1j * (anchor + psi))
            if in_stolz(cand, spec):
                out[i - 1] = cand
                placed = True
                break
        if not placed:
            raise SamplingError(
                f"region too thin to place zero #{i} after 1000 angle draws (gap {u:g})"
            )
    return ZeroSequence(out)


# ---------------------------------------------------------------------------
# region boundary tracing


def region_boundary(phi, k_const, vertex_angle, resolution):
    """Polyline of the vertex-region boundary, traced along rays from the vertex.

    Each ray leaves t = e^{i vertex} into the disk; along it the margin
    h(s) = K (1 - |lam(s)|) - phi(s) starts at zero, and the returned point is
    the outermost sign change located by bisection. Every returned point
    satisfies the defining equation to about 1e-9.
    """
    resolution = int(resolution)
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    if region_is_empty(phi, k_const):
        raise EmptyRegionError(f"region is empty: slope-one gauge with K = {k_const} < 1")
    t = np.exp(1j * float(vertex_angle))
    betas = (np.arange(resolution) + 0.5) / resolution * math.pi - math.pi / 2.0
    dirs = -t * np.exp(1j * betas)
    s_max = 2.0 * np.cos(betas)

    def margin(s):
        lam = t + s * dirs
        return k_const * (1.0 - np.abs(lam)) - phi(s)

    scan = np.linspace(0.0, 1.0, 1025)[None, :] * s_max[:, None]
    feas = np.zeros(scan.shape, dtype=bool)
    for j in range(scan.shape[1]):
        lam = t + scan[:, j] * dirs
        feas[:, j] = k_const * (1.0 - np.abs(lam)) - phi(scan[:, j]) >= -1e-15
    # outermost feasible scan point per ray
    idx = np.zeros(resolution, dtype=int)
    for k in range(resolution):
        where = np.flatnonzero(feas[k])
        idx[k] = where[-1] if where.size else 0
    lo = scan[np.arange(resolution), idx]
    hi = np.where(idx + 1 < scan.shape[1], scan[np.arange(resolution), np.minimum(idx + 1, scan.shape[1] - 1)], s_max)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        good = margin(mid) >= -1e-15
        lo = np.where(good, mid, lo)
        hi = np.where(good, hi, mid)
        if np.max(hi - lo) < 1e-12:
            break
    return t + lo * dirs
