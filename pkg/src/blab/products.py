"""Finite Blaschke products: factors, evaluation, analytic and numerical derivatives.

Each zero a must satisfy 0 < |a| < 1. A factor carries the unimodular
normalization conj(a)/|a|, so the full product is positive at the origin.
Infinite products are handled through finite truncations; `truncation_tail`
certifies the cut-off error.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError, InvalidZeroError

# Evaluation points may poke past the circle by rounding only.
_EDGE_TOL = 1e-12

# Points per block in the leave-one-out derivative accumulation.
_CHUNK = 1024


def _complexify(z):
    arr = np.asarray(z, dtype=np.complex128)
    return arr, arr.ndim == 0


def _unscalar(values, scalar):
    return complex(np.asarray(values)[()]) if scalar else values


def _require_closed_disk(arr):
    if np.any(np.abs(arr) > 1.0 + _EDGE_TOL):
        raise DomainError("evaluation point lies outside the closed unit disk")


def _require_open_disk(arr):
    if np.any(np.abs(arr) >= 1.0):
        raise DomainError("point must lie strictly inside the unit disk")


def _validate_zero_array(arr):
    if arr.size == 0:
        return
    radii = np.abs(arr)
    bad = np.flatnonzero((radii <= 0.0) | (radii >= 1.0))
    if bad.size:
        k = int(bad[0])
        raise InvalidZeroError(
            f"zero #{k} = {arr[k]} violates 0 < |z| < 1 (|z| = {radii[k]})"
        )


def blaschke_factor(z, zero):
    """Single normalized factor conj(a)/|a| * (a - z) / (1 - conj(a) z).

    Modulus is at most 1 on the closed disk and exactly 1 on the circle.
    At z = 0 the factor equals |a| > 0.
    """
    a = complex(zero)
    ra = abs(a)
    if not 0.0 < ra < 1.0:
        raise InvalidZeroError(f"zero {a} violates 0 < |z| < 1 (|z| = {ra})")
    arr, scalar = _complexify(z)
    _require_closed_disk(arr)
    vals = (a.conjugate() / ra) * (a - arr) / (1.0 - a.conjugate() * arr)
    return _unscalar(vals, scalar)


def factor_derivative(z, zero):
    """Derivative of a single factor: conj(a)/|a| * (|a|^2 - 1) / (1 - conj(a) z)^2."""
    a = complex(zero)
    ra = abs(a)
    if not 0.0 < ra < 1.0:
        raise InvalidZeroError(f"zero {a} violates 0 < |z| < 1 (|z| = {ra})")
    arr, scalar = _complexify(z)
    _require_closed_disk(arr)
    vals = (a.conjugate() / ra) * (ra * ra - 1.0) / (1.0 - a.conjugate() * arr) ** 2
    return _unscalar(vals, scalar)


class ZeroSequence:
    """Ordered finite list of zeros in the punctured open disk.

    The summed gap alpha = sum(1 - |z_n|) is cached at construction. The
    backing array is frozen, so instances are safe to share across threads.
    An empty sequence is allowed (it represents a product tail that has been
    cut to nothing); building a BlaschkeProduct from it is not.
    """

    def __init__(self, zeros):
        arr = np.atleast_1d(np.asarray(zeros, dtype=np.complex128)).reshape(-1).copy()
        _validate_zero_array(arr)
        arr.flags.writeable = False
        self._zeros = arr
        self._moduli = np.abs(arr)
        self._moduli.flags.writeable = False
        self._alpha = float(np.sum(1.0 - self._moduli))

    @property
    def zeros(self):
        return self._zeros

    @property
    def moduli(self):
        return self._moduli

    @property
    def alpha(self):
        return self._alpha

    def __len__(self):
        return int(self._zeros.size)

    def __iter__(self):
        return (complex(v) for v in self._zeros)

    def __getitem__(self, k):
        picked = self._zeros[k]
        if np.ndim(picked) == 0:
            return complex(picked)
        return ZeroSequence(picked)

    def split(self, n):
        """Head/tail split after the first n zeros."""
        n = int(n)
        if not 0 <= n <= len(self):
            raise DomainError(f"split index {n} out of range for length {len(self)}")
        return ZeroSequence(self._zeros[:n]), ZeroSequence(self._zeros[n:])

    def __repr__(self):
        return f"ZeroSequence(n={len(self)}, alpha={self._alpha:.6g})"


def blaschke_sum(zeros):
    """Sum of gaps 1 - |z_n|; finite iff the product converges."""
    seq = zeros if isinstance(zeros, ZeroSequence) else ZeroSequence(zeros)
    return float(np.sum(1.0 - seq.moduli))


def truncation_tail(tail, z):
    """Certified bound sum 2 (1 - |z_n|) / (1 - |z|) on the discarded tail.

    Bounds |1 - prod_tail b_n(z)| for |z| < 1. Unbounded as |z| -> 1, so the
    circle itself is rejected.
    """
    seq = tail if isinstance(tail, ZeroSequence) else ZeroSequence(tail)
    arr, scalar = _complexify(z)
    _require_open_disk(arr)
    vals = 2.0 * np.sum(1.0 - seq.moduli) / (1.0 - np.abs(arr))
    vals = np.asarray(vals)
    return float(vals[()]) if scalar else vals


class BlaschkeProduct:
    """Finite product of normalized Blaschke factors.

    |B(z)| <= 1 on the closed disk with equality on the circle, and every
    factor separately has modulus <= 1 there, so plain left-to-right
    multiplication cannot overflow and needs no rescaling. B(0) equals the
    product of the zero moduli and is strictly positive.
    """

    def __init__(self, zeros):
        seq = zeros if isinstance(zeros, ZeroSequence) else ZeroSequence(zeros)
        if len(seq) == 0:
            raise InvalidZeroError("degree-0 products are rejected; supply at least one zero")
        self._seq = seq
        self._pref = np.conj(seq.zeros) / seq.moduli
        self._pref.flags.writeable = False
        self._rational = None

    @property
    def zeros(self):
        return self._seq

    @property
    def degree(self):
        return len(self._seq)

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Value of the product at z (scalar or array), |z| <= 1."""
        arr, scalar = _complexify(z)
        _require_closed_disk(arr)
        acc = np.ones_like(arr)
        for a, u in zip(self._seq.zeros, self._pref):
            acc = acc * (u * (a - arr) / (1.0 - np.conj(a) * arr))
        return _unscalar(acc, scalar)

    def derivative(self, z):
        """Analytic derivative, as the sum over n of b_n'(z) * prod_{m!=n} b_m(z).

        Leave-one-out products come from prefix/suffix accumulation. That
        keeps the formula exact at points where some factor vanishes
        (including repeated zeros), where any division shortcut would fail.
        """
        arr, scalar = _complexify(z)
        _require_closed_disk(arr)
        flat = arr.reshape(-1)
        out = np.empty_like(flat)
        for lo in range(0, flat.size, _CHUNK):
            out[lo : lo + _CHUNK] = self._derivative_block(flat[lo : lo + _CHUNK])
        return _unscalar(out.reshape(arr.shape), scalar)

    def _derivative_block(self, pts):
        zs = self._seq.zeros[:, None]
        pref = self._pref[:, None]
        n = self.degree
        denom = 1.0 - np.conj(zs) * pts[None, :]
        fac = pref * (zs - pts[None, :]) / denom
        dfac = pref * (np.abs(zs) ** 2 - 1.0) / denom**2
        before = np.ones_like(fac)
        after = np.ones_like(fac)
        if n > 1:
            np.cumprod(fac[:-1], axis=0, out=before[1:])
            after[:-1] = np.cumprod(fac[::-1], axis=0)[-2::-1]
        return (dfac * before * after).sum(axis=0)

    def derivative_fd(self, z, h=1e-5):
        """Centered finite-difference derivative over two orthogonal directions.

        Cross-check only; needs |z| + h < 1 so all four stencil points stay
        inside the closed disk.
        """
        arr, scalar = _complexify(z)
        h = float(h)
        if h <= 0.0:
            raise DomainError("finite-difference step must be positive")
        if np.any(np.abs(arr) + h >= 1.0):
            raise DomainError("stencil reaches the unit circle; need |z| + h < 1")
        real = (self.evaluate(arr + h) - self.evaluate(arr - h)) / (2.0 * h)
        imag = (self.evaluate(arr + 1j * h) - self.evaluate(arr - 1j * h)) / (2j * h)
        return _unscalar((real + imag) / 2.0, scalar)

    @property
    def rational(self):
        """Numerator/denominator form, built once on first access."""
        if self._rational is None:
            from .critical import to_rational

            self._rational = to_rational(self)
        return self._rational

    def __repr__(self):
        return f"BlaschkeProduct(degree={self.degree}, alpha={self._seq.alpha:.6g})"
