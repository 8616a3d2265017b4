"""Generating-function evaluation by truncated symmetric canonical products.

The product  z * prod_{0 < |k| <= M} (1 - z / lambda_k)  is accumulated in log
space (magnitude exponent plus phase) so that tens of thousands of factors
never overflow or underflow a double.

Truncation limits accuracy: the discarded factors multiply the value by
roughly exp((z^2 - const)/M), a percent-level effect at practical window sizes
and far too large for interpolation work. All supported sequence families
satisfy |lambda_k - k| <= 1/2, so the discarded tail is the integer tail
prod_{|k| > M} (1 - z^2/k^2) up to a correction that vanishes as the window
grows. That integer tail has a closed form in terms of the log-gamma function,
evaluated here through a short polygamma series with no cancellation. Windows
carry a flag to disable the correction and recover the bare truncated product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, loggamma, polygamma

from .sequences import SamplingSequence

__all__ = [
    "ProductWindow",
    "LogValue",
    "Rectangle",
    "default_window",
    "phi",
    "phi_prime_at",
    "basis",
    "phi_floor",
    "log_phi_grid",
    "log_phi_prime_window",
    "phi_values",
]

_NODE_CHUNK = 8192  # factors per broadcast block; caps temporary memory


@dataclass(frozen=True)
class ProductWindow:
    """Symmetric truncation 0 < |k| <= half_width of the canonical product."""

    half_width: int
    tail_correction: bool = True

    def __post_init__(self) -> None:
        if self.half_width < 2:
            raise ValueError("product window must cover at least |k| <= 2")


def default_window(n: int) -> ProductWindow:
    """Window size that saturates truncation error for plans up to index n."""
    return ProductWindow(max(8 * n, 512))


@dataclass(frozen=True)
class LogValue:
    """A complex value stored as log-magnitude plus unit phase.

    Zero is encoded as log_magnitude = -inf with phase +1. For values arising
    from real input the phase is exactly +-1.
    """

    log_magnitude: float
    phase: complex

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf

    @property
    def value(self) -> complex:
        if self.is_zero:
            return 0.0
        return self.phase * math.exp(self.log_magnitude)

    @classmethod
    def from_value(cls, v: complex) -> "LogValue":
        a = abs(v)
        if a == 0.0:
            return cls(-math.inf, 1.0)
        return cls(math.log(a), v / a)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle [t_minus, t_plus] x [s_minus, s_plus]."""

    t_minus: float
    t_plus: float
    s_minus: float
    s_plus: float

    def __post_init__(self) -> None:
        if not (self.t_minus < self.t_plus and self.s_minus < self.s_plus):
            raise ValueError("degenerate rectangle")

    def corners(self) -> list[complex]:
        return [
            complex(self.t_minus, self.s_minus),
            complex(self.t_plus, self.s_minus),
            complex(self.t_plus, self.s_plus),
            complex(self.t_minus, self.s_plus),
        ]

    def sides(self) -> list[tuple[complex, complex]]:
        c = self.corners()
        return [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])]


def _log_integer_tail(z: np.ndarray, half_width: int) -> np.ndarray:
    """log prod_{k > M} (1 - z^2/k^2), the tail of sin(pi z)/(pi z).

    Series in z^2 with coefficients sum_{k>M} k^{-2j} (polygamma); each term is
    computed without cancellation, so the result carries full precision. For
    |z| beyond half the window the series converges too slowly and the
    log-gamma form takes over.
    """
    m1 = half_width + 1
    if np.max(np.abs(z)) <= 0.5 * half_width:
        total = np.zeros(z.shape, dtype=z.dtype)
        z2 = z * z
        power = np.ones_like(total)
        for j in range(1, 80):
            coeff = float(polygamma(2 * j - 1, m1)) / math.factorial(2 * j - 1)
            power = power * z2
            term = -(power / j) * coeff
            total = total + term
            if np.max(np.abs(term)) < 1e-18 * max(float(np.max(np.abs(total))), 1e-300):
                break
        return total
    if np.iscomplexobj(z):
        return 2.0 * gammaln(m1) - loggamma(m1 - z) - loggamma(m1 + z)
    return 2.0 * gammaln(m1) - gammaln(m1 - z) - gammaln(m1 + z)


def log_phi_grid(
    seq: SamplingSequence, zs: np.ndarray, window: ProductWindow
) -> tuple[np.ndarray, np.ndarray]:
    """Log-magnitude and phase of the truncated product at each point of zs.

    Real input yields a float phase array of +-1 (or +1 at exact zeros, where
    the log-magnitude is -inf). Complex input yields unit complex phases.
    """
    zs = np.atleast_1d(zs)
    m = window.half_width
    nodes = seq.window(m)
    lam = np.concatenate([nodes[:m], nodes[m + 1 :]])  # drop k = 0

    if np.iscomplexobj(zs):
        total = np.zeros(zs.shape, dtype=complex)
        for lo in range(0, lam.size, _NODE_CHUNK):
            block = lam[lo : lo + _NODE_CHUNK]
            w = 1.0 - zs[:, None] / block[None, :]
            total = total + np.log(w).sum(axis=1)
        with np.errstate(divide="ignore"):
            total = total + np.log(zs.astype(complex))
        if window.tail_correction:
            total = total + _log_integer_tail(zs, m)
        logmag = total.real
        phase = np.exp(1j * total.imag)
        zero = np.isneginf(logmag) | np.isnan(logmag)
        phase[zero] = 1.0
        logmag[zero] = -np.inf
        return logmag, phase

    zs = zs.astype(np.float64)
    logmag = np.zeros(zs.shape)
    negatives = np.zeros(zs.shape, dtype=np.int64)
    hit_zero = zs == 0.0
    for lo in range(0, lam.size, _NODE_CHUNK):
        block = lam[lo : lo + _NODE_CHUNK]
        w = 1.0 - zs[:, None] / block[None, :]
        with np.errstate(divide="ignore"):
            logmag += np.log(np.abs(w)).sum(axis=1)
        negatives += (w < 0).sum(axis=1)
        hit_zero |= (w == 0.0).any(axis=1)
    with np.errstate(divide="ignore"):
        logmag += np.log(np.abs(zs))
    negatives += zs < 0
    if window.tail_correction:
        logmag = logmag + _log_integer_tail(zs, m)
    sign = np.where(negatives % 2 == 0, 1.0, -1.0)
    sign[hit_zero] = 1.0
    logmag[hit_zero] = -np.inf
    return logmag, sign


def phi_values(seq: SamplingSequence, zs: np.ndarray, window: ProductWindow) -> np.ndarray:
    """Linear-scale product values; safe while log-magnitudes stay below ~700."""
    logmag, phase = log_phi_grid(seq, zs, window)
    with np.errstate(over="raise"):
        return phase * np.exp(logmag)


def phi(seq: SamplingSequence, z: complex, window: ProductWindow) -> LogValue:
    """Truncated canonical product at a single point."""
    arr = np.asarray([z])
    logmag, phase = log_phi_grid(seq, arr, window)
    return LogValue(float(logmag[0]), complex(phase[0]) if np.iscomplexobj(phase) else float(phase[0]))


def log_phi_prime_window(
    seq: SamplingSequence, n_max: int, window: ProductWindow
) -> tuple[np.ndarray, np.ndarray]:
    """Derivative of the product at the nodes n = -n_max .. n_max.

    The derivative at a node is the product over the remaining factors: the
    vanishing factor is deleted analytically, never differenced numerically.
    Returns (log-magnitudes, signs), both length 2*n_max + 1.
    """
    m = window.half_width
    if n_max > m:
        raise ValueError("node index exceeds the product window")
    nodes = seq.window(m)
    lam_nz = np.concatenate([nodes[:m], nodes[m + 1 :]])
    logmag = np.empty(2 * n_max + 1)
    sign = np.empty(2 * n_max + 1)
    for i, n in enumerate(range(-n_max, n_max + 1)):
        ln = nodes[n + m]
        if n == 0:
            w = 1.0 - ln / lam_nz
            extra_neg = 0
        else:
            # index of node n inside lam_nz (k = 0 removed)
            j = n + m if n < 0 else n + m - 1
            w = 1.0 - ln / np.delete(lam_nz, j)
            extra_neg = 1  # deleted factor contributes d/dz (1 - z/lambda_n) = -1/lambda_n, times leading z = lambda_n
        lm = float(np.log(np.abs(w)).sum())
        neg = int((w < 0).sum()) + extra_neg
        if window.tail_correction:
            lm += float(_log_integer_tail(np.asarray([ln]), m)[0])
        logmag[i] = lm
        sign[i] = 1.0 if neg % 2 == 0 else -1.0
    return logmag, sign


def phi_prime_at(seq: SamplingSequence, n: int, window: ProductWindow) -> LogValue:
    """Derivative of the truncated product at node lambda_n."""
    if abs(n) > window.half_width:
        raise ValueError("node index exceeds the product window")
    logmag, sign = log_phi_prime_window(seq, abs(n), window)
    i = n + abs(n)
    return LogValue(float(logmag[i]), float(sign[i]))


def basis(seq: SamplingSequence, n: int, z: complex, window: ProductWindow):
    """Interpolation basis element: 1 at lambda_n, 0 at every other node.

    Evaluated as product(z) / (product'(lambda_n) * (z - lambda_n)), which for
    a bare window reduces exactly to the finite Lagrange product over the
    windowed nodes; points that coincide with a node are returned exactly.
    """
    m = window.half_width
    if abs(n) > m:
        raise ValueError("node index exceeds the product window")
    nodes = seq.window(m)
    ln = nodes[n + m]
    zr = complex(z)
    if zr.imag == 0.0:
        hit = np.nonzero(nodes == zr.real)[0]
        if hit.size:
            return 1.0 if hit[0] == n + m else 0.0
    value = phi(seq, z, window)
    deriv = phi_prime_at(seq, n, window)
    gap = zr - ln
    logmag = value.log_magnitude - math.log(abs(gap)) - deriv.log_magnitude
    phase = complex(value.phase) / (complex(deriv.phase) * (gap / abs(gap)))
    out = phase * math.exp(logmag)
    if zr.imag == 0.0:
        return out.real
    return out


def _golden_min(f, a: float, b: float, iterations: int = 60) -> float:
    """Golden-section minimum of a scalar function on [a, b]."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv * (b - a)
    x2 = a + inv * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv * (b - a)
            f2 = f(x2)
    return min(f1, f2)


def phi_floor(
    seq: SamplingSequence,
    rect: Rectangle,
    grid_density: float | None = None,
    window: ProductWindow | None = None,
) -> float:
    """Lower estimate of min over the rectangle boundary of
    |product(zeta)| * exp(-pi |Im zeta|).

    Dense boundary sampling (default spacing: a twentieth of the smallest
    node gap) followed by golden-section refinement around each side's sampled
    minimum; the result is multiplied by 0.9 because a sampled minimum can
    overestimate the true one. The boundary must keep clear of the nodes,
    which midpoint abscissas guarantee.
    """
    if window is None:
        raise ValueError("a product window is required")
    m = window.half_width
    nodes = seq.window(m)
    if grid_density is None:
        grid_density = float(np.diff(nodes).min()) / 20.0

    def boundary_value(pts: np.ndarray) -> np.ndarray:
        logmag, _ = log_phi_grid(seq, pts, window)
        return np.exp(logmag - np.pi * np.abs(pts.imag))

    best = math.inf
    for p, q in rect.sides():
        span = abs(q - p)
        count = max(3, int(math.ceil(span / grid_density)) + 1)
        t = np.linspace(0.0, 1.0, count)
        pts = (p + t * (q - p)).astype(complex)
        vals = boundary_value(pts)
        i = int(np.argmin(vals))
        best = min(best, float(vals[i]))
        lo = t[max(0, i - 1)]
        hi = t[min(count - 1, i + 1)]
        refined = _golden_min(
            lambda s: float(boundary_value(np.asarray([p + s * (q - p)], dtype=complex))[0]),
            float(lo),
            float(hi),
        )
        best = min(best, refined)
    return 0.9 * best
