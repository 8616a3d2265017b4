"""Exactly-evaluable band-limited test functions.

Each signal is an entire function of exponential type at most its bandwidth,
bounded on the real axis, and evaluable at complex arguments (needed by the
contour oracle). ``sup_bound`` is a valid upper bound for the sup-norm on R,
not necessarily the exact supremum; every error bound stays valid with an
upper bound.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Signal",
    "SincSignal",
    "CosSignal",
    "SincSquaredSignal",
    "ShiftedSincCombo",
]

# Below this |argument| the direct ratio sin(w)/w is replaced by its Taylor
# polynomial; three terms keep the relative error under 1e-16 at the switch.
_TAYLOR_SWITCH = 1e-6


def _sinc(w):
    """sin(w)/w with the removable singularity handled by a series branch."""
    w = np.asarray(w)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    out = np.empty_like(w, dtype=np.result_type(w, np.float64))
    small = np.abs(w) < _TAYLOR_SWITCH
    ws = w[small]
    out[small] = 1.0 - ws * ws / 6.0 + ws**4 / 120.0
    wl = w[~small]
    out[~small] = np.sin(wl) / wl
    return out[0] if scalar else out


class Signal:
    """Base class: bandwidth, sup-norm bound, and complex-capable evaluation."""

    kind: str = "abstract"

    def __init__(self, bandwidth: float, sup_bound: float) -> None:
        if not 0.0 < bandwidth < np.pi:
            raise ValueError(
                f"bandwidth must lie in (0, pi) for an oversampling margin, got {bandwidth}"
            )
        self.bandwidth = float(bandwidth)
        self.sup_bound = float(sup_bound)

    def eval(self, z):
        raise NotImplementedError

    def __call__(self, z):
        return self.eval(z)


class SincSignal(Signal):
    """sin(sigma z) / (sigma z); value 1 at the origin."""

    kind = "sinc"

    def __init__(self, bandwidth: float) -> None:
        super().__init__(bandwidth, 1.0)

    def eval(self, z):
        return _sinc(self.bandwidth * np.asarray(z))


class CosSignal(Signal):
    """cos(sigma z)."""

    kind = "cos"

    def __init__(self, bandwidth: float) -> None:
        super().__init__(bandwidth, 1.0)

    def eval(self, z):
        return np.cos(self.bandwidth * np.asarray(z))


class SincSquaredSignal(Signal):
    """(sin(sigma z / 2) / (sigma z / 2))^2; type sigma as the square of a
    type sigma/2 function."""

    kind = "sinc_squared"

    def __init__(self, bandwidth: float) -> None:
        super().__init__(bandwidth, 1.0)

    def eval(self, z):
        half = _sinc(0.5 * self.bandwidth * np.asarray(z))
        return half * half


class ShiftedSincCombo(Signal):
    """sum_j c_j sin(sigma (z - a_j)) / (sigma (z - a_j)); sup bound sum|c_j|."""

    kind = "shifted_sinc_combo"

    def __init__(self, bandwidth: float, terms: list[tuple[float, float]]) -> None:
        if not terms:
            raise ValueError("at least one (coefficient, shift) term required")
        super().__init__(bandwidth, sum(abs(c) for c, _ in terms))
        self.terms = tuple((float(c), float(a)) for c, a in terms)

    def eval(self, z):
        z = np.asarray(z)
        out = 0.0
        for c, a in self.terms:
            out = out + c * _sinc(self.bandwidth * (z - a))
        return out
