"""Sampling sequences: uniform, randomly perturbed uniform, and sine-type crossings.

Every sequence is an ordered set of real abscissas {lambda_n, n in Z} with
lambda_0 = 0, strictly increasing, and separated (positive infimum gap).
Values are computable on demand from the index alone, so a product window can
be widened without recomputing anything, and two constructions with the same
parameters agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SamplingSequence",
    "UniformSequence",
    "PerturbedSequence",
    "SineTypeSequence",
    "TranslatedSequence",
    "SineCombo",
    "ValidationReport",
    "make_uniform",
    "make_perturbed",
    "make_sine_type",
    "validate",
]

_SPLITMIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)

# Bracketed root refinement: bisect to this width, then polish with Newton.
_BISECT_WIDTH = 1e-8
_ROOT_TOL = 1e-13


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """Stateless 64-bit finalizer; uniform output for counter-style input."""
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _unit_from_counter(seed: int, indices: np.ndarray) -> np.ndarray:
    """Deterministic u in [0, 1) keyed by (seed, index); order-independent."""
    with np.errstate(over="ignore"):
        ctr = np.uint64(seed) + indices.view(np.uint64) * _SPLITMIX_GAMMA
        h = _splitmix64(ctr)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


class SamplingSequence:
    """Base class. Subclasses implement ``values`` for arbitrary index arrays.

    Metadata attributes (``None`` when no closed-form guarantee exists):
      separation_floor  -- proven lower bound on consecutive gaps
      offset_bound      -- proven bound on sup |lambda_n - n|
      symmetry_bound    -- proven bound on sup_N |lambda_N + lambda_{-N}|
    """

    kind: str = "abstract"
    separation_floor: float | None = None
    offset_bound: float | None = None
    symmetry_bound: float | None = None

    def __init__(self) -> None:
        self._window_cache: dict[int, np.ndarray] = {}

    def values(self, indices: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value(self, n: int) -> float:
        return float(self.values(np.asarray([n], dtype=np.int64))[0])

    def window(self, half_width: int) -> np.ndarray:
        """Nodes lambda_n for n = -half_width .. half_width (cached, write-once)."""
        got = self._window_cache.get(half_width)
        if got is None:
            idx = np.arange(-half_width, half_width + 1, dtype=np.int64)
            got = self.values(idx)
            got.setflags(write=False)
            self._window_cache[half_width] = got
        return got

    def descriptor(self) -> tuple:
        """Hashable identity of (kind, parameters, seed)."""
        raise NotImplementedError


class UniformSequence(SamplingSequence):
    """The integer lattice: lambda_n = n."""

    kind = "uniform"
    separation_floor = 1.0
    offset_bound = 0.0
    symmetry_bound = 0.0

    def values(self, indices: np.ndarray) -> np.ndarray:
        return np.asarray(indices, dtype=np.float64).copy()

    def descriptor(self) -> tuple:
        return ("uniform",)


class PerturbedSequence(SamplingSequence):
    """lambda_n = n + d_n with d_n drawn from a counter-based generator.

    Offsets satisfy |d_n| <= max_offset < 1/2 and d_0 = 0, which forces
    strict monotonicity and gaps of at least 1 - 2*max_offset.
    """

    kind = "perturbed"

    def __init__(self, max_offset: float, seed: int) -> None:
        if not 0.0 <= max_offset < 0.5:
            raise ValueError(
                f"perturbation radius must lie in [0, 1/2), got {max_offset}"
            )
        super().__init__()
        self.max_offset = float(max_offset)
        self.seed = int(seed)
        self.separation_floor = 1.0 - 2.0 * self.max_offset
        self.offset_bound = self.max_offset
        self.symmetry_bound = 2.0 * self.max_offset

    def values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        u = _unit_from_counter(self.seed, idx)
        d = self.max_offset * (2.0 * u - 1.0)
        d[idx == 0] = 0.0
        return idx.astype(np.float64) + d

    def descriptor(self) -> tuple:
        return ("perturbed", self.max_offset, self.seed)


@dataclass(frozen=True)
class SineCombo:
    """Finite combination sum_j c_j sin(nu_j x) with 0 < nu_j < pi.

    Vanishes at 0, is real on the real axis, and is entire of exponential
    type max(nu_j) < pi, so A sin(pi x) dominates it on half-integer brackets
    whenever sum |c_j| < A.
    """

    terms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        for c, nu in self.terms:
            if not 0.0 < nu < np.pi:
                raise ValueError(f"frequency must lie in (0, pi), got {nu}")

    @property
    def sum_abs_coeff(self) -> float:
        return float(sum(abs(c) for c, _ in self.terms))

    def value(self, x):
        out = np.zeros_like(np.asarray(x, dtype=np.result_type(x, np.float64)))
        for c, nu in self.terms:
            out = out + c * np.sin(nu * np.asarray(x))
        return out

    def derivative(self, x):
        out = np.zeros_like(np.asarray(x, dtype=np.result_type(x, np.float64)))
        for c, nu in self.terms:
            out = out + c * nu * np.cos(nu * np.asarray(x))
        return out


class SineTypeSequence(SamplingSequence):
    """Zeros of the crossing function A sin(pi x) - g(x), one per bracket
    (n - 1/2, n + 1/2).

    The sign of the crossing function at half-integers is A*(-1)^n -+ g, which
    alternates because |g| <= sum|c_j| < A, so each bracket holds a sign
    change. Roots are located by bisection down to width 1e-8 and polished
    with Newton steps; if Newton leaves the bracket the bisection simply
    continues to the target tolerance.
    """

    kind = "sine_type"
    offset_bound = 0.5
    symmetry_bound = 1.0

    def __init__(self, amplitude: float, combo: SineCombo) -> None:
        if amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if combo.sum_abs_coeff >= amplitude:
            raise ValueError(
                "sum of |coefficients| must be strictly below the amplitude "
                f"({combo.sum_abs_coeff} >= {amplitude})"
            )
        super().__init__()
        self.amplitude = float(amplitude)
        self.combo = combo

    def crossing(self, x):
        return self.amplitude * np.sin(np.pi * np.asarray(x)) - self.combo.value(x)

    def crossing_derivative(self, x):
        return self.amplitude * np.pi * np.cos(
            np.pi * np.asarray(x)
        ) - self.combo.derivative(x)

    def values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        lo = idx.astype(np.float64) - 0.5
        hi = idx.astype(np.float64) + 0.5
        flo = self.crossing(lo)
        bad = np.sign(flo) == np.sign(self.crossing(hi))
        if np.any(bad & (idx != 0)):
            raise RuntimeError(
                "no sign change on a half-integer bracket; the crossing "
                "function preconditions are violated"
            )

        steps = int(np.ceil(np.log2(1.0 / _BISECT_WIDTH)))
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            fm = self.crossing(mid)
            go_right = (np.sign(fm) == np.sign(flo)) & (fm != 0.0)
            lo = np.where(go_right, mid, lo)
            flo = np.where(go_right, fm, flo)
            hi = np.where(go_right, hi, mid)

        x = 0.5 * (lo + hi)
        for _ in range(6):
            fx = self.crossing(x)
            dfx = self.crossing_derivative(x)
            step = np.where(dfx != 0.0, fx / np.where(dfx != 0.0, dfx, 1.0), 0.0)
            x_new = x - step
            inside = (x_new > lo) & (x_new < hi)
            x = np.where(inside, x_new, x)

        # Fallback: keep bisecting wherever Newton failed to converge.
        stuck = np.abs(self.crossing(x)) > _ROOT_TOL * self.amplitude
        if np.any(stuck):
            lo_s, hi_s, flo_s = lo[stuck], hi[stuck], flo[stuck]
            for _ in range(30):
                mid = 0.5 * (lo_s + hi_s)
                fm = self.crossing(mid)
                go_right = (np.sign(fm) == np.sign(flo_s)) & (fm != 0.0)
                lo_s = np.where(go_right, mid, lo_s)
                flo_s = np.where(go_right, fm, flo_s)
                hi_s = np.where(go_right, hi_s, mid)
            xs = x.copy()
            xs[stuck] = 0.5 * (lo_s + hi_s)
            x = xs

        x = np.where(idx == 0, 0.0, x)  # g(0) = 0 makes 0 an exact root
        return x

    def descriptor(self) -> tuple:
        return ("sine_type", self.amplitude, self.combo.terms)


class TranslatedSequence(SamplingSequence):
    """View of a base sequence re-indexed so node ``shift`` becomes index 0:
    lambda'_n = lambda_{n + shift} - lambda_shift.

    Metadata carries over conservatively: gaps are unchanged; the offset and
    symmetry budgets at worst double relative to the base sequence.
    """

    kind = "translated"

    def __init__(self, base: SamplingSequence, shift: int) -> None:
        super().__init__()
        self.base = base
        self.shift = int(shift)
        self.center = base.value(self.shift)
        self.separation_floor = base.separation_floor
        if base.offset_bound is not None:
            self.offset_bound = 2.0 * base.offset_bound
            self.symmetry_bound = 4.0 * base.offset_bound
        else:
            self.offset_bound = None
            self.symmetry_bound = None

    def values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        return self.base.values(idx + self.shift) - self.center

    def descriptor(self) -> tuple:
        return ("translated", self.base.descriptor(), self.shift)


def make_uniform() -> UniformSequence:
    return UniformSequence()


def make_perturbed(max_offset: float, seed: int) -> PerturbedSequence:
    return PerturbedSequence(max_offset, seed)


def make_sine_type(amplitude: float, combo: SineCombo) -> SineTypeSequence:
    return SineTypeSequence(amplitude, combo)


@dataclass(frozen=True)
class ValidationReport:
    """Empirical sequence diagnostics over a symmetric index window."""

    window: int
    lambda0_exact: bool
    strictly_increasing: bool
    separation: float
    separation_floor_ok: bool
    symmetry_budget: float
    density_ratio: float | None
    root_residual: float | None = None

    @property
    def passed(self) -> bool:
        return self.lambda0_exact and self.strictly_increasing and self.separation_floor_ok


def validate(seq: SamplingSequence, window: int) -> ValidationReport:
    """Check lambda_0 = 0, monotonicity, separation, and symmetry budget over
    |n| <= window; for sine-type sequences also the density ratio lambda_M / M
    and the worst crossing-function residual at the returned roots."""
    if window < 1:
        raise ValueError("validation window must be >= 1")
    nodes = seq.window(window)
    gaps = np.diff(nodes)
    separation = float(gaps.min())
    floor = seq.separation_floor
    # Allow one ulp of slack when a closed-form floor is attained exactly.
    floor_ok = True if floor is None else separation >= floor * (1.0 - 1e-12)
    sym = float(np.abs(nodes[window:] + nodes[window::-1]).max())
    density = None
    residual = None
    if isinstance(seq, SineTypeSequence):
        density = float(nodes[-1] / window)
        residual = float(np.abs(seq.crossing(nodes)).max())
    return ValidationReport(
        window=window,
        lambda0_exact=bool(nodes[window] == 0.0),
        strictly_increasing=bool(np.all(gaps > 0)),
        separation=separation,
        separation_floor_ok=bool(floor_ok),
        symmetry_budget=sym,
        density_ratio=density,
        root_residual=residual,
    )
