"""Band-limited reconstruction from nonuniform samples.

Core pieces: sampling sequences (uniform, perturbed, sine-type crossings),
band-limited test signals, canonical-product generating functions, Gaussian
and hyper-Gaussian regularizers, the regularized sampling series with its
explicit error bounds, contour-integral and asymptotic verification oracles,
and a sweep harness. A FastAPI service wraps the package; the command-line
tool is a thin client of that service.
"""

__version__ = "0.1.0"

from .sequences import (  # noqa: E402,F401
    SineCombo,
    make_perturbed,
    make_sine_type,
    make_uniform,
    validate,
)
from .signals import (  # noqa: F401
    CosSignal,
    ShiftedSincCombo,
    SincSignal,
    SincSquaredSignal,
)
from .genfun import ProductWindow, Rectangle, basis, default_window, phi, phi_floor, phi_prime_at  # noqa: F401
from .regularizers import eval_G, hyper_constants, make_gaussian, make_hyper_gaussian  # noqa: F401
from .reconstruction import max_error, plan, reconstruct, recenter  # noqa: F401
from .bounds import corollary_bound, gaussian_bound, hyper_rate_bound  # noqa: F401
from .oracle import (  # noqa: F401
    ContourSpec,
    boundary_layer_check,
    hm_landscape,
    laplace_asymptotic_check,
    residue_error,
    side_decomposition,
)
from .harness import SweepSettings, fit_rate, sweep  # noqa: F401
