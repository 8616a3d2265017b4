import cmath
import math

import numpy as np
import pytest

from nusamp import genfun
from nusamp.genfun import ProductWindow, Rectangle

RAW_LARGE = ProductWindow(100_000, tail_correction=False)
CORRECTED = ProductWindow(512)


class TestPhi:
    def test_uniform_matches_sine_product_identity(self, uniform):
        # classical identity: z * prod (1 - z^2/k^2) -> sin(pi z)/pi
        expected = math.sin(math.pi * 0.5) / math.pi
        raw = genfun.phi(uniform, 0.5, RAW_LARGE).value
        assert abs(raw - expected) / expected < 1e-5
        corrected = genfun.phi(uniform, 0.5, CORRECTED).value
        assert abs(corrected - expected) / expected < 1e-12

    def test_node_gives_exact_zero_flag(self, perturbed):
        lam3 = perturbed.value(3)
        v = genfun.phi(perturbed, lam3, CORRECTED)
        assert v.is_zero
        assert v.value == 0.0

    def test_uniform_complex_argument(self, uniform):
        z = 0.5 + 1.0j
        expected = cmath.sin(math.pi * z) / math.pi
        raw = genfun.phi(uniform, z, RAW_LARGE).value
        # bare truncation discards a tail worth |z|^2 / M in the log
        assert abs(raw - expected) / abs(expected) < 1.5 * abs(z * z) / RAW_LARGE.half_width
        corrected = genfun.phi(uniform, z, CORRECTED).value
        assert abs(corrected - expected) / abs(expected) < 1e-12

    def test_conjugate_symmetry(self, sine_type):
        z = 0.7 + 0.4j
        a = genfun.phi(sine_type, z, CORRECTED).value
        b = genfun.phi(sine_type, z.conjugate(), CORRECTED).value
        assert b == pytest.approx(a.conjugate(), rel=1e-12)


class TestPhiPrime:
    def test_uniform_node_zero(self, uniform):
        # derivative of sin(pi z)/pi at 0 is 1
        raw = genfun.phi_prime_at(uniform, 0, RAW_LARGE).value
        assert abs(raw - 1.0) < 1e-5
        corrected = genfun.phi_prime_at(uniform, 0, CORRECTED).value
        assert abs(corrected - 1.0) < 1e-13

    def test_uniform_node_one(self, uniform):
        # cos(pi) = -1
        raw = genfun.phi_prime_at(uniform, 1, RAW_LARGE).value
        assert abs(raw + 1.0) < 1e-5
        corrected = genfun.phi_prime_at(uniform, 1, CORRECTED).value
        assert abs(corrected + 1.0) < 1e-13

    @pytest.mark.parametrize("n", [-4, 0, 2, 7])
    def test_matches_finite_difference(self, perturbed, n):
        w = CORRECTED
        lam = perturbed.value(n)
        h = 1e-6
        fd = (
            genfun.phi(perturbed, lam + h, w).value
            - genfun.phi(perturbed, lam - h, w).value
        ) / (2 * h)
        analytic = genfun.phi_prime_at(perturbed, n, w).value
        assert fd == pytest.approx(analytic, rel=1e-5)

    def test_index_domain(self, uniform):
        with pytest.raises(ValueError):
            genfun.phi_prime_at(uniform, 600, CORRECTED)


class TestBasis:
    def test_kronecker_property_exact(self, perturbed):
        nodes = {k: perturbed.value(k) for k in range(-5, 6)}
        for n in (-3, 0, 2):
            for k, lam in nodes.items():
                expected = 1.0 if k == n else 0.0
                assert genfun.basis(perturbed, n, lam, CORRECTED) == expected

    def test_uniform_center_is_sinc(self, uniform):
        got = genfun.basis(uniform, 0, 0.5, CORRECTED)
        assert got == pytest.approx(2.0 / math.pi, rel=1e-12)

    def test_other_node_is_exact_zero(self, uniform):
        assert genfun.basis(uniform, 0, 5.0, CORRECTED) == 0.0

    def test_matches_sinc_along_grid(self, uniform):
        xs = np.linspace(-3.3, 3.3, 23)
        for n in (-2, 0, 3):
            for x in xs:
                want = np.sinc(x - n)
                got = genfun.basis(uniform, n, float(x), CORRECTED)
                assert got == pytest.approx(want, rel=1e-10, abs=1e-13)

    def test_doubling_window_control_uniform(self, uniform):
        # corrected product: widening the window must not move basis values
        big = ProductWindow(1024)
        for n, z in ((0, 0.37), (3, 0.9), (5, 5.8)):
            a = genfun.basis(uniform, n, z, CORRECTED)
            b = genfun.basis(uniform, n, z, big)
            assert b == pytest.approx(a, rel=1e-10)

    def test_doubling_window_control_perturbed(self, perturbed):
        # nonuniform tails are only known within the perturbation radius, so
        # the control tolerance follows the analytic tail budget
        # |log change| <= 2 L (|z| + |lambda_n|) * sum_{k>M} k^-2
        big = ProductWindow(1024)
        for n, z in ((0, 0.37), (3, 0.9), (5, 5.8)):
            a = genfun.basis(perturbed, n, z, CORRECTED)
            b = genfun.basis(perturbed, n, z, big)
            budget = 2 * 0.2 * (abs(z) + abs(perturbed.value(n)) + 1) / 512
            assert abs(b / a - 1.0) <= budget

    def test_normalization_invariance_against_closed_form(self, sine_type):
        # the crossing function A sin(pi z) - g(z) is itself a generating
        # function of the same zeros; basis values agree up to the tail budget
        w = ProductWindow(2048)
        nodes = sine_type.window(8)

        def closed_basis(n, z):
            lam = nodes[n + 8]
            num = sine_type.crossing(z)
            den = sine_type.crossing_derivative(lam) * (z - lam)
            return num / den

        for n, z in ((0, 0.4), (2, 0.4), (-3, 1.2)):
            a = genfun.basis(sine_type, n, z, w)
            b = float(closed_basis(n, z))
            assert a == pytest.approx(b, rel=1e-3)


class TestPhiFloor:
    def test_uniform_floor_value(self, uniform):
        # the sampled boundary minimum of |phi| e^{-pi |Im|} for the integer
        # lattice sits at 1/(2 pi) in product normalization; times 0.9 safety
        pl_n = 10
        rect = Rectangle(-(pl_n + 0.5), pl_n + 0.5, -(pl_n - 0.5), pl_n - 0.5)
        floor = genfun.phi_floor(uniform, rect, window=CORRECTED)
        assert floor * math.pi == pytest.approx(0.45, abs=5e-4)

    def test_sine_type_floor_positive(self, sine_type):
        nodes = sine_type.window(11)
        rect = Rectangle(
            0.5 * (nodes[1] + nodes[0]),
            0.5 * (nodes[21] + nodes[22]),
            -9.5,
            9.5,
        )
        assert genfun.phi_floor(sine_type, rect, window=CORRECTED) > 0.0

    def test_perturbed_floor_decay_is_polynomially_bounded(self, perturbed):
        # the floor may decay with the window, but no faster than radius^-0.8
        floors = []
        radii = []
        for n in (5, 10, 15, 20):
            nodes = perturbed.window(n + 1)
            t_plus = 0.5 * (nodes[2 * n + 1] + nodes[2 * n + 2])
            t_minus = 0.5 * (nodes[1] + nodes[0])
            margin = min(nodes[n] - t_minus, t_plus - nodes[n + 2])
            rect = Rectangle(t_minus, t_plus, -margin, margin)
            floors.append(genfun.phi_floor(perturbed, rect, window=CORRECTED))
            radii.append(math.sqrt(max(t_plus**2, t_minus**2) + margin**2))
        assert all(f > 0 for f in floors)
        slope = np.polyfit(np.log(radii), np.log(floors), 1)[0]
        assert slope >= -0.8

    def test_requires_window(self, uniform):
        with pytest.raises(ValueError):
            genfun.phi_floor(uniform, Rectangle(-1, 1, -1, 1))


class TestLogValue:
    def test_roundtrip(self):
        v = genfun.LogValue.from_value(-3.5)
        assert v.value == pytest.approx(-3.5, rel=1e-15)
        assert not v.is_zero

    def test_zero(self):
        v = genfun.LogValue.from_value(0.0)
        assert v.is_zero and v.value == 0.0


def test_window_validation():
    with pytest.raises(ValueError):
        ProductWindow(1)
