from math import erf, factorial, pi, sqrt

import numpy as np
import pytest
from numpy.polynomial import hermite as H

from fermitangle.errors import BadArgs, GridTooCoarse
from fermitangle.trap import (
    TrapGrid,
    analytic_ordered_kernel,
    hermite_mode,
    kernel_purity,
    one_body_kernel,
    psi_gs,
    psi_ordered,
    read_kernel_csv,
    trap_report,
    write_density_csv,
    write_kernel_csv,
)
from fermitangle.trap import Kernel
from oracles import trapezoid_2d

# 1 - Tr rho_1^2 for the labeled state, from the closed-form kernel below on a
# 1600-point grid over [-7, 7] (400 and 800 points agree to 2e-9).
LABELED_ENTROPY_ORACLE = 0.3672953148


def hermite_function_oracle(k, u):
    coeffs = np.zeros(k + 1)
    coeffs[k] = 1
    return H.hermval(u, coeffs) * np.exp(-u * u / 2) / sqrt(2.0 ** k * factorial(k) * sqrt(pi))


def labeled_kernel_closed_form(u, up):
    """K(u,u') = exp(-(u^2+u'^2)/2)/pi * int |v-u||v-u'| exp(-v^2) dv, done with erf."""
    erfv = np.vectorize(erf)
    a, b = np.minimum(u, up), np.maximum(u, up)
    f0 = sqrt(pi) / 2 * (erfv(b) - erfv(a))
    f1 = (np.exp(-a * a) - np.exp(-b * b)) / 2
    f2 = (a * np.exp(-a * a) - b * np.exp(-b * b)) / 2 + f0 / 2
    inner = f2 - (a + b) * f1 + a * b * f0
    full = sqrt(pi) / 2 + a * b * sqrt(pi)
    return np.exp(-(u * u + up * up) / 2) / pi * (full - 2 * inner)


class TestGrid:
    def test_weights_sum(self):
        g = TrapGrid(6.0, 600)
        assert g.weights.sum() == pytest.approx(12.0, abs=1e-12)
        assert g.nodes[0] == -6 and g.nodes[-1] == 6

    @pytest.mark.parametrize("L,n", [(6, 2), (0, 10), (-1, 10)])
    def test_invalid(self, L, n):
        with pytest.raises(BadArgs):
            TrapGrid(L, n)


class TestModes:
    def test_ground_at_origin(self):
        assert hermite_mode(0, 0.0) == pytest.approx(pi ** -0.25)
        assert hermite_mode(0, 0.0) == pytest.approx(0.7511255444649425)

    def test_first_excited_odd(self):
        assert hermite_mode(1, 0.0) == 0

    @pytest.mark.parametrize("k", [0, 1, 2, 5, 12])
    def test_against_polynomial_form(self, k):
        u = np.linspace(-5, 5, 41)
        np.testing.assert_allclose(hermite_mode(k, u), hermite_function_oracle(k, u), atol=1e-12)

    def test_orthonormal(self):
        g = TrapGrid(8.0, 801)
        modes = np.array([hermite_mode(k, g.nodes) for k in range(4)])
        gram = (modes * g.weights) @ modes.T
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)

    def test_negative_index(self):
        with pytest.raises(BadArgs):
            hermite_mode(-1, 0.0)


class TestWavefunctions:
    def test_node_at_coincidence(self):
        u = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(psi_gs(u, u), 0, atol=1e-16)

    def test_symmetry(self, rng):
        a, b = rng.normal(size=(2, 20))
        np.testing.assert_allclose(psi_gs(a, b), psi_gs(b, a))
        np.testing.assert_allclose(psi_ordered(a, b), -psi_ordered(b, a))
        np.testing.assert_allclose(np.abs(psi_ordered(a, b)), psi_gs(a, b))

    def test_normalized(self):
        g = TrapGrid(7.0, 701)
        U, V = np.meshgrid(g.nodes, g.nodes, indexing="ij")
        assert trapezoid_2d(psi_gs(U, V) ** 2, g.spacing) == pytest.approx(1, abs=1e-8)
        assert trapezoid_2d(psi_ordered(U, V) ** 2, g.spacing) == pytest.approx(1, abs=1e-8)


class TestKernels:
    def test_ordered_matches_analytic(self, backend):
        g = TrapGrid()
        k = one_body_kernel("ordered", g)
        assert np.max(np.abs(k.values - analytic_ordered_kernel(g))) <= 1e-6

    def test_labeled_matches_closed_form(self, backend):
        g = TrapGrid(6.0, 200)
        k = one_body_kernel("labeled", g)
        U, V = np.meshgrid(g.nodes, g.nodes, indexing="ij")
        np.testing.assert_allclose(k.values, labeled_kernel_closed_form(U, V), atol=2e-3)

    def test_densities_coincide(self):
        g = TrapGrid()
        expected = 0.5 * (hermite_mode(0, g.nodes) ** 2 + hermite_mode(1, g.nodes) ** 2)
        for kind in ("labeled", "ordered"):
            k = one_body_kernel(kind, g)
            np.testing.assert_allclose(k.density(), expected, atol=1e-6)
            assert k.trace() == pytest.approx(1, abs=1e-6)

    def test_symmetric(self):
        k = one_body_kernel("labeled", TrapGrid(5.0, 101))
        np.testing.assert_array_equal(k.values, k.values.T)

    def test_eigenvalues(self):
        for kind in ("labeled", "ordered"):
            lam = one_body_kernel(kind).eigenvalues()
            assert lam.min() >= -1e-8
            assert lam.sum() == pytest.approx(1, abs=1e-6)

    def test_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            one_body_kernel("ordered", TrapGrid(1.0, 50))

    def test_unknown_kind(self):
        with pytest.raises(BadArgs):
            one_body_kernel("bosonic")


class TestPurity:
    def test_ordered_half(self, backend):
        assert kernel_purity(one_body_kernel("ordered")) == pytest.approx(0.5, abs=1e-3)

    def test_labeled(self, backend):
        assert kernel_purity(one_body_kernel("labeled")) == pytest.approx(0.64, abs=1e-2)
        assert 1 - kernel_purity(one_body_kernel("labeled")) == pytest.approx(LABELED_ENTROPY_ORACLE, abs=1e-4)

    def test_pure_product(self):
        g = TrapGrid()
        phi0 = hermite_mode(0, g.nodes)
        assert kernel_purity(Kernel(g, np.outer(phi0, phi0))) == pytest.approx(1, abs=1e-6)

    @pytest.mark.parametrize("L,n", [(4.0, 50), (5.0, 120), (6.0, 600)])
    def test_labeled_purer_than_ordered(self, L, n):
        # ~0.63 vs 0.5: the labeled pair carries less linear entropy
        g = TrapGrid(L, n)
        assert kernel_purity(one_body_kernel("labeled", g)) > kernel_purity(one_body_kernel("ordered", g))

    def test_ordered_second_order_convergence(self):
        for n in (51, 101, 201, 401):
            g = TrapGrid(6.0, n)
            err = abs(kernel_purity(one_body_kernel("ordered", g)) - 0.5)
            assert err <= 1.0 * g.spacing ** 2

    def test_labeled_converges_to_oracle(self):
        errs = [abs(1 - kernel_purity(one_body_kernel("labeled", TrapGrid(7.0, n))) - LABELED_ENTROPY_ORACLE)
                for n in (101, 201, 401)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[1] / errs[2] > 3.0


class TestReport:
    def test_reference_values(self):
        r = trap_report(TrapGrid(6.0, 600))
        assert 0.35 <= r.S_L_labeled <= 0.37
        assert 0.499 <= r.S_L_ordered <= 0.501

    def test_convergence_shrinks(self):
        coarse = trap_report(TrapGrid(6.0, 150)).convergence
        fine = trap_report(TrapGrid(6.0, 300)).convergence
        assert fine < coarse

    def test_ordered_entropy_matches_spectrum(self):
        g = TrapGrid()
        r = trap_report(g)
        lam = one_body_kernel("ordered", g).eigenvalues()
        assert r.S_L_ordered == pytest.approx(1 - np.sum(lam ** 2), abs=1e-6)


class TestCsv:
    def test_round_trip(self, tmp_path):
        g = TrapGrid(5.0, 60)
        k = one_body_kernel("ordered", g)
        p = write_kernel_csv(k, tmp_path / "k.csv")
        assert p.read_text().splitlines()[0] == "u,u_prime,value"
        nodes, values = read_kernel_csv(p)
        np.testing.assert_allclose(nodes, g.nodes)
        np.testing.assert_array_equal(values, k.values)

    def test_density(self, tmp_path):
        k = one_body_kernel("labeled", TrapGrid(5.0, 60))
        p = write_density_csv(k, tmp_path / "d.csv")
        lines = p.read_text().splitlines()
        assert lines[0] == "u,density"
        assert len(lines) == 61
