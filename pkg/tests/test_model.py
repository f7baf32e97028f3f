import math

import numpy as np
import pytest

from spinbatt.model import ModelParams, build_hamiltonian, coupling_element


class TestModelParams:
    def test_valid_construction(self):
        p = ModelParams(3, 5, 2)
        assert p.coupling == 1.0 and p.omega == 1.0
        assert p.d == 2

    def test_d_is_min_of_battery_and_excitations(self):
        assert ModelParams(7, 9, 4).d == 4
        assert ModelParams(2, 9, 6).d == 2

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_b=0, n_c=1, m=1),
            dict(n_b=1, n_c=0, m=1),
            dict(n_b=1, n_c=1, m=0),
            dict(n_b=1, n_c=3, m=4),
            dict(n_b=1, n_c=1, m=1, coupling=0.0),
            dict(n_b=1, n_c=1, m=1, coupling=-2.0),
            dict(n_b=1, n_c=1, m=1, omega=0.0),
            dict(n_b=1, n_c=1, m=1, omega=float("nan")),
        ],
    )
    def test_invalid_parameters_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)

    def test_non_integer_counts_rejected(self):
        with pytest.raises(ValueError):
            ModelParams(2.5, 4, 2)


class TestCouplingElement:
    def test_all_unit_factors(self):
        assert coupling_element(ModelParams(1, 1, 1), 1) == 1.0

    def test_hand_evaluated_two_by_two(self):
        # sqrt(1*2*1*2) and sqrt(2*1*2*1)
        p = ModelParams(2, 2, 2)
        assert coupling_element(p, 1) == 2.0
        assert coupling_element(p, 2) == 2.0

    def test_out_of_range_j_names_range(self):
        p = ModelParams(3, 5, 2)
        with pytest.raises(ValueError, match="1..2"):
            coupling_element(p, 3)
        with pytest.raises(ValueError):
            coupling_element(p, 0)

    def test_coupling_scaling_is_exact(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n_b = int(rng.integers(1, 40))
            n_c = int(rng.integers(1, 40))
            m = int(rng.integers(1, n_c + 1))
            scale = float(rng.uniform(0.1, 7.0))
            base = ModelParams(n_b, n_c, m)
            scaled = ModelParams(n_b, n_c, m, coupling=scale)
            for j in range(1, base.d + 1):
                assert coupling_element(scaled, j) == scale * coupling_element(base, j)

    def test_radicand_factors_all_positive(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n_b = int(rng.integers(1, 30))
            n_c = int(rng.integers(1, 30))
            m = int(rng.integers(1, n_c + 1))
            d = min(n_b, m)
            for j in range(1, d + 1):
                assert j >= 1
                assert n_b - j + 1 >= 1
                assert n_c - m + j >= 1
                assert m - j + 1 >= 1
                assert coupling_element(ModelParams(n_b, n_c, m), j) > 0.0


class TestPalindromicCouplings:
    """u_j = u_{d+1-j} holds when mirroring j swaps the four radicand
    factors pairwise: for m <= n_b that needs n_b = n_c, for m >= n_b it
    needs n_b + n_c = 2m (integer products here stay below 2^53, so the
    equality is exact in floating point)."""

    @pytest.mark.parametrize("n", [2, 3, 5, 11, 30])
    def test_equal_battery_and_charger(self, n):
        for m in range(1, n + 1):
            p = ModelParams(n, n, m)
            u = build_hamiltonian(p).offdiag
            assert np.array_equal(u, u[::-1])

    @pytest.mark.parametrize("n_b,n_c,m", [(2, 4, 3), (3, 7, 5), (4, 10, 7)])
    def test_balanced_excitation_sector(self, n_b, n_c, m):
        assert n_b + n_c == 2 * m
        u = build_hamiltonian(ModelParams(n_b, n_c, m)).offdiag
        assert np.array_equal(u, u[::-1])

    def test_counterexample_battery_equals_excitations(self):
        # n_b = m alone does not make the couplings palindromic
        u = build_hamiltonian(ModelParams(2, 4, 2)).offdiag
        assert u[0] != u[1]


class TestBuildHamiltonian:
    def test_single_pair(self):
        h = build_hamiltonian(ModelParams(1, 1, 1))
        assert h.dim == 2
        assert h.offdiag.tolist() == [1.0]

    def test_dimension_tracks_min(self):
        assert build_hamiltonian(ModelParams(3, 5, 2)).dim == 3

    def test_hand_evaluated_offdiagonals(self):
        # sqrt(1*2*2*3) and sqrt(2*1*3*2)
        h = build_hamiltonian(ModelParams(2, 4, 3))
        assert np.allclose(h.offdiag, [math.sqrt(12.0), math.sqrt(12.0)], rtol=0, atol=0)

    def test_dense_is_symmetric_with_zero_diagonal(self):
        h = build_hamiltonian(ModelParams(4, 9, 6))
        dense = h.dense()
        assert np.array_equal(dense, dense.T)
        assert np.all(np.diag(dense) == 0.0)
        assert np.array_equal(np.diag(dense, 1), h.offdiag)

    def test_offdiag_matches_elementwise(self):
        p = ModelParams(6, 8, 5)
        h = build_hamiltonian(p)
        for j in range(1, p.d + 1):
            assert h.offdiag[j - 1] == coupling_element(p, j)
