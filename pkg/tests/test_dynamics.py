import math

import numpy as np
import pytest

from spinbatt.dynamics import (
    StateVector,
    delta_e_at,
    delta_e_rate_at,
    energy_stored,
    efficiency,
    populations_on_grid,
    propagate,
    sample_trajectory,
)
from spinbatt.eigensolve import decompose
from spinbatt.model import ModelParams, build_hamiltonian, coupling_element
from spinbatt import oracle


def eig_for(params):
    return decompose(build_hamiltonian(params))


def random_params(rng, n_max=20):
    n_b = int(rng.integers(1, n_max))
    n_c = int(rng.integers(1, n_max))
    m = int(rng.integers(1, n_c + 1))
    return ModelParams(n_b, n_c, m, coupling=float(rng.uniform(0.2, 3.0)))


class TestPropagate:
    def test_identity_at_time_zero(self):
        p = ModelParams(4, 7, 5)
        state = propagate(eig_for(p), 0.0)
        expected = np.zeros(p.d + 1)
        expected[0] = 1.0
        assert np.allclose(state.amplitudes, expected, atol=1e-12)

    def test_single_pair_rabi_populations(self):
        # 2x2 exchange: |psi_1(t)|^2 = sin^2(t)
        p = ModelParams(1, 1, 1)
        eig = eig_for(p)
        for t in (0.3, 1.0, math.pi / 2, 2.2):
            state = propagate(eig, t)
            assert abs(abs(state.amplitudes[1]) ** 2 - math.sin(t) ** 2) < 1e-12

    def test_agrees_with_full_space_oracle(self):
        p = ModelParams(2, 2, 2)
        t = math.pi / (2.0 * math.sqrt(2.0)) / 2.0
        sector = energy_stored(propagate(eig_for(p), t), p)
        full = oracle.oracle_trajectory(p, [t]).delta_e[0]
        assert abs(sector - full) <= 1e-10

    def test_norm_preserved(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            p = random_params(rng)
            state = propagate(eig_for(p), float(rng.uniform(0, 50)))
            assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) <= 1e-10


class TestObservables:
    def test_initial_state_stores_nothing(self):
        p = ModelParams(3, 5, 4)
        state = StateVector(0.0, np.eye(p.d + 1)[0].astype(complex))
        assert energy_stored(state, p) == 0.0
        assert efficiency(state, p) == 0.0

    @pytest.mark.parametrize("p", [ModelParams(3, 5, 4), ModelParams(2, 6, 2, omega=0.7)])
    def test_optimal_charged_state(self, p):
        amplitudes = np.zeros(p.d + 1, dtype=complex)
        amplitudes[-1] = 1.0
        state = StateVector(0.0, amplitudes)
        assert energy_stored(state, p) == pytest.approx(p.omega * p.d, rel=0, abs=0)
        assert efficiency(state, p) == pytest.approx(1.0)

    def test_single_pair_quarter_period(self):
        p = ModelParams(1, 1, 1)
        state = propagate(eig_for(p), math.pi / 4)
        assert energy_stored(state, p) == pytest.approx(0.5, abs=1e-12)

    def test_single_cell_full_transfer(self):
        p = ModelParams(1, 1, 1)
        state = propagate(eig_for(p), math.pi / 2)
        assert efficiency(state, p) == pytest.approx(1.0, abs=1e-12)

    def test_rate_matches_finite_difference(self):
        p = ModelParams(4, 9, 6)
        eig = eig_for(p)
        h = 1e-6
        for t in (0.05, 0.31, 0.7):
            fd = (delta_e_at(eig, p, t + h) - delta_e_at(eig, p, t - h)) / (2 * h)
            assert delta_e_rate_at(eig, p, t) == pytest.approx(fd, rel=1e-6, abs=1e-6)


class TestSampleTrajectory:
    def test_half_period_grid(self):
        traj = sample_trajectory(ModelParams(1, 1, 1), math.pi, 3)
        assert np.allclose(traj.times, [0.0, math.pi / 2, math.pi])
        assert abs(traj.delta_e[0]) < 1e-12
        assert traj.delta_e[1] == pytest.approx(1.0, abs=1e-12)
        assert abs(traj.delta_e[2]) < 1e-12

    def test_short_time_quadratic_law(self):
        rng = np.random.default_rng(123)
        for _ in range(10):
            p = random_params(rng)
            u1 = coupling_element(p, 1)
            delta = 1e-4 / u1
            traj = sample_trajectory(p, delta, 2)
            ratio = traj.delta_e[1] / (p.omega * u1**2 * delta**2)
            assert abs(ratio - 1.0) < 0.01

    def test_first_peak_near_unity_in_deep_regime(self):
        # battery far smaller than excitation count far smaller than charger
        p = ModelParams(2, 2000, 50)
        t_pred = math.pi / (2.0 * math.sqrt(2000.0) * math.sqrt(50.0 - 0.5))
        traj = sample_trajectory(p, 2.0 * t_pred, 2001)
        assert abs(traj.eta.max() - 1.0) < 0.01

    def test_norm_and_energy_bounds(self):
        rng = np.random.default_rng(17)
        for _ in range(15):
            p = random_params(rng)
            traj = sample_trajectory(p, float(rng.uniform(1.0, 20.0)), 201, populations=True)
            norms = traj.populations.sum(axis=1)
            assert np.abs(norms - 1.0).max() <= 1e-10
            assert traj.delta_e.min() >= -1e-10
            assert traj.delta_e.max() <= p.omega * p.d * (1.0 + 1e-10)
            assert traj.eta.min() >= -1e-10
            assert traj.eta.max() <= 1.0 + 1e-9

    def test_time_reversal_symmetry(self):
        p = ModelParams(3, 8, 5)
        eig = eig_for(p)
        for t in np.linspace(0.1, 2.0, 7):
            assert delta_e_at(eig, p, -t) == pytest.approx(delta_e_at(eig, p, t), abs=1e-12)

    def test_populations_flag(self):
        p = ModelParams(2, 3, 2)
        with_pops = sample_trajectory(p, 1.0, 11, populations=True)
        without = sample_trajectory(p, 1.0, 11)
        assert without.populations is None
        assert with_pops.populations.shape == (11, p.d + 1)
        state = propagate(eig_for(p), with_pops.times[5])
        assert np.allclose(with_pops.populations[5], np.abs(state.amplitudes) ** 2, atol=1e-12)

    def test_eta_normalization_uses_ladder_depth(self):
        p = ModelParams(5, 4, 3, omega=2.0)  # d = 3
        traj = sample_trajectory(p, 1.0, 51)
        assert np.allclose(traj.eta, traj.delta_e / (2.0 * 3.0))

    @pytest.mark.parametrize("t_max,n", [(0.0, 5), (-1.0, 5), (1.0, 1)])
    def test_invalid_sampling_arguments(self, t_max, n):
        with pytest.raises(ValueError):
            sample_trajectory(ModelParams(1, 1, 1), t_max, n)


class TestGridEvaluation:
    def test_grid_matches_pointwise(self):
        p = ModelParams(3, 7, 4)
        eig = eig_for(p)
        times = np.linspace(0.0, 3.0, 17)
        pops = populations_on_grid(eig, times)
        for i, t in enumerate(times):
            state = propagate(eig, float(t))
            assert np.allclose(pops[i], np.abs(state.amplitudes) ** 2, atol=1e-12)
