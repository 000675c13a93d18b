import numpy as np
import pytest

from hcb_noise.errors import EmptySupportError
from hcb_noise.oracle import hcb_ground_state, oracle_two_point_matrix
from hcb_noise.scenario import Harmonic, LatticeScenario, Quasiperiodic
from hcb_noise.spectral import solve
from hcb_noise.twopoint import (build_two_point, compute_correlations, density,
                                momentum_distribution, trap_renormalize,
                                two_point)

ORACLE_SCENARIOS = [
    LatticeScenario(L=6, N=3, bc="open"),
    LatticeScenario(L=7, N=3, bc="periodic"),
    LatticeScenario(L=8, N=3, bc="open", potential=Harmonic(0.12)),
    LatticeScenario(L=8, N=4, bc="open",
                    potential=Quasiperiodic(0.5, 3, 5, np.pi / 4)),
]


class TestTwoPoint:
    def test_unit_filling_offdiagonal_vanishes(self):
        G = np.eye(6)
        for a in range(6):
            for b in range(6):
                expected = 1.0 if a == b else 0.0
                assert two_point(G, a, b) == pytest.approx(expected)

    def test_dimer(self):
        sp = solve(LatticeScenario(L=2, N=1, bc="open"))
        assert two_point(sp.G, 0, 1) == pytest.approx(0.5)

    def test_adjacent_equals_propagator(self):
        sp = solve(LatticeScenario(L=7, N=3, bc="open"))
        for a in range(6):
            assert two_point(sp.G, a, a + 1) == pytest.approx(sp.g[a, a + 1], abs=1e-12)

    def test_reversed_order_symmetric(self):
        sp = solve(LatticeScenario(L=6, N=3, bc="open"))
        assert two_point(sp.G, 4, 1) == pytest.approx(two_point(sp.G, 1, 4), abs=1e-15)

    @pytest.mark.parametrize("sc", ORACLE_SCENARIOS)
    def test_matches_oracle_everywhere(self, sc):
        B = build_two_point(solve(sc).G)
        B_oracle = oracle_two_point_matrix(hcb_ground_state(sc))
        assert np.abs(B - B_oracle).max() < 1e-8

    def test_batched_equals_entrywise(self):
        sp = solve(LatticeScenario(L=9, N=4, bc="open", potential=Harmonic(0.07)))
        B = build_two_point(sp.G)
        for a in range(9):
            for b in range(9):
                assert B[a, b] == pytest.approx(two_point(sp.G, a, b), abs=1e-13)


class TestDensity:
    def test_unit_filling(self):
        sp = solve(LatticeScenario(L=5, N=5, bc="open"))
        assert np.allclose(density(sp.g), 1.0)

    def test_dimer(self):
        sp = solve(LatticeScenario(L=2, N=1, bc="open"))
        assert np.allclose(density(sp.g), 0.5)

    def test_trap_forms_unit_dome(self):
        sc = LatticeScenario(L=55, N=19, bc="periodic", potential=Harmonic(0.17))
        dens = density(solve(sc).g)
        # central N sites are filled to order one, the cloud edge is empty
        assert dens[27 - 9:27 + 10].min() > 0.9
        assert dens[27 - 7:27 + 8].min() > 0.999
        assert dens[0] < 1e-10 and dens[-1] < 1e-10


class TestMomentumDistribution:
    def test_mott_flat(self):
        nq = momentum_distribution(np.eye(8))
        assert np.allclose(nq, 1.0, atol=1e-12)

    def test_dimer_grid(self):
        sp = solve(LatticeScenario(L=2, N=1, bc="open"))
        nq = momentum_distribution(build_two_point(sp.G))
        assert np.allclose(nq, [1.0, 0.0], atol=1e-12)

    def test_flat_lattice_peaks_at_zero(self):
        sc = LatticeScenario(L=55, N=19, bc="periodic")
        corr = compute_correlations(solve(sc))
        assert np.argmax(corr.nq) == 0

    @pytest.mark.parametrize("sc", ORACLE_SCENARIOS)
    def test_sum_rule(self, sc):
        corr = compute_correlations(solve(sc))
        assert abs(corr.nq.sum() - sc.N) < 1e-10

    def test_reflection_symmetry(self):
        corr = compute_correlations(solve(LatticeScenario(L=12, N=5, bc="open")))
        assert np.abs(corr.nq[1:] - corr.nq[1:][::-1]).max() < 1e-10

    def test_nonnegative(self):
        corr = compute_correlations(
            solve(LatticeScenario(L=13, N=5, bc="periodic")))
        assert corr.nq.min() > -1e-12

    def test_raw_mode_scales_by_L(self):
        sp = solve(LatticeScenario(L=9, N=4, bc="open"))
        B = build_two_point(sp.G)
        assert np.allclose(momentum_distribution(B, "raw"),
                           9 * momentum_distribution(B, "per-site"))

    def test_particle_hole_offset_on_flat_lattice(self):
        # spin-flip duality: n_q at filling 1-nu equals n_q at nu plus 1-2nu
        L = 11
        nq = {N: compute_correlations(solve(LatticeScenario(L=L, N=N, bc="open"))).nq
              for N in (3, 8)}
        offset = 1 - 2 * 3 / L
        assert np.abs(nq[8] - nq[3] - offset).max() < 1e-10


class TestTrapRenormalize:
    def test_counts_occupied_dome(self):
        sc = LatticeScenario(L=55, N=19, bc="periodic", potential=Harmonic(0.17))
        dens = density(solve(sc).g)
        scaled = trap_renormalize(np.ones(5), dens, 1e-4, N=19)
        Z = np.count_nonzero(dens > 1e-4)
        assert np.allclose(scaled, 19 / Z)
        assert Z < 55

    def test_flat_lattice_factor_is_unity(self):
        dens = np.full(10, 0.4)
        assert np.allclose(trap_renormalize(np.ones(3), dens, 1e-4, N=4), 0.4)
        # all sites occupied: Z = L, factor N/L matches the mean density

    def test_empty_support(self):
        with pytest.raises(EmptySupportError):
            trap_renormalize(np.ones(3), np.zeros(4), 1e-4, N=1)
