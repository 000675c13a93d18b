import numpy as np
import pytest

from hcb_noise.errors import DegenerateFermiError
from hcb_noise.scenario import Harmonic, LatticeScenario, Quasiperiodic
from hcb_noise.spectral import (big_G, build_single_particle, ground_modes,
                                solve, write_gmatrix_csv, write_spectrum_csv)


class TestHamiltonian:
    def test_three_site_ring(self):
        H = build_single_particle(LatticeScenario(L=3, N=1, bc="periodic"))
        expected = -np.ones((3, 3)) + np.eye(3)
        assert np.array_equal(H, expected)

    def test_four_site_ring_spectrum(self):
        # tight-binding dispersion -2J cos(2 pi k / L)
        H = build_single_particle(LatticeScenario(L=4, N=1, bc="periodic"))
        assert np.allclose(np.linalg.eigvalsh(H), [-2.0, 0.0, 0.0, 2.0])

    def test_dimer(self):
        sp = solve(LatticeScenario(L=2, N=1, bc="open"))
        assert np.allclose(sp.energies, [-1.0, 1.0])
        assert np.allclose(sp.modes[:, 0], [1, 1] / np.sqrt(2))

    def test_open_chain_has_no_corner(self):
        H = build_single_particle(LatticeScenario(L=5, N=2, bc="open"))
        assert H[0, 4] == 0.0 and H[4, 0] == 0.0

    def test_potential_on_diagonal(self):
        sc = LatticeScenario(L=5, N=2, bc="open", potential=Harmonic(0.3))
        H = build_single_particle(sc)
        assert H[0, 0] == pytest.approx(0.3 * 4.0)


class TestGroundModes:
    def test_unit_filling_projector_is_identity(self):
        sp = solve(LatticeScenario(L=8, N=8, bc="periodic"))
        assert np.abs(sp.g - np.eye(8)).max() < 1e-12

    def test_dimer_projector(self):
        sp = solve(LatticeScenario(L=2, N=1, bc="open"))
        assert np.allclose(sp.g, 0.5 * np.ones((2, 2)))
        assert np.allclose(sp.G, [[0, 1], [1, 0]], atol=1e-12)

    def test_partially_filled_doublet_rejected(self):
        H = build_single_particle(LatticeScenario(L=4, N=2, bc="periodic"))
        with pytest.raises(DegenerateFermiError):
            ground_modes(H, 2)

    def test_complete_multiplet_accepted(self):
        # N=3 on the 4-ring fills the zero-energy doublet entirely
        H = build_single_particle(LatticeScenario(L=4, N=3, bc="periodic"))
        sp = ground_modes(H, 3)
        assert np.trace(sp.g) == pytest.approx(3.0, abs=1e-10)

    @pytest.mark.parametrize("sc", [
        LatticeScenario(L=13, N=6, bc="open"),
        LatticeScenario(L=13, N=5, bc="periodic"),
        LatticeScenario(L=12, N=5, bc="open", potential=Harmonic(0.08)),
        LatticeScenario(L=10, N=4, bc="open",
                        potential=Quasiperiodic(0.6, 3, 5, 0.7)),
    ])
    def test_projector_invariants(self, sc):
        sp = solve(sc)
        L = sc.L
        assert np.abs(sp.modes.T @ sp.modes - np.eye(L)).max() < 1e-10
        assert np.abs(sp.g @ sp.g - sp.g).max() < 1e-8
        assert np.trace(sp.g) == pytest.approx(sc.N, abs=1e-10)
        assert np.abs(sp.G @ sp.G - np.eye(L)).max() < 1e-8

    def test_translation_invariance_on_ring(self):
        # flat ring with an odd, non-degenerate filling: g depends on l-m only
        sp = solve(LatticeScenario(L=13, N=5, bc="periodic"))
        for shift in (1, 3, 7):
            rolled = np.roll(np.roll(sp.g, shift, axis=0), shift, axis=1)
            assert np.abs(rolled - sp.g).max() < 1e-10

    def test_mode_sign_convention(self):
        sp = solve(LatticeScenario(L=9, N=4, bc="open"))
        for s in range(9):
            col = sp.modes[:, s]
            lead = col[np.abs(col) > 1e-8 * np.abs(col).max()][0]
            assert lead > 0


class TestBigG:
    def test_identity(self):
        assert np.array_equal(big_G(np.eye(3)), np.eye(3))

    def test_zero(self):
        assert np.array_equal(big_G(np.zeros((3, 3))), -np.eye(3))


def test_csv_dumps(tmp_path):
    sp = solve(LatticeScenario(L=5, N=2, bc="open"))
    write_spectrum_csv(sp, tmp_path / "spectrum.csv")
    write_gmatrix_csv(sp, tmp_path / "gmatrix.csv")
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "s,E_s" and len(lines) == 6
    glines = (tmp_path / "gmatrix.csv").read_text().splitlines()
    assert glines[0] == "5" and len(glines) == 6
    row0 = np.array([float(x) for x in glines[1].split(",")])
    assert np.allclose(row0, sp.g[0], atol=1e-15)
