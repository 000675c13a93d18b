"""Hard-core bosons on 1D lattices: ground-state density, momentum
distribution and time-of-flight noise correlations from determinant
formulas, with a small-lattice exact-diagonalization oracle."""

__version__ = "0.1.0"

from .scenario import (LatticeScenario, Flat, Harmonic, Quasiperiodic,
                       FibonacciApproximant, fibonacci_approximant,
                       potential_values, validate, load_scenario,
                       save_scenario)
from .spectral import SpectralData, build_single_particle, ground_modes, big_G, solve
from .twopoint import (CorrelationSet, two_point, build_two_point, density,
                       momentum_distribution, trap_renormalize,
                       compute_correlations)
from .fourpoint import (NoiseMap, OrderedCase, site_order, four_point,
                        chi_ordered, matrix_M, matrix_S, matrix_X, matrix_Y,
                        noise_map, delta_cut, mott_regularity, peak_contrast)
from .oracle import (FockBasis, OracleState, hcb_ground_state,
                     bose_hubbard_ground, oracle_expectation,
                     oracle_four_point, oracle_two_point_matrix,
                     oracle_noise_map)

__all__ = [
    "LatticeScenario", "Flat", "Harmonic", "Quasiperiodic",
    "FibonacciApproximant", "fibonacci_approximant", "potential_values",
    "validate", "load_scenario", "save_scenario",
    "SpectralData", "build_single_particle", "ground_modes", "big_G", "solve",
    "CorrelationSet", "two_point", "build_two_point", "density",
    "momentum_distribution", "trap_renormalize", "compute_correlations",
    "NoiseMap", "OrderedCase", "site_order", "four_point", "chi_ordered",
    "matrix_M", "matrix_S", "matrix_X", "matrix_Y", "noise_map", "delta_cut",
    "mott_regularity", "peak_contrast",
    "FockBasis", "OracleState", "hcb_ground_state", "bose_hubbard_ground",
    "oracle_expectation", "oracle_four_point", "oracle_two_point_matrix",
    "oracle_noise_map",
]
