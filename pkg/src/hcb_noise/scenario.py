"""Lattice scenarios: system size, filling, boundary condition and on-site potential.

All energies are measured in units of the hopping J (J=1 internally), so the
harmonic curvature and the quasiperiodic amplitude are dimensionless ratios.
Scenario objects are frozen dataclasses and safe to share between workers.
"""

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Union

import numpy as np

from .errors import BadFillingError, BadGammaError, ScenarioError

BC_CHOICES = ("periodic", "open")
NORM_CHOICES = ("per-site", "raw")


@dataclass(frozen=True)
class Flat:
    pass


@dataclass(frozen=True)
class Harmonic:
    """Parabolic confinement V_j = omega * (j - c)^2 centered at c = (L-1)/2."""

    omega: float


@dataclass(frozen=True)
class Quasiperiodic:
    """Two-frequency potential V_j = 2*lam*cos(2*pi*(num/den)*j + phi)."""

    lam: float
    gamma_num: int
    gamma_den: int
    phi: float = 0.0

    @property
    def gamma(self) -> float:
        return self.gamma_num / self.gamma_den


Potential = Union[Flat, Harmonic, Quasiperiodic]


@dataclass(frozen=True)
class FibonacciApproximant:
    """Consecutive Fibonacci pair (F_n, F_{n+1}) approximating the inverse golden mean."""

    index: int
    numerator: int
    denominator: int

    @property
    def gamma(self) -> float:
        return self.numerator / self.denominator


@dataclass(frozen=True)
class LatticeScenario:
    L: int
    N: int
    J: float = 1.0
    bc: str = "periodic"
    potential: Potential = field(default_factory=Flat)
    normalization: str = "per-site"
    trap_renorm: bool = False
    density_threshold: float = 1e-4

    @property
    def filling(self) -> float:
        return self.N / self.L


def fibonacci_approximant(target_denominator: int) -> FibonacciApproximant:
    """Largest consecutive Fibonacci pair (F_n, F_{n+1}) with F_{n+1} <= target.

    Convention F_0 = F_1 = 1, so the first usable pair is (1, 2).
    """
    if target_denominator < 2:
        raise BadGammaError("target denominator must be at least 2")
    prev, cur, n = 1, 1, 1
    while prev + cur <= target_denominator:
        prev, cur = cur, prev + cur
        n += 1
    return FibonacciApproximant(index=n - 1, numerator=prev, denominator=cur)


def potential_values(scenario: LatticeScenario) -> np.ndarray:
    """On-site potential V_j, j = 0..L-1, in units of J."""
    L = scenario.L
    j = np.arange(L, dtype=float)
    pot = scenario.potential
    if isinstance(pot, Flat):
        return np.zeros(L)
    if isinstance(pot, Harmonic):
        # center the parabola so density profiles come out symmetric
        center = (L - 1) / 2.0
        return pot.omega * (j - center) ** 2
    if isinstance(pot, Quasiperiodic):
        return 2.0 * pot.lam * np.cos(2.0 * np.pi * pot.gamma * j + pot.phi)
    raise ScenarioError(f"unknown potential type {type(pot).__name__}")


def validate(scenario: LatticeScenario) -> list:
    """Check all scenario invariants.

    Raises on hard violations, returns a (possibly empty) list of warning
    strings for soft issues such as an incommensurate quasiperiodic wave
    number on a periodic ring.
    """
    warnings = []
    if scenario.L < 2:
        raise ScenarioError(f"L must be >= 2, got {scenario.L}")
    if not (1 <= scenario.N <= scenario.L):
        raise BadFillingError(
            f"N={scenario.N} outside the allowed range [1, L={scenario.L}]"
        )
    if scenario.J <= 0:
        raise ScenarioError(f"J must be positive, got {scenario.J}")
    if scenario.bc not in BC_CHOICES:
        raise ScenarioError(f"bc must be one of {BC_CHOICES}, got {scenario.bc!r}")
    if scenario.normalization not in NORM_CHOICES:
        raise ScenarioError(
            f"normalization must be one of {NORM_CHOICES}, got {scenario.normalization!r}"
        )
    if not (0.0 < scenario.density_threshold < 1.0):
        raise ScenarioError(
            f"density_threshold must lie in (0, 1), got {scenario.density_threshold}"
        )
    pot = scenario.potential
    if isinstance(pot, Harmonic) and pot.omega < 0:
        raise ScenarioError(f"harmonic curvature must be >= 0, got {pot.omega}")
    if isinstance(pot, Quasiperiodic):
        if pot.lam < 0:
            raise ScenarioError(f"quasiperiodic amplitude must be >= 0, got {pot.lam}")
        if pot.gamma_den <= 0 or not (0 < pot.gamma_num < pot.gamma_den):
            raise BadGammaError(
                f"gamma = {pot.gamma_num}/{pot.gamma_den} must lie strictly in (0, 1)"
            )
        if math.gcd(pot.gamma_num, pot.gamma_den) != 1:
            raise BadGammaError(
                f"gamma = {pot.gamma_num}/{pot.gamma_den} must be in lowest terms"
            )
        if scenario.bc == "periodic" and scenario.L % pot.gamma_den != 0:
            warnings.append(
                f"quasiperiodic denominator {pot.gamma_den} does not divide L={scenario.L}; "
                "the potential is discontinuous across the periodic boundary"
            )
    return warnings


# ---------------------------------------------------------------------------
# JSON scenario files
# ---------------------------------------------------------------------------

_TOP_KEYS = {
    "L", "N", "J", "bc", "potential", "normalization", "trap_renorm",
    "density_threshold",
}
_POT_KEYS = {
    "flat": {"type"},
    "harmonic": {"type", "omega"},
    "quasiperiodic": {"type", "lambda", "gamma_num", "gamma_den", "phi"},
}


def _potential_from_dict(d: dict) -> Potential:
    if not isinstance(d, dict) or "type" not in d:
        raise ScenarioError("potential must be an object with a 'type' key")
    kind = d["type"]
    if kind not in _POT_KEYS:
        raise ScenarioError(f"unknown potential type {kind!r}")
    unknown = set(d) - _POT_KEYS[kind]
    if unknown:
        raise ScenarioError(f"unknown potential keys for {kind!r}: {sorted(unknown)}")
    if kind == "flat":
        return Flat()
    if kind == "harmonic":
        return Harmonic(omega=float(d.get("omega", 0.0)))
    return Quasiperiodic(
        lam=float(d.get("lambda", 0.0)),
        gamma_num=int(d["gamma_num"]),
        gamma_den=int(d["gamma_den"]),
        phi=float(d.get("phi", 0.0)),
    )


def _potential_to_dict(pot: Potential) -> dict:
    if isinstance(pot, Flat):
        return {"type": "flat"}
    if isinstance(pot, Harmonic):
        return {"type": "harmonic", "omega": pot.omega}
    return {
        "type": "quasiperiodic",
        "lambda": pot.lam,
        "gamma_num": pot.gamma_num,
        "gamma_den": pot.gamma_den,
        "phi": pot.phi,
    }


def scenario_from_dict(d: dict) -> LatticeScenario:
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    for key in ("L", "N"):
        if key not in d:
            raise ScenarioError(f"scenario is missing required key {key!r}")
    scenario = LatticeScenario(
        L=int(d["L"]),
        N=int(d["N"]),
        J=float(d.get("J", 1.0)),
        bc=d.get("bc", "periodic"),
        potential=_potential_from_dict(d.get("potential", {"type": "flat"})),
        normalization=d.get("normalization", "per-site"),
        trap_renorm=bool(d.get("trap_renorm", False)),
        density_threshold=float(d.get("density_threshold", 1e-4)),
    )
    validate(scenario)
    return scenario


def scenario_to_dict(scenario: LatticeScenario) -> dict:
    d = asdict(scenario)
    d["potential"] = _potential_to_dict(scenario.potential)
    return d


def load_scenario(path) -> LatticeScenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"malformed scenario file {path}: {exc}") from exc
    return scenario_from_dict(data)


def save_scenario(scenario: LatticeScenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2)
        fh.write("\n")
