"""Exception hierarchy shared by all hcb_noise modules.

Each exception carries a short machine-readable ``code`` used by the CLI to
pick exit codes and by tests to assert on failure modes.
"""


class HcbError(Exception):
    code = "E_GENERIC"


class ScenarioError(HcbError):
    """Invalid scenario definition (bad types, malformed file, unknown keys)."""

    code = "E_BAD_SCENARIO"


class BadFillingError(ScenarioError):
    code = "E_BAD_FILLING"


class BadGammaError(ScenarioError):
    code = "E_BAD_GAMMA"


class DegenerateFermiError(HcbError):
    """The N-th and (N+1)-th single-particle levels coincide, so the
    N-particle projector is basis dependent and ill-defined."""

    code = "E_DEGENERATE_FERMI"


class DegenerateGroundError(HcbError):
    code = "E_DEGENERATE_GROUND"


class ComplexResidueError(HcbError):
    """A quantity that must be real came out with too large an imaginary part."""

    code = "E_COMPLEX_RESIDUE"


class EmptySupportError(HcbError):
    code = "E_EMPTY_SUPPORT"


class IndexRangeError(HcbError):
    code = "E_RANGE"


class CapError(HcbError):
    code = "E_CAP"


class TooLargeError(HcbError):
    code = "E_TOO_LARGE"
