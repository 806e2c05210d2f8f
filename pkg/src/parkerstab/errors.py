"""Exception types shared across the toolkit."""


class ParkerStabError(Exception):
    """Base class for all toolkit errors."""


class NonPositiveDensity(ParkerStabError):
    """Density profile is not strictly positive on the grid."""


class NegativeRadicand(ParkerStabError):
    """C - Pbar - F(g rho) became non-positive; internal construction bug."""


class ParseError(ParkerStabError):
    """Malformed input file or config."""


class NonMonotoneAbscissa(ParseError):
    """Tabulated profile abscissae are not strictly increasing."""


class DegenerateField(ParkerStabError):
    """min m^2 <= 0 where a strictly positive field is required."""


class ZeroDenominator(ParkerStabError):
    """A normalizing integral vanished."""


class BisectionFailure(ParkerStabError):
    """Root bracket invalid or lost during bisection."""


class ZeroXi1(ParkerStabError):
    """Construction requires xi1 != 0."""


class ZeroXi2(ParkerStabError):
    """Construction requires xi2 != 0."""


class EigenFailure(ParkerStabError):
    """Eigenvalue iteration failed to converge."""


class BracketFailure(ParkerStabError):
    """Fixed-point bracket could not be established (assembly bug)."""


class ZeroVector(ParkerStabError):
    """Residual requested for a zero vector."""


class StepTooLarge(ParkerStabError):
    """Time integration blew up beyond the overflow guard."""


class InvalidMode(ParkerStabError):
    """Wavenumber pair not admissible for the requested operation."""


class InsufficientData(ParkerStabError):
    """Trajectory too short for a growth-rate fit."""


class ZeroAmplitude(ParkerStabError):
    """Trajectory amplitude underflowed; no fit possible."""
