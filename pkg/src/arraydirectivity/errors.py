"""Exception types raised by the library."""


class ArrayDirectivityError(Exception):
    """Base class for all library errors."""


class DegenerateDirection(ArrayDirectivityError, ValueError):
    """The desired elevation makes the element plane undefined (theta0 = pi/2)."""


class NonPositiveDenominator(ArrayDirectivityError, ArithmeticError):
    """A radiated-power denominator evaluated to a non-positive value."""


class QuadratureNotConverged(ArrayDirectivityError, RuntimeError):
    """Adaptive quadrature exhausted its node budget."""


class BoundsViolation(ArrayDirectivityError, ValueError):
    """A pairwise coordinate difference left the configured box."""


class NoLocalMinimum(ArrayDirectivityError, RuntimeError):
    """The forward line search reached its distance cap without a minimum."""


class SafetyCapReached(ArrayDirectivityError, RuntimeError):
    """A run with an open-ended stopping rule hit its generation cap."""
