"""Exception hierarchy for the kwrist toolkit.

Every domain error derives from :class:`KwristError` so callers (and the
CLI) can catch one base class.  Class names double as the machine-readable
error codes printed by the command line front end.
"""


class KwristError(Exception):
    """Base class for all kwrist domain errors."""


# --- unit geometry -----------------------------------------------------------

class NonPositiveLength(KwristError):
    """A length or angle parameter that must be positive is not."""


class KindShapeMismatch(KwristError):
    """Unit kind contradicts its side lengths (straight-strip unit with a1 != a2)."""


class DegenerateCell(KwristError):
    """A planar cell collapses (collinear vertices or impossible side set)."""


# --- sizing ------------------------------------------------------------------

class NonPositiveCircumference(KwristError):
    """A body circumference measurement must be positive."""


class NonConvergence(KwristError):
    """Crease-length growth did not satisfy the semi-fold condition in the step cap."""


class InfeasibleSection(KwristError):
    """No crease length satisfies the semi-fold condition for a section."""


# --- kinematics --------------------------------------------------------------

class NotFoldable(KwristError):
    """The extreme bent state is geometrically unreachable (cos beta > 1)."""


class InvalidGeometry(KwristError):
    """Side lengths produce an impossible bent state (cos beta < -1)."""


class NoSolution(KwristError):
    """No twist angle realises the requested slant-edge length at this height."""


# --- equilibrium -------------------------------------------------------------

class NotConverged(KwristError):
    """An equilibrium solve ended without meeting the gradient tolerance."""


# --- schedules ---------------------------------------------------------------

class TimeVaryingMode(KwristError):
    """The motion mode has no static tendon-state table row."""


class UnsupportedMode(KwristError):
    """The motion mode is not valid for the requested schedule builder."""


# --- interface / files -------------------------------------------------------

class ParseError(KwristError):
    """Input file is not syntactically valid."""


class SchemaViolation(KwristError):
    """Input file parses but violates the document schema or its invariants."""


class NonPositiveValue(KwristError):
    """A strictly positive field holds a zero or negative value."""


class StyleInfeasible(KwristError):
    """Pattern style dimensions do not fit the cell geometry."""
