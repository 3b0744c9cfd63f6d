"""Exception types raised across the package.

Every error carries the offending identifier (variable, symptom, field)
in its message so callers can surface actionable diagnostics.
"""


class DxProbeError(Exception):
    """Base class for all dxprobe errors."""


# --- network construction / inference ---------------------------------------

class CyclicGraph(DxProbeError):
    """The implied edge set contains a directed cycle."""


class MissingTable(DxProbeError):
    """A variable has no conditional probability table."""


class MalformedTable(DxProbeError):
    """A table has the wrong size, out-of-range entries, or rows that do not sum to 1."""


class UnknownVariable(DxProbeError):
    """A referenced variable id does not exist in the network."""


class UnknownState(DxProbeError):
    """A referenced state label is not one of the variable's states."""


class MalformedEvidence(DxProbeError):
    """Evidence violates its invariants (overlap, bad vector, ...)."""


class ImpossibleEvidence(DxProbeError):
    """The evidence has probability zero under the network."""


# --- report layer ------------------------------------------------------------

class InvalidParams(DxProbeError):
    """Reporting parameters outside their admissible ranges."""


class DuplicateReportNode(DxProbeError):
    """A report node for this (question, symptom) pair already exists."""


class UnknownSymptom(DxProbeError):
    """A response mentions a symptom not bound to the question."""


# --- parameter learning ------------------------------------------------------

class DuplicateParameterNode(DxProbeError):
    """The network already contains a global parameter node."""


class DimensionMismatch(DxProbeError):
    """Posterior length does not match the grid it should replace."""


# --- severity ----------------------------------------------------------------

class MissingSeverityClass(DxProbeError):
    """A report parameter lacks the major/minor severity class."""


# --- knowledge-base files ----------------------------------------------------

class InvalidConfig(DxProbeError):
    """Generator or KB configuration outside admissible ranges."""


class ParseError(DxProbeError):
    """KB file is not well-formed (bad JSON or missing/ill-typed field)."""


class ValidationError(DxProbeError):
    """KB file parsed but violates a named invariant."""


# --- session engine ----------------------------------------------------------

class WrongPhase(DxProbeError):
    """Operation not allowed in the session's current phase."""


class AlreadyObserved(DxProbeError):
    """The symptom already carries hard evidence."""


class UnsupportedMode(DxProbeError):
    """The knowledge base cannot run in the requested session mode."""
