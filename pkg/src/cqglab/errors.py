"""Exception hierarchy shared across the package.

Exit-code contract of the CLI: StructureError -> 2, EnvelopeError -> 3,
failed checks -> 1.
"""


class CqglabError(Exception):
    pass


class StructureError(CqglabError):
    """Malformed input data (bad shapes, unparsable files)."""


class NotCQGError(CqglabError):
    """The invariance system has no (unique) normalized solution."""


class KacRequiredError(CqglabError):
    """Operation is only defined for algebras with a tracial Haar state."""


class EnvelopeError(CqglabError):
    """A requested tensor size exceeds the configured resource envelope."""

    def __init__(self, message, size=None, envelope=None):
        super().__init__(message)
        self.size = size
        self.envelope = envelope


class TruncationError(CqglabError):
    """A product would silently drop a label inside the fusion closure."""


class InternalConsistencyError(CqglabError):
    """A quantity that is forced by theory came out numerically wrong."""
