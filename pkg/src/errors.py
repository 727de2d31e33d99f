"""
Error types raised by the triortho services.

Every error carries a human readable message and renders to the JSON body the
command line prints on failure.
"""


class TriorthoError(Exception):
    """Base class for all toolkit errors"""

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        body = {'error': type(self).__name__, 'message': self.message}
        if self.details:
            body['details'] = self.details
        return body


class ParseError(TriorthoError):
    """Malformed matrix, bundle, circuit or injection text"""


class SubspaceViolation(TriorthoError):
    """A claimed subspace is not contained in the enclosing space"""


class NoExtension(TriorthoError):
    """No self-orthogonal extension of the requested size exists"""


class NotTriorthogonal(TriorthoError):
    pass


class RankDeficient(TriorthoError):
    pass


class OddDeficiency(TriorthoError):
    """n - k is odd, so no symmetric companion exists"""


class TooLarge(TriorthoError):
    """An exhaustive enumeration exceeds the configured limit"""


class DimensionMismatch(TriorthoError):
    pass


class InvalidLabel(TriorthoError):
    pass


class IndexOutOfRange(TriorthoError):
    pass


class ForcedContradiction(TriorthoError):
    """A forced outcome contradicts a deterministic measurement"""


class UndecodableSyndrome(TriorthoError):
    pass


class PairNotTransversal(TriorthoError):
    pass


class UnsupportedKind(TriorthoError):
    pass


class MalformedCondition(TriorthoError):
    pass
