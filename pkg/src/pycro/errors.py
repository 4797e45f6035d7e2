"""Exception hierarchy shared by all pycro modules."""


class PycroError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(PycroError):
    """Invalid parameters (party count, key size, incompatible options)."""


class PlaintextRangeError(PycroError):
    """Plaintext outside the declared bound, or not a valid group element."""


class SchemeMismatchError(PycroError):
    """Ciphertexts or shares from different schemes/keys were combined."""


class ThresholdError(PycroError):
    """Threshold decryption misuse, e.g. the same party acting twice."""


class CorruptionError(PycroError):
    """A decrypted residue landed in the dead zone between +B and -B."""


class TopologyParseError(PycroError):
    """Syntax error in a topology file; carries the 1-based line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TopologyValidationError(PycroError):
    """Structurally invalid network (bad cost, dangling endpoint, ...)."""


class ConnectivityError(PycroError):
    """The equivalent cost graph is not connected."""


class ProtocolAbortError(PycroError):
    """A protocol session could not complete; message says which step."""


class NoRouteError(PycroError):
    """No usable route between the requested endpoints."""


class AllocationUnsatisfiableError(PycroError):
    """Demand exceeds the available capacity; carries the partial result."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class AuthorizationError(PycroError):
    """A controller tried to touch state owned by another domain."""


class TransportError(PycroError):
    """Message delivery failure (unknown recipient, dead peer, ...)."""
