"""
Exception hierarchy for the transverse Poisson engine
"""

from typing import Optional


class TransverseError(Exception):
    """Base class for every error raised by the engine"""

    #: exit code used by the command line front end
    exit_code = 1


class DimensionError(TransverseError):
    """Operands live in different sl_n or have mismatched sizes"""

    exit_code = 2


class NonSemisimpleError(TransverseError):
    """ad h does not act diagonally on the given span"""

    def __init__(self, message: str, vector=None):
        super().__init__(message)
        self.vector = vector


class InvalidPartitionError(TransverseError):
    """Malformed partition string or parts"""

    exit_code = 2


class ZeroOrbitError(InvalidPartitionError):
    """The partition (1, ..., 1) labels the zero orbit, which has no sl2-triplet"""


class UnsupportedFamilyError(TransverseError):
    """Conormal complement requested outside the |p_i - p_j| <= 1 family"""

    exit_code = 2


class RankDefectError(TransverseError):
    """A proposed basis is not a direct complement"""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class SingularMatrixError(TransverseError):
    """Matrix determinant vanishes identically"""


class InvalidTransversalError(TransverseError):
    """C(0) is singular: the complement is not transversal at e"""


class ConsistencyError(TransverseError):
    """An internal invariant failed"""


class NotAntisymmetricError(TransverseError):
    """Jacobi check received a matrix that is not antisymmetric"""


class ComplementFileError(TransverseError):
    """Complement JSON file could not be parsed"""

    exit_code = 2


class ConfigurationError(TransverseError):
    """Environment settings are not valid"""

    exit_code = 2
