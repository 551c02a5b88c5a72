"""
Exception hierarchy

ConfigError와 NumericPreconditionError는 ValueError를 상속하므로
기존 ``except ValueError`` 코드에서도 그대로 잡힌다.
CLI exit code: ConfigError=2, NumericPreconditionError=3, ReportIOError=4.
"""


class FractalQuadError(Exception):
    """Base class for all library errors"""


class ConfigError(FractalQuadError, ValueError):
    """Invalid experiment configuration, unknown preset or kernel"""


class NumericPreconditionError(FractalQuadError, ValueError):
    """A mathematical precondition of an operation is violated"""


class AttractorError(NumericPreconditionError):
    """Invalid similarity or IFS (ratio, orthogonality, M < 2, dimension)"""


class IndexRangeError(NumericPreconditionError):
    """VecIndex entry outside 1..M"""


class DivergentIntegralError(NumericPreconditionError):
    """Singular integral of Phi_t with t >= d does not exist"""


class SingularPointError(NumericPreconditionError):
    """Kernel evaluated at coincident points x = y"""


class SeparationError(NumericPreconditionError):
    """A separation parameter needed by a bound is zero"""


class GeometryError(NumericPreconditionError):
    """Hull iteration cap exceeded or dimension mismatch"""


class IntegrandEvaluationError(FractalQuadError, RuntimeError):
    """User integrand raised while being evaluated at quadrature nodes"""

    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class ReportIOError(FractalQuadError, OSError):
    """Report file could not be written or read"""
