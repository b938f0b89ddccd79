"""Exception hierarchy shared by all modules."""


class KernelError(Exception):
    """Base class for errors raised by this package."""


class DomainError(KernelError, ValueError):
    """An argument lies outside the domain of an operation."""


class HalfIntegerOrderError(DomainError):
    """The effective order is a half-integer, so no finite closed form exists.

    Use :func:`sobolev_kernels.oracle.kernel_oracle_nd` (or an
    :class:`~sobolev_kernels.oracle.OracleKernel`) for these indices.
    """


class ConvergenceError(KernelError, RuntimeError):
    """Quadrature did not reach the requested tolerance.

    Carries the best estimate found and its error bound.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class StateError(KernelError, RuntimeError):
    """Operation requires a Gram system in a different factorization state."""
