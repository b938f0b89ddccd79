"""Closed-form reproducing kernels of the Sobolev spaces H_s(R^n).

Modules: :mod:`.specfun` (exact combinatorics, half-integer Gamma and Bessel K),
:mod:`.kernels` (closed forms), :mod:`.oracle` (quadrature ground truth),
:mod:`.rkhs` (Gram systems and interpolation), :mod:`.verify` and
:mod:`.cli`.
"""
from .errors import (
    ConvergenceError,
    DomainError,
    HalfIntegerOrderError,
    KernelError,
    StateError,
)
from .kernels import (
    KernelMode,
    KernelSeries,
    SobolevIndex,
    diagonal_1d,
    diagonal_nd,
    eval_kernel,
    kernel_nd,
    kernel_special_s_n_plus_3,
    series_1d,
)
from .oracle import QuadratureSpec, kernel_oracle_nd, radial_kernel
from .rkhs import build_gram, check_spd, eval_interpolant, fit_interpolant, native_norm_sq, residual

__version__ = "0.1.0"
