"""Gram matrices and minimum-norm interpolation with the Sobolev kernels.

Gram entries are kernel values ``K(|x_i - x_j|) = <d_{x_i}, d_{x_j}>``.  No
jitter is ever added: a failed factorization is reported, because positive
definiteness is one of the properties under test.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import cho_solve
from scipy.linalg.lapack import dpotrf
from scipy.spatial.distance import pdist

from .errors import DomainError, StateError
from .kernels import KernelMode, SobolevIndex
from .oracle import QuadratureSpec, radial_kernel

__all__ = [
    "PointSet",
    "FactorState",
    "SPDResult",
    "GramSystem",
    "build_gram",
    "check_spd",
    "fit_interpolant",
    "eval_interpolant",
    "native_norm_sq",
    "residual",
    "read_points_csv",
    "write_matrix_csv",
]


@dataclass(frozen=True)
class PointSet:
    """``m`` points in R^n stored as an ``(m, n)`` array."""

    points: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise DomainError(f"points must form a non-empty (m, n) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "n", pts.shape[1])

    def __len__(self):
        return self.points.shape[0]

    def min_separation(self) -> float:
        if len(self) < 2:
            return float("inf")
        return float(pdist(self.points).min())


class FactorState(str, enum.Enum):
    UNFACTORED = "unfactored"
    FACTORED = "factored"
    FAILED = "failed"


@dataclass(frozen=True)
class SPDResult:
    success: bool
    min_pivot: float
    failed_index: Optional[int] = None

    def __bool__(self):
        return self.success


@dataclass
class GramSystem:
    points: PointSet
    idx: SobolevIndex
    mode: KernelMode
    gram: np.ndarray
    kernel: object
    min_separation: float
    factor_state: FactorState = FactorState.UNFACTORED
    _chol: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.points)


def build_gram(points, idx: SobolevIndex, mode=KernelMode.CORRECTED,
               spec: Optional[QuadratureSpec] = None) -> GramSystem:
    """Assemble ``G[i, j] = K(|x_i - x_j|)``.

    The upper triangle is evaluated and mirrored, so ``G`` is symmetric by
    construction; the diagonal is the kernel's exact ``r = 0`` value.  In
    corrected mode with even ``n`` the kernel is evaluated by quadrature.
    """
    if not isinstance(points, PointSet):
        points = PointSet(points)
    mode = KernelMode.parse(mode, idx.n)
    if points.n != idx.n:
        raise DomainError(f"points live in R^{points.n} but the kernel is for R^{idx.n}")
    kernel = radial_kernel(idx, mode, spec)
    m = len(points)
    gram = np.empty((m, m))
    np.fill_diagonal(gram, kernel.diagonal)
    if m > 1:
        dist = pdist(points.points)
        iu = np.triu_indices(m, 1)
        vals = kernel(dist)
        gram[iu] = vals
        gram[iu[1], iu[0]] = vals
    return GramSystem(points, idx, mode, gram, kernel, points.min_separation())


def check_spd(system: GramSystem, tol: float = 0.0) -> SPDResult:
    """Cholesky-factor the Gram matrix and report the smallest pivot.

    Pivots are the squared diagonal of the Cholesky factor.  A pivot that is
    not positive, or is ``<= tol``, is reported as failure together with its
    index; no exception is raised.
    """
    c, info = dpotrf(system.gram, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        system.factor_state = FactorState.FAILED
        system._chol = None
        k = info - 1
        pivots = np.diag(c)[:k] ** 2
        return SPDResult(False, 0.0 if k == 0 else min(0.0, float(pivots.min())), k)
    if info < 0:
        raise DomainError(f"invalid Gram matrix passed to LAPACK (info={info})")
    pivots = np.diag(c) ** 2
    i = int(np.argmin(pivots))
    if pivots[i] <= tol:
        system.factor_state = FactorState.FAILED
        system._chol = None
        return SPDResult(False, float(pivots[i]), i)
    system.factor_state = FactorState.FACTORED
    system._chol = c
    return SPDResult(True, float(pivots[i]))


def fit_interpolant(system: GramSystem, values) -> np.ndarray:
    """Coefficients ``c`` with ``G c = values`` from the stored factorization."""
    if system.factor_state is not FactorState.FACTORED:
        raise StateError(f"Gram system is {system.factor_state.value}; run check_spd first")
    v = np.asarray(values, dtype=float).ravel()
    if v.shape[0] != system.size:
        raise DomainError(f"expected {system.size} values, got {v.shape[0]}")
    c = cho_solve((system._chol, True), v)
    # iterative refinement against correctly rounded residuals; near the
    # rounding floor the iterates wander, so keep the best one
    r = residual(system, c, v)
    best, best_norm = c, np.max(np.abs(r))
    for _ in range(_REFINEMENT_STEPS):
        c = c + cho_solve((system._chol, True), r)
        r = residual(system, c, v)
        norm = np.max(np.abs(r))
        if norm < best_norm:
            best, best_norm = c, norm
    return best


_REFINEMENT_STEPS = 4
_SPLITTER = 2.0 ** 27 + 1.0


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_product(a, b):
    """Error-free product: ``a * b == p + e`` exactly (Dekker/Veltkamp)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def residual(system: GramSystem, coefficients, values) -> np.ndarray:
    """``values - G c`` with each component correctly rounded.

    A plain ``G @ c`` loses about ``eps * |G| |c|``, which dominates for the
    large coefficients of closely spaced nodes.
    """
    c = np.asarray(coefficients, dtype=float).ravel()
    v = np.asarray(values, dtype=float).ravel()
    p, e = _two_product(system.gram, c[None, :])
    return np.array([math.fsum(np.concatenate(([v[i]], -p[i], -e[i]))) for i in range(len(v))])


def _coerce_queries(system, query):
    q = np.asarray(query, dtype=float)
    n = system.points.n
    if q.ndim == 0:
        q = q.reshape(1, 1)
        single = True
    elif q.ndim == 1:
        # a 1-D array is one point, except in R^1 where it lists query points
        single = n != 1 or q.size == 1
        q = q.reshape(1, -1) if n != 1 else q.reshape(-1, 1)
    else:
        single = False
    if q.ndim != 2 or q.shape[1] != n:
        raise DomainError(f"query has shape {np.shape(query)}, expected points in R^{n}")
    return q, single


def eval_interpolant(system: GramSystem, coefficients, query):
    """``sum_i c_i K(|query - x_i|)`` for one point or an ``(k, n)`` array."""
    c = np.asarray(coefficients, dtype=float).ravel()
    if c.shape[0] != system.size:
        raise DomainError(f"expected {system.size} coefficients, got {c.shape[0]}")
    q, single = _coerce_queries(system, query)
    d = np.sqrt(((q[:, None, :] - system.points.points[None, :, :]) ** 2).sum(-1))
    out = system.kernel(d) @ c
    return float(out[0]) if single else out


def native_norm_sq(system: GramSystem, coefficients) -> float:
    """``c^T G c``, the squared native-space norm of ``sum c_i d_{x_i}``."""
    c = np.asarray(coefficients, dtype=float).ravel()
    if c.shape[0] != system.size:
        raise DomainError(f"expected {system.size} coefficients, got {c.shape[0]}")
    return float(c @ system.gram @ c)


# -- CSV exchange -----------------------------------------------------------


def read_points_csv(text_or_file, n: int, with_values: Optional[bool] = None):
    """Parse ``x1,...,xn[,value]`` rows after a header line.

    Returns ``(points, values)``; ``values`` is ``None`` when absent.
    """
    if isinstance(text_or_file, str):
        text_or_file = io.StringIO(text_or_file)
    rows = list(csv.reader(text_or_file))
    if not rows:
        raise DomainError("CSV input is empty; a header row is required")
    body = [r for r in rows[1:] if r and any(x.strip() for x in r)]
    if not body:
        raise DomainError("CSV input has no data rows")
    width = len(body[0])
    if any(len(r) != width for r in body):
        raise DomainError("CSV rows have inconsistent column counts")
    if with_values is None:
        with_values = width == n + 1
    expect = n + 1 if with_values else n
    if width != expect:
        raise DomainError(f"expected {expect} columns for n={n}, got {width}")
    try:
        data = np.array([[float(x) for x in r] for r in body])
    except ValueError as exc:
        raise DomainError(f"non-numeric CSV entry: {exc}") from None
    if with_values:
        return data[:, :n], data[:, n]
    return data, None


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def write_matrix_csv(matrix, header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in np.atleast_2d(matrix):
        w.writerow([format_float(x) for x in row])
    return buf.getvalue()
