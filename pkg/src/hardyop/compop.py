"""Finite compressions of composition and weighted composition operators in
the monomial basis, largest-singular-value solves, norm distances, and
convergence schedules against closed-form targets.

Compression values are lower bounds of the corresponding operator norms and
are nondecreasing in the dimension (nested orthogonal projections); the
schedule runner certifies both properties on every run.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.fft

from .errors import PreconditionError, SolverInternalError
from .symbolic import Symbol, constant, require_selfmap, taylor, taylor_close

FFT_COLUMN_THRESHOLD = 512     # switch column convolutions to FFT at this dimension
DENSE_SVD_MAX = 8192           # escalate to LAPACK below this size
POWER_TOL = 1e-12              # relative Rayleigh stopping tolerance
POWER_ITER_CAP = 100_000
# Budget (in matvec element-ops) granted to the matvec power iteration before
# escalating to a dense solve; keeps large slow-gap problems off the slow path.
POWER_FLOP_BUDGET = 6.0e8
MONOTONE_TOL = 1e-9            # certificate slack for nondecreasing values
TARGET_TOL = 1e-9              # certificate slack for value <= target


@dataclass(frozen=True)
class OpMatrix:
    """Dense complex compression of an operator against monomials.

    basis "full" uses {1, z, ..., z^(N-1)}; basis "h20" uses {z, ..., z^N}
    (the subspace of functions vanishing at the origin).
    """

    entries: np.ndarray
    basis: str
    provenance: str = ""

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("OpMatrix entries must be a square 2-D array")
        if self.basis not in ("full", "h20"):
            raise ValueError(f"unknown basis {self.basis!r}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        if self.basis != other.basis or self.dim != other.dim:
            raise ValueError("matrix difference needs matching basis and dimension")
        return OpMatrix(self.entries - other.entries, self.basis,
                        f"({self.provenance}) - ({other.provenance})")

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        if self.basis != other.basis or self.dim != other.dim:
            raise ValueError("matrix sum needs matching basis and dimension")
        return OpMatrix(self.entries + other.entries, self.basis,
                        f"({self.provenance}) + ({other.provenance})")


def _power_columns(first: np.ndarray, step: np.ndarray, count: int, length: int) -> np.ndarray:
    """Columns first, first*step, first*step^2, ... under truncated convolution."""
    out = np.zeros((length, count), dtype=complex)
    col = np.zeros(length, dtype=complex)
    m = min(first.size, length)
    col[:m] = first[:m]
    out[:, 0] = col
    if count == 1:
        return out
    if length >= FFT_COLUMN_THRESHOLD:
        L = scipy.fft.next_fast_len(2 * length)
        step_hat = scipy.fft.fft(step, L)
        for k in range(1, count):
            col = scipy.fft.ifft(scipy.fft.fft(col, L) * step_hat)[:length]
            out[:, k] = col
    else:
        for k in range(1, count):
            col = np.convolve(col, step)[:length]
            out[:, k] = col
    return out


def comp_matrix(s: Symbol, N: int, basis: str = "full") -> OpMatrix:
    """Compression of the composition operator f -> f o s.

    full: column k holds the first N Taylor coefficients of s^k (column 0 is
    e_0, the constant function).  h20: column k (k = 1..N) holds coefficients
    1..N of s^k.
    """
    if N < 2:
        raise PreconditionError("compression dimension must be >= 2")
    require_selfmap(s)
    if basis == "full":
        t = taylor(s, N)
        e0 = np.zeros(N, dtype=complex)
        e0[0] = 1.0
        cols = _power_columns(e0, t, N, N)
        return OpMatrix(cols, "full", f"comp({s}, N={N}, full)")
    if basis == "h20":
        t = taylor(s, N + 1)
        cols = _power_columns(t, t, N, N + 1)
        return OpMatrix(cols[1:, :], "h20", f"comp({s}, N={N}, h20)")
    raise ValueError(f"unknown basis {basis!r}")


def const_matrix(p: complex, N: int, basis: str = "full") -> OpMatrix:
    """Compression of the point-evaluation operator f -> f(p) * 1."""
    return comp_matrix(constant(p), N, basis)


def weighted_matrix(w: Symbol, s: Symbol, N: int) -> OpMatrix:
    """Compression of f -> w * (f o s): column k = taylor(w * s^k, N)."""
    require_selfmap(s)
    tw = taylor(w, N)
    t = taylor(s, N)
    cols = _power_columns(tw, t, N, N)
    return OpMatrix(cols, "full", f"weighted({w}; {s}, N={N})")


# ---------------------------------------------------------------------------
# largest singular value


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str          # "power" or "power+svd"
    iterations: int
    converged: bool


def _entries(A) -> np.ndarray:
    return A.entries if isinstance(A, OpMatrix) else np.asarray(A, dtype=complex)


def _power_budget(n: int) -> int:
    return max(200, min(POWER_ITER_CAP, int(POWER_FLOP_BUDGET // max(1, 2 * n * n))))


RESIDUAL_FACTOR = 100.0  # certificate: ||A^H A v - lam v|| <= factor * tol * lam


def power_norm(A, tol: float = POWER_TOL, max_iter: int | None = None) -> NormResult:
    """Largest singular value by power iteration on A^H A.

    One A and one A^H matvec per step, deterministic all-ones start.  A
    Rayleigh stall (relative change <= tol) alone is not trusted: slow
    spectral gaps stall far from the limit, so convergence additionally
    requires the Hermitian residual certificate ||A^H A v - lam v|| <=
    100 tol lam, which bounds the eigenvalue error of lam = sigma^2.
    """
    M = _entries(A)
    n = M.shape[1]
    if max_iter is None:
        max_iter = _power_budget(n)
    Mh = M.conj().T
    v = np.full(n, 1.0 / math.sqrt(n), dtype=complex)
    prev = -1.0
    sigma = 0.0
    for k in range(max_iter):
        w = M @ v
        sigma = float(np.linalg.norm(w))
        if sigma == 0.0:
            return NormResult(0.0, "power", k + 1, True)
        u = Mh @ w  # u = (A^H A) v
        if prev >= 0.0 and abs(sigma - prev) <= tol * sigma:
            lam = sigma * sigma
            residual = float(np.linalg.norm(u - lam * v))
            if residual <= RESIDUAL_FACTOR * tol * lam:
                return NormResult(sigma, "power", k + 1, True)
        prev = sigma
        v = u / np.linalg.norm(u)
    return NormResult(sigma, "power", max_iter, False)


def norm_result(A, tol: float = POWER_TOL, max_iter: int | None = None) -> NormResult:
    """Largest singular value: matvec power iteration, escalating to a dense
    LAPACK solve when the iteration budget runs out (slow spectral gaps)."""
    res = power_norm(A, tol=tol, max_iter=max_iter)
    if res.converged:
        return res
    M = _entries(A)
    if M.shape[0] <= DENSE_SVD_MAX:
        value = float(np.linalg.svd(M, compute_uv=False)[0])
        return NormResult(value, "power+svd", res.iterations, True)
    warnings.warn(
        f"power iteration hit its budget at dimension {M.shape[0]}; "
        "returning the last Rayleigh estimate",
        RuntimeWarning,
        stacklevel=2,
    )
    return res


def op_norm(A, tol: float = POWER_TOL) -> float:
    """Largest singular value of a compression (see norm_result)."""
    return norm_result(A, tol=tol).value


# ---------------------------------------------------------------------------
# distances and restrictions


def distance(a: Symbol, b: Symbol, N: int, tol: float = POWER_TOL) -> float:
    """Compression of ||C_a - C_b||; a monotone-in-N lower bound of the norm."""
    require_selfmap(a)
    require_selfmap(b)
    return op_norm(comp_matrix(a, N, "full") - comp_matrix(b, N, "full"), tol=tol)


def restricted_norm(s: Symbol, N: int, tol: float = POWER_TOL) -> float:
    """Compression of the restriction of C_s to functions vanishing at 0.

    For s(0) = 0 this equals the compression of ||C_s - C_0||: the full-basis
    difference has a zero first row and column, and dropping them yields
    exactly the h20 matrix.
    """
    return op_norm(comp_matrix(s, N, "h20"), tol=tol)


# ---------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-dimension values of one extremal task, with an optional target."""

    task: str
    params: dict
    dims: tuple[int, ...]
    values: tuple[float, ...]
    target: float | None = None
    target_label: str | None = None
    gaps: tuple[float, ...] | None = field(default=None)

    @property
    def final_value(self) -> float:
        return self.values[-1]

    @property
    def final_gap(self) -> float | None:
        return None if self.gaps is None else self.gaps[-1]


_TASKS = ("distance", "restricted", "weighted", "opnorm")


def _task_value(task: str, params: dict, N: int, tol: float) -> float:
    if task == "distance":
        return distance(params["a"], params["b"], N, tol=tol)
    if task == "restricted":
        return restricted_norm(params["s"], N, tol=tol)
    if task == "weighted":
        return op_norm(weighted_matrix(params["w"], params["s"], N), tol=tol)
    if task == "opnorm":
        return op_norm(comp_matrix(params["s"], N, "full"), tol=tol)
    raise ValueError(f"unknown task {task!r}; expected one of {_TASKS}")


def _task_target(task: str, params: dict):
    from . import closedform

    if task == "distance":
        hit = closedform.recognize_distance_target(params["a"], params["b"])
        if hit is not None:
            return hit.value, hit.label
    elif task == "restricted":
        return closedform.recognize_restricted_target(params["s"]), "restricted"
    elif task == "weighted":
        w, s = params["w"], params["s"]
        if taylor_close(w, s):
            return closedform.recognize_restricted_target(s), "weighted"
    elif task == "opnorm":
        return closedform.recognize_opnorm_target(params["s"]), "opnorm"
    return None, None


def norm_schedule(task: str, params: dict, dims: Sequence[int],
                  tol: float = POWER_TOL) -> ConvergenceReport:
    """Run one extremal task over a strictly increasing dimension schedule.

    Attaches a closed-form target when the inputs match a known formula, and
    certifies that values are nondecreasing and never exceed the target beyond
    solver tolerance; a violation signals a solver bug, not bad input.
    """
    dims = tuple(int(d) for d in dims)
    if any(b <= a for a, b in zip(dims, dims[1:])) or not dims:
        raise PreconditionError("dimension schedule must be nonempty and strictly increasing")
    target, label = _task_target(task, params)
    values = tuple(_task_value(task, params, N, tol) for N in dims)
    for a, b in zip(values, values[1:]):
        if b < a - MONOTONE_TOL:
            raise SolverInternalError(
                f"compression values decreased ({a:.15g} -> {b:.15g}) in task {task!r}"
            )
    gaps = None
    if target is not None:
        for v in values:
            if v > target + TARGET_TOL:
                raise SolverInternalError(
                    f"compression value {v:.15g} exceeds closed-form target {target:.15g}"
                )
        gaps = tuple(target - v for v in values)
    pretty = {k: str(v) if isinstance(v, Symbol) else v for k, v in params.items()}
    return ConvergenceReport(task=task, params=pretty, dims=dims, values=values,
                             target=target, target_label=label if target is not None else None,
                             gaps=gaps)
