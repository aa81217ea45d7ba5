"""Numerical kernels: survival quadrature, finite differences, time grids."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from linkrel.errors import DomainError, QuadratureError

__all__ = ["Grid", "QuadratureResult", "integrate_survival", "derivative"]

TAIL_THRESHOLD = 1e-9
REFINE_TOL = 1e-8
MAX_LEVELS = 24
_DYADIC_PIECES = 24
_MAX_DOUBLINGS = 64


@dataclass(frozen=True)
class Grid:
    """Uniform time grid on ``[0, t_max]`` with ``steps + 1`` points."""

    t_max: float
    steps: int

    def __post_init__(self):
        t_max = float(self.t_max)
        if not (math.isfinite(t_max) and t_max > 0.0):
            raise DomainError(f"grid t_max must be positive, got {self.t_max!r}")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"grid steps must be an integer >= 2, got {self.steps!r}")
        object.__setattr__(self, "t_max", t_max)
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def points(self) -> np.ndarray:
        pts = np.linspace(0.0, self.t_max, self.steps + 1)
        pts[-1] = self.t_max
        return pts

    def __len__(self) -> int:
        return self.steps + 1


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    truncation_point: float


def _evaluate(f: Callable, t: np.ndarray) -> np.ndarray:
    try:
        with warnings.catch_warnings():
            # numpy deprecates float() of 1-element arrays inside scalar code
            warnings.simplefilter("error", DeprecationWarning)
            out = np.asarray(f(t), dtype=float)
    except (TypeError, DeprecationWarning):
        out = None
    if out is None or out.shape != t.shape:
        # scalar-only callable
        out = np.array([f(float(x)) for x in t], dtype=float)
    return out


def _initial_partition(t_star: float) -> np.ndarray:
    # dyadic breakpoints 0, T/2**k, ..., T/2, T: survival curves change on
    # scales that grow with t, so equal-width panels waste evaluations
    k = _DYADIC_PIECES
    inner = t_star / 2.0 ** np.arange(k - 1, -1, -1)
    return np.concatenate(([0.0], inner))


def integrate_survival(f: Callable) -> QuadratureResult:
    """Integrate a survival function over ``[0, inf)``.

    The range is truncated at the first ``T`` in 1, 2, 4, ... with
    ``f(T) < 1e-9``. ``[0, T]`` is then integrated by adaptive Simpson:
    an interval is accepted once its two-half estimate differs from the
    whole-interval estimate by less than its share of the 1e-8 budget
    (halved at each split), for at most 24 levels of splitting. The error
    estimate is the sum of accepted differences plus ``f(T) * T``, which
    bounds the discarded tail for the non-increasing integrands met here.

    ``f`` should accept a numpy array; scalar-only callables also work,
    just slowly.
    """
    f0 = float(_evaluate(f, np.zeros(1))[0])
    if abs(f0 - 1.0) > 1e-9:
        raise DomainError(f"survival integrand must equal 1 at t=0, got {f0!r}")

    t_star = 1.0
    f_tail = float(_evaluate(f, np.array([t_star]))[0])
    doublings = 0
    while not f_tail < TAIL_THRESHOLD:
        doublings += 1
        if doublings > _MAX_DOUBLINGS:
            raise QuadratureError(
                f"survival still {f_tail!r} at t={t_star!r}; tail does not decay",
                partial=None,
            )
        t_star *= 2.0
        f_tail = float(_evaluate(f, np.array([t_star]))[0])
    tail_bound = f_tail * t_star

    edges = _initial_partition(t_star)
    a, b = edges[:-1], edges[1:]
    fa = _evaluate(f, a)
    fb = _evaluate(f, b)
    m = 0.5 * (a + b)
    fm = _evaluate(f, m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = np.full(a.shape, REFINE_TOL / a.size)

    accepted: list[np.ndarray] = []
    diffs: list[np.ndarray] = []
    for _level in range(MAX_LEVELS):
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        both = _evaluate(f, np.concatenate((lm, rm)))
        flm, frm = both[: a.size], both[a.size :]
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        refined = left + right
        diff = np.abs(refined - whole)
        done = diff <= tol
        accepted.append(refined[done])
        diffs.append(diff[done])
        keep = ~done
        if not np.any(keep):
            value = math.fsum(np.concatenate(accepted))
            est = math.fsum(np.concatenate(diffs)) + tail_bound
            return QuadratureResult(value, est, t_star)
        a, m, b = a[keep], m[keep], b[keep]
        fa, fm, fb = fa[keep], fm[keep], fb[keep]
        flm, frm = flm[keep], frm[keep]
        left, right, tol = left[keep], right[keep], tol[keep] / 2.0
        # children: [a, m] with midpoint lm, [m, b] with midpoint rm
        a, m, b = np.concatenate((a, m)), np.concatenate((0.5 * (a + m), 0.5 * (m + b))), np.concatenate((m, b))
        fa, fm, fb = np.concatenate((fa, fm)), np.concatenate((flm, frm)), np.concatenate((fm, fb))
        whole = np.concatenate((left, right))
        tol = np.concatenate((tol, tol))

    pending = math.fsum(whole)
    partial = QuadratureResult(
        math.fsum(np.concatenate(accepted)) + pending,
        math.fsum(np.concatenate(diffs)) + tail_bound,
        t_star,
    )
    raise QuadratureError(
        f"no convergence after {MAX_LEVELS} refinement levels "
        f"({whole.size} intervals still above tolerance)",
        partial=partial,
    )


def derivative(f: Callable, t):
    """Finite-difference derivative of ``f`` at ``t`` (scalar or array).

    Step ``h = max(1e-6, 1e-6 * t)``; central difference where ``t >= h``,
    forward difference closer to the origin so ``f`` is never evaluated at
    negative time.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("derivative requires t >= 0")
    h = np.maximum(1e-6, 1e-6 * arr)
    central = arr >= h
    lo = np.where(central, arr - h, arr)
    hi = arr + h
    span = np.where(central, 2.0 * h, h)
    if arr.ndim == 0:
        lo_v, hi_v = f(float(lo)), f(float(hi))
    else:
        lo_v = _evaluate(f, lo)
        hi_v = _evaluate(f, hi)
    out = (np.asarray(hi_v, dtype=float) - np.asarray(lo_v, dtype=float)) / span
    return float(out) if out.ndim == 0 else out
