"""Numerical kernels shared by the physics modules.

Adaptive ODE integration with event detection (backed by scipy's DOP853),
real Lambert W on branches 0 and -1, bracketed root finding, quadrature for
integrands with inverse-square-root endpoint singularities, and a golden
section scalar optimizer.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

__all__ = [
    "BracketError",
    "QuadratureError",
    "EventRecord",
    "OdeTrajectory",
    "integrate",
    "lambert_w",
    "find_root",
    "integrate_singular",
    "optimize_scalar",
]

_INV_E = np.exp(-1.0)
_GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


class BracketError(ValueError):
    """The supplied interval does not bracket a root."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested accuracy."""


@dataclass
class EventRecord:
    """One located zero crossing of an event function."""

    index: int
    time: float
    state: np.ndarray


@dataclass
class OdeTrajectory:
    """Result of an adaptive integration.

    ``status`` is one of ``"completed"``, ``"terminal-event"`` (the magnitude
    guard fired) or ``"singular-step"`` (step size underflow, which we treat
    as a suspected finite-time singularity).  ``interpolant`` is the dense
    output valid on ``[t[0], t[-1]]``.
    """

    t: np.ndarray
    y: np.ndarray
    interpolant: Callable[[float], np.ndarray]
    events: list[EventRecord] = field(default_factory=list)
    status: str = "completed"
    message: str = ""

    def __call__(self, t):
        return self.interpolant(t)

    @property
    def final_state(self) -> np.ndarray:
        return self.y[:, -1]


def integrate(
    rhs: Callable[[float, np.ndarray], Sequence[float]],
    y0: Sequence[float],
    t_span: tuple[float, float],
    tol: float = 1e-10,
    events: Sequence[Callable[[float, np.ndarray], float]] = (),
    magnitude_cap: float = 1e6,
    max_step: float = np.inf,
) -> OdeTrajectory:
    """Integrate ``y' = rhs(t, y)`` adaptively with dense output.

    Event functions are scalar; their sign changes are located on the dense
    output.  A terminal guard stops the run once ``max|y|`` exceeds
    ``magnitude_cap`` (the blow-up guard).  Identical inputs always produce
    identical trajectories.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")

    def guard(t, y):
        return np.max(np.abs(y)) - magnitude_cap

    guard.terminal = True

    sol = solve_ivp(
        rhs,
        t_span,
        np.asarray(y0, dtype=float),
        method="DOP853",
        rtol=tol,
        atol=tol,
        dense_output=True,
        events=list(events) + [guard],
        max_step=max_step,
    )

    recs: list[EventRecord] = []
    for idx in range(len(events)):
        for te in sol.t_events[idx]:
            recs.append(EventRecord(idx, float(te), sol.sol(te)))
    recs.sort(key=lambda r: r.time)

    if sol.status == 1:
        status = "terminal-event"
    elif sol.status == 0:
        status = "completed"
    else:
        status = "singular-step"
    return OdeTrajectory(sol.t, sol.y, sol.sol, recs, status, sol.message or "")


def _halley(w: float, x: float, max_iter: int = 50) -> float:
    for _ in range(max_iter):
        ew = np.exp(w)
        f = w * ew - x
        if f == 0.0:
            return w
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = f / denom
        w -= step
        if abs(step) <= 1e-16 * max(1.0, abs(w)):
            break
    return w


def _branch_point_series(x: float, branch: int) -> float:
    # expansion around w = -1, p = +/-sqrt(2(e x + 1)); Corless et al. coefficients
    p = np.sqrt(2.0 * (np.e * x + 1.0))
    if branch == -1:
        p = -p
    return -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0 - 43.0 * p**4 / 540.0


def lambert_w(branch: int, x: float) -> float:
    """Real Lambert W: the solution w of ``w e^w = x`` on the given branch.

    Branch 0 is defined on ``[-1/e, inf)`` with values >= -1; branch -1 on
    ``[-1/e, 0)`` with values <= -1.  Residual ``|w e^w - x|`` stays below
    1e-12 across both branch domains.
    """
    if branch not in (0, -1):
        raise ValueError(f"branch must be 0 or -1, got {branch}")
    x = float(x)
    if x < -_INV_E - 1e-14:
        raise ValueError(f"x={x} below the branch point -1/e")
    x = max(x, -_INV_E)
    if branch == -1 and x >= 0.0:
        raise ValueError("branch -1 requires x < 0")

    if x == 0.0:
        return 0.0
    near_branch_point = abs(x + _INV_E) < 1e-4
    if near_branch_point:
        w = _branch_point_series(x, branch)
        if abs(x + _INV_E) < 1e-12:
            return w
        return _halley(w, x)

    if branch == 0:
        if x > np.e:
            lx = np.log(x)
            w = lx - np.log(lx)
        else:
            w = x / (1.0 + x) if x < 0.5 else np.log1p(x)
    else:
        lx = np.log(-x)
        w = lx - np.log(-lx)
    return _halley(w, x)


def find_root(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    """Root of ``f`` inside the bracket ``[a, b]`` (Brent's method).

    Raises :class:`BracketError` when ``f(a)`` and ``f(b)`` do not differ in
    sign.  The result never leaves the initial bracket.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    return float(brentq(f, a, b, xtol=tol, maxiter=200))


def _quad_transformed(
    f: Callable[[float], float],
    end: float,
    width: float,
    sign: float,
    eps: float,
    u_floor_scale: float,
    end_limit: Optional[float],
) -> float:
    """Integrate f over a half-panel with an inverse-sqrt singularity at ``end``.

    Substitutes ``s = end + sign*u**2`` which regularizes the integrand; the
    tiny interval ``[0, u_floor]`` is handled with the (known or sampled)
    integrand limit to avoid catastrophic cancellation when evaluating f at
    machine-precision distance from the singular point.
    """
    w = np.sqrt(width)

    def g(u):
        return 2.0 * u * f(end + sign * u * u)

    u_floor = u_floor_scale * max(1.0, w)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = quad(g, u_floor, w, epsabs=eps, epsrel=eps, limit=400)
    if not np.isfinite(val):
        raise QuadratureError("non-finite quadrature value on singular panel")
    g_floor = g(u_floor)
    g_zero = 2.0 * end_limit if end_limit is not None else g_floor
    # f(end + u^2) ~ c/u near the singular end, so g is regular: trapezoid tail
    tail = 0.5 * (g_zero + g_floor) * u_floor
    return val + tail


def integrate_singular(
    f: Callable[[float], float],
    a: float,
    b: float,
    singular_ends: tuple[bool, bool] = (True, True),
    eps: float = 1e-12,
    u_floor_scale: float = 1e-8,
    end_limits: tuple[Optional[float], Optional[float]] = (None, None),
) -> float:
    """Integral of ``f`` over ``[a, b]`` with inverse-square-root endpoints.

    ``singular_ends`` flags which endpoints carry a ``1/sqrt`` singularity;
    those are removed exactly by the substitution ``u**2 = s - endpoint``.
    ``end_limits`` optionally supplies ``lim u*f(end +/- u^2)`` at each
    flagged end, which keeps the quadrature robust when ``f`` cannot be
    evaluated reliably within round-off distance of the endpoint.
    """
    if b <= a:
        raise ValueError("require b > a")
    m = 0.5 * (a + b)
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if singular_ends[0]:
            total += _quad_transformed(f, a, m - a, +1.0, eps, u_floor_scale, end_limits[0])
        else:
            val, _ = quad(f, a, m, epsabs=eps, epsrel=eps, limit=400)
            total += val
        if singular_ends[1]:
            total += _quad_transformed(f, b, b - m, -1.0, eps, u_floor_scale, end_limits[1])
        else:
            val, _ = quad(f, m, b, epsabs=eps, epsrel=eps, limit=400)
            total += val
    if not np.isfinite(total):
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge")
    return total


def optimize_scalar(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    mode: str = "min",
) -> tuple[float, float]:
    """Golden section search for the extremum of a unimodal ``f`` on ``[a, b]``.

    Returns ``(x_star, f(x_star))`` with ``f`` evaluated in the caller's
    orientation regardless of ``mode``.  Unimodality is the caller's
    responsibility; for non-unimodal inputs the result is the best point in
    the shrinking bracket sequence.
    """
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    sign = 1.0 if mode == "min" else -1.0

    lo, hi = float(a), float(b)
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = sign * f(c), sign * f(d)
    for _ in range(300):
        if hi - lo <= tol:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = sign * f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = sign * f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)
