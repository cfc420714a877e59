"""Fixed-step RK4 flow for linear, parameter-dependent ODE systems.

The right-hand side is u' = A(r) u with A supplied as a callable.  Two details
matter more than the integrator itself:

* The abscissa grid is a pure function of (s, t, breakpoints, step).  A
  restriction of a path to a subinterval therefore replays bit-identical
  arithmetic, which is what lets locality checks demand deviation zero even
  for numeric transports.
* Stage evaluations at segment endpoints pass a side hint so that velocity
  kinks (concatenation seams) never leak the wrong one-sided derivative into
  a stage.  Interior stages pass side 0.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .errors import ConfigError

CoefficientFn = Callable[[float, int], Sequence[Sequence[float]]]


def _axpy(u: Sequence[float], h: float, k: Sequence[float]) -> tuple[float, ...]:
    return tuple(u[i] + h * k[i] for i in range(len(u)))


def _app(a: Sequence[Sequence[float]], u: Sequence[float]) -> tuple[float, ...]:
    return tuple(sum(row[j] * u[j] for j in range(len(u))) for row in a)


def rk4_linear_flow(coeff: CoefficientFn, s: float, t: float,
                    u0: Sequence[float], step: float,
                    breakpoints: Sequence[float] = ()) -> tuple[float, ...]:
    """Integrate u' = A(r) u from parameter s to t, starting at u0.

    ``coeff(r, side)`` returns the matrix A at parameter r; ``side`` is +1/-1
    when the stage sits on a segment boundary and the derivative should be
    taken from inside the segment, 0 otherwise.  ``breakpoints`` lists the
    parameters strictly between s and t where A may jump; each becomes a
    segment boundary so no RK4 step straddles a kink.
    """
    u = tuple(float(c) for c in u0)
    if t == s:
        return u
    if step <= 0.0:
        raise ConfigError(f"integrator step must be positive, got {step}")
    d = 1 if t > s else -1
    lo, hi = min(s, t), max(s, t)
    cuts = sorted((b for b in breakpoints if lo < b < hi), reverse=(d < 0))
    knots = [s, *cuts, t]

    for a, b in zip(knots, knots[1:]):
        n = max(1, math.ceil(abs(b - a) / step))
        h = (b - a) / n
        carried = None  # step i's endpoint matrix doubles as step i+1's start
        for i in range(n):
            r0 = a + i * h
            r1 = b if i == n - 1 else a + (i + 1) * h
            hloc = r1 - r0
            a0 = coeff(r0, d) if i == 0 else carried
            am = coeff(r0 + hloc / 2.0, 0)
            last = i == n - 1
            a1 = coeff(r1, -d if last else 0)
            carried = a1 if not last else None
            k1 = _app(a0, u)
            k2 = _app(am, _axpy(u, hloc / 2.0, k1))
            k3 = _app(am, _axpy(u, hloc / 2.0, k2))
            k4 = _app(a1, _axpy(u, hloc, k3))
            u = tuple(u[j] + hloc / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
                      for j in range(len(u)))
    return u


def fd_velocity(path, h: float) -> Callable[[float, int], tuple[float, ...]]:
    """Finite-difference chart velocity for paths without an analytic one.

    Second-order stencils, one-sided near domain bounds and breakpoints so a
    stencil never spans a kink.  Exact breakpoints resolve by the requested
    side (nonnegative side reads the right-hand piece).
    """
    if path.kind != "chart":
        raise ConfigError("finite differences need a chart path")
    dom = path.domain

    def smooth_interval(s: float, side: int) -> tuple[float, float]:
        lo, hi = dom.lo, dom.hi
        for b in path.breakpoints:
            if b < s:
                lo = max(lo, b)
            elif b == s and side >= 0:
                lo = max(lo, b)
            else:
                hi = min(hi, b)
                break
        return lo, hi

    def coords(r: float) -> tuple[float, ...]:
        return path.at(r).coords

    def velocity(s: float, side: int) -> tuple[float, ...]:
        lo, hi = smooth_interval(s, side)
        width = hi - lo
        if width <= 0.0:
            raise ConfigError("degenerate smooth interval for finite differences")
        hh = min(h, width / 4.0)
        if s - hh >= lo and s + hh <= hi:
            f0 = coords(s - hh)
            f1 = coords(s + hh)
            return tuple((f1[i] - f0[i]) / (2.0 * hh) for i in range(len(f0)))
        if s + 2.0 * hh <= hi:
            f0, f1, f2 = coords(s), coords(s + hh), coords(s + 2.0 * hh)
            return tuple((-3.0 * f0[i] + 4.0 * f1[i] - f2[i]) / (2.0 * hh)
                         for i in range(len(f0)))
        f0, f1, f2 = coords(s), coords(s - hh), coords(s - 2.0 * hh)
        return tuple((3.0 * f0[i] - 4.0 * f1[i] + f2[i]) / (2.0 * hh)
                     for i in range(len(f0)))

    return velocity
