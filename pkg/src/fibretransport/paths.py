"""Paths in a base space and the algebra that rearranges them.

A path is a map from a closed real interval into a base space.  The library
never needs smoothness from a path, only evaluation; everything else here is
bookkeeping that the transport laws quantify over:

* restriction to a subinterval,
* reparameterization by a bijection between intervals (orientation preserving
  or reversing), with the canonical reversal s -> 1 - s on [0, 1],
* concatenation of two paths under a schedule that says how the two factor
  domains embed into the product domain.

Paths carry three optional pieces of structure that downstream code uses:
``breakpoints`` (parameters where the point map may kink or jump, so exact
integrators can split there), an analytic ``velocity`` (for chart paths), and
``crossings`` (declared self-intersection parameter pairs of chart paths;
discrete paths find their self-intersections by enumeration instead).

Breakpoint convention for piecewise-constant paths: the value at an interior
breakpoint belongs to the piece on the right, so [n0 on [0, .5), n1 on [.5, 1]]
evaluates to n1 at 0.5.  Compositions preserve evaluation semantics exactly
because a derived path evaluates through the original callable.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .bundles import BasePoint, graph_point, point_deviation
from .errors import (
    ConfigError,
    DomainMismatch,
    DomainNotContained,
    EndpointMismatch,
    NonCanonicalDomain,
    ParameterOutOfDomain,
    ScheduleMismatch,
)

# Parameters this close to a domain edge are snapped onto it: float images of
# exact endpoints under affine maps can land an ulp outside.
EDGE_SLACK = 1e-9

# Two intervals or parameters are "the same" below this gap.
EXACT = 1e-12


def linspace(lo: float, hi: float, n: int) -> list[float]:
    if n <= 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval ends must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, s: float, slack: float = EDGE_SLACK) -> bool:
        return self.lo - slack <= s <= self.hi + slack

    def clamp(self, s: float, slack: float = EDGE_SLACK) -> float:
        if not self.contains(s, slack):
            raise ParameterOutOfDomain(f"{s} outside [{self.lo}, {self.hi}]")
        return min(max(s, self.lo), self.hi)

    def contains_interval(self, other: "Interval", slack: float = EXACT) -> bool:
        return other.lo >= self.lo - slack and other.hi <= self.hi + slack

    def same_as(self, other: "Interval", tol: float = EXACT) -> bool:
        return abs(self.lo - other.lo) <= tol and abs(self.hi - other.hi) <= tol

    def samples(self, n: int) -> list[float]:
        return linspace(self.lo, self.hi, n)


UNIT = Interval(0.0, 1.0)


# ---------------------------------------------------------------------------
# Reparameterizations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reparameterization:
    """A bijection between two parameter intervals.

    ``fwd`` maps source -> target, ``inv`` is its inverse.  ``orientation`` is
    "preserving" (endpoints map to endpoints in order) or "reversing".
    ``deriv``, when present, is the derivative of ``fwd``; derived paths use it
    to push analytic velocities through.
    """

    source: Interval
    target: Interval
    fwd: Callable[[float], float]
    inv: Callable[[float], float]
    orientation: str
    deriv: Callable[[float], float] | None = None
    name: str = "remap"

    def __post_init__(self) -> None:
        if self.orientation not in ("preserving", "reversing"):
            raise ValueError("orientation must be 'preserving' or 'reversing'")
        lo_img, hi_img = self.fwd(self.source.lo), self.fwd(self.source.hi)
        want = (self.target.lo, self.target.hi)
        if self.orientation == "reversing":
            want = (self.target.hi, self.target.lo)
        if abs(lo_img - want[0]) > 1e-9 or abs(hi_img - want[1]) > 1e-9:
            raise DomainMismatch(
                f"{self.name}: endpoints map to ({lo_img}, {hi_img}), "
                f"expected {want}"
            )

    @property
    def sign(self) -> float:
        return 1.0 if self.orientation == "preserving" else -1.0

    def apply(self, s: float) -> float:
        return self.target.clamp(self.fwd(self.source.clamp(s)))

    def invert_param(self, t: float) -> float:
        return self.source.clamp(self.inv(self.target.clamp(t)))


def affine_remap(source: Interval, target: Interval, reversing: bool = False,
                 name: str = "affine") -> Reparameterization:
    if source.width <= 0.0 or target.width <= 0.0:
        raise ValueError("affine remaps need non-degenerate intervals")
    k = target.width / source.width
    if reversing:
        fwd = lambda s: target.hi - (s - source.lo) * k
        inv = lambda t: source.lo + (target.hi - t) / k
        deriv = lambda s: -k
    else:
        fwd = lambda s: target.lo + (s - source.lo) * k
        inv = lambda t: source.lo + (t - target.lo) / k
        deriv = lambda s: k
    return Reparameterization(
        source=source, target=target, fwd=fwd, inv=inv,
        orientation="reversing" if reversing else "preserving",
        deriv=deriv, name=name,
    )


def square_remap() -> Reparameterization:
    """The orientation-preserving bijection s -> s*s of [0, 1] onto itself."""
    return Reparameterization(
        source=UNIT, target=UNIT,
        fwd=lambda s: s * s, inv=math.sqrt,
        orientation="preserving", deriv=lambda s: 2.0 * s, name="square",
    )


def canonical_reversal() -> Reparameterization:
    """s -> 1 - s on [0, 1]: the canonical orientation-reversing bijection."""
    return affine_remap(UNIT, UNIT, reversing=True, name="reversal")


def compose_remaps(outer: Reparameterization, inner: Reparameterization) -> Reparameterization:
    """outer after inner: valid when inner.target equals outer.source."""
    if not inner.target.same_as(outer.source):
        raise DomainMismatch("inner remap's target must be outer remap's source")
    deriv = None
    if outer.deriv is not None and inner.deriv is not None:
        deriv = lambda s: outer.deriv(inner.fwd(s)) * inner.deriv(s)
    both = {outer.orientation, inner.orientation}
    orientation = "preserving" if len(both) == 1 else "reversing"
    return Reparameterization(
        source=inner.source, target=outer.target,
        fwd=lambda s: outer.fwd(inner.fwd(s)),
        inv=lambda t: inner.inv(outer.inv(t)),
        orientation=orientation, deriv=deriv,
        name=f"{outer.name}.{inner.name}",
    )


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """A parameterized path in one base space.

    ``point_at`` must accept any parameter of ``domain`` (derived paths call it
    through remap images, which the constructor-supplied callables handle).
    ``velocity_fn(s, side)`` returns d(coords)/ds; ``side`` (+1, -1, 0) picks
    the one-sided limit at a breakpoint and is ignored at smooth parameters.
    """

    space: str
    domain: Interval
    point_at: Callable[[float], BasePoint]
    kind: str                                  # discrete | chart
    breakpoints: tuple[float, ...] = ()
    velocity_fn: Callable[[float, int], tuple[float, ...]] | None = None
    crossings: tuple[tuple[float, float], ...] = ()
    name: str = "path"

    def __post_init__(self) -> None:
        if self.kind not in ("discrete", "chart"):
            raise ValueError("path kind must be 'discrete' or 'chart'")
        for b in self.breakpoints:
            if not (self.domain.lo < b < self.domain.hi):
                raise ValueError(f"breakpoint {b} not interior to the domain")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("breakpoints must be sorted")

    def at(self, s: float) -> BasePoint:
        return self.point_at(self.domain.clamp(s))

    def velocity(self, s: float, side: int = 0) -> tuple[float, ...] | None:
        if self.velocity_fn is None:
            return None
        return self.velocity_fn(self.domain.clamp(s), side)

    @property
    def start(self) -> BasePoint:
        return self.at(self.domain.lo)

    @property
    def end(self) -> BasePoint:
        return self.at(self.domain.hi)

    def interior_breakpoints(self, lo: float, hi: float) -> list[float]:
        return [b for b in self.breakpoints if lo < b < hi]


def with_crossings(p: Path, pairs: Sequence[tuple[float, float]],
                   deviation: Callable[[BasePoint, BasePoint], float] = point_deviation,
                   ) -> Path:
    """Attach declared self-intersection parameter pairs to a chart path.

    ``deviation`` may be swapped for a coordinate-aware gauge (one that
    identifies azimuths modulo the period, say) when the raw chart distance
    would reject a genuinely closed pair.
    """
    norm = tuple(sorted((min(r, s), max(r, s)) for r, s in pairs))
    for r, s in norm:
        if not (p.domain.contains(r) and p.domain.contains(s)):
            raise ParameterOutOfDomain("crossing parameters must lie in the domain")
        if deviation(p.at(r), p.at(s)) > 1e-6:
            raise ValueError(f"declared crossing ({r}, {s}) does not close up")
    return replace(p, crossings=norm)


def piecewise_path(space: str, domain: Interval,
                   pieces: Sequence[tuple[float, str]], name: str = "path") -> Path:
    """A piecewise-constant path over graph nodes.

    ``pieces`` is a sequence of (until, node): the path sits at ``node`` up to
    parameter ``until``; the final ``until`` must equal the domain end.  The
    value at each interior breakpoint belongs to the following piece.
    """
    if not pieces:
        raise ConfigError("a piecewise path needs at least one piece")
    untils = [float(u) for u, _ in pieces]
    nodes = [str(n) for _, n in pieces]
    for a, b in zip(untils, untils[1:]):
        if not b > a:
            raise ConfigError("piece boundaries must be strictly increasing")
    if abs(untils[-1] - domain.hi) > EXACT:
        raise ConfigError("last piece must end at the domain end")
    untils[-1] = domain.hi
    if untils[0] <= domain.lo:
        raise ConfigError("first piece must extend past the domain start")
    points = [graph_point(space, n) for n in nodes]
    cut = untils[:-1]

    def at(s: float) -> BasePoint:
        i = bisect.bisect_right(cut, s)
        return points[i]

    return Path(
        space=space, domain=domain, point_at=at, kind="discrete",
        breakpoints=tuple(cut), name=name,
    )


def path_from_dict(space: str, data: dict, name: str = "path") -> Path:
    """Load {"domain": [lo, hi], "pieces": [{"until": t, "point": n}, ...]}."""
    try:
        lo, hi = (float(v) for v in data["domain"])
        pieces = [(float(pc["until"]), str(pc["point"])) for pc in data["pieces"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed path descriptor: {exc}") from exc
    return piecewise_path(space, Interval(lo, hi), pieces, name=name)


def path_from_json(space: str, text: str, name: str = "path") -> Path:
    return path_from_dict(space, json.loads(text), name=name)


def constant_path(space: str, node: str, domain: Interval = UNIT,
                  name: str = "const") -> Path:
    return piecewise_path(space, domain, [(domain.hi, node)], name=name)


# ---------------------------------------------------------------------------
# The algebra: restrict / reparameterize / reverse / concatenate
# ---------------------------------------------------------------------------

def restrict(p: Path, sub: Interval) -> Path:
    """The same point map considered over a subinterval of the domain."""
    if not p.domain.contains_interval(sub):
        raise DomainNotContained(
            f"[{sub.lo}, {sub.hi}] is not inside [{p.domain.lo}, {p.domain.hi}]"
        )
    bps = tuple(b for b in p.breakpoints if sub.lo < b < sub.hi)
    crossings = tuple(
        (r, s) for r, s in p.crossings if sub.contains(r, EXACT) and sub.contains(s, EXACT)
    )
    return replace(
        p, domain=sub, breakpoints=bps, crossings=crossings,
        name=f"{p.name}|[{sub.lo:g},{sub.hi:g}]",
    )


def reparameterize(p: Path, remap: Reparameterization) -> Path:
    """Precompose the path with a bijection onto its domain."""
    if not remap.target.same_as(p.domain):
        raise DomainMismatch(
            f"remap targets [{remap.target.lo}, {remap.target.hi}], "
            f"path domain is [{p.domain.lo}, {p.domain.hi}]"
        )

    def at(s: float) -> BasePoint:
        return p.at(remap.fwd(s))

    velocity = None
    if p.velocity_fn is not None and remap.deriv is not None:
        sgn = 1 if remap.orientation == "preserving" else -1

        def velocity(s: float, side: int) -> tuple[float, ...]:
            k = remap.deriv(s)
            inner = p.velocity(remap.fwd(s), side * sgn)
            return tuple(c * k for c in inner)

    bps = sorted(remap.invert_param(b) for b in p.breakpoints)
    bps = tuple(b for b in bps if remap.source.lo < b < remap.source.hi)
    crossings = tuple(sorted(
        tuple(sorted((remap.invert_param(r), remap.invert_param(s))))
        for r, s in p.crossings
    ))
    return Path(
        space=p.space, domain=remap.source, point_at=at, kind=p.kind,
        breakpoints=bps, velocity_fn=velocity, crossings=crossings,
        name=f"{p.name}o{remap.name}",
    )


def reverse(p: Path) -> Path:
    """Run a canonically parameterized path backwards: s -> p(1 - s)."""
    if not p.domain.same_as(UNIT):
        raise NonCanonicalDomain("reverse expects a path over [0, 1]")
    return reparameterize(p, canonical_reversal())


@dataclass(frozen=True)
class ConcatSchedule:
    """How two factor domains embed into a product domain.

    ``left`` maps [start, mid] onto the first path's domain and ``right`` maps
    [mid, end] onto the second's; both must preserve orientation.  The
    canonical schedule glues two unit-interval paths over [0, 1] with the
    midpoint at 1/2 and the affine stretches s -> 2s and s -> 2s - 1.
    """

    left: Reparameterization
    right: Reparameterization

    def __post_init__(self) -> None:
        if self.left.orientation != "preserving" or self.right.orientation != "preserving":
            raise ScheduleMismatch("schedule remaps must preserve orientation")
        if abs(self.left.source.hi - self.right.source.lo) > EXACT:
            raise ScheduleMismatch("left and right pieces must share the midpoint")

    @property
    def start(self) -> float:
        return self.left.source.lo

    @property
    def mid(self) -> float:
        return self.left.source.hi

    @property
    def end(self) -> float:
        return self.right.source.hi

    @property
    def domain(self) -> Interval:
        return Interval(self.start, self.end)


def schedule_for(dom1: Interval, dom2: Interval, start: float = 0.0,
                 mid: float = 0.5, end: float = 1.0) -> ConcatSchedule:
    return ConcatSchedule(
        left=affine_remap(Interval(start, mid), dom1, name="left"),
        right=affine_remap(Interval(mid, end), dom2, name="right"),
    )


def canonical_schedule() -> ConcatSchedule:
    return schedule_for(UNIT, UNIT)


def concatenate(p1: Path, p2: Path, schedule: ConcatSchedule | None = None) -> Path:
    """The product path: traverse p1 then p2 under the given schedule."""
    if p1.space != p2.space or p1.kind != p2.kind:
        raise ScheduleMismatch("paths must live in the same base space")
    if schedule is None:
        schedule = schedule_for(p1.domain, p2.domain)
    if not schedule.left.target.same_as(p1.domain):
        raise ScheduleMismatch("schedule's left piece must map onto p1's domain")
    if not schedule.right.target.same_as(p2.domain):
        raise ScheduleMismatch("schedule's right piece must map onto p2's domain")
    if point_deviation(p1.end, p2.start) > 1e-9:
        raise EndpointMismatch(
            f"p1 ends at {p1.end}, p2 starts at {p2.start}"
        )

    q1 = reparameterize(p1, schedule.left)
    q2 = reparameterize(p2, schedule.right)
    mid = schedule.mid

    def at(s: float) -> BasePoint:
        return q1.at(s) if s <= mid else q2.at(s)

    velocity = None
    if q1.velocity_fn is not None and q2.velocity_fn is not None:

        def velocity(s: float, side: int) -> tuple[float, ...]:
            if s < mid or (s == mid and side < 0):
                return q1.velocity(s, side)
            if s > mid or side > 0:
                return q2.velocity(s, side)
            return q2.velocity(s, side)

    bps = sorted({*q1.breakpoints, mid, *q2.breakpoints})
    return Path(
        space=p1.space, domain=schedule.domain, point_at=at, kind=p1.kind,
        breakpoints=tuple(bps), velocity_fn=velocity,
        name=f"({p1.name}*{p2.name})",
    )


# ---------------------------------------------------------------------------
# Discrete-path walkers
# ---------------------------------------------------------------------------

def piece_runs(p: Path, lo: float | None = None, hi: float | None = None
               ) -> list[tuple[float, float, BasePoint]]:
    """Maximal constancy runs (run_lo, run_hi, point) of a discrete path."""
    if p.kind != "discrete":
        raise ConfigError("piece runs are defined for discrete paths")
    lo = p.domain.lo if lo is None else lo
    hi = p.domain.hi if hi is None else hi
    if lo > hi:
        lo, hi = hi, lo
    if hi - lo <= 0.0:
        x = p.at(lo)
        return [(lo, hi, x)]
    cuts = [lo, *p.interior_breakpoints(lo, hi), hi]
    runs: list[tuple[float, float, BasePoint]] = []
    for a, b in zip(cuts, cuts[1:]):
        x = p.at(0.5 * (a + b))
        if runs and runs[-1][2].node == x.node:
            runs[-1] = (runs[-1][0], b, runs[-1][2])
        else:
            runs.append((a, b, x))
    return runs


def node_sequence(p: Path, s: float, t: float) -> list[str]:
    """Nodes visited in order when moving from parameter s to parameter t."""
    lo, hi = (s, t) if s <= t else (t, s)
    cuts = [lo, *p.interior_breakpoints(lo, hi), hi]
    samples = [lo]
    samples.extend(0.5 * (a + b) for a, b in zip(cuts, cuts[1:]))
    samples.append(hi)
    if t < s:
        samples.reverse()
    seq: list[str] = []
    for x in samples:
        n = p.at(x).node
        if not seq or seq[-1] != n:
            seq.append(n)
    return seq


def trace_nodes(p: Path) -> tuple[str, ...]:
    """The distinct nodes a discrete path visits, in first-visit order."""
    seen: list[str] = []
    for _, _, x in piece_runs(p):
        if x.node not in seen:
            seen.append(x.node)
    return tuple(seen)


def paths_equal(p: Path, q: Path, samples: int = 101, tol: float = 1e-12) -> bool:
    """Pointwise comparison on a uniform parameter grid."""
    if p.space != q.space or not p.domain.same_as(q.domain, tol=1e-12):
        return False
    for s in p.domain.samples(samples):
        if point_deviation(p.at(s), q.at(s)) > tol:
            return False
    return True
