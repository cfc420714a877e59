"""Liftings: curves in the total space that ride along a base path.

Anchoring a fibre element u at a parameter s0 and transporting it to every
other parameter traces out a lifting: a curve t -> (path(t), value(t)) whose
projection is the base path and whose value at s0 is u.  The checks here
cover the projection identity, consistency under re-anchoring, global
uniqueness over self-intersecting paths (loops included), and the fact that
the liftings through one fibre sweep every fibre the path touches.

Liftings evaluate lazily; each ``at`` call is one transport application.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .bundles import (FibreBundle, FibreElement, element_deviation,
                      fibre_at, fibre_elements, point_deviation, rebase)
from .errors import (AnchorMismatch, ConfigError, LiftInconsistent,
                     PointNotOnPath, UniquenessPrereqFailed, WrongFibreKind)
from .paths import Path, piece_runs
from .transport import (LawReport, Transport, _Collector, _pick, _rng,
                        draw_for_bundle, law_tolerance, transport)

_MATCH_TOL = 1e-6


@dataclass(frozen=True)
class Lifting:
    """A total-space curve over ``path`` pinned to ``through`` at ``anchor``."""

    path: Path
    anchor: float
    through: FibreElement
    value_fn: Callable[[float], FibreElement] = field(repr=False)
    name: str = "lifting"

    def at(self, t: float) -> FibreElement:
        return self.value_fn(self.path.domain.clamp(t))

    def trace(self, params: Sequence[float] | None = None
              ) -> list[tuple[float, FibreElement]]:
        if params is None:
            params = self.path.domain.samples(11)
        return [(t, self.at(t)) for t in params]


def lift(T: Transport, p: Path, u: FibreElement, s0: float) -> Lifting:
    """The lifting through u anchored at parameter s0."""
    s0 = p.domain.clamp(s0)
    if T.bundle.point_deviation(u.over, p.at(s0)) > _MATCH_TOL:
        raise AnchorMismatch(
            f"element over {u.over} cannot anchor a lifting at path({s0})")
    return Lifting(path=p, anchor=s0, through=u,
                   value_fn=lambda t: transport(T, p, s0, t, u),
                   name=f"lift[{p.name}@{s0:g}]")


def occurrence_set(p: Path, u: FibreElement,
                   deviation=point_deviation) -> tuple[float, ...]:
    """Parameters at which the path sits under u's base point.

    Discrete paths report the midpoint of each maximal constancy run whose
    node matches.  Chart paths report matches among the declared
    self-crossing parameters (generic chart points occur once and carry no
    declared parameter, so they are not locatable).  An element whose base
    point never shows up raises PointNotOnPath.
    """
    found: list[float] = []
    if p.kind == "discrete":
        for lo, hi, x in piece_runs(p):
            if x.node == u.over.node:
                found.append((lo + hi) / 2.0)
    else:
        candidates = sorted({c for pair in p.crossings for c in pair})
        for c in candidates:
            if deviation(p.at(c), u.over) <= _MATCH_TOL:
                found.append(c)
    if not found:
        raise PointNotOnPath(
            f"no occurrence of base point {u.over} along {p.name!r}")
    return tuple(found)


def transport_from_lifting(bundle: FibreBundle,
                           assignment: Callable[[Path, FibreElement, float], Lifting],
                           paths, *, trials: int = 100,
                           tolerance: float = 1e-9, seed: int = 0) -> Transport:
    """Rebuild a transport from a rule assigning liftings to anchored elements.

    The rule must reproduce its anchor and be stable under re-anchoring:
    lifting through a point of a produced lifting must reproduce the whole
    lifting.  Violations raise LiftInconsistent.  The returned transport
    evaluates the assigned lifting at the target parameter.
    """
    if isinstance(paths, Path):
        paths = (paths,)
    paths = tuple(paths)
    if not paths:
        raise ConfigError("at least one path is required")
    rng = _rng(seed, "lifting-consistency")
    for _ in range(trials):
        p = _pick(rng, paths)
        s = rng.uniform(p.domain.lo, p.domain.hi)
        u = draw_for_bundle(rng, bundle, p.at(s))
        lifted = assignment(p, u, s)
        dev = element_deviation(lifted.at(s), u)
        if dev > tolerance:
            raise LiftInconsistent(
                f"assigned lifting misses its anchor by {dev} at {p.name!r}({s})")
        r = rng.uniform(p.domain.lo, p.domain.hi)
        again = assignment(p, lifted.at(r), r)
        for g in p.domain.samples(5):
            dev = element_deviation(lifted.at(g), again.at(g))
            if dev > tolerance:
                raise LiftInconsistent(
                    f"re-anchoring at {p.name!r}({r}) changes the lifting "
                    f"by {dev} at parameter {g}")

    def apply(p: Path, s: float, t: float, u: FibreElement) -> FibreElement:
        return assignment(p, u, s).at(t)

    return Transport(name="from-lifting", bundle=bundle, apply_fn=apply,
                     declared=frozenset(), tolerance=tolerance)


# ---------------------------------------------------------------------------
# Law checkers
# ---------------------------------------------------------------------------

def check_lift_projection(T: Transport, paths, *, trials: int = 200,
                          tolerance: float | None = None, seed: int = 0) -> LawReport:
    """Law 4.2: liftings project onto the base path and hit their anchor."""
    if isinstance(paths, Path):
        paths = (paths,)
    paths = tuple(paths)
    tol = law_tolerance("4.2", T) if tolerance is None else tolerance
    rng = _rng(seed, "4.2")
    col = _Collector("4.2", T.name, tol)
    for _ in range(trials):
        p = _pick(rng, paths)
        s0 = rng.uniform(p.domain.lo, p.domain.hi)
        t = rng.uniform(p.domain.lo, p.domain.hi)
        u = draw_for_bundle(rng, T.bundle, p.at(s0))
        lifted = lift(T, p, u, s0)
        col.record(T.bundle.point_deviation(lifted.at(t).over, p.at(t)),
                   p.name, {"s0": s0, "t": t}, ["projection"])
        col.record(element_deviation(lifted.at(s0), u),
                   p.name, {"s0": s0}, ["anchor"])
    return col.report(seed, notes="two records per trial: projection, anchor")


def check_self_consistency(T: Transport, paths, *, trials: int = 200,
                           grid: int = 7, tolerance: float | None = None,
                           seed: int = 0) -> LawReport:
    """Law 4.6: a lifting re-anchored at any of its own points is unchanged."""
    if isinstance(paths, Path):
        paths = (paths,)
    paths = tuple(paths)
    tol = law_tolerance("4.6", T) if tolerance is None else tolerance
    rng = _rng(seed, "4.6")
    col = _Collector("4.6", T.name, tol)
    for _ in range(trials):
        p = _pick(rng, paths)
        s0 = rng.uniform(p.domain.lo, p.domain.hi)
        r = rng.uniform(p.domain.lo, p.domain.hi)
        u = draw_for_bundle(rng, T.bundle, p.at(s0))
        first = lift(T, p, u, s0)
        second = lift(T, p, first.at(r), r)
        dev = max(element_deviation(first.at(g), second.at(g))
                  for g in p.domain.samples(grid))
        col.record(dev, p.name, {"r": r, "s0": s0}, [_value(u)])
    return col.report(seed, notes=f"liftings compared on {grid}-point grids")


def _value(u: FibreElement):
    return u.label if u.label is not None else list(u.vector)


def _revisit_pairs(p: Path) -> list[tuple[float, float]]:
    """Parameter pairs at which the path provably sits at one base point."""
    if p.kind == "discrete":
        by_node: dict[str, list[float]] = {}
        for lo, hi, x in piece_runs(p):
            by_node.setdefault(x.node, []).append((lo + hi) / 2.0)
        pairs = []
        for reps in by_node.values():
            pairs.extend((reps[i], reps[j])
                         for i in range(len(reps))
                         for j in range(i + 1, len(reps)))
        return sorted(pairs)
    return sorted(p.crossings)


def check_global_uniqueness(T: Transport, p: Path, *, at_point=None,
                            trials: int = 200, grid: int = 7,
                            tolerance: float | None = None,
                            seed: int = 0) -> LawReport:
    """Law 4.4: wherever the path revisits a base point, transporting between
    the two visits is the identity, so liftings are single-valued over it."""
    tol = law_tolerance("4.4", T) if tolerance is None else tolerance
    rng = _rng(seed, "4.4")
    col = _Collector("4.4", T.name, tol)
    pairs = _revisit_pairs(p)
    if at_point is not None:
        pairs = [(r, s) for r, s in pairs
                 if T.bundle.point_deviation(p.at(r), at_point) <= _MATCH_TOL]
    if not pairs:
        return col.report(seed, notes="no revisited base points; vacuous")
    extra = max(1, trials // (8 * len(pairs)))
    for r, s in pairs:
        x = p.at(r)
        if T.bundle.fibre_kind == "vector":
            n = T.bundle.dim
            elements = [FibreElement(over=x, vector=tuple(
                1.0 if i == j else 0.0 for j in range(n))) for i in range(n)]
            elements += [draw_for_bundle(rng, T.bundle, x) for _ in range(extra)]
        else:
            elements = list(fibre_elements(T.bundle, x))
        for u in elements:
            back = transport(T, p, r, s, u)
            col.record(element_deviation(back, rebase(u, p.at(s))),
                       p.name, {"from": r, "to": s}, [_value(u)])
        # the same requirement, phrased through liftings: anchoring at either
        # visit must produce the same curve
        probe = _pick(rng, elements)
        l1 = lift(T, p, probe, r)
        l2 = lift(T, p, rebase(l1.at(s), p.at(s)), s)
        dev = max(element_deviation(l1.at(g), l2.at(g))
                  for g in p.domain.samples(grid))
        col.record(dev, p.name, {"from": r, "to": s}, ["lift comparison"])
    return col.report(seed, notes=f"{len(pairs)} revisit pair(s)")


def liftings_disjoint_or_equal(T: Transport, p: Path, *, trials: int = 50,
                               grid: int = 9, tolerance: float | None = None,
                               seed: int = 0) -> LawReport:
    """Two liftings of one path either coincide everywhere or nowhere.

    Requires global uniqueness over the path; without it the dichotomy has
    no content, so a failed precheck raises UniquenessPrereqFailed.
    """
    pre = check_global_uniqueness(T, p, trials=20, seed=seed)
    if not pre.passed:
        raise UniquenessPrereqFailed(
            f"global uniqueness fails over {p.name!r} "
            f"(deviation {pre.max_deviation})")
    tol = law_tolerance("4.6", T) if tolerance is None else tolerance
    rng = _rng(seed, "disjoint-or-equal")
    col = _Collector("disjoint-or-equal", T.name, tol)
    for _ in range(trials):
        r = rng.uniform(p.domain.lo, p.domain.hi)
        s = rng.uniform(p.domain.lo, p.domain.hi)
        l1 = lift(T, p, draw_for_bundle(rng, T.bundle, p.at(r)), r)
        l2 = lift(T, p, draw_for_bundle(rng, T.bundle, p.at(s)), s)
        devs = [element_deviation(l1.at(g), l2.at(g))
                for g in p.domain.samples(grid)]
        mixed = min(devs) <= tol < max(devs)
        col.record(max(devs) if mixed else 0.0, p.name,
                   {"r": r, "s": s}, ["mixed agreement" if mixed else "clean"])
    return col.report(seed)


def check_fibre_cover(T: Transport, p: Path, *, s0: float | None = None,
                      tolerance: float | None = None, seed: int = 0) -> LawReport:
    """Law 4.7: liftings through one full fibre sweep every fibre over the
    path.  Finite fibres over discrete paths only; the comparison is exact."""
    if p.kind != "discrete":
        raise ConfigError("fibre-cover enumeration needs a discrete path")
    if T.bundle.fibre_kind == "vector":
        raise WrongFibreKind("fibre-cover enumeration needs finite fibres")
    tol = law_tolerance("4.7", T) if tolerance is None else tolerance
    col = _Collector("4.7", T.name, tol)
    if s0 is None:
        s0 = p.domain.lo
    s0 = p.domain.clamp(s0)
    reps = [(lo + hi) / 2.0 for lo, hi, _ in piece_runs(p)]
    total = {(p.at(r).node, lab)
             for r in reps for lab in fibre_at(T.bundle, p.at(r)).labels}
    covered = set()
    for u in fibre_elements(T.bundle, p.at(s0)):
        lifted = lift(T, p, u, s0)
        for r in reps:
            v = lifted.at(r)
            covered.add((v.over.node, v.label))
    missing = sorted(total - covered)
    stray = sorted(covered - total)
    dev = 0.0 if not missing and not stray else 1.0
    col.record(dev, p.name, {"s0": s0},
               [f"missing:{n}/{l}" for n, l in missing]
               + [f"stray:{n}/{l}" for n, l in stray])
    return col.report(seed, notes=f"{len(total)} total-space points over the trace")
