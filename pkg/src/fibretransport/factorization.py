"""Factoring a transport through a fixed reference fibre.

Along one path, a transport's two-parameter family of maps can be written as
F_t^{-1} composed with F_s, where each F_s sends the fibre over path(s) into
one common reference fibre.  The canonical choice anchors the family at a
parameter s0 by taking F_s to be the transport from s to s0, which makes
F_{s0} the identity on the nose.

The family is unique only up to an invertible self-map D of the reference
fibre applied on the left of every F_s.  ``apply_gauge`` realizes that
freedom and ``gauge_between`` recovers D from two families inducing the same
transport.

Families are tabulated on a finite parameter grid.  Fibre maps are plain
dictionaries (finite fibres) or row-major matrices (vector fibres).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from . import linalg
from .bundles import FibreBundle, element_deviation, fibre_at, label_element, \
    vector_element
from .errors import (ConfigError, DifferentTransports, GaugeInconsistent,
                     GridMismatch, UnknownParameter)
from .paths import Interval, Path
from .transport import (LawReport, Transport, _Collector, _rng, law_tolerance,
                        transport, unit_ball)

FibreMap = "dict[str, str] | linalg.Mat"


# ---------------------------------------------------------------------------
# Fibre maps: label bijections and invertible matrices under one interface
# ---------------------------------------------------------------------------

def map_apply(m, value):
    if isinstance(m, dict):
        return m[value]
    return linalg.matvec(m, value)


def map_compose(outer, inner):
    """outer after inner."""
    if isinstance(outer, dict) and isinstance(inner, dict):
        return {k: outer[v] for k, v in inner.items()}
    if isinstance(outer, dict) or isinstance(inner, dict):
        raise ConfigError("cannot compose a label map with a matrix")
    return linalg.matmul(outer, inner)


def map_invert(m):
    if isinstance(m, dict):
        inv = {v: k for k, v in m.items()}
        if len(inv) != len(m):
            raise ConfigError(f"label map is not a bijection: {m}")
        return inv
    return linalg.inverse(m)


def map_deviation(a, b) -> float:
    """0.0 for equal maps; label maps disagree at distance 1."""
    if isinstance(a, dict) and isinstance(b, dict):
        if set(a) != set(b):
            return math.inf
        return 0.0 if a == b else 1.0
    if isinstance(a, dict) or isinstance(b, dict):
        return math.inf
    if len(a) != len(b) or any(len(ra) != len(rb) for ra, rb in zip(a, b)):
        return math.inf
    return max((abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)),
               default=0.0)


def identity_map(bundle: FibreBundle, x) -> "FibreMap":
    if bundle.fibre_kind == "vector":
        return linalg.identity(bundle.dim)
    return {lab: lab for lab in fibre_at(bundle, x).labels}


# ---------------------------------------------------------------------------
# Factorizations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """A grid-tabulated family F_s factoring one transport along one path."""

    bundle: FibreBundle
    space: str
    path_name: str
    domain: Interval
    anchor: float
    grid: tuple
    maps: tuple
    tolerance: float = 0.0

    def __post_init__(self) -> None:
        if len(self.grid) != len(self.maps):
            raise ConfigError("factorization grid and maps disagree in length")
        if self.anchor not in self.grid:
            raise ConfigError("factorization anchor must lie on its grid")

    def map_at(self, s: float):
        try:
            return self.maps[self.grid.index(s)]
        except ValueError:
            raise UnknownParameter(
                f"parameter {s!r} is not on the factorization grid") from None


def _as_grid(p: Path, grid) -> tuple:
    if grid is None:
        grid = 11
    if isinstance(grid, int):
        if grid < 2:
            raise ConfigError("factorization grids need at least two points")
        return tuple(p.domain.samples(grid))
    pts = tuple(float(g) for g in grid)
    for g in pts:
        p.domain.clamp(g)
    return pts


def canonical_factorization(T: Transport, p: Path, s0: float | None = None,
                            grid=None) -> Factorization:
    """The family F_s = transport from s to s0, tabulated on a grid.

    F_{s0} comes out as the identity map exactly.
    """
    pts = _as_grid(p, grid)
    if s0 is None:
        s0 = pts[0]
    if s0 not in pts:
        pts = tuple(sorted({*pts, s0}))
    x0 = p.at(s0)
    maps = []
    for s in pts:
        x = p.at(s)
        if T.bundle.fibre_kind == "vector":
            cols = [transport(T, p, s, s0,
                              vector_element(x, basis)).vector
                    for basis in _basis(T.bundle.dim)]
            maps.append(tuple(zip(*cols)))
        else:
            maps.append({lab: transport(T, p, s, s0,
                                        label_element(x, lab)).label
                         for lab in fibre_at(T.bundle, x).labels})
    return Factorization(bundle=T.bundle, space=p.space, path_name=p.name,
                         domain=p.domain, anchor=s0, grid=pts,
                         maps=tuple(maps), tolerance=T.tolerance)


def _basis(n: int):
    return [tuple(1.0 if i == j else 0.0 for j in range(n)) for i in range(n)]


def transport_from_factorization(f: Factorization, p: Path) -> Transport:
    """The transport induced by a family: F_t^{-1} after F_s, on grid params."""
    if p.space != f.space or not p.domain.same_as(f.domain):
        raise ConfigError(
            f"factorization was built along {f.path_name!r} over {f.space!r} "
            f"{f.domain}, got {p.name!r} over {p.space!r} {p.domain}")

    def apply(path: Path, s: float, t: float, u):
        fs = f.map_at(s)
        ft = f.map_at(t)
        if isinstance(fs, dict):
            value = map_invert(ft)[fs[u.label]]
            return label_element(path.at(t), value)
        moved = linalg.solve(ft, linalg.matvec(fs, u.vector))
        return vector_element(path.at(t), moved)

    return Transport(name=f"factored[{f.path_name}]", bundle=f.bundle,
                     apply_fn=apply, declared=frozenset(),
                     tolerance=f.tolerance)


def apply_gauge(f: Factorization, gauge) -> Factorization:
    """Compose every member of the family with a reference-fibre self-map."""
    if isinstance(gauge, GaugeMap):
        gauge = gauge.map
    is_dict = isinstance(gauge, dict)
    if is_dict != (f.bundle.fibre_kind != "vector"):
        raise ConfigError("gauge map kind does not match the fibre kind")
    map_invert(gauge)  # reject non-bijections early
    return replace(f, maps=tuple(map_compose(gauge, m) for m in f.maps))


@dataclass(frozen=True)
class GaugeMap:
    """Invertible self-map of the reference fibre relating two families."""

    map: object
    deviation: float = 0.0


def gauge_between(f1: Factorization, f2: Factorization,
                  tolerance: float | None = None) -> GaugeMap:
    """The gauge D with f1 = D after f2, for families inducing one transport.

    Raises GridMismatch for incomparable tabulations, DifferentTransports
    when the induced transports disagree, and GaugeInconsistent when no
    single D explains every grid parameter.
    """
    if f1.grid != f2.grid or f1.space != f2.space:
        raise GridMismatch("factorizations tabulate different grids or spaces")
    if tolerance is None:
        # Matrix inverses carry rounding noise even for exact families.
        tolerance = max(1e-9, 4.0 * max(f1.tolerance, f2.tolerance))

    inv1 = [map_invert(m) for m in f1.maps]
    inv2 = [map_invert(m) for m in f2.maps]
    worst = 0.0
    for i in range(len(f1.grid)):
        for j in range(len(f1.grid)):
            induced1 = map_compose(inv1[j], f1.maps[i])
            induced2 = map_compose(inv2[j], f2.maps[i])
            worst = max(worst, map_deviation(induced1, induced2))
    if worst > tolerance:
        raise DifferentTransports(
            f"families induce different transports (deviation {worst})")

    # Extract at a shared anchor when there is one: a canonical family is the
    # identity there, so the recovered gauge is exact rather than a product
    # of two noisy inverses.
    idx = f1.grid.index(f1.anchor) if f1.anchor == f2.anchor else 0
    gauge = map_compose(f1.maps[idx], inv2[idx])
    drift = 0.0
    for i in range(len(f1.grid)):
        drift = max(drift, map_deviation(map_compose(gauge, f2.maps[i]),
                                         f1.maps[i]))
    if drift > tolerance:
        raise GaugeInconsistent(
            f"no single gauge explains the two families (drift {drift})")
    return GaugeMap(map=gauge, deviation=max(worst, drift))


# ---------------------------------------------------------------------------
# Law checkers
# ---------------------------------------------------------------------------

def check_factorization_roundtrip(T: Transport, p: Path, *, s0: float | None = None,
                                  grid=11, samples: int = 3,
                                  tolerance: float | None = None,
                                  seed: int = 0) -> LawReport:
    """Law 3.6-roundtrip: the canonical family reassembles the transport on
    every ordered grid pair, and its anchor map is the identity."""
    tol = law_tolerance("3.6-roundtrip", T) if tolerance is None else tolerance
    rng = _rng(seed, "3.6-roundtrip")
    col = _Collector("3.6-roundtrip", T.name, tol)
    f = canonical_factorization(T, p, s0=s0, grid=grid)
    rebuilt = transport_from_factorization(f, p)

    ident = identity_map(T.bundle, p.at(f.anchor))
    col.record(map_deviation(f.map_at(f.anchor), ident), p.name,
               {"anchor": f.anchor}, ["anchor map vs identity"])

    for s in f.grid:
        x = p.at(s)
        if T.bundle.fibre_kind == "vector":
            elements = [vector_element(x, unit_ball(rng, T.bundle.dim))
                        for _ in range(samples)]
        else:
            elements = [label_element(x, lab)
                        for lab in fibre_at(T.bundle, x).labels]
        for t in f.grid:
            for u in elements:
                dev = element_deviation(transport(rebuilt, p, s, t, u),
                                        transport(T, p, s, t, u))
                col.record(dev, p.name, {"s": s, "t": t}, [u.label or list(u.vector)])
    return col.report(seed, notes=f"grid of {len(f.grid)} points, anchor {f.anchor}")


def random_gauge(rng: random.Random, bundle: FibreBundle, x) -> "FibreMap":
    """A random invertible self-map of the fibre over x."""
    if bundle.fibre_kind == "vector":
        n = bundle.dim
        while True:
            m = tuple(tuple(rng.uniform(-1.0, 1.0) for _ in range(n))
                      for _ in range(n))
            try:
                linalg.inverse(m)
            except Exception:
                continue
            return m
    labels = list(fibre_at(bundle, x).labels)
    images = labels[:]
    rng.shuffle(images)
    return dict(zip(labels, images))


def check_gauge_freedom(T: Transport, p: Path, *, s0: float | None = None,
                        grid=11, draws: int = 5,
                        tolerance: float | None = None, seed: int = 0) -> LawReport:
    """Law 3.11/3.12: gauged families induce the same transport, and the
    relating gauge is recovered from the family pair."""
    tol = law_tolerance("3.11/3.12", T) if tolerance is None else tolerance
    rng = _rng(seed, "3.11/3.12")
    col = _Collector("3.11/3.12", T.name, tol)
    f1 = canonical_factorization(T, p, s0=s0, grid=grid)
    for k in range(draws):
        gauge = random_gauge(rng, T.bundle, p.at(f1.anchor))
        f2 = apply_gauge(f1, gauge)
        recovered = gauge_between(f2, f1)
        dev = map_deviation(recovered.map, gauge)
        col.record(dev, p.name, {"draw": float(k)},
                   ["recovered gauge vs applied gauge"])
    return col.report(seed, notes=f"{draws} random gauges on a "
                                  f"{len(f1.grid)}-point grid")


def factorization_to_dict(f: Factorization) -> dict:
    maps = []
    for m in f.maps:
        if isinstance(m, dict):
            maps.append({k: m[k] for k in sorted(m)})
        else:
            maps.append([list(row) for row in m])
    return {"s0": f.anchor, "grid": list(f.grid), "maps": maps,
            "path": f.path_name, "space": f.space,
            "fibre_kind": f.bundle.fibre_kind}
