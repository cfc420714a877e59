"""Ready-made transport instances and the preset registry.

Four well-behaved instances cover the fibre kinds the package supports:

* ``perm-c3``: label bijections composed over the hops of a three-node cycle.
* ``foliation-2sec``: a two-section family over a graph; transport slides a
  point along the unique section through it.
* ``parallelization-flat``: a global frame per node built from quarter-turn
  signed permutation matrices, giving a curvature-free linear transport whose
  law deviations are bitwise zero.
* ``sphere-levi-civita``: parallel transport of tangent vectors on the round
  sphere by a fixed-step RK4 flow.

A fifth family, ``counterexample:<kind>``, deliberately breaks exactly one
law each while keeping a stated set of the others; they act as negative
controls for the checkers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import linalg, sphere
from .bundles import (BasePoint, BundleMetric, FibreBundle, FibreElement,
                      euclidean_metric, label_element, section_through,
                      table_section, vector_element, bundle_from_dict)
from .errors import (CocycleViolation, ConfigError, EdgeMissing,
                     EndpointMismatch, UnknownInstance, WrongFibreKind)
from .integrate import fd_velocity, rk4_linear_flow
from .paths import (ConcatSchedule, Interval, Path, Reparameterization, UNIT,
                    affine_remap, canonical_schedule, node_sequence,
                    path_from_dict, piecewise_path, square_remap, trace_nodes)
from .transport import Transport, transport

# Registry order for law ids: report sets and CLI output follow it.
LAW_ORDER = (
    "2.2", "2.3", "2.4", "2.5/2.7", "2.6", "2.8", "2.9",
    "3.1", "3.2", "3.4", "3.5", "3.6-roundtrip", "3.11/3.12",
    "4.2", "4.4", "4.6", "4.7",
)

COUNTEREXAMPLE_KINDS = (
    "group_breaking", "nonlocal", "non_reparam_invariant",
    "nonlinear", "metric_breaking",
)


# ---------------------------------------------------------------------------
# Transport constructors
# ---------------------------------------------------------------------------

def permutation_transport(bundle: FibreBundle,
                          edge_maps: Mapping[tuple[str, str], Mapping[str, str]],
                          name: str = "permutation") -> Transport:
    """Compose label bijections over the node hops of discrete paths.

    Reverse hops use the inverse bijection; supplying both orientations of an
    edge with inconsistent maps is rejected.  Hops without a map raise
    EdgeMissing at application time.
    """
    if bundle.fibre_kind != "finite":
        raise WrongFibreKind("permutation transports need finite fibres")
    labels = set(bundle.labels)
    maps: dict[tuple[str, str], dict[str, str]] = {}
    for (a, b), m in edge_maps.items():
        m = dict(m)
        if set(m) != labels or set(m.values()) != labels:
            raise ConfigError(f"map over edge ({a}, {b}) is not a bijection "
                              f"of the fibre labels")
        maps[(a, b)] = m
    for (a, b), m in list(maps.items()):
        rev = {v: k for k, v in m.items()}
        if (b, a) in maps and maps[(b, a)] != rev:
            raise ConfigError(f"maps over ({a}, {b}) and ({b}, {a}) are not "
                              f"mutually inverse")
        maps.setdefault((b, a), rev)

    def apply(p: Path, s: float, t: float, u: FibreElement) -> FibreElement:
        lab = u.label
        seq = node_sequence(p, s, t)
        for x, y in zip(seq, seq[1:]):
            m = maps.get((x, y))
            if m is None:
                raise EdgeMissing(f"no fibre map across hop ({x}, {y})")
            lab = m[lab]
        return label_element(p.at(t), lab)

    return Transport(name=name, bundle=bundle, apply_fn=apply,
                     declared=frozenset({"local", "reparam_invariant"}),
                     tolerance=0.0)


def foliation_transport(bundle: FibreBundle, name: str = "foliation") -> Transport:
    """Slide each element along the unique family section through it."""
    if bundle.fibre_kind != "sections":
        raise WrongFibreKind("foliation transports need a section family")

    def apply(p: Path, s: float, t: float, u: FibreElement) -> FibreElement:
        sec = section_through(bundle, u)
        return sec.at(p.at(t))

    return Transport(name=name, bundle=bundle, apply_fn=apply,
                     declared=frozenset({"local", "reparam_invariant", "global"}),
                     tolerance=0.0)


def parallelization_transport(bundle: FibreBundle,
                              frames: Mapping[str, linalg.Mat],
                              name: str = "parallelization") -> Transport:
    """Identify all fibres through one invertible frame matrix per node.

    The point maps are frame(y) o frame(x)^{-1}; their two-point cocycle
    identities are validated exhaustively at construction.
    """
    if bundle.fibre_kind != "vector":
        raise WrongFibreKind("parallelizations need vector fibres")
    missing = set(bundle.nodes) - set(frames)
    if missing:
        raise ConfigError(f"no frame for nodes {sorted(missing)}")
    inv = {n: linalg.inverse(frames[n]) for n in bundle.nodes}
    pair = {(x, y): linalg.matmul(frames[y], inv[x])
            for x in bundle.nodes for y in bundle.nodes}
    for x in bundle.nodes:
        for y in bundle.nodes:
            for z in bundle.nodes:
                via = linalg.matmul(pair[(y, z)], pair[(x, y)])
                gap = max(abs(via[i][j] - pair[(x, z)][i][j])
                          for i in range(bundle.dim) for j in range(bundle.dim))
                if gap > 1e-12:
                    raise CocycleViolation(
                        f"frame maps fail to compose across ({x}, {y}, {z}); "
                        f"gap {gap}")

    def apply(p: Path, s: float, t: float, u: FibreElement) -> FibreElement:
        x = p.at(s).node
        y = p.at(t).node
        if x == y:
            return vector_element(p.at(t), u.vector)
        return vector_element(p.at(t), linalg.matvec(pair[(x, y)], u.vector))

    return Transport(name=name, bundle=bundle, apply_fn=apply,
                     declared=frozenset({"local", "reparam_invariant",
                                         "linear", "global"}),
                     tolerance=0.0)


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"
    step: float = 1e-3
    max_span: float = 8.0

    def __post_init__(self) -> None:
        if self.method != "rk4":
            raise ConfigError(f"unknown integrator method {self.method!r}")
        if not (0.0 < self.step <= 1.0):
            raise ConfigError(f"integrator step out of range: {self.step}")


@dataclass(frozen=True)
class ConnectionCoefficients:
    """Coefficients of a linear transport equation u' = A(x, xdot) u.

    Either supply ``matrix`` directly, or ``gamma(x, a, b, c)`` from which
    A[a][c] = -sum_b gamma(x, a, b, c) * xdot[b] is assembled.
    """

    dim: int
    gamma: Callable[[BasePoint, int, int, int], float] | None = None
    matrix: Callable[[BasePoint, tuple], linalg.Mat] | None = None

    def __post_init__(self) -> None:
        if self.gamma is None and self.matrix is None:
            raise ConfigError("connection coefficients need gamma or matrix")

    def coefficient(self, x: BasePoint, xdot) -> linalg.Mat:
        if self.matrix is not None:
            return self.matrix(x, xdot)
        n = self.dim
        return tuple(
            tuple(-sum(self.gamma(x, a, b, c) * xdot[b] for b in range(n))
                  for c in range(n))
            for a in range(n))


def linear_ode_transport(bundle: FibreBundle, coeffs: ConnectionCoefficients,
                         integrator: IntegratorConfig | None = None,
                         name: str = "linear-ode",
                         tolerance: float = 1e-6) -> Transport:
    """Transport vectors by integrating u' = A u along chart paths."""
    if bundle.fibre_kind != "vector":
        raise WrongFibreKind("ODE transports need vector fibres")
    cfg = integrator or IntegratorConfig()

    def apply(p: Path, s: float, t: float, u: FibreElement) -> FibreElement:
        if p.domain.width > cfg.max_span:
            raise ConfigError(
                f"path spans {p.domain.width}, integrator allows {cfg.max_span}")
        if t == s:
            return vector_element(p.at(t), u.vector)
        vel = (p.velocity if p.velocity_fn is not None
               else fd_velocity(p, cfg.step / 10.0))

        def coefficient(r: float, side: int) -> linalg.Mat:
            a = coeffs.coefficient(p.at(r), vel(r, side))
            if any(not math.isfinite(c) for row in a for c in row):
                raise ConfigError(f"non-finite transport coefficients at "
                                  f"parameter {r} of {p.name!r}")
            return a

        moved = rk4_linear_flow(coefficient, s, t, u.vector, cfg.step,
                                p.interior_breakpoints(min(s, t), max(s, t)))
        return vector_element(p.at(t), moved)

    return Transport(name=name, bundle=bundle, apply_fn=apply,
                     declared=frozenset({"local", "reparam_invariant",
                                         "linear", "metric_consistent"}),
                     tolerance=tolerance)


# ---------------------------------------------------------------------------
# Negative controls
# ---------------------------------------------------------------------------

def _rotate(angle: float, v) -> tuple[float, float]:
    c = math.cos(angle)
    s = math.sin(angle)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def counterexample_transport(kind: str) -> Transport:
    """A transport engineered to fail exactly one checker.

    Each kind carries ``violates`` (the law id its designated checker flags)
    and ``preserves`` (law ids whose checkers it passes).  All five act on a
    two-dimensional vector fibre over a four-node graph.
    """
    bundle = _cx_bundle()
    omega = {n: float(i) for i, n in enumerate(bundle.nodes)}

    def node_gap(p: Path, s: float, t: float) -> float:
        return omega[p.at(t).node] - omega[p.at(s).node]

    if kind == "group_breaking":
        def apply(p, s, t, u):
            if p.at(s).node == p.at(t).node:
                return vector_element(p.at(t), u.vector)
            return vector_element(p.at(t), _rotate(1.0, u.vector))
        violates = "2.2"
        preserves = frozenset({"2.3", "2.5/2.7", "2.6", "2.8", "2.9"})
        declared = {"local", "reparam_invariant", "linear", "metric_consistent"}
    elif kind == "nonlocal":
        def apply(p, s, t, u):
            angle = node_gap(p, s, t) * float(len(trace_nodes(p)))
            return vector_element(p.at(t), _rotate(angle, u.vector))
        violates = "2.5/2.7"
        preserves = frozenset({"2.2", "2.3", "2.6", "2.8", "2.9"})
        declared = {"reparam_invariant", "linear", "metric_consistent"}
    elif kind == "non_reparam_invariant":
        def apply(p, s, t, u):
            return vector_element(p.at(t), _rotate(t - s, u.vector))
        violates = "2.6"
        preserves = frozenset({"2.2", "2.3", "2.5/2.7", "2.8", "2.9"})
        declared = {"local", "linear", "metric_consistent"}
    elif kind == "nonlinear":
        def apply(p, s, t, u):
            norm = math.sqrt(u.vector[0] ** 2 + u.vector[1] ** 2)
            return vector_element(p.at(t),
                                  _rotate(norm * node_gap(p, s, t), u.vector))
        violates = "2.8"
        preserves = frozenset({"2.2", "2.3", "2.5/2.7", "2.6"})
        declared = {"local", "reparam_invariant"}
    elif kind == "metric_breaking":
        def apply(p, s, t, u):
            scale = math.exp(t - s)
            return vector_element(p.at(t), tuple(scale * c for c in u.vector))
        violates = "2.9"
        preserves = frozenset({"2.2", "2.3", "2.5/2.7", "2.8"})
        declared = {"local", "linear"}
    else:
        raise UnknownInstance(
            f"unknown counterexample kind {kind!r}; "
            f"expected one of {', '.join(COUNTEREXAMPLE_KINDS)}")

    return Transport(name=f"counterexample:{kind}", bundle=bundle,
                     apply_fn=apply, declared=frozenset(declared),
                     tolerance=1e-9, violates=violates, preserves=preserves)


# ---------------------------------------------------------------------------
# Holonomy
# ---------------------------------------------------------------------------

def _orthonormalizer(metric: BundleMetric | None, x: BasePoint, dim: int) -> linalg.Mat:
    if metric is None:
        return linalg.identity(dim)
    g = metric.matrix_at(x)
    if dim != 2:
        raise ConfigError("orthonormalization implemented for rank 2")
    a = math.sqrt(g[0][0])
    b = g[0][1] / a
    c = math.sqrt(g[1][1] - b * b)
    return ((a, b), (0.0, c))


def loop_matrix(T: Transport, loop: Path) -> linalg.Mat:
    """The matrix of a full traversal of a closed path, in the chart frame."""
    if T.bundle.fibre_kind != "vector":
        raise WrongFibreKind("holonomy applies to vector fibres")
    if T.bundle.point_deviation(loop.start, loop.end) > 1e-6:
        raise EndpointMismatch(f"path {loop.name!r} is not closed")
    x0 = loop.at(loop.domain.lo)
    n = T.bundle.dim
    cols = [transport(T, loop, loop.domain.lo, loop.domain.hi,
                      vector_element(x0, tuple(
                          1.0 if i == j else 0.0 for j in range(n)))).vector
            for i in range(n)]
    return tuple(zip(*cols))


def holonomy_angle(T: Transport, loop: Path,
                   metric: BundleMetric | None = None) -> float:
    """Signed rotation angle of a closed-loop traversal, rank-2 fibres.

    The loop matrix is conjugated into an orthonormal frame at the base
    point first, so the angle is metric-honest even in skewed charts.
    """
    if T.bundle.dim != 2:
        raise ConfigError("holonomy angles are defined for rank-2 fibres")
    m = loop_matrix(T, loop)
    s = _orthonormalizer(metric, loop.at(loop.domain.lo), 2)
    mhat = linalg.matmul(linalg.matmul(s, m), linalg.inverse(s))
    return math.atan2(mhat[1][0], mhat[0][0])


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstanceSpec:
    """Everything a CLI run needs to exercise one instance."""

    name: str
    transport: Transport
    metric: BundleMetric | None = None
    law_paths: tuple[Path, ...] = ()
    remaps: tuple[Reparameterization, ...] = ()
    product_pair: tuple[Path, Path, ConcatSchedule] | None = None
    uniqueness_path: Path | None = None
    loops: Mapping[str, Path] = field(default_factory=dict)
    applicable: tuple[str, ...] = ()
    step: float | None = None

    @property
    def bundle(self) -> FibreBundle:
        return self.transport.bundle

    def path_named(self, name: str) -> Path:
        pair = self.product_pair[:2] if self.product_pair else ()
        for p in (*self.law_paths, *pair):
            if p.name == name:
                return p
        if name in self.loops:
            return self.loops[name]
        if self.uniqueness_path is not None and self.uniqueness_path.name == name:
            return self.uniqueness_path
        known = [p.name for p in (*self.law_paths, *pair)] + list(self.loops)
        raise ConfigError(f"no path named {name!r}; known: {', '.join(known)}")


def _standard_remaps() -> tuple[Reparameterization, ...]:
    return (affine_remap(Interval(0.0, 2.0), UNIT, name="halve"),
            square_remap())


def _applicable_laws(T: Transport, metric, product_pair, uniqueness_path,
                     discrete: bool) -> tuple[str, ...]:
    laws = {"2.2", "2.3", "2.4", "2.5/2.7", "2.6", "3.1", "3.2",
            "3.6-roundtrip", "3.11/3.12", "4.2", "4.6"}
    if T.bundle.fibre_kind == "vector" and "linear" in T.declared:
        laws.add("2.8")
    if metric is not None and "metric_consistent" in T.declared:
        laws.add("2.9")
    if product_pair is not None:
        laws.update({"3.4", "3.5"})
    if "global" in T.declared and uniqueness_path is not None:
        laws.add("4.4")
    if T.bundle.fibre_kind in ("finite", "sections") and discrete:
        laws.add("4.7")
    return tuple(l for l in LAW_ORDER if l in laws)


def _perm_c3() -> InstanceSpec:
    space = "c3"
    bundle = FibreBundle(base_space_id=space, base_kind="graph",
                         fibre_kind="finite",
                         nodes=("n0", "n1", "n2"),
                         edges=(("n0", "n1"), ("n1", "n2"), ("n2", "n0")),
                         labels=("a", "b", "c"))
    T = permutation_transport(bundle, {
        ("n0", "n1"): {"a": "b", "b": "c", "c": "a"},
        ("n1", "n2"): {"a": "a", "b": "c", "c": "b"},
        ("n2", "n0"): {"a": "c", "b": "a", "c": "b"},
    }, name="perm-c3")
    walk = piecewise_path(space, UNIT,
                          [(1 / 3, "n0"), (2 / 3, "n1"), (1.0, "n2")],
                          name="walk")
    zigzag = piecewise_path(space, UNIT,
                            [(0.25, "n0"), (0.5, "n1"), (0.75, "n0"),
                             (1.0, "n1")], name="zigzag")
    hop1 = piecewise_path(space, UNIT, [(0.5, "n0"), (1.0, "n1")], name="hop1")
    hop2 = piecewise_path(space, UNIT, [(0.5, "n1"), (1.0, "n2")], name="hop2")
    return InstanceSpec(
        name="perm-c3", transport=T, law_paths=(walk, zigzag),
        remaps=_standard_remaps(),
        product_pair=(hop1, hop2, canonical_schedule()),
        uniqueness_path=zigzag,
        applicable=_applicable_laws(T, None, (hop1, hop2), zigzag,
                                    discrete=True))


def _foliation_2sec() -> InstanceSpec:
    space = "fol3"
    nodes = ("g0", "g1", "g2")
    alpha = table_section("alpha", space, {"g0": "a0", "g1": "a1", "g2": "a2"})
    beta = table_section("beta", space, {"g0": "b0", "g1": "b1", "g2": "b2"})
    bundle = FibreBundle(base_space_id=space, base_kind="graph",
                         fibre_kind="sections", nodes=nodes,
                         edges=(("g0", "g1"), ("g1", "g2"), ("g0", "g2")),
                         sections=(alpha, beta))
    T = foliation_transport(bundle, name="foliation-2sec")
    walk = piecewise_path(space, UNIT,
                          [(1 / 3, "g0"), (2 / 3, "g1"), (1.0, "g2")],
                          name="walk")
    eight = piecewise_path(space, UNIT,
                           [(0.2, "g0"), (0.4, "g1"), (0.6, "g0"),
                            (0.8, "g2"), (1.0, "g0")], name="figure-eight")
    hop1 = piecewise_path(space, UNIT, [(0.5, "g0"), (1.0, "g1")], name="hop1")
    hop2 = piecewise_path(space, UNIT, [(0.5, "g1"), (1.0, "g2")], name="hop2")
    return InstanceSpec(
        name="foliation-2sec", transport=T, law_paths=(walk, eight),
        remaps=_standard_remaps(),
        product_pair=(hop1, hop2, canonical_schedule()),
        uniqueness_path=eight,
        applicable=_applicable_laws(T, None, (hop1, hop2), eight,
                                    discrete=True))


_QUARTER_TURNS = (
    ((1.0, 0.0), (0.0, 1.0)),
    ((0.0, -1.0), (1.0, 0.0)),
    ((-1.0, 0.0), (0.0, -1.0)),
    ((0.0, 1.0), (-1.0, 0.0)),
)


def _parallelization_flat() -> InstanceSpec:
    space = "quad"
    nodes = ("w0", "w1", "w2", "w3")
    bundle = FibreBundle(base_space_id=space, base_kind="graph",
                         fibre_kind="vector", nodes=nodes,
                         edges=(("w0", "w1"), ("w1", "w2"), ("w2", "w3"),
                                ("w3", "w0"), ("w0", "w2")),
                         dim=2)
    frames = {n: _QUARTER_TURNS[i] for i, n in enumerate(nodes)}
    T = parallelization_transport(bundle, frames, name="parallelization-flat")
    walk = piecewise_path(space, UNIT,
                          [(0.25, "w0"), (0.5, "w1"), (0.75, "w2"),
                           (1.0, "w3")], name="walk")
    eight = piecewise_path(space, UNIT,
                           [(0.2, "w0"), (0.4, "w1"), (0.6, "w0"),
                            (0.8, "w2"), (1.0, "w0")], name="figure-eight")
    hop1 = piecewise_path(space, UNIT, [(0.5, "w0"), (1.0, "w1")], name="hop1")
    hop2 = piecewise_path(space, UNIT, [(0.5, "w1"), (1.0, "w2")], name="hop2")
    return InstanceSpec(
        name="parallelization-flat", transport=T, law_paths=(walk, eight),
        remaps=_standard_remaps(),
        product_pair=(hop1, hop2, canonical_schedule()),
        uniqueness_path=eight,
        loops={"figure-eight": eight},
        applicable=_applicable_laws(T, None, (hop1, hop2), eight,
                                    discrete=True))


def _sphere_levi_civita(step: float | None = None) -> InstanceSpec:
    bundle = sphere.tangent_bundle()
    coeffs = ConnectionCoefficients(dim=2, gamma=sphere.christoffel,
                                    matrix=sphere.coefficient_matrix)
    cfg = IntegratorConfig(step=step if step is not None else 1e-3)
    T = linear_ode_transport(bundle, coeffs, cfg, name="sphere-levi-civita",
                             tolerance=1e-6)
    metric = sphere.round_metric()
    quarter_equator = sphere.latitude_arc(math.pi / 2, 0.0, math.pi / 2,
                                          name="quarter-equator")
    quarter_meridian = sphere.great_circle_arc(
        (math.pi / 2, math.pi / 2), (math.pi / 4, math.pi / 2),
        name="quarter-meridian")
    tilted = sphere.great_circle_arc((1.9, 0.3), (1.1, 1.8), name="tilted")
    lat_arc = sphere.latitude_arc(math.pi / 3, 0.0, 3 * math.pi / 4,
                                  name="latitude-arc")
    octant = sphere.octant_loop()
    loops = {"octant": octant,
             "equator": sphere.closed_latitude(math.pi / 2, name="equator"),
             "latitude-60": sphere.closed_latitude(math.pi / 3,
                                                   name="latitude-60")}
    spec = InstanceSpec(
        name="sphere-levi-civita", transport=T, metric=metric,
        law_paths=(quarter_equator, quarter_meridian, tilted, lat_arc),
        remaps=_standard_remaps(),
        product_pair=(quarter_equator, quarter_meridian, canonical_schedule()),
        uniqueness_path=octant, loops=loops, step=cfg.step,
        applicable=_applicable_laws(T, metric, (quarter_equator, quarter_meridian),
                                    None, discrete=False))
    return spec


def _counterexample(kind: str) -> InstanceSpec:
    T = counterexample_transport(kind)
    space = T.bundle.base_space_id
    loop3 = piecewise_path(space, UNIT,
                           [(0.25, "x0"), (0.5, "x1"), (0.75, "x2"),
                            (1.0, "x0")], name="loop3")
    walk = piecewise_path(space, UNIT,
                          [(1 / 3, "x0"), (2 / 3, "x1"), (1.0, "x3")],
                          name="walk")
    applicable = tuple(l for l in LAW_ORDER
                       if l in (T.preserves | {T.violates}))
    return InstanceSpec(
        name=T.name, transport=T, metric=euclidean_metric(2),
        law_paths=(loop3, walk), remaps=_standard_remaps(),
        applicable=applicable)


def _cx_bundle() -> FibreBundle:
    return FibreBundle(base_space_id="cx", base_kind="graph",
                       fibre_kind="vector",
                       nodes=("x0", "x1", "x2", "x3"),
                       edges=(("x0", "x1"), ("x1", "x2"), ("x2", "x0"),
                              ("x1", "x3")),
                       dim=2)


PRESETS: dict[str, Callable[..., InstanceSpec]] = {
    "perm-c3": _perm_c3,
    "foliation-2sec": _foliation_2sec,
    "parallelization-flat": _parallelization_flat,
    "sphere-levi-civita": _sphere_levi_civita,
}


def instance_names() -> tuple[str, ...]:
    return tuple(PRESETS) + tuple(f"counterexample:{k}"
                                  for k in COUNTEREXAMPLE_KINDS)


def make_instance(name: str, step: float | None = None) -> InstanceSpec:
    """Instantiate a preset by name.

    ``step`` overrides the integrator step for numeric instances and is
    ignored by exact ones.
    """
    if name.startswith("counterexample:"):
        return _counterexample(name.split(":", 1)[1])
    if name == "sphere-levi-civita":
        return _sphere_levi_civita(step)
    try:
        return PRESETS[name]()
    except KeyError:
        raise UnknownInstance(
            f"unknown instance {name!r}; known: "
            f"{', '.join(instance_names())}") from None


# ---------------------------------------------------------------------------
# Custom finite instances from JSON descriptors
# ---------------------------------------------------------------------------

def instance_from_dict(data: dict, name: str = "custom") -> InstanceSpec:
    """Build a finite instance from a plain descriptor.

    Expects {"bundle": {...}, "transport": {"kind": ..., ...},
    "paths": {name: path descriptor}}.  Transport kinds: "permutation"
    (with "edge_maps": {"a->b": {label: label}}) and "foliation".
    """
    if "bundle" not in data or "paths" not in data:
        raise ConfigError("instance descriptors need 'bundle' and 'paths'")
    space = data.get("space", "base")
    bundle = bundle_from_dict(data["bundle"], space_id=space)
    tr = data.get("transport", {})
    kind = tr.get("kind")
    if kind == "permutation":
        edge_maps = {}
        for key, m in tr.get("edge_maps", {}).items():
            a, sep, b = key.partition("->")
            if not sep:
                raise ConfigError(f"edge key {key!r} is not of the form 'a->b'")
            edge_maps[(a.strip(), b.strip())] = m
        T = permutation_transport(bundle, edge_maps, name=name)
    elif kind == "foliation":
        T = foliation_transport(bundle, name=name)
    else:
        raise ConfigError(f"unsupported transport kind {kind!r} "
                          f"(expected 'permutation' or 'foliation')")
    paths = tuple(path_from_dict(space, pd, name=pname)
                  for pname, pd in data["paths"].items())
    return InstanceSpec(
        name=name, transport=T, law_paths=paths, remaps=_standard_remaps(),
        applicable=_applicable_laws(T, None, None, None, discrete=True))
