"""The modified branching random walk on (tree with ℤᵈ insertions) × ℤ.

Rule 1: a particle at a tree vertex sends one particle to each neighbour
independently with probability p.
Rules 2 and 3: a particle at an attachment point (0,...,0,k) or (n,...,n,k)
of a ℤ^{d+1} copy sends one particle with probability p to its tree neighbour,
and one particle to every other attachment point of the same copy that its
percolation cluster in the copy reaches.

Copy clusters are read from a percolated box [-w, n+w]^d × [-H, H] of
ℤ^{d+1}; points outside the box are never reached, so offspring counts are
exact up to that truncation.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from product_percolation.errors import ConfigError, InvalidVertexError
from product_percolation.graphs.base import LatticePoint, Plain, ProductVertex, TreeNode, VertexId
from product_percolation.graphs.encoding import encode_vertex, format_vertex, vertex_sort_key
from product_percolation.graphs.families import ProductFamily, TreeWithInsertionsFamily, family_for
from product_percolation.graphs.spec import GraphKind, GraphSpec
from product_percolation.graphs.truncation import FiniteTruncation, lattice_box
from product_percolation.percolation import rng
from product_percolation.percolation.sampling import PercolationSample, check_probability
from product_percolation.percolation.union_find import ClusterLabeling

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 2
DEFAULT_POPULATION_CAP = 100_000


@dataclass
class ParticleFront:
    """Particle counts per vertex at one generation."""

    particles: dict[VertexId, int] = field(default_factory=dict)
    generation: int = 0
    population_cap: int = DEFAULT_POPULATION_CAP
    aborted: bool = False

    def __post_init__(self) -> None:
        if any(count < 0 for count in self.particles.values()):
            raise ConfigError("Particle counts must be non-negative")
        self.particles = {v: c for v, c in self.particles.items() if c > 0}

    @classmethod
    def single(cls, v: VertexId, population_cap: int = DEFAULT_POPULATION_CAP) -> "ParticleFront":
        return cls({v: 1}, 0, population_cap)

    @property
    def total(self) -> int:
        return sum(self.particles.values())

    def count(self, v: VertexId) -> int:
        return self.particles.get(v, 0)

    def is_empty(self) -> bool:
        return not self.particles


@dataclass(frozen=True, eq=False)
class _CopyTemplate:
    """Percolation box of one ℤ^{d+1} copy with the attachment fibers indexed."""

    box: FiniteTruncation
    n: int
    height: int
    origin_start: int
    corner_start: int
    fiber: tuple[tuple[int, bool, int], ...]  # (vertex index, is corner, height offset)


@lru_cache(maxsize=32)
def copy_template(d: int, n: int, window: int, height: int) -> _CopyTemplate:
    side = n + 2 * window + 1
    box = lattice_box(d + 1, [side] * d + [2 * height + 1])
    low = (window,) * d
    high = (n + window,) * d
    fiber = []
    for i, v in enumerate(box.vertices):
        head = v.coords[:d]  # type: ignore[union-attr]
        if head == low or head == high:
            fiber.append((i, head == high, v.coords[d] - height))  # type: ignore[union-attr]
    return _CopyTemplate(
        box=box,
        n=n,
        height=height,
        origin_start=box.index_of(Plain(low + (height,))),
        corner_start=box.index_of(Plain(high + (height,))),
        fiber=tuple(fiber),
    )


def _insertion_families(spec: GraphSpec) -> tuple[ProductFamily, TreeWithInsertionsFamily]:
    if spec.kind is not GraphKind.TREE_WITH_LATTICE_INSERTIONS or not spec.product:
        raise ConfigError(
            f"The branching walk runs on tree-with-lattice-insertions × Z, got {spec.describe()}"
        )
    family = family_for(spec)
    return family, family.base  # type: ignore[return-value]


def attachment_side(base: TreeWithInsertionsFamily, point: LatticePoint) -> Optional[bool]:
    """False for the glued origin, True for the glued corner, None for interior copy points."""
    n = base.levels.insertion(len(point.owner))
    if all(c == 0 for c in point.coords):
        return False
    if all(c == n for c in point.coords):
        return True
    return None


def is_copy_interior(spec: GraphSpec, v: VertexId) -> bool:
    """True for points of a ℤ^{d+1} copy that are not on an attachment fiber."""
    _, base = _insertion_families(spec)
    inner = v.base if isinstance(v, ProductVertex) else v
    return isinstance(inner, LatticePoint) and attachment_side(base, inner) is None


def _check_particle(base: TreeWithInsertionsFamily, v: VertexId) -> None:
    if not isinstance(v, ProductVertex):
        raise InvalidVertexError(f"{v!r} is not a product vertex")
    if isinstance(v.base, TreeNode):
        return
    if isinstance(v.base, LatticePoint) and attachment_side(base, v.base) is not None:
        return
    raise InvalidVertexError(f"{format_vertex(v)} is neither a tree vertex nor an attachment point")


def _emit_tree(
    family: ProductFamily, v: ProductVertex, p: float, generator: np.random.Generator
) -> list[VertexId]:
    adjacent = family.adjacent(v)
    draws = generator.random(len(adjacent))
    return [u for u, x in zip(adjacent, draws) if x < p]


def _emit_attachment(
    v: ProductVertex,
    corner: bool,
    p: float,
    generator: np.random.Generator,
    template: _CopyTemplate,
) -> list[VertexId]:
    point: LatticePoint = v.base  # type: ignore[assignment]
    emitted: list[VertexId] = []
    if generator.random() < p:
        tree = TreeNode(point.owner) if corner else TreeNode(point.owner[:-1])
        emitted.append(ProductVertex(tree, v.z))

    open_edges = generator.random(template.box.num_edges) < p
    label = ClusterLabeling.from_edge_mask(template.box, open_edges)
    start = template.corner_start if corner else template.origin_start
    root = label.find(start)
    d = len(point.coords)
    zero = (0,) * d
    top = (template.n,) * d
    for index, at_corner, dz in template.fiber:
        if index == start or label.find(index) != root:
            continue
        emitted.append(ProductVertex(LatticePoint(point.owner, top if at_corner else zero), v.z + dz))
    return emitted


def brw_step(
    spec: GraphSpec,
    front: ParticleFront,
    p: float,
    seed: int,
    t: Optional[int] = None,
    window: int = DEFAULT_WINDOW,
    height: Optional[int] = None,
) -> ParticleFront:
    """Advance the front by one generation.

    Every particle draws from its own stream keyed by (seed, t, vertex
    encoding, copy index), so the result does not depend on processing
    order. If the population passes the cap the returned front is marked
    aborted and holds the offspring produced up to that point.
    """
    p = check_probability(p)
    if window < 0:
        raise ConfigError(f"window must be non-negative, got {window}")
    family, base = _insertion_families(spec)
    t = front.generation if t is None else t
    result = ParticleFront({}, front.generation + 1, front.population_cap)
    if front.aborted:
        result.aborted = True
        return result

    offspring: dict[VertexId, int] = {}
    total = 0
    for v in sorted(front.particles, key=vertex_sort_key):
        _check_particle(base, v)
        key = encode_vertex(v).hex()
        template = None
        corner = False
        if isinstance(v.base, LatticePoint):  # type: ignore[union-attr]
            corner = bool(attachment_side(base, v.base))  # type: ignore[union-attr]
            n = base.levels.insertion(len(v.base.owner))  # type: ignore[union-attr]
            template = copy_template(base.d, n, window, height if height is not None else n + window)
        for j in range(front.particles[v]):
            generator = rng.stream(seed, "brw", t, key, j)
            if template is None:
                emitted = _emit_tree(family, v, p, generator)  # type: ignore[arg-type]
            else:
                emitted = _emit_attachment(v, corner, p, generator, template)  # type: ignore[arg-type]
            for u in emitted:
                offspring[u] = offspring.get(u, 0) + 1
            total += len(emitted)
            if total > front.population_cap:
                logger.warning(
                    "Branching walk population passed the cap of %d at generation %d",
                    front.population_cap, result.generation,
                )
                result.particles = offspring
                result.aborted = True
                return result

    result.particles = offspring
    return result


@dataclass(frozen=True)
class BrwTrajectory:
    spec: GraphSpec
    start: VertexId
    p: float
    max_t: int
    population_cap: int
    visited: frozenset
    returns_to_start: int
    aborted: bool
    population_history: tuple[int, ...]

    @property
    def final_population(self) -> int:
        return self.population_history[-1]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_mapping(),
            "start": format_vertex(self.start),
            "p": self.p,
            "maxT": self.max_t,
            "cap": self.population_cap,
            "returns": self.returns_to_start,
            "finalPopulation": self.final_population,
            "aborted": self.aborted,
            "visited": len(self.visited),
        }


def simulate_brw(
    spec: GraphSpec,
    start: VertexId,
    p: float,
    max_t: int,
    population_cap: int,
    seed: int,
    window: int = DEFAULT_WINDOW,
    height: Optional[int] = None,
) -> BrwTrajectory:
    """Run the walk from one particle for up to max_t generations.

    returns_to_start sums the particle count at `start` over generations 1..max_t.
    """
    if max_t < 0:
        raise ConfigError(f"max_t must be non-negative, got {max_t}")
    _, base = _insertion_families(spec)
    _check_particle(base, start)
    front = ParticleFront.single(start, population_cap)
    visited = {start}
    returns = 0
    history = [1]
    for t in range(max_t):
        front = brw_step(spec, front, p, seed, t, window, height)
        visited.update(front.particles)
        returns += front.count(start)
        history.append(front.total)
        if front.aborted or front.is_empty():
            break
    logger.info(
        "Branching walk from %s: %d generations, %d visited, %d returns%s",
        format_vertex(start), len(history) - 1, len(visited), returns,
        " (aborted)" if front.aborted else "",
    )
    return BrwTrajectory(
        spec=spec,
        start=start,
        p=p,
        max_t=max_t,
        population_cap=population_cap,
        visited=frozenset(visited),
        returns_to_start=returns,
        aborted=front.aborted,
        population_history=tuple(history),
    )


def coupled_visited_set(
    sample: PercolationSample, start: VertexId, max_t: Optional[int] = None
) -> frozenset:
    """Vertices visited by the walk when its offspring are read from `sample`.

    A tree particle emits along its open edges; an attachment particle emits
    along its open edge to the tree and onto every attachment point its
    cluster within the copy reaches. The visited set after max_t generations
    (unbounded by default) contains the open cluster of `start` outside the
    copy interiors.
    """
    window = sample.truncation
    _, base = _insertion_families(window.spec)
    _check_particle(base, start)

    owners: dict[tuple[int, ...], int] = {}
    copy_of = np.full(window.num_vertices, -1, dtype=np.int64)
    kind = np.zeros(window.num_vertices, dtype=np.int8)  # 0 tree, 1 attachment, 2 interior
    for i, v in enumerate(window.vertices):
        inner = v.base  # type: ignore[union-attr]
        if isinstance(inner, LatticePoint):
            copy_of[i] = owners.setdefault(inner.owner, len(owners))
            kind[i] = 1 if attachment_side(base, inner) is not None else 2

    a, b = window.edges[:, 0], window.edges[:, 1]
    internal = (copy_of[a] >= 0) & (copy_of[a] == copy_of[b])
    inside = ClusterLabeling.from_edge_mask(window, sample.open_edges & internal)
    fibers: dict[int, list[int]] = {}
    for i in np.flatnonzero(kind == 1).tolist():
        fibers.setdefault(inside.find(i), []).append(i)

    def emit(i: int) -> list[int]:
        if kind[i] == 0:
            return [j for j, k in window.incidence[i] if sample.open_edges[k]]
        targets = [j for j, k in window.incidence[i] if sample.open_edges[k] and kind[j] == 0]
        targets.extend(j for j in fibers[inside.find(i)] if j != i)
        return targets

    origin = window.index_of(start)
    seen = {origin: 0}
    queue = deque([origin])
    while queue:
        i = queue.popleft()
        if max_t is not None and seen[i] >= max_t:
            continue
        for j in emit(i):
            if j not in seen:
                seen[j] = seen[i] + 1
                queue.append(j)
    return frozenset(window.vertices[i] for i in seen)
