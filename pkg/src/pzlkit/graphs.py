"""Relation graphs over structure sequences and the combine operation.

``combine`` is the one constructor for composite structures: it enumerates
every subset of a base sequence whose induced relation graph is connected
(the empty subset excluded) and returns each as a canonical structure.
``instances_of`` is the streaming view of the same enumeration for family
specifications.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import _kernels
from .errors import BudgetExceededError
from .grid import BASE_FAMILIES, GridDims, build_elements
from .relations import RelationKind, related_any
from .structure import Seq, Structure, sort_key

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class RelationGraph:
    """A structure sequence viewed as vertices, with edges wherever some
    relation from ``relations`` holds (self-loops excluded)."""

    vertices: tuple[Structure, ...]
    edges: tuple[tuple[int, int], ...]
    relations: frozenset[RelationKind]


def relation_graph(structures: Sequence[Structure], relations) -> RelationGraph:
    rels = frozenset(relations)
    if not rels:
        raise ValueError("relation set must be nonempty")
    verts = tuple(structures)
    edges = []
    for u in range(len(verts)):
        for v in range(u + 1, len(verts)):
            if related_any(rels, verts[u], verts[v]):
                edges.append((u, v))
    return RelationGraph(verts, tuple(edges), rels)


def adjacency_masks(structures: Sequence[Structure], relations) -> list[int]:
    """Neighbour bitmasks over a structure sequence (self excluded)."""
    rels = frozenset(relations)
    n = len(structures)
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if related_any(rels, structures[u], structures[v]):
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return adj


def is_connected(g: RelationGraph) -> bool:
    """Every vertex pair joined by a path; empty and singleton graphs count
    as connected."""
    n = len(g.vertices)
    if n <= 1:
        return True
    adj = [0] * n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return _kernels.is_connected_mask((1 << n) - 1, adj)


def is_subgraph(inner: RelationGraph, outer: RelationGraph) -> bool:
    """Vertex containment, edge containment, and edge-endpoint closure."""
    outer_verts = set(outer.vertices)
    if any(v not in outer_verts for v in inner.vertices):
        return False

    def edge_set(g: RelationGraph) -> set[frozenset]:
        return {frozenset((g.vertices[u], g.vertices[v])) for u, v in g.edges}

    if not edge_set(inner) <= edge_set(outer):
        return False
    inner_verts = set(inner.vertices)
    for u, v in inner.edges:
        if inner.vertices[u] not in inner_verts or inner.vertices[v] not in inner_verts:
            return False
    return True


def _mask_to_seq(mask: int, base: Sequence[Structure]) -> Seq:
    members = []
    while mask:
        low = mask & -mask
        mask ^= low
        members.append(base[low.bit_length() - 1])
    members.sort(key=sort_key)
    return Seq(members)


def combine(
    relations,
    base_instances: Sequence[Structure],
    budget: int = DEFAULT_BUDGET,
) -> tuple[Seq, ...]:
    """All nonempty subsets of the base whose induced relation graph is
    connected, each as a canonical structure, canonically ordered.

    Raises BudgetExceededError when more than ``budget`` structures would
    be produced.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    base = tuple(base_instances)
    adj = adjacency_masks(base, relations)
    masks = _kernels.connected_subsets(adj, budget + 1)
    if len(masks) > budget:
        raise BudgetExceededError(
            f"combine stopped after reaching {budget} structures", count=budget
        )
    out = [_mask_to_seq(m, base) for m in masks]
    out.sort(key=sort_key)
    return tuple(out)


@dataclass(frozen=True)
class FamilySpec:
    """How a family's instances arise: a base element sequence, or a
    combine over another family.

    ``relations is None`` marks a base family (name must be one of the
    eight element sequences).  References form a chain, so specs are
    acyclic by construction.
    """

    name: str
    relations: Optional[frozenset] = None
    base: Optional["FamilySpec"] = None

    def __post_init__(self):
        if self.relations is None:
            if self.base is not None:
                raise ValueError("base family cannot reference another spec")
            if self.name not in BASE_FAMILIES:
                raise ValueError(f"unknown base family: {self.name}")
        else:
            if not self.relations:
                raise ValueError("combine requires a nonempty relation set")
            if self.base is None:
                raise ValueError("combine requires a base spec")

    @property
    def is_base(self) -> bool:
        return self.relations is None

    def root_base(self) -> str:
        spec = self
        while spec.base is not None:
            spec = spec.base
        return spec.name


def base_spec(name: str) -> FamilySpec:
    return FamilySpec(name=name)


def instances_of(
    spec: FamilySpec, dims: GridDims, budget: int = DEFAULT_BUDGET
) -> Iterator[Structure]:
    """Stream the members of a family in canonical order.

    Yields exactly what ``combine`` would produce, without building the
    whole sequence up front; budget exhaustion surfaces as an exception
    from the stream once ``budget`` structures have been yielded.
    """
    es = build_elements(dims)
    if spec.is_base:
        yield from es.sequence(spec.name)
        return
    base = tuple(instances_of(spec.base, dims, budget))
    adj = adjacency_masks(base, spec.relations)
    masks = _kernels.connected_subsets(adj, budget + 1)
    for idx, mask in enumerate(masks):
        if idx >= budget:
            raise BudgetExceededError(
                f"family {spec.name} stopped after {budget} structures", count=budget
            )
        yield _mask_to_seq(mask, base)


def family_instances(
    spec: FamilySpec, dims: GridDims, budget: int = DEFAULT_BUDGET
) -> tuple[Structure, ...]:
    return tuple(instances_of(spec, dims, budget))
