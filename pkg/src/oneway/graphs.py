"""Entanglement graphs of patterns: cycles, 2-colourings, and evenness.

A pattern is *even* when every path from the boundary (inputs and outputs)
back to the boundary has even length. :func:`is_even` decides this for walks:
each component that touches the boundary must be bipartite with all of its
boundary vertices on the same side. That is the notion preserved under
tensoring and composition, since a composite extreme walk is a concatenation
of extreme walks of the parts. :func:`extreme_path_lengths` enumerates simple
paths by brute force and serves as a cross-check on small graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from .pattern import Pattern, QubitId

MAX_PATH_VERTICES = 20


@dataclass(frozen=True)
class EntanglementGraph:
    vertices: tuple[QubitId, ...]
    edges: frozenset[frozenset[QubitId]]
    boundary: frozenset[QubitId]
    inputs: tuple[QubitId, ...] = ()
    outputs: tuple[QubitId, ...] = ()

    def __post_init__(self):
        vs = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"self-loop or malformed edge {set(e)}")
            if not e <= vs:
                raise ValueError(f"edge {sorted(e)} references unknown vertices")
        if not self.boundary <= vs:
            raise ValueError("boundary vertices must be graph vertices")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[QubitId, QubitId]], boundary: Iterable[QubitId] = (), vertices: Iterable[QubitId] = ()) -> "EntanglementGraph":
        edge_list = [tuple(e) for e in edges]
        vs = list(dict.fromkeys([*vertices, *(v for e in edge_list for v in e), *boundary]))
        return cls(tuple(vs), frozenset(frozenset(e) for e in edge_list), frozenset(boundary))

    def adjacency(self) -> dict[QubitId, list[QubitId]]:
        adj: dict[QubitId, list[QubitId]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges, key=sorted):
            a, b = sorted(e)
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(sorted(e)) for e in self.edges)
        return g

    def components(self) -> list[list[QubitId]]:
        adj = self.adjacency()
        seen: set[QubitId] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps


def build_graph(p: Pattern) -> EntanglementGraph:
    """One vertex per qubit, one edge per distinct entangled pair."""
    edges = frozenset(frozenset(e) for e in p.edges)
    return EntanglementGraph(
        tuple(p.qubits), edges, frozenset(p.inputs) | frozenset(p.outputs), tuple(p.inputs), tuple(p.outputs)
    )


def cycle_lengths(g: EntanglementGraph) -> list[int]:
    """Sorted lengths of a fundamental cycle basis (spanning forest plus chords)."""
    return sorted(len(c) for c in nx.cycle_basis(g.to_networkx()))


@dataclass(frozen=True)
class Colouring:
    colours: dict[QubitId, int] | None
    odd_cycle: tuple[QubitId, ...] | None = None  # witness when not bipartite

    @property
    def bipartite(self) -> bool:
        return self.colours is not None

    def __bool__(self):
        return self.bipartite


def _tree_path(parent: dict, v: QubitId) -> list[QubitId]:
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path  # v ... root


def _bfs_colour(adj, start, colours, parent):
    """Colour the component of ``start``; return an odd cycle if one is found."""
    colours[start] = 0
    parent[start] = None
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in colours:
                colours[y] = 1 - colours[x]
                parent[y] = x
                queue.append(y)
            elif colours[y] == colours[x]:
                px, py = _tree_path(parent, x), _tree_path(parent, y)
                common = set(px) & set(py)
                # trim both tree paths at their lowest common ancestor
                ix = next(k for k, v in enumerate(px) if v in common)
                iy = py.index(px[ix])
                return tuple(px[: ix + 1] + list(reversed(py[:iy])))
    return None


def two_colour(g: EntanglementGraph) -> Colouring:
    """Breadth-first 2-colouring; returns an odd cycle as witness on failure."""
    adj = g.adjacency()
    colours: dict[QubitId, int] = {}
    parent: dict[QubitId, QubitId | None] = {}
    for v in g.vertices:
        if v not in colours:
            cycle = _bfs_colour(adj, v, colours, parent)
            if cycle is not None:
                return Colouring(None, cycle)
    return Colouring(colours)


@dataclass(frozen=True)
class ComponentDiagnosis:
    vertices: tuple[QubitId, ...]
    boundary: tuple[QubitId, ...]
    bipartite: bool
    even: bool
    witness: tuple[QubitId, ...] | None  # odd cycle or odd boundary-to-boundary path
    note: str


@dataclass(frozen=True)
class EvennessReport:
    even: bool
    components: tuple[ComponentDiagnosis, ...]

    def __bool__(self):
        return self.even


def _graph_is_even(g: EntanglementGraph) -> EvennessReport:
    adj = g.adjacency()
    diags = []
    for comp in g.components():
        colours: dict[QubitId, int] = {}
        parent: dict[QubitId, QubitId | None] = {}
        root = next((v for v in comp if v in g.boundary), comp[0])
        cycle = _bfs_colour(adj, root, colours, parent)
        bnd = tuple(v for v in comp if v in g.boundary)
        if cycle is not None:
            if bnd:
                diags.append(ComponentDiagnosis(tuple(comp), bnd, False, False, cycle, "odd cycle reachable from the boundary"))
            else:
                diags.append(ComponentDiagnosis(tuple(comp), bnd, False, True, cycle, "odd cycle in a component without boundary vertices; ignored"))
            continue
        odd = [v for v in bnd if colours[v] != colours[root]]
        if odd:
            # the BFS root is a boundary vertex, so the tree path is an odd extreme path
            path = tuple(reversed(_tree_path(parent, odd[0])))
            diags.append(ComponentDiagnosis(tuple(comp), bnd, True, False, path, f"odd extreme path of length {len(path) - 1}"))
        else:
            diags.append(ComponentDiagnosis(tuple(comp), bnd, True, True, None, "ok"))
    return EvennessReport(all(d.even for d in diags), tuple(diags))


def is_even(p: Pattern | EntanglementGraph) -> EvennessReport:
    g = p if isinstance(p, EntanglementGraph) else build_graph(p)
    return _graph_is_even(g)


def extreme_path_lengths(g: EntanglementGraph, max_vertices: int = MAX_PATH_VERTICES) -> set[int]:
    """Lengths of all simple paths joining two boundary vertices, by exhaustive search.

    A boundary vertex on its own counts as a path of length 0.
    """
    if len(g.vertices) > max_vertices:
        raise ValueError(f"graph has {len(g.vertices)} vertices, limit is {max_vertices}")
    adj = g.adjacency()
    lengths: set[int] = set()

    def walk(v, visited, depth):
        if v in g.boundary:
            lengths.add(depth)
        for y in adj[v]:
            if y not in visited:
                visited.add(y)
                walk(y, visited, depth + 1)
                visited.remove(y)

    for b in sorted(g.boundary):
        walk(b, {b}, 0)
    return lengths


def export_edge_list(g: EntanglementGraph) -> str:
    """Edge-list text: role comments, a ``boundary:`` header, then ``u v`` lines."""
    lines = ["# vertex roles: input (box), output (empty circle), measured (solid circle)"]
    ins, outs = set(g.inputs), set(g.outputs)
    for v in g.vertices:
        roles = [r for r, s in (("input", ins), ("output", outs)) if v in s]
        lines.append(f"# {v} {'+'.join(roles) if roles else 'measured'}")
    lines.append("boundary: " + " ".join(v for v in g.vertices if v in g.boundary))
    order = {v: k for k, v in enumerate(g.vertices)}
    for e in sorted(g.edges, key=lambda e: sorted(order[v] for v in e)):
        a, b = sorted(e, key=order.__getitem__)
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"
