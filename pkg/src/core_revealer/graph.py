"""Agent digraphs of an allocation and their SCC / cycle structure.

Two graphs are built over the individual agents:

* the *small* graph matches, per house type, the agents receiving it to the
  agents endowed with it positionally in canonical order, so every vertex
  has exactly one in-arc and one out-arc;
* the *big* graph has an arc from every agent to every owner of the house
  type that agent receives.

An arc ``(a, b)`` always means "``a`` receives a copy of ``b``'s endowed
house type".
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from core_revealer.errors import GraphError
from core_revealer.model import AgentId, Problem

Arc = tuple[AgentId, AgentId]
Cycle = tuple[AgentId, ...]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on agents; self-loops allowed, duplicate arcs collapse."""

    vertices: tuple[AgentId, ...]
    arcs: frozenset[Arc]
    _succ: Mapping[AgentId, tuple[AgentId, ...]] = field(init=False, repr=False, compare=False)
    _pred: Mapping[AgentId, tuple[AgentId, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vertices = tuple(sorted(self.vertices))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        known = set(vertices)
        succ = defaultdict(list)
        pred = defaultdict(list)
        for u, v in self.arcs:
            if u not in known or v not in known:
                raise GraphError(f"arc {(u, v)} has an endpoint outside the vertex set")
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "_succ", {v: tuple(sorted(succ[v])) for v in vertices})
        object.__setattr__(self, "_pred", {v: tuple(sorted(pred[v])) for v in vertices})

    @classmethod
    def from_arcs(cls, vertices: Iterable[AgentId], arcs: Iterable[Arc]) -> "Digraph":
        return cls(tuple(vertices), frozenset(arcs))

    def successors(self, v: AgentId) -> tuple[AgentId, ...]:
        return self._succ[v]

    def predecessors(self, v: AgentId) -> tuple[AgentId, ...]:
        return self._pred[v]

    def indegree(self, v: AgentId) -> int:
        return len(self._pred[v])

    def outdegree(self, v: AgentId) -> int:
        return len(self._succ[v])

    def has_arc(self, u: AgentId, v: AgentId) -> bool:
        return (u, v) in self.arcs

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)


@dataclass(frozen=True)
class SccPartition:
    """Ordered strongly connected components; each component is sorted canonically."""

    components: tuple[tuple[AgentId, ...], ...]
    component_of: Mapping[AgentId, int] = field(hash=False, compare=False)

    @classmethod
    def from_components(cls, components: Iterable[Iterable[AgentId]]) -> "SccPartition":
        comps = tuple(tuple(sorted(c)) for c in components)
        return cls(comps, {v: i for i, c in enumerate(comps) for v in c})

    def __len__(self) -> int:
        return len(self.components)

    def reordered(self, order: Sequence[int]) -> "SccPartition":
        """Same partition with components listed in ``order`` (a permutation of indices)."""
        if sorted(order) != list(range(len(self.components))):
            raise ValueError(f"{order!r} is not a permutation of component indices")
        return SccPartition.from_components(self.components[i] for i in order)

    def reversed(self) -> "SccPartition":
        return SccPartition.from_components(reversed(self.components))


def build_small_graph(problem: Problem) -> Digraph:
    receivers = defaultdict(list)
    owners = defaultdict(list)
    for a in problem.agents:
        receivers[problem.allocation[a]].append(a)
        owners[problem.endowment[a]].append(a)
    arcs = set()
    for h in problem.house_types:
        left, right = receivers[h.id], owners[h.id]
        if len(left) != len(right):
            raise GraphError(f"house {h.label}: {len(left)} receivers but {len(right)} owners")
        arcs.update(zip(left, right))
    return Digraph(tuple(problem.agents), frozenset(arcs))


def build_big_graph(problem: Problem) -> Digraph:
    owners = defaultdict(list)
    for a in problem.agents:
        owners[problem.endowment[a]].append(a)
    arcs = {(a, b) for a in problem.agents for b in owners[problem.allocation[a]]}
    return Digraph(tuple(problem.agents), frozenset(arcs))


def _tarjan(g: Digraph) -> list[list[AgentId]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: dict[AgentId, int] = {}
    lowlink: dict[AgentId, int] = {}
    on_stack: set[AgentId] = set()
    stack: list[AgentId] = []
    components = []
    counter = 0

    for root in g.vertices:
        if root in index:
            continue
        work = [(root, iter(g.successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, children = work[-1]
            descended = False
            for w in children:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors(w))))
                    descended = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
    return components


def scc_partition(g: Digraph) -> SccPartition:
    """Strongly connected components, ordered by their smallest member."""
    components = [sorted(c) for c in _tarjan(g)]
    components.sort(key=lambda c: c[0])
    return SccPartition.from_components(components)


def cycle_partition(small: Digraph) -> list[Cycle]:
    """Split a graph whose vertices all have in- and out-degree 1 into its cycles.

    Each cycle starts at its smallest vertex; cycles are listed by that vertex.
    """
    for v in small.vertices:
        if small.indegree(v) != 1 or small.outdegree(v) != 1:
            raise GraphError(
                f"vertex {v} has indegree {small.indegree(v)} and outdegree "
                f"{small.outdegree(v)}; both must be 1"
            )
    seen: set[AgentId] = set()
    cycles = []
    for start in small.vertices:
        if start in seen:
            continue
        cycle = []
        v = start
        while v not in seen:
            seen.add(v)
            cycle.append(v)
            v = small.successors(v)[0]
        cycles.append(tuple(cycle))
    return cycles


def is_cycle(g: Digraph, cycle: Sequence[AgentId]) -> bool:
    """True if ``cycle`` lists distinct vertices joined by arcs of ``g``, wrapping around."""
    if not cycle or len(set(cycle)) != len(cycle):
        return False
    return all(g.has_arc(cycle[j], cycle[(j + 1) % len(cycle)]) for j in range(len(cycle)))


def _rotate(cycle: Sequence[AgentId], start: AgentId) -> Cycle:
    j = cycle.index(start)
    return tuple(cycle[j:]) + tuple(cycle[:j])


def scc_cover_cycle(
    big: Digraph, component: Iterable[AgentId], small_cycles: Sequence[Cycle]
) -> Cycle:
    """A cycle of ``big`` through every vertex of ``component`` exactly once.

    Small cycles inside the component are merged one at a time. A small cycle
    can join the merged cycle when one of its vertices ``y`` is co-endowed with
    a merged vertex ``x``; with ``p`` the predecessor of ``x`` on the merged
    cycle and ``q`` the predecessor of ``y`` on the small cycle, the arcs
    ``p -> y`` and ``q -> x`` both exist and the arc ``p -> x`` is replaced by
    the detour ``p -> y -> ... -> q -> x``. Self-loops are the cases ``p == x``
    or ``q == y``.

    Co-endowment is read off the graph: two vertices of a big graph are
    endowed with the same house type exactly when they have the same
    predecessors.
    """
    members = set(component)
    if not members:
        raise GraphError("empty component")
    inside = []
    for c in small_cycles:
        overlap = members.intersection(c)
        if overlap and len(overlap) != len(c):
            raise GraphError(f"small cycle {c} straddles the component boundary")
        if overlap:
            inside.append(_rotate(c, min(c)))
    covered = {v for c in inside for v in c}
    if covered != members:
        raise GraphError("small cycles do not cover the component")
    inside.sort(key=lambda c: c[0])

    merged = list(inside[0])
    pending = inside[1:]
    while pending:
        chosen = None
        for pos, cand in enumerate(pending):
            splice = _find_splice(big, merged, cand)
            if splice is not None:
                chosen = pos, cand, splice
                break
        if chosen is None:
            raise GraphError(
                "no remaining small cycle shares a house type with the merged cycle; "
                "the vertex set is not a strongly connected component"
            )
        pos, cand, (x, y) = chosen
        del pending[pos]
        i = merged.index(x)
        detour = list(_rotate(cand, y))
        # p = merged[i - 1] is followed by the detour, which ends at q, then x.
        merged = merged[:i] + detour + merged[i:]
    cycle = _rotate(merged, min(merged))
    if not is_cycle(big, cycle):
        raise GraphError("spliced cycle uses an arc missing from the graph")
    return cycle


def _find_splice(big: Digraph, merged: Sequence[AgentId], cand: Cycle):
    for x in sorted(merged):
        px = big.predecessors(x)
        for y in sorted(cand):
            if big.predecessors(y) == px:
                return x, y
    return None


def no_inout_check(big: Digraph, part: SccPartition) -> list[Arc]:
    """Arcs of ``big`` leaving their component; an empty list means none cross."""
    return [(u, v) for u, v in big.sorted_arcs() if part.component_of[u] != part.component_of[v]]


def to_dot(problem: Problem, g: Digraph, name: str = "G", part: SccPartition | None = None) -> str:
    """Graphviz text for ``g``, drawing each component of ``part`` as a cluster."""

    def node(a: AgentId) -> str:
        return f'"{problem.agent_label(a)}"'

    lines = [f"digraph {name} {{"]
    if part is not None:
        for i, comp in enumerate(part.components):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="S{i + 1}";')
            for a in comp:
                lines.append(f"    {node(a)};")
            lines.append("  }")
    else:
        for a in g.vertices:
            lines.append(f"  {node(a)};")
    for u, v in g.sorted_arcs():
        lines.append(f'  {node(u)} -> {node(v)} [label="{problem.house_label(problem.endowment[v])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
