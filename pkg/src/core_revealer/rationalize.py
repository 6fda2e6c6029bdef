"""Rationalizability test, rationalizing profiles and blocking-coalition witnesses.

An allocation can be supported as a strong-core outcome for some type-level
strict profile exactly when, inside every strongly connected component of
the big graph, agents of the same type receive the same house type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from core_revealer.errors import CertificateError, PreconditionError, RationalizationError
from core_revealer.graph import (
    Cycle,
    SccPartition,
    build_big_graph,
    build_small_graph,
    cycle_partition,
    is_cycle,
    scc_cover_cycle,
    scc_partition,
)
from core_revealer.model import AgentId, BlockingCoalition, PreferenceProfile, Problem


@dataclass(frozen=True)
class Rationalizable:
    scc_order: SccPartition
    profile: PreferenceProfile

    rationalizable = True


@dataclass(frozen=True)
class NotRationalizable:
    """Two same-type agents in one component that receive different house types.

    ``cover_cycle`` is a cycle of the big graph through the whole component.
    """

    component_index: int
    pair: tuple[AgentId, AgentId]
    cover_cycle: Cycle

    rationalizable = False


Verdict = Union[Rationalizable, NotRationalizable]


def _first_violation(problem: Problem, order: SccPartition):
    for index, comp in enumerate(order.components):
        for i, a in enumerate(comp):
            for b in comp[i + 1:]:
                if a.type_id == b.type_id and problem.allocation[a] != problem.allocation[b]:
                    return index, (a, b)
    return None


def check(problem: Problem, order: SccPartition | None = None) -> Verdict:
    """Decide rationalizability and attach a certificate for either answer.

    ``order`` defaults to the canonical component order of the big graph.
    """
    big = build_big_graph(problem)
    if order is None:
        order = scc_partition(big)
    found = _first_violation(problem, order)
    if found is None:
        return Rationalizable(order, construct_profile(problem, order))
    index, pair = found
    small_cycles = cycle_partition(build_small_graph(problem))
    cover = scc_cover_cycle(big, order.components[index], small_cycles)
    return NotRationalizable(index, pair, cover)


def construct_profile(problem: Problem, order: SccPartition) -> PreferenceProfile:
    """Rank each type's received houses by the order of the components they sit in.

    Component by component, the house type received by a type's members goes
    to that type's best still-free rank. Houses a type never receives follow
    in ascending id order.
    """
    rankings: list[list[int]] = [[] for _ in problem.agent_types]
    for index, comp in enumerate(order.components):
        received: dict[int, int] = {}
        for a in comp:
            h = problem.allocation[a]
            prev = received.setdefault(a.type_id, h)
            if prev != h:
                raise RationalizationError(
                    f"type {problem.agent_types[a.type_id].label} receives both "
                    f"{problem.house_label(prev)} and {problem.house_label(h)} in component {index}"
                )
        for type_id, h in sorted(received.items()):
            if h in rankings[type_id]:
                raise RationalizationError(
                    f"house {problem.house_label(h)} already ranked for type "
                    f"{problem.agent_types[type_id].label}; the order is not an SCC partition"
                )
            rankings[type_id].append(h)
    for ranking in rankings:
        ranking.extend(h.id for h in problem.house_types if h.id not in ranking)
    return PreferenceProfile.from_orders(rankings)


def equal_treatment_check(problem: Problem) -> tuple[AgentId, AgentId] | None:
    """First same-type, same-endowment pair with different allocations, or ``None``.

    Passing is necessary for rationalizability, not sufficient.
    """
    agents = problem.agents
    for i, a in enumerate(agents):
        for b in agents[i + 1:]:
            if (
                a.type_id == b.type_id
                and problem.endowment[a] == problem.endowment[b]
                and problem.allocation[a] != problem.allocation[b]
            ):
                return a, b
    return None


def blocking_witness(
    problem: Problem, profile: PreferenceProfile, cert: NotRationalizable
) -> BlockingCoalition:
    """Turn a violation certificate into a coalition blocking under ``profile``.

    Rotate the covering cycle to start at ``x`` (first agent of the pair):
    ``x -> c1 -> ... -> y -> d1 -> ... -> x``. ``x`` receives c1's house and
    ``y`` receives d1's house; these differ and the shared type strictly
    ranks one above the other. If the type prefers x's house, the segment
    ``c1 .. y`` trades along the cycle and ``y`` takes c1's endowment;
    otherwise ``d1 .. x`` does so and ``x`` takes d1's endowment. A segment of
    length one is an individual-rationality violation.
    """
    x, y = cert.pair
    big = build_big_graph(problem)
    cycle = cert.cover_cycle
    if x.type_id != y.type_id or problem.allocation[x] == problem.allocation[y]:
        raise CertificateError(f"pair {cert.pair} is not same-type with different allocations")
    if x not in cycle or y not in cycle:
        raise CertificateError("pair is not on the covering cycle")
    if not is_cycle(big, cycle):
        raise CertificateError("covering cycle is not a cycle of the big graph")

    rotated = cycle[cycle.index(x):] + cycle[:cycle.index(x)]
    j = rotated.index(y)
    if profile.rank(x.type_id, problem.allocation[x]) < profile.rank(y.type_id, problem.allocation[y]):
        segment, gainer = rotated[1:j + 1], y
    else:
        segment, gainer = rotated[j + 1:] + (x,), x
    # Every member takes the endowment of its successor on the segment, which
    # is what it already receives; the last member wraps to the first.
    sub_allocation = {
        a: problem.endowment[segment[(k + 1) % len(segment)]] for k, a in enumerate(segment)
    }
    assert segment[-1] == gainer
    return BlockingCoalition(tuple(segment), sub_allocation)


def adversarial_profile(problem: Problem) -> PreferenceProfile:
    """A profile under which the observed allocation is not in the core.

    If some agent does not keep its endowment, its type top-ranks that
    endowment. Otherwise two agents of different types with different
    endowments each top-rank the other's endowment and swap.
    """
    if problem.n_agent_types < 2 or problem.n_house_types < 2:
        raise PreconditionError("need at least two agent types and two house types")
    favourites: dict[int, int] = {}
    for a in problem.agents:
        if problem.allocation[a] != problem.endowment[a]:
            favourites[a.type_id] = problem.endowment[a]
            break
    else:
        a, b = _swap_pair(problem)
        favourites[a.type_id] = problem.endowment[b]
        favourites[b.type_id] = problem.endowment[a]
    orders = []
    for t in problem.agent_types:
        rest = [h.id for h in problem.house_types]
        if t.id in favourites:
            rest.remove(favourites[t.id])
            rest.insert(0, favourites[t.id])
        orders.append(rest)
    return PreferenceProfile.from_orders(orders)


def _swap_pair(problem: Problem) -> tuple[AgentId, AgentId]:
    agents = problem.agents
    for i, a in enumerate(agents):
        for b in agents[i + 1:]:
            if a.type_id != b.type_id and problem.endowment[a] != problem.endowment[b]:
                return a, b
    # Unreachable with two agent types and two house types.
    raise PreconditionError("no two agents of different types hold different endowments")
