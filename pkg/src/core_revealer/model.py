"""Problem instances, preference profiles and structural validation.

A problem is a housing market with typed agents and typed houses. Every
individual agent is endowed with one house type and receives one house
type in the observed allocation. Copies of a house type are
interchangeable, so endowments and allocations map agents to house *type*
ids, never to individual copies.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from core_revealer.errors import InvalidProblemError, ProfileError, UnknownIdError


@dataclass(frozen=True, order=True)
class AgentId:
    """An individual agent: the ``index``-th member of agent type ``type_id``.

    Ordering is lexicographic on ``(type_id, index)``, which is the canonical
    agent order used throughout the package.
    """

    type_id: int
    index: int

    def __repr__(self) -> str:
        return f"AgentId({self.type_id}, {self.index})"


@dataclass(frozen=True)
class AgentType:
    id: int
    count: int
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or str(self.id)


@dataclass(frozen=True)
class HouseType:
    id: int
    count: int
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or f"h{self.id}"


@dataclass(frozen=True)
class Problem:
    """A housing market with an observed allocation.

    ``endowment`` and ``allocation`` map every :class:`AgentId` to a house
    type id. Instances are treated as immutable; build them with
    :meth:`Problem.build` or :func:`core_revealer.instances.parse_instance`
    and check them with :func:`validate`.
    """

    agent_types: tuple[AgentType, ...]
    house_types: tuple[HouseType, ...]
    endowment: Mapping[AgentId, int] = field(hash=False)
    allocation: Mapping[AgentId, int] = field(hash=False)

    @classmethod
    def build(
        cls,
        agent_counts: Sequence[int],
        house_counts: Sequence[int],
        endowment: Mapping[AgentId, int] | Mapping[tuple[int, int], int],
        allocation: Mapping[AgentId, int] | Mapping[tuple[int, int], int],
        agent_names: Sequence[str] | None = None,
        house_names: Sequence[str] | None = None,
    ) -> "Problem":
        """Convenience constructor; agent keys may be plain ``(type, index)`` tuples."""
        agent_names = agent_names or [str(i) for i in range(len(agent_counts))]
        house_names = house_names or [f"h{l}" for l in range(len(house_counts))]
        return cls(
            agent_types=tuple(
                AgentType(i, c, n) for i, (c, n) in enumerate(zip(agent_counts, agent_names))
            ),
            house_types=tuple(
                HouseType(l, c, n) for l, (c, n) in enumerate(zip(house_counts, house_names))
            ),
            endowment={_as_agent(a): h for a, h in endowment.items()},
            allocation={_as_agent(a): h for a, h in allocation.items()},
        )

    @property
    def n_agent_types(self) -> int:
        return len(self.agent_types)

    @property
    def n_house_types(self) -> int:
        return len(self.house_types)

    @property
    def agents(self) -> list[AgentId]:
        """All individual agents in canonical order."""
        return [AgentId(t.id, k) for t in self.agent_types for k in range(t.count)]

    def agent_label(self, agent: AgentId) -> str:
        """Short display label, ``1a``-style when the type has at most 26 agents."""
        name = self.agent_types[agent.type_id].label
        if agent.index < 26:
            return f"{name}{chr(ord('a') + agent.index)}"
        return f"{name}#{agent.index}"

    def house_label(self, house_id: int) -> str:
        return self.house_types[house_id].label

    def agent_type_id(self, name: str) -> int:
        for t in self.agent_types:
            if t.label == name:
                return t.id
        raise UnknownIdError(f"unknown agent type {name!r}")

    def house_id(self, name: str) -> int:
        for h in self.house_types:
            if h.label == name:
                return h.id
        raise UnknownIdError(f"unknown house type {name!r}")


def _as_agent(key) -> AgentId:
    return key if isinstance(key, AgentId) else AgentId(*key)


@dataclass(frozen=True)
class Violation:
    """One failed structural invariant of a :class:`Problem`."""

    kind: str
    message: str
    ids: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def validate(problem: Problem) -> list[Violation]:
    """Return every violated invariant of ``problem``; an empty list means valid."""
    violations = []
    for pos, t in enumerate(problem.agent_types):
        if t.id != pos:
            violations.append(Violation("agent type ids", f"type at position {pos} has id {t.id}", (t.id,)))
        if t.count < 1:
            violations.append(Violation("agent type count", f"type {t.label} has count {t.count}", (t.id,)))
    for pos, h in enumerate(problem.house_types):
        if h.id != pos:
            violations.append(Violation("house type ids", f"house at position {pos} has id {h.id}", (h.id,)))
        if h.count < 1:
            violations.append(Violation("house type count", f"house {h.label} has count {h.count}", (h.id,)))

    n_agents = sum(t.count for t in problem.agent_types)
    n_houses = sum(h.count for h in problem.house_types)
    if n_agents != n_houses:
        violations.append(
            Violation("total supply", f"{n_agents} agents but {n_houses} houses")
        )

    agents = set(problem.agents)
    n_house_types = len(problem.house_types)
    for map_name, mapping in (("endowment", problem.endowment), ("allocation", problem.allocation)):
        missing = sorted(agents - set(mapping))
        for a in missing:
            violations.append(
                Violation(f"{map_name} totality", f"agent {a} has no {map_name}", (a,))
            )
        for a in sorted(set(mapping) - agents):
            violations.append(
                Violation(f"{map_name} unknown agent", f"{map_name} mentions unknown agent {a}", (a,))
            )
        counts = Counter()
        for a, h in mapping.items():
            if not (isinstance(h, int) and 0 <= h < n_house_types):
                violations.append(
                    Violation(f"{map_name} unknown house", f"agent {a} maps to house {h!r}", (a,))
                )
            elif a in agents:
                counts[h] += 1
        for h in problem.house_types:
            if counts[h.id] != h.count:
                violations.append(
                    Violation(
                        f"{map_name} count {h.label}",
                        f"{counts[h.id]} agents hold house {h.label}, supply is {h.count}",
                        (h.id,),
                    )
                )
    return violations


def ensure_valid(problem: Problem) -> Problem:
    """Raise :class:`InvalidProblemError` listing every violation, else return ``problem``."""
    violations = validate(problem)
    if violations:
        raise InvalidProblemError(violations)
    return problem


@dataclass(frozen=True)
class PreferenceProfile:
    """One strict ranking of house type ids per agent type; position 0 is the favourite."""

    orders: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        orders = tuple(tuple(o) for o in self.orders)
        object.__setattr__(self, "orders", orders)
        n = len(orders[0]) if orders else 0
        for type_id, order in enumerate(orders):
            if sorted(order) != list(range(n)):
                raise ProfileError(
                    f"order of type {type_id} is not a permutation of house ids 0..{n - 1}: {order}"
                )
        object.__setattr__(
            self, "_ranks", tuple({h: r + 1 for r, h in enumerate(o)} for o in orders)
        )

    @classmethod
    def from_orders(cls, orders: Iterable[Iterable[int]]) -> "PreferenceProfile":
        return cls(tuple(tuple(o) for o in orders))

    @property
    def n_house_types(self) -> int:
        return len(self.orders[0]) if self.orders else 0

    def rank(self, type_id: int, house_id: int) -> int:
        try:
            return self._ranks[type_id][house_id]
        except (IndexError, KeyError):
            raise UnknownIdError(f"no rank for type {type_id}, house {house_id}") from None

    def favourite(self, type_id: int) -> int:
        return self.orders[type_id][0]

    def covers(self, problem: Problem) -> bool:
        return (
            len(self.orders) == problem.n_agent_types
            and self.n_house_types == problem.n_house_types
        )


class Comparison(enum.Enum):
    STRICTLY_PREFERS = "strictly_prefers"
    STRICTLY_DISPREFERS = "strictly_disprefers"
    EQUAL = "equal"


def profile_rank(profile: PreferenceProfile, type_id: int, house_id: int) -> int:
    """1-based position of ``house_id`` in the ranking of ``type_id``."""
    return profile.rank(type_id, house_id)


def prefers(profile: PreferenceProfile, type_id: int, h_a: int, h_b: int) -> Comparison:
    ra, rb = profile.rank(type_id, h_a), profile.rank(type_id, h_b)
    if ra < rb:
        return Comparison.STRICTLY_PREFERS
    if ra > rb:
        return Comparison.STRICTLY_DISPREFERS
    return Comparison.EQUAL


@dataclass(frozen=True)
class BlockingCoalition:
    """A coalition of agents and a reallocation of their own endowments among them."""

    members: tuple[AgentId, ...]
    sub_allocation: Mapping[AgentId, int] = field(hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(self.members)))
