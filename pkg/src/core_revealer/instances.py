"""JSON instance, profile and verdict formats, plus seeded instance generation.

Instance files list one record per individual agent::

    {"agent_types": [{"name": "1", "count": 3}, ...],
     "house_types": [{"name": "h1", "count": 1}, ...],
     "agents": [{"type": "1", "index": 0, "endowment": "h1", "allocation": "h2"}, ...]}

Type and house ids follow the order of ``agent_types`` and ``house_types``.
An optional top-level ``"generator"`` object records the seed and parameters
of generated instances and is otherwise ignored.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Any, Mapping

import jsonschema

from core_revealer.errors import InstanceFormatError
from core_revealer.model import AgentId, BlockingCoalition, PreferenceProfile, Problem, ensure_valid

_TYPE_LIST = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "properties": {"name": {"type": "string"}, "count": {"type": "integer", "minimum": 1}},
        "required": ["name", "count"],
        "additionalProperties": False,
    },
}

INSTANCE_SCHEMA = {
    "type": "object",
    "properties": {
        "agent_types": _TYPE_LIST,
        "house_types": _TYPE_LIST,
        "agents": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "type": {"type": "string"},
                    "index": {"type": "integer", "minimum": 0},
                    "endowment": {"type": "string"},
                    "allocation": {"type": "string"},
                },
                "required": ["type", "index", "endowment", "allocation"],
                "additionalProperties": False,
            },
        },
        "generator": {"type": "object"},
    },
    "required": ["agent_types", "house_types", "agents"],
    "additionalProperties": False,
}

PROFILE_SCHEMA = {
    "type": "object",
    "properties": {
        "preferences": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "string"}},
        }
    },
    "required": ["preferences"],
    "additionalProperties": False,
}


def _load(text: str, schema: dict, what: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{what}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        raise InstanceFormatError(f"{what}: schema violation at {err.json_path}: {err.message}")
    return doc


def _name_table(entries: list[dict], field: str) -> dict[str, int]:
    table: dict[str, int] = {}
    for i, entry in enumerate(entries):
        if entry["name"] in table:
            raise InstanceFormatError(f"duplicate name {entry['name']!r} at $.{field}[{i}]")
        table[entry["name"]] = i
    return table


def parse_instance(text: str, validate: bool = True) -> Problem:
    """Parse instance JSON into a :class:`Problem`.

    With ``validate`` the supply-count invariants are enforced too
    (:class:`~core_revealer.errors.InvalidProblemError`); schema and
    cross-reference problems always raise :class:`InstanceFormatError`.
    """
    doc = _load(text, INSTANCE_SCHEMA, "instance")
    type_ids = _name_table(doc["agent_types"], "agent_types")
    house_ids = _name_table(doc["house_types"], "house_types")
    counts = [t["count"] for t in doc["agent_types"]]

    endowment: dict[AgentId, int] = {}
    allocation: dict[AgentId, int] = {}
    for i, rec in enumerate(doc["agents"]):
        where = f"$.agents[{i}]"
        if rec["type"] not in type_ids:
            raise InstanceFormatError(f"{where}.type: unknown agent type {rec['type']!r}")
        type_id = type_ids[rec["type"]]
        if rec["index"] >= counts[type_id]:
            raise InstanceFormatError(
                f"{where}.index: {rec['index']} out of range for type {rec['type']!r} "
                f"with count {counts[type_id]}"
            )
        agent = AgentId(type_id, rec["index"])
        if agent in endowment:
            raise InstanceFormatError(f"{where}: duplicate agent {rec['type']!r} index {rec['index']}")
        for key, target in (("endowment", endowment), ("allocation", allocation)):
            if rec[key] not in house_ids:
                raise InstanceFormatError(f"{where}.{key}: unknown house type {rec[key]!r}")
            target[agent] = house_ids[rec[key]]
    n_records = len(endowment)
    if n_records != sum(counts):
        raise InstanceFormatError(
            f"$.agents: {n_records} agent records but agent type counts sum to {sum(counts)}"
        )

    problem = Problem.build(
        counts,
        [h["count"] for h in doc["house_types"]],
        endowment,
        allocation,
        agent_names=[t["name"] for t in doc["agent_types"]],
        house_names=[h["name"] for h in doc["house_types"]],
    )
    return ensure_valid(problem) if validate else problem


def instance_to_dict(problem: Problem) -> dict:
    return {
        "agent_types": [{"name": t.label, "count": t.count} for t in problem.agent_types],
        "house_types": [{"name": h.label, "count": h.count} for h in problem.house_types],
        "agents": [
            {
                "type": problem.agent_types[a.type_id].label,
                "index": a.index,
                "endowment": problem.house_label(problem.endowment[a]),
                "allocation": problem.house_label(problem.allocation[a]),
            }
            for a in problem.agents
        ],
    }


def serialize_instance(problem: Problem, generator: Mapping | None = None) -> str:
    doc = instance_to_dict(problem)
    if generator is not None:
        doc["generator"] = dict(generator)
    return json.dumps(doc, indent=2) + "\n"


def parse_profile(text: str, problem: Problem) -> PreferenceProfile:
    """Parse ``{"preferences": {type: [house, ...]}}``, favourite first."""
    doc = _load(text, PROFILE_SCHEMA, "profile")
    prefs = doc["preferences"]
    orders = []
    for t in problem.agent_types:
        if t.label not in prefs:
            raise InstanceFormatError(f"profile: no ranking for agent type {t.label!r}")
        ranking = prefs[t.label]
        unknown = [h for h in ranking if h not in {x.label for x in problem.house_types}]
        if unknown:
            raise InstanceFormatError(f"$.preferences.{t.label}: unknown house types {unknown}")
        if sorted(ranking) != sorted(h.label for h in problem.house_types):
            raise InstanceFormatError(
                f"$.preferences.{t.label}: must rank every house type exactly once"
            )
        orders.append([problem.house_id(h) for h in ranking])
    extra = set(prefs) - {t.label for t in problem.agent_types}
    if extra:
        raise InstanceFormatError(f"profile: unknown agent types {sorted(extra)}")
    return PreferenceProfile.from_orders(orders)


def profile_to_dict(problem: Problem, profile: PreferenceProfile) -> dict:
    return {
        "preferences": {
            t.label: [problem.house_label(h) for h in profile.orders[t.id]]
            for t in problem.agent_types
        }
    }


def agent_to_dict(problem: Problem, agent: AgentId) -> dict:
    return {"type": problem.agent_types[agent.type_id].label, "index": agent.index}


def agent_from_dict(problem: Problem, doc: Mapping) -> AgentId:
    return AgentId(problem.agent_type_id(doc["type"]), int(doc["index"]))


def price_to_json(price: Fraction):
    price = Fraction(price)
    return price.numerator if price.denominator == 1 else str(price)


def parse_prices(text: str, problem: Problem) -> dict[int, Fraction]:
    """Parse ``{"prices": {house: number-or-"p/q"}}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"prices: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    raw = doc.get("prices") if isinstance(doc, dict) else None
    if not isinstance(raw, dict):
        raise InstanceFormatError('prices: expected {"prices": {house: price}}')
    prices = {}
    for name, value in raw.items():
        try:
            p = Fraction(value) if not isinstance(value, float) else Fraction(str(value))
        except (TypeError, ValueError):
            raise InstanceFormatError(f"$.prices.{name}: not a rational number: {value!r}") from None
        if p <= 0:
            raise InstanceFormatError(f"$.prices.{name}: prices must be positive")
        prices[problem.house_id(name)] = p
    if len(prices) != problem.n_house_types:
        raise InstanceFormatError("prices: every house type needs a price")
    return prices


def prices_to_dict(problem: Problem, prices: Mapping[int, Fraction]) -> dict:
    return {problem.house_label(h): price_to_json(p) for h, p in sorted(prices.items())}


def coalition_to_dict(problem: Problem, coalition: BlockingCoalition) -> dict:
    return {
        "members": [agent_to_dict(problem, a) for a in coalition.members],
        "sub_allocation": [
            {**agent_to_dict(problem, a), "house": problem.house_label(coalition.sub_allocation[a])}
            for a in coalition.members
        ],
    }


def verdict_to_dict(problem: Problem, verdict, prices: Mapping[int, Fraction] | None = None) -> dict:
    if verdict.rationalizable:
        doc = {
            "rationalizable": True,
            "profile": profile_to_dict(problem, verdict.profile),
            "scc_order": [
                [agent_to_dict(problem, a) for a in comp] for comp in verdict.scc_order.components
            ],
        }
        if prices is not None:
            doc["prices"] = prices_to_dict(problem, prices)
        return doc
    return {
        "rationalizable": False,
        "pair": [agent_to_dict(problem, a) for a in verdict.pair],
        "component": verdict.component_index,
        "cover_cycle": [agent_to_dict(problem, a) for a in verdict.cover_cycle],
    }


def generate_instance(
    seed: int,
    n_agent_types: int,
    n_house_types: int,
    max_multiplicity: int,
    rationalizable_bias: bool = False,
) -> Problem:
    """Random valid instance, deterministic in ``seed`` (Python's Mersenne Twister).

    House multiplicities are drawn from ``1..max_multiplicity`` (raised where
    needed so every agent type has a member) and endowments are a random
    assignment of the house copies. The allocation is an independent random
    assignment, or with ``rationalizable_bias`` a rotation of endowments within
    small blocks of agents of distinct types, which yields rationalizable
    allocations much more often.
    """
    if min(n_agent_types, n_house_types, max_multiplicity) < 1:
        raise ValueError("all generator parameters must be positive")
    if n_agent_types > n_house_types * max_multiplicity:
        raise ValueError(
            f"{n_agent_types} agent types cannot be populated by at most "
            f"{n_house_types * max_multiplicity} houses"
        )
    rng = random.Random(seed)
    house_counts = [rng.randint(1, max_multiplicity) for _ in range(n_house_types)]
    while sum(house_counts) < n_agent_types:
        room = [l for l, c in enumerate(house_counts) if c < max_multiplicity]
        house_counts[rng.choice(room)] += 1
    n_agents = sum(house_counts)

    agent_counts = [1] * n_agent_types
    for _ in range(n_agents - n_agent_types):
        agent_counts[rng.randrange(n_agent_types)] += 1
    agents = [AgentId(i, k) for i, c in enumerate(agent_counts) for k in range(c)]

    copies = [l for l, c in enumerate(house_counts) for _ in range(c)]
    rng.shuffle(copies)
    endowment = dict(zip(agents, copies))

    if rationalizable_bias:
        allocation = _blockwise_rotation(rng, agents, endowment)
    else:
        shuffled = list(copies)
        rng.shuffle(shuffled)
        allocation = dict(zip(agents, shuffled))
    return ensure_valid(Problem.build(agent_counts, house_counts, endowment, allocation))


def _blockwise_rotation(rng: random.Random, agents: list[AgentId], endowment: dict) -> dict:
    remaining = list(agents)
    rng.shuffle(remaining)
    allocation = {}
    while remaining:
        size = rng.randint(1, 3)
        block, types = [], set()
        for a in list(remaining):
            if len(block) == size:
                break
            if a.type_id not in types:
                block.append(a)
                types.add(a.type_id)
                remaining.remove(a)
        for k, a in enumerate(block):
            allocation[a] = endowment[block[(k + 1) % len(block)]]
    return allocation
