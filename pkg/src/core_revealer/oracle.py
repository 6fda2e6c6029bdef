"""Brute-force ground truth for small instances.

Strong-core membership is decided by enumerating every coalition and every
reallocation of the coalition's own endowments; rationalizability by
enumerating every strict type-level profile. Both are exponential and
guarded by size limits.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass

from core_revealer.errors import CoalitionStructureError, GuardExceededError
from core_revealer.model import BlockingCoalition, PreferenceProfile, Problem

MAX_AGENTS = 12
MAX_PROFILES = 10**6
GUARD_ENV = "CORE_REVEALER_GUARD"


def guard_limits() -> tuple[int, int]:
    """Agent and profile-count limits, raised by ``CORE_REVEALER_GUARD=AGENTS[:PROFILES]``."""
    raw = os.environ.get(GUARD_ENV, "").strip()
    if not raw:
        return MAX_AGENTS, MAX_PROFILES
    agents, _, profiles = raw.partition(":")
    try:
        return int(agents), int(profiles) if profiles else MAX_PROFILES
    except ValueError:
        raise GuardExceededError(f"cannot parse {GUARD_ENV}={raw!r}") from None


def _check_agent_guard(problem: Problem) -> None:
    max_agents, _ = guard_limits()
    n = len(problem.agents)
    if n > max_agents:
        raise GuardExceededError(f"{n} agents exceeds the brute-force limit of {max_agents}")


@dataclass(frozen=True)
class CoreResult:
    in_core: bool
    witness: BlockingCoalition | None = None

    def __iter__(self):
        return iter((self.in_core, self.witness))


@dataclass(frozen=True)
class ExhaustiveResult:
    rationalizable: bool
    witness_profile: PreferenceProfile | None = None
    profiles_checked: int = 0

    def __iter__(self):
        return iter((self.rationalizable, self.witness_profile))


def verify_blocking(problem: Problem, profile: PreferenceProfile, coalition: BlockingCoalition) -> bool:
    """True iff ``coalition`` reallocates exactly its own endowments and blocks.

    Raises :class:`CoalitionStructureError` when members are unknown or the
    sub-allocation is not defined exactly on the members.
    """
    known = set(problem.agents)
    members = set(coalition.members)
    if not members:
        raise CoalitionStructureError("empty coalition")
    if len(members) != len(coalition.members):
        raise CoalitionStructureError("duplicate coalition members")
    if not members <= known:
        raise CoalitionStructureError(f"unknown members {sorted(members - known)}")
    if set(coalition.sub_allocation) != members:
        raise CoalitionStructureError("sub-allocation is not defined exactly on the members")
    if any(not 0 <= h < problem.n_house_types for h in coalition.sub_allocation.values()):
        raise CoalitionStructureError("sub-allocation uses an unknown house type")

    if Counter(coalition.sub_allocation.values()) != Counter(problem.endowment[a] for a in members):
        return False
    strict = False
    for a in members:
        new = profile.rank(a.type_id, coalition.sub_allocation[a])
        old = profile.rank(a.type_id, problem.allocation[a])
        if new > old:
            return False
        strict |= new < old
    return strict


def _first_blocking_reallocation(problem, profile, members):
    """Lexicographically first blocking assignment of the members' endowments, or None."""
    supply = Counter(problem.endowment[a] for a in members)
    houses = sorted(supply)
    # Per member: acceptable houses (weakly better than current) in ascending id.
    options = []
    for a in members:
        cur = profile.rank(a.type_id, problem.allocation[a])
        options.append([h for h in houses if profile.rank(a.type_id, h) <= cur])
    if any(not opts for opts in options):
        return None
    current = [problem.allocation[a] for a in members]
    chosen = [0] * len(members)

    def search(k: int, strict: bool):
        if k == len(members):
            return list(chosen) if strict else None
        for h in options[k]:
            if supply[h]:
                supply[h] -= 1
                chosen[k] = h
                found = search(k + 1, strict or h != current[k])
                supply[h] += 1
                if found is not None:
                    return found
        return None

    return search(0, False)


def is_core(problem: Problem, profile: PreferenceProfile) -> CoreResult:
    """Decide strong-core membership by exhaustive coalition enumeration.

    Coalitions are visited by size, then lexicographically; reallocations in
    lexicographic order of house ids. Reallocations giving some member a
    worse house are skipped, which keeps the first blocking witness identical
    to that of the unpruned enumeration.
    """
    _check_agent_guard(problem)
    agents = problem.agents
    for size in range(1, len(agents) + 1):
        for members in itertools.combinations(agents, size):
            assignment = _first_blocking_reallocation(problem, profile, members)
            if assignment is not None:
                return CoreResult(False, BlockingCoalition(members, dict(zip(members, assignment))))
    return CoreResult(True, None)


def all_profiles(n_agent_types: int, n_house_types: int):
    """Every strict profile, each type's ranking in lexicographic permutation order."""
    per_type = list(itertools.permutations(range(n_house_types)))
    for orders in itertools.product(per_type, repeat=n_agent_types):
        yield PreferenceProfile(orders)


def count_profiles(problem: Problem) -> int:
    return math.factorial(problem.n_house_types) ** problem.n_agent_types


def rationalizable_exhaustive(problem: Problem) -> ExhaustiveResult:
    """Search all strict profiles for one placing the allocation in the core."""
    _check_agent_guard(problem)
    _, max_profiles = guard_limits()
    total = count_profiles(problem)
    if total > max_profiles:
        raise GuardExceededError(f"{total} profiles exceeds the enumeration limit of {max_profiles}")
    checked = 0
    for profile in all_profiles(problem.n_agent_types, problem.n_house_types):
        checked += 1
        if is_core(problem, profile).in_core:
            return ExhaustiveResult(True, profile, checked)
    return ExhaustiveResult(False, None, checked)
