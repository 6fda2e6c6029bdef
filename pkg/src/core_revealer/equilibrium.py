"""Supporting competitive-equilibrium prices for rationalized allocations."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from core_revealer.errors import RationalizationError
from core_revealer.graph import SccPartition
from core_revealer.model import PreferenceProfile, Problem

PriceVector = Mapping[int, Fraction]


def construct_prices(problem: Problem, order: SccPartition) -> dict[int, Fraction]:
    """Integer prices descending along ``order``: houses of component m (0-based) cost M - m."""
    n = len(order)
    prices: dict[int, Fraction] = {}
    for m, comp in enumerate(order.components):
        for a in comp:
            h = problem.endowment[a]
            price = Fraction(n - m)
            if prices.setdefault(h, price) != price:
                raise RationalizationError(
                    f"copies of house {problem.house_label(h)} lie in more than one component"
                )
    missing = [h.label for h in problem.house_types if h.id not in prices]
    if missing:
        raise RationalizationError(f"order does not cover the owners of {missing}")
    return prices


def verify_ce(problem: Problem, profile: PreferenceProfile, prices: PriceVector) -> bool:
    """Every agent's house is affordable from its endowment and best among affordable ones."""
    for a in problem.agents:
        budget = prices[problem.endowment[a]]
        got = problem.allocation[a]
        if prices[got] > budget:
            return False
        got_rank = profile.rank(a.type_id, got)
        for h in problem.house_types:
            if prices[h.id] <= budget and profile.rank(a.type_id, h.id) < got_rank:
                return False
    return True


def scale_prices(prices: PriceVector, factor) -> dict[int, Fraction]:
    factor = Fraction(factor)
    if factor <= 0:
        raise ValueError("price scale factor must be positive")
    return {h: p * factor for h, p in prices.items()}
