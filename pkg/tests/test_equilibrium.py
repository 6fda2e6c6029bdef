from fractions import Fraction

import pytest
from hypothesis import given

from conftest import H1, H2, H3, H4, H5
from core_revealer.equilibrium import construct_prices, scale_prices, verify_ce
from core_revealer.errors import RationalizationError
from core_revealer.graph import SccPartition, build_big_graph, scc_partition
from core_revealer.model import PreferenceProfile, Problem
from core_revealer.rationalize import check, construct_profile
from strategies import problems


@pytest.fixture
def fig2_order(fig2):
    return scc_partition(build_big_graph(fig2))


def test_fig2_prices(fig2, fig2_order):
    prices = construct_prices(fig2, fig2_order)
    assert prices == {H1: 2, H2: 2, H3: 2, H4: 1, H5: 1}
    assert all(isinstance(p, Fraction) for p in prices.values())


def test_single_component_uniform(ex1):
    prices = construct_prices(ex1, scc_partition(build_big_graph(ex1)))
    assert set(prices.values()) == {1}


def test_singleton_components_descend():
    p = Problem.build([1, 1, 1], [1, 1, 1], {(i, 0): i for i in range(3)}, {(i, 0): i for i in range(3)})
    order = scc_partition(build_big_graph(p))
    assert [construct_prices(p, order)[h] for h in range(3)] == [3, 2, 1]


def test_straddling_house_type_rejected(fig2):
    bogus = SccPartition.from_components([fig2.agents[:2], fig2.agents[2:]])
    with pytest.raises(RationalizationError):
        construct_prices(fig2, bogus)


def test_fig2_constructed_is_ce(fig2, fig2_order):
    profile = construct_profile(fig2, fig2_order)
    assert verify_ce(fig2, profile, construct_prices(fig2, fig2_order))


def test_fig2_swapped_prices_fail(fig2, fig2_order):
    profile = construct_profile(fig2, fig2_order)
    swapped = {H1: 1, H2: 1, H3: 1, H4: 2, H5: 2}
    # 1c now affords h2, which type 1 ranks first.
    assert not verify_ce(fig2, profile, swapped)


def test_uniform_prices_with_top_ranked_allocations():
    p = Problem.build([1, 1], [1, 1], {(0, 0): 0, (1, 0): 1}, {(0, 0): 1, (1, 0): 0})
    profile = PreferenceProfile.from_orders([[1, 0], [0, 1]])
    assert verify_ce(p, profile, {0: Fraction(5), 1: Fraction(5)})


def test_scale_rejects_non_positive():
    with pytest.raises(ValueError):
        scale_prices({0: Fraction(1)}, 0)


@given(problems(max_agent_types=4, max_house_types=4))
def test_ce_lemma_and_scale_invariance(problem):
    verdict = check(problem)
    if not verdict.rationalizable:
        return
    for order in (verdict.scc_order, verdict.scc_order.reversed()):
        profile = construct_profile(problem, order)
        prices = construct_prices(problem, order)
        assert verify_ce(problem, profile, prices)
        assert verify_ce(problem, profile, scale_prices(prices, Fraction(3, 2)))
