import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import A1a, A1b, A1c, A2b, H1, H2, H4, H5
from core_revealer.errors import CoalitionStructureError, GuardExceededError
from core_revealer.graph import build_big_graph, scc_partition
from core_revealer.instances import generate_instance
from core_revealer.model import AgentId, BlockingCoalition, PreferenceProfile, Problem
from core_revealer.oracle import (
    GUARD_ENV,
    all_profiles,
    count_profiles,
    is_core,
    rationalizable_exhaustive,
    verify_blocking,
)
from core_revealer.rationalize import check, construct_profile
from strategies import problems, profiles_for


def naive_first_block(problem, profile):
    """Unpruned enumeration: every subset, every distinct reallocation."""
    agents = problem.agents
    for size in range(1, len(agents) + 1):
        for members in itertools.combinations(agents, size):
            endowed = [problem.endowment[a] for a in members]
            for houses in sorted(set(itertools.permutations(endowed))):
                ranks_new = [profile.rank(a.type_id, h) for a, h in zip(members, houses)]
                ranks_old = [profile.rank(a.type_id, problem.allocation[a]) for a in members]
                if all(n <= o for n, o in zip(ranks_new, ranks_old)) and ranks_new != ranks_old:
                    return dict(zip(members, houses))
    return None


@pytest.fixture
def fig2_profile(fig2):
    return construct_profile(fig2, scc_partition(build_big_graph(fig2)))


class TestVerifyBlocking:
    def test_example1_individual_rationality(self, ex1):
        profile = PreferenceProfile.from_orders([[H1, H2]])
        assert verify_blocking(ex1, profile, BlockingCoalition((A1b,), {A1b: H1}))

    def test_everyone_keeps_allocation_is_not_blocking(self, fig2, fig2_profile):
        coalition = BlockingCoalition(tuple(fig2.agents), dict(fig2.allocation))
        assert not verify_blocking(fig2, fig2_profile, coalition)

    def test_fig2_right_component_swap(self, fig2, fig2_profile):
        coalition = BlockingCoalition((A1c, A2b), {A1c: H5, A2b: H4})
        assert not verify_blocking(fig2, fig2_profile, coalition)

    def test_multiset_condition(self, ex1):
        profile = PreferenceProfile.from_orders([[H1, H2]])
        # 1a owns h2, cannot take h1 alone.
        assert not verify_blocking(ex1, profile, BlockingCoalition((A1a,), {A1a: H1}))

    def test_structural_errors(self, ex1):
        profile = PreferenceProfile.from_orders([[H1, H2]])
        with pytest.raises(CoalitionStructureError):
            verify_blocking(ex1, profile, BlockingCoalition((A1a,), {A1b: H1}))
        with pytest.raises(CoalitionStructureError):
            verify_blocking(ex1, profile, BlockingCoalition((AgentId(5, 0),), {AgentId(5, 0): H1}))
        with pytest.raises(CoalitionStructureError):
            verify_blocking(ex1, profile, BlockingCoalition((), {}))


class TestIsCore:
    def test_fig2_constructed_profile(self, fig2, fig2_profile):
        result = is_core(fig2, fig2_profile)
        assert result.in_core and result.witness is None

    @pytest.mark.parametrize("order", [[H1, H2], [H2, H1]])
    def test_example1_any_profile(self, ex1, order):
        in_core, witness = is_core(ex1, PreferenceProfile.from_orders([order]))
        assert not in_core
        assert len(witness.members) == 1

    def test_single_agent(self):
        p = Problem.build([1], [1], {(0, 0): 0}, {(0, 0): 0})
        assert is_core(p, PreferenceProfile.from_orders([[0]])).in_core

    def test_size_guard(self, monkeypatch):
        n = 13
        p = Problem.build([n], [n], {(0, k): 0 for k in range(n)}, {(0, k): 0 for k in range(n)})
        profile = PreferenceProfile.from_orders([[0]])
        with pytest.raises(GuardExceededError):
            is_core(p, profile)
        monkeypatch.setenv(GUARD_ENV, "13")
        assert is_core(p, profile).in_core

    @settings(max_examples=80)
    @given(st.data())
    def test_matches_unpruned_enumeration(self, data):
        problem = data.draw(problems(max_house_types=3, max_multiplicity=2))
        profile = data.draw(profiles_for(problem))
        expected = naive_first_block(problem, profile)
        result = is_core(problem, profile)
        assert result.in_core == (expected is None)
        if expected is not None:
            assert dict(result.witness.sub_allocation) == expected
            assert verify_blocking(problem, profile, result.witness)

    @settings(max_examples=80)
    @given(st.data())
    def test_strengthening_a_member_keeps_blocking(self, data):
        problem = data.draw(problems())
        profile = data.draw(profiles_for(problem))
        result = is_core(problem, profile)
        if result.in_core:
            return
        witness = result.witness
        members = witness.members
        lonely = [a for a in members if sum(b.type_id == a.type_id for b in members) == 1]
        if not lonely:
            return
        a = data.draw(st.sampled_from(lonely))
        h = witness.sub_allocation[a]
        orders = [list(o) for o in profile.orders]
        orders[a.type_id].remove(h)
        orders[a.type_id].insert(0, h)
        assert verify_blocking(problem, PreferenceProfile.from_orders(orders), witness)


class TestExhaustive:
    def test_example1(self, ex1):
        result = rationalizable_exhaustive(ex1)
        assert not result.rationalizable
        assert result.profiles_checked == 2

    def test_fig2(self, fig2, monkeypatch):
        # (5!)^3 profiles exceed the default enumeration guard.
        with pytest.raises(GuardExceededError):
            rationalizable_exhaustive(fig2)
        monkeypatch.setenv(GUARD_ENV, "12:2000000")
        result = rationalizable_exhaustive(fig2)
        assert result.rationalizable
        assert is_core(fig2, result.witness_profile).in_core

    def test_cross_swap(self):
        p = Problem.build([1, 1], [1, 1], {(0, 0): 0, (1, 0): 1}, {(0, 0): 1, (1, 0): 0})
        assert len(list(all_profiles(2, 2))) == 4
        ok, profile = rationalizable_exhaustive(p)
        assert ok
        assert profile.favourite(0) == 1 and profile.favourite(1) == 0

    def test_profile_enumeration_is_complete(self):
        profiles = list(all_profiles(2, 3))
        assert len(profiles) == 36 == len(set(profiles))


class TestCheckAgainstOracle:
    @settings(max_examples=120, deadline=None)
    @given(problems(max_agent_types=3, max_house_types=3, max_multiplicity=2))
    def test_check_matches_exhaustive(self, problem):
        verdict = check(problem)
        result = rationalizable_exhaustive(problem)
        assert result.rationalizable == verdict.rationalizable
        if not verdict.rationalizable:
            assert result.profiles_checked == count_profiles(problem)

    @pytest.mark.parametrize("seed", range(40))
    def test_soundness_up_to_eight_agents(self, seed):
        problem = generate_instance(500 + seed, 1 + seed % 4, 4, 2, rationalizable_bias=True)
        assert len(problem.agents) <= 8
        verdict = check(problem)
        if not verdict.rationalizable:
            return
        for order in (verdict.scc_order, verdict.scc_order.reversed()):
            assert is_core(problem, construct_profile(problem, order)).in_core
