"""Revealed-preference test for strong-core housing allocations with agent types."""

from core_revealer.equilibrium import construct_prices, verify_ce
from core_revealer.graph import (
    Digraph,
    SccPartition,
    build_big_graph,
    build_small_graph,
    cycle_partition,
    no_inout_check,
    scc_cover_cycle,
    scc_partition,
)
from core_revealer.instances import generate_instance, parse_instance, parse_profile, serialize_instance
from core_revealer.model import (
    AgentId,
    AgentType,
    BlockingCoalition,
    Comparison,
    HouseType,
    PreferenceProfile,
    Problem,
    prefers,
    profile_rank,
    validate,
)
from core_revealer.oracle import is_core, rationalizable_exhaustive, verify_blocking
from core_revealer.rationalize import (
    NotRationalizable,
    Rationalizable,
    adversarial_profile,
    blocking_witness,
    check,
    construct_profile,
    equal_treatment_check,
)

__version__ = "0.1.0"
