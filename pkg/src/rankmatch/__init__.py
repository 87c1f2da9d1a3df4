"""Stable b-matching of globally ranked peers.

Library + CLI to compute stable collaboration graphs under a global
peer ranking, simulate their decentralized dynamics (initiatives,
healing, churn), analyze the resulting cluster/stratification
structure, predict pairing probabilities on random acceptance graphs,
and derive expected BitTorrent-style share ratios from an upload
bandwidth distribution.
"""

from .backend import BACKEND
from .core import (
    AcceptanceGraph,
    Configuration,
    Instance,
    Ranking,
    SlotCapacities,
    blocking_pairs,
    disorder,
    distance,
    is_blocking_pair,
    is_stable,
)
from .generators import (
    gen_complete,
    gen_erdos_renyi,
    sample_capacities_constant,
    sample_capacities_normal,
)
from .solver import oracle_stable, replay_optimal_schedule, stable_configuration

__version__ = "0.1.0"

__all__ = [
    "AcceptanceGraph",
    "BACKEND",
    "Configuration",
    "Instance",
    "Ranking",
    "SlotCapacities",
    "blocking_pairs",
    "disorder",
    "distance",
    "gen_complete",
    "gen_erdos_renyi",
    "is_blocking_pair",
    "is_stable",
    "oracle_stable",
    "replay_optimal_schedule",
    "sample_capacities_constant",
    "sample_capacities_normal",
    "stable_configuration",
]
