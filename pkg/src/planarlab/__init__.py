"""planarlab: exact analytic combinatorics of planar maps and planar graphs.

The package builds the full Tutte-style decomposition grammar for planar maps
and labelled planar graphs in exact rational arithmetic, evaluates the
associated asymptotic constants to high precision, samples the random
structures through conditioned simply generated trees, and statistically
verifies the condensation / stable local limit predictions at desk scale.
"""

from .series import (Convention, Q, Series, SeriesError, WeightSequence,
                     fixed_point_y, solve_uv_system)
from .grammar import (GrammarError, GrammarTable, OffspringLaw,
                      build_f01_bar, build_graph_chain, build_map_chain,
                      map_count_series, offspring_law, weight_sequence)
from .constants import ConstantsReport, map_constants, graph_constants, solve_u0

__all__ = [
    "Convention", "Q", "Series", "SeriesError", "WeightSequence",
    "fixed_point_y", "solve_uv_system",
    "GrammarError", "GrammarTable", "OffspringLaw",
    "build_f01_bar", "build_graph_chain", "build_map_chain",
    "map_count_series", "offspring_law", "weight_sequence",
    "ConstantsReport", "map_constants", "graph_constants", "solve_u0",
]

__version__ = "0.1.0"
