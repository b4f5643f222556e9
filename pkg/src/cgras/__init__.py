"""Symbolic achievable-rate-region generator for chain-graph coding schemes."""

__version__ = "0.1.0"

from .network import (  # noqa: F401
    MessageId, Network, NodeSet, RateVector, SplitMatrix,
    apply_split, mid, split_legal, validate_split_matrix,
)
from .graph import (  # noqa: F401
    Cgras, OrientedCgras,
    add_b_edge, add_s_edge, check_assumptions, close_assumptions,
    decoder_subgraph, equivalent_adg, factorization, graph,
)
from .entropy import (  # noqa: F401
    EntropyExpr, VarRef, canonicalize, expr_equal, mutual_info, render, uref, yref,
)
from .bounds import (  # noqa: F401
    Inequality, RateVar,
    binning_bounds_cl, binning_bounds_mcl,
    decoding_bounds_jd, decoding_bounds_sd,
    enumerate_decoding_sets, enumerate_encoding_sets, prune_non_error_bounds,
)
from .polyhedra import (  # noqa: F401
    LinearSystem, Region, Row, assemble_region, fme_eliminate,
    region_implies, regions_equivalent, remove_redundant,
)
from .fixtures import FIXTURES, fixture  # noqa: F401
