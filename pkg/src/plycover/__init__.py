"""Minimum ply cover of points with axis-parallel unit squares.

The ply of a chosen square set is the largest number of squares sharing
a common point.  This package picks covering subsets that keep the ply
low: an exact greedy table solver for points on one side of a stabbing
line, a two-sided wrapper, a unit-slab solver with structural
validators, and a full decomposition pipeline, together with an
exhaustive oracle, instance tooling and a CLI.
"""

__version__ = "0.1.0"

from .geometry import (
    CLIP_NONE,
    ClipRegion,
    PlyRegion,
    Point,
    UnitSquare,
    compute_ply,
    contains,
    representative_region,
    square_meets_line,
)
from .greedy import (
    CoverEntry,
    GreedyCriteria,
    GreedyTable,
    best_cell,
    best_entry,
    build_line_table,
    compare_covers,
    compute_entry,
    fill_table,
    solve_one_side,
    trace_parents,
)
from .slab import (
    CliqueType,
    SlabContext,
    ViolationReport,
    build_slab_table,
    classify_clique,
    exclusive_points,
    solve_slab,
    validate_structure,
)
from .decompose import (
    MergedCover,
    SlabAssignment,
    global_ply,
    partition_slabs,
    solve_full,
    solve_two_sided,
    split_by_line,
)
from .verify import (
    BoundReport,
    OracleResult,
    brute_force_opt,
    check_bounds,
    is_feasible,
    prune_redundant,
)
from .instances import (
    GenParams,
    Instance,
    Solution,
    gen_general_instance,
    gen_line_instance,
    gen_slab_instance,
    read_instance,
    read_solution,
    validate_instance,
    write_instance,
    write_solution,
)

__all__ = [
    "__version__",
    "CLIP_NONE",
    "ClipRegion",
    "PlyRegion",
    "Point",
    "UnitSquare",
    "compute_ply",
    "contains",
    "representative_region",
    "square_meets_line",
    "CoverEntry",
    "GreedyCriteria",
    "GreedyTable",
    "best_cell",
    "best_entry",
    "build_line_table",
    "compare_covers",
    "compute_entry",
    "fill_table",
    "solve_one_side",
    "trace_parents",
    "CliqueType",
    "SlabContext",
    "ViolationReport",
    "build_slab_table",
    "classify_clique",
    "exclusive_points",
    "solve_slab",
    "validate_structure",
    "MergedCover",
    "SlabAssignment",
    "global_ply",
    "partition_slabs",
    "solve_full",
    "solve_two_sided",
    "split_by_line",
    "BoundReport",
    "OracleResult",
    "brute_force_opt",
    "check_bounds",
    "is_feasible",
    "prune_redundant",
    "GenParams",
    "Instance",
    "Solution",
    "gen_general_instance",
    "gen_line_instance",
    "gen_slab_instance",
    "read_instance",
    "read_solution",
    "validate_instance",
    "write_instance",
    "write_solution",
]
