"""Balanced covering: pick s control clones so every probe sees about s/2.

Public surface re-exported here; see the module docstrings for the
objective conventions, the LP relaxations, and the rounding variants.
"""

from .core import (
    CoverSolution,
    Instance,
    ObjectiveKind,
    complement_identity_check,
    compute_degrees,
    evaluate,
)
from .errors import BudgetExceededError, InputError, SolverError
from .formats import (
    dump_result,
    load_result,
    read_matrix,
    result_record,
    write_matrix,
)
from .ingest import (
    AmbiguityPolicy,
    SequenceRecord,
    build_instance,
    matches,
    parse_fasta,
    parse_sequences,
    reverse_complement,
)
from .lp import (
    Formulation,
    FractionalSolution,
    LpProblem,
    build_avg_lp,
    build_lp,
    build_max_lp,
    build_min_lp,
    solve_formulation,
    solve_lp,
    to_lp_text,
)
from .oracle import (
    DEFAULT_BUDGET,
    ExactResult,
    ExcessEstimate,
    estimate_excess_expectation,
    exact_all_objectives,
    exact_optimum,
    perfect_balance_exists,
    size_s_cover_exists,
)
from .generators import (
    GeneratorKind,
    GeneratorSpec,
    SetCoverReduction,
    X3cReduction,
    gen_random,
    gen_set_cover,
    gen_x3c,
    min_set_cover_size,
    replicate_probes,
    set_cover_instance,
    solve_x3c,
    x3c_instance,
)
from .rounding import (
    Algorithm,
    PadPolicy,
    RepairPolicy,
    RoundingConfig,
    RoundingReport,
    derive_trial_seed,
    round_rca,
    round_rca2,
    round_rcm,
    round_rcm2,
    round_rdm,
    solve_end_to_end,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AmbiguityPolicy",
    "BudgetExceededError",
    "CoverSolution",
    "DEFAULT_BUDGET",
    "ExactResult",
    "ExcessEstimate",
    "Formulation",
    "FractionalSolution",
    "GeneratorKind",
    "GeneratorSpec",
    "InputError",
    "Instance",
    "LpProblem",
    "ObjectiveKind",
    "PadPolicy",
    "RepairPolicy",
    "RoundingConfig",
    "RoundingReport",
    "SequenceRecord",
    "SetCoverReduction",
    "SolverError",
    "X3cReduction",
    "build_avg_lp",
    "build_instance",
    "build_lp",
    "build_max_lp",
    "build_min_lp",
    "complement_identity_check",
    "compute_degrees",
    "derive_trial_seed",
    "dump_result",
    "estimate_excess_expectation",
    "evaluate",
    "exact_all_objectives",
    "exact_optimum",
    "gen_random",
    "gen_set_cover",
    "gen_x3c",
    "load_result",
    "matches",
    "min_set_cover_size",
    "parse_fasta",
    "parse_sequences",
    "perfect_balance_exists",
    "read_matrix",
    "replicate_probes",
    "result_record",
    "reverse_complement",
    "round_rca",
    "round_rca2",
    "round_rcm",
    "round_rcm2",
    "round_rdm",
    "set_cover_instance",
    "size_s_cover_exists",
    "solve_end_to_end",
    "solve_formulation",
    "solve_lp",
    "solve_x3c",
    "to_lp_text",
    "write_matrix",
    "x3c_instance",
]
