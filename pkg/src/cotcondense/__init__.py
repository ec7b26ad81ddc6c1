"""Thought-level condensation, perturbation and MI analysis for CoT datasets."""

__version__ = "0.1.0"

from .condense import (
    STRATEGIES,
    CondensationPlan,
    CondensationReport,
    apply,
    condense_dataset,
    plan_indices,
)
from .dataset import FieldMap, read_dataset, write_dataset
from .digamma import digamma
from .embfile import describe_embm, read_embm, write_embm
from .lexicon import DEFAULT_MARKERS, ReflectionLexicon, count_reflection_tokens
from .mi import EmbeddingMatrix, MIEstimate, estimate_mi, joint_radius, marginal_counts
from .perturb import (
    REGIONS,
    PerturbationConfig,
    PerturbationReport,
    load_sentence_pool,
    perturb_dataset,
    perturb_thought,
    select_perturb_indices,
)
from .stats import StatsReport, compute_stats
from .trace import CoTExample, DEFAULT_DELIMITER, ThoughtTrace, join, segment
from .validate import gaussian_mi_check

__all__ = [
    "__version__",
    "STRATEGIES",
    "REGIONS",
    "DEFAULT_DELIMITER",
    "DEFAULT_MARKERS",
    "CoTExample",
    "ThoughtTrace",
    "segment",
    "join",
    "ReflectionLexicon",
    "count_reflection_tokens",
    "FieldMap",
    "read_dataset",
    "write_dataset",
    "CondensationPlan",
    "CondensationReport",
    "plan_indices",
    "apply",
    "condense_dataset",
    "PerturbationConfig",
    "PerturbationReport",
    "select_perturb_indices",
    "perturb_thought",
    "perturb_dataset",
    "load_sentence_pool",
    "digamma",
    "EmbeddingMatrix",
    "MIEstimate",
    "estimate_mi",
    "joint_radius",
    "marginal_counts",
    "read_embm",
    "write_embm",
    "describe_embm",
    "StatsReport",
    "compute_stats",
    "gaussian_mi_check",
]
