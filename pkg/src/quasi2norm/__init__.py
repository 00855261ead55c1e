"""Exact (quasi) 2-norms on Q^3, axiom verification, and the completion by
classes of Cauchy sequences."""

from .algebra import Interval, VectorQ, cross3, interval_root, interval_sqrt, norm_sq_cross
from .completion import (
    CompletionElem,
    X0Elem,
    approximate_by_X0,
    chat_combine,
    chat_norm,
    class_equal,
    complete_limit,
    embed,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    InconclusiveSampling,
    IndexBudgetExceeded,
    InvalidCertificate,
    ParameterRangeError,
)
from .norms import TwoNormSpec, certified_K, make_space, norm_eval
from .sequences import (
    Const,
    Diff,
    EquivVerdict,
    Geometric,
    NewtonSqrt,
    Scale,
    SeqSpec,
    Sum,
    are_equivalent,
    combine_seqs,
    limit_norm,
    modulus,
    seq_at,
)
from .verify import (
    AxiomReport,
    SamplerConfig,
    estimate_K,
    probe_uniform_continuity,
    recheck_witness,
    verify_axioms,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "CompletionElem",
    "Const",
    "Diff",
    "DimensionMismatch",
    "DomainError",
    "EquivVerdict",
    "Geometric",
    "InconclusiveSampling",
    "IndexBudgetExceeded",
    "Interval",
    "InvalidCertificate",
    "NewtonSqrt",
    "ParameterRangeError",
    "SamplerConfig",
    "Scale",
    "SeqSpec",
    "Sum",
    "TwoNormSpec",
    "VectorQ",
    "X0Elem",
    "approximate_by_X0",
    "are_equivalent",
    "certified_K",
    "chat_combine",
    "chat_norm",
    "class_equal",
    "combine_seqs",
    "complete_limit",
    "cross3",
    "embed",
    "estimate_K",
    "interval_root",
    "interval_sqrt",
    "limit_norm",
    "make_space",
    "modulus",
    "norm_eval",
    "norm_sq_cross",
    "probe_uniform_continuity",
    "recheck_witness",
    "seq_at",
    "verify_axioms",
]
