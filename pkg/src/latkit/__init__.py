"""latkit: exact computation with finite lattices.

Structure analysis (atomisticity, biatomicity, join-semidistributivity,
lower-boundedness, join-dependency), atom-preserving extension
constructions, convex-geometry witness generators, and a small
quasi-identity language with an exhaustive evaluator.
"""

__version__ = "0.1.0"

from .core import (
    EmbeddingMap,
    EmptyInterval,
    FiniteLattice,
    LatticeError,
    NotALattice,
    NotAPoset,
    NotBounded,
    NotInjective,
    Preservation,
    PreconditionFailed,
    verify_embedding,
)
from .analysis import (
    BiatomicityProblem,
    DependencyRelation,
    NoLeastDecomposition,
    biatomicity_problems,
    ell,
    is_atomic,
    is_atomistic,
    is_biatomic,
    is_join_semidistributive,
    is_lower_bounded,
    join_dependency,
    minimal_decomposition,
)
from .extend import (
    BadApex,
    BadTriple,
    BiatomizationStep,
    ClosureOperator,
    ExtensionPair,
    MinimalityFailed,
    MissingFilter,
    NotJsdBase,
    NotMeetClosed,
    OneAtomExtension,
    ReValidationFailed,
    SeparationFailed,
    atom_restriction,
    biatomic_completion,
    jsd_extension_criteria,
    make_extension_pair,
    minimal_apex,
    one_atom_extension,
    partial_biatomization,
    separating_reembedding,
    solve_one_problem,
)

__all__ = [
    "BadApex",
    "BadTriple",
    "BiatomicityProblem",
    "BiatomizationStep",
    "ClosureOperator",
    "DependencyRelation",
    "EmbeddingMap",
    "EmptyInterval",
    "ExtensionPair",
    "FiniteLattice",
    "LatticeError",
    "MinimalityFailed",
    "MissingFilter",
    "NoLeastDecomposition",
    "NotALattice",
    "NotAPoset",
    "NotBounded",
    "NotInjective",
    "NotJsdBase",
    "NotMeetClosed",
    "OneAtomExtension",
    "Preservation",
    "PreconditionFailed",
    "ReValidationFailed",
    "SeparationFailed",
    "atom_restriction",
    "biatomic_completion",
    "biatomicity_problems",
    "ell",
    "is_atomic",
    "is_atomistic",
    "is_biatomic",
    "is_join_semidistributive",
    "is_lower_bounded",
    "jsd_extension_criteria",
    "join_dependency",
    "make_extension_pair",
    "minimal_apex",
    "minimal_decomposition",
    "one_atom_extension",
    "partial_biatomization",
    "separating_reembedding",
    "solve_one_problem",
    "verify_embedding",
    "__version__",
]
