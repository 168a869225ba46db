"""Kan extensions, Kan-injectivity and Kan-injective reflections over finite posets."""

from .errors import (
    BaseMismatch,
    BudgetExceeded,
    CycleDetected,
    DomainMismatch,
    DuplicateElement,
    InvariantViolation,
    KanError,
    NotConverged,
    NotMonotone,
    NotParallel,
    ParseError,
    StageTooLarge,
    TargetNotInjective,
    UnknownCommand,
    ValidationError,
)
from .poset import (
    Comparison,
    FinPoset,
    MonotoneMap,
    MorphismFlags,
    QuotientResult,
    classify_morphism,
    compare_maps,
    compose,
    cotensor,
    dualize,
    enumerate_monotone_maps,
    hom_poset,
    quotient_by_relations,
    validate_poset,
)
from .constructions import (
    ColimitSquare,
    InserterResult,
    WidePushoutResult,
    cocomma,
    coinserter,
    coproduct,
    ProductResult,
    CoproductResult,
    equalizer,
    inserter,
    product,
    pairing,
    product,
    pushout,
    wide_pushout,
)
from .kan import (
    ExtensionVerdict,
    InjectivityReport,
    Verdict,
    greatest_extension,
    is_left_kan_injective_morphism,
    is_left_kan_injective_object,
    is_orthogonal,
    is_weakly_left_kan_injective,
    least_extension,
    membership,
    pointwise_join_extension,
)
from .reflection import (
    ReflectionTrace,
    RegistryEntry,
    even_step,
    extract_lan,
    induce_morphism,
    odd_step,
    run_reflection,
)

from .monads import (
    AlgebraVerdict,
    CoprojectionWitness,
    LowersetAlgebra,
    algebra_laws_check,
    algebra_structure,
    coprojection_closure_check,
    is_coprojection,
    kz_check,
    lowerset,
    lowerset_on_map,
    monad_laws_check,
    units_injectivity_crosscheck,
)
from .oracles import (
    all_posets,
    downset_completion,
    find_isomorphism,
    free_join_semilattice,
    posets_up_to,
    verify_reflection,
    weak_equals_strong_probe,
)
from .textformat import parse, serialize

__version__ = "0.1.0"
