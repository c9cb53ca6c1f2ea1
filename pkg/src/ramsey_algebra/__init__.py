"""Decision procedures and witness constructions for Ramsey algebras."""
from .algebra import (
    FiniteAlgebra,
    Operation,
    all_subuniverses,
    from_function,
    generated_subuniverse,
    idempotents,
    make_algebra,
    validate_algebra,
)
from .decide import (
    ResidueUnarySystem,
    Verdict,
    build_discriminating_partition,
    crosscheck_finite_theorem,
    decide_finite_ramsey,
    decide_unary_finite,
    decide_unary_residue,
    katetov_partition,
)
from .monotone import (
    MonotonePolynomial,
    build_witness,
    check_sum_product_distinct,
    evaluate_poly,
    f2_reduce,
    mp_add,
    mp_mul,
    nonhomogeneity_report,
    solve_forbidden_b,
    translate_term_to_poly,
)
from .reductions import (
    ReductionSchedule,
    apply_schedule,
    finite_reductions,
    fs_oracle,
    is_reduction_prefix,
    search_homogeneous,
)
from .terms import (
    Interpretation,
    Node,
    Signature,
    X,
    enumerate_terms,
    evaluate_term,
    is_orderly_definable,
    term_arity,
)

__version__ = "0.1.0"
