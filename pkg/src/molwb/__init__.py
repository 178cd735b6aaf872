"""molwb: a workbench for identities over modular ortholattices.

Exact subspace lattices L(F^d) over Q, Q(i), and GF(p); explicit finite
models validated against the MOL axioms; generators for dimension and
test-set identity families; brute-force and randomized exact refutation;
and a polynomial feasibility backend with an SMT-LIB2 emitter.
"""

from .checker import (
    BudgetExceededError,
    CheckError,
    HoldsResult,
    RefutationReport,
    SatReport,
    SubspaceWitness,
    eval_term,
    holds,
    refute_bounded,
    refute_random,
    satisfiable_bounded,
    test_set_check,
    verify_witness,
)
from .fields import Q, QI, Field, FieldError, GaussianRational, GFElem, field_by_name, gf
from .feas import (
    FeasError,
    PenaltyParams,
    PolySystem,
    SolveOutcome,
    emit,
    encode,
    gradient,
    parse_system,
    penalty_solve,
    rationalize_and_verify,
    residual,
    smt_syntax_check,
    solve_identity,
)
from .generators import (
    DiamondTerms,
    Frame,
    GeneratorError,
    delta_diamond,
    delta_distributive,
    diamond_canonical,
    diamond_terms,
    frame_canonical,
    is_diamond,
    s_term,
    sigma,
    sigma_witness,
)
from .models import (
    FiniteModel,
    ModelError,
    ValidationReport,
    catalog,
    catalog_upto,
    direct_product,
    height,
    interval_mol,
    pentagon,
    trivial,
)
from .subspaces import (
    AnisotropyVerdict,
    Form,
    Subspace,
    SubspaceError,
    SubspaceLattice,
    check_anisotropic,
    ortho,
    random_subspace,
    realify,
    rref_matrix,
)
from .terms import (
    Comp,
    Identity,
    Join,
    Meet,
    One,
    Term,
    TermSyntaxError,
    Var,
    Zero,
    parse_identity,
    parse_term,
    print_term,
    term_length,
    to_tautology,
    vars_of,
)

__version__ = "0.1.0"
