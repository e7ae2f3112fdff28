"""quadclass: class groups of imaginary quadratic fields, exactly.

The package has three layers:

* an exact class-group engine built on reduced binary quadratic forms
  (`quadclass.classgroup`),
* two constructive families of discriminants whose class groups contain
  prescribed non-cyclic subgroups (`quadclass.families`), together with the
  search windows and counting boxes that drive them,
* local density and square-free sieve tooling for the polynomial values the
  families produce (`quadclass.density`).

Everything is integer-exact; floats only appear in rendered figures.
"""

from .arith import (
    Factorization,
    crt_solve,
    factorize,
    iroot,
    is_prime,
    is_squarefree,
    kronecker,
    mobius,
    mobius_sieve,
    primes_up_to,
    sqrt_mod,
    squarefree_sieve,
)
from .classgroup import (
    ClassGroup,
    Discriminant,
    QuadForm,
    class_number,
    compose,
    element_order,
    embeds,
    enumerate_reduced_forms,
    form_pow,
    fundamental_discriminant,
    group_structure,
    identity_form,
    inverse_form,
    is_fundamental_discriminant,
    reduce_form,
    reduced_form_tables,
    sweep_structures,
    two_rank_genus,
)
from .density import (
    CensusResult,
    DensityReport,
    MomentBound,
    ScanMoments,
    census_embeddings,
    euler_product_partials,
    local_zeros,
    rank2_moments,
    representation_moments,
    squarefree_value_count,
)
from .errors import BudgetError, ContractViolation, UsageError
from .families import (
    Admissibility,
    CongruenceSpec,
    CountBox,
    Rank2Instance,
    Rank2Verification,
    SolutionTriple,
    TworankVerification,
    WindowParams,
    WitnessReport,
    admissible_rank2,
    congruence_spec,
    count_representations,
    discriminant_rank2,
    poly_squarefree_witness,
    power_sum,
    rank2_count_box,
    rank2_forms,
    rank2_instance,
    rank2_polynomial,
    rank2_witnesses,
    scan_rank2,
    search_tworank,
    tworank_target,
    verify_rank2,
    verify_tworank,
    window_representation_counts,
    windows,
)
from .polynomials import IntPolynomial

__version__ = "0.1.0"

__all__ = [
    "Admissibility",
    "BudgetError",
    "CensusResult",
    "ClassGroup",
    "CongruenceSpec",
    "ContractViolation",
    "CountBox",
    "DensityReport",
    "Discriminant",
    "Factorization",
    "IntPolynomial",
    "MomentBound",
    "QuadForm",
    "Rank2Instance",
    "Rank2Verification",
    "ScanMoments",
    "SolutionTriple",
    "TworankVerification",
    "UsageError",
    "WindowParams",
    "WitnessReport",
    "admissible_rank2",
    "census_embeddings",
    "class_number",
    "compose",
    "congruence_spec",
    "count_representations",
    "crt_solve",
    "discriminant_rank2",
    "element_order",
    "embeds",
    "enumerate_reduced_forms",
    "euler_product_partials",
    "factorize",
    "form_pow",
    "fundamental_discriminant",
    "group_structure",
    "identity_form",
    "inverse_form",
    "iroot",
    "is_fundamental_discriminant",
    "is_prime",
    "is_squarefree",
    "kronecker",
    "local_zeros",
    "mobius",
    "mobius_sieve",
    "poly_squarefree_witness",
    "power_sum",
    "primes_up_to",
    "rank2_count_box",
    "rank2_forms",
    "rank2_instance",
    "rank2_moments",
    "rank2_polynomial",
    "rank2_witnesses",
    "reduce_form",
    "reduced_form_tables",
    "representation_moments",
    "scan_rank2",
    "search_tworank",
    "sqrt_mod",
    "squarefree_sieve",
    "squarefree_value_count",
    "sweep_structures",
    "tworank_target",
    "two_rank_genus",
    "verify_rank2",
    "verify_tworank",
    "window_representation_counts",
    "windows",
    "__version__",
]
