"""zsinv: a workbench for product-one (zero-sum) invariants of small finite
groups, with exact pruned search, certificate extraction and closed-form
verification suites."""

from .groups import (
    AutomorphismCapError,
    FiniteGroup,
    GroupConstructionError,
    GroupMap,
    automorphisms,
    dihedral_phi,
    dihedral_psi,
    generating_set,
    identity_map,
    make_abelian,
    make_cyclic,
    make_dihedral,
    make_metacyclic,
    validate_group,
)
from .sequences import (
    GroupMismatchError,
    OrderedTuple,
    Sequence,
    SequenceFormatError,
    canonical_form,
    enumerate_multisets,
)
from .products import (
    Certificate,
    EngineLimitError,
    ProductTable,
    abelian_subset_products,
    find_subsequence,
    full_products,
    full_signed_products,
    is_dn_free,
    is_k_product_free,
    is_minimal_product_sequence,
    is_pm_product_free,
    is_product_free,
    product_set,
    sigma,
    sigma_dn,
    sigma_even,
    sigma_k,
    sigma_le,
    sigma_odd,
    sigma_pm,
    subset_products,
)
from .extract import (
    BlockDecomposition,
    CauchyDavenportReport,
    ExtractionPreconditionError,
    NotApplicableError,
    SignedSubset,
    block_zero_sum_select,
    cauchy_davenport_check,
    dihedral_equal_pairs,
    dihedral_even_extract,
    dpm_extract,
    greedy_decompose,
    odd_pm_extract,
    signed_to_product,
    signed_zero_mod,
)
from .search import (
    FormulaRow,
    FreenessRule,
    InvariantResult,
    SearchStats,
    classify_free,
    compute_davenport,
    compute_dpm,
    compute_s_exact,
    compute_s_leq,
    compute_sdn,
    dn_rule,
    exact_rule,
    leq_rule,
    pm_free_rule,
    predicted_s_exact,
    predicted_s_leq,
    predicted_sdn,
    product_free_rule,
    verify_formula,
)
from .witnesses import (
    WitnessValidationError,
    dihedral_coprime_witness,
    dihedral_main_witness,
    dihedral_nn_witness,
    generic_identity_pad,
    inverse_family,
    metacyclic_witness,
)

__version__ = "0.1.0"
