"""Finite-dimensional topos approach to quantum theory.

Builds the poset of measurement contexts of a finite quantum system, the
spectral presheaf over it, daseinised propositions and operators,
sieve-valued truth values, quantity-value arrows with their group
completion, and a global-section (Kochen-Specker) checker.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    NonCommutingError,
    NotInAlgebraError,
    OrderError,
    PLSyntaxError,
    PreconditionError,
    ToposError,
)
from .hermitian import (
    BorelSet,
    EPS_DEFAULT,
    Interval,
    SpectralDecomposition,
    SpectralFamily,
    eigendecompose,
    matrix_from_json,
    matrix_to_json,
    operator_from_family,
    spectral_family,
    spectral_projection,
)
from .contexts import (
    Context,
    ContextPoset,
    build_poset,
    context_from_atoms,
    contexts_from_rays,
    generate_context,
    intersect,
    is_subalgebra,
    poset_to_dot,
    trivial_context,
)
from .spectral import (
    ClopenSubobject,
    SpectralElement,
    evaluate,
    projection_from_subset,
    restrict_element,
    spectrum,
    subobject,
    subobject_bottom,
    subobject_top,
    subset_from_projection,
    validate_subobject,
)
from .dasein import (
    OuterPresheafElement,
    daseinise_operator,
    daseinise_projection,
    daseinise_subobject,
    outer_global_element,
    represent_proposition,
)
from .logic import (
    OmegaElement,
    Sieve,
    TruthObject,
    TruthReport,
    classify_truth,
    sub_implies,
    sub_join,
    sub_meet,
    sub_neg,
    truth_object,
    truth_value,
)
from .quantity import (
    KElement,
    MonotoneFunction,
    PairedFunction,
    QuantityArrow,
    dispersion,
    k_embed,
    k_from_pair,
    pair_to_k,
    quantity_arrow,
    shift_nonnegative,
)
from .ks import SectionSearchResult, find_global_sections
from . import pl

__version__ = "0.1.0"
