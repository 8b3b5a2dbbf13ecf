"""Exact simplicial Lusternik-Schnirelmann category with checkable witnesses."""

__version__ = "0.1.0"

from .category import (
    Cover,
    FactorizationWitness,
    build_factorization,
    diagonal,
    gscat_exact,
    gscat_upper,
    product_map,
    projection,
    scat,
    scat_map,
    subspace_scat,
    verify_cover,
    verify_factorization,
)
from .certificates import check_certificate
from .complex import (
    SimplicialComplex,
    Subcomplex,
    all_simplices,
    are_isomorphic,
    build_complex,
    categorical_product,
    cone,
    generated_subcomplex,
    is_connected,
    standard_complex,
    subcomplex_intersection,
    subcomplex_union,
)
from .contiguity import (
    ContiguityChain,
    CoreData,
    SimplicialMap,
    compose,
    constant_map,
    core,
    identity,
    is_contiguous,
    is_null_class,
    paste_maps,
    restrict,
    same_contiguity_class,
    same_strong_homotopy_type,
    validate_map,
    verify_chain,
)
from .corpus import Corpus, enumerate_corpus
from .errors import ResourceLimit, SimpcatError
from .fibration import UNBOUNDED, es_bounded, fiber, is_fibration_over
from .finite_space import (
    Fence,
    FiniteSpace,
    MonotoneMap,
    cat_map,
    cat_space,
    chi_map,
    face_poset,
    homotopic,
    k_map,
    order_complex,
)
from .search import SearchLimits
