"""Restricted Lie algebra presentations, the catalog, and operations on them."""

from .catalog import algebra_from_name, direct_sum, from_matrices, gl, make_catalog_algebra, sl, sp4, torus
from .ops import (
    InducedOrbit,
    JordanPair,
    ad,
    bracket,
    centralizer_of_element,
    centralizer_of_form,
    form_matrix,
    induced_orbit_dim,
    is_nilpotent_element,
    is_regular_form,
    jacobson_check,
    kappa,
    kappa_inv,
    levi_subalgebra,
    lie_generators,
    p_power,
    permute_basis,
    restrict_form,
    semisimple_certificate,
    stabilizer_dim,
    subalgebra_presentation,
    verify_jordan,
    zero_central_part,
)
from .presentation import (
    AxiomResult,
    LiePresentation,
    ValidationReport,
    ad_basis_matrices,
    from_json,
    to_json,
    validate_presentation,
)
