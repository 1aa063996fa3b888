"""Numerical toolkit for quasi-unitary groups of seminormed *-algebras.

The package builds concrete seminormed *-algebras, the quasi-product group
structure on them, an inverse-square-root functional calculus with its
quasi-polar retraction, defect diagnostics for asymptotic families of maps,
threshold-based retraction of such families to quasi-unitary-valued maps,
and reparameterized composition with an explicit functoriality check.
"""

from .algebra import (
    Algebra,
    Element,
    LevelRangeError,
    MatrixAlgebra,
    NotQuasiInvertibleError,
    OwnerMismatchError,
    PathAlgebra,
    QuasikitError,
    SeminormFamily,
    SmoothCircleAlgebra,
    canonical_distance,
    element_from_json,
    element_to_json,
    is_quasi_unitary,
    matrix_algebra,
    path_algebra,
    quasi_inverse,
    quasi_inverse_neumann,
    quasi_product,
    smooth_circle_algebra,
    star_product_margin,
)
from .funcalc import (
    DomainError,
    SqrtDomain,
    in_domain,
    inv_sqrt,
    inv_sqrt_lipschitz_bound,
    inv_sqrt_series,
    quasi_polar,
    verify_inv_sqrt_properties,
)
from .families import (
    AsymptoticFamily,
    DefectReport,
    SamplingGrid,
    Tolerances,
    asymptotic_continuity_modulus,
    boundedness_profile,
    check_morphism,
    compression_family,
    defect_add,
    defect_mul,
    defect_scalar,
    defect_star,
    exact_hom,
    homotopy_family,
    perturbed_hom,
    toeplitz_family,
    uniform_grid,
)
from .retract import (
    QuasiUnitaryNet,
    RetractionDomainError,
    ThresholdFunction,
    ThresholdNotFoundError,
    build_threshold_function,
    homotopy_sweep,
    path_homotopy_check,
    quasi_unitary_net,
    random_quasi_unitary_net,
    retract_at,
    retract_representative,
    retraction_homotopy,
    scan_threshold,
)
from .compose import (
    CompositeFamily,
    CompositionCertificate,
    FunctorialityReport,
    Reparameterization,
    SearchFailedError,
    certify_composition,
    check_composite_boundedness,
    check_image_equicontinuity,
    composite_retract,
    compose_with,
    functoriality_check,
    partial_retract,
    product_difference_margin,
    quasi_shift_margin,
    reparam_from_constraints,
    reparam_validity_evidence,
    scalar_mix_margin,
    search_reparam,
    star_difference_margin,
    sum_difference_margin,
)

__version__ = "0.1.0"
