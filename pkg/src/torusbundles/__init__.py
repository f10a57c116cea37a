"""Nilpotent torus-bundle lattices, complex structures, and real involutions.

The package stores a bundle as a family of antisymmetric integer matrices,
provides the exact group law and normal form on the associated lattice
group, pairs the data with complex structures on fiber and base, checks
the integral and dianalytic condition lists for real involutions, reduces
everything to eigenspace blocks, and solves the resulting equation systems
in the two tractable low-dimensional shapes with connectivity certificates
for the solution families.
"""

from .lattice_core import (
    BundleDatum,
    GroupElement,
    NormalizationDatum,
    form_values,
    group_commutator,
    group_identity,
    group_inverse,
    group_multiply,
    is_nondegenerate,
    lower_triangular_split,
    normalized_action,
    pfaffian,
    pfaffian_binary_form,
    pfaffian_reality,
    psi,
    psi_inverse,
    t_minus_action,
)
from .complex_structures import (
    AppellHumbertPoint,
    ComplexStructurePair,
    HodgeDecomposition,
    cocycle_F,
    decompose,
    fiber_lattice_coordinates,
    hodge_subspace,
    holonomy_action,
    is_parallelizable,
    is_singular_point,
    orientation_preserving,
    riemann_residual,
    standard_structure,
)
from .real_structures import (
    CompatibleStructure,
    EigenSplit,
    OrbifoldConjugationData,
    RealStructureData,
    antiholomorphy_residual,
    build_J,
    check_dianalytic_conditions,
    check_integral_conditions,
    eigensplit,
    equivalence_conditioning,
    normalize_translation,
    orbifold_data,
    rbr2_residual,
    reconstruct_from_orbifold,
    tensor_equations_residuals,
)
from .solver_explorer import (
    CaseInfo,
    ConnectPath,
    ConnectivityCertificate,
    ConstraintSystem,
    SolutionSetDescription,
    SolutionWitness,
    classify_case,
    connect,
    connectivity_certificate,
    sample_solutions,
    solve,
    solve_kodaira,
    solve_threefold,
)

__all__ = [
    "AppellHumbertPoint",
    "BundleDatum",
    "CaseInfo",
    "CompatibleStructure",
    "ComplexStructurePair",
    "ConnectPath",
    "ConnectivityCertificate",
    "ConstraintSystem",
    "EigenSplit",
    "GroupElement",
    "HodgeDecomposition",
    "NormalizationDatum",
    "OrbifoldConjugationData",
    "RealStructureData",
    "SolutionSetDescription",
    "SolutionWitness",
    "antiholomorphy_residual",
    "build_J",
    "check_dianalytic_conditions",
    "check_integral_conditions",
    "classify_case",
    "cocycle_F",
    "connect",
    "connectivity_certificate",
    "decompose",
    "eigensplit",
    "equivalence_conditioning",
    "fiber_lattice_coordinates",
    "form_values",
    "group_commutator",
    "group_identity",
    "group_inverse",
    "group_multiply",
    "hodge_subspace",
    "holonomy_action",
    "is_nondegenerate",
    "is_parallelizable",
    "is_singular_point",
    "lower_triangular_split",
    "normalize_translation",
    "normalized_action",
    "orbifold_data",
    "orientation_preserving",
    "pfaffian",
    "pfaffian_binary_form",
    "pfaffian_reality",
    "psi",
    "psi_inverse",
    "rbr2_residual",
    "reconstruct_from_orbifold",
    "riemann_residual",
    "sample_solutions",
    "solve",
    "solve_kodaira",
    "solve_threefold",
    "standard_structure",
    "t_minus_action",
    "tensor_equations_residuals",
]

__version__ = "0.1.0"
