"""Exact shuffle products, vertex coproducts, Yang-Baxter series and
lattice vertex operators on the cohomology of quiver moduli."""

from .algebra import (
    MPoly,
    RatFn,
    Var,
    Z,
    ZSeries,
    coeff_at,
    root,
    series_expand,
    symmetrize,
)
from .coha import (
    GradedClass,
    assoc_check,
    coha_unit,
    shuffle_product,
    shuffle_product_equivariant,
)
from .euler import (
    euler_two_term,
    grassmann_pushforward_oracle,
    localized_pushforward,
    whitney_check,
)
from .lattice import (
    FockState,
    LatticeSpec,
    character,
    heisenberg_apply,
    lattice_vertex_op,
    weak_commutativity_check,
)
from .quiver import (
    CohClass,
    Quiver,
    WeightedComplex,
    a1_quiver,
    euler_form,
    hilbert_series,
    jordan_quiver,
    kronecker_quiver,
    theta_factors,
)
from .verify import check_bialgebra, check_counit_unit, check_normal_identity
from .vertex import (
    BiClass,
    Orientation,
    degree_of,
    holomorphic_y,
    product_braiding,
    psi_euler,
    s_matrix,
    split_pullback,
    y_covertex,
    ybe_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
