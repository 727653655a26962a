"""Exact computations with graded differential modules and free flags over polynomial rings."""

__version__ = "0.1.0"

from .betti import BettiTable, betti_table, ci_deficiency_degrees, pure_deficiency_degrees, slope_pairs
from .complexes import (
    Complex,
    EndElement,
    check_complex,
    end_cohomology_dim,
    find_nullhomotopy,
    is_chain_map,
    koszul,
    left_mult,
    pfaffian_resolution,
)
from .deform import (
    LiftState,
    assemble,
    dim_bounds,
    enumerate_flags,
    find_lift_iso,
    homotopic_lift_iso,
    lift,
    lift_space,
    obstruction,
)
from .diffmod import (
    CurvedModule,
    DifferentialModule,
    curvature,
    fold,
    homology_hilbert,
    matrix_factorization,
    minimize,
    validate_flag,
)
from .errors import FlagforgeError
from .exactfield import GF, QQ, Field
from .polyring import GradedFreeModule, HomMap, Poly, PolyRing
from .rigidity import (
    CompleteIntersection,
    ExtElement,
    ci_ext_dim,
    is_a_rigid,
    nonrigidity_witness,
    rigid_thresholds,
    rigidity_window,
    socle_degree,
    wedge,
)

__all__ = [name for name in dir() if not name.startswith("_")]
