"""Tope committees of simple oriented matroids: brute force and exact formulas."""

from .errors import *  # noqa: F401,F403
from .om import (
    Halfspace, OrientedMatroid, SignVector, Violation, format_topes, halfspace,
    max_positive_topes, parse_topes, reorient, validate,
)
from .oracle import (
    KappaReport, committees_of_size, is_anti_committee, is_committee, is_free_of_opposites,
    is_minimal_committee, kappa_sweep,
)
from .poset import (
    GeneratedJoinSemilattice, SimplicialComplex, blocker, mobius_below, nerve,
    reduced_euler_characteristic, union_mobius_number, union_semilattice,
)
from .formulas import (
    CrosscheckReport, EllChoice, committee_sum, count_committees, count_free_committees,
    crosscheck, free_committee_sum,
)
from .blocking import (
    BlockingInstance, ConstraintStatus, brute_blockers, check_constraints,
    count_blockers_ie, count_blockers_mobius, count_blockers_nerve, random_antichain,
)
from .cross import CrossInstance, brute_blockers_cross, count_blockers_cross
from .convex import ConvexSemilattice, conv, convex_sets, extreme_points, gamma, ideal_layer_count, is_free
from .generate import paper_example, random_realizable, triangle

__version__ = "0.1.0"
