"""R-infinity nilpotency degrees of Baumslag-Solitar groups."""

__version__ = "0.1.0"

from .errors import BSRinfError, InvalidInput, BoundExceeded, Inconsistency
from .intlinalg import IntMatrix, snf, determinant, solve_in_lattice
from .abelian import FinAbGroup, AbElement, AbHom, AbSubgroup, from_relation_matrix
from .gcgroup import BSParams, GcGroup, GcElement, build_gc, lower_central_series
from .twisted import (
    GcAutomorphism,
    ReidemeisterNumber,
    make_automorphism,
    reidemeister_number,
    reidemeister_oracle,
    gc_has_rinf,
)
from .degree import DegreeResult, closed_form_degree, search_degree, cross_check
