"""Set-sharing abstract domain, its tuple-sharing abstractions, and a
finite-lattice complementation engine."""

from .universe import VarUniverse, make_universe, numbered_universe, var_index
from .shcore import (ShElement, amgu, amgu_binding, bin, glb, lub, parse_sh, proj, rel,
                     self_union, sh, star_union)
from .terms import parse_subst, parse_term, term_vars, is_idempotent
from .closures import (ClosureId, ground_equiv_classes, parse_closure, rho_ps_prime,
                       rho_ts, rho_tsd, tuples_k)
from .lattice import (DomainImage, complement, dual_atoms, enumerate_sh, image_of,
                      meet_irreducibles, mi_formula, moore, named_subdomain, reduced_product)

__version__ = "0.1.0"
