"""Numerical star products from symplectic groupoid cocycles.

Subpackages: exprs (test-function algebra), grids, models (Poisson
catalog), groupoids + cocycles (structure maps, coboundary, van Est),
haar + quat (SU(2) quadrature), quad + engine (star backends), spectral
(operator layer), ratphase + verify + suites (verification campaigns),
serialize, cli.
"""

from .exprs import (
    FunctionExpr,
    constant,
    coordinate,
    eval_expr,
    gaussian_poly,
    monomial,
    orbit_polynomial,
    plane_wave,
    torus_harmonic,
)
from .grids import GridSpec, SampledField, l2_inner, sample
from .models import (
    HbarParam,
    PoissonModel,
    constant_poisson,
    heisenberg_dual,
    poisson_bracket,
    su2_dual,
    symplectic_r2,
    torus2,
    zero_model,
)
from .quad import QuadratureSpec, StarResult
from .haar import HaarSpec, haar_nodes
from .engine import (
    normalization_constant,
    star_constant,
    star_good,
    star_heisenberg,
    star_moyal,
    star_point,
    star_su2,
    star_torus,
    star_zero,
)
from .cocycles import (
    Cocycle2,
    antisymmetrize,
    catalog_cocycle,
    cocycle_eval,
    delta_coboundary,
    van_est_2,
    van_est_2_richardson,
)

__version__ = "0.1.0"
