"""Exact and numeric inducibility of complete multipartite and Turan graphs."""
from .core import Profile, binomial, generic_lower_bound, multinomial, pi_factor
from .density import DensityPolynomial, SimplexPoint, density_polynomial, evaluate
from .graphs import Graph, complete_multipartite, turan_profile
from .optimize import OptimizerConfig, inducibility_limit, inducibility_partite, maximize_on_simplex
from .turan import g_value, inducibility_turan, table14, threshold_t

__version__ = "0.1.0"
