"""Exact moments, model distributions and bounds for monochromatic clique counts."""
from .bounds import (BoundReport, bonferroni_sum, bonferroni_threshold, chebyshev_ratio,
                     erdos_asymptotic_check, ramsey_upper_bound, var_mean_ratio)
from .distributions import (DelaporteParams, PmfVector, delaporte_central_moment,
                            delaporte_factorial_moment, delaporte_mgf, delaporte_pmf,
                            delaporte_pmf_vector, delaporte_poisson_gap, fit_bign,
                            negbin_pmf, normal_central_reference, poisson_factorial_moment,
                            poisson_mgf, poisson_pmf, poisson_rate_smalln)
from .errors import (DomainError, OrderRangeError, RamseyMomentsError, RegimeError,
                     ResourceLimitError, UnsupportedOrderError)
from .exact import (Basis, RationalPolynomial, convert_basis, poly_eval, stirling_first_signed,
                    stirling_second)
from .moments import (binomial_moment, central_moment, factorial_moment, mean, raw_moment,
                      standardized_moment)
from .oracle import ExactDistribution, exact_distribution, oracle_moment, oracle_p_zero
from .profiles import OverlapProfile, enumerate_profiles, tuple_probability
from .simulator import FitReport, SimulationReport, fit_and_compare, run, sample_count

__version__ = "0.1.0"
