"""Multiplicities of closed geodesics on the modular surface.

Class-number spectrum of trace multiplicities, smoothed character sums,
local densities with their Fourier coefficients, and the Euler-product
prediction for the pair correlation of normalized multiplicities.
"""

from .arith import Factorization, chi_d, chi_prime, factorize, legendre, square_divisors
from .correlation import (
    CorrelationReport,
    compare_report,
    empirical_fourier,
    empirical_gamma,
    empirical_mean,
)
from .errors import ResourceLimitError, StabilizationError
from .localfactors import (
    ComplexValue,
    FourierValue,
    beta_p,
    beta_p_full,
    beta_truncated,
    dft_b_max_cap,
    dft_b_max_default,
    euler_product_gamma,
    fourier_beta_p_closed,
    fourier_beta_p_dft,
    indicator_I,
    local_A_closed,
    local_A_oracle,
    local_A_oracle_detail,
)
from .quadforms import (
    PellFundamental,
    QuadForm,
    class_number,
    class_number_oracle,
    pell_fundamental,
    reduce_step,
    reduced_forms,
    smoothed_L,
)
from .spectrum import (
    SieveDetails,
    SpectrumRow,
    TraceDecomposition,
    TraceEntry,
    beta,
    beta_table,
    spectrum_sieve,
    trace_decompositions,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexValue",
    "CorrelationReport",
    "Factorization",
    "FourierValue",
    "PellFundamental",
    "QuadForm",
    "ResourceLimitError",
    "SieveDetails",
    "SpectrumRow",
    "StabilizationError",
    "TraceDecomposition",
    "TraceEntry",
    "__version__",
    "beta",
    "beta_p",
    "beta_p_full",
    "beta_table",
    "beta_truncated",
    "chi_d",
    "chi_prime",
    "class_number",
    "class_number_oracle",
    "compare_report",
    "dft_b_max_cap",
    "dft_b_max_default",
    "empirical_fourier",
    "empirical_gamma",
    "empirical_mean",
    "euler_product_gamma",
    "factorize",
    "fourier_beta_p_closed",
    "fourier_beta_p_dft",
    "indicator_I",
    "legendre",
    "local_A_closed",
    "local_A_oracle",
    "local_A_oracle_detail",
    "pell_fundamental",
    "reduce_step",
    "reduced_forms",
    "smoothed_L",
    "spectrum_sieve",
    "square_divisors",
    "trace_decompositions",
]
