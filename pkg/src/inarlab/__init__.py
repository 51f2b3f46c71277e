"""inarlab: integer-valued autoregressive (INAR) process toolkit.

Simulation by binomial thinning, spectral analysis of the companion matrix,
exact zero-start moment sequences, the squared Bessel / CIR diffusion limit
of unstable models, and conditional least squares estimation.
"""

from .cir import (
    CirParams,
    euler_path,
    euler_values,
    exact_marginal,
    params_from_model,
    params_m,
    sample_marginal,
)
from .errors import InarError, NumericalError, SpecificationError
from .estimate import FitConfig, FitResult, Method, cls_fit, fit, residual_acf, wcls_fit
from .harness import (
    boston_report,
    ks_critical,
    ks_statistic,
    load_boston,
    load_counts,
    mc_convergence,
    moment_mc_check,
)
from .model import (
    Bernoulli,
    Classification,
    Empirical,
    Geometric,
    Innovation,
    ModelSpec,
    NegativeBinomial,
    Poisson,
    Regime,
    classify,
    decompose,
    gcd_support,
    validate,
)
from .moments import (
    MomentTable,
    growth_check,
    m2_exact,
    mean_exact,
    mean_limit,
    moment_table,
    var_exact,
    var_from_martingale_sums,
)
from .simulate import (
    Path,
    RngStream,
    conditional_mean_check,
    scaled_value,
    simulate_ensemble,
    simulate_path,
    thin,
)
from .spectral import (
    ConvergenceProfile,
    SpectralData,
    companion,
    convergence_profile,
    char_roots,
    perron_root,
    perron_vectors,
    power_weights,
    projection,
    second_eigen_modulus,
    spectral_data,
)

__version__ = "0.1.0"
