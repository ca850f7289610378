"""Cubic residue symbols, Gauss sums and Hecke L-functions over the Eisenstein integers."""

from .characters import (
    CharacterSpec,
    CubicValue,
    LambdaCharacter,
    all_lambdas,
    classify,
    cubic_symbol_fast,
    cubic_symbol_slow,
    ray_class_mod9,
    trivial_lambda,
)
from .density import (
    DensityReport,
    explicit_formula,
    family_mass,
    nonvanishing_bound,
    one_level_density_primeside,
    one_level_density_zeroside,
)
from .eisenstein import ONE, OMEGA, ONE_MINUS_OMEGA, EisensteinInt, factor, gcd, primary_associate
from .gauss import gauss_direct, gauss_fast, poisson_check, root_number, root_number_direct
from .hsums import bilinear_forms, h_grid, h_statistic, vaughan_decompose, verify_ha_identity
from .lfunction import coefficients, fe_residual, find_zeros, lambda_eval
from .sieve import PrimeTable, prime_table
from .testfunctions import fejer, fejer_squared, gaussian

__version__ = "0.1.0"
