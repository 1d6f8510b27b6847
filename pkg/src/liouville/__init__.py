"""Liouville sign-pattern statistics and the constant sum (1 + lambda(n)) / 2**n."""

__version__ = "0.1.0"

from .arithmetic import (
    CoverageError,
    MemoryCapError,
    MobiusTable,
    SieveConfig,
    SignTable,
    liouville_point,
    mobius_point,
    sieve_liouville,
    sieve_mobius,
)
from .averages import (
    SumSeries,
    autocorr_log_average,
    log_average_liouville,
    mertens,
    reference_curve,
    summatory_liouville,
    twisted_sum,
    twisted_sup,
)
from .normality import (
    DigitStream,
    FrequencyReport,
    PrecisionSpec,
    base2k_digits,
    base4_digits,
    bit_stream,
    digit_frequencies,
    evaluate_constant,
    normality_report,
)
from .patterns import (
    PatternCounts,
    PatternSpec,
    autocorrelation,
    count_double,
    count_k_pattern,
    count_single,
    densities,
)
