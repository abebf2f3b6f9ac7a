"""Digit statistics of prime reciprocals (d-sequences) in bases 2 and 3.

Library layout:

* ``primes``    -- sieve, deterministic primality, prime ranges
* ``core``      -- periods, digits, per-prime counts and classification
* ``scan``      -- bulk range scans, tables, figure data series
* ``report_io`` -- CSV/JSON serialization of reports and series
* ``events``    -- verifiable probability events from the count anomaly
* ``cli``       -- the ``dseq`` command-line tool
* ``figures``   -- optional rendering of series to image files
"""

from .core import (
    Classification,
    DigitCounts,
    DigitRule,
    DSeqRecord,
    analyze,
    classify,
    digit,
    digit_counts,
    digits,
    is_max_length,
    multiplicative_order,
    pct_difference,
    ternary_ratios,
)
from .errors import (
    BaseDividesPrimeError,
    DseqError,
    MissingRecordsError,
    NoPrimesError,
    SieveCapacityError,
    TargetUnreachableError,
    UnsupportedCountsError,
)
from .events import (
    AnomalySampler,
    AnomalyTrial,
    EventPlan,
    Transcript,
    VerifyResult,
    build_plan,
    estimate_q,
    run_event,
    sample_trial,
    verify_transcript,
)
from .primes import PrimeRange, is_prime, primes_in, sieve_upto
from .report_io import read_report, write_report, write_series
from .scan import (
    BucketRow,
    ClassTotals,
    DerivedStats,
    FIGURE_RANGE,
    FULL_RANGE,
    ScanOptions,
    ScanReport,
    TABLE_BUCKETS,
    bucketize,
    figure1_series,
    figure2_series,
    figure34_series,
    scan,
)

__version__ = "0.1.0"
