"""Size-biased random orderings of countably many items: exact probabilities, samplers and order types."""

from . import classifier, identities, probkernel, samplers, sizes, stats
from .classifier import OrderType, abt_embeddable, classify, classify_descriptor
from .probkernel import chain_prob, head_prob, insertion_rank_pmf, record_prob
from .samplers import sample_by_insertion, sample_by_picks, sample_exponential, sample_poisson_scatter
from .sizes import (
    SizeFunction,
    SizeMetadata,
    analytic_metadata,
    constant,
    evaluate,
    explicit_table,
    geometric,
    karamata_stirling,
    log_plus_two_log_log,
    log_power,
    partial_sum,
    power,
)
from .stats import count_inversions, count_records, lehmer_code

__version__ = "0.1.0"
