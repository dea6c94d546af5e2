"""Inversion-based consistency measurement for read/write register histories.

A history is i-atomic when its operations can be put in a legal sequential
order in which no single operation is out of real-time order with more than
``i`` others. :func:`check_i_atomicity` decides this with a pruned search
over cluster orders; :func:`find_min_i` measures the smallest such ``i``.
"""

__version__ = "0.1.0"

from .history import (
    Cluster,
    History,
    HistoryParseError,
    InvalidHistoryError,
    Operation,
    ValidationReport,
    Violation,
    build_clusters,
    concurrent,
    load_history,
    make_history,
    parse_history,
    precedes,
    stats_w,
    validate,
)
from .inversion import (
    InversionTables,
    Permutation,
    build_tables,
    degree_at_placement,
    i_max,
    i_sum,
    indicator,
    is_legal,
)
from .checker import (
    CGNodeKey,
    Configuration,
    Verdict,
    cg_size_bounds,
    check_i_atomicity,
    expand,
    find_min_i,
)
from .oracle import OracleLimitError, OracleResult, oracle_check_imax, oracle_min
from .generator import GenConfig, generate, stats

__all__ = [name for name in dir() if not name.startswith("_")]
