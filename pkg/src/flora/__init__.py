"""Unsupervised knowledge-graph alignment by fuzzy fixed-point iteration."""

from .engine import (AlignmentResult, Config, MatchedPosition, RuleInstance,
                     run)
from .fis import (Aggregator, Assignment, Fis, HMEAN, IDENTITY, MIN,
                  alpha_mean, parse_rules, solve, verify_least_fixed_point)
from .functionality import FunctionalityIndex, FunEstimate
from .ingest import (DatasetBundle, IngestError, attach_seeds, load_openea_dir,
                     load_plain)
from .kg import KnowledgeGraph
from .literals import LiteralValue, parse_literal
from .litsim import (LiteralSimTable, build_similarity_table, match_dates,
                     match_numbers, trigram_similarity)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult", "Config", "MatchedPosition", "RuleInstance", "run",
    "Aggregator", "Assignment", "Fis", "HMEAN", "IDENTITY", "MIN",
    "alpha_mean", "parse_rules", "solve", "verify_least_fixed_point",
    "FunctionalityIndex", "FunEstimate", "DatasetBundle", "IngestError",
    "attach_seeds", "load_openea_dir", "load_plain", "KnowledgeGraph",
    "LiteralValue", "parse_literal", "LiteralSimTable",
    "build_similarity_table", "match_dates", "match_numbers",
    "trigram_similarity", "__version__",
]
