"""Learning semi-deterministic transducers from translation pairs and translation queries."""
from .dataset import Dataset, format_dataset, parse_dataset
from .equivalence import (
    CanonicalReport,
    Verdict,
    bounded_equiv,
    canonicalize,
    isomorphic,
    minimal_form,
)
from .learner import FoldConflict, Hypothesis, learn
from .oracle import BudgetExhausted, MachineOracle, OracleStats, budgeted, machine_oracle
from .sampler import SearchBoundExceeded, characteristic_sample, n0, n1, n2, n2_star
from .strings import Alphabet, parse_string_set, valid_antichains
from .transducer import Sdt, enumerate_pairs, format_sdt, parse_sdt, random_sdt, to_dot, translate

__all__ = [
    "Alphabet",
    "BudgetExhausted",
    "CanonicalReport",
    "Dataset",
    "FoldConflict",
    "Hypothesis",
    "MachineOracle",
    "OracleStats",
    "Sdt",
    "SearchBoundExceeded",
    "Verdict",
    "bounded_equiv",
    "budgeted",
    "canonicalize",
    "characteristic_sample",
    "enumerate_pairs",
    "format_dataset",
    "format_sdt",
    "isomorphic",
    "learn",
    "machine_oracle",
    "minimal_form",
    "n0",
    "n1",
    "n2",
    "n2_star",
    "parse_dataset",
    "parse_sdt",
    "parse_string_set",
    "random_sdt",
    "to_dot",
    "translate",
    "valid_antichains",
]
