"""Exact classification of 0-1 expansions in non-integer bases q in (1, 2)."""

from .catalog import (
    base, constant, constants, counterex_family, komornik_loreti, multinacci,
    qf_family, resolve_base, zn_words,
)
from .enumerator import (
    Budget, ExpansionCount, b2_witness, certify_ladder, classify, explore, is_forced,
    is_unique, list_expansions, lower_order_scan, switch_region, trib_witness,
    uq_word_form, viable_prefix_count,
)
from .field import AlgebraicBase, FieldElement, compare, isolate_roots, refine
from .words import DigitWord, greedy, lazy, parse_word, thue_morse, value_of

__version__ = "0.1.0"
