"""Frequency LTL over lasso words.

Exact satisfaction checking of formulas whose until operators carry rational
frequency bounds, a two-counter machine model, and the reduction compiling a
machine into a formula that is satisfiable exactly when the machine has a
successful computation.
"""

from .evaluator import (
    AlphabetMismatchError,
    FreqWitnessQuery,
    SatTable,
    UntilWitness,
    brute_force_models,
    brute_force_row,
    freq_until_decide,
    frequency_before,
    models,
    sat_table,
    until_witness,
)
from .formulas import (
    FALSE,
    TRUE,
    Alphabet,
    Always,
    And,
    Atom,
    ClassicUntil,
    Eventually,
    FalseFormula,
    Formula,
    FreqUntil,
    Implies,
    LetterSet,
    Next,
    Not,
    Or,
    TrueFormula,
    desugar,
    is_core,
    subformulas,
)
from .minsky import (
    Computation,
    MachineFormatError,
    MinskyMachine,
    Operation,
    ReplayError,
    Transition,
    find_successful_computation,
    format_machine,
    parse_machine,
    replay,
    step,
    validate_machine,
)
from .reduction import (
    EncodedComputation,
    PartitionTable,
    ReductionError,
    Violation,
    balance_check_carryover,
    balance_check_update,
    balance_formula,
    build_alphabet,
    decode_word,
    encode_computation,
    encoding_shape_formula,
    is_well_formed_encoding,
    machine_to_formula,
    partition_table,
)
from .syntax import ParseError, UnknownLetterError, parse, render
from .words import (
    FiniteWord,
    LassoWord,
    WordFormatError,
    format_word,
    occ,
    parse_word,
    same_denotation,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
