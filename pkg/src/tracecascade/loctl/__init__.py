"""Local past temporal logic over traces: syntax, semantics, rewrites and compilation."""

from .compile import (
    Compiled,
    LocalizedReset,
    chain_is_aperiodic,
    compile_gcs,
    compile_restricted,
    compile_sprtl,
    decompile_sprtl,
    reachable_monoid,
)
from .semantics import Evaluator, eliminate_prev, eval, eval_at, eval_events, lift_tilde, lower_hat, prev_levels
from .syntax import (
    FALSE,
    TRUE,
    And,
    Const,
    ExistsMax,
    Formula,
    Fragment,
    Letter,
    Letters,
    Not,
    Or,
    Prev,
    Since,
    Yleq,
    depth,
    fragment_of,
    is_trace_formula,
    letters_of,
    parse,
    subformulas,
    to_text,
)

__all__ = [
    "And", "Compiled", "Const", "Evaluator", "ExistsMax", "FALSE", "Formula", "Fragment", "Letter",
    "Letters", "LocalizedReset", "Not", "Or", "Prev", "Since", "TRUE", "Yleq", "chain_is_aperiodic",
    "compile_gcs", "compile_restricted", "compile_sprtl", "decompile_sprtl", "depth", "eliminate_prev",
    "eval", "eval_at", "eval_events", "fragment_of", "is_trace_formula", "letters_of", "lift_tilde",
    "lower_hat", "parse", "prev_levels", "reachable_monoid", "subformulas", "to_text",
]
