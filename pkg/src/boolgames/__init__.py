"""Boolean games: exact win-lose game analysis, encodings, and reductions."""

from .formula import (
    FALSE,
    TRUE,
    And,
    ConstFalse,
    ConstTrue,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    compile_formula,
    eval_formula,
    free_vars,
    parse_formula,
    render_formula,
)
from .game import (
    BooleanGame,
    GameError,
    MixedProfile,
    NormalForm,
    ResourceCapError,
    expected_utility,
    parse_game,
    profile_from_json,
    profile_to_json,
    render_game,
    to_normal_form,
)
from .solver import (
    SolverError,
    best_deviation_gain,
    exists_guarantee_nash,
    forall_guarantee_nash,
    irrational_nash,
    is_nash,
    nash_sat,
    pure_equilibria,
    unique_nash,
    zero_sum_value,
)

__all__ = [
    "FALSE", "TRUE", "And", "ConstFalse", "ConstTrue", "FormulaError",
    "Iff", "Implies", "Not", "Or", "Var", "compile_formula", "eval_formula",
    "free_vars", "parse_formula", "render_formula",
    "BooleanGame", "GameError", "MixedProfile", "NormalForm",
    "ResourceCapError", "expected_utility", "parse_game",
    "profile_from_json", "profile_to_json", "render_game", "to_normal_form",
    "SolverError", "best_deviation_gain", "exists_guarantee_nash",
    "forall_guarantee_nash", "irrational_nash", "is_nash", "nash_sat",
    "pure_equilibria", "unique_nash", "zero_sum_value",
]
