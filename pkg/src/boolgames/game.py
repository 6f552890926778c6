"""Boolean games: players, goals, profiles, utilities, normal forms.

Players are indexed from 0 in this API; serialized formats (game files,
profile JSON) use the 1-based numbering of the text format.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .formula import (
    Var,
    Not,
    compile_formula,
    conj,
    eval_formula,
    free_vars,
    is_valid_var,
    parse_formula,
    render_formula,
)

DEFAULT_CELL_CAP = 1 << 22
DEFAULT_DEVIATION_CAP = 1 << 22


class GameError(Exception):
    pass


class ValidationError(GameError):
    pass


class ResourceCapError(Exception):
    """An explicit resource cap was exceeded (not an input error)."""


class BooleanGame:
    """n players, pairwise-disjoint variable sets, one goal formula each."""

    def __init__(self, var_sets, goals):
        self.var_sets = tuple(tuple(sorted(set(vs))) for vs in var_sets)
        self.goals = tuple(goals)
        validate_game(self)

    @property
    def players(self):
        return len(self.var_sets)

    def all_vars(self):
        out = []
        for vs in self.var_sets:
            out.extend(vs)
        return out

    def owner(self, name):
        for i, vs in enumerate(self.var_sets):
            if name in vs:
                return i
        raise ValidationError("variable %s belongs to no player" % name)


def validate_game(g):
    if len(g.var_sets) < 2:
        raise ValidationError("a game needs at least two players")
    if len(g.goals) != len(g.var_sets):
        raise ValidationError("need one goal per player")
    seen = {}
    for i, vs in enumerate(g.var_sets):
        if not vs:
            raise ValidationError("player %d has an empty variable set" % (i + 1))
        for v in vs:
            if not is_valid_var(v):
                raise ValidationError("bad variable name %r" % (v,))
            if v in seen:
                raise ValidationError(
                    "variable %s owned by players %d and %d" % (v, seen[v] + 1, i + 1)
                )
            seen[v] = i
    for i, goal in enumerate(g.goals):
        extra = free_vars(goal) - set(seen)
        if extra:
            raise ValidationError(
                "goal %d references unowned variables: %s"
                % (i + 1, ", ".join(sorted(extra)))
            )


def utility_pure(g, full, i):
    """1 if player i's goal holds under the full assignment, else 0."""
    for v in g.all_vars():
        if v not in full:
            raise GameError("assignment missing variable %s" % v)
    return Fraction(1) if eval_formula(g.goals[i], full) else Fraction(0)


# --- mixed profiles ---------------------------------------------------------


def freeze_assignment(a):
    return tuple(sorted(a.items()))


class MixedProfile:
    """Independent per-player distributions over pure assignments.

    strategies[i] is a list of (assignment dict, Fraction weight) pairs;
    weights are positive and sum to 1 per player.
    """

    def __init__(self, strategies):
        self.strategies = tuple(
            tuple((dict(a), Fraction(w)) for a, w in player) for player in strategies
        )

    @property
    def players(self):
        return len(self.strategies)


def validate_profile(g, profile):
    if profile.players != g.players:
        raise ValidationError("profile has %d players, game has %d"
                              % (profile.players, g.players))
    for i, support in enumerate(profile.strategies):
        if not support:
            raise ValidationError("player %d has empty support" % (i + 1))
        total = Fraction(0)
        seen = set()
        for a, w in support:
            if set(a) != set(g.var_sets[i]):
                raise ValidationError(
                    "player %d strategy domain mismatch" % (i + 1)
                )
            if w <= 0:
                raise ValidationError("non-positive weight for player %d" % (i + 1))
            key = freeze_assignment(a)
            if key in seen:
                raise ValidationError("duplicate support entry for player %d" % (i + 1))
            seen.add(key)
            total += w
        if total != 1:
            raise ValidationError(
                "player %d weights sum to %s, not 1" % (i + 1, total)
            )


def expected_utility(g, profile, i):
    """Exact expected utility of player i under the profile."""
    validate_profile(g, profile)
    goal = compile_formula(g.goals[i])
    total = Fraction(0)
    for combo in itertools.product(*profile.strategies):
        full = {}
        weight = Fraction(1)
        for a, w in combo:
            full.update(a)
            weight *= w
        if goal(full):
            total += weight
    return total


# --- normal form ------------------------------------------------------------


class NormalForm:
    """Explicit payoff tensors, one per player, over indexed strategy lists.

    payoffs[i] is nested lists of Fractions with one nesting level per
    player; strategy_index[i] optionally records what each index means
    (assignment dicts for Boolean-game expansions).
    """

    def __init__(self, payoffs, strategy_index=None):
        self.payoffs = [
            _to_fraction_tensor(t) for t in payoffs
        ]
        self.shape = _tensor_shape(self.payoffs[0])
        if len(self.shape) != len(self.payoffs):
            raise ValidationError("tensor rank must equal player count")
        for t in self.payoffs[1:]:
            if _tensor_shape(t) != self.shape:
                raise ValidationError("payoff tensors disagree on shape")
        self.strategy_index = strategy_index

    @property
    def players(self):
        return len(self.payoffs)

    def payoff(self, i, idx):
        t = self.payoffs[i]
        for j in idx:
            t = t[j]
        return t


def _to_fraction_tensor(t):
    if isinstance(t, (list, tuple)):
        return [_to_fraction_tensor(x) for x in t]
    return Fraction(t)


def _tensor_shape(t):
    shape = []
    while isinstance(t, list):
        shape.append(len(t))
        if not t:
            break
        t = t[0]
    return tuple(shape)


def player_assignments(g, i):
    """Player i's pure strategies, lexicographic by variable name, F < T."""
    names = list(g.var_sets[i])  # already sorted
    return [
        dict(zip(names, bits))
        for bits in itertools.product((False, True), repeat=len(names))
    ]


def to_normal_form(g, cap=DEFAULT_CELL_CAP):
    cells = 1
    for vs in g.var_sets:
        cells *= 1 << len(vs)
        if cells > cap:
            raise ResourceCapError(
                "normal form needs %d cells; cap is %d" % (cells, cap)
            )
    index = [player_assignments(g, i) for i in range(g.players)]
    goals = [compile_formula(goal) for goal in g.goals]
    n = g.players

    def fill(level, partial):
        if level == n:
            return None
        out = []
        for a in index[level]:
            merged = dict(partial)
            merged.update(a)
            if level == n - 1:
                out.append(merged)
            else:
                out.append(fill(level + 1, merged))
        return out

    assignments = fill(0, {})

    def tensor(goal, node, level):
        if level == n:
            return Fraction(1) if goal(node) else Fraction(0)
        return [tensor(goal, child, level + 1) for child in node]

    payoffs = [tensor(goal, assignments, 0) for goal in goals]
    return NormalForm(payoffs, strategy_index=index)


def profile_from_indices(nf, weight_vectors):
    """MixedProfile from per-player index->weight maps over nf.strategy_index."""
    if nf.strategy_index is None:
        raise GameError("normal form carries no strategy index")
    strategies = []
    for i, wv in enumerate(weight_vectors):
        support = [
            (nf.strategy_index[i][j], Fraction(w)) for j, w in wv.items() if w != 0
        ]
        strategies.append(support)
    return MixedProfile(strategies)


# --- marginals --------------------------------------------------------------


def marginalize(profile, names):
    """Marginal distribution of the profile over the given variables.

    Returns a dict from frozen assignments (sorted item tuples) over exactly
    ``names`` to probabilities summing to 1.
    """
    names = set(names)
    known = set()
    for support in profile.strategies:
        for a, _ in support:
            known.update(a)
    unknown = names - known
    if unknown:
        raise GameError("unknown variables: %s" % ", ".join(sorted(unknown)))
    # per-player marginal over the variables it owns
    per_player = []
    for support in profile.strategies:
        owned = names & set(support[0][0])
        if not owned:
            continue
        dist = {}
        for a, w in support:
            key = tuple(sorted((v, a[v]) for v in owned))
            dist[key] = dist.get(key, Fraction(0)) + w
        per_player.append(dist)
    if not per_player:
        return {(): Fraction(1)}
    out = {}
    for combo in itertools.product(*(d.items() for d in per_player)):
        key = tuple(sorted(itertools.chain.from_iterable(k for k, _ in combo)))
        w = Fraction(1)
        for _, wi in combo:
            w *= wi
        out[key] = out.get(key, Fraction(0)) + w
    return out


# --- composition ------------------------------------------------------------


def namespaced(ns, name):
    return "%s.%s" % (ns, name)


def compose_disjoint(games, player_map, goal_builder, outer_players,
                     extra_vars=None):
    """Assemble an outer game from namespaced constituent games.

    games: list of (BooleanGame, namespace); namespaces must be distinct.
    player_map: dict (constituent index, constituent player) -> outer player.
    goal_builder: callable(renamed_goals) -> sequence of outer goal formulas,
      where renamed_goals[c][i] is constituent c's goal i after renaming.
    extra_vars: optional list per outer player of fresh variable names.
    """
    namespaces = [ns for _, ns in games]
    if len(set(namespaces)) != len(namespaces):
        raise ValidationError("namespace collision")
    var_sets = [list(extra_vars[i]) if extra_vars else [] for i in range(outer_players)]
    if extra_vars is not None and len(extra_vars) != outer_players:
        raise ValidationError("extra_vars must list one set per outer player")
    renamed_goals = []
    for c, (g, ns) in enumerate(games):
        mapping = {v: namespaced(ns, v) for v in g.all_vars()}
        for i in range(g.players):
            outer = player_map[(c, i)]
            var_sets[outer].extend(mapping[v] for v in g.var_sets[i])
        renamed_goals.append([
            _rename(goal, mapping) for goal in g.goals
        ])
    goals = list(goal_builder(renamed_goals))
    if len(goals) != outer_players:
        raise ValidationError("goal_builder must emit one goal per outer player")
    return BooleanGame(var_sets, goals)


def _rename(goal, mapping):
    from .formula import rename_vars

    return rename_vars(goal, mapping)


def characteristic_formula(a):
    """Conjunction of literals true exactly when an assignment extends ``a``."""
    if not a:
        raise GameError("empty assignment has no characteristic formula")
    return conj(
        Var(name) if value else Not(Var(name))
        for name, value in sorted(a.items())
    )


# --- serialization ----------------------------------------------------------


def parse_game(text):
    """Parse the textual game format into a validated BooleanGame."""
    players = None
    var_sets = {}
    goals = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise GameError("line %d: expected 'key: value'" % lineno)
        head, _, rest = line.partition(":")
        head = head.strip()
        rest = rest.strip()
        if head == "players":
            try:
                players = int(rest)
            except ValueError:
                raise GameError("line %d: bad player count" % lineno) from None
        elif head.startswith("vars "):
            idx = _player_index(head[5:], lineno)
            var_sets[idx] = rest.split()
        elif head.startswith("goal "):
            idx = _player_index(head[5:], lineno)
            try:
                goals[idx] = parse_formula(rest)
            except Exception as e:
                raise GameError("line %d: %s" % (lineno, e)) from None
        else:
            raise GameError("line %d: unknown directive %r" % (lineno, head))
    if players is None:
        raise GameError("missing 'players:' line")
    missing = [
        str(i + 1)
        for i in range(players)
        if i not in var_sets or i not in goals
    ]
    if missing:
        raise GameError("missing vars/goal for players: %s" % ", ".join(missing))
    return BooleanGame(
        [var_sets[i] for i in range(players)],
        [goals[i] for i in range(players)],
    )


def _player_index(token, lineno):
    try:
        idx = int(token.strip())
    except ValueError:
        raise GameError("line %d: bad player index" % lineno) from None
    if idx < 1:
        raise GameError("line %d: players are numbered from 1" % lineno)
    return idx - 1


def render_game(g):
    lines = ["players: %d" % g.players]
    for i in range(g.players):
        lines.append("vars %d: %s" % (i + 1, " ".join(g.var_sets[i])))
        lines.append("goal %d: %s" % (i + 1, render_formula(g.goals[i])))
    return "\n".join(lines) + "\n"


def profile_to_json(profile):
    return json.dumps(
        {
            "players": [
                {
                    "support": [
                        {
                            "assign": {k: v for k, v in sorted(a.items())},
                            "weight": str(w),
                        }
                        for a, w in support
                    ]
                }
                for support in profile.strategies
            ]
        }
    )


def profile_from_json(text, g=None):
    data = json.loads(text)
    strategies = []
    for entry in data["players"]:
        support = []
        for item in entry["support"]:
            support.append((dict(item["assign"]), Fraction(item["weight"])))
        strategies.append(support)
    profile = MixedProfile(strategies)
    if g is not None:
        validate_profile(g, profile)
    return profile
