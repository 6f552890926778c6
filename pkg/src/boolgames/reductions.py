"""Compilers from nondeterministic Turing machine instances to two-player
guarantee games, plus the equilibrium-structure game transformations.

A machine run within a binary step bound K is laid out as a 2^k x 2^k table
of cell descriptors (tape symbol plus a head marker: the head is here in
some state, to the left, or to the right).  The run is accepting iff the
head is in the accept state on cell 0 at row K-1.  Local correctness of the
table is captured by 2x2 windows: an independent semantic checker
(square_oracle) and a per-rule pattern generator (admissible_squares) both
implement the window conditions, and the generated pattern disjunction is
what the game formulas use.

Head markers: "<" means the head is at a lower column index than this cell,
">" a higher one.  Windows may wrap around both edges of the table; windows
whose top row is the last row are exempt from rule consistency (the rows
are not consecutive computation steps), and column-wrapped windows only
constrain head markers (their columns are not adjacent tape cells).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .encodings import build_cardinality, build_comparison, const_bits, var_bits
from .formula import And, Iff, Implies, Not, Or, Var, conj, disj
from .game import (
    BooleanGame,
    MixedProfile,
    ResourceCapError,
    namespaced,
)
from .gadgets import fixed_value_game

SYMBOLS = ("0", "1", "_")
LEFT = "<"
RIGHT = ">"

DEFAULT_NODE_CAP = 1 << 20


class ReductionError(Exception):
    pass


# --- machines and tables --------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    frm: str
    read: str
    write: str
    move: str
    to: str


class TuringMachine:
    def __init__(self, states, start, accept, transitions):
        self.states = tuple(states)
        self.start = start
        self.accept = accept
        self.transitions = tuple(
            t if isinstance(t, Transition) else Transition(*t)
            for t in transitions
        )
        self.validate()

    def validate(self):
        if len(set(self.states)) != len(self.states) or not self.states:
            raise ReductionError("states must be a nonempty set")
        for q in (self.start, self.accept):
            if q not in self.states:
                raise ReductionError("unknown state %r" % q)
        for t in self.transitions:
            if t.frm not in self.states or t.to not in self.states:
                raise ReductionError("transition uses unknown state: %r" % (t,))
            if t.read not in SYMBOLS or t.write not in SYMBOLS:
                raise ReductionError("bad symbol in transition %r" % (t,))
            if t.move not in ("L", "R"):
                raise ReductionError("bad move in transition %r" % (t,))
        # the accept state must carry exactly the "do nothing" transitions:
        # rewrite the read symbol, move left (a stay, as acceptance is pinned
        # to cell 0), remain accepting
        want = {Transition(self.accept, x, x, "L", self.accept) for x in SYMBOLS}
        got = {t for t in self.transitions if t.frm == self.accept}
        if got != want:
            raise ReductionError(
                "accept state must have exactly the do-nothing self-transitions"
            )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        try:
            transitions = [
                Transition(t["from"], t["read"], t["write"], t["move"], t["to"])
                for t in data["transitions"]
            ]
            return cls(data["states"], data["start"], data["accept"], transitions)
        except (KeyError, TypeError) as exc:
            raise ReductionError("malformed machine JSON: %s" % exc)

    def to_json(self):
        return json.dumps({
            "states": list(self.states),
            "start": self.start,
            "accept": self.accept,
            "transitions": [
                {"from": t.frm, "read": t.read, "write": t.write,
                 "move": t.move, "to": t.to}
                for t in self.transitions
            ],
        })


def immediate_acceptor():
    """A two-state machine that accepts the empty word in one step."""
    return TuringMachine(
        ["q0", "qa"], "q0", "qa",
        [Transition("q0", "_", "0", "L", "qa"),
         Transition("qa", "0", "0", "L", "qa"),
         Transition("qa", "1", "1", "L", "qa"),
         Transition("qa", "_", "_", "L", "qa")],
    )


@dataclass(frozen=True)
class CellDescriptor:
    content: str  # "0", "1", "_"
    head: str     # "<", ">", or a state name

    def is_state(self):
        return self.head not in (LEFT, RIGHT)


def _descriptor_ok(e, m):
    return e.content in SYMBOLS and (
        e.head in (LEFT, RIGHT) or e.head in m.states
    )


@dataclass(frozen=True)
class Square2x2:
    tl: CellDescriptor
    tr: CellDescriptor
    bl: CellDescriptor
    br: CellDescriptor
    row: int
    col: int
    k: int

    def __post_init__(self):
        size = 1 << self.k
        if not (0 <= self.row < size and 0 <= self.col < size):
            raise ReductionError("square position out of range")


def simulate_tm(m, word, steps, width, accept_row=None, cap=DEFAULT_NODE_CAP):
    """Depth-first search for an accepting run, as a table of descriptors.

    Returns a steps x width table whose row ``accept_row`` (default the
    last) has the accept state on cell 0, or None.  Branches follow the
    declared transition order; a head pushed past ``width`` kills the
    branch; rows after acceptance are do-nothing padding by virtue of the
    accept state's own transitions.
    """
    if steps < 1 or width < 1:
        raise ReductionError("table dimensions must be positive")
    if steps * width > cap:
        raise ResourceCapError("table of %d cells exceeds cap %d"
                               % (steps * width, cap))
    if accept_row is None:
        accept_row = steps - 1
    if not 0 <= accept_row < steps:
        raise ReductionError("accept row out of range")
    for ch in word:
        if ch not in ("0", "1"):
            raise ReductionError("input word must be over {0, 1}")
    if len(word) > width:
        return None
    tape = tuple(word[j] if j < len(word) else "_" for j in range(width))
    budget = [cap]

    def ok(rows):
        tape_, pos, state = rows[accept_row]
        return state == m.accept and pos == 0

    def dfs(rows):
        if budget[0] <= 0:
            raise ResourceCapError("simulation node cap exceeded")
        budget[0] -= 1
        if len(rows) == steps:
            return rows if ok(rows) else None
        tape_, pos, state = rows[-1]
        for t in m.transitions:
            if t.frm != state or t.read != tape_[pos]:
                continue
            new_tape = tape_[:pos] + (t.write,) + tape_[pos + 1:]
            if t.move == "L":
                new_pos = max(pos - 1, 0)
            else:
                new_pos = pos + 1
                if new_pos >= width:
                    continue
            found = dfs(rows + [(new_tape, new_pos, t.to)])
            if found is not None:
                return found
        return None

    run = dfs([(tape, 0, m.start)])
    if run is None:
        return None
    table = []
    for tape_, pos, state in run:
        row = []
        for j in range(width):
            if j == pos:
                head = state
            elif pos < j:
                head = LEFT
            else:
                head = RIGHT
            row.append(CellDescriptor(tape_[j], head))
        table.append(row)
    return table


def table_window(table, i, j, k):
    """The 2x2 window with upper-left (i, j), wrapping around the edges."""
    size = 1 << k
    return Square2x2(
        tl=table[i][j],
        tr=table[i][(j + 1) % size],
        bl=table[(i + 1) % size][j],
        br=table[(i + 1) % size][(j + 1) % size],
        row=i, col=j, k=k,
    )


# --- the window conditions: semantic oracle ----------------------------------------


def _rule_consistent(sq, m):
    """True iff the window fits some application of a transition rule.

    Content-only check (position handled separately): case split on where
    the head sits in the top row relative to the window's two columns.
    """
    tl, tr, bl, br = sq.tl, sq.tr, sq.bl, sq.br
    for t in m.transitions:
        qy = t.to
        # head on the left column
        if (tl.head == t.frm and tl.content == t.read and tr.head == LEFT
                and bl.content == t.write and br.content == tr.content):
            if t.move == "L":
                # the head leaves to the left, or stays put (cell-0 case)
                if (bl.head == LEFT or bl.head == qy) and br.head == LEFT:
                    return True
            else:
                if bl.head == RIGHT and br.head == qy:
                    return True
        # head on the right column
        if (tr.head == t.frm and tr.content == t.read and tl.head == RIGHT
                and br.content == t.write and bl.content == tl.content):
            if t.move == "L":
                if bl.head == qy and br.head == LEFT:
                    return True
            else:
                if bl.head == RIGHT and br.head == RIGHT:
                    return True
        # head somewhere to the left of the window
        if (tl.head == LEFT and tr.head == LEFT
                and bl.content == tl.content and br.content == tr.content):
            if t.move == "R":
                # it may step into the left column
                if bl.head == qy and br.head == LEFT:
                    return True
            if bl.head == LEFT and br.head == LEFT:
                return True
        # head somewhere to the right of the window
        if (tl.head == RIGHT and tr.head == RIGHT
                and bl.content == tl.content and br.content == tr.content):
            if t.move == "L":
                if bl.head == RIGHT and br.head == qy:
                    return True
            if bl.head == RIGHT and br.head == RIGHT:
                return True
    return False


def _wrap_row_ok(left, right):
    """Head-marker sanity for a column-wrapped window row.

    ``left`` is the last tape cell, ``right`` is cell 0; a single head
    somewhere on the tape allows exactly these marker combinations.
    """
    return (
        (left.is_state() and right.head == RIGHT)
        or (left.head == LEFT and right.is_state())
        or (left.head == LEFT and right.head == RIGHT)
    )


def square_oracle(sq, m, word, K):
    """Ground-truth admissibility of a 2x2 window at its position."""
    size = 1 << sq.k
    if not 1 <= K <= size:
        raise ReductionError("step bound does not fit the table")
    i, j = sq.row, sq.col
    entries = [
        (i, j, sq.tl),
        (i, (j + 1) % size, sq.tr),
        ((i + 1) % size, j, sq.bl),
        ((i + 1) % size, (j + 1) % size, sq.br),
    ]
    for r, c, e in entries:
        if not _descriptor_ok(e, m):
            return False
        if r == 0:
            want = word[c] if c < len(word) else "_"
            if e.content != want:
                return False
            if e.head != (m.start if c == 0 else LEFT):
                return False
        if r == K - 1 and c == 0 and e.head != m.accept:
            return False
    if i == size - 1:
        return True  # rows not consecutive in time
    if j == size - 1:
        return _wrap_row_ok(sq.tl, sq.tr) and _wrap_row_ok(sq.bl, sq.br)
    return _rule_consistent(sq, m)


# --- the window conditions: per-rule pattern generation -----------------------------


def admissible_squares(m, word=None, K=None):
    """Per transition rule, the content/head patterns consistent with it.

    Each pattern is a (tl, tr, bl, br) tuple of CellDescriptors; generation
    expands the head-position schemata for the rule over all tape symbols.
    """
    out = {}
    for t in m.transitions:
        pats = set()
        qx, a, b, qy = t.frm, t.read, t.write, t.to
        for z in SYMBOLS:
            # head on the left column, reading a
            tl = CellDescriptor(a, qx)
            tr = CellDescriptor(z, LEFT)
            if t.move == "L":
                pats.add((tl, tr, CellDescriptor(b, LEFT), CellDescriptor(z, LEFT)))
                pats.add((tl, tr, CellDescriptor(b, qy), CellDescriptor(z, LEFT)))
            else:
                pats.add((tl, tr, CellDescriptor(b, RIGHT), CellDescriptor(z, qy)))
        for y in SYMBOLS:
            # head on the right column
            tl = CellDescriptor(y, RIGHT)
            tr = CellDescriptor(a, qx)
            if t.move == "L":
                pats.add((tl, tr, CellDescriptor(y, qy), CellDescriptor(b, LEFT)))
            else:
                pats.add((tl, tr, CellDescriptor(y, RIGHT), CellDescriptor(b, RIGHT)))
        for y, z in itertools.product(SYMBOLS, SYMBOLS):
            # head outside to the left: contents copy down
            tl = CellDescriptor(y, LEFT)
            tr = CellDescriptor(z, LEFT)
            pats.add((tl, tr, CellDescriptor(y, LEFT), CellDescriptor(z, LEFT)))
            if t.move == "R":
                pats.add((tl, tr, CellDescriptor(y, qy), CellDescriptor(z, LEFT)))
            # head outside to the right
            tl = CellDescriptor(y, RIGHT)
            tr = CellDescriptor(z, RIGHT)
            pats.add((tl, tr, CellDescriptor(y, RIGHT), CellDescriptor(z, RIGHT)))
            if t.move == "L":
                pats.add((tl, tr, CellDescriptor(y, RIGHT), CellDescriptor(z, qy)))
        out[t] = pats
    return out


# --- game construction ----------------------------------------------------------

ENTRY_PREFIXES = ("", "s", "n", "ns")


class VarIndex:
    """Named access to a reduction's variable families."""

    def __init__(self, m, k, gadget_roles):
        self.k = k
        self.states = m.states
        self.time1 = var_bits("Time1", k)
        self.tape1 = var_bits("Tape1", k)
        self.flags1 = {
            "zero": "Zero1", "one": "One1", "left": "Left1", "right": "Right1",
            "state": {q: "State1." + q for q in m.states},
        }
        self.time2 = {p: var_bits(p + "Time2", k) for p in ENTRY_PREFIXES}
        self.tape2 = {p: var_bits(p + "Tape2", k) for p in ENTRY_PREFIXES}
        self.flags2 = {
            p: {
                "zero": p + "Zero2", "one": p + "One2",
                "left": p + "Left2", "right": p + "Right2",
                "state": {q: p + "State2." + q for q in m.states},
            }
            for p in ENTRY_PREFIXES
        }
        self.gadget = gadget_roles

    def entry1_vars(self):
        f = self.flags1
        return [f["zero"], f["one"], f["left"], f["right"]] + \
            [f["state"][q] for q in self.states]

    def entry2_vars(self, prefix):
        f = self.flags2[prefix]
        return [f["zero"], f["one"], f["left"], f["right"]] + \
            [f["state"][q] for q in self.states]

    def to_json(self):
        def seqs(d):
            return {k: list(v) for k, v in d.items()}
        return json.dumps({
            "k": self.k,
            "Time1": list(self.time1), "Tape1": list(self.tape1),
            "entry1": self.entry1_vars(),
            "Time2": {p: list(v) for p, v in self.time2.items()},
            "Tape2": {p: list(v) for p, v in self.tape2.items()},
            "entry2": {p: self.entry2_vars(p) for p in ENTRY_PREFIXES},
            "gadget": seqs(self.gadget),
        })


@dataclass
class ReductionOutput:
    game: BooleanGame
    payoff: list
    var_index: VarIndex
    k: int
    mode: str
    machine: TuringMachine
    word: str
    bound: int
    require: object       # the Require (or Illegal) formula
    gadget: object        # the 3/4-value gadget bundle


def _content_formula(flags, content):
    zero, one = Var(flags["zero"]), Var(flags["one"])
    if content == "0":
        return zero  # exclusivity comes from well-formedness
    if content == "1":
        return one
    return And((Not(zero), Not(one)))


def _head_formula(flags, head):
    if head == LEFT:
        return Var(flags["left"])
    if head == RIGHT:
        return Var(flags["right"])
    return Var(flags["state"][head])


def _descriptor_formula(flags, desc):
    return And((_content_formula(flags, desc.content),
                _head_formula(flags, desc.head)))


def _eq_const(bits, value, k):
    return build_comparison("equal", bits, const_bits(value, k))


def _succ_mod(x, y, k):
    top = const_bits((1 << k) - 1, k)
    zero = const_bits(0, k)
    return Or((
        build_comparison("succ", x, y),
        And((build_comparison("equal", x, top),
             build_comparison("equal", y, zero))),
    ))


def _build_require(m, word, K, k, vi):
    """(shape, well_formed, positional, consistency) subformulas."""
    size = 1 << k
    tape, time = vi.tape2, vi.time2
    shape = conj([
        _succ_mod(tape[""], tape["s"], k),
        _succ_mod(time[""], time["n"], k),
        build_comparison("equal", tape[""], tape["n"]),
        build_comparison("equal", time[""], time["s"]),
        build_comparison("equal", tape["s"], tape["ns"]),
        build_comparison("equal", time["n"], time["ns"]),
    ])
    well_formed = conj([
        conj([
            build_cardinality("one_of", [vi.flags2[p]["left"],
                                         vi.flags2[p]["right"]]
                              + [vi.flags2[p]["state"][q] for q in m.states]),
            Not(And((Var(vi.flags2[p]["one"]), Var(vi.flags2[p]["zero"])))),
        ])
        for p in ENTRY_PREFIXES
    ])
    positional = []
    for p in ENTRY_PREFIXES:
        tv, pv, flags = time[p], tape[p], vi.flags2[p]
        at_zero = _eq_const(tv, 0, k)
        for c in range(size):
            desc = CellDescriptor(
                word[c] if c < len(word) else "_",
                m.start if c == 0 else LEFT,
            )
            positional.append(Implies(
                And((at_zero, _eq_const(pv, c, k))),
                _descriptor_formula(flags, desc),
            ))
        positional.append(Implies(
            And((_eq_const(tv, K - 1, k), _eq_const(pv, 0, k))),
            Var(flags["state"][m.accept]),
        ))
    positional = conj(positional)

    patterns = set()
    for pats in admissible_squares(m).values():
        patterns |= pats
    rule_disj = disj(sorted(
        (conj([_descriptor_formula(vi.flags2[p], d)
               for p, d in zip(ENTRY_PREFIXES, pat)])
         for pat in patterns),
        key=str,
    ))

    def wrap_row(pa, pb):
        fa, fb = vi.flags2[pa], vi.flags2[pb]
        a_state = disj([Var(fa["state"][q]) for q in m.states])
        b_state = disj([Var(fb["state"][q]) for q in m.states])
        return Or((
            And((a_state, Var(fb["right"]))),
            And((Var(fa["left"]), b_state)),
            And((Var(fa["left"]), Var(fb["right"]))),
        ))

    time_wrapped = _eq_const(time[""], size - 1, k)
    col_wrapped = _eq_const(tape[""], size - 1, k)
    consistency = Or((
        time_wrapped,
        And((col_wrapped, wrap_row("", "s"), wrap_row("n", "ns"))),
        And((Not(col_wrapped), rule_disj)),
    ))
    return shape, well_formed, positional, consistency


def _corner_match(vi, prefix):
    return And((
        build_comparison("equal", vi.tape1, vi.tape2[prefix]),
        build_comparison("equal", vi.time1, vi.time2[prefix]),
    ))


def _agree(m, vi):
    parts = []
    for p in ENTRY_PREFIXES:
        f1, f2 = vi.flags1, vi.flags2[p]
        same = conj(
            [Iff(Var(f1["zero"]), Var(f2["zero"])),
             Iff(Var(f1["one"]), Var(f2["one"])),
             Iff(Var(f1["left"]), Var(f2["left"])),
             Iff(Var(f1["right"]), Var(f2["right"]))]
            + [Iff(Var(f1["state"][q]), Var(f2["state"][q]))
               for q in m.states]
        )
        parts.append(Implies(_corner_match(vi, p), same))
    return conj(parts)


def _bound_width(K):
    if K < 1:
        raise ReductionError("step bound must be positive")
    return max(1, (K - 1).bit_length())


def _build_reduction(m, word, K, mode, cap):
    k = _bound_width(K)
    size = 1 << k
    if size * size > cap:
        raise ResourceCapError("table of %d entries exceeds cap" % (size * size))
    gadget = fixed_value_game(Fraction(3, 4), "g34")
    vi = VarIndex(m, k, gadget.role_vars)
    shape, well_formed, positional, consistency = _build_require(m, word, K, k, vi)

    avoid_corner = Not(_corner_match(vi, ""))
    avoid = conj([Not(_corner_match(vi, p)) for p in ("s", "n", "ns")])
    g1_goal, g2_goal = gadget.game.goals

    gamma1 = And((avoid_corner, Or((avoid, g1_goal))))
    if mode == "exists":
        require = conj([shape, well_formed, positional, consistency])
    else:
        require = conj([shape, well_formed,
                        Not(And((positional, consistency)))])
    gamma2 = conj([
        Or((Not(avoid_corner), And((Not(avoid), g2_goal)))),
        _agree(m, vi),
        require,
    ])

    var1 = (list(vi.time1) + list(vi.tape1) + vi.entry1_vars()
            + list(gadget.game.var_sets[0]))
    var2 = []
    for p in ENTRY_PREFIXES:
        var2 += list(vi.time2[p]) + list(vi.tape2[p]) + vi.entry2_vars(p)
    var2 += list(gadget.game.var_sets[1])
    game = BooleanGame([var1, var2], [gamma1, gamma2])

    if mode == "exists":
        v2 = Fraction(1, size * size) + Fraction(3, size * size * 4)
    else:
        if k < 2:
            raise ReductionError("the guaranteed-payoff formula needs k >= 2")
        n2k = 1 << (2 * k)
        n2k2 = 1 << (2 * k + 2)
        delta = Fraction(1, n2k2) - Fraction(1, n2k2 * n2k)
        v2 = (Fraction(1, n2k) + delta / (n2k - 4)
              + Fraction(2, n2k2) + 2 * delta / (n2k2 - 16))
    return ReductionOutput(
        game=game, payoff=[Fraction(0), v2], var_index=vi, k=k, mode=mode,
        machine=m, word=word, bound=K, require=require, gadget=gadget,
    )


def build_guarantee_game(m, word, K, cap=DEFAULT_NODE_CAP):
    """Game where player 2 can be guaranteed payoff[2] in some equilibrium
    iff the machine accepts the word within K steps."""
    return _build_reduction(m, word, K, "exists", cap)


def build_forall_guarantee_game(m, word, K, cap=DEFAULT_NODE_CAP):
    """Variant where player 2 hunts for an illegal window; she is guaranteed
    payoff[2] in every equilibrium iff the machine does not accept."""
    return _build_reduction(m, word, K, "forall", cap)


# --- witnesses and decoding -------------------------------------------------------


def _set_bits(assign, bits, value, k):
    for name, ch in zip(bits, const_bits(value, k)):
        assign[name] = ch


def _set_entry(assign, flags, desc, states):
    assign[flags["zero"]] = desc.content == "0"
    assign[flags["one"]] = desc.content == "1"
    assign[flags["left"]] = desc.head == LEFT
    assign[flags["right"]] = desc.head == RIGHT
    for q in states:
        assign[flags["state"][q]] = desc.head == q


def witness_profile(ro, table):
    """The run-describing profile: player 1 uniform over table entries,
    player 2 uniform over windows, both with the side-game equilibrium."""
    size = 1 << ro.k
    if len(table) != size or any(len(row) != size for row in table):
        raise ReductionError("table does not match the game's dimensions")
    vi = ro.var_index
    g_eq = ro.gadget.equilibrium
    cells = Fraction(1, size * size)

    support1 = []
    for i in range(size):
        for j in range(size):
            base = {}
            _set_bits(base, vi.time1, i, ro.k)
            _set_bits(base, vi.tape1, j, ro.k)
            _set_entry(base, vi.flags1, table[i][j], ro.machine.states)
            for g_assign, g_w in g_eq.strategies[0]:
                merged = dict(base)
                merged.update(g_assign)
                support1.append((merged, cells * g_w))

    support2 = []
    for i in range(size):
        for j in range(size):
            base = {}
            sq = table_window(table, i, j, ro.k)
            _set_bits(base, vi.time2[""], i, ro.k)
            _set_bits(base, vi.tape2[""], j, ro.k)
            _set_bits(base, vi.time2["s"], i, ro.k)
            _set_bits(base, vi.tape2["s"], (j + 1) % size, ro.k)
            _set_bits(base, vi.time2["n"], (i + 1) % size, ro.k)
            _set_bits(base, vi.tape2["n"], j, ro.k)
            _set_bits(base, vi.time2["ns"], (i + 1) % size, ro.k)
            _set_bits(base, vi.tape2["ns"], (j + 1) % size, ro.k)
            for p, desc in zip(ENTRY_PREFIXES, (sq.tl, sq.tr, sq.bl, sq.br)):
                _set_entry(base, vi.flags2[p], desc, ro.machine.states)
            for g_assign, g_w in g_eq.strategies[1]:
                merged = dict(base)
                merged.update(g_assign)
                support2.append((merged, cells * g_w))

    return MixedProfile([support1, support2])


def _decode_entry(assign, flags, states):
    content_bits = (assign[flags["zero"]], assign[flags["one"]])
    if content_bits == (True, False):
        content = "0"
    elif content_bits == (False, True):
        content = "1"
    elif content_bits == (False, False):
        content = "_"
    else:
        return None
    heads = []
    if assign[flags["left"]]:
        heads.append(LEFT)
    if assign[flags["right"]]:
        heads.append(RIGHT)
    heads += [q for q in states if assign[flags["state"][q]]]
    if len(heads) != 1:
        return None
    return CellDescriptor(content, heads[0])


def decode_square(ro, assign):
    """Player 2's assignment as a positioned window, or None if the shape
    or well-formedness conditions fail."""
    vi = ro.var_index
    k, size = ro.k, 1 << ro.k

    def val(bits):
        return sum(1 << idx for idx, name in enumerate(bits) if assign[name])

    i, j = val(vi.time2[""]), val(vi.tape2[""])
    want = {
        "s": (i, (j + 1) % size),
        "n": ((i + 1) % size, j),
        "ns": ((i + 1) % size, (j + 1) % size),
    }
    for p, (r, c) in want.items():
        if val(vi.time2[p]) != r or val(vi.tape2[p]) != c:
            return None
    entries = []
    for p in ENTRY_PREFIXES:
        e = _decode_entry(assign, vi.flags2[p], ro.machine.states)
        if e is None:
            return None
        entries.append(e)
    return Square2x2(entries[0], entries[1], entries[2], entries[3], i, j, k)


def oracle_requires(ro, assign):
    """The independent pipeline equivalent of the Require formula (or, for
    the forall variant, of Illegal): decode, then consult square_oracle."""
    sq = decode_square(ro, assign)
    if sq is None:
        return False
    admissible = square_oracle(sq, ro.machine, ro.word, ro.bound)
    return admissible if ro.mode == "exists" else not admissible


# --- cover-weight system ----------------------------------------------------------


def cover_matrix_check(m, cap=64):
    """Nonsingularity of the m^2 x m^2 cover-weight system: each equation
    reads 4*x[i][j] + x[i-1][j] + x[i][j-1] + x[i-1][j-1], indices mod m."""
    if m < 2:
        raise ReductionError("need m >= 2")
    if m > cap:
        raise ResourceCapError("matrix dimension %d exceeds cap" % m)
    n = m * m

    def idx(i, j):
        return (i % m) * m + (j % m)

    rows = []
    for i in range(m):
        for j in range(m):
            row = [Fraction(0)] * n
            row[idx(i, j)] += 4
            row[idx(i - 1, j)] += 1
            row[idx(i, j - 1)] += 1
            row[idx(i - 1, j - 1)] += 1
            rows.append(row)
    # exact Gaussian elimination; determinant is nonzero iff full rank
    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, n) if rows[r][col] != 0), None)
        if pivot is None:
            return False
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = Fraction(1) / pr[col]
        for r in range(rank + 1, n):
            f = rows[r][col] * inv
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], pr)]
        rank += 1
    return True


# --- game transformations -----------------------------------------------------------


def _check_fresh(g, new_vars):
    clash = set(g.all_vars()) & set(new_vars)
    if clash:
        raise ReductionError("variable collision: %s" % sorted(clash)[0])


def _neg_all(names):
    return conj([Not(Var(v)) for v in names])


def transform_game(kind, g, v, namespace="t"):
    """Equilibrium-structure transformations of a two-player game.

    unique_nash: the result has a unique equilibrium iff no equilibrium of
    g guarantees the payoff pair v.  forall_nash_sat: returns (game, phi)
    where phi holds in every equilibrium iff no equilibrium guarantees v.
    irrational: v is a scalar; the result has an irrational equilibrium iff
    some equilibrium of g gives player 1 at least v.
    """
    if g.players != 2:
        raise ReductionError("transformations are defined for two players")
    ns = namespace
    if kind in ("unique_nash", "forall_nash_sat"):
        v1, v2 = (Fraction(x) for x in v)
        for x in (v1, v2):
            if not 0 <= x <= 1:
                raise ReductionError("payoffs must lie in [0, 1]")
        gu = fixed_value_game(v1, namespaced(ns, "gu"))
        gw = fixed_value_game(1 - v2, namespaced(ns, "gw"))
        play1, play2 = namespaced(ns, "Play1"), namespaced(ns, "Play2")
        gu1, gu2 = gu.game.goals
        gw1, gw2 = gw.game.goals
        var1 = list(g.var_sets[0]) + list(gu.game.var_sets[0]) \
            + list(gw.game.var_sets[0]) + [play1]
        var2 = list(g.var_sets[1]) + list(gu.game.var_sets[1]) \
            + list(gw.game.var_sets[1]) + [play2]
        if kind == "unique_nash":
            dummy1, dummy2 = namespaced(ns, "Dummy1"), namespaced(ns, "Dummy2")
            var1.append(dummy1)
            var2.append(dummy2)
            _check_fresh(g, var1[len(g.var_sets[0]):] + var2[len(g.var_sets[1]):])
            gamma1 = And((gw1, Or((
                And((Not(Var(play1)), Not(Var(play2)), g.goals[0])),
                And((Var(play1), Not(Var(dummy1)),
                     _neg_all(g.var_sets[0]), gu1)),
            ))))
            gamma2 = And((gu2, Or((
                And((Not(Var(play1)), Not(Var(play2)), g.goals[1])),
                And((Var(play2), Not(Var(dummy2)),
                     _neg_all(g.var_sets[1]), gw2)),
            ))))
            return BooleanGame([var1, var2], [gamma1, gamma2]), None
        _check_fresh(g, var1[len(g.var_sets[0]):] + var2[len(g.var_sets[1]):])
        gamma1 = Or((
            And((Not(Var(play1)), Not(Var(play2)), g.goals[0])),
            And((Var(play1), gu1)),
            And((Var(play2), gw1)),
        ))
        gamma2 = Or((
            And((Not(Var(play1)), Not(Var(play2)), g.goals[1])),
            And((Var(play1), gu2)),
            And((Var(play2), gw2)),
        ))
        phi = Or((Var(play1), Var(play2)))
        return BooleanGame([var1, var2], [gamma1, gamma2]), phi
    if kind == "irrational":
        value = Fraction(v)
        if not 0 <= value <= 1:
            raise ReductionError("payoff must lie in [0, 1]")
        gv = fixed_value_game(value, namespaced(ns, "gv"))
        gv1, gv2 = gv.game.goals
        dummy = namespaced(ns, "Dummy")
        choice1, choice2 = namespaced(ns, "Choice1"), namespaced(ns, "Choice2")
        var1 = list(g.var_sets[0]) + [dummy, choice1] + list(gv.game.var_sets[0])
        var2 = list(g.var_sets[1]) + [choice2] + list(gv.game.var_sets[1])
        _check_fresh(g, var1[len(g.var_sets[0]):] + var2[len(g.var_sets[1]):])
        # player 1's fallback needs only his own refusal; player 2's needs both
        gamma1 = Or((
            And((g.goals[0], Var(choice1), Var(choice2))),
            And((gv1, Not(Var(choice1)), Not(Var(dummy)),
                 _neg_all(g.var_sets[0]))),
        ))
        gamma2 = Or((
            And((g.goals[1], Var(choice1), Var(choice2))),
            And((gv2, Not(Var(choice1)), Not(Var(choice2)),
                 _neg_all(g.var_sets[1]))),
        ))
        return BooleanGame([var1, var2], [gamma1, gamma2]), None
    raise ReductionError("unknown transformation %r" % (kind,))


EXISTS_SAT_NAMESPACE = "half"


def transform_exists_nash_sat(m, word, K, cap=DEFAULT_NODE_CAP):
    """Guarantee game recast as a satisfaction query: returns (game, phi)
    where phi holds with probability 1 in some equilibrium iff the machine
    accepts.  The side game uses the fixed namespace EXISTS_SAT_NAMESPACE."""
    ro = build_guarantee_game(m, word, K, cap=cap)
    half = fixed_value_game(Fraction(1, 2), EXISTS_SAT_NAMESPACE)
    h1, h2 = half.game.goals
    g1, g2 = ro.game.goals
    var1 = list(ro.game.var_sets[0]) + list(half.game.var_sets[0])
    var2 = list(ro.game.var_sets[1]) + list(half.game.var_sets[1])
    gamma1 = And((g1, h1))
    gamma2 = Or((g2, And((Not(g1), h2))))
    phi = Or((g1, g2))
    return BooleanGame([var1, var2], [gamma1, gamma2]), phi
