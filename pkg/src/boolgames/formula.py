"""Propositional formulas: AST, parser, renderer, evaluation.

Variables are plain strings (letters, digits, underscore, dot; not starting
with a digit).  Connective precedence, tightest first: ~  &  |  ->  <->.
"->" associates to the right, "<->" to the left; "&" and "|" parse into
n-ary And/Or nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class FormulaError(Exception):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message, line, col):
        super().__init__("%s (line %d, column %d)" % (message, line, col))
        self.line = line
        self.col = col


class MissingVariableError(FormulaError):
    def __init__(self, name):
        super().__init__("unbound variable: %s" % name)
        self.name = name


class RenameError(FormulaError):
    pass


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class ConstTrue:
    pass


@dataclass(frozen=True)
class ConstFalse:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple  # length >= 2

    def __post_init__(self):
        if len(self.children) < 2:
            raise FormulaError("And requires at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple  # length >= 2

    def __post_init__(self):
        if len(self.children) < 2:
            raise FormulaError("Or requires at least two children")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = object  # any of the node classes above

TRUE = ConstTrue()
FALSE = ConstFalse()

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")


def is_valid_var(name):
    m = _IDENT_RE.match(name)
    return bool(m) and m.end() == len(name) and name not in ("T", "F")


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(<->|->|[~&|()]|[A-Za-z_][A-Za-z0-9_.]*)")


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.tokens = []  # (token, line, col)
        line, col = 1, 1
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
                continue
            if ch.isspace():
                col += 1
                i += 1
                continue
            m = _TOKEN_RE.match(text, i)
            if not m or m.start(1) != i:
                raise FormulaSyntaxError("unexpected character %r" % ch, line, col)
            tok = m.group(1)
            self.tokens.append((tok, line, col))
            col += len(tok)
            i = m.end(1)
        # trailing EOF marker for error reporting
        self.tokens.append((None, line, col))
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx][0]

    def next(self):
        tok = self.tokens[self.idx]
        if tok[0] is not None:
            self.idx += 1
        return tok

    def error(self, message):
        _, line, col = self.tokens[self.idx]
        raise FormulaSyntaxError(message, line, col)


def parse_formula(text):
    """Parse ``text`` into a Formula AST."""
    ts = _Tokens(text)
    f = _parse_iff(ts)
    if ts.peek() is not None:
        ts.error("unexpected token %r" % ts.peek())
    return f


def _parse_iff(ts):
    f = _parse_imp(ts)
    while ts.peek() == "<->":
        ts.next()
        f = Iff(f, _parse_imp(ts))
    return f


def _parse_imp(ts):
    f = _parse_or(ts)
    if ts.peek() == "->":
        ts.next()
        return Implies(f, _parse_imp(ts))
    return f


def _parse_or(ts):
    parts = [_parse_and(ts)]
    while ts.peek() == "|":
        ts.next()
        parts.append(_parse_and(ts))
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _parse_and(ts):
    parts = [_parse_unary(ts)]
    while ts.peek() == "&":
        ts.next()
        parts.append(_parse_unary(ts))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def _parse_unary(ts):
    tok = ts.peek()
    if tok == "~":
        ts.next()
        return Not(_parse_unary(ts))
    if tok == "(":
        ts.next()
        f = _parse_iff(ts)
        if ts.peek() != ")":
            ts.error("expected ')'")
        ts.next()
        return f
    if tok == "T":
        ts.next()
        return TRUE
    if tok == "F":
        ts.next()
        return FALSE
    if tok is not None and _IDENT_RE.fullmatch(tok):
        ts.next()
        return Var(tok)
    ts.error("expected a formula, got %r" % tok)


# --- rendering -------------------------------------------------------------

# precedence levels, loosest first
_LVL_IFF, _LVL_IMP, _LVL_OR, _LVL_AND, _LVL_UNARY = range(5)


def _level(f):
    if isinstance(f, Iff):
        return _LVL_IFF
    if isinstance(f, Implies):
        return _LVL_IMP
    if isinstance(f, Or):
        return _LVL_OR
    if isinstance(f, And):
        return _LVL_AND
    return _LVL_UNARY


def _render(f, min_level):
    lvl = _level(f)
    if isinstance(f, ConstTrue):
        s = "T"
    elif isinstance(f, ConstFalse):
        s = "F"
    elif isinstance(f, Var):
        s = f.name
    elif isinstance(f, Not):
        s = "~" + _render(f.child, _LVL_UNARY)
    elif isinstance(f, And):
        # children at strictly tighter level so n-ary structure survives
        s = " & ".join(_render(c, _LVL_AND + 1) for c in f.children)
    elif isinstance(f, Or):
        s = " | ".join(_render(c, _LVL_OR + 1) for c in f.children)
    elif isinstance(f, Implies):
        s = _render(f.left, _LVL_IMP + 1) + " -> " + _render(f.right, _LVL_IMP)
    elif isinstance(f, Iff):
        s = _render(f.left, _LVL_IFF) + " <-> " + _render(f.right, _LVL_IFF + 1)
    else:
        raise FormulaError("not a formula node: %r" % (f,))
    if lvl < min_level:
        return "(" + s + ")"
    return s


def render_formula(f):
    """Render ``f`` with minimal parentheses; reparses to an equal AST."""
    return _render(f, _LVL_IFF)


# --- traversal -------------------------------------------------------------


def _iter_vars(f):
    """Yield variable names in left-to-right depth-first order (with repeats)."""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            yield node.name
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(reversed(node.children))
        elif isinstance(node, (Implies, Iff)):
            stack.append(node.right)
            stack.append(node.left)


def free_vars(f):
    """The set of variable names occurring in ``f``."""
    return set(_iter_vars(f))


def formula_size(f):
    """Node count of the AST."""
    n = 0
    stack = [f]
    while stack:
        node = stack.pop()
        n += 1
        if isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        elif isinstance(node, (Implies, Iff)):
            stack.append(node.left)
            stack.append(node.right)
    return n


def rename_vars(f, mapping):
    """Rename free variables of ``f`` by ``mapping`` (must be injective on them)."""
    fv = free_vars(f)
    relevant = {v: mapping[v] for v in fv if v in mapping}
    targets = list(relevant.values())
    if len(set(targets)) != len(targets):
        raise RenameError("renaming is not injective on the formula's variables")

    def go(node):
        if isinstance(node, Var):
            return Var(relevant[node.name]) if node.name in relevant else node
        if isinstance(node, Not):
            return Not(go(node.child))
        if isinstance(node, And):
            return And(tuple(go(c) for c in node.children))
        if isinstance(node, Or):
            return Or(tuple(go(c) for c in node.children))
        if isinstance(node, Implies):
            return Implies(go(node.left), go(node.right))
        if isinstance(node, Iff):
            return Iff(go(node.left), go(node.right))
        return node

    return go(f)


# --- evaluation ------------------------------------------------------------


def eval_formula(f, assignment):
    """Truth value of ``f`` under ``assignment`` (a dict name -> bool).

    Raises MissingVariableError naming the first (depth-first) unbound
    variable if the assignment does not cover the formula.
    """
    for name in _iter_vars(f):
        if name not in assignment:
            raise MissingVariableError(name)
    return _eval(f, assignment)


def _eval(f, a):
    if isinstance(f, Var):
        return a[f.name]
    if isinstance(f, ConstTrue):
        return True
    if isinstance(f, ConstFalse):
        return False
    if isinstance(f, Not):
        return not _eval(f.child, a)
    if isinstance(f, And):
        return all(_eval(c, a) for c in f.children)
    if isinstance(f, Or):
        return any(_eval(c, a) for c in f.children)
    if isinstance(f, Implies):
        return (not _eval(f.left, a)) or _eval(f.right, a)
    if isinstance(f, Iff):
        return _eval(f.left, a) == _eval(f.right, a)
    raise FormulaError("not a formula node: %r" % (f,))


def compile_formula(f):
    """Compile ``f`` to a fast callable taking an assignment dict.

    Used on hot paths (large deviation sweeps); semantically identical to
    eval_formula on complete assignments.
    """
    names = {}

    def expr(node):
        if isinstance(node, Var):
            if node.name not in names:
                names[node.name] = "v%d" % len(names)
            return names[node.name]
        if isinstance(node, ConstTrue):
            return "True"
        if isinstance(node, ConstFalse):
            return "False"
        if isinstance(node, Not):
            return "(not %s)" % expr(node.child)
        if isinstance(node, And):
            return "(" + " and ".join(expr(c) for c in node.children) + ")"
        if isinstance(node, Or):
            return "(" + " or ".join(expr(c) for c in node.children) + ")"
        if isinstance(node, Implies):
            return "((not %s) or %s)" % (expr(node.left), expr(node.right))
        if isinstance(node, Iff):
            return "(%s == %s)" % (expr(node.left), expr(node.right))
        raise FormulaError("not a formula node: %r" % (node,))

    body = expr(f)
    ordered = sorted(names, key=lambda n: names[n])
    args = ", ".join(names[n] for n in ordered)
    src = "def _compiled(%s):\n    return %s\n" % (args, body)
    env = {}
    exec(src, env)  # noqa: S102 - generated from our own AST
    fn = env["_compiled"]
    keys = ordered

    def call(assignment):
        return fn(*[assignment[k] for k in keys])

    call.keys = keys  # positional argument order of .raw
    call.raw = fn
    return call


# --- convenience constructors ----------------------------------------------


def conj(parts):
    """And over any number of formulas (empty -> T, singleton -> itself)."""
    parts = list(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def disj(parts):
    """Or over any number of formulas (empty -> F, singleton -> itself)."""
    parts = list(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(tuple(parts))
