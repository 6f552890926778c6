"""Command-line surface: batch analysis, instance generation, verification.

Exit codes: 0 = yes/ok, 1 = no (decision verbs), 2 = usage or input error,
3 = resource cap exceeded.  Results go to stdout as JSON (or key: value
lines with --format text); diagnostics go to stderr.  All rationals are
rendered as reduced "a/b" strings.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import encodings, gadgets, game, reductions, solver
from .formula import (
    FormulaError,
    compile_formula,
    free_vars,
    parse_formula,
    render_formula,
)
from .game import (
    BooleanGame,
    GameError,
    NormalForm,
    ResourceCapError,
    parse_game,
    profile_from_json,
    profile_to_json,
    render_game,
)
from .lp import LpError
from .reductions import ReductionError
from .solver import SolverError


class UsageError(Exception):
    pass


def _fr(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError("bad rational %r (want a/b)" % (text,))


def _fr_str(x):
    return str(Fraction(x))


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError("cannot read %s: %s" % (path, e))


def load_game(path):
    """Boolean game (textual format) or normal form (JSON with payoffs)."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
            return NormalForm(data["payoffs"])
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise UsageError("bad normal-form file %s: %s" % (path, e))
    return parse_game(text)


def load_machine(path):
    return reductions.TuringMachine.from_json(_read(path))


def _emit(data, fmt):
    if fmt == "text":
        for key, value in data.items():
            print("%s: %s" % (key, value))
    else:
        print(json.dumps(data))


def _witness_json(w):
    if w is None:
        return None
    return {
        "x": {str(i): str(v) for i, v in sorted(w.x.items())},
        "y": {str(j): str(v) for j, v in sorted(w.y.items())},
        "payoffs": [str(p) for p in w.payoffs],
    }


def _decision(answer, extra=None, mode="exact"):
    data = {"answer": "yes" if answer else "no", "mode": mode}
    if extra:
        data.update(extra)
    return (0 if answer else 1), data


def _parse_assign(text):
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError("bad assignment item %r (want name=0|1)" % item)
        name, _, val = item.partition("=")
        if val not in ("0", "1"):
            raise UsageError("assignment values must be 0 or 1")
        out[name.strip()] = val == "1"
    return out


# --- handlers ---------------------------------------------------------------


def cmd_check(args):
    g = load_game(args.game)
    if isinstance(g, NormalForm):
        return 0, {"ok": True, "kind": "normal-form",
                   "shape": list(g.shape), "players": g.players}
    return 0, {"ok": True, "kind": "boolean", "players": g.players,
               "vars": [list(vs) for vs in g.var_sets]}


def cmd_eval(args):
    if args.formula is not None:
        f = parse_formula(args.formula)
        assign = _parse_assign(args.assign or "")
        from .formula import eval_formula
        return 0, {"value": bool(eval_formula(f, assign))}
    if args.game is None or args.profile is None:
        raise UsageError("eval needs --formula or both --game and --profile")
    g = load_game(args.game)
    if isinstance(g, NormalForm):
        raise UsageError("eval --profile works on Boolean games")
    profile = profile_from_json(_read(args.profile), g)
    utilities = [
        _fr_str(game.expected_utility(g, profile, i)) for i in range(g.players)
    ]
    return 0, {"utilities": utilities}


def cmd_normal_form(args):
    g = load_game(args.game)
    nf = solver.as_normal_form(g, cap=args.cap_cells)
    def render(t):
        if isinstance(t, list):
            return [render(x) for x in t]
        return str(t)
    return 0, {"shape": list(nf.shape),
               "payoffs": [render(t) for t in nf.payoffs]}


def cmd_value(args):
    nf = solver.as_normal_form(load_game(args.game), cap=args.cap_cells)
    c = solver.constant_sum(nf)
    if c is None:
        raise UsageError("value is defined for constant-sum games")
    value, strategy = solver.zero_sum_value(nf)
    return 0, {"value": _fr_str(value), "constant": _fr_str(c),
               "maxmin": [_fr_str(w) for w in strategy]}


def cmd_nash(args):
    g = load_game(args.game) if args.game else None
    if args.what == "find":
        w = solver.exists_guarantee_nash(g, (0, 0), cap=args.cap_deviations)
        return _decision(w is not None, {"witness": _witness_json(w)})
    if args.what == "unique":
        return _decision(solver.unique_nash(g, cap=args.cap_deviations))
    if args.what == "pure":
        eqs = solver.pure_equilibria(g, cap=args.cap_cells)
        shown = [list(e) if isinstance(e, tuple) else
                 {k: v for k, v in sorted(e.items())} for e in eqs]
        return _decision(bool(eqs), {"equilibria": shown})
    if args.what == "irrational":
        ans = solver.irrational_nash(g, cap=args.cap_deviations,
                                     zero_sum_fast_path=args.zero_sum)
        return _decision(ans)
    if args.what == "guarantee":
        v = [_fr(x) for x in args.payoffs.split(",")]
        w = solver.exists_guarantee_nash(g, v, cap=args.cap_deviations)
        return _decision(w is not None, {"witness": _witness_json(w)})
    if args.what == "forall-guarantee":
        v = [_fr(x) for x in args.payoffs.split(",")]
        return _decision(solver.forall_guarantee_nash(g, v,
                                                      cap=args.cap_deviations))
    if args.what == "sat":
        phi = parse_formula(args.formula)
        ans = solver.nash_sat(g, phi, args.mode, cap=args.cap_deviations,
                              cell_cap=args.cap_cells)
        return _decision(ans)
    if args.what == "is":
        if isinstance(g, NormalForm):
            raise UsageError("nash is works on Boolean games")
        profile = profile_from_json(_read(args.profile), g)
        ans = solver.is_nash(g, profile, cap=args.cap_deviations,
                             sample=args.sample, seed=args.seed)
        return _decision(ans,
                         mode="sampled" if args.sample else "exact")
    raise UsageError("unknown nash query %r" % args.what)


def cmd_gadget(args):
    if args.what == "build":
        b = gadgets.fixed_value_game(_fr(args.value), args.namespace)
        return 0, {
            "value": _fr_str(b.value),
            "game": render_game(b.game),
            "roles": {k: list(v) for k, v in b.role_vars.items()},
            "equilibrium": json.loads(profile_to_json(b.equilibrium)),
        }
    if args.what == "value":
        b = gadgets.fixed_value_game(_fr(args.value), args.namespace)
        nf = solver.as_normal_form(b.game, cap=args.cap_cells)
        value, _ = solver.zero_sum_value(nf)
        return _decision(value == b.value, {"value": _fr_str(value)})
    if args.what == "combine":
        b1 = gadgets.fixed_value_game(_fr(args.a), "a")
        b2 = gadgets.fixed_value_game(_fr(args.b), "b") if args.b else None
        c = gadgets.combine_games(args.kind, b1, b2, namespace=args.namespace)
        return 0, {"value": _fr_str(c.value), "game": render_game(c.game)}
    raise UsageError("unknown gadget command %r" % args.what)


def cmd_encode(args):
    kind = args.what
    def operand(tok, m):
        tok = tok.strip()
        if tok.lstrip("-").isdigit():
            return encodings.const_bits(int(tok), m)
        return encodings.var_bits(tok, m)
    if kind in ("equal", "succ", "less", "lesseq"):
        ops = args.args.split(",")
        if len(ops) != 2:
            raise UsageError("%s takes two operands" % kind)
        m = args.width
        name = "less_eq" if kind == "lesseq" else kind
        f = encodings.build_comparison(name, operand(ops[0], m), operand(ops[1], m))
    elif kind in ("add", "sub"):
        ops = args.args.split(",")
        if len(ops) != 3:
            raise UsageError("%s takes three operands" % kind)
        m = args.width
        f = encodings.build_arithmetic(kind, operand(ops[0], m),
                                       operand(ops[1], m), operand(ops[2], m))
    elif kind == "square":
        k = args.k
        r = encodings.var_bits("R", k)
        rsq = encodings.var_bits("Rsq", 2 * k)
        summands = [encodings.var_bits("S%d" % j, 2 * k) for j in range(k)]
        partials = [encodings.var_bits("P%d" % j, 2 * k) for j in range(k + 1)]
        f = encodings.build_square(r, rsq, summands, partials)
    elif kind in ("oneof", "noneof"):
        names = [s.strip() for s in args.names.split(",")]
        f = encodings.build_cardinality(
            "one_of" if kind == "oneof" else "none_of", names)
    else:
        raise UsageError("unknown encode kind %r" % kind)
    return 0, {"formula": render_formula(f),
               "vars": sorted(free_vars(f))}


def cmd_reduce(args):
    if args.what in ("nexptm", "forall-nexptm"):
        m = load_machine(args.machine)
        build = (reductions.build_guarantee_game if args.what == "nexptm"
                 else reductions.build_forall_guarantee_game)
        ro = build(m, args.input, args.bound)
        data = {"v2": _fr_str(ro.payoff[1]), "v1": _fr_str(ro.payoff[0]),
                "k": ro.k, "mode": ro.mode}
        if args.out:
            with open(args.out + ".game", "w") as fh:
                fh.write(render_game(ro.game))
            with open(args.out + ".vars.json", "w") as fh:
                fh.write(ro.var_index.to_json())
            data["game_file"] = args.out + ".game"
        else:
            data["game"] = render_game(ro.game)
        if args.emit_witness:
            size = 1 << ro.k
            table = reductions.simulate_tm(m, args.input, size, size,
                                           accept_row=args.bound - 1)
            if table is None:
                data["witness"] = None
            else:
                wp = reductions.witness_profile(ro, table)
                if args.out:
                    with open(args.out + ".witness.json", "w") as fh:
                        fh.write(profile_to_json(wp))
                    data["witness"] = args.out + ".witness.json"
                else:
                    data["witness"] = json.loads(profile_to_json(wp))
        return 0, data
    if args.what == "transform":
        if args.kind == "exists-nash-sat":
            m = load_machine(args.machine)
            g2, phi = reductions.transform_exists_nash_sat(
                m, args.input, args.bound)
        else:
            g = load_game(args.game)
            if isinstance(g, NormalForm):
                raise UsageError("transform works on Boolean games")
            kind = args.kind.replace("-", "_")
            if kind == "irrational":
                v = _fr(args.value)
            else:
                v = [_fr(x) for x in args.payoffs.split(",")]
            g2, phi = reductions.transform_game(kind, g, v,
                                                namespace=args.namespace)
        data = {"game": render_game(g2)}
        if phi is not None:
            data["phi"] = render_formula(phi)
        return 0, data
    raise UsageError("unknown reduce command %r" % args.what)


def cmd_verify(args):
    if args.what == "cover-matrix":
        return _decision(reductions.cover_matrix_check(args.m))
    m = load_machine(args.machine)
    if args.what == "witness":
        ro = reductions.build_guarantee_game(m, args.input, args.bound)
        size = 1 << ro.k
        table = reductions.simulate_tm(m, args.input, size, size,
                                       accept_row=args.bound - 1)
        if table is None:
            return 1, {"answer": "no", "reason": "no accepting run in bounds"}
        wp = reductions.witness_profile(ro, table)
        eu2 = game.expected_utility(ro.game, wp, 1)
        b1, best1 = solver.best_deviation_gain(ro.game, wp, 0,
                                               cap=args.cap_deviations)
        ok = eu2 == ro.payoff[1] and best1 <= b1
        mode = "exact"
        if args.sample:
            b2, best2 = solver.best_deviation_gain(ro.game, wp, 1,
                                                   sample=args.sample,
                                                   seed=args.seed)
            ok = ok and best2 <= b2
            mode = "sampled"
        return _decision(ok, {"v2": _fr_str(eu2)}, mode=mode)
    if args.what == "squares":
        build = (reductions.build_guarantee_game if args.mode == "exists"
                 else reductions.build_forall_guarantee_game)
        ro = build(m, args.input, args.bound)
        check = compile_formula(ro.require)
        rng = random.Random(args.seed)
        names = ro.game.var_sets[1]
        mismatches = 0
        for _ in range(args.trials):
            assign = {v: bool(rng.getrandbits(1)) for v in names}
            if check(assign) != reductions.oracle_requires(ro, assign):
                mismatches += 1
        return _decision(mismatches == 0,
                         {"trials": args.trials, "mismatches": mismatches},
                         mode="sampled")
    raise UsageError("unknown verify command %r" % args.what)


# --- argument parsing ---------------------------------------------------------


def _build_parser():
    top = argparse.ArgumentParser(
        prog="bg", description="Boolean-games toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap-cells", type=int,
                        default=game.DEFAULT_CELL_CAP)
    common.add_argument("--cap-deviations", type=int,
                        default=game.DEFAULT_DEVIATION_CAP)
    common.add_argument("--sample", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", parents=[common])
    p.add_argument("--game", required=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("eval", parents=[common])
    p.add_argument("--game")
    p.add_argument("--profile")
    p.add_argument("--formula")
    p.add_argument("--assign")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("normal-form", parents=[common])
    p.add_argument("--game", required=True)
    p.set_defaults(fn=cmd_normal_form)

    p = sub.add_parser("value", parents=[common])
    p.add_argument("--game", required=True)
    p.set_defaults(fn=cmd_value)

    p = sub.add_parser("nash", parents=[common])
    p.add_argument("what", choices=(
        "find", "unique", "guarantee", "forall-guarantee", "sat", "is",
        "pure", "irrational"))
    p.add_argument("--game", required=True)
    p.add_argument("--payoffs", help="comma-separated rationals, one per player")
    p.add_argument("--formula")
    p.add_argument("--mode", choices=("exists", "forall"), default="exists")
    p.add_argument("--profile")
    p.add_argument("--zero-sum", action="store_true",
                   help="use the zero-sum fast path where applicable")
    p.set_defaults(fn=cmd_nash)

    p = sub.add_parser("gadget", parents=[common])
    p.add_argument("what", choices=("build", "value", "combine"))
    p.add_argument("--value")
    p.add_argument("--kind", choices=("sum", "product", "complement"))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--namespace", default="g")
    p.set_defaults(fn=cmd_gadget)

    p = sub.add_parser("encode", parents=[common])
    p.add_argument("what", choices=(
        "equal", "succ", "less", "lesseq", "add", "sub", "square",
        "oneof", "noneof"))
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--args", help="comma-separated prefixes or integers")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--names")
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("reduce", parents=[common])
    p.add_argument("what", choices=("nexptm", "forall-nexptm", "transform"))
    p.add_argument("--machine")
    p.add_argument("--input", default="")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--emit-witness", action="store_true")
    p.add_argument("--out")
    p.add_argument("--kind", choices=(
        "unique-nash", "forall-nash-sat", "irrational", "exists-nash-sat"))
    p.add_argument("--game")
    p.add_argument("--payoffs")
    p.add_argument("--value")
    p.add_argument("--namespace", default="t")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("what", choices=("witness", "squares", "cover-matrix"))
    p.add_argument("--machine")
    p.add_argument("--input", default="")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--mode", choices=("exists", "forall"), default="exists")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(fn=cmd_verify)

    return top


def run(argv):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        code, data = args.fn(args)
    except ResourceCapError as e:
        print("resource cap exceeded: %s" % e, file=sys.stderr)
        return 3
    except (UsageError, GameError, FormulaError, ReductionError,
            LpError, SolverError, gadgets.GadgetError,
            encodings.EncodingError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    _emit(data, args.format)
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
