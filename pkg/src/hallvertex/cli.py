"""Command-line interface: parse quiver and lattice specs, dispatch
computations, emit canonical text and JSON.

Outputs are deterministic for identical inputs and all numbers are exact
rationals.  Usage errors exit 2; internal consistency failures (a shuffle
sum that fails to clear its denominators) exit 3.

Class literal grammar (EBNF):

    class     = poly "@" dimvector ;
    dimvector = "[" int { "," int } "]" ;
    poly      = term { ("+" | "-") term } ;
    term      = [ sign ] factor { "*" factor } ;
    factor    = rational | variable [ "^" int ] ;
    rational  = int [ "/" int ] ;
    variable  = letter digits [ "_" node ] | "z" ;

Variable letters: x = factor 1, y = factor 2, u = factor 3, v = factor 4;
the digits give the slot and the node suffix may be omitted when the
quiver has a single node ("x" alone means slot 1).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .algebra import (
    HallVertexError,
    MPoly,
    NonPolynomialError,
    Var,
    Z,
    root,
)
from .coha import assoc_check, shuffle_product
from .euler import grassmann_pushforward_oracle, localized_pushforward
from .lattice import FockState, LatticeSpec, character, lattice_vertex_op
from .quiver import BUILTIN_QUIVERS, CohClass, Quiver, WeightedComplex
from .vertex import s_matrix, y_covertex, ybe_check
from . import verify as verify_mod

_LETTER_FACTOR = {"x": 1, "y": 2, "u": 3, "v": 4}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[a-z][a-z0-9_]*)|(?P<op>[-+*/^()@,\[\]]))"
)


class ParseError(HallVertexError):
    pass


def tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"cannot tokenize {text[pos:]!r}")
            break
        pos = m.end()
        if m.lastgroup == "num":
            out.append(("num", int(m.group("num"))))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


def resolve_variable(name: str, quiver: Quiver | None) -> Var:
    if name == "z":
        return Z
    m = re.fullmatch(r"([a-z])(\d*)(?:_([a-z0-9]+))?", name)
    if not m or m.group(1) not in _LETTER_FACTOR:
        raise ParseError(f"unknown variable {name!r}")
    factor = _LETTER_FACTOR[m.group(1)]
    slot = int(m.group(2)) if m.group(2) else 1
    node = m.group(3)
    if node is None:
        if quiver is None or len(quiver.nodes) != 1:
            raise ParseError(f"variable {name!r} needs a node suffix")
        node = quiver.nodes[0]
    return root(node, factor, slot)


class _PolyParser:
    def __init__(self, tokens, quiver):
        self.tokens = tokens
        self.pos = 0
        self.quiver = quiver

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_poly(self) -> MPoly:
        total = self.parse_term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                term = self.parse_term()
                total = total + term if val == "+" else total - term
            else:
                return total

    def parse_term(self) -> MPoly:
        sign = 1
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    sign = -sign
            else:
                break
        product = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                product = product * self.parse_factor()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                product = product * self.parse_factor()
            else:
                break
        return product * sign

    def parse_factor(self) -> MPoly:
        kind, val = self.take()
        if kind == "num":
            value = Fraction(val)
            k2, v2 = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3 = self.take()
                if k3 != "num":
                    raise ParseError("expected denominator")
                value = Fraction(val, v3)
            base = MPoly.const(value)
        elif kind == "name":
            base = MPoly.var(resolve_variable(val, self.quiver))
        elif kind == "op" and val == "(":
            base = self.parse_poly()
            k2, v2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected closing parenthesis")
        else:
            raise ParseError(f"unexpected token {val!r}")
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2 = self.take()
            if k2 != "num":
                raise ParseError("expected integer exponent")
            base = base ** v2
        return base


def parse_poly(text: str, quiver: Quiver | None = None) -> MPoly:
    parser = _PolyParser(tokenize(text), quiver)
    poly = parser.parse_poly()
    if parser.pos != len(parser.tokens):
        raise ParseError(f"trailing input near token {parser.pos}")
    return poly


def parse_class(text: str, quiver: Quiver) -> CohClass:
    if "@" not in text:
        raise ParseError("class literal must look like <poly>@[g1,...]")
    poly_text, _, dim_text = text.rpartition("@")
    gamma = tuple(json.loads(dim_text))
    poly = parse_poly(poly_text, quiver)
    return CohClass(quiver, gamma, poly)


def render_class(c: CohClass) -> str:
    return f"{c.poly}@{list(c.gamma)}"


def load_quiver(spec: str) -> Quiver:
    if spec in BUILTIN_QUIVERS:
        return BUILTIN_QUIVERS[spec]()
    try:
        return Quiver.load(spec)
    except FileNotFoundError:
        raise ParseError(f"no quiver file {spec!r} and no builtin of that name")


def _series_json(series) -> dict:
    return {
        "window": [series.lo, series.hi],
        "truncated_below": series.tail,
        "coefficients": {str(m): str(series.coeffs[m]) for m in sorted(series.coeffs)},
    }


def _emit(args, text: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _parse_window(text: str) -> tuple:
    lo, hi = (int(p) for p in text.split(","))
    return (lo, hi)


def cmd_coha_mul(args) -> int:
    Q = load_quiver(args.quiver)
    left = parse_class(args.left, Q)
    right = parse_class(args.right, Q)
    prod = shuffle_product(left, right)
    _emit(args, render_class(prod), {"product": render_class(prod)})
    return 0


def cmd_coha_assoc(args) -> int:
    Q = load_quiver(args.quiver)
    f = parse_class(args.f, Q)
    g = parse_class(args.g, Q)
    h = parse_class(args.h, Q)
    ok, witness = assoc_check(f, g, h)
    _emit(args, "associative" if ok else f"FAILED: {witness}", {"ok": ok, "witness": witness})
    return 0 if ok else 1


def cmd_vertex_ycov(args) -> int:
    Q = load_quiver(args.quiver)
    alpha = parse_class(args.cls, Q)
    g1 = tuple(json.loads(args.split1))
    g2 = tuple(json.loads(args.split2))
    series = y_covertex(alpha, (g1, g2), _parse_window(args.window))
    _emit(args, str(series), {"series": _series_json(series)})
    return 0


def cmd_vertex_smatrix(args) -> int:
    Q = load_quiver(args.quiver)
    g1 = tuple(json.loads(args.left_gamma))
    g2 = tuple(json.loads(args.right_gamma))
    series = s_matrix(Q, g1, g2, _parse_window(args.window))
    _emit(args, str(series), {"series": _series_json(series)})
    return 0


def cmd_vertex_ybe(args) -> int:
    Q = load_quiver(args.quiver)
    gammas = [tuple(g) for g in json.loads(args.gammas)]
    if len(gammas) != 3:
        raise ParseError("--gammas expects three dimension vectors")
    ok, witness = ybe_check(Q, *gammas, depth=args.depth)
    _emit(args, "holds" if ok else f"FAILED: {witness}", {"ok": ok, "witness": witness})
    return 0 if ok else 1


def cmd_lattice_char(args) -> int:
    gram = tuple(tuple(row) for row in json.loads(args.gram))
    spec = LatticeSpec(len(gram), gram)
    coeffs = character(spec, args.order)
    text = _poly_in_q(coeffs)
    _emit(args, text, {"coefficients": list(coeffs)})
    return 0


def _poly_in_q(coeffs) -> str:
    frags = []
    for d, c in enumerate(coeffs):
        if not c:
            continue
        if d == 0:
            frags.append(str(c))
        elif d == 1:
            frags.append(f"{c}*q" if c != 1 else "q")
        else:
            frags.append(f"{c}*q^{d}" if c != 1 else f"q^{d}")
    return " + ".join(frags) if frags else "0"


def cmd_lattice_yop(args) -> int:
    gram = tuple(tuple(row) for row in json.loads(args.gram))
    spec = LatticeSpec(len(gram), gram)
    gamma = tuple(json.loads(args.gamma))
    point = tuple(json.loads(args.point))
    modes = tuple((abs(k), d) for k, d in json.loads(args.modes or "[]"))
    target = FockState.basis(point, modes)
    fe = lattice_vertex_op(spec, gamma, target, _parse_window(args.window))
    lines = [f"z^{m}: {fe.coeff(m)}" for m in fe.nonzero_powers()]
    _emit(
        args,
        "\n".join(lines) if lines else "0",
        {"window": [fe.lo, fe.hi], "coefficients": {str(m): str(fe.coeff(m)) for m in fe.nonzero_powers()}},
    )
    return 0


def cmd_oracle_grassmann(args) -> int:
    h = parse_poly(args.h, BUILTIN_QUIVERS["a1"]())
    result = grassmann_pushforward_oracle(h, args.n, args.m)
    _emit(args, str(result), {"pushforward": str(result)})
    return 0


def cmd_loc_pushforward(args) -> int:
    with open(args.data) as fh:
        data = json.load(fh)
    Q = BUILTIN_QUIVERS["a1"]()
    fixed = []
    for item in data:
        cls = parse_poly(item["class"], Q)
        even = tuple((parse_poly(f, Q), int(w)) for f, w in item["normal"].get("even", []))
        odd = tuple((parse_poly(f, Q), int(w)) for f, w in item["normal"].get("odd", []))
        relabel = None
        if item.get("relabel"):
            relabel = {
                resolve_variable(a, Q): resolve_variable(b, Q)
                for a, b in item["relabel"].items()
            }
        fixed.append((cls, WeightedComplex(even, odd), relabel))
    result = localized_pushforward(fixed, t0_extract=not args.raw)
    _emit(args, str(result), {"pushforward": str(result)})
    return 0


def _sweep_classes(Q: Quiver, maxdim: int, maxdeg: int):
    """All monomial classes of polynomial degree <= maxdeg/2 on components
    of total dimension <= maxdim (cohomological degree <= maxdeg)."""
    from itertools import product as iproduct

    from .quiver import roots_of

    def components():
        ranges = [range(maxdim + 1) for _ in Q.nodes]
        for gamma in iproduct(*ranges):
            if sum(gamma) <= maxdim:
                yield tuple(gamma)

    out = []
    for gamma in components():
        groups = roots_of(Q, gamma, 1)
        flat = [v for vs in groups.values() for v in vs]
        polydeg = maxdeg // 2
        seen = set()
        for expo in iproduct(*[range(polydeg + 1) for _ in flat]):
            if sum(expo) > polydeg:
                continue
            mono = MPoly.const(1)
            for v, e in zip(flat, expo):
                mono = mono * MPoly.var(v) ** e
            from .algebra import symmetrize

            sym = symmetrize(mono, [vs for vs in groups.values() if vs])
            if not sym:
                continue
            # normalise leading coefficient for dedup
            _, lead = sym.leading()
            sym = sym * (Fraction(1) / lead)
            key = (gamma, frozenset(sym.terms.items()))
            if key in seen:
                continue
            seen.add(key)
            out.append(CohClass(Q, gamma, sym))
    return out


def cmd_verify(args) -> int:
    Q = load_quiver(args.quiver)
    report = {"quiver": args.quiver, "check": args.what, "failures": []}
    ok = True
    if args.what == "bialgebra":
        classes = _sweep_classes(Q, args.maxdim, args.maxdeg)
        for a in classes:
            for b in classes:
                total = tuple(x + y for x, y in zip(a.gamma, b.gamma))
                for g1, g2 in verify_mod._splits(total):
                    good, witness = verify_mod.check_bialgebra(a, b, (g1, g2), args.depth)
                    if not good:
                        ok = False
                        report["failures"].append(
                            {"alpha": str(a), "beta": str(b), "split": [list(g1), list(g2)], "witness": witness}
                        )
    elif args.what == "ybe":
        comps = [g for g in _component_list(Q, args.maxdim)]
        for g1 in comps:
            for g2 in comps:
                for g3 in comps:
                    good, witness = ybe_check(Q, g1, g2, g3, args.depth)
                    if not good:
                        ok = False
                        report["failures"].append(
                            {"gammas": [list(g1), list(g2), list(g3)], "witness": witness}
                        )
    elif args.what == "normal":
        comps = [g for g in _component_list(Q, args.maxdim)]
        for quad in _quadruples(comps):
            good, witness = verify_mod.check_normal_identity(Q, *quad)
            if not good:
                ok = False
                report["failures"].append({"quad": [list(g) for g in quad], "witness": witness})
    elif args.what == "counit":
        good, witness = verify_mod.check_counit_unit(Q)
        if not good:
            ok = False
            report["failures"].append({"witness": witness})
    else:
        raise ParseError(f"unknown verify target {args.what!r}")
    report["ok"] = ok
    _emit(args, "ok" if ok else f"FAILED ({len(report['failures'])} failures)", report)
    return 0 if ok else 1


def _component_list(Q: Quiver, maxdim: int):
    from itertools import product as iproduct

    for gamma in iproduct(*[range(maxdim + 1) for _ in Q.nodes]):
        if sum(gamma) <= maxdim:
            yield tuple(gamma)


def _quadruples(comps):
    comps = list(comps)
    for a in comps:
        for b in comps:
            for c in comps:
                for d in comps:
                    yield (a, b, c, d)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    parser = argparse.ArgumentParser(
        prog="hallvertex",
        description="Exact shuffle products, vertex coproducts and lattice "
        "vertex operators on quiver moduli cohomology.",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    coha = sub.add_parser("coha", help="shuffle algebra operations").add_subparsers(
        dest="cmd", required=True
    )
    mul = coha.add_parser("mul", help="product of two classes", parents=[common])
    mul.add_argument("--quiver", required=True)
    mul.add_argument("--left", required=True)
    mul.add_argument("--right", required=True)
    mul.set_defaults(func=cmd_coha_mul)
    assoc = coha.add_parser("assoc", help="check associativity on a triple", parents=[common])
    assoc.add_argument("--quiver", required=True)
    assoc.add_argument("--f", required=True)
    assoc.add_argument("--g", required=True)
    assoc.add_argument("--h", required=True)
    assoc.set_defaults(func=cmd_coha_assoc)

    vertex = sub.add_parser("vertex", help="vertex coalgebra operations").add_subparsers(
        dest="cmd", required=True
    )
    ycov = vertex.add_parser("ycov", help="coproduct of a class at one split", parents=[common])
    ycov.add_argument("--quiver", required=True)
    ycov.add_argument("--class", dest="cls", required=True)
    ycov.add_argument("--split1", required=True)
    ycov.add_argument("--split2", required=True)
    ycov.add_argument("--window", required=True, help="lo,hi")
    ycov.set_defaults(func=cmd_vertex_ycov)
    sm = vertex.add_parser("smatrix", help="Yang-Baxter series of a component pair")
    sm.add_argument("--quiver", required=True)
    sm.add_argument("--left-gamma", required=True)
    sm.add_argument("--right-gamma", required=True)
    sm.add_argument("--window", required=True, help="lo,hi")
    sm.set_defaults(func=cmd_vertex_smatrix)
    ybe = vertex.add_parser("ybe", help="Yang-Baxter equation at truncation", parents=[common])
    ybe.add_argument("--quiver", required=True)
    ybe.add_argument("--gammas", required=True, help="[[..],[..],[..]]")
    ybe.add_argument("--depth", type=int, default=3)
    ybe.set_defaults(func=cmd_vertex_ybe)

    lattice = sub.add_parser("lattice", help="lattice vertex algebra").add_subparsers(
        dest="cmd", required=True
    )
    char = lattice.add_parser("char", help="graded dimension series", parents=[common])
    char.add_argument("--gram", required=True, help='e.g. "[[1]]"')
    char.add_argument("--order", type=int, required=True)
    char.set_defaults(func=cmd_lattice_char)
    yop = lattice.add_parser("yop", help="vertex operator applied to a state", parents=[common])
    yop.add_argument("--gram", required=True)
    yop.add_argument("--gamma", required=True)
    yop.add_argument("--point", required=True)
    yop.add_argument("--modes", default="[]", help="[[k,dir],...] creation modes")
    yop.add_argument("--window", required=True, help="lo,hi")
    yop.set_defaults(func=cmd_lattice_yop)

    oracle = sub.add_parser("oracle", help="independent pushforward oracles").add_subparsers(
        dest="cmd", required=True
    )
    gr = oracle.add_parser("grassmann", help="free-module pushforward", parents=[common])
    gr.add_argument("--h", required=True, help="bi-symmetric polynomial in x/y")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--m", type=int, required=True)
    gr.set_defaults(func=cmd_oracle_grassmann)

    loc = sub.add_parser("loc", help="fixed-locus localisation").add_subparsers(
        dest="cmd", required=True
    )
    pf = loc.add_parser("pushforward", help="sum class/e(normal) over fixed data", parents=[common])
    pf.add_argument("--data", required=True, help="JSON file of fixed components")
    pf.add_argument("--raw", action="store_true", help="return the rational function")
    pf.set_defaults(func=cmd_loc_pushforward)

    ver = sub.add_parser("verify", help="structure checks", parents=[common])
    ver.add_argument("what", choices=["bialgebra", "ybe", "normal", "counit"])
    ver.add_argument("--quiver", required=True)
    ver.add_argument("--maxdim", type=int, default=2)
    ver.add_argument("--maxdeg", type=int, default=4)
    ver.add_argument("--depth", type=int, default=3)
    ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except NonPolynomialError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except (HallVertexError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
