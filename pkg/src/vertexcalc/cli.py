"""Command-line front end: algebra selection, OPE queries, identity
verification runs, difference-table demonstrations, and mode commutators.

The expression grammars here are deliberately tiny; the engine underneath
does all the real work.  Reports come out as text or as JSON with sorted
keys, so identical configurations produce identical output up to the
``elapsed`` field.
"""

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass

from .fields import (
    Generator,
    creative_state,
    dong_bound_check,
    field_mode,
    field_truncation_bound,
    locality_equivalences_check,
    locality_order,
    ope_singular_part,
    parse_field,
    render_field,
)
from .liealg import (
    State,
    algebra_by_name,
    basis_states,
    mode_act,
    render_state,
)
from .newton import (
    SequenceWindow,
    binomial,
    evaluate_poly_sequence,
    forward_difference,
    kernel_order,
    newton_coefficients,
)
from .scalars import ParseError, parse_scalar, rat, tokenize
from .vertex import (
    Report,
    VerificationGrid,
    VertexAlgebraHandle,
    verify_associator,
    verify_bflm,
    verify_commutator,
    verify_skew_symmetry,
    verify_translation,
    vertex_operator,
)

ALGEBRAS = ("heisenberg", "virasoro", "affine")
FORMATS = ("text", "json")
IDENTITIES = ("bflm", "commutator", "associator", "skew", "translation",
              "dong", "locality-equivalences")

_RANGE = re.compile(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*\Z")


def parse_range(value) -> tuple:
    """An 'a..b' string or an [a, b] pair, as an (a, b) tuple."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return (int(value[0]), int(value[1]))
    match = _RANGE.match(str(value))
    if not match:
        raise ValueError(f"expected a range like -3..3, got {value!r}")
    return (int(match.group(1)), int(match.group(2)))


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters shared by every subcommand."""

    algebra: str = "heisenberg"
    lie: str = "sl2"
    l_range: tuple = (-3, 3)
    m_range: tuple = (-3, 3)
    n_range: tuple = (-3, 3)
    weight_cutoff: int = 6
    output_format: str = "text"
    seed: int = 0

    def __post_init__(self):
        if self.algebra not in ALGEBRAS:
            raise ValueError(f"unknown algebra {self.algebra!r}; "
                             f"choose from {', '.join(ALGEBRAS)}")
        if self.output_format not in FORMATS:
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        self.grid()  # rejects empty ranges and negative weight cutoffs

    def grid(self) -> VerificationGrid:
        return VerificationGrid(self.l_range, self.m_range, self.n_range,
                                self.weight_cutoff)

    def make_spec(self):
        return algebra_by_name(self.algebra, self.lie)


# ---------------------------------------------------------------------------
# sequence expressions for the newton subcommand


class _SequenceExprParser:
    """expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := factor ('*' factor)*
    factor:= atom ['^' atom]
    atom  := int ['/' int] | 'n' | 'binom' '(' expr ',' expr ')' | '(' expr ')'

    Parses once into a closure evaluated at each integer index."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse_expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        total = self.parse_term()
        if sign == -1:
            total = (lambda f: lambda n: -f(n))(total)
        while self.peek()[0] in "+-":
            op = self.take()[0]
            nxt = self.parse_term()
            total = (lambda f, g, s: lambda n: f(n) + s * g(n))(
                total, nxt, -1 if op == "-" else 1)
        return total

    def parse_term(self):
        value = self.parse_factor()
        while self.peek()[0] == "*":
            self.take()
            value = (lambda f, g: lambda n: f(n) * g(n))(value, self.parse_factor())
        return value

    def parse_factor(self):
        base = self.parse_atom()
        if self.peek()[0] != "^":
            return base
        position = self.take()[2]
        exponent = self.parse_atom()

        def power(n, f=base, g=exponent, at=position):
            e = g(n)
            if e.denominator != 1:
                raise ParseError("exponent must be an integer", at)
            b = f(n)
            if b == 0 and e < 0:
                raise ParseError("zero base with negative exponent", at)
            return b ** int(e)

        return power

    def parse_atom(self):
        kind, value, position = self.peek()
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")
                q = rat(int(value), int(den[1]))
                return lambda n, q=q: q
            q = rat(int(value))
            return lambda n, q=q: q
        if kind == "name" and value == "n":
            self.take()
            return lambda n: rat(n)
        if kind == "name" and value == "binom":
            self.take()
            self.take("(")
            upper = self.parse_expr()
            self.take(",")
            lower = self.parse_expr()
            close = self.take(")")

            def binom_value(n, f=upper, g=lower, at=close[2]):
                i = g(n)
                if i.denominator != 1 or i < 0:
                    raise ParseError("binom lower index must be a nonnegative "
                                     "integer", at)
                return binomial(f(n), int(i))

            return binom_value
        if kind == "(":
            self.take()
            inner = self.parse_expr()
            self.take(")")
            return inner
        raise ParseError(f"expected n, an integer, or binom(...), "
                         f"found {value!r}", position)


def _split_top_level_commas(text: str):
    pieces, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append(text[start:i])
            start = i + 1
    pieces.append(text[start:])
    return pieces if len(pieces) > 1 else None


def parse_sequence(text: str, lo: int, hi: int) -> SequenceWindow:
    """Comma-separated scalars, or an expression in n sampled on lo..hi."""
    pieces = _split_top_level_commas(text)
    if pieces is not None:
        values = tuple(parse_scalar(piece) for piece in pieces)
        if len(values) != hi - lo + 1:
            raise ValueError(f"{len(values)} values do not fill the window "
                             f"{lo}..{hi}")
        return SequenceWindow(lo, values)
    parser = _SequenceExprParser(tokenize(text))
    fn = parser.parse_expr()
    parser.take("end")
    return SequenceWindow(lo, tuple(fn(n) for n in range(lo, hi + 1)))


# ---------------------------------------------------------------------------
# shared rendering helpers


def _numerator(state: State) -> str:
    # multiples of the vacuum display as bare scalars, so the pole term for
    # a central contribution reads like a coefficient
    vacuum_multiple = set(state.terms) == {()}
    text = str(state.terms[()]) if vacuum_multiple else render_state(state)
    negative = text.startswith("-")
    if negative:
        text = text[1:]
    if " + " in text or " - " in text or (vacuum_multiple and not text.isalnum()):
        text = f"({text})"
    return f"-{text}" if negative else text


def _pole(order: int) -> str:
    return "/(x-y)" if order == 1 else f"/(x-y)^{order}"


def _mode_label(spec, name: str) -> str:
    if spec.kind == "virasoro" and name in ("omega", "L"):
        return "L"
    if name in spec.labels:
        return name
    raise ValueError(f"unknown generator {name!r} for {spec.describe()}")


def _render_mode_combination(gens: dict, central) -> str:
    pieces = []
    for (label, mode), coeff in sorted(gens.items(), key=lambda kv: kv[0]):
        text = str(coeff)
        negative = text.startswith("-")
        if negative:
            text = text[1:]
        body = f"{label}[{mode}]"
        if text == "1":
            term = body
        elif " + " in text or " - " in text:
            term = f"({text})*{body}"
        else:
            term = f"{text}*{body}"
        if not pieces:
            pieces.append(f"-{term}" if negative else term)
        else:
            pieces.append(" - " if negative else " + ")
            pieces.append(term)
    if not central.is_zero():
        text = str(central)
        if not pieces:
            pieces.append(text)
        elif text.startswith("-"):
            pieces.append(" - ")
            pieces.append(text[1:])
        else:
            pieces.append(" + ")
            pieces.append(text)
    return "".join(pieces) if pieces else "0"


# ---------------------------------------------------------------------------
# subcommands


def cmd_ope(config: RunConfig, left: str, right: str):
    """Locality order and singular expansion of a pair of fields.

    Returns (exit code, payload dict, text)."""
    spec = config.make_spec()
    F = parse_field(spec, left)
    G = parse_field(spec, right)
    start = time.perf_counter()
    report = locality_order(spec, F, G, index_window=config.m_range,
                            weight_cutoff=config.weight_cutoff)
    payload = {
        "identity": "ope",
        "algebra": spec.describe(),
        "left": render_field(F),
        "right": render_field(G),
        "order": report.order,
        "status": report.status,
        "singular_part": [],
        "elapsed": 0.0,
    }
    if report.status != "verified-on-window":
        payload["elapsed"] = round(time.perf_counter() - start, 6)
        text = (f"locality order: none found on the window\n"
                f"{left} {right} ~ ? (not local on the tested window)")
        return 1, payload, text
    poles = ope_singular_part(spec, F, G, weight_cutoff=config.weight_cutoff,
                              index_window=config.m_range)
    payload["singular_part"] = [
        {"pole": p, "numerator": _numerator(state), "state": render_state(state)}
        for p, state in poles
    ]
    payload["elapsed"] = round(time.perf_counter() - start, 6)
    if poles:
        pieces = []
        for p, state in poles:
            numerator = _numerator(state)
            if not pieces:
                pieces.append(f"{numerator}{_pole(p)}")
            elif numerator.startswith("-"):
                pieces.append(f" - {numerator[1:]}{_pole(p)}")
            else:
                pieces.append(f" + {numerator}{_pole(p)}")
        body = f"{left} {right} ~ {''.join(pieces)}"
    else:
        body = f"{left} {right} ~ regular (no singular part)"
    return 0, payload, f"locality order: {report.order}\n{body}"


def cmd_newton(config: RunConfig, sequence: str, window: str):
    """Difference table, Newton coefficients, kernel order, and backward
    extrapolation for a sampled sequence."""
    lo, hi = parse_range(window)
    if lo > hi:
        raise ValueError(f"empty window {lo}..{hi}")
    w = parse_sequence(sequence, lo, hi)
    table = []
    current = w
    while True:
        table.append([str(v) for v in current.values])
        if len(current) < 2 or all(v.is_zero() for v in current.values):
            break
        current = forward_difference(current)
    order = kernel_order(w)
    payload = {
        "identity": "newton",
        "sequence": sequence,
        "window": [lo, hi],
        "difference_table": table,
        "kernel_order": order,
        "newton_coefficients": None,
        "backward_samples": None,
    }
    lines = [f"sequence:            {sequence} on {lo}..{hi}"]
    lines.append("difference table:")
    for depth, row in enumerate(table):
        lines.append(f"  D^{depth}: " + ", ".join(row))
    if order is None:
        lines.append("kernel order:        none within window")
        return 0, payload, "\n".join(lines)
    # Newton coefficients read off at the left edge of the window; samples
    # below the window come from the same polynomial, exactly
    poly = newton_coefficients(w.shifted_to_zero(), order)
    coeffs = [str(c) for c in poly.newton_coeffs]
    samples = {str(n): str(evaluate_poly_sequence(poly, n - lo))
               for n in range(lo - 3, lo)}
    payload["newton_coefficients"] = coeffs
    payload["backward_samples"] = samples
    lines.append(f"kernel order:        {order}")
    lines.append(f"newton coefficients: R = [{', '.join(coeffs)}]")
    lines.append("backward samples:    " + ", ".join(
        f"alpha_{n} = {samples[str(n)]}" for n in range(lo - 1, lo - 4, -1)))
    return 0, payload, "\n".join(lines)


def cmd_commutator(config: RunConfig, left: str, left_mode: int,
                   right: str, right_mode: int):
    """[a_m, b_n] in closed form, cross-checked two ways on basis states."""
    spec = config.make_spec()
    la = _mode_label(spec, left)
    lb = _mode_label(spec, right)
    start = time.perf_counter()
    gens, central = spec.bracket_modes(la, left_mode, lb, right_mode)
    rendered = _render_mode_combination(gens, central)

    handle = VertexAlgebraHandle(spec)
    A, B = Generator(la), Generator(lb)
    b_state = creative_state(spec, B)
    # raw modes sit one index below omega's field indexing
    shift = 1 if spec.kind == "virasoro" else 0
    p, q = left_mode + shift, right_mode + shift
    bound = field_truncation_bound(spec, A, b_state)
    products = [vertex_operator(handle, field_mode(spec, A, i, b_state))
                for i in range(bound)]
    failures = []
    basis = basis_states(spec, config.weight_cutoff)
    for v in basis:
        direct = mode_act(spec, la, left_mode, mode_act(spec, lb, right_mode, v)) \
            - mode_act(spec, lb, right_mode, mode_act(spec, la, left_mode, v))
        closed = v.scale(central)
        for (label, mode), coeff in gens.items():
            closed = closed + mode_act(spec, label, mode, v).scale(coeff)
        expansion = State()
        for i, op in enumerate(products):
            c = binomial(p, i)
            if c == 0:
                continue
            expansion = expansion + field_mode(spec, op, p + q - i, v).scale(c)
        if direct != closed:
            failures.append(["defining-relations", render_state(v)])
        if direct != expansion:
            failures.append(["bracket-expansion", render_state(v)])
    elapsed = round(time.perf_counter() - start, 6)
    payload = {
        "identity": "commutator-modes",
        "algebra": spec.describe(),
        "left": [la, left_mode],
        "right": [lb, right_mode],
        "result": rendered,
        "states_checked": len(basis),
        "failures": failures,
        "elapsed": elapsed,
    }
    lines = [f"[{la}[{left_mode}], {lb}[{right_mode}]] = {rendered}"]
    status = "PASS" if not failures else f"FAIL {failures[0]}"
    lines.append(f"cross-check:  {status} on {len(basis)} states "
                 f"(weight <= {config.weight_cutoff})")
    return (0 if not failures else 1), payload, "\n".join(lines)


def _locality_weight(config: RunConfig) -> int:
    # locality searches rescan whole mode windows per candidate order; the
    # checks' own default of weight 4 keeps that proportionate
    return min(config.weight_cutoff, 4)


def cmd_verify(config: RunConfig, identity: str, n: int | None = None) -> Report:
    """One identity over every generator pair (or triple) of the algebra."""
    if identity not in IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}; "
                         f"choose from {', '.join(IDENTITIES)}")
    spec = config.make_spec()
    handle = VertexAlgebraHandle(spec)
    grid = config.grid()
    start = time.perf_counter()
    names = sorted(handle.generators)
    states = {name: creative_state(spec, handle.generators[name])
              for name in names}
    cells = 0
    failures = []
    pair_verifiers = {
        "bflm": verify_bflm,
        "commutator": verify_commutator,
        "associator": verify_associator,
        "skew": verify_skew_symmetry,
    }
    if identity in pair_verifiers:
        run = pair_verifiers[identity]
        for name_a in names:
            for name_b in names:
                report = run(handle, states[name_a], states[name_b], grid)
                cells += report.cells_checked
                failures += [[name_a, name_b, *w] for w in report.failures]
    elif identity == "translation":
        for name in names:
            report = verify_translation(handle, states[name], grid)
            cells += report.cells_checked
            failures += [[name, *w] for w in report.failures]
    elif identity == "dong":
        weight = _locality_weight(config)
        for name_a in names:
            for name_b in names:
                F, G = handle.generators[name_a], handle.generators[name_b]
                if n is not None:
                    indices = [n]
                else:
                    fg = locality_order(spec, F, G, index_window=config.m_range,
                                        weight_cutoff=weight)
                    if fg.order is None:
                        failures.append([name_a, name_b, "no locality order"])
                        continue
                    indices = range(-2, fg.order)
                for name_c in names:
                    H = handle.generators[name_c]
                    for index in indices:
                        out = dong_bound_check(spec, F, G, H, index,
                                               index_window=config.m_range,
                                               weight_cutoff=weight)
                        cells += 1
                        if not out["ok"]:
                            failures.append([name_a, name_b, name_c, index,
                                             out["measured"], out["bound"]])
    else:
        for name_a in names:
            for name_b in names:
                out = locality_equivalences_check(
                    spec, handle.generators[name_a], handle.generators[name_b],
                    index_window=config.m_range,
                    weight_cutoff=_locality_weight(config))
                cells += out["cells_checked"]
                failures += [[name_a, name_b, *w] for w in out["failures"]]
    elapsed = round(time.perf_counter() - start, 6)
    return Report(identity, spec.describe(), grid.to_dict(), cells, failures,
                  elapsed)


# ---------------------------------------------------------------------------
# argument plumbing


def _merge_range_flags(argv):
    # "-3..3" after a range flag looks like an option to argparse; fold the
    # value into the flag so the documented syntax works
    flags = ("--lrange", "--mrange", "--nrange")
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in flags and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", choices=ALGEBRAS)
    common.add_argument("--lie", choices=("sl2",))
    common.add_argument("--lrange", metavar="a..b")
    common.add_argument("--mrange", metavar="a..b")
    common.add_argument("--nrange", metavar="a..b")
    common.add_argument("--weight", type=int)
    common.add_argument("--format", choices=FORMATS, dest="output_format")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", metavar="FILE",
                        help="JSON file with the same keys as the flags")

    parser = argparse.ArgumentParser(
        prog="vertexcalc",
        description="Exact calculator for mode algebras, locality orders, "
                    "OPEs and vertex-operator identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ope", parents=[common],
                       help="locality order and singular expansion of two fields")
    p.add_argument("left", help="field expression, e.g. h, omega, dh, (h *-1 Id)")
    p.add_argument("right")

    p = sub.add_parser("verify", parents=[common],
                       help="run one identity over the whole grid")
    p.add_argument("identity", choices=IDENTITIES)
    p.add_argument("--n", type=int,
                   help="single product index for dong (default -2..order-1)")

    p = sub.add_parser("newton", parents=[common],
                       help="difference table and Newton coefficients")
    p.add_argument("sequence",
                   help="comma-separated values, or an expression in n built "
                        "from integers, n, binom(., .), + - * / ^")
    p.add_argument("window", help="sample window, e.g. 0..7")

    p = sub.add_parser("commutator", parents=[common],
                       help="closed form of [a_m, b_n] with cross-checks")
    p.add_argument("left")
    p.add_argument("left_mode", type=int)
    p.add_argument("right")
    p.add_argument("right_mode", type=int)
    return parser


def config_from_args(args) -> RunConfig:
    stored = {}
    if args.config:
        with open(args.config) as fh:
            stored = json.load(fh)
        unknown = set(stored) - {"algebra", "lie", "lrange", "mrange",
                                 "nrange", "weight", "format", "seed"}
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")

    def pick(flag, key, fallback):
        if flag is not None:
            return flag
        return stored.get(key, fallback)

    return RunConfig(
        algebra=pick(args.algebra, "algebra", "heisenberg"),
        lie=pick(args.lie, "lie", "sl2"),
        l_range=parse_range(pick(args.lrange, "lrange", (-3, 3))),
        m_range=parse_range(pick(args.mrange, "mrange", (-3, 3))),
        n_range=parse_range(pick(args.nrange, "nrange", (-3, 3))),
        weight_cutoff=pick(args.weight, "weight", 6),
        output_format=pick(args.output_format, "format", "text"),
        seed=pick(args.seed, "seed", 0),
    )


def main(argv=None) -> int:
    raw = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_merge_range_flags(raw))
    try:
        config = config_from_args(args)
        if args.command == "ope":
            code, payload, text = cmd_ope(config, args.left, args.right)
        elif args.command == "newton":
            code, payload, text = cmd_newton(config, args.sequence, args.window)
        elif args.command == "commutator":
            code, payload, text = cmd_commutator(
                config, args.left, args.left_mode, args.right, args.right_mode)
        else:
            report = cmd_verify(config, args.identity, args.n)
            code, payload, text = (0 if report.ok else 1), report.to_dict(), \
                report.to_text()
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config.output_format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
