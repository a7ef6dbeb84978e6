"""Mode algebras acting on their vacuum modules.

Three backends: the rank-one oscillator algebra (central element fixed to 1),
current algebras built on a finite-dimensional Lie algebra with an invariant
form (level kept symbolic as K), and the algebra of the L_n relations with
central charge kept symbolic as C.

States live in the module generated from a vacuum vector killed by all
nonnegative modes (and by L_(-1) in the third backend, whose module is the
quotient with basis indices <= -2).  A state is a combination of canonical
monomials: factors sorted by (mode ascending, then generator label), applied
to the implicit vacuum on the right.  mode_act straightens any generator
application back into that basis using the commutation relations, so every
computation stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .newton import binomial
from .scalars import ParseError, Scalar, as_scalar, rat, tokenize, _ScalarParser

# A monomial is a tuple of (mode, label) factors, canonically sorted;
# the empty tuple is the vacuum.
PBWMonomial = tuple


@dataclass(frozen=True)
class FiniteLieAlgebra:
    """Structure constants and invariant bilinear form over basis labels.

    brackets maps (a, b) -> {d: coefficient} for a < b in label order;
    the reverse pairs are filled in by antisymmetry.  Antisymmetry, the
    Jacobi identity, symmetry of the form and its invariance are all
    verified on every basis triple at construction.
    """

    name: str
    labels: tuple
    brackets: dict = field(compare=False)
    form: dict = field(compare=False)

    def __post_init__(self):
        full = {}
        for (a, b), terms in self.brackets.items():
            clean = {d: rat(c) for d, c in terms.items() if rat(c) != 0}
            full[(a, b)] = clean
            full[(b, a)] = {d: -c for d, c in clean.items()}
        for a in self.labels:
            full.setdefault((a, a), {})
        object.__setattr__(self, "brackets", full)
        sym = {}
        for (a, b), value in self.form.items():
            value = rat(value)
            if sym.setdefault((a, b), value) != value or sym.setdefault((b, a), value) != value:
                raise ValueError(f"form not symmetric at ({a}, {b})")
        object.__setattr__(self, "form", sym)
        self._validate()

    def bracket(self, a: str, b: str) -> dict:
        return self.brackets.get((a, b), {})

    def pairing(self, a: str, b: str):
        return self.form.get((a, b), rat(0))

    def _bracket_combo(self, combo: dict, c: str) -> dict:
        out = {}
        for a, coeff in combo.items():
            for d, c2 in self.bracket(a, c).items():
                out[d] = out.get(d, rat(0)) + coeff * c2
        return {d: v for d, v in out.items() if v != 0}

    def _validate(self):
        for a in self.labels:
            for b in self.labels:
                ab = self.bracket(a, b)
                ba = self.bracket(b, a)
                if {d: -c for d, c in ab.items()} != ba:
                    raise ValueError(f"brackets not antisymmetric at ({a}, {b})")
        for a in self.labels:
            for b in self.labels:
                for c in self.labels:
                    total = {}
                    for first, second, third in ((a, b, c), (b, c, a), (c, a, b)):
                        inner = self.bracket(first, second)
                        for d, v in self._bracket_combo(inner, third).items():
                            total[d] = total.get(d, rat(0)) + v
                    if any(v != 0 for v in total.values()):
                        raise ValueError(f"Jacobi identity fails on ({a}, {b}, {c})")
                    # invariance: <[a,b], c> = <a, [b,c]>
                    lhs = sum(
                        (v * self.pairing(d, c) for d, v in self.bracket(a, b).items()),
                        rat(0),
                    )
                    rhs = sum(
                        (v * self.pairing(a, d) for d, v in self.bracket(b, c).items()),
                        rat(0),
                    )
                    if lhs != rhs:
                        raise ValueError(f"form not invariant on ({a}, {b}, {c})")


def sl2() -> FiniteLieAlgebra:
    """Rank-one simple algebra with trace form of the defining representation."""
    return FiniteLieAlgebra(
        name="sl2",
        labels=("e", "f", "h"),
        brackets={("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}},
        form={("e", "f"): 1, ("h", "h"): 2},
    )


FINITE_LIE_ALGEBRAS = {"sl2": sl2}


class AlgebraSpec:
    """One of the three shipped mode algebras plus its module conventions."""

    def __init__(self, kind: str, lie: FiniteLieAlgebra | None = None):
        if kind not in ("heisenberg", "affine", "virasoro"):
            raise ValueError(f"unknown algebra kind {kind!r}")
        if kind == "affine":
            if lie is None:
                lie = sl2()
            labels = lie.labels
        elif lie is not None:
            raise ValueError(f"{kind} takes no finite Lie algebra")
        elif kind == "heisenberg":
            labels = ("h",)
        else:
            labels = ("L",)
        self.kind = kind
        self.lie = lie
        self.labels = labels
        # smallest mode that annihilates the vacuum
        self.annihilation_start = -1 if kind == "virasoro" else 0
        # most positive mode allowed in a canonical monomial
        self.creation_cap = -2 if kind == "virasoro" else -1
        if kind == "heisenberg":
            self.level = as_scalar(1)  # central element acts as 1 on this module
        elif kind == "affine":
            self.level = Scalar.symbol_K()
        else:
            self.level = Scalar.symbol_C()
        self._act_memo = {}
        self._t_memo = {}
        self._field_memo = {}  # mode actions of field expressions, per monomial
        self._locality_memo = {}  # locality reports, per (pair, window) key

    def __repr__(self):
        if self.kind == "affine":
            return f"AlgebraSpec(affine, {self.lie.name})"
        return f"AlgebraSpec({self.kind})"

    def describe(self) -> str:
        return f"affine:{self.lie.name}" if self.kind == "affine" else self.kind

    # bracket of g1_n with g2_m: (generator terms {(label, mode): Scalar}, central Scalar)
    def bracket_modes(self, g1: str, n: int, g2: str, m: int):
        if self.kind == "heisenberg":
            central = as_scalar(n) * self.level if n + m == 0 else Scalar()
            return {}, central
        if self.kind == "affine":
            gens = {(d, n + m): as_scalar(c) for d, c in self.lie.bracket(g1, g2).items()}
            central = Scalar()
            if n + m == 0:
                central = as_scalar(n * self.lie.pairing(g1, g2)) * self.level
            return gens, central
        gens = {("L", n + m): as_scalar(n - m)} if n != m else {}
        central = Scalar()
        if n + m == 0:
            central = as_scalar(rat(1, 2) * binomial(n + 1, 3)) * self.level
        return gens, central


def heisenberg() -> AlgebraSpec:
    return AlgebraSpec("heisenberg")


def affine(lie: FiniteLieAlgebra | None = None) -> AlgebraSpec:
    return AlgebraSpec("affine", lie)


def virasoro() -> AlgebraSpec:
    return AlgebraSpec("virasoro")


def algebra_by_name(name: str, lie_name: str = "sl2") -> AlgebraSpec:
    if name == "affine":
        try:
            lie = FINITE_LIE_ALGEBRAS[lie_name]()
        except KeyError:
            raise ValueError(f"unknown finite Lie algebra {lie_name!r}") from None
        return affine(lie)
    return AlgebraSpec(name)


# ---------------------------------------------------------------------------
# States


class State:
    """Combination of canonical monomials with Scalar coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mon, coeff in terms.items():
                coeff = as_scalar(coeff)
                if not coeff.is_zero():
                    clean[mon] = coeff
        self.terms = clean
        self._hash = None

    @classmethod
    def vacuum(cls) -> "State":
        return cls({(): 1})

    @classmethod
    def monomial(cls, factors) -> "State":
        return cls({tuple(factors): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "State") -> "State":
        terms = dict(self.terms)
        for mon, coeff in other.terms.items():
            acc = terms.get(mon)
            if acc is None:
                terms[mon] = coeff
            else:
                acc = acc + coeff
                if acc.is_zero():
                    del terms[mon]
                else:
                    terms[mon] = acc
        out = State.__new__(State)
        out.terms = terms
        out._hash = None
        return out

    def __neg__(self):
        out = State.__new__(State)
        out.terms = {mon: -coeff for mon, coeff in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar) -> "State":
        if isinstance(scalar, Scalar):
            if scalar.is_zero():
                return State()
        else:
            if scalar == 1:
                return self
            if scalar == 0:
                return State()
        out = State.__new__(State)
        out.terms = {mon: coeff * scalar for mon, coeff in self.terms.items()}
        out._hash = None
        return out

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    def __str__(self):
        return render_state(self)

    def __repr__(self):
        return f"State({render_state(self)})"


def add_scaled_terms(acc: dict, terms: dict, coeff) -> None:
    """In-place acc += coeff * terms on {monomial: Scalar} dicts.  Zero
    coefficients may linger; sweep with state_from_terms when done."""
    if coeff == 1:
        for mon, c in terms.items():
            prev = acc.get(mon)
            acc[mon] = c if prev is None else prev + c
    else:
        for mon, c in terms.items():
            value = c * coeff
            prev = acc.get(mon)
            acc[mon] = value if prev is None else prev + value


def state_from_terms(acc: dict) -> State:
    out = State.__new__(State)
    out.terms = {mon: c for mon, c in acc.items() if not c.is_zero()}
    out._hash = None
    return out


def monomial_weight(mon: PBWMonomial) -> int:
    return -sum(mode for mode, _label in mon)


def weight(v: State):
    """Common weight of a homogeneous state, None if mixed (zero counts as 0)."""
    weights = {monomial_weight(mon) for mon in v.terms}
    if not weights:
        return 0
    if len(weights) == 1:
        return weights.pop()
    return None


def render_state(v: State) -> str:
    if not v.terms:
        return "0"
    pieces = []
    for mon in sorted(v.terms, key=lambda m: (monomial_weight(m), m)):
        coeff = v.terms[mon]
        body = "".join(f"{label}[{mode}]" for mode, label in mon) + "vac"
        text = str(coeff)
        negative = text.startswith("-")
        if negative:
            text = text[1:]
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
    return "".join(pieces)


# ---------------------------------------------------------------------------
# The straightening engine


def _act(spec: AlgebraSpec, label: str, n: int, mon: PBWMonomial) -> dict:
    """Apply generator mode (label, n) to a canonical monomial; returns a
    {monomial: Scalar} dict in canonical form.  Memoized per spec."""
    key = (label, n, mon)
    memo = spec._act_memo
    cached = memo.get(key)
    if cached is not None:
        return cached
    factor = (n, label)
    if not mon:
        result = {} if n >= spec.annihilation_start else {(factor,): as_scalar(1)}
    elif factor <= mon[0]:
        result = {(factor,) + mon: as_scalar(1)}
    else:
        # straighten: X Y rest = Y (X rest) + [X, Y] rest
        head_mode, head_label = mon[0]
        rest = mon[1:]
        result = {}
        for mon2, c2 in _act(spec, label, n, rest).items():
            for mon3, c3 in _act(spec, head_label, head_mode, mon2).items():
                acc = result.get(mon3)
                value = c2 * c3
                result[mon3] = value if acc is None else acc + value
        gens, central = spec.bracket_modes(label, n, head_label, head_mode)
        for (d_label, d_mode), coeff in gens.items():
            for mon4, c4 in _act(spec, d_label, d_mode, rest).items():
                acc = result.get(mon4)
                value = coeff * c4
                result[mon4] = value if acc is None else acc + value
        if not central.is_zero():
            acc = result.get(rest)
            result[rest] = central if acc is None else acc + central
        result = {m: c for m, c in result.items() if not c.is_zero()}
    memo[key] = result
    return result


def mode_act(spec: AlgebraSpec, g: str, n: int, v: State) -> State:
    """Exact action of the generator mode g_n on a state."""
    if g not in spec.labels:
        raise ValueError(f"unknown generator {g!r} for {spec.describe()}")
    total = {}
    for mon, coeff in v.terms.items():
        add_scaled_terms(total, _act(spec, g, n, mon), coeff)
    return state_from_terms(total)


def truncation_bound(spec: AlgebraSpec, g: str, v: State) -> int:
    """N such that g_n v = 0 for every n >= N, from the module grading:
    g_n lowers weight by n and no state has negative weight, so a weight-w
    monomial dies above n = w; the vacuum dies from 0 on."""
    bound = 0
    for mon in v.terms:
        bound = max(bound, monomial_weight(mon) + 1 if mon else 0)
    return bound


def translation_T(spec: AlgebraSpec, v: State) -> State:
    """The derivation with T vac = 0 and [T, a_n] = -n a_(n-1) on field modes.

    For the oscillator and current algebras the field modes are the Lie
    modes, giving T(g_m w) = (-m) g_(m-1) w + g_m T(w).  The L-field
    carries modes shifted by one (the z^(-n-2) convention), so there the
    head coefficient is -(m+1); equivalently T acts as L_(-1)."""
    total = {}
    for mon, coeff in v.terms.items():
        add_scaled_terms(total, _translate(spec, mon), coeff)
    return state_from_terms(total)


def _translate(spec: AlgebraSpec, mon: PBWMonomial) -> dict:
    cached = spec._t_memo.get(mon)
    if cached is not None:
        return cached
    if not mon:
        result = {}
    else:
        (head_mode, head_label), rest = mon[0], mon[1:]
        shift = 1 if spec.kind == "virasoro" else 0
        # lowering the head mode keeps the monomial canonical
        result = {((head_mode - 1, head_label),) + rest: as_scalar(-(head_mode + shift))}
        for mon2, c2 in _translate(spec, rest).items():
            for mon3, c3 in _act(spec, head_label, head_mode, mon2).items():
                acc = result.get(mon3)
                value = c2 * c3
                result[mon3] = value if acc is None else acc + value
        result = {m: c for m, c in result.items() if not c.is_zero()}
    spec._t_memo[mon] = result
    return result


def enumerate_basis(spec: AlgebraSpec, max_weight: int) -> list:
    """All canonical monomials of weight <= max_weight, ordered by
    (weight, factors)."""
    if max_weight < 0:
        raise ValueError("max_weight must be nonnegative")
    results = []

    def extend(prefix, used, minimum):
        results.append(prefix)
        budget = max_weight - used
        for mode in range(-budget, spec.creation_cap + 1):
            for label in spec.labels:
                factor = (mode, label)
                if minimum is not None and factor < minimum:
                    continue
                extend(prefix + (factor,), used - mode, factor)

    extend((), 0, None)
    return sorted(results, key=lambda mon: (monomial_weight(mon), mon))


def basis_states(spec: AlgebraSpec, max_weight: int) -> list:
    return [State.monomial(mon) for mon in enumerate_basis(spec, max_weight)]


# ---------------------------------------------------------------------------
# State expression parsing: e.g. `h[-1]h[-2]vac`, `2*h[-1]vac - 1/3*h[-2]vac`


def parse_state(spec: AlgebraSpec, text: str) -> State:
    parser = _StateParser(tokenize(text), spec)
    state = parser.parse_state_expr()
    parser.take("end")
    return state


class _StateParser(_ScalarParser):
    # parse_expr / parse_factor keep their scalar meaning so parenthesized
    # coefficients like (1/2)*h[-1]vac still parse through the base class
    def __init__(self, tokens, spec):
        super().__init__(tokens)
        self.spec = spec

    def parse_state_expr(self) -> State:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        total = self.parse_state_term().scale(sign)
        while self.peek()[0] in "+-":
            op = self.take()[0]
            term = self.parse_state_term()
            total = total + (term if op == "+" else term.scale(-1))
        return total

    def _at_monomial(self) -> bool:
        kind, value, _pos = self.peek()
        if kind != "name":
            return False
        return value == "vac" or self.tokens[self.pos + 1][0] == "["

    def parse_state_term(self) -> State:
        coeff = as_scalar(1)
        while not self._at_monomial():
            coeff = coeff * self.parse_factor()
            if self.peek()[0] == "*":
                self.take()
            elif self._at_monomial():
                break
            else:
                kind, value, position = self.peek()
                if coeff.is_zero() and kind in ("end", "+", "-"):
                    return State()
                raise ParseError(f"expected '*' or a monomial, found {value!r}", position)
        return self.parse_monomial().scale(coeff)

    def parse_monomial(self) -> State:
        factors = []
        while True:
            kind, value, position = self.peek()
            if kind != "name":
                raise ParseError(f"expected a generator or 'vac', found {value!r}", position)
            if value == "vac":
                self.take()
                break
            if value not in self.spec.labels:
                raise ParseError(
                    f"unknown generator {value!r} for {self.spec.describe()}", position)
            self.take()
            self.take("[")
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            mode_tok = self.take("int")
            self.take("]")
            factors.append((value, sign * int(mode_tok[1])))
        # apply the written operator product to the vacuum, rightmost first
        state = State.vacuum()
        for label, mode in reversed(factors):
            state = mode_act(self.spec, label, mode, state)
        return state
