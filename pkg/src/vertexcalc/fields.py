"""Field expressions and their exact operational calculus.

A field is a symbolic expression tree evaluated lazily through mode actions
on module states; nothing is ever expanded into an infinite series.  The
node kinds are generators, the identity field, formal derivatives, finite
linear combinations, and residue products (F *n G) for any integer n.

Every verification here reduces to finitely many exact mode actions: the
grading bounds how far any mode sum can reach, so residue products and
normal ordering truncate to finite sums with no approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .liealg import (
    AlgebraSpec,
    State,
    add_scaled_terms,
    basis_states,
    mode_act,
    monomial_weight,
    render_state,
    state_from_terms,
    weight,
)
from .newton import binomial
from .scalars import ParseError, Scalar, as_scalar, rat, tokenize

VACUUM = State.vacuum()


# ---------------------------------------------------------------------------
# Expression nodes.  Construct through the lowercase factories, which
# normalize: Derivative(0, f) -> f, nested derivatives merge, Linear
# flattens, collects and unwraps singletons.


def _cache_hash(node, parts) -> int:
    # memo keys hash nodes constantly; frozen dataclasses recompute otherwise
    h = hash(parts)
    object.__setattr__(node, "_node_hash", h)
    return h


@dataclass(frozen=True)
class Generator:
    label: str

    def __hash__(self):
        return getattr(self, "_node_hash", None) or \
            _cache_hash(self, (Generator, self.label))


@dataclass(frozen=True)
class IdentityField:
    pass


@dataclass(frozen=True)
class Derivative:
    k: int
    child: "FieldExpr"

    def __hash__(self):
        return getattr(self, "_node_hash", None) or \
            _cache_hash(self, (Derivative, self.k, self.child))


@dataclass(frozen=True)
class Linear:
    terms: tuple  # of (Scalar, FieldExpr)

    def __hash__(self):
        return getattr(self, "_node_hash", None) or \
            _cache_hash(self, (Linear, self.terms))


@dataclass(frozen=True)
class ResidueProduct:
    n: int
    left: "FieldExpr"
    right: "FieldExpr"

    def __hash__(self):
        return getattr(self, "_node_hash", None) or \
            _cache_hash(self, (ResidueProduct, self.n, self.left, self.right))


FieldExpr = (Generator, IdentityField, Derivative, Linear, ResidueProduct)

IDENTITY = IdentityField()
ZERO_FIELD = Linear(())


def generator(label: str) -> Generator:
    return Generator(label)


def derivative(k: int, child) -> "FieldExpr":
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k == 0:
        return child
    if isinstance(child, Derivative):
        return Derivative(k + child.k, child.child)
    if isinstance(child, IdentityField):
        return ZERO_FIELD
    return Derivative(k, child)


def linear(terms) -> "FieldExpr":
    collected = {}
    order = []

    def absorb(coeff, expr):
        if isinstance(expr, Linear):
            for inner_coeff, inner in expr.terms:
                absorb(coeff * inner_coeff, inner)
            return
        if expr not in collected:
            collected[expr] = Scalar()
            order.append(expr)
        collected[expr] = collected[expr] + coeff

    for coeff, expr in terms:
        absorb(as_scalar(coeff), expr)
    kept = tuple((collected[e], e) for e in order if not collected[e].is_zero())
    if len(kept) == 1 and kept[0][0] == as_scalar(1):
        return kept[0][1]
    return Linear(kept)


def residue_product(n: int, left, right) -> ResidueProduct:
    return ResidueProduct(n, left, right)


def normal_ordered(k: int, F, G) -> ResidueProduct:
    """The normally ordered product with k-th divided-power derivative on the
    left factor, as the residue product of index -k-1."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    return ResidueProduct(-k - 1, F, G)


def generator_fields(spec: AlgebraSpec) -> dict:
    """The shipped generator fields of an algebra, keyed by display name."""
    if spec.kind == "virasoro":
        return {"omega": Generator("L")}
    return {label: Generator(label) for label in spec.labels}


# ---------------------------------------------------------------------------
# Rendering and parsing (display names: the weight-2 field renders as omega)


def render_field(F) -> str:
    if isinstance(F, Generator):
        return "omega" if F.label == "L" else F.label
    if isinstance(F, IdentityField):
        return "Id"
    if isinstance(F, Derivative):
        prefix = "d" if F.k == 1 else f"d{F.k}"
        child = render_field(F.child)
        if isinstance(F.child, Generator):
            return prefix + child
        return f"{prefix}({child})"
    if isinstance(F, Linear):
        if not F.terms:
            return "0"
        pieces = []
        for coeff, expr in F.terms:
            text = str(coeff)
            body = render_field(expr)
            negative = text.startswith("-")
            if negative:
                text = text[1:]
            term = body if text == "1" else (
                f"({text})*{body}" if " + " in text or " - " in text else f"{text}*{body}")
            if not pieces:
                pieces.append(f"-{term}" if negative else term)
            else:
                pieces.append(" - " if negative else " + ")
                pieces.append(term)
        return "".join(pieces)
    return f"({render_field(F.left)} *{F.n} {render_field(F.right)})"


def parse_field(spec: AlgebraSpec, text: str):
    parser = _FieldParser(tokenize(text), spec)
    expr = parser.parse_field()
    parser.take("end")
    return expr


class _FieldParser:
    def __init__(self, tokens, spec):
        self.tokens = tokens
        self.pos = 0
        self.spec = spec
        names = generator_fields(spec)
        if spec.kind == "virasoro":
            names = dict(names, L=names["omega"])
        self.names = dict(names, Id=IDENTITY)

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse_field(self):
        kind, value, position = self.peek()
        if kind == "(":
            self.take()
            left = self.parse_field()
            self.take("*")
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            n_tok = self.take("int")
            right = self.parse_field()
            self.take(")")
            return ResidueProduct(sign * int(n_tok[1]), left, right)
        if kind == ":":
            self.take()
            left = self.parse_field()
            right = self.parse_field()
            self.take(":")
            return normal_ordered(0, left, right)
        if kind == "name":
            self.take()
            return self._resolve(value, position)
        raise ParseError(f"expected a field expression, found {value!r}", position)

    def _resolve(self, name, position):
        if name in self.names:
            return self.names[name]
        if name.startswith("d"):
            rest = name[1:]
            digits = ""
            while rest and rest[0].isdigit():
                digits += rest[0]
                rest = rest[1:]
            if rest in self.names:
                return derivative(int(digits) if digits else 1, self.names[rest])
        raise ParseError(f"unknown field {name!r} for {self.spec.describe()}", position)


# ---------------------------------------------------------------------------
# Weights and truncation bounds


def field_weight(F) -> int:
    """Conformal weight of the expression: F_m sends module weight w to
    w + weight(F) - m - 1, exactly, for every node kind."""
    if isinstance(F, Generator):
        return 2 if F.label == "L" else 1
    if isinstance(F, IdentityField):
        return 0
    if isinstance(F, Derivative):
        return field_weight(F.child) + F.k
    if isinstance(F, Linear):
        return max((field_weight(e) for _c, e in F.terms), default=0)
    return field_weight(F.left) + field_weight(F.right) - F.n - 1


def field_truncation_bound(spec: AlgebraSpec, F, v: State) -> int:
    """N with F_n v = 0 for all n >= N.  On the vacuum every expression here
    is creative, so 0 works; otherwise weight bookkeeping gives w + weight(F)
    since no state has negative weight."""
    d = field_weight(F)
    bound = 0
    for mon in v.terms:
        if mon:
            bound = max(bound, monomial_weight(mon) + d, 0)
    return bound


# ---------------------------------------------------------------------------
# Mode evaluation


def field_mode(spec: AlgebraSpec, F, m: int, v: State) -> State:
    """Exact action of the m-th mode of F on a state."""
    terms = v.terms
    if len(terms) == 1:
        (mon, coeff), = terms.items()
        result = _mode_on_monomial(spec, F, m, mon)
        # memoized results are shared, never mutated
        return result if coeff == 1 else result.scale(coeff)
    total = {}
    for mon, coeff in terms.items():
        add_scaled_terms(total, _mode_on_monomial(spec, F, m, mon).terms, coeff)
    return state_from_terms(total)


def _mode_on_monomial(spec: AlgebraSpec, F, m: int, mon) -> State:
    memo = spec._field_memo
    key = (F, m, mon)
    cached = memo.get(key)
    if cached is not None:
        return cached
    v = State({mon: 1})
    if isinstance(F, Generator):
        # the weight-2 field carries modes shifted by one: omega_m = L_(m-1)
        shift = 1 if F.label == "L" and spec.kind == "virasoro" else 0
        result = mode_act(spec, F.label, m - shift, v)
    elif isinstance(F, IdentityField):
        result = v if m == -1 else State()
    elif isinstance(F, Derivative):
        # (d^k F)_m = (-1)^k m (m-1) ... (m-k+1) F_(m-k)
        coeff = rat(1)
        for j in range(F.k):
            coeff *= -(m - j)
        if coeff == 0:
            result = State()
        else:
            result = _mode_on_monomial(spec, F.child, m - F.k, mon).scale(coeff)
    elif isinstance(F, Linear):
        acc = {}
        for coeff, expr in F.terms:
            add_scaled_terms(acc, _mode_on_monomial(spec, expr, m, mon).terms, coeff)
        result = state_from_terms(acc)
    else:
        result = c_matrix_mode(spec, F.left, F.right, F.n, 0, m, v)
    memo[key] = result
    return result


def residue_product_mode(spec: AlgebraSpec, n: int, F, G, m: int, v: State,
                         extra: int = 0) -> State:
    """(F *n G)_m v by the component formula; extra widens the i-sum past
    the grading bound (the added terms must all vanish)."""
    if extra == 0:
        return field_mode(spec, ResidueProduct(n, F, G), m, v)
    total = State()
    for mon, coeff in v.terms.items():
        part = c_matrix_mode(spec, F, G, n, 0, m, State({mon: 1}), extra=extra)
        total = total + part.scale(coeff)
    return total


def c_matrix_mode(spec: AlgebraSpec, F, G, n: int, l: int, m: int, v: State,
                  extra: int = 0) -> State:
    """The (l, m) component of the order-n locality bracket:
    sum_i (-1)^i C(n,i) (F_(l+n-i) G_(m+i) - (-1)^n G_(m+n-i) F_(l+i)) v.
    At l = 0 this is the residue-product mode (F *n G)_m v."""
    sign_n = 1 if n % 2 == 0 else -1
    d_F = field_weight(F)
    d_G = field_weight(G)
    total = {}
    for mon, coeff in v.terms.items():
        w = monomial_weight(mon) if mon else None
        bound_F = 0 if w is None else max(w + d_F, 0)
        bound_G = 0 if w is None else max(w + d_G, 0)
        # each product truncates on its own inner factor
        stop_first = max(bound_G - m, 0) + extra
        stop_second = max(bound_F - l, 0) + extra
        if n >= 0:
            stop_first = min(stop_first, n + 1 + extra)
            stop_second = min(stop_second, n + 1 + extra)
        for i in range(stop_first):
            c = binomial(n, i)
            if c == 0:
                continue
            if i % 2:
                c = -c
            c = coeff * c
            for mon2, c2 in _mode_on_monomial(spec, G, m + i, mon).terms.items():
                outer = _mode_on_monomial(spec, F, l + n - i, mon2)
                if outer.terms:
                    add_scaled_terms(total, outer.terms, c2 * c)
        for i in range(stop_second):
            c = binomial(n, i)
            if c == 0:
                continue
            if i % 2 == 0:
                c = -c
            c = coeff * (c * sign_n)
            for mon2, c2 in _mode_on_monomial(spec, F, l + i, mon).terms.items():
                outer = _mode_on_monomial(spec, G, m + n - i, mon2)
                if outer.terms:
                    add_scaled_terms(total, outer.terms, c2 * c)
    return state_from_terms(total)


def creative_state(spec: AlgebraSpec, F) -> State:
    return field_mode(spec, F, -1, VACUUM)


# ---------------------------------------------------------------------------
# Named checks.  Each returns a small report dict with an "ok" flag and
# enough detail to see what was tested; none of them round or approximate.


def creativity_check(spec: AlgebraSpec, F, a: State, z_orders: int) -> dict:
    """F_(-1) vac = a and F_n vac = 0 for 0 <= n <= z_orders."""
    created = creative_state(spec, F)
    failures = []
    if created != a:
        failures.append((-1, render_state(created)))
    for n in range(z_orders + 1):
        out = field_mode(spec, F, n, VACUUM)
        if not out.is_zero():
            failures.append((n, render_state(out)))
    return {
        "identity": "creativity",
        "field": render_field(F),
        "created": render_state(created),
        "expected": render_state(a),
        "z_orders": z_orders,
        "failures": failures,
        "ok": not failures,
    }


def normal_order_direct_mode(spec: AlgebraSpec, k: int, F, G, m: int, v: State) -> State:
    """Mode of :d^(k)F G: evaluated through the creation/annihilation split,
    with the divided-power derivative: creation modes of d^(k)F/k! act
    outside G, annihilation modes act inside."""
    A = derivative(k, F)
    scale = rat(1, factorial(k))
    total = State()
    for n in range(m - field_truncation_bound(spec, G, v), 0):
        total = total + field_mode(spec, A, n, field_mode(spec, G, m - n - 1, v))
    for n in range(field_truncation_bound(spec, A, v)):
        total = total + field_mode(spec, G, m - n - 1, field_mode(spec, A, n, v))
    return total.scale(scale)


def normal_order_agreement(spec: AlgebraSpec, k: int, F, G,
                           m_window=(-3, 3), weight_cutoff: int = 3) -> dict:
    """The residue product of index -k-1 against the direct normally ordered
    evaluator: two independent routes that must agree mode by mode."""
    product = normal_ordered(k, F, G)
    failures = []
    cells = 0
    for v in basis_states(spec, weight_cutoff):
        for m in range(m_window[0], m_window[1] + 1):
            cells += 1
            via_product = field_mode(spec, product, m, v)
            direct = normal_order_direct_mode(spec, k, F, G, m, v)
            if via_product != direct:
                failures.append((m, render_state(v), render_state(via_product),
                                 render_state(direct)))
    return {
        "identity": "normal-order-agreement",
        "field": render_field(product),
        "k": k,
        "m_window": list(m_window),
        "weight_cutoff": weight_cutoff,
        "cells_checked": cells,
        "failures": failures,
        "ok": not failures,
    }


# ---------------------------------------------------------------------------
# Locality


@dataclass(frozen=True)
class LocalityReport:
    left: str
    right: str
    order: int | None
    window: tuple  # ((index lo, index hi), weight_cutoff, slack, cap)
    status: str  # "verified-on-window" or "not local on window"
    witness: tuple | None  # (n, m, state, value) showing order-1 fails

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "order": self.order,
            "window": {
                "index_window": list(self.window[0]),
                "weight_cutoff": self.window[1],
                "slack": self.window[2],
                "cap": self.window[3],
            },
            "status": self.status,
            "witness": list(self.witness) if self.witness else None,
        }


def locality_order(spec: AlgebraSpec, F, G, index_window=(-4, 4),
                   weight_cutoff: int = 4, slack: int = 3, cap: int = 16) -> LocalityReport:
    """Least N >= 0 with (F *n G) acting as zero on the window for
    N <= n <= N + slack, cross-checked against the two-index bracket
    components at N, with a nonzero witness at N - 1."""
    key = (F, G, index_window, weight_cutoff, slack, cap)
    cached = spec._locality_memo.get(key)
    if cached is not None:
        return cached
    report = _locality_order_uncached(spec, F, G, index_window, weight_cutoff,
                                      slack, cap)
    spec._locality_memo[key] = report
    return report


def _locality_order_uncached(spec, F, G, index_window, weight_cutoff,
                             slack, cap) -> LocalityReport:
    lo, hi = index_window
    if lo > hi:
        raise ValueError("empty index window")
    basis = basis_states(spec, weight_cutoff)
    modes = range(lo, hi + 1)
    window = ((lo, hi), weight_cutoff, slack, cap)

    zero_at = {}

    def product_vanishes(n):
        if n not in zero_at:
            zero_at[n] = all(
                field_mode(spec, ResidueProduct(n, F, G), m, v).is_zero()
                for v in basis for m in modes)
        return zero_at[n]

    order = None
    for N in range(cap + 1):
        if all(product_vanishes(n) for n in range(N, N + slack + 1)):
            order = N
            break
    left, right = render_field(F), render_field(G)
    if order is None:
        return LocalityReport(left, right, None, window, "not local on window", None)

    # independent route: the full (l, m) bracket components at N must vanish.
    # The compositions F_p G_q v depend only on (p + q, q, v), shared across
    # the (l, m) window, so they are cached per state.
    n = order
    sign_n = 1 if n % 2 == 0 else -1
    d_F, d_G = field_weight(F), field_weight(G)
    for v in basis:
        w = weight(v)
        bound_F = 0 if w is None else max(w + d_F, 0)
        bound_G = 0 if w is None else max(w + d_G, 0)
        first_rows = {}
        second_rows = {}
        for l in modes:
            for m in modes:
                acc = {}
                s = l + m + n
                for i in range(min(max(bound_G - m, 0), n + 1)):
                    c = binomial(n, i)
                    if c == 0:
                        continue
                    if i % 2:
                        c = -c
                    key = (s, m + i)
                    term = first_rows.get(key)
                    if term is None:
                        term = field_mode(spec, F, s - m - i,
                                          field_mode(spec, G, m + i, v))
                        first_rows[key] = term
                    if term.terms:
                        add_scaled_terms(acc, term.terms, c)
                for i in range(min(max(bound_F - l, 0), n + 1)):
                    c = binomial(n, i)
                    if c == 0:
                        continue
                    if i % 2 == 0:
                        c = -c
                    if sign_n < 0:
                        c = -c
                    key = (s, l + i)
                    term = second_rows.get(key)
                    if term is None:
                        term = field_mode(spec, G, s - l - i,
                                          field_mode(spec, F, l + i, v))
                        second_rows[key] = term
                    if term.terms:
                        add_scaled_terms(acc, term.terms, c)
                if not state_from_terms(acc).is_zero():
                    out = c_matrix_mode(spec, F, G, order, l, m, v)
                    return LocalityReport(left, right, None, window,
                                          "not local on window",
                                          (order, (l, m), render_state(v),
                                           render_state(out)))
    witness = None
    if order > 0:
        for v in basis:
            for m in modes:
                out = field_mode(spec, ResidueProduct(order - 1, F, G), m, v)
                if not out.is_zero():
                    witness = (order - 1, m, render_state(v), render_state(out))
                    break
            if witness:
                break
    return LocalityReport(left, right, order, window, "verified-on-window", witness)


def ope_singular_part(spec: AlgebraSpec, F, G, weight_cutoff: int = 4,
                      index_window=(-4, 4), cap: int = 16) -> list:
    """[(pole order i+1, state created by F *i G)] for i below the locality
    order, most singular first, zero numerators omitted."""
    report = locality_order(spec, F, G, index_window=index_window,
                            weight_cutoff=weight_cutoff, cap=cap)
    if report.status != "verified-on-window":
        raise ValueError(f"no locality order for {report.left}, {report.right} "
                         f"on the tested window")
    out = []
    for i in range(report.order - 1, -1, -1):
        created = creative_state(spec, ResidueProduct(i, F, G))
        if not created.is_zero():
            out.append((i + 1, created))
    return out


def derivative_locality_check(spec: AlgebraSpec, F, G, index_window=(-4, 4),
                              weight_cutoff: int = 4) -> dict:
    """Differentiating one factor raises the locality order by at most one."""
    base = locality_order(spec, F, G, index_window, weight_cutoff)
    derived = locality_order(spec, derivative(1, F), G, index_window, weight_cutoff)
    ok = (base.status == "verified-on-window"
          and derived.status == "verified-on-window"
          and derived.order <= base.order + 1)
    return {
        "identity": "derivative-locality",
        "pair": [render_field(F), render_field(G)],
        "base_order": base.order,
        "derived_order": derived.order,
        "bound": None if base.order is None else base.order + 1,
        "ok": ok,
    }


def derivation_of_products_check(spec: AlgebraSpec, F, G, n: int,
                                 window=(-3, 3), weight_cutoff: int = 3) -> dict:
    """d(F *n G) = (dF) *n G + F *n (dG) as mode actions on the window."""
    lhs_field = derivative(1, ResidueProduct(n, F, G))
    rhs_field = linear([
        (1, ResidueProduct(n, derivative(1, F), G)),
        (1, ResidueProduct(n, F, derivative(1, G))),
    ])
    failures = []
    cells = 0
    for v in basis_states(spec, weight_cutoff):
        for m in range(window[0], window[1] + 1):
            cells += 1
            lhs = field_mode(spec, lhs_field, m, v)
            rhs = field_mode(spec, rhs_field, m, v)
            if lhs != rhs:
                failures.append((m, render_state(v)))
    return {
        "identity": "derivation-of-products",
        "pair": [render_field(F), render_field(G)],
        "n": n,
        "window": list(window),
        "weight_cutoff": weight_cutoff,
        "cells_checked": cells,
        "failures": failures,
        "ok": not failures,
    }


def locality_equivalences_check(spec: AlgebraSpec, F, G, index_window=(-3, 3),
                                weight_cutoff: int = 4) -> dict:
    """Two reformulations of locality at the measured order N, checked as
    exact operator identities on the window: the commutator expands over
    residue products, [F_m, G_n] = sum_{i<N} C(m,i) (F *i G)_(m+n-i), and
    the alternating sum vanishes, sum_i (-1)^i C(N,i) [F_(n-i), G_(m+i)] = 0.
    """
    report = locality_order(spec, F, G, index_window=index_window,
                            weight_cutoff=weight_cutoff)
    if report.status != "verified-on-window":
        return {"identity": "locality-equivalences",
                "pair": [render_field(F), render_field(G)],
                "order": None, "cells_checked": 0,
                "failures": [["no locality order on window"]], "ok": False}
    N = report.order
    lo, hi = index_window
    basis = basis_states(spec, weight_cutoff)
    failures = []
    cells = 0
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            for v in basis:
                cells += 1
                commutator = field_mode(spec, F, m, field_mode(spec, G, n, v)) \
                    - field_mode(spec, G, n, field_mode(spec, F, m, v))
                expansion = State()
                for i in range(N):
                    c = binomial(m, i)
                    if c == 0:
                        continue
                    term = field_mode(spec, ResidueProduct(i, F, G), m + n - i, v)
                    expansion = expansion + term.scale(c)
                if commutator != expansion:
                    failures.append(["commutator-expansion", m, n, render_state(v)])
                alternating = State()
                for i in range(N + 1):
                    c = binomial(N, i)
                    if i % 2:
                        c = -c
                    term = field_mode(spec, F, m - i, field_mode(spec, G, n + i, v)) \
                        - field_mode(spec, G, n + i, field_mode(spec, F, m - i, v))
                    alternating = alternating + term.scale(c)
                if not alternating.is_zero():
                    failures.append(["alternating-sum", m, n, render_state(v)])
    return {
        "identity": "locality-equivalences",
        "pair": [render_field(F), render_field(G)],
        "order": N,
        "index_window": list(index_window),
        "weight_cutoff": weight_cutoff,
        "cells_checked": cells,
        "failures": failures,
        "ok": not failures,
    }


def dong_bound_check(spec: AlgebraSpec, F, G, H, n: int, index_window=(-4, 4),
                     weight_cutoff: int = 4) -> dict:
    """(F *n G) is local with H of order at most K + L + M - n - 1, where
    K, L, M are the pairwise locality orders."""
    fg = locality_order(spec, F, G, index_window, weight_cutoff)
    fh = locality_order(spec, F, H, index_window, weight_cutoff)
    gh = locality_order(spec, G, H, index_window, weight_cutoff)
    product = locality_order(spec, ResidueProduct(n, F, G), H,
                             index_window, weight_cutoff)
    orders = (fg.order, fh.order, gh.order, product.order)
    ok = all(o is not None for o in orders)
    bound = None
    if ok:
        bound = max(fg.order + fh.order + gh.order - n - 1, 0)
        ok = product.order <= bound
    return {
        "identity": "dong-bound",
        "triple": [render_field(F), render_field(G), render_field(H)],
        "n": n,
        "pairwise_orders": [fg.order, fh.order, gh.order],
        "bound": bound,
        "measured": product.order,
        "ok": ok,
    }
