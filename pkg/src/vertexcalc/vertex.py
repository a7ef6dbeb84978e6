"""State-field correspondence and batch verifiers for vertex algebra identities.

A state maps to a field by right-nesting residue products over the factors
of each basis monomial (generator fields index by field modes, so Virasoro
factors shift by one).  Every verifier evaluates both sides of an identity
as exact module states over a finite grid of mode indices and a
weight-bounded basis sample; any mismatch is recorded as a witness.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from math import factorial

from .fields import (
    IDENTITY,
    Generator,
    ResidueProduct,
    c_matrix_mode,
    creative_state,
    derivative,
    field_mode,
    field_truncation_bound,
    field_weight,
    generator_fields,
    linear,
    locality_order,
    render_field,
)
from .formal import BivariateTrunc, TruncationError, bivar_eq, expand_binomial
from .liealg import (
    AlgebraSpec,
    State,
    add_scaled_terms,
    basis_states,
    monomial_weight,
    render_state,
    state_from_terms,
    translation_T,
    weight,
)
from .newton import binomial
from .scalars import Scalar, rat

VACUUM = State.vacuum()


@dataclass(frozen=True)
class VerificationGrid:
    """Finite window for identities quantified over all integers."""

    l_range: tuple = (-3, 3)
    m_range: tuple = (-3, 3)
    n_range: tuple = (-3, 3)
    weight_cutoff: int = 6

    def __post_init__(self):
        for name in ("l_range", "m_range", "n_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"empty {name}: {lo}..{hi}")
        if self.weight_cutoff < 0:
            raise ValueError("weight cutoff must be nonnegative")

    def l_values(self):
        return range(self.l_range[0], self.l_range[1] + 1)

    def m_values(self):
        return range(self.m_range[0], self.m_range[1] + 1)

    def n_values(self):
        return range(self.n_range[0], self.n_range[1] + 1)

    def to_dict(self) -> dict:
        return {
            "l_range": list(self.l_range),
            "m_range": list(self.m_range),
            "n_range": list(self.n_range),
            "weight_cutoff": self.weight_cutoff,
        }


DEFAULT_GRID = VerificationGrid()


@dataclass
class Report:
    identity: str
    algebra: str
    grid: dict
    cells_checked: int
    failures: list
    elapsed: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "algebra": self.algebra,
            "grid": self.grid,
            "cells_checked": self.cells_checked,
            "failures": self.failures,
            "elapsed": self.elapsed,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def to_text(self) -> str:
        g = self.grid
        grid_text = " ".join(
            f"{axis[0]}={g[axis][0]}..{g[axis][1]}"
            for axis in ("l_range", "m_range", "n_range")
        )
        lines = [
            f"identity:      {self.identity}",
            f"algebra:       {self.algebra}",
            f"grid:          {grid_text} weight<={g['weight_cutoff']}",
            f"cells checked: {self.cells_checked}",
            f"failures:      {len(self.failures)}",
            f"elapsed:       {self.elapsed:.3f}s",
            f"status:        {'PASS' if self.ok else 'FAIL'}",
        ]
        if self.failures:
            lines.append(f"first witness: {self.failures[0]}")
        return "\n".join(lines)


class VertexAlgebraHandle:
    """Vertex operator assignment for one algebra's vacuum module.

    The memo table is append-only with last-write-wins semantics, so
    concurrent readers observe either absence or the final field tree.
    """

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec
        self.generators = generator_fields(spec)
        self._y_memo = {}

    def __repr__(self):
        return f"VertexAlgebraHandle({self.spec.describe()})"


def _field_index(spec: AlgebraSpec, mode: int) -> int:
    # raw Virasoro modes sit one below the field indexing of omega
    return mode + 1 if spec.kind == "virasoro" else mode


def _operator_for_monomial(handle: VertexAlgebraHandle, mon) -> object:
    memo = handle._y_memo
    cached = memo.get(mon)
    if cached is not None:
        return cached
    f = IDENTITY
    for mode, label in reversed(mon):
        f = ResidueProduct(_field_index(handle.spec, mode), Generator(label), f)
    memo[mon] = f
    return f


def vertex_operator(handle: VertexAlgebraHandle, a: State):
    """Right-nested residue product composite over each basis monomial."""
    items = sorted(a.terms.items(), key=lambda kv: (monomial_weight(kv[0]), kv[0]))
    return linear(
        (coeff, _operator_for_monomial(handle, mon)) for mon, coeff in items)


def _finish(identity: str, spec: AlgebraSpec, grid: VerificationGrid,
            cells: int, failures: list, start: float) -> Report:
    return Report(identity, spec.describe(), grid.to_dict(), cells, failures,
                  round(time.perf_counter() - start, 6))


def verify_commutator(handle: VertexAlgebraHandle, a: State, b: State,
                      grid: VerificationGrid = DEFAULT_GRID) -> Report:
    """[a_m, b_n] = sum_i C(m,i) (a_i b)_(m+n-i) on every grid cell."""
    start = time.perf_counter()
    spec = handle.spec
    A = vertex_operator(handle, a)
    B = vertex_operator(handle, b)
    # a_i b vanishes for i >= bound, so the i-sum is finite
    bound = field_truncation_bound(spec, A, b)
    products = [vertex_operator(handle, field_mode(spec, A, i, b))
                for i in range(bound)]
    basis = basis_states(spec, grid.weight_cutoff)
    failures = []
    cells = 0
    for m in grid.m_values():
        for n in grid.n_values():
            for v in basis:
                cells += 1
                lhs = field_mode(spec, A, m, field_mode(spec, B, n, v)) \
                    - field_mode(spec, B, n, field_mode(spec, A, m, v))
                acc = {}
                for i, op in enumerate(products):
                    c = binomial(m, i)
                    if c == 0:
                        continue
                    add_scaled_terms(acc, field_mode(spec, op, m + n - i, v).terms, c)
                if lhs != state_from_terms(acc):
                    failures.append([m, n, render_state(v)])
    return _finish("commutator", spec, grid, cells, failures, start)


def verify_associator(handle: VertexAlgebraHandle, a: State, b: State,
                      grid: VerificationGrid = DEFAULT_GRID) -> Report:
    """(a_n b)_m = sum_i (-1)^i C(n,i) (a_(n-i) b_(m+i) - (-1)^n b_(m+n-i) a_i)
    with the left side going through the composite field of the state a_n b."""
    start = time.perf_counter()
    spec = handle.spec
    A = vertex_operator(handle, a)
    B = vertex_operator(handle, b)
    basis = basis_states(spec, grid.weight_cutoff)
    failures = []
    cells = 0
    for n in grid.n_values():
        product_op = vertex_operator(handle, field_mode(spec, A, n, b))
        for m in grid.m_values():
            for v in basis:
                cells += 1
                lhs = field_mode(spec, product_op, m, v)
                rhs = c_matrix_mode(spec, A, B, n, 0, m, v)
                if lhs != rhs:
                    failures.append([n, m, render_state(v)])
    return _finish("associator", spec, grid, cells, failures, start)


def verify_bflm(handle: VertexAlgebraHandle, a: State, b: State,
                grid: VerificationGrid = DEFAULT_GRID) -> Report:
    """sum_i C(l,i) (a_(n+i) b)_(l+m-i) = sum_i (-1)^i C(n,i)
    (a_(l+n-i) b_(m+i) - (-1)^n b_(m+n-i) a_(l+i)) over the (l,m,n) grid.

    The right-side compositions a_p b_q v depend only on (p+q, q, v), and
    p+q = l+m+n is shared across many cells, so they are cached per state.
    """
    start = time.perf_counter()
    spec = handle.spec
    A = vertex_operator(handle, a)
    B = vertex_operator(handle, b)
    bound = field_truncation_bound(spec, A, b)
    products = {}
    for j in range(min(grid.n_range[0], bound), bound):
        products[j] = vertex_operator(handle, field_mode(spec, A, j, b))
    basis = basis_states(spec, grid.weight_cutoff)
    failures = []
    cells = 0
    for v in basis:
        n_a = field_truncation_bound(spec, A, v)
        n_b = field_truncation_bound(spec, B, v)
        first_rows = {}
        second_rows = {}
        for n in grid.n_values():
            for l in grid.l_values():
                for m in grid.m_values():
                    cells += 1
                    acc = {}
                    for i in range(max(bound - n, 0)):
                        c = binomial(l, i)
                        if c == 0:
                            continue
                        op = products[n + i]
                        add_scaled_terms(acc, field_mode(spec, op, l + m - i, v).terms, c)
                    lhs = state_from_terms(acc)
                    s = l + m + n
                    stop_first = max(n_b - m, 0)
                    stop_second = max(n_a - l, 0)
                    if n >= 0:
                        stop_first = min(stop_first, n + 1)
                        stop_second = min(stop_second, n + 1)
                    acc = {}
                    for i in range(stop_first):
                        c = binomial(n, i)
                        if c == 0:
                            continue
                        if i % 2:
                            c = -c
                        key = (s, m + i)
                        term = first_rows.get(key)
                        if term is None:
                            term = field_mode(spec, A, s - m - i,
                                              field_mode(spec, B, m + i, v))
                            first_rows[key] = term
                        if term.terms:
                            add_scaled_terms(acc, term.terms, c)
                    for i in range(stop_second):
                        c = binomial(n, i)
                        if c == 0:
                            continue
                        if i % 2 == 0:
                            c = -c
                        if n % 2:
                            c = -c
                        key = (s, l + i)
                        term = second_rows.get(key)
                        if term is None:
                            term = field_mode(spec, B, s - l - i,
                                              field_mode(spec, A, l + i, v))
                            second_rows[key] = term
                        if term.terms:
                            add_scaled_terms(acc, term.terms, c)
                    if lhs != state_from_terms(acc):
                        failures.append([l, m, n, render_state(v)])
    return _finish("bflm", spec, grid, cells, failures, start)


def verify_skew_symmetry(handle: VertexAlgebraHandle, a: State, b: State,
                         grid: VerificationGrid = DEFAULT_GRID) -> Report:
    """a_n b = (-1)^(n+1) sum_k (-1)^k (T^k / k!) b_(n+k) a for n in the grid.

    The k-sum terminates because b-modes truncate on a; the divided power
    T^k / k! comes from expanding exp(zT) coefficientwise.
    """
    start = time.perf_counter()
    spec = handle.spec
    A = vertex_operator(handle, a)
    B = vertex_operator(handle, b)
    bound = field_truncation_bound(spec, B, a)
    failures = []
    cells = 0
    for n in grid.n_values():
        cells += 1
        lhs = field_mode(spec, A, n, b)
        rhs = State()
        for k in range(max(bound - n, 0)):
            term = field_mode(spec, B, n + k, a)
            for _ in range(k):
                term = translation_T(spec, term)
            sign = -1 if k % 2 else 1
            rhs = rhs + term.scale(rat(sign, factorial(k)))
        if n % 2 == 0:
            rhs = -rhs
        if lhs != rhs:
            failures.append([n, render_state(lhs), render_state(rhs)])
    return _finish("skew-symmetry", spec, grid, cells, failures, start)


def verify_translation(handle: VertexAlgebraHandle, a: State,
                       grid: VerificationGrid = DEFAULT_GRID,
                       z_orders: int | None = None) -> Report:
    """Three translation checks: [T, a_n] = -n a_(n-1) on grid states, the
    modes of Y(Ta) match the derivative field of Y(a), and the z^k
    coefficient of the field applied to the vacuum is T^k a / k!."""
    start = time.perf_counter()
    spec = handle.spec
    A = vertex_operator(handle, a)
    ta = translation_T(spec, a)
    TA = vertex_operator(handle, ta)
    dA = derivative(1, A)
    if z_orders is None:
        z_orders = grid.weight_cutoff
    basis = basis_states(spec, grid.weight_cutoff)
    failures = []
    cells = 0
    for n in grid.n_values():
        for v in basis:
            cells += 1
            lhs = translation_T(spec, field_mode(spec, A, n, v)) \
                - field_mode(spec, A, n, translation_T(spec, v))
            rhs = field_mode(spec, A, n - 1, v).scale(-n)
            if lhs != rhs:
                failures.append(["mode-commutator", n, render_state(v)])
    for m in grid.m_values():
        for v in basis:
            cells += 1
            if field_mode(spec, TA, m, v) != field_mode(spec, dA, m, v):
                failures.append(["derivative-field", m, render_state(v)])
    expansion = a
    for k in range(z_orders + 1):
        cells += 1
        if field_mode(spec, A, -k - 1, VACUUM) != expansion.scale(rat(1, factorial(k))):
            failures.append(["vacuum-taylor", k])
        expansion = translation_T(spec, expansion)
    for n in range(0, grid.n_range[1] + 1):
        cells += 1
        if not field_mode(spec, A, n, VACUUM).is_zero():
            failures.append(["vacuum-annihilation", n])
    return _finish("translation", spec, grid, cells, failures, start)


def verify_uniqueness(handle: VertexAlgebraHandle,
                      grid: VerificationGrid = DEFAULT_GRID) -> Report:
    """Creativity plus translation covariance pins the field of a state.

    For each generator: the generator field itself is a creative covariant
    candidate and must match Y of its created state cell by cell; an
    index-shifted candidate (identity plus the generator one step up) still
    creates the vacuum but must fail covariance somewhere on the grid; and
    the explicitly zero field must kill every grid state.  A shifted
    candidate that passes covariance is flagged for review.
    """
    start = time.perf_counter()
    spec = handle.spec
    basis = basis_states(spec, grid.weight_cutoff)
    failures = []
    cells = 0
    for name, F in handle.generators.items():
        created = creative_state(spec, F)
        Y = vertex_operator(handle, created)
        for n in grid.n_values():
            for v in basis:
                cells += 1
                if field_mode(spec, F, n, v) != field_mode(spec, Y, n, v):
                    failures.append(["candidate-mismatch", name, n, render_state(v)])
                cells += 1
                lhs = translation_T(spec, field_mode(spec, Y, n, v)) \
                    - field_mode(spec, Y, n, translation_T(spec, v))
                if lhs != field_mode(spec, Y, n - 1, v).scale(-n):
                    failures.append(["covariance", name, n, render_state(v)])

        def shifted(n, v, F=F):
            vacuum_part = v if n == -1 else State()
            return vacuum_part + field_mode(spec, F, n + 1, v)

        cells += 1
        if shifted(-1, VACUUM) != VACUUM:
            failures.append(["shifted-candidate-not-creative", name])
        for n in range(0, grid.n_range[1] + 1):
            cells += 1
            if not shifted(n, VACUUM).is_zero():
                failures.append(["shifted-candidate-not-creative", name, n])
        violated = False
        for n in grid.n_values():
            for v in basis:
                cells += 1
                lhs = translation_T(spec, shifted(n, v)) \
                    - shifted(n, translation_T(spec, v))
                if lhs != shifted(n - 1, v).scale(-n):
                    violated = True
                    break
            if violated:
                break
        if not violated:
            failures.append(["shifted-candidate-passed-covariance", name,
                             "needs human review"])
        zero_op = linear([(1, F), (-1, F)])
        for n in grid.n_values():
            for v in basis:
                cells += 1
                if not field_mode(spec, zero_op, n, v).is_zero():
                    failures.append(["zero-field", name, n, render_state(v)])
    return _finish("uniqueness", spec, grid, cells, failures, start)


def translation_symmetry_check(handle: VertexAlgebraHandle, a: State,
                               orders: int,
                               grid: VerificationGrid = DEFAULT_GRID) -> Report:
    """Conjugation by exp(yT) translates the field variable: the y^j
    coefficient on one side is the j-fold nested commutator with T over j!,
    on the other the j-th divided derivative field; the factorials cancel,
    so compare ad_T^j against the plain j-th derivative."""
    start = time.perf_counter()
    spec = handle.spec
    A = vertex_operator(handle, a)
    basis = basis_states(spec, grid.weight_cutoff)

    def ad_power(j, n, v):
        if j == 0:
            return field_mode(spec, A, n, v)
        return translation_T(spec, ad_power(j - 1, n, v)) \
            - ad_power(j - 1, n, translation_T(spec, v))

    failures = []
    cells = 0
    for j in range(orders + 1):
        dA = derivative(j, A)
        for n in grid.n_values():
            for v in basis:
                cells += 1
                if ad_power(j, n, v) != field_mode(spec, dA, n, v):
                    failures.append([j, n, render_state(v)])
    return _finish("translation-symmetry", spec, grid, cells, failures, start)


def derivative_reading_check(handle: VertexAlgebraHandle, depth: int = 3,
                             index_window=(-3, 3), weight_cutoff: int = 4) -> dict:
    """Which divided-derivative order matches Y(g_(-k-1) vacuum)?

    For each generator field F and k >= 1, the state F_(-k-1) applied to the
    vacuum should map to the k-th divided derivative of F, one order below
    the naive index; both readings are compared on a mode window and the
    matching one is reported.
    """
    spec = handle.spec
    basis = basis_states(spec, weight_cutoff)
    lo, hi = index_window
    per_generator = {}
    for name, F in handle.generators.items():
        rows = []
        for k in range(1, depth + 1):
            a = field_mode(spec, F, -k - 1, VACUUM)
            Y = vertex_operator(handle, a)
            lower = linear([(rat(1, factorial(k)), derivative(k, F))])
            higher = linear([(rat(1, factorial(k + 1)), derivative(k + 1, F))])
            matches_lower = matches_higher = True
            for n in range(lo, hi + 1):
                for v in basis:
                    got = field_mode(spec, Y, n, v)
                    if got != field_mode(spec, lower, n, v):
                        matches_lower = False
                    if got != field_mode(spec, higher, n, v):
                        matches_higher = False
            rows.append({"k": k, "matches_order_k": matches_lower,
                         "matches_order_k_plus_1": matches_higher})
        per_generator[name] = rows
    ok = all(row["matches_order_k"] and not row["matches_order_k_plus_1"]
             for rows in per_generator.values() for row in rows)
    return {
        "identity": "derivative-reading",
        "algebra": spec.describe(),
        "reading": "divided derivative of order one below the mode depth",
        "per_generator": per_generator,
        "ok": ok,
    }


def bflm_delta_form_check(handle: VertexAlgebraHandle, a: State, b: State,
                          n: int, u: State, v: State,
                          l_window=(-3, 3), m_window=(-3, 3)) -> dict:
    """Delta-function form of the main identity, checked at truncation.

    Matrix elements <u|...|v> of both sides are assembled as bivariate
    truncated series: sum_i y^(-i-1) delta^(i)(x/y) (a *_(n+i) b)(y) against
    (x-y)^n a(x)b(y) - (-y+x)^n b(y)a(x).  Needs n >= 0 so the binomial
    factors stay exact; u must be a single basis monomial and v homogeneous.
    """
    if n < 0:
        raise ValueError("delta-form check needs n >= 0: both operator "
                         "products are truncated, so the binomial factor "
                         "must be exact")
    spec = handle.spec
    if len(u.terms) != 1 or next(iter(u.terms.values())) != 1:
        raise ValueError("u must be a single basis monomial with coefficient 1")
    (u_mon,) = u.terms
    if weight(v) is None:
        raise ValueError("v must be homogeneous")
    A = vertex_operator(handle, a)
    B = vertex_operator(handle, b)

    def me(state: State) -> Scalar:
        return state.terms.get(u_mon, Scalar())

    loc = locality_order(spec, A, B)
    if loc.status != "verified-on-window":
        raise ValueError(f"no locality order for the pair on the default "
                         f"window: {loc.status}")
    l_lo, l_hi = l_window
    m_lo, m_hi = m_window
    x_range = (-l_hi - 1, -l_lo - 1)
    vars_xy = ("x", "y")

    # left side: each delta column is known exactly in y once l is fixed,
    # and each product (a *_(n+i) b)(y) hits a single mode by homogeneity
    lhs = BivariateTrunc(vars_xy, {}, (x_range, (None, None)))
    for i in range(max(loc.order - n, 0)):
        delta_coeffs = {}
        for l in range(l_lo, l_hi + 1):
            c = binomial(l, i)
            if c != 0:
                delta_coeffs[(-l - 1, l - i)] = c
        delta_part = BivariateTrunc(vars_xy, delta_coeffs, (x_range, (None, None)))
        rp = ResidueProduct(n + i, A, B)
        m0 = weight(v) + field_weight(rp) - monomial_weight(u_mon) - 1
        coeff = me(field_mode(spec, rp, m0, v))
        product_series = BivariateTrunc(vars_xy, {(0, -m0 - 1): coeff})
        lhs = lhs + delta_part * product_series

    y_range = (-m_hi - 1, -m_lo - 1)
    ab_coeffs = {}
    ba_coeffs = {}
    for l in range(l_lo, l_hi + 1):
        for m in range(m_lo, m_hi + 1):
            ab_coeffs[(-l - 1, -m - 1)] = me(
                field_mode(spec, A, l, field_mode(spec, B, m, v)))
            ba_coeffs[(-l - 1, -m - 1)] = me(
                field_mode(spec, B, m, field_mode(spec, A, l, v)))
    ab = BivariateTrunc(vars_xy, ab_coeffs, (x_range, y_range))
    ba = BivariateTrunc(vars_xy, ba_coeffs, (x_range, y_range))
    xy_pow = expand_binomial(n, n, first="x", second="y", sign_second=-1)
    yx_pow = expand_binomial(n, n, first="y", second="x",
                             sign_first=-1).aligned_to(vars_xy)
    rhs = xy_pow * ab - yx_pow * ba

    series_equal = bivar_eq(lhs, rhs)
    failures = []
    cells_matched = 0
    for l in range(l_lo, l_hi + 1):
        for m in range(m_lo, m_hi + 1):
            direct = me(c_matrix_mode(spec, A, B, n, l, m, v))
            if lhs.coefficient((-l - 1, -m - 1)) != direct:
                failures.append(["lhs-cell", l, m])
            cells_matched += 1
            try:
                rhs_cell = rhs.coefficient((-l - 1, -m - 1))
            except TruncationError:
                continue
            if rhs_cell != direct:
                failures.append(["rhs-cell", l, m])
            cells_matched += 1
    if not series_equal:
        failures.append(["series-mismatch"])
    return {
        "identity": "bflm-delta-form",
        "algebra": spec.describe(),
        "n": n,
        "u": render_state(u),
        "v": render_state(v),
        "l_window": list(l_window),
        "m_window": list(m_window),
        "series_equal": series_equal,
        "cells_matched": cells_matched,
        "failures": failures,
        "ok": not failures,
    }
