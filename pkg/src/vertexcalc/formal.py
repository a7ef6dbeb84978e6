"""Formal Laurent and delta-series calculus at finite truncation.

Infinite series never appear whole: every series object carries explicit
knowledge bounds (a window of exponents whose coefficients are known), and
all arithmetic intersects those bounds.  Objects flagged exact have finite
support and are known everywhere.  Comparisons only ever assert equality
over the common known range and raise TruncationError when that range is
empty, so a passing check never silently relies on truncated-away terms.

Sequence/series bridge: a sequence alpha_n is stored as the generating
series sum_n alpha_n z^(-n-1).  The plus/minus parts split by the sign of
the sequence index n: the plus part keeps n >= 0 (exponents <= -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .newton import binomial
from .scalars import Scalar, as_scalar, rat


class TruncationError(ArithmeticError):
    """An operation or comparison needed coefficients outside the known window."""


# ---------------------------------------------------------------------------
# Laurent polynomials (finite, exact)


class LaurentPoly:
    """Finite Laurent polynomial in one tagged variable."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var: str, coeffs=None):
        self.var = var
        clean = {}
        if coeffs:
            for exp, c in coeffs.items():
                c = as_scalar(c)
                if not c.is_zero():
                    clean[int(exp)] = c
        self.coeffs = clean

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_exp(self) -> int:
        return min(self.coeffs)

    def max_exp(self) -> int:
        return max(self.coeffs)

    def _check_var(self, other: "LaurentPoly"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_var(other)
        coeffs = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            coeffs[exp] = coeffs.get(exp, Scalar()) + c
        return LaurentPoly(self.var, coeffs)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.var, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_var(other)
        coeffs = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                key = e1 + e2
                coeffs[key] = coeffs.get(key, Scalar()) + c1 * c2
        return LaurentPoly(self.var, coeffs)

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers of a Laurent polynomial are series;"
                             " use expand_power_var_first instead")
        out = LaurentPoly(self.var, {0: 1})
        for _ in range(n):
            out = out * self
        return out

    def scale(self, scalar) -> "LaurentPoly":
        scalar = as_scalar(scalar)
        return LaurentPoly(self.var, {e: scalar * c for e, c in self.coeffs.items()})

    def coefficient(self, exp: int) -> Scalar:
        return self.coeffs.get(exp, Scalar())

    def mode(self, n: int) -> Scalar:
        """Sequence entry alpha_n = coefficient of var^(-n-1)."""
        return self.coefficient(-n - 1)

    def with_variable(self, var: str) -> "LaurentPoly":
        return LaurentPoly(var, self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, tuple(sorted((e, c) for e, c in self.coeffs.items()))))

    def __str__(self):
        return _render_terms(self.var, self.coeffs) or "0"

    def __repr__(self):
        return f"LaurentPoly({self})"


def laurent(var: str = "z", **_ignored) -> LaurentPoly:
    return LaurentPoly(var, {})


def laurent_from_terms(terms, var: str = "z") -> LaurentPoly:
    """terms: mapping exponent -> coefficient."""
    return LaurentPoly(var, dict(terms))


def _render_coeff_term(coeff: Scalar, body: str) -> str:
    text = str(coeff)
    if not body:
        return text
    if text == "1":
        return body
    if text == "-1":
        return f"-{body}"
    if any(op in text[1:] for op in (" + ", " - ")):
        return f"({text})*{body}"
    return f"{text}*{body}"


def _render_terms(var: str, coeffs: dict) -> str:
    pieces = []
    for exp in sorted(coeffs):
        if exp == 0:
            body = ""
        elif exp == 1:
            body = var
        else:
            body = f"{var}^{exp}"
        term = _render_coeff_term(coeffs[exp], body)
        if not pieces:
            pieces.append(term)
        elif term.startswith("-"):
            pieces.append(f" - {term[1:]}")
        else:
            pieces.append(f" + {term}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Truncated univariate series


class TruncatedSeries:
    """Series whose coefficients are known exactly for exponents in
    [floor, ceiling]; outside the window nothing is assumed.  exact=True
    means the series has the stored finite support and is known everywhere
    (floor/ceiling then just bound the support)."""

    __slots__ = ("var", "floor", "ceiling", "coeffs", "exact")

    def __init__(self, var: str, floor: int, ceiling: int, coeffs=None, exact=False):
        clean = {}
        if coeffs:
            for exp, c in coeffs.items():
                c = as_scalar(c)
                if not c.is_zero():
                    clean[int(exp)] = c
        if exact:
            floor = min(clean, default=0)
            ceiling = max(clean, default=0)
        else:
            if floor > ceiling:
                raise TruncationError(f"empty validity window [{floor}, {ceiling}]")
            clean = {e: c for e, c in clean.items() if floor <= e <= ceiling}
        self.var = var
        self.floor = floor
        self.ceiling = ceiling
        self.coeffs = clean
        self.exact = exact

    # -- access --------------------------------------------------------

    def knows(self, exp: int) -> bool:
        return self.exact or self.floor <= exp <= self.ceiling

    def coefficient(self, exp: int) -> Scalar:
        if not self.knows(exp):
            raise TruncationError(
                f"coefficient of {self.var}^{exp} outside window [{self.floor}, {self.ceiling}]")
        return self.coeffs.get(exp, Scalar())

    def mode(self, n: int) -> Scalar:
        return self.coefficient(-n - 1)

    def _check_var(self, other):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_var(other)
        coeffs = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            coeffs[exp] = coeffs.get(exp, Scalar()) + c
        if self.exact and other.exact:
            return TruncatedSeries(self.var, 0, 0, coeffs, exact=True)
        floor = other.floor if self.exact else self.floor if other.exact else max(self.floor, other.floor)
        ceiling = other.ceiling if self.exact else self.ceiling if other.exact else min(self.ceiling, other.ceiling)
        return TruncatedSeries(self.var, floor, ceiling, coeffs)

    def __neg__(self):
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.var, out.floor, out.ceiling, out.exact = self.var, self.floor, self.ceiling, self.exact
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar) -> "TruncatedSeries":
        scalar = as_scalar(scalar)
        if scalar.is_zero():
            return TruncatedSeries(self.var, self.floor, self.ceiling, {}, exact=self.exact)
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.var, out.floor, out.ceiling, out.exact = self.var, self.floor, self.ceiling, self.exact
        out.coeffs = {e: scalar * c for e, c in self.coeffs.items()}
        return out

    def mul_laurent(self, p: LaurentPoly) -> "TruncatedSeries":
        """Product with a finite Laurent polynomial; the window shrinks so that
        every kept coefficient depends only on known input coefficients."""
        if self.var != p.var:
            raise ValueError(f"variable mismatch: {self.var} vs {p.var}")
        if p.is_zero():
            return TruncatedSeries(self.var, 0, 0, {}, exact=True)
        coeffs = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in p.coeffs.items():
                key = e1 + e2
                coeffs[key] = coeffs.get(key, Scalar()) + c1 * c2
        if self.exact:
            return TruncatedSeries(self.var, 0, 0, coeffs, exact=True)
        return TruncatedSeries(
            self.var, self.floor + p.max_exp(), self.ceiling + p.min_exp(), coeffs)

    def plus_part(self) -> "TruncatedSeries":
        """Terms with sequence index n >= 0, i.e. exponents <= -1."""
        kept = {e: c for e, c in self.coeffs.items() if e <= -1}
        return TruncatedSeries(self.var, self.floor, self.ceiling, kept, exact=self.exact)

    def minus_part(self) -> "TruncatedSeries":
        kept = {e: c for e, c in self.coeffs.items() if e >= 0}
        return TruncatedSeries(self.var, self.floor, self.ceiling, kept, exact=self.exact)

    def with_variable(self, var: str) -> "TruncatedSeries":
        out = TruncatedSeries.__new__(TruncatedSeries)
        out.var, out.floor, out.ceiling, out.exact = var, self.floor, self.ceiling, self.exact
        out.coeffs = dict(self.coeffs)
        return out

    def __str__(self):
        body = _render_terms(self.var, self.coeffs) or "0"
        if self.exact:
            return body
        return f"{body} {{valid {self.var}^{self.floor}..{self.var}^{self.ceiling}}}"

    def __repr__(self):
        return f"TruncatedSeries({self})"


def series_from_laurent(p: LaurentPoly) -> TruncatedSeries:
    return TruncatedSeries(p.var, 0, 0, p.coeffs, exact=True)


def series_eq(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    """Equality over the common known window; empty overlap is an error."""
    a._check_var(b)
    if a.exact and b.exact:
        return a.coeffs == b.coeffs
    floor = b.floor if a.exact else a.floor if b.exact else max(a.floor, b.floor)
    ceiling = b.ceiling if a.exact else a.ceiling if b.exact else min(a.ceiling, b.ceiling)
    if floor > ceiling:
        raise TruncationError("no overlap between validity windows")
    for exp in range(floor, ceiling + 1):
        if a.coeffs.get(exp, Scalar()) != b.coeffs.get(exp, Scalar()):
            return False
    return True


# ---------------------------------------------------------------------------
# Derivative, residue, splitting


def formal_derivative(f):
    """Termwise power rule; in sequence modes, (d alpha)_n = -n alpha_(n-1)."""
    if isinstance(f, LaurentPoly):
        return LaurentPoly(f.var, {e - 1: e * c for e, c in f.coeffs.items() if e != 0})
    if isinstance(f, TruncatedSeries):
        coeffs = {e - 1: e * c for e, c in f.coeffs.items() if e != 0}
        if f.exact:
            return TruncatedSeries(f.var, 0, 0, coeffs, exact=True)
        return TruncatedSeries(f.var, f.floor - 1, f.ceiling - 1, coeffs)
    raise TypeError(f"cannot differentiate {type(f).__name__}")


def hderivative(f, k: int):
    """Divided-power derivative: k-fold derivative divided by k factorial."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    out = f
    for _ in range(k):
        out = formal_derivative(out)
    return out.scale(rat(1, factorial(k)))


def residue(f) -> Scalar:
    """Coefficient of the (-1)-st power; errors if truncated away."""
    if isinstance(f, LaurentPoly):
        return f.coefficient(-1)
    if isinstance(f, TruncatedSeries):
        return f.coefficient(-1)
    raise TypeError(f"no residue for {type(f).__name__}")


def plus_minus_split(f: LaurentPoly):
    """(f_plus, f_minus) split by the sign of the sequence index n."""
    plus = {e: c for e, c in f.coeffs.items() if e <= -1}
    minus = {e: c for e, c in f.coeffs.items() if e >= 0}
    return LaurentPoly(f.var, plus), LaurentPoly(f.var, minus)


# ---------------------------------------------------------------------------
# Delta series and combinations


def delta_series(i: int, floor: int, ceiling: int, var: str = "z") -> TruncatedSeries:
    """Generating series of the binomial column: coefficient of var^(-n-1) is
    binom(n, i), delivered on the requested exponent window."""
    if i < 0:
        raise ValueError("delta-series order must be nonnegative")
    coeffs = {}
    for exp in range(floor, ceiling + 1):
        coeffs[exp] = binomial(-exp - 1, i)
    return TruncatedSeries(var, floor, ceiling, coeffs)


@dataclass(frozen=True)
class DeltaCombination:
    """Finite combination sum_i R_i * delta^(i)(z)."""

    terms: tuple  # ((i, Scalar), ...) sorted by i, no zero coefficients

    def __post_init__(self):
        collected = {}
        for i, coeff in self.terms:
            coeff = as_scalar(coeff)
            collected[i] = collected.get(i, Scalar()) + coeff
        clean = tuple(sorted((i, c) for i, c in collected.items() if not c.is_zero()))
        object.__setattr__(self, "terms", clean)

    def is_zero(self) -> bool:
        return not self.terms

    def to_series(self, floor: int, ceiling: int, var: str = "z") -> TruncatedSeries:
        out = TruncatedSeries(var, floor, ceiling, {})
        for i, coeff in self.terms:
            out = out + delta_series(i, floor, ceiling, var).scale(coeff)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(_render_coeff_term(c, f"delta^({i})") for i, c in self.terms)


def _shift_down(terms: dict) -> dict:
    """The lowering action delta^(i) -> delta^(i-1), killing delta^(0)."""
    return {i - 1: c for i, c in terms.items() if i >= 1}


def delta_multiply(p: LaurentPoly, d: DeltaCombination) -> DeltaCombination:
    """Multiply a delta combination by a Laurent polynomial.

    In the (z-1) basis the action is diagonal: (z-1)^j sends delta^(i) to
    delta^(i-j) (zero past the end).  Nonnegative powers of z re-expand as
    ((z-1)+1)^e; negative powers invert the unipotent multiply-by-z map,
    which terminates because the lowering action is nilpotent on any finite
    combination.
    """
    result = {}
    base = {i: c for i, c in d.terms}
    for e, pc in p.coeffs.items():
        if e >= 0:
            # z^e = sum_j binom(e, j) (z-1)^j, each (z-1)^j lowering j times
            for j in range(0, e + 1):
                shifted = _shift_down_power(base, j)
                w = binomial(e, j) * pc
                for i, c in shifted.items():
                    result[i] = result.get(i, Scalar()) + w * c
        else:
            inverted = dict(base)
            for _ in range(-e):
                inverted = _invert_z_action(inverted)
            for i, c in inverted.items():
                result[i] = result.get(i, Scalar()) + pc * c
    return DeltaCombination(tuple(result.items()))


def _shift_down_power(terms: dict, j: int) -> dict:
    out = dict(terms)
    for _ in range(j):
        out = _shift_down(out)
    return out


def _invert_z_action(terms: dict) -> dict:
    # solve (1 + S) x = terms where S is the lowering action: x = sum (-1)^t S^t terms
    out = {}
    current = dict(terms)
    sign = 1
    while current:
        for i, c in current.items():
            out[i] = out.get(i, Scalar()) + sign * c
        current = _shift_down(current)
        sign = -sign
    return out


def delta_plus_expansion(d: DeltaCombination, floor: int, var: str = "z") -> TruncatedSeries:
    """Plus part of a delta combination as sum R_i (z-1)^(-i-1), expanded."""
    out = TruncatedSeries(var, floor, -1, {})
    for i, coeff in d.terms:
        out = out + expand_power_var_first(-i - 1, -1, floor, var).scale(coeff)
    return out


def delta_minus_expansion(d: DeltaCombination, ceiling: int, var: str = "z") -> TruncatedSeries:
    """Minus part: -sum R_i (-1+z)^(-i-1), expanded in ascending powers."""
    out = TruncatedSeries(var, 0, ceiling, {})
    for i, coeff in d.terms:
        out = out - expand_power_const_first(-i - 1, -1, ceiling, var).scale(coeff)
    return out


# ---------------------------------------------------------------------------
# Binomial expansions (the second written symbol is the expansion direction)


def expand_power_var_first(m: int, c, floor: int, var: str = "z") -> TruncatedSeries:
    """(var + c)^m = sum_k binom(m,k) c^k var^(m-k), descending exponents."""
    c = rat(c)
    coeffs = {}
    if m >= 0:
        for k in range(m + 1):
            coeffs[m - k] = binomial(m, k) * c**k
        return TruncatedSeries(var, 0, 0, coeffs, exact=True)
    for k in range(0, m - floor + 1):
        coeffs[m - k] = binomial(m, k) * c**k
    return TruncatedSeries(var, floor, m, coeffs)


def expand_power_const_first(m: int, c, ceiling: int, var: str = "z") -> TruncatedSeries:
    """(c + var)^m = sum_k binom(m,k) c^(m-k) var^k, ascending exponents.

    Needs c invertible when m < 0; knowledge extends over [floor_0, ceiling]
    with every negative exponent known to vanish.
    """
    c = rat(c)
    coeffs = {}
    top = m if m >= 0 else ceiling
    for k in range(0, top + 1):
        coeffs[k] = binomial(m, k) * c ** (m - k)
    if m >= 0:
        return TruncatedSeries(var, 0, 0, coeffs, exact=True)
    return TruncatedSeries(var, min(0, ceiling), ceiling, coeffs)


# ---------------------------------------------------------------------------
# Bivariate truncated series


def _isect_bound(a, b, pick):
    if a is None:
        return b
    if b is None:
        return a
    return pick(a, b)


class BivariateTrunc:
    """Series in two tagged variables with per-variable validity ranges.

    Ranges are (lo, hi) with None meaning unbounded knowledge on that side;
    a cell is known iff both its exponents lie inside their ranges.  Fully
    unbounded on all four sides means exact (finite support, known
    everywhere).
    """

    __slots__ = ("vars", "coeffs", "ranges")

    def __init__(self, vars, coeffs=None, ranges=None):
        self.vars = tuple(vars)
        if len(self.vars) != 2 or self.vars[0] == self.vars[1]:
            raise ValueError(f"need two distinct variables, got {self.vars}")
        ranges = tuple(ranges) if ranges else ((None, None), (None, None))
        self.ranges = (tuple(ranges[0]), tuple(ranges[1]))
        clean = {}
        if coeffs:
            for key, c in coeffs.items():
                c = as_scalar(c)
                if not c.is_zero() and self._in_range(key):
                    clean[(int(key[0]), int(key[1]))] = c
        self.coeffs = clean
        for (lo, hi) in self.ranges:
            if lo is not None and hi is not None and lo > hi:
                raise TruncationError(f"empty validity range in {self.vars}")

    @property
    def exact(self) -> bool:
        return self.ranges == ((None, None), (None, None))

    def _in_range(self, key) -> bool:
        for exp, (lo, hi) in zip(key, self.ranges):
            if lo is not None and exp < lo:
                return False
            if hi is not None and exp > hi:
                return False
        return True

    def axis(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ValueError(f"no variable {var} in {self.vars}") from None

    def swapped(self) -> "BivariateTrunc":
        return BivariateTrunc(
            (self.vars[1], self.vars[0]),
            {(b, a): c for (a, b), c in self.coeffs.items()},
            (self.ranges[1], self.ranges[0]),
        )

    def aligned_to(self, vars) -> "BivariateTrunc":
        vars = tuple(vars)
        if self.vars == vars:
            return self
        if self.vars == (vars[1], vars[0]):
            return self.swapped()
        raise ValueError(f"variable mismatch: {self.vars} vs {vars}")

    def __add__(self, other: "BivariateTrunc") -> "BivariateTrunc":
        other = other.aligned_to(self.vars)
        ranges = tuple(
            (_isect_bound(r1[0], r2[0], max), _isect_bound(r1[1], r2[1], min))
            for r1, r2 in zip(self.ranges, other.ranges)
        )
        coeffs = dict(self.coeffs)
        for key, c in other.coeffs.items():
            coeffs[key] = coeffs.get(key, Scalar()) + c
        return BivariateTrunc(self.vars, coeffs, ranges)

    def __neg__(self):
        return BivariateTrunc(self.vars, {k: -c for k, c in self.coeffs.items()}, self.ranges)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar) -> "BivariateTrunc":
        scalar = as_scalar(scalar)
        return BivariateTrunc(
            self.vars, {k: scalar * c for k, c in self.coeffs.items()}, self.ranges)

    def __mul__(self, other: "BivariateTrunc") -> "BivariateTrunc":
        other = other.aligned_to(self.vars)
        if not self.exact and not other.exact:
            raise TruncationError(
                "product of two inexact bivariate series is not computable")
        exact_one, ranged = (self, other) if self.exact else (other, self)
        if not exact_one.coeffs:
            return BivariateTrunc(self.vars, {})
        ranges = []
        for axis in (0, 1):
            exps = [key[axis] for key in exact_one.coeffs]
            lo, hi = ranged.ranges[axis]
            ranges.append((
                None if lo is None else lo + max(exps),
                None if hi is None else hi + min(exps),
            ))
        coeffs = {}
        for (a1, b1), c1 in exact_one.coeffs.items():
            for (a2, b2), c2 in ranged.coeffs.items():
                key = (a1 + a2, b1 + b2)
                coeffs[key] = coeffs.get(key, Scalar()) + c1 * c2
        return BivariateTrunc(self.vars, coeffs, ranges)

    def coefficient(self, key) -> Scalar:
        if not self._in_range(key):
            raise TruncationError(f"cell {key} outside validity ranges {self.ranges}")
        return self.coeffs.get(tuple(key), Scalar())

    def residue_var(self, var: str, floor_hint: int | None = None) -> TruncatedSeries:
        """Coefficient of var^(-1) as a truncated series in the other variable."""
        axis = self.axis(var)
        lo, hi = self.ranges[axis]
        if (lo is not None and -1 < lo) or (hi is not None and -1 > hi):
            raise TruncationError(f"exponent -1 of {var} outside validity range")
        other_axis = 1 - axis
        other_var = self.vars[other_axis]
        coeffs = {key[other_axis]: c for key, c in self.coeffs.items() if key[axis] == -1}
        olo, ohi = self.ranges[other_axis]
        if olo is None and ohi is None:
            return TruncatedSeries(other_var, 0, 0, coeffs, exact=True)
        if olo is None:
            olo = min(list(coeffs) + [ohi if floor_hint is None else floor_hint])
        if ohi is None:
            ohi = max(list(coeffs) + [olo])
        return TruncatedSeries(other_var, olo, ohi, coeffs)

    def __str__(self):
        def body(key):
            parts = []
            for var, exp in zip(self.vars, key):
                if exp == 1:
                    parts.append(var)
                elif exp != 0:
                    parts.append(f"{var}^{exp}")
            return "*".join(parts)

        pieces = []
        for key in sorted(self.coeffs):
            term = _render_coeff_term(self.coeffs[key], body(key))
            if not pieces:
                pieces.append(term)
            elif term.startswith("-"):
                pieces.append(f" - {term[1:]}")
            else:
                pieces.append(f" + {term}")
        text = "".join(pieces) or "0"
        if self.exact:
            return text
        return f"{text} {{valid {self.vars[0]}:{self.ranges[0]}, {self.vars[1]}:{self.ranges[1]}}}"

    def __repr__(self):
        return f"BivariateTrunc({self})"


def bivar_eq(a: BivariateTrunc, b: BivariateTrunc) -> bool:
    """Equality over the intersection of validity boxes; empty box errors."""
    b = b.aligned_to(a.vars)
    ranges = []
    for r1, r2 in zip(a.ranges, b.ranges):
        lo = _isect_bound(r1[0], r2[0], max)
        hi = _isect_bound(r1[1], r2[1], min)
        if lo is not None and hi is not None and lo > hi:
            raise TruncationError("no overlap between validity boxes")
        ranges.append((lo, hi))

    def inside(key):
        for exp, (lo, hi) in zip(key, ranges):
            if lo is not None and exp < lo:
                return False
            if hi is not None and exp > hi:
                return False
        return True

    for key in set(a.coeffs) | set(b.coeffs):
        if inside(key):
            if a.coeffs.get(key, Scalar()) != b.coeffs.get(key, Scalar()):
                return False
    return True


def bivar_from_laurent(p: LaurentPoly, vars, axis: int) -> BivariateTrunc:
    """Promote a Laurent polynomial to an exact bivariate series on one axis."""
    coeffs = {}
    for e, c in p.coeffs.items():
        key = (e, 0) if axis == 0 else (0, e)
        coeffs[key] = c
    return BivariateTrunc(vars, coeffs)


def expand_binomial(m: int, ceiling: int, first: str = "x", second: str = "y",
                    sign_first: int = 1, sign_second: int = 1) -> BivariateTrunc:
    """(s1*first + s2*second)^m expanded in nonnegative powers of the second
    symbol: sum_k binom(m,k) (s1*first)^(m-k) (s2*second)^k.

    Exact for m >= 0; otherwise truncated at second-exponent `ceiling` with
    full knowledge elsewhere (off-support cells are genuinely zero).
    """
    if ceiling < 0:
        raise ValueError("expansion ceiling must be nonnegative")
    if sign_first not in (1, -1) or sign_second not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    coeffs = {}
    top = m if m >= 0 else ceiling
    for k in range(0, top + 1):
        sign = 1 if sign_first == 1 or (m - k) % 2 == 0 else -1
        if sign_second == -1 and k % 2 == 1:
            sign = -sign
        coeffs[(m - k, k)] = binomial(m, k) * sign
    if m >= 0:
        return BivariateTrunc((first, second), coeffs)
    return BivariateTrunc((first, second), coeffs, ((None, None), (None, ceiling)))


def taylor_expand(f: LaurentPoly, order: int) -> BivariateTrunc:
    """Taylor form sum_(i<=order) y^i * (i-th divided derivative of f)(x),
    cross-checked against substituting x+y termwise via expand_binomial."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = {}
    for i in range(order + 1):
        di = hderivative(f, i)
        for e, c in di.coeffs.items():
            coeffs[(e, i)] = c
    # the input is exact, so every cell with y-exponent <= order is known
    taylor = BivariateTrunc(("x", "y"), coeffs, ((None, None), (None, order)))

    substituted = BivariateTrunc(("x", "y"), {}, ((None, None), (None, order)))
    for e, c in sorted(f.coeffs.items()):
        substituted = substituted + expand_binomial(e, order).scale(c)
    if not bivar_eq(taylor, substituted):
        raise AssertionError("Taylor form disagrees with the binomial substitution")
    return taylor


# ---------------------------------------------------------------------------
# Residue-kernel identities


def residue_kernel_check(f: LaurentPoly, k: int, ceiling: int) -> dict:
    """Check both residue-kernel identities at truncation:

      Res_x f(x) * (x - z)^(-k-1)   =  k-th divided derivative of f(z) minus part
      Res_x f(x) * (-z + x)^(-k-1)  = -(k-th divided derivative of f(z) plus part)

    Returns a report with per-identity booleans; mismatches should never occur.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    f_bivar = bivar_from_laurent(f.with_variable("x"), ("x", "z"), axis=0)
    plus, minus = plus_minus_split(f.with_variable("z"))

    floor_hint = (f.min_exp() - k - 1) if f.coeffs else -k - 1

    minus_kernel = expand_binomial(-k - 1, ceiling, first="x", second="z", sign_second=-1)
    lhs_minus = (f_bivar * minus_kernel).residue_var("x", floor_hint=floor_hint)
    rhs_minus = series_from_laurent(hderivative(minus, k))
    ok_minus = series_eq(lhs_minus, rhs_minus)

    plus_kernel = expand_binomial(-k - 1, ceiling, first="z", second="x", sign_first=-1)
    lhs_plus = (f_bivar * plus_kernel.aligned_to(("x", "z"))).residue_var("x", floor_hint=floor_hint)
    rhs_plus = series_from_laurent(hderivative(plus, k)).scale(-1)
    ok_plus = series_eq(lhs_plus, rhs_plus)

    return {
        "identity": "residue-kernel",
        "k": k,
        "ceiling": ceiling,
        "minus_kernel_ok": ok_minus,
        "plus_kernel_ok": ok_plus,
        "ok": ok_minus and ok_plus,
    }
