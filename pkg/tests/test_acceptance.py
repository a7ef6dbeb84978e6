"""Acceptance gate: one test per shipped guarantee, all exact, zero tolerance.

Each test prints a single summary line on success, so a verbose run shows
one pass/fail line per criterion.  Grids and cutoffs quoted in the test
names and messages are the shipped defaults for that guarantee.
"""

import itertools
import random
import time

import pytest

from vertexcalc.fields import (
    Generator,
    ResidueProduct,
    VACUUM,
    creative_state,
    derivative,
    dong_bound_check,
    field_mode,
    field_truncation_bound,
    generator_fields,
    locality_order,
)
from vertexcalc.formal import (
    DeltaCombination,
    delta_multiply,
    delta_series,
    formal_derivative,
    laurent_from_terms,
    residue,
    residue_kernel_check,
    series_eq,
    taylor_expand,
)
from vertexcalc.liealg import (
    State,
    affine,
    basis_states,
    heisenberg,
    mode_act,
    virasoro,
)
from vertexcalc.newton import (
    SequenceWindow,
    binomial,
    evaluate_poly_sequence,
    forward_difference,
    kernel_order,
    newton_coefficients,
    nth_forward_difference,
)
from vertexcalc.scalars import Scalar, as_scalar, rat
from vertexcalc.vertex import (
    VerificationGrid,
    VertexAlgebraHandle,
    verify_bflm,
    verify_skew_symmetry,
    verify_translation,
    vertex_operator,
)


def mono(*factors):
    return State.monomial(tuple(factors))


@pytest.fixture(scope="module")
def heis():
    return VertexAlgebraHandle(heisenberg())


@pytest.fixture(scope="module")
def vir():
    return VertexAlgebraHandle(virasoro())


@pytest.fixture(scope="module")
def aff():
    return VertexAlgebraHandle(affine())


def _generator_states(handle):
    return {name: creative_state(handle.spec, field)
            for name, field in sorted(handle.generators.items())}


def test_criterion_01_oscillator_locality_and_ope(heis):
    spec = heis.spec
    H = heis.generators["h"]
    assert spec.level == as_scalar(1)  # the central charge acts as 1 here

    report = locality_order(spec, H, H)
    assert report.status == "verified-on-window"
    assert report.order == 2
    assert report.witness is not None and report.witness[0] == 1

    pole_one = ResidueProduct(0, H, H)
    pole_two = ResidueProduct(1, H, H)
    checked = 0
    for v in basis_states(spec, 8):
        for m in range(-4, 5):
            assert field_mode(spec, pole_one, m, v).is_zero()
            expected = v if m == -1 else State()
            assert field_mode(spec, pole_two, m, v) == expected
            checked += 1
    print(f"criterion 01: PASS - oscillator locality order 2 (witness n=1), "
          f"h *0 h = 0 and h *1 h = Id on {checked} weight<=8 cells, K = 1")


def test_criterion_02_weight_two_ope(vir):
    spec = vir.spec
    W = vir.generators["omega"]
    half_C = Scalar.symbol_C() * rat(1, 2)

    top = ResidueProduct(3, W, W)
    third = ResidueProduct(2, W, W)
    assert creative_state(spec, top) == VACUUM.scale(half_C)
    checked = 0
    for v in basis_states(spec, 8):
        for m in range(-4, 5):
            expected = v.scale(half_C) if m == -1 else State()
            assert field_mode(spec, top, m, v) == expected
            assert field_mode(spec, third, m, v).is_zero()
            checked += 1

    assert creative_state(spec, ResidueProduct(1, W, W)) \
        == mono((-2, "L")).scale(2)
    created = creative_state(spec, ResidueProduct(0, W, W))
    assert created == mono((-3, "L"))
    assert created == creative_state(spec, derivative(1, W))

    report = locality_order(spec, W, W, weight_cutoff=8)
    assert report.order == 4
    print(f"criterion 02: PASS - omega *3 omega = (C/2) Id and "
          f"omega *2 omega = 0 on {checked} weight<=8 cells; "
          f"omega *1 omega -> 2 L[-2]vac; omega *0 omega -> L[-3]vac; "
          f"locality order exactly 4")


def test_criterion_03_affine_trichotomy(aff):
    spec = aff.spec
    E, F_, H = (aff.generators[g] for g in ("e", "f", "h"))
    assert locality_order(spec, E, F_).order == 2
    assert locality_order(spec, E, H).order == 1
    assert locality_order(spec, E, E).order == 0

    K = Scalar.symbol_K()
    pole_two = ResidueProduct(1, E, F_)
    checked = 0
    for v in basis_states(spec, 4):
        for m in range(-4, 5):
            expected = v.scale(K) if m == -1 else State()
            assert field_mode(spec, pole_two, m, v) == expected
            checked += 1
    assert creative_state(spec, ResidueProduct(0, E, F_)) == mono((-1, "h"))
    print(f"criterion 03: PASS - orders (e,f)=2 (e,h)=1 (e,e)=0; "
          f"e *1 f = K Id on {checked} cells; e *0 f -> h[-1]vac")


def test_criterion_04_commutator_reconstruction(heis, vir, aff):
    summaries = []
    for handle in (heis, vir, aff):
        spec = handle.spec
        names = sorted(handle.generators)
        shift = 1 if spec.kind == "virasoro" else 0
        basis = basis_states(spec, 6)
        start = time.perf_counter()
        cells = 0
        for name_a, name_b in itertools.product(names, names):
            A = handle.generators[name_a]
            B = handle.generators[name_b]
            la, lb = A.label, B.label
            b_state = creative_state(spec, B)
            bound = field_truncation_bound(spec, A, b_state)
            products = [vertex_operator(handle, field_mode(spec, A, i, b_state))
                        for i in range(bound)]
            for m in range(-5, 6):
                for n in range(-5, 6):
                    relation, central = spec.bracket_modes(la, m, lb, n)
                    p, q = m + shift, n + shift
                    for v in basis:
                        cells += 1
                        direct = mode_act(spec, la, m, mode_act(spec, lb, n, v)) \
                            - mode_act(spec, lb, n, mode_act(spec, la, m, v))
                        defining = v.scale(central)
                        for (label, mode), coeff in relation.items():
                            defining = defining \
                                + mode_act(spec, label, mode, v).scale(coeff)
                        expansion = State()
                        for i, op in enumerate(products):
                            c = binomial(p, i)
                            if c == 0:
                                continue
                            expansion = expansion \
                                + field_mode(spec, op, p + q - i, v).scale(c)
                        assert direct == defining, \
                            (spec.describe(), name_a, m, name_b, n)
                        assert direct == expansion, \
                            (spec.describe(), name_a, m, name_b, n)
        summaries.append(f"{spec.describe()} {cells} cells "
                         f"{time.perf_counter() - start:.1f}s")
    print("criterion 04: PASS - defining relations = direct brackets = "
          "reconstruction sums, |m|,|n|<=5 weight<=6: " + "; ".join(summaries))


def test_criterion_05_bflm_full_grid(heis, vir, aff):
    grid = VerificationGrid()  # l, m, n in [-3, 3], weight <= 6
    summaries = []
    for handle in (heis, vir, aff):
        states = _generator_states(handle)
        start = time.perf_counter()
        cells = 0
        for name_a, name_b in itertools.product(sorted(states), sorted(states)):
            report = verify_bflm(handle, states[name_a], states[name_b], grid)
            assert report.ok, (handle.spec.describe(), name_a, name_b,
                               report.failures[:1])
            cells += report.cells_checked
        summaries.append(f"{handle.spec.describe()} {cells} cells "
                         f"{time.perf_counter() - start:.1f}s")
    print("criterion 05: PASS - three-index bracket identity, zero failures: "
          + "; ".join(summaries))


def test_criterion_06_skew_symmetry(heis, vir, aff):
    grid = VerificationGrid(n_range=(-3, 3), weight_cutoff=4)
    cells = 0
    for handle in (heis, vir, aff):
        states = _generator_states(handle)
        for name_a, name_b in itertools.product(sorted(states), sorted(states)):
            report = verify_skew_symmetry(handle, states[name_a],
                                          states[name_b], grid)
            assert report.ok, (handle.spec.describe(), name_a, name_b,
                               report.failures[:1])
            cells += report.cells_checked
    print(f"criterion 06: PASS - skew-symmetry with divided translation "
          f"powers, n in [-3,3], {cells} cells over all generator pairs")


def test_criterion_07_translation_suite(heis, vir, aff):
    grid = VerificationGrid((-4, 4), (-4, 4), (-4, 4), 6)
    cells = 0
    for handle in (heis, vir, aff):
        for name, state in _generator_states(handle).items():
            report = verify_translation(handle, state, grid, z_orders=4)
            assert report.ok, (handle.spec.describe(), name,
                               report.failures[:1])
            cells += report.cells_checked
    print(f"criterion 07: PASS - [T, a_n] = -n a_(n-1) on weight<=6, "
          f"creation fields differentiate, vacuum Taylor coefficients "
          f"T^k a / k! for k<=4; {cells} cells")


def test_criterion_08_generating_theorem(heis, vir, aff):
    summaries = []
    for handle in (heis, vir, aff):
        spec = handle.spec
        states = _generator_states(handle)
        basis = basis_states(spec, 6)
        start = time.perf_counter()
        cells = 0
        for name_a, name_b in itertools.product(sorted(states), sorted(states)):
            A = vertex_operator(handle, states[name_a])
            b = states[name_b]
            B = vertex_operator(handle, b)
            for n in range(-2, 3):
                product_op = vertex_operator(handle, field_mode(spec, A, n, b))
                composite = ResidueProduct(n, A, B)
                for m in range(-4, 5):
                    for v in basis:
                        cells += 1
                        assert field_mode(spec, product_op, m, v) \
                            == field_mode(spec, composite, m, v), \
                            (spec.describe(), name_a, name_b, n, m)
        summaries.append(f"{spec.describe()} {cells} cells "
                         f"{time.perf_counter() - start:.1f}s")
    print("criterion 08: PASS - Y(a *n b) agrees with (Y(a) *n Y(b)) as mode "
          "tables, n in [-2,2], m in [-4,4]: " + "; ".join(summaries))


def test_criterion_09_dong_bound(heis, vir, aff):
    summaries = []
    for handle in (heis, vir, aff):
        spec = handle.spec
        fields = generator_fields(spec)
        names = sorted(fields)
        start = time.perf_counter()
        checks = 0
        for name_a, name_b in itertools.product(names, names):
            F, G = fields[name_a], fields[name_b]
            pair_order = locality_order(spec, F, G).order
            assert pair_order is not None
            for name_c in names:
                H = fields[name_c]
                for n in range(-2, pair_order):
                    out = dong_bound_check(spec, F, G, H, n)
                    checks += 1
                    assert out["ok"], (spec.describe(), name_a, name_b,
                                       name_c, n, out)
        summaries.append(f"{spec.describe()} {checks} checks "
                         f"{time.perf_counter() - start:.1f}s")
    print("criterion 09: PASS - measured product locality never exceeds "
          "K+L+M-n-1 for any generator triple, n in [-2, K-1]: "
          + "; ".join(summaries))


def test_criterion_10_newton_suite():
    rng = random.Random(20260815)

    def poly_value(coeffs, n):
        total = rat(0)
        for k, c in enumerate(coeffs):
            total += c * n ** k
        return total

    for _ in range(100):
        degree = rng.randint(0, 5)
        coeffs = [rat(rng.randint(-30, 30), rng.randint(1, 12))
                  for _ in range(degree + 1)]
        window = SequenceWindow(0, tuple(poly_value(coeffs, n)
                                         for n in range(8)))
        order = kernel_order(window)
        assert order is not None and order <= degree + 1
        poly = newton_coefficients(window, order)
        for n in range(-5, 11):
            assert evaluate_poly_sequence(poly, n) \
                == as_scalar(poly_value(coeffs, n))

    for _ in range(20):
        window = SequenceWindow(0, tuple(rat(rng.randint(-50, 50))
                                         for _ in range(8)))
        for order in range(5):
            # raises internally if the alternating sum disagrees
            direct = nth_forward_difference(window, order)
            iterated = window
            for _ in range(order):
                iterated = forward_difference(iterated)
            assert direct == iterated

    squares = SequenceWindow(0, tuple(rat(n * n) for n in range(8)))
    assert evaluate_poly_sequence(newton_coefficients(squares), -3) \
        == as_scalar(9)
    print("criterion 10: PASS - 100 random degree<=5 round-trips exact on "
          "[-5,10], alternating sums = iterated differences, "
          "square sequence extrapolates to 9 at -3")


def test_criterion_11_formal_suite():
    rng = random.Random(411)

    def random_laurent(rng):
        coeffs = {}
        for _ in range(rng.randint(0, 6)):
            coeffs[rng.randint(-6, 6)] = rat(rng.randint(-20, 20),
                                             rng.randint(1, 8))
        return laurent_from_terms(coeffs)

    z_minus_one = laurent_from_terms({1: 1, 0: -1})
    assert delta_multiply(z_minus_one, DeltaCombination(((0, 1),))).is_zero()
    for i in range(1, 6):
        assert delta_multiply(z_minus_one, DeltaCombination(((i, 1),))) \
            == DeltaCombination(((i - 1, 1),))
        lowered = delta_series(i, -10, 10).mul_laurent(z_minus_one)
        assert series_eq(lowered, delta_series(i - 1, -9, 9))

    for _ in range(25):
        f = random_laurent(rng)
        for k in range(4):
            assert residue_kernel_check(f, k, k + 9)["ok"]

    taylor = taylor_expand(laurent_from_terms({3: 1}), 4)
    for i in range(4):
        assert taylor.coefficient((3 - i, i)) == binomial(3, i)
    for _ in range(25):
        taylor_expand(random_laurent(rng), 4)  # raises on route disagreement

    for _ in range(100):
        f = random_laurent(rng)
        assert residue(formal_derivative(f)).is_zero()
        k = rng.randint(-4, 4)
        zk = laurent_from_terms({k: 1})
        zk1 = laurent_from_terms({k - 1: 1})
        assert residue(zk * formal_derivative(f)) == -k * residue(zk1 * f)

    print("criterion 11: PASS - delta lowering through order 5 (both "
          "routes), residue kernels k<=3, Taylor order 4, derivative and "
          "parts identities on 100 random Laurent polynomials")
