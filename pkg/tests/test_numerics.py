import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from apery4.errors import DomainError, ResourceLimitError
from apery4.numerics import (
    PrecisionContext,
    agree,
    const_ln2,
    const_pi,
    elem,
    make_context,
    rational_arith,
)
from apery4.special import zeta_int

from conftest import close, oracle


def test_context_bits_for_30_digits():
    ctx = make_context(30)
    assert ctx.guard_digits >= 10
    assert ctx.working_bits >= math.ceil(40 * math.log2(10)) == 133


def test_context_minimum():
    ctx = make_context(1)
    assert ctx.guard_digits >= 10
    assert ctx.working_bits >= 37


def test_context_ceiling():
    with pytest.raises(ResourceLimitError):
        make_context(10001)
    assert make_context(10000).target_digits == 10000


def test_context_ceiling_from_environment(monkeypatch):
    monkeypatch.setenv("APERY4_MAX_DIGITS", "50")
    with pytest.raises(ResourceLimitError):
        make_context(51)
    # an explicit ceiling wins over the environment
    assert make_context(51, max_digits=100).target_digits == 51


@pytest.mark.parametrize("bad", [0, -3])
def test_context_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        make_context(bad)


def test_context_deterministic_and_picklable():
    import pickle

    a, b = make_context(45), make_context(45)
    assert (a.target_digits, a.guard_digits, a.working_bits) == (
        b.target_digits, b.guard_digits, b.working_bits)
    c = pickle.loads(pickle.dumps(a))
    assert isinstance(c, PrecisionContext) and c.working_bits == a.working_bits


def test_contexts_do_not_share_precision():
    lo, hi = make_context(10), make_context(60)
    assert lo.mp.prec != hi.mp.prec
    assert close(const_pi(hi), oracle("pi"), 60)
    assert not close(const_pi(lo), oracle("pi"), 40)


def test_pi_against_oracle():
    ctx = make_context(20)
    assert close(const_pi(ctx), oracle("pi"), 20 + ctx.guard_digits)


def test_pi_refinement():
    assert agree(const_pi(make_context(5)), const_pi(make_context(50)), 5)


def test_pi_squared_over_six_is_zeta2(ctx30):
    assert agree(const_pi(ctx30) ** 2 / 6, zeta_int(2, ctx30), 30)


def test_ln2_against_oracle():
    ctx = make_context(20)
    assert close(const_ln2(ctx), oracle("ln2"), 20 + ctx.guard_digits)


def test_ln2_laws(ctx30):
    ln2 = const_ln2(ctx30)
    assert agree(elem("exp", ln2, ctx30), 2, 30)
    assert abs(2 * ln2 - elem("ln", 4, ctx30)) < ctx30.tolerance


def test_constants_are_cached(ctx30):
    assert const_pi(ctx30) is const_pi(ctx30)


def test_rational_examples():
    assert rational_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert rational_arith(Fraction(5, 4), Fraction(4, 5), "mul") == 1
    assert rational_arith(Fraction(205, 144), Fraction(3, 2), "cmp") == -1
    assert rational_arith(7, 7, "cmp") == 0
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "div")
    with pytest.raises(ValueError):
        rational_arith(1, 2, "pow")


fractions = st.fractions(max_denominator=10**6)


@given(st.lists(fractions, min_size=2, max_size=12), st.randoms())
def test_rational_sum_independent_of_order(xs, rnd):
    total = Fraction(0)
    for x in xs:
        total = rational_arith(total, x, "add")
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    again = Fraction(0)
    for x in shuffled:
        again = rational_arith(again, x, "add")
    assert total == again
    assert math.gcd(total.numerator, total.denominator) == 1 and total.denominator > 0


@given(fractions, fractions.filter(lambda f: f != 0))
def test_rational_div_mul_inverse(a, b):
    assert rational_arith(rational_arith(a, b, "div"), b, "mul") == a


def test_elem_examples(ctx30):
    assert agree(elem("arctan", 1, ctx30), const_pi(ctx30) / 4, 30)
    assert agree(elem("arcsin", 1, ctx30), const_pi(ctx30) / 2, 30)


def test_complex_log_at_minus_one(ctx30):
    # (1 - x)/(1 - i x) at x = -1 is 2/(1+i) = 1 - i, so the principal log is
    # ln(2)/2 - i pi/4 (arctan(-1) = -pi/4)
    mp = ctx30.mp
    x = mp.mpf(-1)
    w = elem("ln", (1 - x) / (1 - 1j * x), ctx30)
    expected = const_ln2(ctx30) / 2 - 1j * const_pi(ctx30) / 4
    assert abs(w - expected) < ctx30.tolerance


@pytest.mark.parametrize("fn,x", [("ln", 0), ("ln", -1), ("sqrt", -2), ("arcsin", 1.5)])
def test_elem_domain_errors(ctx30, fn, x):
    with pytest.raises(DomainError) as info:
        elem(fn, x, ctx30)
    assert info.value.function == fn


def test_elem_complex_cut(ctx30):
    with pytest.raises(DomainError):
        elem("ln", ctx30.mp.mpc(-1, 0), ctx30)
    with pytest.raises(DomainError):
        elem("arctan", ctx30.mp.mpc(0, 2), ctx30)


def test_power(ctx30):
    assert agree(elem("power", 2, ctx30, exponent=Fraction(1, 2)), elem("sqrt", 2, ctx30), 30)
    with pytest.raises(DomainError):
        elem("power", -2, ctx30, exponent=0.5)


_ORACLES = {
    "exp": mpmath.exp,
    "ln": mpmath.log,
    "sqrt": mpmath.sqrt,
    "sin": mpmath.sin,
    "cos": mpmath.cos,
    "arcsin": mpmath.asin,
    "arctan": mpmath.atan,
}


@given(st.sampled_from(sorted(_ORACLES)), st.floats(0.01, 0.99), st.integers(5, 40))
def test_elem_refinement(fn, x, digits):
    lo, hi = make_context(digits), make_context(2 * digits)
    a, b = elem(fn, x, lo), elem(fn, x, hi)
    assert agree(a, b, digits)
    with mpmath.workdps(2 * digits + 20):
        assert agree(b, _ORACLES[fn](mpmath.mpf(x)), 2 * digits)


@given(st.integers(5, 40))
def test_constant_refinement(digits):
    lo, hi = make_context(digits), make_context(2 * digits)
    assert agree(const_pi(lo), const_pi(hi), digits)
    assert agree(const_ln2(lo), const_ln2(hi), digits)


@given(st.floats(-0.99, 0.99).filter(lambda v: abs(v) > 1e-6))
def test_branch_consistency(x):
    ctx = make_context(30)
    mp = ctx.mp
    x = mp.mpf(x)
    w = elem("ln", (1 - x) / (1 - 1j * x), ctx)
    assert abs(w.imag - elem("arctan", x, ctx)) < ctx.tolerance


def test_cache_single_initialization_under_threads():
    import threading

    ctx = make_context(40)
    calls = []

    def compute():
        calls.append(1)
        return ctx.mp.mpf(7)

    threads = [threading.Thread(target=lambda: ctx.cached("probe", compute)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1

