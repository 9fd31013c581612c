"""Harmonic numbers, zeta, polylogarithms, inverse tangent integrals and the
constant basis that every closed form is written over."""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError
from .numerics import PrecisionContext, const_ln2, const_pi
from .quadrature import integrate_complex, IntegrandSpec

# --------------------------------------------------------------------------
# exact rationals


def harmonic(k: int, m: int = 1) -> Fraction:
    """Generalized harmonic number ``H_k^(m) = sum_{n<=k} 1/n^m`` (exact)."""
    if k < 0 or m < 1:
        raise ValueError(f"harmonic needs k >= 0 and m >= 1, got k={k}, m={m}")
    return sum((Fraction(1, n**m) for n in range(1, k + 1)), Fraction(0))


def harmonic_table(kmax: int, m: int = 1) -> list[Fraction]:
    """``[H_0^(m), ..., H_kmax^(m)]`` built incrementally."""
    out = [Fraction(0)]
    for n in range(1, kmax + 1):
        out.append(out[-1] + Fraction(1, n**m))
    return out


_BERNOULLI = [Fraction(1), Fraction(-1, 2)]
_BERNOULLI_LOCK = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` (convention ``B_1 = -1/2``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n >= len(_BERNOULLI):
        with _BERNOULLI_LOCK:
            while len(_BERNOULLI) <= n:
                m = len(_BERNOULLI)
                if m % 2 == 1:
                    _BERNOULLI.append(Fraction(0))
                    continue
                # sum_{k=0}^{m} C(m+1, k) B_k = 0
                acc = sum(math.comb(m + 1, k) * _BERNOULLI[k] for k in range(m))
                _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[n]


# --------------------------------------------------------------------------
# zeta and alternating-series acceleration


def zeta_int(s: int, ctx: PrecisionContext):
    """Riemann zeta at an integer ``s >= 2`` by Euler-Maclaurin.

    The remainder after the last correction term is smaller in magnitude
    than the first omitted term (the derivatives of ``x**-s`` alternate in
    sign), so summation stops once that term is below ``ctx.eps / 10``.
    """
    if not isinstance(s, int) or s < 2:
        raise DomainError("zeta_int", s, "integer s >= 2 required")
    return ctx.cached(("zeta", s), lambda: _zeta_em(s, ctx))


def _zeta_em(s, ctx):
    mp = ctx.mp
    goal = ctx.eps / 10
    n = ctx.working_digits + 10
    acc = mp.fsum(mp.mpf(k) ** (-s) for k in range(1, n))
    N = mp.mpf(n)
    acc += N ** (1 - s) / (s - 1) + N ** (-s) / 2
    rising = mp.mpf(s)  # s (s+1) ... (s+2j-2)
    power = N ** (-s - 1)
    j = 1
    while True:
        term = ctx.mpf(bernoulli(2 * j) / math.factorial(2 * j)) * rising * power
        acc += term
        nxt = (
            ctx.mpf(bernoulli(2 * j + 2) / math.factorial(2 * j + 2))
            * rising * (s + 2 * j - 1) * (s + 2 * j)
            * power / (N * N)
        )
        if abs(nxt) < goal:
            return acc
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= N * N
        j += 1


def alternating_sum(a, ctx: PrecisionContext, a0_bound=1):
    """Sum ``sum_{k>=0} (-1)^k a(k)`` by Cohen-Villegas-Zagier acceleration.

    Valid when ``a(k)`` is a moment sequence of a positive measure on
    [0, 1]; then the error is at most ``2*a0_bound / (3+sqrt 8)^n`` and
    ``n`` is chosen to push that below ``ctx.eps``.
    """
    mp = ctx.mp
    rate = math.log10(3 + math.sqrt(8))
    n = math.ceil((ctx.working_digits + math.log10(2 * max(float(a0_bound), 1e-300)) + 2) / rate)
    n = max(n, 2)
    d = (3 + mp.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = mp.mpf(-1)
    c = -d
    s = mp.mpf(0)
    for k in range(n):
        c = b - c
        s += c * a(k)
        b = (k + n) * (k - n) * b / ((k + mp.mpf(1) / 2) * (k + 1))
    return s / d


# --------------------------------------------------------------------------
# inverse tangent integrals, Catalan, polylogarithms


def ti_n(n: int, x, ctx: PrecisionContext):
    """Inverse tangent integral ``Ti_n(x) = sum (-1)^(k+1) x^(2k-1)/(2k-1)^n``, |x| <= 1."""
    mp = ctx.mp
    x = ctx.mpf(x)
    if n < 1:
        raise DomainError("ti_n", n, "order must be positive")
    if abs(x) > 1:
        raise DomainError("ti_n", x, "|x| > 1")
    if n == 1:
        return mp.atan(x)
    if x == 0:
        return mp.mpf(0)
    if x < 0:
        return -ti_n(n, -x, ctx)
    if x <= mp.mpf(1) / 2:
        return _ti_direct(n, x, ctx)
    x2 = x * x
    return alternating_sum(lambda k: x * x2**k / mp.mpf(2 * k + 1) ** n, ctx, a0_bound=x)


def _ti_direct(n, x, ctx):
    mp = ctx.mp
    goal = ctx.eps / 10
    x2 = x * x
    power = x
    acc = mp.mpf(0)
    k = 0
    while True:
        term = power / mp.mpf(2 * k + 1) ** n
        if term < goal:
            return acc
        acc += -term if k % 2 else term
        power *= x2
        k += 1


def catalan(ctx: PrecisionContext):
    """Catalan's constant ``G = Ti_2(1)`` via the accelerated alternating series."""
    return ctx.cached("catalan", lambda: ti_n(2, 1, ctx))


def polylog_int(s: int, x, ctx: PrecisionContext):
    """``Li_s(x)`` for integer ``s >= 2`` and real ``|x| <= 1``.

    Direct series for ``|x| <= 1/2`` (geometric tail), the accelerated
    alternating series for negative ``x``, and the duplication formula
    ``Li_s(x) = 2^(1-s) Li_s(x^2) - Li_s(-x)`` to move positive ``x > 1/2``
    toward the origin.
    """
    mp = ctx.mp
    x = ctx.mpf(x)
    if not isinstance(s, int) or s < 2:
        raise DomainError("polylog_int", s, "integer order s >= 2 required")
    if abs(x) > 1:
        raise DomainError("polylog_int", x, "|x| > 1")
    if x == 0:
        return mp.mpf(0)
    if x == 1:
        return zeta_int(s, ctx)
    half = mp.mpf(1) / 2
    if abs(x) <= half:
        return _polylog_direct(s, x, ctx)
    if x < 0:
        y = -x
        return -alternating_sum(lambda k: y ** (k + 1) / mp.mpf(k + 1) ** s, ctx, a0_bound=y)
    return mp.ldexp(polylog_int(s, x * x, ctx), 1 - s) - polylog_int(s, -x, ctx)


def _polylog_direct(s, x, ctx):
    mp = ctx.mp
    ax = abs(x)
    goal = ctx.eps / 10
    acc = mp.mpf(0)
    power = mp.mpf(1)
    k = 1
    while True:
        power *= x
        acc += power / mp.mpf(k) ** s
        # remaining terms are bounded by a geometric series of ratio |x|
        if abs(power) * ax / (1 - ax) < goal:
            return acc
        k += 1


def li4_offcut(z, ctx: PrecisionContext):
    """``Li_4(z) = -(1/6) int_0^1 z ln^3(x) / (1 - z x) dx`` for z off (1, inf)."""
    mp = ctx.mp
    z = ctx.mpc(z)
    if z.imag == 0 and z.real > 1:
        raise DomainError("li4_offcut", z, "on the branch cut (1, inf)")
    if z == 0:
        return mp.mpc(0)
    one_minus_z = 1 - z

    def f(x, left, right):
        lnx = mp.log1p(-right) if right < 0.5 else mp.log(left)
        # 1 - z x written through the distance to 1 so z = 1 stays accurate
        return z * lnx**3 / (one_minus_z + z * right)

    res = integrate_complex(IntegrandSpec(f, 0, 1, "log_endpoint", uses_distances=True), ctx)
    return -res.value / 6


# --------------------------------------------------------------------------
# the closed-form basis


class Symbol(enum.Enum):
    ONE = "1"
    ZETA2 = "zeta(2)"
    ZETA4 = "zeta(4)"
    LN2 = "ln(2)"
    LN2_SQ_ZETA2 = "ln(2)^2*zeta(2)"
    LN2_P4 = "ln(2)^4"
    G = "G"
    G_SQ = "G^2"
    LI4_HALF = "Li4(1/2)"
    PI_CUBED = "pi^3"


BASIS_ORDER = tuple(Symbol)

_RULES = {
    Symbol.ONE: lambda ctx: ctx.mp.mpf(1),
    Symbol.ZETA2: lambda ctx: zeta_int(2, ctx),
    Symbol.ZETA4: lambda ctx: zeta_int(4, ctx),
    Symbol.LN2: const_ln2,
    Symbol.LN2_SQ_ZETA2: lambda ctx: const_ln2(ctx) ** 2 * zeta_int(2, ctx),
    Symbol.LN2_P4: lambda ctx: const_ln2(ctx) ** 4,
    Symbol.G: catalan,
    Symbol.G_SQ: lambda ctx: catalan(ctx) ** 2,
    Symbol.LI4_HALF: lambda ctx: polylog_int(4, ctx.mp.mpf(1) / 2, ctx),
    Symbol.PI_CUBED: lambda ctx: const_pi(ctx) ** 3,
}


def parse_symbol(name) -> Symbol:
    if isinstance(name, Symbol):
        return name
    try:
        return Symbol[name.strip().upper()]
    except KeyError:
        raise ValueError(f"unknown constant symbol {name!r}") from None


def basis_value(symbol: Symbol, ctx: PrecisionContext):
    symbol = parse_symbol(symbol)
    return ctx.cached(("basis", symbol), lambda: _RULES[symbol](ctx))


@dataclass(frozen=True)
class ClosedForm:
    """A rational linear combination of basis constants.

    Terms are kept in basis order with zero coefficients dropped, so two
    equal forms compare equal.
    """

    terms: tuple = ()

    def __post_init__(self):
        merged: dict[Symbol, Fraction] = {}
        for coeff, sym in self.terms:
            sym = parse_symbol(sym)
            merged[sym] = merged.get(sym, Fraction(0)) + Fraction(coeff)
        terms = tuple(
            (merged[s], s) for s in BASIS_ORDER if merged.get(s, 0) != 0
        )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, **coeffs) -> "ClosedForm":
        """``ClosedForm.of(ZETA4=11, G_SQ=-8)``."""
        return cls(tuple((Fraction(v), Symbol[k]) for k, v in coeffs.items()))

    @classmethod
    def rational(cls, q) -> "ClosedForm":
        return cls(((Fraction(q), Symbol.ONE),))

    def coefficient(self, symbol) -> Fraction:
        symbol = parse_symbol(symbol)
        for c, s in self.terms:
            if s is symbol:
                return c
        return Fraction(0)

    def coefficients(self, basis: Iterable) -> tuple:
        return tuple(self.coefficient(s) for s in basis)

    @property
    def symbols(self) -> frozenset:
        return frozenset(s for _, s in self.terms)

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        return ClosedForm(self.terms + other.terms)

    def __neg__(self) -> "ClosedForm":
        return ClosedForm(tuple((-c, s) for c, s in self.terms))

    def __sub__(self, other: "ClosedForm") -> "ClosedForm":
        return self + (-other)

    def scale(self, factor) -> "ClosedForm":
        factor = Fraction(factor)
        return ClosedForm(tuple((factor * c, s) for c, s in self.terms))

    def with_coefficient(self, symbol, value) -> "ClosedForm":
        symbol = parse_symbol(symbol)
        rest = tuple((c, s) for c, s in self.terms if s is not symbol)
        return ClosedForm(rest + ((Fraction(value), symbol),))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, s in self.terms:
            mag = abs(c)
            body = str(mag) if s is Symbol.ONE else (s.value if mag == 1 else f"{mag}*{s.value}")
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_dict(self) -> dict:
        return {s.name: str(c) for c, s in self.terms}


def closed_form_value(cf: ClosedForm, ctx: PrecisionContext):
    acc = ctx.mp.mpf(0)
    for coeff, sym in cf.terms:
        acc += ctx.mpf(coeff) * basis_value(sym, ctx)
    return acc


# --------------------------------------------------------------------------
# the complex-log rearrangement of arctan


def log_ratio_check(z, ctx: PrecisionContext):
    """|ln((1-z)/(1-iz)) - [ln((1-z)^2/(1+z^2))/2 + i arctan z]| for Re z < 0."""
    mp = ctx.mp
    z = ctx.mpc(z)
    if not z.real < 0:
        raise DomainError("log_ratio_check", z, "requires Re(z) < 0")
    lhs = mp.log((1 - z) / (1 - 1j * z))
    rhs = mp.log((1 - z) ** 2 / (1 + z * z)) / 2 + 1j * mp.atan(z)
    return abs(lhs - rhs)


def log_cube_im_defect(x, ctx: PrecisionContext):
    """Defect of Im ln^3((1-x)/(1-ix)) = (3/4) atan(x) ln^2((1-x)^2/(1+x^2)) - atan^3(x), real x < 1."""
    mp = ctx.mp
    x = ctx.mpf(x)
    if not x < 1:
        raise DomainError("log_cube_im_defect", x, "requires real x < 1")
    lhs = (mp.log((1 - x) / (1 - 1j * x)) ** 3).imag
    at = mp.atan(x)
    rhs = mp.mpf(3) / 4 * at * mp.log((1 - x) ** 2 / (1 + x * x)) ** 2 - at**3
    return abs(lhs - rhs)
