"""The central-binomial series family, its tails and its extrapolation.

Every catalog series has the shape ``sum_k 4^k f(k) / (k^2 C(2k, k))``
with a harmonic-number factor ``f``.  The central-binomial ratio
``r_k = 4^k / C(2k, k)`` is advanced by ``r_{k+1} = r_k (2k+2)/(2k+1)``
and is always between ``sqrt(pi k)`` and ``sqrt(pi (k + 1/2))``, so the
summands decay like ``k^(-3/2)`` (times powers of ``ln k``).  Direct
summation therefore gains only half a digit per decade of terms, and
any high-precision value has to come from extrapolation or from an
integral representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import NonConvergenceError, UnknownIdError
from .numerics import PrecisionContext, make_context
from .special import ClosedForm, Symbol, harmonic

# --------------------------------------------------------------------------
# exact terms


_CENTRAL = [Fraction(1)]  # r_0 = 4^0 / C(0, 0)


def central_ratio(k: int) -> Fraction:
    """``4^k / C(2k, k)`` exactly, by the product recurrence."""
    while len(_CENTRAL) <= k:
        n = len(_CENTRAL) - 1
        _CENTRAL.append(_CENTRAL[-1] * Fraction(2 * n + 2, 2 * n + 1))
    return _CENTRAL[k]


@dataclass(frozen=True)
class TailFamily:
    """Asymptotic class of the summands: ``k^exponent * (ln k)^log_power``."""

    exponent: Fraction = Fraction(-3, 2)
    log_power: int = 0


@dataclass(frozen=True)
class SeriesSpec:
    id: str
    description: str
    factor: Callable[[int], Fraction]  # exact harmonic factor f(k)
    factor_ratio: Callable[[int], Fraction] | None
    tail_family: TailFamily
    weight: int = 4
    anchor: str = ""

    def term_exact(self, k: int) -> Fraction:
        return central_ratio(k) * self.factor(k) / (k * k)

    def ratio(self, k: int) -> Fraction:
        """``t_{k+1} / t_k`` exactly."""
        base = Fraction(2 * k * k, (k + 1) * (2 * k + 1))
        if self.factor_ratio is None:
            return base
        return base * self.factor_ratio(k)


def _hratio(fn):
    return lambda k: fn(k + 1) / fn(k)


SERIES = {
    s.id: s
    for s in [
        SeriesSpec(
            "L1_III", "sum 4^k/(k^2 C(2k,k))",
            lambda k: Fraction(1), None, TailFamily(log_power=0), weight=2,
            anchor="weight-2 base sum",
        ),
        SeriesSpec(
            "L1_IV", "sum 4^k H_k^(2)/(k^2 C(2k,k))",
            lambda k: harmonic(k, 2), _hratio(lambda k: harmonic(k, 2)),
            TailFamily(log_power=0), anchor="weight-4 H^(2) sum",
        ),
        SeriesSpec(
            "THM_I", "sum 4^k H_2k^(2)/(k^2 C(2k,k))",
            lambda k: harmonic(2 * k, 2), _hratio(lambda k: harmonic(2 * k, 2)),
            TailFamily(log_power=0), anchor="main result, H_2k^(2) sum",
        ),
        SeriesSpec(
            "THM_II", "sum 4^k H_2k^2/(k^2 C(2k,k))",
            lambda k: harmonic(2 * k) ** 2, _hratio(lambda k: harmonic(2 * k) ** 2),
            TailFamily(log_power=2), anchor="main result, H_2k^2 sum",
        ),
    ]
}


def series_spec(series_id: str) -> SeriesSpec:
    try:
        return SERIES[series_id]
    except KeyError:
        raise UnknownIdError(series_id) from None


def term(series_id: str, k: int) -> Fraction:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return series_spec(series_id).term_exact(k)


def sum_exact(series_id: str, N: int) -> Fraction:
    return sum((term(series_id, k) for k in range(1, N + 1)), Fraction(0))


# --------------------------------------------------------------------------
# direct summation


@dataclass(frozen=True)
class PartialSums:
    series_id: str
    values: tuple  # S_1 .. S_N
    terms: tuple = field(repr=False, default=())

    @property
    def N(self) -> int:
        return len(self.values)


def _factor_stream(series_id, mp):
    """Working-precision harmonic factors f(1), f(2), ..."""
    one = mp.mpf(1)
    h = mp.mpf(0)
    k = 0
    while True:
        k += 1
        if series_id == "L1_III":
            yield one
        elif series_id == "L1_IV":
            h += one / (k * k)
            yield h
        elif series_id == "THM_I":
            h += one / (2 * k - 1) ** 2 + one / (2 * k) ** 2
            yield h
        else:
            h += one / (2 * k - 1) + one / (2 * k)
            yield h * h


def sum_direct(series_id: str, N: int, ctx: PrecisionContext) -> PartialSums:
    """Partial sums ``S_1..S_N`` at working precision.

    The terms are the exact ones rounded once per factor: harmonic
    numbers and the central-binomial ratio are carried at working
    precision instead of as exact rationals, whose denominators grow to
    tens of thousands of digits at N = 20 000.  The accumulated roundoff
    is ``O(N * eps)``.
    """
    series_spec(series_id)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    mp = ctx.mp
    r = mp.mpf(2)
    acc = mp.mpf(0)
    values, terms = [], []
    factors = _factor_stream(series_id, mp)
    for k in range(1, N + 1):
        if k > 1:
            r = r * (2 * k) / (2 * k - 1)
        t = r * next(factors) / (k * k)
        acc += t
        terms.append(t)
        values.append(acc)
    return PartialSums(series_id, tuple(values), tuple(terms))


# Upper bounds on the harmonic factor, used by the tail bounds.
_ZETA2_UPPER = Fraction(1645, 1000)


def tail_bound(series_id: str, N: int, ctx: PrecisionContext | None = None):
    """Certified upper bound on ``sum_{k>N} t_k``.

    From ``r_k <= sqrt(pi (k + 1/2))`` and ``sqrt(k + 1/2) <=
    sqrt(k) sqrt(1 + 1/(2N))`` for ``k > N``, and because every bounding
    summand is decreasing for ``k >= 10``, the tail is at most the
    integral from ``N`` to infinity:

    * factor 1: ``2 sqrt(pi) sqrt(1 + 1/(2N)) / sqrt(N)``;
    * ``H^(2) <= 1.645``: the same times 1.645;
    * ``H_2k^2 <= (ln 2k + 1)^2``: ``2 sqrt(pi) sqrt(1 + 1/(2N)) (L^2 + 4L + 8) / sqrt(N)``
      with ``L = ln(2N) + 1``.
    """
    spec = series_spec(series_id)
    if N < 10:
        raise ValueError(f"tail_bound needs N >= 10, got {N}")
    ctx = ctx or make_context(20)
    mp = ctx.mp
    base = 2 * mp.sqrt(mp.pi) * mp.sqrt(1 + mp.mpf(1) / (2 * N)) / mp.sqrt(N)
    if spec.id == "L1_III":
        return base
    if spec.id in ("L1_IV", "THM_I"):
        return base * ctx.mpf(_ZETA2_UPPER)
    L = mp.log(2 * N) + 1
    return base * (L * L + 4 * L + 8)


# --------------------------------------------------------------------------
# extrapolation


@dataclass(frozen=True)
class Extrapolation:
    value: object
    gauge: object  # a-posteriori error estimate
    method: str
    terms_used: int


def levin_u(values, terms, order: int, ctx: PrecisionContext):
    """Levin u-transform of order ``order`` from ``S_1 .. S_{order+1}`` (beta = 1)."""
    mp = ctx.mp
    if len(values) < order + 1:
        raise ValueError("not enough partial sums for the requested order")
    num = mp.mpf(0)
    den = mp.mpf(0)
    last = order + 1
    for j in range(order + 1):
        n = j + 1
        a = terms[n - 1]
        if a == 0:
            raise NonConvergenceError("levin: vanishing term, remainder estimate undefined")
        w = n * a
        c = (-1) ** j * math.comb(order, j) * (mp.mpf(n) / last) ** (order - 1)
        num += c * values[n - 1] / w
        den += c / w
    if den == 0:
        raise NonConvergenceError("levin: vanishing denominator")
    return num / den


def richardson_fit(values, samples, log_power: int, ctx: PrecisionContext):
    """Fit ``S_N = S + N^(-1/2) sum_j N^(-j) sum_p c_jp ln(N)^p`` through ``samples``.

    Exactly determined: as many basis columns as sample points.
    """
    mp = ctx.mp
    m = len(samples)
    columns = []
    j = 0
    while len(columns) < m - 1:
        for p in range(log_power + 1):
            if len(columns) < m - 1:
                columns.append((j, p))
        j += 1
    A = mp.matrix(m, m)
    rhs = mp.matrix(m, 1)
    half = mp.mpf(1) / 2
    for i, N in enumerate(samples):
        NN = mp.mpf(N)
        lnN = mp.log(NN)
        A[i, 0] = 1
        for col, (jj, p) in enumerate(columns, start=1):
            A[i, col] = NN ** (-half - jj) * lnN**p
        rhs[i] = values[N - 1]
    try:
        sol = mp.lu_solve(A, rhs)
    except ZeroDivisionError as exc:
        raise NonConvergenceError("richardson: singular system") from exc
    return sol[0]


_MIN_SAMPLE = 20


def _geometric_samples(N, count, ratio=0.7):
    """``count`` distinct sample points ``N, N r, N r^2, ...`` none below 20.

    For short sequences the ratio is raised toward 1 so the smallest
    sample stays at ``_MIN_SAMPLE``.
    """
    if N > _MIN_SAMPLE:
        ratio = max(ratio, (_MIN_SAMPLE / N) ** (1 / (count - 1)))
    return sorted({max(1, int(round(N * ratio**i))) for i in range(count)})


def _richardson(ps, log_power, ctx):
    count = 14 if log_power == 0 else 18
    full = _geometric_samples(ps.N, count)
    half = _geometric_samples(ps.N // 2, count)
    if len(full) < count or len(half) < count or half[0] < _MIN_SAMPLE // 2:
        raise NonConvergenceError(f"richardson: N = {ps.N} too small for {count} samples")
    a = richardson_fit(ps.values, full, log_power, ctx)
    b = richardson_fit(ps.values, half, log_power, ctx)
    return Extrapolation(a, abs(a - b), f"richardson(m={count})", ps.N)


def _levin(ps, ctx):
    order = min(ps.N - 1, max(8, int(0.6 * ctx.working_digits)))
    a = levin_u(ps.values, ps.terms, order, ctx)
    b = levin_u(ps.values, ps.terms, order - 4, ctx)
    return Extrapolation(a, abs(a - b), f"levin-u(k={order})", order + 1)


def accelerate(ps: PartialSums, tail_family: TailFamily, ctx: PrecisionContext, tol=None):
    """Extrapolate the limit of ``ps``.

    The Levin u-transform (error gauge: order k against order k-4) is
    tried first; when its gauge exceeds ``tol`` the Richardson fit in
    powers of ``N^(-1/2)`` (with ``ln N`` columns for ``tail_family``) is
    used, gauged by refitting on the first ``N/2`` partial sums.  The
    estimate with the smaller gauge wins.
    """
    mp = ctx.mp
    if ps.N < 20:
        raise ValueError(f"accelerate needs N >= 20, got {ps.N}")
    if all(v == ps.values[0] for v in ps.values):
        return Extrapolation(ps.values[0], mp.mpf(0), "constant", ps.N)
    if tol is None:
        tol = mp.mpf(10) ** (-max(10, ctx.target_digits // 2))
    terms = ps.terms or (ps.values[0],) + tuple(
        ps.values[i] - ps.values[i - 1] for i in range(1, ps.N)
    )
    ps = PartialSums(ps.series_id, ps.values, terms)
    candidates = []
    try:
        lev = _levin(ps, ctx)
        if lev.gauge <= tol * max(1, abs(lev.value)):
            return lev
        candidates.append(lev)
    except NonConvergenceError:
        pass
    try:
        candidates.append(_richardson(ps, tail_family.log_power, ctx))
    except NonConvergenceError:
        if not candidates:
            raise
    return min(candidates, key=lambda e: e.gauge)


def accelerated_sum(series_id: str, ctx: PrecisionContext, N: int = 20000, tol=None):
    ps = sum_direct(series_id, N, ctx)
    return accelerate(ps, series_spec(series_id).tail_family, ctx, tol)


# --------------------------------------------------------------------------
# generating function  (1/2) sum 4^k x^(2k-1)/(k C(2k,k)) = arcsin(x)/sqrt(1-x^2)


def gf_series(x, K: int, ctx: PrecisionContext):
    mp = ctx.mp
    x = ctx.mpf(x)
    x2 = x * x
    r = mp.mpf(2)
    power = x
    acc = mp.mpf(0)
    for k in range(1, K + 1):
        if k > 1:
            r = r * (2 * k) / (2 * k - 1)
            power *= x2
        acc += r * power / k
    return acc / 2


def gf_tail_bound(x, K: int, ctx: PrecisionContext):
    """Bound on the omitted part of :func:`gf_series` after ``K`` terms.

    ``r_k/(2k) <= sqrt(pi (k+1/2))/(2k)`` is decreasing, so the tail is at
    most its first bounding term over ``1 - x^2``.
    """
    mp = ctx.mp
    x = abs(ctx.mpf(x))
    k = K + 1
    first = mp.sqrt(mp.pi * (k + mp.mpf(1) / 2)) / (2 * k) * x ** (2 * k - 1)
    return first / (1 - x * x)


def gf_terms_needed(x, ctx: PrecisionContext, goal=None) -> int:
    goal = ctx.eps / 10 if goal is None else goal
    K = 10
    while gf_tail_bound(x, K, ctx) >= goal:
        K *= 2
    lo, hi = K // 2, K
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if gf_tail_bound(x, mid, ctx) < goal:
            hi = mid
        else:
            lo = mid
    return hi


def gf_closed(x, ctx: PrecisionContext):
    mp = ctx.mp
    x = ctx.mpf(x)
    return mp.asin(x) / mp.sqrt(1 - x * x)


def gf_defect(x, K: int, ctx: PrecisionContext):
    """``|truncated generating series - arcsin(x)/sqrt(1-x^2)|`` for ``0 < x < 1``."""
    x = ctx.mpf(x)
    if not 0 < x < 1:
        raise ValueError(f"gf_defect needs 0 < x < 1, got {x}")
    return abs(gf_series(x, K, ctx) - gf_closed(x, ctx))


# --------------------------------------------------------------------------
# Fourier-type expansion  tan(x) ln(sin x) = -sum c_k sin(2kx)


def fourier_coeff(k: int) -> tuple[Fraction, Fraction]:
    """``c_k = int_0^1 (1-t)/(1+t) t^(k-1) dt`` as ``(q, r)`` with ``c_k = q + r ln 2``.

    ``(1-t)/(1+t) = 2/(1+t) - 1`` gives ``c_k = 2 A_k - 1/k`` with
    ``A_k = (-1)^(k-1) (ln 2 - sum_{j<k} (-1)^(j-1)/j)``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sign = 1 if k % 2 == 1 else -1
    alt = sum((Fraction((-1) ** (j - 1), j) for j in range(1, k)), Fraction(0))
    return -2 * sign * alt - Fraction(1, k), Fraction(2 * sign)


def fourier_coeff_value(k: int, ctx: PrecisionContext):
    q, r = fourier_coeff(k)
    return ctx.mpf(q) + ctx.mpf(r) * ctx.mp.ln2


def fourier_partial_defect(x, N: int, ctx: PrecisionContext):
    """Return ``(defect, bound)`` for the ``N``-term expansion at ``x``.

    ``defect = |tan(x) ln(sin x) + sum_{k<=N} c_k sin(2kx)|``.  Since
    ``0 < c_k <= int_0^1 (1-t) t^(k-1) dt = 1/(k(k+1))``, the omitted part
    is at most ``1/(N+1)``.  The coefficients are generated by
    ``A_{k+1} = 1/k - A_k`` in working precision.
    """
    mp = ctx.mp
    x = ctx.mpf(x)
    rot = mp.expjpi(2 * x / mp.pi)
    z = mp.mpc(1)
    A = mp.ln2
    acc = mp.mpf(0)
    for k in range(1, N + 1):
        z *= rot
        acc += (2 * A - mp.mpf(1) / k) * z.imag
        A = mp.mpf(1) / k - A
    defect = abs(mp.tan(x) * mp.log(mp.sin(x)) + acc)
    return defect, mp.mpf(1) / (N + 1)


# --------------------------------------------------------------------------
# telescoped closed forms


def _alt_odd_sum(k: int, power: int) -> Fraction:
    return sum(
        (Fraction((-1) ** (n + 1), (2 * n - 1) ** power) for n in range(1, k + 1)),
        Fraction(0),
    )


def csc_sine_moment(k: int) -> ClosedForm:
    """Closed form of ``I_k = int_0^(pi/2) x^2 csc(x) sin(2kx) dx``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return ClosedForm(
        (
            (3 * _alt_odd_sum(k, 1), Symbol.ZETA2),
            (-4 * _alt_odd_sum(k, 3), Symbol.ONE),
        )
    )


def wallis(n: int) -> Fraction:
    """``int_0^(pi/2) cos^(2n-1)(x) dx = (1/2) 4^n / (n C(2n, n))``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return central_ratio(n) / (2 * n)


def x2_cos_power_moment(k: int) -> ClosedForm:
    """Closed form of ``int_0^(pi/2) x^2 cos^(2k-1)(x) dx``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    w = central_ratio(k) / k
    rational = w * harmonic(k, 2) / 4 - w * harmonic(2 * k, 2)
    return ClosedForm(((rational, Symbol.ONE), (Fraction(3, 4) * w, Symbol.ZETA2)))
