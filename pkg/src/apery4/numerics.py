"""Precision contexts, exact rationals and the elementary-function layer.

Every numeric value in the package is an mpmath number created by the
private :class:`mpmath.MPContext` owned by a :class:`PrecisionContext`.
Owning a context (instead of mutating the global ``mpmath.mp``) keeps two
computations at different precisions from interfering with each other.
"""

from __future__ import annotations

import math
import operator
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath

from .errors import DomainError, ResourceLimitError

DEFAULT_GUARD_DIGITS = 15
MIN_GUARD_DIGITS = 10
DEFAULT_MAX_DIGITS = 10_000
MAX_DIGITS_ENV = "APERY4_MAX_DIGITS"

LOG2_10 = math.log2(10)


def default_max_digits() -> int:
    raw = os.environ.get(MAX_DIGITS_ENV)
    if raw is None:
        return DEFAULT_MAX_DIGITS
    try:
        value = int(raw)
    except ValueError:
        raise ResourceLimitError(f"{MAX_DIGITS_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise ResourceLimitError(f"{MAX_DIGITS_ENV} must be positive, got {value}")
    return value


def bits_for_digits(digits: int) -> int:
    return math.ceil(digits * LOG2_10)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for one computation.

    ``target_digits`` is what the caller wants certified; ``guard_digits``
    is slack spent on roundoff.  All arithmetic runs at ``working_bits``;
    only reported values are rounded to ``target_digits``.
    """

    target_digits: int
    guard_digits: int = DEFAULT_GUARD_DIGITS
    working_bits: int = 0
    _lock: threading.RLock = field(
        default_factory=threading.RLock, repr=False, compare=False
    )
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError(f"target_digits must be >= 1, got {self.target_digits}")
        if self.guard_digits < MIN_GUARD_DIGITS:
            raise ValueError(
                f"guard_digits must be >= {MIN_GUARD_DIGITS}, got {self.guard_digits}"
            )
        floor = bits_for_digits(self.target_digits + self.guard_digits)
        if self.working_bits < floor:
            object.__setattr__(self, "working_bits", floor)

    def __reduce__(self):
        return (PrecisionContext, (self.target_digits, self.guard_digits, self.working_bits))

    @cached_property
    def mp(self) -> mpmath.MPContext:
        ctx = mpmath.MPContext()
        ctx.prec = self.working_bits
        return ctx

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def eps(self):
        """Absolute accuracy goal at working precision."""
        return self.mp.mpf(10) ** (-self.working_digits)

    @property
    def tolerance(self):
        """Absolute accuracy promised to callers."""
        return self.mp.mpf(10) ** (-self.target_digits)

    def mpf(self, x):
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def mpc(self, z):
        if isinstance(z, Fraction):
            return self.mp.mpc(self.mpf(z))
        return self.mp.mpc(z)

    def cached(self, key, compute):
        """Return ``compute()`` memoized under ``key`` for this context.

        The first caller computes while holding the (re-entrant) lock; other
        threads wait and then see the stored value.
        """
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    def refined(self, factor: int = 2) -> "PrecisionContext":
        return make_context(self.target_digits * factor, guard_digits=self.guard_digits)


def make_context(
    target_digits: int,
    guard_digits: int = DEFAULT_GUARD_DIGITS,
    max_digits: int | None = None,
) -> PrecisionContext:
    """Build a context for ``target_digits`` certified decimal digits.

    Raises ``ValueError`` for non-positive requests and
    ``ResourceLimitError`` above ``max_digits`` (taken from the
    ``APERY4_MAX_DIGITS`` environment variable when not given, default
    10 000).
    """
    if not isinstance(target_digits, int) or target_digits < 1:
        raise ValueError(f"target_digits must be a positive integer, got {target_digits!r}")
    ceiling = default_max_digits() if max_digits is None else max_digits
    if target_digits > ceiling:
        raise ResourceLimitError(
            f"{target_digits} digits requested, ceiling is {ceiling}"
        )
    return PrecisionContext(target_digits, guard_digits)


# --------------------------------------------------------------------------
# constants


def const_pi(ctx: PrecisionContext):
    return ctx.cached("pi", lambda: +ctx.mp.pi)


def const_ln2(ctx: PrecisionContext):
    return ctx.cached("ln2", lambda: +ctx.mp.ln2)


# --------------------------------------------------------------------------
# exact rationals

_RATIONAL_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rational_arith(a: Fraction, b: Fraction, op: str):
    """Apply ``op`` to two rationals exactly.

    ``cmp`` returns -1, 0 or 1; the other ops return a reduced
    :class:`~fractions.Fraction`.
    """
    a, b = Fraction(a), Fraction(b)
    if op == "cmp":
        return (a > b) - (a < b)
    if op == "div" and b == 0:
        raise ZeroDivisionError(f"rational division {a} / 0")
    try:
        fn = _RATIONAL_OPS[op]
    except KeyError:
        raise ValueError(f"unknown rational op {op!r}") from None
    return fn(a, b)


# --------------------------------------------------------------------------
# elementary functions


def _is_complex(x) -> bool:
    return isinstance(x, (complex, mpmath.mpc)) or type(x).__name__ == "mpc"


def _ln(mp, x):
    if _is_complex(x):
        if x == 0:
            raise DomainError("ln", x, "zero")
        if x.imag == 0 and x.real < 0:
            raise DomainError("ln", x, "on the negative real cut")
        return mp.log(x)
    if x <= 0:
        raise DomainError("ln", x, "real argument must be positive")
    return mp.log(x)


def _sqrt(mp, x):
    if not _is_complex(x) and x < 0:
        raise DomainError("sqrt", x, "negative real argument")
    return mp.sqrt(x)


def _arcsin(mp, x):
    if _is_complex(x):
        raise DomainError("arcsin", x, "real argument required")
    if abs(x) > 1:
        raise DomainError("arcsin", x, "|x| > 1")
    return mp.asin(x)


def _arctan(mp, x):
    if _is_complex(x) and x.real == 0 and abs(x.imag) >= 1:
        raise DomainError("arctan", x, "on a branch cut")
    return mp.atan(x)


_ELEM = {
    "exp": lambda mp, x: mp.exp(x),
    "ln": _ln,
    "sqrt": _sqrt,
    "sin": lambda mp, x: mp.sin(x),
    "cos": lambda mp, x: mp.cos(x),
    "arcsin": _arcsin,
    "arctan": _arctan,
}


def elem(fn: str, x, ctx: PrecisionContext, exponent=None):
    """Evaluate elementary function ``fn`` at ``x`` in ``ctx``.

    ``power`` takes the exponent as ``exponent`` and uses the principal
    branch for complex bases.
    """
    mp = ctx.mp
    x = mp.mpmathify(x)
    if fn == "power":
        if exponent is None:
            raise ValueError("power requires an exponent")
        if not _is_complex(x) and x < 0 and int(exponent) != exponent:
            raise DomainError("power", x, "negative base with non-integer exponent")
        return mp.power(x, exponent)
    try:
        impl = _ELEM[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return impl(mp, x)


def agree(a, b, digits: int) -> bool:
    """True when ``a`` and ``b`` match to ``digits`` (relative to max(1, |b|))."""
    scale = max(1, abs(b))
    return abs(a - b) < scale * mpmath.mpf(10) ** (-digits)
