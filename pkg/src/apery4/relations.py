"""Integer-relation detection (PSLQ) and closed-form rediscovery.

The PSLQ iteration follows Ferguson and Bailey with ``gamma = 2/sqrt(3)``
and a full size reduction after every exchange.  Everything runs at the
context's working precision; the unimodular matrices are exact Python
integers.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import PrecisionExhaustedError
from .ledger import Workspace
from .numerics import PrecisionContext, make_context
from .special import ClosedForm, Symbol, basis_value, closed_form_value
from .series import series_spec

log = logging.getLogger(__name__)

DEFAULT_MAX_COEFF_BITS = 20

DEFAULT_BASES = {
    "L1_III": (Symbol.ZETA2,),
    "L1_IV": (Symbol.ZETA4, Symbol.LI4_HALF, Symbol.LN2_SQ_ZETA2, Symbol.LN2_P4),
    "THM_I": (Symbol.G_SQ, Symbol.ZETA4, Symbol.LI4_HALF, Symbol.LN2_SQ_ZETA2, Symbol.LN2_P4),
    "THM_II": (Symbol.G_SQ, Symbol.ZETA4, Symbol.LI4_HALF, Symbol.LN2_SQ_ZETA2, Symbol.LN2_P4),
}


@dataclass(frozen=True)
class RelationProblem:
    """Find integers ``c`` with ``sum c_i values_i = 0`` and ``max |c_i| <= 2**max_coeff_bits``.

    Duplicate values are allowed (they have the obvious relation); zero
    values are not, since they make every vector with a nonzero entry in
    that slot a relation.
    """

    values: tuple
    labels: tuple = ()
    max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 2:
            raise ValueError("a relation problem needs at least two values")
        if any(v == 0 for v in self.values):
            raise ValueError("relation problem values must be nonzero")
        if self.max_coeff_bits < 1:
            raise ValueError("max_coeff_bits must be positive")
        labels = tuple(self.labels) or tuple(f"x{i}" for i in range(len(self.values)))
        if len(labels) != len(self.values):
            raise ValueError("labels and values differ in length")
        object.__setattr__(self, "labels", labels)


@dataclass(frozen=True)
class RelationResult:
    coefficients: tuple  # of int
    residual: object  # |sum c_i v_i| at working precision
    norm: int
    status: str  # found | none_within_bound
    iterations: int = 0

    def describe(self, labels) -> str:
        parts = [f"{c:+d}*{name}" for c, name in zip(self.coefficients, labels) if c]
        return " ".join(parts) + " = 0" if parts else "(no relation)"


def _normalize(coeffs):
    g = reduce(math.gcd, (abs(c) for c in coeffs), 0)
    if g > 1:
        coeffs = [c // g for c in coeffs]
    first = next((c for c in coeffs if c), 0)
    if first < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def relation_threshold(ctx: PrecisionContext):
    return ctx.mp.mpf(10) ** (-(ctx.working_digits - ctx.guard_digits))


def pslq(problem: RelationProblem, ctx: PrecisionContext, max_iterations: int | None = None) -> RelationResult:
    """Run PSLQ on ``problem.values`` at ``ctx``'s working precision.

    A relation is accepted when a reduced entry ``|y_j|`` falls below
    ``10**-(working_digits - guard_digits)``.  ``none_within_bound`` is
    returned once ``1/max |H_jj|`` (a lower bound on the norm of any
    relation) exceeds ``2**max_coeff_bits``.  Running out of precision
    first (reduction multipliers too large to be trusted, or the
    iteration cap) raises :class:`PrecisionExhaustedError`.
    """
    mp = ctx.mp
    n = len(problem.values)
    bound = 2 ** problem.max_coeff_bits
    floor_bits = 3 * problem.max_coeff_bits * n
    if ctx.working_bits < floor_bits:
        log.info(
            "pslq: %d working bits is below the 3*bits*n heuristic floor of %d",
            ctx.working_bits, floor_bits,
        )
    threshold = relation_threshold(ctx)
    trust = 10 ** (ctx.working_digits - ctx.guard_digits)
    if max_iterations is None:
        max_iterations = 4 * n * n * ctx.working_digits
    gamma = 2 / mp.sqrt(3)

    raw = [ctx.mpf(v) for v in problem.values]
    scale = mp.sqrt(mp.fsum(v * v for v in raw))
    x = [v / scale for v in raw]

    # s_k = |(x_k, ..., x_{n-1})|
    s = [mp.sqrt(mp.fsum(x[j] ** 2 for j in range(k, n))) for k in range(n)]
    H = [[mp.mpf(0)] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if i == j:
                H[i][j] = s[i + 1] / s[i]
            else:
                H[i][j] = -x[i] * x[j] / (s[j] * s[j + 1])
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]
    y = list(x)

    def reduce_full():
        for i in range(1, n):
            for j in range(min(i - 1, n - 2), -1, -1):
                if H[j][j] == 0:
                    continue
                t = int(mp.nint(H[i][j] / H[j][j]))
                if t == 0:
                    continue
                if abs(t) > trust:
                    raise PrecisionExhaustedError(
                        f"pslq: reduction multiplier {t} exceeds what "
                        f"{ctx.working_digits} working digits can resolve"
                    )
                y[j] += t * y[i]
                for k in range(j + 1):
                    H[i][k] -= t * H[j][k]
                for k in range(n):
                    A[i][k] -= t * A[j][k]
                    B[k][j] += t * B[k][i]

    def found(iteration):
        j = min(range(n), key=lambda r: abs(y[r]))
        if abs(y[j]) >= threshold:
            return None
        coeffs = _normalize([B[k][j] for k in range(n)])
        if not any(coeffs):
            return None
        residual = abs(mp.fsum(c * v for c, v in zip(coeffs, raw)))
        norm = max(abs(c) for c in coeffs)
        if norm > bound:
            return RelationResult(coeffs, residual, norm, "none_within_bound", iteration)
        return RelationResult(coeffs, residual, norm, "found", iteration)

    reduce_full()
    hit = found(0)
    if hit is not None:
        return hit
    for iteration in range(1, max_iterations + 1):
        m = max(range(n - 1), key=lambda i: gamma ** (i + 1) * abs(H[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        for row in B:
            row[m], row[m + 1] = row[m + 1], row[m]
        if m < n - 2:
            t0 = mp.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
            if t0 == 0:
                raise PrecisionExhaustedError("pslq: degenerate corner, precision exhausted")
            t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = t1 * t3 + t2 * t4
                H[i][m + 1] = -t2 * t3 + t1 * t4
        reduce_full()
        hit = found(iteration)
        if hit is not None:
            return hit
        diag = max(abs(H[i][i]) for i in range(n - 1))
        if diag == 0 or 1 / diag > bound:
            zeros = tuple([0] * n)
            return RelationResult(zeros, mp.nan, 0, "none_within_bound", iteration)
    raise PrecisionExhaustedError(
        f"pslq: no decision after {max_iterations} iterations at {ctx.working_digits} digits"
    )


# --------------------------------------------------------------------------
# rediscovery


@dataclass(frozen=True)
class Discovery:
    series_id: str
    basis: tuple  # of Symbol
    candidate: ClosedForm | None
    relation: RelationResult | None
    reverify_digits: int
    reverify_residual: object
    status: str  # verified | candidate-rejected | none_within_bound | no-series-term


def _series_value(series_id, ctx):
    series_spec(series_id)
    return Workspace(ctx).value(("series", series_id))


def reverify(candidate: ClosedForm, series_id: str, ctx: PrecisionContext,
             factor: float = 1.5) -> tuple[bool, object, int]:
    """Recompute the series and the candidate at ``factor`` times the digits.

    Returns ``(accepted, residual, digits)``; accepted means the residual
    is below ``10**-digits``.
    """
    digits = math.ceil(factor * ctx.target_digits)
    hi = make_context(digits, ctx.guard_digits, max_digits=max(digits, ctx.target_digits))
    value = _series_value(series_id, hi)
    residual = abs(value - closed_form_value(candidate, hi))
    return residual < hi.tolerance, residual, digits


def parse_basis(text_or_list) -> tuple:
    from .special import parse_symbol

    if isinstance(text_or_list, str):
        items = [t for t in text_or_list.split(",") if t.strip()]
    else:
        items = list(text_or_list)
    return tuple(parse_symbol(t) if isinstance(t, str) else t for t in items)


def discover(series_id: str, basis, ctx: PrecisionContext,
             max_coeff_bits: int = DEFAULT_MAX_COEFF_BITS) -> Discovery:
    """Find the closed form of a catalog series over ``basis`` by PSLQ.

    The series value comes from the integral/relational route at ``ctx``;
    the relation ``c_0 S + sum c_i b_i = 0`` is solved for ``S`` and the
    resulting candidate is checked again at 1.5 times the digits.
    """
    basis = parse_basis(basis) if basis is not None else DEFAULT_BASES[series_id]
    if not basis:
        raise ValueError("basis must not be empty")
    if len(set(basis)) != len(basis):
        raise ValueError("basis symbols must be distinct")
    value = _series_value(series_id, ctx)
    values = [value] + [basis_value(sym, ctx) for sym in basis]
    labels = [series_id] + [sym.name for sym in basis]
    rel = pslq(RelationProblem(values, labels, max_coeff_bits), ctx)
    if rel.status != "found":
        return Discovery(series_id, basis, None, rel, 0, None, rel.status)
    c0 = rel.coefficients[0]
    if c0 == 0:
        log.warning("discover: relation %s does not involve the series", rel.describe(labels))
        return Discovery(series_id, basis, None, rel, 0, None, "no-series-term")
    candidate = ClosedForm(tuple(
        (Fraction(-c, c0), sym) for c, sym in zip(rel.coefficients[1:], basis)
    ))
    ok, residual, digits = reverify(candidate, series_id, ctx)
    return Discovery(series_id, basis, candidate, rel, digits, residual,
                     "verified" if ok else "candidate-rejected")


__all__ = [
    "DEFAULT_BASES",
    "Discovery",
    "RelationProblem",
    "RelationResult",
    "discover",
    "parse_basis",
    "pslq",
    "relation_threshold",
    "reverify",
]
