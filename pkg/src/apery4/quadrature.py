"""Tanh-sinh (double-exponential) quadrature on finite intervals.

The substitution ``x = c + h*tanh(pi/2*sinh(t))`` turns integrands with
logarithmic or algebraic endpoint singularities into doubly-exponentially
decaying ones, so the trapezoidal rule in ``t`` converges geometrically.

Abscissas are handled as distances from the nearer endpoint.  For
``t > 0`` the node sits at distance ``h*(1 - tanh(u))`` from ``b``, which
is computed as ``2h/(exp(2u) + 1)`` and never rounds to zero.  Integrands
that need the distance (``1 - sin x`` near ``pi/2``, ``ln(1 - x)``
near 1, ...) set ``uses_distances`` and receive ``(x, x - a, b - x)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

from .errors import IntegrandError, NonConvergenceError
from .numerics import PrecisionContext

SINGULARITY_CLASSES = ("smooth", "log_endpoint", "algebraic_log_endpoint")
DEFAULT_MAX_LEVEL = 14
MIN_ACCEPT_LEVEL = 3


@dataclass(frozen=True)
class IntegrandSpec:
    evaluator: Callable
    a: object
    b: object
    singularity_class: str = "smooth"
    uses_distances: bool = False

    def __post_init__(self):
        if self.singularity_class not in SINGULARITY_CLASSES:
            raise ValueError(f"unknown singularity class {self.singularity_class!r}")
        if not self.a < self.b:
            raise ValueError(f"empty or reversed interval [{self.a}, {self.b}]")


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    levels_used: int
    evaluations: int
    history: tuple = ()  # estimate after each level, level 0 first


# (working_bits, level) -> raw (t, d, w) tuples, d = 1 - tanh(u) for u >= 0
_NODE_CACHE: dict = {}
_NODE_LOCK = threading.Lock()


def _level_nodes(ctx: PrecisionContext, level: int):
    key = (ctx.working_bits, level)
    raw = _NODE_CACHE.get(key)
    if raw is None:
        with _NODE_LOCK:
            raw = _NODE_CACHE.get(key)
            if raw is None:
                raw = tuple(
                    (t._mpf_, d._mpf_, w._mpf_) for t, d, w in _build_nodes(ctx, level)
                )
                _NODE_CACHE[key] = raw
    # raw mpf tuples are context-free; rewrap them for the caller's context
    make = ctx.mp.make_mpf
    return [(make(t), make(d), make(w)) for t, d, w in raw]


def _build_nodes(ctx, level):
    """Nodes that are new at ``level`` (odd multiples of the step, or all for 0).

    Nodes extend until the endpoint distance drops below 10**(-2*digits),
    which is far enough for ``(b-x)**(-1/2)`` singularities.
    """
    mp = ctx.mp
    step = mp.ldexp(1, -level)
    cutoff = mp.mpf(10) ** (-2 * ctx.working_digits - 5)
    half_pi = mp.pi / 2
    j, inc = (0, 1) if level == 0 else (1, 2)
    out = []
    while True:
        t = j * step
        u = half_pi * mp.sinh(t)
        d = 2 / (mp.exp(2 * u) + 1)
        w = half_pi * mp.cosh(t) / mp.cosh(u) ** 2
        out.append((t, d, w))
        if d < cutoff:
            break
        j += inc
    return tuple(out)


def _call(spec, x, left, right):
    try:
        if spec.uses_distances:
            return spec.evaluator(x, left, right)
        return spec.evaluator(x)
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        raise IntegrandError(x, exc) from exc


def integrate(
    spec: IntegrandSpec,
    ctx: PrecisionContext,
    max_level: int = DEFAULT_MAX_LEVEL,
    min_level: int = MIN_ACCEPT_LEVEL,
) -> QuadratureResult:
    """Integrate the IntegrandSpec ``spec`` with level doubling until successive levels agree.

    Agreement means a difference below ``10**-(target + guard/2)`` relative
    to ``max(1, |value|)``; the last difference is returned as the error
    estimate.
    """
    mp = ctx.mp
    a, b = mp.mpmathify(spec.a), mp.mpmathify(spec.b)
    h = (b - a) / 2
    c = a + h
    width = b - a
    tol = mp.mpf(10) ** (-(ctx.target_digits + ctx.guard_digits / 2))

    acc = mp.mpf(0)
    evaluations = 0
    history = []
    prev = None
    for level in range(max_level + 1):
        for t, d, w in _level_nodes(ctx, level):
            if t == 0:
                acc += w * _call(spec, c, h, h)
                evaluations += 1
                continue
            dist = h * d
            hi = _call(spec, b - dist, width - dist, dist)
            lo = _call(spec, a + dist, dist, width - dist)
            acc += w * (hi + lo)
            evaluations += 2
        estimate = h * acc / (1 << level)
        history.append(estimate)
        if prev is not None:
            diff = abs(estimate - prev)
            if level >= min_level and diff <= tol * max(1, abs(estimate)):
                return QuadratureResult(estimate, diff, level, evaluations, tuple(history))
        prev = estimate
    raise NonConvergenceError(
        f"tanh-sinh did not converge by level {max_level}", history[-2:]
    )


def integrate_complex(spec: IntegrandSpec, ctx: PrecisionContext, **kwargs) -> QuadratureResult:
    """As :func:`integrate` for complex-valued integrands; the value is always complex."""
    res = integrate(spec, ctx, **kwargs)
    return QuadratureResult(
        ctx.mp.mpc(res.value),
        res.error_estimate,
        res.levels_used,
        res.evaluations,
        res.history,
    )


def quad(ctx, f, a, b, singularity_class="smooth", uses_distances=False, **kwargs):
    """Shorthand: build the IntegrandSpec and integrate."""
    spec = IntegrandSpec(f, a, b, singularity_class, uses_distances)
    return integrate(spec, ctx, **kwargs)
