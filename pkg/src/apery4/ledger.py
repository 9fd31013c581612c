"""Catalog of identities and the engine that verifies them.

Each entry pairs a left-hand evaluation strategy with a closed form (or
a second strategy).  Strategies name *quantities* that a
:class:`Workspace` computes once per run and memoizes.  The quantity
dependency graph is acyclic by construction::

    s_L1_III  <- q:4 int arcsin(x)/sqrt(1-x^2)
    s_L1_IV   <- q:-4 int ln(sin t)(pi^2/2 - 2t^2) tan t
    s_THM_I_i <- q:-int ln(sin t)(pi^2/2 - 2t^2) cos t/(1 - sin t)
    rel_I     <- s_L1_IV, s_THM_I_i
    s_THM_I   <- s_L1_IV, s_L1_III, q_L2_III          (relational route)
    s_THM_II  <- q_L3_II, s_THM_I                     (relational route)

The two generating-function integrals for ``s_L1_IV`` and
``s_THM_I_i`` come from writing ``H_n^(2) = -int_0^1 ln t (1 - t^n)/(1 - t) dt``
and summing ``sum 4^k y^(2k)/(k^2 C(2k,k)) = 2 arcsin(y)^2`` under the
integral sign; they give REL_I a route independent of the L2_III
integral that the relational THM_I route uses.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable

from .errors import Apery4Error, NonConvergenceError, UnknownIdError
from .numerics import PrecisionContext, make_context
from .quadrature import IntegrandSpec, integrate, integrate_complex
from .series import (
    accelerated_sum,
    gf_closed,
    gf_series,
    gf_terms_needed,
    csc_sine_moment,
    x2_cos_power_moment,
    sum_direct,
    tail_bound,
    wallis,
)
from .special import ClosedForm, closed_form_value, harmonic, zeta_int

log = logging.getLogger(__name__)

WITNESS_DIGITS = 8
DEFAULT_WITNESS_TERMS = 20000
DEFAULT_DIRECT_TERMS = 10000
SERIES_IDS = ("L1_III", "L1_IV", "THM_I", "THM_II")
REPORT_FIELDS = (
    "id",
    "method",
    "lhs_value",
    "rhs_value",
    "abs_residual",
    "digits_agreed",
    "work",
    "elapsed_seconds",
    "status",
)


# --------------------------------------------------------------------------
# integrands (all on intervals starting at 0, so ``left`` is x itself)


def _sin_cos(mp, left, right):
    """sin x and cos x on [0, pi/2] from the distances to both ends."""
    if left <= right:
        return mp.sin(left), mp.cos(left)
    return mp.cos(right), mp.sin(right)


def _arcsin_unit(mp, x, right):
    """arcsin x on [0, 1) accurate near 1 via arcsin x = pi/2 - arcsin sqrt(1-x^2)."""
    if right > 0.25:
        return mp.asin(x)
    return mp.pi / 2 - mp.asin(mp.sqrt(right * (2 - right)))


def _integrand(name, mp, k=None):
    if name == "l1_i":
        return lambda x, l, r: l ** (k - 1) * mp.log(r) ** 2
    if name == "x2_csc_sin2k":
        def f(x, l, r):
            s, _ = _sin_cos(mp, l, r)
            return l * l / s * mp.sin(2 * k * l)
        return f
    if name == "x2_cos_pow":
        def f(x, l, r):
            _, c = _sin_cos(mp, l, r)
            return l * l * c ** (2 * k - 1)
        return f
    if name == "cos_pow":
        def f(x, l, r):
            _, c = _sin_cos(mp, l, r)
            return c ** (2 * k - 1)
        return f
    if name == "l2_iii":
        def f(x, l, r):
            s, c = _sin_cos(mp, l, r)
            return l * l / c * mp.log(s)
        return f
    if name == "l3_ii":
        # 1 - sin x = 2 sin^2((pi/2 - x)/2)
        return lambda x, l, r: l * mp.log(2 * mp.sin(r / 2) ** 2) ** 2
    if name == "atan3":
        return lambda x, l, r: mp.atan(l) ** 3 / (1 + l * l)
    if name == "eq_2_1":
        return lambda x, l, r: 4 * mp.atan(l) * mp.log(r * r / (1 + l * l)) ** 2 / (1 + l * l)
    if name == "eq_2_2_cplx":
        return lambda x, l, r: mp.log(r / (1 - 1j * l)) ** 3 / (1 + l * l)
    if name == "arcsin_over_sqrt":
        return lambda x, l, r: 4 * _arcsin_unit(mp, l, r) / mp.sqrt(r * (2 - r))
    if name == "rel_ii_x":
        return lambda x, l, r: (
            4 * _arcsin_unit(mp, l, r) * mp.log(r) ** 2 / mp.sqrt(r * (2 - r))
        )
    if name == "l1_iv_gf":
        def f(x, l, r):
            s, _ = _sin_cos(mp, l, r)
            # (pi^2/2 - 2 t^2) tan t with pi/2 - t = r
            return -4 * mp.log(s) * 2 * r * (mp.pi / 2 + l) * s / mp.sin(r)
        return f
    if name == "thm_i_gf":
        def f(x, l, r):
            s, _ = _sin_cos(mp, l, r)
            # cos t / (1 - sin t) = sin r / (2 sin^2(r/2))
            return -mp.log(s) * 2 * r * (mp.pi / 2 + l) * mp.sin(r) / (2 * mp.sin(r / 2) ** 2)
        return f
    if name == "l2_i_summed":
        w = k  # e^{2ix}
        return lambda x, l, r: r / (1 + l) * w / (1 - w * l)
    raise KeyError(name)


# (integrand, upper limit, singularity class, complex?)
_INTEGRALS = {
    "l1_i": ("1", "log_endpoint", False),
    "x2_csc_sin2k": ("pi/2", "smooth", False),
    "x2_cos_pow": ("pi/2", "smooth", False),
    "cos_pow": ("pi/2", "smooth", False),
    "l2_iii": ("pi/2", "log_endpoint", False),
    "l3_ii": ("pi/2", "log_endpoint", False),
    "atan3": ("1", "smooth", False),
    "eq_2_1": ("1", "log_endpoint", False),
    "eq_2_2_cplx": ("1", "log_endpoint", True),
    "arcsin_over_sqrt": ("1", "algebraic_log_endpoint", False),
    "rel_ii_x": ("1", "algebraic_log_endpoint", False),
    "l1_iv_gf": ("pi/2", "log_endpoint", False),
    "thm_i_gf": ("pi/2", "log_endpoint", False),
    "l2_i_summed": ("1", "smooth", True),
}


# --------------------------------------------------------------------------
# workspace of memoized quantities


@dataclass(frozen=True)
class Evaluation:
    value: object
    work: int
    note: str = ""


class Workspace:
    """Memoized quantities for one verification run at one precision."""

    def __init__(self, ctx: PrecisionContext, witness_terms: int = DEFAULT_WITNESS_TERMS):
        self.ctx = ctx
        self.witness_terms = witness_terms
        self._memo: dict = {}

    def get(self, key) -> Evaluation:
        if key not in self._memo:
            self._memo[key] = self._compute(key)
        return self._memo[key]

    def value(self, key):
        return self.get(key).value

    # -- computation ----------------------------------------------------
    def integral(self, name, k=None) -> Evaluation:
        return self.get(("int", name, k))

    def _compute(self, key) -> Evaluation:
        ctx, mp = self.ctx, self.ctx.mp
        kind = key[0]
        if kind == "int":
            _, name, k = key
            upper, cls, is_complex = _INTEGRALS[name]
            b = mp.pi / 2 if upper == "pi/2" else mp.mpf(1)
            param = k
            if name == "l2_i_summed":
                param = mp.expj(2 * k)
            spec = IntegrandSpec(_integrand(name, mp, param), 0, b, cls, uses_distances=True)
            res = (integrate_complex if is_complex else integrate)(spec, ctx)
            return Evaluation(res.value, res.evaluations, f"quadrature(level={res.levels_used})")
        if kind == "series":
            return self._series(key[1])
        if kind == "rel_I":
            iv, th = self.get(("series", "L1_IV")), self.integral("thm_i_gf")
            return Evaluation(iv.value / 4 - th.value, iv.work + th.work, "integrals")
        if kind == "witness":
            ex = accelerated_sum(key[1], ctx, N=self.witness_terms)
            return Evaluation(ex.value, self.witness_terms, ex.method)
        if kind == "direct":
            _, sid, N = key
            ps = sum_direct(sid, N, ctx)
            return Evaluation(ps.values[-1], N, f"direct(N={N})")
        raise KeyError(key)

    def _series(self, sid) -> Evaluation:
        """Integral or relational route for the four catalog series."""
        mp = self.ctx.mp
        if sid == "L1_III":
            e = self.integral("arcsin_over_sqrt")
            return Evaluation(e.value, e.work, "integral")
        if sid == "L1_IV":
            e = self.integral("l1_iv_gf")
            return Evaluation(e.value, e.work, "integral")
        if sid == "THM_I":
            iv, iii = self._series_eval("L1_IV"), self._series_eval("L1_III")
            q = self.integral("l2_iii")
            z2 = zeta_int(2, self.ctx)
            value = iv.value / 4 + mp.mpf(3) / 4 * z2 * iii.value + 2 * q.value
            return Evaluation(value, iv.work + iii.work + q.work, "relational(REL_I,L1_IV,L2_III)")
        if sid == "THM_II":
            q = self.integral("l3_ii")
            th = self._series_eval("THM_I")
            return Evaluation(4 * q.value - th.value, q.work + th.work, "relational(REL_II,L3_II,THM_I)")
        raise UnknownIdError(sid)

    def _series_eval(self, sid):
        return self.get(("series", sid))


# --------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class Strategy:
    kind: str  # SeriesAccelerated | SeriesDirectWithTail | Quadrature | ExpressionTree | PointwiseSample
    evaluate: Callable[[Workspace], Evaluation]
    label: str = ""


@dataclass(frozen=True)
class Identity:
    id: str
    family: str
    description: str
    lhs: Strategy
    rhs: object  # ClosedForm or Strategy
    anchor: str
    param: object = None
    series: str | None = None  # series id when the lhs is a catalog series
    weight: int | None = None


def _quad(name, k=None, label=None):
    return Strategy("Quadrature", lambda ws: ws.integral(name, k), label or "quadrature")


def _expr(fn, label):
    return Strategy("ExpressionTree", lambda ws: Evaluation(fn(ws), 0, label), label)


def _series_strategy(sid):
    return Strategy("SeriesAccelerated", lambda ws: ws.get(("series", sid)), "series")


def _sum_strategy(*parts):
    """Linear combination of other strategies' values."""
    def run(ws):
        evs = [(c, s.evaluate(ws)) for c, s in parts]
        value = sum((ws.ctx.mpf(c) * e.value for c, e in evs), ws.ctx.mp.mpf(0))
        return Evaluation(value, sum(e.work for _, e in evs), "quadrature")
    return run


_F = Fraction
CF = ClosedForm.of

THM_I_FORM = CF(G_SQ=-8, ZETA4=11, LI4_HALF=2, LN2_SQ_ZETA2=1, LN2_P4=_F(1, 12))
THM_II_FORM = CF(G_SQ=8, ZETA4=_F(103, 2), LI4_HALF=-22, LN2_SQ_ZETA2=7, LN2_P4=_F(-11, 12))
L1_IV_FORM = CF(ZETA4=-1, LI4_HALF=8, LN2_SQ_ZETA2=4, LN2_P4=_F(1, 3))
L1_III_FORM = CF(ZETA2=3)
L2_III_FORM = CF(ZETA4=_F(45, 16), G_SQ=-4)
L3_I_FORM = CF(ZETA4=_F(485, 512), LI4_HALF=_F(-5, 16), LN2_SQ_ZETA2=_F(1, 8), LN2_P4=_F(-5, 384))
L3_II_FORM = CF(ZETA4=_F(125, 8), LI4_HALF=-5, LN2_SQ_ZETA2=2, LN2_P4=_F(-5, 24))
ATAN3_FORM = CF(ZETA4=_F(45, 512))
XCOS_FORM = CF(ZETA2=_F(3, 2), ONE=-2)
REL_I_FORM = CF(G_SQ=8, ZETA4=_F(-45, 4))

SERIES_FORMS = {
    "L1_III": L1_III_FORM,
    "L1_IV": L1_IV_FORM,
    "THM_I": THM_I_FORM,
    "THM_II": THM_II_FORM,
}

_X_SAMPLES_GF = (("1/10", _F(1, 10)), ("1/2", _F(1, 2)), ("9/10", _F(9, 10)))
_X_SAMPLES_L2I = (("pi/6", 6), ("pi/4", 4), ("pi/3", 3))


def _gf_lhs(x):
    def run(ws):
        K = gf_terms_needed(x, ws.ctx)
        return Evaluation(gf_series(ws.ctx.mpf(x), K, ws.ctx), K, f"pointwise-series(K={K})")
    return Strategy("PointwiseSample", run, "generating series")


def _l2i_lhs(div):
    def run(ws):
        mp = ws.ctx.mp
        x = mp.pi / div
        return Evaluation(mp.tan(x) * mp.log(mp.sin(x)), 0, "tan(x)ln(sin x)")
    return Strategy("ExpressionTree", run, "tan(x)ln(sin x)")


def _l2i_rhs(div):
    def run(ws):
        mp = ws.ctx.mp
        e = ws.integral("l2_i_summed", mp.pi / div)
        return Evaluation(-e.value.imag, e.work, "summed expansion by quadrature")
    return Strategy("PointwiseSample", run, "-sum c_k sin(2kx)")


def _build_catalog():
    out = []
    for k in range(1, 11):
        h1, h2 = harmonic(k), harmonic(k, 2)
        out.append(Identity(
            f"L1_I[{k}]", "L1_I", "int_0^1 x^(k-1) ln^2(1-x) dx = (H_k^2 + H_k^(2))/k",
            _quad("l1_i", k), ClosedForm.rational((h1 * h1 + h2) / k), "moment of ln^2(1-x)", k,
        ))
    for label, x in _X_SAMPLES_GF:
        out.append(Identity(
            f"L1_II[{label}]", "L1_II", "(1/2) sum 4^k x^(2k-1)/(k C(2k,k)) = arcsin(x)/sqrt(1-x^2)",
            _gf_lhs(x), _expr(lambda ws, x=x: gf_closed(ws.ctx.mpf(x), ws.ctx), "arcsin(x)/sqrt(1-x^2)"),
            "arcsine generating function", x,
        ))
    out.append(Identity(
        "L1_III", "L1_III", "sum 4^k/(k^2 C(2k,k)) = 3 zeta(2)",
        _series_strategy("L1_III"), L1_III_FORM, "weight-2 base sum", series="L1_III", weight=2,
    ))
    out.append(Identity(
        "L1_IV", "L1_IV", "sum 4^k H_k^(2)/(k^2 C(2k,k)) = -zeta(4) + 8 Li4(1/2) + 4 ln^2 2 zeta(2) + ln^4 2/3",
        _series_strategy("L1_IV"), L1_IV_FORM, "weight-4 H^(2) sum", series="L1_IV", weight=4,
    ))
    for label, div in _X_SAMPLES_L2I:
        out.append(Identity(
            f"L2_I[{label}]", "L2_I", "tan(x) ln(sin x) = -sum c_k sin(2kx)",
            _l2i_lhs(div), _l2i_rhs(div), "Fourier expansion of tan ln sin", label,
        ))
    for k in range(0, 9):
        lhs = (
            _expr(lambda ws: ws.ctx.mp.mpf(0), "zero integrand")
            if k == 0 else _quad("x2_csc_sin2k", k)
        )
        out.append(Identity(
            f"L2_II[{k}]", "L2_II", "I_k = int_0^(pi/2) x^2 csc(x) sin(2kx) dx (telescoped)",
            lhs, csc_sine_moment(k), "telescoped x^2 csc sine moments", k,
        ))
    out.append(Identity(
        "L2_III", "L2_III", "int_0^(pi/2) x^2 sec(x) ln(sin x) dx = (45/16) zeta(4) - 4 G^2",
        _quad("l2_iii"), L2_III_FORM, "sec-weighted log-sine integral",
    ))
    out.append(Identity(
        "L3_I", "L3_I", "Re Li4(1+i) closed form",
        Strategy("Quadrature", _li4_re, "Re Li4(1+i) by quadrature"), L3_I_FORM, "Re Li4 at 1+i",
    ))
    out.append(Identity(
        "L3_II", "L3_II", "int_0^(pi/2) x ln^2(1 - sin x) dx closed form",
        _quad("l3_ii"), L3_II_FORM, "ln^2(1 - sin x) moment",
    ))
    out.append(Identity(
        "EQ_2_1", "EQ_2_1", "x -> 2 arctan(x) substitution in the ln^2(1 - sin x) integral",
        _quad("l3_ii"), _quad("eq_2_1", label="quadrature (x-form)"), "half-angle tangent substitution",
    ))
    out.append(Identity(
        "EQ_2_2", "EQ_2_2", "(16/3) int arctan^3/(1+x^2) + (16/3) Im int ln^3((1-x)/(1-ix))/(1+x^2)",
        _quad("l3_ii"), Strategy("Quadrature", _eq22_rhs, "decomposed quadrature"), "arctan/complex-log split",
    ))
    out.append(Identity(
        "ATAN3", "ATAN3", "int_0^1 arctan^3(x)/(1+x^2) dx = (45/512) zeta(4)",
        _quad("atan3"), ATAN3_FORM, "arctan cube integral",
    ))
    for k in range(1, 11):
        out.append(Identity(
            f"L4_K[{k}]", "L4_K", "int_0^(pi/2) x^2 cos^(2k-1)(x) dx closed form",
            _quad("x2_cos_pow", k), x2_cos_power_moment(k), "x^2 cos power moments", k,
        ))
    for n in range(1, 11):
        out.append(Identity(
            f"WALLIS_K[{n}]", "WALLIS_K", "int_0^(pi/2) cos^(2n-1)(x) dx = (1/2) 4^n/(n C(2n,n))",
            _quad("cos_pow", n), ClosedForm.rational(wallis(n)), "Wallis-type moments", n,
        ))
    out.append(Identity(
        "XCOS", "XCOS", "int_0^(pi/2) x^2 cos(x) dx = (3/2) zeta(2) - 2",
        _quad("x2_cos_pow", 1), XCOS_FORM, "Wallis-type moments",
    ))
    out.append(Identity(
        "REL_I", "REL_I", "(1/4) sum 4^k H_k^(2)/(k^2 C) - sum 4^k H_2k^(2)/(k^2 C) = 8 G^2 - (45/4) zeta(4)",
        Strategy("Quadrature", lambda ws: ws.get(("rel_I",)), "generating-function integrals"),
        REL_I_FORM, "relation between the H^(2) sums",
    ))
    out.append(Identity(
        "REL_II", "REL_II", "sum 4^k H_2k^2/(k^2 C) + sum 4^k H_2k^(2)/(k^2 C) = 4 int_0^(pi/2) x ln^2(1 - sin x) dx",
        _quad("rel_ii_x", label="4 int arcsin(x) ln^2(1-x)/sqrt(1-x^2)"),
        Strategy("Quadrature", _sum_strategy((4, _quad("l3_ii"))), "4 int x ln^2(1 - sin x)"),
        "relation between the H^2 and H^(2) sums",
    ))
    out.append(Identity(
        "THM_I", "THM_I", "sum 4^k H_2k^(2)/(k^2 C(2k,k)) closed form",
        _series_strategy("THM_I"), THM_I_FORM, "main result, H_2k^(2) sum", series="THM_I", weight=4,
    ))
    out.append(Identity(
        "THM_II", "THM_II", "sum 4^k H_2k^2/(k^2 C(2k,k)) closed form",
        _series_strategy("THM_II"), THM_II_FORM, "main result, H_2k^2 sum", series="THM_II", weight=4,
    ))
    return tuple(out)


def _li4_re(ws):
    from .special import li4_offcut

    key = ("li4", "1+i")
    if key not in ws._memo:
        v = li4_offcut(ws.ctx.mp.mpc(1, 1), ws.ctx)
        ws._memo[key] = Evaluation(v.real, 0, "li4 quadrature")
    return ws._memo[key]


def _eq22_rhs(ws):
    a = ws.integral("atan3")
    c = ws.integral("eq_2_2_cplx")
    sixteen_thirds = ws.ctx.mpf(Fraction(16, 3))
    return Evaluation(sixteen_thirds * (a.value + c.value.imag), a.work + c.work, "quadrature")


_CATALOG = _build_catalog()
_BY_ID = {e.id: e for e in _CATALOG}
FAMILIES = tuple(dict.fromkeys(e.family for e in _CATALOG))


def catalog() -> tuple:
    return _CATALOG


def get_identity(identity_id: str) -> Identity:
    try:
        return _BY_ID[identity_id]
    except KeyError:
        raise UnknownIdError(identity_id) from None


def resolve_ids(ids) -> list[str]:
    """Expand family names and ``all`` into catalog ids, in catalog order."""
    wanted = []
    for raw in ids:
        raw = raw.strip()
        if raw == "all":
            wanted.extend(e.id for e in _CATALOG)
        elif raw in _BY_ID:
            wanted.append(raw)
        elif raw in FAMILIES:
            wanted.extend(e.id for e in _CATALOG if e.family == raw)
        else:
            raise UnknownIdError(raw)
    order = {e.id: i for i, e in enumerate(_CATALOG)}
    return sorted(dict.fromkeys(wanted), key=order.__getitem__)


# --------------------------------------------------------------------------
# reports


def format_sci(x, digits: int) -> str:
    """Scientific notation with ``digits`` significant digits."""
    if x is None:
        return "nan"
    if x == 0:
        # Decimal would carry the exponent of the zero's scale
        return "0." + "0" * (digits - 1) + "e+0" if digits > 1 else "0e+0"
    d = Decimal(_mp_str(x, digits + 5))
    return f"{d:.{digits - 1}e}"


def _mp_str(x, n):
    import mpmath

    return mpmath.nstr(x, n, strip_zeros=False) if x != 0 else "0"


def digits_agreed_from(abs_residual: str, rhs_value: str, cap: int) -> int:
    """floor(-log10(residual / max(1, |rhs|))) on the reported decimal strings."""
    with localcontext() as dctx:
        dctx.prec = 60
        res = Decimal(abs_residual)
        if res.is_nan():
            return 0
        if res == 0:
            return cap
        rhs = abs(Decimal(rhs_value)) if rhs_value != "nan" else Decimal(1)
        ratio = res / max(Decimal(1), rhs)
        return math.floor(-ratio.log10())


@dataclass
class VerificationReport:
    id: str
    method: str
    lhs_value: str
    rhs_value: str
    abs_residual: str
    digits_agreed: int
    work: int
    elapsed_seconds: float
    status: str  # pass | fail | non-converged

    def to_record(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_FIELDS}


@dataclass(frozen=True)
class VerifyOptions:
    method: str | None = None  # direct | accelerated | integral
    terms: int | None = None
    rhs_override: ClosedForm | None = None
    witness: bool = True


def _rhs_value(entry, ws, options):
    rhs = options.rhs_override if options.rhs_override is not None else entry.rhs
    if isinstance(rhs, ClosedForm):
        return Evaluation(closed_form_value(rhs, ws.ctx), 0, "closed-form")
    return rhs.evaluate(ws)


def verify(identity_id: str, ctx: PrecisionContext, options: VerifyOptions | None = None,
           workspace: Workspace | None = None) -> VerificationReport:
    """Evaluate both sides of one catalog entry and compare them.

    Series entries default to their integral/relational route at full
    precision plus an accelerated-summation witness that has to agree to
    8 digits.  ``options.method`` forces ``direct`` (partial sum with a
    certified tail bound) or ``accelerated`` (witness only, graded at
    8 digits).
    """
    options = options or VerifyOptions()
    entry = get_identity(identity_id)
    ws = workspace or Workspace(ctx)
    digits = ctx.target_digits
    start = time.perf_counter()
    try:
        rhs = _rhs_value(entry, ws, options)
        method = options.method if entry.series else None
        extra_ok, note = True, ""
        if method in (None, "integral"):
            lhs = entry.lhs.evaluate(ws)
            label = lhs.note or entry.lhs.label
            if entry.series and options.witness:
                w = ws.get(("witness", entry.series))
                wres = abs(w.value - rhs.value)
                wdig = digits_agreed_from(format_sci(wres, digits), format_sci(rhs.value, digits), ctx.working_digits)
                extra_ok = wdig >= min(WITNESS_DIGITS, digits)
                note = f"+witness[{w.note}: {wdig} digits]"
                lhs = Evaluation(lhs.value, lhs.work + w.work, lhs.note)
        elif method == "accelerated":
            lhs = ws.get(("witness", entry.series)) if options.terms is None else Evaluation(
                *_accel(entry.series, ctx, options.terms))
            label = f"accelerated:{lhs.note}"
            digits = min(WITNESS_DIGITS, digits)
        elif method == "direct":
            N = options.terms or DEFAULT_DIRECT_TERMS
            lhs = ws.get(("direct", entry.series, N))
            bound = tail_bound(entry.series, N, ctx)
            # certified bracket S_N < S < S_N + tail
            extra_ok = lhs.value < rhs.value < lhs.value + bound
            digits = max(0, math.floor(-ctx.mp.log10(bound)))
            label = f"direct(N={N}, tail<={format_sci(bound, 3)})"
        else:
            raise ValueError(f"unknown method {method!r}")
        residual = abs(lhs.value - rhs.value)
        res_s = format_sci(residual, ctx.target_digits)
        rhs_s = format_sci(rhs.value, ctx.target_digits)
        agreed = digits_agreed_from(res_s, rhs_s, ctx.working_digits)
        passed = Decimal(res_s) < Decimal(10) ** (-digits) and extra_ok
        return VerificationReport(
            entry.id, label + note, format_sci(lhs.value, ctx.target_digits), rhs_s, res_s,
            agreed, int(lhs.work + rhs.work), time.perf_counter() - start,
            "pass" if passed else "fail",
        )
    except NonConvergenceError as exc:
        log.warning("%s: %s", entry.id, exc)
        return _failed(entry.id, f"non-converged: {exc}", start, "non-converged")
    except Apery4Error as exc:
        log.warning("%s: %s", entry.id, exc)
        return _failed(entry.id, f"error: {exc}", start, "fail")


def _accel(sid, ctx, N):
    ex = accelerated_sum(sid, ctx, N=N)
    return ex.value, N, ex.method


def _failed(entry_id, method, start, status):
    return VerificationReport(entry_id, method, "nan", "nan", "nan", 0, 0,
                              time.perf_counter() - start, status)


# one workspace per worker process
_WORKER: dict = {}


def _worker_init(target_digits, guard_digits, witness_terms):
    ctx = make_context(target_digits, guard_digits, max_digits=max(target_digits, 1))
    _WORKER["ws"] = Workspace(ctx, witness_terms)


def _worker_verify(args):
    identity_id, options = args
    ws = _WORKER["ws"]
    return verify(identity_id, ws.ctx, options, ws)


def verify_all(ctx: PrecisionContext, parallelism: int = 1, ids=("all",),
               options: VerifyOptions | None = None,
               witness_terms: int = DEFAULT_WITNESS_TERMS) -> list[VerificationReport]:
    """Verify every selected entry; reports come back in catalog order.

    ``parallelism > 1`` fans entries out to worker processes (each with
    its own memoized workspace); values do not depend on the
    distribution because every quantity is computed the same way at the
    same precision wherever it runs.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    options = options or VerifyOptions()
    selected = resolve_ids(ids)
    if parallelism == 1 or len(selected) == 1:
        ws = Workspace(ctx, witness_terms)
        return [verify(i, ctx, options, ws) for i in selected]
    with ProcessPoolExecutor(
        max_workers=parallelism,
        initializer=_worker_init,
        initargs=(ctx.target_digits, ctx.guard_digits, witness_terms),
    ) as pool:
        reports = list(pool.map(_worker_verify, [(i, options) for i in selected]))
    order = {i: n for n, i in enumerate(selected)}
    return sorted(reports, key=lambda r: order[r.id])
