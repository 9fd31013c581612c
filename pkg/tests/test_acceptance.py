"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL: ...`` line (also
repeated in the pytest terminal summary) and then asserts, so a failing
criterion shows up both as a red test and as a FAIL line.
"""

import io
import json
import math
import random
import time
from decimal import Decimal
from fractions import Fraction

import mpmath

from apery4 import cli
from apery4.ledger import (
    SERIES_FORMS,
    THM_I_FORM,
    VerifyOptions,
    Workspace,
    get_identity,
    verify,
    verify_all,
)
from apery4.numerics import agree, const_ln2, const_pi, elem, make_context
from apery4.quadrature import quad
from apery4.relations import DEFAULT_BASES, discover, reverify
from apery4.series import (
    SERIES,
    accelerated_sum,
    fourier_partial_defect,
    series_spec,
    sum_direct,
    tail_bound,
)
from apery4.special import (
    BASIS_ORDER,
    ClosedForm,
    Symbol,
    basis_value,
    catalan,
    closed_form_value,
    li4_offcut,
    log_ratio_check,
    polylog_int,
    ti_n,
    zeta_int,
)

from conftest import oracle

RESULTS: list[str] = []


def report(n, ok, detail):
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _digits(a, b):
    """Significant digits to which ``a`` matches ``b``."""
    err = abs(a - b) / max(1, abs(b))
    return EXACT if err == 0 else int(mpmath.floor(-mpmath.log10(err)))


EXACT = 10**6


def _fmt(d):
    return "exact" if d == EXACT else f"{d} digits"


# 1 --------------------------------------------------------------------------

def test_criterion_1_full_catalog():
    out = io.StringIO()
    start = time.perf_counter()
    code = cli.main(["verify", "--id", "all", "--digits", "30", "--format", "machine"], out=out)
    elapsed = time.perf_counter() - start
    recs = [json.loads(line) for line in out.getvalue().splitlines()]
    bad = [r["id"] for r in recs
           if r["status"] != "pass" or Decimal(r["abs_residual"]) >= Decimal("1e-30")]
    worst = max(Decimal(r["abs_residual"]) for r in recs)
    ok = code == 0 and len(recs) >= 19 and not bad and elapsed <= 300
    report(1, ok, f"{len(recs)} entries, {len(recs) - len(bad)} pass, worst residual "
                  f"{worst:.2e}, {elapsed:.1f} s (limit 300 s), exit {code}")


# 2 --------------------------------------------------------------------------

def test_criterion_2_main_sums():
    ctx = make_context(30)
    ws = Workspace(ctx)
    parts = []
    ok = True
    for sid, rel in (("THM_I", "REL_I"), ("THM_II", "REL_II")):
        route = ws.value(("series", sid))
        witness = accelerated_sum(sid, ctx, N=20000).value
        closed = closed_form_value(SERIES_FORMS[sid], ctx)
        w_digits, c_digits = _digits(witness, route), _digits(route, closed)
        rel_ok = verify(rel, ctx, workspace=ws).status == "pass"
        ok &= w_digits >= 8 and c_digits >= 30 and rel_ok
        parts.append(f"{sid}: witness {w_digits} digits, closed form {c_digits} digits, "
                     f"{rel} {'pass' if rel_ok else 'fail'}")
    report(2, ok, "; ".join(parts))


# 3 --------------------------------------------------------------------------

def test_criterion_3_per_k_families():
    ctx = make_context(25)
    ws = Workspace(ctx)
    ids = [f"L4_K[{k}]" for k in range(1, 11)] + [f"L2_II[{k}]" for k in range(0, 9)]
    reps = [verify(i, ctx, workspace=ws) for i in ids]
    failed = [r.id for r in reps if r.status != "pass"]
    k1 = get_identity("L4_K[1]").rhs == ClosedForm.of(ZETA2=Fraction(3, 2), ONE=-2)
    k0 = get_identity("L2_II[0]").rhs == ClosedForm() and Decimal(reps[10].lhs_value) == 0
    ok = not failed and k1 and k0
    report(3, ok, f"{len(reps) - len(failed)}/{len(reps)} pass at 25 digits; "
                  f"L4_K[1] rhs = (3/2)zeta(2) - 2: {k1}; L2_II[0] = 0: {k0}")


# 4 --------------------------------------------------------------------------

def test_criterion_4_special_values():
    ctx = make_context(30)
    pi = const_pi(ctx)
    ti3 = _digits(ti_n(3, 1, ctx), pi**3 / 32)
    with mpmath.workdps(80):
        ti2 = _digits(ti_n(2, 1, ctx), oracle("basis", "G"))
    re_li4 = li4_offcut(ctx.mp.mpc(1, 1), ctx).real
    form = ClosedForm.of(ZETA4=Fraction(485, 512), LI4_HALF=Fraction(-5, 16),
                         LN2_SQ_ZETA2=Fraction(1, 8), LN2_P4=Fraction(-5, 384))
    li4 = _digits(re_li4, closed_form_value(form, ctx))
    with mpmath.workdps(80):
        li4_ref = _digits(re_li4, oracle("li4_1_plus_i")[0])
    ok = min(ti3, ti2, li4, li4_ref) >= 30
    report(4, ok, f"Ti3(1) vs pi^3/32: {_fmt(ti3)}; Ti2(1) vs G: {_fmt(ti2)}; "
                  f"Re Li4(1+i) vs closed form: {_fmt(li4)}, "
                  f"vs reference: {_fmt(li4_ref)} (need 30)")


# 5 --------------------------------------------------------------------------

def test_criterion_5_rediscovery():
    ctx = make_context(60)
    expected = {
        "L1_IV": (-1, 8, 4, Fraction(1, 3)),
        "THM_I": (-8, 11, 2, 1, Fraction(1, 12)),
        "THM_II": (8, Fraction(103, 2), -22, 7, Fraction(-11, 12)),
    }
    ok = True
    parts = []
    for sid, coeffs in expected.items():
        start = time.perf_counter()
        d = discover(sid, DEFAULT_BASES[sid], ctx)
        took = time.perf_counter() - start
        rel = d.relation.coefficients
        normalized = (rel[next(i for i, c in enumerate(rel) if c)] > 0
                      and math.gcd(*rel) == 1)
        found = d.status == "verified" and d.candidate.coefficients(d.basis) == coeffs
        rejected = 0
        total = 0
        for sym in d.basis:
            for delta in (1, -1):
                total += 1
                bad = SERIES_FORMS[sid].with_coefficient(sym, SERIES_FORMS[sid].coefficient(sym) + delta)
                rejected += not reverify(bad, sid, ctx)[0]
        ok &= found and normalized and took <= 30 and rejected == total
        parts.append(f"{sid} {'recovered' if found else 'MISSED'} in {took:.2f} s, "
                     f"perturbations rejected {rejected}/{total}")
    report(5, ok, "; ".join(parts))


# 6 --------------------------------------------------------------------------

def _refinement_checks():
    """Double-the-digits prefix agreement for every numeric operation."""
    lo, hi = make_context(20), make_context(40)
    ops = {
        "const_pi": lambda c: const_pi(c),
        "const_ln2": lambda c: const_ln2(c),
        "zeta_int(3)": lambda c: zeta_int(3, c),
        "polylog_int(4, 0.7)": lambda c: polylog_int(4, "0.7", c),
        "polylog_int(3, -0.8)": lambda c: polylog_int(3, "-0.8", c),
        "ti_n(3, 0.6)": lambda c: ti_n(3, "0.6", c),
        "catalan": lambda c: catalan(c),
        "li4_offcut(1+i)": lambda c: li4_offcut(c.mp.mpc(1, 1), c).real,
        "integrate": lambda c: quad(c, lambda x, l, r: c.mp.log(r) ** 2 * l, 0, 1, "log_endpoint", True).value,
        "sum_direct": lambda c: sum_direct("THM_II", 200, c).values[-1],
        "accelerate": lambda c: accelerated_sum("L1_III", c, N=200).value,
        "series route": lambda c: Workspace(c).value(("series", "THM_II")),
        "closed_form_value": lambda c: closed_form_value(THM_I_FORM, c),
    }
    for fn in ("exp", "ln", "sqrt", "sin", "cos", "arcsin", "arctan"):
        ops[f"elem {fn}"] = lambda c, fn=fn: elem(fn, "0.37", c)
    for sym in BASIS_ORDER:
        ops[f"basis {sym.name}"] = lambda c, sym=sym: basis_value(sym, c)
    digits_needed = {"accelerate": 8}
    failures = [name for name, f in ops.items()
                if not agree(f(lo), f(hi), digits_needed.get(name, lo.target_digits))]
    return len(ops), failures


def test_criterion_6_property_suites():
    notes, ok = [], True

    n_ops, failures = _refinement_checks()
    ok &= not failures
    notes.append(f"refinement {n_ops - len(failures)}/{n_ops} ops")

    ctx = make_context(20)
    bracket_bad = []
    with mpmath.workdps(40):
        for sid in sorted(SERIES):
            ps = sum_direct(sid, 10**4, ctx)
            limit = oracle("series", sid)
            for N in (10**2, 10**3, 10**4):
                s = mpmath.mpf(ps.values[N - 1])
                if not s < limit < s + mpmath.mpf(tail_bound(sid, N, ctx)):
                    bracket_bad.append((sid, N))
    ok &= not bracket_bad
    notes.append(f"bracketing {12 - len(bracket_bad)}/12")

    ratio_bad = [sid for sid in SERIES if any(
        series_spec(sid).term_exact(k + 1) != series_spec(sid).term_exact(k) * series_spec(sid).ratio(k)
        for k in range(1, 201))]
    ok &= not ratio_bad
    notes.append(f"ratio recurrence k<=200 {4 - len(ratio_bad)}/4")

    c30 = make_context(30)
    rng = random.Random(20261014)
    points = [complex(-rng.uniform(0.01, 5), rng.uniform(-5, 5)) for _ in range(20)]
    worst = max(log_ratio_check(z, c30) for z in points)
    ok &= worst < mpmath.mpf(10) ** -30
    notes.append(f"complex-log defect max {mpmath.nstr(worst, 2)} on 20 points")

    fourier = []
    for div in (6, 4, 3):
        defect, bound = fourier_partial_defect(ctx.mp.pi / div, 10**5, ctx)
        fourier.append(defect <= bound and defect < 1e-4)
    ok &= all(fourier)
    notes.append(f"tan-ln-sin expansion at N=1e5 {sum(fourier)}/3 within bound")

    report(6, ok, "; ".join(notes))


# 7 --------------------------------------------------------------------------

def test_criterion_7_negative_control():
    bad = THM_I_FORM.with_coefficient(Symbol.ZETA4, 12)
    r = verify("THM_I", make_context(30), VerifyOptions(rhs_override=bad))
    ok = r.status == "fail" and r.digits_agreed <= 2
    report(7, ok, f"zeta(4) coefficient 11 -> 12 gives status {r.status}, "
                  f"digits_agreed {r.digits_agreed} (need <= 2)")


def test_parallel_run_matches_serial():
    # the parallel path is part of criterion 1's CLI contract
    ctx = make_context(30)
    serial = verify_all(ctx, ids=["THM_II", "L3_II"])
    parallel = verify_all(ctx, parallelism=2, ids=["THM_II", "L3_II"])
    assert [(r.id, r.lhs_value, r.abs_residual) for r in serial] == [
        (r.id, r.lhs_value, r.abs_residual) for r in parallel]
