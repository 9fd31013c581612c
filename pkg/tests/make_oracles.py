"""Regenerate ``oracle_values.json`` from mpmath's own implementations.

Nothing here touches ``apery4``: zeta, polylog, Catalan and the
integrals come from mpmath's built-ins and ``mpmath.quad``, so the
frozen table is an independent check on the package's hand-written
kernels.  Run ``python3 tests/make_oracles.py`` to rebuild it.
"""

import json
from pathlib import Path

import mpmath

DPS = 80
OUT = Path(__file__).with_name("oracle_values.json")


def s(x):
    return mpmath.nstr(x, DPS - 5, strip_zeros=False)


def build():
    mp = mpmath.mp
    mp.dps = DPS
    z2, z4 = mpmath.zeta(2), mpmath.zeta(4)
    ln2 = mpmath.log(2)
    G = mpmath.catalan
    li4h = mpmath.polylog(4, mpmath.mpf(1) / 2)
    basis = {
        "ONE": mpmath.mpf(1),
        "ZETA2": z2,
        "ZETA4": z4,
        "LN2": ln2,
        "LN2_SQ_ZETA2": ln2**2 * z2,
        "LN2_P4": ln2**4,
        "G": G,
        "G_SQ": G**2,
        "LI4_HALF": li4h,
        "PI_CUBED": mpmath.pi**3,
    }
    series = {
        "L1_III": 3 * z2,
        "L1_IV": -z4 + 8 * li4h + 4 * ln2**2 * z2 + ln2**4 / 3,
        "THM_I": -8 * G**2 + 11 * z4 + 2 * li4h + ln2**2 * z2 + ln2**4 / 12,
        "THM_II": 8 * G**2 + mpmath.mpf(103) / 2 * z4 - 22 * li4h + 7 * ln2**2 * z2
        - mpmath.mpf(11) / 12 * ln2**4,
    }
    polylog = {
        f"{sv}:{xv}": mpmath.polylog(sv, mpmath.mpf(xv))
        for sv in (2, 3, 4)
        for xv in ("-1", "-0.75", "-0.3", "0.1", "0.5", "0.7", "0.95", "1")
    }
    li4_1pi = mpmath.polylog(4, mpmath.mpc(1, 1))
    ti = {
        f"{n}:{xv}": mpmath.nsum(
            lambda k: (-1) ** (k + 1) * mpmath.mpf(xv) ** (2 * k - 1) / (2 * k - 1) ** n, [1, mpmath.inf]
        )
        for n in (2, 3, 4)
        for xv in ("0.3", "0.6", "0.9")
    }
    integrals = {
        "x_ln2_1msin": mpmath.quad(lambda x: x * mpmath.log(1 - mpmath.sin(x)) ** 2, [0, mpmath.pi / 4, mpmath.pi / 2]),
        "x2_sec_lnsin": mpmath.quad(lambda x: x**2 / mpmath.cos(x) * mpmath.log(mpmath.sin(x)), [0, mpmath.pi / 4, mpmath.pi / 2]),
        "atan3": mpmath.quad(lambda x: mpmath.atan(x) ** 3 / (1 + x * x), [0, 1]),
    }
    return {
        "dps": DPS,
        "pi": s(mpmath.pi),
        "ln2": s(ln2),
        "basis": {k: s(v) for k, v in basis.items()},
        "series": {k: s(v) for k, v in series.items()},
        "polylog": {k: s(v) for k, v in polylog.items()},
        "ti": {k: s(v) for k, v in ti.items()},
        "li4_1_plus_i": [s(li4_1pi.real), s(li4_1pi.imag)],
        "integrals": {k: s(v) for k, v in integrals.items()},
    }


if __name__ == "__main__":
    OUT.write_text(json.dumps(build(), indent=1) + "\n")
    print(f"wrote {OUT}")
