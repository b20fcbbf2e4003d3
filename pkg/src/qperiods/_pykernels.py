"""Pure-Python reference kernels.

Always available; the compiled module ``_ckernels`` mirrors these signatures.
"""

from __future__ import annotations


def constant_term_power(exps, coeffs, d):
    """Constant coefficient of ``(sum_t coeffs[t] * x**exps[t]) ** d``.

    Partial products are pruned to exponents that can still return to the
    origin within the remaining factors, using the per-coordinate extremes of
    the exponent set.
    """
    if d == 0:
        return 1
    if not exps:
        return 0
    n = len(exps[0])
    mins = [min(e[i] for e in exps) for i in range(n)]
    maxs = [max(e[i] for e in exps) for i in range(n)]
    terms = list(zip(exps, coeffs))
    zero = (0,) * n
    cur = {zero: 1}
    for j in range(1, d + 1):
        r = d - j
        lo = [-r * m for m in maxs]
        hi = [-r * m for m in mins]
        nxt: dict = {}
        for e, a in cur.items():
            for t, c in terms:
                f = tuple(x + y for x, y in zip(e, t))
                for i in range(n):
                    if f[i] < lo[i] or f[i] > hi[i]:
                        break
                else:
                    nxt[f] = nxt.get(f, 0) + a * c
        cur = {f: v for f, v in nxt.items() if v}
        if not cur:
            return 0
    return cur.get(zero, 0)
