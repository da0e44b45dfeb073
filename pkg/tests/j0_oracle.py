"""High-precision series oracle for the zero-order Bessel function.

Independent of the package implementation: plain Taylor series evaluated
in arbitrary precision, with working precision scaled to the argument so
the huge intermediate terms at large x cancel exactly.
"""

from mpmath import mp, mpf


def j0_series(x, min_terms=200):
    x = abs(float(x))
    dps = 40 + int(0.45 * x)
    with mp.workdps(dps):
        xm = mpf(x)
        z = -(xm * xm) / 4
        term = mpf(1)
        acc = mpf(1)
        m = 1
        while m < min_terms or abs(term) > mpf(10) ** (-35):
            term *= z / (m * m)
            acc += term
            m += 1
        return float(acc)


def j0_zero(lo, hi, tol=1e-13):
    """Bisection for a sign change of the series oracle on [lo, hi]."""
    flo = j0_series(lo)
    if flo * j0_series(hi) >= 0:
        raise ValueError("no sign change on bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if flo * j0_series(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = j0_series(lo)
    return 0.5 * (lo + hi)
