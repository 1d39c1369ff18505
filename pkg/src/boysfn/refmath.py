"""Arbitrary-precision reference values for the Boys functions.

This module is the ground truth that the fitting and kernel-testing code
is measured against, so it trades speed for verifiable accuracy: every
routine carries an explicit convergence bound, and two fully independent
evaluation routes (power series / continued fractions) are available for
cross-checking.

The Boys functions are

    F_n(x) = integral_0^1 t^(2n) exp(-x t^2) dt
           = gamma_lower(n + 1/2, x) / (2 x^(n + 1/2)),    x >= 0,

with the normalization constant

    c_n = (2n)! sqrt(pi) / (n! 2^(2n + 1)) = Gamma(n + 1/2) / 2,

so that F_n(x) -> c_n x^-(n+1/2) as x -> oo.  The auxiliary functions
Q_n are defined implicitly by the closed form

    F_n(x) = c_n / (x + Q_n(x)^(n+1/2) exp(-x))^(n+1/2).

Q_n is positive, smooth and asymptotically linear (slope alpha_n,
intercept beta_n), which is what makes it a good target for low-degree
rational fitting; see boysfn.fit.

All public entry points take a Precision and guarantee a relative error
no worse than 2^-(prec.bits - 8); internally they work with guard bits
and escalate the working precision where cancellation is predicted
(inversion of the closed form loses about x*log2(e) bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from mpmath import mp

MAX_ORDER = 64

_GUARD = 24  # working guard bits on top of any requested precision


class PrecisionError(RuntimeError):
    """An iterative method failed to meet its stated error bound."""


@dataclass(frozen=True)
class Precision:
    """Working mantissa bits of the arbitrary-precision context."""

    bits: int

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"precision must be an integer >= 64 bits, got {self.bits!r}")


@dataclass(frozen=True)
class ReferencePoint:
    """A high-precision sample (x, F_n(x), Q_n(x)) for one order n."""

    n: int
    x: object
    f: object
    q: object


@dataclass(frozen=True)
class AnalyticConstants:
    """Closed-form constants of order n: c_n, the linear asymptote of Q_n
    (slope alpha, intercept beta) and its value/slope at the origin."""

    n: int
    c: object
    alpha: object
    beta: object
    q0: object
    q1: object


@dataclass
class CutoffTable:
    """Arguments z beyond which the power-law limit c_n x^-(n+1/2) is
    accurate to b bits: entries are (n, b, z)."""

    entries: list = field(default_factory=list)

    def add(self, n, b, z):
        self.entries.append((n, b, z))

    def lookup(self, n, b):
        for en, eb, z in self.entries:
            if en == n and eb == b:
                return z
        raise KeyError(f"no cutoff tabulated for n={n}, b={b}")

    def orders(self):
        return sorted({en for en, _, _ in self.entries})


def _check_order(n):
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"order must be a non-negative integer, got {n!r}")
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds the supported maximum {MAX_ORDER}")


def _as_x(x):
    xm = mp.mpf(x)
    if not mp.isfinite(xm) or xm < 0:
        raise ValueError(f"argument must be finite and >= 0, got {x!r}")
    return xm


def c_n(n, prec=None):
    """Normalization constant c_n = (2n)! sqrt(pi) / (n! 2^(2n+1)),
    evaluated at the ambient precision unless `prec` is given."""
    _check_order(n)
    if prec is None:
        num = math.factorial(2 * n)
        den = math.factorial(n) << (2 * n + 1)
        return mp.sqrt(mp.pi) * mp.mpf(num) / mp.mpf(den)
    with mp.workprec(prec.bits + _GUARD):
        return c_n(n)


# ----------------------------------------------------------------------
# Route 1: power series / asymptotic expansion ("series route")
# ----------------------------------------------------------------------

def _series_leg(n, x):
    """F_n(x) = exp(-x) * sum_k (2x)^k / ((2n+1)(2n+3)...(2n+2k+1)).

    All terms are positive; once the term ratio drops below one the tail
    is bounded by a geometric series, which is the stopping criterion.
    """
    wp = mp.prec
    tol = mp.mpf(2) ** (-(wp - 4))
    twox = 2 * x
    term = mp.mpf(1) / (2 * n + 1)
    total = term
    k = 0
    while True:
        k += 1
        term *= twox / (2 * n + 2 * k + 1)
        total += term
        d = 2 * n + 2 * k + 3
        if twox < d:
            r = twox / d
            if term * r / (1 - r) < tol * total:
                break
        if k > 4_000_000:
            raise PrecisionError(f"series for F_{n}({x}) did not converge")
    return mp.exp(-x) * total


def _asymptotic_leg(n, x):
    """F_n(x) = c_n x^-(n+1/2) - T_n(x) for large x, where the deficit

        T_n(x) = (exp(-x)/2) * sum_j binom(n-1/2, j) j! / x^(j+1)

    comes from extending the integral to infinity.  The sum is the
    asymptotic expansion of the extension integral; its terms alternate
    once j > n - 1/2, so the remainder is bounded by the first omitted
    term.  Requires x >= 2n + 60 or so for fast descent.
    """
    wp = mp.prec
    tol = mp.mpf(2) ** (-(wp - 4))
    a = mp.mpf(2 * n + 1) / 2
    c = c_n(n)
    head = c * mp.power(x, -a)
    # The whole deficit is bounded by exp(-x)/x for x >= 2n-1; skip the
    # sum when even that is negligible.
    if mp.exp(-x) / x <= tol * head:
        return head
    nu = a - 1
    term = 1 / x
    total = term
    j = 0
    while True:
        term *= (nu - j) / x
        j += 1
        total += term
        nxt = term * (nu - j) / x
        if j > nu and abs(nxt) <= tol * abs(total):
            break
        if j > 100_000:
            raise PrecisionError(f"asymptotic expansion for F_{n}({x}) stalled")
    return head - mp.exp(-x) * total / 2


def _series_route(n, x):
    if x <= max(2 * n + 60, 256):
        return _series_leg(n, x)
    return _asymptotic_leg(n, x)


# ----------------------------------------------------------------------
# Route 2: continued fractions for the incomplete gamma pair ("cf route")
# ----------------------------------------------------------------------

def _lentz(b0, terms):
    """Evaluate b0 + K(a_m / b_m) with the modified Lentz algorithm."""
    wp = mp.prec
    tiny = mp.mpf(2) ** (-4 * wp)
    eps = mp.mpf(2) ** (-(wp - 2))
    f = b0 if b0 != 0 else tiny
    C = f
    D = mp.mpf(0)
    hits = 0
    for k, (am, bm) in enumerate(terms):
        D = bm + am * D
        if D == 0:
            D = tiny
        C = bm + am / C
        if C == 0:
            C = tiny
        D = 1 / D
        delta = C * D
        f *= delta
        if abs(delta - 1) < eps:
            hits += 1
            if hits >= 2:
                return f
        else:
            hits = 0
    raise PrecisionError("continued fraction did not converge")


def _upper_cf_leg(n, x):
    """F_n(x) = (Gamma(a) - Gamma_upper(a, x)) / (2 x^a), a = n + 1/2,
    with the upper incomplete gamma from its Legendre continued
    fraction.  Accurate and fast for x >= a + a few; at x >= n + 20 the
    subtraction costs at most one bit."""
    a = mp.mpf(2 * n + 1) / 2

    def terms():
        j = 0
        while True:
            j += 1
            yield (j * (a - j), x + 2 * j + 1 - a)

    h = _lentz(x + 1 - a, terms())
    upper = mp.exp(-x) * mp.power(x, a) / h
    return (2 * c_n(n) - upper) / (2 * mp.power(x, a))


def _lower_cf_leg(n, x):
    """F_n(x) = gamma_lower(a, x) / (2 x^a) with the lower incomplete
    gamma evaluated from its continued fraction

        gamma(a,x) = x^a e^-x / (a - ax/(a+1 + x/(a+2 - (a+1)x/(...))))

    which converges for all x >= 0.  For x > a the fraction cancels
    internally (it reconstructs e^x), so callers must escalate the
    working precision by about (x - a) * log2(e) bits.
    """
    a = mp.mpf(2 * n + 1) / 2

    def terms():
        yield (mp.mpf(1), a)
        m = 0
        while True:
            m += 1
            yield (-(a + m - 1) * x, a + 2 * m - 1)
            yield (m * x, a + 2 * m)

    f = _lentz(mp.mpf(0), terms())
    lower = mp.exp(-x) * mp.power(x, a) * f
    return lower / (2 * mp.power(x, a))


def _cf_route(n, x):
    if x >= n + 20:
        return _upper_cf_leg(n, x)
    # escalate for the internal cancellation of the lower fraction
    extra = max(0, int(1.5 * (float(x) - n)) + 16)
    with mp.extraprec(extra):
        val = _lower_cf_leg(n, x)
    return +val


# ----------------------------------------------------------------------
# Public evaluation
# ----------------------------------------------------------------------

def boys_ref(n, x, prec):
    """Reference value of F_n(x), relative error <= 2^-(prec.bits - 8).

    Dispatches between the power series (x < n + 20) and the upper
    incomplete gamma continued fraction (x >= n + 20); both converge
    comfortably at the switch point.
    """
    _check_order(n)
    with mp.workprec(prec.bits + _GUARD):
        x = _as_x(x)
        if x == 0:
            return mp.mpf(1) / (2 * n + 1)
        if x < n + 20:
            return _series_leg(n, x)
        return _upper_cf_leg(n, x)


def boys_ref_series(n, x, prec):
    """F_n(x) by the series route only (power series, switching to the
    explicit asymptotic expansion once the series gets long)."""
    _check_order(n)
    with mp.workprec(prec.bits + _GUARD):
        x = _as_x(x)
        if x == 0:
            return mp.mpf(1) / (2 * n + 1)
        return _series_route(n, x)


def boys_ref_cf(n, x, prec):
    """F_n(x) by the continued-fraction route only (lower fraction below
    x = n + 20, Legendre upper fraction above).  Algorithmically disjoint
    from boys_ref_series; the two agree to >= prec.bits - 12 bits."""
    _check_order(n)
    with mp.workprec(prec.bits + _GUARD):
        x = _as_x(x)
        if x == 0:
            return mp.mpf(1) / (2 * n + 1)
        return _cf_route(n, x)


def boys_downward(n, x, prec):
    """All of F_0(x) .. F_n(x) from one reference evaluation of F_n and
    the downward recursion F_m = (2x F_{m+1} + e^-x) / (2m + 1)."""
    _check_order(n)
    with mp.workprec(prec.bits + _GUARD):
        x = _as_x(x)
        out = [mp.mpf(0)] * (n + 1)
        out[n] = boys_ref(n, x, prec)
        ex = mp.exp(-x)
        for m in range(n - 1, -1, -1):
            out[m] = (2 * x * out[m + 1] + ex) / (2 * m + 1)
        return out


@lru_cache(maxsize=None)
def _constants_cached(n, bits):
    with mp.workprec(bits + _GUARD):
        c = c_n(n)
        cnext = c_n(n + 1)
        expo = mp.mpf(2) / (2 * n + 1)
        alpha = mp.power(2 * cnext, -expo)
        beta = alpha * (2 * n - 1) / (2 * n + 1)
        g = (2 * n + 1) * c
        q0 = mp.power(g, 2 * expo / (2 * n + 1))
        q1 = (2 * q0 / (2 * n + 1)) * (mp.mpf(2 * n + 5) / (2 * n + 3) - mp.power(g, -expo))
        return AnalyticConstants(n=n, c=c, alpha=alpha, beta=beta, q0=q0, q1=q1)


def constants(n, prec):
    """Closed-form constants of order n (c_n, alpha_n, beta_n, Q_n(0),
    Q_n'(0)).  Factorials are exact integers, so the only rounding is
    the final one at working precision."""
    _check_order(n + 1)  # alpha_n needs c_{n+1}
    return _constants_cached(n, prec.bits)


def q_of_x(n, x, prec):
    """Q_n(x) by inverting the closed form:

        Q_n(x) = [e^x ((c_n / F_n(x))^(2/(2n+1)) - x)]^(2/(2n+1)).

    The inner difference equals Q^(n+1/2) e^-x and therefore loses about
    x*log2(e) bits against x; the working precision is escalated ahead
    of time and the actual loss is re-measured afterwards, retrying at
    higher precision if the result kept fewer than prec.bits good bits.
    """
    _check_order(n)
    with mp.workprec(prec.bits + _GUARD):
        x = _as_x(x)
    if x == 0:
        return constants(n, prec).q0
    target = prec.bits + _GUARD
    extra = int(1.45 * float(x)) + 48
    for _ in range(4):
        wp = target + extra
        with mp.workprec(wp):
            expo = mp.mpf(2) / (2 * n + 1)
            f = boys_ref(n, x, Precision(max(wp - _GUARD, 64)))
            g = mp.power(c_n(n) / f, expo)
            d = g - x
            if d > 0:
                lost = int(mp.log(g / d, 2)) + 1 if d < g else 0
                if wp - lost >= target:
                    q = mp.power(mp.exp(x) * d, expo)
                    with mp.workprec(target):
                        return +q
            # not enough bits survived the cancellation: escalate
            extra = max(extra * 2, extra + int(1.45 * float(x)) + 64)
    raise PrecisionError(f"q_of_x({n}, {x}) kept losing precision after escalation")


def q_grid(n, xs, prec):
    """ReferencePoints (x, F_n(x), Q_n(x)) for an ascending list of x."""
    _check_order(n)
    pts = []
    last = None
    for x in xs:
        xm = _as_x(x)
        if last is not None and xm < last:
            raise ValueError("grid must be sorted ascending")
        last = xm
        f = boys_ref(n, xm, prec)
        q = q_of_x(n, xm, prec)
        pts.append(ReferencePoint(n=n, x=xm, f=f, q=q))
    return pts


def cutoff_solve(n, b, prec):
    """Solve (z^(n+1/2)/c_n) F_n(z) = 1 - 2^-b for z.

    The left side is the regularized lower incomplete gamma P(n+1/2, z),
    monotone increasing to 1, so the root is simple; a log-based initial
    guess plus safeguarded Newton converges in a handful of steps.  The
    residual of the returned z is below 2^-(prec.bits - 16).
    """
    _check_order(n)
    if not 1 <= b <= prec.bits - 16:
        raise ValueError(f"need 1 <= b <= prec.bits - 16, got b={b}")
    wp = prec.bits + 2 * _GUARD
    with mp.workprec(wp):
        a = mp.mpf(2 * n + 1) / 2
        c = c_n(n)
        gamma_a = 2 * c
        eps = mp.mpf(2) ** (-b)
        ln2 = mp.log(2)

        def p_reg(z):
            f = boys_ref(n, z, Precision(wp - _GUARD))
            return mp.power(z, a) * f / c

        def resid(z):
            return p_reg(z) - (1 - eps)

        # initial guess from Q(a,z) ~ e^-z z^(a-1)/Gamma(a) = 2^-b
        z = mp.mpf(b) * ln2 + a
        for _ in range(40):
            znew = b * ln2 + (a - 1) * mp.log(z) - mp.log(gamma_a)
            if znew < a / 2 + 1:
                znew = a / 2 + 1
            if abs(znew - z) < mp.mpf("0.5"):
                z = znew
                break
            z = znew
        # bracket the root
        lo, hi = z, z
        while resid(lo) > 0:
            lo = lo / 2
        while resid(hi) < 0:
            hi = hi * 2
        z = (lo + hi) / 2
        tol = mp.mpf(2) ** (-(prec.bits - 20))
        for _ in range(200):
            r = resid(z)
            if abs(r) <= tol:
                break
            if r > 0:
                hi = z
            else:
                lo = z
            dp = mp.exp(-z) * mp.power(z, a - 1) / gamma_a
            step = r / dp
            znew = z - step
            if not (lo < znew < hi):
                znew = (lo + hi) / 2
            z = znew
        else:
            raise PrecisionError(f"cutoff solve stalled for n={n}, b={b}")
        return +z


def cutoff_table(ns, bs, prec):
    """Tabulate cutoff_solve over orders `ns` and bit targets `bs`."""
    table = CutoffTable()
    for n in ns:
        for b in sorted(bs):
            table.add(n, b, cutoff_solve(n, b, prec))
    return table


def fig1_samples(n_max, xs, prec):
    """Rows (x, Q_0(x), ..., Q_{n_max}(x)) for plotting the Q curves."""
    _check_order(n_max)
    rows = []
    for x in xs:
        xm = _as_x(x)
        rows.append([xm] + [q_of_x(n, xm, prec) for n in range(n_max + 1)])
    return rows


def fig1_tsv(n_max, xs, prec):
    """fig1_samples rendered as tab-separated text, one row per x, with
    a digit count matching the requested precision."""
    digits = int(prec.bits * 0.30103) + 2
    lines = ["\t".join(["x"] + [f"Q{n}" for n in range(n_max + 1)])]
    for row in fig1_samples(n_max, xs, prec):
        lines.append("\t".join(mp.nstr(v, digits) for v in row))
    return "\n".join(lines) + "\n"
