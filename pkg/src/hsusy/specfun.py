"""Special functions for the oscillator constructions.

Gamma and erf are thin wrappers around :mod:`scipy.special`.  The
hypergeometric series (``1F1`` and the generalized ``pFq``) are summed
here.  Summation runs in double precision when the partial sums do not
cancel, and falls back to exact fixed-point integer arithmetic when they do.
That fallback matters for the oscillator seeds: two ``1F1`` values of size
``e^{x^2}`` combine into a result of order one on the decaying side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .errors import NoConvergence, PoleError, PrecisionLoss

MAX_TERMS = 5000
ACCUM_TOL = 1e-14
REPORT_TOL = 1e-11
# Digits of cancellation tolerated in the double-precision path before the
# fixed-point path takes over.
DOUBLE_LOSS_DIGITS = 3.0
# Cancellation above this many digits is reported on SeriesResult.
FLAG_LOSS_DIGITS = 6.0
_GUARD_BITS = 64
_MAX_PREC_BITS = 1 << 14


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    converged: bool
    digits_lost: float = 0.0
    extended: bool = False

    @property
    def flagged(self) -> bool:
        """True when the alternating sum cancelled more than six digits."""
        return self.digits_lost > FLAG_LOSS_DIGITS


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def gamma(z: complex) -> complex:
    """Complex Gamma function.

    Raises PoleError at the non-positive integers.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.imag == 0.0:
        return complex(special.gamma(z.real))
    return complex(special.gamma(z))


def gamma_ratio(a: complex, shift: float = 0.5) -> complex:
    """Return Gamma(a + shift) / Gamma(a).

    The ratio is zero when ``a`` is a non-positive integer (1/Gamma(a)
    vanishes there).  A pole of the numerator raises PoleError.
    """
    a = complex(a)
    if _is_nonpositive_integer(a + shift):
        raise PoleError(f"Gamma(a + {shift}) has a pole for a = {a}")
    if _is_nonpositive_integer(a):
        return 0j
    return complex(np.exp(special.loggamma(a + shift) - special.loggamma(a)))


def erf(x):
    return special.erf(x)


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
    return h if h.ndim else float(h)


def hermite_coefficients(n: int) -> list[int]:
    """Integer coefficients of H_n, lowest power first."""
    prev, cur = [1], [0, 2]
    if n == 0:
        return prev
    for m in range(1, n):
        nxt = [0] * (m + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * m * c
        prev, cur = cur, nxt
    return cur


# --------------------------------------------------------------------------
# double-precision series


def _check_params(b: Sequence[complex]) -> None:
    for bj in b:
        if _is_nonpositive_integer(bj):
            raise PoleError(f"lower parameter {bj} is a non-positive integer")


def series_array(a: Sequence[complex], b: Sequence[complex], x,
                 rel_tol: float = ACCUM_TOL, max_terms: int = MAX_TERMS):
    """Sum pFq(a; b; x) termwise for every element of ``x`` at once.

    Returns ``(s, ds, abs_s, abs_ds, terms)`` where ``ds = sum n t_n`` (that
    is ``x * d/dx pFq``) and the ``abs_*`` arrays hold the sums of term
    magnitudes, used to measure cancellation.
    """
    _check_params(b)
    a = [complex(v) for v in a]
    b = [complex(v) for v in b]
    x = np.asarray(x, dtype=complex)
    t = np.ones_like(x)
    s = t.copy()
    ds = np.zeros_like(x)
    abs_s = np.ones(x.shape)
    abs_ds = np.zeros(x.shape)
    n_min = int(max([abs(v) for v in a + b] + [0.0])) + 2
    active = np.ones(x.shape, dtype=bool)
    n = 0
    while active.any():
        if n >= max_terms:
            raise NoConvergence(f"series needs more than {max_terms} terms")
        num = np.ones((), dtype=complex)
        for ai in a:
            num = num * (ai + n)
        den = complex(n + 1)
        for bj in b:
            den = den * (bj + n)
        ratio = num / den
        t = t * (ratio * x)
        n += 1
        s += t
        ds += n * t
        at = np.abs(t)
        abs_s += at
        abs_ds += n * at
        if n > n_min:
            tail_small = abs(ratio) * np.abs(x) < 0.5 * (n + 1) / n
            done = (at <= rel_tol * np.abs(s)) & tail_small
            done |= at == 0.0
            active &= ~done
    return s, ds, abs_s, abs_ds, n


# --------------------------------------------------------------------------
# exact fixed-point series


def _exp2(v: float) -> int:
    """Power of two in the denominator of the exact value of ``v``."""
    if v == 0.0:
        return 0
    return float(v).as_integer_ratio()[1].bit_length() - 1


def _scaled(v: float, k: int) -> int:
    p, q = float(v).as_integer_ratio()
    return p * ((1 << k) // q)


def dyadic(values: Sequence[complex]) -> tuple[int, list[tuple[int, int]]]:
    """Exact common-denominator form of complex doubles: ``v = (re + i im) / 2**k``."""
    vals = [complex(v) for v in values]
    k = max([_exp2(v.real) for v in vals] + [_exp2(v.imag) for v in vals] + [0])
    return k, [(_scaled(v.real, k), _scaled(v.imag, k)) for v in vals]


def _rdiv(num: int, den: int) -> int:
    return (num + (den >> 1)) // den


def fixed_series(a: Sequence[complex], b: Sequence[complex], x,
                 prec: int, max_terms: int = MAX_TERMS):
    """Sum pFq(a; b; x) in fixed point with ``prec`` fractional bits.

    Every input double is converted to its exact dyadic value, so the only
    rounding is one unit of ``2**-prec`` per term.  ``x`` may also be an
    exact dyadic triple ``(k, re, im)`` meaning ``(re + i im) / 2**k``, for
    arguments such as x**2 that a double cannot hold.  Returns integers
    ``(sr, si, dr, di, terms, max_bits)`` with ``s = (sr + i si) / 2**prec``
    and ``d = sum n t_n`` scaled the same way.
    """
    _check_params(b)
    p, q = len(a), len(b)
    if isinstance(x, tuple):
        kx, xr, xi = x
        fx = abs(complex(xr, xi)) / 2.0 ** kx if kx < 1000 else 0.0
    else:
        kx, [(xr, xi)] = dyadic([x])
        fx = abs(complex(x))
    k, ints = dyadic(list(a) + list(b))
    if kx > k:
        ints = [(r << (kx - k), i << (kx - k)) for r, i in ints]
        k = kx
    else:
        xr, xi = xr << (k - kx), xi << (k - kx)
    A, B = ints[:p], ints[p:]
    one = 1 << k
    shift = k * (q - p - 1)
    fa = [complex(v) for v in a]
    fb = [complex(v) for v in b]
    n_min = int(max([abs(v) for v in fa + fb] + [0.0])) + 2

    if xi == 0 and all(v[1] == 0 for v in ints):
        return _fixed_series_real([v[0] for v in A], [v[0] for v in B], xr, one,
                                  shift, prec, fa, fb, fx, n_min, max_terms)

    tr, ti = 1 << prec, 0
    sr, si, dr, di = tr, ti, 0, 0
    max_bits = tr.bit_length()
    n = 0
    while True:
        if n >= max_terms:
            raise NoConvergence(f"series needs more than {max_terms} terms")
        nr, ni = xr, xi
        for ar, ai in A:
            c = ar + n * one
            nr, ni = nr * c - ni * ai, nr * ai + ni * c
        den = n + 1
        for br, bi in B:
            c = br + n * one
            nr, ni = nr * c + ni * bi, ni * c - nr * bi
            den *= c * c + bi * bi
        tr, ti = tr * nr - ti * ni, tr * ni + ti * nr
        if shift >= 0:
            tr <<= shift
            ti <<= shift
        else:
            den <<= -shift
        tr, ti = _rdiv(tr, den), _rdiv(ti, den)
        n += 1
        sr += tr
        si += ti
        dr += n * tr
        di += n * ti
        mag = abs(tr) + abs(ti)
        if mag <= 2:
            if n > n_min and (mag == 0 or _ratio(fa, fb, fx, n) < 0.5):
                return sr, si, dr, di, n, max_bits
        else:
            max_bits = max(max_bits, mag.bit_length())


def _ratio(fa, fb, fx, n) -> float:
    ratio = fx / (n + 1)
    for v in fa:
        ratio *= abs(v + n)
    for v in fb:
        ratio /= abs(v + n)
    return ratio


def _fixed_series_real(A, B, xr, one, shift, prec, fa, fb, fx, n_min, max_terms):
    t = 1 << prec
    s, d = t, 0
    max_bits = t.bit_length()
    half_shift = -shift if shift < 0 else 0
    n = 0
    while True:
        if n >= max_terms:
            raise NoConvergence(f"series needs more than {max_terms} terms")
        num = xr
        for a in A:
            num *= a + n * one
        den = n + 1
        for b in B:
            den *= b + n * one
        if den < 0:
            num, den = -num, -den
        if shift >= 0:
            num <<= shift
        else:
            den <<= half_shift
        t = (t * num + (den >> 1)) // den
        n += 1
        s += t
        d += n * t
        mag = abs(t)
        if mag <= 2:
            if n > n_min and (mag == 0 or _ratio(fa, fb, fx, n) < 0.5):
                return s, 0, d, 0, n, max_bits
        else:
            max_bits = max(max_bits, mag.bit_length())


def _to_complex(re: int, im: int, prec: int) -> complex:
    scale = 1 << prec
    return complex(re / scale, im / scale)


def _bits(re: int, im: int) -> int:
    return (abs(re) + abs(im)).bit_length()


def hypergeometric_series(a: Sequence[complex], b: Sequence[complex], x: complex,
                          rel_tol: float = ACCUM_TOL,
                          max_terms: int = MAX_TERMS) -> SeriesResult:
    """pFq(a; b; x) with automatic escalation to exact arithmetic."""
    if len(a) > len(b) + 1:
        raise ValueError("only p <= q + 1 is supported")
    if len(a) == len(b) + 1 and abs(complex(x)) >= 1.0:
        raise NoConvergence("pFq with p = q + 1 needs |x| < 1")
    s, _, abs_s, _, n = series_array(a, b, np.array([x]), rel_tol, max_terms)
    s0, a0 = complex(s[0]), float(abs_s[0])
    lost = math.log10(a0 / abs(s0)) if s0 != 0 else math.inf
    if lost <= DOUBLE_LOSS_DIGITS:
        return SeriesResult(s0, n, True, lost)

    top = max(1, int(math.ceil(math.log2(a0)))) if a0 > 1 else 1
    prec = _GUARD_BITS + 53 + top
    while prec <= _MAX_PREC_BITS:
        sr, si, _, _, n, max_bits = fixed_series(a, b, x, prec, max_terms)
        sbits = _bits(sr, si)
        if sr == 0 and si == 0 and any(_is_nonpositive_integer(v) for v in a):
            return SeriesResult(0j, n, True, math.inf, True)
        if sbits >= 53 + 16 + n.bit_length():
            lost_digits = (max_bits - sbits) * math.log10(2.0)
            return SeriesResult(_to_complex(sr, si, prec), n, True,
                                max(lost_digits, 0.0), True)
        prec *= 2
    raise PrecisionLoss("cancellation in hypergeometric series exceeds the precision cap")


def kummer_series(a: complex, b: complex, x: complex,
                  rel_tol: float = ACCUM_TOL, max_terms: int = MAX_TERMS) -> SeriesResult:
    return hypergeometric_series([a], [b], x, rel_tol, max_terms)


def kummer_1f1(a: complex, b: complex, x: complex,
               rel_tol: float = ACCUM_TOL, max_terms: int = MAX_TERMS) -> complex:
    """Confluent hypergeometric function 1F1(a; b; x) by its power series."""
    return kummer_series(a, b, x, rel_tol, max_terms).value


def pfq(a: Sequence[float], b: Sequence[float], x: complex,
        rel_tol: float = ACCUM_TOL, max_terms: int = MAX_TERMS):
    """Generalized hypergeometric series pFq.

    Real parameters and argument give a float, otherwise a complex.
    """
    value = hypergeometric_series(list(a), list(b), x, rel_tol, max_terms).value
    if all(complex(v).imag == 0 for v in [*a, *b, x]):
        return value.real
    return value
