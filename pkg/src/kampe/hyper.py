"""Generalized hypergeometric series pFq and the classical closed forms.

Terminating series are summed term by term (exactly for rational input).
Non-terminating series at argument 1 with p = q + 1 decay only like
m**(-1 - s), s = Re(sum(den) - sum(num)), so plain truncation is useless
for small s.  Their partial sums have the expansion

    S - S_M = M**(-s) * (b0 + b1/M + b2/M**2 + ...)

with s known, which :func:`richardson_sum` eliminates level by level on
checkpoints M0, 2 M0, 4 M0, ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DenominatorPole, NoConvergence
from .numeric import (
    SignedLog,
    all_exact,
    as_scalar,
    gamma_ratio,
    is_exact,
    nonpositive_int,
    pochhammer,
    pochhammer_multi,
    real_part,
    to_complex,
)

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-14
DEFAULT_MAX_TERMS = 100_000
RICHARDSON_DEPTH = 8
_DIRECT_CHUNK = 512


class Status(Enum):
    TERMINATED = "terminated_exactly"
    CONVERGED = "converged"
    NO_CONVERGENCE = "no_convergence"


@dataclass(frozen=True)
class SeriesValue:
    value: object
    abs_err: float
    terms: int
    status: Status

    @property
    def exact(self) -> bool:
        return is_exact(self.value)

    def __complex__(self) -> complex:
        return to_complex(self.value)


@dataclass(frozen=True)
class PFQParams:
    numerators: tuple
    denominators: tuple
    argument: object = 1

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(as_scalar(z) for z in self.numerators))
        object.__setattr__(self, "denominators", tuple(as_scalar(z) for z in self.denominators))
        object.__setattr__(self, "argument", as_scalar(self.argument))

    @property
    def termination(self) -> int | None:
        return termination_index(self.numerators)

    @property
    def exponent(self):
        """sum(den) - sum(num): the decay exponent at unit argument."""
        return sum(self.denominators, 0) - sum(self.numerators, 0)


def termination_index(numerators: Sequence) -> int | None:
    bounds = [k for k in map(nonpositive_int, numerators) if k is not None]
    return min(bounds) if bounds else None


def check_denominators(denominators: Sequence, bound: int | None, what: str = "denominator") -> None:
    """Enforce the pole-before-termination rule.

    A denominator -k is legal only if the summation stops at an index
    <= k, i.e. before (-k)_n first vanishes at n = k + 1.
    """
    for w in denominators:
        k = nonpositive_int(w)
        if k is None:
            continue
        if bound is None:
            raise DenominatorPole(f"{what} {w} is a nonpositive integer and the series does not terminate")
        if bound > k:
            raise DenominatorPole(
                f"{what} {w} vanishes at index {k + 1}, before termination at index {bound}"
                " (pole-before-termination)"
            )


def term_ratios(numerators, denominators, z, count: int) -> np.ndarray:
    """Ratios t_{m+1}/t_m for m = 0 .. count-1, vectorized."""
    m = np.arange(count, dtype=float)
    r = np.full(count, complex(to_complex(z)))
    for a in numerators:
        r *= to_complex(a) + m
    for b in denominators:
        r /= to_complex(b) + m
    r /= m + 1.0
    return r


def series_terms(numerators, denominators, z, count: int, first=1.0) -> np.ndarray:
    t = np.empty(count, dtype=complex)
    t[0] = first
    if count > 1:
        t[1:] = first * np.cumprod(term_ratios(numerators, denominators, z, count - 1))
    return t


def csum(values) -> complex:
    """Correctly rounded sum of a complex array (fsum on each part)."""
    v = np.asarray(values, dtype=complex)
    return complex(math.fsum(v.real), math.fsum(v.imag))


def richardson_sum(terms: np.ndarray, exponent, m0: int, depth: int = RICHARDSON_DEPTH):
    """Extrapolate partial sums of ``terms`` to the infinite sum.

    ``terms`` must hold at least ``m0 * 2**depth`` entries whose partial sums
    obey S - S_M = M**(-exponent) * (b0 + b1/M + ...).  Returns
    (estimate, truncation_error, rounding_error).  The truncation error is
    the change made by the last elimination level; the rounding error is the
    floating-point floor set by the largest partial sum, amplified by the
    elimination weights.
    """
    s = complex(exponent)
    checkpoints = [m0 << j for j in range(depth + 1)]
    if len(terms) < checkpoints[-1]:
        raise ValueError("not enough terms for the requested depth")
    partial, pieces, lo = [], [], 0
    for c in checkpoints:
        pieces.append(csum(terms[lo:c]))
        lo = c
        partial.append(csum(pieces))
    scale = float(np.max(np.abs(np.cumsum(terms[: checkpoints[-1]]))))
    column = partial
    previous = column
    amplification = 1.0
    for k in range(depth):
        f = 2.0 ** (-(s + k))
        previous = column
        column = [(column[i + 1] - f * column[i]) / (1 - f) for i in range(len(column) - 1)]
        amplification *= abs(1 + f) / abs(1 - f)
    estimate = column[0]
    return estimate, abs(estimate - previous[-1]), 4 * EPS * scale * amplification


def start_checkpoint(params: Sequence, floor: int = 16) -> int:
    big = max([abs(to_complex(z)) for z in params] + [1.0])
    return max(floor, 1 << int(math.ceil(math.log2(4 * big + 1))))


def _sum_terminating(nums, dens, z, bound: int) -> SeriesValue:
    exact = all_exact(nums) and all_exact(dens) and is_exact(z)
    term = Fraction(1) if exact else 1 + 0j
    terms = [term]
    for m in range(bound):
        num = 1
        for a in nums:
            num *= a + m
        den = m + 1
        for b in dens:
            den *= b + m
        term = term * num * z / den
        terms.append(term)
    if exact:
        return SeriesValue(sum(terms, Fraction(0)), 0.0, bound + 1, Status.TERMINATED)
    arr = np.array([to_complex(t) for t in terms])
    err = 4 * EPS * (len(nums) + len(dens) + 2) * float(np.sum(np.abs(arr)))
    return SeriesValue(csum(arr), err, bound + 1, Status.TERMINATED)


def _sum_direct(nums, dens, z, tol: float, max_terms: int, tail_factor: float) -> SeriesValue:
    """Plain summation until three consecutive terms are negligible."""
    z = to_complex(z)
    nums = [to_complex(a) for a in nums]
    dens = [to_complex(b) for b in dens]
    term = 1 + 0j
    acc = [term]
    total = term
    quiet = 0
    for m in range(max_terms - 1):
        num = z
        for a in nums:
            num *= a + m
        den = m + 1.0
        for b in dens:
            den *= b + m
        term = term * num / den
        acc.append(term)
        total += term
        if abs(term) * tail_factor <= tol * abs(total):
            quiet += 1
            if quiet >= 3:
                value = csum(acc)
                err = abs(term) * tail_factor + 4 * EPS * float(np.sum(np.abs(acc)))
                return SeriesValue(value, err, len(acc), Status.CONVERGED)
        else:
            quiet = 0
    partial = SeriesValue(csum(acc), abs(term) * len(acc) ** 2, len(acc), Status.NO_CONVERGENCE)
    raise NoConvergence(f"series not settled after {max_terms} terms", partial)


def _sum_unit(nums, dens, tol: float, max_terms: int) -> SeriesValue:
    s = complex(to_complex(sum(dens, 0) - sum(nums, 0)))
    if s.real <= 0:
        raise NoConvergence(f"unit-argument series diverges: Re(sum(den) - sum(num)) = {s.real:g} <= 0")

    n = min(_DIRECT_CHUNK, max_terms)
    t = series_terms(nums, dens, 1, n)
    total = csum(t)
    tail = abs(t[-1]) * n / s.real
    if n >= 3 and abs(t[-1]) < abs(t[-2]) and tail <= tol * abs(total):
        err = tail + 4 * EPS * float(np.sum(np.abs(t)))
        return SeriesValue(total, err, n, Status.CONVERGED)

    m0 = start_checkpoint(list(nums) + list(dens))
    best = None
    while (m0 << RICHARDSON_DEPTH) <= max_terms:
        count = m0 << RICHARDSON_DEPTH
        t = series_terms(nums, dens, 1, count)
        if not np.all(np.isfinite(t)):
            break
        value, trunc, rounding = richardson_sum(t, s, m0)
        best = SeriesValue(value, trunc + rounding, count, Status.CONVERGED)
        if trunc <= max(tol * abs(value), rounding):
            return best
        m0 *= 2
    if best is not None and best.abs_err <= 1e-8 * max(abs(best.value), 1e-300):
        return best
    raise NoConvergence("unit-argument extrapolation did not settle within max_terms", best)


def eval_pfq(p: PFQParams, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> SeriesValue:
    """Evaluate pFq(numerators; denominators; argument)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    nums, dens, z = p.numerators, p.denominators, p.argument
    bound = termination_index(nums)
    check_denominators(dens, bound)
    if bound is not None:
        return _sum_terminating(nums, dens, z, bound)
    if z == 0:
        return SeriesValue(Fraction(1) if is_exact(z) else 1 + 0j, 0.0, 1, Status.CONVERGED)

    r = abs(to_complex(z))
    extra = len(nums) - len(dens)
    if extra <= 0:
        return _sum_direct(nums, dens, z, tol, max_terms, 1.0)
    if extra > 1:
        raise NoConvergence(f"{len(nums)}F{len(dens)} diverges for nonzero argument")
    if r < 1:
        return _sum_direct(nums, dens, z, tol, max_terms, 1.0 / (1.0 - r))
    if r > 1 + 1e-15:
        raise NoConvergence(f"{len(nums)}F{len(dens)} diverges for |z| = {r:g} > 1")
    if to_complex(z) == 1:
        return _sum_unit(nums, dens, tol, max_terms)
    # elsewhere on the unit circle: conditionally convergent, no tail model
    return _sum_direct(nums, dens, z, tol, max_terms, 1.0)


def pfq(numerators, denominators, z=1, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> SeriesValue:
    return eval_pfq(PFQParams(tuple(numerators), tuple(denominators), z), tol, max_terms)


# classical summation theorems -------------------------------------------------


def gauss_2f1_unit(a, b, c) -> SignedLog:
    """2F1(a, b; c; 1) = Gamma[c, c-a-b / c-a, c-b]."""
    a, b, c = map(as_scalar, (a, b, c))
    return gamma_ratio([c, c - a - b], [c - a, c - b])


def vandermonde(N: int, b, c):
    """2F1(-N, b; c; 1) = (c-b)_N / (c)_N."""
    b, c = as_scalar(b), as_scalar(c)
    check_denominators([c], N)
    return pochhammer(c - b, N) / pochhammer(c, N)


def dixon_3f2(a, b, c) -> SignedLog:
    """Well-poised 3F2(a, b, c; 1+a-b, 1+a-c; 1).

    ``a`` must not be a nonpositive integer: there the closed form is a
    limit that depends on how 1 + a/2 and 1 + a approach their poles.
    """
    a, b, c = map(as_scalar, (a, b, c))
    if nonpositive_int(a) is not None:
        raise ValueError("dixon_3f2 needs a away from the nonpositive integers")
    h = a / 2
    return gamma_ratio([1 + h, 1 + a - b, 1 + a - c, 1 + h - b - c], [1 + a, 1 + h - b, 1 + h - c, 1 + a - b - c])


def pfaff_saalschutz(a, b, N: int, c):
    """Saalschutzian 3F2(a, b, -N; c, 1+a+b-c-N; 1) in closed form."""
    a, b, c = map(as_scalar, (a, b, c))
    check_denominators([c, 1 + a + b - c - N], N)
    return pochhammer(c - a, N) * pochhammer(c - b, N) / (pochhammer(c, N) * pochhammer(c - a - b, N))


def reverse_terminating_4f3(A, B, C, N: int, D, E, F):
    """Reverse the order of summation of 4F3(A, B, C, -N; D, E, F; 1).

    Returns (prefactor, reversed parameters) with
    prefactor * 4F3(reversed) == 4F3(original).
    """
    A, B, C, D, E, F = map(as_scalar, (A, B, C, D, E, F))
    den = pochhammer_multi([D, E, F], N)
    if den == 0:
        raise DenominatorPole("reversal prefactor has a vanishing denominator (D, E, F)_N")
    prefactor = (-1) ** N * pochhammer_multi([A, B, C], N) / den
    reversed_params = PFQParams((1 - D - N, 1 - E - N, 1 - F - N, -N), (1 - A - N, 1 - B - N, 1 - C - N), 1)
    check_denominators(reversed_params.denominators, N, "reversed denominator")
    return prefactor, reversed_params


def slater_3f2_transform(A, B, N: int, C, D):
    """3F2(A, B, -N; C, D; 1) = (C-A)_N/(C)_N * 3F2(A, D-B, -N; 1+A-C-N, D; 1)."""
    A, B, C, D = map(as_scalar, (A, B, C, D))
    check_denominators([C, D], N)
    den = pochhammer(C, N)
    prefactor = pochhammer(C - A, N) / den
    transformed = PFQParams((A, D - B, -N), (1 + A - C - N, D), 1)
    check_denominators(transformed.denominators, termination_index(transformed.numerators), "transformed denominator")
    return prefactor, transformed


def euler_2f1_transform(b, c, e, t):
    """2F1(b, c; e; t) = (1-t)**(e-b-c) * 2F1(e-b, e-c; e; t) for |t| < 1."""
    b, c, e, t = map(as_scalar, (b, c, e, t))
    if abs(to_complex(t)) >= 1:
        raise ValueError("Euler's transformation is used inside the unit disc only")
    factor = (1 - to_complex(t)) ** to_complex(e - b - c)
    return factor, PFQParams((e - b, e - c), (e,), t)


def margin(p: PFQParams) -> float:
    return real_part(p.exponent)
