"""Scalar helpers, Pochhammer symbols, log-Gamma and pole-aware Gamma ratios.

Parameters are plain Python numbers.  ``int`` and ``Fraction`` values are
treated as exact real rationals; anything else is coerced to ``complex``.
Arithmetic is written generically so the same code path yields exact
results for rational input.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

from scipy.special import loggamma as _complex_loggamma

from .errors import GammaPole

INT_TOL = 1e-9
# integer-difference matching of Gamma arguments must not absorb real offsets
_MATCH_TOL = 1e-12


def is_exact(z) -> bool:
    return isinstance(z, (int, Fraction))


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def as_scalar(z):
    """Keep ints and Fractions, coerce everything else to complex."""
    if is_exact(z):
        return Fraction(z)
    if isinstance(z, Number) or hasattr(z, "__complex__"):
        w = complex(z)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise ValueError(f"non-finite scalar {z!r}")
        return w
    raise TypeError(f"cannot use {z!r} as a scalar")


def to_complex(z) -> complex:
    return complex(float(z)) if is_exact(z) else complex(z)


def real_part(z) -> float:
    return float(z) if is_exact(z) else complex(z).real


def nonpositive_int(z, tol: float = INT_TOL) -> int | None:
    """Return k >= 0 when z == -k (within tol for inexact z), else None."""
    if is_exact(z):
        if z <= 0 and Fraction(z).denominator == 1:
            return -int(z)
        return None
    w = complex(z)
    if abs(w.imag) > tol:
        return None
    r = round(w.real)
    if r <= 0 and abs(w.real - r) <= tol:
        return -r
    return None


def integer_offset(z, w, tol: float = _MATCH_TOL) -> int | None:
    """Return k when z - w is the integer k, else None."""
    diff = z - w
    if is_exact(diff):
        diff = Fraction(diff)
        return int(diff) if diff.denominator == 1 else None
    diff = complex(diff)
    scale = max(1.0, abs(complex(z)), abs(complex(w)))
    r = round(diff.real)
    if abs(diff.imag) <= tol * scale and abs(diff.real - r) <= tol * scale:
        return r
    return None


def pochhammer(a, m: int):
    """Rising factorial (a)_m; exactly zero once a factor a + j hits zero."""
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    a = as_scalar(a)
    k = nonpositive_int(a)
    if k is not None and k < m:
        return Fraction(0) if is_exact(a) else 0j
    result = Fraction(1) if is_exact(a) else 1
    for j in range(m):
        result *= a + j
    return result


def pochhammer_multi(params: Sequence, m: int):
    result = 1
    for a in params:
        result *= pochhammer(a, m)
    return result


class Kind(Enum):
    FINITE = "finite"
    ZERO = "zero"
    INFINITE = "infinite"


@dataclass(frozen=True)
class SignedLog:
    """A number stored as log|value| and a unit phase.

    ``exact`` carries the rational value when it is known exactly; the
    float fields are still populated so either view can be used.
    """

    log_abs: float = 0.0
    phase: complex = 1 + 0j
    kind: Kind = Kind.FINITE
    exact: Fraction | None = None

    @classmethod
    def zero(cls, exact: bool = False) -> "SignedLog":
        return cls(-math.inf, 1 + 0j, Kind.ZERO, Fraction(0) if exact else None)

    @classmethod
    def infinite(cls) -> "SignedLog":
        return cls(math.inf, 1 + 0j, Kind.INFINITE, None)

    @classmethod
    def from_scalar(cls, s) -> "SignedLog":
        s = as_scalar(s)
        if s == 0:
            return cls.zero(exact=is_exact(s))
        if is_exact(s):
            q = Fraction(s)
            return cls(_log_abs_fraction(q), 1 + 0j if q > 0 else -1 + 0j, Kind.FINITE, q)
        w = complex(s)
        return cls(math.log(abs(w)), w / abs(w), Kind.FINITE, None)

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    def value(self):
        """The represented number; exact Fraction when available."""
        if self.kind is Kind.INFINITE:
            raise GammaPole("infinite Gamma ratio has no value")
        if self.exact is not None:
            return self.exact
        if self.kind is Kind.ZERO:
            return 0j
        return math.exp(self.log_abs) * self.phase

    def to_complex(self) -> complex:
        return to_complex(self.value())

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            other = SignedLog.from_scalar(other)
        if Kind.INFINITE in (self.kind, other.kind):
            return SignedLog.infinite()
        if Kind.ZERO in (self.kind, other.kind):
            return SignedLog.zero(exact=self.exact is not None and other.exact is not None)
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = self.exact * other.exact
        phase = self.phase * other.phase
        return SignedLog(self.log_abs + other.log_abs, phase / abs(phase), Kind.FINITE, exact)

    __rmul__ = __mul__

    def reciprocal(self) -> "SignedLog":
        if self.kind is Kind.ZERO:
            return SignedLog.infinite()
        if self.kind is Kind.INFINITE:
            return SignedLog.zero(exact=True)
        exact = 1 / self.exact if self.exact is not None else None
        return SignedLog(-self.log_abs, self.phase.conjugate(), Kind.FINITE, exact)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if not isinstance(other, SignedLog):
            other = SignedLog.from_scalar(other)
        return self * other.reciprocal()


def _log_abs_fraction(q: Fraction) -> float:
    num, den = abs(q.numerator), q.denominator
    if num < 2**1000 and den < 2**1000:
        return math.log(num / den)
    return math.log(num) - math.log(den)


def log_gamma(z) -> SignedLog:
    """log|Gamma(z)| with the phase of Gamma(z); Infinite at the poles."""
    z = as_scalar(z)
    if nonpositive_int(z) is not None:
        return SignedLog.infinite()
    if is_exact(z) or complex(z).imag == 0:
        x = real_part(z)
        sign = 1.0
        if x < 0 and math.floor(x) % 2 == 1:
            sign = -1.0
        return SignedLog(math.lgamma(x), complex(sign), Kind.FINITE, None)
    w = complex(_complex_loggamma(complex(z)))
    return SignedLog(w.real, cmath.exp(1j * w.imag), Kind.FINITE, None)


def _pole_pair_factor(n: int, k: int) -> Fraction:
    # lim Gamma(-n + eps) / Gamma(-k + eps)
    sign = -1 if (n - k) % 2 else 1
    return Fraction(sign * math.factorial(k), math.factorial(n))


def gamma_ratio(numerators: Sequence, denominators: Sequence) -> SignedLog:
    """Gamma(a1) Gamma(a2) ... / (Gamma(b1) Gamma(b2) ...) as a SignedLog.

    Numerator poles are paired with denominator poles by ascending order and
    replaced with the equal-epsilon limit ratio; the value then depends only
    on the multiset of pole orders.  Leftover numerator poles make the
    result Infinite, leftover denominator poles make it Zero.

    Arguments differing by an integer are cancelled into Pochhammer symbols
    first, so an all-rational input reducible that way comes back exact.
    """
    nums = [as_scalar(z) for z in numerators]
    dens = [as_scalar(z) for z in denominators]
    exact_inputs = all_exact(nums) and all_exact(dens)

    num_poles, dens_poles, num_reg, den_reg = [], [], [], []
    for z in nums:
        k = nonpositive_int(z)
        (num_poles.append(k) if k is not None else num_reg.append(z))
    for z in dens:
        k = nonpositive_int(z)
        (dens_poles.append(k) if k is not None else den_reg.append(z))

    if len(num_poles) > len(dens_poles):
        return SignedLog.infinite()
    if len(num_poles) < len(dens_poles):
        return SignedLog.zero(exact=exact_inputs)

    result = SignedLog.from_scalar(Fraction(1))
    for n, k in zip(sorted(num_poles), sorted(dens_poles)):
        result = result * SignedLog.from_scalar(_pole_pair_factor(n, k))

    # cancel integer-separated pairs into Pochhammer symbols
    leftover_dens = list(den_reg)
    leftover_nums = []
    for z in num_reg:
        match = None
        for i, w in enumerate(leftover_dens):
            k = integer_offset(z, w)
            if k is not None and (match is None or abs(k) < abs(match[1])):
                match = (i, k)
        if match is None:
            leftover_nums.append(z)
            continue
        i, k = match
        w = leftover_dens.pop(i)
        if k >= 0:
            factor = pochhammer(w, k)
        else:
            factor = 1 / pochhammer(z, -k)
        result = result * SignedLog.from_scalar(factor)

    for z in leftover_nums:
        result = result * _gamma_single(z, exact_inputs)
    for w in leftover_dens:
        result = result / _gamma_single(w, exact_inputs)
    if not exact_inputs:
        result = SignedLog(result.log_abs, result.phase, result.kind, None)
    return result


def _gamma_single(z, exact_inputs: bool) -> SignedLog:
    if exact_inputs and Fraction(z).denominator == 1 and z > 0:
        return SignedLog.from_scalar(Fraction(math.factorial(int(z) - 1)))
    return log_gamma(z)


def beta(x, y) -> SignedLog:
    return gamma_ratio([x, y], [as_scalar(x) + as_scalar(y)])
