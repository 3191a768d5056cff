"""Registry of transformation and summation formulas for F^{0:3}_{1:1}(1, 1).

Every entry knows its parameter relations, its validity conditions, how to
build its right-hand side (a sum of Gamma-prefactor times pFq terms), and
how to draw random parameter sets that satisfy it.

"Negative integer" in the validity conditions is read as "nonpositive
integer": the summation formulas with N, N' allow zero except where
N != 0 is demanded explicitly.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Callable

import numpy as np

from . import hyper
from .errors import DenominatorPole, GammaPole, SamplerExhausted, SeriesError
from .hyper import PFQParams, SeriesValue, Status, eval_pfq
from .kdf import KdFParams, check_convergence, eval_kdf
from .kdf import check_denominators as kdf_check_denominators
from .numeric import (
    INT_TOL,
    Kind,
    SignedLog,
    all_exact,
    gamma_ratio,
    is_exact,
    nonpositive_int,
    pochhammer,
    pochhammer_multi,
    real_part,
    to_complex,
)

RELATION_TOL = 1e-9
TINY = 1e-300


class IdentityId(Enum):
    KDF1 = "kdf1"
    KDF2_I = "kdf2_i"
    KDF2_II = "kdf2_ii"
    KDF3 = "kdf3"
    KDF4 = "kdf4"
    RED3F2 = "red3f2"
    RES1 = "res1"
    RES2 = "res2"
    RED3F22 = "red3f22"
    RES3 = "res3"
    G1 = "g1"
    G2 = "g2"
    FI1 = "fi1"
    FI2 = "fi2"

    @classmethod
    def parse(cls, name: str) -> "IdentityId":
        key = name.strip().lower().replace("-", "_")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown identity {name!r}; choose from {', '.join(m.value for m in cls)}")


class Inapplicable(ValueError):
    def __init__(self, identity: IdentityId, report: "ConstraintReport"):
        super().__init__(f"{identity.value} does not apply: {'; '.join(report.failures())}")
        self.identity = identity
        self.report = report


class SideFailure(SeriesError):
    """Evaluation of one side of an identity failed; ``side`` is 'lhs' or 'rhs'."""

    def __init__(self, side: str, cause: Exception):
        super().__init__(f"{side} evaluation failed: {cause}")
        self.side = side
        self.cause = cause


# building blocks ---------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    label: str
    residual: Callable[[KdFParams], object]

    def holds(self, p: KdFParams) -> bool:
        r = self.residual(p)
        if is_exact(r):
            return r == 0
        return abs(to_complex(r)) <= RELATION_TOL


@dataclass(frozen=True)
class Condition:
    """A validity condition; ``check`` returns (holds, margin or None)."""

    label: str
    check: Callable[[KdFParams], tuple]


def positive(label: str, expr: Callable) -> Condition:
    def check(p):
        m = real_part(expr(p))
        return m > 0, m

    return Condition(f"Re({label}) > 0", check)


def nonpositive_integer(label: str, expr: Callable, nonzero: bool = False) -> Condition:
    def check(p):
        k = nonpositive_int(expr(p))
        return k is not None and (k > 0 or not nonzero), None

    suffix = " with N != 0" if nonzero else ""
    return Condition(f"{label} is a negative integer -N{suffix}", check)


def either_nonpositive_integer(labels: tuple, exprs: tuple) -> Condition:
    def check(p):
        return any(nonpositive_int(f(p)) is not None for f in exprs), None

    return Condition(f"{' or '.join(labels)} is a negative integer", check)


def converges(which: int) -> Condition:
    label = "d + e - a - b - c" if which == 1 else "d + e' - a' - b' - c'"

    def check(p):
        rep = check_convergence(p)
        if which == 1:
            return rep.first_ok, (None if rep.first_waived else rep.first_margin)
        return rep.second_ok, (None if rep.second_waived else rep.second_margin)

    return Condition(f"Re({label}) > 0 (waived if that index terminates)", check)


@dataclass(frozen=True)
class RhsTerm:
    """coefficient * Gamma[gamma_num / gamma_den] * series (series None means 1)."""

    coefficient: object
    gamma_num: tuple = ()
    gamma_den: tuple = ()
    series: PFQParams | None = None

    def prefactor(self) -> SignedLog:
        return gamma_ratio(self.gamma_num, self.gamma_den) * SignedLog.from_scalar(self.coefficient)


@dataclass(frozen=True)
class Identity:
    id: IdentityId
    summary: str
    relations: tuple
    conditions: tuple
    rhs: Callable[[KdFParams], list]
    draw: Callable = field(repr=False)

    def describe(self) -> str:
        lines = [f"{self.id.name}: {self.summary}"]
        lines += [f"  relation:  {r.label}" for r in self.relations]
        lines += [f"  condition: {c.label}" for c in self.conditions]
        return "\n".join(lines)


@dataclass(frozen=True)
class ConstraintReport:
    relations_satisfied: dict
    validity_conditions: dict  # label -> (holds, margin or None)

    @property
    def applicable(self) -> bool:
        return all(self.relations_satisfied.values()) and all(ok for ok, _ in self.validity_conditions.values())

    def failures(self) -> list:
        out = [f"relation {k} violated" for k, ok in self.relations_satisfied.items() if not ok]
        out += [f"condition {k} fails" for k, (ok, _) in self.validity_conditions.items() if not ok]
        return out

    def margins(self) -> list:
        return [m for _, m in self.validity_conditions.values() if m is not None]


@dataclass(frozen=True)
class IdentityEvaluation:
    id: IdentityId
    lhs: SeriesValue
    rhs: SeriesValue
    rel_err: float
    backend: str  # "exact" or "float"


@dataclass(frozen=True)
class SamplerConfig:
    """Free parameters are k/denominator in [low, high]; integer slots -N with N in [n_min, n_max]."""

    low: Fraction = Fraction(1, 2)
    high: Fraction = Fraction(6)
    denominator: int = 8
    n_min: int = 1
    n_max: int = 6
    margin: Fraction = Fraction(1, 4)
    max_rejects: int = 1000

    def free(self, rng) -> Fraction:
        lo = int(self.low * self.denominator)
        hi = int(self.high * self.denominator)
        return Fraction(int(rng.integers(lo, hi + 1)), self.denominator)

    def integer(self, rng) -> int:
        return int(rng.integers(self.n_min, self.n_max + 1))


# right-hand sides ------------------------------------------------------------------


def _rhs_kdf1(p):
    a, b, c, e, ap, bp, cp, ep, d = p.a, p.b, p.c, p.e, p.a_p, p.b_p, p.c_p, p.e_p, p.d
    s2 = d + ep - ap - bp - cp
    u, v = d + ep - ap - bp, d + ep - ap - cp
    return [RhsTerm(1, (d, ep, s2), (ap, u, v), PFQParams((a, e - b, e - c, s2), (e, u, v)))]


def _rhs_kdf2(p):
    a, b, c, e, bp, cp, ep, d = p.a, p.b, p.c, p.e, p.b_p, p.c_p, p.e_p, p.d
    return [
        RhsTerm(
            1,
            (e, e - a - b, e - a - c, e - b - c, ep, ep - bp - cp),
            (e - a, e - b, e - c, e - a - b - c, ep - bp, ep - cp),
            PFQParams((a, bp, cp, d - b - c), (d - b, d - c, 1 + bp + cp - ep)),
        )
    ]


def _kdf3_term(p):
    a, b, c, e, ap, bp, cp, ep, d = p.a, p.b, p.c, p.e, p.a_p, p.b_p, p.c_p, p.e_p, p.d
    s1 = d + e - a - b - c
    return RhsTerm(
        1,
        (d, e, a + b - d, s1),
        (a, b, e - c, d + e - a - b),
        PFQParams((ap, bp, ep - cp, s1), (ep, 1 + d - a - b, d + e - a - b)),
    )


def _rhs_kdf3(p):
    return [_kdf3_term(p)]


def _rhs_kdf4(p):
    a, b, c, e, ap, bp, cp, ep, d = p.a, p.b, p.c, p.e, p.a_p, p.b_p, p.c_p, p.e_p, p.d
    s2 = d + ep - ap - bp - cp
    first = RhsTerm(
        1,
        (d, ep, ap + bp - d, s2),
        (ap, bp, ep - cp, d + ep - ap - bp),
        PFQParams((a, b, e - c, s2), (e, 1 + d - ap - bp, d + ep - ap - bp)),
    )
    return [first, _kdf3_term(p)]


def _rhs_red3f2(p):
    a, b, c, e, cp, ep, d = p.a, p.b, p.c, p.e, p.c_p, p.e_p, p.d
    return [RhsTerm(1, (e, ep), (e - c, ep + c), PFQParams((d - a, d - b, c + cp), (d, ep + c)))]


def _rhs_res1(p):
    a, b, c, e, d = p.a, p.b, p.c, p.e, p.d
    return [RhsTerm(1, (e, e + d - a - b - c), (e - c, e + d - a - b))]


def _rhs_res2(p):
    a, b, c, e, d = p.a, p.b, p.c, p.e, p.d
    return [RhsTerm(1, (e, e + d - a - b - c, e - d), (e - a, e - b, e - c))]


def _rhs_red3f22(p):
    a, b, c, e, ap, bp, cp, ep, d = p.a, p.b, p.c, p.e, p.a_p, p.b_p, p.c_p, p.e_p, p.d
    return [RhsTerm(1, (d, e, ep), (ap, e + bp, e + cp), PFQParams((a, e - b, e - c), (e + bp, e + cp)))]


def _rhs_res3(p):
    a, b, c, e, d = p.a, p.b, p.c, p.e, p.d
    return [RhsTerm(1, (1 - a, 1 - b, e, e - d, d + e - a - b - c), (1 - d, e - a, e - b, e - c, 1 + d - a - b))]


def _depth(z) -> int:
    k = nonpositive_int(z)
    if k is None:
        raise ValueError(f"{z} is not a nonpositive integer")
    return k


def _rhs_g1(p):
    b, c, ep, d = p.b, p.c, p.e_p, p.d
    N = _depth(p.a)
    coef = pochhammer_multi([d - b, d - c, 1 + d - ep], N) / pochhammer_multi([d, d - b - c, 1 + 2 * d - b - c - ep], N)
    return [RhsTerm(coef, (ep, ep + b + c - 2 * d), (ep + b - d, ep + c - d))]


def _rhs_g2(p):
    b, c, cp, d = p.b, p.c, p.c_p, p.d
    N = _depth(p.a)
    coef = pochhammer_multi([d - b, d - c - cp], N) / pochhammer_multi([d, d - b - c], N)
    return [RhsTerm(coef, (1 + c + cp, 1 + b + c - d), (1 + c, 1 + b + c + cp - d))]


def _rhs_fi1(p):
    a, b, d = p.a, p.b, p.d
    N, Np = _depth(p.c), _depth(p.c_p)
    num = pochhammer_multi([d - a, d - b], N) * pochhammer_multi([a, b], Np)
    den = pochhammer(d, N + Np) * pochhammer(d - a - b, N) * pochhammer(a + b - d, Np)
    return [RhsTerm(num / den)]


def _rhs_fi2(p):
    a, b, d = p.a, p.b, p.d
    N, Np = _depth(p.c), _depth(p.c_p)
    num = pochhammer_multi([d - a, d - b], N + Np)
    den = pochhammer(d, N + Np) * pochhammer(d - a - b, N) * pochhammer(N, Np)
    return [RhsTerm(num / den)]


# samplers ----------------------------------------------------------------------------


def _p(**kw) -> KdFParams:
    return KdFParams(**kw)


def _draw_kdf1(rng, cfg, i):
    a, b, c, d, e, bp, cp = (cfg.free(rng) for _ in range(7))
    return _p(a=a, b=b, c=c, e=e, a_p=d - a, b_p=bp, c_p=cp, e_p=d + e - a - b - c, d=d)


def _draw_kdf2_i(rng, cfg, i):
    N = cfg.integer(rng)
    b, c, d, bp, cp, ep = (cfg.free(rng) for _ in range(6))
    a = Fraction(-N)
    return _p(a=a, b=b, c=c, e=1 - d + a + b + c, a_p=d - a, b_p=bp, c_p=cp, e_p=ep, d=d)


def _draw_kdf2_ii(rng, cfg, i):
    N, Np = cfg.integer(rng), cfg.integer(rng)
    a, b, d, bp, ep = (cfg.free(rng) for _ in range(5))
    c, cp = Fraction(-N), Fraction(-Np)
    return _p(a=a, b=b, c=c, e=1 - d + a + b + c, a_p=d - a, b_p=bp, c_p=cp, e_p=ep, d=d)


def _draw_kdf3(rng, cfg, i):
    N = cfg.integer(rng)
    free, c, d, e, cp, ep = (cfg.free(rng) for _ in range(6))
    if i % 2 == 0:
        a, b = d + N, free
    else:
        a, b = free, d + N
    return _p(a=a, b=b, c=c, e=e, a_p=d - a, b_p=d - b, c_p=cp, e_p=ep, d=d)


def _draw_kdf4(rng, cfg, i):
    a, b, c, d, e, cp, ep = (cfg.free(rng) for _ in range(7))
    return _p(a=a, b=b, c=c, e=e, a_p=d - a, b_p=d - b, c_p=cp, e_p=ep, d=d)


def _three_relations(a, b, c, d, e, cp, bp=None):
    bp = d - b if bp is None else bp
    return _p(a=a, b=b, c=c, e=e, a_p=d - a, b_p=bp, c_p=cp, e_p=d + e - a - b - c, d=d)


def _draw_red3f2(rng, cfg, i):
    a, b, c, d, e, cp = (cfg.free(rng) for _ in range(6))
    return _three_relations(a, b, c, d, e, cp)


def _draw_res1(rng, cfg, i):
    a, b, c, d, e = (cfg.free(rng) for _ in range(5))
    return _three_relations(a, b, c, d, e, -c)


def _draw_res2(rng, cfg, i):
    a, b, c, d, e = (cfg.free(rng) for _ in range(5))
    return _three_relations(a, b, c, d, e, d - c)


def _draw_red3f22(rng, cfg, i):
    a, b, c, d, e, bp = (cfg.free(rng) for _ in range(6))
    return _three_relations(a, b, c, d, e, d - b - c - bp, bp=bp)


def _draw_res3(rng, cfg, i):
    N = cfg.integer(rng)
    free, c, d, e = (cfg.free(rng) for _ in range(4))
    if i % 2 == 0:
        a, b = d + N, free
    else:
        a, b = free, d + N
    return _three_relations(a, b, c, d, e, e - c - 1)


def _draw_g1(rng, cfg, i):
    N = cfg.integer(rng)
    b, c, d, ep = (cfg.free(rng) for _ in range(4))
    a = Fraction(-N)
    return _p(a=a, b=b, c=c, e=1 + a + b + c - d, a_p=d - a, b_p=d - b, c_p=d - c, e_p=ep, d=d)


def _draw_g2(rng, cfg, i):
    N = cfg.integer(rng)
    b, c, d, cp = (cfg.free(rng) for _ in range(4))
    a = Fraction(-N)
    return _p(a=a, b=b, c=c, e=1 + a + b + c - d, a_p=d - a, b_p=d - b, c_p=cp, e_p=1 + c + cp, d=d)


def _draw_fi1(rng, cfg, i):
    N, Np = cfg.integer(rng), cfg.integer(rng)
    a, b, d = (cfg.free(rng) for _ in range(3))
    c, cp = Fraction(-N), Fraction(-Np)
    return _p(a=a, b=b, c=c, e=1 + a + b + c - d, a_p=d - a, b_p=d - b, c_p=cp, e_p=1 - a - b + cp + d, d=d)


def _draw_fi2(rng, cfg, i):
    N, Np = cfg.integer(rng), cfg.integer(rng)
    a, b, d = (cfg.free(rng) for _ in range(3))
    c, cp = Fraction(-N), Fraction(-Np)
    return _p(a=a, b=b, c=c, e=1 + a + b + c - d, a_p=d - a, b_p=d - b, c_p=cp, e_p=1 + c + cp, d=d)


# registry ------------------------------------------------------------------------------

_A_P = Relation("a' = d - a", lambda p: p.a_p - (p.d - p.a))
_B_P = Relation("b' = d - b", lambda p: p.b_p - (p.d - p.b))
_C_P_DC = Relation("c' = d - c", lambda p: p.c_p - (p.d - p.c))
_E_P = Relation("e' = d + e - a - b - c", lambda p: p.e_p - (p.d + p.e - p.a - p.b - p.c))
_UNIT = Relation("d + e - a - b - c = 1", lambda p: p.d + p.e - p.a - p.b - p.c - 1)
_E_TERM = Relation("e = 1 + a + b + c - d", lambda p: p.e - (1 + p.a + p.b + p.c - p.d))

_S1 = lambda p: p.d + p.e - p.a - p.b - p.c  # noqa: E731


def _build() -> dict:
    I = IdentityId
    entries = [
        Identity(
            I.KDF1,
            "F(1,1) = Gamma[d, e', d+e'-a'-b'-c' / a', d+e'-a'-b', d+e'-a'-c'] 4F3[a, e-b, e-c, d+e'-a'-b'-c'; e, d+e'-a'-b', d+e'-a'-c'; 1]",
            (_A_P, _E_P),
            (converges(1), converges(2), positive("a'", lambda p: p.a_p)),
            _rhs_kdf1,
            _draw_kdf1,
        ),
        Identity(
            I.KDF2_I,
            "F(1,1) = Gamma[e, e-a-b, e-a-c, e-b-c, e', e'-b'-c' / e-a, e-b, e-c, e-a-b-c, e'-b', e'-c'] 4F3[a, b', c', d-b-c; d-b, d-c, 1+b'+c'-e'; 1], case a = -N",
            (_A_P, _UNIT),
            (nonpositive_integer("a", lambda p: p.a), converges(2)),
            _rhs_kdf2,
            _draw_kdf2_i,
        ),
        Identity(
            I.KDF2_II,
            "same right-hand side as KDF2_I, case c = -N and c' = -N'",
            (_A_P, _UNIT),
            (nonpositive_integer("c", lambda p: p.c), nonpositive_integer("c'", lambda p: p.c_p)),
            _rhs_kdf2,
            _draw_kdf2_ii,
        ),
        Identity(
            I.KDF3,
            "F(1,1) = Gamma[d, e, a+b-d, d+e-a-b-c / a, b, e-c, d+e-a-b] 4F3[a', b', e'-c', d+e-a-b-c; e', 1+d-a-b, d+e-a-b; 1]",
            (_A_P, _B_P),
            (
                either_nonpositive_integer(("a'", "b'"), (lambda p: p.a_p, lambda p: p.b_p)),
                converges(1),
                converges(2),
            ),
            _rhs_kdf3,
            _draw_kdf3,
        ),
        Identity(
            I.KDF4,
            "F(1,1) = two-term sum: the KDF3 term plus its mirror with primed and unprimed rows exchanged",
            (_A_P, _B_P),
            (converges(1), converges(2), positive("1 - d + c + c'", lambda p: 1 - p.d + p.c + p.c_p)),
            _rhs_kdf4,
            _draw_kdf4,
        ),
        Identity(
            I.RED3F2,
            "F(1,1) = Gamma[e, e' / e-c, e'+c] 3F2[d-a, d-b, c+c'; d, e'+c; 1]",
            (_E_P, _A_P, _B_P),
            (positive("e'", lambda p: p.e_p), positive("e - c - c'", lambda p: p.e - p.c - p.c_p)),
            _rhs_red3f2,
            _draw_red3f2,
        ),
        Identity(
            I.RES1,
            "F(1,1) = Gamma[e, e+d-a-b-c / e-c, e+d-a-b]",
            (_E_P, _A_P, _B_P, Relation("c' = -c", lambda p: p.c_p + p.c)),
            (positive("e", lambda p: p.e), positive("d + e - a - b - c", _S1)),
            _rhs_res1,
            _draw_res1,
        ),
        Identity(
            I.RES2,
            "F(1,1) = Gamma[e, e+d-a-b-c, e-d / e-a, e-b, e-c]",
            (_E_P, _A_P, _B_P, _C_P_DC),
            (positive("e - d", lambda p: p.e - p.d), positive("d + e - a - b - c", _S1)),
            _rhs_res2,
            _draw_res2,
        ),
        Identity(
            I.RED3F22,
            "F(1,1) = Gamma[d, e, e' / a', e+b', e+c'] 3F2[a, e-b, e-c; e+b', e+c'; 1]",
            (_E_P, _A_P, Relation("d = b + c + b' + c'", lambda p: p.d - (p.b + p.c + p.b_p + p.c_p))),
            (
                positive("e'", lambda p: p.e_p),
                positive("e", lambda p: p.e),
                # the 3F2 on the right converges only when Re(a') > 0
                positive("a'", lambda p: p.a_p),
            ),
            _rhs_red3f22,
            _draw_red3f22,
        ),
        Identity(
            I.RES3,
            "F(1,1) = Gamma[1-a, 1-b, e, e-d, d+e-a-b-c / 1-d, e-a, e-b, e-c, 1+d-a-b]",
            (_E_P, _A_P, _B_P, Relation("c' = e - c - 1", lambda p: p.c_p - (p.e - p.c - 1))),
            (
                positive("d + e - a - b - c", _S1),
                either_nonpositive_integer(("d - a", "d - b"), (lambda p: p.d - p.a, lambda p: p.d - p.b)),
            ),
            _rhs_res3,
            _draw_res3,
        ),
        Identity(
            I.G1,
            "F[-N, b, c; 1-N+b+c-d | d+N, d-b, d-c; e'] = (d-b, d-c, 1+d-e')_N / (d, d-b-c, 1+2d-b-c-e')_N Gamma[e', e'+b+c-2d / e'+b-d, e'+c-d]",
            (_E_TERM, _A_P, _B_P, _C_P_DC),
            (
                nonpositive_integer("a", lambda p: p.a),
                positive("e' - N + b + c - 2d", lambda p: p.e_p + p.a + p.b + p.c - 2 * p.d),
            ),
            _rhs_g1,
            _draw_g1,
        ),
        Identity(
            I.G2,
            "F[-N, b, c; 1-N+b+c-d | d+N, d-b, c'; 1+c+c'] = (d-b, d-c-c')_N / (d, d-b-c)_N Gamma[1+c+c', 1+b+c-d / 1+c, 1+b+c+c'-d]",
            (_E_TERM, _A_P, _B_P, Relation("e' = 1 + c + c'", lambda p: p.e_p - (1 + p.c + p.c_p))),
            (
                nonpositive_integer("a", lambda p: p.a),
                positive("1 - N + b + c - d", lambda p: 1 + p.a + p.b + p.c - p.d),
            ),
            _rhs_g2,
            _draw_g2,
        ),
        Identity(
            I.FI1,
            "F[a, b, -N; 1+a+b-N-d | d-a, d-b, -N'; 1-a-b-N'+d] = (d-a, d-b)_N (a, b)_N' / ((d)_{N+N'} (d-a-b)_N (a+b-d)_N')",
            (_E_TERM, _A_P, _B_P, Relation("e' = 1 - a - b + c' + d", lambda p: p.e_p - (1 - p.a - p.b + p.c_p + p.d))),
            (nonpositive_integer("c", lambda p: p.c), nonpositive_integer("c'", lambda p: p.c_p)),
            _rhs_fi1,
            _draw_fi1,
        ),
        Identity(
            I.FI2,
            "F[a, b, -N; 1+a+b-N-d | d-a, d-b, -N'; 1-N-N'] = (d-a, d-b)_{N+N'} / ((d)_{N+N'} (d-a-b)_N (N)_N')",
            (_E_TERM, _A_P, _B_P, Relation("e' = 1 + c + c'", lambda p: p.e_p - (1 + p.c + p.c_p))),
            (nonpositive_integer("c", lambda p: p.c, nonzero=True), nonpositive_integer("c'", lambda p: p.c_p)),
            _rhs_fi2,
            _draw_fi2,
        ),
    ]
    return {entry.id: entry for entry in entries}


REGISTRY = MappingProxyType(_build())


def get(identity) -> Identity:
    if not isinstance(identity, IdentityId):
        identity = IdentityId.parse(identity)
    return REGISTRY[identity]


# operations ---------------------------------------------------------------------------


def applicable(identity, p: KdFParams) -> ConstraintReport:
    entry = get(identity)
    relations = {r.label: r.holds(p) for r in entry.relations}
    conditions = {}
    for cond in entry.conditions:
        try:
            conditions[cond.label] = cond.check(p)
        except (ValueError, ZeroDivisionError):
            conditions[cond.label] = (False, None)
    return ConstraintReport(relations, conditions)


def rhs_value(identity, p: KdFParams, tol: float = hyper.DEFAULT_TOL) -> SeriesValue:
    """Evaluate the closed form or Gamma-prefactor times pFq right-hand side."""
    entry = get(identity)
    try:
        terms = entry.rhs(p)
    except ZeroDivisionError as exc:
        raise DenominatorPole(f"vanishing Pochhammer denominator on the right-hand side ({exc})") from exc

    values, err, count = [], 0.0, 0
    all_terminated = True
    for term in terms:
        pref = term.prefactor()
        if pref.kind is Kind.INFINITE:
            raise GammaPole(f"Gamma prefactor of {entry.id.value} is infinite")
        if pref.kind is Kind.ZERO:
            values.append(pref.value())
            continue
        if term.series is None:
            values.append(pref.value())
            count += 1
            continue
        series = eval_pfq(term.series, tol)
        count += series.terms
        all_terminated &= series.status is Status.TERMINATED
        if pref.exact is not None and series.exact:
            values.append(pref.exact * series.value)
        else:
            w = pref.to_complex()
            values.append(w * complex(series))
            err += abs(w) * series.abs_err
    if all(is_exact(v) for v in values):
        return SeriesValue(sum(values, Fraction(0)), 0.0, count, Status.TERMINATED)
    cvals = [to_complex(v) for v in values]
    err += 8 * hyper.EPS * sum(abs(v) for v in cvals)
    status = Status.TERMINATED if all_terminated else Status.CONVERGED
    return SeriesValue(hyper.csum(cvals), err, count, status)


def relative_error(lhs, rhs) -> float:
    if is_exact(lhs) and is_exact(rhs):
        den = max(abs(lhs), abs(rhs))
        return 0.0 if lhs == rhs else float(abs(lhs - rhs) / den)
    l, r = to_complex(lhs), to_complex(rhs)
    return abs(l - r) / max(abs(l), abs(r), TINY)


def verify(identity, p: KdFParams, tol: float = hyper.DEFAULT_TOL) -> IdentityEvaluation:
    entry = get(identity)
    report = applicable(entry.id, p)
    if not report.applicable:
        raise Inapplicable(entry.id, report)
    try:
        lhs = eval_kdf(p, tol)
    except (SeriesError, ValueError) as exc:
        raise SideFailure("lhs", exc) from exc
    try:
        rhs = rhs_value(entry.id, p, tol)
    except (SeriesError, ValueError) as exc:
        raise SideFailure("rhs", exc) from exc
    backend = "exact" if lhs.exact and rhs.exact else "float"
    return IdentityEvaluation(entry.id, lhs, rhs, relative_error(lhs.value, rhs.value), backend)


def admissible(identity, p: KdFParams, margin=0) -> bool:
    """Applicable with every strict margin >= ``margin`` and no singular pieces."""
    entry = get(identity)
    report = applicable(entry.id, p)
    if not report.applicable or any(m < margin for m in report.margins()):
        return False
    try:
        kdf_check_denominators(p)
        terms = entry.rhs(p)
    except (DenominatorPole, ZeroDivisionError, ValueError):
        return False
    for term in terms:
        if any(nonpositive_int(z) is not None for z in term.gamma_num + term.gamma_den):
            return False
        if term.coefficient == 0:
            return False
        if term.series is not None:
            # a nonpositive-integer denominator is legal when the series stops
            # first, but the identity then holds only as a limit, not termwise
            if any(nonpositive_int(z) is not None for z in term.series.denominators):
                return False
            bound = term.series.termination
            if bound is None and real_part(term.series.exponent) < margin:
                return False
    return True


def sample_params(identity, seed: int, count: int, config: SamplerConfig | None = None) -> list:
    """Deterministic admissible parameter sets for ``identity``."""
    if count <= 0:
        raise ValueError("count must be positive")
    cfg = config or SamplerConfig()
    entry = get(identity)
    rng = np.random.default_rng([seed, zlib.crc32(entry.id.value.encode())])
    out, rejects = [], 0
    while len(out) < count:
        p = entry.draw(rng, cfg, len(out))
        if admissible(entry.id, p, cfg.margin):
            out.append(p)
            rejects = 0
        else:
            rejects += 1
            if rejects >= cfg.max_rejects:
                raise SamplerExhausted(f"{entry.id.value}: {rejects} consecutive rejections")
    return out


def kdf1_single_sum(p: KdFParams) -> SeriesValue:
    """Intermediate form behind KDF1, after the inner sum is done by Gauss.

        Gamma[d, e' / a', a+e'] * sum_m (a, e-b, e-c)_m / ((e, a+e')_m m!)
                                    * 2F1(b', c'; a+e'+m; 1)

    Needs the KDF1 relations; the m-sum converges like m^(-1-Re a').
    """
    a, b, c, e, ap, bp, cp, ep, d = (p.parameters()[k] for k in ("a", "b", "c", "e", "a_p", "b_p", "c_p", "e_p", "d"))
    pref = gamma_ratio([d, ep], [ap, a + ep])
    if pref.kind is not Kind.FINITE:
        raise GammaPole("prefactor of the single-sum form is not finite")
    g0 = hyper.gauss_2f1_unit(bp, cp, a + ep)
    if g0.kind is not Kind.FINITE:
        raise GammaPole("Gauss factor at m = 0 is not finite")
    m0 = hyper.start_checkpoint([a, b, c, d, e, ap, bp, cp, ep])
    count = m0 << hyper.RICHARDSON_DEPTH
    m = np.arange(count - 1, dtype=float)
    A, B, C, E, S = map(to_complex, (a, e - b, e - c, e, a + ep))
    BP, CP = to_complex(bp), to_complex(cp)
    ratio = (A + m) * (B + m) * (C + m) / ((E + m) * (S + m) * (m + 1))
    # Gamma[s, s-b'-c' / s-b', s-c'] advanced from s to s + 1
    ratio *= (S + m) * (S + m - BP - CP) / ((S + m - BP) * (S + m - CP))
    terms = np.empty(count, dtype=complex)
    terms[0] = g0.to_complex()
    terms[1:] = terms[0] * np.cumprod(ratio)
    value, trunc, rounding = hyper.richardson_sum(terms, ap, m0)
    w = pref.to_complex()
    return SeriesValue(w * value, abs(w) * (trunc + rounding), count, Status.CONVERGED)
