"""The Kampe de Feriet double series F^{0:3}_{1:1}(x, y).

    F = sum_{m,n} (a,b,c)_m (a',b',c')_n / ((d)_{m+n} (e)_m (e')_n) x^m y^n / (m! n!)

Evaluation order: doubly terminating (finite double sum, exact for
rational input), singly terminating (finite outer index, inner 3F2 via
:func:`kampe.hyper.eval_pfq`), then non-terminating.  At x = y = 1 the
non-terminating case is summed over one index with the other folded into
an inner 3F2, and the slowly decaying outer tail is removed by Richardson
extrapolation.  Diagonal summation over m + n is used inside the unit
polydisc and on request.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction

import numpy as np

from .errors import DenominatorPole, NoConvergence
from .hyper import (
    EPS,
    RICHARDSON_DEPTH,
    PFQParams,
    SeriesValue,
    Status,
    csum,
    eval_pfq,
    richardson_sum,
    start_checkpoint,
)
from .numeric import all_exact, as_scalar, is_exact, nonpositive_int, real_part, to_complex

DEFAULT_TOL = 1e-14
DEFAULT_MAX_DIAGONALS = 20_000
MAX_OUTER_TERMS = 1 << 18
PARAM_NAMES = ("a", "b", "c", "e", "a_p", "b_p", "c_p", "e_p", "d")


@dataclass(frozen=True)
class KdFParams:
    """Nine parameters of F^{0:3}_{1:1} plus the argument pair.

    Row one is (a, b, c; e), row two is the primed (a_p, b_p, c_p; e_p),
    and d is the shared denominator indexed by m + n.
    """

    a: object
    b: object
    c: object
    e: object
    a_p: object
    b_p: object
    c_p: object
    e_p: object
    d: object
    x: object = 1
    y: object = 1

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, as_scalar(getattr(self, f.name)))

    @property
    def row1(self) -> tuple:
        return (self.a, self.b, self.c, self.e)

    @property
    def row2(self) -> tuple:
        return (self.a_p, self.b_p, self.c_p, self.e_p)

    def swapped(self) -> "KdFParams":
        return KdFParams(*self.row2, *self.row1, self.d, self.y, self.x)

    def with_(self, **changes) -> "KdFParams":
        return replace(self, **changes)

    def parameters(self) -> dict:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def exact(self) -> bool:
        return all_exact(self.as_dict().values())


@dataclass(frozen=True)
class TerminationProfile:
    m_bound: int | None
    n_bound: int | None

    @property
    def doubly(self) -> bool:
        return self.m_bound is not None and self.n_bound is not None


@dataclass(frozen=True)
class ConvergenceReport:
    first_margin: float
    second_margin: float
    first_waived: bool
    second_waived: bool

    @property
    def first_ok(self) -> bool:
        return self.first_waived or self.first_margin > 0

    @property
    def second_ok(self) -> bool:
        return self.second_waived or self.second_margin > 0

    @property
    def ok(self) -> bool:
        return self.first_ok and self.second_ok


def _bound(values) -> int | None:
    ks = [k for k in map(nonpositive_int, values) if k is not None]
    return min(ks) if ks else None


def termination_profile(p: KdFParams) -> TerminationProfile:
    return TerminationProfile(_bound((p.a, p.b, p.c)), _bound((p.a_p, p.b_p, p.c_p)))


def check_convergence(p: KdFParams) -> ConvergenceReport:
    """Margins Re(d+e-a-b-c) and Re(d+e'-a'-b'-c'); a finite index waives its own."""
    prof = termination_profile(p)
    return ConvergenceReport(
        real_part(p.d + p.e - p.a - p.b - p.c),
        real_part(p.d + p.e_p - p.a_p - p.b_p - p.c_p),
        prof.m_bound is not None,
        prof.n_bound is not None,
    )


def check_denominators(p: KdFParams, prof: TerminationProfile | None = None) -> None:
    """Raise DenominatorPole unless every vanishing denominator lies past termination."""
    prof = prof or termination_profile(p)
    for name, value, bound in (("e", p.e, prof.m_bound), ("e_p", p.e_p, prof.n_bound)):
        k = nonpositive_int(value)
        if k is None:
            continue
        if bound is None or bound > k:
            raise DenominatorPole(
                f"{name} = {value} vanishes at index {k + 1} before its index terminates (pole-before-termination)"
            )
    k = nonpositive_int(p.d)
    if k is not None:
        if not prof.doubly or prof.m_bound + prof.n_bound > k:
            raise DenominatorPole(f"d = {p.d} vanishes at m+n = {k + 1} before both indices terminate (pole-before-termination)")


def _check_arguments(p: KdFParams, prof: TerminationProfile) -> None:
    for name, z, bound in (("x", p.x, prof.m_bound), ("y", p.y, prof.n_bound)):
        if bound is None and abs(to_complex(z)) > 1:
            raise ValueError(f"|{name}| > 1 with a non-terminating index is outside the supported region")


def eval_kdf(
    p: KdFParams,
    tol: float = DEFAULT_TOL,
    max_diagonals: int = DEFAULT_MAX_DIAGONALS,
    method: str = "auto",
) -> SeriesValue:
    """Evaluate F^{0:3}_{1:1}(x, y).

    ``method`` is "auto" or "diagonal"; the latter forces plain summation
    over anti-diagonals for non-terminating input.
    """
    if method not in ("auto", "diagonal"):
        raise ValueError(f"unknown method {method!r}")
    prof = termination_profile(p)
    check_denominators(p, prof)
    _check_arguments(p, prof)

    if prof.doubly:
        return _double_finite(p, prof)
    if prof.m_bound is not None:
        if p.y == 1:
            return _swapped_unit(p.row2, p.row1, p.d, p.x, prof.m_bound)
        return _outer_finite(p.row1, p.row2, p.d, p.x, p.y, prof.m_bound, tol)
    if prof.n_bound is not None:
        if p.x == 1:
            return _swapped_unit(p.row1, p.row2, p.d, p.y, prof.n_bound)
        return _outer_finite(p.row2, p.row1, p.d, p.y, p.x, prof.n_bound, tol)

    if p.x == 0:
        return eval_pfq(PFQParams(p.row2[:3], (p.d, p.e_p), p.y), tol)
    if p.y == 0:
        return eval_pfq(PFQParams(p.row1[:3], (p.d, p.e), p.x), tol)

    x, y = to_complex(p.x), to_complex(p.y)
    if method == "diagonal" or (abs(x) < 1 and abs(y) < 1):
        return _diagonal(p, tol, max_diagonals)
    if x == 1 or y == 1:
        conv = check_convergence(p)
        if x == 1 and (y != 1 or conv.first_margin <= conv.second_margin):
            if conv.first_margin <= 0:
                raise NoConvergence(f"Re(d+e-a-b-c) = {conv.first_margin:g} <= 0: series diverges at x = 1")
            return _outer_unit(p.row1, p.row2, p.d, p.y, tol)
        if conv.second_margin <= 0:
            raise NoConvergence(f"Re(d+e'-a'-b'-c') = {conv.second_margin:g} <= 0: series diverges at y = 1")
        return _outer_unit(p.row2, p.row1, p.d, p.x, tol)
    return _diagonal(p, tol, max_diagonals)


def _row_terms(row, count: int, exact: bool, z=1):
    """(a,b,c)_m z^m / ((e)_m m!) for m = 0..count-1 by the ratio recurrence."""
    a, b, c, e = row
    out = [Fraction(1) if exact else 1 + 0j]
    for m in range(count - 1):
        out.append(out[-1] * (a + m) * (b + m) * (c + m) * z / ((e + m) * (m + 1)))
    return out


def _double_finite(p: KdFParams, prof: TerminationProfile) -> SeriesValue:
    exact = p.exact
    M, N = prof.m_bound, prof.n_bound
    U = _row_terms(p.row1, M + 1, exact, p.x)
    V = _row_terms(p.row2, N + 1, exact, p.y)
    inv_d = [Fraction(1) if exact else 1 + 0j]
    for s in range(M + N):
        inv_d.append(inv_d[-1] / (p.d + s))
    terms = [U[m] * V[n] * inv_d[m + n] for m in range(M + 1) for n in range(N + 1)]
    count = len(terms)
    if exact:
        return SeriesValue(sum(terms, Fraction(0)), 0.0, count, Status.TERMINATED)
    arr = np.array([to_complex(t) for t in terms])
    err = 16 * EPS * float(np.sum(np.abs(arr)))
    return SeriesValue(csum(arr), err, count, Status.TERMINATED)


def _outer_finite(outer, inner, d, x_outer, y_inner, bound: int, tol: float) -> SeriesValue:
    """Finite sum over the terminating index with an inner 3F2 per term.

    Uses (d)_{m+n} = (d)_m (d+m)_n.
    """
    a, b, c, e = outer
    ap, bp, cp, ep = inner
    weights = _row_terms(outer, bound + 1, False, x_outer)
    values, err, terms = [], 0.0, 0
    d_poch = 1 + 0j
    for m in range(bound + 1):
        if m:
            d_poch *= to_complex(d) + m - 1
        w = weights[m] / d_poch
        inner_value = eval_pfq(PFQParams((ap, bp, cp), (d + m, ep), y_inner), min(tol, 1e-15))
        values.append(w * complex(inner_value))
        err += abs(w) * inner_value.abs_err
        terms += inner_value.terms
    arr = np.array(values)
    err += 8 * EPS * float(np.sum(np.abs(arr)))
    return SeriesValue(csum(arr), err, terms, Status.CONVERGED)


def _swapped_unit(outer, inner, d, x_inner, bound: int) -> SeriesValue:
    """One index terminates, the other runs to infinity at argument 1.

    The infinite index is summed on the outside, each term carrying a finite
    inner sum h_n = sum_{m <= bound} (a,b,c)_m x^m / ((e)_m (d+n)_m m!).
    Cancellation among the finite terms then happens inside h_n, which is
    exact for rational input.  The head of the outer sum (where its terms
    may still alternate) is also summed exactly; only the tail is summed in
    floats and extrapolated.
    """
    a, b, c, e = outer
    s = to_complex(d + e - a - b - c)
    if s.real <= 0:
        raise NoConvergence(f"margin {s.real:g} <= 0: the non-terminating index diverges at argument 1")
    exact = all_exact([a, b, c, d, e, x_inner, *inner])
    weights = _row_terms(inner, bound + 1, exact, x_inner)
    m0 = start_checkpoint([a, b, c, d, e, *inner])
    best = None
    while True:
        value, trunc, rounding, err = _swapped_at(outer, d, weights, bound, s, m0, exact)
        count = (m0 << RICHARDSON_DEPTH) * (bound + 1)
        if math.isfinite(err) and (best is None or err < best.abs_err):
            best = SeriesValue(value, err, count, Status.CONVERGED)
        if trunc <= max(1e-15 * abs(value), rounding):
            return best
        if (m0 << (RICHARDSON_DEPTH + 1)) > MAX_OUTER_TERMS:
            break
        m0 <<= 1
    if best is not None and best.abs_err <= 1e-8 * abs(best.value):
        return best
    partial = best or SeriesValue(value, err, count, Status.NO_CONVERGENCE)
    raise NoConvergence("outer extrapolation did not settle", replace(partial, status=Status.NO_CONVERGENCE))


def _swapped_at(outer, d, weights, bound: int, s, m0: int, exact: bool):
    a, b, c, e = outer
    count = m0 << RICHARDSON_DEPTH

    # head n < m0, exact for rational input
    head = Fraction(0) if exact else 0j
    u = Fraction(1) if exact else 1 + 0j
    for n in range(m0):
        h, dpoch = 0, 1
        for m in range(bound + 1):
            h += weights[m] / dpoch
            dpoch *= d + n + m
        head += u * h
        u = u * (a + n) * (b + n) * (c + n) / ((d + n) * (e + n) * (n + 1))

    # vectorised tail n >= m0
    n = np.arange(m0, count - 1, dtype=float)
    r = np.ones(n.size, dtype=complex)
    for z in (a, b, c):
        r *= to_complex(z) + n
    r /= (to_complex(d) + n) * (to_complex(e) + n) * (n + 1)
    u_tail = np.empty(count - m0, dtype=complex)
    u_tail[0] = to_complex(u)
    u_tail[1:] = to_complex(u) * np.cumprod(r)
    dn = to_complex(d) + np.arange(m0, count, dtype=float)
    h = np.zeros(count - m0, dtype=complex)
    habs = np.zeros(count - m0)
    dpoch = np.ones(count - m0, dtype=complex)
    for m in range(bound + 1):
        piece = to_complex(weights[m]) / dpoch
        h += piece
        habs += np.abs(piece)
        dpoch *= dn + m

    terms = np.zeros(count, dtype=complex)
    terms[m0:] = u_tail * h
    tail, trunc, rounding = richardson_sum(terms, s, m0)
    value = to_complex(head) + tail
    err = trunc + rounding + 4 * EPS * float(np.sum(np.abs(u_tail) * habs))
    if not exact:
        err += 8 * EPS * abs(to_complex(head)) * (bound + 1)
    return value, trunc, rounding, err


def _inner_block(ap, bp, cp, ep, d_values: np.ndarray, y) -> tuple[np.ndarray, int]:
    """3F2(ap, bp, cp; d_values, ep; y) for many large d at once.

    Each row must converge quickly (Re(d) large), which the caller ensures.
    """
    ap, bp, cp, ep, y = map(to_complex, (ap, bp, cp, ep, y))
    big = max(abs(ap), abs(bp), abs(cp), abs(ep), 1.0)
    n_min = int(2 * big) + 2
    D = d_values.astype(complex)
    term = np.ones_like(D)
    total = np.ones_like(D)
    active = np.arange(len(D))
    n = 0
    work = 0
    while active.size:
        ratio = (ap + n) * (bp + n) * (cp + n) * y / ((D[active] + n) * (ep + n) * (n + 1))
        term[active] *= ratio
        total[active] += term[active]
        work += active.size
        n += 1
        if n >= n_min:
            small = np.abs(term[active]) * (1 + n / np.maximum(D[active].real, 1.0)) <= 1e-17 * np.abs(total[active])
            active = active[~(small & (np.abs(ratio) < 1))]
        if n > 100_000:
            raise NoConvergence("inner series did not settle")
    return total, work


def _outer_unit(outer, inner, d, y_inner, tol: float) -> SeriesValue:
    """Non-terminating sum at outer argument 1 with Richardson-extrapolated tail.

    The first checkpoint is doubled until the last elimination level is
    within the rounding floor; large inner parameters push the asymptotic
    regime of the outer terms further out.
    """
    a, b, c, e = outer
    s = to_complex(d + e - a - b - c)
    m0 = start_checkpoint([a, b, c, d, e, *inner])
    best = None
    while True:
        value, trunc, rounding, work, inner_err = _outer_unit_at(outer, inner, d, y_inner, s, m0)
        err = trunc + rounding + inner_err
        if math.isfinite(err) and (best is None or err < best.abs_err):
            best = SeriesValue(value, err, work, Status.CONVERGED)
        if trunc <= max(tol * abs(value), rounding):
            return best
        if (m0 << (RICHARDSON_DEPTH + 1)) > MAX_OUTER_TERMS:
            break
        m0 <<= 1
    if best is not None and best.abs_err <= 1e-8 * abs(best.value):
        return best
    partial = best or SeriesValue(value, err, work, Status.NO_CONVERGENCE)
    raise NoConvergence("outer extrapolation did not settle", replace(partial, status=Status.NO_CONVERGENCE))


def _outer_unit_at(outer, inner, d, y_inner, s, m0: int):
    a, b, c, e = outer
    ap, bp, cp, ep = inner
    count = m0 << RICHARDSON_DEPTH

    ratio_m = np.arange(count - 1, dtype=float)
    r = np.ones(count - 1, dtype=complex)
    for z in (a, b, c):
        r *= to_complex(z) + ratio_m
    r /= (to_complex(d) + ratio_m) * (to_complex(e) + ratio_m) * (ratio_m + 1)
    u = np.empty(count, dtype=complex)
    u[0] = 1
    u[1:] = np.cumprod(r)

    big = max(abs(to_complex(z)) for z in (ap, bp, cp, ep, d))
    split = min(count, max(16, int(2 * big) + 2))
    g = np.empty(count, dtype=complex)
    inner_err = 0.0
    work = 0
    for m in range(split):
        v = eval_pfq(PFQParams((ap, bp, cp), (d + m, ep), y_inner), 1e-16)
        g[m] = complex(v)
        inner_err += abs(u[m]) * v.abs_err
        work += v.terms
    if split < count:
        block, w = _inner_block(ap, bp, cp, ep, to_complex(d) + np.arange(split, count, dtype=float), y_inner)
        g[split:] = block
        work += w
        inner_err += 4 * EPS * float(np.sum(np.abs(u[split:] * block)))

    value, trunc, rounding = richardson_sum(u * g, s, m0)
    return value, trunc, rounding, work, inner_err


def _diagonal(p: KdFParams, tol: float, max_diagonals: int) -> SeriesValue:
    """Sum anti-diagonals s = m + n until three increments are negligible.

    Terms are assembled from cumulative logarithms,
    T(m, n) = exp(log X_m + log Y_n - log (d)_{m+n}), so tiny or huge
    factors (small |x|, factorial growth of the rows) never overflow.
    """
    a, b, c, e = (to_complex(z) for z in p.row1)
    ap, bp, cp, ep = (to_complex(z) for z in p.row2)
    d, x, y = to_complex(p.d), to_complex(p.x), to_complex(p.y)
    L = max_diagonals + 1
    k = np.arange(L - 1, dtype=float)
    rA = (a + k) * (b + k) * (c + k) * x / ((e + k) * (k + 1))
    rB = (ap + k) * (bp + k) * (cp + k) * y / ((ep + k) * (k + 1))
    with np.errstate(divide="ignore"):
        logX = np.concatenate(([0j], np.cumsum(np.log(rA))))
        logY = np.concatenate(([0j], np.cumsum(np.log(rB))))
        logD = np.concatenate(([0j], np.cumsum(np.log(d + k))))

    r = max(abs(x), abs(y))
    if r < 1:
        tail_factor = lambda s: 1.0 / (1.0 - r)  # noqa: E731
    else:
        # increments fall like s^(-1-delta); the tail past s is then about |inc| s / delta
        conv = check_convergence(p)
        margins = [m for m, z in ((conv.first_margin, x), (conv.second_margin, y)) if abs(z) >= 1]
        delta = max(min(margins), 1e-3)
        tail_factor = lambda s: (s + 1) / delta  # noqa: E731
    diag_sums = []
    total = 0j
    comp = 0j
    quiet = 0
    count = 0
    inc = 0j
    magnitude = 0.0  # sum of |T(m, n)|, sets the rounding floor under cancellation
    for s in range(max_diagonals):
        with np.errstate(under="ignore"):
            row = np.exp(logX[: s + 1] + logY[s::-1] - logD[s])
        inc = complex(np.sum(row))
        magnitude += float(np.sum(np.abs(row)))
        count += s + 1
        diag_sums.append(inc)
        # Neumaier-compensated running total for the stop test
        t = total + inc
        comp += (total - t) + inc if abs(total) >= abs(inc) else (inc - t) + total
        total = t
        running = total + comp
        if abs(inc) * tail_factor(s) <= tol * abs(running):
            quiet += 1
            if quiet >= 3:
                value = csum(diag_sums)
                err = abs(inc) * tail_factor(s) + 4 * EPS * ((s + 1) * abs(value) + magnitude)
                return SeriesValue(value, err, count, Status.CONVERGED)
        else:
            quiet = 0
    partial = SeriesValue(csum(diag_sums), abs(inc) * tail_factor(max_diagonals), count, Status.NO_CONVERGENCE)
    raise NoConvergence(f"diagonal summation not settled after {max_diagonals} diagonals", partial)
