import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kampe.errors import DenominatorPole, NoConvergence
from kampe.hyper import (
    PFQParams,
    Status,
    dixon_3f2,
    euler_2f1_transform,
    eval_pfq,
    gauss_2f1_unit,
    pfaff_saalschutz,
    pfq,
    reverse_terminating_4f3,
    richardson_sum,
    slater_3f2_transform,
    vandermonde,
)

from conftest import eighths

F = Fraction

# frozen 30-digit reference values
PFQ_REF = [
    ((0.5, F(1, 3)), (2,), 1, 1.15959526696392836576999205157),
    ((0.5, 0.25, 0.75), (1.5, 2.25), 1, 1.0376218849754684113239975295),
    ((0.5, 1.25, 2), (1.5, 3), 0.5, 1.19094797342225730868187774847),
    ((1.5, 0.25 + 0.5j), (2.75,), 0.3 + 0.4j, 0.89944263782295951999762407514 + 0.118870869435223960064273335996j),
    ((0.5,), (1.5,), 2.5, 3.122277453129005455358870779),
    ((), (), 1.5, 4.48168907033806482260205546012),
]


# -- oracles --------------------------------------------------------------------


@pytest.mark.parametrize("nums, dens, z, ref", PFQ_REF)
def test_pfq_reference_values(nums, dens, z, ref):
    v = pfq(nums, dens, z)
    assert v.status is Status.CONVERGED
    assert abs(complex(v) - ref) <= 1e-13 * abs(ref)
    assert v.abs_err < 1e-12


def test_terminating_exact_sums():
    assert pfq([-2, 1], [3]).value == Fraction(1, 2)
    assert pfq([0, 5, F(1, 3)], [2, 7]).value == 1
    v = pfq([1, 2, -1], [-2, 4])
    assert v.value == Fraction(5, 4)
    assert v.status is Status.TERMINATED and v.terms == 2


def test_unit_argument_telescoping():
    v = pfq([1, 1], [3])
    assert complex(v).real == pytest.approx(2, rel=1e-13)


def test_zero_argument_is_one():
    assert pfq([1, 2, 3], [4, 5], 0).value == 1


def test_denominator_pole_rules():
    with pytest.raises(DenominatorPole):
        pfq([1, 2], [-3])  # never terminates
    with pytest.raises(DenominatorPole):
        pfq([-4, 1], [-2])  # pole at index 3 reached before termination at 5


def test_pole_exactly_at_termination_is_legal():
    # terms m = 0, 1, 2 use (c)_m with c = -2: 1, -2, 2; the pole enters at m = 3
    v = pfq([-2, 1], [-2])
    assert v.value == 1 + F(-2 * 1, -2) + F((-2) * (-1) * 1 * 2, (-2) * (-1) * 2)


def test_divergence_detected():
    with pytest.raises(NoConvergence):
        pfq([1, 1], [2])  # harmonic series
    with pytest.raises(NoConvergence):
        pfq([1, 1], [3], 1.5)
    with pytest.raises(NoConvergence):
        pfq([1, 2, 3], [4], 0.5)  # p > q + 1


def test_classical_examples():
    assert gauss_2f1_unit(-2, 1, 3).value() == Fraction(1, 2)
    assert gauss_2f1_unit(0, F(3, 7), F(5, 2)).value() == 1
    assert gauss_2f1_unit(1, 1, 3).value() == 2
    assert vandermonde(2, 1, 3) == Fraction(1, 2)
    assert vandermonde(3, F(5, 3), F(5, 3)) == 0
    assert vandermonde(1, F(2, 7), F(9, 5)) == 1 - F(2, 7) / F(9, 5)
    assert dixon_3f2(2, 1, -1).value() == Fraction(3, 4)
    assert pfaff_saalschutz(1, 1, 1, 3) == Fraction(4, 3)
    assert pfaff_saalschutz(0, F(3, 2), 3, F(5, 2)) == 1


def test_dixon_and_pfaff_against_series():
    d = dixon_3f2(2, 0.5, -2).to_complex()
    assert d == pytest.approx(complex(pfq([2, 0.5, -2], [2.5, 5])), rel=1e-14)
    assert pfaff_saalschutz(2, 1, 2, 4) == pfq([2, 1, -2], [4, 1 + 2 + 1 - 4 - 2]).value


def test_dixon_rejects_terminating_a():
    with pytest.raises(ValueError):
        dixon_3f2(-2, 1, 1)


def test_reversal_example():
    pref, rev = reverse_terminating_4f3(1, 2, 3, 1, 4, 5, 6)
    original = pfq([1, 2, 3, -1], [4, 5, 6]).value
    assert original == Fraction(19, 20)
    assert pref * eval_pfq(rev).value == original


def test_slater_example():
    pref, tr = slater_3f2_transform(1, 2, 1, 3, 4)
    assert pref == Fraction(2, 3)
    assert eval_pfq(tr).value == Fraction(5, 4)
    assert pref * eval_pfq(tr).value == Fraction(5, 6) == pfq([1, 2, -1], [3, 4]).value


def test_slater_and_reversal_with_decimals():
    pref, tr = slater_3f2_transform(0.5, 1.5, 2, 3.5, 2.5)
    assert pref * complex(eval_pfq(tr)) == pytest.approx(complex(pfq([0.5, 1.5, -2], [3.5, 2.5])), rel=1e-14)


def test_euler_transform():
    factor, tr = euler_2f1_transform(0.5, 1.25, 2.5, 0.4)
    assert factor * complex(eval_pfq(tr)) == pytest.approx(complex(pfq([0.5, 1.25], [2.5], 0.4)), rel=1e-14)
    with pytest.raises(ValueError):
        euler_2f1_transform(0.5, 1.25, 2.5, 1)


def test_richardson_zeta_two():
    n = np.arange(1, 16 * 256 + 1, dtype=float)
    est, trunc, rounding = richardson_sum(1 / n**2, 1, 16)
    assert est.real == pytest.approx(math.pi**2 / 6, rel=1e-13)
    assert trunc < 1e-12


# -- properties -----------------------------------------------------------------


@given(eighths(1, 40), eighths(1, 40), eighths(1, 40))
def test_gauss_agrees_with_series(a, b, extra):
    c = a + b + max(extra, F(1, 4))
    g = gauss_2f1_unit(a, b, c).to_complex()
    v = eval_pfq(PFQParams((a, b), (c,)))
    assert abs(complex(v) - g) <= 1e-10 * abs(g)


@given(st.integers(1, 12), eighths(-40, 40), eighths(1, 40))
def test_vandermonde_exact(N, b, c):
    assert vandermonde(N, b, c) == pfq([-N, b], [c]).value


@given(eighths(1, 40), eighths(-40, 40), st.integers(1, 10), eighths(1, 40))
def test_saalschutz_exact(a, b, N, c):
    e = 1 + a + b - c - N
    assume(all(not (z <= 0 and z.denominator == 1) for z in (c, e)))
    assert pfaff_saalschutz(a, b, N, c) == pfq([a, b, -N], [c, e]).value


@given(st.integers(1, 8), *[eighths(1, 48)] * 6)
def test_reversal_exact(N, A, B, C, D, E, Fp):
    assume(all((1 - z - N).denominator != 1 or 1 - z - N > 0 for z in (A, B, C)))
    pref, rev = reverse_terminating_4f3(A, B, C, N, D, E, Fp)
    assert pref * eval_pfq(rev).value == pfq([A, B, C, -N], [D, E, Fp]).value


@given(st.integers(0, 8), eighths(1, 48), eighths(1, 48), eighths(1, 48))
def test_terms_count_for_terminating(N, a, b, c):
    v = pfq([-N, a], [b, c], F(1, 2))
    assert v.status is Status.TERMINATED
    assert v.terms == N + 1


@given(st.floats(0.1, 3), st.floats(0.1, 3), st.floats(0.5, 4), st.floats(-0.9, 0.9))
def test_sub_unit_matches_mpmath(a, b, c, z):
    v = pfq([a, b], [c], z)
    ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert abs(complex(v) - ref) <= 1e-12 * max(1.0, abs(ref))
