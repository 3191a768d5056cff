from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kampe.errors import SamplerExhausted
from kampe.identities import (
    REGISTRY,
    IdentityId,
    Inapplicable,
    SamplerConfig,
    admissible,
    applicable,
    get,
    kdf1_single_sum,
    relative_error,
    rhs_value,
    sample_params,
    verify,
)
from kampe.kdf import KdFParams

F = Fraction

RES1_GOLDEN = KdFParams(a=1, b=2, c=1, e=4, a_p=4, b_p=3, c_p=-1, e_p=5, d=5)
RES2_GOLDEN = KdFParams(a=1, b=1, c=1, e=4, a_p=1, b_p=1, c_p=1, e_p=3, d=2)
FI1_GOLDEN = KdFParams(a=1, b=2, c=-1, e=-2, a_p=4, b_p=3, c_p=0, e_p=3, d=5)


# -- registry and constraint checks ------------------------------------------------


def test_registry_complete():
    assert len(REGISTRY) == 14
    assert set(REGISTRY) == set(IdentityId)
    assert get("KDF2-II").id is IdentityId.KDF2_II
    with pytest.raises(ValueError):
        IdentityId.parse("kdf9")


def test_kdf1_relations_listed():
    labels = [r.label for r in get(IdentityId.KDF1).relations]
    assert labels == ["a' = d - a", "e' = d + e - a - b - c"]


def test_fi2_requires_nonzero_n():
    p = KdFParams(a=F(1, 2), b=F(3, 4), c=0, e=F(1, 2) + F(3, 4) - 2 + 1, a_p=F(3, 2), b_p=F(5, 4), c_p=-1, e_p=0, d=2)
    rep = applicable(IdentityId.FI2, p)
    assert all(rep.relations_satisfied.values())
    assert not rep.applicable
    assert any("N != 0" in f for f in rep.failures())


def test_res1_flags_relation():
    rep = applicable(IdentityId.RES1, RES1_GOLDEN.with_(c_p=-2))
    assert not rep.applicable
    assert rep.relations_satisfied["c' = -c"] is False


def test_applicable_never_raises():
    weird = KdFParams(0, 0, 0, 0, 0, 0, 0, 0, 0)
    for identity in IdentityId:
        assert applicable(identity, weird).applicable in (True, False)


def test_margins_reported():
    rep = applicable(IdentityId.RES2, RES2_GOLDEN)
    assert rep.applicable
    assert sorted(rep.margins()) == [2, 3]


# -- golden values ---------------------------------------------------------------


def test_res1_golden():
    assert rhs_value(IdentityId.RES1, RES1_GOLDEN).value == F(3, 5)
    ev = verify(IdentityId.RES1, RES1_GOLDEN)
    assert ev.rel_err <= 1e-10


def test_res2_golden():
    assert rhs_value(IdentityId.RES2, RES2_GOLDEN).value == F(3, 2)
    assert verify(IdentityId.RES2, RES2_GOLDEN).rel_err <= 1e-10


def test_fi1_golden_exact():
    assert applicable(IdentityId.FI1, FI1_GOLDEN).applicable
    ev = verify(IdentityId.FI1, FI1_GOLDEN)
    assert ev.backend == "exact"
    assert ev.lhs.value == ev.rhs.value == F(6, 5)
    assert ev.rel_err == 0


def test_kdf3_terminating_instance():
    p = sample_params(IdentityId.KDF3, 11, 1)[0]
    assert verify(IdentityId.KDF3, p).rel_err <= 1e-10


def test_verify_rejects_inapplicable():
    with pytest.raises(Inapplicable) as info:
        verify(IdentityId.RES1, RES1_GOLDEN.with_(c_p=-2))
    assert info.value.report.failures()


def test_relative_error_exact_and_float():
    assert relative_error(F(1, 3), F(1, 3)) == 0
    assert relative_error(F(1), F(2)) == 0.5
    assert relative_error(1.0, 1.0 + 1e-12) == pytest.approx(1e-12, rel=1e-3)
    assert relative_error(0.0, 0.0) == 0


def test_kdf1_single_sum_matches_both_sides():
    for p in sample_params(IdentityId.KDF1, 5, 3):
        ev = verify(IdentityId.KDF1, p)
        mid = complex(kdf1_single_sum(p))
        assert relative_error(mid, ev.lhs.value) <= 1e-9
        assert relative_error(mid, ev.rhs.value) <= 1e-9


# -- sampler ---------------------------------------------------------------------


def test_sampler_deterministic():
    assert sample_params(IdentityId.KDF2_II, 3, 6) == sample_params(IdentityId.KDF2_II, 3, 6)
    assert sample_params(IdentityId.KDF2_II, 3, 6) != sample_params(IdentityId.KDF2_II, 4, 6)


def test_sampler_fi2_shape():
    for p in sample_params(IdentityId.FI2, 8, 10):
        N, Np = -p.c, -p.c_p
        assert N >= 1 and Np >= 1
        assert p.e_p == 1 - N - Np


def test_sampler_res3_alternates():
    ps = sample_params(IdentityId.RES3, 1, 6)
    integral_a = [(p.d - p.a).denominator == 1 for p in ps]
    assert integral_a[0::2] == [True] * 3
    assert all((p.d - p.b).denominator == 1 for p in ps[1::2])


def test_sampler_rejects_bad_count():
    with pytest.raises(ValueError):
        sample_params(IdentityId.RES1, 1, 0)


def test_sampler_exhaustion():
    cfg = SamplerConfig(margin=F(100), max_rejects=50)
    with pytest.raises(SamplerExhausted):
        sample_params(IdentityId.RES1, 1, 1, cfg)


@pytest.mark.parametrize("identity", list(IdentityId))
def test_sampled_sets_are_applicable_with_margin(identity):
    cfg = SamplerConfig()
    for p in sample_params(identity, 2024, 8, cfg):
        rep = applicable(identity, p)
        assert rep.applicable
        assert all(m >= cfg.margin for m in rep.margins())
        assert admissible(identity, p, cfg.margin)


# -- properties ------------------------------------------------------------------


@settings(max_examples=12)
@given(st.sampled_from(list(IdentityId)), st.integers(0, 2**31 - 1))
def test_identity_holds_on_random_seed(identity, seed):
    for p in sample_params(identity, seed, 2):
        ev = verify(identity, p)
        if ev.backend == "exact":
            assert ev.lhs.value == ev.rhs.value
            continue
        # 1e-9 relative, unless strong cancellation pushes the float floor higher;
        # then the discrepancy must stay within the reported error bounds
        diff = abs(complex(ev.lhs.value) - complex(ev.rhs.value))
        assert ev.rel_err <= 1e-9 or diff <= ev.lhs.abs_err + ev.rhs.abs_err


@settings(max_examples=25)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 40), st.integers(1, 40), st.integers(4, 48))
def test_fi1_exact_family(N, Np, ka, kb, kd):
    a, b, d = F(ka, 8), F(kb, 8), F(kd, 8)
    p = KdFParams(a=a, b=b, c=-N, e=1 + a + b - N - d, a_p=d - a, b_p=d - b, c_p=-Np, e_p=1 - a - b - Np + d, d=d)
    if not admissible(IdentityId.FI1, p):
        return
    ev = verify(IdentityId.FI1, p)
    assert ev.backend == "exact" and ev.lhs.value == ev.rhs.value
