import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from renormlab import (
    CertificateError,
    ConvergesToFixed,
    EntropyGateError,
    InputError,
    PiecewiseLinear,
    Quadratic,
    Renormalizable,
    RenormCertificate,
    evaluate,
    find_periods,
    period_set_validator,
    renorm_depth,
    renorm_operator,
    superstable_parameters,
    turning_point,
    zero_entropy_dichotomy,
)
from renormlab.renorm import renorm_chain


@pytest.fixture(scope="module")
def cascade():
    return superstable_parameters(8).params


def test_converges_to_fixed():
    res = zero_entropy_dichotomy(Quadratic(1.5))
    assert isinstance(res, ConvergesToFixed)
    assert res.fixed_point == pytest.approx(1 - 1 / 1.5, abs=1e-12)


def test_converges_to_fixed_small_a():
    # below a = 1 the only fixed point is 0
    res = zero_entropy_dichotomy(Quadratic(0.8))
    assert res.fixed_point == pytest.approx(0.0, abs=1e-12)


def test_a28_closed_form():
    res = zero_entropy_dichotomy(Quadratic(2.8))
    assert isinstance(res, Renormalizable)
    cert = res.certificate
    assert cert.p_prime == pytest.approx(5 / 14, abs=1e-9)
    assert cert.p == pytest.approx(9 / 14, abs=1e-9)
    assert cert.valid and all(cert.checks.values())
    # inner approximation: the certified interval sits inside the true one
    assert cert.p_prime >= 5 / 14 - 1e-15 and cert.p <= 9 / 14 + 1e-15


def test_entropy_gate():
    with pytest.raises(EntropyGateError) as exc:
        zero_entropy_dichotomy(Quadratic(3.9))
    assert exc.value.info["entropy"] == pytest.approx(0.55, abs=0.03)


def test_non_unimodal_rejected():
    f = PiecewiseLinear(((0, 0), (0.25, 1), (0.5, 0.2), (0.75, 1), (1, 0)))
    with pytest.raises(InputError):
        zero_entropy_dichotomy(f)


@pytest.mark.parametrize("a", [2.8, 3.2, 3.45, 3.55])
def test_certificate_dense_grid(a):
    f = Quadratic(a)
    cert = zero_entropy_dichotomy(f).certificate
    xs = np.linspace(cert.p_prime, cert.p, 100_001)
    fx = a * xs * (1 - xs)
    f2 = a * fx * (1 - fx)
    tol = cert.slack
    assert fx.min() >= cert.p - tol
    assert f2.min() >= cert.p_prime - tol and f2.max() <= cert.p + tol


def test_certificate_json_roundtrip():
    cert = zero_entropy_dichotomy(Quadratic(3.3)).certificate
    again = RenormCertificate.from_dict(cert.to_dict())
    assert again == cert
    assert cert.to_dict()["p_hex"] == cert.p.hex()


def test_renorm_operator_unimodal():
    for a in (2.8, 3.2, 3.5):
        f = Quadratic(a)
        cert = zero_entropy_dichotomy(f).certificate
        g = renorm_operator(f, cert)
        c, ok = turning_point(g)
        assert ok
        assert c == pytest.approx((cert.p - cert.c) / (cert.p - cert.p_prime), abs=1e-9)


def test_renorm_operator_a32_attracting_fixed_point():
    f = Quadratic(3.2)
    g = renorm_operator(f, zero_entropy_dichotomy(f).certificate)
    t = 0.5
    for _ in range(200):
        t = evaluate(g, t)
    assert evaluate(g, t) == pytest.approx(t, abs=1e-12)


def test_renorm_operator_invalid_certificate():
    cert = RenormCertificate(0.3, 0.7, 0.5, 2, {"disjoint": False, "invariant": True, "return_unimodal": True, "fc2_inside": True})
    with pytest.raises(CertificateError):
        renorm_operator(Quadratic(3.2), cert)


def test_fixed_point_shadow_at_a_star():
    # normalized distance between f and R(f) at a*; the spec gives 0.08 as
    # an empirical figure, so it is reported rather than asserted
    a_star = superstable_parameters(10).a_star_extrapolation
    f = Quadratic(a_star)
    g = renorm_operator(f, zero_entropy_dichotomy(f).certificate)
    ts = np.linspace(0, 1, 256)
    A, B = evaluate(f, ts), evaluate(g, ts)
    dist = float(np.max(np.abs(A / A.max() - B / B.max())))
    print(f"sup distance f vs R(f) at a*: {dist:.4f}")
    assert np.isfinite(dist)


@pytest.mark.parametrize("a, depth", [(2.8, 1), (3.2, 1), (3.4, 2), (3.5, 3), (3.55, 3), (1.5, 0)])
def test_renorm_depth_values(a, depth):
    assert renorm_depth(Quadratic(a)) == (depth, False)


def test_renorm_depth_between_superstable(cascade):
    # depth d exactly on (a_(d-1), a_d]
    for d in range(1, 6):
        lo, hi = cascade[d - 1], cascade[d]
        assert renorm_depth(Quadratic(hi))[0] == d
        assert renorm_depth(Quadratic(lo + 1e-3 * (hi - lo)))[0] == d


@pytest.mark.slow
def test_renorm_depth_capped_at_a_star():
    a_star = superstable_parameters(10).a_star_extrapolation
    assert renorm_depth(Quadratic(a_star), 12) == (12, True)


def test_renorm_depth_error_annotated():
    with pytest.raises(EntropyGateError) as exc:
        renorm_depth(Quadratic(3.7))
    assert exc.value.info["depth"] == 0
    assert "(at depth 0)" in str(exc.value)


@pytest.mark.parametrize("a", [2.8, 3.3, 3.5, 3.56])
def test_depth_commutes_with_operator(a):
    f = Quadratic(a)
    g = renorm_operator(f, zero_entropy_dichotomy(f).certificate)
    assert renorm_depth(f)[0] == 1 + renorm_depth(g)[0]


def test_depth_period_coherence(cascade):
    for d in range(1, 5):
        a = cascade[d] - 0.05 * (cascade[d] - cascade[d - 1])
        depth, _ = renorm_depth(Quadratic(a))
        attracting = [r for r in find_periods(Quadratic(a), 2**d) if r.stability == "attracting"]
        assert depth == d
        assert [r.period for r in attracting] == [2**d]


def test_renorm_chain_too_deep():
    with pytest.raises(InputError):
        renorm_chain(Quadratic(3.2), 3)


def test_validator_examples():
    assert period_set_validator({1, 2, 4, 8, 16}).valid
    v = period_set_validator({1, 2, 3})
    assert not v.valid and "3" in v.reason
    v = period_set_validator({1, 2, 4, 12, 24, 48}, "disc", threshold=4)
    assert v.valid
    assert v.finite == (1, 2, 4) and v.tails == {3: (2, 4)}
    assert not period_set_validator({1, 12, 48}, "disc", threshold=4).valid
    with pytest.raises(InputError):
        period_set_validator(set())
    with pytest.raises(InputError):
        period_set_validator({1, 2}, "torus")


@given(st.sets(st.integers(1, 5000), min_size=1, max_size=30), st.integers(1, 64))
def test_validator_roundtrip(periods, threshold):
    v = period_set_validator(periods, "disc", threshold)
    if v.valid:
        assert v.reconstruct() == periods


def test_unresolvable_interval_is_reported():
    # just above a_0 = 2 the certificate interval is far below float resolution
    with pytest.raises(CertificateError) as exc:
        renorm_depth(Quadratic(2.0 + 1e-9))
    assert exc.value.info["flag"] == "resolution"
