import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renormlab import InputError, PiecewiseLinear, Quadratic, Rescaled, evaluate, orbit, tent, turning_point
from renormlab.maps import derivative, describe, evaluate_mp, iterate, parse_breakpoints


def test_quadratic_vertex_values():
    assert evaluate(Quadratic(4.0), 0.5) == 1.0
    assert evaluate(Quadratic(2.0), 0.5) == 0.5


def test_tent_interpolation():
    assert evaluate(tent(), 0.25) == 0.5
    assert evaluate(tent(), 0.75) == 0.5


def test_domain_violation():
    with pytest.raises(InputError):
        evaluate(Quadratic(3.0), 1.0 + 1e-9)
    with pytest.raises(InputError):
        evaluate(Quadratic(3.0), -1e-6)
    # within the 1e-12 tolerance is accepted
    assert evaluate(Quadratic(3.0), 1.0 + 1e-13) == 0.0


def test_bad_specs():
    with pytest.raises(InputError):
        Quadratic(4.5)
    with pytest.raises(InputError):
        PiecewiseLinear(((0, 0), (0.5, 1.2), (1, 0)))
    with pytest.raises(InputError):
        PiecewiseLinear(((0, 0), (0.6, 1), (0.6, 0.5), (1, 0)))
    with pytest.raises(InputError):
        PiecewiseLinear(((0.1, 0), (1, 0)))
    with pytest.raises(InputError):
        parse_breakpoints("0,0;oops")


def test_orbit_full_map():
    seg = orbit(Quadratic(4.0), 0.5, 3)
    assert seg.values.tolist() == [0.5, 1.0, 0.0, 0.0]
    assert len(seg) == 4


def test_orbit_period_two_tail():
    a = 3.2
    # period-2 points solve a^2 x^2 - a(a+1) x + (a+1) = 0
    disc = math.sqrt((a + 1) * (a - 3))
    q = sorted([((a + 1) - disc) / (2 * a), ((a + 1) + disc) / (2 * a)])
    tail = orbit(Quadratic(a), 0.5, 2000).values[-2:]
    assert sorted(tail) == pytest.approx(q, abs=1e-12)
    assert q == pytest.approx([0.513045, 0.799455], abs=1e-6)


def test_orbit_monotone_convergence_a2():
    v = orbit(Quadratic(2.0), 0.1, 60).values
    assert np.all(np.diff(v) >= 0)
    assert v[-1] == pytest.approx(0.5, abs=1e-15)


def test_orbit_deterministic():
    a = orbit(Quadratic(3.9), 0.123, 5000).values
    b = orbit(Quadratic(3.9), 0.123, 5000).values
    assert a.tobytes() == b.tobytes()


def test_orbit_matches_evaluate():
    f = Quadratic(3.7)
    v = orbit(f, 0.3, 100).values
    for k in range(100):
        assert v[k + 1] == evaluate(f, v[k])


def test_range_containment():
    rng = np.random.default_rng(5)
    for a in rng.uniform(0, 4, 20):
        x = iterate(Quadratic(a), rng.uniform(0, 1, 50_000), 20)
        assert x.min() >= 0.0 and x.max() <= 1.0


def test_turning_points():
    assert turning_point(Quadratic(3.7)) == (0.5, True)
    assert turning_point(tent()) == (0.5, True)
    c, ok = turning_point(PiecewiseLinear(((0, 0), (0.25, 1), (0.5, 0.2), (0.75, 1), (1, 0))))
    assert not ok
    assert turning_point(PiecewiseLinear(((0, 0), (1, 1))))[1] is False


def test_turning_point_plateau():
    f = PiecewiseLinear(((0, 0), (0.3, 0.8), (0.6, 0.8), (1, 0)))
    c, ok = turning_point(f)
    assert ok and 0.3 <= c <= 0.6


@given(st.floats(0.0, 1.0))
def test_quadratic_symmetry(x):
    f = Quadratic(3.3)
    assert evaluate(f, x) == pytest.approx(evaluate(f, 1 - x), abs=1e-15)


def test_derivative_finite_difference():
    f = Quadratic(3.6)
    for x in (0.1, 0.4, 0.77):
        h = 1e-6
        num = (evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h)
        assert derivative(f, x) == pytest.approx(num, rel=1e-7)


def test_rescaled_conjugation_identity():
    a = 2.8
    f = Quadratic(a)
    u, v = 5 / 14, 9 / 14
    g = Rescaled(f, (u, v), 2, -1)
    ts = np.linspace(0, 1, 1000)
    # H(x) = (v - x)/(v - u), H^-1(t) = v - t (v - u)
    x = v - ts * (v - u)
    direct = (v - a * (a * x * (1 - x)) * (1 - a * x * (1 - x))) / (v - u)
    assert np.max(np.abs(evaluate(g, ts) - direct)) < 1e-10


def test_rescaled_orientation_plus():
    f = Quadratic(2.8)
    g = Rescaled(f, (5 / 14, 9 / 14), 2, 1)
    ts = np.linspace(0, 1, 101)
    h = Rescaled(f, (5 / 14, 9 / 14), 2, -1)
    # reversing H is conjugation by t -> 1 - t
    assert np.allclose(evaluate(g, ts), 1 - evaluate(h, 1 - ts), atol=1e-12)


def test_rescaled_rejects_non_invariant():
    with pytest.raises(InputError):
        Rescaled(Quadratic(4.0), (0.2, 0.4), 2, -1)
    with pytest.raises(InputError):
        Rescaled(Quadratic(2.8), (0.6, 0.5), 2, -1)


def test_rescaled_nesting_flattens():
    f = Quadratic(3.5)
    g1 = Rescaled(f, (0.1, 0.9), 1, -1, check=False)
    g2 = Rescaled(g1, (0.2, 0.7), 2, -1, check=False)
    root, u, v, n, o = g2.flat
    assert root is f and n == 2 and o == 1
    ts = np.linspace(0, 1, 33)
    manual = np.array([float(g2._eval_mp(mpmath.mpf(float(t)))) for t in ts])
    assert np.allclose(g2._raw_eval(ts), manual, atol=1e-12)


def test_double_double_matches_mpmath():
    # deep renormalization interval near the cascade limit, 16th iterate
    f = Quadratic(3.5699456)
    g = Rescaled(f, (0.4990, 0.5010), 16, -1, check=False)
    ts = np.linspace(0, 1, 17)
    with mpmath.workdps(120):
        ref = np.array([float(evaluate_mp(g, mpmath.mpf(float(t)))) for t in ts])
    assert np.max(np.abs(g._raw_eval(ts) - ref)) < 1e-20 + 1e-15 * np.max(np.abs(ref))


def test_describe_roundtrip_text():
    f = parse_breakpoints("0,0;0.5,1;1,0")
    assert describe(f)["breakpoints"] == [[0.0, 0.0], [0.5, 1.0], [1.0, 0.0]]
    assert f == tent()


@settings(max_examples=50)
@given(st.floats(0.0, 4.0), st.floats(0.0, 1.0), st.integers(0, 30))
def test_iterate_equals_orbit(a, x0, n):
    f = Quadratic(a)
    assert iterate(f, x0, n) == orbit(f, x0, n).values[-1]
