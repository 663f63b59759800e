import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracorbit.algebraic import parse_algebraic, rational_algebraic
from fracorbit.counting import (
    check_recurrence_in_runs,
    count_hits,
    fit_envelope,
    geometric_growth_check,
    intercept_for_slope,
    logN_fit,
    max_runs,
    solve_theta,
    theorem3_slope,
    trace_sequence,
)
from fracorbit.errors import NoOutsideConjugate, ValidationError
from fracorbit.orbit import compute_orbit
from fracorbit.realspec import LIOUVILLE, RationalSpec, parse_realspec

from oracles import mp_orbit_dist, runs_below

PHI = parse_algebraic([-1, -1, 1])
Q13 = parse_algebraic([-3, -1, 1])
THREE_HALVES = rational_algebraic(Fraction(3, 2))


def test_counts_match_mpmath_oracle():
    xi = Fraction(5, 7)
    orb = compute_orbit(RationalSpec(xi), Q13, 0, 300)
    ref = mp_orbit_dist(xi, [-3, -1, 1], 300)
    rep = count_hits(orb, Fraction(1, 5))
    assert rep.uncertain == 0
    assert rep.count_ge == sum(d >= 0.2 for d in ref)
    runs = max_runs(orb, Fraction(1, 5)).runs
    assert list(runs) == runs_below(ref, 0.2)


def test_golden_orbit_of_one_settles_into_a_run():
    orb = compute_orbit(RationalSpec(Fraction(1)), PHI, 0, 60)
    rep = max_runs(orb, Fraction(1, 3))
    # ||phi^n|| = |psi|^n is below 1/3 from n = 3 on
    assert rep.runs == ((3, 58),)
    assert rep.count_ge == 2
    assert check_recurrence_in_runs(orb, PHI, Fraction(1, 3)) == []


def test_rational_alpha_runs_keep_the_geometric_identity():
    orb = compute_orbit(RationalSpec(Fraction(1)), THREE_HALVES, 0, 400)
    assert check_recurrence_in_runs(orb, THREE_HALVES, Fraction(1, 5)) == []
    rep = max_runs(orb, Fraction(1, 5))
    assert rep.envelope is not None and rep.envelope.covers(rep.runs)


def test_envelope_fit_is_tight():
    runs = [(1, 3), (10, 12), (40, 5)]
    env = fit_envelope(runs, S=10)
    g = Fraction(12, 20)
    assert g < env.gamma < g + Fraction(1, 1 << 32)
    assert env.gamma0 == 10 * env.gamma
    assert env.B == (env.gamma + env.gamma0 + 2) / env.gamma
    assert fit_envelope([], 10) is None
    assert intercept_for_slope(runs, Fraction(1, 2)) == 7
    with pytest.raises(ValidationError):
        fit_envelope(runs, 0)


def test_solve_theta_fibonacci():
    n = 12
    F = [0, 1]
    while len(F) < n + 10:
        F.append(F[-1] + F[-2])
    sol = solve_theta([F[n], F[n + 1]], PHI, n)
    assert abs(float(sol.theta1) - 5**-0.5) < 1e-15
    assert trace_sequence(sol.theta1, n, 6) == F[n:n + 6]
    (other,) = sol.conjugate_thetas
    assert abs(other.value + 5**-0.5) < 1e-12 and other.radius < 1e-30


def test_solve_theta_tenth_window():
    sol = solve_theta([55, 89], PHI, 10)
    assert abs(float(sol.theta1) - 0.4472136) < 1e-7
    assert abs(sol.conjugate_thetas[0].value + 0.4472136) < 1e-7


def test_solve_theta_rejects_non_integral_reconstruction():
    with pytest.raises(ValidationError):
        solve_theta([1, 2, 3], PHI, 0)
    with pytest.raises(ValidationError):
        solve_theta([1], THREE_HALVES, 0)
    sol = solve_theta([2, 7], Q13, 3)
    assert trace_sequence(sol.theta1, 3, 2) == [2, 7]


def test_growth_check_examples():
    ok = geometric_growth_check([1, 2, 4, 8, 16], 1, 0)
    assert ok and ok.B == 3
    bad = geometric_growth_check([100], 1, 0)
    assert not bad and bad.witness == 1
    assert geometric_growth_check([], Fraction(1, 10), 5)
    with pytest.raises(ValidationError):
        geometric_growth_check([3, 2], 1, 0)
    with pytest.raises(ValidationError):
        geometric_growth_check([1], 0, 0)


def test_growth_check_on_liouville_hits():
    orb = compute_orbit(LIOUVILLE, rational_algebraic(2), 0, 800)
    rep = max_runs(orb, Fraction(1, 3))
    hits = count_hits(orb, Fraction(1, 3), keep_indices=True).hit_indices
    assert geometric_growth_check(hits, rep.gamma, rep.gamma0)


def test_logN_fit():
    fit = logN_fit([(math.e, 1), (math.e**2, 2), (math.e**3, 3)])
    assert fit.c == pytest.approx(1.0)
    assert logN_fit([(10, 0), (100, 4), (1000, 9)]).zero_counts
    with pytest.raises(ValidationError):
        logN_fit([(10, 1), (100, 2)])
    with pytest.raises(ValidationError):
        logN_fit([(100, 1), (10, 2), (1000, 3)])


def test_theorem3_slope():
    s = theorem3_slope(Q13)
    want = math.log((1 + 13**0.5) / 2) / math.log((13**0.5 - 1) / 2)
    assert s.lo <= Fraction(want) * (1 + Fraction(1, 10**12)) and Fraction(want) * (1 - Fraction(1, 10**12)) <= s.hi
    assert float(s.hi - s.lo) < 1e-20
    with pytest.raises(NoOutsideConjugate):
        theorem3_slope(PHI)
    with pytest.raises(NoOutsideConjugate):
        theorem3_slope(THREE_HALVES)


def test_delta_bounds_checked():
    orb = compute_orbit(RationalSpec(Fraction(1)), PHI, 0, 5)
    for bad in (0, Fraction(1, 2), -1):
        with pytest.raises(ValidationError):
            count_hits(orb, bad)


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9),
       st.fractions(min_value=Fraction(1, 20), max_value=Fraction(9, 20), max_denominator=20),
       st.integers(5, 200))
def test_runs_partition_the_orbit(xi, delta, N):
    orb = compute_orbit(RationalSpec(xi), Q13, 0, N)
    rep = max_runs(orb, delta)
    assert sum(k for _, k in rep.runs) + rep.count_ge == N
    for (s1, k1), (s2, _) in zip(rep.runs, rep.runs[1:]):
        assert s1 + k1 < s2
    if delta <= Fraction(1, 5):
        assert check_recurrence_in_runs(orb, Q13, delta) == []
