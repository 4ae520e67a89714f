"""Schedules, certified factors, and multi-pass convergence."""

import math
from fractions import Fraction
from random import Random

import pytest

import matchstream as ms
from matchstream.multipass import BETA_MIN
from _corpus import coverage_uniform, exact_opt, hypergraph_matching

TOL = 1e-9


def _fraction_gamma_chain(p, d):
    """Independent rational evaluation of the worst-case recurrence."""
    g = Fraction(4 * p)
    chain = [g]
    for _ in range(d - 1):
        g = 4 * p * g * (g - 1) / (g - 1 + p) ** 2
        chain.append(g)
    return chain


def test_harmonic_schedule_betas():
    sched = ms.Schedule.matroid_harmonic()
    assert ms.schedule_beta(sched, 1) == 1.0
    assert ms.schedule_beta(sched, 3) == pytest.approx(1.0 / 3.0)


def test_recurrence_schedule_betas():
    sched = ms.Schedule.matchoid_recurrence(2)
    assert ms.schedule_beta(sched, 1) == 1.0
    assert ms.schedule_beta(sched, 2, gamma_prev=8.0) == pytest.approx(5.0 / 9.0)


def test_recurrence_matches_harmonic_at_p_equal_one():
    # with p=1 and gamma_prev=4 the recurrence gives beta_2 = 1/2 = 1/i
    sched = ms.Schedule.matchoid_recurrence(1)
    assert ms.schedule_beta(sched, 2, gamma_prev=4.0) == pytest.approx(0.5)
    chain = _fraction_gamma_chain(1, 16)
    for i, g in enumerate(chain, 1):
        assert g == Fraction(2) * (i + 1) / i


def test_fixed_and_custom_schedules():
    assert ms.schedule_beta(ms.Schedule.fixed(0.25), 7) == 0.25
    sched = ms.Schedule.custom([1.0, 0.5, 0.25])
    assert ms.schedule_beta(sched, 2) == 0.5
    with pytest.raises(ms.PreconditionError):
        ms.schedule_beta(sched, 4)
    with pytest.raises(ms.PreconditionError):
        ms.Schedule("fixed")
    with pytest.raises(ms.PreconditionError):
        ms.Schedule("no-such-kind")


def test_beta_clamp_when_factor_already_past_target():
    sched = ms.Schedule.matchoid_recurrence(2)
    assert ms.schedule_beta(sched, 5, gamma_prev=2.5) == BETA_MIN


def test_gamma_recurrence_against_rational_oracle():
    for p in (1, 2, 3):
        expected = _fraction_gamma_chain(p, 16)
        g = 4.0 * p
        assert g == float(expected[0])
        for i in range(1, 16):
            g = ms.gamma_recurrence_step(p, g)
            assert g == pytest.approx(float(expected[i]), abs=1e-12)


def test_recurrence_example_values_p2():
    chain = _fraction_gamma_chain(2, 2)
    assert chain[0] == 8
    assert chain[1] == Fraction(448, 81)
    g2 = ms.gamma_recurrence_step(2, 8.0)
    assert g2 == pytest.approx(448.0 / 81.0)
    assert g2 <= 2 + 1 + 4 * 2 / 2    # stays below the pass-2 closed form


def test_worst_case_gamma_closed_forms():
    harmonic = ms.Schedule.matroid_harmonic()
    assert [ms.worst_case_gamma(harmonic, i) for i in (1, 2, 3, 4)] == \
        pytest.approx([4.0, 3.0, 8.0 / 3.0, 2.5])
    matchoid = ms.Schedule.matchoid_recurrence(3)
    assert ms.worst_case_gamma(matchoid, 6) == pytest.approx(3 + 1 + 12 / 6)
    assert math.isinf(ms.worst_case_gamma(ms.Schedule.fixed(0.5), 3))


def test_recurrence_is_nonincreasing_and_bounded_below():
    for p in range(1, 9):
        g = 4.0 * p
        prev = g
        for i in range(2, 10001):
            g = ms.gamma_recurrence_step(p, g)
            assert g <= prev + 1e-12
            assert g >= p + 1
            prev = g


def test_recurrence_stays_under_closed_form():
    for p in (1, 2, 3):
        g = 4.0 * p
        for i in range(1, 17):
            if i > 1:
                g = ms.gamma_recurrence_step(p, g)
            assert g <= p + 1 + 4 * p / i + 1e-12


def test_certified_gamma_example():
    got = ms.certified_gamma(2, 4.0, 0.5, 0.7, 1)
    assert got == pytest.approx(2.8)
    # the single-pass branch alone evaluates to 3.1 here
    single = (1 / 0.5 + 0) * 0.3 + 1 + 0.5 + 1
    assert single == pytest.approx(3.1)


def test_certified_gamma_balance_point_equalizes_branches():
    rng = Random(12)
    for _ in range(40):
        p = rng.randint(1, 4)
        gamma = rng.uniform(p + 1.5, 30.0)
        beta = rng.uniform(0.05, 1.0)
        delta = p * (1 + beta) ** 2 / (p + beta * (gamma - 1 + p))
        carried = gamma * delta
        single = (p / beta + p - 1) * (1 - delta) + p + beta * p + 1
        assert carried == pytest.approx(single, abs=1e-9)
        assert ms.certified_gamma(2, gamma, beta, delta, p) == \
            pytest.approx(carried, abs=1e-9)


def test_certified_gamma_no_progress():
    got = ms.certified_gamma(3, 3.0, 0.5, 1.0, 1)
    assert got == min(3.0, 1 + 0.5 + 1)


def test_certified_gamma_first_pass_has_single_branch():
    assert ms.certified_gamma(1, math.inf, 1.0, 0.0, 2) == pytest.approx(8.0)
    assert ms.certified_gamma(1, None, 1.0, 0.0, 1) == pytest.approx(4.0)


def test_certified_gamma_nonpositive_beta_gives_no_single_pass_claim():
    assert math.isinf(ms.certified_gamma(2, math.inf, 0.0, 0.5, 1))
    assert ms.certified_gamma(2, 3.0, 0.0, 0.5, 1) == pytest.approx(1.5)


def test_first_pass_certificate_is_4p():
    for builder, expect_p in ((coverage_uniform, 1), (hypergraph_matching, 3)):
        inst = builder(5)
        mp = inst.build_matchoid()
        sched = (ms.Schedule.matroid_harmonic() if expect_p == 1
                 else ms.Schedule.matchoid_recurrence(mp.p))
        run = ms.multipass_run(inst.build_oracle(), mp,
                               ms.stream_order(inst.n), sched, 1)
        assert mp.p == expect_p
        assert run.certificates[0].gamma_certified == pytest.approx(4.0 * mp.p)
        assert run.certificates[0].k_alpha_slack == 0.0


def test_degenerate_zero_objective_reports_infinite_factor():
    oracle = ms.ModularOracle([0, 0, 0])
    mp = ms.PMatchoid(range(3), [ms.UniformMatroid(range(3), 2)], p=1)
    run = ms.multipass_run(oracle, mp, [0, 1, 2],
                           ms.Schedule.matroid_harmonic(), 3)
    assert all(math.isinf(c.gamma_certified) for c in run.certificates)


def test_nonzero_empty_value_keeps_certificates_sound():
    # constant-plus-modular table: f(empty) = 2
    weights = [1.0, 2.0, 3.0]
    table = [2.0 + sum(w for j, w in enumerate(weights) if mask >> j & 1)
             for mask in range(8)]
    oracle = ms.TableOracle(3, table, monotone=True)
    mp = ms.PMatchoid(range(3), [ms.UniformMatroid(range(3), 2)], p=1)
    opt = ms.brute_force_opt(ms.TableOracle(3, table, monotone=True), mp)
    run = ms.multipass_run(oracle, mp, [0, 1, 2],
                           ms.Schedule.matroid_harmonic(), 5)
    assert run.pass_results[0].f_init == 2.0
    for res, cert in zip(run.pass_results, run.certificates):
        assert cert.opt_upper_bound(res.f_final) >= opt.opt_value - TOL


def test_multipass_certificates_sound_and_below_closed_form():
    for seed in range(10):
        inst = coverage_uniform(seed)
        opt = exact_opt(inst).opt_value
        mp = inst.build_matchoid()
        run = ms.multipass_run(inst.build_oracle(), mp,
                               ms.stream_order(inst.n),
                               ms.Schedule.matroid_harmonic(), 10)
        for res, cert in zip(run.pass_results, run.certificates):
            assert cert.opt_upper_bound(res.f_final) >= opt - TOL
            closed = ms.worst_case_gamma(ms.Schedule.matroid_harmonic(),
                                         cert.pass_index)
            assert cert.gamma_certified <= closed + TOL


def test_objective_never_decreases_across_passes():
    inst = coverage_uniform(14)
    run = ms.multipass_run(inst.build_oracle(), inst.build_matchoid(),
                           ms.stream_order(inst.n),
                           ms.Schedule.matroid_harmonic(), 8)
    values = [r.f_final for r in run.pass_results]
    assert values == sorted(values)
    assert values[0] >= run.pass_results[0].f_init


def test_early_stop_on_target_gamma():
    inst = coverage_uniform(7)
    run = ms.multipass_run(inst.build_oracle(), inst.build_matchoid(),
                           ms.stream_order(inst.n),
                           ms.Schedule.matroid_harmonic(), 16,
                           target_gamma=2.6)
    assert run.passes_run < 16
    assert run.certificates[-1].gamma_certified <= 2.6


def test_recurrence_schedule_requires_matching_p():
    inst = coverage_uniform(1)
    with pytest.raises(ms.PreconditionError):
        ms.multipass_run(inst.build_oracle(), inst.build_matchoid(),
                         ms.stream_order(inst.n),
                         ms.Schedule.matchoid_recurrence(2), 2)


def test_per_pass_shuffle_keeps_guarantees():
    inst = coverage_uniform(9)
    opt = exact_opt(inst).opt_value
    run = ms.multipass_run(inst.build_oracle(), inst.build_matchoid(),
                           ms.stream_order(inst.n),
                           ms.Schedule.matroid_harmonic(), 8,
                           per_pass_shuffle_seed=5)
    for res, cert in zip(run.pass_results, run.certificates):
        assert cert.opt_upper_bound(res.f_final) >= opt - TOL


def test_slack_term_reported_for_positive_alpha():
    inst = coverage_uniform(3)
    mp = inst.build_matchoid()
    alpha = 0.25
    run = ms.multipass_run(inst.build_oracle(), mp, ms.stream_order(inst.n),
                           ms.Schedule.matroid_harmonic(), 4, alpha)
    opt = exact_opt(inst).opt_value
    for cert in run.certificates:
        assert cert.k_alpha_slack == pytest.approx(mp.rank_k * alpha)
    for res, cert in zip(run.pass_results, run.certificates):
        assert cert.opt_upper_bound(res.f_final) >= opt - TOL
