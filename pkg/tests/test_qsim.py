import math

import numpy as np
import pytest

from qexact.boolfun import BooleanFunction, Mask
from qexact.qsim import (
    ERR_MARKED,
    JOINT_STATE,
    PAPER_LITERAL,
    AmplificationSetup,
    analytic_distribution,
    dense_distribution,
    sample,
    tv_distance,
)
from qexact.schedule import m_max, preamp_plan, refined_params


def function_with_ones(n, ones):
    table = np.zeros(1 << n, dtype=np.uint8)
    table[list(ones)] = 1
    return BooleanFunction(n, table)


def all_setups(n):
    setups = [AmplificationSetup.improved(n)]
    setups += [AmplificationSetup.refined(n, m0) for m0 in (0, 2, 4)]
    setups += [AmplificationSetup.junta(n, k) for k in (2, 3) if k < n]
    return setups


def m_cap(setup):
    if setup.variant == "improved":
        return m_max(setup.n)
    if setup.variant == "refined":
        return refined_params(setup.n, setup.m0)[1]
    return refined_params(setup.n, 2)[1]


# --- analytic distribution ------------------------------------------------------


def test_single_error_quarter_rotation():
    # n=2 with one misclassified input: theta = pi/6, one round is exact.
    c = function_with_ones(2, [3])
    h = BooleanFunction.zero(2)
    dist = analytic_distribution(c, h, AmplificationSetup.improved(2), 1)
    assert dist.good_prob == pytest.approx(1.0, abs=1e-12)
    probs = dist.outcome_probs()
    assert probs[(3, 1, None)] == pytest.approx(1.0, abs=1e-12)


def test_no_errors_gives_uniform_correct():
    c = BooleanFunction.random(3, np.random.default_rng(5))
    for setup in all_setups(3):
        for m in (0, 2):
            dist = analytic_distribution(c, c, setup, m)
            assert dist.good_prob == 0.0
            assert dist.prob_readout1() == 0.0
            marginal = dist.x_marginal()
            assert marginal.sum() == pytest.approx(1.0, abs=1e-12)
            if setup.variant != "junta":
                assert np.allclose(marginal, 1 / 8, atol=1e-12)


def test_refined_m0_zero_splits_all_error_mass_to_rot1():
    c = function_with_ones(2, [3])
    h = BooleanFunction.zero(2)
    dist = analytic_distribution(c, h, AmplificationSetup.refined(2, 0), 0)
    probs = dist.outcome_probs()
    expect = {(3, 1, 1): 0.25, (0, 0, 0): 0.25, (1, 0, 0): 0.25, (2, 0, 0): 0.25}
    assert set(probs) == set(expect)
    for key, value in expect.items():
        assert probs[key] == pytest.approx(value, abs=1e-12)
    # the dense oracle agrees
    dense = dense_distribution(c, h, AmplificationSetup.refined(2, 0), 0)
    assert tv_distance(dist, dense) < 1e-12


def test_marked_probability_never_exceeds_rotation_bound(rng):
    for n in (3, 4):
        for setup in all_setups(n):
            if not setup.has_rot:
                continue
            bound = math.sin(math.pi / (2 * (2 * setup.m0 + 1))) ** 2
            for _ in range(10):
                c = BooleanFunction.random(n, rng)
                h = BooleanFunction.random(n, rng)
                dist = analytic_distribution(c, h, setup, 0)
                assert dist.base_marked_prob <= bound + 1e-12


def test_outcome_bits_consistent(rng):
    for n in (3, 4):
        c = BooleanFunction.random(n, rng)
        h = BooleanFunction.random(n, rng)
        err = {int(x) for x in np.flatnonzero(c.table ^ h.table)}
        for setup in all_setups(n):
            dist = analytic_distribution(c, h, setup, 1)
            for (x, readout, rot), p in dist.outcome_probs().items():
                if p == 0.0:
                    continue
                assert readout == (1 if x in err else 0)
                if rot == 1:
                    assert readout == 1


# --- dense backend --------------------------------------------------------------


def test_dense_total_mass_is_one(rng):
    for n in (2, 3, 4):
        for setup in all_setups(n):
            for mode in (JOINT_STATE, PAPER_LITERAL):
                s = AmplificationSetup(setup.variant, n, m0=setup.m0, k=setup.k,
                                       reflection_mode=mode)
                c = BooleanFunction.random(n, rng)
                h = BooleanFunction.random(n, rng)
                for m in (0, 1, 8):
                    dist = dense_distribution(c, h, s, m)
                    assert dist.total_prob() == pytest.approx(1.0, abs=1e-12)


def test_backends_agree_small(rng):
    for n in (2, 3, 4):
        for setup in all_setups(n):
            cap = m_cap(setup)
            for _ in range(4):
                c = BooleanFunction.random(n, rng)
                h = BooleanFunction.random(n, rng)
                for m in range(cap + 1):
                    tv = tv_distance(
                        analytic_distribution(c, h, setup, m),
                        dense_distribution(c, h, setup, m),
                    )
                    assert tv < 1e-9


def test_dense_readout_marginal_matches_error_fraction():
    n = 4
    setup = AmplificationSetup.improved(n)
    for ne in range(0, (1 << n) + 1):
        c = function_with_ones(n, range(ne))
        dist = dense_distribution(c, BooleanFunction.zero(n), setup, 0)
        assert dist.prob_readout1() == pytest.approx(ne / (1 << n), abs=1e-12)


def test_dense_amplification_identity():
    # P(readout=1 after m rounds) follows sin^2((2m+1) asin(sqrt(P1))).
    n = 4
    setup = AmplificationSetup.improved(n)
    for ne in range(0, (1 << n) + 1):
        c = function_with_ones(n, range(ne))
        p1 = ne / (1 << n)
        theta = math.asin(math.sqrt(p1))
        for m in range(m_max(n) + 1):
            dist = dense_distribution(c, BooleanFunction.zero(n), setup, m)
            expect = math.sin((2 * m + 1) * theta) ** 2 if ne else 0.0
            assert dist.prob_readout1() == pytest.approx(expect, abs=1e-10)


def test_conditional_error_distribution_independent_of_m(rng):
    # Within the marked class the input distribution never changes with m.
    for n in (3, 5):
        c = BooleanFunction.random(n, rng)
        h = BooleanFunction.random(n, rng)
        if np.array_equal(c.table, h.table):
            continue
        for setup in all_setups(n):
            reference = None
            for m in range(4):
                dist = dense_distribution(c, h, setup, m)
                marked = {
                    x: p for (x, b, r), p in dist.outcome_probs().items()
                    if b == 1 and (r is None or r == 1)
                }
                total = sum(marked.values())
                if total < 1e-12:
                    continue
                normalized = {x: p / total for x, p in marked.items()}
                if reference is None:
                    reference = normalized
                else:
                    assert set(normalized) == set(reference)
                    for x in normalized:
                        assert normalized[x] == pytest.approx(reference[x], abs=1e-9)


def test_preamplification_concentrates_low_weight():
    # After the pre-amplification rounds the weight <= k mass is
    # sin^2((2p+1) phi); at (n=8, k=2) that is 0.863025 (p=2).
    n, k = 8, 2
    plan = preamp_plan(n, k)
    expect = math.sin((2 * plan.p_leq_k + 1) * plan.phi) ** 2
    c = BooleanFunction.random(n, np.random.default_rng(17))
    dist = dense_distribution(c, BooleanFunction.zero(n), AmplificationSetup.junta(n, k), 0)
    marginal = dist.x_marginal()
    weights = np.array([x.bit_count() for x in range(1 << n)])
    low_mass = marginal[weights <= k].sum()
    assert low_mass == pytest.approx(expect, abs=1e-12)
    assert expect == pytest.approx(0.8630247313994914, abs=1e-12)


def test_paper_literal_reflection_deviates(rng):
    setup = AmplificationSetup.refined(4, 2)
    literal = AmplificationSetup.refined(4, 2, PAPER_LITERAL)
    worst = 0.0
    for _ in range(5):
        c = BooleanFunction.random(4, rng)
        h = BooleanFunction.random(4, rng)
        for m in (1, 2, 4):
            worst = max(
                worst,
                tv_distance(
                    analytic_distribution(c, h, setup, m),
                    dense_distribution(c, h, literal, m),
                ),
            )
    assert worst > 1e-3


# --- sampling -------------------------------------------------------------------


def test_sample_zero_shots(rng):
    c = BooleanFunction.random(3, rng)
    h = BooleanFunction.random(3, rng)
    assert sample(c, h, AmplificationSetup.improved(3), 1, 0, rng) == []


def test_sample_deterministic():
    c = BooleanFunction.random(4, np.random.default_rng(3))
    h = BooleanFunction.zero(4)
    setup = AmplificationSetup.junta(4, 2)
    a = sample(c, h, setup, 2, 200, np.random.default_rng(42))
    b = sample(c, h, setup, 2, 200, np.random.default_rng(42))
    assert a == b


def test_sample_frequency_matches_good_probability():
    c = BooleanFunction.random(5, np.random.default_rng(8))
    h = BooleanFunction.zero(5)
    for setup in (AmplificationSetup.improved(5), AmplificationSetup.refined(5, 2)):
        for m in (0, 1, 3):
            dist = analytic_distribution(c, h, setup, m)
            g = dist.good_prob
            shots = 100_000
            outcomes = sample(c, h, setup, m, shots, np.random.default_rng(99))
            if setup.has_rot:
                hits = sum(1 for o in outcomes if o.readout == 1 and o.rot == 1)
            else:
                hits = sum(1 for o in outcomes if o.readout == 1)
            sigma = math.sqrt(max(g * (1 - g), 1e-12) * shots)
            assert abs(hits - g * shots) <= 4 * sigma + 1


def test_sample_with_single_correct_member(rng):
    # Nearly every input is misclassified: the correct-class sampler must
    # still return the one remaining input every time it is drawn.
    n = 5
    c = function_with_ones(n, range(1, 1 << n))
    outcomes = sample(c, BooleanFunction.zero(n), AmplificationSetup.improved(n), 0, 4000, rng)
    corrects = [o for o in outcomes if o.readout == 0]
    assert corrects and all(o.x == Mask(0, n) for o in corrects)


def test_sample_respects_outcome_semantics(rng):
    c = BooleanFunction.random(4, rng)
    h = BooleanFunction.random(4, rng)
    err = {int(x) for x in np.flatnonzero(c.table ^ h.table)}
    for setup in all_setups(4):
        for o in sample(c, h, setup, 1, 500, rng):
            assert o.readout == (1 if o.x.bits in err else 0)
            if setup.has_rot:
                assert o.rot in (0, 1)
                if o.rot == 1:
                    assert o.readout == 1
            else:
                assert o.rot is None


# --- argument validation ----------------------------------------------------------


def test_validation_errors(rng):
    c = BooleanFunction.random(3, rng)
    h = BooleanFunction.random(3, rng)
    with pytest.raises(ValueError):
        analytic_distribution(c, BooleanFunction.zero(4), AmplificationSetup.improved(3), 0)
    with pytest.raises(ValueError):
        analytic_distribution(c, h, AmplificationSetup.naive(3), 1)
    with pytest.raises(ValueError):
        AmplificationSetup.junta(3, 3)
    with pytest.raises(ValueError):
        AmplificationSetup.junta(3, 0)
    with pytest.raises(ValueError):
        dense_distribution(
            BooleanFunction.zero(13),
            BooleanFunction.zero(13),
            AmplificationSetup.improved(13),
            0,
        )
    with pytest.raises(ValueError):
        AmplificationSetup("bogus", 3)
