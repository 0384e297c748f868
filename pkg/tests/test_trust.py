"""Subjective trust curve and link penalty tests."""

import math

import mpmath
import pytest

from sentrynet.trust import (LinkPenaltyState, TrustParams, is_flagged,
                             subjective_trust, trust_weighted_penalty)


def _csch_oracle(x):
    return float(1 / mpmath.sinh(mpmath.mpf(x)))


def tau_oracle(eta, k):
    """Arbitrary-precision reference for the penalty curve."""
    with mpmath.workdps(50):
        return float(mpmath.csch(k * (1 - mpmath.mpf(eta))) - mpmath.csch(k) + 1)


def test_tau_at_zero_is_exactly_one():
    assert subjective_trust(0.0, TrustParams()) == 1.0


def test_tau_at_alpha_reference_value():
    # csch(1.5) - csch(6) + 1, checked against mpmath at 50 digits
    tau = subjective_trust(0.75, TrustParams(k=6))
    assert tau == pytest.approx(1.46468, abs=1e-4)
    assert tau == pytest.approx(tau_oracle(0.75, 6), abs=1e-12)


def test_tau_singularity_maps_to_cap():
    params = TrustParams(tau_max=1e6)
    assert subjective_trust(1.0, params) == 1e6


def test_tau_monotone_on_grid():
    params = TrustParams()
    values = [subjective_trust(i / 1000.0, params) for i in range(1001)]
    for a, b in zip(values, values[1:]):
        assert b >= a
    assert all(v >= 1.0 for v in values)


def test_tau_knee_shape():
    params = TrustParams(k=6)
    assert subjective_trust(0.75, params) < 1.5
    assert subjective_trust(0.95, params) > 3.0


def test_tau_matches_oracle_across_range():
    params = TrustParams(k=6, tau_max=1e12)
    for i in range(1, 100):
        eta = i / 100.0
        assert subjective_trust(eta, params) == pytest.approx(
            tau_oracle(eta, 6), rel=1e-10)


def test_tau_rejects_out_of_range_score():
    with pytest.raises(ValueError):
        subjective_trust(-0.1, TrustParams())
    with pytest.raises(ValueError):
        subjective_trust(1.1, TrustParams())


def test_flag_is_strictly_above_alpha():
    params = TrustParams(alpha=0.75)
    assert not is_flagged(0.5, params)
    assert not is_flagged(0.75, params)
    assert is_flagged(0.76, params)


def test_flag_monotone_in_eta():
    params = TrustParams(alpha=0.6)
    flagged = [is_flagged(i / 100.0, params) for i in range(101)]
    # once true, stays true
    assert flagged == sorted(flagged)


def test_penalty_first_observation_seeds_state():
    params = TrustParams()
    state = trust_weighted_penalty(LinkPenaltyState(), tau=1.0, etx=1.0, params=params)
    assert state.p_hat == 1.0
    assert state.initialized


def test_penalty_ewma_arithmetic():
    params = TrustParams(alpha_ewma=0.3)
    state = LinkPenaltyState(p_hat=2.0, initialized=True)
    trust_weighted_penalty(state, tau=1.0, etx=1.5, params=params)
    assert state.p_hat == pytest.approx(0.3 * 2.0 + 0.7 * 1.5)


def test_penalty_degenerate_smoothing_freezes():
    params = TrustParams(alpha_ewma=1.0)
    state = LinkPenaltyState(p_hat=3.3, initialized=True)
    for tau, etx in ((1.0, 1.0), (5.0, 2.0), (100.0, 8.0)):
        trust_weighted_penalty(state, tau, etx, params)
        assert state.p_hat == 3.3


def test_unit_trust_penalty_is_bitwise_plain_etx_average():
    # zero performance penalty: with tau == 1 the weighted and unweighted
    # recurrences produce identical floats
    params = TrustParams(alpha_ewma=0.3)
    etxs = [1.0, 1.5, 2.2, 1.1, 1.9, 3.0, 1.0]
    weighted = LinkPenaltyState()
    plain = None
    for etx in etxs:
        trust_weighted_penalty(weighted, 1.0, etx, params)
        if plain is None:
            plain = 1.0 * etx
        else:
            plain = params.alpha_ewma * plain + (1.0 - params.alpha_ewma) * etx
        assert weighted.p_hat == plain


def test_params_validation():
    with pytest.raises(ValueError):
        TrustParams(k=0).validate()
    with pytest.raises(ValueError):
        TrustParams(alpha=1.0).validate()
    with pytest.raises(ValueError):
        TrustParams(tau_max=1.0).validate()
    with pytest.raises(ValueError):
        TrustParams(alpha_ewma=1.2).validate()
    assert TrustParams().validate() is not None


def test_csch_identity_between_paper_form_and_code_form():
    # -csch(k*eta - k) + csch(-k) + 1 equals csch(k*(1-eta)) - csch(k) + 1
    k = 6.0
    for i in range(1, 100):
        eta = i / 100.0
        alt = -_csch_oracle(k * eta - k) + _csch_oracle(-k) + 1
        assert subjective_trust(eta, TrustParams(k=k, tau_max=1e12)) == pytest.approx(alt, rel=1e-9)
