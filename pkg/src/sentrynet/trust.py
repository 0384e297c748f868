"""Subjective trust: anomaly score -> link penalty multiplier.

The penalty curve is a shifted hyperbolic cosecant: flat at 1 while the
anomaly score is small, then growing steeply as the score approaches 1.  A
fully trusted neighbour therefore routes exactly as it would without the
defense, while a distrusted one becomes arbitrarily expensive.
"""

import math
from dataclasses import dataclass

TRUST_SPAWN_THRESHOLD = 1.1  # parent switches with old tau above this are trust-induced


@dataclass
class TrustParams:
    k: float = 6.0            # detection sensitivity of the penalty curve
    alpha: float = 0.75       # flagging / gating threshold on the anomaly score
    tau_max: float = 1e6      # cap instead of the csch singularity at score 1
    alpha_ewma: float = 0.3   # smoothing weight of the link penalty moving average

    def validate(self):
        if self.k <= 0:
            raise ValueError("k must be > 0")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0,1)")
        if self.tau_max <= 1.0:
            raise ValueError("tau_max must be > 1")
        if not 0.0 <= self.alpha_ewma <= 1.0:
            raise ValueError("alpha_ewma must lie in [0,1]")
        return self


def _csch(x):
    return 1.0 / math.sinh(x)


def subjective_trust(eta, params):
    """Penalty multiplier tau >= 1 for an anomaly score in [0,1].

    tau = csch(k*(1-eta)) - csch(k) + 1, capped at params.tau_max.  Exactly 1
    at eta = 0; the csch singularity at eta = 1 maps to the cap.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("anomaly score must lie in [0,1]")
    k = params.k
    if eta >= 1.0:
        return params.tau_max
    tau = _csch(k * (1.0 - eta)) - _csch(k) + 1.0
    return min(tau, params.tau_max)


def is_flagged(eta, params):
    """Strictly-above-alpha predicate shared by KEA gating, ticket spawning
    and detection accounting."""
    return eta > params.alpha


@dataclass
class LinkPenaltyState:
    p_hat: float = 0.0
    initialized: bool = False


def trust_weighted_penalty(state, tau, etx, params):
    """Advance the smoothed trust-weighted link penalty by one slot.

    p_hat(t) = ALPHA * p_hat(t-1) + (1-ALPHA) * tau * etx, seeded with
    tau * etx on the first observation.  With tau == 1 this is bitwise the
    plain ETX moving average, which is what makes the defense free when no
    attack is present.
    """
    if not state.initialized:
        state.p_hat = tau * etx
        state.initialized = True
    else:
        state.p_hat = params.alpha_ewma * state.p_hat + (1.0 - params.alpha_ewma) * tau * etx
    return state
