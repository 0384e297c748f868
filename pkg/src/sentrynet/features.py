"""Kernel feature maps and the streaming expected-similarity detector core.

A node summarizes each neighbour's behaviour in a 20 s slot as a 3-metric
vector (transmissions, forwarding ratio, advertised rank).  The vector is
normalized to [0,1]^3, embedded with a Monte Carlo approximation of the RBF
kernel feature map (cos/sin pairs), and compared against a running mean
embedding of the neighbour's past slots.  The inner product approximates the
mean RBF similarity to history without storing any of it.
"""

import numpy as np

METRIC_DIM = 3  # (tx count, rx/tx ratio, average rank), fixed order


def normalize_metrics(raw, scales):
    """Scale a raw metric triple into [0,1]^3, clamping at 1.

    Returns None when any raw component is non-finite (the slot sample is
    treated as missing).  ``scales`` must be strictly positive.
    """
    raw = np.asarray(raw, dtype=float)
    scales = np.asarray(scales, dtype=float)
    if raw.shape != (METRIC_DIM,) or scales.shape != (METRIC_DIM,):
        raise ValueError("metric vectors have exactly %d components" % METRIC_DIM)
    if np.any(scales <= 0):
        raise ValueError("normalization scales must be > 0")
    if not np.all(np.isfinite(raw)):
        return None
    return np.minimum(raw / scales, 1.0)


class RandomFeatureMap:
    """Frozen m x d Gaussian projection shared by all of a node's neighbours.

    Entries are drawn once from N(0, 1/sigma_sq); the implied kernel is
    exp(-||x - y||^2 / (2 * sigma_sq)).  The map is never redrawn, so
    similarity scores for one observer stay comparable across slots.
    """

    def __init__(self, m, sigma_sq, seed):
        if m < 1:
            raise ValueError("sample count m must be >= 1")
        if sigma_sq <= 0:
            raise ValueError("sigma_sq must be > 0")
        self.m = int(m)
        self.sigma_sq = float(sigma_sq)
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.z = rng.normal(0.0, 1.0 / np.sqrt(self.sigma_sq), size=(self.m, METRIC_DIM))
        self._inv_sqrt_m = 1.0 / np.sqrt(self.m)

    def __call__(self, v):
        return map_features(v, self)


def map_features(v, fmap):
    """Embed a normalized metric vector as 2m interleaved cos/sin features.

    data[2j] = cos(z_j . v)/sqrt(m), data[2j+1] = sin(z_j . v)/sqrt(m); each
    pair contributes 1/m to the squared norm, so ||result|| == 1.
    """
    w = fmap.z @ np.asarray(v, dtype=float)
    out = np.empty(2 * fmap.m)
    out[0::2] = np.cos(w)
    out[1::2] = np.sin(w)
    out *= fmap._inv_sqrt_m
    return out


def rbf_kernel(x, y, sigma_sq):
    """Closed-form RBF kernel the random features approximate."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return float(np.exp(-float(d @ d) / (2.0 * sigma_sq)))


class KeaVector:
    """Running mean embedding of a neighbour's past feature vectors.

    Maintained as an exponentially weighted moving average, so the norm stays
    <= 1 (convex combinations of unit vectors).  No similarity may be reported
    before the first feature vector is absorbed.
    """

    def __init__(self, m):
        self.data = np.zeros(2 * m)
        self.initialized = False


def expected_similarity(f, mu):
    """Inner product of a feature vector with the mean embedding.

    Raises if the mean embedding has no history yet; the caller must
    bootstrap via update_kea first.
    """
    if not mu.initialized:
        raise ValueError("no history: KEA vector not initialized")
    return float(f @ mu.data)


def anomaly_score(similarity):
    """Map similarity onto an anomaly score in [0,1] (1 = fully dissimilar).

    Monte Carlo noise can push the raw inner product slightly outside [0,1];
    it is clamped rather than propagated.
    """
    return 1.0 - min(max(similarity, 0.0), 1.0)


def update_kea(mu, f_prev, gamma, gate_open):
    """Absorb the just-scored feature vector into the mean embedding.

    The first sample always bootstraps the vector regardless of the gate;
    afterwards the blend only runs while the gate is open (slots flagged as
    anomalous must not teach the model the anomalous behaviour).
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0,1]")
    if not mu.initialized:
        mu.data = np.array(f_prev, dtype=float, copy=True)
        mu.initialized = True
    elif gate_open:
        mu.data = gamma * f_prev + (1.0 - gamma) * mu.data
    return mu
