"""Compiled collapsed Gibbs sweeps.

These compile down with numba (``njit``), so they use a restricted subset of
numpy. Uniform draws are supplied by the caller; the kernels themselves are
deterministic functions of their inputs.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _draw(weights_cumulative, total, u):
    target = u * total
    K = weights_cumulative.shape[0]
    for k in range(K - 1):
        if target < weights_cumulative[k]:
            return k
    return K - 1


@njit(cache=True)
def gibbs_sweep(individual_of, location_of, z, counts_ik, counts_kj, counts_k,
                alpha, beta, beta_sum, uniforms):
    """Resample every token's community once, in token order.

    p(k) is proportional to
    (counts_ik - token + alpha_k) * (counts_kj - token + beta_j) / (counts_k - token + sum(beta)).
    """
    K = counts_k.shape[0]
    cumulative = np.empty(K, dtype=np.float64)
    for t in range(z.shape[0]):
        i = individual_of[t]
        j = location_of[t]
        old = z[t]

        counts_ik[i, old] -= 1
        counts_kj[old, j] -= 1
        counts_k[old] -= 1

        total = 0.0
        for k in range(K):
            total += (counts_ik[i, k] + alpha[k]) * (counts_kj[k, j] + beta[j]) / (
                counts_k[k] + beta_sum
            )
            cumulative[k] = total

        new = _draw(cumulative, total, uniforms[t])
        z[t] = new
        counts_ik[i, new] += 1
        counts_kj[new, j] += 1
        counts_k[new] += 1


@njit(cache=True)
def foldin_sweep(individual_of, location_of, z, counts_ik, alpha, H, uniforms):
    """Resample held-out tokens with the activity profiles H frozen.

    p(k) is proportional to (counts_ik - token + alpha_k) * H_kj.
    """
    K = H.shape[0]
    cumulative = np.empty(K, dtype=np.float64)
    for t in range(z.shape[0]):
        i = individual_of[t]
        j = location_of[t]
        old = z[t]
        counts_ik[i, old] -= 1

        total = 0.0
        for k in range(K):
            total += (counts_ik[i, k] + alpha[k]) * H[k, j]
            cumulative[k] = total

        new = _draw(cumulative, total, uniforms[t])
        z[t] = new
        counts_ik[i, new] += 1
