"""Collapsed Gibbs sampler for the individual x location LDA model."""

from typing import Callable, Optional

import numpy as np

from src.errors import EmptyNetworkError
from src.lda.kernels import gibbs_sweep
from src.lda.perplexity import log_likelihood
from src.models.community import CommunityModel, LdaConfig, SamplerState
from src.models.network import EcoNetwork
from src.utils.logger import ProgressTracker, get_logger
from src.utils.random import make_rng

logger = get_logger(__name__)

SweepCallback = Callable[[int, SamplerState], None]

# substream tag for restarts after the first chain
_RESTART = 1


class GibbsSampler:
    """Runs one collapsed Gibbs chain over the tokens of a network.

    Every individual's row expands to ``N_i`` location tokens; each token
    carries a community assignment. A sweep resamples every token once.
    """

    def __init__(
        self, net: EcoNetwork, config: LdaConfig, log_every: int = 100, chain: int = 0
    ):
        """Initialize the sampler.

        Args:
            net: Filtered, nonempty network
            config: Validated LDA configuration
            log_every: Sweeps between progress log lines
            chain: Restart number; chain 0 draws from the seed's own stream
        """
        if net.n_individuals == 0 or net.total_tokens == 0:
            raise EmptyNetworkError("cannot fit a model on an empty network")
        self.net = net
        self.config = config
        self.alpha = config.alpha_vector()
        self.beta = config.beta_vector(net.n_locations)
        self.beta_sum = float(self.beta.sum())
        self.row_sums = net.row_sums
        self.chain = chain
        self._rng = make_rng(config.seed) if chain == 0 else make_rng(config.seed, _RESTART, chain)
        label = f"gibbs K={config.K}" + (f" chain {chain + 1}" if config.chains > 1 else "")
        self._tracker = ProgressTracker(label, log_every=log_every)
        self.state = self._initial_state()
        self.sweeps_done = 0

    def _initial_state(self) -> SamplerState:
        individual_of, location_of = self.net.tokens()
        assignments = self._rng.integers(0, self.config.K, size=individual_of.shape[0])
        return SamplerState.from_assignments(
            individual_of,
            location_of,
            assignments.astype(np.int64),
            self.net.n_individuals,
            self.net.n_locations,
            self.config.K,
        )

    def sweep(self) -> None:
        """Resample every token once."""
        state = self.state
        uniforms = self._rng.random(state.token_assignments.shape[0])
        gibbs_sweep(
            state.individual_of,
            state.location_of,
            state.token_assignments,
            state.counts_ik,
            state.counts_kj,
            state.counts_k,
            self.alpha,
            self.beta,
            self.beta_sum,
            uniforms,
        )
        self.sweeps_done += 1

    def current_estimates(self) -> tuple[np.ndarray, np.ndarray]:
        """Smoothed count ratios (W, H) for the current state."""
        state = self.state
        W = (state.counts_ik + self.alpha) / (self.row_sums[:, None] + self.alpha.sum())
        H = (state.counts_kj + self.beta) / (state.counts_k[:, None] + self.beta_sum)
        return W, H

    def run(self, on_sweep: Optional[SweepCallback] = None) -> CommunityModel:
        """Run all configured sweeps and return the posterior-mean model.

        Args:
            on_sweep: Called as ``on_sweep(sweep_number, state)`` after every sweep

        Returns:
            Fitted CommunityModel
        """
        config = self.config
        W_sum = np.zeros((self.net.n_individuals, config.K))
        H_sum = np.zeros((config.K, self.net.n_locations))
        retained = 0

        for sweep in range(1, config.iterations + 1):
            self.sweep()
            if on_sweep is not None:
                on_sweep(sweep, self.state)
            if sweep > config.burn_in and (not config.last_sweep_only or sweep == config.iterations):
                W, H = self.current_estimates()
                W_sum += W
                H_sum += H
                retained += 1
            self._tracker.update(sweep, config.iterations)

        self._tracker.complete(f"{retained} sweeps averaged")
        W = W_sum / retained
        H = H_sum / retained
        # averaging leaves rounding drift of order 1e-16; renormalize exactly
        W /= W.sum(axis=1, keepdims=True)
        H /= H.sum(axis=1, keepdims=True)
        return CommunityModel(
            config=config,
            W=W,
            H=H,
            individuals=self.net.individuals,
            locations=self.net.locations,
        )


def _shifted(on_sweep: SweepCallback, offset: int) -> SweepCallback:
    def shifted(sweep: int, state: SamplerState) -> None:
        on_sweep(offset + sweep, state)

    return shifted


def fit(
    net: EcoNetwork,
    config: LdaConfig,
    on_sweep: Optional[SweepCallback] = None,
    log_every: int = 100,
) -> CommunityModel:
    """Fit the LDA community model by collapsed Gibbs sampling.

    Deterministic given ``config.seed``. With ``config.chains > 1`` every
    chain runs all sweeps and the model with the highest training
    log-likelihood is returned (ties go to the earlier chain). ``on_sweep``
    sees sweeps numbered consecutively across chains.
    """
    logger.info(
        f"Fitting K={config.K} on {net.n_individuals} individuals, "
        f"{net.n_locations} locations, {net.total_tokens} tokens "
        f"({config.iterations} sweeps, burn-in {config.burn_in}, chains {config.chains})"
    )
    models = []
    for chain in range(config.chains):
        callback = _shifted(on_sweep, chain * config.iterations) if on_sweep else None
        sampler = GibbsSampler(net, config, log_every=log_every, chain=chain)
        models.append(sampler.run(on_sweep=callback))

    best = 0
    if len(models) > 1:
        scores = [log_likelihood(m.W, m.H, net) for m in models]
        best = int(np.argmax(scores))
        logger.info(
            f"K={config.K} chain log-likelihoods "
            + ", ".join(f"{s:.2f}" for s in scores)
            + f"; keeping chain {best + 1}"
        )
    logger.info(f"Finished K={config.K} fit")
    return models[best]


def top_locations(model: CommunityModel, n: int = 10) -> list[dict]:
    """The ``n`` most probable locations of every activity pattern profile.

    Ties are broken by location order. Communities are labelled 1..K.
    """
    n = max(1, min(n, model.n_locations))
    rows = []
    for k in range(model.K):
        order = np.argsort(-model.H[k], kind="stable")[:n]
        for rank, j in enumerate(order, start=1):
            rows.append({
                "community": k + 1,
                "rank": rank,
                "location_id": model.locations[j],
                "probability": float(model.H[k, j]),
            })
    return rows
