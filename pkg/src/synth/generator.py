"""Draw synthetic eco-networks from the LDA generative model."""

import numpy as np
from scipy import sparse

from src.errors import ValidationError
from src.models.network import EcoNetwork
from src.models.synth import GroundTruth, NeighborhoodPlan, SynthSpec
from src.utils.logger import get_logger
from src.utils.random import make_rng

logger = get_logger(__name__)


def _ids(prefix: str, count: int, min_width: int) -> tuple[str, ...]:
    width = max(min_width, len(str(count)))
    return tuple(f"{prefix}{k + 1:0{width}d}" for k in range(count))


def _chunks(members: np.ndarray, size: int) -> list[np.ndarray]:
    """Split into groups of at least ``size`` (the remainder joins earlier groups)."""
    if members.size == 0:
        return []
    return np.array_split(members, max(1, members.size // size))


def _assign_neighborhoods(
    spec: SynthSpec,
    individuals: tuple[str, ...],
    labels: np.ndarray,
    rng: np.random.Generator,
) -> dict[int, str]:
    if spec.neighborhood_plan is NeighborhoodPlan.CUSTOM:
        mapping = spec.custom_neighborhoods or {}
        missing = [ind for ind in individuals if ind not in mapping]
        if missing:
            raise ValidationError(f"custom neighborhood map misses {len(missing)} individuals")
        return {i: str(mapping[ind]) for i, ind in enumerate(individuals)}

    if spec.neighborhood_plan is NeighborhoodPlan.ALIGNED:
        groups = []
        for k in range(spec.K_true):
            groups.extend(_chunks(np.flatnonzero(labels == k), spec.neighborhood_size))
    else:
        groups = [np.sort(g) for g in _chunks(rng.permutation(spec.I), spec.neighborhood_size)]

    names = _ids("N", len(groups), 3)
    return {int(i): names[g] for g, members in enumerate(groups) for i in members}


def generate(spec: SynthSpec) -> tuple[EcoNetwork, GroundTruth]:
    """Sample W, H and token counts; return the network and its latent truth.

    W_i ~ Dirichlet(alpha), H_k ~ Dirichlet(beta), N_i from the token plan,
    community counts ~ Multinomial(N_i, W_i) and, per community, location
    counts ~ Multinomial(count, H_k). Tokens are drawn with replacement.
    Locations that receive no report are dropped from the network (the truth
    keeps all J). Identical specs give identical outputs.
    """
    spec.validate()
    rng = make_rng(spec.seed)
    W = rng.dirichlet(spec.alpha_vector(), size=spec.I)
    H = rng.dirichlet(spec.beta_vector(), size=spec.K_true)
    tokens = rng.integers(spec.tokens.low, spec.tokens.high + 1, size=spec.I)

    per_community = rng.multinomial(tokens, W)
    dense = np.zeros((spec.I, spec.J), dtype=np.int64)
    for k in range(spec.K_true):
        dense += rng.multinomial(per_community[:, k], H[k])

    labels = np.argmax(W, axis=1)
    individuals = _ids("P", spec.I, 4)
    locations = _ids("L", spec.J, 3)
    neighborhood_of = _assign_neighborhoods(spec, individuals, labels, rng)

    visited = np.flatnonzero(dense.sum(axis=0) > 0)
    net = EcoNetwork(
        individuals=individuals,
        locations=tuple(locations[j] for j in visited),
        counts=sparse.csr_matrix(dense[:, visited]),
        neighborhood_of=neighborhood_of,
    )
    truth = GroundTruth(W=W, H=H, labels=labels, individuals=individuals, locations=locations)
    logger.info(
        f"Generated {spec.I} individuals x {net.n_locations} visited locations "
        f"({spec.J - net.n_locations} unvisited), K_true={spec.K_true}, "
        f"{net.total_tokens} reports"
    )
    return net, truth

