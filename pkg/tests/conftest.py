import pytest

from toricomp.complements import construct_certificate
from toricomp.jsonio import random_pair
from toricomp.pairs import mld

CORPUS_SEED = "acceptance-2026"
CORPUS_SIZES = {1: 70, 2: 80, 3: 60}


@pytest.fixture(scope="session")
def corpus():
    """Deterministic corpus of valid pairs keyed by dimension."""
    pairs = {}
    for dim, count in CORPUS_SIZES.items():
        ray_count = 2 if dim == 1 else dim + 2
        pairs[dim] = [
            random_pair(dim, ray_count, 4, f"{CORPUS_SEED}:{dim}:{i}")
            for i in range(count)
        ]
    return pairs


@pytest.fixture(scope="session")
def certificate_cache(corpus):
    """One certificate per corpus pair at epsilon = exact mld."""
    cache = {}
    for pairs in corpus.values():
        for pair in pairs:
            eps = mld(pair)
            cache[pair] = (eps, construct_certificate(pair, epsilon=eps))
    return cache
