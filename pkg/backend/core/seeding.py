import numpy as np


def derive_seed(seed: int, *keys: int) -> int:
    """
    Deriva una semilla hija determinista a partir de la semilla maestra y claves estructurales.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0] >> 1)


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    if keys:
        return np.random.default_rng(derive_seed(seed, *keys))
    return np.random.default_rng(seed)
