"""Deterministic random streams.

Every randomized routine in the package draws from a counter-based Philox
generator keyed by a caller-supplied 64-bit seed.  Counter-based generators
give independent, reproducible streams from nearby keys, so per-trial seeds
are derived as ``base_seed XOR trial_index`` without risk of overlap.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def stream(seed):
    """Return a numpy Generator backed by Philox keyed with ``seed``."""
    return np.random.Generator(np.random.Philox(key=int(seed) & MASK64))


def trial_seed(base_seed, trial_index):
    """Derive the per-trial seed: ``base_seed XOR trial_index`` (64-bit)."""
    return (int(base_seed) ^ int(trial_index)) & MASK64
