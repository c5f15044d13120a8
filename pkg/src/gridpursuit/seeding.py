"""SplitMix64 seed derivation.

Trial ``k`` of a run seeded with ``s`` gets the ``k``-th output of a SplitMix64
stream started at ``s``: ``mix(s + (k + 1) * 0x9E3779B97F4A7C15 mod 2**64)``.
Hence ``derive_trial_seed(0, 0) == 0xE220A8397B1DCDAF``.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_mix(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    return splitmix64_mix(master_seed + (trial_index + 1) * GOLDEN_GAMMA)
