"""Deterministic randomness: SplitMix64 and the shuffles built on it.

Every stochastic choice in this package flows through SplitMix64 so that a
given seed produces bit-identical results across platforms, processes, and
thread counts. The generator is the published one: the state advances by the
golden-gamma increment 0x9E3779B97F4A7C15 and the output is produced by two
xorshift-multiply mixing steps (constants 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB) followed by a final xorshift.
"""

from __future__ import annotations

MASK64 = 0xFFFF_FFFF_FFFF_FFFF

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance SplitMix64 by one step.

    Args:
        state: current 64-bit state (values outside 64 bits are masked).

    Returns:
        (new_state, output) pair of 64-bit unsigned integers.
    """
    state = (state + _GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


class SplitMix64:
    """Stateful convenience wrapper around :func:`splitmix64_next`.

    The underlying primitive is pure; this class exists for call sites that
    iterate a stream. Instances are cheap and must not be shared across
    threads -- create one per operation instead.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, out = splitmix64_next(self.state)
        return out

    def below(self, n: int) -> int:
        """Next integer in [0, n). Plain modulo; the bias is part of the contract."""
        if n <= 0:
            raise ValueError(f"below() needs n >= 1, got {n}")
        return self.next_u64() % n

    def unit(self) -> float:
        """Uniform in [0, 1): the top 53 bits scaled by 2**-53."""
        return (self.next_u64() >> 11) * 2.0**-53

    def unit_positive(self) -> float:
        """Uniform in (0, 1]: like unit() but shifted off zero, safe for log()."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53


def partial_permutation(n: int, m: int, seed: int) -> list[int]:
    """First ``m`` entries of a Fisher-Yates shuffle of range(n).

    Step t swaps position t with position t + (next_u64 mod (n - t)); one
    draw is consumed per step, including the final no-op swap when t = n - 1.
    """
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    idx = list(range(n))
    rng = SplitMix64(seed)
    for t in range(m):
        j = t + rng.below(n - t)
        idx[t], idx[j] = idx[j], idx[t]
    return idx[:m]


def permutation(n: int, seed: int) -> list[int]:
    """Full Fisher-Yates permutation of range(n) under SplitMix64(seed)."""
    return partial_permutation(n, n, seed)
