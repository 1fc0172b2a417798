"""Independent reference arithmetic used to certify the pipeline.

Nothing here touches the bit-vector layer: every function works on plain
Python integers with ordinary carry-propagating arithmetic, so a bug in
the register model cannot hide inside its own checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "OracleInstance",
    "fold_pair",
    "ref_mulmod",
    "ref_mulmod_by_addition",
    "replay_step_wide",
]


@dataclass(frozen=True)
class OracleInstance:
    """One test instance bundled with its ground-truth residue."""

    n: int
    k: int
    R: int
    A: int
    B: int
    expected: int

    @classmethod
    def make(cls, A: int, B: int, R: int, n: int) -> "OracleInstance":
        expected = ref_mulmod(A, B, R)
        assert expected < R
        return cls(n=n, k=R.bit_length(), R=R, A=A, B=B, expected=expected)


def fold_pair(p: int, q: int, R: int) -> int:
    """Collapse a result pair into a single residue.

    One ordinary addition and at most one conditional subtraction. This is
    exactly the carry-propagating step the kernel itself never performs,
    which is why it lives here rather than in the pipeline.
    """
    if not (0 <= p < R and 0 <= q < R):
        raise ValueError(f"fold expects both entries in [0, {R})")
    total = p + q
    return total - R if total >= R else total


def ref_mulmod(A: int, B: int, R: int) -> int:
    """Ground-truth (A * B) mod R via arbitrary-precision arithmetic."""
    if R <= 0:
        raise ValueError(f"modulus must be positive, got {R}")
    return (A * B) % R


def ref_mulmod_by_addition(A: int, B: int, R: int) -> int:
    """Second opinion on ref_mulmod: accumulate B repeatedly, A times.

    Structurally different from multiplication followed by division, so
    the two implementations cross-check each other. Only usable for small
    A; the tests run it over every instance of bit length five or less.
    """
    if R <= 0:
        raise ValueError(f"modulus must be positive, got {R}")
    if A < 0 or B < 0:
        raise ValueError("operands must be non-negative")
    b = B
    while b >= R:
        b -= R
    acc = 0
    for _ in range(A):
        acc += b
        if acc >= R:
            acc -= R
    return acc


def replay_step_wide(
    p: int,
    q: int,
    a_i: int,
    b_shifted: int,
    rx_candidates: Sequence[int],
    n: int,
) -> tuple[int, ...]:
    """Replay one loop step without truncation, once per reduction candidate.

    For each candidate constant this recomputes both carry-save additions
    at unlimited width and returns the integer value carried by the bits
    above position n of the two results, i.e. exactly what the (n+1)-bit
    registers would have discarded. Used to certify that the predicted
    overflow count matches the real loss and does not depend on which
    candidate was added.
    """
    x = 2 * p
    y = 2 * q
    z = b_shifted if a_i else 0
    keep = 1 << (n + 1)
    dropped = []
    for ry in rx_candidates:
        s1 = x ^ y ^ z
        c1 = ((x & y) | (z & (x | y))) << 1
        pw = s1 ^ c1 ^ ry
        qw = ((s1 & c1) | (ry & (s1 | c1))) << 1
        dropped.append((pw - pw % keep) + (qw - qw % keep))
    return tuple(dropped)
