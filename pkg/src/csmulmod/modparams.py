"""Modulus validation, precomputed reduction constants, and shift normalization.

The pipeline proper assumes the modulus occupies the full working width,
i.e. its top bit sits at position n-1. A modulus of bit length k < n is
handled by scaling the multiplicand, the modulus, and every precomputed
constant by 2**(n-k) on the way in and dividing the outputs by the same
factor on the way out. Constants are reduced first (against the original
modulus) and scaled second; the two orders are equivalent and the tests
check that they commute.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitcore import BitVec
from .errors import ContractViolation, InvariantViolation

__all__ = [
    "ModulusParams",
    "precompute",
    "shift_left_operand",
    "shift_right_result",
]


@dataclass(frozen=True)
class ModulusParams:
    """Everything derived from (modulus, working width) that a run needs.

    Attributes:
        n: working width in bits; registers in the pipeline hold n+1 bits.
        k: bit length of the modulus, so 2**(k-1) <= modulus < 2**k.
        shift: n - k, the normalization scale exponent.
        modulus: the original reduction modulus R.
        modulus_shifted: R * 2**shift; top bit at position n-1.
        beta: 2**n, the power-of-two span the shifted pipeline works against.
        rn: (2**k mod R) * 2**shift, the one-span reduction constant.
        rm: ((3 * 2**k / 4) mod R) * 2**shift, the three-quarter-span constant.
        rx: four constants ((2**k * 2f) mod R) * 2**shift for f = 0..3,
            indexed by the loop's predicted overflow count.
        r_bit: the bit just below the modulus top bit (bit k-2 of R, equal
            to bit n-2 of modulus_shifted); selects between the two final
            reduction rule families.
    """

    n: int
    k: int
    shift: int
    modulus: int
    modulus_shifted: int
    beta: int
    rn: int
    rm: int
    rx: tuple[int, int, int, int]
    r_bit: int


def precompute(R: int, n: int) -> ModulusParams:
    """Validate (R, n) and build the precomputed constant set.

    The constants are ordinary arbitrary-precision reductions of small
    multiples of 2**k, computed against the original modulus and then
    scaled by 2**(n-k). They are deliberately outside the carry-save
    computational model: this runs once per modulus, not per step.
    """
    if n <= 2:
        raise ContractViolation(f"n > 2 violated (n={n})")
    if R < 4:
        raise ContractViolation(f"R >= 4 violated (R={R})")
    k = R.bit_length()
    if k > n:
        raise ContractViolation(
            f"bit-length(R) <= n violated (bit-length {k} vs n={n})"
        )
    shift = n - k
    beta_k = 1 << k
    rn = (beta_k % R) << shift
    rm = ((3 * beta_k // 4) % R) << shift
    rx = (
        0,
        ((2 * beta_k) % R) << shift,
        ((4 * beta_k) % R) << shift,
        ((6 * beta_k) % R) << shift,
    )
    r_bit = (R >> (k - 2)) - 2
    assert r_bit in (0, 1)
    return ModulusParams(
        n=n,
        k=k,
        shift=shift,
        modulus=R,
        modulus_shifted=R << shift,
        beta=1 << n,
        rn=rn,
        rm=rm,
        rx=rx,
        r_bit=r_bit,
    )


def shift_left_operand(B: int, params: ModulusParams) -> BitVec:
    """Scale a multiplicand into the normalized domain as an n-bit register."""
    if B < 0:
        raise ContractViolation(f"B >= 0 violated (B={B})")
    if B >= params.modulus:
        raise ContractViolation(f"B < R violated (B={B}, R={params.modulus})")
    return BitVec(params.n, B << params.shift)


def shift_right_result(p: BitVec, q: BitVec, params: ModulusParams) -> tuple[int, int]:
    """Scale a result pair back out of the normalized domain.

    The division by 2**shift must be exact; a nonzero low bit means some
    stage leaked value into positions the algorithm promises stay clear,
    which is an internal invariant breach rather than a user error.
    """
    low = (1 << params.shift) - 1
    if (p.value & low) or (q.value & low):
        raise InvariantViolation(
            "nonzero low bits at final shift "
            f"(p={p.value:#x}, q={q.value:#x}, shift={params.shift})"
        )
    return p.value >> params.shift, q.value >> params.shift
