"""The interleaved multiplication loop over the bits of the multiplier.

Each of the k iterations doubles the accumulator pair, adds the next
partial product, and adds a reduction constant, all inside (n+1)-bit
registers. Bits that fall off the top are never computed; instead a
seven-bit predictor works out, before the additions run, how many units
of 2**(n+1) the step is about to discard, and the matching precomputed
constant keeps the pair in the right residue class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitcore import BitVec, csa
from .errors import ContractViolation
from .modparams import ModulusParams

__all__ = [
    "Accumulator",
    "StepTrace",
    "lcu",
    "loop_step",
    "run_loop",
]


@dataclass(frozen=True, slots=True)
class Accumulator:
    """The running value as a carry-save pair of (n+1)-bit registers.

    The residue class of p + q modulo the shifted modulus is the meaning;
    the split between the two registers is free to change at any time.
    """

    p: BitVec
    q: BitVec


@dataclass(frozen=True, slots=True)
class StepTrace:
    """Record of one loop iteration, for worksheets and invariant checks.

    ``discarded`` is the integer amount the step's truncations threw away:
    2*(p_in + q_in) + a_i * b + ry - (p_out + q_out). It always equals
    f * 2**(n+1).
    """

    i: int
    a_i: int
    p_in: int
    q_in: int
    s: int
    c: int
    f: int
    ry: int
    p_out: int
    q_out: int
    discarded: int


def lcu(
    p_top3: tuple[int, int, int],
    q_top3: tuple[int, int, int],
    b_top: int,
) -> int:
    """Predict the overflow count of one loop step from seven register bits.

    Inputs are the top three bits of each accumulator register, most
    significant first, plus the top bit of the incoming partial product
    (the multiplier bit ANDed with bit n-1 of the shifted multiplicand).
    The result counts the units of 2**(n+1) that the step's truncations
    will drop; it is always below 4, and it does not depend on which
    reduction constant the step adds, which is what lets the constant be
    selected before the additions run.
    """
    pn, pn1, pn2 = p_top3
    qn, qn1, qn2 = q_top3
    # Intermediate bits of the untruncated additions, derived positionally:
    # s4/c4 sit at the register edge, s5/c5 one above it.
    s4 = pn1 ^ qn1
    s5 = pn ^ qn
    c3 = (pn2 & qn2) | (b_top & (pn2 | qn2))
    c4 = pn1 & qn1
    c5 = pn & qn
    q5 = s4 & c3
    f0 = q5 ^ s5 ^ c4
    f1 = c5 ^ ((s5 & c4) | (q5 & (s5 | c4)))
    return (f1 << 1) | f0


def loop_step(
    acc: Accumulator,
    a_i: int,
    b_shifted: BitVec,
    params: ModulusParams,
    i: int = -1,
) -> tuple[Accumulator, StepTrace]:
    """Run one iteration: double, add the partial product, reduce.

    ``b_shifted`` may be the n-bit register from shift_left_operand or the
    same value already zero-extended to n+1 bits. The first addition sums
    the doubled registers (explicitly truncated back to n+1 bits) with the
    partial product; the second adds the reduction constant selected by
    the predicted overflow count. ``i`` only labels the returned trace.
    """
    n = params.n
    m = n + 1
    p, q = acc.p, acc.q
    if b_shifted.width == n:
        b_ext = b_shifted.zext(m)
    elif b_shifted.width == m:
        b_ext = b_shifted
    else:
        raise ContractViolation(
            f"b_shifted width must be {n} or {m}, got {b_shifted.width}"
        )

    f = lcu(
        (p.bit(n), p.bit(n - 1), p.bit(n - 2)),
        (q.bit(n), q.bit(n - 1), q.bit(n - 2)),
        a_i & b_ext.bit(n - 1),
    )

    x = p.shl(1).trunc(m)
    y = q.shl(1).trunc(m)
    z = b_ext if a_i else BitVec(m, 0)
    s, c = csa(x, y, z, m)
    ry = BitVec(m, params.rx[f])
    p2, q2 = csa(s, c, ry, m)

    zv = b_ext.value if a_i else 0
    trace = StepTrace(
        i=i,
        a_i=a_i,
        p_in=p.value,
        q_in=q.value,
        s=s.value,
        c=c.value,
        f=f,
        ry=ry.value,
        p_out=p2.value,
        q_out=q2.value,
        discarded=2 * (p.value + q.value) + zv + ry.value - (p2.value + q2.value),
    )
    return Accumulator(p2, q2), trace


def run_loop(
    A: int,
    B_shifted: BitVec,
    params: ModulusParams,
    trace: bool = False,
) -> tuple[Accumulator, list[StepTrace] | None]:
    """Iterate over the top k bits of A, most significant first.

    The iteration count is k, the original modulus length, regardless of
    leading zeros in A; starting from the zero pair this realizes the
    doubling expansion of A * B. On exit p + q is congruent to
    A * value(B_shifted) modulo the shifted modulus.
    """
    if A < 0:
        raise ContractViolation(f"A >= 0 violated (A={A})")
    if A >= params.modulus:
        raise ContractViolation(f"A < R violated (A={A}, R={params.modulus})")
    m = params.n + 1
    if B_shifted.width == m:
        b_ext = B_shifted
    elif B_shifted.width == params.n:
        b_ext = B_shifted.zext(m)
    else:
        raise ContractViolation(
            f"B_shifted width must be {params.n} or {m}, got {B_shifted.width}"
        )
    acc = Accumulator(BitVec(m, 0), BitVec(m, 0))
    traces: list[StepTrace] | None = [] if trace else None
    for i in range(params.k - 1, -1, -1):
        acc, st = loop_step(acc, (A >> i) & 1, b_ext, params, i=i)
        if traces is not None:
            traces.append(st)
    return acc, traces
