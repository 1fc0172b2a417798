"""Post-loop reduction that clears the accumulator's top bits.

The loop leaves both registers one bit wider than the working width. This
stage cycles a fixed rule set until both top bits are clear and the bits
just below them are not simultaneously set, subtracting a power-of-two
span each cycle (by letting an addition overflow, or by clearing register
bits after it) and compensating with the matching precomputed constant.
Each rule adds first and clears second.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitcore import BitVec, csa, top_up
from .errors import InvariantViolation
from .mainloop import Accumulator
from .modparams import ModulusParams

__all__ = [
    "NORMAL_CYCLE_CAP",
    "HUNT_CYCLE_CAP",
    "ShrinkCycle",
    "ShrinkReport",
    "run_shrink",
    "scu_select",
    "shrink_cycle",
]

# The proven bound on rule firings per reduction, and the looser cap used
# when hunting for instances that stress it.
NORMAL_CYCLE_CAP = 4
HUNT_CYCLE_CAP = 7


@dataclass(frozen=True, slots=True)
class ShrinkCycle:
    """One rule firing: state after the top-up, rule id, state after the rule."""

    topup_p: int
    topup_q: int
    rule: int
    p: int
    q: int


@dataclass(frozen=True, slots=True)
class ShrinkReport:
    """Cycle count, the rules fired in order, and entry/exit snapshots."""

    cycles: int
    rules_fired: tuple[int, ...]
    entry_p: int
    entry_q: int
    exit_p: int
    exit_q: int
    snapshots: tuple[ShrinkCycle, ...]


def scu_select(p: BitVec, q: BitVec) -> int | None:
    """Pick the first matching rule, or None when the exit shape is reached.

    Expects the cycle's top-up to have already run, so a set top bit can
    only live in p and a doubly-set next-to-top pair means both registers
    carry weight there. Priority order:

        1: both top bits set            (overflow itself pays the 2-span debt)
        2: top bit and both next bits   (add double-span constant, clear tops)
        3: top bit alone                (add one-span constant, clear p's top)
        4: both next-to-top bits        (add one-span constant, clear q's top)

    None means p and q both fit in n bits and their ANDed next-to-top bit
    is clear, which is exactly the condition the next stage requires.
    """
    n = p.width - 1
    pn = p.bit(n)
    qn = q.bit(n)
    pq_next = p.bit(n - 1) & q.bit(n - 1)
    if pn & qn:
        return 1
    if pn & pq_next:
        return 2
    if pn:
        return 3
    if pq_next:
        return 4
    return None


def shrink_cycle(
    acc: Accumulator, params: ModulusParams
) -> tuple[Accumulator, int | None]:
    """Run one cycle: top-up the two top bit positions, then apply one rule.

    Returns the new accumulator and the fired rule id, or None when no rule
    matched (the accumulator then carries only the top-up, which preserves
    the pair's sum). Every rule performs its addition in the (n+1)-bit
    carry-save adder and clears bits afterwards; the cleared bits are
    always set at clearing time, which is asserted here because a failure
    would otherwise surface only as a wrong residue much later.
    """
    n = params.n
    m = n + 1
    p, q = top_up(acc.p, acc.q, (n, n - 1))
    rule = scu_select(p, q)
    if rule is None:
        return Accumulator(p, q), None

    const = BitVec(m, params.rx[1] if rule <= 2 else params.rn)
    before = p.value + q.value
    s, c = csa(p, q, const, m)

    if rule == 1:
        # No bits cleared: the adder's own truncation drops exactly one
        # doubled span, balanced by the double-span constant just added.
        dropped = before + const.value - (s.value + c.value)
        if dropped != 2 * params.beta:
            raise InvariantViolation(
                f"rule 1 expected to discard {2 * params.beta}, got {dropped}"
            )
        out_p, out_q = s, c
    else:
        if before + const.value != s.value + c.value:
            raise InvariantViolation("adder lost a bit outside rule 1")
        if rule == 2:
            if not (s.bit(n) and c.bit(n)):
                raise InvariantViolation("rule 2 clearing unset top bits")
            out_p, out_q = s.clear_bit(n), c.clear_bit(n)
        elif rule == 3:
            if not s.bit(n):
                raise InvariantViolation("rule 3 clearing an unset top bit")
            out_p, out_q = s.clear_bit(n), c
        else:
            if not c.bit(n):
                raise InvariantViolation("rule 4 clearing an unset top bit")
            out_p, out_q = s, c.clear_bit(n)
    return Accumulator(out_p, out_q), rule


def run_shrink(
    acc: Accumulator,
    params: ModulusParams,
    cycle_cap: int = NORMAL_CYCLE_CAP,
) -> tuple[Accumulator, ShrinkReport]:
    """Cycle until the exit shape is reached, within the given cap.

    The default cap is the proven worst case; needing more cycles than
    that is a fatal contract breach. A larger cap (up to the trivial
    bound of 7) is meant for instrumented hunts that record high cycle
    counts instead of treating 5 as instantly fatal.
    """
    entry_p, entry_q = acc.p.value, acc.q.value
    rules: list[int] = []
    snapshots: list[ShrinkCycle] = []
    while True:
        new_acc, rule = shrink_cycle(acc, params)
        if rule is None:
            acc = new_acc
            break
        if len(rules) >= cycle_cap:
            raise InvariantViolation(
                f"shrink needed more than {cycle_cap} cycles "
                f"(entry p={entry_p:#x}, q={entry_q:#x})"
            )
        rules.append(rule)
        topup_p, topup_q = top_up(acc.p, acc.q, (params.n, params.n - 1))
        snapshots.append(
            ShrinkCycle(
                topup_p=topup_p.value,
                topup_q=topup_q.value,
                rule=rule,
                p=new_acc.p.value,
                q=new_acc.q.value,
            )
        )
        acc = new_acc
    report = ShrinkReport(
        cycles=len(rules),
        rules_fired=tuple(rules),
        entry_p=entry_p,
        entry_q=entry_q,
        exit_p=acc.p.value,
        exit_q=acc.q.value,
        snapshots=tuple(snapshots),
    )
    return acc, report
