"""End-to-end modular multiplication: normalize, loop, reduce twice, denormalize.

The result is deliberately a pair (p, q) with p + q congruent to A * B and
both entries below the modulus; folding the pair into a single number
needs one carry-propagating addition, which lives outside this module's
computational model (the verification helpers do it with the reference
arithmetic instead).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation, InvariantViolation
from .mainloop import Accumulator, StepTrace, run_loop
from .modparams import ModulusParams, precompute, shift_left_operand, shift_right_result
from .oracle import fold_pair, ref_mulmod
from .shrink import NORMAL_CYCLE_CAP, ShrinkReport, run_shrink
from .squeeze import SqueezeReport, qcu_apply, squeeze_topup

__all__ = [
    "MulResult",
    "RunTrace",
    "mulmod",
    "mulmod_checked",
]


@dataclass(frozen=True, slots=True)
class RunTrace:
    """All per-stage records collected when tracing is requested."""

    params: ModulusParams
    steps: tuple[StepTrace, ...]
    shrink: ShrinkReport
    squeeze: SqueezeReport


@dataclass(frozen=True, slots=True)
class MulResult:
    """Final pair plus the reduction diagnostics of the run.

    p and q are in the original (unshifted) domain: both below the
    modulus, with (p + q) mod R equal to (A * B) mod R.
    """

    p: int
    q: int
    shrink_cycles: int
    squeeze_rule: int
    traces: RunTrace | None


def _check_low_bits(acc: Accumulator, params: ModulusParams, stage: str) -> None:
    low = (1 << params.shift) - 1
    if (acc.p.value & low) or (acc.q.value & low):
        raise InvariantViolation(
            f"nonzero low bits after {stage} "
            f"(p={acc.p.value:#x}, q={acc.q.value:#x}, shift={params.shift})"
        )


def mulmod(
    A: int,
    B: int,
    R: int,
    n: int,
    trace: bool = False,
    *,
    params: ModulusParams | None = None,
    check_seams: bool = False,
    shrink_cycle_cap: int = NORMAL_CYCLE_CAP,
) -> MulResult:
    """Multiply A by B modulo R inside n-bit working registers.

    ``params`` lets sweeps reuse one precomputed constant set across many
    (A, B) pairs of the same modulus. ``check_seams`` adds structural
    assertions between stages (cleared low bits, register shapes, bounds);
    they are off by default so bulk sweeps pay only for the computation,
    with the external verdict left to mulmod_checked.
    """
    if params is None:
        params = precompute(R, n)
    else:
        if params.modulus != R or params.n != n:
            raise ContractViolation(
                "params built for "
                f"(R={params.modulus}, n={params.n}), called with (R={R}, n={n})"
            )
    if A < 0:
        raise ContractViolation(f"A >= 0 violated (A={A})")
    if A >= R:
        raise ContractViolation(f"A < R violated (A={A}, R={R})")
    b_shifted = shift_left_operand(B, params)

    acc, steps = run_loop(A, b_shifted, params, trace=trace)
    if check_seams:
        _check_low_bits(acc, params, "main loop")

    acc, shrink_report = run_shrink(acc, params, cycle_cap=shrink_cycle_cap)
    if check_seams:
        _check_low_bits(acc, params, "shrink")
        n_top = params.n
        if acc.p.bit(n_top) or acc.q.bit(n_top) or (
            acc.p.bit(n_top - 1) and acc.q.bit(n_top - 1)
        ):
            raise InvariantViolation("shrink exit shape not reached")

    acc = squeeze_topup(acc)
    acc, squeeze_report = qcu_apply(acc, params)
    if check_seams:
        _check_low_bits(acc, params, "squeeze")
        if acc.p.value >= params.modulus_shifted or acc.q.value >= params.modulus_shifted:
            raise InvariantViolation(
                "squeeze exit above the shifted modulus "
                f"(p={acc.p.value:#x}, q={acc.q.value:#x})"
            )

    p_out, q_out = shift_right_result(acc.p, acc.q, params)
    traces = (
        RunTrace(
            params=params,
            steps=tuple(steps or ()),
            shrink=shrink_report,
            squeeze=squeeze_report,
        )
        if trace
        else None
    )
    return MulResult(
        p=p_out,
        q=q_out,
        shrink_cycles=shrink_report.cycles,
        squeeze_rule=squeeze_report.rule,
        traces=traces,
    )


def mulmod_checked(
    A: int,
    B: int,
    R: int,
    n: int,
    *,
    params: ModulusParams | None = None,
    trace: bool = False,
    shrink_cycle_cap: int = NORMAL_CYCLE_CAP,
) -> tuple[MulResult, bool]:
    """Run mulmod and compare the outcome against the reference arithmetic.

    ``ok`` is True exactly when both outputs are below the modulus and
    their sum lands in the residue class of A * B.
    """
    result = mulmod(
        A,
        B,
        R,
        n,
        trace=trace,
        params=params,
        shrink_cycle_cap=shrink_cycle_cap,
    )
    in_range = result.p < R and result.q < R
    ok = in_range and fold_pair(result.p, result.q, R) == ref_mulmod(A, B, R)
    return result, ok
