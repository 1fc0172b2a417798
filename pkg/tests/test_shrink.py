import pytest

from csmulmod import (
    Accumulator,
    BitVec,
    InvariantViolation,
    precompute,
    run_loop,
    run_shrink,
    scu_select,
    shift_left_operand,
    shrink_cycle,
    top_up,
)

P13 = precompute(13, 4)  # rn=3, rx[1]=6


def acc5(p, q):
    return Accumulator(BitVec(5, p), BitVec(5, q))


class TestScuSelect:
    def test_both_top_bits(self):
        assert scu_select(BitVec(5, 0b10000), BitVec(5, 0b10000)) == 1

    def test_top_bit_with_next_pair(self):
        assert scu_select(BitVec(5, 0b11000), BitVec(5, 0b01000)) == 2

    def test_top_bit_alone(self):
        assert scu_select(BitVec(5, 0b10000), BitVec(5, 0)) == 3

    def test_next_pair_alone(self):
        assert scu_select(BitVec(5, 0b01000), BitVec(5, 0b01000)) == 4

    def test_done_on_zero(self):
        assert scu_select(BitVec(5, 0), BitVec(5, 0)) is None

    def test_done_is_exactly_the_exit_shape(self):
        # on post-top-up states, None exactly when both top bits are clear
        # and the next-to-top pair is not doubly set
        for raw_p in range(32):
            for raw_q in range(32):
                p, q = top_up(BitVec(5, raw_p), BitVec(5, raw_q), (4, 3))
                rule = scu_select(p, q)
                exit_shape = (
                    not p.bit(4) and not q.bit(4) and not (p.bit(3) and q.bit(3))
                )
                assert (rule is None) == exit_shape


class TestShrinkCycle:
    def test_worked_example_rule2(self):
        acc, rule = shrink_cycle(acc5(24, 8), P13)
        assert rule == 2
        assert (acc.p.value, acc.q.value) == (6, 0)
        assert (24 + 8) % 13 == (6 + 0) % 13

    def test_zero_state_is_done(self):
        acc, rule = shrink_cycle(acc5(0, 0), P13)
        assert rule is None
        assert (acc.p.value, acc.q.value) == (0, 0)

    def test_rule1_discards_one_double_span(self):
        # both top bits set: the adder's erased carry bit pays exactly 2**5
        acc, rule = shrink_cycle(acc5(16, 16), P13)
        assert rule == 1
        assert (acc.p.value + acc.q.value) % 13 == (16 + 16) % 13
        assert 16 + 16 + P13.rx[1] - (acc.p.value + acc.q.value) == 32

    def test_topup_runs_before_selection(self):
        # a lone top bit in q migrates to p and still triggers rule 3
        acc, rule = shrink_cycle(acc5(0, 0b10000), P13)
        assert rule == 3


class TestRunShrink:
    def test_entry_already_reduced(self):
        acc, report = run_shrink(acc5(5, 2), P13)
        assert report.cycles == 0
        assert report.rules_fired == ()
        assert (acc.p.value, acc.q.value) == (5, 2)

    def test_known_three_cycle_instance(self):
        params = precompute(173, 8)
        acc, _ = run_loop(63, shift_left_operand(121, params), params)
        out, report = run_shrink(acc, params)
        assert report.cycles == 3
        assert len(report.rules_fired) == report.cycles
        assert (out.p.value + out.q.value) % 173 == (
            acc.p.value + acc.q.value
        ) % 173

    def test_cycle_cap_machinery(self):
        with pytest.raises(InvariantViolation, match="cycles"):
            run_shrink(acc5(16, 16), P13, cycle_cap=0)

    def test_exhaustive_contracts_full_width(self):
        # every (p, q) register pair, reachable or not, for every 4-bit
        # modulus: the bound, exit shape, and residue hold universally
        for R in range(8, 16):
            params = precompute(R, 4)
            rs = params.modulus_shifted
            for p in range(32):
                for q in range(32):
                    out, report = run_shrink(acc5(p, q), params)
                    assert report.cycles <= 4
                    assert (out.p.value + out.q.value) % rs == (p + q) % rs
                    assert out.p.bit(4) == 0 and out.q.bit(4) == 0
                    assert not (out.p.bit(3) and out.q.bit(3))
                    assert out.p.value & out.q.value < 8  # anded pair below span/2
                    # per-cycle residue preservation
                    prev = p + q
                    for cyc in report.snapshots:
                        assert cyc.topup_p + cyc.topup_q == prev
                        assert (cyc.p + cyc.q) % rs == prev % rs
                        prev = cyc.p + cyc.q

    def test_heavy_rules_fire_first_on_loop_outputs(self):
        # the double-span rules appear only as the first firing when the
        # entry state actually came out of the main loop (synthetic states
        # can retrigger them, loop outputs never do)
        for k in range(3, 5):
            for R in range(1 << (k - 1), 1 << k):
                params = precompute(R, k)
                for B in range(R):
                    b = shift_left_operand(B, params)
                    for A in range(R):
                        acc, _ = run_loop(A, b, params)
                        _, report = run_shrink(acc, params)
                        for fired in report.rules_fired[1:]:
                            assert fired in (3, 4)

    def test_exhaustive_contracts_shifted(self):
        # shift path: states with the low gap bits clear stay clear
        params = precompute(13, 6)
        rs = params.modulus_shifted
        low = (1 << params.shift) - 1
        for p in range(0, 128, 4):
            for q in range(0, 128, 4):
                out, report = run_shrink(
                    Accumulator(BitVec(7, p), BitVec(7, q)), params
                )
                assert report.cycles <= 4
                assert (out.p.value + out.q.value) % rs == (p + q) % rs
                assert out.p.value & low == 0 and out.q.value & low == 0
                assert out.p.bit(6) == 0 and out.q.bit(6) == 0
                assert not (out.p.bit(5) and out.q.bit(5))

    def test_power_of_two_modulus_zero_constants(self):
        # rn = rx[1] = 0 still reduces correctly through the rule adds
        params = precompute(8, 4)
        rs = params.modulus_shifted
        for p in range(32):
            for q in range(32):
                out, report = run_shrink(acc5(p, q), params)
                assert report.cycles <= 4
                assert (out.p.value + out.q.value) % rs == (p + q) % rs
