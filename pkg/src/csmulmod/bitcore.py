"""Fixed-width bit vectors and the carry-save primitives built on them.

Everything in this module is pure value arithmetic on (width, value) pairs.
Widths never change implicitly: combining unequal widths raises, widening
and truncation are explicit calls, and the only lossy operation is
``trunc`` (plus the single documented bit a carry-save adder erases).
"""

from __future__ import annotations

from typing import Iterable

from .errors import WidthError

__all__ = [
    "BitVec",
    "band",
    "bnot",
    "bor",
    "bxor",
    "csa",
    "maj2of3",
    "top_up",
]


class BitVec:
    """An immutable register of ``width`` bits; bit 0 is least significant.

    The stored value always satisfies ``0 <= value < 2**width``. Treat
    instances as immutable: every operation returns a new vector.
    """

    __slots__ = ("width", "value")

    def __init__(self, width: int, value: int) -> None:
        if width < 1:
            raise ValueError(f"width must be positive, got {width}")
        if value < 0 or value >> width:
            raise ValueError(f"value {value:#x} does not fit in {width} bits")
        self.width = width
        self.value = value

    def bit(self, i: int) -> int:
        """Bit at position ``i`` as an int in {0, 1}."""
        if i < 0 or i >= self.width:
            raise ValueError(f"bit index {i} out of range for width {self.width}")
        return (self.value >> i) & 1

    def zext(self, width: int) -> "BitVec":
        """Zero-extend to ``width`` bits (lossless)."""
        if width < self.width:
            raise ValueError(f"cannot zero-extend width {self.width} down to {width}")
        return BitVec(width, self.value)

    def trunc(self, width: int) -> "BitVec":
        """Keep the low ``width`` bits, discarding the rest."""
        if width > self.width:
            raise ValueError(f"cannot truncate width {self.width} up to {width}")
        return BitVec(width, self.value & ((1 << width) - 1))

    def shl(self, count: int) -> "BitVec":
        """Shift left by ``count``, widening so no bit is lost."""
        if count < 0:
            raise ValueError("shift count must be non-negative")
        return BitVec(self.width + count, self.value << count)

    def set_bit(self, i: int) -> "BitVec":
        if i < 0 or i >= self.width:
            raise ValueError(f"bit index {i} out of range for width {self.width}")
        return BitVec(self.width, self.value | (1 << i))

    def clear_bit(self, i: int) -> "BitVec":
        if i < 0 or i >= self.width:
            raise ValueError(f"bit index {i} out of range for width {self.width}")
        return BitVec(self.width, self.value & ~(1 << i))

    def _check_width(self, other: "BitVec") -> None:
        if self.width != other.width:
            raise WidthError(
                f"width mismatch: {self.width} vs {other.width}"
            )

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check_width(other)
        return BitVec(self.width, self.value ^ other.value)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check_width(other)
        return BitVec(self.width, self.value & other.value)

    def __or__(self, other: "BitVec") -> "BitVec":
        self._check_width(other)
        return BitVec(self.width, self.value | other.value)

    def __invert__(self) -> "BitVec":
        return BitVec(self.width, self.value ^ ((1 << self.width) - 1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        self._check_width(other)
        return self.value == other.value

    def __hash__(self) -> int:
        return hash((self.width, self.value))

    def __repr__(self) -> str:
        return f"BitVec({self.width}, 0b{self.value:0{self.width}b})"


def bxor(x: BitVec, y: BitVec) -> BitVec:
    """Bitwise XOR of two equal-width vectors."""
    return x ^ y


def band(x: BitVec, y: BitVec) -> BitVec:
    """Bitwise AND of two equal-width vectors."""
    return x & y


def bor(x: BitVec, y: BitVec) -> BitVec:
    """Bitwise OR of two equal-width vectors."""
    return x | y


def bnot(x: BitVec) -> BitVec:
    """Bitwise complement within the vector's width."""
    return ~x


def maj2of3(x: BitVec, y: BitVec, z: BitVec) -> BitVec:
    """Bitwise two-out-of-three majority, the carry generator of a CSA.

    Symmetric in all three arguments: each output bit is 1 exactly when
    at least two of the corresponding input bits are 1.
    """
    x._check_width(y)
    x._check_width(z)
    a, b, c = x.value, y.value, z.value
    return BitVec(x.width, (a & b) | (c & (a | b)))


def csa(x: BitVec, y: BitVec, z: BitVec, m: int) -> tuple[BitVec, BitVec]:
    """Carry-save addition of three ``m``-bit vectors into a sum/carry pair.

    Returns ``(s, c)`` with ``s = x ^ y ^ z`` and ``c`` the majority shifted
    left one position then truncated back to ``m`` bits. The truncation can
    erase exactly one bit (the top majority bit), so the integer identity is

        value(x) + value(y) + value(z) - (value(s) + value(c)) in {0, 2**m}

    and the loss, when it happens, is exactly ``2**m``.
    """
    if not (x.width == y.width == z.width == m):
        raise WidthError(
            f"csa operands must all have width {m}, "
            f"got {x.width}/{y.width}/{z.width}"
        )
    a, b, c = x.value, y.value, z.value
    mask = (1 << m) - 1
    s = a ^ b ^ c
    carry = (((a & b) | (c & (a | b))) << 1) & mask
    return BitVec(m, s), BitVec(m, carry)


def top_up(p: BitVec, q: BitVec, positions: Iterable[int]) -> tuple[BitVec, BitVec]:
    """Migrate set bits from ``q`` into ``p`` at the given positions.

    At each treated position i the pair (p_i, q_i) becomes
    (p_i OR q_i, p_i AND q_i): a lone 1 in q moves over to p, all other
    combinations stay put. The sum value(p) + value(q) never changes, and
    afterwards q_i = 1 implies p_i = 1 at every treated position.
    """
    p._check_width(q)
    mask = 0
    for i in positions:
        if i < 0 or i >= p.width:
            raise ValueError(f"top-up position {i} out of range for width {p.width}")
        mask |= 1 << i
    pv, qv = p.value, q.value
    new_p = pv | (qv & mask)
    new_q = (qv & ~mask) | (pv & qv & mask)
    return BitVec(p.width, new_p), BitVec(p.width, new_q)
