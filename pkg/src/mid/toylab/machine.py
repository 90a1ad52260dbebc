"""A tiny prefix machine whose bounded complexities can be computed exactly.

Programs are bit strings read left to right, one bit at a time, never backing
up.  A program is the exact prefix consumed when the machine halts, so the set
of halting programs is prefix-free.  The machine has a read-only condition
register ``y`` (a bit string) and an append-only output tape.

Instruction set (opcodes are a complete prefix code; ``gamma`` is the Elias
gamma code from :mod:`mid.core`):

=======  =======  =========================  ========================================
opcode   name     operands                   effect
=======  =======  =========================  ========================================
``00``   HALT                                stop; the output tape is the result
``01``   ELEM     gamma(k+1), k bits ``v``   emit ``gamma(k+1) v`` (one list element)
``100``  LIT      gamma(k+1), k bits ``v``   emit ``v``
``101``  CELEM                              emit ``gamma(|y|+1) y``
``1100`` REP      gamma(k)                   emit the last non-REP chunk k more times
``1101`` COPY                               emit ``y``
``1110`` SLICE    gamma(a+1), gamma(b+1)     emit ``y[a:a+b]`` (clipped to ``y``)
``1111`` SELEM    gamma(a+1), gamma(b+1)     emit ``s = y[a:a+b]`` as ``gamma(|s|+1) s``
=======  =======  =========================  ========================================

Every instruction costs one step except REP, which costs ``k``.  Before an
instruction is fetched the machine diverges if the budget is used up; REP
diverges when its ``k`` steps would overrun it.  Step costs never depend on
``y``, which is what lets :func:`enumerate_templates` enumerate programs once
and render them for any condition later.

Running out of program bits, or halting before all bits are read, makes the
program invalid.
"""
from __future__ import annotations

import enum
import itertools
from typing import Iterator, Optional

from ..core import elias_gamma, gamma_length

MACHINE_ID = "toy-prefix-v1"
MAX_PROGRAM_BITS = 24

HALT, ELEM, LIT, CELEM, REP, COPY, SLICE, SELEM = "00", "01", "100", "101", "1100", "1101", "1110", "1111"
OPCODES = {HALT: "HALT", ELEM: "ELEM", LIT: "LIT", CELEM: "CELEM", REP: "REP", COPY: "COPY", SLICE: "SLICE", SELEM: "SELEM"}

COPY_PROGRAM = COPY + HALT


class Status(enum.Enum):
    DIVERGE = "diverge"
    INVALID = "invalid"


DIVERGE = Status.DIVERGE
INVALID = Status.INVALID


class BudgetError(ValueError):
    pass


class _OutOfBits(Exception):
    pass


def check_budget(L: int, max_bits: int = MAX_PROGRAM_BITS) -> None:
    if L < 0 or L > max_bits:
        raise BudgetError(f"enumeration budget: L={L} outside [0, {max_bits}]")


def enumerate_programs(L: int, max_bits: int = MAX_PROGRAM_BITS) -> Iterator[str]:
    """Every bit string of length <= L, length-increasing lexicographic."""
    check_budget(L, max_bits)
    yield ""
    for k in range(1, L + 1):
        for bits in itertools.product("01", repeat=k):
            yield "".join(bits)


# chunks of an output template: ("L", bits) literal, ("C",) y, ("E",) y as element,
# ("S", a, b) y[a:a+b], ("T", a, b) y[a:a+b] as element


def render_chunk(chunk: tuple, y: str) -> str:
    tag = chunk[0]
    if tag == "L":
        return chunk[1]
    if tag == "C":
        return y
    if tag == "E":
        return elias_gamma(len(y) + 1) + y
    s = y[chunk[1]:chunk[1] + chunk[2]]
    if tag == "S":
        return s
    return elias_gamma(len(s) + 1) + s


def render(chunks: tuple, y: str) -> str:
    return "".join(render_chunk(c, y) for c in chunks)


def uses_condition(chunks: tuple) -> bool:
    return any(c[0] != "L" for c in chunks)


class _Reader:
    def __init__(self, p: str):
        self.p = p
        self.pos = 0

    def bit(self) -> str:
        if self.pos >= len(self.p):
            raise _OutOfBits
        b = self.p[self.pos]
        self.pos += 1
        return b

    def bits(self, k: int) -> str:
        return "".join(self.bit() for _ in range(k))

    def gamma(self) -> int:
        zeros = 0
        while self.bit() == "0":
            zeros += 1
        return int("1" + self.bits(zeros), 2)

    def opcode(self) -> str:
        code = self.bit() + self.bit()
        if code in ("10", "11"):
            code += self.bit()
            if code in ("110", "111"):
                code += self.bit()
        return code


def run(p: str, condition: str = "", S: int = 10_000):
    """Execute ``p`` with condition register ``condition``.

    Returns the output bit string, ``DIVERGE`` or ``INVALID``.
    """
    r = _Reader(p)
    steps = 0
    out = []
    last: Optional[str] = None
    try:
        while True:
            if steps >= S:
                return DIVERGE
            op = r.opcode()
            if op == HALT:
                return "".join(out) if r.pos == len(p) else INVALID
            if op == REP:
                k = r.gamma()
                if steps + k > S:
                    return DIVERGE
                steps += k
                if last is not None:
                    out.extend([last] * k)
                continue
            steps += 1
            if op in (ELEM, LIT):
                k = r.gamma() - 1
                v = r.bits(k)
                chunk = ("L", elias_gamma(k + 1) + v if op == ELEM else v)
            elif op == CELEM:
                chunk = ("E",)
            elif op == COPY:
                chunk = ("C",)
            else:
                a = r.gamma() - 1
                b = r.gamma() - 1
                chunk = ("S" if op == SLICE else "T", a, b)
            last = render_chunk(chunk, condition)
            out.append(last)
    except _OutOfBits:
        return INVALID


def enumerate_templates(L: int, max_bits: int = MAX_PROGRAM_BITS) -> Iterator[tuple[str, int, tuple]]:
    """All halting programs of at most L bits, as ``(program, steps, chunks)``.

    Walks the instruction grammar instead of all 2^(L+1) bit strings; only
    halting programs are produced.  ``steps`` is the exact step count, so the
    program halts under budget S iff ``steps <= S``.
    """
    check_budget(L, max_bits)
    gl = gamma_length

    def walk(prog: str, steps: int, chunks: tuple, last: Optional[tuple]):
        room = L - len(prog)
        if room >= 2:
            yield prog + HALT, steps + 1, chunks
        # ELEM / LIT
        for op in (ELEM, LIT):
            k = 0
            while len(op) + gl(k + 1) + k <= room:
                head = prog + op + elias_gamma(k + 1)
                for i in range(2 ** k):
                    v = format(i, f"0{k}b") if k else ""
                    chunk = ("L", elias_gamma(k + 1) + v if op == ELEM else v)
                    yield from walk(head + v, steps + 1, chunks + (chunk,), chunk)
                k += 1
        for op, chunk in ((CELEM, ("E",)), (COPY, ("C",))):
            if len(op) <= room:
                yield from walk(prog + op, steps + 1, chunks + (chunk,), chunk)
        k = 1
        while len(REP) + gl(k) <= room:
            yield from walk(prog + REP + elias_gamma(k), steps + k,
                            chunks + ((last,) * k if last is not None else ()), last)
            k += 1
        for op, tag in ((SLICE, "S"), (SELEM, "T")):
            a = 0
            while len(op) + gl(a + 1) + 1 <= room:
                b = 0
                while len(op) + gl(a + 1) + gl(b + 1) <= room:
                    chunk = (tag, a, b)
                    yield from walk(prog + op + elias_gamma(a + 1) + elias_gamma(b + 1),
                                    steps + 1, chunks + (chunk,), chunk)
                    b += 1
                a += 1

    yield from walk("", 0, (), None)
