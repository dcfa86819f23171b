"""Numpy fallback for the enumeration kernel.

Same contract as the compiled ``_kernel.count_program``.  Words of 64 lanes
are evaluated for a whole block of high-variable assignments at once.
"""

from __future__ import annotations

import numpy as np

from .program import (
    OP_AND,
    OP_FALSE,
    OP_IFF,
    OP_IMPLIES,
    OP_NOT,
    OP_NVAR,
    OP_OR,
    OP_TRUE,
    OP_VAR,
)

_LOW_PATTERNS = np.array(
    [
        0xAAAAAAAAAAAAAAAA,
        0xCCCCCCCCCCCCCCCC,
        0xF0F0F0F0F0F0F0F0,
        0xFF00FF00FF00FF00,
        0xFFFF0000FFFF0000,
        0xFFFFFFFF00000000,
    ],
    dtype=np.uint64,
)
_BLOCK_BITS = 14


def _weight_table(w0: np.ndarray, w1: np.ndarray, offset: int, n: int) -> np.ndarray:
    table = np.ones(1, dtype=np.complex128)
    for i in range(n):
        # bit i of the table index selects the weight of variable offset+i
        table = np.concatenate([table * w0[offset + i], table * w1[offset + i]])
    return table


def count_program(ops, args, nvars: int, w0, w1, stack_size: int) -> complex:
    ops = np.asarray(ops)
    args = np.asarray(args)
    w0 = np.asarray(w0, dtype=np.complex128)
    w1 = np.asarray(w1, dtype=np.complex128)
    nlow = min(nvars, 6)
    nhigh = nvars - nlow
    lanes = 1 << nlow
    lane_mask = np.uint64((1 << lanes) - 1) if lanes < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
    low_w = _weight_table(w0, w1, 0, nlow)
    high_w = _weight_table(w0, w1, nlow, nhigh)
    low_words = _LOW_PATTERNS[:nlow] & lane_mask
    shifts = np.arange(lanes, dtype=np.uint64)
    program = list(zip(ops.tolist(), args.tolist()))

    total = complex(0)
    nwords = 1 << nhigh
    block = 1 << min(nhigh, _BLOCK_BITS)
    for start in range(0, nwords, block):
        h = np.arange(start, start + block, dtype=np.uint64)
        high_words = [
            np.where((h >> np.uint64(i)) & np.uint64(1), lane_mask, np.uint64(0))
            for i in range(nhigh)
        ]
        stack: list[np.ndarray] = []
        for op, arg in program:
            if op == OP_VAR or op == OP_NVAR:
                word = low_words[arg] if arg < nlow else high_words[arg - nlow]
                word = np.broadcast_to(word, h.shape)
                stack.append(word if op == OP_VAR else ~word & lane_mask)
            elif op == OP_TRUE:
                stack.append(np.full(h.shape, lane_mask))
            elif op == OP_FALSE:
                stack.append(np.zeros(h.shape, dtype=np.uint64))
            elif op == OP_NOT:
                stack[-1] = ~stack[-1] & lane_mask
            elif op == OP_AND or op == OP_OR:
                items = stack[-arg:]
                del stack[-arg:]
                acc = items[0]
                for it in items[1:]:
                    acc = (acc & it) if op == OP_AND else (acc | it)
                stack.append(acc)
            elif op == OP_IMPLIES:
                b = stack.pop()
                a = stack.pop()
                stack.append((~a | b) & lane_mask)
            elif op == OP_IFF:
                b = stack.pop()
                a = stack.pop()
                stack.append(~(a ^ b) & lane_mask)
            else:
                raise ValueError(f"bad opcode {op}")
        masks = stack[0]
        bits = ((masks[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.float64)
        per_lane = high_w[start : start + block] @ bits
        total += complex(per_lane @ low_w)
    return total
