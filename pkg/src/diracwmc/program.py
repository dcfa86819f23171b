"""Flatten a formula into the postfix program consumed by the kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .logic import And, Const, Formula, Iff, Implies, Lit, Not, Or

OP_VAR = 0
OP_NVAR = 1
OP_TRUE = 2
OP_FALSE = 3
OP_NOT = 4
OP_AND = 5
OP_OR = 6
OP_IMPLIES = 7
OP_IFF = 8


@dataclass(frozen=True)
class Program:
    ops: np.ndarray  # int32
    args: np.ndarray  # int32
    stack_size: int


def compile_program(f: Formula, index: dict[int, int]) -> Program:
    """Postfix program for ``f`` with variables mapped through ``index``."""
    ops: list[int] = []
    args: list[int] = []
    depth = 0
    max_depth = 0

    def push(op: int, arg: int, delta: int) -> None:
        nonlocal depth, max_depth
        ops.append(op)
        args.append(arg)
        depth += delta
        max_depth = max(max_depth, depth)

    # explicit stack: (node, expanded?)
    todo: list[tuple[Formula, bool]] = [(f, False)]
    while todo:
        node, expanded = todo.pop()
        if isinstance(node, Lit):
            push(OP_VAR if node.positive else OP_NVAR, index[node.var], 1)
        elif isinstance(node, Const):
            push(OP_TRUE if node.value else OP_FALSE, 0, 1)
        elif not expanded:
            todo.append((node, True))
            if isinstance(node, Not):
                kids: tuple[Formula, ...] = (node.child,)
            elif isinstance(node, (And, Or)):
                kids = node.children
            else:
                kids = (node.a, node.b)
            todo.extend((k, False) for k in reversed(kids))
        elif isinstance(node, Not):
            push(OP_NOT, 0, 0)
        elif isinstance(node, And):
            push(OP_AND, len(node.children), 1 - len(node.children))
        elif isinstance(node, Or):
            push(OP_OR, len(node.children), 1 - len(node.children))
        elif isinstance(node, Implies):
            push(OP_IMPLIES, 0, -1)
        elif isinstance(node, Iff):
            push(OP_IFF, 0, -1)
        else:
            raise TypeError(f"not a formula: {node!r}")
    return Program(
        np.asarray(ops, dtype=np.int32),
        np.asarray(args, dtype=np.int32),
        max(max_depth, 1),
    )
