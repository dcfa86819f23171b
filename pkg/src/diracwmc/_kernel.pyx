# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel.

Counts ``sum_tau phi[tau] * prod_i W(i, tau(i))`` for a formula given as a
postfix program over local variables ``0..nvars-1``.  64 assignments are
evaluated at once: the low six variables vary across the bits of a word,
the remaining ones are fixed per word.
"""

from libc.stdint cimport uint64_t, int32_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

# opcodes; keep in sync with diracwmc.program
cdef enum:
    OP_VAR = 0
    OP_NVAR = 1
    OP_TRUE = 2
    OP_FALSE = 3
    OP_NOT = 4
    OP_AND = 5
    OP_OR = 6
    OP_IMPLIES = 7
    OP_IFF = 8

cdef uint64_t[6] LOW_PATTERNS = [
    0xAAAAAAAAAAAAAAAAULL,
    0xCCCCCCCCCCCCCCCCULL,
    0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL,
    0xFFFF0000FFFF0000ULL,
    0xFFFFFFFF00000000ULL,
]


def count_program(const int32_t[::1] ops, const int32_t[::1] args, int nvars,
                  const double complex[::1] w0, const double complex[::1] w1,
                  int stack_size):
    cdef int nlow = nvars if nvars < 6 else 6
    cdef int nhigh = nvars - nlow
    cdef int lanes = 1 << nlow
    cdef uint64_t lane_mask = <uint64_t>0xFFFFFFFFFFFFFFFFULL if lanes == 64 else ((<uint64_t>1 << lanes) - 1)
    cdef int nops = ops.shape[0]
    cdef int i, j, b, k, sp
    cdef int32_t op, arg
    cdef uint64_t h, nwords, mask, acc_bits, a, c
    cdef double complex low_total = 0
    cdef double complex s, total = 0, hw
    cdef int na = nhigh // 2
    cdef int nb = nhigh - na
    cdef double complex low_w[64]
    cdef double complex *tab_a = NULL
    cdef double complex *tab_b = NULL
    cdef uint64_t *stack = NULL
    cdef uint64_t *var_words = NULL

    for b in range(lanes):
        s = 1
        for i in range(nlow):
            if (b >> i) & 1:
                s = s * w1[i]
            else:
                s = s * w0[i]
        low_w[b] = s
        low_total = low_total + s

    tab_a = <double complex *>malloc(sizeof(double complex) * (1 << na))
    tab_b = <double complex *>malloc(sizeof(double complex) * (1 << nb))
    stack = <uint64_t *>malloc(sizeof(uint64_t) * (stack_size + 1))
    var_words = <uint64_t *>malloc(sizeof(uint64_t) * (nvars + 1))
    if tab_a == NULL or tab_b == NULL or stack == NULL or var_words == NULL:
        free(tab_a); free(tab_b); free(stack); free(var_words)
        raise MemoryError()
    try:
        for k in range(1 << na):
            s = 1
            for i in range(na):
                j = nlow + i
                s = s * (w1[j] if (k >> i) & 1 else w0[j])
            tab_a[k] = s
        for k in range(1 << nb):
            s = 1
            for i in range(nb):
                j = nlow + na + i
                s = s * (w1[j] if (k >> i) & 1 else w0[j])
            tab_b[k] = s

        for i in range(nlow):
            var_words[i] = LOW_PATTERNS[i] & lane_mask

        nwords = (<uint64_t>1) << nhigh
        h = 0
        while h < nwords:
            for i in range(nhigh):
                var_words[nlow + i] = lane_mask if (h >> i) & 1 else 0
            sp = 0
            for k in range(nops):
                op = ops[k]
                arg = args[k]
                if op == OP_VAR:
                    stack[sp] = var_words[arg]
                    sp += 1
                elif op == OP_NVAR:
                    stack[sp] = (~var_words[arg]) & lane_mask
                    sp += 1
                elif op == OP_TRUE:
                    stack[sp] = lane_mask
                    sp += 1
                elif op == OP_FALSE:
                    stack[sp] = 0
                    sp += 1
                elif op == OP_NOT:
                    stack[sp - 1] = (~stack[sp - 1]) & lane_mask
                elif op == OP_AND:
                    a = stack[sp - arg]
                    for j in range(sp - arg + 1, sp):
                        a = a & stack[j]
                    sp -= arg
                    stack[sp] = a
                    sp += 1
                elif op == OP_OR:
                    a = stack[sp - arg]
                    for j in range(sp - arg + 1, sp):
                        a = a | stack[j]
                    sp -= arg
                    stack[sp] = a
                    sp += 1
                elif op == OP_IMPLIES:
                    a = stack[sp - 2]
                    c = stack[sp - 1]
                    sp -= 1
                    stack[sp - 1] = ((~a) | c) & lane_mask
                elif op == OP_IFF:
                    a = stack[sp - 2]
                    c = stack[sp - 1]
                    sp -= 1
                    stack[sp - 1] = (~(a ^ c)) & lane_mask
            mask = stack[0]
            if mask != 0:
                hw = tab_a[h & ((<uint64_t>1 << na) - 1)] * tab_b[h >> na]
                if mask == lane_mask:
                    total = total + hw * low_total
                else:
                    s = 0
                    acc_bits = mask
                    while acc_bits:
                        b = _ctz(acc_bits)
                        s = s + low_w[b]
                        acc_bits &= acc_bits - 1
                    total = total + hw * s
            h += 1
    finally:
        free(tab_a); free(tab_b); free(stack); free(var_words)
    return complex(total.real, total.imag)


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)

