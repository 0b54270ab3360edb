# cython: boundscheck=False, wraparound=False
"""Compiled fixpoint kernels; twin of _kernels_py.py."""


def until_row(psi, theta, int loop_start):
    cdef int n = len(psi)
    out = bytearray(n)
    cdef unsigned char[::1] p = psi
    cdef unsigned char[::1] t = theta
    cdef unsigned char[::1] o = out
    cdef int c, nxt, sweep
    cdef bint changed, bit
    for sweep in range(n + 1):
        changed = False
        for c in range(n - 1, -1, -1):
            nxt = c + 1 if c + 1 < n else loop_start
            bit = t[c] or (p[c] and o[nxt])
            if bit and not o[c]:
                o[c] = 1
                changed = True
        if not changed:
            break
    return out


def lasso_fixpoint(base, carry, int loop_start):
    return until_row(carry, base, loop_start)
