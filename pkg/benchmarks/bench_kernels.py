"""Compares the compiled and pure-Python fixpoint kernels.

Run with ``python benchmarks/bench_kernels.py``.  Asserts identical
results on random inputs, then times both backends on wide rows.
"""

from __future__ import annotations

import random
import time

from omega2tl import _kernels_py

try:
    from omega2tl import _kernels
except ImportError:
    _kernels = None


def _random_case(rng: random.Random, width: int):
    psi = bytearray(rng.randrange(2) for _ in range(width))
    theta = bytearray(rng.randrange(2) for _ in range(width))
    loop_start = rng.randrange(width)
    return psi, theta, loop_start


def check_agreement(cases: int = 500, width: int = 64) -> None:
    if _kernels is None:
        return
    rng = random.Random(0)
    for _ in range(cases):
        psi, theta, ls = _random_case(rng, rng.randint(1, width))
        assert _kernels.until_row(psi, theta, ls) == \
            _kernels_py.until_row(psi, theta, ls)


def bench(module, cases, repeats: int = 20) -> float:
    start = time.perf_counter()
    for _ in range(repeats):
        for psi, theta, ls in cases:
            module.until_row(psi, theta, ls)
    return time.perf_counter() - start


def main() -> None:
    check_agreement()
    rng = random.Random(1)
    cases = [_random_case(rng, 4096) for _ in range(200)]
    pure = bench(_kernels_py, cases)
    print(f"pure python : {pure:8.3f} s")
    if _kernels is None:
        print("compiled    : not built")
    else:
        compiled = bench(_kernels, cases)
        print(f"compiled    : {compiled:8.3f} s  ({pure / compiled:.1f}x faster)")


if __name__ == "__main__":
    main()
