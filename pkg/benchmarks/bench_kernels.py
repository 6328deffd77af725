"""Timing of the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-N wall time for each kernel and backend, plus the
speedup of the compiled version where it is available.
"""

import argparse
import timeit

from zetanorm import kernels

CASES = {
    "nested_sums (3,1,1) N=1e6": lambda k: k.nested_sums((3, 1, 1), False, 10**6, 10),
    "nested_sums bar (2,1,1,1) N=1e6": lambda k: k.nested_sums((2, 1, 1, 1), True, 10**6, 10),
    "norm_moment_block r=3 65536": lambda k: k.norm_moment_block(1, 0, 65536, 3, 20.0, 1.0),
    "uniforms 1e6": lambda k: k.uniforms(1, 0, 10**6),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = sorted(kernels.BACKENDS)
    print(f"{'kernel':<34}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in CASES.items():
        times = {}
        for name in names:
            mod = kernels.BACKENDS[name]
            fn(mod)  # warm-up
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{label:<34}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if "compiled" in times:
            row += f"{times['python'] / times['compiled']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
