"""Time the compiled kernels against the pure-Python fallback.

Each backend runs in its own interpreter (``COHOMA_PURE=1`` selects the
fallback) on the same seeded workload.  Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, time
from cohoma import BACKEND, apply, commutator, gauge, jet, lie
from cohoma.sampling import random_polynomial

def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best

repeat = int(__import__("sys").argv[1])
p = jet.flat_tsm(4)
rng = random.Random(1)
polys = [random_polynomial(p.alg, rng, terms=6, max_len=4) for _ in range(60)]
g = gauge.build_gauge_jet(lie.su2(), 4, 2, 0, 0, 1)
res = {
    "products": timed(lambda: [a * b for a in polys[:30] for b in polys[30:]], repeat),
    "derivations": timed(lambda: [apply(p.K, apply(p.Q, f)) for f in polys], repeat),
    "gauge Q^2": timed(lambda: commutator(g.Q, g.Q).is_zero(), repeat),
    "tym sequence": timed(lambda: gauge.tym_observables(g), repeat),
}
print(json.dumps({"backend": BACKEND, "seconds": res}))
"""


def run(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("COHOMA_PURE", None)
    if pure:
        env["COHOMA_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    pure = run(True, args.repeat)
    native = run(False, args.repeat)
    if native["backend"] != "cython":
        print("compiled kernels are not built; only the fallback was timed")
    print(f"{'workload':<14} {'python (s)':>11} {native['backend'] + ' (s)':>11} {'speedup':>8}")
    for name, t_pure in pure["seconds"].items():
        t_nat = native["seconds"][name]
        print(f"{name:<14} {t_pure:>11.4f} {t_nat:>11.4f} {t_pure / t_nat:>7.2f}x")


if __name__ == "__main__":
    main()
