"""Compiled vs interpreted series kernel.

Each configuration runs in a fresh interpreter because the backend is
chosen at import.  Usage: python benchmarks/bench_kernel.py [--repeat R]
"""
import argparse
import json
import os
import subprocess
import sys

WORK = r"""
import json, time
import wallcross
from wallcross.dt import kronecker_dt, kronecker_quantum
from wallcross.qdilog import check_pentagon
jobs = {
    "kronecker_k3_N20": lambda: kronecker_dt(3, 20),
    "quantum_kronecker_k2_N12": lambda: kronecker_quantum(2, 12),
    "pentagon_N14": lambda: check_pentagon(14),
}
out = {"kernel": wallcross.KERNEL_BACKEND, "rationals": wallcross.RATIONAL_BACKEND}
for name, fn in jobs.items():
    best = None
    for _ in range(REPEAT):
        t = time.perf_counter()
        fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    out[name] = best
print(json.dumps(out))
"""

CONFIGS = {
    "compiled": {},
    "interpreted-kernel": {"WALLCROSS_KERNEL": "python"},
    "pure": {"WALLCROSS_PURE": "1"},
}


def run(env_extra, repeat):
    env = {k: v for k, v in os.environ.items() if not k.startswith("WALLCROSS_")}
    env.update(env_extra)
    code = WORK.replace("REPEAT", str(repeat))
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    results = {name: run(env, args.repeat) for name, env in CONFIGS.items()}
    if args.json:
        print(json.dumps(results, indent=2))
        return
    jobs = [k for k in results["compiled"] if k not in ("kernel", "rationals")]
    print(f"{'job':28s}" + "".join(f"{c:>20s}" for c in CONFIGS) + f"{'kernel speedup':>16s}")
    for j in jobs:
        row = "".join(f"{results[c][j]:19.3f}s" for c in CONFIGS)
        sp = results["interpreted-kernel"][j] / results["compiled"][j]
        print(f"{j:28s}{row}{sp:15.2f}x")
    print("backends:", {c: (r["kernel"], r["rationals"]) for c, r in results.items()})


if __name__ == "__main__":
    main()
