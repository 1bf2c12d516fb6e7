"""Time the numba kernels against the numpy fallback.

The backend is fixed at import time by SPIKED_DISABLE_NUMBA, so each backend
runs in its own subprocess. Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from spiked._accel import USE_NUMBA
from spiked.oscillator import PotentialSpec, RadialGrid, exact_spectrum
from spiked.specfun import ik_scaled_array

repeat = int(sys.argv[1])

def best(fn):
    fn()  # warm-up (includes JIT compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

spec = PotentialSpec(alpha=4.0, lam=0.1)
z = np.geomspace(1e-3, 1e3, 20000)
out = {
    "backend": "numba" if USE_NUMBA else "numpy",
    "sturm n=2000 k=3": best(lambda: exact_spectrum(spec, RadialGrid(12.0, 2000), 3)),
    "sturm n=20000 k=1": best(lambda: exact_spectrum(spec, RadialGrid(8.0, 20000), 1)),
    "bessel 20000 points": best(lambda: ik_scaled_array(0.5, z)),
}
print(json.dumps(out))
"""


def run_backend(disable, repeat):
    env = dict(os.environ)
    if disable:
        env["SPIKED_DISABLE_NUMBA"] = "1"
    else:
        env.pop("SPIKED_DISABLE_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<22}{fast[key]:>12.4f}{slow[key]:>12.4f}{slow[key] / fast[key]:>9.1f}x")


if __name__ == "__main__":
    start = time.perf_counter()
    main()
    print(f"total wall time {time.perf_counter() - start:.1f} s")
