"""Time the numba kernels against their numpy twins, plus one end-to-end run.

    python benchmarks/bench_kernels.py [--batch 256] [--repeat 20]
"""

import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from hhgeom import _kernels as K

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from test_kernels import sample_args  # noqa: E402


def best_of(fn, args, repeat):
    fn(*args)  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def end_to_end(disable):
    env = dict(os.environ, HHGEOM_DISABLE_NUMBA="1" if disable else "0")
    code = ("import time; from hhgeom.runner import verify_all; verify_all(random=20);"
            "t=time.perf_counter(); verify_all(random=20); print(time.perf_counter()-t)")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        sys.exit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"batch {args.batch}, best of {args.repeat}")
    print(f"{'kernel':<18}{'numpy [us]':>12}{'numba [us]':>12}{'speed-up':>10}")
    for name in sorted(K.NUMPY_KERNELS):
        a = [np.ascontiguousarray(x) for x in sample_args(name, args.batch, rng)]
        t_np = best_of(K.NUMPY_KERNELS[name], a, args.repeat)
        t_nb = best_of(K.NUMBA_KERNELS[name], a, args.repeat)
        print(f"{name:<18}{t_np * 1e6:>12.1f}{t_nb * 1e6:>12.1f}{t_np / t_nb:>10.2f}")
    t_np, t_nb = end_to_end(True), end_to_end(False)
    print(f"\nverify_all(random=20): numpy {t_np:.3f} s, numba {t_nb:.3f} s")


if __name__ == "__main__":
    main()
