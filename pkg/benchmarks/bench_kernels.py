"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the kernel primitives on representative workloads (interaction sums
for six bodies, variational right-hand side for the reduced triangle system)
and one end-to-end monodromy evaluation per backend.

Run:  python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

from curvednbody import _kernels_py, kernels
from curvednbody.geometry import Curvature
from curvednbody.sampling import random_state

REPEAT = 2000

END_TO_END = """
import time
from curvednbody import kernels
from curvednbody.analysis import monodromy
from curvednbody.equilibria import catalog
spec = catalog("lagrangian_s3", r=0.62)
monodromy(spec)  # warm up
t0 = time.perf_counter()
for _ in range(3):
    monodromy(spec)
print(f"{kernels.BACKEND}: {(time.perf_counter() - t0) / 3:.4f} s/monodromy")
"""


def bench(label, func, *args, repeat=REPEAT):
    func(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        func(*args)
    dt = (time.perf_counter() - t0) / repeat
    print(f"  {label:24s} {dt * 1e6:10.2f} us/call")
    return dt


def main():
    try:
        from curvednbody import _kernels as compiled
    except ImportError:
        print("compiled kernels not built; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    state = random_state(6, Curvature(1.0), rng)
    g = kernels.metric_signs(1.0)
    y = np.concatenate([state.q.ravel(), state.v.ravel()])

    red = random_state(3, Curvature(1.0), rng)
    q3 = red.q[:, :3] / np.linalg.norm(red.q[:, :3], axis=1)[:, None]
    v3 = red.v[:, :3] - (q3 * red.v[:, :3]).sum(axis=1)[:, None] * q3
    g3 = np.ones(3)
    Y = np.concatenate([q3.ravel(), v3.ravel(), np.eye(18).ravel()])

    for name, impl in (("compiled", compiled), ("pure", _kernels_py)):
        print(f"{name}:")
        r = bench("rhs (n=6, d=4)", impl.rhs, y, 6, 4, state.masses, 1.0, g,
                  False)
        v = bench("variational rhs (n=3, d=3)", impl.variational_rhs, Y, 3, 3,
                  red.masses, 1.0, g3)
        p = bench("potential (n=6)", impl.potential, state.q, state.masses,
                  1.0, g)
        if name == "compiled":
            base = (r, v, p)
        else:
            print("  speedup (compiled/pure):",
                  ", ".join(f"{b2 / b1:.1f}x" for b1, b2 in
                            zip(base, (r, v, p))))

    print("end-to-end monodromy:")
    for pure in ("0", "1"):
        env = dict(os.environ, CURVEDNBODY_PURE=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True)
        print(" ", out.stdout.strip())
    return 0


if __name__ == "__main__":
    sys.exit(main())
