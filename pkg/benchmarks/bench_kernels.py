"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Checks the two backends agree, then times dilogarithm evaluation and full
system evaluation (values + Jacobian) on a T4 system of a 12-crossing
diagram.
"""

import argparse
import timeit

import numpy as np

from octa_ptolemy import _kernels_py
from octa_ptolemy.diagram import parse_pd
from octa_ptolemy.gluing import build_t4_system

try:
    from octa_ptolemy import _kernels as _compiled
except ImportError:
    _compiled = None

# a 6-crossing diagram without kinks; any such knot diagram will do
PD = ("X[1,7,2,6];X[3,10,4,11];X[5,3,6,2];X[7,1,8,12];X[9,4,10,5];X[11,9,12,8]")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not built; nothing to compare")
        return

    rng = np.random.default_rng(0)
    zs = rng.normal(size=2000) * 2 + 1j * rng.normal(size=2000) * 2
    err = max(abs(_compiled.dilog(z) - _kernels_py.dilog(z)) for z in zs)
    print(f"dilog backends agree to {err:.2e}")

    s = build_t4_system(parse_pd(PD))
    x = np.exp(rng.uniform(-1, 1, len(s.var_ids)) + 1j * rng.uniform(-3, 3, len(s.var_ids)))
    arrays = s._arrays
    a = _compiled.eval_system(x, *arrays, len(s))
    b = _kernels_py.eval_system(x, *arrays, len(s))
    print(f"eval_system backends agree to {max(np.max(np.abs(a[0] - b[0])), np.max(np.abs(a[1] - b[1]))):.2e}")

    rows = []
    for name, mod in (("cython", _compiled), ("python", _kernels_py)):
        t_dilog = min(timeit.repeat(lambda: [mod.dilog(z) for z in zs], number=1, repeat=args.repeat))
        t_eval = min(timeit.repeat(lambda: mod.eval_system(x, *arrays, len(s)), number=200, repeat=args.repeat))
        rows.append((name, t_dilog / len(zs) * 1e6, t_eval / 200 * 1e6))
    print(f"{'backend':8} {'dilog us/call':>14} {'eval us/call':>13}")
    for name, td, te in rows:
        print(f"{name:8} {td:14.3f} {te:13.2f}")
    print(f"speedup: dilog x{rows[1][1] / rows[0][1]:.1f}, eval_system x{rows[1][2] / rows[0][2]:.1f}")


if __name__ == "__main__":
    main()
