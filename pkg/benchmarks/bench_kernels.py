"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_kernels.py [--vars 22] [--trials 2000000] [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from boolelab import _pykernels, kernels
from boolelab.bounds import term_masks
from boolelab.core import lg_expression
from boolelab.labeling import LabelingScheme

try:
    from boolelab import _ckernels
except ImportError:
    _ckernels = None


def _masks(n_vars):
    # a ring of pair products over n_vars variables, like an extended LG chain
    return np.array([(1 << i) | (1 << ((i + 1) % n_vars)) for i in range(n_vars)], dtype=np.uint64)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=22)
    ap.add_argument("--trials", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    masks = _masks(args.vars)
    stop = 1 << args.vars
    trials = np.arange(args.trials, dtype=np.uint64)
    lg = term_masks(lg_expression(("Lille", "Lyon")), LabelingScheme.SETTING_ONLY)[1]

    backends = [("numpy", _pykernels)]
    if _ckernels is not None:
        backends.insert(0, ("cython", _ckernels))
    print(f"selected backend: {kernels.BACKEND}")

    results = {}
    for name, mod in backends:
        assert mod.scan_bounds(lg, 0, 8)[0] == -1
        t_scan = min(timeit.repeat(lambda: mod.scan_bounds(masks, 0, stop), number=1, repeat=args.repeat))
        t_rng = min(timeit.repeat(lambda: mod.counter_uniforms(7, trials, 0), number=1, repeat=args.repeat))
        results[name] = (t_scan, t_rng, mod.scan_bounds(masks, 0, stop), mod.counter_uniforms(7, trials[:1000], 0))
        print(f"{name:>7}  scan_bounds 2^{args.vars}: {t_scan * 1e3:9.1f} ms   "
              f"counter_uniforms {args.trials}: {t_rng * 1e3:8.1f} ms")

    if len(results) == 2:
        c, p = results["cython"], results["numpy"]
        assert c[2] == p[2] and np.array_equal(c[3], p[3]), "backends disagree"
        print(f"speedup  scan_bounds x{p[0] / c[0]:.1f}   counter_uniforms x{p[1] / c[1]:.1f}   (outputs identical)")


if __name__ == "__main__":
    main()
