"""Pure numpy fallback for the compiled kernels in ``_ckernels.pyx``."""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
STRIDE = np.uint64(8)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 20


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def scan_bounds(masks, start, stop):
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    if stop <= start:
        raise ValueError("empty assignment range")
    nterms = masks.shape[0]
    vmin, vmax = nterms + 1, -nterms - 1
    argmin = argmax = start
    for lo in range(start, stop, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.uint64)
        odd = np.zeros(idx.shape, dtype=np.int64)
        for mask in masks:
            odd += np.bitwise_count(idx & mask) & 1
        values = nterms - 2 * odd
        i = int(np.argmin(values))
        if values[i] < vmin:
            vmin, argmin = int(values[i]), lo + i
        i = int(np.argmax(values))
        if values[i] > vmax:
            vmax, argmax = int(values[i]), lo + i
    return vmin, argmin, vmax, argmax


def counter_uniforms(seed, trials, draw):
    trials = np.ascontiguousarray(trials, dtype=np.uint64)
    key = _mix(np.array([seed], dtype=np.uint64) + GOLDEN)
    counters = trials * STRIDE + np.uint64(draw + 1)
    z = _mix(key + GOLDEN * counters)
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)
