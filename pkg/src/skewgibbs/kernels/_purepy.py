"""Pure-Python kernel backend.

Mirrors the compiled kernels call-for-call: every branch consumes the
generator through the same primitives (standard_normal, standard_exponential,
random) in the same order, so a chain run on this backend is bit-identical
to one run on the C backend. Orders of magnitude slower; meant as the
no-compiler fallback and as the reference in backend-equality tests.
"""

import math

_ONE_SIDED_SWITCH = 0.45
_SQRT_2PI = 2.5066282746310002


def _tn_lower(rng, a):
    if a <= _ONE_SIDED_SWITCH:
        while True:
            x = rng.standard_normal()
            if x >= a:
                return x
    lam = 0.5 * (a + math.sqrt(a * a + 4.0))
    while True:
        x = a + rng.standard_exponential() / lam
        u = rng.random()
        if u <= math.exp(-0.5 * (x - lam) * (x - lam)):
            return x


def _tn_tail(rng, a, b):
    root = math.sqrt(a * a + 4.0)
    lam = 0.5 * (a + root)
    thr = math.exp(0.5 + 0.25 * (a * a - a * root)) / lam
    if b - a <= thr:
        while True:
            x = a + (b - a) * rng.random()
            u = rng.random()
            if u <= math.exp(0.5 * (a * a - x * x)):
                return x
    while True:
        x = a + rng.standard_exponential() / lam
        if x > b:
            continue
        u = rng.random()
        if u <= math.exp(-0.5 * (x - lam) * (x - lam)):
            return x


def _tn_std(rng, a, b):
    if b == math.inf:
        if a == -math.inf:
            return rng.standard_normal()
        return _tn_lower(rng, a)
    if a == -math.inf:
        return -_tn_lower(rng, -b)
    if a <= 0.0 <= b:
        if b - a >= _SQRT_2PI:
            while True:
                x = rng.standard_normal()
                if a <= x <= b:
                    return x
        while True:
            x = a + (b - a) * rng.random()
            u = rng.random()
            if u <= math.exp(-0.5 * x * x):
                return x
    if a > 0.0:
        return _tn_tail(rng, a, b)
    return -_tn_tail(rng, -b, -a)


def _tn(rng, mu, sd, lo, hi):
    a = -math.inf if lo == -math.inf else (lo - mu) / sd
    b = math.inf if hi == math.inf else (hi - mu) / sd
    return mu + sd * _tn_std(rng, a, b)


def trunc_normal(generator, mu, sd, lo, hi):
    """One draw from N(mu, sd^2) conditioned on [lo, hi]."""
    return _tn(generator, mu, sd, lo, hi)


def trunc_normal_fill(generator, mu, sd, lo, hi, out):
    """Fill ``out`` with i.i.d. draws from N(mu, sd^2) on [lo, hi]."""
    for i in range(out.shape[0]):
        out[i] = _tn(generator, mu, sd, lo, hi)


def z_gibbs_scan(generator, z, mean, prec, scale):
    """One element-wise Gibbs pass over the nonnegative latent matrix.

    Same contract as the compiled version; updates ``z`` in place.
    """
    nrows, ncols = z.shape
    if mean.shape != (nrows, ncols):
        raise ValueError("mean shape mismatch")
    if prec.shape != (ncols, ncols):
        raise ValueError("precision shape mismatch")
    if scale.shape != (nrows,):
        raise ValueError("scale length mismatch")
    inf = math.inf
    for t in range(nrows):
        for k in range(ncols):
            s = 0.0
            for m in range(ncols):
                if m != k:
                    s += prec[k, m] * (z[t, m] - mean[t, m])
            cond_mean = mean[t, k] - s / prec[k, k]
            sd = 1.0 / math.sqrt(scale[t] * prec[k, k])
            z[t, k] = _tn(generator, cond_mean, sd, 0.0, inf)


def z_column_scan(generator, z, mean, prec, scale, col):
    """Resample one latent column from its full conditionals (in place)."""
    nrows, ncols = z.shape
    if not 0 <= col < ncols:
        raise ValueError("column index out of range")
    inf = math.inf
    for t in range(nrows):
        s = 0.0
        for m in range(ncols):
            if m != col:
                s += prec[col, m] * (z[t, m] - mean[t, m])
        cond_mean = mean[t, col] - s / prec[col, col]
        sd = 1.0 / math.sqrt(scale[t] * prec[col, col])
        z[t, col] = _tn(generator, cond_mean, sd, 0.0, inf)


__all__ = ["trunc_normal", "trunc_normal_fill", "z_column_scan", "z_gibbs_scan"]
