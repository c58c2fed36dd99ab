# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: truncated-normal draws and the latent Gibbs scan.

Every rejection loop consumes the bit stream through the same three
primitives the pure-Python mirror uses (standard normal, standard
exponential, uniform), in the same order, so chains are bit-identical
across backends.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport INFINITY, exp, isinf, sqrt

from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_standard_exponential,
    random_standard_normal,
    random_standard_uniform,
)

cdef const char *CAPSULE_NAME = "BitGenerator"

# Below this lower bound plain normal rejection beats the shifted-exponential
# scheme for one-sided truncation (acceptance >= 1 - Phi(0.45) ~ 0.33).
cdef double ONE_SIDED_SWITCH = 0.45
cdef double SQRT_2PI = 2.5066282746310002


cdef bitgen_t *_bitgen(object generator) except NULL:
    capsule = generator.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("expected a numpy Generator with a BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


cdef double _tn_lower(bitgen_t *rng, double a) noexcept nogil:
    """Standard normal conditioned on [a, inf)."""
    cdef double x, lam, u
    if a <= ONE_SIDED_SWITCH:
        while True:
            x = random_standard_normal(rng)
            if x >= a:
                return x
    lam = 0.5 * (a + sqrt(a * a + 4.0))
    while True:
        x = a + random_standard_exponential(rng) / lam
        u = random_standard_uniform(rng)
        if u <= exp(-0.5 * (x - lam) * (x - lam)):
            return x


cdef double _tn_tail(bitgen_t *rng, double a, double b) noexcept nogil:
    """Standard normal conditioned on [a, b] with 0 < a < b."""
    cdef double root, lam, thr, x, u
    root = sqrt(a * a + 4.0)
    lam = 0.5 * (a + root)
    # Shifted-exponential proposal wins only when the interval is wide enough
    # to hold most of its proposal mass; otherwise reject from a uniform.
    thr = exp(0.5 + 0.25 * (a * a - a * root)) / lam
    if b - a <= thr:
        while True:
            x = a + (b - a) * random_standard_uniform(rng)
            u = random_standard_uniform(rng)
            if u <= exp(0.5 * (a * a - x * x)):
                return x
    while True:
        x = a + random_standard_exponential(rng) / lam
        if x > b:
            continue
        u = random_standard_uniform(rng)
        if u <= exp(-0.5 * (x - lam) * (x - lam)):
            return x


cdef double _tn_std(bitgen_t *rng, double a, double b) noexcept nogil:
    cdef double x, u
    if isinf(b) and b > 0:
        if isinf(a):
            return random_standard_normal(rng)
        return _tn_lower(rng, a)
    if isinf(a) and a < 0:
        return -_tn_lower(rng, -b)
    if a <= 0.0 and b >= 0.0:
        if b - a >= SQRT_2PI:
            while True:
                x = random_standard_normal(rng)
                if a <= x and x <= b:
                    return x
        while True:
            x = a + (b - a) * random_standard_uniform(rng)
            u = random_standard_uniform(rng)
            if u <= exp(-0.5 * x * x):
                return x
    if a > 0.0:
        return _tn_tail(rng, a, b)
    return -_tn_tail(rng, -b, -a)


cdef double _tn(bitgen_t *rng, double mu, double sd, double lo, double hi) noexcept nogil:
    cdef double a, b
    if isinf(lo) and lo < 0:
        a = -INFINITY
    else:
        a = (lo - mu) / sd
    if isinf(hi) and hi > 0:
        b = INFINITY
    else:
        b = (hi - mu) / sd
    return mu + sd * _tn_std(rng, a, b)


def trunc_normal(object generator, double mu, double sd, double lo, double hi):
    """One draw from N(mu, sd^2) conditioned on [lo, hi]."""
    cdef bitgen_t *rng = _bitgen(generator)
    cdef double out
    with generator.bit_generator.lock:
        out = _tn(rng, mu, sd, lo, hi)
    return out


def trunc_normal_fill(object generator, double mu, double sd, double lo,
                      double hi, double[::1] out):
    """Fill ``out`` with i.i.d. draws from N(mu, sd^2) on [lo, hi]."""
    cdef bitgen_t *rng = _bitgen(generator)
    cdef Py_ssize_t i, n = out.shape[0]
    with generator.bit_generator.lock, nogil:
        for i in range(n):
            out[i] = _tn(rng, mu, sd, lo, hi)


def z_gibbs_scan(object generator, double[:, ::1] z, double[:, ::1] mean,
                 double[:, ::1] prec, double[::1] scale):
    """One element-wise Gibbs pass over the nonnegative latent matrix.

    Row t of ``z`` follows a multivariate normal with mean ``mean[t]`` and
    precision ``scale[t] * prec``, truncated to the nonnegative orthant.
    Coordinates are resampled in index order from their one-sided
    truncated-normal full conditionals; ``z`` is updated in place.
    """
    cdef bitgen_t *rng = _bitgen(generator)
    cdef Py_ssize_t t, k, m
    cdef Py_ssize_t nrows = z.shape[0], ncols = z.shape[1]
    cdef double s, cond_mean, sd
    if mean.shape[0] != nrows or mean.shape[1] != ncols:
        raise ValueError("mean shape mismatch")
    if prec.shape[0] != ncols or prec.shape[1] != ncols:
        raise ValueError("precision shape mismatch")
    if scale.shape[0] != nrows:
        raise ValueError("scale length mismatch")
    with generator.bit_generator.lock, nogil:
        for t in range(nrows):
            for k in range(ncols):
                s = 0.0
                for m in range(ncols):
                    if m != k:
                        s += prec[k, m] * (z[t, m] - mean[t, m])
                cond_mean = mean[t, k] - s / prec[k, k]
                sd = 1.0 / sqrt(scale[t] * prec[k, k])
                z[t, k] = _tn(rng, cond_mean, sd, 0.0, INFINITY)


def z_column_scan(object generator, double[:, ::1] z, double[:, ::1] mean,
                  double[:, ::1] prec, double[::1] scale, Py_ssize_t col):
    """Resample one latent column from its full conditionals (in place).

    Same conditional law as z_gibbs_scan restricted to coordinate ``col``.
    """
    cdef bitgen_t *rng = _bitgen(generator)
    cdef Py_ssize_t t, m
    cdef Py_ssize_t nrows = z.shape[0], ncols = z.shape[1]
    cdef double s, cond_mean, sd
    if not 0 <= col < ncols:
        raise ValueError("column index out of range")
    with generator.bit_generator.lock, nogil:
        for t in range(nrows):
            s = 0.0
            for m in range(ncols):
                if m != col:
                    s += prec[col, m] * (z[t, m] - mean[t, m])
            cond_mean = mean[t, col] - s / prec[col, col]
            sd = 1.0 / sqrt(scale[t] * prec[col, col])
            z[t, col] = _tn(rng, cond_mean, sd, 0.0, INFINITY)
