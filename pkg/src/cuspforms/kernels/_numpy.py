"""Vectorised numpy implementations of the hot kernels.

Every function here performs the same floating-point operations, in the same
order, as its counterpart in ``_numba``; the two backends agree bit for bit.
"""
import numpy as np

LANES = 64


def neumaier_sum_rows(x):
    """Compensated sum of each row of a 2-D array.

    Elements are dealt round-robin onto ``LANES`` accumulators, each lane is
    summed with Neumaier's algorithm, and the lane results are then summed
    sequentially, again with compensation.  The order is fixed by the array
    shape alone.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    m, n = x.shape
    nblk = -(-n // LANES)
    padded = np.zeros((m, nblk * LANES))
    padded[:, :n] = x
    blocks = padded.reshape(m, nblk, LANES)

    s = np.zeros((m, LANES))
    c = np.zeros((m, LANES))
    for b in range(nblk):
        v = blocks[:, b, :]
        t = s + v
        c += np.where(np.abs(s) >= np.abs(v), (s - t) + v, (v - t) + s)
        s = t
    lane = s + c

    total = np.zeros(m)
    comp = np.zeros(m)
    for j in range(LANES):
        v = lane[:, j]
        t = total + v
        comp += np.where(np.abs(total) >= np.abs(v), (total - t) + v, (v - t) + total)
        total = t
    return total + comp


def neumaier_sum(x):
    x = np.asarray(x, dtype=np.float64).ravel()
    return float(neumaier_sum_rows(x[None, :])[0])


def laurent_eval(coef_re, coef_im, n_min, z_re, z_im):
    """Evaluate sum_k a_k z^(n_min+k) at every point of the flat arrays z_re, z_im.

    Terms are accumulated in ascending power with Neumaier compensation on the
    real and imaginary parts separately.
    """
    z_re = np.asarray(z_re, dtype=np.float64)
    z_im = np.asarray(z_im, dtype=np.float64)
    if n_min < 0:
        d = z_re * z_re + z_im * z_im
        b_re = z_re / d
        b_im = -z_im / d
        e = -n_min
    else:
        b_re = z_re
        b_im = z_im
        e = n_min
    p_re = np.ones_like(z_re)
    p_im = np.zeros_like(z_re)
    for _ in range(e):
        p_re, p_im = p_re * b_re - p_im * b_im, p_re * b_im + p_im * b_re

    s_re = np.zeros_like(z_re)
    s_im = np.zeros_like(z_re)
    c_re = np.zeros_like(z_re)
    c_im = np.zeros_like(z_re)
    for k in range(len(coef_re)):
        ar = coef_re[k]
        ai = coef_im[k]
        t_re = ar * p_re - ai * p_im
        t_im = ar * p_im + ai * p_re

        u = s_re + t_re
        c_re += np.where(np.abs(s_re) >= np.abs(t_re), (s_re - u) + t_re, (t_re - u) + s_re)
        s_re = u
        u = s_im + t_im
        c_im += np.where(np.abs(s_im) >= np.abs(t_im), (s_im - u) + t_im, (t_im - u) + s_im)
        s_im = u

        p_re, p_im = p_re * z_re - p_im * z_im, p_re * z_im + p_im * z_re
    return s_re + c_re, s_im + c_im


def curl_periodic(comp_r, comp_t, h_r, h_t):
    """d(comp_t)/dr - d(comp_r)/dt on an (r, t) grid, t periodic along axis 1.

    Second-order centred differences; one-sided second-order stencils on the
    two r boundaries.
    """
    a = np.asarray(comp_t, dtype=np.float64)
    b = np.asarray(comp_r, dtype=np.float64)
    two_hr = 2.0 * h_r
    two_ht = 2.0 * h_t

    d_r = np.empty_like(a)
    d_r[1:-1] = (a[2:] - a[:-2]) / two_hr
    d_r[0] = ((-3.0 * a[0] + 4.0 * a[1]) - a[2]) / two_hr
    d_r[-1] = ((3.0 * a[-1] - 4.0 * a[-2]) + a[-3]) / two_hr

    d_t = (np.roll(b, -1, axis=1) - np.roll(b, 1, axis=1)) / two_ht
    return d_r - d_t
