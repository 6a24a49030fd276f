"""Loop kernels compiled with numba; same arithmetic as ``_numpy``."""
import numpy as np
from numba import njit

LANES = 64


@njit(cache=False, nogil=True)
def neumaier_sum_rows(x):
    m, n = x.shape
    nblk = (n + LANES - 1) // LANES
    out = np.empty(m)
    s = np.empty(LANES)
    c = np.empty(LANES)
    for i in range(m):
        for j in range(LANES):
            s[j] = 0.0
            c[j] = 0.0
        for b in range(nblk):
            for j in range(LANES):
                idx = b * LANES + j
                v = x[i, idx] if idx < n else 0.0
                t = s[j] + v
                if abs(s[j]) >= abs(v):
                    c[j] += (s[j] - t) + v
                else:
                    c[j] += (v - t) + s[j]
                s[j] = t
        total = 0.0
        comp = 0.0
        for j in range(LANES):
            v = s[j] + c[j]
            t = total + v
            if abs(total) >= abs(v):
                comp += (total - t) + v
            else:
                comp += (v - t) + total
            total = t
        out[i] = total + comp
    return out


def neumaier_sum(x):
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    return float(neumaier_sum_rows(x.reshape(1, -1))[0])


@njit(cache=False, nogil=True)
def _laurent_eval(coef_re, coef_im, n_min, z_re, z_im, out_re, out_im):
    npts = z_re.shape[0]
    ncoef = coef_re.shape[0]
    for i in range(npts):
        zr = z_re[i]
        zi = z_im[i]
        if n_min < 0:
            d = zr * zr + zi * zi
            br = zr / d
            bi = -zi / d
            e = -n_min
        else:
            br = zr
            bi = zi
            e = n_min
        pr = 1.0
        pi = 0.0
        for _ in range(e):
            pr, pi = pr * br - pi * bi, pr * bi + pi * br
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for k in range(ncoef):
            ar = coef_re[k]
            ai = coef_im[k]
            tr = ar * pr - ai * pi
            ti = ar * pi + ai * pr
            u = sr + tr
            if abs(sr) >= abs(tr):
                cr += (sr - u) + tr
            else:
                cr += (tr - u) + sr
            sr = u
            u = si + ti
            if abs(si) >= abs(ti):
                ci += (si - u) + ti
            else:
                ci += (ti - u) + si
            si = u
            pr, pi = pr * zr - pi * zi, pr * zi + pi * zr
        out_re[i] = sr + cr
        out_im[i] = si + ci


def laurent_eval(coef_re, coef_im, n_min, z_re, z_im):
    z_re = np.ascontiguousarray(z_re, dtype=np.float64)
    z_im = np.ascontiguousarray(z_im, dtype=np.float64)
    out_re = np.empty_like(z_re)
    out_im = np.empty_like(z_re)
    _laurent_eval(
        np.ascontiguousarray(coef_re, dtype=np.float64),
        np.ascontiguousarray(coef_im, dtype=np.float64),
        int(n_min), z_re, z_im, out_re, out_im,
    )
    return out_re, out_im


@njit(cache=False, nogil=True)
def _curl_periodic(b, a, h_r, h_t, out):
    nr, nt = a.shape
    two_hr = 2.0 * h_r
    two_ht = 2.0 * h_t
    for i in range(nr):
        for j in range(nt):
            if i == 0:
                dr = ((-3.0 * a[0, j] + 4.0 * a[1, j]) - a[2, j]) / two_hr
            elif i == nr - 1:
                dr = ((3.0 * a[i, j] - 4.0 * a[i - 1, j]) + a[i - 2, j]) / two_hr
            else:
                dr = (a[i + 1, j] - a[i - 1, j]) / two_hr
            jp = j + 1 if j + 1 < nt else 0
            jm = j - 1 if j > 0 else nt - 1
            dt = (b[i, jp] - b[i, jm]) / two_ht
            out[i, j] = dr - dt


def curl_periodic(comp_r, comp_t, h_r, h_t):
    a = np.ascontiguousarray(comp_t, dtype=np.float64)
    b = np.ascontiguousarray(comp_r, dtype=np.float64)
    out = np.empty_like(a)
    _curl_periodic(b, a, float(h_r), float(h_t), out)
    return out
