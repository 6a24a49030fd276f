"""High-precision (mpmath) versions of evaluation, norms and periods.

Used to generate reference values in tests; mpmath is imported lazily and is
not needed at runtime.
"""
from __future__ import annotations

from .laurent import Annulus, LaurentSeries

DPS = 50


def _mp():
    import mpmath
    return mpmath


def _coeff(mp, a):
    return mp.mpc(mp.mpf(a.real), mp.mpf(a.imag))


def mp_evaluate(series: LaurentSeries, z, dps: int = DPS):
    """Term-by-term sum of a_n z^n with every operation at ``dps`` digits."""
    mp = _mp()
    with mp.workdps(dps):
        zz = mp.mpc(mp.mpf(complex(z).real), mp.mpf(complex(z).imag))
        total = mp.mpc(0)
        for n, a in series.items():
            total += _coeff(mp, a) * zz ** n
        return complex(total)


def mp_term_norm_sq(n: int, a: complex, annulus: Annulus, dps: int = DPS):
    mp = _mp()
    with mp.workdps(dps):
        mag2 = mp.mpf(a.real) ** 2 + mp.mpf(a.imag) ** 2
        rho, outer = mp.mpf(annulus.rho), mp.mpf(annulus.outer)
        k = n + 1
        if k == 0:
            return mp.mpf(2) * mp.pi * mag2 * (mp.log(outer) - mp.log(rho))
        return mp.mpf(2) * mp.pi * mag2 * (outer ** (2 * k) - rho ** (2 * k)) / (2 * k)


def mp_norm_sq(series: LaurentSeries, annulus: Annulus, dps: int = DPS) -> float:
    mp = _mp()
    with mp.workdps(dps):
        return float(mp.fsum(mp_term_norm_sq(n, a, annulus, dps) for n, a in series.items()))


def mp_annulus_norm_sq(series: LaurentSeries, annulus: Annulus, dps: int = 30) -> float:
    """Adaptive 2-D quadrature of |f|^2 r dr dtheta, independent of orthogonality."""
    mp = _mp()
    with mp.workdps(dps):
        coeffs = [(n, _coeff(mp, a)) for n, a in series.items()]

        def integrand(r, th):
            z = r * mp.expj(th)
            f = mp.fsum(a * z ** n for n, a in coeffs)
            return (f.real ** 2 + f.imag ** 2) * r

        return float(mp.quad(integrand, [mp.mpf(annulus.rho), mp.mpf(annulus.outer)], [0, mp.pi, 2 * mp.pi]))


def mp_contour_period(series: LaurentSeries, radius: float, nodes: int = 64, dps: int = DPS) -> float:
    mp = _mp()
    with mp.workdps(dps):
        total = mp.mpf(0)
        for j in range(nodes):
            z = mp.mpf(radius) * mp.expj(2 * mp.pi * j / nodes)
            f = mp.fsum(_coeff(mp, a) * z ** n for n, a in series.items())
            total += -(z * f).imag
        return float(total * 2 * mp.pi / nodes)
