"""Independent high-precision reference implementations (mpmath)."""

import mpmath as mp

mp.mp.dps = 30


def exp_sf(rate, t):
    return mp.e ** (-mp.mpf(rate) * t)


def exp_pdf(rate, t):
    return mp.mpf(rate) * mp.e ** (-mp.mpf(rate) * t)


def ln_sf(mu, sigma, t):
    if t == 0:
        return mp.mpf(1)
    return 1 - mp.ncdf((mp.log(t) - mu) / sigma)


def ln_pdf(mu, sigma, t):
    if t == 0:
        return mp.mpf(0)
    t = mp.mpf(t)
    return mp.npdf((mp.log(t) - mu) / sigma) / (t * sigma)


def ray_sf(scale, t):
    return mp.e ** (-mp.mpf(t) ** 2 / (2 * mp.mpf(scale) ** 2))


def ray_pdf(scale, t):
    s2 = mp.mpf(scale) ** 2
    return mp.mpf(t) / s2 * mp.e ** (-mp.mpf(t) ** 2 / (2 * s2))


def link_survival(t):
    return exp_sf(1, t) * ln_sf(1, 2, t) * ray_sf(2, t)


def mean_of(sf):
    return mp.quad(sf, [0, 1, 2, 4, 8, 16, 32, mp.inf])
