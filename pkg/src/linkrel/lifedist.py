"""Parametric life distributions for the fading components of a wireless link.

Three families are provided, one per attenuation phenomenon:

* :class:`Exponential` for large-scale pathloss,
* :class:`LogNormal` for shadowing,
* :class:`Rayleigh` for multipath fading.

Every function accepts a scalar time or a numpy array of times and returns
the same shape (a Python ``float`` for scalar input). ``cdf`` and
``survival`` are always derived from one another: the smaller of the two
tails is evaluated directly and the other is one minus it, so neither
loses relative precision and ``cdf + survival == 1`` up to rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from scipy.special import erfc, ndtri

from linkrel.errors import DomainError, HazardUndefinedError, NoSolutionError

__all__ = [
    "Kind",
    "LifeDistribution",
    "Exponential",
    "LogNormal",
    "Rayleigh",
    "Moments",
    "pdf",
    "cdf",
    "survival",
    "hazard",
    "moments",
    "from_moments",
    "ppf",
    "sample",
    "normal_sf",
    "normal_cdf",
]

ArrayLike = Union[float, np.ndarray]

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
_LN2 = math.log(2.0)

# Rayleigh variance / mean**2 for any scale.
RAYLEIGH_DISPERSION = (4.0 - math.pi) / math.pi
_MOMENT_RTOL = 1e-6


class Kind(str, enum.Enum):
    EXPONENTIAL = "exponential"
    LOGNORMAL = "lognormal"
    RAYLEIGH = "rayleigh"


@dataclass(frozen=True)
class Moments:
    """Mean and variance of a lifetime, in abstract time units."""

    mean: float
    variance: float


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def _as_time(t: ArrayLike) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0):
        bad = arr[np.isnan(arr) | (arr < 0.0)].flat[0]
        raise DomainError(f"time must be >= 0, got {float(bad)!r}")
    return arr


def _out(arr: np.ndarray) -> ArrayLike:
    return float(arr) if np.ndim(arr) == 0 else arr


def normal_sf(z: ArrayLike) -> ArrayLike:
    """Upper tail of the standard normal, ``P(Z > z)``, via ``erfc``."""
    return _out(0.5 * erfc(np.asarray(z, dtype=float) / _SQRT2))


def normal_cdf(z: ArrayLike) -> ArrayLike:
    return _out(0.5 * erfc(-np.asarray(z, dtype=float) / _SQRT2))


def _split_tails(small_is_cdf: np.ndarray, direct_cdf, direct_sf):
    """Combine the accurately computed tail with its complement."""
    cdf_v = np.where(small_is_cdf, direct_cdf, 1.0 - direct_sf)
    sf_v = np.where(small_is_cdf, 1.0 - direct_cdf, direct_sf)
    return cdf_v, sf_v


def _exp_tails(x: np.ndarray):
    # x is the cumulative hazard; F = 1 - exp(-x).
    small = x < _LN2
    return _split_tails(small, -np.expm1(-x), np.exp(-x))


class LifeDistribution:
    """Base class. Subclasses are frozen dataclasses holding the parameters."""

    kind: ClassVar[Kind]

    def _tails(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def _pdf(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _hazard(self, t: np.ndarray, sf: np.ndarray) -> np.ndarray:
        return self._pdf(t) / sf

    def _ppf(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def moments(self) -> Moments:
        raise NotImplementedError

    @property
    def params(self) -> dict[str, float]:
        raise NotImplementedError

    def pdf(self, t: ArrayLike) -> ArrayLike:
        return _out(self._pdf(_as_time(t)))

    def cdf(self, t: ArrayLike) -> ArrayLike:
        return _out(self._tails(_as_time(t))[0])

    def survival(self, t: ArrayLike) -> ArrayLike:
        return _out(self._tails(_as_time(t))[1])

    sf = survival

    def hazard(self, t: ArrayLike) -> ArrayLike:
        """Failure rate ``pdf / survival``.

        Raises :class:`HazardUndefinedError` if survival has underflowed to
        zero at any requested time.
        """
        arr = _as_time(t)
        sf = self._tails(arr)[1]
        dead = sf <= 0.0
        if np.any(dead):
            raise HazardUndefinedError(float(arr[dead].flat[0]))
        return _out(self._hazard(arr, sf))

    def ppf(self, u: ArrayLike) -> ArrayLike:
        """Inverse CDF for ``u`` in ``[0, 1)``."""
        arr = np.asarray(u, dtype=float)
        if np.any(~((arr >= 0.0) & (arr < 1.0))):
            raise DomainError("uniform variate must lie in [0, 1)")
        return _out(self._ppf(arr))

    def sample(self, rng: np.random.Generator, size=None) -> ArrayLike:
        """Inverse-transform draw(s) using ``rng.random`` for the uniforms."""
        return _out(self._ppf(np.asarray(rng.random(size))))


@dataclass(frozen=True)
class Exponential(LifeDistribution):
    rate: float

    kind: ClassVar[Kind] = Kind.EXPONENTIAL

    def __post_init__(self):
        object.__setattr__(self, "rate", _positive("rate", self.rate))

    @property
    def params(self) -> dict[str, float]:
        return {"rate": self.rate}

    def _tails(self, t):
        return _exp_tails(self.rate * t)

    def _pdf(self, t):
        return self.rate * np.exp(-self.rate * t)

    def _hazard(self, t, sf):
        return np.full_like(t, self.rate)

    def _ppf(self, u):
        return -np.log1p(-u) / self.rate

    def moments(self) -> Moments:
        mean = 1.0 / self.rate
        return Moments(mean, mean * mean)


@dataclass(frozen=True)
class LogNormal(LifeDistribution):
    """Log-normal lifetime; ``mu`` and ``sigma`` describe ``ln T``."""

    mu: float
    sigma: float

    kind: ClassVar[Kind] = Kind.LOGNORMAL

    def __post_init__(self):
        mu = float(self.mu)
        if not math.isfinite(mu):
            raise DomainError(f"mu must be finite, got {mu!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", _positive("sigma", self.sigma))

    @property
    def params(self) -> dict[str, float]:
        return {"mu": self.mu, "sigma": self.sigma}

    def _z(self, t):
        with np.errstate(divide="ignore"):
            return (np.log(t) - self.mu) / self.sigma

    def _tails(self, t):
        z = self._z(t)
        return _split_tails(
            z <= 0.0, 0.5 * erfc(-z / _SQRT2), 0.5 * erfc(z / _SQRT2)
        )

    def _pdf(self, t):
        z = self._z(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = np.exp(-0.5 * z * z) / (t * self.sigma * _SQRT2PI)
        return np.where(t > 0.0, dens, 0.0)

    def _ppf(self, u):
        return np.exp(self.mu + self.sigma * ndtri(u))

    def moments(self) -> Moments:
        s2 = self.sigma * self.sigma
        mean = math.exp(self.mu + 0.5 * s2)
        return Moments(mean, math.expm1(s2) * math.exp(2.0 * self.mu + s2))


@dataclass(frozen=True)
class Rayleigh(LifeDistribution):
    """Rayleigh lifetime with survival ``exp(-t**2 / (2 scale**2))``."""

    scale: float

    kind: ClassVar[Kind] = Kind.RAYLEIGH

    def __post_init__(self):
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    @property
    def params(self) -> dict[str, float]:
        return {"scale": self.scale}

    def _tails(self, t):
        return _exp_tails(t * t / (2.0 * self.scale * self.scale))

    def _pdf(self, t):
        s2 = self.scale * self.scale
        return t / s2 * np.exp(-t * t / (2.0 * s2))

    def _hazard(self, t, sf):
        return t / (self.scale * self.scale)

    def _ppf(self, u):
        return self.scale * np.sqrt(-2.0 * np.log1p(-u))

    def moments(self) -> Moments:
        s = self.scale
        return Moments(s * math.sqrt(math.pi / 2.0), (4.0 - math.pi) / 2.0 * s * s)


FAMILIES: dict[Kind, type[LifeDistribution]] = {
    Kind.EXPONENTIAL: Exponential,
    Kind.LOGNORMAL: LogNormal,
    Kind.RAYLEIGH: Rayleigh,
}


# Functional surface -------------------------------------------------------


def pdf(d: LifeDistribution, t: ArrayLike) -> ArrayLike:
    return d.pdf(t)


def cdf(d: LifeDistribution, t: ArrayLike) -> ArrayLike:
    return d.cdf(t)


def survival(d: LifeDistribution, t: ArrayLike) -> ArrayLike:
    return d.survival(t)


def hazard(d: LifeDistribution, t: ArrayLike) -> ArrayLike:
    return d.hazard(t)


def moments(d: LifeDistribution) -> Moments:
    return d.moments()


def ppf(d: LifeDistribution, u: ArrayLike) -> ArrayLike:
    return d.ppf(u)


def sample(d: LifeDistribution, rng: np.random.Generator, size=None) -> ArrayLike:
    return d.sample(rng, size)


def from_moments(kind: Kind | str, m: Moments) -> LifeDistribution:
    """Build the distribution of family ``kind`` whose mean and variance are ``m``.

    Exponential and Rayleigh have one parameter, so their variance is fixed
    by the mean; a mismatch beyond a relative 1e-6 raises
    :class:`NoSolutionError`.
    """
    kind = Kind(kind)
    mean, var = float(m.mean), float(m.variance)
    for label, value in (("mean", mean), ("variance", var)):
        if not (math.isfinite(value) and value > 0.0):
            raise NoSolutionError(f"{label} must be positive and finite, got {value!r}")
    ratio = var / (mean * mean)

    if kind is Kind.EXPONENTIAL:
        if abs(ratio - 1.0) > _MOMENT_RTOL:
            raise NoSolutionError(
                f"exponential requires variance == mean**2 (variance/mean**2 = {ratio!r})"
            )
        return Exponential(rate=1.0 / mean)
    if kind is Kind.RAYLEIGH:
        if abs(ratio / RAYLEIGH_DISPERSION - 1.0) > _MOMENT_RTOL:
            raise NoSolutionError(
                "rayleigh requires variance/mean**2 == (4 - pi)/pi "
                f"(got {ratio!r}, expected {RAYLEIGH_DISPERSION!r})"
            )
        return Rayleigh(scale=mean / math.sqrt(math.pi / 2.0))
    s2 = math.log1p(ratio)
    return LogNormal(mu=math.log(mean) - 0.5 * s2, sigma=math.sqrt(s2))
