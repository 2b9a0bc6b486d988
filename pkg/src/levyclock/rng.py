"""Deterministic, stream-splittable sampling primitives.

Every Monte Carlo path owns one :class:`RngStream`, keyed by
``(root_seed, stream_id)``. The underlying generator is Philox, a
counter-based 64-bit generator: the pair is used directly as the Philox
key, so distinct stream ids give non-overlapping streams by construction
and no locking or jump-ahead bookkeeping is needed for path-level
parallelism. Any sequence of draws is a pure function of
``(root_seed, stream_id, call index)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.random import Generator, Philox

from .errors import ParameterError

__all__ = [
    "RngStream",
    "normal_sample",
    "gamma_sample",
    "poisson_sample",
    "noncentral_chisq_sample",
]

_U64_MAX = 2**64 - 1

# Smallest positive double; used to keep boosted small-shape gamma draws
# strictly positive when U^(1/shape) underflows.
_TINY = np.nextafter(0.0, 1.0)


@dataclass(frozen=True)
class RngStream:
    """One independent random stream, value-like and safe to move between
    workers. A single stream must not be used concurrently."""

    root_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("root_seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= v <= _U64_MAX:
                raise ParameterError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    @cached_property
    def generator(self) -> Generator:
        key = np.array([self.root_seed, self.stream_id], dtype=np.uint64)
        return Generator(Philox(key=key))

    def spawn(self, stream_id: int) -> "RngStream":
        """Sibling stream under the same root seed."""
        return RngStream(self.root_seed, stream_id)


def _check_finite(name, value):
    if not np.all(np.isfinite(value)):
        raise ParameterError(f"{name} must be finite, got {value!r}")


def normal_sample(stream: RngStream, mean, sd, size=None):
    """Draw from N(mean, sd^2); sd = 0 returns mean exactly."""
    mean = np.asarray(mean, dtype=float)
    sd = np.asarray(sd, dtype=float)
    _check_finite("mean", mean)
    _check_finite("sd", sd)
    if np.any(sd < 0):
        raise ParameterError(f"sd must be nonnegative, got {sd!r}")
    out = stream.generator.normal(mean, sd, size=size)
    if size is None and out.ndim == 0:
        return float(out)
    return out


def gamma_sample(stream: RngStream, shape, scale, size=None):
    """Draw from Gamma(shape, scale) with mean shape*scale.

    Shapes below 1 use the boost identity
    Gamma(a) = Gamma(a + 1) * U^(1/a), which stays strictly positive where
    rejection samplers collapse to exact zeros for tiny shapes (routine on
    fine grids, where shape = dt/nu << 1). An underflowed product is
    clamped to the smallest positive double.
    """
    shape = np.asarray(shape, dtype=float)
    scale = np.asarray(scale, dtype=float)
    _check_finite("shape", shape)
    _check_finite("scale", scale)
    if np.any(shape <= 0) or np.any(scale <= 0):
        raise ParameterError("shape and scale must be strictly positive")

    small = shape < 1.0
    boosted = np.where(small, shape + 1.0, shape)
    out = stream.generator.gamma(boosted, scale, size=size)
    if np.any(small):
        # One uniform per draw, consumed in a fixed order regardless of
        # which entries needed the boost.
        u = 1.0 - stream.generator.random(size=out.shape)
        factor = np.where(small, np.exp(np.log(u) / np.where(small, shape, 1.0)), 1.0)
        out = out * factor
        out = np.where(out > 0, out, _TINY)
    if size is None and out.ndim == 0:
        return float(out)
    return out


def poisson_sample(stream: RngStream, rate, size=None):
    """Poisson(rate) draw; rate = 0 returns 0.

    Delegates to the generator's sampler, which uses inversion below
    rate 10 and PTRS rejection above.
    """
    rate = np.asarray(rate, dtype=float)
    _check_finite("rate", rate)
    if np.any(rate < 0):
        raise ParameterError(f"rate must be nonnegative, got {rate!r}")
    out = stream.generator.poisson(rate, size=size)
    if size is None and np.ndim(out) == 0:
        return int(out)
    return out


def noncentral_chisq_sample(stream: RngStream, dof, noncentrality, size=None):
    """Draw from the noncentral chi-square law chi2(dof, noncentrality).

    Sampled as the Poisson mixture of gammas: J ~ Poisson(nc/2), then
    Gamma(dof/2 + J, 2). Mean is dof + noncentrality.
    """
    dof = np.asarray(dof, dtype=float)
    nonc = np.asarray(noncentrality, dtype=float)
    _check_finite("dof", dof)
    _check_finite("noncentrality", nonc)
    if np.any(dof <= 0):
        raise ParameterError(f"dof must be strictly positive, got {dof!r}")
    if np.any(nonc < 0):
        raise ParameterError(f"noncentrality must be nonnegative, got {nonc!r}")
    if size is None:
        bshape = np.broadcast_shapes(np.shape(dof), np.shape(nonc))
        size = bshape if bshape else None
    j = poisson_sample(stream, nonc / 2.0, size=size)
    return gamma_sample(stream, dof / 2.0 + np.asarray(j, dtype=float), 2.0)
